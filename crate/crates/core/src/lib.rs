//! Riemann-Liouville fractional calculus on a bounded interval.
//!
//! Fractional integrals and derivatives of grid functions, BV data and
//! finite Radon measures, the norms used to state embeddings between the
//! resulting spaces, and a verification harness that checks identities and
//! inequalities on refinement ladders.
//!
//! ```
//! use fraccalc::{frac_deriv, frac_int, DerivKind, FracOrder, Grid, GridFunction, Side};
//! let g = Grid::unit(256).unwrap();
//! let u = GridFunction::from_fn(g, |x| x).unwrap();
//! let s = FracOrder::new(0.5).unwrap();
//! let back = frac_deriv(&frac_int(&u, s, Side::LeftAPlus).unwrap(), s, DerivKind::RiemannLiouville, Side::LeftAPlus).unwrap();
//! assert!((back.values()[128] - 0.5).abs() < 1e-3);
//! ```

// NaN-rejecting checks are written as `!(x >= y)` on purpose
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod campaign;
pub mod cli;
pub mod corpus;
pub mod derivative;
pub mod error;
pub mod grid;
pub mod inequalities;
pub mod integral;
pub mod ladder;
pub mod measure;
pub mod norms;
pub mod order;
pub mod probes;
pub mod quadrature;
pub mod report;
pub mod special;

pub use corpus::{sample, AnalyticFunction, FnTag};
pub use derivative::{frac_deriv, DerivKind};
pub use error::{FracError, Result};
pub use grid::{eval_pw_linear, Grid, GridFunction, Interval, NodeFlag, Side};
pub use integral::{frac_int, frac_int_measure, frac_int_oracle};
pub use ladder::Ladder;
pub use measure::{BVFunction, RadonMeasure};
pub use order::{FracOrder, HigherOrder};
pub use report::{Verdict, VerificationReport};
pub use special::{beta_fn, gamma_fn};
