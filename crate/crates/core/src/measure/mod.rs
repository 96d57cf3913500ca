//! Finite Radon measures on `(a, b)`, structured BV functions and the
//! distributional fractional derivative of BV data.
//!
//! A [`RadonMeasure`] is an absolutely continuous density on a grid plus a
//! finite list of atoms. Cantor parts only exist through their stage-`m`
//! densities, which are absolutely continuous.

mod atoms;
mod bv;
mod checks;

pub use atoms::{detect_atoms, weak_frac_deriv, AtomCandidate, AtomDetection};
pub use bv::{bv_corpus, distributional_frac_deriv, BVFunction, CantorPart, Jump};
pub use checks::{
    check_bv_embedding, check_bv_sup, check_ftc_bv, check_measure_duality, check_weak_type_measure,
    embedding_constant, sweep_s_to_1, SweepRow,
};

use crate::error::{FracError, Result};
use crate::grid::{eval_pw_linear, Grid, GridFunction};
use crate::norms::{inner, lp_norm};
use serde::{Deserialize, Serialize};
use std::path::Path;

/// A point mass `w delta_t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub t: f64,
    pub w: f64,
}

/// `mu = rho L^1 + sum_i w_i delta_{t_i}`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadonMeasure {
    ac: GridFunction,
    atoms: Vec<Atom>,
    label: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct MeasureFile {
    #[serde(default)]
    ac_csv: Option<String>,
    #[serde(default)]
    atoms: Vec<Atom>,
    #[serde(default)]
    label: String,
}

impl RadonMeasure {
    /// Atoms must lie strictly inside `(a, b)` and be pairwise distinct; they
    /// are stored sorted by location.
    pub fn new(ac: GridFunction, atoms: Vec<Atom>, label: impl Into<String>) -> Result<Self> {
        let (a, b) = (ac.grid().a(), ac.grid().b());
        let mut atoms = atoms;
        for at in &atoms {
            if !at.t.is_finite() || !at.w.is_finite() {
                return Err(FracError::domain("atom with non-finite location or weight"));
            }
            if !(at.t > a && at.t < b) {
                return Err(FracError::domain(format!(
                    "atom at {} is not inside ({a}, {b})",
                    at.t
                )));
            }
        }
        atoms.sort_by(|p, q| p.t.total_cmp(&q.t));
        if atoms.windows(2).any(|w| w[0].t == w[1].t) {
            return Err(FracError::domain("atom locations must be distinct"));
        }
        Ok(RadonMeasure {
            ac,
            atoms,
            label: label.into(),
        })
    }

    pub fn zero(grid: Grid) -> Self {
        RadonMeasure {
            ac: GridFunction::zeros(grid),
            atoms: Vec::new(),
            label: "zero".into(),
        }
    }

    /// `w delta_t`.
    pub fn dirac(grid: Grid, t: f64, w: f64) -> Result<Self> {
        RadonMeasure::new(
            GridFunction::zeros(grid),
            vec![Atom { t, w }],
            format!("{w} delta_{t}"),
        )
    }

    /// `rho L^1`.
    pub fn absolutely_continuous(rho: GridFunction, label: impl Into<String>) -> Self {
        RadonMeasure {
            ac: rho,
            atoms: Vec::new(),
            label: label.into(),
        }
    }

    pub fn ac_density(&self) -> &GridFunction {
        &self.ac
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn grid(&self) -> &Grid {
        self.ac.grid()
    }

    /// `|mu|(I) = ||rho||_1 + sum |w_i|`.
    pub fn total_variation(&self) -> Result<f64> {
        Ok(lp_norm(&self.ac, 1.0)? + self.atoms.iter().map(|a| a.w.abs()).sum::<f64>())
    }

    /// Same atoms, density resampled on another grid of the same interval.
    pub fn resample(&self, grid: Grid) -> Result<RadonMeasure> {
        Ok(RadonMeasure {
            ac: self.ac.resample(grid)?,
            atoms: self.atoms.clone(),
            label: self.label.clone(),
        })
    }

    /// Parse the JSON (or JSON5) form `{ac_csv, atoms: [{t, w}], label}`.
    /// `ac_csv` is resolved against `base` and resampled onto `grid`; without
    /// it the density is zero.
    pub fn from_json(text: &str, grid: Grid, base: Option<&Path>) -> Result<RadonMeasure> {
        let file: MeasureFile =
            json5::from_str(text).map_err(|e| FracError::Parse(format!("measure: {e}")))?;
        let ac = match &file.ac_csv {
            Some(p) => {
                let path = match base {
                    Some(b) => b.join(p),
                    None => p.into(),
                };
                let f = std::fs::File::open(&path)?;
                let rho = GridFunction::read_csv(f)?;
                if rho.grid() == &grid {
                    rho
                } else {
                    rho.resample(grid)?
                }
            }
            None => GridFunction::zeros(grid),
        };
        RadonMeasure::new(ac, file.atoms, file.label)
    }

    /// JSON form, with the density stored at `ac_csv` (written by the caller).
    pub fn to_json(&self, ac_csv: Option<&str>) -> String {
        let file = MeasureFile {
            ac_csv: ac_csv.map(str::to_owned),
            atoms: self.atoms.clone(),
            label: self.label.clone(),
        };
        serde_json::to_string_pretty(&file).expect("measure serializes")
    }
}

/// `int phi dmu`: the density against `phi` plus `phi` interpolated at the
/// atoms.
///
/// ```
/// use fraccalc::measure::{pairing, RadonMeasure};
/// use fraccalc::{Grid, GridFunction};
/// let g = Grid::unit(8).unwrap();
/// let phi = GridFunction::from_fn(g, |x| x * x).unwrap();
/// let d = RadonMeasure::dirac(g, 0.5, 2.0).unwrap();
/// assert!((pairing(&d, &phi).unwrap() - 0.5).abs() < 1e-15);
/// ```
pub fn pairing(m: &RadonMeasure, phi: &GridFunction) -> Result<f64> {
    let mut total = inner(&m.ac, phi)?;
    for at in &m.atoms {
        total += at.w * eval_pw_linear(phi, at.t)?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_atoms_on_the_boundary_and_duplicates() {
        let g = Grid::unit(8).unwrap();
        assert!(RadonMeasure::dirac(g, 0.0, 1.0).is_err());
        let z = GridFunction::zeros(g);
        let dup = vec![Atom { t: 0.3, w: 1.0 }, Atom { t: 0.3, w: 2.0 }];
        assert!(RadonMeasure::new(z, dup, "").is_err());
    }

    #[test]
    fn total_variation_is_additive() {
        let g = Grid::unit(16).unwrap();
        let rho = GridFunction::constant(g, -2.0).unwrap();
        let m = RadonMeasure::new(
            rho,
            vec![Atom { t: 0.2, w: -1.0 }, Atom { t: 0.7, w: 0.5 }],
            "",
        )
        .unwrap();
        assert_eq!(m.total_variation().unwrap(), 2.0 + 1.0 + 0.5);
    }

    #[test]
    fn lebesgue_pairs_with_x_to_one_half() {
        let g = Grid::unit(10).unwrap();
        let m = RadonMeasure::absolutely_continuous(GridFunction::constant(g, 1.0).unwrap(), "leb");
        let phi = GridFunction::from_fn(g, |x| x).unwrap();
        assert!((pairing(&m, &phi).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(pairing(&RadonMeasure::zero(g), &phi).unwrap(), 0.0);
    }

    #[test]
    fn json5_round_trip() {
        let g = Grid::unit(4).unwrap();
        let m = RadonMeasure::from_json("{atoms:[{t:0.5,w:1}], label:'d'}", g, None).unwrap();
        assert_eq!(m.atoms(), &[Atom { t: 0.5, w: 1.0 }]);
        let back = RadonMeasure::from_json(&m.to_json(None), g, None).unwrap();
        assert_eq!(back, m);
    }
}
