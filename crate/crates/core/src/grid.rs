//! Intervals, uniform grids and grid functions.
//!
//! A [`GridFunction`] is a piecewise-linear interpolant through nodal values
//! (the *regular* part) plus an optional list of exact truncated power terms
//! `coef * (x - t)_+^e`. The terms let operators act on the classic singular
//! data (critical powers, atoms) through the power rule instead of through a
//! quadrature that cannot resolve them. `values()` always holds the full nodal
//! samples, so code that only wants numbers never needs to know about terms.

use crate::error::{FracError, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::io::{Read, Write};
use std::str::FromStr;

/// The open interval `(a, b)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    a: f64,
    b: f64,
}

impl Interval {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !a.is_finite() || !b.is_finite() || !(a < b) {
            return Err(FracError::domain(format!("invalid interval ({a}, {b})")));
        }
        Ok(Interval { a, b })
    }

    pub fn unit() -> Self {
        Interval { a: 0.0, b: 1.0 }
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn length(&self) -> f64 {
        self.b - self.a
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.a && x <= self.b
    }

    /// The reflection `Q(x) = a + b - x`.
    pub fn reflect(&self, x: f64) -> f64 {
        self.a + self.b - x
    }
}

/// Which endpoint a Riemann-Liouville operator is anchored at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    LeftAPlus,
    RightBMinus,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::LeftAPlus => Side::RightBMinus,
            Side::RightBMinus => Side::LeftAPlus,
        }
    }
}

impl FromStr for Side {
    type Err = FracError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "left" | "a+" | "left-a-plus" => Ok(Side::LeftAPlus),
            "right" | "b-" | "right-b-minus" => Ok(Side::RightBMinus),
            _ => Err(FracError::Parse(format!(
                "unknown side '{s}', expected left or right"
            ))),
        }
    }
}

/// Uniform grid with `n` cells, nodes `x_j = a + j (b - a) / n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    interval: Interval,
    n: usize,
}

impl Grid {
    pub fn new(interval: Interval, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(FracError::InvalidGrid(format!(
                "need at least 2 cells, got {n}"
            )));
        }
        Ok(Grid { interval, n })
    }

    pub fn unit(n: usize) -> Result<Self> {
        Grid::new(Interval::unit(), n)
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    pub fn a(&self) -> f64 {
        self.interval.a
    }

    pub fn b(&self) -> f64 {
        self.interval.b
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.n + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn h(&self) -> f64 {
        self.interval.length() / self.n as f64
    }

    pub fn node(&self, j: usize) -> f64 {
        if j >= self.n {
            return self.interval.b;
        }
        self.interval.a + self.interval.length() * (j as f64 / self.n as f64)
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..=self.n).map(|j| self.node(j)).collect()
    }

    /// Same grid with `factor` times as many cells.
    pub fn refine(&self, factor: usize) -> Result<Grid> {
        Grid::new(self.interval, self.n * factor)
    }

    /// Index of the node that coincides with `x` (up to `1e-9 h`).
    pub fn node_at(&self, x: f64) -> Option<usize> {
        let t = (x - self.a()) / self.h();
        let j = t.round();
        if j >= 0.0 && j <= self.n as f64 && (t - j).abs() <= 1e-9 {
            Some(j as usize)
        } else {
            None
        }
    }

    /// Cell index and local coordinate in `[0, 1]` of a point of `[a, b]`.
    pub fn locate(&self, x: f64) -> (usize, f64) {
        let t = (x - self.a()) / self.h();
        let i = (t.floor().max(0.0) as usize).min(self.n - 1);
        (i, t - i as f64)
    }

    /// Length of `[x_j - h/2, x_j + h/2]` intersected with `[a, b]`.
    pub fn dual_cell_len(&self, j: usize) -> f64 {
        if j == 0 || j == self.n {
            0.5 * self.h()
        } else {
            self.h()
        }
    }
}

/// How a node value was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NodeFlag {
    /// The function is unbounded at the node; the value is a cell average.
    Singular,
    /// The function jumps at the node; the value is a cell average.
    Discontinuity,
    /// An atom lies within `h/2` of the node.
    NearAtom,
    /// An atom sits on the node; its kernel term is skipped there.
    AtomAtNode,
}

impl NodeFlag {
    pub fn as_str(self) -> &'static str {
        match self {
            NodeFlag::Singular => "singular",
            NodeFlag::Discontinuity => "discontinuity",
            NodeFlag::NearAtom => "near-atom",
            NodeFlag::AtomAtNode => "atom-at-node",
        }
    }
}

impl FromStr for NodeFlag {
    type Err = FracError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "singular" => Ok(NodeFlag::Singular),
            "discontinuity" => Ok(NodeFlag::Discontinuity),
            "near-atom" => Ok(NodeFlag::NearAtom),
            "atom-at-node" => Ok(NodeFlag::AtomAtNode),
            _ => Err(FracError::Parse(format!("unknown flag '{s}'"))),
        }
    }
}

/// How singular nodes were sampled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EndpointPolicy {
    Exact,
    CellAveraged,
}

/// Node value of a power term whose anchor is a node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AnchorRule {
    /// Average over the half cell on the support side.
    CellAverage,
    /// Contribute nothing at the anchor node (used for atom kernels).
    Skip,
}

/// `coef * (x - anchor)_+^exponent` for [`Side::LeftAPlus`], or the mirror
/// `coef * (anchor - x)_+^exponent` for [`Side::RightBMinus`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerTerm {
    pub anchor: f64,
    pub coef: f64,
    pub exponent: f64,
    pub side: Side,
    pub rule: AnchorRule,
}

impl PowerTerm {
    pub fn new(anchor: f64, coef: f64, exponent: f64, side: Side) -> Self {
        PowerTerm {
            anchor,
            coef,
            exponent,
            side,
            rule: AnchorRule::CellAverage,
        }
    }

    /// Kernel of an atom of weight `coef` at `anchor`.
    pub fn atom_kernel(anchor: f64, coef: f64, exponent: f64) -> Self {
        PowerTerm {
            anchor,
            coef,
            exponent,
            side: Side::LeftAPlus,
            rule: AnchorRule::Skip,
        }
    }

    /// Signed distance into the support.
    pub fn dist(&self, x: f64) -> f64 {
        match self.side {
            Side::LeftAPlus => x - self.anchor,
            Side::RightBMinus => self.anchor - x,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let d = self.dist(x);
        if d > 0.0 {
            self.coef * d.powf(self.exponent)
        } else {
            0.0
        }
    }

    /// `int_lo^hi` of the term, in closed form.
    pub fn integral(&self, lo: f64, hi: f64) -> f64 {
        let e1 = self.exponent + 1.0;
        let prim = |x: f64| {
            let d = self.dist(x).max(0.0);
            self.coef * d.powf(e1) / e1
        };
        match self.side {
            Side::LeftAPlus => prim(hi) - prim(lo),
            Side::RightBMinus => prim(lo) - prim(hi),
        }
    }

    fn same_shape(&self, other: &PowerTerm) -> bool {
        self.anchor == other.anchor
            && self.exponent == other.exponent
            && self.side == other.side
            && self.rule == other.rule
    }

    pub fn is_singular(&self) -> bool {
        self.exponent < 0.0
    }

    /// Node value under the anchor rule.
    pub fn node_value(&self, grid: &Grid, j: usize) -> f64 {
        if grid.node_at(self.anchor) == Some(j) {
            return match self.rule {
                AnchorRule::Skip => 0.0,
                AnchorRule::CellAverage if self.exponent > 0.0 => 0.0,
                AnchorRule::CellAverage => {
                    let half = 0.5 * grid.h();
                    let e1 = self.exponent + 1.0;
                    self.coef * half.powf(e1) / e1 / grid.dual_cell_len(j)
                }
            };
        }
        self.eval(grid.node(j))
    }

    fn reflect(&self, interval: &Interval) -> PowerTerm {
        PowerTerm {
            anchor: interval.reflect(self.anchor),
            side: self.side.flip(),
            ..*self
        }
    }
}

/// Samples on a uniform grid, read as a piecewise-linear interpolant plus
/// exact power terms.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: Grid,
    regular: Vec<f64>,
    terms: Vec<PowerTerm>,
    values: Vec<f64>,
    extra_flags: Vec<(usize, NodeFlag)>,
    flags: Vec<(usize, NodeFlag)>,
}

fn check_finite(v: &[f64]) -> Result<()> {
    match v.iter().position(|x| !x.is_finite()) {
        Some(index) => Err(FracError::NonFinite { index }),
        None => Ok(()),
    }
}

fn merge_terms(terms: Vec<PowerTerm>) -> Vec<PowerTerm> {
    let mut out: Vec<PowerTerm> = Vec::with_capacity(terms.len());
    for t in terms {
        match out.iter_mut().find(|o| o.same_shape(&t)) {
            Some(o) => o.coef += t.coef,
            None => out.push(t),
        }
    }
    out.retain(|t| t.coef != 0.0);
    out
}

impl GridFunction {
    /// Plain nodal data.
    pub fn from_values(grid: Grid, values: Vec<f64>) -> Result<Self> {
        GridFunction::from_parts(grid, values, Vec::new())
    }

    /// Regular nodal part plus power terms.
    pub fn from_parts(grid: Grid, regular: Vec<f64>, terms: Vec<PowerTerm>) -> Result<Self> {
        if regular.len() != grid.len() {
            return Err(FracError::InvalidGrid(format!(
                "expected {} values, got {}",
                grid.len(),
                regular.len()
            )));
        }
        check_finite(&regular)?;
        for t in &terms {
            if !t.coef.is_finite() || !t.exponent.is_finite() || !t.anchor.is_finite() {
                return Err(FracError::domain("power term with non-finite parameters"));
            }
            if t.exponent <= -1.0 {
                return Err(FracError::domain(format!(
                    "power term exponent {} is not integrable",
                    t.exponent
                )));
            }
            if !grid.interval().contains(t.anchor) {
                return Err(FracError::domain(
                    "power term anchored outside the interval",
                ));
            }
        }
        let mut f = GridFunction {
            grid,
            regular,
            terms: merge_terms(terms),
            values: Vec::new(),
            extra_flags: Vec::new(),
            flags: Vec::new(),
        };
        f.refresh()?;
        Ok(f)
    }

    pub fn zeros(grid: Grid) -> Self {
        GridFunction::from_values(grid, vec![0.0; grid.len()]).expect("zeros are finite")
    }

    pub fn constant(grid: Grid, c: f64) -> Result<Self> {
        GridFunction::from_values(grid, vec![c; grid.len()])
    }

    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> f64) -> Result<Self> {
        GridFunction::from_values(grid, grid.nodes().into_iter().map(f).collect())
    }

    /// Seeded values uniform in `[-1, 1]`.
    pub fn random(grid: Grid, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = (0..grid.len()).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        GridFunction::from_values(grid, v).expect("random values are finite")
    }

    /// Attach flags that are not implied by the terms.
    pub fn with_flags(mut self, flags: impl IntoIterator<Item = (usize, NodeFlag)>) -> Self {
        self.extra_flags.extend(flags);
        self.refresh().expect("flags do not change values");
        self
    }

    fn refresh(&mut self) -> Result<()> {
        let grid = self.grid;
        let mut values = self.regular.clone();
        for t in &self.terms {
            for (j, v) in values.iter_mut().enumerate() {
                *v += t.node_value(&grid, j);
            }
        }
        check_finite(&values)?;
        self.values = values;
        let mut flags = self.extra_flags.clone();
        flags.extend(self.implied_flags(&self.terms));
        flags.sort();
        flags.dedup();
        self.extra_flags.sort();
        self.extra_flags.dedup();
        self.flags = flags;
        Ok(())
    }

    fn implied_flags(&self, terms: &[PowerTerm]) -> Vec<(usize, NodeFlag)> {
        let g = &self.grid;
        let mut out = Vec::new();
        for t in terms {
            match (g.node_at(t.anchor), t.rule) {
                (Some(j), AnchorRule::Skip) => out.push((j, NodeFlag::AtomAtNode)),
                (Some(j), AnchorRule::CellAverage) if t.is_singular() => {
                    out.push((j, NodeFlag::Singular))
                }
                (None, AnchorRule::Skip) => {
                    let (i, theta) = g.locate(t.anchor);
                    let j = if theta < 0.5 { i } else { i + 1 };
                    if (g.node(j) - t.anchor).abs() < 0.5 * g.h() {
                        out.push((j, NodeFlag::NearAtom));
                    }
                }
                _ => {}
            }
        }
        out
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// Full nodal samples.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Nodal values of the piecewise-linear part alone.
    pub fn regular(&self) -> &[f64] {
        &self.regular
    }

    pub fn terms(&self) -> &[PowerTerm] {
        &self.terms
    }

    pub fn flags(&self) -> &[(usize, NodeFlag)] {
        &self.flags
    }

    pub fn has_flag(&self, j: usize, flag: NodeFlag) -> bool {
        self.flags.contains(&(j, flag))
    }

    pub fn endpoint_policy(&self) -> EndpointPolicy {
        if self
            .flags
            .iter()
            .any(|(_, f)| matches!(f, NodeFlag::Singular | NodeFlag::Discontinuity))
        {
            EndpointPolicy::CellAveraged
        } else {
            EndpointPolicy::Exact
        }
    }

    pub fn is_plain(&self) -> bool {
        self.terms.is_empty()
    }

    /// Value of the full representation at `x` (interpolated regular part plus
    /// exact terms). Unlike [`eval_pw_linear`] this is not a nodal interpolant.
    pub fn eval(&self, x: f64) -> f64 {
        interp(&self.grid, &self.regular, x) + self.terms.iter().map(|t| t.eval(x)).sum::<f64>()
    }

    /// Per-cell slopes of the regular part.
    pub fn slopes(&self) -> Vec<f64> {
        let h = self.grid.h();
        self.regular.windows(2).map(|w| (w[1] - w[0]) / h).collect()
    }

    /// Forget the terms and keep only the nodal samples.
    pub fn to_plain(&self) -> GridFunction {
        let mut f =
            GridFunction::from_values(self.grid, self.values.clone()).expect("values are finite");
        f.extra_flags = self.flags.clone();
        f.flags = self.flags.clone();
        f
    }

    /// Fold every term rejected by `keep` into the regular part.
    pub fn fold_terms(&self, keep: impl Fn(&PowerTerm) -> bool) -> GridFunction {
        let (kept, folded): (Vec<PowerTerm>, Vec<PowerTerm>) =
            self.terms.iter().partition(|t| keep(t));
        if folded.is_empty() {
            return self.clone();
        }
        let mut regular = self.regular.clone();
        for t in &folded {
            for (j, r) in regular.iter_mut().enumerate() {
                *r += t.node_value(&self.grid, j);
            }
        }
        let mut extra = self.extra_flags.clone();
        extra.extend(self.implied_flags(&folded));
        let mut f = GridFunction {
            grid: self.grid,
            regular,
            terms: kept,
            values: Vec::new(),
            extra_flags: extra,
            flags: Vec::new(),
        };
        f.refresh().expect("folding keeps values finite");
        f
    }

    fn check_grid(&self, other: &GridFunction) -> Result<()> {
        if self.grid != other.grid {
            return Err(FracError::GridMismatch);
        }
        Ok(())
    }

    pub fn scale(&self, alpha: f64) -> GridFunction {
        let regular = self.regular.iter().map(|r| alpha * r).collect();
        let terms = self
            .terms
            .iter()
            .map(|t| PowerTerm {
                coef: alpha * t.coef,
                ..*t
            })
            .collect();
        GridFunction::from_parts(self.grid, regular, terms)
            .expect("scaling keeps values finite")
            .with_flags(self.extra_flags.clone())
    }

    /// `self + alpha * other`.
    pub fn axpy(&self, alpha: f64, other: &GridFunction) -> Result<GridFunction> {
        self.check_grid(other)?;
        let regular = self
            .regular
            .iter()
            .zip(&other.regular)
            .map(|(x, y)| x + alpha * y)
            .collect();
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().map(|t| PowerTerm {
            coef: alpha * t.coef,
            ..*t
        }));
        let mut extra = self.extra_flags.clone();
        extra.extend(other.extra_flags.iter().copied());
        Ok(GridFunction::from_parts(self.grid, regular, terms)?.with_flags(extra))
    }

    pub fn add(&self, other: &GridFunction) -> Result<GridFunction> {
        self.axpy(1.0, other)
    }

    pub fn sub(&self, other: &GridFunction) -> Result<GridFunction> {
        self.axpy(-1.0, other)
    }

    /// `u o Q` with `Q(x) = a + b - x`: values reversed, terms mirrored.
    pub fn reflect(&self) -> GridFunction {
        let n = self.grid.n();
        let interval = self.grid.interval();
        let regular = self.regular.iter().rev().copied().collect();
        let terms = self.terms.iter().map(|t| t.reflect(&interval)).collect();
        let extra: Vec<_> = self.extra_flags.iter().map(|&(j, f)| (n - j, f)).collect();
        GridFunction::from_parts(self.grid, regular, terms)
            .expect("reflection keeps values finite")
            .with_flags(extra)
    }

    /// Nodal values resampled on another grid of the same interval by
    /// evaluating the full representation (cell averages at singular nodes).
    pub fn resample(&self, grid: Grid) -> Result<GridFunction> {
        if grid.interval() != self.grid.interval() {
            return Err(FracError::GridMismatch);
        }
        let regular = grid
            .nodes()
            .iter()
            .map(|&x| interp(&self.grid, &self.regular, x))
            .collect();
        GridFunction::from_parts(grid, regular, self.terms.clone())
    }

    /// Write `x,value` rows (plus a `flags` column when any node is flagged).
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(w);
        let flagged = !self.flags.is_empty();
        if flagged {
            wr.write_record(["x", "value", "flags"])?;
        } else {
            wr.write_record(["x", "value"])?;
        }
        for (j, v) in self.values.iter().enumerate() {
            let x = format!("{:.16e}", self.grid.node(j));
            let v = format!("{:.16e}", v);
            if flagged {
                let f: Vec<&str> = self
                    .flags
                    .iter()
                    .filter(|(k, _)| *k == j)
                    .map(|(_, f)| f.as_str())
                    .collect();
                wr.write_record([x, v, f.join(";")])?;
            } else {
                wr.write_record([x, v])?;
            }
        }
        wr.flush()?;
        Ok(())
    }

    /// Read a CSV written by [`GridFunction::write_csv`]. The grid is inferred
    /// from the first and last abscissae and the row count.
    pub fn read_csv<R: Read>(r: R) -> Result<GridFunction> {
        let mut rd = csv::Reader::from_reader(r);
        let headers = rd.headers()?.clone();
        if headers.get(0) != Some("x") || headers.get(1) != Some("value") {
            return Err(FracError::Parse("expected header x,value".into()));
        }
        let mut xs = Vec::new();
        let mut vs = Vec::new();
        let mut flags = Vec::new();
        for (j, rec) in rd.records().enumerate() {
            let rec = rec?;
            let parse = |k: usize| -> Result<f64> {
                rec.get(k)
                    .ok_or_else(|| FracError::Parse(format!("row {j}: missing column")))?
                    .trim()
                    .parse::<f64>()
                    .map_err(|e| FracError::Parse(format!("row {j}: {e}")))
            };
            xs.push(parse(0)?);
            vs.push(parse(1)?);
            if let Some(f) = rec.get(2) {
                for name in f.split(';').filter(|s| !s.is_empty()) {
                    flags.push((j, name.parse::<NodeFlag>()?));
                }
            }
        }
        if xs.len() < 3 {
            return Err(FracError::Parse("need at least 3 rows".into()));
        }
        let grid = Grid::new(Interval::new(xs[0], xs[xs.len() - 1])?, xs.len() - 1)?;
        let tol = 1e-9 * grid.h();
        if xs
            .iter()
            .enumerate()
            .any(|(j, &x)| (x - grid.node(j)).abs() > tol)
        {
            return Err(FracError::InvalidGrid("abscissae are not uniform".into()));
        }
        Ok(GridFunction::from_values(grid, vs)?.with_flags(flags))
    }
}

fn interp(grid: &Grid, v: &[f64], x: f64) -> f64 {
    if let Some(j) = grid.node_at(x) {
        return v[j];
    }
    let (i, theta) = grid.locate(x);
    v[i] + theta * (v[i + 1] - v[i])
}

/// Value of the piecewise-linear interpolant of the nodal samples at `x`.
///
/// ```
/// use fraccalc::grid::{eval_pw_linear, Grid, GridFunction};
/// let g = Grid::unit(4).unwrap();
/// let u = GridFunction::from_fn(g, |x| 2.0 * x + 1.0).unwrap();
/// assert!((eval_pw_linear(&u, 0.3).unwrap() - 1.6).abs() < 1e-15);
/// ```
pub fn eval_pw_linear(u: &GridFunction, x: f64) -> Result<f64> {
    if !u.grid.interval().contains(x) {
        return Err(FracError::domain(format!("x = {x} outside the interval")));
    }
    Ok(interp(&u.grid, &u.values, x))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nodes_hit_both_ends() {
        let g = Grid::new(Interval::new(0.1, 0.3).unwrap(), 7).unwrap();
        assert_eq!(g.node(0), 0.1);
        assert_eq!(g.node(7), 0.3);
        assert!(g.nodes().windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Interval::new(1.0, 1.0).is_err());
        assert!(Grid::unit(1).is_err());
        let g = Grid::unit(2).unwrap();
        assert!(GridFunction::from_values(g, vec![0.0, f64::NAN, 1.0]).is_err());
        assert!(GridFunction::from_values(g, vec![0.0, 1.0]).is_err());
    }

    #[test]
    fn singular_term_is_cell_averaged() {
        let g = Grid::unit(4).unwrap();
        let t = PowerTerm::new(0.0, 1.0, -0.5, Side::LeftAPlus);
        let u = GridFunction::from_parts(g, vec![0.0; 5], vec![t]).unwrap();
        // (2/h) int_0^{h/2} t^{-1/2} dt = (2/h) * 2 sqrt(h/2)
        let h: f64 = 0.25;
        assert!((u.values()[0] - 4.0 * (h / 2.0).sqrt() / h).abs() < 1e-14);
        assert!(u.has_flag(0, NodeFlag::Singular));
        assert_eq!(u.endpoint_policy(), EndpointPolicy::CellAveraged);
        assert_eq!(u.values()[2], 0.5f64.powf(-0.5));
    }

    #[test]
    fn atom_flags() {
        let g = Grid::unit(4).unwrap();
        let at = PowerTerm::atom_kernel(0.5, 1.0, -0.5);
        let near = PowerTerm::atom_kernel(0.3, 1.0, -0.5);
        let u = GridFunction::from_parts(g, vec![0.0; 5], vec![at, near]).unwrap();
        assert!(u.has_flag(2, NodeFlag::AtomAtNode));
        assert!(u.has_flag(1, NodeFlag::NearAtom));
    }

    #[test]
    fn terms_merge_and_cancel() {
        let g = Grid::unit(4).unwrap();
        let t = PowerTerm::new(0.0, 1.0, 0.5, Side::LeftAPlus);
        let u = GridFunction::from_parts(g, vec![1.0; 5], vec![t]).unwrap();
        let z = u.sub(&u).unwrap();
        assert!(z.terms().is_empty());
        assert!(z.values().iter().all(|&v| v == 0.0));
        assert_eq!(u.add(&u).unwrap().terms().len(), 1);
    }

    #[test]
    fn reflect_twice_is_identity() {
        let g = Grid::new(Interval::new(-1.0, 2.0).unwrap(), 6).unwrap();
        let t = PowerTerm::new(-1.0, 2.0, -0.3, Side::LeftAPlus);
        let u = GridFunction::from_parts(g, (0..7).map(|j| j as f64).collect(), vec![t]).unwrap();
        let r = u.reflect();
        assert_eq!(r.terms()[0].side, Side::RightBMinus);
        assert_eq!(r.terms()[0].anchor, 2.0);
        assert_eq!(r.values()[6], u.values()[0]);
        assert_eq!(r.reflect(), u);
    }

    #[test]
    fn csv_round_trip() {
        let g = Grid::unit(8).unwrap();
        let t = PowerTerm::new(0.0, 1.0, -0.5, Side::LeftAPlus);
        let u = GridFunction::from_parts(g, vec![0.25; 9], vec![t]).unwrap();
        let mut buf = Vec::new();
        u.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("x,value,flags\n"));
        let back = GridFunction::read_csv(&buf[..]).unwrap();
        assert_eq!(back.values(), u.values());
        assert!(back.has_flag(0, NodeFlag::Singular));
    }

    #[test]
    fn interpolation() {
        let g = Grid::unit(4).unwrap();
        let u = GridFunction::from_values(g, vec![0.0, 1.0, 0.0, 1.0, 0.0]).unwrap();
        assert_eq!(eval_pw_linear(&u, 0.25).unwrap(), 1.0);
        assert!((eval_pw_linear(&u, 0.125).unwrap() - 0.5).abs() < 1e-15);
        assert!(eval_pw_linear(&u, 1.5).is_err());
    }
}
