use super::{Atom, RadonMeasure};
use crate::corpus::{cantor_breakpoints, cantor_function};
use crate::error::{FracError, Result};
use crate::grid::{Grid, GridFunction, Interval, NodeFlag, PowerTerm, Side};
use crate::integral::frac_int_measure;
use crate::norms::lp_norm;
use crate::order::FracOrder;
use crate::quadrature::{gl_panel, pairwise_sum};
use crate::special::recip_gamma;
use serde::{Deserialize, Serialize};

/// A jump of `size` at `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Jump {
    pub t: f64,
    pub size: f64,
}

/// `coef` times the stage-`stage` Cantor function of `(x - a) / (b - a)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CantorPart {
    pub stage: u32,
    pub coef: f64,
}

/// `u(x) = u(a+) + int_a^x rho + sum_{t_i < x} size_i + coef C_m(y)`.
///
/// At a jump location the value is the midpoint of the one-sided limits.
#[derive(Debug, Clone, PartialEq)]
pub struct BVFunction {
    u_a_plus: f64,
    jumps: Vec<Jump>,
    ac_slope: GridFunction,
    cantor: Option<CantorPart>,
    label: String,
    /// Primitive of the regular part of `ac_slope` at its nodes.
    primitive: Vec<f64>,
}

impl BVFunction {
    pub fn new(
        u_a_plus: f64,
        jumps: Vec<Jump>,
        ac_slope: GridFunction,
        cantor: Option<CantorPart>,
        label: impl Into<String>,
    ) -> Result<Self> {
        let (a, b) = (ac_slope.grid().a(), ac_slope.grid().b());
        if !u_a_plus.is_finite() {
            return Err(FracError::domain("u(a+) must be finite"));
        }
        let mut jumps = jumps;
        for j in &jumps {
            if !(j.t > a && j.t < b) || !j.size.is_finite() {
                return Err(FracError::domain(format!(
                    "jump at {} is not inside ({a}, {b})",
                    j.t
                )));
            }
        }
        jumps.sort_by(|p, q| p.t.total_cmp(&q.t));
        if jumps.windows(2).any(|w| w[0].t == w[1].t) {
            return Err(FracError::domain("jump locations must be distinct"));
        }
        if let Some(c) = cantor {
            if c.stage > 14 || !c.coef.is_finite() {
                return Err(FracError::domain(
                    "Cantor stage must be at most 14 with a finite coefficient",
                ));
            }
        }
        let h = ac_slope.grid().h();
        let r = ac_slope.regular();
        let mut primitive = vec![0.0; r.len()];
        for i in 1..r.len() {
            primitive[i] = primitive[i - 1] + 0.5 * h * (r[i - 1] + r[i]);
        }
        Ok(BVFunction {
            u_a_plus,
            jumps,
            ac_slope,
            cantor,
            label: label.into(),
            primitive,
        })
    }

    pub fn constant(grid: Grid, c: f64) -> Result<Self> {
        BVFunction::new(
            c,
            Vec::new(),
            GridFunction::zeros(grid),
            None,
            format!("constant:{c}"),
        )
    }

    /// `size` times the indicator of `(t, b)`.
    pub fn jump(grid: Grid, t: f64, size: f64) -> Result<Self> {
        BVFunction::new(
            0.0,
            vec![Jump { t, size }],
            GridFunction::zeros(grid),
            None,
            format!("jump:{t}"),
        )
    }

    /// `slope (x - a)`.
    pub fn linear(grid: Grid, slope: f64) -> Result<Self> {
        BVFunction::new(
            0.0,
            Vec::new(),
            GridFunction::constant(grid, slope)?,
            None,
            "linear",
        )
    }

    pub fn cantor(grid: Grid, stage: u32, coef: f64) -> Result<Self> {
        let part = Some(CantorPart { stage, coef });
        BVFunction::new(
            0.0,
            Vec::new(),
            GridFunction::zeros(grid),
            part,
            format!("cantor:{stage}"),
        )
    }

    /// `zero`, `constant:c`, `jump:t[:size]`, `linear[:slope]`,
    /// `cantor:m[:coef]`, or `bv:k` for the `k`-th member of [`bv_corpus`].
    pub fn parse(spec: &str, grid: Grid) -> Result<Self> {
        let mut parts = spec.trim().split(':');
        let name = parts.next().unwrap_or("").to_ascii_lowercase();
        let p = parts
            .map(|x| {
                x.trim()
                    .parse::<f64>()
                    .map_err(|e| FracError::Parse(format!("'{spec}': {e}")))
            })
            .collect::<Result<Vec<f64>>>()?;
        let arg = |k: usize, default: Option<f64>| -> Result<f64> {
            p.get(k)
                .copied()
                .or(default)
                .ok_or_else(|| FracError::Parse(format!("'{spec}': missing parameter")))
        };
        let (a, len) = (grid.a(), grid.interval().length());
        match name.as_str() {
            "zero" => BVFunction::constant(grid, 0.0),
            "constant" => BVFunction::constant(grid, arg(0, None)?),
            "jump" => BVFunction::jump(grid, arg(0, Some(a + 0.5 * len))?, arg(1, Some(1.0))?),
            "linear" => BVFunction::linear(grid, arg(0, Some(1.0))?),
            "cantor" => BVFunction::cantor(grid, arg(0, Some(6.0))? as u32, arg(1, Some(1.0))?),
            "bv" => {
                let k = arg(0, None)? as usize;
                bv_corpus(grid)?
                    .into_iter()
                    .nth(k)
                    .ok_or_else(|| FracError::Parse(format!("no BV corpus member {k}")))
            }
            _ => Err(FracError::Parse(format!("unknown BV datum '{spec}'"))),
        }
    }

    pub fn interval(&self) -> Interval {
        self.ac_slope.grid().interval()
    }

    pub fn grid(&self) -> &Grid {
        self.ac_slope.grid()
    }

    pub fn u_a_plus(&self) -> f64 {
        self.u_a_plus
    }

    pub fn jumps(&self) -> &[Jump] {
        &self.jumps
    }

    pub fn ac_slope(&self) -> &GridFunction {
        &self.ac_slope
    }

    pub fn cantor_part(&self) -> Option<CantorPart> {
        self.cantor
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Same datum with the slope density resampled on `grid`.
    pub fn on_grid(&self, grid: Grid) -> Result<BVFunction> {
        if &grid == self.grid() {
            return Ok(self.clone());
        }
        BVFunction::new(
            self.u_a_plus,
            self.jumps.clone(),
            self.ac_slope.resample(grid)?,
            self.cantor,
            self.label.clone(),
        )
    }

    fn ac_primitive(&self, x: f64) -> f64 {
        let g = self.grid();
        let a = g.a();
        let r = self.ac_slope.regular();
        let (i, theta) = g.locate(x);
        let d = theta * g.h();
        let cell = r[i] * d + (r[i + 1] - r[i]) * d * theta * 0.5;
        let terms: f64 = self.ac_slope.terms().iter().map(|t| t.integral(a, x)).sum();
        self.primitive[i] + cell + terms
    }

    fn cantor_value(&self, x: f64) -> f64 {
        match self.cantor {
            Some(c) => {
                let iv = self.interval();
                c.coef * cantor_function(c.stage, (x - iv.a()) / iv.length())
            }
            None => 0.0,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let mut v = self.u_a_plus + self.ac_primitive(x) + self.cantor_value(x);
        for j in &self.jumps {
            if j.t < x {
                v += j.size;
            } else if j.t == x {
                v += 0.5 * j.size;
            }
        }
        v
    }

    /// Nodal samples; nodes that sit on a jump hold the midpoint value and are
    /// flagged.
    pub fn sample(&self, grid: &Grid) -> Result<GridFunction> {
        if grid.interval() != self.interval() {
            return Err(FracError::GridMismatch);
        }
        let flags: Vec<(usize, NodeFlag)> = self
            .jumps
            .iter()
            .filter_map(|j| grid.node_at(j.t).map(|k| (k, NodeFlag::Discontinuity)))
            .collect();
        let values = grid
            .nodes()
            .into_iter()
            .enumerate()
            .map(|(k, x)| match flags.iter().find(|f| f.0 == k) {
                Some(_) => {
                    let t = self
                        .jumps
                        .iter()
                        .find(|j| grid.node_at(j.t) == Some(k))
                        .map(|j| j.t)
                        .unwrap_or(x);
                    self.eval(t)
                }
                None => self.eval(x),
            })
            .collect();
        Ok(GridFunction::from_values(*grid, values)?.with_flags(flags))
    }

    /// Stage-`m` Cantor density averaged over the dual cells of `grid`.
    fn cantor_density(&self, grid: &Grid) -> Vec<f64> {
        let Some(c) = self.cantor else {
            return vec![0.0; grid.len()];
        };
        let half = 0.5 * grid.h();
        (0..grid.len())
            .map(|j| {
                let x = grid.node(j);
                let lo = (x - half).max(grid.a());
                let hi = (x + half).min(grid.b());
                (self.cantor_value(hi) - self.cantor_value(lo)) / (hi - lo)
            })
            .map(|v| if c.coef == 0.0 { 0.0 } else { v })
            .collect()
    }

    /// `Du`: the slope density (plus the Cantor density) and one atom per
    /// jump.
    pub fn derivative_measure(&self) -> Result<RadonMeasure> {
        let grid = *self.grid();
        let cd = self.cantor_density(&grid);
        let regular: Vec<f64> = self
            .ac_slope
            .regular()
            .iter()
            .zip(&cd)
            .map(|(r, c)| r + c)
            .collect();
        let ac = GridFunction::from_parts(grid, regular, self.ac_slope.terms().to_vec())?;
        let atoms = self
            .jumps
            .iter()
            .map(|j| Atom { t: j.t, w: j.size })
            .collect();
        let mut label = format!("D[{}]", self.label);
        if let Some(c) = self.cantor {
            label.push_str(&format!(" (Cantor stage {})", c.stage));
        }
        RadonMeasure::new(ac, atoms, label)
    }

    /// `|Du|(I)`, additive over the three parts.
    pub fn total_variation(&self) -> Result<f64> {
        let jumps: f64 = self.jumps.iter().map(|j| j.size.abs()).sum();
        let cantor = self.cantor.map_or(0.0, |c| c.coef.abs());
        Ok(lp_norm(&self.ac_slope, 1.0)? + jumps + cantor)
    }

    /// `int |u|`, by Gauss-Legendre on panels cut at every node, jump and
    /// Cantor breakpoint.
    pub fn l1_norm(&self) -> f64 {
        let iv = self.interval();
        let mut cuts = self.grid().nodes();
        cuts.extend(self.jumps.iter().map(|j| j.t));
        if let Some(c) = self.cantor {
            cuts.extend(
                cantor_breakpoints(c.stage)
                    .into_iter()
                    .map(|y| iv.a() + y * iv.length()),
            );
        }
        let fine = 1024;
        cuts.extend((0..=fine).map(|k| iv.a() + iv.length() * k as f64 / fine as f64));
        cuts.retain(|x| iv.contains(*x));
        cuts.sort_by(|x, y| x.total_cmp(y));
        cuts.dedup_by(|x, y| (*x - *y).abs() <= 1e-14 * iv.length());
        let parts: Vec<f64> = cuts
            .windows(2)
            .map(|w| {
                let (p, q) = (w[0], w[1]);
                // evaluate strictly inside so jump conventions never matter
                gl_panel(&|x: f64| self.eval(x.clamp(p, q)).abs(), p, q)
            })
            .collect();
        pairwise_sum(&parts)
    }

    /// `||u||_BV = ||u||_1 + |Du|(I)`.
    pub fn bv_norm(&self) -> Result<f64> {
        Ok(self.l1_norm() + self.total_variation()?)
    }
}

/// `D^s u = I^(1-s)[Du] + u(a+) (x - a)^(-s) / Gamma(1 - s)` as an absolutely
/// continuous measure on the grid of `u`.
pub fn distributional_frac_deriv(u: &BVFunction, s: FracOrder) -> Result<RadonMeasure> {
    let sv = s.value();
    let du = u.derivative_measure()?;
    let body = frac_int_measure(&du, s.complement())?;
    let mut terms = body.terms().to_vec();
    if u.u_a_plus != 0.0 {
        terms.push(PowerTerm::new(
            u.grid().a(),
            u.u_a_plus * recip_gamma(1.0 - sv),
            -sv,
            Side::LeftAPlus,
        ));
    }
    let density = GridFunction::from_parts(*body.grid(), body.regular().to_vec(), terms)?
        .with_flags(body.flags().to_vec());
    Ok(RadonMeasure::absolutely_continuous(
        density,
        format!("D^{sv}[{}]", u.label),
    ))
}

/// Six BV data on the interval of `grid` (whose `n` should be a multiple of
/// `3^6` for the Cantor members): a unit jump, a line, the stage-6 Cantor
/// function, a constant, a two-jump staircase, and a mixture of all parts.
pub fn bv_corpus(grid: Grid) -> Result<Vec<BVFunction>> {
    let (a, len) = (grid.a(), grid.interval().length());
    let at = |y: f64| a + y * len;
    let cosine = GridFunction::from_fn(grid, |x| (x - a).cos())?;
    Ok(vec![
        BVFunction::jump(grid, at(0.5), 1.0)?,
        BVFunction::linear(grid, 1.0)?,
        BVFunction::cantor(grid, 6, 1.0)?,
        BVFunction::constant(grid, 1.0)?,
        BVFunction::new(
            1.0,
            vec![
                Jump {
                    t: at(1.0 / 3.0),
                    size: -2.0,
                },
                Jump {
                    t: at(2.0 / 3.0),
                    size: 0.5,
                },
            ],
            GridFunction::zeros(grid),
            None,
            "staircase",
        )?,
        BVFunction::new(
            0.25,
            vec![Jump {
                t: at(0.5),
                size: 1.0,
            }],
            cosine,
            Some(CantorPart {
                stage: 6,
                coef: -0.5,
            }),
            "mixture",
        )?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norms::inner;

    #[test]
    fn evaluation_sums_the_three_parts() {
        let g = Grid::unit(729).unwrap();
        let m = &bv_corpus(g).unwrap()[5];
        let x: f64 = 0.8;
        let expected = 0.25 + x.sin() + 1.0 - 0.5 * cantor_function(6, x);
        assert!((m.eval(x) - expected).abs() < 1e-6);
    }

    #[test]
    fn cantor_density_has_unit_mass_on_aligned_grids() {
        let g = Grid::unit(729).unwrap();
        let c = BVFunction::cantor(g, 6, 1.0).unwrap();
        let du = c.derivative_measure().unwrap();
        let mass = lp_norm(du.ac_density(), 1.0).unwrap();
        assert!((mass - 1.0).abs() < 1e-12);
        let peak = du
            .ac_density()
            .values()
            .iter()
            .fold(0.0f64, |m, v| m.max(*v));
        assert!((peak - 1.5f64.powi(6)).abs() < 1e-9);
    }

    #[test]
    fn jump_derivative_is_a_dirac() {
        let g = Grid::unit(64).unwrap();
        let u = BVFunction::jump(g, 0.3, 1.0).unwrap();
        let du = u.derivative_measure().unwrap();
        assert_eq!(du.atoms(), &[Atom { t: 0.3, w: 1.0 }]);
        assert_eq!(lp_norm(du.ac_density(), 1.0).unwrap(), 0.0);
    }

    #[test]
    fn representation_of_a_constant() {
        let g = Grid::unit(32).unwrap();
        let s = FracOrder::new(0.4).unwrap();
        let d = distributional_frac_deriv(&BVFunction::constant(g, 2.0).unwrap(), s).unwrap();
        let x: f64 = 0.7;
        let exact = 2.0 * x.powf(-0.4) * recip_gamma(0.6);
        assert!((d.ac_density().eval(x) - exact).abs() < 1e-13);
        // int_0^1 of the density is 2 / Gamma(1.6)
        let one = GridFunction::constant(g, 1.0).unwrap();
        let mass = inner(d.ac_density(), &one).unwrap();
        assert!((mass - 2.0 * recip_gamma(1.6)).abs() < 1e-10);
    }

    #[test]
    fn l1_norm_of_a_jump() {
        let g = Grid::unit(16).unwrap();
        let u = BVFunction::jump(g, 0.3, -2.0).unwrap();
        assert!((u.l1_norm() - 1.4).abs() < 1e-13);
        assert!((u.bv_norm().unwrap() - 3.4).abs() < 1e-13);
    }
}
