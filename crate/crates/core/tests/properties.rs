//! Property tests for the operator and norm invariants.

use fraccalc::corpus::power_rule;
use fraccalc::integral::frac_int_measure;
use fraccalc::measure::Atom;
use fraccalc::norms::{
    gagliardo_seminorm, holder_seminorm, lp_norm, rl_sobolev_norm, weak_lp_quasinorm,
};
use fraccalc::report::fit_rate;
use fraccalc::special::ln_gamma;
use fraccalc::{
    beta_fn, eval_pw_linear, frac_deriv, frac_int, frac_int_oracle, gamma_fn, sample,
    AnalyticFunction, DerivKind, FracOrder, Grid, GridFunction, Interval, Ladder, RadonMeasure,
    Side,
};
use proptest::prelude::*;

fn order() -> impl Strategy<Value = FracOrder> {
    (0.05f64..0.95).prop_map(|s| FracOrder::new(s).unwrap())
}

fn data(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, n + 1)
}

fn side() -> impl Strategy<Value = Side> {
    prop_oneof![Just(Side::LeftAPlus), Just(Side::RightBMinus)]
}

fn gf(g: Grid, v: Vec<f64>) -> GridFunction {
    GridFunction::from_values(g, v).unwrap()
}

fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    let scale = a.iter().chain(b).fold(1.0f64, |m, x| m.max(x.abs()));
    a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol * scale)
}

const N: usize = 48;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn integral_is_linear(u in data(N), v in data(N), al in -3.0f64..3.0, s in order(), sd in side()) {
        let g = Grid::unit(N).unwrap();
        let (u, v) = (gf(g, u), gf(g, v));
        let lhs = frac_int(&u.scale(al).add(&v).unwrap(), s, sd).unwrap();
        let rhs = frac_int(&u, s, sd).unwrap().scale(al).add(&frac_int(&v, s, sd).unwrap()).unwrap();
        prop_assert!(close(lhs.values(), rhs.values(), 1e-12));
    }

    #[test]
    fn integral_preserves_positivity(u in prop::collection::vec(0.0f64..1.0, N + 1), s in order(), sd in side()) {
        let v = frac_int(&gf(Grid::unit(N).unwrap(), u), s, sd).unwrap();
        prop_assert!(v.values().iter().all(|&x| x >= -1e-15));
    }

    #[test]
    fn integral_obeys_l1_and_linf_bounds(
        u in data(N), s in order(), sd in side(), a in -2.0f64..2.0, len in 0.2f64..3.0,
    ) {
        let g = Grid::new(Interval::new(a, a + len).unwrap(), N).unwrap();
        let u = gf(g, u);
        let v = frac_int(&u, s, sd).unwrap();
        let c = len.powf(s.value()) / gamma_fn(s.value() + 1.0).unwrap();
        for p in [1.0, f64::INFINITY] {
            prop_assert!(lp_norm(&v, p).unwrap() <= c * lp_norm(&u, p).unwrap() * (1.0 + 1e-8) + 1e-14);
        }
    }

    #[test]
    fn reflection_swaps_sides(u in data(N), s in order()) {
        let u = gf(Grid::unit(N).unwrap(), u);
        let left = frac_int(&u, s, Side::LeftAPlus).unwrap().reflect();
        let right = frac_int(&u.reflect(), s, Side::RightBMinus).unwrap();
        prop_assert!(close(left.values(), right.values(), 1e-12));
    }

    #[test]
    fn caputo_kills_constants(c in -5.0f64..5.0, s in order(), sd in side()) {
        let u = GridFunction::constant(Grid::unit(N).unwrap(), c).unwrap();
        let d = frac_deriv(&u, s, DerivKind::Caputo, sd).unwrap();
        prop_assert!(d.values().iter().all(|&x| x.abs() <= 1e-12 * c.abs().max(1.0)));
    }

    #[test]
    fn norms_are_homogeneous(u in data(N), al in -4.0f64..4.0, s in order()) {
        let u = gf(Grid::unit(N).unwrap(), u);
        let ua = u.scale(al);
        for p in [1.0, 2.0, 3.5, f64::INFINITY] {
            let (l, r) = (lp_norm(&ua, p).unwrap(), al.abs() * lp_norm(&u, p).unwrap());
            prop_assert!((l - r).abs() <= 1e-12 * r.max(1.0));
        }
        let (l, r) = (gagliardo_seminorm(&ua, s, 1.0).unwrap(), al.abs() * gagliardo_seminorm(&u, s, 1.0).unwrap());
        prop_assert!((l - r).abs() <= 1e-10 * r.max(1.0));
        let (l, r) = (weak_lp_quasinorm(&ua, 2.0).unwrap(), al.abs() * weak_lp_quasinorm(&u, 2.0).unwrap());
        prop_assert!((l - r).abs() <= 1e-12 * r.max(1.0));
        let (l, r) = (holder_seminorm(&ua, 0.5).unwrap(), al.abs() * holder_seminorm(&u, 0.5).unwrap());
        prop_assert!((l - r).abs() <= 1e-12 * r.max(1.0));
        let (l, r) = (rl_sobolev_norm(&ua, s, 1.0).unwrap(), al.abs() * rl_sobolev_norm(&u, s, 1.0).unwrap());
        prop_assert!((l - r).abs() <= 1e-10 * r.max(1.0));
    }

    #[test]
    fn weak_lp_is_below_lp(u in data(N), s in order()) {
        let u = gf(Grid::unit(N).unwrap(), u);
        for p in [1.0, 2.0, 1.0 / (1.0 - s.value())] {
            prop_assert!(weak_lp_quasinorm(&u, p).unwrap() <= lp_norm(&u, p).unwrap() * (1.0 + 1e-12));
        }
    }

    #[test]
    fn derivative_kinds_relate_and_are_linear(u in data(N), v in data(N), al in -3.0f64..3.0, s in order(), sd in side()) {
        let g = Grid::unit(N).unwrap();
        let (u, v) = (gf(g, u), gf(g, v));
        let rl = frac_deriv(&u, s, DerivKind::RiemannLiouville, sd).unwrap();
        let cap = frac_deriv(&u, s, DerivKind::Caputo, sd).unwrap();
        // RL - Caputo is the boundary term at the anchoring end
        let (end, x0) = match sd {
            Side::LeftAPlus => (u.values()[0], 0.0),
            Side::RightBMinus => (u.values()[N], 1.0),
        };
        let c = end / gamma_fn(1.0 - s.value()).unwrap();
        for x in [0.1, 0.37, 0.5, 0.81] {
            let boundary = c * (x - x0 as f64).abs().powf(-s.value());
            prop_assert!((rl.eval(x) - cap.eval(x) - boundary).abs() <= 1e-10 * (1.0 + boundary.abs()));
        }
        for kind in [DerivKind::RiemannLiouville, DerivKind::Caputo, DerivKind::Marchaud] {
            let lhs = frac_deriv(&u.scale(al).add(&v).unwrap(), s, kind, sd).unwrap();
            let rhs = frac_deriv(&u, s, kind, sd).unwrap().scale(al).add(&frac_deriv(&v, s, kind, sd).unwrap()).unwrap();
            for x in [0.05, 0.5, 0.95] {
                prop_assert!((lhs.eval(x) - rhs.eval(x)).abs() <= 1e-10 * (1.0 + lhs.eval(x).abs()));
            }
        }
    }

    #[test]
    fn measure_variation_and_l1_bound(
        rho in data(N),
        atoms in prop::collection::vec((1usize..N, -2.0f64..2.0), 0..4),
        s in order(),
    ) {
        let g = Grid::unit(N).unwrap();
        let mut ts: Vec<(usize, f64)> = atoms;
        ts.sort_by_key(|a| a.0);
        ts.dedup_by_key(|a| a.0);
        // atoms at nodes and between nodes
        let atoms: Vec<Atom> = ts
            .iter()
            .enumerate()
            .map(|(i, &(j, w))| Atom { t: g.node(j) - if i % 2 == 0 { 0.0 } else { 0.3 * g.h() }, w })
            .collect();
        let rho = gf(g, rho);
        let tv_expected = lp_norm(&rho, 1.0).unwrap() + atoms.iter().map(|a| a.w.abs()).sum::<f64>();
        let m = RadonMeasure::new(rho, atoms, "random").unwrap();
        let tv = m.total_variation().unwrap();
        prop_assert!((tv - tv_expected).abs() <= 1e-12 * tv.max(1.0));
        let v = frac_int_measure(&m, s).unwrap();
        let c = 1.0 / gamma_fn(1.0 + s.value()).unwrap();
        prop_assert!(lp_norm(&v, 1.0).unwrap() <= c * tv + 1e-8);
    }

    #[test]
    fn interpolant_reproduces_affine_data(c0 in -5.0f64..5.0, c1 in -5.0f64..5.0, a in -3.0f64..3.0, n in 2usize..64, x in 0.0f64..1.0) {
        let g = Grid::new(Interval::new(a, a + 2.0).unwrap(), n).unwrap();
        let u = GridFunction::from_fn(g, |x| c0 + c1 * x).unwrap();
        let y = a + 2.0 * x;
        prop_assert!((eval_pw_linear(&u, y).unwrap() - (c0 + c1 * y)).abs() <= 1e-13 * (1.0 + (c0 + c1 * y).abs() + c1.abs() * a.abs()));
    }

    #[test]
    fn gagliardo_ignores_added_constants(u in data(N), c in -10.0f64..10.0, s in order(), p in 1.0f64..3.0) {
        let u = gf(Grid::unit(N).unwrap(), u);
        let shifted = GridFunction::from_values(*u.grid(), u.values().iter().map(|v| v + c).collect()).unwrap();
        let (a, b) = (gagliardo_seminorm(&u, s, p).unwrap(), gagliardo_seminorm(&shifted, s, p).unwrap());
        prop_assert!((a - b).abs() <= 1e-12 * a.max(1.0));
    }

    #[test]
    fn gagliardo_is_translation_invariant(u in data(24), shift in -5.0f64..5.0, s in order()) {
        let g0 = Grid::unit(24).unwrap();
        let g1 = Grid::new(Interval::new(shift, shift + 1.0).unwrap(), 24).unwrap();
        let a = gagliardo_seminorm(&gf(g0, u.clone()), s, 1.0).unwrap();
        let b = gagliardo_seminorm(&gf(g1, u), s, 1.0).unwrap();
        prop_assert!((a - b).abs() <= 1e-8 * a.max(1.0));
    }

    #[test]
    fn gamma_recurrence(x in 0.05f64..40.0) {
        let l = gamma_fn(x + 1.0).unwrap();
        let r = x * gamma_fn(x).unwrap();
        prop_assert!((l - r).abs() <= 1e-13 * l.abs());
        prop_assert!((ln_gamma(x + 1.0).unwrap() - x.ln() - ln_gamma(x).unwrap()).abs() <= 1e-12 * (1.0 + ln_gamma(x + 1.0).unwrap().abs()));
    }

    #[test]
    fn beta_reflection_identity(s in 0.1f64..0.9) {
        let r = beta_fn(s, 1.0 - s).unwrap() / (gamma_fn(s).unwrap() * gamma_fn(1.0 - s).unwrap());
        prop_assert!((r - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn beta_matches_gamma(p in 0.1f64..20.0, q in 0.1f64..20.0) {
        let b = beta_fn(p, q).unwrap();
        let g = gamma_fn(p).unwrap() * gamma_fn(q).unwrap() / gamma_fn(p + q).unwrap();
        prop_assert!((b - g).abs() <= 1e-12 * g);
        prop_assert!((b - beta_fn(q, p).unwrap()).abs() <= 1e-14 * b);
    }

    #[test]
    fn affine_data_is_reproduced(c0 in -2.0f64..2.0, c1 in -2.0f64..2.0, s in order()) {
        let g = Grid::unit(N).unwrap();
        let u = GridFunction::from_fn(g, |x| c0 + c1 * x).unwrap();
        let v = frac_int(&u, s, Side::LeftAPlus).unwrap();
        let sv = s.value();
        for (j, x) in g.nodes().into_iter().enumerate() {
            let exact = c0 * power_rule(1.0, sv, x) + c1 * power_rule(2.0, sv, x);
            prop_assert!((v.values()[j] - exact).abs() <= 1e-12);
        }
    }
}

fn unit(spec: &str) -> AnalyticFunction {
    AnalyticFunction::parse(spec, Interval::unit()).unwrap()
}

#[test]
fn gamma_recurrence_on_the_tenths() {
    for k in 1..=50 {
        let x = k as f64 / 10.0;
        let g1 = gamma_fn(x + 1.0).unwrap();
        assert!((g1 - x * gamma_fn(x).unwrap()).abs() / g1 <= 1e-12, "x = {x}");
    }
}

#[test]
fn sampling_converges_uniformly() {
    let f = unit("cosine");
    let ns = [16, 64, 256];
    let errs: Vec<f64> = ns
        .iter()
        .map(|&n| {
            let u = sample(&f, &Grid::unit(n).unwrap()).unwrap();
            (0..=200)
                .map(|k| k as f64 / 200.0)
                .map(|x| (eval_pw_linear(&u, x).unwrap() - f.eval(x)).abs())
                .fold(0.0, f64::max)
        })
        .collect();
    assert!(fit_rate(&ns, &errs).unwrap() >= 1.0, "{errs:?}");
}

#[test]
fn integral_of_smooth_data_is_second_order() {
    let f = unit("cosine");
    let s = FracOrder::new(0.4).unwrap();
    let ns = [32, 64, 128];
    let errs: Vec<f64> = ns
        .iter()
        .map(|&n| {
            let g = Grid::unit(n).unwrap();
            let v = frac_int(&sample(&f, &g).unwrap(), s, Side::LeftAPlus).unwrap();
            (0..=n)
                .map(|j| (v.values()[j] - frac_int_oracle(&f, s, Side::LeftAPlus, g.node(j)).unwrap()).abs())
                .fold(0.0, f64::max)
        })
        .collect();
    assert!(fit_rate(&ns, &errs).unwrap() >= 1.8, "{errs:?}");
}

#[test]
fn lp_is_controlled_by_weak_lp() {
    let g = Grid::unit(1024).unwrap();
    for spec in ["cosine", "linear", "sine", "power-law:1.5", "hat:0.5:0.25", "critical-power:0.7", "constant:2"] {
        let u = sample(&unit(spec), &g).unwrap();
        for (r, p) in [(1.0, 2.0), (1.0, 4.0), (2.0, 3.0)] {
            let c = (p / (p - r) as f64).powf(1.0 / r);
            let (lhs, w) = (lp_norm(&u, r).unwrap(), weak_lp_quasinorm(&u, p).unwrap());
            assert!(lhs <= c * w * (1.0 + 1e-2), "{spec}: ||u||_{r} = {lhs} > {c} * {w}");
        }
    }
}

#[test]
fn weak_type_of_integrated_critical_powers_stays_bounded() {
    let s = FracOrder::new(0.5).unwrap();
    for s0 in [0.2, 0.4] {
        let u = Ladder::sample(&unit(&format!("critical-power:{s0}")), &[256, 1024, 4096]).unwrap();
        let w: Vec<f64> = u
            .levels()
            .iter()
            .map(|v| weak_lp_quasinorm(&frac_int(v, s, Side::LeftAPlus).unwrap(), 2.0).unwrap())
            .collect();
        assert!(w.windows(2).all(|p| p[1] <= p[0] * (1.0 + 1e-6)), "{w:?}");
    }
}

#[test]
fn derivative_of_lipschitz_data_vanishing_at_a_stays_bounded() {
    let s = FracOrder::new(0.6).unwrap();
    for spec in ["linear", "sine", "power-law:3"] {
        let maxima: Vec<f64> = Ladder::sample(&unit(spec), &[256, 1024, 4096])
            .unwrap()
            .levels()
            .iter()
            .map(|u| {
                let d = frac_deriv(u, s, DerivKind::RiemannLiouville, Side::LeftAPlus).unwrap();
                d.values().iter().fold(0.0f64, |m, v| m.max(v.abs()))
            })
            .collect();
        assert!(maxima.windows(2).all(|p| p[1] <= p[0] * 1.01), "{spec}: {maxima:?}");
    }
}
