//! Sampling, scan determinism, finite-difference order and Monte Carlo error
//! scaling.

use biharm::catalog::{eigenmap, make_mu, make_pi};
use biharm::deformer::Family;
use biharm::domain::DomainSpec;
use biharm::exec::{set_policy, ExecPolicy};
use biharm::functionals::Equation;
use biharm::map::cone;
use biharm::quadrature::{integrate_sphere, Scheme};
use biharm::rational::{q, to_f64};
use biharm::verifier::scan::{fd_deviation, observed_order, ResidualEvaluator};
use biharm::verifier::{residual_scan, SamplePlan, ScanConfig};
use proptest::prelude::*;

fn norm(p: &[f64]) -> f64 {
    p.iter().map(|x| x * x).sum::<f64>().sqrt()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn euclidean_samples_stay_in_the_annulus(
        m in 2u32..8, seed in any::<u64>(), lo in 0.1f64..1.0, width in 0.0f64..3.0,
    ) {
        let hi = lo + width;
        let plan = SamplePlan::new(DomainSpec::punctured(m).unwrap(), 32, seed).with_annulus(lo, hi);
        for p in plan.points() {
            prop_assert_eq!(p.len(), m as usize);
            let r = norm(&p);
            prop_assert!(r >= lo * (1.0 - 1e-12) && r <= hi * (1.0 + 1e-12), "{} not in [{}, {}]", r, lo, hi);
        }
    }

    #[test]
    fn sphere_and_arc_samples_lie_on_their_domains(m in 1u32..8, seed in any::<u64>()) {
        for p in SamplePlan::new(DomainSpec::sphere(m).unwrap(), 32, seed).points() {
            prop_assert_eq!(p.len(), m as usize + 1);
            prop_assert!((norm(&p) - 1.0).abs() < 1e-14);
        }
        for p in SamplePlan::new(DomainSpec::arc(), 32, seed).points() {
            prop_assert!((0.0..std::f64::consts::TAU).contains(&p[0]));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn fd_residual_converges_at_second_order(seed in any::<u64>(), n in 1i64..10) {
        // a nonzero residual so the deviation is not at rounding level
        let u = cone(&make_mu(3).unwrap(), q(n, 10)).unwrap();
        let ev = ResidualEvaluator::new(&u, Equation::Biharmonic).unwrap();
        let pts = SamplePlan::new(u.domain, 1, seed).points();
        let hs = [1e-2, 5e-3, 2.5e-3];
        let dev = fd_deviation(&u, &ev, Equation::Biharmonic, &pts, hs).unwrap();
        // independent check of the fitted slope: consecutive ratios near 4
        for k in 0..2 {
            let ratio = dev[k] / dev[k + 1];
            prop_assert!((3.5..4.5).contains(&ratio), "ratio {} from {:?}", ratio, dev);
        }
        let p = observed_order(&hs, &dev).unwrap();
        prop_assert!((p - 2.0).abs() < 0.1);
    }
}

#[test]
fn scans_are_reproducible_under_both_policies() {
    let u = cone(&eigenmap(3, 2).unwrap(), q(1, 3)).unwrap();
    let cfg = ScanConfig { samples: 48, seed: 11, ..ScanConfig::default() };
    set_policy(ExecPolicy::Sequential);
    let a = residual_scan(&u, Equation::Biharmonic, false, &cfg).unwrap();
    set_policy(ExecPolicy::Parallel);
    let b = residual_scan(&u, Equation::Biharmonic, false, &cfg).unwrap();
    let c = residual_scan(&u, Equation::Biharmonic, false, &cfg).unwrap();
    assert_eq!(a, b);
    assert_eq!(b, c);
    assert_eq!(a.numeric_max.to_bits(), c.numeric_max.to_bits());
    let other = residual_scan(&u, Equation::Biharmonic, false, &ScanConfig { seed: 12, ..cfg }).unwrap();
    assert_ne!(a.numeric_max, other.numeric_max);
}

#[test]
fn cone_residual_vanishes_towards_the_endpoint() {
    // the cone degenerates to the harmonic map itself as t → 1, with the
    // residual dominated by the √(1 − t) factor on the last component
    let v = make_pi(5).unwrap();
    let cfg = ScanConfig { samples: 32, fd_points: 0, ..ScanConfig::default() };
    let maxes: Vec<f64> = [q(9, 10), q(99, 100), q(999, 1000)]
        .into_iter()
        .map(|t| residual_scan(&cone(&v, t).unwrap(), Equation::Biharmonic, false, &cfg).unwrap().numeric_max)
        .collect();
    assert!(maxes.windows(2).all(|w| w[1] < w[0]), "{maxes:?}");
    let ratio = maxes[1] / maxes[2];
    assert!((ratio / 10f64.sqrt() - 1.0).abs() < 0.2, "{maxes:?}");
}

#[test]
fn pi_cone_angle_increases_with_dimension() {
    let ts: Vec<f64> = (4..=6).map(|m| to_f64(&Family::PiCone.solve(m).unwrap().solution.t)).collect();
    assert!(ts.windows(2).all(|w| w[0] < w[1]), "{ts:?}");
}

#[test]
fn monte_carlo_error_shrinks_like_inverse_root() {
    let f = |x: &[f64]| x[0] * x[0] + x[1].powi(4);
    let se = |n| {
        integrate_sphere(3, &f, Scheme::MonteCarlo { samples: n, seed: 5 }).unwrap().std_error
    };
    let ratio = se(40_960) / se(81_920);
    assert!((ratio - 2f64.sqrt()).abs() < 0.05 * 2f64.sqrt(), "ratio {ratio}");
}
