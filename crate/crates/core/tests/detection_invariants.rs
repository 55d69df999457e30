//! Properties of the error estimators over exact magnetization laws.

use proptest::prelude::*;
use smd_core::detection::{estimate_pe, ChannelParams, DetectionTask, Estimator, McSettings, Source, ThresholdMode};
use smd_core::engine::exact_pmf;
use smd_core::{build_graph, Boundary, GraphFamily, MagnetizationPmf, ModelParams};

const EXACT: [GraphFamily; 6] = [
    GraphFamily::Empty,
    GraphFamily::Star,
    GraphFamily::Chain,
    GraphFamily::Ring,
    GraphFamily::Wheel,
    GraphFamily::Complete,
];

fn law(family: GraphFamily, n: usize, beta: f64, h: f64) -> MagnetizationPmf {
    let g = build_graph(family, n, Boundary::Free).unwrap();
    exact_pmf(&g, ModelParams::new(beta, h).unwrap()).unwrap()
}

fn task(level: f64, p: f64, delta: f64) -> DetectionTask {
    DetectionTask::new(level, ChannelParams::new(p, delta).unwrap(), ThresholdMode::DeltaScaled).unwrap()
}

fn exact(pmf: &MagnetizationPmf, t: &DetectionTask) -> smd_core::detection::ErrorEstimate {
    estimate_pe(Source::Pmf(pmf), t, Estimator::ExactSmallN, McSettings::default()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exact_error_never_exceeds_hoeffding_bound(
        fam in 0usize..6,
        n in 4usize..500,
        beta in 0.0f64..1.5,
        h in -0.5f64..0.5,
        level in -0.9f64..0.9,
        p in 0.01f64..0.49,
    ) {
        let t = task(level, p, 1.0);
        prop_assume!(t.check_level(n).is_ok());
        let est = exact(&law(EXACT[fam], n, beta, h), &t);
        prop_assert!(est.pe <= est.hoeffding_bound.unwrap(), "{} > {:?}", est.pe, est.hoeffding_bound);
    }

    #[test]
    fn flipping_field_and_level_preserves_error(
        fam in 0usize..6,
        n in 4usize..300,
        beta in 0.0f64..1.5,
        h in -0.5f64..0.5,
        level in -0.9f64..0.9,
        p in 0.01f64..0.49,
    ) {
        let (a, b) = (task(level, p, 1.0), task(-level, p, 1.0));
        prop_assume!(a.check_level(n).is_ok());
        // Keep the detector threshold off the report lattice so the +1 tie
        // rule never fires.
        let t = a.threshold() * n as f64;
        prop_assume!(((t + n as f64) / 2.0 - ((t + n as f64) / 2.0).round()).abs() > 1e-6);
        let up = exact(&law(EXACT[fam], n, beta, h), &a).pe;
        let down = exact(&law(EXACT[fam], n, beta, -h), &b).pe;
        prop_assert!((up - down).abs() < 1e-12, "{up} vs {down}");
    }
}

#[test]
fn gaussian_estimator_converges_to_exact() {
    for (family, beta, h) in [(GraphFamily::Empty, 0.0, 0.0), (GraphFamily::Wheel, 0.5, 0.3), (GraphFamily::Chain, 0.5, 0.0)] {
        for level in [0.0, 1.0 / 3.0] {
            let t = task(level, 0.3, 1.0);
            let gap = |n: usize| {
                let pmf = law(family, n, beta, h);
                let ex = exact(&pmf, &t);
                let gauss = estimate_pe(Source::Pmf(&pmf), &t, Estimator::RbGauss, McSettings::default()).unwrap();
                assert_eq!(gauss.q_limit_value, Some(gauss.pe));
                (gauss.pe - ex.pe).abs()
            };
            // Sizes where n(1+S)/2 is an integer are not valid for this level.
            let valid = |n: usize| t.check_level(n).is_ok();
            for (n, tol) in [(500usize, 0.02), (2000, 0.005)] {
                if valid(n) {
                    assert!(gap(n) <= tol, "{family} S={level} n={n}");
                }
            }
            let gaps: Vec<f64> = [101usize, 501, 2001].into_iter().filter(|&n| valid(n)).map(gap).collect();
            assert!(gaps.windows(2).all(|w| w[1] <= w[0] + 1e-3), "{family} S={level}: {gaps:?}");
        }
    }
}

#[test]
fn monte_carlo_matches_exact_within_three_stderr() {
    let pmf = law(GraphFamily::Ring, 151, 0.4, 0.05);
    let t = task(0.1, 0.25, 1.0);
    let ex = exact(&pmf, &t);
    let mc = estimate_pe(Source::Pmf(&pmf), &t, Estimator::PlainMc, McSettings { trials: 50_000, seed: 21 }).unwrap();
    assert!((mc.pe - ex.pe).abs() <= 3.0 * mc.stderr, "{} vs {}", mc.pe, ex.pe);
}

#[test]
fn partial_observation_obeys_scaled_bound() {
    for (family, beta) in [(GraphFamily::Chain, 0.3), (GraphFamily::Empty, 0.0), (GraphFamily::Wheel, 0.4)] {
        let pmf = law(family, 301, beta, 0.05);
        let t = task(0.1, 0.3, 0.5);
        let est = estimate_pe(Source::Pmf(&pmf), &t, Estimator::PlainMc, McSettings { trials: 20_000, seed: 2 }).unwrap();
        assert!(est.pe <= est.hoeffding_bound.unwrap() + 3.0 * est.stderr, "{family}");
    }
}
