use cliquestream::adversary::{occ_nemesis, Variant};
use cliquestream::analysis::{asymptotic_ratio, occ_lower_bound, plain_lower_bound, profvalue_gap, LowerBoundCase};
use cliquestream::strategy::Occ;
use cliquestream::{run_online, Objective, OptMode};

fn occ_worst(gamma: f64, phases: u32, variant: Variant) -> f64 {
    let inst = occ_nemesis(gamma, phases, variant).unwrap();
    let opt = OptMode::Analytic(inst.analytic_opt.clone().unwrap());
    let run = run_online(&mut Occ::new(gamma).unwrap(), &inst.events, &opt, Objective::Max).unwrap();
    run.trace.worst().unwrap().ratio.to_f64()
}

#[test]
fn batch_constructions_approach_the_case_formulas() {
    // (gamma, phases, variant used by the bound's case)
    let cases = [
        (1.5, 12, Variant::Plain, LowerBoundCase::Low),
        (2.0, 12, Variant::Triangle, LowerBoundCase::Middle),
        (2.5, 8, Variant::Triangle, LowerBoundCase::Middle),
        (3.3, 6, Variant::Triangle, LowerBoundCase::High),
        (4.0, 6, Variant::Triangle, LowerBoundCase::High),
    ];
    for (gamma, phases, variant, case) in cases {
        let (got_case, bound) = occ_lower_bound(gamma).unwrap();
        assert_eq!(got_case, case);
        let worst = occ_worst(gamma, phases, variant);
        assert!(
            (worst - bound).abs() <= 0.1 * bound,
            "gamma {gamma}: measured {worst}, formula {bound}"
        );
    }
}

#[test]
fn plain_batches_converge_from_below() {
    let gamma = 2.0;
    let ratios: Vec<f64> = [4, 6, 8, 10]
        .iter()
        .map(|&p| occ_worst(gamma, p, Variant::Plain))
        .collect();
    assert!(ratios.windows(2).all(|w| w[0] <= w[1]), "{ratios:?}");
    let limit = plain_lower_bound(gamma);
    assert!(
        ratios.iter().all(|&r| r <= limit + 1e-9) && limit - ratios[3] < 0.1,
        "{ratios:?} vs {limit}"
    );
}

#[test]
fn regime_boundaries() {
    let root3 = 3f64.sqrt();
    // At sqrt 3 the plain formula gives 6 + 3 sqrt 3.
    let (case, value) = occ_lower_bound(root3).unwrap();
    assert_eq!(case, LowerBoundCase::Low);
    assert!((value - (6.0 + 3.0 * root3)).abs() < 1e-9);
    assert!((value - 11.196).abs() < 1e-3);
    // Best doubling parameter: the minimum over gamma of the case formulas.
    let best = (1..200_000)
        .map(|i| 1.0 + i as f64 * 1e-4)
        .map(|g| occ_lower_bound(g).unwrap().1)
        .fold(f64::INFINITY, f64::min);
    assert!((best - 10.927).abs() < 1e-3, "minimum {best}");
}

#[test]
fn asymptotic_ratio_minimum_by_grid_search() {
    let mut best = (f64::INFINITY, 0.0, 0.0);
    for gi in 2000..=4500 {
        let g = gi as f64 * 1e-3;
        for xi in 300..=1000 {
            let x = xi as f64 * 1e-3;
            if let Ok(r) = asymptotic_ratio(g, x) {
                if r < best.0 {
                    best = (r, g, x);
                }
            }
        }
    }
    let (r, g, x) = best;
    assert!(
        (g - 3.3028).abs() <= 1.5e-3 && (x - 0.6972).abs() <= 1.5e-3,
        "argmin ({g}, {x})"
    );
    assert!((r - 15.6455).abs() <= 1e-3, "minimum {r}");
}

#[test]
fn profvalue_equality_cases() {
    for a in 0..=40u64 {
        for b in 0..=40u64 {
            let (af, bf) = (a as f64, b as f64);
            let at_one = profvalue_gap(a, b, 1.0).unwrap();
            assert!((at_one - ((bf - af).powi(2) - (bf - af))).abs() < 1e-9);
            if a >= 2 && (2..=a).contains(&b) {
                let x = (bf - 1.0) / (af - 1.0);
                let f = profvalue_gap(a, b, x).unwrap();
                let expect = (af - bf) * (bf - 1.0) / (af - 1.0);
                assert!((f - expect).abs() < 1e-9 * (1.0 + expect.abs()), "F({a},{b},{x})");
            }
        }
    }
}
