mod common;

use owl_core::oracle::{dykstra_project, enumerate_candidates, oracle_project_small};
use owl_core::{refines, solve_reduced, solve_reduced_observed, Branch, IntervalPartition};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{max_abs_diff, reduced_instance};

#[test]
fn solver_matches_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for case in 0..2000 {
        let n = 1 + case % 10;
        let inst = reduced_instance(&mut rng, n);
        let alg = solve_reduced(&inst).unwrap();
        let oracle = oracle_project_small(&inst).unwrap();
        let err = max_abs_diff(&alg.x_star, &oracle.x);
        assert!(
            err <= 1e-8,
            "case {}: {:?}\nalg {:?}\noracle {:?}",
            case,
            inst,
            alg,
            oracle.x
        );
        assert!(alg.outer_loops <= n);
    }
}

#[test]
fn three_way_agreement() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for case in 0..200 {
        let inst = reduced_instance(&mut rng, 2 + case % 9);
        let alg = solve_reduced(&inst).unwrap().x_star;
        let oracle = oracle_project_small(&inst).unwrap().x;
        let dyk = dykstra_project(&inst, 100_000).x;
        assert!(
            max_abs_diff(&alg, &dyk) <= 1e-6,
            "case {}: {:?} vs {:?}",
            case,
            alg,
            dyk
        );
        assert!(max_abs_diff(&oracle, &dyk) <= 1e-6);
    }
}

#[test]
fn dykstra_at_moderate_size() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let inst = reduced_instance(&mut rng, 50);
    let alg = solve_reduced(&inst).unwrap().x_star;
    let dyk = dykstra_project(&inst, 100_000).x;
    assert!(max_abs_diff(&alg, &dyk) <= 1e-6);
}

#[test]
fn optimum_is_unique_among_candidates() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for case in 0..300 {
        let inst = reduced_instance(&mut rng, 1 + case % 6);
        let passing: Vec<_> = enumerate_candidates(&inst)
            .unwrap()
            .into_iter()
            .filter(|c| c.residual <= 1e-10)
            .collect();
        assert!(!passing.is_empty(), "case {}", case);
        // several representations may describe the same point, never two points
        for c in &passing[1..] {
            assert!(max_abs_diff(&c.x, &passing[0].x) <= 1e-9, "case {}", case);
        }
    }
}

#[test]
fn merges_refine_and_shrink() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for case in 0..1000 {
        let inst = reduced_instance(&mut rng, 1 + case % 10);
        let mut prev: Option<(IntervalPartition, Branch)> = None;
        let res = solve_reduced_observed(&inst, |rec, part| {
            let now = part.partition();
            if let Some((before, branch)) = &prev {
                assert!(branch.is_merge());
                assert!(refines(before, &now).unwrap());
                assert!(now.len() < before.len());
            }
            match rec.branch {
                Branch::MergeLambda1 => assert!(rec.lambda1 > rec.ratio),
                Branch::MergeLambda0 => {
                    assert!(rec.lambda0 > rec.ratio && rec.ratio >= rec.lambda1)
                }
                Branch::Threshold | Branch::MergeSuffix => {
                    // backward scan agrees with a full forward scan
                    let (z, w) = part.expand();
                    let first = (0..z.len()).find(|&k| z[k] - rec.lambda0 * w[k] < 0.0);
                    assert_eq!(first, rec.cut);
                }
                _ => {}
            }
            prev = Some((now, rec.branch));
        })
        .unwrap();
        assert!(res.outer_loops <= inst.len());
        assert!(!res.branch_trace[..res.branch_trace.len() - 1]
            .iter()
            .any(|b| !b.is_merge()));
    }
}

#[test]
fn random_suite_reaches_every_branch() {
    use std::collections::HashMap;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut seen: HashMap<Branch, usize> = HashMap::new();
    for case in 0..2000 {
        let inst = reduced_instance(&mut rng, 1 + case % 10);
        for b in solve_reduced(&inst).unwrap().branch_trace {
            *seen.entry(b).or_default() += 1;
        }
    }
    for b in [
        Branch::Simplex,
        Branch::MergeLambda1,
        Branch::Interior,
        Branch::MergeLambda0,
        Branch::Threshold,
        Branch::MergeSuffix,
    ] {
        assert!(
            seen.get(&b).copied().unwrap_or(0) > 0,
            "{} never fired: {:?}",
            b,
            seen
        );
    }
}
