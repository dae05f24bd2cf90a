use symcalc_core::bounds::{partially_symmetric_lb, partially_symmetric_lb_rm, representable_dims, tier_sizes};
use symcalc_core::calculus::{is_invariant, monomial_partial_dims, partial_monomial_code, symmetry_profile};
use symcalc_core::codes::{monomial_min_distance, rm_code, variable_permutation_points};
use symcalc_core::construct::{construct, construct_partially_symmetric, Construction, ConstructionRequest, RemovalStep};
use symcalc_core::Error;

fn req(m: u32, t: u32, k: u64, rm_order: Option<u32>) -> ConstructionRequest {
    ConstructionRequest { m, t, k, rm_order }
}

fn swap(m: u32, a: usize, b: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..m as usize).collect();
    p.swap(a, b);
    p
}

/// Smallest common target derivative dimension over every monomial code of
/// each size whose first `t` partial dimensions agree.
fn brute_force_optimum(m: u32, t: u32) -> Vec<Option<usize>> {
    let n = 1usize << m;
    let mut best = vec![None::<usize>; n + 1];
    for set in 0u64..1 << n {
        let k = set.count_ones() as usize;
        let mut dims = vec![0usize; t as usize];
        for v in 0..n {
            if set >> v & 1 == 1 {
                for (i, d) in dims.iter_mut().enumerate() {
                    *d += v >> i & 1;
                }
            }
        }
        if dims.iter().all(|&d| d == dims[0]) {
            let e = &mut best[k];
            *e = Some(e.map_or(dims[0], |b: usize| b.min(dims[0])));
        }
    }
    best
}

#[test]
fn optimal_against_exhaustive_search() {
    for m in 2..=4u32 {
        for t in 1..=m {
            let best = brute_force_optimum(m, t);
            for k in representable_dims(m, t, None).unwrap() {
                let code = construct_partially_symmetric(req(m, t, k, None)).unwrap();
                let dims = monomial_partial_dims(&code);
                assert_eq!(code.k() as u64, k);
                assert!(dims[..t as usize].iter().all(|&d| d == dims[0]));
                assert_eq!(Some(dims[0]), best[k as usize], "m={m} t={t} k={k}");
            }
        }
    }
}

#[test]
fn attains_bound_and_is_symmetric() {
    for m in 1..=6u32 {
        for t in 1..=m {
            for k in representable_dims(m, t, None).unwrap() {
                let c = construct(req(m, t, k, None)).unwrap();
                let code = &c.code;
                assert!(code.is_divisor_closed(), "m={m} t={t} k={k}");
                let dims = monomial_partial_dims(code);
                for &d in &dims[..t as usize] {
                    assert_eq!(d as u64, c.k_tilde, "m={m} t={t} k={k}");
                }
                assert_eq!(c.k_tilde, partially_symmetric_lb(m, t, k).unwrap().k_tilde);
                // Non-target variables are never worse than targets.
                assert!(dims[t as usize..].iter().all(|&d| d as u64 >= c.k_tilde));
            }
        }
    }
}

fn has_residual(c: &Construction) -> bool {
    c.steps.iter().any(|s| matches!(s, RemovalStep::Residual { .. }))
}

/// Whole tiers and degree groups only.
fn is_layered(c: &Construction) -> bool {
    c.steps.iter().all(|s| matches!(s, RemovalStep::Tier { .. } | RemovalStep::Degree { .. }))
}

// A balanced residual only equalises derivative dimensions, and anchored
// blocks single out particular non-target factors, so the full invariance
// is checked where the construction does not need them.
#[test]
fn invariant_under_target_and_nontarget_swaps() {
    for (m, t) in [(4u32, 3u32), (5, 3), (5, 2), (6, 4)] {
        for k in representable_dims(m, t, None).unwrap() {
            let c = construct(req(m, t, k, None)).unwrap();
            let lin = c.code.to_linear();
            let mut swaps = vec![];
            if !has_residual(&c) {
                for a in 0..t as usize {
                    for b in a + 1..t as usize {
                        swaps.push((a, b));
                    }
                }
            }
            if m - t >= 2 && is_layered(&c) {
                for a in t as usize..m as usize {
                    swaps.push((t as usize, a));
                }
            }
            for (a, b) in swaps {
                let points = variable_permutation_points(m, &swap(m, a, b));
                assert!(is_invariant(&lin, &points).unwrap(), "m={m} t={t} k={k} swap {a},{b}");
            }
            // Targets share one derivative dimension on the generator level too.
            let prof = symmetry_profile(&lin).unwrap();
            assert!(prof.dims[..t as usize].iter().all(|&d| d == prof.dims[0]));
        }
    }
}

#[test]
fn derivative_is_optimal_one_level_down() {
    let mut checked = 0;
    for m in 3..=7u32 {
        for t in 2..=m {
            for k in representable_dims(m, t, None).unwrap() {
                let c = construct(req(m, t, k, None)).unwrap();
                if !is_layered(&c) {
                    continue;
                }
                for i in 0..t {
                    let d = partial_monomial_code(&c.code, i);
                    assert_eq!(d.k() as u64, c.k_tilde);
                    if d.k() == 0 {
                        continue;
                    }
                    let lb = partially_symmetric_lb(m - 1, t - 1, d.k() as u64).unwrap();
                    let dims = monomial_partial_dims(&d);
                    for &x in &dims[..(t - 1) as usize] {
                        assert_eq!(x as u64, lb.k_tilde, "m={m} t={t} k={k} i={i}");
                    }
                    checked += 1;
                }
            }
        }
    }
    assert!(checked > 100);
}

#[test]
fn worked_example_profile() {
    let code = construct_partially_symmetric(req(4, 3, 8, None)).unwrap();
    let prof = symmetry_profile(&code.to_linear()).unwrap();
    assert_eq!(prof.dims, vec![2, 2, 2, 4]);
    assert_eq!((prof.t, prof.k_tilde), (3, 2));
    assert_eq!(code.to_linear().min_distance_bruteforce().unwrap(), Some(4));
}

#[test]
fn two_symmetric_high_rate_codes_have_distance_two() {
    for m in 3..=7u32 {
        let n = 1u64 << m;
        for k in representable_dims(m, 2, None).unwrap() {
            if k >= n - n / 4 {
                let code = construct_partially_symmetric(req(m, 2, k, None)).unwrap();
                assert!(monomial_min_distance(&code).unwrap() <= 2, "m={m} k={k}");
            }
        }
    }
}

#[test]
fn rm_subcodes_of_length_256() {
    let sizes = tier_sizes(8, 3, Some(4));
    assert_eq!(sizes, vec![31, 78, 48, 6]);

    let c = construct(req(8, 3, 127, Some(4))).unwrap();
    assert_eq!(c.code.k(), 127);
    assert!(c.code.max_degree().unwrap() <= 4);
    assert!(c.code.gen_set().is_subset(rm_code(4, 8).unwrap().gen_set()));
    let b = partially_symmetric_lb_rm(8, 3, 127, Some(4)).unwrap();
    assert_eq!(b.decomposition.l, 2);
    assert_eq!(b.k_tilde, c.k_tilde);
    let dims = monomial_partial_dims(&c.code);
    assert!(dims[..3].iter().all(|&d| d as u64 == c.k_tilde));

    let c = construct(req(8, 5, 128, Some(4))).unwrap();
    assert_eq!(c.k_tilde, 42);
    let dims = monomial_partial_dims(&c.code);
    assert!(dims[..5].iter().all(|&d| d == 42), "{dims:?}");
    assert!(c.code.is_divisor_closed());
}

#[test]
fn rm_restricted_constructions_for_every_representable_k() {
    for (m, t, r) in [(6u32, 3u32, 3u32), (6, 4, 2), (7, 5, 3)] {
        for k in representable_dims(m, t, Some(r)).unwrap() {
            let c = construct(req(m, t, k, Some(r))).unwrap();
            assert!(c.code.max_degree().unwrap() <= r);
            let dims = monomial_partial_dims(&c.code);
            assert!(dims[..t as usize].iter().all(|&d| d as u64 == c.k_tilde), "m={m} t={t} r={r} k={k}");
        }
    }
}

#[test]
fn non_representable_and_invalid_requests() {
    match construct(req(6, 4, 23, None)) {
        Err(Error::NotRepresentable { k, below, above }) => {
            assert_eq!(k, 23);
            assert!(below < 23 && above.unwrap() > 23);
            assert!(construct(req(6, 4, below as u64, None)).is_ok());
            assert!(construct(req(6, 4, above.unwrap() as u64, None)).is_ok());
        }
        other => panic!("unexpected {other:?}"),
    }
    assert!(matches!(construct(req(4, 5, 3, None)), Err(Error::InvalidParameter(_))));
    assert!(matches!(construct(req(4, 2, 0, None)), Err(Error::InvalidParameter(_))));
    assert!(matches!(construct(req(4, 2, 17, None)), Err(Error::InvalidParameter(_))));
}
