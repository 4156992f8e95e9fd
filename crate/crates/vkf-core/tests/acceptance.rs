//! Acceptance suite. Each test exercises one criterion end to end at its
//! stated tolerance (all exact) and wall-clock budget, printing one
//! PASS line; run with `cargo test --test acceptance -- --nocapture` to
//! see them.

mod common;

use std::time::{Duration, Instant};

use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use vkf_core::certificates::{
    certify_hypotheses, check_complementary_acyclic, check_saturated, replay_cone,
    weight_lower_bound, ContractibilityWitness, SaturationVerdict, TupleVerdict,
    WeightBoundOutcome,
};
use vkf_core::complex::{generate_crosspolytope, generate_simplex, order_complex_capped};
use vkf_core::conf::{
    build_conf, build_conf_skeleton, join_decomposition, koszul_sign, nerve_map, permute_mask,
    psi_map, upper_ideal_cover, ConfComplex, PermAction,
};
use vkf_core::homology::{
    betti_of_complex, betti_of_conf, is_n_acyclic_conf, prodsimplicial_chain_complex, PrimeField,
    SparseMatrix,
};
use vkf_core::witness::{find_witness, random_trials, CoordBox};

fn f(p: u32) -> PrimeField {
    PrimeField::new(p).unwrap()
}

fn done(criterion: u32, what: &str, start: Instant, budget: Duration) {
    let elapsed = start.elapsed();
    println!("acceptance {criterion:02} ({what}): PASS in {:.2?}", elapsed);
    assert!(
        elapsed <= budget,
        "criterion {criterion} exceeded its {budget:?} budget: {elapsed:?}"
    );
}

#[test]
fn acceptance_01_sphere_betti_numbers() {
    let start = Instant::now();
    for p in [2u32, 3] {
        for m in 2..=5u32 {
            let sphere = vkf_core::complex::generate_boundary(m);
            let betti = betti_of_complex(&sphere, f(p), m as i64);
            for k in -1..=m as i64 {
                let expect = i64::from(k == m as i64 - 1);
                assert_eq!(betti.get(k), expect, "boundary of simplex {m}, p={p}, degree {k}");
            }
        }
    }
    done(1, "homology of sphere boundaries", start, Duration::from_secs(1));
}

#[test]
fn acceptance_02_cross_model_agreement() {
    let start = Instant::now();
    let instances: Vec<(&str, vkf_core::complex::SimplicialComplex)> = vec![
        ("conf2 of simplex 2", generate_simplex(2)),
        ("conf2 of simplex 3", generate_simplex(3)),
        ("conf2 of simplex 4", generate_simplex(4)),
        ("conf2 of crosspolytope 3", generate_crosspolytope(3)),
    ];
    for (name, x) in instances {
        let conf = build_conf(&x, 2).unwrap();
        let prod = betti_of_conf(&conf, f(2), 3);
        let oc = order_complex_capped(&conf.cell_poset(), 4);
        let simp = betti_of_complex(&oc, f(2), 3);
        assert_eq!(prod.values, simp.values, "{name}");
    }
    done(2, "prodsimplicial vs order-complex Betti", start, Duration::from_secs(30));
}

#[test]
fn acceptance_03_deleted_product_acyclicity_instance() {
    let start = Instant::now();
    let d4 = generate_simplex(4);
    let cert = check_complementary_acyclic(&d4, 1, 2, f(2)).unwrap();
    assert!(cert.verdict, "simplex 4 must be 1-complementary 2-acyclic");
    let conf = build_conf(&d4, 2).unwrap();
    let check = is_n_acyclic_conf(&conf, 2, f(2));
    assert!(check.acyclic);
    let betti = betti_of_conf(&conf, f(2), 3);
    assert_eq!(betti.get(3), 1, "the deleted product is a 3-sphere");
    done(3, "acyclicity passes through to the deleted product", start, Duration::from_secs(10));
}

#[test]
fn acceptance_04_certified_trials_in_the_plane() {
    let start = Instant::now();
    let d4 = generate_simplex(4);
    let stats = random_trials(&d4, 1, 2, 2, 100, 20260810, CoordBox::default()).unwrap();
    assert_eq!(stats.hits, 100);
    assert!((stats.hit_fraction - 1.0).abs() == 0.0);
    assert!(stats.all_verified, "every witness must re-verify exactly");
    assert!(
        stats.sum_dim_histogram.keys().all(|&sd| sd <= 2),
        "total dimension bound d(r-1) = 2 violated: {:?}",
        stats.sum_dim_histogram
    );
    done(4, "100/100 hits for K5 into the plane", start, Duration::from_secs(60));
}

#[test]
fn acceptance_05_certified_trials_dimension_four() {
    let start = Instant::now();
    let d6 = generate_simplex(6);
    let stats = random_trials(&d6, 2, 2, 4, 25, 20260810, CoordBox::default()).unwrap();
    assert_eq!(stats.hits, 25);
    assert!(stats.all_verified);
    assert!(
        stats.sum_dim_histogram.keys().all(|&sd| sd <= 4),
        "total dimension bound d(r-1) = 4 violated: {:?}",
        stats.sum_dim_histogram
    );
    done(5, "25/25 hits for the 2-skeleton of simplex 6 into R^4", start, Duration::from_secs(300));
}

#[test]
fn acceptance_06_control_no_hits_in_three_space() {
    let start = Instant::now();
    let d4 = generate_simplex(4);
    let stats = random_trials(&d4, 1, 2, 3, 100, 20260810, CoordBox::default()).unwrap();
    assert_eq!(stats.hits, 0, "K5 embeds linearly in 3-space for generic coordinates");
    assert_eq!(stats.hit_fraction, 0.0);
    done(6, "0/100 hits for K5 into 3-space", start, Duration::from_secs(60));
}

#[test]
fn acceptance_07_corollary_instance_homology_sphere() {
    let start = Instant::now();
    let c4 = generate_crosspolytope(4);
    let report = certify_hypotheses(&c4, 2, f(2), 1, 1, 2).unwrap();
    assert!(report.verdict, "failing clauses: {:?}", report.failing);
    assert!(report.acyclicity.verdict);
    // the full sweep ran: the empty tuple plus every face of dim <= 3
    assert_eq!(report.acyclicity.tuple_count, 81);
    assert!(report.acyclicity.records.iter().all(|r| r.pass));
    done(7, "certify 1-skeleton of the 3-sphere against the plane", start, Duration::from_secs(120));
}

/// Signed permutation matrix of g on the degree-k cells.
fn action_matrix(
    conf: &ConfComplex,
    action: &PermAction,
    g: &[usize],
    degree: i64,
    field: PrimeField,
) -> SparseMatrix {
    let ids: Vec<usize> =
        (0..conf.cell_count()).filter(|&i| conf.cell(i).total_dim() == degree).collect();
    let offset = ids[0];
    let mut m = SparseMatrix::zero(ids.len(), ids.len());
    for (col, &id) in ids.iter().enumerate() {
        let cell = conf.cell(id);
        let dims: Vec<i64> = cell.parts().iter().map(|p| p.dim()).collect();
        let moved = action.act(g, cell).unwrap();
        let row = conf.cell_id(&moved).unwrap() - offset;
        let sign = koszul_sign(g, &dims);
        m.set_column(col, vec![(row as u32, field.from_i64(sign.into()))]);
    }
    m
}

fn check_koszul_compatibility(conf: &ConfComplex, action: &PermAction, field: PrimeField) {
    let cap = conf.max_total_dim();
    let cc = prodsimplicial_chain_complex(conf, field, cap - 1);
    for g in action.elements() {
        for k in 1..=cap {
            let d_k = cc.boundary(k).unwrap();
            let rho_k = action_matrix(conf, action, g, k, field);
            let rho_km1 = action_matrix(conf, action, g, k - 1, field);
            let lhs = rho_km1.multiply(d_k, field);
            let rhs = d_k.multiply(&rho_k, field);
            assert_eq!(lhs, rhs, "boundary/action compatibility at degree {k} for {g:?}");
        }
    }
}

#[test]
fn acceptance_08_equivariance_suite() {
    let start = Instant::now();
    // nerve map and join decomposition commute with every group element on
    // every simplex of the subdivided skeleton of Conf_2(simplex 4).
    let d4 = generate_simplex(4);
    let cover = upper_ideal_cover(&d4, 2, 1).unwrap();
    let nerve = nerve_map(&cover).unwrap();
    let jd = join_decomposition(&cover);
    let skel = cover.skeleton();
    let action = PermAction::symmetric(2);
    let cell_perms: Vec<Vec<usize>> = action
        .elements()
        .iter()
        .map(|g| action.cell_permutation(skel, g).unwrap())
        .collect();

    // every simplex of sd = every chain of the cell poset
    let skeleton_poset = cover.skeleton_poset();
    let all_chains = skeleton_poset.chains_up_to(skeleton_poset.longest_chain_len());
    assert!(all_chains.len() > 1000, "the chain enumeration must be exhaustive");
    for (g, perm) in action.elements().iter().zip(&cell_perms) {
        for chain in &all_chains {
            let mut moved: Vec<usize> = chain.iter().map(|&c| perm[c]).collect();
            moved.sort_unstable();
            // join decomposition: split commutes with the action
            let (small, big) = jd.split_chain(chain);
            let (msmall, mbig) = jd.split_chain(&moved);
            let mut expect_small: Vec<usize> = small.iter().map(|&c| perm[c]).collect();
            expect_small.sort_unstable();
            let mut expect_big: Vec<usize> = big.iter().map(|&c| perm[c]).collect();
            expect_big.sort_unstable();
            assert_eq!(msmall, expect_small, "g = {g:?}");
            assert_eq!(mbig, expect_big, "g = {g:?}");
            // nerve map on the big part (a chain of P)
            let p_chain: Vec<usize> =
                big.iter().map(|&c| cover.p_index_of(c).unwrap()).collect();
            if !p_chain.is_empty() {
                let mp_chain: Vec<usize> =
                    mbig.iter().map(|&c| cover.p_index_of(c).unwrap()).collect();
                let img = nerve.map_chain(&p_chain).unwrap();
                let mimg = nerve.map_chain(&mp_chain).unwrap();
                let mut expect: Vec<u32> =
                    img.iter().map(|&mask| permute_mask(g, mask)).collect();
                expect.sort_by_key(|m| m.count_ones());
                assert_eq!(mimg, expect, "g = {g:?}");
            }
        }
    }

    // Koszul-sign boundary/action compatibility, r = 2 and r = 3, over an
    // odd characteristic so that signs matter.
    let conf2 = build_conf(&d4, 2).unwrap();
    check_koszul_compatibility(&conf2, &PermAction::symmetric(2), f(3));
    let d5 = generate_simplex(5);
    let conf3 = build_conf_skeleton(&d5, 3, 3).unwrap();
    check_koszul_compatibility(&conf3, &PermAction::symmetric(3), f(3));
    done(8, "equivariance and Koszul signs", start, Duration::from_secs(120));
}

#[test]
fn acceptance_09_height_map_suite() {
    let start = Instant::now();
    let d4 = generate_simplex(4);
    let psi = psi_map(&d4, 1).unwrap();
    let skel = psi.skeleton();
    // vertex-level antisymmetry and the zero set, exhaustively
    for id in 0..skel.cell_count() {
        assert_eq!(psi.value(psi.swap(id)), -psi.value(id));
        let small = skel.cell(id).parts().iter().all(|p| p.dim() <= 1);
        assert_eq!(psi.value(id) == 0, small);
    }
    // 1000 seeded barycentric points: exact antisymmetry of the extension
    let poset = skel.cell_poset();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let n = skel.cell_count();
    for _ in 0..1000 {
        let mut chain: Vec<usize> = vec![rng.random_range(0..n)];
        for _ in 0..3 {
            let candidates: Vec<usize> = (0..n)
                .filter(|&j| {
                    !chain.contains(&j) && chain.iter().all(|&c| poset.lt(j, c) || poset.lt(c, j))
                })
                .collect();
            if candidates.is_empty() {
                break;
            }
            chain.push(candidates[rng.random_range(0..candidates.len())]);
        }
        let raw: Vec<i64> = (0..chain.len()).map(|_| rng.random_range(1..=9)).collect();
        let total: i64 = raw.iter().sum();
        let weights: Vec<BigRational> =
            raw.iter().map(|&a| BigRational::new(a.into(), total.into())).collect();
        let value = psi.evaluate(&chain, &weights).unwrap();
        let swapped: Vec<usize> = chain.iter().map(|&c| psi.swap(c)).collect();
        let svalue = psi.evaluate(&swapped, &weights).unwrap();
        assert_eq!(svalue, -value.clone(), "chain {chain:?}");
        // points with any big cell in the carrier are never zero
        let has_big = chain.iter().any(|&c| psi.value(c) != 0);
        if chain.iter().all(|&c| psi.value(c) == 0) {
            assert!(value.is_zero());
        }
        let _ = has_big;
    }
    done(9, "height map antisymmetry and zero set", start, Duration::from_secs(60));
}

#[test]
fn acceptance_10_weight_certificate() {
    let start = Instant::now();
    let d4 = generate_simplex(4);
    let out = weight_lower_bound(&d4, 2, f(2), 1).unwrap();
    let WeightBoundOutcome::Established(bound) = out else {
        panic!("the bound must be established");
    };
    assert_eq!(bound.bound, 2);
    assert_eq!(bound.steps.len(), 3);
    let rules: Vec<&str> = bound.steps.iter().map(|s| s.rule.as_str()).collect();
    assert_eq!(
        rules,
        ["acyclic-space-weight", "equivariant-map-monotonicity", "join-with-sphere-bound"]
    );
    let report = certify_hypotheses(&d4, 2, f(2), 1, 1, 2).unwrap();
    assert_eq!(report.contradiction.conf_weight_lower, 2);
    assert_eq!(report.contradiction.sphere_weight, 1);
    assert!(report.contradiction.excluded);
    done(10, "weight bound 2 with citation chain", start, Duration::from_secs(10));
}

#[test]
fn acceptance_11_saturation_of_simplices() {
    let start = Instant::now();
    for m in 0..=5u32 {
        for r in 1..=3usize {
            let x = generate_simplex(m);
            let report = check_saturated(&x, r, f(2)).unwrap();
            assert_eq!(
                report.overall,
                SaturationVerdict::SaturatedCertified,
                "simplex {m}, r = {r}"
            );
            for rec in &report.records {
                match rec.verdict {
                    TupleVerdict::Empty => {}
                    TupleVerdict::ContractibleCertified => {
                        let Some(ContractibilityWitness::ConeApex { face, kind }) = &rec.witness
                        else {
                            panic!("simplices must certify through cone witnesses");
                        };
                        assert!(
                            replay_cone(&x, &rec.tuple, face, *kind).unwrap(),
                            "witness replay failed for {:?}",
                            rec.tuple
                        );
                    }
                    other => panic!("unexpected verdict {other:?} on a simplex"),
                }
            }
        }
    }
    done(11, "simplices saturated with replayable cones", start, Duration::from_secs(60));
}

#[test]
fn acceptance_12_oracle_completeness() {
    let start = Instant::now();
    for (name, x) in [("simplex 3", generate_simplex(3)), ("simplex 4", generate_simplex(4))] {
        for stream in 0..10u64 {
            let map = common::sample_coords(&x, 2, 1205, stream + 1);
            let found = find_witness(&x, x.dim(), 2, &map, None).unwrap();
            let oracle = common::witness_exists_brute_force(&x, &map);
            assert_eq!(
                found.is_some(),
                oracle,
                "{name}, stream {stream}: search and oracle disagree"
            );
            if let Some(w) = found {
                vkf_core::witness::verify_witness(&w, &map).unwrap();
            }
        }
    }
    done(12, "witness search agrees with the brute-force oracle", start, Duration::from_secs(120));
}

#[test]
fn acceptance_determinism_across_thread_counts() {
    // not a numbered criterion, but the concurrency contract behind them:
    // identical results from a single-thread pool and the default pool
    let d4 = generate_simplex(4);
    let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let a = single.install(|| {
        let stats = random_trials(&d4, 1, 2, 2, 8, 5, CoordBox::default()).unwrap();
        serde_json::to_string(&stats).unwrap()
    });
    let b = serde_json::to_string(&random_trials(&d4, 1, 2, 2, 8, 5, CoordBox::default()).unwrap())
        .unwrap();
    assert_eq!(a, b);
    let betti_single =
        single.install(|| betti_of_conf(&build_conf(&d4, 2).unwrap(), f(2), 3).values);
    let betti_default = betti_of_conf(&build_conf(&d4, 2).unwrap(), f(2), 3).values;
    assert_eq!(betti_single, betti_default);
}
