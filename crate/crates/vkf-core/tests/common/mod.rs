//! Shared oracles for integration tests. Everything here re-derives
//! answers by routes independent of the library's implementation:
//! feasibility by Fourier–Motzkin elimination (the library uses phase-1
//! simplex), witness existence by exhaustive enumeration.

// each test binary uses its own slice of these helpers
#![allow(dead_code)]

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use vkf_core::complex::{Simplex, SimplicialComplex};
use vkf_core::witness::AffineMap;

/// One inequality Σ coeffs[i] x_i <= bound.
#[derive(Clone)]
struct Ineq {
    coeffs: Vec<BigRational>,
    bound: BigRational,
}

/// Decides Ax = b, x >= 0 by Fourier–Motzkin elimination.
pub fn fm_feasible(rows: &[Vec<BigRational>], rhs: &[BigRational]) -> bool {
    let n = rows.first().map_or(0, Vec::len);
    let mut system: Vec<Ineq> = Vec::new();
    for (row, b) in rows.iter().zip(rhs) {
        system.push(Ineq { coeffs: row.clone(), bound: b.clone() });
        system.push(Ineq {
            coeffs: row.iter().map(|v| -v).collect(),
            bound: -b.clone(),
        });
    }
    for i in 0..n {
        let mut coeffs = vec![BigRational::zero(); n];
        coeffs[i] = -BigRational::from_integer(1.into());
        system.push(Ineq { coeffs, bound: BigRational::zero() });
    }
    for var in 0..n {
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        let mut rest = Vec::new();
        for ineq in system {
            let c = &ineq.coeffs[var];
            if c.is_positive() {
                pos.push(ineq);
            } else if c.is_negative() {
                neg.push(ineq);
            } else {
                rest.push(ineq);
            }
        }
        for p in &pos {
            for q in &neg {
                // p: a x <= c (a > 0), q: -a' x <= c' (a' > 0):
                // combine to eliminate x: a' * p + a * q
                let a = p.coeffs[var].clone();
                let a2 = -q.coeffs[var].clone();
                let coeffs: Vec<BigRational> = p
                    .coeffs
                    .iter()
                    .zip(&q.coeffs)
                    .map(|(pc, qc)| &a2 * pc + &a * qc)
                    .collect();
                let bound = &a2 * &p.bound + &a * &q.bound;
                if coeffs.iter().all(Zero::is_zero) {
                    if bound.is_negative() {
                        return false;
                    }
                } else {
                    rest.push(Ineq { coeffs, bound });
                }
            }
        }
        // drop rows that are trivially true to curb growth
        rest.retain(|r| !(r.coeffs.iter().all(Zero::is_zero) && !r.bound.is_negative()));
        system = rest;
        system.sort_by(|x, y| x.coeffs.cmp(&y.coeffs).then_with(|| x.bound.cmp(&y.bound)));
        system.dedup_by(|x, y| x.coeffs == y.coeffs && x.bound == y.bound);
    }
    system.iter().all(|r| !r.bound.is_negative())
}

/// The joint barycentric system for "do the affine images of these faces
/// share a point" — reconstructed here, fed to the FM decision.
pub fn hulls_intersect_fm(x: &SimplicialComplex, faces: &[&Simplex], f: &AffineMap) -> bool {
    let d = f.dim();
    let sizes: Vec<usize> = faces.iter().map(|s| s.len()).collect();
    let total: usize = sizes.iter().sum();
    let offsets: Vec<usize> = sizes
        .iter()
        .scan(0usize, |acc, &s| {
            let o = *acc;
            *acc += s;
            Some(o)
        })
        .collect();
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for (i, &size) in sizes.iter().enumerate() {
        let mut row = vec![BigRational::zero(); total];
        for j in 0..size {
            row[offsets[i] + j] = BigRational::from_integer(1.into());
        }
        rows.push(row);
        rhs.push(BigRational::from_integer(1.into()));
    }
    let coord = |face: &Simplex, j: usize, t: usize| -> BigRational {
        f.get(x.label(face.vertices()[j])).expect("covered")[t].clone()
    };
    for i in 1..faces.len() {
        for t in 0..d {
            let mut row = vec![BigRational::zero(); total];
            for j in 0..sizes[0] {
                row[offsets[0] + j] = coord(faces[0], j, t);
            }
            for j in 0..sizes[i] {
                row[offsets[i] + j] = -coord(faces[i], j, t);
            }
            rows.push(row);
            rhs.push(BigRational::zero());
        }
    }
    fm_feasible(&rows, &rhs)
}

/// Brute-force witness existence for r = 2: every unordered pair of
/// disjoint faces, decided by Fourier–Motzkin.
pub fn witness_exists_brute_force(x: &SimplicialComplex, f: &AffineMap) -> bool {
    let faces = x.faces();
    for i in 0..faces.len() {
        for j in (i + 1)..faces.len() {
            if faces[i].disjoint_from(&faces[j])
                && hulls_intersect_fm(x, &[&faces[i], &faces[j]], f)
            {
                return true;
            }
        }
    }
    false
}

/// Seeded grid coordinates matching the library's sampling style, small
/// enough to keep the FM oracle fast.
pub fn sample_coords(x: &SimplicialComplex, d: usize, seed: u64, stream: u64) -> AffineMap {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let mut f = AffineMap::new(d);
    for &label in x.labels() {
        let coords: Vec<BigRational> = (0..d)
            .map(|_| BigRational::new(rng.random_range(-60i64..=60).into(), 12.into()))
            .collect();
        f.insert(label, coords).unwrap();
    }
    f
}
