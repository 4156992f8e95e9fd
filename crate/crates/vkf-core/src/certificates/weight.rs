//! Weight lower-bound certificates for the translation action of
//! G = (Z/p)^k on a deleted product.
//!
//! Only lower bounds are emitted, derived by a fixed three-step chain of
//! rules; exact weights are out of scope. Each step is recorded with the
//! rule it instantiates, so the certificate can be audited line by line:
//!
//! 1. acyclic-space-weight: an m-acyclic G-space has weight >= m+1, and
//!    skeleta of total dimension m+1 inherit m-acyclicity;
//! 2. equivariant-map-monotonicity: a G-map can only increase weight, and
//!    the join decomposition maps the skeleton into the join of the
//!    small part with a free (r-2)-sphere (the subdivided boundary of the
//!    (r-1)-simplex, via the nerve of the upper-ideal cover);
//! 3. join-with-sphere-bound: joining with a free n-sphere raises weight
//!    by at most n+1, here r-1.

use serde::Serialize;

use crate::complex::SimplicialComplex;
use crate::conf::build_conf_skeleton;
use crate::homology::{prodsimplicial_chain_complex, BettiVector, PrimeField};
use crate::{Error, Result};

#[derive(Debug, Clone, Serialize)]
pub struct WeightStep {
    pub rule: String,
    pub statement: String,
}

/// A certified lower bound for the weight of G acting on the deleted
/// product of the n-skeleton.
#[derive(Debug, Clone, Serialize)]
pub struct WeightBound {
    pub complex_digest: String,
    pub r: usize,
    pub p: u32,
    pub n: i64,
    /// the acting group, (Z/p)^k embedded by translations
    pub group: String,
    /// the G-space the bound is about
    pub space: String,
    pub bound: i64,
    pub steps: Vec<WeightStep>,
    /// Betti numbers of Conf_r(X) through degree r(n+1)-2
    pub evidence: BettiVector,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum WeightBoundOutcome {
    Established(WeightBound),
    /// The acyclicity prerequisite failed; no bound, evidence attached.
    NotEstablished { evidence: BettiVector },
}

impl WeightBoundOutcome {
    pub fn bound(&self) -> Option<i64> {
        match self {
            WeightBoundOutcome::Established(b) => Some(b.bound),
            WeightBoundOutcome::NotEstablished { .. } => None,
        }
    }
}

/// Computes the weight lower bound rn for (Z/p)^k acting on
/// `Conf_r(X_n)`, prerequisite being that `Conf_r(X)` is
/// (r(n+1)-2)-acyclic over F_p (verified directly on the prodsimplicial
/// model).
pub fn weight_lower_bound(
    x: &SimplicialComplex,
    r: usize,
    field: PrimeField,
    n: i64,
) -> Result<WeightBoundOutcome> {
    let p = field.p();
    let k = prime_power_exponent(r, p).ok_or(Error::NotPrimePower { r, p })?;
    let m = r as i64 * (n + 1) - 2; // required acyclicity degree
    // Cells of total dimension <= m+1 are exactly what the Betti numbers
    // through m need.
    let skeleton = build_conf_skeleton(x, r, m + 1)?;
    let evidence = prodsimplicial_chain_complex(&skeleton, field, m)
        .reduced_betti(m)
        .expect("built to cap m");
    if !evidence.is_zero_through(m) {
        return Ok(WeightBoundOutcome::NotEstablished { evidence });
    }
    let skel_dim = m + 1; // = r(n+1) - 1
    let steps = vec![
        WeightStep {
            rule: "acyclic-space-weight".into(),
            statement: format!(
                "the {r}-fold deleted product is {m}-acyclic over F_{p}, hence so is its \
                 {skel_dim}-skeleton, giving weight >= {}",
                skel_dim
            ),
        },
        WeightStep {
            rule: "equivariant-map-monotonicity".into(),
            statement: format!(
                "the join decomposition and the nerve of the upper-ideal cover give an \
                 equivariant map from the {skel_dim}-skeleton into (deleted product of the \
                 {n}-skeleton) * S^{}, and weight is monotone under equivariant maps",
                r - 2
            ),
        },
        WeightStep {
            rule: "join-with-sphere-bound".into(),
            statement: format!(
                "joining with a free {}-sphere raises weight by at most {}, so weight of the \
                 deleted product of the {n}-skeleton >= {skel_dim} - {} = {}",
                r - 2,
                r - 1,
                r - 1,
                r as i64 * n
            ),
        },
    ];
    Ok(WeightBoundOutcome::Established(WeightBound {
        complex_digest: x.digest(),
        r,
        p,
        n,
        group: format!("(Z/{p})^{k} by translations in Sigma_{r}"),
        space: format!("{r}-fold deleted product of the {n}-skeleton"),
        bound: r as i64 * n,
        steps,
        evidence,
    }))
}

fn prime_power_exponent(r: usize, p: u32) -> Option<u32> {
    let mut k = 0u32;
    let mut v = 1u64;
    while v < r as u64 {
        v *= p as u64;
        k += 1;
    }
    (v == r as u64 && k >= 1).then_some(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{generate_boundary, generate_crosspolytope, generate_simplex};

    fn f2() -> PrimeField {
        PrimeField::new(2).unwrap()
    }

    #[test]
    fn delta4_bound_is_two_with_three_steps() {
        let d4 = generate_simplex(4);
        let out = weight_lower_bound(&d4, 2, f2(), 1).unwrap();
        let WeightBoundOutcome::Established(b) = out else {
            panic!("expected a bound");
        };
        assert_eq!(b.bound, 2);
        assert_eq!(b.steps.len(), 3);
        assert_eq!(b.steps[0].rule, "acyclic-space-weight");
        assert_eq!(b.steps[1].rule, "equivariant-map-monotonicity");
        assert_eq!(b.steps[2].rule, "join-with-sphere-bound");
        assert!(b.evidence.is_zero_through(2));
    }

    #[test]
    fn crosspolytope_bound() {
        let c4 = generate_crosspolytope(4);
        let out = weight_lower_bound(&c4, 2, f2(), 1).unwrap();
        assert_eq!(out.bound(), Some(2));
    }

    #[test]
    fn no_bound_when_prerequisite_fails() {
        // Conf_2 of two points is two points: not even 0-acyclic
        let s0 = generate_boundary(1);
        let out = weight_lower_bound(&s0, 2, f2(), 0).unwrap();
        let WeightBoundOutcome::NotEstablished { evidence } = out else {
            panic!("expected no bound");
        };
        assert_eq!(evidence.get(0), 1);
    }

    #[test]
    fn rejects_non_prime_power_r() {
        let d4 = generate_simplex(4);
        assert!(matches!(
            weight_lower_bound(&d4, 3, f2(), 1),
            Err(Error::NotPrimePower { r: 3, p: 2 })
        ));
    }
}
