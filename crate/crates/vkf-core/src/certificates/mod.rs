//! Machine-checkable certificates: complementary acyclicity sweeps,
//! saturation reports, weight lower bounds, and the full hypothesis
//! check that ties them together.

mod saturation;
mod weight;

pub use saturation::{
    check_saturated, check_saturated_with_limit, greedy_collapse, replay_collapse, replay_cone,
    ConeKind, ContractibilityWitness, SaturationRecord, SaturationReport, SaturationVerdict,
    TupleVerdict,
};
pub use weight::{weight_lower_bound, WeightBound, WeightBoundOutcome, WeightStep};

use serde::Serialize;

use crate::complex::{Simplex, SimplicialComplex};
use crate::exec;
use crate::homology::{betti_of_complex, BettiVector, PrimeField};
use crate::{Error, Result, DEFAULT_MAX_CELLS};

/// One deletion test inside an acyclicity certificate.
#[derive(Debug, Clone, Serialize)]
pub struct TupleRecord {
    /// the faces σ_1, …, σ_i, as original labels, lexicographic
    pub tuple: Vec<Vec<u64>>,
    pub sum_dim: i64,
    /// the deletion must be acyclic through this degree (>= -1)
    pub required_level: i64,
    pub deletion_nonempty: bool,
    pub betti: BettiVector,
    pub pass: bool,
}

/// Verdict of the complementary-acyclicity sweep: for every tuple of at
/// most k pairwise disjoint faces with total dimension <= n+1 (the empty
/// tuple included), the deletion is non-empty and acyclic through
/// n - Σdim over F_p.
#[derive(Debug, Clone, Serialize)]
pub struct AcyclicityCertificate {
    pub complex_digest: String,
    pub k: usize,
    pub n: i64,
    pub p: u32,
    pub tuple_count: usize,
    pub records: Vec<TupleRecord>,
    pub verdict: bool,
}

impl AcyclicityCertificate {
    /// The first failing record, if any.
    pub fn first_failure(&self) -> Option<&TupleRecord> {
        self.records.iter().find(|r| !r.pass)
    }
}

/// All tuples of up to `max_i` pairwise disjoint faces with total
/// dimension <= `max_sum_dim`, unordered, in lexicographic order on the
/// sorted face sequences (the empty tuple first).
pub(crate) fn enumerate_disjoint_tuples(
    x: &SimplicialComplex,
    max_i: usize,
    max_sum_dim: i64,
    limit: usize,
) -> Result<Vec<Vec<Simplex>>> {
    let mut faces_lex: Vec<Simplex> = x.faces().to_vec();
    faces_lex.sort();
    let mut out = vec![Vec::new()];
    let mut stack: Vec<Simplex> = Vec::new();
    fn recurse(
        faces: &[Simplex],
        from: usize,
        max_i: usize,
        budget: i64,
        limit: usize,
        stack: &mut Vec<Simplex>,
        out: &mut Vec<Vec<Simplex>>,
    ) -> Result<()> {
        if stack.len() == max_i {
            return Ok(());
        }
        for idx in from..faces.len() {
            let f = &faces[idx];
            if f.dim() > budget || stack.iter().any(|s| s.intersects(f)) {
                continue;
            }
            stack.push(f.clone());
            if out.len() >= limit {
                return Err(Error::GuardExceeded { limit });
            }
            out.push(stack.clone());
            recurse(faces, idx + 1, max_i, budget - f.dim(), limit, stack, out)?;
            stack.pop();
        }
        Ok(())
    }
    recurse(&faces_lex, 0, max_i, max_sum_dim, limit, &mut stack, &mut out)?;
    Ok(out)
}

/// Runs the complementary-acyclicity sweep for (k, n) over F_p.
pub fn check_complementary_acyclic(
    x: &SimplicialComplex,
    k: usize,
    n: i64,
    field: PrimeField,
) -> Result<AcyclicityCertificate> {
    check_complementary_acyclic_with_limit(x, k, n, field, DEFAULT_MAX_CELLS)
}

pub fn check_complementary_acyclic_with_limit(
    x: &SimplicialComplex,
    k: usize,
    n: i64,
    field: PrimeField,
    limit: usize,
) -> Result<AcyclicityCertificate> {
    if n < -1 {
        return Err(Error::BadInput(format!("acyclicity level n must be >= -1, got {n}")));
    }
    let tuples = enumerate_disjoint_tuples(x, k, n + 1, limit)?;
    let records: Vec<TupleRecord> = exec::map_collect(&tuples, |tuple| {
        let sum_dim: i64 = tuple.iter().map(Simplex::dim).sum();
        let required_level = n - sum_dim;
        let deletion = x.deletion(tuple).expect("enumerated faces are faces");
        let betti = betti_of_complex(&deletion, field, required_level.max(-1));
        let deletion_nonempty = !deletion.is_empty();
        let pass = deletion_nonempty && betti.is_zero_through(required_level);
        TupleRecord {
            tuple: tuple.iter().map(|s| x.face_labels(s)).collect(),
            sum_dim,
            required_level,
            deletion_nonempty,
            betti,
            pass,
        }
    });
    let verdict = records.iter().all(|r| r.pass);
    Ok(AcyclicityCertificate {
        complex_digest: x.digest(),
        k,
        n,
        p: field.p(),
        tuple_count: records.len(),
        records,
        verdict,
    })
}

/// The contradiction arithmetic behind a certified instance: a weight
/// lower bound rn for the deleted product of the skeleton against the
/// weight (r-1)d - 1 of the sphere a counterexample map would produce.
#[derive(Debug, Clone, Serialize)]
pub struct ContradictionArithmetic {
    pub conf_weight_lower: i64,
    pub sphere_weight: i64,
    pub excluded: bool,
}

/// Full hypothesis report for the intersection theorem on (X, r, p, k, n, d).
#[derive(Debug, Clone, Serialize)]
pub struct HypothesisReport {
    pub complex_digest: String,
    pub r: usize,
    pub p: u32,
    pub k: u32,
    pub n: i64,
    pub d: i64,
    pub prime_power_ok: bool,
    /// (r-1)d <= rn
    pub dimension_inequality_ok: bool,
    pub acyclicity: AcyclicityCertificate,
    pub contradiction: ContradictionArithmetic,
    pub verdict: bool,
    pub failing: Vec<String>,
}

/// Certifies the hypotheses: r = p^k for a prime p, (r-1)d <= rn, and X
/// (r-1)-complementary (r(n+1)-2)-acyclic over F_p. A true verdict means
/// every continuous map from the n-skeleton to R^d has r pairwise
/// disjoint faces with intersecting images.
pub fn certify_hypotheses(
    x: &SimplicialComplex,
    r: usize,
    field: PrimeField,
    k: u32,
    n: i64,
    d: i64,
) -> Result<HypothesisReport> {
    if r < 2 {
        return Err(Error::BadInput(format!("certification needs r >= 2, got {r}")));
    }
    let p = field.p();
    let prime_power_ok = k >= 1 && (p as u64).checked_pow(k) == Some(r as u64);
    let dimension_inequality_ok = (r as i64 - 1) * d <= r as i64 * n;
    let acyclicity =
        check_complementary_acyclic(x, r - 1, r as i64 * (n + 1) - 2, field)?;
    let conf_weight_lower = r as i64 * n;
    let sphere_weight = (r as i64 - 1) * d - 1;
    let contradiction = ContradictionArithmetic {
        conf_weight_lower,
        sphere_weight,
        excluded: conf_weight_lower > sphere_weight,
    };
    let mut failing = Vec::new();
    if !prime_power_ok {
        failing.push(format!("r = {r} is not {p}^{k}"));
    }
    if !dimension_inequality_ok {
        failing.push(format!("(r-1)d = {} exceeds rn = {}", (r as i64 - 1) * d, r as i64 * n));
    }
    if !acyclicity.verdict {
        let detail = acyclicity
            .first_failure()
            .map(|rec| format!("{:?}", rec.tuple))
            .unwrap_or_default();
        failing.push(format!("complementary acyclicity fails at tuple {detail}"));
    }
    let verdict = failing.is_empty();
    Ok(HypothesisReport {
        complex_digest: x.digest(),
        r,
        p,
        k,
        n,
        d,
        prime_power_ok,
        dimension_inequality_ok,
        acyclicity,
        contradiction,
        verdict,
        failing,
    })
}
