//! Saturation checking: for tuples of faces σ_1, …, σ_k (k <= r, not
//! necessarily disjoint), the union of open stars ∩_i (X - X(σ_i)) is the
//! up-set U = {τ : τ ∩ σ_i ≠ ∅ for all i} of the face poset, and is
//! homotopy equivalent to the order complex Δ(U). Contractibility of that
//! space is certified soundly (cone point or full collapse) or tested by
//! the necessary F_p-acyclicity condition; the checker never over-claims.

use serde::Serialize;

use crate::complex::{order_complex, Poset, Simplex, SimplicialComplex};
use crate::exec;
use crate::homology::{betti_of_complex, BettiVector, PrimeField};
use crate::{Error, Result, DEFAULT_MAX_CELLS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConeKind {
    Maximum,
    Minimum,
}

/// A face of Δ(U): a chain of faces of X, recorded label-wise.
pub type LabeledChain = Vec<Vec<u64>>;

/// A replayable contractibility witness.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ContractibilityWitness {
    /// U has an extreme element; Δ(U) is a cone with this apex.
    ConeApex { face: Vec<u64>, kind: ConeKind },
    /// Δ(U) collapses to a point by these elementary collapses.
    Collapse { steps: Vec<(LabeledChain, LabeledChain)> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TupleVerdict {
    Empty,
    ContractibleCertified,
    AcyclicOnly,
    Failed,
}

#[derive(Debug, Clone, Serialize)]
pub struct SaturationRecord {
    pub tuple: Vec<Vec<u64>>,
    pub verdict: TupleVerdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<ContractibilityWitness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub betti: Option<BettiVector>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SaturationVerdict {
    SaturatedCertified,
    SaturatedNecessaryOnly,
    NotSaturated,
}

#[derive(Debug, Clone, Serialize)]
pub struct SaturationReport {
    pub complex_digest: String,
    pub r: usize,
    pub p: u32,
    pub tuple_count: usize,
    pub records: Vec<SaturationRecord>,
    pub overall: SaturationVerdict,
}

/// All tuples of 1..=r distinct faces (no disjointness requirement), in
/// lexicographic order.
fn enumerate_face_tuples(
    x: &SimplicialComplex,
    r: usize,
    limit: usize,
) -> Result<Vec<Vec<Simplex>>> {
    let mut faces_lex: Vec<Simplex> = x.faces().to_vec();
    faces_lex.sort();
    let mut out: Vec<Vec<Simplex>> = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    fn recurse(
        faces: &[Simplex],
        from: usize,
        r: usize,
        limit: usize,
        stack: &mut Vec<usize>,
        out: &mut Vec<Vec<Simplex>>,
    ) -> Result<()> {
        if stack.len() == r {
            return Ok(());
        }
        for idx in from..faces.len() {
            stack.push(idx);
            if out.len() >= limit {
                return Err(Error::GuardExceeded { limit });
            }
            out.push(stack.iter().map(|&i| faces[i].clone()).collect());
            recurse(faces, idx + 1, r, limit, stack, out)?;
            stack.pop();
        }
        Ok(())
    }
    recurse(&faces_lex, 0, r, limit, &mut stack, &mut out)?;
    Ok(out)
}

/// The up-set U for a tuple: faces meeting every σ_i.
fn up_set_faces(x: &SimplicialComplex, tuple: &[Simplex]) -> Vec<Simplex> {
    x.faces()
        .iter()
        .filter(|t| tuple.iter().all(|s| t.intersects(s)))
        .cloned()
        .collect()
}

fn sub_poset(faces: Vec<Simplex>) -> Poset<Simplex> {
    let dims: Vec<i64> = faces.iter().map(Simplex::dim).collect();
    Poset::from_relation(faces, dims, |a, b| a != b && a.is_face_of(b))
}

/// The maximum of an inclusion family, if any. A maximum must be of
/// maximal cardinality, so testing one longest member suffices.
fn inclusion_maximum(faces: &[Simplex]) -> Option<usize> {
    let cand = (0..faces.len()).max_by_key(|&i| faces[i].len())?;
    faces
        .iter()
        .all(|t| t.is_face_of(&faces[cand]))
        .then_some(cand)
}

fn inclusion_minimum(faces: &[Simplex]) -> Option<usize> {
    let cand = (0..faces.len()).min_by_key(|&i| faces[i].len())?;
    faces
        .iter()
        .all(|t| faces[cand].is_face_of(t))
        .then_some(cand)
}

/// Runs the saturation check for tuples of up to r faces over F_p.
pub fn check_saturated(
    x: &SimplicialComplex,
    r: usize,
    field: PrimeField,
) -> Result<SaturationReport> {
    check_saturated_with_limit(x, r, field, DEFAULT_MAX_CELLS)
}

pub fn check_saturated_with_limit(
    x: &SimplicialComplex,
    r: usize,
    field: PrimeField,
    limit: usize,
) -> Result<SaturationReport> {
    if r < 1 {
        return Err(Error::BadInput("saturation needs r >= 1".into()));
    }
    let tuples = enumerate_face_tuples(x, r, limit)?;
    let records: Vec<SaturationRecord> = exec::map_collect(&tuples, |tuple| {
        let labels: Vec<Vec<u64>> = tuple.iter().map(|s| x.face_labels(s)).collect();
        let up = up_set_faces(x, tuple);
        if up.is_empty() {
            return SaturationRecord {
                tuple: labels,
                verdict: TupleVerdict::Empty,
                witness: None,
                betti: None,
            };
        }
        if let Some(apex) = inclusion_maximum(&up) {
            return SaturationRecord {
                tuple: labels,
                verdict: TupleVerdict::ContractibleCertified,
                witness: Some(ContractibilityWitness::ConeApex {
                    face: x.face_labels(&up[apex]),
                    kind: ConeKind::Maximum,
                }),
                betti: None,
            };
        }
        if let Some(apex) = inclusion_minimum(&up) {
            return SaturationRecord {
                tuple: labels,
                verdict: TupleVerdict::ContractibleCertified,
                witness: Some(ContractibilityWitness::ConeApex {
                    face: x.face_labels(&up[apex]),
                    kind: ConeKind::Minimum,
                }),
                betti: None,
            };
        }
        let poset = sub_poset(up);
        let delta = order_complex(&poset);
        if let Some(steps) = greedy_collapse(&delta) {
            let to_labels = |s: &Simplex| -> Vec<Vec<u64>> {
                s.vertices()
                    .iter()
                    .map(|&v| x.face_labels(poset.element(v as usize)))
                    .collect()
            };
            return SaturationRecord {
                tuple: labels,
                verdict: TupleVerdict::ContractibleCertified,
                witness: Some(ContractibilityWitness::Collapse {
                    steps: steps.iter().map(|(a, b)| (to_labels(a), to_labels(b))).collect(),
                }),
                betti: None,
            };
        }
        let betti = betti_of_complex(&delta, field, delta.dim());
        let verdict = if betti.is_zero_through(delta.dim()) {
            TupleVerdict::AcyclicOnly
        } else {
            TupleVerdict::Failed
        };
        SaturationRecord { tuple: labels, verdict, witness: None, betti: Some(betti) }
    });
    let overall = if records.iter().any(|r| r.verdict == TupleVerdict::Failed) {
        SaturationVerdict::NotSaturated
    } else if records.iter().any(|r| r.verdict == TupleVerdict::AcyclicOnly) {
        SaturationVerdict::SaturatedNecessaryOnly
    } else {
        SaturationVerdict::SaturatedCertified
    };
    Ok(SaturationReport {
        complex_digest: x.digest(),
        r,
        p: field.p(),
        tuple_count: records.len(),
        records,
        overall,
    })
}

/// Greedy elementary collapsing. Returns the collapse sequence if the
/// complex reduces to a single vertex, `None` if it gets stuck. A face is
/// free when exactly one other face strictly contains it; the pair is
/// then removed. Deterministic: the candidate with the smallest canonical
/// id is collapsed first.
pub fn greedy_collapse(x: &SimplicialComplex) -> Option<Vec<(Simplex, Simplex)>> {
    let n = x.face_count();
    if n == 0 {
        return None;
    }
    // strict superface lists via subset enumeration
    let mut supers: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (gid, g) in x.faces().iter().enumerate() {
        for sub in g.nonempty_subsets() {
            let sid = x.face_id(&sub).expect("closed complex");
            if sid != gid {
                supers[sid].push(gid);
            }
        }
    }
    let mut alive = vec![true; n];
    let mut alive_count = n;
    let mut super_count: Vec<usize> = supers.iter().map(Vec::len).collect();
    let mut candidates: std::collections::BTreeSet<usize> =
        (0..n).filter(|&i| super_count[i] == 1).collect();
    let mut steps = Vec::new();
    while let Some(&free) = candidates.iter().next() {
        candidates.remove(&free);
        if !alive[free] || super_count[free] != 1 {
            continue;
        }
        let coface = *supers[free].iter().find(|&&g| alive[g]).expect("count says one");
        alive[free] = false;
        alive[coface] = false;
        alive_count -= 2;
        steps.push((x.faces()[free].clone(), x.faces()[coface].clone()));
        for removed in [free, coface] {
            for sub in x.faces()[removed].nonempty_subsets() {
                let sid = x.face_id(&sub).unwrap();
                if sid != removed && alive[sid] {
                    super_count[sid] -= 1;
                    if super_count[sid] == 1 {
                        candidates.insert(sid);
                    }
                }
            }
        }
    }
    if alive_count == 1 {
        Some(steps)
    } else {
        None
    }
}

/// Replays a cone witness: recomputes the up-set for the tuple and checks
/// the apex is extreme in it.
pub fn replay_cone(
    x: &SimplicialComplex,
    tuple: &[Vec<u64>],
    apex: &[u64],
    kind: ConeKind,
) -> Result<bool> {
    let tuple: Vec<Simplex> = tuple
        .iter()
        .map(|l| x.simplex_from_labels(l))
        .collect::<Result<_>>()?;
    let apex = x.simplex_from_labels(apex)?;
    let up = up_set_faces(x, &tuple);
    if !up.contains(&apex) {
        return Ok(false);
    }
    let ok = match kind {
        ConeKind::Maximum => up.iter().all(|t| t.is_face_of(&apex)),
        ConeKind::Minimum => up.iter().all(|t| apex.is_face_of(t)),
    };
    Ok(ok)
}

/// Replays a collapse sequence on a complex: checks each step removes a
/// genuinely free face together with its unique coface and that a single
/// vertex remains.
pub fn replay_collapse(x: &SimplicialComplex, steps: &[(Simplex, Simplex)]) -> bool {
    let mut alive: std::collections::HashSet<Simplex> = x.faces().iter().cloned().collect();
    for (free, coface) in steps {
        if !alive.contains(free) || !alive.contains(coface) || !free.is_face_of(coface) {
            return false;
        }
        let strict_supers =
            alive.iter().filter(|g| *g != free && free.is_face_of(g)).count();
        if strict_supers != 1 {
            return false;
        }
        alive.remove(free);
        alive.remove(coface);
    }
    alive.len() == 1 && alive.iter().next().unwrap().len() == 1
}
