//! Simplicial complexes over densely renumbered integer vertices.
//!
//! A complex stores every non-empty face explicitly (hash-addressable, plus
//! a canonically sorted list) together with its inclusion-maximal facets.
//! Vertices are renumbered to `0..V-1` on construction; the original labels
//! are retained in a label table and used for all serialization.

mod poset;

pub use poset::{face_poset, order_complex, order_complex_capped, OrderComplex, Poset};

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::{Error, Result, DEFAULT_MAX_CELLS};

/// A non-empty face: strictly increasing vertex ids.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Simplex {
    verts: Vec<u32>,
}

impl Simplex {
    /// Builds a simplex from an arbitrary vertex list; sorts and rejects
    /// duplicates and the empty list.
    pub fn new(mut verts: Vec<u32>) -> Result<Self> {
        if verts.is_empty() {
            return Err(Error::EmptySimplex);
        }
        verts.sort_unstable();
        if verts.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::RepeatedVertex { index: 0 });
        }
        Ok(Self { verts })
    }

    /// Wraps a vertex list that is already strictly increasing.
    pub(crate) fn from_sorted(verts: Vec<u32>) -> Self {
        debug_assert!(!verts.is_empty() && verts.windows(2).all(|w| w[0] < w[1]));
        Self { verts }
    }

    pub fn vertices(&self) -> &[u32] {
        &self.verts
    }

    pub fn dim(&self) -> i64 {
        self.verts.len() as i64 - 1
    }

    pub fn len(&self) -> usize {
        self.verts.len()
    }

    pub fn is_empty(&self) -> bool {
        false // a Simplex is non-empty by construction
    }

    pub fn contains_vertex(&self, v: u32) -> bool {
        self.verts.binary_search(&v).is_ok()
    }

    /// Subset test on sorted vertex lists.
    pub fn is_face_of(&self, other: &Simplex) -> bool {
        if self.verts.len() > other.verts.len() {
            return false;
        }
        let mut it = other.verts.iter();
        self.verts.iter().all(|v| it.any(|w| w == v))
    }

    /// Vertex-set disjointness on sorted lists.
    pub fn disjoint_from(&self, other: &Simplex) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.verts.len() && j < other.verts.len() {
            match self.verts[i].cmp(&other.verts[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return false,
            }
        }
        true
    }

    pub fn intersects(&self, other: &Simplex) -> bool {
        !self.disjoint_from(other)
    }

    /// The codimension-1 faces, in the order "drop vertex j".
    pub fn boundary_facets(&self) -> Vec<Simplex> {
        if self.verts.len() == 1 {
            return Vec::new();
        }
        (0..self.verts.len())
            .map(|j| {
                let mut v = self.verts.clone();
                v.remove(j);
                Simplex::from_sorted(v)
            })
            .collect()
    }

    /// All non-empty subsets (including the simplex itself).
    pub fn nonempty_subsets(&self) -> Vec<Simplex> {
        let s = self.verts.len();
        assert!(s < 64, "face too large to enumerate subsets");
        let mut out = Vec::with_capacity((1usize << s) - 1);
        for mask in 1u64..(1u64 << s) {
            let mut v = Vec::with_capacity(mask.count_ones() as usize);
            for (j, &vert) in self.verts.iter().enumerate() {
                if mask & (1 << j) != 0 {
                    v.push(vert);
                }
            }
            out.push(Simplex::from_sorted(v));
        }
        out
    }
}

impl fmt::Debug for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.verts)
    }
}

/// Canonical face order: by dimension, then lexicographic on vertices.
pub fn canonical_face_cmp(a: &Simplex, b: &Simplex) -> std::cmp::Ordering {
    a.len().cmp(&b.len()).then_with(|| a.verts.cmp(&b.verts))
}

/// A finite simplicial complex; immutable after construction.
#[derive(Clone)]
pub struct SimplicialComplex {
    labels: Vec<u64>,
    faces: Vec<Simplex>,
    index: HashMap<Simplex, usize>,
    facets: Vec<Simplex>,
}

impl SimplicialComplex {
    /// The complex with no faces.
    pub fn empty() -> Self {
        Self { labels: Vec::new(), faces: Vec::new(), index: HashMap::new(), facets: Vec::new() }
    }

    /// Downward closure of the given facets. Vertices are densely
    /// renumbered (sorted by original label); an empty facet list yields
    /// the empty complex.
    pub fn from_facets(facets: &[Vec<u64>]) -> Result<Self> {
        Self::from_facets_with_limit(facets, DEFAULT_MAX_CELLS)
    }

    pub fn from_facets_with_limit(facets: &[Vec<u64>], max_faces: usize) -> Result<Self> {
        for (index, f) in facets.iter().enumerate() {
            if f.is_empty() {
                return Err(Error::EmptySimplex);
            }
            let mut sorted = f.clone();
            sorted.sort_unstable();
            if sorted.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::RepeatedVertex { index });
            }
        }
        if facets.is_empty() {
            return Ok(Self::empty());
        }
        let mut labels: Vec<u64> = facets.iter().flatten().copied().collect();
        labels.sort_unstable();
        labels.dedup();
        let to_dense: HashMap<u64, u32> =
            labels.iter().enumerate().map(|(i, &l)| (l, i as u32)).collect();

        let mut face_set: HashSet<Simplex> = HashSet::new();
        for f in facets {
            let dense: Vec<u32> = {
                let mut v: Vec<u32> = f.iter().map(|l| to_dense[l]).collect();
                v.sort_unstable();
                v
            };
            let top = Simplex::from_sorted(dense);
            if top.len() >= 64 || (1u128 << top.len()) - 1 > max_faces as u128 {
                return Err(Error::GuardExceeded { limit: max_faces });
            }
            for sub in top.nonempty_subsets() {
                face_set.insert(sub);
                if face_set.len() > max_faces {
                    return Err(Error::GuardExceeded { limit: max_faces });
                }
            }
        }
        let faces: Vec<Simplex> = face_set.into_iter().collect();
        Ok(Self::assemble(faces, labels))
    }

    /// Builds from an explicitly downward-closed face set given in dense
    /// ids of a parent complex; vertices are re-renumbered against
    /// `parent_labels`.
    pub(crate) fn from_face_set(faces: Vec<Simplex>, parent_labels: &[u64]) -> Self {
        if faces.is_empty() {
            return Self::empty();
        }
        let mut used: Vec<u32> = faces.iter().flat_map(|f| f.verts.iter().copied()).collect();
        used.sort_unstable();
        used.dedup();
        let remap: HashMap<u32, u32> =
            used.iter().enumerate().map(|(i, &v)| (v, i as u32)).collect();
        let labels: Vec<u64> = used.iter().map(|&v| parent_labels[v as usize]).collect();
        let faces: Vec<Simplex> = faces
            .into_iter()
            .map(|f| Simplex::from_sorted(f.verts.iter().map(|v| remap[v]).collect()))
            .collect();
        Self::assemble(faces, labels)
    }

    fn assemble(mut faces: Vec<Simplex>, labels: Vec<u64>) -> Self {
        faces.sort_by(canonical_face_cmp);
        faces.dedup();
        debug_assert!(
            faces.iter().all(|f| f
                .boundary_facets()
                .iter()
                .all(|b| faces.binary_search_by(|x| canonical_face_cmp(x, b)).is_ok())),
            "face set not downward closed"
        );
        let index: HashMap<Simplex, usize> =
            faces.iter().enumerate().map(|(i, f)| (f.clone(), i)).collect();
        // A face is a facet iff it is nobody's codim-1 face.
        let mut maximal = vec![true; faces.len()];
        for f in &faces {
            for b in f.boundary_facets() {
                if let Some(&i) = index.get(&b) {
                    maximal[i] = false;
                }
            }
        }
        let facets: Vec<Simplex> = faces
            .iter()
            .zip(&maximal)
            .filter(|(_, &m)| m)
            .map(|(f, _)| f.clone())
            .collect();
        Self { labels, faces, index, facets }
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    /// Original label of a dense vertex id.
    pub fn label(&self, v: u32) -> u64 {
        self.labels[v as usize]
    }

    pub fn labels(&self) -> &[u64] {
        &self.labels
    }

    /// Dense id for an original label.
    pub fn dense_id(&self, label: u64) -> Option<u32> {
        self.labels.binary_search(&label).ok().map(|i| i as u32)
    }

    /// All faces in canonical (dimension, lexicographic) order.
    pub fn faces(&self) -> &[Simplex] {
        &self.faces
    }

    pub fn facets(&self) -> &[Simplex] {
        &self.facets
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        self.index.contains_key(s)
    }

    pub fn face_id(&self, s: &Simplex) -> Option<usize> {
        self.index.get(s).copied()
    }

    /// Dimension of the complex; -1 for the empty complex.
    pub fn dim(&self) -> i64 {
        self.faces.last().map_or(-1, |f| f.dim())
    }

    /// Face counts indexed by dimension.
    pub fn face_counts_by_dim(&self) -> Vec<usize> {
        let mut counts = vec![0usize; (self.dim() + 1).max(0) as usize];
        for f in &self.faces {
            counts[f.dim() as usize] += 1;
        }
        counts
    }

    /// Non-reduced Euler characteristic.
    pub fn euler_characteristic(&self) -> i64 {
        self.faces.iter().map(|f| if f.dim() % 2 == 0 { 1 } else { -1 }).sum()
    }

    /// Builds a face from original labels, checking membership.
    pub fn simplex_from_labels(&self, labels: &[u64]) -> Result<Simplex> {
        let mut verts = Vec::with_capacity(labels.len());
        for &l in labels {
            let v = self
                .dense_id(l)
                .ok_or_else(|| Error::NotAFace(labels.to_vec()))?;
            verts.push(v);
        }
        let s = Simplex::new(verts)?;
        if self.contains(&s) {
            Ok(s)
        } else {
            Err(Error::NotAFace(labels.to_vec()))
        }
    }

    /// Original labels of a face.
    pub fn face_labels(&self, s: &Simplex) -> Vec<u64> {
        s.verts.iter().map(|&v| self.label(v)).collect()
    }

    /// The n-skeleton; `n = -1` gives the empty complex, `n >= dim` the
    /// complex itself.
    pub fn skeleton(&self, n: i64) -> SimplicialComplex {
        if n < 0 || self.is_empty() {
            return SimplicialComplex::empty();
        }
        if n >= self.dim() {
            return self.clone();
        }
        let faces: Vec<Simplex> =
            self.faces.iter().filter(|f| f.dim() <= n).cloned().collect();
        SimplicialComplex::from_face_set(faces, &self.labels)
    }

    /// The deletion subcomplex: faces disjoint from every `sigma`.
    /// Each `sigma` must be a face (given in dense ids of `self`).
    pub fn deletion(&self, sigmas: &[Simplex]) -> Result<SimplicialComplex> {
        for s in sigmas {
            if !self.contains(s) {
                let shown: Vec<u64> = s
                    .vertices()
                    .iter()
                    .map(|&v| self.labels.get(v as usize).copied().unwrap_or(v as u64))
                    .collect();
                return Err(Error::NotAFace(shown));
            }
        }
        let faces: Vec<Simplex> = self
            .faces
            .iter()
            .filter(|f| sigmas.iter().all(|s| f.disjoint_from(s)))
            .cloned()
            .collect();
        Ok(SimplicialComplex::from_face_set(faces, &self.labels))
    }

    /// Join of two complexes after disjoint relabeling; labels are reset
    /// to `0..V-1`.
    pub fn join(&self, other: &SimplicialComplex) -> SimplicialComplex {
        if self.is_empty() {
            return relabel_fresh(other);
        }
        if other.is_empty() {
            return relabel_fresh(self);
        }
        let off = self.vertex_count() as u32;
        let mut faces: Vec<Simplex> = Vec::new();
        let shifted: Vec<Simplex> = other
            .faces
            .iter()
            .map(|f| Simplex::from_sorted(f.verts.iter().map(|v| v + off).collect()))
            .collect();
        faces.extend(self.faces.iter().cloned());
        faces.extend(shifted.iter().cloned());
        for a in &self.faces {
            for b in &shifted {
                let mut v = a.verts.clone();
                v.extend_from_slice(&b.verts);
                faces.push(Simplex::from_sorted(v));
            }
        }
        let labels: Vec<u64> = (0..(self.vertex_count() + other.vertex_count()) as u64).collect();
        SimplicialComplex::from_face_set(faces, &labels)
    }

    /// Canonical JSON document (facets in original labels, canonical order).
    pub fn to_json(&self) -> ComplexJson {
        ComplexJson {
            format_version: 1,
            labels: self.labels.clone(),
            facets: self.facets.iter().map(|f| self.face_labels(f)).collect(),
        }
    }

    pub fn from_json(doc: &ComplexJson) -> Result<Self> {
        if doc.format_version != 1 {
            return Err(Error::BadInput(format!(
                "unsupported format_version {}",
                doc.format_version
            )));
        }
        let c = Self::from_facets(&doc.facets)?;
        if !doc.labels.is_empty() && doc.labels != c.labels {
            return Err(Error::BadInput(
                "label table does not match the vertices used by the facets".into(),
            ));
        }
        Ok(c)
    }

    /// SHA-256 of the canonical JSON document, as lowercase hex.
    pub fn digest(&self) -> String {
        let doc = serde_json::to_string(&self.to_json()).expect("complex serializes");
        let mut h = Sha256::new();
        h.update(doc.as_bytes());
        let out = h.finalize();
        out.iter().map(|b| format!("{b:02x}")).collect()
    }
}

impl fmt::Debug for SimplicialComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SimplicialComplex(V={}, faces={})", self.vertex_count(), self.face_count())
    }
}

fn relabel_fresh(x: &SimplicialComplex) -> SimplicialComplex {
    let labels: Vec<u64> = (0..x.vertex_count() as u64).collect();
    SimplicialComplex::from_face_set(x.faces.clone(), &labels)
}

/// On-disk complex format.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComplexJson {
    pub format_version: u32,
    #[serde(default)]
    pub labels: Vec<u64>,
    pub facets: Vec<Vec<u64>>,
}

/// The solid n-simplex on vertices `0..=n`.
pub fn generate_simplex(n: u32) -> SimplicialComplex {
    SimplicialComplex::from_facets(&[(0..=n as u64).collect()]).expect("simplex generator")
}

/// The boundary of the n-simplex (a simplicial (n-1)-sphere); `n = 0`
/// yields the empty complex.
pub fn generate_boundary(n: u32) -> SimplicialComplex {
    if n == 0 {
        return SimplicialComplex::empty();
    }
    let all: Vec<u64> = (0..=n as u64).collect();
    let facets: Vec<Vec<u64>> = (0..=n as usize)
        .map(|skip| all.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, &v)| v).collect())
        .collect();
    SimplicialComplex::from_facets(&facets).expect("boundary generator")
}

/// The boundary complex of the d-dimensional cross-polytope: the d-fold
/// join of the 2-point complex, a simplicial (d-1)-sphere on 2d vertices.
/// Vertices `2i` and `2i+1` form the i-th antipodal pair.
pub fn generate_crosspolytope(d: u32) -> SimplicialComplex {
    assert!(d >= 1, "cross-polytope dimension must be positive");
    let mut facets: Vec<Vec<u64>> = Vec::with_capacity(1 << d);
    for mask in 0u64..(1 << d) {
        facets.push((0..d as u64).map(|i| 2 * i + ((mask >> i) & 1)).collect());
    }
    SimplicialComplex::from_facets(&facets).expect("cross-polytope generator")
}

/// Suspension: the join with the 2-point complex.
pub fn suspension(x: &SimplicialComplex) -> SimplicialComplex {
    x.join(&generate_boundary(1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_facets_counts() {
        let t = SimplicialComplex::from_facets(&[vec![0, 1, 2]]).unwrap();
        assert_eq!(t.face_count(), 7);
        let d4 = generate_simplex(4);
        assert_eq!(d4.face_count(), 31);
        let bd3 = generate_boundary(3);
        assert_eq!(bd3.face_count(), 14);
        assert_eq!(bd3.facets().len(), 4);
    }

    #[test]
    fn from_facets_rejects_repeats_and_empty_faces() {
        assert!(matches!(
            SimplicialComplex::from_facets(&[vec![0, 1, 1]]),
            Err(Error::RepeatedVertex { .. })
        ));
        assert!(matches!(
            SimplicialComplex::from_facets(&[vec![]]),
            Err(Error::EmptySimplex)
        ));
        // Empty facet *list* is allowed and flagged via is_empty.
        let e = SimplicialComplex::from_facets(&[]).unwrap();
        assert!(e.is_empty());
    }

    #[test]
    fn renumbering_keeps_labels() {
        let c = SimplicialComplex::from_facets(&[vec![10, 7], vec![7, 42]]).unwrap();
        assert_eq!(c.labels(), &[7, 10, 42]);
        assert_eq!(c.vertex_count(), 3);
        assert_eq!(c.dense_id(42), Some(2));
        let s = c.simplex_from_labels(&[42, 7]).unwrap();
        assert_eq!(s.vertices(), &[0, 2]);
    }

    #[test]
    fn skeleton_examples() {
        let d4 = generate_simplex(4);
        let k5 = d4.skeleton(1);
        assert_eq!(k5.face_count(), 15);
        assert_eq!(k5.face_counts_by_dim(), vec![5, 10]);
        // identity case
        assert_eq!(d4.skeleton(4).face_count(), 31);
        assert_eq!(d4.skeleton(10).face_count(), 31);
        // empty case
        assert!(d4.skeleton(-1).is_empty());
        let d6 = generate_simplex(6);
        assert_eq!(d6.skeleton(2).face_count(), 63);
    }

    #[test]
    fn skeleton_composition() {
        let d5 = generate_simplex(5);
        for (m, n) in [(3i64, 1i64), (1, 3), (2, 2), (0, 4)] {
            let a = d5.skeleton(m).skeleton(n);
            let b = d5.skeleton(m.min(n));
            assert_eq!(a.faces(), b.faces());
        }
    }

    #[test]
    fn deletion_examples() {
        let d4 = generate_simplex(4);
        let s0 = d4.simplex_from_labels(&[0]).unwrap();
        let del = d4.deletion(&[s0]).unwrap();
        assert_eq!(del.face_count(), 15);
        assert_eq!(del.labels(), &[1, 2, 3, 4]);

        let s01 = d4.simplex_from_labels(&[0, 1]).unwrap();
        let s23 = d4.simplex_from_labels(&[2, 3]).unwrap();
        let del2 = d4.deletion(&[s01, s23]).unwrap();
        assert_eq!(del2.face_count(), 1);
        assert_eq!(del2.labels(), &[4]);

        let s012 = d4.simplex_from_labels(&[0, 1, 2]).unwrap();
        let s34 = d4.simplex_from_labels(&[3, 4]).unwrap();
        let del3 = d4.deletion(&[s012, s34]).unwrap();
        assert!(del3.is_empty());

        let not_face = Simplex::new(vec![0, 9]).unwrap();
        assert!(d4.deletion(&[not_face]).is_err());
    }

    #[test]
    fn deletion_order_independent() {
        let d5 = generate_simplex(5);
        let a = d5.simplex_from_labels(&[0, 1]).unwrap();
        let b = d5.simplex_from_labels(&[3]).unwrap();
        let step = d5.deletion(std::slice::from_ref(&a)).unwrap();
        let b_in_step = step.simplex_from_labels(&[3]).unwrap();
        let two_step = step.deletion(&[b_in_step]).unwrap();
        let direct = d5.deletion(&[a, b]).unwrap();
        assert_eq!(two_step.to_json().facets, direct.to_json().facets);
    }

    #[test]
    fn join_examples() {
        let pt = SimplicialComplex::from_facets(&[vec![0]]).unwrap();
        let edge = pt.join(&pt);
        assert_eq!(edge.face_count(), 3);
        assert_eq!(edge.dim(), 1);

        let s0 = generate_boundary(1);
        let square = s0.join(&s0);
        assert_eq!(square.face_counts_by_dim(), vec![4, 4]);

        // join associates up to relabeling (face-count check)
        let a = generate_boundary(2);
        let left = a.join(&s0).join(&pt);
        let right = a.join(&s0.join(&pt));
        assert_eq!(left.face_counts_by_dim(), right.face_counts_by_dim());
    }

    #[test]
    fn crosspolytope_generator() {
        let c2 = generate_crosspolytope(2);
        assert_eq!(c2.face_counts_by_dim(), vec![4, 4]);
        let c4 = generate_crosspolytope(4);
        assert_eq!(c4.vertex_count(), 8);
        assert_eq!(c4.face_count(), 80);
        assert_eq!(c4.dim(), 3);
        // antipodal pairs are not faces
        assert!(c4.simplex_from_labels(&[0, 1]).is_err());
    }

    #[test]
    fn downward_closure_property() {
        let c = generate_crosspolytope(3);
        for f in c.faces() {
            for sub in f.nonempty_subsets() {
                assert!(c.contains(&sub));
            }
        }
    }

    #[test]
    fn guard_trips() {
        let big: Vec<u64> = (0..30).collect();
        assert!(matches!(
            SimplicialComplex::from_facets_with_limit(&[big], 1000),
            Err(Error::GuardExceeded { .. })
        ));
    }

    #[test]
    fn json_round_trip_and_digest() {
        let c = generate_crosspolytope(3);
        let doc = c.to_json();
        let back = SimplicialComplex::from_json(&doc).unwrap();
        assert_eq!(back.to_json().facets, doc.facets);
        assert_eq!(back.digest(), c.digest());
        let other = generate_simplex(3);
        assert_ne!(other.digest(), c.digest());
    }
}
