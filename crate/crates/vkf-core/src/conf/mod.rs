//! The r-fold deleted product `Conf_r(X)`: ordered r-tuples of pairwise
//! disjoint faces, as a regular cell complex whose cells are products of
//! simplices, ordered by componentwise inclusion. The symmetric group (and
//! its subgroups) act by permuting coordinates.

mod action;
mod maps;

pub use action::{koszul_sign, GroupKind, PermAction};
pub use maps::{
    join_decomposition, nerve_map, permute_mask, psi_map, upper_ideal_cover, JoinDecomposition,
    JoinSide, NerveMap, PlMapOnSubdivision, UpperIdealCover,
};

use std::collections::HashMap;
use std::fmt;

use crate::complex::{Poset, Simplex, SimplicialComplex};
use crate::{Error, Result, DEFAULT_MAX_CELLS};

/// A product cell: an r-tuple of pairwise disjoint faces.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProductCell {
    parts: Vec<Simplex>,
}

impl ProductCell {
    pub fn new(parts: Vec<Simplex>) -> Result<Self> {
        for i in 0..parts.len() {
            for j in (i + 1)..parts.len() {
                if parts[i].intersects(&parts[j]) {
                    return Err(Error::BadInput(format!(
                        "parts {:?} and {:?} are not disjoint",
                        parts[i], parts[j]
                    )));
                }
            }
        }
        Ok(Self { parts })
    }

    pub(crate) fn from_parts_unchecked(parts: Vec<Simplex>) -> Self {
        Self { parts }
    }

    pub fn parts(&self) -> &[Simplex] {
        &self.parts
    }

    pub fn r(&self) -> usize {
        self.parts.len()
    }

    pub fn total_dim(&self) -> i64 {
        self.parts.iter().map(Simplex::dim).sum()
    }

    /// Componentwise inclusion.
    pub fn is_face_of(&self, other: &ProductCell) -> bool {
        self.parts.len() == other.parts.len()
            && self.parts.iter().zip(&other.parts).all(|(a, b)| a.is_face_of(b))
    }
}

impl fmt::Debug for ProductCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(|p| format!("{p:?}")).collect();
        write!(f, "({})", parts.join(" x "))
    }
}

/// The deleted product complex; immutable after construction. Cells are
/// kept in canonical (total dimension, lexicographic) order.
#[derive(Clone)]
pub struct ConfComplex {
    r: usize,
    ambient_labels: Vec<u64>,
    cells: Vec<ProductCell>,
    index: HashMap<ProductCell, usize>,
}

impl ConfComplex {
    pub fn r(&self) -> usize {
        self.r
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    /// Cells in canonical order.
    pub fn cells(&self) -> &[ProductCell] {
        &self.cells
    }

    pub fn cell(&self, id: usize) -> &ProductCell {
        &self.cells[id]
    }

    pub fn cell_id(&self, c: &ProductCell) -> Option<usize> {
        self.index.get(c).copied()
    }

    pub fn contains(&self, c: &ProductCell) -> bool {
        self.index.contains_key(c)
    }

    /// Labels of the ambient complex's vertices (cells use its dense ids).
    pub fn ambient_labels(&self) -> &[u64] {
        &self.ambient_labels
    }

    pub fn max_total_dim(&self) -> i64 {
        self.cells.last().map_or(-1, ProductCell::total_dim)
    }

    pub fn cell_counts_by_dim(&self) -> Vec<usize> {
        let mut counts = vec![0usize; (self.max_total_dim() + 1).max(0) as usize];
        for c in &self.cells {
            counts[c.total_dim() as usize] += 1;
        }
        counts
    }

    /// Cells of total dimension <= m; still closed under componentwise
    /// passage to faces.
    pub fn skeleton(&self, m: i64) -> ConfComplex {
        if m >= self.max_total_dim() {
            return self.clone();
        }
        let cells: Vec<ProductCell> =
            self.cells.iter().filter(|c| c.total_dim() <= m).cloned().collect();
        ConfComplex::from_cells(self.r, self.ambient_labels.clone(), cells)
    }

    /// The cell poset, ordered by componentwise inclusion, with total
    /// dimension as the poset dimension label. Element i is cell i.
    pub fn cell_poset(&self) -> Poset<ProductCell> {
        let dims: Vec<i64> = self.cells.iter().map(ProductCell::total_dim).collect();
        Poset::from_relation(self.cells.clone(), dims, |a, b| a != b && a.is_face_of(b))
    }

    fn from_cells(r: usize, ambient_labels: Vec<u64>, mut cells: Vec<ProductCell>) -> Self {
        cells.sort_by(|a, b| {
            a.total_dim().cmp(&b.total_dim()).then_with(|| a.cmp(b))
        });
        let index = cells.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect();
        Self { r, ambient_labels, cells, index }
    }
}

impl fmt::Debug for ConfComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ConfComplex(r={}, cells={})", self.r, self.cell_count())
    }
}

/// Builds `Conf_r(X)`: all ordered r-tuples of pairwise disjoint faces.
/// Returns the empty complex (flagged via `is_empty`) when X has fewer
/// than r vertices.
pub fn build_conf(x: &SimplicialComplex, r: usize) -> Result<ConfComplex> {
    build_conf_bounded(x, r, None, DEFAULT_MAX_CELLS)
}

/// Builds the skeleton `Conf_r(X)_{max_total_dim}` directly, pruning the
/// enumeration by the remaining dimension budget.
pub fn build_conf_skeleton(
    x: &SimplicialComplex,
    r: usize,
    max_total_dim: i64,
) -> Result<ConfComplex> {
    build_conf_bounded(x, r, Some(max_total_dim), DEFAULT_MAX_CELLS)
}

pub fn build_conf_bounded(
    x: &SimplicialComplex,
    r: usize,
    max_total_dim: Option<i64>,
    max_cells: usize,
) -> Result<ConfComplex> {
    if r < 2 {
        return Err(Error::BadInput(format!("deleted products need r >= 2, got {r}")));
    }
    let labels = x.labels().to_vec();
    if x.vertex_count() < r {
        return Ok(ConfComplex::from_cells(r, labels, Vec::new()));
    }
    let mut cells = Vec::new();
    let mut used = vec![false; x.vertex_count()];
    let mut parts: Vec<Simplex> = Vec::with_capacity(r);
    enumerate_tuples(x, r, max_total_dim, max_cells, &mut used, &mut parts, &mut cells)?;
    Ok(ConfComplex::from_cells(r, labels, cells))
}

fn enumerate_tuples(
    x: &SimplicialComplex,
    r: usize,
    max_total_dim: Option<i64>,
    max_cells: usize,
    used: &mut Vec<bool>,
    parts: &mut Vec<Simplex>,
    out: &mut Vec<ProductCell>,
) -> Result<()> {
    if parts.len() == r {
        if out.len() >= max_cells {
            return Err(Error::GuardExceeded { limit: max_cells });
        }
        out.push(ProductCell::from_parts_unchecked(parts.clone()));
        return Ok(());
    }
    let spent: i64 = parts.iter().map(Simplex::dim).sum();
    for f in x.faces() {
        // remaining slots only add dimension, so the budget check is exact
        if let Some(m) = max_total_dim {
            if spent + f.dim() > m {
                continue;
            }
        }
        if f.vertices().iter().any(|&v| used[v as usize]) {
            continue;
        }
        for &v in f.vertices() {
            used[v as usize] = true;
        }
        parts.push(f.clone());
        enumerate_tuples(x, r, max_total_dim, max_cells, used, parts, out)?;
        parts.pop();
        for &v in f.vertices() {
            used[v as usize] = false;
        }
    }
    Ok(())
}
