//! The explicit equivariant simplicial maps built on a deleted product.
//!
//! Fix r and n and let C be the skeleton of `Conf_r(X)` of total dimension
//! r(n+1)-1. Its cell poset splits into the "small" cells (every part of
//! dimension <= n, i.e. cells of `Conf_r(X_n)`) and the upper ideal P of
//! cells with some part of dimension > n. P is covered by the upper
//! ideals P_i = {cells whose i-th part has dimension > n}, whose r-fold
//! intersection is empty because the total dimension is capped.
//!
//! From the cover we get two simplicial maps and one PL function:
//! * the nerve map Δ(P) -> sd(∂Δ^{r-1}), vertex c ↦ {i : c ∈ P_i};
//! * the join decomposition sd(C) -> sd(Conf_r(X_n)) * Δ(P), splitting a
//!   chain into its small and big parts;
//! * for r = 2, the antisymmetric height map: 0 on small cells, +1 where
//!   the first part is big, -1 where the second is, extended affinely
//!   over the subdivision.

use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::complex::{Poset, SimplicialComplex};
use crate::conf::{build_conf_skeleton, ConfComplex, ProductCell};
use crate::{Error, Result};

/// The poset P with its upper-ideal cover P_1, …, P_r.
#[derive(Debug, Clone)]
pub struct UpperIdealCover {
    r: usize,
    n: i64,
    skeleton: ConfComplex,
    /// per skeleton cell: true iff every part has dimension <= n
    small: Vec<bool>,
    /// skeleton cell ids lying in P, ascending
    p_cells: Vec<usize>,
    p_index: HashMap<usize, usize>,
    /// per P-cell: bit i set iff the cell lies in P_i
    masks: Vec<u32>,
}

/// Builds the cover for `Conf_r(X)_{r(n+1)-1}` and verifies the up-set,
/// covering and empty-intersection properties exhaustively.
pub fn upper_ideal_cover(x: &SimplicialComplex, r: usize, n: i64) -> Result<UpperIdealCover> {
    if !(2..=32).contains(&r) {
        return Err(Error::BadInput(format!("cover needs 2 <= r <= 32, got {r}")));
    }
    let m = r as i64 * (n + 1) - 1;
    if m < 0 {
        return Err(Error::BadInput(format!(
            "skeleton dimension r(n+1)-1 = {m} must be non-negative"
        )));
    }
    let skeleton = build_conf_skeleton(x, r, m)?;
    let small: Vec<bool> = skeleton
        .cells()
        .iter()
        .map(|c| c.parts().iter().all(|p| p.dim() <= n))
        .collect();
    let p_cells: Vec<usize> = (0..skeleton.cell_count()).filter(|&i| !small[i]).collect();
    let p_index: HashMap<usize, usize> =
        p_cells.iter().enumerate().map(|(j, &i)| (i, j)).collect();
    let full: u32 = if r == 32 { u32::MAX } else { (1 << r) - 1 };
    let mut masks = Vec::with_capacity(p_cells.len());
    for &i in &p_cells {
        let mut mask = 0u32;
        for (bit, part) in skeleton.cell(i).parts().iter().enumerate() {
            if part.dim() > n {
                mask |= 1 << bit;
            }
        }
        if mask == 0 {
            return Err(Error::CoverNotCovering(i));
        }
        if mask == full {
            return Err(Error::CoverAllParts(i));
        }
        masks.push(mask);
    }
    let cover = UpperIdealCover { r, n, skeleton, small, p_cells, p_index, masks };
    cover.verify_upset()?;
    Ok(cover)
}

impl UpperIdealCover {
    pub fn r(&self) -> usize {
        self.r
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    /// The skeleton `Conf_r(X)_{r(n+1)-1}` the cover lives on.
    pub fn skeleton(&self) -> &ConfComplex {
        &self.skeleton
    }

    pub fn is_small(&self, cell_id: usize) -> bool {
        self.small[cell_id]
    }

    /// Skeleton cell ids of P, ascending.
    pub fn p_cell_ids(&self) -> &[usize] {
        &self.p_cells
    }

    pub fn p_len(&self) -> usize {
        self.p_cells.len()
    }

    /// Index into the P enumeration for a skeleton cell id.
    pub fn p_index_of(&self, cell_id: usize) -> Option<usize> {
        self.p_index.get(&cell_id).copied()
    }

    /// {i : cell ∈ P_i} as a bitmask, for the j-th P-cell.
    pub fn mask(&self, p_idx: usize) -> u32 {
        self.masks[p_idx]
    }

    /// The poset P (componentwise inclusion), element j = j-th P-cell.
    pub fn p_poset(&self) -> Poset<ProductCell> {
        let elements: Vec<ProductCell> =
            self.p_cells.iter().map(|&i| self.skeleton.cell(i).clone()).collect();
        let dims: Vec<i64> = elements.iter().map(ProductCell::total_dim).collect();
        Poset::from_relation(elements, dims, |a, b| a != b && a.is_face_of(b))
    }

    /// The cell poset of the whole skeleton (small and big cells).
    pub fn skeleton_poset(&self) -> Poset<ProductCell> {
        self.skeleton.cell_poset()
    }

    fn verify_upset(&self) -> Result<()> {
        // P is an up-set of the skeleton poset, each P_i is an up-set of P,
        // and masks are nested along the order.
        for (j, &cj) in self.p_cells.iter().enumerate() {
            let a = self.skeleton.cell(cj);
            for (k, ck) in self.skeleton.cells().iter().enumerate() {
                if cj != k && a.is_face_of(ck) {
                    let Some(up) = self.p_index_of(k) else {
                        return Err(Error::BadInput(format!(
                            "P is not an up-set: cell {k} above P-cell {cj} escapes P"
                        )));
                    };
                    if self.masks[j] & !self.masks[up] != 0 {
                        return Err(Error::BadInput(format!(
                            "P_i is not an up-set at cells {cj} <= {k}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// The nerve map Δ(P) -> sd(∂Δ^{r-1}); vertex images are the non-empty
/// proper subsets {i : c ∈ P_i}.
#[derive(Debug, Clone)]
pub struct NerveMap {
    r: usize,
    images: Vec<u32>,
}

pub fn nerve_map(cover: &UpperIdealCover) -> Result<NerveMap> {
    if cover.p_len() == 0 {
        return Err(Error::EmptyComplex);
    }
    Ok(NerveMap { r: cover.r(), images: cover.masks.clone() })
}

impl NerveMap {
    pub fn r(&self) -> usize {
        self.r
    }

    /// Image vertex (subset mask) of the j-th P-cell.
    pub fn image(&self, p_idx: usize) -> u32 {
        self.images[p_idx]
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    /// Maps a chain of P (indices into the P enumeration, increasing along
    /// the order) to its image simplex: the distinct subset masks, which
    /// must be nested. Returns the masks sorted by inclusion.
    pub fn map_chain(&self, chain: &[usize]) -> Result<Vec<u32>> {
        let mut out: Vec<u32> = chain.iter().map(|&j| self.images[j]).collect();
        out.sort_by_key(|m| m.count_ones());
        out.dedup();
        for w in out.windows(2) {
            if w[0] & !w[1] != 0 {
                return Err(Error::BadInput(format!(
                    "index sets {:#b} and {:#b} along a chain are not nested",
                    w[0], w[1]
                )));
            }
        }
        Ok(out)
    }
}

/// Applies a coordinate permutation to a subset mask: i ↦ g(i).
pub fn permute_mask(g: &[usize], mask: u32) -> u32 {
    let mut out = 0u32;
    for (i, &gi) in g.iter().enumerate() {
        if mask & (1 << i) != 0 {
            out |= 1 << gi;
        }
    }
    out
}

/// Which side of the join a subdivision vertex lands on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JoinSide {
    /// carried by `Conf_r(X_n)`
    Small,
    /// carried by Δ(P)
    Big,
}

/// The simplicial map sd(C) -> sd(Conf_r(X_n)) * Δ(P): every chain splits
/// into its small and big parts, recorded as join coordinates.
#[derive(Debug, Clone)]
pub struct JoinDecomposition {
    sides: Vec<JoinSide>,
}

pub fn join_decomposition(cover: &UpperIdealCover) -> JoinDecomposition {
    let sides = cover
        .small
        .iter()
        .map(|&s| if s { JoinSide::Small } else { JoinSide::Big })
        .collect();
    JoinDecomposition { sides }
}

impl JoinDecomposition {
    pub fn side(&self, cell_id: usize) -> JoinSide {
        self.sides[cell_id]
    }

    pub fn sides(&self) -> &[JoinSide] {
        &self.sides
    }

    /// Splits a chain of skeleton cells into (small part, big part),
    /// preserving order.
    pub fn split_chain(&self, chain: &[usize]) -> (Vec<usize>, Vec<usize>) {
        let mut small = Vec::new();
        let mut big = Vec::new();
        for &c in chain {
            match self.sides[c] {
                JoinSide::Small => small.push(c),
                JoinSide::Big => big.push(c),
            }
        }
        (small, big)
    }
}

/// A PL function on the barycentric subdivision of `Conf_2(X)_{2n+1}`:
/// integer values on subdivision vertices (= cells), extended affinely
/// over chains with barycentric weights.
#[derive(Debug, Clone)]
pub struct PlMapOnSubdivision {
    n: i64,
    skeleton: ConfComplex,
    values: Vec<i8>,
}

/// Builds the antisymmetric height map on `Conf_2(X)_{2n+1}`: 0 on cells
/// of `Conf_2(X_n)`, +1 where the first part has dimension > n, -1 where
/// the second does (exactly one case holds on this skeleton). The +1 on
/// first-part-big is a convention; antisymmetry does not depend on it.
pub fn psi_map(x: &SimplicialComplex, n: i64) -> Result<PlMapOnSubdivision> {
    let skeleton = build_conf_skeleton(x, 2, 2 * n + 1)?;
    let values: Vec<i8> = skeleton
        .cells()
        .iter()
        .map(|c| {
            let big0 = c.parts()[0].dim() > n;
            let big1 = c.parts()[1].dim() > n;
            debug_assert!(!(big0 && big1), "total dimension cap violated");
            if big0 {
                1
            } else if big1 {
                -1
            } else {
                0
            }
        })
        .collect();
    Ok(PlMapOnSubdivision { n, skeleton, values })
}

impl PlMapOnSubdivision {
    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn skeleton(&self) -> &ConfComplex {
        &self.skeleton
    }

    pub fn value(&self, cell_id: usize) -> i8 {
        self.values[cell_id]
    }

    pub fn values(&self) -> &[i8] {
        &self.values
    }

    /// The coordinate-swap involution on subdivision vertices.
    pub fn swap(&self, cell_id: usize) -> usize {
        let c = self.skeleton.cell(cell_id);
        let swapped = ProductCell::from_parts_unchecked(vec![
            c.parts()[1].clone(),
            c.parts()[0].clone(),
        ]);
        self.skeleton.cell_id(&swapped).expect("swap preserves the skeleton")
    }

    /// Evaluates the affine extension at a barycentric point of the
    /// subdivision: `cells` must form a chain and `weights` must be
    /// non-negative rationals summing to one.
    pub fn evaluate(&self, cells: &[usize], weights: &[BigRational]) -> Result<BigRational> {
        if cells.is_empty() || cells.len() != weights.len() {
            return Err(Error::BadInput("point needs matching cells and weights".into()));
        }
        for i in 0..cells.len() {
            for j in (i + 1)..cells.len() {
                let (a, b) = (self.skeleton.cell(cells[i]), self.skeleton.cell(cells[j]));
                if !(a.is_face_of(b) || b.is_face_of(a)) {
                    return Err(Error::BadInput(
                        "cells do not form a chain of the subdivision".into(),
                    ));
                }
            }
        }
        let mut total = BigRational::zero();
        for w in weights {
            if w < &BigRational::zero() {
                return Err(Error::BadInput("negative barycentric weight".into()));
            }
            total += w;
        }
        if !total.is_one() {
            return Err(Error::BadInput("barycentric weights must sum to 1".into()));
        }
        let mut acc = BigRational::zero();
        for (&c, w) in cells.iter().zip(weights) {
            acc += w * BigRational::from_integer(self.values[c].into());
        }
        Ok(acc)
    }
}
