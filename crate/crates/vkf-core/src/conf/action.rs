//! Group actions on deleted products by coordinate permutation.
//!
//! A permutation g (as `g[i]` = image of position i) sends a cell
//! (σ_0, …, σ_{r-1}) to the cell whose position g(i) holds σ_i. On chain
//! level the action carries the Koszul sign of permuting graded factors.

use std::collections::HashSet;

use crate::conf::{ConfComplex, ProductCell};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupKind {
    /// The full symmetric group on r letters.
    Symmetric,
    /// (Z/p)^k acting on its own p^k elements by translation (the regular
    /// representation); the action is free.
    ElementaryAbelian { p: u32, k: u32 },
}

/// A permutation group acting on `{0..r-1}`, with all elements enumerated.
#[derive(Debug, Clone)]
pub struct PermAction {
    r: usize,
    kind: GroupKind,
    generators: Vec<Vec<usize>>,
    elements: Vec<Vec<usize>>,
    member: HashSet<Vec<usize>>,
}

impl PermAction {
    /// The full symmetric group Σ_r.
    pub fn symmetric(r: usize) -> PermAction {
        assert!((1..=8).contains(&r), "symmetric group enumeration capped at r = 8");
        let mut elements = Vec::new();
        let mut perm: Vec<usize> = (0..r).collect();
        permutations(&mut perm, 0, &mut elements);
        elements.sort();
        let mut generators = Vec::new();
        if r >= 2 {
            let mut swap: Vec<usize> = (0..r).collect();
            swap.swap(0, 1);
            generators.push(swap);
            let cycle: Vec<usize> = (0..r).map(|i| (i + 1) % r).collect();
            if !generators.contains(&cycle) {
                generators.push(cycle);
            }
        }
        let member = elements.iter().cloned().collect();
        PermAction { r, kind: GroupKind::Symmetric, generators, elements, member }
    }

    /// (Z/p)^k inside Σ_{p^k}: group elements are exponent vectors in
    /// lexicographic order, acting by translation.
    pub fn elementary_abelian(p: u32, k: u32) -> Result<PermAction> {
        if !crate::homology::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        assert!(k >= 1, "exponent must be positive");
        let r = (p as u64).checked_pow(k).and_then(|v| usize::try_from(v).ok()).unwrap();
        assert!(r <= 1 << 16, "group too large to enumerate");
        // vector with digits (v_0, ..., v_{k-1}), big-endian lexicographic id
        let idx = |v: &[u32]| -> usize {
            v.iter().fold(0usize, |acc, &d| acc * p as usize + d as usize)
        };
        let vectors: Vec<Vec<u32>> = (0..r)
            .map(|mut id| {
                let mut v = vec![0u32; k as usize];
                for slot in v.iter_mut().rev() {
                    *slot = (id % p as usize) as u32;
                    id /= p as usize;
                }
                v
            })
            .collect();
        let translation = |g: &[u32]| -> Vec<usize> {
            vectors
                .iter()
                .map(|v| {
                    let sum: Vec<u32> = v.iter().zip(g).map(|(a, b)| (a + b) % p).collect();
                    idx(&sum)
                })
                .collect()
        };
        let mut elements: Vec<Vec<usize>> = vectors.iter().map(|g| translation(g)).collect();
        elements.sort();
        let generators: Vec<Vec<usize>> = (0..k as usize)
            .map(|i| {
                let mut unit = vec![0u32; k as usize];
                unit[i] = 1;
                translation(&unit)
            })
            .collect();
        let member = elements.iter().cloned().collect();
        Ok(PermAction { r, kind: GroupKind::ElementaryAbelian { p, k }, generators, elements, member })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Vec<usize>] {
        &self.generators
    }

    /// All group elements, in sorted order (identity first).
    pub fn elements(&self) -> &[Vec<usize>] {
        &self.elements
    }

    pub fn contains(&self, g: &[usize]) -> bool {
        self.member.contains(g)
    }

    /// Applies g to a cell: part i moves to position g(i). Total dimension
    /// and disjointness are preserved.
    pub fn act(&self, g: &[usize], cell: &ProductCell) -> Result<ProductCell> {
        if !self.contains(g) {
            return Err(Error::NotInGroup(g.to_vec()));
        }
        Ok(apply_perm(g, cell))
    }

    /// The permutation of cell ids induced by g on a deleted product.
    pub fn cell_permutation(&self, conf: &ConfComplex, g: &[usize]) -> Result<Vec<usize>> {
        if !self.contains(g) {
            return Err(Error::NotInGroup(g.to_vec()));
        }
        conf.cells()
            .iter()
            .map(|c| {
                conf.cell_id(&apply_perm(g, c)).ok_or_else(|| {
                    Error::BadInput("cell set is not closed under the action".into())
                })
            })
            .collect()
    }
}

pub(crate) fn apply_perm(g: &[usize], cell: &ProductCell) -> ProductCell {
    let parts = cell.parts();
    let mut out = parts.to_vec();
    for (i, p) in parts.iter().enumerate() {
        out[g[i]] = p.clone();
    }
    ProductCell::from_parts_unchecked(out)
}

fn permutations(perm: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == perm.len() {
        out.push(perm.clone());
        return;
    }
    for i in k..perm.len() {
        perm.swap(k, i);
        permutations(perm, k + 1, out);
        perm.swap(k, i);
    }
}

/// The sign picked up by permuting graded factors of degrees `dims`:
/// (-1)^{Σ d_i d_j over inverted pairs i < j, g(i) > g(j)}.
pub fn koszul_sign(g: &[usize], dims: &[i64]) -> i32 {
    let mut exponent = 0i64;
    for i in 0..g.len() {
        for j in (i + 1)..g.len() {
            if g[i] > g[j] {
                exponent += dims[i] * dims[j];
            }
        }
    }
    if exponent % 2 == 0 {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{generate_simplex, Simplex};
    use crate::conf::build_conf;

    #[test]
    fn symmetric_group_enumeration() {
        let s3 = PermAction::symmetric(3);
        assert_eq!(s3.order(), 6);
        assert!(s3.contains(&[0, 1, 2]));
        assert!(s3.contains(&[2, 0, 1]));
        assert!(!s3.contains(&[0, 0, 1]));
        assert_eq!(s3.elements()[0], vec![0, 1, 2]);
    }

    #[test]
    fn swap_and_identity_on_cells() {
        let d4 = generate_simplex(4);
        let c = build_conf(&d4, 2).unwrap();
        let g = PermAction::symmetric(2);
        let cell = ProductCell::new(vec![
            Simplex::new(vec![0, 1]).unwrap(),
            Simplex::new(vec![2]).unwrap(),
        ])
        .unwrap();
        let swapped = g.act(&[1, 0], &cell).unwrap();
        assert_eq!(swapped.parts()[0].vertices(), &[2]);
        assert_eq!(swapped.parts()[1].vertices(), &[0, 1]);
        assert_eq!(swapped.total_dim(), cell.total_dim());
        assert!(c.contains(&swapped));
        let fixed = g.act(&[0, 1], &cell).unwrap();
        assert_eq!(fixed, cell);
        assert!(g.act(&[1, 1], &cell).is_err());
    }

    #[test]
    fn three_cycle_preserves_dim_and_membership() {
        let d5 = generate_simplex(5);
        let c = crate::conf::build_conf_skeleton(&d5, 3, 3).unwrap();
        let s3 = PermAction::symmetric(3);
        let cycle = vec![1, 2, 0];
        for cell in c.cells().iter().take(200) {
            let moved = s3.act(&cycle, cell).unwrap();
            assert_eq!(moved.total_dim(), cell.total_dim());
            assert!(c.contains(&moved));
            // position g(i) holds part i
            for (i, &gi) in cycle.iter().enumerate() {
                assert_eq!(&moved.parts()[gi], &cell.parts()[i]);
            }
        }
    }

    #[test]
    fn action_is_a_homomorphism() {
        let s3 = PermAction::symmetric(3);
        let cell = ProductCell::new(vec![
            Simplex::new(vec![0]).unwrap(),
            Simplex::new(vec![1, 2]).unwrap(),
            Simplex::new(vec![3, 4, 5]).unwrap(),
        ])
        .unwrap();
        for g in s3.elements() {
            for h in s3.elements() {
                let gh: Vec<usize> = (0..3).map(|i| g[h[i]]).collect();
                let lhs = s3.act(&gh, &cell).unwrap();
                let rhs = s3.act(g, &s3.act(h, &cell).unwrap()).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn elementary_abelian_translations_are_free() {
        let g = PermAction::elementary_abelian(2, 2).unwrap();
        assert_eq!(g.r(), 4);
        assert_eq!(g.order(), 4);
        assert_eq!(g.generators().len(), 2);
        for el in g.elements() {
            let is_id = el.iter().enumerate().all(|(i, &v)| i == v);
            if !is_id {
                // free action: no fixed point
                assert!(el.iter().enumerate().all(|(i, &v)| i != v));
            }
        }
        // closed under composition
        for a in g.elements() {
            for b in g.elements() {
                let ab: Vec<usize> = (0..4).map(|i| a[b[i]]).collect();
                assert!(g.contains(&ab));
            }
        }
        assert!(PermAction::elementary_abelian(4, 1).is_err());
    }

    #[test]
    fn koszul_signs() {
        // swapping two odd-degree factors flips the sign
        assert_eq!(koszul_sign(&[1, 0], &[1, 1]), -1);
        assert_eq!(koszul_sign(&[1, 0], &[1, 2]), 1);
        assert_eq!(koszul_sign(&[0, 1], &[3, 5]), 1);
        // 3-cycle (0 1 2): inversions (0,2),(1,2) under g = [1,2,0]
        assert_eq!(koszul_sign(&[1, 2, 0], &[1, 1, 1]), 1);
        assert_eq!(koszul_sign(&[2, 0, 1], &[1, 1, 1]), 1);
        assert_eq!(koszul_sign(&[2, 1, 0], &[1, 1, 1]), -1);
    }
}
