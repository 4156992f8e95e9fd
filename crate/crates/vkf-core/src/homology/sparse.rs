//! Sparse matrices over a prime field and rank by Gaussian elimination
//! with Markowitz-style pivoting (pivot column of minimal fill, pivot row
//! of minimal count, deterministic tie-breaks). No floating point.

use std::collections::{BTreeSet, HashMap};

use crate::{Error, Result};

/// The field F_p for a prime p < 2^31.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u32) -> Result<Self> {
        if !(2..(1 << 31)).contains(&p) || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Self { p })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        let s = a as u64 + b as u64;
        (s % self.p as u64) as u32
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    /// Inverse by Fermat: a^(p-2).
    pub fn inv(&self, a: u32) -> u32 {
        assert!(!a.is_multiple_of(self.p), "zero has no inverse");
        self.pow(a, self.p - 2)
    }

    pub fn pow(&self, mut base: u32, mut e: u32) -> u32 {
        let mut acc = 1u32;
        base %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Canonical representative of a signed integer.
    pub fn from_i64(&self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n as u64 {
        if (n as u64).is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Column-major sparse matrix over F_p; each column keeps its nonzero
/// (row, value) pairs sorted by row, so equality is entrywise equality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: Vec<Vec<(u32, u32)>>,
}

impl SparseMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Self { rows, cols: vec![Vec::new(); cols] }
    }

    /// Sets a whole column; entries are sorted and zero values dropped.
    pub fn set_column(&mut self, col: usize, mut entries: Vec<(u32, u32)>) {
        entries.retain(|&(_, v)| v != 0);
        entries.sort_unstable_by_key(|&(r, _)| r);
        debug_assert!(entries.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(entries.iter().all(|&(r, _)| (r as usize) < self.rows));
        self.cols[col] = entries;
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols.len()
    }

    pub fn column(&self, col: usize) -> &[(u32, u32)] {
        &self.cols[col]
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(Vec::is_empty)
    }

    /// All entries as (row, col, value), column-major order.
    pub fn entries(&self) -> impl Iterator<Item = (u32, u32, u32)> + '_ {
        self.cols
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |&(r, v)| (r, c as u32, v)))
    }

    /// Matrix product self * other over F_p.
    pub fn multiply(&self, other: &SparseMatrix, f: PrimeField) -> SparseMatrix {
        assert_eq!(self.cols(), other.rows());
        let mut out = SparseMatrix::zero(self.rows, other.cols());
        for j in 0..other.cols() {
            let mut acc: HashMap<u32, u32> = HashMap::new();
            for &(t, bv) in other.column(j) {
                for &(r, av) in self.column(t as usize) {
                    let e = acc.entry(r).or_insert(0);
                    *e = f.add(*e, f.mul(av, bv));
                }
            }
            let entries: Vec<(u32, u32)> = acc.into_iter().filter(|&(_, v)| v != 0).collect();
            out.set_column(j, entries);
        }
        out
    }

    /// Rank over F_p. Non-destructive; deterministic for a given matrix.
    pub fn rank(&self, f: PrimeField) -> usize {
        Eliminator::new(self, f).run()
    }
}

/// Working state for the elimination. Counts refer to active rows/columns
/// only; the pivot choice is (min column nnz, then min row count, then
/// lowest ids), a Markowitz-flavoured rule that keeps fill low.
struct Eliminator {
    f: PrimeField,
    cols: Vec<Vec<(u32, u32)>>,
    row_active: Vec<bool>,
    row_count: Vec<u32>,
    row_cols: Vec<BTreeSet<u32>>,
    selector: BTreeSet<(u32, u32)>, // (nnz, col id) over active nonzero cols
}

impl Eliminator {
    fn new(m: &SparseMatrix, f: PrimeField) -> Self {
        let mut row_count = vec![0u32; m.rows];
        let mut row_cols = vec![BTreeSet::new(); m.rows];
        let mut selector = BTreeSet::new();
        for (j, col) in m.cols.iter().enumerate() {
            for &(r, _) in col {
                row_count[r as usize] += 1;
                row_cols[r as usize].insert(j as u32);
            }
            if !col.is_empty() {
                selector.insert((col.len() as u32, j as u32));
            }
        }
        Self {
            f,
            cols: m.cols.clone(),
            row_active: vec![true; m.rows],
            row_count,
            row_cols,
            selector,
        }
    }

    fn run(mut self) -> usize {
        let mut rank = 0usize;
        while let Some(&(_, j)) = self.selector.iter().next() {
            self.selector.remove(&(self.cols[j as usize].len() as u32, j));
            // Pivot row: minimal active-row count, then lowest row id.
            let pivot = self.cols[j as usize]
                .iter()
                .filter(|&&(r, _)| self.row_active[r as usize])
                .min_by_key(|&&(r, _)| (self.row_count[r as usize], r))
                .copied();
            let Some((pr, pv)) = pivot else { continue };
            rank += 1;
            self.retire_column(j);
            self.row_active[pr as usize] = false;
            let pivot_col = self.cols[j as usize].clone();
            let inv = self.f.inv(pv);
            let others: Vec<u32> = self.row_cols[pr as usize].iter().copied().collect();
            for k in others {
                let kv = self.value_at(k, pr).expect("row index is consistent");
                let factor = self.f.neg(self.f.mul(kv, inv));
                self.axpy(k, &pivot_col, factor);
            }
        }
        rank
    }

    /// Removes column j from the active bookkeeping (it stays stored).
    fn retire_column(&mut self, j: u32) {
        for &(r, _) in &self.cols[j as usize] {
            self.row_count[r as usize] -= 1;
            self.row_cols[r as usize].remove(&j);
        }
    }

    fn value_at(&self, col: u32, row: u32) -> Option<u32> {
        let c = &self.cols[col as usize];
        c.binary_search_by_key(&row, |&(r, _)| r).ok().map(|i| c[i].1)
    }

    /// col += factor * src, with bookkeeping updates.
    fn axpy(&mut self, col: u32, src: &[(u32, u32)], factor: u32) {
        let dst = std::mem::take(&mut self.cols[col as usize]);
        self.selector.remove(&(dst.len() as u32, col));
        let mut merged = Vec::with_capacity(dst.len() + src.len());
        let (mut i, mut k) = (0usize, 0usize);
        while i < dst.len() || k < src.len() {
            let take_dst = k >= src.len() || (i < dst.len() && dst[i].0 < src[k].0);
            let take_src = i >= dst.len() || (k < src.len() && src[k].0 < dst[i].0);
            if take_dst {
                merged.push(dst[i]);
                i += 1;
            } else if take_src {
                let v = self.f.mul(src[k].1, factor);
                if v != 0 {
                    let r = src[k].0;
                    self.row_count[r as usize] += 1;
                    self.row_cols[r as usize].insert(col);
                    merged.push((r, v));
                }
                k += 1;
            } else {
                let r = dst[i].0;
                let v = self.f.add(dst[i].1, self.f.mul(src[k].1, factor));
                if v != 0 {
                    merged.push((r, v));
                } else {
                    self.row_count[r as usize] -= 1;
                    self.row_cols[r as usize].remove(&col);
                }
                i += 1;
                k += 1;
            }
        }
        if !merged.is_empty() {
            self.selector.insert((merged.len() as u32, col));
        }
        self.cols[col as usize] = merged;
    }
}
