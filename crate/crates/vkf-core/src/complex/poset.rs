//! Finite posets with dimension labels, and their order complexes.
//!
//! Elements are indexed `0..len` in an order compatible with the relation
//! (`a < b` implies `index(a) < index(b)`); for face posets this is the
//! canonical (dimension, lexicographic) order, so the order complex of a
//! face poset is the barycentric subdivision with vertex i = face i.

use std::ops::Deref;

use crate::complex::{canonical_face_cmp, Simplex, SimplicialComplex};
use crate::{Error, Result};

/// Bit-packed strict-relation rows.
#[derive(Clone)]
struct BitMatrix {
    words: usize,
    rows: Vec<u64>,
}

impl BitMatrix {
    fn new(n: usize) -> Self {
        let words = n.div_ceil(64);
        Self { words, rows: vec![0; n * words] }
    }

    fn set(&mut self, i: usize, j: usize) {
        self.rows[i * self.words + j / 64] |= 1 << (j % 64);
    }

    fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i * self.words + j / 64] & (1 << (j % 64)) != 0
    }

    fn row_ones(&self, i: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for w in 0..self.words {
            let mut word = self.rows[i * self.words + w];
            while word != 0 {
                let b = word.trailing_zeros() as usize;
                out.push(w * 64 + b);
                word &= word - 1;
            }
        }
        out
    }

    fn count_row(&self, i: usize) -> usize {
        (0..self.words).map(|w| self.rows[i * self.words + w].count_ones() as usize).sum()
    }

    /// True iff rows[i] of self and rows[j] of other share no bit.
    fn row_and_is_empty(&self, i: usize, other: &BitMatrix, j: usize) -> bool {
        (0..self.words)
            .all(|w| self.rows[i * self.words + w] & other.rows[j * other.words + w] == 0)
    }
}

/// A finite poset over payload elements, with strict order stored as
/// reachability bitsets and the Hasse diagram as covering pairs.
#[derive(Clone)]
pub struct Poset<E> {
    elements: Vec<E>,
    dims: Vec<i64>,
    above: BitMatrix,
    below: BitMatrix,
    covers_up: Vec<Vec<usize>>,
    covers_down: Vec<Vec<usize>>,
}

impl<E> Poset<E> {
    /// Builds from a strict-order predicate. `elements` must be listed so
    /// that `less(i, j)` implies `i < j`; `dims` must strictly increase
    /// along the order (checked).
    pub fn from_relation<F>(elements: Vec<E>, dims: Vec<i64>, less: F) -> Self
    where
        F: Fn(&E, &E) -> bool,
    {
        let n = elements.len();
        assert_eq!(n, dims.len());
        let mut above = BitMatrix::new(n);
        let mut below = BitMatrix::new(n);
        for i in 0..n {
            for j in (i + 1)..n {
                if less(&elements[i], &elements[j]) {
                    assert!(dims[i] < dims[j], "dimension must increase along the order");
                    above.set(i, j);
                    below.set(j, i);
                }
            }
        }
        // Transitive reduction: j covers i iff nothing sits strictly between.
        let mut covers_up: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut covers_down: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (i, ups) in covers_up.iter_mut().enumerate() {
            for j in above.row_ones(i) {
                if above.row_and_is_empty(i, &below, j) {
                    ups.push(j);
                    covers_down[j].push(i);
                }
            }
        }
        Self { elements, dims, above, below, covers_up, covers_down }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn element(&self, i: usize) -> &E {
        &self.elements[i]
    }

    pub fn elements(&self) -> &[E] {
        &self.elements
    }

    pub fn dim_label(&self, i: usize) -> i64 {
        self.dims[i]
    }

    pub fn lt(&self, i: usize, j: usize) -> bool {
        self.above.get(i, j)
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        i == j || self.lt(i, j)
    }

    /// Ids strictly above `i`, ascending.
    pub fn strictly_above(&self, i: usize) -> Vec<usize> {
        self.above.row_ones(i)
    }

    /// Ids strictly below `i`, ascending.
    pub fn strictly_below(&self, i: usize) -> Vec<usize> {
        self.below.row_ones(i)
    }

    /// The up-set {j : j >= i}.
    pub fn up_set(&self, i: usize) -> Vec<usize> {
        let mut v = vec![i];
        v.extend(self.strictly_above(i));
        v.sort_unstable();
        v
    }

    /// The down-set {j : j <= i}.
    pub fn down_set(&self, i: usize) -> Vec<usize> {
        let mut v = vec![i];
        v.extend(self.strictly_below(i));
        v.sort_unstable();
        v
    }

    pub fn covers_up(&self, i: usize) -> &[usize] {
        &self.covers_up[i]
    }

    pub fn cover_pair_count(&self) -> usize {
        self.covers_up.iter().map(Vec::len).sum()
    }

    pub fn minimal_elements(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.covers_down[i].is_empty()).collect()
    }

    pub fn maximal_elements(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.covers_up[i].is_empty()).collect()
    }

    /// The maximum element, if one exists (everything else lies below it).
    pub fn maximum(&self) -> Option<usize> {
        let last = self.len().checked_sub(1)?;
        let cands = self.maximal_elements();
        if cands.len() == 1 && self.below.count_row(cands[0]) == last {
            Some(cands[0])
        } else {
            None
        }
    }

    /// The minimum element, if one exists.
    pub fn minimum(&self) -> Option<usize> {
        let last = self.len().checked_sub(1)?;
        let cands = self.minimal_elements();
        if cands.len() == 1 && self.above.count_row(cands[0]) == last {
            Some(cands[0])
        } else {
            None
        }
    }

    /// All chains with at most `max_len` elements, as ascending id lists,
    /// in lexicographic order.
    pub fn chains_up_to(&self, max_len: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut stack = Vec::new();
        for i in 0..self.len() {
            stack.push(i);
            self.extend_chains(&mut stack, max_len, &mut out);
            stack.pop();
        }
        out
    }

    fn extend_chains(&self, stack: &mut Vec<usize>, max_len: usize, out: &mut Vec<Vec<usize>>) {
        out.push(stack.clone());
        if stack.len() == max_len {
            return;
        }
        let last = *stack.last().unwrap();
        for j in self.above.row_ones(last) {
            stack.push(j);
            self.extend_chains(stack, max_len, out);
            stack.pop();
        }
    }

    /// Maximal chains (Hasse paths from a minimal to a maximal element).
    pub fn maximal_chains(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut stack = Vec::new();
        for i in self.minimal_elements() {
            stack.push(i);
            self.extend_maximal(&mut stack, &mut out);
            stack.pop();
        }
        out
    }

    fn extend_maximal(&self, stack: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let last = *stack.last().unwrap();
        if self.covers_up[last].is_empty() {
            out.push(stack.clone());
            return;
        }
        for &j in &self.covers_up[last] {
            stack.push(j);
            self.extend_maximal(stack, out);
            stack.pop();
        }
    }

    /// Length (element count) of the longest chain.
    pub fn longest_chain_len(&self) -> usize {
        let n = self.len();
        let mut best = vec![1usize; n];
        for i in (0..n).rev() {
            for &j in &self.covers_up[i] {
                best[i] = best[i].max(1 + best[j]);
            }
        }
        best.into_iter().max().unwrap_or(0)
    }
}

/// The order complex of a poset: vertex i = poset element i, faces =
/// chains. Constructed only through [`order_complex`] /
/// [`order_complex_capped`], so every face is a chain by construction.
#[derive(Clone, Debug)]
pub struct OrderComplex {
    complex: SimplicialComplex,
}

impl OrderComplex {
    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn into_complex(self) -> SimplicialComplex {
        self.complex
    }
}

impl Deref for OrderComplex {
    type Target = SimplicialComplex;

    fn deref(&self) -> &SimplicialComplex {
        &self.complex
    }
}

/// Face poset of a non-empty complex: elements are the faces in canonical
/// order, ordered by strict inclusion, with dimension labels.
pub fn face_poset(x: &SimplicialComplex) -> Result<Poset<Simplex>> {
    if x.is_empty() {
        return Err(Error::EmptyComplex);
    }
    let mut elements: Vec<Simplex> = x.faces().to_vec();
    elements.sort_by(canonical_face_cmp);
    let dims: Vec<i64> = elements.iter().map(Simplex::dim).collect();
    Ok(Poset::from_relation(elements, dims, |a, b| a != b && a.is_face_of(b)))
}

/// Full order complex: all chains, via downward closure of the maximal
/// ones.
pub fn order_complex<E>(p: &Poset<E>) -> OrderComplex {
    order_complex_capped(p, p.longest_chain_len().max(1) as i64 - 1)
}

/// Order complex truncated to faces of dimension <= `max_dim` (chains of
/// at most `max_dim + 1` elements); the chain set is downward closed, so
/// this is a genuine subcomplex agreeing with the full one through that
/// dimension.
pub fn order_complex_capped<E>(p: &Poset<E>, max_dim: i64) -> OrderComplex {
    if p.is_empty() || max_dim < 0 {
        return OrderComplex { complex: SimplicialComplex::empty() };
    }
    let chains = p.chains_up_to((max_dim + 1) as usize);
    let faces: Vec<Simplex> = chains
        .into_iter()
        .map(|c| Simplex::from_sorted(c.into_iter().map(|i| i as u32).collect()))
        .collect();
    let labels: Vec<u64> = (0..p.len() as u64).collect();
    OrderComplex { complex: SimplicialComplex::from_face_set(faces, &labels) }
}
