//! Exact rational linear feasibility: is there x >= 0 with Ax = b?
//!
//! Phase-1 simplex over BigRational with Bland's rule, so termination is
//! guaranteed and boundary-touching solutions (the common case at minimal
//! total dimension) are decided exactly. Problem sizes here are tiny: a
//! handful of barycentric coordinates against r + (r-1)d equations.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// The system Ax = b, x >= 0, in dense rational form.
#[derive(Debug, Clone)]
pub struct LinearSystem {
    cols: usize,
    pub rows: Vec<Vec<BigRational>>,
    pub rhs: Vec<BigRational>,
}

impl LinearSystem {
    pub fn new(cols: usize) -> Self {
        Self { cols, rows: Vec::new(), rhs: Vec::new() }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn push_row(&mut self, coeffs: Vec<BigRational>, rhs: BigRational) {
        assert_eq!(coeffs.len(), self.cols, "row width must match the system");
        self.rows.push(coeffs);
        self.rhs.push(rhs);
    }
}

/// Returns a feasible point if one exists. The answer is exact; the point
/// returned is a basic feasible solution of the phase-1 optimum.
pub fn feasible_point(system: &LinearSystem) -> Option<Vec<BigRational>> {
    let m = system.rows.len();
    let n = system.cols;
    if m == 0 {
        return Some(vec![BigRational::zero(); n]);
    }

    // tableau: m rows of [A | I_artificial | b], with b >= 0
    let total = n + m;
    let mut tab: Vec<Vec<BigRational>> = Vec::with_capacity(m);
    for i in 0..m {
        let mut row: Vec<BigRational> = Vec::with_capacity(total + 1);
        let flip = system.rhs[i].is_negative();
        for j in 0..n {
            let v = system.rows[i][j].clone();
            row.push(if flip { -v } else { v });
        }
        for k in 0..m {
            row.push(if k == i { BigRational::one() } else { BigRational::zero() });
        }
        row.push(if flip { -system.rhs[i].clone() } else { system.rhs[i].clone() });
        tab.push(row);
    }
    let mut basis: Vec<usize> = (n..total).collect();

    // phase-1 objective: minimize the artificial sum. Reduced costs start
    // as c_j - sum over rows of a_ij (artificials are basic with cost 1).
    let mut cost: Vec<BigRational> = vec![BigRational::zero(); total + 1];
    for j in 0..=total {
        let mut s = BigRational::zero();
        for row in tab.iter() {
            s += &row[j];
        }
        let c_j = if (n..total).contains(&j) { BigRational::one() } else { BigRational::zero() };
        cost[j] = c_j - s;
    }

    // Bland: entering column = lowest index with negative reduced cost
    while let Some(enter) = (0..total).find(|&j| cost[j].is_negative()) {
        // ratio test; Bland tie-break on the leaving basis variable
        let mut leave: Option<(usize, BigRational)> = None;
        for (i, row) in tab.iter().enumerate() {
            if row[enter].is_positive() {
                let ratio = &row[total] / &row[enter];
                match &leave {
                    None => leave = Some((i, ratio)),
                    Some((li, lr)) => {
                        if ratio < *lr || (ratio == *lr && basis[i] < basis[*li]) {
                            leave = Some((i, ratio));
                        }
                    }
                }
            }
        }
        let Some((pivot_row, _)) = leave else {
            // unbounded phase-1 cannot happen (objective bounded below by 0)
            unreachable!("phase-1 objective is bounded");
        };
        pivot(&mut tab, &mut cost, pivot_row, enter);
        basis[pivot_row] = enter;
    }

    // objective value = -cost[total]
    if !cost[total].is_zero() {
        return None;
    }
    let mut x = vec![BigRational::zero(); n];
    for (i, &b) in basis.iter().enumerate() {
        if b < n {
            x[b] = tab[i][total].clone();
        }
    }
    Some(x)
}

fn pivot(tab: &mut [Vec<BigRational>], cost: &mut [BigRational], pr: usize, pc: usize) {
    let inv = tab[pr][pc].clone();
    for v in tab[pr].iter_mut() {
        *v /= &inv;
    }
    let prow = tab[pr].clone();
    for (i, row) in tab.iter_mut().enumerate() {
        if i != pr && !row[pc].is_zero() {
            let factor = row[pc].clone();
            for (dst, src) in row.iter_mut().zip(&prow) {
                *dst -= &factor * src;
            }
        }
    }
    if !cost[pc].is_zero() {
        let factor = cost[pc].clone();
        for (dst, src) in cost.iter_mut().zip(&prow) {
            *dst -= &factor * src;
        }
    }
}
