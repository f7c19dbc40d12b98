//! Exact feasibility of `A x = b, x ≥ 0` by phase-one simplex over the
//! rationals, with Bland's rule so degenerate problems terminate.

use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

/// Returns some `x ≥ 0` with `A x = b`, or `None` when the system is
/// infeasible. `a` has one row per equation.
pub fn find_nonnegative_solution(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    assert_eq!(a.len(), b.len(), "one right-hand side per row");
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    if m == 0 {
        return Some(vec![Rational::zero(); n]);
    }

    // Columns: n structural, m artificial, then the right-hand side.
    let width = n + m + 1;
    let mut t: Vec<Vec<Rational>> = Vec::with_capacity(m);
    for (i, (row, bi)) in a.iter().zip(b).enumerate() {
        assert_eq!(row.len(), n, "ragged constraint matrix");
        let flip = bi.is_negative();
        let mut r = vec![Rational::zero(); width];
        for (j, v) in row.iter().enumerate() {
            r[j] = if flip { -v } else { v.clone() };
        }
        r[n + i] = Rational::one();
        r[width - 1] = if flip { -bi } else { bi.clone() };
        t.push(r);
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    // Reduced costs for minimizing the sum of artificials.
    let mut cost = vec![Rational::zero(); width];
    for r in &t {
        for j in 0..n {
            cost[j] -= &r[j];
        }
        cost[width - 1] -= &r[width - 1];
    }

    loop {
        let Some(enter) = (0..n + m).find(|&j| cost[j].is_negative()) else {
            break;
        };
        let mut leave: Option<usize> = None;
        let mut best: Option<Rational> = None;
        for i in 0..m {
            if !t[i][enter].is_positive() {
                continue;
            }
            let ratio = &t[i][width - 1] / &t[i][enter];
            let better = match &best {
                None => true,
                Some(b) => ratio < *b || (ratio == *b && basis[i] < basis[leave.unwrap()]),
            };
            if better {
                best = Some(ratio);
                leave = Some(i);
            }
        }
        // Phase one is bounded below by zero, so an entering column always
        // has a positive entry.
        let p = leave.expect("phase-one objective is bounded");
        pivot(&mut t, &mut cost, p, enter);
        basis[p] = enter;
    }

    if !cost[width - 1].is_zero() {
        return None;
    }
    let mut x = vec![Rational::zero(); n];
    for (i, &j) in basis.iter().enumerate() {
        if j < n {
            x[j] = t[i][width - 1].clone();
        }
    }
    Some(x)
}

fn pivot(t: &mut [Vec<Rational>], cost: &mut [Rational], p: usize, q: usize) {
    let width = t[p].len();
    let pv = t[p][q].clone();
    for v in t[p].iter_mut() {
        *v /= &pv;
    }
    let pivot_row = t[p].clone();
    for (i, row) in t.iter_mut().enumerate() {
        if i == p || row[q].is_zero() {
            continue;
        }
        let f = row[q].clone();
        for j in 0..width {
            if !pivot_row[j].is_zero() {
                row[j] -= &f * &pivot_row[j];
            }
        }
    }
    if !cost[q].is_zero() {
        let f = cost[q].clone();
        for j in 0..width {
            if !pivot_row[j].is_zero() {
                cost[j] -= &f * &pivot_row[j];
            }
        }
    }
}
