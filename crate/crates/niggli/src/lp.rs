//! Exact rational linear algebra and a small dense simplex solver.
//!
//! The polytope enumeration needs exact answers to three kinds of
//! questions about cones {x : E x = 0, C x <= 0}:
//!
//! - rank / row-space membership / null-space of small rational matrices,
//! - orthogonal projectors onto null spaces, as exact rationals,
//! - feasibility with strictness ("is there a point with these
//!   inequalities strict?"), answered by maximizing a slack variable.
//!
//! Everything is BigRational: the inputs are tiny integer matrices and
//! exactness matters more than speed at these sizes.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rat = BigRational;
pub type RatVec = Vec<Rat>;
pub type RatMatrix = Vec<RatVec>;

pub fn rat(n: i64) -> Rat {
    BigRational::from_integer(BigInt::from(n))
}

pub fn rat_vec(v: &[i64]) -> RatVec {
    v.iter().map(|&x| rat(x)).collect()
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Reduced row-echelon form in place; returns the pivot columns.
pub fn rref(m: &mut RatMatrix) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return vec![];
    }
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(pr) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pr);
        let inv = m[r][c].recip();
        for x in &mut m[r] {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let d = &f * &m[r][j];
                    m[i][j] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    pivots
}

pub fn rank(m: &RatMatrix) -> usize {
    let mut copy = m.clone();
    rref(&mut copy).len()
}

/// A basis of independent rows spanning the row space of `m`.
pub fn row_basis(m: &RatMatrix) -> RatMatrix {
    let mut copy = m.clone();
    let pivots = rref(&mut copy);
    copy.truncate(pivots.len());
    copy
}

/// True when `v` lies in the row space of `m`.
pub fn in_rowspace(m: &RatMatrix, v: &[Rat]) -> bool {
    let base = rank(m);
    let mut aug = m.clone();
    aug.push(v.to_vec());
    rank(&aug) == base
}

/// Basis of the null space {x : m x = 0}.
pub fn nullspace(m: &RatMatrix, cols: usize) -> RatMatrix {
    let mut copy = m.clone();
    let pivots = rref(&mut copy);
    copy.truncate(pivots.len());
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Rat::zero(); cols];
        v[free] = Rat::one();
        for (row, &pc) in copy.iter().zip(&pivots) {
            v[pc] = -row[free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Solves the square system `a x = b` by Gaussian elimination.
/// Returns None when `a` is singular.
pub fn solve_square(a: &RatMatrix, b: &[Rat]) -> Option<RatVec> {
    let n = a.len();
    let mut aug: RatMatrix = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() != n || pivots.iter().any(|&c| c >= n) {
        return None;
    }
    Some((0..n).map(|i| aug[i][n].clone()).collect())
}

/// Orthogonal projector onto the row space of `basis` (rows need not be
/// independent): P = B^T (B B^T)^{-1} B over an independent row subset.
pub fn rowspace_projector(basis: &RatMatrix, cols: usize) -> RatMatrix {
    let b = row_basis(basis);
    let k = b.len();
    if k == 0 {
        return vec![vec![Rat::zero(); cols]; cols];
    }
    // Gram matrix G = B B^T, then P = B^T G^{-1} B.
    let gram: RatMatrix = (0..k)
        .map(|i| (0..k).map(|j| dot(&b[i], &b[j])).collect())
        .collect();
    // Solve G Y = B, one column of B at a time.
    let mut y: RatMatrix = vec![vec![Rat::zero(); cols]; k];
    for c in 0..cols {
        let rhs: RatVec = (0..k).map(|i| b[i][c].clone()).collect();
        let col = solve_square(&gram, &rhs).expect("Gram matrix of a basis is invertible");
        for (i, v) in col.into_iter().enumerate() {
            y[i][c] = v;
        }
    }
    let mut p = vec![vec![Rat::zero(); cols]; cols];
    for i in 0..cols {
        for j in 0..cols {
            p[i][j] = (0..k).map(|t| &b[t][i] * &y[t][j]).sum();
        }
    }
    p
}

/// Projector onto the null space {x : m x = 0}: I minus the row-space
/// projector of `m`.
pub fn nullspace_projector(m: &RatMatrix, cols: usize) -> RatMatrix {
    let mut p = rowspace_projector(m, cols);
    for (i, row) in p.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            let val = if i == j { Rat::one() - &*x } else { -&*x };
            *x = val;
        }
    }
    p
}

/// Outcome of a bounded maximization.
#[derive(Debug, Clone)]
pub struct LpSolution {
    pub value: Rat,
    pub x: RatVec,
}

/// max c.x subject to a_i . x <= b_i over free x in R^n.
///
/// Every b_i must be non-negative: the problems posed here are cones
/// through the origin with added box bounds, so x = 0 is always feasible
/// and no phase-1 search is needed. Free variables are split into
/// positive and negative parts internally. Bland's rule guarantees
/// termination under degeneracy (ubiquitous here: many b_i are 0).
pub fn maximize(n: usize, rows: &[(RatVec, Rat)], objective: &[Rat]) -> LpSolution {
    assert!(rows.iter().all(|(_, b)| !b.is_negative()), "origin must be feasible");
    let m = rows.len();
    let nv = 2 * n; // split vars
    let total = nv + m; // plus one slack per row

    // Tableau: m rows of [coeffs | rhs], basis = slacks.
    let mut tab: RatMatrix = Vec::with_capacity(m);
    for (a, b) in rows {
        let mut row = vec![Rat::zero(); total + 1];
        for j in 0..n {
            row[2 * j] = a[j].clone();
            row[2 * j + 1] = -a[j].clone();
        }
        row[total] = b.clone();
        tab.push(row);
    }
    for (i, row) in tab.iter_mut().enumerate() {
        row[nv + i] = Rat::one();
    }
    let mut cost = vec![Rat::zero(); total + 1];
    for j in 0..n {
        cost[2 * j] = objective[j].clone();
        cost[2 * j + 1] = -objective[j].clone();
    }
    let mut basis: Vec<usize> = (nv..nv + m).collect();

    loop {
        // Bland: entering = lowest-index column with positive reduced cost.
        let Some(enter) = (0..total).find(|&j| cost[j].is_positive()) else {
            break;
        };
        // Ratio test, ties broken by lowest basis index (Bland).
        let mut leave: Option<(usize, Rat)> = None;
        for i in 0..m {
            if tab[i][enter].is_positive() {
                let ratio = &tab[i][total] / &tab[i][enter];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((li, _)) = leave else {
            // Unbounded: callers always box their variables, so treat as
            // a bug rather than a result.
            panic!("LP unbounded: objective not boxed");
        };
        // Pivot.
        let inv = tab[li][enter].recip();
        for x in &mut tab[li] {
            *x *= &inv;
        }
        for i in 0..m {
            if i != li && !tab[i][enter].is_zero() {
                let f = tab[i][enter].clone();
                for j in 0..=total {
                    let d = &f * &tab[li][j];
                    tab[i][j] -= d;
                }
            }
        }
        if !cost[enter].is_zero() {
            let f = cost[enter].clone();
            for j in 0..=total {
                let d = &f * &tab[li][j];
                cost[j] -= d;
            }
        }
        basis[li] = enter;
    }

    let mut split = vec![Rat::zero(); nv];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < nv {
            split[bv] = tab[i][total].clone();
        }
    }
    let x: RatVec = (0..n).map(|j| &split[2 * j] - &split[2 * j + 1]).collect();
    LpSolution {
        value: dot(objective, &x),
        x,
    }
}

/// Relative-interior probe for the cone {x : eq x = 0, ineq_i . x <= 0}.
///
/// Maximizes t subject to ineq_i . x <= -t for i in `strict`, plain
/// ineq_i . x <= 0 elsewhere, |x_j| <= 1 and t <= 1. A positive optimum
/// certifies a point satisfying every `strict` inequality strictly; an
/// optimum of zero means no such point exists.
pub fn max_strictness(
    eqs: &RatMatrix,
    ineqs: &RatMatrix,
    strict: &[usize],
    n: usize,
) -> LpSolution {
    // Variables: x_0..x_{n-1}, t.
    let mut rows: Vec<(RatVec, Rat)> = Vec::new();
    for e in eqs {
        let mut pos = e.clone();
        pos.push(Rat::zero());
        rows.push((pos.clone(), Rat::zero()));
        let neg: RatVec = pos.iter().map(|x| -x).collect();
        rows.push((neg, Rat::zero()));
    }
    for (i, c) in ineqs.iter().enumerate() {
        let mut row = c.clone();
        row.push(if strict.contains(&i) {
            Rat::one()
        } else {
            Rat::zero()
        });
        rows.push((row, Rat::zero()));
    }
    for j in 0..n {
        let mut up = vec![Rat::zero(); n + 1];
        up[j] = Rat::one();
        rows.push((up.clone(), Rat::one()));
        let dn: RatVec = up.iter().map(|x| -x).collect();
        rows.push((dn, Rat::one()));
    }
    let mut tcap = vec![Rat::zero(); n + 1];
    tcap[n] = Rat::one();
    rows.push((tcap, Rat::one()));

    let mut obj = vec![Rat::zero(); n + 1];
    obj[n] = Rat::one();
    let sol = maximize(n + 1, &rows, &obj);
    LpSolution {
        value: sol.value,
        x: sol.x[..n].to_vec(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[i64]]) -> RatMatrix {
        rows.iter().map(|r| rat_vec(r)).collect()
    }

    #[test]
    fn rank_and_rowspace() {
        let m = mat(&[&[1, 0, 1], &[0, 1, 1], &[1, 1, 2]]);
        assert_eq!(rank(&m), 2);
        assert!(in_rowspace(&m, &rat_vec(&[2, 3, 5])));
        assert!(!in_rowspace(&m, &rat_vec(&[1, 0, 0])));
    }

    #[test]
    fn nullspace_basis() {
        let m = mat(&[&[1, 1, 0], &[0, 0, 1]]);
        let ns = nullspace(&m, 3);
        assert_eq!(ns.len(), 1);
        // Each basis vector annihilates every row.
        for v in &ns {
            for row in &m {
                assert!(dot(row, v).is_zero());
            }
        }
    }

    #[test]
    fn square_solve() {
        let a = mat(&[&[2, 1], &[1, 3]]);
        let x = solve_square(&a, &rat_vec(&[5, 10])).unwrap();
        assert_eq!(x, vec![rat(1), rat(3)]);
        let singular = mat(&[&[1, 2], &[2, 4]]);
        assert!(solve_square(&singular, &rat_vec(&[1, 1])).is_none());
    }

    #[test]
    fn projector_onto_hyperplane_nullspace() {
        // Null space of (1, -1, 0, 0, 0, 0): the g1 = g2 hyperplane.
        let m = mat(&[&[1, -1, 0, 0, 0, 0]]);
        let p = nullspace_projector(&m, 6);
        // Idempotent and symmetric.
        for i in 0..6 {
            for j in 0..6 {
                assert_eq!(p[i][j], p[j][i]);
                let pij: Rat = (0..6).map(|k| &p[i][k] * &p[k][j]).sum();
                assert_eq!(pij, p[i][j]);
            }
        }
        // Trace = dimension = 5.
        let tr: Rat = (0..6).map(|i| p[i][i].clone()).sum();
        assert_eq!(tr, rat(5));
        assert_eq!(p[0][0], BigRational::new(BigInt::from(1), BigInt::from(2)));
    }

    #[test]
    fn simplex_basic() {
        // max x + y st x <= 3, y <= 2, x + y <= 4 (x, y free but boxed).
        let rows = vec![
            (rat_vec(&[1, 0]), rat(3)),
            (rat_vec(&[0, 1]), rat(2)),
            (rat_vec(&[1, 1]), rat(4)),
        ];
        let sol = maximize(2, &rows, &rat_vec(&[1, 1]));
        assert_eq!(sol.value, rat(4));
    }

    #[test]
    fn simplex_degenerate_at_origin() {
        // max x st x <= 0, -x <= 0: pinned to 0.
        let rows = vec![(rat_vec(&[1]), rat(0)), (rat_vec(&[-1]), rat(0))];
        let sol = maximize(1, &rows, &rat_vec(&[1]));
        assert_eq!(sol.value, rat(0));
    }

    #[test]
    fn strictness_probe_interior_exists() {
        // Cone x <= 0 in R^1 has interior points.
        let sol = max_strictness(&mat(&[]), &mat(&[&[1]]), &[0], 1);
        assert!(sol.value.is_positive());
        assert!(sol.x[0].is_negative());
    }

    #[test]
    fn strictness_probe_forced_equality() {
        // x <= 0 and -x <= 0 force x = 0.
        let sol = max_strictness(&mat(&[]), &mat(&[&[1], &[-1]]), &[0], 1);
        assert!(sol.value.is_zero());
    }

    #[test]
    fn strictness_probe_with_equalities() {
        // On the plane x = y, both x - y <= 0 and y - x <= 0 are tight,
        // but x <= 0 can still be strict.
        let eqs = mat(&[&[1, -1]]);
        let ineqs = mat(&[&[1, 0]]);
        let sol = max_strictness(&eqs, &ineqs, &[0], 2);
        assert!(sol.value.is_positive());
        assert_eq!(sol.x[0], sol.x[1]);
    }
}
