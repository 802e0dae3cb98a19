//! Niggli reduction with accumulated transforms.
//!
//! The reduction loop is the classic eight-step algorithm of swaps, sign
//! normalizations and shears, each realized as an integer basis transform
//! with determinant +1. The induced exact 6x6 G6 matrix is accumulated
//! alongside the 3x3 basis transform so callers can map vectors between
//! the unreduced and reduced frames.
//!
//! `brute_force_reduce` is an independent oracle: it searches every basis
//! transform with bounded integer entries for one that lands in the
//! reduced cone. It shares no code path with the stepwise loop beyond the
//! reducedness predicate.

use crate::error::{NiggliError, Result};
use crate::fuzz::Fuzz;
use crate::g6::{g6_matrix_from_basis, BasisTransform, RatMat6, G6};
use std::sync::LazyLock;

/// Outcome of a successful reduction.
#[derive(Debug, Clone)]
pub struct ReductionResult {
    pub reduced: G6,
    /// Integer basis transform E with det +1: new basis rows = E * old.
    pub basis_transform: BasisTransform,
    /// Exact induced G6 transform; `g6_transform.apply(&input) == reduced`
    /// up to rounding.
    pub g6_transform: RatMat6,
    /// Human-readable log of the applied steps.
    pub steps: Vec<String>,
    pub iterations: usize,
}

/// Reducedness report: empty `failed` means the vector is Niggli reduced.
#[derive(Debug, Clone)]
pub struct ReducednessReport {
    pub failed: Vec<String>,
    /// +1 when g4, g5, g6 are all positive, -1 when all non-positive
    /// (fuzzily), 0 when the sign pattern is mixed.
    pub branch: i32,
}

impl ReducednessReport {
    pub fn is_reduced(&self) -> bool {
        self.failed.is_empty()
    }
}

/// Checks the full layered set of reduction conditions at tolerance `tol`.
pub fn reducedness_report(g: &G6, tol: f64) -> ReducednessReport {
    let fz = Fuzz::for_g6(&g.0, tol);
    let (g1, g2, g3, g4, g5, g6) = (g[0], g[1], g[2], g[3], g[4], g[5]);
    let mut failed = Vec::new();
    let mut fail = |name: &str| failed.push(name.to_string());

    if !fz.gt(g1, 0.0) {
        fail("g1 > 0");
    }
    if !fz.le(g1, g2) {
        fail("g1 <= g2");
    }
    if !fz.le(g2, g3) {
        fail("g2 <= g3");
    }
    if fz.eq(g1, g2) && !fz.le(g4.abs(), g5.abs()) {
        fail("g1 = g2 => |g4| <= |g5|");
    }
    if fz.eq(g2, g3) && !fz.le(g5.abs(), g6.abs()) {
        fail("g2 = g3 => |g5| <= |g6|");
    }

    let signs = [fz.sign(g4), fz.sign(g5), fz.sign(g6)];
    let branch = if signs.iter().all(|&s| s > 0) {
        1
    } else if signs.iter().all(|&s| s <= 0) {
        -1
    } else {
        0
    };

    match branch {
        1 => {
            if !fz.le(g4, g2) {
                fail("g4 <= g2");
            }
            if !fz.le(g5, g1) {
                fail("g5 <= g1");
            }
            if !fz.le(g6, g1) {
                fail("g6 <= g1");
            }
            if fz.eq(g4, g2) && !fz.le(g6, 2.0 * g5) {
                fail("g4 = g2 => g6 <= 2 g5");
            }
            if fz.eq(g5, g1) && !fz.le(g6, 2.0 * g4) {
                fail("g5 = g1 => g6 <= 2 g4");
            }
            if fz.eq(g6, g1) && !fz.le(g5, 2.0 * g4) {
                fail("g6 = g1 => g5 <= 2 g4");
            }
        }
        -1 => {
            if !fz.le(g4.abs(), g2) {
                fail("|g4| <= g2");
            }
            if !fz.le(g5.abs(), g1) {
                fail("|g5| <= g1");
            }
            if !fz.le(g6.abs(), g1) {
                fail("|g6| <= g1");
            }
            if fz.eq(g4.abs(), g2) && !fz.is_zero(g6) {
                fail("|g4| = g2 => g6 = 0");
            }
            if fz.eq(g5.abs(), g1) && !fz.is_zero(g6) {
                fail("|g5| = g1 => g6 = 0");
            }
            if fz.eq(g6.abs(), g1) && !fz.is_zero(g5) {
                fail("|g6| = g1 => g5 = 0");
            }
            let s = g1 + g2 + g4 + g5 + g6;
            if !fz.ge(s, 0.0) {
                fail("g1 + g2 + g4 + g5 + g6 >= 0");
            }
            if fz.is_zero(s) && !fz.le(2.0 * (g1 + g5) + g6, 0.0) {
                fail("g1+g2+g4+g5+g6 = 0 => 2(g1+g5)+g6 <= 0");
            }
        }
        _ => fail("g4, g5, g6 all positive or all non-positive"),
    }

    ReducednessReport { failed, branch }
}

pub fn is_niggli_reduced(g: &G6, tol: f64) -> bool {
    reducedness_report(g, tol).is_reduced()
}

const MAX_ITERATIONS: usize = 1000;

/// Reduces `g` to its Niggli form, returning the reduced vector together
/// with the accumulated basis and G6 transforms.
pub fn niggli_reduce(g: &G6, tol: f64) -> Result<ReductionResult> {
    g.validate(1e-12)?;
    let mut cur = *g;
    let mut total = BasisTransform::identity();
    let mut steps: Vec<String> = Vec::new();

    for iteration in 0..MAX_ITERATIONS {
        let fz = Fuzz::for_g6(&cur.0, tol);
        let (a, b, _c, xi, eta, _zeta) = (cur[0], cur[1], cur[2], cur[3], cur[4], cur[5]);

        let mut apply = |e3: BasisTransform, label: &str, cur: &mut G6, total: &mut BasisTransform| {
            let m = g6_matrix_from_basis(&e3);
            *cur = m.apply(cur);
            *total = e3.mul(total);
            steps.push(label.to_string());
        };

        // Swap a <-> b (largest first, tie broken on the angle part).
        if fz.gt(a, b) || (fz.eq(a, b) && fz.gt(xi.abs(), eta.abs())) {
            apply(
                BasisTransform([[0, -1, 0], [-1, 0, 0], [0, 0, -1]]),
                "swap-ab",
                &mut cur,
                &mut total,
            );
            // fall through: the b <-> c ordering is checked next.
        }
        let (_a, b, c, xi, eta, zeta) = (cur[0], cur[1], cur[2], cur[3], cur[4], cur[5]);
        if fz.gt(b, c) || (fz.eq(b, c) && fz.gt(eta.abs(), zeta.abs())) {
            apply(
                BasisTransform([[-1, 0, 0], [0, 0, -1], [0, -1, 0]]),
                "swap-bc",
                &mut cur,
                &mut total,
            );
            continue;
        }

        // Sign normalization of (g4, g5, g6).
        let signs = [fz.sign(xi), fz.sign(eta), fz.sign(zeta)];
        let product: i32 = signs.iter().filter(|&&s| s != 0).product::<i32>()
            * if signs.contains(&0) { 0 } else { 1 };
        let flags: [i64; 3] = if product == 1 {
            // All three nonzero with positive product: make all positive.
            [signs[0] as i64, signs[1] as i64, signs[2] as i64]
        } else {
            // Make every slot non-positive; an odd number of flips is
            // completed on a fuzzily-zero slot to keep det +1.
            let mut f = [1i64; 3];
            for (fi, s) in f.iter_mut().zip(signs) {
                if s > 0 {
                    *fi = -1;
                }
            }
            if f.iter().product::<i64>() == -1 {
                if let Some(z) = signs.iter().position(|&s| s == 0) {
                    f[z] = -f[z];
                }
            }
            f
        };
        if flags.iter().product::<i64>() == 1 && flags != [1, 1, 1] {
            apply(
                BasisTransform([[flags[0], 0, 0], [0, flags[1], 0], [0, 0, flags[2]]]),
                "normalize-signs",
                &mut cur,
                &mut total,
            );
            continue;
        }

        let (a, b, _c, xi, eta, zeta) = (cur[0], cur[1], cur[2], cur[3], cur[4], cur[5]);

        // Shear c across b.
        if fz.gt(xi.abs(), b)
            || (fz.eq(xi, b) && fz.lt(2.0 * eta, zeta))
            || (fz.eq(xi, -b) && fz.lt(zeta, 0.0))
        {
            let s = if xi > 0.0 { 1 } else { -1 };
            apply(
                BasisTransform([[1, 0, 0], [0, 1, 0], [0, -s, 1]]),
                "shear-cb",
                &mut cur,
                &mut total,
            );
            continue;
        }
        // Shear c across a.
        if fz.gt(eta.abs(), a)
            || (fz.eq(eta, a) && fz.lt(2.0 * xi, zeta))
            || (fz.eq(eta, -a) && fz.lt(zeta, 0.0))
        {
            let s = if eta > 0.0 { 1 } else { -1 };
            apply(
                BasisTransform([[1, 0, 0], [0, 1, 0], [-s, 0, 1]]),
                "shear-ca",
                &mut cur,
                &mut total,
            );
            continue;
        }
        // Shear b across a.
        if fz.gt(zeta.abs(), a)
            || (fz.eq(zeta, a) && fz.lt(2.0 * xi, eta))
            || (fz.eq(zeta, -a) && fz.lt(eta, 0.0))
        {
            let s = if zeta > 0.0 { 1 } else { -1 };
            apply(
                BasisTransform([[1, 0, 0], [-s, 1, 0], [0, 0, 1]]),
                "shear-ba",
                &mut cur,
                &mut total,
            );
            continue;
        }
        // Fold the body diagonal back into the cell.
        let total_sum = a + b + xi + eta + zeta;
        if fz.lt(total_sum, 0.0)
            || (fz.is_zero(total_sum) && fz.gt(2.0 * (a + eta) + zeta, 0.0))
        {
            apply(
                BasisTransform([[1, 0, 0], [0, 1, 0], [1, 1, 1]]),
                "fold-diagonal",
                &mut cur,
                &mut total,
            );
            continue;
        }

        debug_assert_eq!(total.det(), 1);
        return Ok(ReductionResult {
            reduced: cur,
            g6_transform: g6_matrix_from_basis(&total),
            basis_transform: total,
            steps,
            iterations: iteration,
        });
    }

    let tail = steps.iter().rev().take(3).rev().cloned().collect();
    Err(NiggliError::NonConvergence {
        iterations: MAX_ITERATIONS,
        last_steps: tail,
    })
}

/// All 3x3 integer matrices with entries in [-2, 2] and determinant +1.
/// Negating a matrix flips its determinant but induces the same G6 map,
/// so the det +1 half covers every bounded metric transform.
static UNIMODULAR_BOUND2: LazyLock<Vec<BasisTransform>> = LazyLock::new(|| unimodular_list(2));

fn unimodular_list(bound: i64) -> Vec<BasisTransform> {
    let range: Vec<i64> = (-bound..=bound).collect();
    let mut out = Vec::new();
    let mut m = [[0i64; 3]; 3];
    // Nested loops beat a generic odometer here: det short-circuits on
    // the first two rows via the cross product.
    for &a in &range {
        for &b in &range {
            for &c in &range {
                m[0] = [a, b, c];
                for &d in &range {
                    for &e in &range {
                        for &f in &range {
                            m[1] = [d, e, f];
                            let cx = [b * f - c * e, c * d - a * f, a * e - b * d];
                            if cx == [0, 0, 0] {
                                continue; // first two rows dependent: det 0
                            }
                            for &g in &range {
                                for &h in &range {
                                    for &i in &range {
                                        if cx[0] * g + cx[1] * h + cx[2] * i == 1 {
                                            m[2] = [g, h, i];
                                            out.push(BasisTransform(m));
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

/// Exhaustive-search oracle: finds the Niggli-reduced image of `g` by
/// trying every basis transform with entries bounded by `bound`.
pub fn brute_force_reduce(g: &G6, bound: i64, tol: f64) -> Result<G6> {
    g.validate(1e-12)?;
    let owned;
    let matrices: &[BasisTransform] = if bound == 2 {
        &UNIMODULAR_BOUND2
    } else {
        owned = unimodular_list(bound);
        &owned
    };

    let mut best: Option<G6> = None;
    for e in matrices {
        let t = transform_g6(e, g);
        // Cheap pre-filter before the full layered predicate.
        if t[0] > t[1] + tol * t[1].abs().max(1.0) || t[1] > t[2] + tol * t[2].abs().max(1.0) {
            continue;
        }
        if let Some(b) = &best {
            // A reduced cell has the lexicographically smallest sorted
            // edges; skip anything clearly worse than the incumbent.
            if t[0] > b[0] + tol * b[0] {
                continue;
            }
        }
        if is_niggli_reduced(&t, tol) {
            match &best {
                Some(b) if !lex_better(&t, b, tol) => {}
                _ => best = Some(t),
            }
        }
    }
    best.ok_or(NiggliError::NoCandidateFound { bound })
}

/// Applies the G6 map induced by `e` directly in floats (hot path of the
/// brute-force search; the exact rational route is needless here).
fn transform_g6(e: &BasisTransform, g: &G6) -> G6 {
    let q = |x: &[i64; 3], y: &[i64; 3]| -> f64 {
        let (x1, x2, x3) = (x[0] as f64, x[1] as f64, x[2] as f64);
        let (y1, y2, y3) = (y[0] as f64, y[1] as f64, y[2] as f64);
        x1 * y1 * g[0]
            + x2 * y2 * g[1]
            + x3 * y3 * g[2]
            + 0.5 * (x2 * y3 + x3 * y2) * g[3]
            + 0.5 * (x1 * y3 + x3 * y1) * g[4]
            + 0.5 * (x1 * y2 + x2 * y1) * g[5]
    };
    let [u, v, w] = &e.0;
    G6([
        q(u, u),
        q(v, v),
        q(w, w),
        2.0 * q(v, w),
        2.0 * q(u, w),
        2.0 * q(u, v),
    ])
}

/// Fuzzy lexicographic "strictly better" for tie-breaking equivalent
/// reduced presentations of the same cell.
fn lex_better(x: &G6, y: &G6, tol: f64) -> bool {
    let fz = Fuzz::for_g6(&y.0, tol);
    for i in 0..6 {
        if fz.lt(x[i], y[i]) {
            return true;
        }
        if fz.gt(x[i], y[i]) {
            return false;
        }
    }
    false
}
