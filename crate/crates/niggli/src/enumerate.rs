//! Exact enumeration of the sub-polytopes of the reduced cone formed by
//! intersecting its fifteen 5-D boundary polytopes.
//!
//! Every subset of boundary cases of size 1 to 8 defines a candidate
//! polytope: the points of the closed reduced cone satisfying every
//! case's condition simultaneously. Two subsets can carve out the same
//! polytope; the canonical name of a polytope is its *maximal* case set:
//! all fifteen cases whose closed condition holds identically on it.
//!
//! The computation is exact. Each candidate is a rational polyhedral
//! cone {g : E g = 0, C g <= 0}; implied equalities are discovered with
//! an exact simplex ("can all inequalities be simultaneously strict?"),
//! degenerate candidates (a forced zero edge, or dimension 0) are
//! rejected, and the surviving cone's case content is decided by
//! row-space membership of the case normals plus validity of the
//! qualifier inequalities.
//!
//! Key economy: if a known generating subset S produced polytope K and
//! S is contained in T which is contained in K's maximal set, then T
//! produces K as well (more conditions than S but all already implied),
//! so T is recorded as another presentation of K without touching the
//! solver.

use crate::boundary::{catalog, Branch, BoundaryCase, CASE_IDS};
use crate::lp::{
    self, in_rowspace, max_strictness, nullspace, rank, rat_vec, Rat, RatMatrix, RatVec,
};
use num_traits::{Signed, Zero};
use std::collections::BTreeMap;
use std::sync::OnceLock;

/// Subsets of cases are bitmasks over `CASE_IDS` order.
pub type CaseSet = u16;

pub fn set_to_string(set: CaseSet) -> String {
    CASE_IDS
        .iter()
        .enumerate()
        .filter(|(i, _)| set & (1 << i) != 0)
        .map(|(_, c)| *c)
        .collect()
}

pub fn set_from_str(s: &str) -> CaseSet {
    let mut set = 0;
    for ch in s.chars() {
        let ch = ch.to_ascii_uppercase();
        if let Some(i) = CASE_IDS.iter().position(|&c| c == ch) {
            set |= 1 << i;
        }
    }
    set
}

/// One polytope class: a distinct intersection polytope with its
/// canonical maximal case set, dimension, symbolic pattern and every
/// generating subset encountered.
#[derive(Debug, Clone)]
pub struct PolytopeClass {
    /// Canonical name: the maximal case set, in case order (e.g. "1679ACD").
    pub key: String,
    pub maxset: CaseSet,
    /// Dimension of the linear span of the polytope.
    pub dim: usize,
    /// Symbolic coordinates of the span, e.g. "(r, r, s, r, r, r)".
    pub pattern: String,
    /// Every generating subset, in discovery order (sizes ascending).
    pub presentations: Vec<CaseSet>,
    /// A relative-interior point of one branch piece, for spot checks.
    pub sample: [f64; 6],
}

#[derive(Debug)]
pub struct Enumeration {
    pub classes: Vec<PolytopeClass>,
    /// dimension -> number of distinct classes.
    pub census: BTreeMap<usize, usize>,
}

/// Closure of one sign branch of the reduced cone, as rows c with
/// c . g <= 0.
fn branch_closure(branch: i32) -> RatMatrix {
    let s = branch as i64;
    vec![
        rat_vec(&[-1, 0, 0, 0, 0, 0]),    // 0 <= g1
        rat_vec(&[1, -1, 0, 0, 0, 0]),    // g1 <= g2
        rat_vec(&[0, 1, -1, 0, 0, 0]),    // g2 <= g3
        rat_vec(&[0, 0, 0, -s, 0, 0]),    // 0 <= s g4
        rat_vec(&[0, 0, 0, 0, -s, 0]),    // 0 <= s g5
        rat_vec(&[0, 0, 0, 0, 0, -s]),    // 0 <= s g6
        rat_vec(&[0, -1, 0, s, 0, 0]),    // |g4| <= g2
        rat_vec(&[-1, 0, 0, 0, s, 0]),    // |g5| <= g1
        rat_vec(&[-1, 0, 0, 0, 0, s]),    // |g6| <= g1
        rat_vec(&[-1, -1, 0, -1, -1, -1]), // 0 <= g1+g2+g4+g5+g6
    ]
}

fn compatible(case: &BoundaryCase, branch: i32) -> bool {
    match case.branch {
        Branch::Both => true,
        Branch::PlusOnly => branch == 1,
        Branch::MinusOnly => branch == -1,
    }
}

/// Result of resolving one branch piece of a candidate subset.
struct Piece {
    /// Row space containing every linear form vanishing on the piece.
    eqs: RatMatrix,
    /// All inequality rows of the piece (closure + qualifiers).
    ineqs: RatMatrix,
    /// Relative-interior point (every non-forced inequality strict).
    interior: RatVec,
    dim: usize,
}

/// Exact resolution of cl(branch) intersected with the subset's case
/// conditions: finds all implied equalities and a relative-interior point.
fn resolve_piece(set: CaseSet, branch: i32) -> Piece {
    let mut eqs: RatMatrix = Vec::new();
    let mut ineqs = branch_closure(branch);
    for (i, c) in catalog().iter().enumerate() {
        if set & (1 << i) != 0 {
            eqs.push(rat_vec(&c.normal));
            if let Some(q) = &c.qualifier {
                ineqs.push(rat_vec(q).iter().map(|x| -x).collect());
            }
        }
    }

    // Can every inequality be strict at once?
    let all: Vec<usize> = (0..ineqs.len()).collect();
    let sol = max_strictness(&eqs, &ineqs, &all, 6);
    let interior;
    if sol.value.is_positive() {
        interior = sol.x;
    } else {
        // Some inequalities are forced to equality on the whole cone;
        // find them one by one (the cone itself never changes, so a
        // single pass is enough).
        let mut forced = Vec::new();
        for i in 0..ineqs.len() {
            let obj: RatVec = ineqs[i].iter().map(|x| -x).collect();
            let mut rows: Vec<(RatVec, Rat)> = Vec::new();
            for e in &eqs {
                rows.push((e.clone(), Rat::zero()));
                rows.push((e.iter().map(|x| -x).collect(), Rat::zero()));
            }
            for c in &ineqs {
                rows.push((c.clone(), Rat::zero()));
            }
            for j in 0..6 {
                let mut up = vec![Rat::zero(); 6];
                up[j] = Rat::zero() + lp::rat(1);
                rows.push((up.clone(), lp::rat(1)));
                rows.push((up.iter().map(|x| -x).collect(), lp::rat(1)));
            }
            let best = lp::maximize(6, &rows, &obj);
            if best.value.is_zero() {
                forced.push(i);
            }
        }
        for &i in &forced {
            eqs.push(ineqs[i].clone());
        }
        // Fresh interior point with every surviving inequality strict.
        let free: Vec<usize> = (0..ineqs.len()).filter(|i| !forced.contains(i)).collect();
        let sol = max_strictness(&eqs, &ineqs, &free, 6);
        interior = sol.x;
    }

    let dim = 6 - rank(&eqs);
    Piece {
        eqs,
        ineqs,
        interior,
        dim,
    }
}

/// Forms vanishing on the union of the pieces' spans.
fn union_equalities(pieces: &[(i32, Piece)]) -> RatMatrix {
    let mut span: RatMatrix = Vec::new();
    for (_, p) in pieces {
        span.extend(nullspace(&p.eqs, 6));
    }
    nullspace(&span, 6)
}

/// Is `q . g >= 0` valid on the whole piece? (min of q over the boxed
/// cone is attained at 0.)
fn qualifier_valid(piece: &Piece, q: &[i64]) -> bool {
    let obj: RatVec = rat_vec(q).iter().map(|x| -x).collect();
    let mut rows: Vec<(RatVec, Rat)> = Vec::new();
    for e in &piece.eqs {
        rows.push((e.clone(), Rat::zero()));
        rows.push((e.iter().map(|x| -x).collect(), Rat::zero()));
    }
    for c in &piece.ineqs {
        rows.push((c.clone(), Rat::zero()));
    }
    for j in 0..6 {
        let mut up = vec![Rat::zero(); 6];
        up[j] = lp::rat(1);
        rows.push((up.clone(), lp::rat(1)));
        rows.push((up.iter().map(|x| -x).collect(), lp::rat(1)));
    }
    lp::maximize(6, &rows, &obj).value.is_zero()
}

/// The maximal case set: every case whose closed condition (equality,
/// qualifier and branch closure) holds identically on all pieces.
fn maximal_set(pieces: &[(i32, Piece)], union_eqs: &RatMatrix) -> CaseSet {
    let mut maxset = 0;
    'cases: for (i, c) in catalog().iter().enumerate() {
        if !in_rowspace(union_eqs, &rat_vec(&c.normal)) {
            continue;
        }
        for (branch, piece) in pieces {
            if !compatible(c, *branch) {
                // A case restricted to the other branch can only hold if
                // this piece sits inside both branch closures, i.e. its
                // angle part vanishes.
                let angles_zero = (3..6).all(|j| {
                    let mut e = [0i64; 6];
                    e[j] = 1;
                    in_rowspace(&piece.eqs, &rat_vec(&e))
                });
                if !angles_zero {
                    continue 'cases;
                }
            }
            if let Some(q) = &c.qualifier {
                if !qualifier_valid(piece, q) {
                    continue 'cases;
                }
            }
        }
        maxset |= 1 << i;
    }
    maxset
}

/// A degenerate candidate has a zero edge: some squared edge length is
/// identically 0 on it.
fn has_zero_edge(union_eqs: &RatMatrix) -> bool {
    (0..3).any(|j| {
        let mut e = [0i64; 6];
        e[j] = 1;
        in_rowspace(union_eqs, &rat_vec(&e))
    })
}

/// Renders the span of the polytope symbolically: free parameters are
/// named r, s, t, u, v in order of first appearance along g1..g6, each
/// scaled so its first occurrence has coefficient 1.
pub fn span_pattern(union_eqs: &RatMatrix) -> String {
    let basis = nullspace(union_eqs, 6);
    let nparams = basis.len();
    // coeffs[j][p] = coefficient of parameter p in slot j.
    let mut coeffs: Vec<Vec<Rat>> = (0..6)
        .map(|j| basis.iter().map(|v| v[j].clone()).collect())
        .collect();

    // Rename and rescale parameters by first appearance.
    let mut order: Vec<usize> = Vec::new();
    for j in 0..6 {
        for p in 0..nparams {
            if !coeffs[j][p].is_zero() && !order.contains(&p) {
                // Scale so the first occurrence is exactly +1.
                let scale = coeffs[j][p].clone().recip();
                for row in &mut coeffs {
                    row[p] *= &scale;
                }
                order.push(p);
            }
        }
    }

    let names = ["r", "s", "t", "u", "v", "w"];
    let mut slots = Vec::new();
    for j in 0..6 {
        let mut expr = String::new();
        for (rank_idx, &p) in order.iter().enumerate() {
            let c = &coeffs[j][p];
            if c.is_zero() {
                continue;
            }
            let name = names[rank_idx];
            let mag = c.abs();
            let body = if mag == lp::rat(1) {
                name.to_string()
            } else if mag.is_integer() {
                format!("{}{}", mag, name)
            } else if *mag.numer() == 1.into() {
                format!("{}/{}", name, mag.denom())
            } else {
                format!("{}{}/{}", mag.numer(), name, mag.denom())
            };
            if expr.is_empty() {
                if c.is_negative() {
                    expr.push('-');
                }
            } else if c.is_negative() {
                expr.push_str(" - ");
            } else {
                expr.push_str(" + ");
            }
            expr.push_str(&body);
        }
        if expr.is_empty() {
            expr.push('0');
        }
        slots.push(expr);
    }
    format!("({})", slots.join(", "))
}

fn branches_of(set: CaseSet) -> Vec<i32> {
    let mut has_plus = false;
    let mut has_minus = false;
    for (i, c) in catalog().iter().enumerate() {
        if set & (1 << i) != 0 {
            match c.branch {
                Branch::PlusOnly => has_plus = true,
                Branch::MinusOnly => has_minus = true,
                Branch::Both => {}
            }
        }
    }
    match (has_plus, has_minus) {
        (true, true) => vec![], // forces a zero edge; rejected outright
        (true, false) => vec![1],
        (false, true) => vec![-1],
        (false, false) => vec![1, -1],
    }
}

/// Classifies one subset from scratch (no presentation shortcut).
/// Returns None for degenerate subsets.
pub fn classify_subset(set: CaseSet) -> Option<PolytopeClass> {
    let branches = branches_of(set);
    if branches.is_empty() {
        return None;
    }
    let pieces: Vec<(i32, Piece)> = branches
        .into_iter()
        .map(|b| (b, resolve_piece(set, b)))
        .filter(|(_, p)| p.dim > 0)
        .collect();
    if pieces.is_empty() {
        return None;
    }
    let union_eqs = union_equalities(&pieces);
    let dim = 6 - rank(&union_eqs);
    if dim == 0 || has_zero_edge(&union_eqs) {
        return None;
    }
    let maxset = maximal_set(&pieces, &union_eqs);
    let pattern = span_pattern(&union_eqs);
    let sample = {
        let p = &pieces[0].1;
        let mut s = [0.0; 6];
        for (j, v) in p.interior.iter().enumerate() {
            s[j] = rat_to_f64(v);
        }
        s
    };
    Some(PolytopeClass {
        key: set_to_string(maxset),
        maxset,
        dim,
        pattern,
        presentations: vec![set],
        sample,
    })
}

fn rat_to_f64(r: &Rat) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or_else(|| {
        let n = r.numer().to_f64().unwrap();
        let d = r.denom().to_f64().unwrap();
        n / d
    })
}

/// Full enumeration over all subsets of 1 to `max_size` cases.
pub fn enumerate_polytopes_with_size(max_size: u32) -> Enumeration {
    let mut classes: Vec<PolytopeClass> = Vec::new();
    // maxset -> index into classes.
    let mut by_maxset: BTreeMap<CaseSet, usize> = BTreeMap::new();

    let mut subsets: Vec<CaseSet> = (1u16..1 << 15)
        .filter(|s| (1..=max_size).contains(&s.count_ones()))
        .collect();
    subsets.sort_by_key(|s| s.count_ones());

    for set in subsets {
        if branches_of(set).is_empty() {
            continue;
        }
        // Presentation shortcut: an already-known generator inside `set`
        // whose maximal set contains `set` settles it without the solver.
        let mut matched = None;
        'outer: for (idx, class) in classes.iter().enumerate() {
            if set & class.maxset == set {
                for &p in &class.presentations {
                    if p & set == p {
                        matched = Some(idx);
                        break 'outer;
                    }
                }
            }
        }
        if let Some(idx) = matched {
            classes[idx].presentations.push(set);
            continue;
        }

        let Some(fresh) = classify_subset(set) else {
            continue;
        };
        match by_maxset.get(&fresh.maxset) {
            Some(&idx) => {
                debug_assert_eq!(classes[idx].dim, fresh.dim);
                classes[idx].presentations.push(set);
            }
            None => {
                by_maxset.insert(fresh.maxset, classes.len());
                classes.push(fresh);
            }
        }
    }

    let mut census = BTreeMap::new();
    for c in &classes {
        *census.entry(c.dim).or_insert(0) += 1;
    }
    Enumeration { classes, census }
}

static ENUMERATION: OnceLock<Enumeration> = OnceLock::new();

/// The enumeration over subsets of size 1..=8, computed once per process.
pub fn enumerate_polytopes() -> &'static Enumeration {
    ENUMERATION.get_or_init(|| enumerate_polytopes_with_size(8))
}

impl Enumeration {
    pub fn class_by_key(&self, key: &str) -> Option<&PolytopeClass> {
        let set = set_from_str(key);
        self.classes.iter().find(|c| c.maxset == set)
    }
}

/// The fourteen 1-D classes: key and pattern of the spanning ray. Each
/// key generates itself (a maximal set always reproduces its polytope).
pub fn one_d_catalog() -> Vec<(&'static str, &'static str)> {
    vec![
        ("12679ACD", "(r, r, r, r, r, r)"),
        ("12345", "(r, r, r, 0, 0, 0)"),
        ("1234CD", "(r, r, r, 0, 0, r)"),
        ("1234E", "(r, r, r, 0, 0, -r)"),
        ("12359A", "(r, r, r, 0, r, 0)"),
        ("1235B", "(r, r, r, 0, -r, 0)"),
        ("123AD", "(r, r, r, 0, r, r)"),
        ("123BEF", "(r, r, r, 0, -r, -r)"),
        ("124567", "(r, r, r, r, 0, 0)"),
        ("12458", "(r, r, r, -r, 0, 0)"),
        ("1247C", "(r, r, r, r, 0, r)"),
        ("1248EF", "(r, r, r, -r, 0, -r)"),
        ("12569", "(r, r, r, r, r, 0)"),
        ("1258BF", "(r, r, r, -r, -r, 0)"),
    ]
}
