//! The catalog of the fifteen 5-D boundary polytopes of the Niggli cone.
//!
//! Each case bundles its defining condition (a hyperplane normal plus, for
//! the split face-diagonal cases, an inequality qualifier), its branch
//! restriction, the E3 presentation of the boundary transformation, the
//! exact G6 transformation matrix M, the exact projector P onto the
//! bounding hyperplane, and the special-position (primed) condition where
//! one exists.
//!
//! Case ids are the hexadecimal digits 1 through F.

use crate::error::{NiggliError, Result};
use crate::fuzz::Fuzz;
use crate::g6::{BasisTransform, RatMat6, G6};
use num_rational::Rational64;
use std::sync::LazyLock;

/// Which sign regime of (g4, g5, g6) a boundary case belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Branch {
    /// Cases 1-5: boundaries of both the all-acute and all-obtuse branches.
    Both,
    /// Cases 6, 7, 9, A, C, D: all-acute (+++) only.
    PlusOnly,
    /// Cases 8, B, E, F: all-obtuse (---) only.
    MinusOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum CaseClass {
    EqualEdges,
    NinetyDegrees,
    FaceDiagonal,
    BodyDiagonal,
}

/// One of the fifteen 5-D boundary cases.
#[derive(Debug, Clone)]
pub struct BoundaryCase {
    pub id: char,
    pub class: CaseClass,
    /// Integer normal n of the case hyperplane n . g = 0.
    pub normal: [i64; 6],
    /// Closed inequality qualifier q . g >= 0, for the split pairs 6/7,
    /// 9/A, C/D; None elsewhere.
    pub qualifier: Option<[i64; 6]>,
    pub branch: Branch,
    /// Right-handed E3 presentation (rows act on the edge vectors).
    pub e3: BasisTransform,
    /// Exact G6 transformation matrix, as printed.
    pub m: RatMat6,
    /// Exact projector onto the bounding hyperplane, as printed.
    pub p: RatMat6,
    /// Linear forms (each = 0) of the primed special-position condition.
    /// Empty for cases 6, 8, 9, B, C, E.
    pub primed: Vec<[i64; 6]>,
}

pub const CASE_IDS: [char; 15] = [
    '1', '2', '3', '4', '5', '6', '7', '8', '9', 'A', 'B', 'C', 'D', 'E', 'F',
];

/// Flat-boundary pairs: two cases sharing one bounding hyperplane, divided
/// along the listed form (= 0).
pub const FLAT_PAIRS: [(char, char, [i64; 6]); 3] = [
    ('6', '7', [0, 0, 0, 0, 1, -1]), // g2 = g4 pair, divided along g5 = g6
    ('9', 'A', [0, 0, 0, 1, 0, -1]), // g1 = g5 pair, divided along g4 = g6
    ('C', 'D', [0, 0, 0, 1, -1, 0]), // g1 = g6 pair, divided along g4 = g5
];

fn frac(n: i64, d: i64) -> Rational64 {
    Rational64::new(n, d)
}

fn build_catalog() -> Vec<BoundaryCase> {
    let h = |rows: [[(i64, i64); 6]; 6]| RatMat6::from_fracs(rows);
    let i = |rows: [[i64; 6]; 6]| RatMat6::from_ints(rows);

    let p1 = h([
        [(1, 2), (1, 2), (0, 1), (0, 1), (0, 1), (0, 1)],
        [(1, 2), (1, 2), (0, 1), (0, 1), (0, 1), (0, 1)],
        [(0, 1), (0, 1), (1, 1), (0, 1), (0, 1), (0, 1)],
        [(0, 1), (0, 1), (0, 1), (1, 1), (0, 1), (0, 1)],
        [(0, 1), (0, 1), (0, 1), (0, 1), (1, 1), (0, 1)],
        [(0, 1), (0, 1), (0, 1), (0, 1), (0, 1), (1, 1)],
    ]);
    let p2 = h([
        [(1, 1), (0, 1), (0, 1), (0, 1), (0, 1), (0, 1)],
        [(0, 1), (1, 2), (1, 2), (0, 1), (0, 1), (0, 1)],
        [(0, 1), (1, 2), (1, 2), (0, 1), (0, 1), (0, 1)],
        [(0, 1), (0, 1), (0, 1), (1, 1), (0, 1), (0, 1)],
        [(0, 1), (0, 1), (0, 1), (0, 1), (1, 1), (0, 1)],
        [(0, 1), (0, 1), (0, 1), (0, 1), (0, 1), (1, 1)],
    ]);
    let p67 = h([
        [(1, 1), (0, 1), (0, 1), (0, 1), (0, 1), (0, 1)],
        [(0, 1), (1, 2), (0, 1), (1, 2), (0, 1), (0, 1)],
        [(0, 1), (0, 1), (1, 1), (0, 1), (0, 1), (0, 1)],
        [(0, 1), (1, 2), (0, 1), (1, 2), (0, 1), (0, 1)],
        [(0, 1), (0, 1), (0, 1), (0, 1), (1, 1), (0, 1)],
        [(0, 1), (0, 1), (0, 1), (0, 1), (0, 1), (1, 1)],
    ]);
    let p8 = h([
        [(1, 1), (0, 1), (0, 1), (0, 1), (0, 1), (0, 1)],
        [(0, 1), (1, 2), (0, 1), (-1, 2), (0, 1), (0, 1)],
        [(0, 1), (0, 1), (1, 1), (0, 1), (0, 1), (0, 1)],
        [(0, 1), (-1, 2), (0, 1), (1, 2), (0, 1), (0, 1)],
        [(0, 1), (0, 1), (0, 1), (0, 1), (1, 1), (0, 1)],
        [(0, 1), (0, 1), (0, 1), (0, 1), (0, 1), (1, 1)],
    ]);
    let p9a = h([
        [(1, 2), (0, 1), (0, 1), (0, 1), (1, 2), (0, 1)],
        [(0, 1), (1, 1), (0, 1), (0, 1), (0, 1), (0, 1)],
        [(0, 1), (0, 1), (1, 1), (0, 1), (0, 1), (0, 1)],
        [(0, 1), (0, 1), (0, 1), (1, 1), (0, 1), (0, 1)],
        [(1, 2), (0, 1), (0, 1), (0, 1), (1, 2), (0, 1)],
        [(0, 1), (0, 1), (0, 1), (0, 1), (0, 1), (1, 1)],
    ]);
    let pb = h([
        [(1, 2), (0, 1), (0, 1), (0, 1), (-1, 2), (0, 1)],
        [(0, 1), (1, 1), (0, 1), (0, 1), (0, 1), (0, 1)],
        [(0, 1), (0, 1), (1, 1), (0, 1), (0, 1), (0, 1)],
        [(0, 1), (0, 1), (0, 1), (1, 1), (0, 1), (0, 1)],
        [(-1, 2), (0, 1), (0, 1), (0, 1), (1, 2), (0, 1)],
        [(0, 1), (0, 1), (0, 1), (0, 1), (0, 1), (1, 1)],
    ]);
    let pcd = h([
        [(1, 2), (0, 1), (0, 1), (0, 1), (0, 1), (1, 2)],
        [(0, 1), (1, 1), (0, 1), (0, 1), (0, 1), (0, 1)],
        [(0, 1), (0, 1), (1, 1), (0, 1), (0, 1), (0, 1)],
        [(0, 1), (0, 1), (0, 1), (1, 1), (0, 1), (0, 1)],
        [(0, 1), (0, 1), (0, 1), (0, 1), (1, 1), (0, 1)],
        [(1, 2), (0, 1), (0, 1), (0, 1), (0, 1), (1, 2)],
    ]);
    let pe = h([
        [(1, 2), (0, 1), (0, 1), (0, 1), (0, 1), (-1, 2)],
        [(0, 1), (1, 1), (0, 1), (0, 1), (0, 1), (0, 1)],
        [(0, 1), (0, 1), (1, 1), (0, 1), (0, 1), (0, 1)],
        [(0, 1), (0, 1), (0, 1), (1, 1), (0, 1), (0, 1)],
        [(0, 1), (0, 1), (0, 1), (0, 1), (1, 1), (0, 1)],
        [(-1, 2), (0, 1), (0, 1), (0, 1), (0, 1), (1, 2)],
    ]);
    let pf = h([
        [(4, 5), (-1, 5), (0, 1), (-1, 5), (-1, 5), (-1, 5)],
        [(-1, 5), (4, 5), (0, 1), (-1, 5), (-1, 5), (-1, 5)],
        [(0, 1), (0, 1), (1, 1), (0, 1), (0, 1), (0, 1)],
        [(-1, 5), (-1, 5), (0, 1), (4, 5), (-1, 5), (-1, 5)],
        [(-1, 5), (-1, 5), (0, 1), (-1, 5), (4, 5), (-1, 5)],
        [(-1, 5), (-1, 5), (0, 1), (-1, 5), (-1, 5), (4, 5)],
    ]);

    vec![
        BoundaryCase {
            id: '1',
            class: CaseClass::EqualEdges,
            normal: [1, -1, 0, 0, 0, 0],
            qualifier: None,
            branch: Branch::Both,
            e3: BasisTransform([[0, -1, 0], [-1, 0, 0], [0, 0, -1]]),
            m: i([
                [0, 1, 0, 0, 0, 0],
                [1, 0, 0, 0, 0, 0],
                [0, 0, 1, 0, 0, 0],
                [0, 0, 0, 0, 1, 0],
                [0, 0, 0, 1, 0, 0],
                [0, 0, 0, 0, 0, 1],
            ]),
            p: p1,
            primed: vec![[0, 0, 0, 1, -1, 0]],
        },
        BoundaryCase {
            id: '2',
            class: CaseClass::EqualEdges,
            normal: [0, 1, -1, 0, 0, 0],
            qualifier: None,
            branch: Branch::Both,
            e3: BasisTransform([[-1, 0, 0], [0, 0, -1], [0, -1, 0]]),
            m: i([
                [1, 0, 0, 0, 0, 0],
                [0, 0, 1, 0, 0, 0],
                [0, 1, 0, 0, 0, 0],
                [0, 0, 0, 1, 0, 0],
                [0, 0, 0, 0, 0, 1],
                [0, 0, 0, 0, 1, 0],
            ]),
            p: p2,
            primed: vec![[0, 0, 0, 0, 1, -1]],
        },
        BoundaryCase {
            id: '3',
            class: CaseClass::NinetyDegrees,
            normal: [0, 0, 0, 1, 0, 0],
            qualifier: None,
            branch: Branch::Both,
            e3: BasisTransform([[1, 0, 0], [0, -1, 0], [0, 0, -1]]),
            m: i([
                [1, 0, 0, 0, 0, 0],
                [0, 1, 0, 0, 0, 0],
                [0, 0, 1, 0, 0, 0],
                [0, 0, 0, 1, 0, 0],
                [0, 0, 0, 0, -1, 0],
                [0, 0, 0, 0, 0, -1],
            ]),
            p: i([
                [1, 0, 0, 0, 0, 0],
                [0, 1, 0, 0, 0, 0],
                [0, 0, 1, 0, 0, 0],
                [0, 0, 0, 0, 0, 0],
                [0, 0, 0, 0, 1, 0],
                [0, 0, 0, 0, 0, 1],
            ]),
            primed: vec![[0, 0, 0, 0, 1, 0], [0, 0, 0, 0, 0, 1]],
        },
        BoundaryCase {
            id: '4',
            class: CaseClass::NinetyDegrees,
            normal: [0, 0, 0, 0, 1, 0],
            qualifier: None,
            branch: Branch::Both,
            e3: BasisTransform([[-1, 0, 0], [0, 1, 0], [0, 0, -1]]),
            m: i([
                [1, 0, 0, 0, 0, 0],
                [0, 1, 0, 0, 0, 0],
                [0, 0, 1, 0, 0, 0],
                [0, 0, 0, -1, 0, 0],
                [0, 0, 0, 0, 1, 0],
                [0, 0, 0, 0, 0, -1],
            ]),
            p: i([
                [1, 0, 0, 0, 0, 0],
                [0, 1, 0, 0, 0, 0],
                [0, 0, 1, 0, 0, 0],
                [0, 0, 0, 1, 0, 0],
                [0, 0, 0, 0, 0, 0],
                [0, 0, 0, 0, 0, 1],
            ]),
            primed: vec![[0, 0, 0, 1, 0, 0], [0, 0, 0, 0, 0, 1]],
        },
        BoundaryCase {
            id: '5',
            class: CaseClass::NinetyDegrees,
            normal: [0, 0, 0, 0, 0, 1],
            qualifier: None,
            branch: Branch::Both,
            e3: BasisTransform([[-1, 0, 0], [0, -1, 0], [0, 0, 1]]),
            m: i([
                [1, 0, 0, 0, 0, 0],
                [0, 1, 0, 0, 0, 0],
                [0, 0, 1, 0, 0, 0],
                [0, 0, 0, -1, 0, 0],
                [0, 0, 0, 0, -1, 0],
                [0, 0, 0, 0, 0, 1],
            ]),
            p: i([
                [1, 0, 0, 0, 0, 0],
                [0, 1, 0, 0, 0, 0],
                [0, 0, 1, 0, 0, 0],
                [0, 0, 0, 1, 0, 0],
                [0, 0, 0, 0, 1, 0],
                [0, 0, 0, 0, 0, 0],
            ]),
            primed: vec![[0, 0, 0, 1, 0, 0], [0, 0, 0, 0, 1, 0]],
        },
        BoundaryCase {
            id: '6',
            class: CaseClass::FaceDiagonal,
            normal: [0, 1, 0, -1, 0, 0],
            qualifier: Some([0, 0, 0, 0, 1, -1]),
            branch: Branch::PlusOnly,
            e3: BasisTransform([[1, 0, 0], [0, -1, 0], [0, 1, -1]]),
            m: i([
                [1, 0, 0, 0, 0, 0],
                [0, 1, 0, 0, 0, 0],
                [0, 1, 1, -1, 0, 0],
                [0, -2, 0, 1, 0, 0],
                [0, 0, 0, 0, -1, 1],
                [0, 0, 0, 0, 0, -1],
            ]),
            p: p67.clone(),
            primed: vec![],
        },
        BoundaryCase {
            id: '7',
            class: CaseClass::FaceDiagonal,
            normal: [0, 1, 0, -1, 0, 0],
            qualifier: Some([0, 0, 0, 0, -1, 1]),
            branch: Branch::PlusOnly,
            e3: BasisTransform([[-1, 0, 0], [0, -1, 0], [0, -1, 1]]),
            m: i([
                [1, 0, 0, 0, 0, 0],
                [0, 1, 0, 0, 0, 0],
                [0, 1, 1, -1, 0, 0],
                [0, 2, 0, -1, 0, 0],
                [0, 0, 0, 0, -1, 1],
                [0, 0, 0, 0, 0, 1],
            ]),
            p: p67,
            primed: vec![[0, 0, 0, 0, 2, -1]],
        },
        BoundaryCase {
            id: '8',
            class: CaseClass::FaceDiagonal,
            normal: [0, 1, 0, 1, 0, 0],
            qualifier: None,
            branch: Branch::MinusOnly,
            e3: BasisTransform([[1, 0, 0], [0, -1, 0], [0, -1, -1]]),
            m: i([
                [1, 0, 0, 0, 0, 0],
                [0, 1, 0, 0, 0, 0],
                [0, 1, 1, 1, 0, 0],
                [0, 2, 0, 1, 0, 0],
                [0, 0, 0, 0, -1, -1],
                [0, 0, 0, 0, 0, -1],
            ]),
            p: p8,
            primed: vec![],
        },
        BoundaryCase {
            id: '9',
            class: CaseClass::FaceDiagonal,
            normal: [1, 0, 0, 0, -1, 0],
            qualifier: Some([0, 0, 0, 1, 0, -1]),
            branch: Branch::PlusOnly,
            e3: BasisTransform([[-1, 0, 0], [0, 1, 0], [1, 0, -1]]),
            m: i([
                [1, 0, 0, 0, 0, 0],
                [0, 1, 0, 0, 0, 0],
                [1, 0, 1, 0, -1, 0],
                [0, 0, 0, -1, 0, 1],
                [-2, 0, 0, 0, 1, 0],
                [0, 0, 0, 0, 0, -1],
            ]),
            p: p9a.clone(),
            primed: vec![],
        },
        BoundaryCase {
            id: 'A',
            class: CaseClass::FaceDiagonal,
            normal: [1, 0, 0, 0, -1, 0],
            qualifier: Some([0, 0, 0, -1, 0, 1]),
            branch: Branch::PlusOnly,
            e3: BasisTransform([[-1, 0, 0], [0, -1, 0], [-1, 0, 1]]),
            m: i([
                [1, 0, 0, 0, 0, 0],
                [0, 1, 0, 0, 0, 0],
                [1, 0, 1, 0, -1, 0],
                [0, 0, 0, -1, 0, 1],
                [2, 0, 0, 0, -1, 0],
                [0, 0, 0, 0, 0, 1],
            ]),
            p: p9a,
            primed: vec![[0, 0, 0, 2, 0, -1]],
        },
        BoundaryCase {
            id: 'B',
            class: CaseClass::FaceDiagonal,
            normal: [1, 0, 0, 0, 1, 0],
            qualifier: None,
            branch: Branch::MinusOnly,
            e3: BasisTransform([[-1, 0, 0], [0, 1, 0], [-1, 0, -1]]),
            m: i([
                [1, 0, 0, 0, 0, 0],
                [0, 1, 0, 0, 0, 0],
                [1, 0, 1, 0, 1, 0],
                [0, 0, 0, -1, 0, -1],
                [2, 0, 0, 0, 1, 0],
                [0, 0, 0, 0, 0, -1],
            ]),
            p: pb,
            primed: vec![],
        },
        BoundaryCase {
            id: 'C',
            class: CaseClass::FaceDiagonal,
            normal: [1, 0, 0, 0, 0, -1],
            qualifier: Some([0, 0, 0, 1, -1, 0]),
            branch: Branch::PlusOnly,
            e3: BasisTransform([[-1, 0, 0], [1, -1, 0], [0, 0, 1]]),
            m: i([
                [1, 0, 0, 0, 0, 0],
                [1, 1, 0, 0, 0, -1],
                [0, 0, 1, 0, 0, 0],
                [0, 0, 0, -1, 1, 0],
                [0, 0, 0, 0, -1, 0],
                [-2, 0, 0, 0, 0, 1],
            ]),
            p: pcd.clone(),
            primed: vec![],
        },
        BoundaryCase {
            id: 'D',
            class: CaseClass::FaceDiagonal,
            normal: [1, 0, 0, 0, 0, -1],
            qualifier: Some([0, 0, 0, -1, 1, 0]),
            branch: Branch::PlusOnly,
            e3: BasisTransform([[-1, 0, 0], [-1, 1, 0], [0, 0, -1]]),
            m: i([
                [1, 0, 0, 0, 0, 0],
                [1, 1, 0, 0, 0, -1],
                [0, 0, 1, 0, 0, 0],
                [0, 0, 0, -1, 1, 0],
                [0, 0, 0, 0, 1, 0],
                [2, 0, 0, 0, 0, -1],
            ]),
            p: pcd,
            primed: vec![[0, 0, 0, 2, -1, 0]],
        },
        BoundaryCase {
            id: 'E',
            class: CaseClass::FaceDiagonal,
            normal: [1, 0, 0, 0, 0, 1],
            qualifier: None,
            branch: Branch::MinusOnly,
            e3: BasisTransform([[-1, 0, 0], [-1, -1, 0], [0, 0, 1]]),
            m: i([
                [1, 0, 0, 0, 0, 0],
                [1, 1, 0, 0, 0, 1],
                [0, 0, 1, 0, 0, 0],
                [0, 0, 0, -1, -1, 0],
                [0, 0, 0, 0, -1, 0],
                [2, 0, 0, 0, 0, 1],
            ]),
            p: pe,
            primed: vec![],
        },
        BoundaryCase {
            id: 'F',
            class: CaseClass::BodyDiagonal,
            normal: [1, 1, 0, 1, 1, 1],
            qualifier: None,
            branch: Branch::MinusOnly,
            e3: BasisTransform([[-1, 0, 0], [0, -1, 0], [1, 1, 1]]),
            m: i([
                [1, 0, 0, 0, 0, 0],
                [0, 1, 0, 0, 0, 0],
                [1, 1, 1, 1, 1, 1],
                [0, -2, 0, -1, 0, -1],
                [-2, 0, 0, 0, -1, -1],
                [0, 0, 0, 0, 0, 1],
            ]),
            p: pf,
            primed: vec![[1, -1, 0, -1, 1, 0]],
        },
    ]
}

static CATALOG: LazyLock<Vec<BoundaryCase>> = LazyLock::new(build_catalog);

/// The full catalog, in case order 1..F.
pub fn catalog() -> &'static [BoundaryCase] {
    &CATALOG
}

pub fn case(id: char) -> Result<&'static BoundaryCase> {
    let id = id.to_ascii_uppercase();
    CATALOG
        .iter()
        .find(|c| c.id == id)
        .ok_or(NiggliError::UnknownCase(id))
}

fn dot6(a: &[i64; 6], g: &G6) -> f64 {
    a.iter()
        .zip(g.0.iter())
        .map(|(c, x)| *c as f64 * x)
        .sum::<f64>()
}

fn norm6(a: &[i64; 6]) -> f64 {
    (a.iter().map(|c| (c * c) as f64).sum::<f64>()).sqrt()
}

/// Euclidean distance in G6 from `g` to the case hyperplane.
pub fn boundary_distance(id: char, g: &G6) -> Result<f64> {
    let c = case(id)?;
    Ok(dot6(&c.normal, g).abs() / norm6(&c.normal))
}

fn branch_ok(branch: Branch, g: &G6, fz: &Fuzz) -> bool {
    match branch {
        Branch::Both => true,
        Branch::PlusOnly => (3..6).all(|i| fz.ge(g[i], 0.0)),
        Branch::MinusOnly => (3..6).all(|i| fz.le(g[i], 0.0)),
    }
}

/// True when `g` lies on the closed boundary polytope: within `tol` of the
/// hyperplane, with the qualifier inequality satisfied (non-strict, closure
/// semantics) and in the case's branch.
pub fn on_boundary(id: char, g: &G6, tol: f64) -> Result<bool> {
    let c = case(id)?;
    let fz = Fuzz::for_g6(&g.0, tol);
    if !fz.is_zero(dot6(&c.normal, g)) {
        return Ok(false);
    }
    if let Some(q) = &c.qualifier {
        if !fz.ge(dot6(q, g), 0.0) {
            return Ok(false);
        }
    }
    Ok(branch_ok(c.branch, g, &fz))
}

/// Applies the case's boundary transformation M to `g`.
pub fn apply_boundary_transform(id: char, g: &G6) -> Result<G6> {
    Ok(case(id)?.m.apply(g))
}

/// Projects `g` onto the case's bounding hyperplane. The result satisfies
/// the equality condition exactly but need not be Niggli reduced.
pub fn project_to_boundary(id: char, g: &G6) -> Result<G6> {
    Ok(case(id)?.p.apply(g))
}

/// True when `g` satisfies both the case condition and the primed
/// special-position condition. Always false for cases 6, 8, 9, B, C and E,
/// whose special-position subspaces are empty.
pub fn special_subspace_fixed(id: char, g: &G6, tol: f64) -> Result<bool> {
    let c = case(id)?;
    if c.primed.is_empty() {
        return Ok(false);
    }
    let fz = Fuzz::for_g6(&g.0, tol);
    if !fz.is_zero(dot6(&c.normal, g)) {
        return Ok(false);
    }
    Ok(c.primed.iter().all(|form| fz.is_zero(dot6(form, g))))
}

/// Exact hyperplane projector I - n n^T / (n . n) for an integer normal.
pub fn hyperplane_projector(normal: &[i64; 6]) -> RatMat6 {
    let nn: i64 = normal.iter().map(|x| x * x).sum();
    let mut p = RatMat6::identity();
    for i in 0..6 {
        for j in 0..6 {
            p.0[i][j] -= frac(normal[i] * normal[j], nn);
        }
    }
    p
}
