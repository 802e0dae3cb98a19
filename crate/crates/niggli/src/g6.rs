//! The six-dimensional cell space G6 and its matrix representations.
//!
//! A cell with edge vectors a, b, c maps to
//! `g = (a.a, b.b, c.c, 2 b.c, 2 a.c, 2 a.b)`. The first three components
//! are squared edge lengths, the last three are doubled dot products, so a
//! basis change acts on G6 by an integer 6x6 matrix derived from the 3x3
//! integer edge transformation.

use crate::error::{NiggliError, Result};
use num_rational::Rational64;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Index, IndexMut};

/// Cell parameters: edge lengths and interaxial angles in degrees.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CellParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl CellParams {
    pub fn new(a: f64, b: f64, c: f64, alpha: f64, beta: f64, gamma: f64) -> Result<CellParams> {
        let cell = CellParams {
            a,
            b,
            c,
            alpha,
            beta,
            gamma,
        };
        cell.validate()?;
        Ok(cell)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("a", self.a), ("b", self.b), ("c", self.c)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(NiggliError::InvalidCell(format!(
                    "edge {name} = {v} must be positive"
                )));
            }
        }
        for (name, v) in [
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("gamma", self.gamma),
        ] {
            if !(v > 0.0 && v < 180.0) {
                return Err(NiggliError::InvalidCell(format!(
                    "angle {name} = {v} must be in (0, 180)"
                )));
            }
        }
        let sum = self.alpha + self.beta + self.gamma;
        if sum >= 360.0 {
            return Err(NiggliError::InvalidCell(format!(
                "angle sum {sum} must be below 360"
            )));
        }
        for (name, v, o1, o2) in [
            ("alpha", self.alpha, self.beta, self.gamma),
            ("beta", self.beta, self.alpha, self.gamma),
            ("gamma", self.gamma, self.alpha, self.beta),
        ] {
            if v >= o1 + o2 {
                return Err(NiggliError::InvalidCell(format!(
                    "angle {name} = {v} must be smaller than the sum of the other two"
                )));
            }
        }
        Ok(())
    }

    /// Volume of the cell (positive for a valid cell).
    pub fn volume(&self) -> f64 {
        cell_to_g6(self)
            .map(|g| metric_determinant(&g).max(0.0).sqrt())
            .unwrap_or(0.0)
    }
}

impl fmt::Display for CellParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {} {} {} {}",
            self.a, self.b, self.c, self.alpha, self.beta, self.gamma
        )
    }
}

/// A vector in G6.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct G6(pub [f64; 6]);

impl G6 {
    pub fn new(g: [f64; 6]) -> G6 {
        G6(g)
    }

    pub fn zero() -> G6 {
        G6([0.0; 6])
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn scale(&self) -> f64 {
        self.0.iter().fold(0.0f64, |m, x| m.max(x.abs()))
    }

    pub fn distance(&self, other: &G6) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(x, y)| (x - y) * (x - y))
            .sum::<f64>()
            .sqrt()
    }

    pub fn dot(&self, other: &[f64; 6]) -> f64 {
        self.0.iter().zip(other.iter()).map(|(x, y)| x * y).sum()
    }

    pub fn add(&self, other: &G6) -> G6 {
        let mut out = [0.0; 6];
        for i in 0..6 {
            out[i] = self.0[i] + other.0[i];
        }
        G6(out)
    }

    pub fn scaled(&self, s: f64) -> G6 {
        let mut out = self.0;
        for x in &mut out {
            *x *= s;
        }
        G6(out)
    }

    /// Checks positive definiteness of the metric tensor by Sylvester's
    /// criterion with a relative tolerance.
    pub fn is_valid(&self, tol: f64) -> bool {
        let g = &self.0;
        let scale = self.scale();
        if scale == 0.0 || !g.iter().all(|x| x.is_finite()) {
            return false;
        }
        let eps = tol * scale;
        let d1 = g[0];
        let d2 = g[0] * g[1] - (g[5] / 2.0) * (g[5] / 2.0);
        let d3 = metric_determinant(self);
        d1 > eps && d2 > eps * scale && d3 > eps * scale * scale
    }

    pub fn validate(&self, tol: f64) -> Result<()> {
        if self.is_valid(tol) {
            Ok(())
        } else {
            Err(NiggliError::NotPositiveDefinite {
                det: metric_determinant(self),
            })
        }
    }
}

impl Index<usize> for G6 {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl IndexMut<usize> for G6 {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.0[i]
    }
}

impl fmt::Display for G6 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(|x| format!("{x}")).collect();
        write!(f, "{}", s.join(" "))
    }
}

/// 3x3 integer matrix acting on the edge vectors (a, b, c) row by row:
/// new edge i is `sum_j m[i][j] * old_edge_j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BasisTransform(pub [[i64; 3]; 3]);

impl BasisTransform {
    pub fn identity() -> BasisTransform {
        BasisTransform([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    }

    pub fn det(&self) -> i64 {
        let m = &self.0;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    pub fn mul(&self, rhs: &BasisTransform) -> BasisTransform {
        let mut out = [[0i64; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                for (k, r) in rhs.0.iter().enumerate() {
                    out[i][j] += self.0[i][k] * r[j];
                }
            }
        }
        BasisTransform(out)
    }

    pub fn neg(&self) -> BasisTransform {
        let mut out = self.0;
        for row in &mut out {
            for x in row {
                *x = -*x;
            }
        }
        BasisTransform(out)
    }

    pub fn is_identity(&self) -> bool {
        *self == BasisTransform::identity()
    }
}

/// Exact 6x6 rational matrix acting on G6 vectors. All catalog matrices
/// (the M's and P's) are stored this way so tests can demand exact equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RatMat6(pub [[Rational64; 6]; 6]);

impl RatMat6 {
    pub fn zero() -> RatMat6 {
        RatMat6([[Rational64::zero(); 6]; 6])
    }

    pub fn identity() -> RatMat6 {
        let mut m = RatMat6::zero();
        for i in 0..6 {
            m.0[i][i] = Rational64::one();
        }
        m
    }

    /// Builds from integer entries.
    pub fn from_ints(rows: [[i64; 6]; 6]) -> RatMat6 {
        let mut m = RatMat6::zero();
        for i in 0..6 {
            for j in 0..6 {
                m.0[i][j] = Rational64::from_integer(rows[i][j]);
            }
        }
        m
    }

    /// Builds from (numerator, denominator) entries.
    pub fn from_fracs(rows: [[(i64, i64); 6]; 6]) -> RatMat6 {
        let mut m = RatMat6::zero();
        for i in 0..6 {
            for j in 0..6 {
                m.0[i][j] = Rational64::new(rows[i][j].0, rows[i][j].1);
            }
        }
        m
    }

    pub fn mul(&self, rhs: &RatMat6) -> RatMat6 {
        let mut out = RatMat6::zero();
        for i in 0..6 {
            for j in 0..6 {
                let mut acc = Rational64::zero();
                for k in 0..6 {
                    acc += self.0[i][k] * rhs.0[k][j];
                }
                out.0[i][j] = acc;
            }
        }
        out
    }

    pub fn transpose(&self) -> RatMat6 {
        let mut out = RatMat6::zero();
        for i in 0..6 {
            for j in 0..6 {
                out.0[i][j] = self.0[j][i];
            }
        }
        out
    }

    pub fn is_symmetric(&self) -> bool {
        *self == self.transpose()
    }

    pub fn is_idempotent(&self) -> bool {
        self.mul(self) == *self
    }

    pub fn trace(&self) -> Rational64 {
        (0..6).map(|i| self.0[i][i]).sum()
    }

    pub fn is_integer(&self) -> bool {
        self.0
            .iter()
            .all(|row| row.iter().all(|x| x.denom().abs() == 1))
    }

    pub fn apply(&self, g: &G6) -> G6 {
        let mut out = [0.0; 6];
        for i in 0..6 {
            let mut acc = 0.0;
            for j in 0..6 {
                let r = self.0[i][j];
                if !r.is_zero() {
                    acc += (*r.numer() as f64) / (*r.denom() as f64) * g.0[j];
                }
            }
            out[i] = acc;
        }
        G6(out)
    }

    pub fn to_f64(&self) -> [[f64; 6]; 6] {
        let mut out = [[0.0; 6]; 6];
        for i in 0..6 {
            for j in 0..6 {
                out[i][j] = (*self.0[i][j].numer() as f64) / (*self.0[i][j].denom() as f64);
            }
        }
        out
    }

    /// Integer entries, or None when some entry is non-integral.
    pub fn to_ints(&self) -> Option<[[i64; 6]; 6]> {
        let mut out = [[0i64; 6]; 6];
        for i in 0..6 {
            for j in 0..6 {
                if self.0[i][j].denom().abs() != 1 {
                    return None;
                }
                out[i][j] = *self.0[i][j].numer() * self.0[i][j].denom().signum();
            }
        }
        Some(out)
    }
}

/// Converts cell parameters to the G6 vector.
pub fn cell_to_g6(cell: &CellParams) -> Result<G6> {
    cell.validate()?;
    let (a, b, c) = (cell.a, cell.b, cell.c);
    let (ca, cb, cg) = (
        cell.alpha.to_radians().cos(),
        cell.beta.to_radians().cos(),
        cell.gamma.to_radians().cos(),
    );
    Ok(G6([
        a * a,
        b * b,
        c * c,
        2.0 * b * c * ca,
        2.0 * a * c * cb,
        2.0 * a * b * cg,
    ]))
}

/// Converts a G6 vector back to cell parameters (angles in degrees).
pub fn g6_to_cell(g: &G6) -> Result<CellParams> {
    g.validate(1e-12)?;
    let a = g[0].sqrt();
    let b = g[1].sqrt();
    let c = g[2].sqrt();
    let clamp = |x: f64| x.clamp(-1.0, 1.0);
    let alpha = clamp(g[3] / (2.0 * b * c)).acos().to_degrees();
    let beta = clamp(g[4] / (2.0 * a * c)).acos().to_degrees();
    let gamma = clamp(g[5] / (2.0 * a * b)).acos().to_degrees();
    CellParams::new(a, b, c, alpha, beta, gamma)
}

/// Determinant of the 3x3 metric tensor; equals the squared cell volume.
pub fn metric_determinant(g: &G6) -> f64 {
    let (g1, g2, g3) = (g[0], g[1], g[2]);
    let (h4, h5, h6) = (g[3] / 2.0, g[4] / 2.0, g[5] / 2.0);
    g1 * (g2 * g3 - h4 * h4) - h6 * (h6 * g3 - h4 * h5) + h5 * (h6 * h4 - g2 * h5)
}

/// The unique 6x6 matrix N with `cell_to_g6(m . edges) = N . cell_to_g6(edges)`
/// for every cell. N(m) = N(-m): a presentation and its mirror collapse to
/// the same G6 action.
pub fn g6_matrix_from_basis(m: &BasisTransform) -> RatMat6 {
    let rows = &m.0;
    // Coefficients of 2 * (x-combination . y-combination) in terms of g.
    let pair = |x: &[i64; 3], y: &[i64; 3]| -> [i64; 6] {
        [
            2 * x[0] * y[0],
            2 * x[1] * y[1],
            2 * x[2] * y[2],
            x[1] * y[2] + x[2] * y[1],
            x[0] * y[2] + x[2] * y[0],
            x[0] * y[1] + x[1] * y[0],
        ]
    };
    let half = |r: [i64; 6]| -> [i64; 6] {
        // Diagonal pairs always have even coefficients.
        [r[0] / 2, r[1] / 2, r[2] / 2, r[3] / 2, r[4] / 2, r[5] / 2]
    };
    let mut out = [[0i64; 6]; 6];
    out[0] = half(pair(&rows[0], &rows[0]));
    out[1] = half(pair(&rows[1], &rows[1]));
    out[2] = half(pair(&rows[2], &rows[2]));
    out[3] = pair(&rows[1], &rows[2]);
    out[4] = pair(&rows[0], &rows[2]);
    out[5] = pair(&rows[0], &rows[1]);
    RatMat6::from_ints(out)
}

/// Parses either "a b c alpha beta gamma" (cell, degrees) or
/// "g1 g2 g3 g4 g5 g6". Used anywhere the CLI reads a cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputKind {
    Auto,
    Cell,
    G6,
}

pub fn parse_cell_or_g6(text: &str, kind: InputKind) -> Result<G6> {
    let vals: Vec<f64> = text
        .split_whitespace()
        .map(|t| {
            t.parse::<f64>()
                .map_err(|_| NiggliError::InvalidCell(format!("cannot parse number '{t}'")))
        })
        .collect::<Result<_>>()?;
    if vals.len() != 6 {
        return Err(NiggliError::InvalidCell(format!(
            "expected 6 numbers, got {}",
            vals.len()
        )));
    }
    let v: [f64; 6] = vals.try_into().unwrap();
    let as_cell = || -> Result<G6> {
        let cell = CellParams::new(v[0], v[1], v[2], v[3], v[4], v[5])?;
        cell_to_g6(&cell)
    };
    let as_g6 = || -> Result<G6> {
        let g = G6(v);
        g.validate(1e-12)?;
        Ok(g)
    };
    match kind {
        InputKind::Cell => as_cell(),
        InputKind::G6 => as_g6(),
        // Prefer the G6 reading; a genuine cell has degree-valued angles,
        // which almost never form a positive-definite G6 vector, so it
        // falls through to the cell parse.
        InputKind::Auto => as_g6().or_else(|g6_err| as_cell().map_err(|_| g6_err)),
    }
}
