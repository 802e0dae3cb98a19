//! Floating-point projector algebra: recovery of subspace projectors from
//! sample clouds, intersection of case projectors by repeated squaring with
//! the flat-boundary substitution, and dimension extraction.
//!
//! The exact rational projectors of the fifteen boundary cases live in
//! [`crate::boundary`]; this module covers the numeric constructions used
//! when a subspace is only known through samples or as an intersection.

use nalgebra::{DMatrix, Matrix6};

use crate::boundary::{self, FLAT_PAIRS};
use crate::error::{NiggliError, Result};
use crate::g6::G6;

/// A 6x6 floating-point orthogonal projector onto a linear subspace of G6.
#[derive(Debug, Clone, PartialEq)]
pub struct NumericProjector(pub Matrix6<f64>);

impl NumericProjector {
    pub fn identity() -> NumericProjector {
        NumericProjector(Matrix6::identity())
    }

    pub fn from_rows(rows: [[f64; 6]; 6]) -> NumericProjector {
        NumericProjector(Matrix6::from_fn(|i, j| rows[i][j]))
    }

    /// Frobenius-norm symmetry defect ||P - P^T||.
    pub fn symmetry_defect(&self) -> f64 {
        (self.0 - self.0.transpose()).norm()
    }

    /// Frobenius-norm idempotence defect ||P.P - P||.
    pub fn idempotence_defect(&self) -> f64 {
        (self.0 * self.0 - self.0).norm()
    }

    pub fn apply(&self, g: &G6) -> G6 {
        let v = self.0 * nalgebra::Vector6::from_row_slice(&g.0);
        G6([v[0], v[1], v[2], v[3], v[4], v[5]])
    }

    /// Distance from g to the image subspace, ||g - P.g||.
    pub fn distance(&self, g: &G6) -> f64 {
        g.distance(&self.apply(g))
    }

    pub fn trace(&self) -> f64 {
        self.0.trace()
    }

    /// Eigenvalues, ascending (the matrix is required to be symmetric).
    pub fn eigenvalues(&self) -> Vec<f64> {
        let sym = (self.0 + self.0.transpose()) * 0.5;
        let mut ev: Vec<f64> = sym.symmetric_eigen().eigenvalues.iter().copied().collect();
        ev.sort_by(|a, b| a.total_cmp(b));
        ev
    }

    pub fn frobenius_distance(&self, other: &NumericProjector) -> f64 {
        (self.0 - other.0).norm()
    }
}

/// Recovers the projector onto the subspace covered by a sample cloud.
///
/// The singular value decomposition of the sample matrix separates the
/// directions spanned by the samples (large singular values) from the
/// orthogonal complement (small ones). The right-singular vectors of the
/// small values are stacked into a matrix A and the result is I - A^T A,
/// the projector onto the span of the samples.
///
/// `small_sv_threshold` is relative to the largest singular value. A clear
/// spectral gap (ratio >= 10 across the cut) is required; without one the
/// split is ambiguous and an error is returned.
pub fn projector_from_samples(
    samples: &[G6],
    small_sv_threshold: f64,
) -> Result<NumericProjector> {
    if samples.len() < 6 {
        return Err(NiggliError::InsufficientSamples {
            got: samples.len(),
            need: 6,
        });
    }
    let m = DMatrix::from_fn(samples.len(), 6, |i, j| samples[i].0[j]);
    let svd = m.svd(false, true);
    let v_t = svd.v_t.expect("requested right singular vectors");
    let mut sv: Vec<(f64, usize)> = svd
        .singular_values
        .iter()
        .copied()
        .enumerate()
        .map(|(i, s)| (s, i))
        .collect();
    sv.sort_by(|a, b| b.0.total_cmp(&a.0));
    let largest = sv[0].0;
    let cutoff = small_sv_threshold * largest;
    let n_large = sv.iter().filter(|(s, _)| *s >= cutoff).count();
    if n_large < sv.len() {
        let smallest_large = sv[n_large - 1].0;
        let largest_small = sv[n_large].0;
        if largest_small > 0.0 && smallest_large / largest_small < 10.0 {
            return Err(NiggliError::RankAmbiguity {
                ratio: smallest_large / largest_small,
            });
        }
    }
    let mut p = Matrix6::identity();
    for &(_, idx) in &sv[n_large..] {
        let row = v_t.row(idx);
        let n = nalgebra::Vector6::from_fn(|i, _| row[i]);
        p -= n * n.transpose();
    }
    Ok(NumericProjector(p))
}

/// The exact case projector of one of the fifteen boundary cases, as floats.
pub fn case_projector(id: char) -> Result<NumericProjector> {
    Ok(NumericProjector::from_rows(boundary::case(id)?.p.to_f64()))
}

/// Intersects the bounding hyperplanes of a list of cases.
///
/// Forms the product of the per-case projectors and squares it repeatedly
/// until it converges to a projector. Cases of a flat pair (6/7, 9/A, C/D)
/// share one hyperplane, so when both halves appear the second occurrence
/// contributes the projector of the pair's division hyperplane instead
/// (g5 = g6 for 6/7, g4 = g6 for 9/A, g4 = g5 for C/D); multiplying the
/// shared projector by itself would lose the extra constraint.
pub fn intersect_projectors(cases: &[char]) -> Result<NumericProjector> {
    intersect_cases_and_planes(cases, &[])
}

/// As [`intersect_projectors`], with additional hyperplanes (each normal
/// pins `n . g = 0`) folded into the product before convergence.
pub fn intersect_cases_and_planes(
    cases: &[char],
    planes: &[[i64; 6]],
) -> Result<NumericProjector> {
    if cases.is_empty() && planes.is_empty() {
        return Err(NiggliError::InvalidConfig(
            "empty case list for projector intersection".into(),
        ));
    }
    let mut product = Matrix6::identity();
    let mut seen: Vec<char> = Vec::new();
    for &id in cases {
        let mut factor = None;
        for &(a, b, division) in &FLAT_PAIRS {
            let partner = if id == a {
                b
            } else if id == b {
                a
            } else {
                continue;
            };
            if seen.contains(&id) || seen.contains(&partner) {
                factor = Some(NumericProjector::from_rows(
                    boundary::hyperplane_projector(&division).to_f64(),
                ));
            }
        }
        let factor = match factor {
            Some(f) => f,
            None => case_projector(id)?,
        };
        product *= factor.0;
        seen.push(id);
    }
    for normal in planes {
        product *= NumericProjector::from_rows(
            boundary::hyperplane_projector(normal).to_f64(),
        )
        .0;
    }
    converge_by_squaring(product)
}

fn converge_by_squaring(mut p: Matrix6<f64>) -> Result<NumericProjector> {
    for _ in 0..64 {
        let sq = p * p;
        if (sq - p).norm() <= 1e-12 {
            // Symmetrize: the converged limit of a product of symmetric
            // projectors is symmetric up to roundoff.
            let sym = (sq + sq.transpose()) * 0.5;
            return Ok(NumericProjector(sym));
        }
        p = sq;
    }
    Err(NiggliError::IntersectionDiverged(64))
}

/// Dimension of the image: the number of eigenvalues near 1, cross-checked
/// against the rounded trace.
pub fn projector_dimension(p: &NumericProjector) -> Result<usize> {
    let n_one = p
        .eigenvalues()
        .iter()
        .filter(|&&e| (e - 1.0).abs() <= 1e-6)
        .count();
    let trace = p.trace();
    let rounded = trace.round();
    if (trace - rounded).abs() > 1e-6 || rounded as usize != n_one {
        return Err(NiggliError::DimensionInconsistency {
            eig_count: n_one,
            trace,
        });
    }
    Ok(n_one)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::CASE_IDS;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn random_g6(rng: &mut ChaCha8Rng) -> G6 {
        G6([(); 6].map(|_| rng.gen_range(-10.0..10.0)))
    }

    #[test]
    fn samples_recover_printed_projectors() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        // g5 = 0 cloud recovers P4; g1 = g2 cloud recovers P1.
        let mut cloud4 = Vec::new();
        let mut cloud1 = Vec::new();
        for _ in 0..50 {
            let mut g = random_g6(&mut rng);
            g.0[4] = 0.0;
            cloud4.push(g);
            let mut h = random_g6(&mut rng);
            h.0[1] = h.0[0];
            cloud1.push(h);
        }
        let p4 = projector_from_samples(&cloud4, 1e-8).unwrap();
        let p1 = projector_from_samples(&cloud1, 1e-8).unwrap();
        let exact4 = case_projector('4').unwrap();
        let exact1 = case_projector('1').unwrap();
        assert!(p4.frobenius_distance(&exact4) < 1e-6, "{}", p4.frobenius_distance(&exact4));
        assert!(p1.frobenius_distance(&exact1) < 1e-6);
    }

    #[test]
    fn too_few_samples_rejected() {
        let g = G6([1.0, 2.0, 3.0, 0.1, 0.2, 0.3]);
        let err = projector_from_samples(&[g, g, g], 1e-8).unwrap_err();
        assert!(matches!(err, NiggliError::InsufficientSamples { .. }));
    }

    #[test]
    fn ambiguous_gap_rejected() {
        // Samples squashed only mildly along g5: no 10x spectral gap at a
        // threshold cutting through the squashed direction.
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let mut cloud = Vec::new();
        for _ in 0..50 {
            let mut g = random_g6(&mut rng);
            g.0[4] *= 0.2;
            cloud.push(g);
        }
        let err = projector_from_samples(&cloud, 0.4).unwrap_err();
        assert!(matches!(err, NiggliError::RankAmbiguity { .. }));
    }

    #[test]
    fn single_case_is_exact() {
        for id in CASE_IDS {
            let p = intersect_projectors(&[id]).unwrap();
            let exact = case_projector(id).unwrap();
            assert!(p.frobenius_distance(&exact) < 1e-12);
            assert_eq!(projector_dimension(&p).unwrap(), 5);
        }
    }

    #[test]
    fn equal_edge_pair_averages_first_three() {
        // {1,2} pins g1 = g2 = g3; the projector averages the first three
        // coordinates and leaves the rest alone.
        let p = intersect_projectors(&['1', '2']).unwrap();
        let mut expect = [[0.0; 6]; 6];
        for i in 0..3 {
            for j in 0..3 {
                expect[i][j] = 1.0 / 3.0;
            }
        }
        for i in 3..6 {
            expect[i][i] = 1.0;
        }
        assert!(p.frobenius_distance(&NumericProjector::from_rows(expect)) < 1e-9);
        assert_eq!(projector_dimension(&p).unwrap(), 4);
    }

    #[test]
    fn flat_pair_substitution() {
        for (&(a, b, division), pinned) in FLAT_PAIRS.iter().zip([
            [0i64, 1, 0, -1, 0, 0],
            [1, 0, 0, 0, -1, 0],
            [1, 0, 0, 0, 0, -1],
        ]) {
            let via_pair = intersect_projectors(&[a, b]).unwrap();
            // Direct construction: shared hyperplane and division hyperplane.
            let h1 = NumericProjector::from_rows(
                boundary::hyperplane_projector(&pinned).to_f64(),
            );
            let h2 = NumericProjector::from_rows(
                boundary::hyperplane_projector(&division).to_f64(),
            );
            let direct = converge_by_squaring(h1.0 * h2.0).unwrap();
            assert!(via_pair.frobenius_distance(&direct) < 1e-9);
            assert_eq!(projector_dimension(&via_pair).unwrap(), 4);
        }
    }

    #[test]
    fn order_independent() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut cases = vec!['1', '2', 'F'];
        let base = intersect_projectors(&cases).unwrap();
        for _ in 0..10 {
            cases.shuffle(&mut rng);
            let p = intersect_projectors(&cases).unwrap();
            assert!(p.frobenius_distance(&base) < 1e-9);
        }
    }

    #[test]
    fn fcc_line_dimension() {
        let cases: Vec<char> = "12679ACD".chars().collect();
        let p = intersect_projectors(&cases).unwrap();
        assert_eq!(projector_dimension(&p).unwrap(), 1);
        // The image is the all-equal line.
        let g = p.apply(&G6([6.0, 0.0, 0.0, 0.0, 0.0, 0.0]));
        for i in 1..6 {
            assert!((g.0[i] - g.0[0]).abs() < 1e-9);
        }
    }

    #[test]
    fn projector_laws() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for _ in 0..50 {
            let k = rng.gen_range(1..=4);
            let cases: Vec<char> = (0..k)
                .map(|_| CASE_IDS[rng.gen_range(0..CASE_IDS.len())])
                .collect();
            let p = intersect_projectors(&cases).unwrap();
            assert!(p.symmetry_defect() <= 1e-12);
            assert!(p.idempotence_defect() <= 1e-9);
            for e in p.eigenvalues() {
                assert!(e.abs() <= 1e-6 || (e - 1.0).abs() <= 1e-6, "eigenvalue {e}");
            }
            projector_dimension(&p).unwrap();
        }
    }
}
