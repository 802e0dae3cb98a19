//! Monte Carlo probing of the reduction transforms that act near the
//! boundaries of the cone of reduced cells.
//!
//! A trial draws a random valid cell, reduces it, nudges the reduced vector
//! by a small relative perturbation, and reduces again while accumulating
//! the transform. Perturbations that stay inside the cone reduce with the
//! identity and are discarded; the rest land in a census keyed by the exact
//! integer transform matrix, whose populations expose the nearby boundary
//! structure. A boundary-targeted variant first projects the reduced vector
//! onto a chosen hyperplane (optionally stepping back into the cone) so the
//! perturbations explore a neighborhood of a specific polytope.

use std::collections::BTreeMap;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{NiggliError, Result};
use crate::g6::{cell_to_g6, CellParams, G6};
use crate::projector::NumericProjector;
use crate::reduce::niggli_reduce;

/// Tolerance used for validity and reduction checks during probing.
const PROBE_TOL: f64 = 1e-10;

/// Trials per deterministic RNG stream; the census is independent of the
/// thread count because each chunk owns a stream derived from (seed, chunk).
const CHUNK_TRIALS: u64 = 1 << 14;

#[derive(Debug, Clone)]
pub struct ProbeConfig {
    pub seed: u64,
    pub trials: u64,
    /// Perturbation magnitude relative to the norm of the reduced vector.
    pub perturbation_scale: f64,
    /// Uniform range for random cell edge lengths.
    pub edge_range: (f64, f64),
    /// Uniform range for random cell angles, degrees; candidates outside
    /// the valid region are rejected and redrawn.
    pub angle_range: (f64, f64),
    /// When set, trials probe the neighborhood of this hyperplane.
    pub boundary_projector: Option<NumericProjector>,
    /// Fraction of the way back from the projected point toward the reduced
    /// interior point, taken before perturbing.
    pub step_back: Option<f64>,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        ProbeConfig {
            seed: 20260824,
            trials: 1_000_000,
            perturbation_scale: 1e-4,
            edge_range: (1.0, 100.0),
            angle_range: (20.0, 160.0),
            boundary_projector: None,
            step_back: None,
        }
    }
}

impl ProbeConfig {
    fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(NiggliError::InvalidConfig("trials must be > 0".into()));
        }
        if !(self.perturbation_scale > 0.0) {
            return Err(NiggliError::InvalidConfig(
                "perturbation_scale must be > 0".into(),
            ));
        }
        if !(self.edge_range.0 > 0.0 && self.edge_range.1 > self.edge_range.0) {
            return Err(NiggliError::InvalidConfig("bad edge range".into()));
        }
        if !(self.angle_range.0 > 0.0
            && self.angle_range.1 > self.angle_range.0
            && self.angle_range.1 < 180.0)
        {
            return Err(NiggliError::InvalidConfig("bad angle range".into()));
        }
        Ok(())
    }
}

/// Population census keyed by the exact integer G6 transform of each
/// non-identity reduction observed near the probed region.
#[derive(Debug, Clone, Default)]
pub struct MatrixCensus {
    pub counts: BTreeMap<[[i64; 6]; 6], u64>,
    /// First observed pre-reduction probe vector per matrix.
    pub samples: BTreeMap<[[i64; 6]; 6], G6>,
    pub total_trials: u64,
    pub discarded: u64,
}

impl MatrixCensus {
    pub fn record(&mut self, key: [[i64; 6]; 6], probe: &G6) {
        *self.counts.entry(key).or_insert(0) += 1;
        self.samples.entry(key).or_insert_with(|| probe.clone());
    }

    /// Folds `other` into `self`; associative, and with per-chunk censuses
    /// merged in chunk order the result equals a single-threaded run.
    pub fn merge(&mut self, other: MatrixCensus) {
        for (k, v) in other.counts {
            *self.counts.entry(k).or_insert(0) += v;
        }
        for (k, g) in other.samples {
            self.samples.entry(k).or_insert(g);
        }
        self.total_trials += other.total_trials;
        self.discarded += other.discarded;
    }

    /// Populations in descending order.
    pub fn sorted_populations(&self) -> Vec<([[i64; 6]; 6], u64)> {
        let mut v: Vec<_> = self.counts.iter().map(|(k, &c)| (*k, c)).collect();
        v.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        v
    }
}

fn random_valid_g6(rng: &mut ChaCha8Rng, cfg: &ProbeConfig, starved: &mut u64) -> Result<G6> {
    for attempt in 1..=10_000u64 {
        let a = rng.gen_range(cfg.edge_range.0..cfg.edge_range.1);
        let b = rng.gen_range(cfg.edge_range.0..cfg.edge_range.1);
        let c = rng.gen_range(cfg.edge_range.0..cfg.edge_range.1);
        let alpha = rng.gen_range(cfg.angle_range.0..cfg.angle_range.1);
        let beta = rng.gen_range(cfg.angle_range.0..cfg.angle_range.1);
        let gamma = rng.gen_range(cfg.angle_range.0..cfg.angle_range.1);
        if let Ok(cell) = CellParams::new(a, b, c, alpha, beta, gamma) {
            if let Ok(g) = cell_to_g6(&cell) {
                if g.is_valid(PROBE_TOL) {
                    *starved += attempt - 1;
                    return Ok(g);
                }
            }
        }
        *starved += 1;
        if attempt == 100 && *starved > 99 {
            // Over 99% rejection: the configured ranges barely intersect
            // the valid region.
            return Err(NiggliError::GeneratorStarvation {
                rejected: *starved,
                attempts: attempt,
            });
        }
    }
    Err(NiggliError::GeneratorStarvation {
        rejected: 10_000,
        attempts: 10_000,
    })
}

fn gaussian_perturbation(rng: &mut ChaCha8Rng, magnitude: f64) -> [f64; 6] {
    [(); 6].map(|_| {
        let n: f64 = rng.sample(StandardNormal);
        n * magnitude
    })
}

fn run_chunk(cfg: &ProbeConfig, chunk_index: u64, trials: u64) -> Result<MatrixCensus> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(chunk_index + 1);
    let mut census = MatrixCensus::default();
    let mut projection_rejects = 0u64;
    for trial in 0..trials {
        census.total_trials += 1;
        let mut starved = 0;
        let g = random_valid_g6(&mut rng, cfg, &mut starved)?;
        let reduced = match niggli_reduce(&g, PROBE_TOL) {
            Ok(r) => r.reduced,
            Err(_) => {
                census.discarded += 1;
                continue;
            }
        };
        let center = match &cfg.boundary_projector {
            None => reduced.clone(),
            Some(p) => {
                let mut projected = p.apply(&reduced);
                if let Some(frac) = cfg.step_back {
                    // Step back toward the interior point so the spherical
                    // perturbation can see polytopes on every side.
                    projected = projected.add(&reduced.add(&projected.scaled(-1.0)).scaled(frac));
                }
                if !projected.is_valid(PROBE_TOL) {
                    projection_rejects += 1;
                    census.discarded += 1;
                    if trial >= 99 && projection_rejects * 100 > 99 * (trial + 1) {
                        return Err(NiggliError::ProjectionInvalidatesAll {
                            rejected: projection_rejects,
                            attempts: trial + 1,
                        });
                    }
                    continue;
                }
                projected
            }
        };
        let delta = gaussian_perturbation(&mut rng, cfg.perturbation_scale * center.norm());
        let probe = center.add(&G6(delta));
        if !probe.is_valid(PROBE_TOL) {
            census.discarded += 1;
            continue;
        }
        match niggli_reduce(&probe, PROBE_TOL) {
            Ok(r) => {
                if r.basis_transform.is_identity() {
                    census.discarded += 1;
                } else {
                    let key = r
                        .g6_transform
                        .to_ints()
                        .expect("reduction-chain G6 transforms are integral");
                    census.record(key, &probe);
                }
            }
            Err(_) => {
                census.discarded += 1;
            }
        }
    }
    Ok(census)
}

fn run(cfg: &ProbeConfig) -> Result<MatrixCensus> {
    cfg.validate()?;
    let n_chunks = cfg.trials.div_ceil(CHUNK_TRIALS);
    let chunks: Vec<(u64, u64)> = (0..n_chunks)
        .map(|i| {
            let lo = i * CHUNK_TRIALS;
            let hi = (lo + CHUNK_TRIALS).min(cfg.trials);
            (i, hi - lo)
        })
        .collect();
    let partials: Vec<Result<MatrixCensus>> = chunks
        .par_iter()
        .map(|&(i, n)| run_chunk(cfg, i, n))
        .collect();
    let mut census = MatrixCensus::default();
    for p in partials {
        census.merge(p?);
    }
    Ok(census)
}

/// Probes the full cone to expose the 5-D boundary transforms.
pub fn probe_5d(cfg: &ProbeConfig) -> Result<MatrixCensus> {
    if cfg.boundary_projector.is_some() {
        return Err(NiggliError::InvalidConfig(
            "probe_5d takes no boundary projector; use probe_boundary".into(),
        ));
    }
    run(cfg)
}

/// Probes the neighborhood of a chosen boundary hyperplane.
pub fn probe_boundary(cfg: &ProbeConfig) -> Result<MatrixCensus> {
    if cfg.boundary_projector.is_none() {
        return Err(NiggliError::InvalidConfig(
            "probe_boundary requires a boundary projector".into(),
        ));
    }
    run(cfg)
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct ZScoreEntry {
    pub matrix: [[i64; 6]; 6],
    pub population: u64,
    pub z: f64,
    /// Population z below -1: unusually light for its cohort.
    pub flagged: bool,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct ZScoreReport {
    /// Entries in descending population order; z is only computed for the
    /// retained head before the cutoff.
    pub entries: Vec<ZScoreEntry>,
    /// Index of the first entry past the retained head.
    pub cutoff_index: usize,
    pub mean: f64,
    pub std_dev: f64,
}

/// Sorts populations, cuts the list at the first strictly-more-than-10x
/// drop, and scores the retained head by (population - mean) / sample
/// standard deviation.
pub fn zscore_analysis(census: &MatrixCensus) -> Result<ZScoreReport> {
    let pops = census.sorted_populations();
    if pops.is_empty() {
        return Err(NiggliError::EmptyCensus);
    }
    let mut cutoff = pops.len();
    for i in 1..pops.len() {
        if (pops[i - 1].1 as f64) > 10.0 * pops[i].1 as f64 {
            cutoff = i;
            break;
        }
    }
    let head: Vec<f64> = pops[..cutoff].iter().map(|&(_, c)| c as f64).collect();
    let mean = head.iter().sum::<f64>() / head.len() as f64;
    if head.len() < 2 {
        return Err(NiggliError::DegenerateVariance);
    }
    let var = head.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (head.len() - 1) as f64;
    let std_dev = var.sqrt();
    if std_dev == 0.0 {
        return Err(NiggliError::DegenerateVariance);
    }
    let entries = pops
        .iter()
        .enumerate()
        .map(|(i, &(matrix, population))| {
            let z = if i < cutoff {
                (population as f64 - mean) / std_dev
            } else {
                f64::NAN
            };
            ZScoreEntry {
                matrix,
                population,
                z,
                flagged: i < cutoff && z < -1.0,
            }
        })
        .collect();
    Ok(ZScoreReport {
        entries,
        cutoff_index: cutoff,
        mean,
        std_dev,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary;

    fn small_config() -> ProbeConfig {
        // A coarser perturbation than the default raises the boundary hit
        // rate so a short run still populates the census.
        ProbeConfig {
            trials: 20_000,
            perturbation_scale: 2e-2,
            ..ProbeConfig::default()
        }
    }

    #[test]
    fn zero_trials_rejected() {
        let cfg = ProbeConfig {
            trials: 0,
            ..ProbeConfig::default()
        };
        assert!(probe_5d(&cfg).is_err());
    }

    #[test]
    fn same_seed_same_census() {
        let cfg = small_config();
        let a = probe_5d(&cfg).unwrap();
        let b = probe_5d(&cfg).unwrap();
        assert_eq!(a.counts, b.counts);
        assert_eq!(a.total_trials, b.total_trials);
        assert_eq!(a.discarded, b.discarded);
    }

    #[test]
    fn chunk_merge_is_chunk_count_independent() {
        // A single run already merges per-chunk censuses; re-merging two
        // halves of the chunk stream must agree with the combined run.
        let cfg = ProbeConfig {
            trials: 3 * CHUNK_TRIALS,
            ..ProbeConfig::default()
        };
        let whole = run(&cfg).unwrap();
        let mut parts = run_chunk(&cfg, 0, CHUNK_TRIALS).unwrap();
        parts.merge(run_chunk(&cfg, 1, CHUNK_TRIALS).unwrap());
        parts.merge(run_chunk(&cfg, 2, CHUNK_TRIALS).unwrap());
        assert_eq!(whole.counts, parts.counts);
    }

    #[test]
    fn top_matrices_are_the_catalog() {
        // Bounded edge anisotropy keeps the relative perturbation small
        // against every component, so single-boundary crossings dominate.
        let cfg = ProbeConfig {
            trials: 300_000,
            edge_range: (1.0, 4.0),
            ..ProbeConfig::default()
        };
        let census = probe_5d(&cfg).unwrap();
        let pops = census.sorted_populations();
        assert!(pops.len() >= 15, "only {} matrices seen", pops.len());
        let catalog: Vec<[[i64; 6]; 6]> = boundary::catalog()
            .iter()
            .map(|c| c.m.to_ints().unwrap())
            .collect();
        for &(m, _) in &pops[..15] {
            assert!(catalog.contains(&m));
        }
    }

    #[test]
    fn census_matrices_reduce_their_probes() {
        let census = probe_5d(&small_config()).unwrap();
        for (key, probe) in census.samples.iter().take(50) {
            let m = crate::g6::RatMat6::from_ints(*key);
            let image = m.apply(probe);
            assert!(
                crate::reduce::is_niggli_reduced(&image, 1e-6),
                "census matrix does not reduce its recorded probe"
            );
        }
    }

    #[test]
    fn boundary_probe_focuses_on_the_case() {
        // Probing the g1 = g2 hyperplane must make M1 dominant.
        let p = crate::projector::case_projector('1').unwrap();
        let cfg = ProbeConfig {
            trials: 20_000,
            boundary_projector: Some(p),
            step_back: Some(0.0),
            ..ProbeConfig::default()
        };
        let census = probe_boundary(&cfg).unwrap();
        let top = census.sorted_populations()[0].0;
        let m1 = boundary::case('1').unwrap().m.to_ints().unwrap();
        assert_eq!(top, m1);
    }

    #[test]
    fn zscore_cutoff_and_scores() {
        let mut census = MatrixCensus::default();
        let mut key = [[0i64; 6]; 6];
        for (i, &c) in [100u64, 100, 100, 10].iter().enumerate() {
            key[0][0] = i as i64;
            census.counts.insert(key, c);
        }
        // 100 -> 10 is exactly 10x, not strictly more: all four retained.
        let report = zscore_analysis(&census).unwrap();
        assert_eq!(report.cutoff_index, 4);
        assert!((report.mean - 77.5).abs() < 1e-12);
        assert!((report.std_dev - 45.0).abs() < 1e-12);
        let zs: Vec<f64> = report.entries.iter().map(|e| e.z).collect();
        assert!((zs[0] - 0.5).abs() < 1e-12 && (zs[3] + 1.5).abs() < 1e-12);
        assert!(report.entries[3].flagged);

        // A strict drop cuts the tail off.
        let mut census = MatrixCensus::default();
        for (i, &c) in [1000u64, 900, 80].iter().enumerate() {
            key[0][0] = i as i64;
            census.counts.insert(key, c);
        }
        let report = zscore_analysis(&census).unwrap();
        assert_eq!(report.cutoff_index, 2);
        assert!(report.entries[2].z.is_nan());
        assert!((report.entries[0].z - report.entries[1].z - 2.0 * 0.5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn zscore_degenerate_cases() {
        let census = MatrixCensus::default();
        assert!(matches!(
            zscore_analysis(&census),
            Err(NiggliError::EmptyCensus)
        ));
        let mut census = MatrixCensus::default();
        census.counts.insert([[1; 6]; 6], 5);
        assert!(matches!(
            zscore_analysis(&census),
            Err(NiggliError::DegenerateVariance)
        ));
    }
}
