//! Lower and upper bounds on the Grothendieck norm
//! `||A||_G = sup |sum a_st <x_s, y_t>|` over unit-ball vectors.
//!
//! The lower bound comes from low-rank block-coordinate ascent: with the right
//! vectors fixed, each left vector's optimum is the normalized row combination
//! `sum_t a_st y_t`, and symmetrically. Every iterate is feasible, so the value
//! is a certified lower bound. Upper bounds are `sqrt(mn)||A||` and, when exact
//! enumeration is affordable, `K_G ||A||_{inf->1}` and `8 ||A||_cut`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::norms::cut::{cut_norm_exact, infty_one_exact};
use crate::norms::spectral::spectral_norm;

/// Upper bound used for the real Grothendieck constant.
pub const GROTHENDIECK_CONSTANT: f64 = 1.783;

/// Block-ascent settings. `rank = None` picks `min(m+n, ceil(sqrt(2(m+n))) + 2)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BmConfig {
    pub rank: Option<usize>,
    pub restarts: usize,
    pub max_sweeps: usize,
    pub tolerance: f64,
    pub seed: u64,
}

impl Default for BmConfig {
    fn default() -> Self {
        BmConfig {
            rank: None,
            restarts: 8,
            max_sweeps: 500,
            tolerance: 1e-10,
            seed: 0,
        }
    }
}

impl BmConfig {
    pub fn with_rank(rank: usize) -> Self {
        BmConfig {
            rank: Some(rank),
            ..Default::default()
        }
    }

    pub fn resolved_rank(&self, m: usize, n: usize) -> usize {
        self.rank.unwrap_or_else(|| default_rank(m, n))
    }

    fn validate(&self) -> Result<()> {
        if self.rank == Some(0) {
            return Err(Error::InvalidParameter("rank must be at least 1".into()));
        }
        if self.restarts == 0 {
            return Err(Error::InvalidParameter("restarts must be at least 1".into()));
        }
        Ok(())
    }
}

pub fn default_rank(m: usize, n: usize) -> usize {
    let total = m + n;
    let k = (2.0 * total as f64).sqrt().ceil() as usize + 2;
    k.min(total)
}

/// Unit-ball vectors `x_1..x_m`, `y_1..y_n` in `R^k` and the value `|sum a_st <x_s, y_t>|`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VectorAssignment {
    pub left: Vec<Vec<f64>>,
    pub right: Vec<Vec<f64>>,
    pub objective: f64,
}

impl VectorAssignment {
    /// Signed form `sum_{s,t} a_st <x_s, y_t>`.
    pub fn evaluate(&self, a: &DenseMatrix) -> f64 {
        let mut total = 0.0;
        for (s, x) in self.left.iter().enumerate() {
            for (t, y) in self.right.iter().enumerate() {
                let a_st = a.get(s, t);
                if a_st != 0.0 {
                    total += a_st * dot(x, y);
                }
            }
        }
        total
    }

    /// Largest Euclidean norm among all vectors.
    pub fn max_norm(&self) -> f64 {
        self.left
            .iter()
            .chain(&self.right)
            .map(|v| dot(v, v).sqrt())
            .fold(0.0, f64::max)
    }

    pub fn rank(&self) -> usize {
        self.left.first().map_or(0, |v| v.len())
    }

    /// Checks that every vector lies in the unit ball within `1e-12`.
    pub fn check_unit_ball(&self) -> Result<()> {
        let norm = self.max_norm();
        if norm > 1.0 + 1e-12 {
            return Err(Error::UnitBall { norm });
        }
        Ok(())
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Outcome of one seeded ascent run.
#[derive(Clone, Debug)]
pub struct AscentRun {
    pub assignment: VectorAssignment,
    /// Signed objective after each full sweep.
    pub history: Vec<f64>,
}

/// Result of [`grothendieck_bm`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BmResult {
    pub value: f64,
    pub rank: usize,
    pub best_restart: usize,
    pub sweeps: usize,
    pub witness: VectorAssignment,
}

fn random_unit_rows(rng: &mut ChaCha8Rng, count: usize, k: usize) -> Vec<Vec<f64>> {
    (0..count)
        .map(|_| {
            let mut v: Vec<f64> = (0..k).map(|_| StandardNormal.sample(rng)).collect();
            let n = dot(&v, &v).sqrt();
            if n > 0.0 {
                v.iter_mut().for_each(|x| *x /= n);
            } else {
                v[0] = 1.0;
            }
            v
        })
        .collect()
}

/// Replaces each target vector by the normalized combination `sum_j w_ij src_j`,
/// keeping the old vector when the combination vanishes. Returns `sum_i |combination_i|`.
fn update_block(weights: impl Fn(usize, usize) -> f64, targets: &mut [Vec<f64>], sources: &[Vec<f64>]) -> f64 {
    let k = sources.first().map_or(0, |v| v.len());
    let mut total = 0.0;
    let mut acc = vec![0.0; k];
    for (i, target) in targets.iter_mut().enumerate() {
        acc.iter_mut().for_each(|x| *x = 0.0);
        for (j, src) in sources.iter().enumerate() {
            let w = weights(i, j);
            if w != 0.0 {
                for (a, s) in acc.iter_mut().zip(src) {
                    *a += w * s;
                }
            }
        }
        let norm = dot(&acc, &acc).sqrt();
        if norm > 0.0 {
            for (t, a) in target.iter_mut().zip(&acc) {
                *t = a / norm;
            }
            total += norm;
        } else {
            total += dot(target, &acc);
        }
    }
    total
}

/// One ascent run from a seeded random start on the unit sphere of `R^rank`.
pub fn ascent_run(
    a: &DenseMatrix,
    rank: usize,
    seed: u64,
    stream: u64,
    max_sweeps: usize,
    tolerance: f64,
) -> AscentRun {
    let (m, n) = (a.rows(), a.cols());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let mut left = random_unit_rows(&mut rng, m, rank);
    let mut right = random_unit_rows(&mut rng, n, rank);
    let mut history = Vec::new();
    let mut prev = f64::NEG_INFINITY;
    for _ in 0..max_sweeps {
        update_block(|s, t| a.get(s, t), &mut left, &right);
        let obj = update_block(|t, s| a.get(s, t), &mut right, &left);
        history.push(obj);
        if prev.is_finite() && obj - prev <= tolerance * obj.abs() {
            break;
        }
        prev = obj;
    }
    let mut assignment = VectorAssignment {
        left,
        right,
        objective: 0.0,
    };
    assignment.objective = assignment.evaluate(a).abs();
    AscentRun { assignment, history }
}

/// Best of `cfg.restarts` ascent runs; a feasible lower bound on `||A||_G`
/// (on `||A||_{G,k}` for rank `k`).
pub fn grothendieck_bm(a: &DenseMatrix, cfg: &BmConfig) -> Result<BmResult> {
    cfg.validate()?;
    let (m, n) = (a.rows(), a.cols());
    let rank = cfg.resolved_rank(m, n);
    if a.max_abs() == 0.0 {
        let e = |count: usize| {
            (0..count)
                .map(|_| {
                    let mut v = vec![0.0; rank];
                    v[0] = 1.0;
                    v
                })
                .collect()
        };
        return Ok(BmResult {
            value: 0.0,
            rank,
            best_restart: 0,
            sweeps: 0,
            witness: VectorAssignment {
                left: e(m),
                right: e(n),
                objective: 0.0,
            },
        });
    }
    let runs: Vec<AscentRun> = (0..cfg.restarts)
        .into_par_iter()
        .map(|r| ascent_run(a, rank, cfg.seed, r as u64, cfg.max_sweeps, cfg.tolerance))
        .collect();
    let mut best = 0;
    for (i, run) in runs.iter().enumerate().skip(1) {
        if run.assignment.objective > runs[best].assignment.objective {
            best = i;
        }
    }
    let run = runs.into_iter().nth(best).unwrap();
    Ok(BmResult {
        value: run.assignment.objective,
        rank,
        best_restart: best,
        sweeps: run.history.len(),
        witness: run.assignment,
    })
}

/// Bracket `[lower, upper]` on `||A||_G` with the contributing terms.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrothendieckBracket {
    pub lower: f64,
    pub upper: f64,
    pub bm: BmResult,
    pub spectral_bound: f64,
    pub infty_one: Option<f64>,
    pub cut: Option<f64>,
}

/// `lower = max(BM, ||A||_{inf->1})`, `upper = min(sqrt(mn)||A||, K_G ||A||_{inf->1}, 8||A||_cut)`;
/// the exact terms are used only when `min(m, n) <= exact_limit`.
pub fn grothendieck_bounds(a: &DenseMatrix, cfg: &BmConfig, exact_limit: usize) -> Result<GrothendieckBracket> {
    let bm = grothendieck_bm(a, cfg)?;
    let (m, n) = (a.rows(), a.cols());
    let spectral_bound = ((m * n) as f64).sqrt() * spectral_norm(a);
    let infty_one = infty_one_exact(a, exact_limit).ok().map(|w| w.value);
    let cut = cut_norm_exact(a, exact_limit).ok().map(|w| w.value);
    Ok(bracket_from_parts(bm, spectral_bound, infty_one, cut))
}

pub(crate) fn bracket_from_parts(
    bm: BmResult,
    spectral_bound: f64,
    infty_one: Option<f64>,
    cut: Option<f64>,
) -> GrothendieckBracket {
    let lower = infty_one.map_or(bm.value, |v| v.max(bm.value));
    let mut upper = spectral_bound;
    if let Some(v) = infty_one {
        upper = upper.min(GROTHENDIECK_CONSTANT * v);
    }
    if let Some(c) = cut {
        upper = upper.min(8.0 * c);
    }
    GrothendieckBracket {
        lower,
        upper,
        bm,
        spectral_bound,
        infty_one,
        cut,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_rank_rule() {
        assert_eq!(default_rank(2, 2), 4);
        assert_eq!(default_rank(13, 13), 10);
        assert_eq!(default_rank(100, 100), 22);
    }

    #[test]
    fn two_by_two_rank_one_reaches_four() {
        let a = DenseMatrix::from_rows(&[vec![1.0, -1.0], vec![-1.0, 1.0]]).unwrap();
        let r = grothendieck_bm(&a, &BmConfig::with_rank(1)).unwrap();
        assert!((r.value - 4.0).abs() < 1e-12);
        r.witness.check_unit_ball().unwrap();
        let b = grothendieck_bounds(&a, &BmConfig::default(), 26).unwrap();
        assert!((b.lower - 4.0).abs() < 1e-12);
        assert!((b.upper - 4.0).abs() < 1e-12);
    }

    #[test]
    fn all_ones_any_rank() {
        for k in [1, 3, 7] {
            let r = grothendieck_bm(&DenseMatrix::ones(6, 6), &BmConfig::with_rank(k)).unwrap();
            assert!((r.value - 36.0).abs() < 1e-9, "k={k}: {}", r.value);
        }
    }

    #[test]
    fn zero_matrix_short_circuits() {
        let r = grothendieck_bm(&DenseMatrix::zeros(3, 2), &BmConfig::default()).unwrap();
        assert_eq!(r.value, 0.0);
        let b = grothendieck_bounds(&DenseMatrix::zeros(3, 2), &BmConfig::default(), 26).unwrap();
        assert_eq!((b.lower, b.upper), (0.0, 0.0));
    }

    #[test]
    fn invalid_config() {
        let a = DenseMatrix::ones(2, 2);
        assert!(grothendieck_bm(&a, &BmConfig::with_rank(0)).is_err());
        let cfg = BmConfig {
            restarts: 0,
            ..Default::default()
        };
        assert!(grothendieck_bm(&a, &cfg).is_err());
    }

    #[test]
    fn sweeps_are_monotone() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for trial in 0..10 {
            let (m, n) = (5 + trial % 4, 7 - trial % 3);
            let data: Vec<f64> = (0..m * n).map(|_| StandardNormal.sample(&mut rng)).collect();
            let a = DenseMatrix::from_vec(m, n, data).unwrap();
            let run = ascent_run(&a, 3, trial as u64, 0, 200, 0.0);
            for w in run.history.windows(2) {
                assert!(w[1] >= w[0] - 1e-12 * w[0].abs(), "{:?}", run.history);
            }
            run.assignment.check_unit_ball().unwrap();
        }
    }

    #[test]
    fn deterministic_under_seed() {
        let a = DenseMatrix::from_fn(6, 5, |i, j| ((i * 5 + j * 3) % 7) as f64 - 3.0);
        let cfg = BmConfig::with_rank(4);
        let r1 = grothendieck_bm(&a, &cfg).unwrap();
        let r2 = grothendieck_bm(&a, &cfg).unwrap();
        assert_eq!(r1, r2);
    }
}
