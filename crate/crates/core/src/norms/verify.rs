//! Inequality checks between computed norms, uniformity, mixing, and the eigenvalue bound.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cayley::center_regular;
use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::norms::cut::{cut_norm_exact, CutWitness};
use crate::norms::grothendieck::{grothendieck_bounds, BmConfig, GROTHENDIECK_CONSTANT};
use crate::norms::report::NormReport;
use crate::norms::spectral::{spectral_norm, symmetric_spectrum};

/// Relative slack for inequality checks.
pub const CHECK_TOLERANCE: f64 = 1e-9;
/// Relative slack for the transitive equality `||A||_G = n ||A||`.
pub const TRANSITIVE_TOLERANCE: f64 = 1e-6;
/// Largest order checked over all pairs of subsets.
pub const MIXING_EXHAUSTIVE_LIMIT: usize = 14;
pub const MIXING_SAMPLES: usize = 100_000;
pub const MIXING_SEED: u64 = 0x6d69_78;

/// One inequality `lhs <= rhs`, with `margin = rhs - lhs`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub passed: bool,
}

impl Check {
    pub fn le(name: &str, lhs: f64, rhs: f64, tol: f64) -> Check {
        Check {
            name: name.to_string(),
            lhs,
            rhs,
            margin: rhs - lhs,
            passed: lhs <= rhs + tol,
        }
    }

    /// `|lhs - rhs| <= tol`, stored with `margin = tol - |lhs - rhs|`.
    pub fn eq(name: &str, lhs: f64, rhs: f64, tol: f64) -> Check {
        Check {
            name: name.to_string(),
            lhs,
            rhs,
            margin: tol - (lhs - rhs).abs(),
            passed: (lhs - rhs).abs() <= tol,
        }
    }
}

/// Checks every applicable inequality between the norms in `report`.
///
/// Tolerances are relative to `sum |a_st|`, which dominates every norm involved.
/// The vertex-transitive checks run only when `report.vertex_transitive == Some(true)`.
pub fn verify_sandwich(a: &DenseMatrix, report: &NormReport) -> Vec<Check> {
    let tol = CHECK_TOLERANCE * a.entry_l1();
    let mut out = Vec::new();
    if let (Some(cut), Some(inf)) = (report.cut, report.infty_one) {
        out.push(Check::le("cut <= inf1", cut, inf, tol));
        out.push(Check::le("inf1 <= 4 cut", inf, 4.0 * cut, tol));
    }
    if let Some(inf) = report.infty_one {
        out.push(Check::le("inf1 <= groth_lower", inf, report.groth_lower, tol));
        out.push(Check::le(
            "groth_lower <= K_G inf1",
            report.groth_lower,
            GROTHENDIECK_CONSTANT * inf,
            tol,
        ));
    }
    out.push(Check::le(
        "groth_lower <= groth_upper",
        report.groth_lower,
        report.groth_upper,
        tol,
    ));
    out.push(Check::le(
        "groth_upper <= sqrt(mn) spectral",
        report.groth_upper,
        report.spectral_bound,
        tol,
    ));
    if let Some(cut) = report.cut {
        out.push(Check::le("groth_lower <= 8 cut", report.groth_lower, 8.0 * cut, tol));
    }
    if report.vertex_transitive == Some(true) {
        let n = report.rows as f64;
        let ns = n * report.spectral;
        if let Some(cut) = report.cut {
            out.push(Check::le("cut <= n spectral", cut, ns, tol));
            out.push(Check::le("n spectral <= 8 cut", ns, 8.0 * cut, tol));
        }
        out.push(Check::eq(
            "groth_lower = n spectral",
            report.groth_lower,
            ns,
            TRANSITIVE_TOLERANCE * ns.max(tol),
        ));
    }
    out
}

/// Checks that every row and column sums to `d`.
pub fn check_regular(a: &DenseMatrix, d: f64) -> Result<()> {
    if !a.is_square() {
        return Err(Error::Dimension {
            expected: "square matrix".into(),
            got: format!("{}x{}", a.rows(), a.cols()),
        });
    }
    let tol = 1e-9 * d.abs().max(1.0);
    for (i, s) in a.row_sums().into_iter().chain(a.col_sums()).enumerate() {
        if (s - d).abs() > tol {
            return Err(Error::NotRegular {
                row: i % a.rows(),
                sum: s,
                expected: d,
            });
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum Uniformity {
    /// Smallest `eps` with `|e(S,T) - d|S||T|/n| <= eps d n` for all `S, T`.
    Exact { epsilon: f64, witness: CutWitness },
    /// `eps` lies in `[lower, upper]`.
    Bounded { lower: f64, upper: f64 },
}

impl Uniformity {
    pub fn upper(&self) -> f64 {
        match self {
            Uniformity::Exact { epsilon, .. } => *epsilon,
            Uniformity::Bounded { upper, .. } => *upper,
        }
    }
}

/// `eps = ||A - (d/n)J||_cut / (dn)`, exact up to `exact_limit` vertices and bracketed above.
pub fn epsilon_uniformity(a: &DenseMatrix, d: f64, exact_limit: usize, cfg: &BmConfig) -> Result<Uniformity> {
    check_regular(a, d)?;
    let n = a.rows();
    let scale = d * n as f64;
    if d == 0.0 {
        return Err(Error::InvalidParameter("degree must be positive".into()));
    }
    let centered = center_regular(a, d);
    if n <= exact_limit {
        let witness = cut_norm_exact(&centered, exact_limit)?;
        Ok(Uniformity::Exact {
            epsilon: witness.value / scale,
            witness,
        })
    } else {
        let b = grothendieck_bounds(&centered, cfg, exact_limit)?;
        Ok(Uniformity::Bounded {
            lower: b.lower / 8.0 / scale,
            upper: b.upper / scale,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MixingCheck {
    pub holds: bool,
    pub exhaustive: bool,
    pub pairs: u64,
    /// Largest `|e(S,T) - d|S||T|/n| - lambda sqrt(|S||T|)` seen.
    pub worst_excess: f64,
    /// Pair attaining `worst_excess`, as index sets.
    pub worst_pair: (Vec<usize>, Vec<usize>),
}

fn mask_to_set(mask: u64, n: usize) -> Vec<usize> {
    (0..n).filter(|&i| mask >> i & 1 == 1).collect()
}

/// Worst excess and its pair; ties go to the smaller `(S, T)` masks.
fn better(a: (f64, u64, u64), b: (f64, u64, u64)) -> (f64, u64, u64) {
    if b.0 > a.0 || (b.0 == a.0 && (b.1, b.2) < (a.1, a.2)) {
        b
    } else {
        a
    }
}

/// Expander mixing inequality `|e(S,T) - d|S||T|/n| <= lambda sqrt(|S||T|)`, where
/// `e(S,T) = sum_{s in S, t in T} a_st`.
///
/// All pairs are examined up to 14 vertices; above that, 100000 seeded random pairs.
pub fn mixing_lemma_check(a: &DenseMatrix, d: f64, lambda: f64) -> Result<MixingCheck> {
    if !a.is_square() {
        return Err(Error::Dimension {
            expected: "square matrix".into(),
            got: format!("{}x{}", a.rows(), a.cols()),
        });
    }
    let n = a.rows();
    let density = d / n as f64;
    let tol = CHECK_TOLERANCE * (d.abs() * n as f64).max(1.0);
    let excess = |e: f64, s: usize, t: usize| -> f64 {
        let st = (s * t) as f64;
        (e - density * st).abs() - lambda * st.sqrt()
    };
    if n <= MIXING_EXHAUSTIVE_LIMIT {
        let init = (f64::NEG_INFINITY, u64::MAX, u64::MAX);
        let (worst_excess, smask, tmask) = (0u64..1 << n)
            .into_par_iter()
            .map(|smask| {
                let s_size = smask.count_ones() as usize;
                let mut col = vec![0.0; n];
                for s in mask_to_set(smask, n) {
                    for (t, c) in col.iter_mut().enumerate() {
                        *c += a.get(s, t);
                    }
                }
                // Gray code over T
                let mut best = (excess(0.0, s_size, 0), smask, 0);
                let mut tmask = 0u64;
                let mut e = 0.0;
                for k in 1u64..1 << n {
                    let bit = k.trailing_zeros() as usize;
                    tmask ^= 1 << bit;
                    if tmask >> bit & 1 == 1 {
                        e += col[bit];
                    } else {
                        e -= col[bit];
                    }
                    best = better(best, (excess(e, s_size, tmask.count_ones() as usize), smask, tmask));
                }
                best
            })
            .reduce(|| init, better);
        return Ok(MixingCheck {
            holds: worst_excess <= tol,
            exhaustive: true,
            pairs: 1u64 << (2 * n),
            worst_excess,
            worst_pair: (mask_to_set(smask, n), mask_to_set(tmask, n)),
        });
    }

    const CHUNK: usize = 1000;
    type Sample = (f64, usize, Vec<usize>, Vec<usize>);
    let pick = |x: Sample, y: Sample| if y.0 > x.0 || (y.0 == x.0 && y.1 < x.1) { y } else { x };
    let init = || (f64::NEG_INFINITY, usize::MAX, Vec::new(), Vec::new());
    let (worst_excess, _, s, t) = (0..MIXING_SAMPLES / CHUNK)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = ChaCha8Rng::seed_from_u64(MIXING_SEED);
            rng.set_stream(chunk as u64);
            let mut best = init();
            for i in 0..CHUNK {
                let ps: f64 = rng.random();
                let pt: f64 = rng.random();
                let s: Vec<usize> = (0..n).filter(|_| rng.random::<f64>() < ps).collect();
                let t: Vec<usize> = (0..n).filter(|_| rng.random::<f64>() < pt).collect();
                let e: f64 = s.iter().map(|&i| t.iter().map(|&j| a.get(i, j)).sum::<f64>()).sum();
                let x = excess(e, s.len(), t.len());
                if x > best.0 {
                    best = (x, chunk * CHUNK + i, s, t);
                }
            }
            best
        })
        .reduce(init, pick);
    Ok(MixingCheck {
        holds: worst_excess <= tol,
        exhaustive: false,
        pairs: MIXING_SAMPLES as u64,
        worst_excess,
        worst_pair: (s, t),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenvalueBoundCheck {
    /// Second largest eigenvalue in absolute value (or `||A - (d/n)J||` for asymmetric input).
    pub lambda: f64,
    /// `||A - (d/n)J||`, computed independently.
    pub centered_spectral: f64,
    pub epsilon: f64,
    pub degree: f64,
    /// `8 eps d`.
    pub bound: f64,
    pub holds: bool,
    /// `lambda / (eps d)`; infinite when `eps = 0` and `lambda > 0`.
    pub ratio: f64,
}

/// `lambda <= 8 eps d` with exact `eps`.
pub fn eigenvalue_bound_check(a: &DenseMatrix, d: f64, exact_limit: usize) -> Result<EigenvalueBoundCheck> {
    check_regular(a, d)?;
    let n = a.rows();
    if n > exact_limit {
        return Err(Error::Capacity {
            what: "exact uniformity order",
            size: n,
            limit: exact_limit,
        });
    }
    let centered = center_regular(a, d);
    let centered_spectral = spectral_norm(&centered);
    let lambda = if a.is_symmetric(1e-12) {
        symmetric_spectrum(a)?.lambda2().abs()
    } else {
        centered_spectral
    };
    let cut = cut_norm_exact(&centered, exact_limit)?.value;
    let epsilon = cut / (d * n as f64);
    let bound = 8.0 * epsilon * d;
    let ratio = if lambda == 0.0 { 0.0 } else { lambda / (epsilon * d) };
    Ok(EigenvalueBoundCheck {
        lambda,
        centered_spectral,
        epsilon,
        degree: d,
        bound,
        holds: lambda <= bound + CHECK_TOLERANCE * (d * n as f64),
        ratio,
    })
}
