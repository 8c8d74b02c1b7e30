//! All norms of one matrix in a single serializable bundle.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::cayley::{find_transitive_automorphisms, MAX_AUTOMORPHISM_ORDER};
use crate::error::Result;
use crate::matrix::DenseMatrix;
use crate::norms::cut::{cut_norm_exact, infty_one_exact, CutWitness, SignWitness, DEFAULT_EXACT_LIMIT};
use crate::norms::grothendieck::{bracket_from_parts, grothendieck_bm, BmConfig, VectorAssignment};
use crate::norms::spectral::{symmetric_spectrum, top_singular_triple};
use crate::norms::verify::{verify_sandwich, Check};

#[derive(Clone, Debug)]
pub struct ReportOptions {
    pub bm: BmConfig,
    pub exact_limit: usize,
    /// Search for a vertex-transitivity certificate (square matrices up to order 64).
    pub transitivity: bool,
    pub timings: bool,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions {
            bm: BmConfig::default(),
            exact_limit: DEFAULT_EXACT_LIMIT,
            transitivity: true,
            timings: false,
        }
    }
}

/// Wall-clock seconds per stage.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub spectral: f64,
    pub spectrum: f64,
    pub cut: f64,
    pub infty_one: f64,
    pub grothendieck: f64,
    pub transitivity: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormReport {
    pub rows: usize,
    pub cols: usize,
    pub spectral: f64,
    pub singular_left: Vec<f64>,
    pub singular_right: Vec<f64>,
    /// Eigenvalues sorted by absolute value, for symmetric input.
    pub spectrum: Option<Vec<f64>>,
    pub lambda2: Option<f64>,
    pub cut: Option<f64>,
    pub cut_witness: Option<CutWitness>,
    pub infty_one: Option<f64>,
    pub infty_one_witness: Option<SignWitness>,
    pub groth_lower: f64,
    pub groth_upper: f64,
    /// `sqrt(mn) ||A||`.
    pub spectral_bound: f64,
    pub bm_value: f64,
    pub bm_rank: usize,
    pub bm_restart: usize,
    pub bm_witness: VectorAssignment,
    /// `None` when the search was skipped.
    pub vertex_transitive: Option<bool>,
    pub checks: Vec<Check>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings: Option<Timings>,
}

impl NormReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

fn timed<T>(slot: &mut f64, f: impl FnOnce() -> T) -> T {
    let start = Instant::now();
    let out = f();
    *slot = start.elapsed().as_secs_f64();
    out
}

pub fn compute_report(a: &DenseMatrix, opts: &ReportOptions) -> Result<NormReport> {
    let mut t = Timings::default();
    let triple = timed(&mut t.spectral, || top_singular_triple(a));
    let spectrum = timed(&mut t.spectrum, || {
        if a.is_square() && a.is_symmetric(1e-12) {
            symmetric_spectrum(a).ok()
        } else {
            None
        }
    });
    let cut = timed(&mut t.cut, || cut_norm_exact(a, opts.exact_limit).ok());
    let infty = timed(&mut t.infty_one, || infty_one_exact(a, opts.exact_limit).ok());
    let bm = timed(&mut t.grothendieck, || grothendieck_bm(a, &opts.bm))?;
    let vertex_transitive = timed(&mut t.transitivity, || {
        if opts.transitivity && a.is_square() && a.rows() <= MAX_AUTOMORPHISM_ORDER {
            find_transitive_automorphisms(a).ok().map(|c| c.is_some())
        } else {
            None
        }
    });

    let (m, n) = (a.rows(), a.cols());
    let spectral_bound = ((m * n) as f64).sqrt() * triple.value;
    let bracket = bracket_from_parts(
        bm,
        spectral_bound,
        infty.as_ref().map(|w| w.value),
        cut.as_ref().map(|w| w.value),
    );
    let mut report = NormReport {
        rows: m,
        cols: n,
        spectral: triple.value,
        singular_left: triple.left,
        singular_right: triple.right,
        lambda2: spectrum.as_ref().map(|s| s.lambda2()),
        spectrum: spectrum.map(|s| s.values),
        cut: cut.as_ref().map(|w| w.value),
        cut_witness: cut,
        infty_one: infty.as_ref().map(|w| w.value),
        infty_one_witness: infty,
        groth_lower: bracket.lower,
        groth_upper: bracket.upper,
        spectral_bound,
        bm_value: bracket.bm.value,
        bm_rank: bracket.bm.rank,
        bm_restart: bracket.bm.best_restart,
        bm_witness: bracket.bm.witness,
        vertex_transitive,
        checks: Vec::new(),
        timings: opts.timings.then_some(t),
    };
    report.checks = verify_sandwich(a, &report);
    Ok(report)
}
