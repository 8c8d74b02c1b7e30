//! Named verification suites, shared by the command line and the acceptance tests.

use std::sync::Arc;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cayley::{cayley_matrix, center_regular};
use crate::constructions::{
    cayley_graph, complete_graph, cycle_graph, paley_graph, petersen_graph, planted_eigenvalue_graph, RegularGraph,
};
use crate::error::{Error, Result};
use crate::fourier::{
    abelian_character_norm, build_irrep_table, fourier_inverse, fourier_transform, parse_irreps, schur_average,
    spectral_via_irreps, svd_witness, IrrepTable,
};
use crate::group::{build_standard_group, convolve, function_norm, ComplexGroupFunction, GroupFamily, GroupFunction};
use crate::matrix::{ComplexMatrix, DenseMatrix};
use crate::norms::group::{group_spectral, group_spectral_complex, group_spectral_witness, translate_witness};
use crate::norms::{
    cut_norm_exact, default_rank, eigenvalue_bound_check, grothendieck_bm, grothendieck_bounds, infty_one_exact,
    mixing_lemma_check, spectral_norm, symmetric_spectrum, BmConfig, GROTHENDIECK_CONSTANT,
};

/// Representations of `S3`, elements in lexicographic order of their image arrays.
pub const S3_IRREPS: &str = include_str!("../tests/data/s3_irreps.json");

pub const SUITES: &[&str] = &[
    "sandwich-suite",
    "equality-suite",
    "factor4-suite",
    "fourier-suite",
    "witness-suite",
    "abelian-suite",
    "planted-suite",
    "mixing-suite",
    "eigenvalue-bound-suite",
    "grothendieck-suite",
];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteCheck {
    pub label: String,
    pub passed: bool,
    /// Slack left by the check, relative to its scale; negative when it fails.
    pub margin: f64,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub name: String,
    pub checks: Vec<SuiteCheck>,
    pub seconds: f64,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&SuiteCheck> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    pub fn min_margin(&self) -> f64 {
        self.checks.iter().map(|c| c.margin).fold(f64::INFINITY, f64::min)
    }

    pub fn summary(&self) -> String {
        format!(
            "{} {}: {}/{} checks, min margin {:.3e}, {:.2}s",
            if self.passed() { "PASS" } else { "FAIL" },
            self.name,
            self.checks.iter().filter(|c| c.passed).count(),
            self.checks.len(),
            self.min_margin(),
            self.seconds
        )
    }
}

struct Collector(Vec<SuiteCheck>);

impl Collector {
    /// `lhs <= rhs` up to `tol * scale`.
    fn le(&mut self, label: String, lhs: f64, rhs: f64, tol: f64, scale: f64) {
        let scale = scale.abs().max(f64::MIN_POSITIVE);
        self.0.push(SuiteCheck {
            passed: lhs <= rhs + tol * scale,
            margin: (rhs - lhs) / scale,
            label,
            detail: format!("{lhs:.12e} <= {rhs:.12e}"),
        });
    }

    /// `|lhs - rhs| <= tol * scale`.
    fn close(&mut self, label: String, lhs: f64, rhs: f64, tol: f64, scale: f64) {
        let scale = scale.abs().max(f64::MIN_POSITIVE);
        let err = (lhs - rhs).abs() / scale;
        self.0.push(SuiteCheck {
            passed: err <= tol,
            margin: tol - err,
            label,
            detail: format!("{lhs:.12e} vs {rhs:.12e}"),
        });
    }

    fn flag(&mut self, label: String, passed: bool, detail: String) {
        self.0.push(SuiteCheck {
            label,
            passed,
            margin: if passed { 0.0 } else { -1.0 },
            detail,
        });
    }
}

pub fn run_suite(name: &str) -> Result<SuiteReport> {
    let start = Instant::now();
    let mut c = Collector(Vec::new());
    match name {
        "sandwich-suite" => sandwich(&mut c)?,
        "equality-suite" => equality(&mut c)?,
        "factor4-suite" => factor4(&mut c)?,
        "fourier-suite" => fourier(&mut c)?,
        "witness-suite" => witness(&mut c)?,
        "abelian-suite" => abelian(&mut c)?,
        "planted-suite" => planted(&mut c)?,
        "mixing-suite" => mixing(&mut c)?,
        "eigenvalue-bound-suite" => eigenvalue_bound(&mut c)?,
        "grothendieck-suite" => grothendieck(&mut c)?,
        other => {
            return Err(Error::InvalidParameter(format!(
                "unknown suite '{other}'; available: {}, all",
                SUITES.join(", ")
            )))
        }
    }
    Ok(SuiteReport {
        name: name.to_string(),
        checks: c.0,
        seconds: start.elapsed().as_secs_f64(),
    })
}

/// Runs every suite, or the named one (`all` expands to every suite).
pub fn run_suites(name: &str) -> Result<Vec<SuiteReport>> {
    if name == "all" {
        SUITES.iter().map(|s| run_suite(s)).collect()
    } else {
        Ok(vec![run_suite(name)?])
    }
}

/// The vertex-transitive graphs used by the sandwich, equality and eigenvalue suites;
/// the flag marks Cayley graphs.
pub fn transitive_family() -> Result<Vec<(String, RegularGraph, bool)>> {
    let mut out = Vec::new();
    for n in 4..=20 {
        out.push((format!("C{n}"), cycle_graph(n)?, true));
    }
    for n in 4..=16 {
        out.push((format!("K{n}"), complete_graph(n)?, true));
    }
    for p in [13, 17] {
        out.push((format!("Paley{p}"), paley_graph(p)?, true));
    }
    let d4 = Arc::new(build_standard_group(&GroupFamily::Dihedral(4))?);
    // r, r^3, s and s, rs, r^2
    out.push(("Cay(D4,{r,r3,s})".into(), cayley_graph(d4.clone(), &[1, 3, 4])?, true));
    out.push(("Cay(D4,{s,rs,r2})".into(), cayley_graph(d4, &[4, 5, 2])?, true));
    out.push(("Petersen".into(), petersen_graph(), false));
    Ok(out)
}

fn centered(g: &RegularGraph) -> DenseMatrix {
    center_regular(&g.matrix, g.degree as f64)
}

fn sandwich(c: &mut Collector) -> Result<()> {
    for (name, g, _) in transitive_family()? {
        let a = centered(&g);
        let n = g.n as f64;
        let cut = cut_norm_exact(&a, 26)?.value;
        let spec = symmetric_spectrum(&a)?.largest_abs();
        let scale = (n * spec).max(cut);
        c.le(format!("{name}: cut <= n|A|"), cut, n * spec, 1e-9, scale);
        c.le(format!("{name}: n|A| <= 8 cut"), n * spec, 8.0 * cut, 1e-9, scale);
    }
    Ok(())
}

fn equality(c: &mut Collector) -> Result<()> {
    for (name, g, _) in transitive_family()? {
        let a = centered(&g);
        let n = g.n as f64;
        let target = n * symmetric_spectrum(&a)?.largest_abs();
        let cfg = BmConfig::with_rank(default_rank(g.n, g.n).max(8));
        let bm = grothendieck_bm(&a, &cfg)?;
        let upper = n * spectral_norm(&a);
        c.le(
            format!("{name}: BM >= (1-1e-6) n|A|"),
            (1.0 - 1e-6) * target,
            bm.value,
            0.0,
            target,
        );
        c.close(format!("{name}: sqrt(n^2)|A| = n|A|"), upper, target, 1e-9, target);
        c.le(format!("{name}: BM <= upper"), bm.value, upper, 1e-9, target);
    }
    Ok(())
}

fn factor4(c: &mut Collector) -> Result<()> {
    let a = DenseMatrix::from_rows(&[vec![1.0, -1.0], vec![-1.0, 1.0]])?;
    let b = grothendieck_bounds(&a, &BmConfig::default(), 26)?;
    c.close("cut = 1".into(), cut_norm_exact(&a, 26)?.value, 1.0, 1e-9, 1.0);
    c.close("inf1 = 4".into(), infty_one_exact(&a, 26)?.value, 4.0, 1e-9, 4.0);
    c.close("spectral = 2".into(), spectral_norm(&a), 2.0, 1e-9, 2.0);
    c.close("groth lower = 4".into(), b.lower, 4.0, 1e-9, 4.0);
    c.close("groth upper = 4".into(), b.upper, 4.0, 1e-9, 4.0);
    let z2 = Arc::new(build_standard_group(&GroupFamily::Cyclic(2))?);
    let f = GroupFunction::new(z2, vec![1.0, -1.0])?;
    c.flag(
        "Cay(Z2,(1,-1)) = A".into(),
        cayley_matrix(&f).matrix == a,
        String::new(),
    );
    c.close("n|A| = 4".into(), 2.0 * spectral_norm(&a), 4.0, 1e-9, 4.0);
    c.close("|G| |f| = 2".into(), 2.0 * group_spectral(&f), 2.0, 1e-9, 2.0);
    Ok(())
}

/// Entries uniform in the unit square.
pub fn random_complex(table: &IrrepTable, rng: &mut ChaCha8Rng) -> ComplexGroupFunction {
    ComplexGroupFunction::from_fn(table.group.clone(), |_| {
        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    })
}

pub fn random_real(table: &IrrepTable, rng: &mut ChaCha8Rng) -> GroupFunction {
    GroupFunction::from_fn(table.group.clone(), |_| rng.random_range(-1.0..1.0))
}

fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn fourier_groups() -> Vec<GroupFamily> {
    vec![
        GroupFamily::Cyclic(12),
        GroupFamily::Product(Box::new(GroupFamily::Cyclic(2)), Box::new(GroupFamily::Cyclic(2))),
        GroupFamily::Dihedral(4),
        GroupFamily::Dihedral(5),
    ]
}

/// Plancherel, inversion, convolution, spectral norm and Schur averages on one table.
pub fn fourier_identities(table: &IrrepTable, samples: usize, seed: u64) -> Result<Vec<SuiteCheck>> {
    let mut c = Collector(Vec::new());
    let label = table.group.label().to_string();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut planch, mut inv, mut conv, mut spec) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..samples {
        let f = random_complex(table, &mut rng);
        let g = random_complex(table, &mut rng);
        let cf = fourier_transform(&f, table)?;
        let l2 = function_norm(&f, 2.0).powi(2);
        planch = planch.max((cf.plancherel_sum() - l2).abs() / l2);
        let back = fourier_inverse(&cf, table)?;
        inv = inv.max(max_diff(back.values(), f.values()));
        let cg = fourier_transform(&g, table)?;
        let cfg = fourier_transform(&convolve(&f, &g)?, table)?;
        for ((a, b), p) in cf.blocks.iter().zip(&cg.blocks).zip(&cfg.blocks) {
            conv = conv.max(a.matmul(b)?.sub(p)?.max_abs());
        }
        let dense = group_spectral_complex(&f);
        spec = spec.max((spectral_via_irreps(&f, table)? - dense).abs() / dense);
    }
    let mut schur = 0.0f64;
    for (i, rho) in table.irreps.iter().enumerate() {
        for (j, sigma) in table.irreps.iter().enumerate() {
            let m = ComplexMatrix::from_fn(rho.dim, sigma.dim, |_, _| {
                Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
            });
            let avg = schur_average(&table.group, rho, sigma, &m)?;
            let expect = if i == j {
                ComplexMatrix::identity(rho.dim).map(|z| z * m.trace() / rho.dim as f64)
            } else {
                ComplexMatrix::zeros(rho.dim, sigma.dim)
            };
            schur = schur.max(avg.sub(&expect)?.max_abs());
        }
    }
    c.le(format!("{label}: Plancherel"), planch, 1e-10, 0.0, 1e-10);
    c.le(format!("{label}: inversion"), inv, 1e-12, 0.0, 1e-12);
    c.le(format!("{label}: convolution"), conv, 1e-10, 0.0, 1e-10);
    c.le(format!("{label}: spectral via irreps"), spec, 1e-8, 0.0, 1e-8);
    c.le(format!("{label}: Schur averages"), schur, 1e-10, 0.0, 1e-10);
    Ok(c.0)
}

fn fourier(c: &mut Collector) -> Result<()> {
    for (k, fam) in fourier_groups().into_iter().enumerate() {
        let table = build_irrep_table(Arc::new(build_standard_group(&fam)?))?;
        c.0.extend(fourier_identities(&table, 50, k as u64)?);
    }
    Ok(())
}

pub fn s3_table() -> Result<IrrepTable> {
    let s3 = Arc::new(build_standard_group(&GroupFamily::Symmetric(3))?);
    parse_irreps(S3_IRREPS, s3)
}

/// Largest relative gap between the singular-vector witness objective and `||f||`,
/// and between the translate witness objective and `||f||`, over random functions.
pub fn witness_gaps(table: &IrrepTable, samples: usize, seed: u64) -> Result<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut svd_gap, mut tr_gap) = (0.0f64, 0.0f64);
    for _ in 0..samples {
        let f = random_complex(table, &mut rng);
        let w = svd_witness(&f, table)?;
        let norm = group_spectral_complex(&f);
        svd_gap = svd_gap.max((w.objective - Complex64::new(norm, 0.0)).norm() / norm);

        let g = random_real(table, &mut rng);
        let (x, y, norm) = group_spectral_witness(&g);
        let t = translate_witness(&g, &x, &y)?;
        tr_gap = tr_gap.max((t.objective - norm).abs() / norm);
    }
    Ok((svd_gap, tr_gap))
}

fn witness(c: &mut Collector) -> Result<()> {
    let d4 = build_irrep_table(Arc::new(build_standard_group(&GroupFamily::Dihedral(4))?))?;
    let s3 = s3_table()?;
    c.flag("S3 table validates".into(), true, format!("dims {:?}", s3.dims()));
    for (k, t) in [d4, s3].iter().enumerate() {
        let (svd_gap, tr_gap) = witness_gaps(t, 20, 100 + k as u64)?;
        let label = t.group.label();
        c.le(format!("{label}: SVD witness = |f|"), svd_gap, 1e-8, 0.0, 1e-8);
        c.le(format!("{label}: translate witness = |f|"), tr_gap, 1e-10, 0.0, 1e-10);
    }
    Ok(())
}

fn abelian(c: &mut Collector) -> Result<()> {
    for n in 1..=24 {
        let table = build_irrep_table(Arc::new(build_standard_group(&GroupFamily::Cyclic(n))?))?;
        let mut rng = ChaCha8Rng::seed_from_u64(200 + n as u64);
        let mut gap = 0.0f64;
        for _ in 0..50 {
            let f = random_complex(&table, &mut rng);
            let chi = abelian_character_norm(&f, &table)?;
            let dense = group_spectral_complex(&f);
            gap = gap.max((chi.value - dense).abs() / dense);
        }
        c.le(format!("Z{n}: character norm = |f|"), gap, 1e-10, 0.0, 1e-10);
    }
    Ok(())
}

fn planted(c: &mut Collector) -> Result<()> {
    for seed in 0..5 {
        let p = planted_eigenvalue_graph(8, 24, seed)?;
        let regular = p.graph.matrix.row_sums().iter().all(|&s| s == 8.0);
        c.flag(format!("seed {seed}: 8-regular"), regular, String::new());
        let r = p.residual();
        c.le(format!("seed {seed}: eigenvalue -4 residual"), r, 1e-12, 0.0, 1e-12);
        let a = centered(&p.graph);
        let cut = cut_norm_exact(&a, 26)?.value;
        let ratio = 24.0 * spectral_norm(&a) / cut;
        c.flag(
            format!("seed {seed}: n|A - (d/n)J| / cut"),
            true,
            format!("ratio {ratio:.6}"),
        );
    }
    Ok(())
}

fn mixing(c: &mut Collector) -> Result<()> {
    let g = paley_graph(13)?;
    let lambda = symmetric_spectrum(&g.matrix)?.lambda2();
    let m = mixing_lemma_check(&g.matrix, 6.0, lambda)?;
    c.flag(
        "Paley13 mixing inequality".into(),
        m.holds && m.exhaustive,
        format!("{} pairs, worst excess {:.3e}", m.pairs, m.worst_excess),
    );
    Ok(())
}

fn eigenvalue_bound(c: &mut Collector) -> Result<()> {
    for (name, g, is_cayley) in transitive_family()? {
        if !is_cayley {
            continue;
        }
        let r = eigenvalue_bound_check(&g.matrix, g.degree as f64, 26)?;
        c.le(
            format!("{name}: lambda <= 8 eps d"),
            r.lambda,
            r.bound,
            1e-9,
            r.bound.max(1.0),
        );
    }
    Ok(())
}

fn grothendieck(c: &mut Collector) -> Result<()> {
    let (mut low_fail, mut high_fail) = (0, 0);
    let mut worst = f64::INFINITY;
    for seed in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + seed);
        let a = DenseMatrix::from_fn(8, 8, |_, _| if rng.random::<bool>() { 1.0 } else { -1.0 });
        let inf = infty_one_exact(&a, 26)?.value;
        let bm = grothendieck_bm(&a, &BmConfig::with_rank(16))?.value;
        if inf > bm + 1e-9 {
            low_fail += 1;
        }
        if bm > GROTHENDIECK_CONSTANT * inf + 1e-9 {
            high_fail += 1;
        }
        worst = worst.min(bm - inf);
    }
    c.flag(
        "inf1 <= BM on 100 sign matrices".into(),
        low_fail == 0,
        format!("{low_fail} failures, min BM - inf1 = {worst:.3e}"),
    );
    c.flag(
        "BM <= K_G inf1 on 100 sign matrices".into(),
        high_fail == 0,
        format!("{high_fail} failures"),
    );
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite_is_an_error() {
        assert!(matches!(run_suite("bogus"), Err(Error::InvalidParameter(_))));
        assert!(run_suites("bogus").is_err());
    }

    #[test]
    fn factor4_passes_with_zero_margin() {
        let r = run_suite("factor4-suite").unwrap();
        assert!(r.passed(), "{:?}", r.failures());
        assert!(r.summary().starts_with("PASS factor4-suite: 8/8"));
    }
}
