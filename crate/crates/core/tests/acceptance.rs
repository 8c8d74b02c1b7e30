//! One pass/fail line per acceptance criterion. Runs without the test harness so the
//! lines are always printed.

use cayley_norms::suites::{run_suite, SuiteReport};

/// Suite, statement, runtime budget in seconds.
const CRITERIA: [(&str, &str, f64); 10] = [
    (
        "sandwich-suite",
        "cut <= n|A| <= 8 cut on vertex-transitive graphs, tol 1e-9 rel",
        60.0,
    ),
    ("equality-suite", "BM lower >= (1 - 1e-6) n|A| = sqrt(n^2)|A|", 120.0),
    (
        "factor4-suite",
        "[[1,-1],[-1,1]]: cut 1, inf1 4, spectral 2, bracket [4,4], tol 1e-9",
        60.0,
    ),
    (
        "fourier-suite",
        "Plancherel 1e-10, inversion 1e-12, convolution 1e-10, spectral 1e-8, Schur 1e-10",
        30.0,
    ),
    (
        "witness-suite",
        "SVD witness = |f| to 1e-8, translate witness = |f| to 1e-10 on D4 and S3",
        30.0,
    ),
    (
        "abelian-suite",
        "character norm = dense |f| to 1e-10 on Z_n, n <= 24",
        60.0,
    ),
    (
        "planted-suite",
        "8-regular, eigenvalue -4 residual <= 1e-12, ratio recorded",
        600.0,
    ),
    ("mixing-suite", "Paley13 exhaustive mixing inequality", 60.0),
    (
        "eigenvalue-bound-suite",
        "lambda <= 8 eps d with exact eps on the Cayley graphs",
        60.0,
    ),
    (
        "grothendieck-suite",
        "inf1 <= BM(16) + 1e-9 and BM <= 1.783 inf1 + 1e-9 on 100 sign matrices",
        60.0,
    ),
];

fn line(k: usize, statement: &str, r: &SuiteReport, ok: bool) -> String {
    format!(
        "criterion {:>2} {}: {} ({}/{} checks, min margin {:.3e}, {:.2}s) {}",
        k,
        if ok { "PASS" } else { "FAIL" },
        r.name,
        r.checks.iter().filter(|c| c.passed).count(),
        r.checks.len(),
        r.min_margin(),
        r.seconds,
        statement
    )
}

fn main() {
    let mut failed = Vec::new();
    for (k, (suite, statement, budget)) in CRITERIA.iter().enumerate() {
        let r = run_suite(suite).expect("suite runs");
        let ok = r.passed() && r.seconds < *budget;
        println!("{}", line(k + 1, statement, &r, ok));
        for c in r.failures() {
            println!("    failed: {} ({})", c.label, c.detail);
        }
        if suite == &"planted-suite" {
            for c in &r.checks {
                if c.label.contains("cut") {
                    println!("    {}: {}", c.label, c.detail);
                }
            }
        }
        if r.seconds >= *budget {
            println!("    over the {budget}s budget");
        }
        if !ok {
            failed.push(k + 1);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all {} criteria passed", CRITERIA.len());
    } else {
        println!("acceptance: failed criteria {failed:?}");
        std::process::exit(1);
    }
}
