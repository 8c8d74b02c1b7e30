use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use cayley_norms::cayley::{center_regular, find_transitive_automorphisms, lift_to_group, MAX_AUTOMORPHISM_ORDER};
use cayley_norms::constructions::{
    cayley_graph, complete_graph, cycle_graph, paley_graph, petersen_graph, planted_eigenvalue_graph, random_regular,
    RegularGraph,
};
use cayley_norms::fourier::{
    abelian_character_norm, build_irrep_table, fourier_transform, parse_irreps, spectral_via_irreps, svd_witness,
    CharacterNorm, IrrepTable,
};
use cayley_norms::group::{build_standard_group, function_norm, ComplexGroupFunction, GroupFamily, MAX_TABLE_ORDER};
use cayley_norms::io::{
    parse_group_spec, parse_matrix_input, to_pretty_json, CayleySource, EdgeListDocument, EigenCertificate,
    MatrixDocument,
};
use cayley_norms::matrix::{ComplexMatrix, DenseMatrix};
use cayley_norms::norms::group::{group_spectral, group_spectral_complex};
use cayley_norms::norms::verify::check_regular;
use cayley_norms::norms::{
    compute_report, eigenvalue_bound_check, mixing_lemma_check, spectral_norm, symmetric_spectrum, BmConfig,
    EigenvalueBoundCheck, MixingCheck, NormReport, ReportOptions, DEFAULT_EXACT_LIMIT,
};
use cayley_norms::suites::{run_suites, SuiteReport};
use cayley_norms::Error;

const GENERATOR: &str = concat!("cayley-norms ", env!("CARGO_PKG_VERSION"));

/// Relative tolerance for the spectral identities reported by `lift` and `fourier`.
const IDENTITY_TOLERANCE: f64 = 1e-8;

#[derive(Parser)]
#[command(
    name = "cayley-norms",
    version,
    about = "Norms of Cayley graphs and vertex-transitive matrices"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Seed for random constructions and the Burer-Monteiro restarts.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the output document here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Burer-Monteiro rank (default grows with the matrix size).
    #[arg(long, global = true)]
    rank: Option<usize>,
    #[arg(long, global = true, default_value_t = 8)]
    restarts: usize,
    /// Largest side for exact cut and infinity-to-one enumeration.
    #[arg(long, global = true, default_value_t = DEFAULT_EXACT_LIMIT)]
    exact_cut_limit: usize,
    /// Suppress the summary on stderr.
    #[arg(long, global = true)]
    quiet: bool,
    /// Record wall-clock time per stage (reports are then no longer reproducible byte for byte).
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Build a graph or group table.
    Construct {
        #[command(subcommand)]
        family: Family,
        #[arg(long, value_enum, global = true, default_value_t = Format::Matrix)]
        format: Format,
    },
    /// Compute every norm of a matrix or edge-list file and run the applicable checks.
    Analyze {
        input: PathBuf,
        /// Subtract (d/n)J from a d-regular input first.
        #[arg(long)]
        center: bool,
    },
    /// Lift a vertex-transitive matrix to a function on a transitive automorphism group.
    Lift { input: PathBuf },
    /// Fourier coefficients and spectral norm of a function on a group.
    Fourier {
        /// Group such as Z12, D4, S3 or Z2xZ2.
        #[arg(long)]
        group: String,
        /// Values per element index; `re` or `re:im`.
        #[arg(long, value_delimiter = ',', conflicts_with = "set", required_unless_present = "set")]
        values: Option<Vec<String>>,
        /// Indicator of these element indices.
        #[arg(long, value_delimiter = ',')]
        set: Option<Vec<usize>>,
        /// Irreducible representations for groups without a built-in table.
        #[arg(long)]
        irreps: Option<PathBuf>,
    },
    /// Run a named verification suite, or `all`.
    Verify { suite: String },
}

#[derive(Subcommand)]
enum Family {
    /// Paley graph on Z_p, p = 1 mod 4 prime.
    Paley {
        p: usize,
    },
    Cycle {
        n: usize,
    },
    Complete {
        n: usize,
    },
    Petersen,
    /// d-regular graph on n vertices with eigenvalue -d/2 on 1_U - 1_V.
    Planted {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        n: usize,
    },
    /// Uniform-ish random d-regular graph from the configuration model.
    RandomRegular {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
    },
    /// Cayley graph Cay(G, S) for a symmetric set S of element indices.
    Cayley {
        #[arg(long)]
        group: String,
        #[arg(long, value_delimiter = ',')]
        set: Vec<usize>,
    },
    /// Multiplication table of a group.
    Group {
        spec: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Matrix,
    Edges,
}

enum Failure {
    /// Bad input, parameters or files: exit status 2.
    Usage(String),
    /// A check did not hold: exit status 1.
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    let g = &cli.global;
    match &cli.command {
        Command::Construct { family, format } => construct(g, family, *format),
        Command::Analyze { input, center } => analyze(g, input, *center),
        Command::Lift { input } => lift(g, input),
        Command::Fourier {
            group,
            values,
            set,
            irreps,
        } => fourier(g, group, values.as_deref(), set.as_deref(), irreps.as_deref()),
        Command::Verify { suite } => verify(g, suite),
    }
}

fn emit(g: &Global, text: &str) -> Outcome {
    match &g.out {
        Some(path) => {
            fs::write(path, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn note(g: &Global, msg: impl AsRef<str>) {
    if !g.quiet {
        eprintln!("{}", msg.as_ref());
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn bm_config(g: &Global) -> BmConfig {
    BmConfig {
        rank: g.rank,
        restarts: g.restarts,
        seed: g.seed,
        ..BmConfig::default()
    }
}

#[derive(Serialize)]
struct GroupDocument {
    label: String,
    family: GroupFamily,
    order: usize,
    /// `mul[a][b]` is the index of `ab`.
    mul: Vec<Vec<u32>>,
    inv: Vec<usize>,
    generator: &'static str,
}

fn construct(g: &Global, family: &Family, format: Format) -> Outcome {
    if let Family::Group { spec } = family {
        let fam = parse_group_spec(spec)?;
        let table = build_standard_group(&fam)?;
        let doc = GroupDocument {
            label: fam.label(),
            order: table.order(),
            mul: table.elements().map(|a| table.row(a).to_vec()).collect(),
            inv: table.elements().map(|a| table.inv(a)).collect(),
            family: fam,
            generator: GENERATOR,
        };
        note(g, format!("group {} of order {}", doc.label, doc.order));
        return emit(g, &to_pretty_json(&doc));
    }

    let mut cayley = None;
    let mut certificate = None;
    let graph: RegularGraph = match family {
        Family::Paley { p } => {
            let graph = paley_graph(*p)?;
            cayley = Some((GroupFamily::Cyclic(*p), graph.matrix.row(0).to_vec()));
            graph
        }
        Family::Cycle { n } => {
            let graph = cycle_graph(*n)?;
            cayley = Some((GroupFamily::Cyclic(*n), graph.matrix.row(0).to_vec()));
            graph
        }
        Family::Complete { n } => {
            let graph = complete_graph(*n)?;
            cayley = Some((GroupFamily::Cyclic(*n), graph.matrix.row(0).to_vec()));
            graph
        }
        Family::Petersen => petersen_graph(),
        Family::Planted { d, n } => {
            let p = planted_eigenvalue_graph(*d, *n, g.seed)?;
            certificate = Some(EigenCertificate {
                value: p.eigenvalue(),
                vector: p.eigenvector(),
            });
            p.graph
        }
        Family::RandomRegular { n, d } => random_regular(*n, *d, g.seed)?,
        Family::Cayley { group, set } => {
            let fam = parse_group_spec(group)?;
            let table = Arc::new(build_standard_group(&fam)?);
            let graph = cayley_graph(table.clone(), set)?;
            // Row of the identity holds f(g^{-1}), which equals f(g) for a symmetric set.
            let values = table.elements().map(|x| graph.matrix.get(0, table.inv(x))).collect();
            cayley = Some((fam, values));
            graph
        }
        Family::Group { .. } => unreachable!(),
    };
    note(
        g,
        format!(
            "{}: {} vertices, degree {}",
            graph.provenance.family, graph.n, graph.degree
        ),
    );
    let text = match format {
        Format::Edges => to_pretty_json(&EdgeListDocument {
            n: graph.n,
            edges: graph.edges(),
        }),
        Format::Matrix => {
            let mut doc = MatrixDocument::new(graph.matrix);
            doc.provenance = Some(graph.provenance);
            doc.generator = Some(GENERATOR.to_string());
            doc.cayley = cayley.map(|(group, values)| CayleySource { group, values });
            doc.eigen_certificate = certificate;
            doc.validate()?;
            to_pretty_json(&doc)
        }
    };
    emit(g, &text)
}

/// Extra checks for a d-regular simple graph.
#[derive(Serialize)]
struct GraphChecks {
    degree: f64,
    lambda: f64,
    mixing: MixingCheck,
    #[serde(skip_serializing_if = "Option::is_none")]
    eigenvalue_bound: Option<EigenvalueBoundCheck>,
}

#[derive(Serialize)]
struct AnalyzeDocument {
    centered: bool,
    #[serde(flatten)]
    report: NormReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    graph: Option<GraphChecks>,
    generator: &'static str,
}

fn is_simple_graph(a: &DenseMatrix) -> bool {
    a.is_square()
        && a.is_symmetric(0.0)
        && (0..a.rows()).all(|i| a.get(i, i) == 0.0)
        && a.data().iter().all(|&x| x == 0.0 || x == 1.0)
}

fn analyze(g: &Global, input: &Path, center: bool) -> Outcome {
    let doc = parse_matrix_input(&read(input)?)?;
    let a = doc.matrix;
    let degree = a.row_sums().first().copied().unwrap_or(0.0);
    let regular = a.is_square() && check_regular(&a, degree).is_ok();
    if center && !regular {
        return Err(Failure::Usage(
            "--center needs a square matrix with constant row sums".into(),
        ));
    }
    let opts = ReportOptions {
        bm: bm_config(g),
        exact_limit: g.exact_cut_limit,
        transitivity: true,
        timings: g.timings,
    };
    let target = if center { center_regular(&a, degree) } else { a.clone() };
    let report = compute_report(&target, &opts)?;

    let graph = if regular && is_simple_graph(&a) && degree > 0.0 {
        let lambda = symmetric_spectrum(&a)?.lambda2().abs();
        Some(GraphChecks {
            degree,
            lambda,
            mixing: mixing_lemma_check(&a, degree, lambda)?,
            eigenvalue_bound: eigenvalue_bound_check(&a, degree, g.exact_cut_limit).ok(),
        })
    } else {
        None
    };

    let mut failed: Vec<String> = report.failures().map(|c| c.name.clone()).collect();
    if let Some(gc) = &graph {
        if !gc.mixing.holds {
            failed.push("mixing inequality".into());
        }
        if gc.eigenvalue_bound.as_ref().is_some_and(|e| !e.holds) {
            failed.push("lambda <= 8 eps d".into());
        }
    }
    note(
        g,
        format!(
            "{}x{}: spectral {:.6}, cut {}, inf1 {}, grothendieck [{:.6}, {:.6}], transitive {}",
            report.rows,
            report.cols,
            report.spectral,
            report.cut.map_or("skipped".into(), |v| format!("{v:.6}")),
            report.infty_one.map_or("skipped".into(), |v| format!("{v:.6}")),
            report.groth_lower,
            report.groth_upper,
            report.vertex_transitive.map_or("unknown".into(), |t| t.to_string()),
        ),
    );
    let out = AnalyzeDocument {
        centered: center,
        report,
        graph,
        generator: GENERATOR,
    };
    emit(g, &to_pretty_json(&out))?;
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Verification(failed.join(", ")))
    }
}

#[derive(Serialize)]
struct LiftDocument {
    order: usize,
    degree: usize,
    /// Generators as image arrays, `g(s)`.
    generators: Vec<Vec<usize>>,
    /// `f(g) = a[g(0)][0]`, indexed like the elements of the closure.
    elements: Vec<Vec<usize>>,
    values: Vec<f64>,
    /// `||A|| / n`.
    matrix_spectral_over_n: f64,
    /// `||f|| = ||A(f)|| / |G|`.
    group_spectral: f64,
    agrees: bool,
    generator: &'static str,
}

fn lift(g: &Global, input: &Path) -> Outcome {
    let a = parse_matrix_input(&read(input)?)?.matrix;
    if !a.is_square() || a.rows() > MAX_AUTOMORPHISM_ORDER {
        return Err(Failure::Usage(format!(
            "lift needs a square matrix of order at most {MAX_AUTOMORPHISM_ORDER}"
        )));
    }
    let Some(cert) = find_transitive_automorphisms(&a)? else {
        return Err(Failure::Verification("matrix is not vertex-transitive".into()));
    };
    let group = cert.subgroup(MAX_TABLE_ORDER)?;
    let f = lift_to_group(&a, &group)?;
    let n = a.rows();
    let over_n = spectral_norm(&a) / n as f64;
    let gs = group_spectral(&f);
    let agrees = (over_n - gs).abs() <= IDENTITY_TOLERANCE * over_n.max(1.0);
    note(
        g,
        format!(
            "transitive group of order {} on {n} vertices; ||A||/n = {over_n:.10}, ||f|| = {gs:.10}",
            group.order()
        ),
    );
    let doc = LiftDocument {
        order: group.order(),
        degree: n,
        generators: group.generators().iter().map(|p| p.images()).collect(),
        elements: group.elements().iter().map(|p| p.images()).collect(),
        values: f.values().to_vec(),
        matrix_spectral_over_n: over_n,
        group_spectral: gs,
        agrees,
        generator: GENERATOR,
    };
    emit(g, &to_pretty_json(&doc))?;
    if agrees {
        Ok(())
    } else {
        Err(Failure::Verification(format!("||A||/n = {over_n} but ||f|| = {gs}")))
    }
}

#[derive(Serialize)]
struct FourierDocument {
    group: String,
    dims: Vec<usize>,
    values: Vec<[f64; 2]>,
    /// Per irrep, row-major `[re, im]` entries of `E_g f(g) rho(g)`.
    coefficients: Vec<Vec<[f64; 2]>>,
    l2_squared: f64,
    plancherel_sum: f64,
    spectral_via_irreps: f64,
    spectral_dense: f64,
    witness_irrep: usize,
    witness_objective: [f64; 2],
    #[serde(skip_serializing_if = "Option::is_none")]
    character_norm: Option<CharacterNorm>,
    generator: &'static str,
}

fn parse_value(s: &str) -> Result<num_complex::Complex64, Failure> {
    let bad = || Failure::Usage(format!("cannot parse value '{s}' (expected re or re:im)"));
    let (re, im) = s.split_once(':').unwrap_or((s, "0"));
    Ok(num_complex::Complex64::new(
        re.trim().parse().map_err(|_| bad())?,
        im.trim().parse().map_err(|_| bad())?,
    ))
}

fn pairs(m: &ComplexMatrix) -> Vec<[f64; 2]> {
    m.data().iter().map(|z| [z.re, z.im]).collect()
}

fn fourier(
    g: &Global,
    group: &str,
    values: Option<&[String]>,
    set: Option<&[usize]>,
    irreps: Option<&Path>,
) -> Outcome {
    let fam = parse_group_spec(group)?;
    let table = Arc::new(build_standard_group(&fam)?);
    let n = table.order();
    let f = match (values, set) {
        (Some(v), _) => {
            let vals = v.iter().map(|s| parse_value(s)).collect::<Result<Vec<_>, _>>()?;
            ComplexGroupFunction::new(table.clone(), vals)?
        }
        (None, Some(s)) => {
            if let Some(&x) = s.iter().find(|&&x| x >= n) {
                return Err(Failure::Usage(format!(
                    "element {x} is outside {} of order {n}",
                    fam.label()
                )));
            }
            ComplexGroupFunction::from_fn(table.clone(), |x| (s.contains(&x) as u8 as f64).into())
        }
        (None, None) => return Err(Failure::Usage("give --values or --set".into())),
    };
    let irreps: IrrepTable = match irreps {
        Some(path) => parse_irreps(&read(path)?, table.clone())?,
        None => build_irrep_table(table.clone())?,
    };
    let coeffs = fourier_transform(&f, &irreps)?;
    let via = spectral_via_irreps(&f, &irreps)?;
    let dense = group_spectral_complex(&f);
    let w = svd_witness(&f, &irreps)?;
    let character_norm = if table.is_abelian() {
        Some(abelian_character_norm(&f, &irreps)?)
    } else {
        None
    };
    let doc = FourierDocument {
        group: fam.label(),
        dims: irreps.dims(),
        values: f.values().iter().map(|z| [z.re, z.im]).collect(),
        coefficients: coeffs.blocks.iter().map(pairs).collect(),
        l2_squared: function_norm(&f, 2.0).powi(2),
        plancherel_sum: coeffs.plancherel_sum(),
        spectral_via_irreps: via,
        spectral_dense: dense,
        witness_irrep: w.irrep,
        witness_objective: [w.objective.re, w.objective.im],
        character_norm,
        generator: GENERATOR,
    };
    let scale = dense.max(f64::MIN_POSITIVE);
    let mut failed = Vec::new();
    if (via - dense).abs() > IDENTITY_TOLERANCE * scale {
        failed.push(format!("irrep spectral {via} vs dense {dense}"));
    }
    if (w.objective.re - dense).abs() + w.objective.im.abs() > IDENTITY_TOLERANCE * scale {
        failed.push(format!("witness objective {} vs {dense}", w.objective));
    }
    let l2 = doc.l2_squared;
    if (doc.plancherel_sum - l2).abs() > 1e-10 * l2.max(f64::MIN_POSITIVE) {
        failed.push(format!("Plancherel {} vs {l2}", doc.plancherel_sum));
    }
    note(
        g,
        format!(
            "{}: dims {:?}, ||f|| = {dense:.10} (irreps {via:.10})",
            doc.group, doc.dims
        ),
    );
    emit(g, &to_pretty_json(&doc))?;
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Verification(failed.join("; ")))
    }
}

fn verify(g: &Global, suite: &str) -> Outcome {
    let reports: Vec<SuiteReport> = run_suites(suite)?;
    for r in &reports {
        if !g.quiet {
            println!("{}", r.summary());
        }
        for c in r.failures() {
            note(g, format!("  failed: {} ({})", c.label, c.detail));
        }
    }
    if g.out.is_some() {
        emit(g, &to_pretty_json(&reports))?;
    }
    let failed: Vec<&str> = reports
        .iter()
        .filter(|r| !r.passed())
        .map(|r| r.name.as_str())
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Verification(failed.join(", ")))
    }
}
