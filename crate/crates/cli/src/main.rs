use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use isolab::catalog::{compare_printed_fkm, Affine, fkm_table, inhomogeneity_predicate, rank2_self_check, rank2_table, su3_orbit_spectrum};
use isolab::clifford::{build_generators, build_system, validate_system};
use isolab::cm_verifier::verify_cm;
use isolab::division_algebras::AlgebraTag;
use isolab::families::{cartan_cubic, fkm, linear_family, nomizu_family, product_family, IsoparametricFamily};
use isolab::nurowski::{catalog_entry_for_k, check_conditions, extract_upsilon};
use isolab::spectral::{
    focal_check, max_spectrum_deviation, munzner_check, parallel_check, sample_level, spectra_over_seeds, LevelGeometry,
    SamplingOptions, DEFAULT_CLUSTER_TOL,
};
use isolab::Error;

const SCHEMA_VERSION: u32 = 1;
const DEFAULT_SEED: u64 = 20_240_917;

const CITE_GRAD: &str = "Cartan-Muenzner: |grad F|^2 = p^2 r^(2p-2)";
const CITE_LAPLACE: &str = "Cartan-Muenzner: Laplacian F = (p^2/2)(m2 - m1) r^(p-2)";
const CITE_EULER: &str = "Euler: sum x_i dF/dx_i = p F for F homogeneous of degree p";
const CITE_MUNZNER: &str = "Muenzner: p in {1,2,3,4,6}, principal angles theta_k = theta_1 + (k-1) pi/p, m_k = m_(k+2)";
const CITE_PARALLEL: &str = "parallel surface at distance s has curvatures cot(theta_k - s)";
const CITE_FOCAL: &str = "focal map at angle theta_k drops rank by m_k";
const CITE_UPSILON: &str = "Upsilon: totally symmetric, trace-free, sum_i Y_(i(jk)) Y_(lm)i = g_(jk) g_(lm)";
const CITE_CLIFFORD: &str = "Clifford system: P_i symmetric, P_i P_j + P_j P_i = 2 delta_ij Id";
const CITE_INHOM: &str = "FKM inhomogeneity: 3 <= 3 m1 <= m2 + 9 (for m = 4 also P_0...P_4 != +-Id)";

#[derive(Parser, Debug)]
#[command(name = "isolab", version, about = "Construct and verify isoparametric hypersurfaces in spheres")]
struct Cli {
    /// Output format. Defaults to json, except `family build` (poly-text) and `clifford build` (csv).
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    PolyText,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Isoparametric polynomial families.
    #[command(subcommand)]
    Family(FamilyCmd),
    /// Exact identity checks.
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Principal curvature spectrum on a sampled level set.
    Spectrum(SpectrumArgs),
    /// Parallel-surface curvature shift.
    Parallel(ParallelArgs),
    /// Rank collapse of the focal maps.
    Focal(FocalArgs),
    /// The symmetric trace-free tensor Upsilon.
    #[command(subcommand)]
    Nurowski(NurowskiCmd),
    /// Clifford generators and systems.
    #[command(subcommand)]
    Clifford(CliffordCmd),
    /// Tables and predicates.
    #[command(subcommand)]
    Catalog(CatalogCmd),
}

#[derive(Subcommand, Debug)]
enum FamilyCmd {
    Build(FamilyArgs),
}

#[derive(Subcommand, Debug)]
enum VerifyCmd {
    Cm(FamilyArgs),
}

#[derive(Subcommand, Debug)]
enum NurowskiCmd {
    Check {
        #[arg(long, value_parser = ["5", "8", "14", "26"])]
        dim: String,
    },
}

#[derive(Subcommand, Debug)]
enum CliffordCmd {
    Build {
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 1)]
        k: usize,
    },
}

#[derive(Subcommand, Debug)]
enum CatalogCmd {
    /// Rank-2 symmetric spaces and their multiplicities.
    Rank2,
    /// FKM multiplicity pairs, compared with the transcribed table.
    FkmTable {
        #[arg(long, default_value_t = 4)]
        max_k: i64,
        #[arg(long, default_value_t = 11)]
        max_m: i64,
    },
    /// Sufficient condition for an FKM family to be inhomogeneous.
    Inhom {
        #[arg(long)]
        m1: i64,
        #[arg(long)]
        m2: i64,
        /// Number of Clifford matrices minus one; defaults to m1.
        #[arg(long)]
        m: Option<i64>,
        /// For m = 4: the product P_0...P_4 is not +-Id.
        #[arg(long)]
        product_not_identity: Option<bool>,
    },
    /// Shape operator of the principal SU(3)/SO(3) orbit.
    Su3Orbit,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FamilyKind {
    Linear,
    Product,
    CartanCubic,
    Fkm,
    Nomizu,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Algebra {
    R,
    C,
    H,
    O,
}

#[derive(Args, Debug)]
struct FamilyArgs {
    #[arg(long, value_enum)]
    family: FamilyKind,
    /// Division algebra for the Cartan cubic.
    #[arg(long, value_enum, ignore_case = true)]
    algebra: Option<Algebra>,
    /// Sphere dimension parameter (linear, product, nomizu).
    #[arg(long)]
    n: Option<usize>,
    /// Block count (product split, or FKM copies of the irreducible module).
    #[arg(long)]
    k: Option<usize>,
    /// Clifford parameter for FKM.
    #[arg(long)]
    m: Option<usize>,
    /// Also write the polynomial in text form to this path.
    #[arg(long)]
    dump_poly: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SampleArgs {
    #[command(flatten)]
    family: FamilyArgs,
    /// Level value F = t.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    t: f64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Largest |t| accepted by the sampler.
    #[arg(long, default_value_t = 0.95)]
    max_abs_t: f64,
    /// Relative gap that separates eigenvalue clusters.
    #[arg(long, default_value_t = DEFAULT_CLUSTER_TOL)]
    cluster_tol: f64,
}

#[derive(Args, Debug)]
struct SpectrumArgs {
    #[command(flatten)]
    sample: SampleArgs,
    /// Number of sample points, seeded seed, seed+1, ...
    #[arg(long, default_value_t = 1)]
    seeds: u64,
    #[arg(long, default_value_t = 1e-6)]
    spacing_tol: f64,
}

#[derive(Args, Debug)]
struct ParallelArgs {
    #[command(flatten)]
    sample: SampleArgs,
    /// Shift in radians; repeatable. Defaults to five shifts inside the first focal interval.
    #[arg(long, allow_negative_numbers = true)]
    shift: Vec<f64>,
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
}

#[derive(Args, Debug)]
struct FocalArgs {
    #[command(flatten)]
    sample: SampleArgs,
    /// Principal index (0-based); all indices when omitted.
    #[arg(long)]
    index: Option<usize>,
}

struct Report {
    body: String,
    passed: bool,
}

fn usage(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

fn build_family(a: &FamilyArgs) -> isolab::Result<IsoparametricFamily> {
    let need = |v: Option<usize>, name: &str| v.ok_or_else(|| usage(format!("--{name} is required for this family")));
    let fam = match a.family {
        FamilyKind::Linear => linear_family(need(a.n, "n")?)?,
        FamilyKind::Product => product_family(need(a.n, "n")?, need(a.k, "k")?)?,
        FamilyKind::CartanCubic => {
            let tag = match a.algebra.ok_or_else(|| usage("--algebra is required for cartan-cubic"))? {
                Algebra::R => AlgebraTag::R,
                Algebra::C => AlgebraTag::C,
                Algebra::H => AlgebraTag::H,
                Algebra::O => AlgebraTag::O,
            };
            cartan_cubic(tag)?
        }
        FamilyKind::Fkm => fkm(need(a.m, "m")?, need(a.k, "k")?)?,
        FamilyKind::Nomizu => nomizu_family(need(a.n, "n")?)?,
    };
    if let Some(path) = &a.dump_poly {
        std::fs::write(path, fam.poly.to_text()).map_err(|e| usage(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(fam)
}

fn envelope(command: &str, citations: &[&str], passed: bool, report: Value) -> Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "citations": citations,
        "passed": passed,
        "report": report,
    })
}

fn to_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

fn value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn options(s: &SampleArgs) -> SamplingOptions {
    SamplingOptions {
        max_abs_t: s.max_abs_t,
        ..SamplingOptions::default()
    }
}

fn json_only(format: Option<Format>, command: &str) -> isolab::Result<()> {
    match format {
        None | Some(Format::Json) => Ok(()),
        Some(f) => Err(usage(format!("{command} supports only --format json, got {f:?}"))),
    }
}

fn residual_preview(text: &str) -> Vec<String> {
    text.lines().take(20).map(str::to_string).collect()
}

fn run(cli: &Cli) -> isolab::Result<Report> {
    match &cli.command {
        Command::Family(FamilyCmd::Build(a)) => {
            let fam = build_family(a)?;
            let meta = value(&fam.metadata());
            let body = match cli.format.unwrap_or(Format::PolyText) {
                Format::PolyText => format!("# {}\n{}", serde_json::to_string(&meta).expect("metadata"), fam.poly.to_text()),
                Format::Json => to_json(&json!({
                    "schema_version": SCHEMA_VERSION,
                    "metadata": meta,
                    "num_vars": fam.poly.num_vars(),
                    "poly": fam.poly.to_text(),
                })),
                Format::Csv => return Err(usage("family build supports poly-text or json")),
            };
            Ok(Report { body, passed: true })
        }
        Command::Verify(VerifyCmd::Cm(a)) => {
            json_only(cli.format, "verify cm")?;
            let fam = build_family(a)?;
            let r = verify_cm(&fam)?;
            let mut report = value(&r);
            report["family"] = value(&fam.metadata());
            if !r.grad_identity_ok {
                report["grad_residual_preview"] = json!(residual_preview(&r.grad_residual.to_text()));
            }
            if !r.laplace_identity_ok {
                report["laplace_residual_preview"] = json!(residual_preview(&r.laplace_residual.to_text()));
            }
            let passed = r.passed();
            Ok(Report {
                body: to_json(&envelope("verify cm", &[CITE_EULER, CITE_GRAD, CITE_LAPLACE], passed, report)),
                passed,
            })
        }
        Command::Spectrum(a) => {
            json_only(cli.format, "spectrum")?;
            let s = &a.sample;
            let fam = build_family(&s.family)?;
            let geom = LevelGeometry::new(&fam)?;
            let seeds: Vec<u64> = (0..a.seeds.max(1)).map(|i| s.seed.wrapping_add(i)).collect();
            let runs = spectra_over_seeds(&geom, s.t, &seeds, &options(s), s.cluster_tol)?;
            let mut passed = true;
            let samples: Vec<Value> = runs
                .iter()
                .map(|(pt, spectrum)| {
                    let m = munzner_check(spectrum, a.spacing_tol);
                    passed &= m.passed;
                    json!({
                        "seed": pt.seed,
                        "eigenvalues": spectrum.eigenvalues,
                        "clusters": spectrum.clusters,
                        "p": spectrum.p,
                        "thetas": spectrum.thetas,
                        "munzner": m,
                    })
                })
                .collect();
            let spectra: Vec<_> = runs.into_iter().map(|(_, s)| s).collect();
            let report = json!({
                "family": value(&fam.metadata()),
                "t": s.t,
                "convention": spectra[0].convention,
                "max_seed_deviation": max_spectrum_deviation(&spectra),
                "samples": samples,
            });
            Ok(Report {
                body: to_json(&envelope("spectrum", &[CITE_MUNZNER], passed, report)),
                passed,
            })
        }
        Command::Parallel(a) => {
            json_only(cli.format, "parallel")?;
            let s = &a.sample;
            let fam = build_family(&s.family)?;
            let geom = LevelGeometry::new(&fam)?;
            let pt = sample_level(&geom, s.t, s.seed, &options(s))?;
            let half = std::f64::consts::PI / (2.0 * fam.p as f64);
            let shifts = if a.shift.is_empty() {
                [-0.7, -0.35, 0.15, 0.4, 0.75].iter().map(|f| f * half).collect()
            } else {
                a.shift.clone()
            };
            let reports = shifts
                .iter()
                .map(|&sh| parallel_check(&geom, &pt, sh, a.tol))
                .collect::<isolab::Result<Vec<_>>>()?;
            let passed = reports.iter().all(|r| r.passed);
            let report = json!({
                "family": value(&fam.metadata()),
                "t": s.t,
                "seed": s.seed,
                "shifts": reports,
            });
            Ok(Report {
                body: to_json(&envelope("parallel", &[CITE_PARALLEL], passed, report)),
                passed,
            })
        }
        Command::Focal(a) => {
            json_only(cli.format, "focal")?;
            let s = &a.sample;
            let fam = build_family(&s.family)?;
            let geom = LevelGeometry::new(&fam)?;
            let pt = sample_level(&geom, s.t, s.seed, &options(s))?;
            let indices: Vec<usize> = match a.index {
                Some(k) => vec![k],
                None => (0..fam.p as usize).collect(),
            };
            let reports = indices
                .iter()
                .map(|&k| focal_check(&geom, &pt, k))
                .collect::<isolab::Result<Vec<_>>>()?;
            let passed = reports.iter().all(|r| r.passed);
            let report = json!({
                "family": value(&fam.metadata()),
                "t": s.t,
                "seed": s.seed,
                "focal": reports,
            });
            Ok(Report {
                body: to_json(&envelope("focal", &[CITE_FOCAL], passed, report)),
                passed,
            })
        }
        Command::Nurowski(NurowskiCmd::Check { dim }) => {
            json_only(cli.format, "nurowski check")?;
            let tag = match dim.as_str() {
                "5" => AlgebraTag::R,
                "8" => AlgebraTag::C,
                "14" => AlgebraTag::H,
                "26" => AlgebraTag::O,
                other => return Err(usage(format!("no Upsilon tensor in dimension {other}"))),
            };
            let u = extract_upsilon(&cartan_cubic(tag)?.poly)?;
            let r = check_conditions(&u);
            let passed = r.passed();
            let mut report = value(&r);
            report["model"] = value(&catalog_entry_for_k(tag.dim()));
            Ok(Report {
                body: to_json(&envelope("nurowski check", &[CITE_UPSILON], passed, report)),
                passed,
            })
        }
        Command::Clifford(CliffordCmd::Build { m, k }) => {
            let g = build_generators(*m, *k)?;
            let sys = build_system(&g)?;
            let r = validate_system(&sys);
            let passed = r.passed;
            let body = match cli.format.unwrap_or(Format::Csv) {
                Format::Csv => {
                    let mut out = String::new();
                    for (i, p) in sys.matrices().iter().enumerate() {
                        out.push_str(&format!("# P{i} ({0}x{0})\n", p.size()));
                        out.push_str(&p.to_csv());
                    }
                    out
                }
                Format::Json => {
                    let mats: Vec<Vec<Vec<i64>>> = sys
                        .matrices()
                        .iter()
                        .map(|p| p.as_slice().chunks(p.size()).map(<[i64]>::to_vec).collect())
                        .collect();
                    let report = json!({ "validation": r, "matrices": mats });
                    to_json(&envelope("clifford build", &[CITE_CLIFFORD], passed, report))
                }
                Format::PolyText => return Err(usage("clifford build supports csv or json")),
            };
            Ok(Report { body, passed })
        }
        Command::Catalog(c) => run_catalog(c, cli.format),
    }
}

fn affine(v: &Affine) -> String {
    match (v.a, v.b) {
        (0, b) => b.to_string(),
        (1, 0) => "n".into(),
        (a, 0) => format!("{a}n"),
        (1, b) if b < 0 => format!("n{b}"),
        (1, b) => format!("n+{b}"),
        (a, b) if b < 0 => format!("{a}n{b}"),
        (a, b) => format!("{a}n+{b}"),
    }
}

fn run_catalog(c: &CatalogCmd, format: Option<Format>) -> isolab::Result<Report> {
    let format = format.unwrap_or(Format::Json);
    if format == Format::PolyText {
        return Err(usage("catalog supports json or csv"));
    }
    match c {
        CatalogCmd::Rank2 => {
            let check = rank2_self_check();
            let table = rank2_table();
            let body = if format == Format::Csv {
                let mut out = String::from("g,h,n_min,dim_m,p,m1,m2,printed\n");
                for r in &table {
                    out.push_str(&format!(
                        "{},{},{},{},{},{},{},\"{}\"\n",
                        r.g,
                        r.h,
                        r.n_min.map(|n| n.to_string()).unwrap_or_default(),
                        affine(&r.dim_m),
                        r.p,
                        affine(&r.m1),
                        affine(&r.m2),
                        r.printed
                    ));
                }
                out
            } else {
                to_json(&envelope(
                    "catalog rank2",
                    &["dim M = p (m1 + m2) / 2"],
                    check.passed,
                    json!({ "table": table, "self_check": check }),
                ))
            };
            Ok(Report { body, passed: check.passed })
        }
        CatalogCmd::FkmTable { max_k, max_m } => {
            let table = fkm_table(*max_k, *max_m)?;
            let cmp = compare_printed_fkm()?;
            let body = if format == Format::Csv {
                let mut out = String::from("k,m,delta,m1,m2\n");
                for e in &table {
                    let pair = e.pair.map(|(a, b)| format!("{a},{b}")).unwrap_or_else(|| ",".into());
                    out.push_str(&format!("{},{},{},{}\n", e.k, e.m, e.delta_m, pair));
                }
                out
            } else {
                to_json(&envelope(
                    "catalog fkm-table",
                    &["FKM multiplicities (m1, m2) = (m, k delta(m) - m - 1)"],
                    cmp.passed,
                    json!({ "table": table, "printed_comparison": cmp }),
                ))
            };
            Ok(Report { body, passed: cmp.passed })
        }
        CatalogCmd::Inhom { m1, m2, m, product_not_identity } => {
            let r = inhomogeneity_predicate(*m1, *m2, m.unwrap_or(*m1), *product_not_identity)?;
            let verdict = value(&r.verdict);
            let body = if format == Format::Csv {
                format!(
                    "m1,m2,m,inequality_holds,verdict\n{},{},{},{},{}\n",
                    r.m1,
                    r.m2,
                    r.m,
                    r.inequality_holds,
                    verdict.as_str().unwrap_or_default()
                )
            } else {
                to_json(&envelope("catalog inhom", &[CITE_INHOM], true, value(&r)))
            };
            Ok(Report { body, passed: true })
        }
        CatalogCmd::Su3Orbit => {
            let r = su3_orbit_spectrum()?;
            let passed = r.symmetric_about_zero && r.contains_zero;
            if format == Format::Csv {
                return Err(usage("catalog su3-orbit supports json only"));
            }
            Ok(Report {
                body: to_json(&envelope("catalog su3-orbit", &[CITE_MUNZNER], passed, value(&r))),
                passed,
            })
        }
    }
}

fn configure_threads() -> Result<(), String> {
    if let Ok(v) = std::env::var("ISOLAB_THREADS") {
        let n: usize = v.parse().map_err(|_| format!("ISOLAB_THREADS must be a positive integer, got {v:?}"))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| e.to_string())?;
    }
    Ok(())
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Domain(_) | Error::Precondition(_) | Error::Parse(_) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    let report = match run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code_for(&e));
        }
    };
    let written = match &cli.output {
        Some(path) => std::fs::write(path, &report.body).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => std::io::stdout()
            .lock()
            .write_all(report.body.as_bytes())
            .map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    if report.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
