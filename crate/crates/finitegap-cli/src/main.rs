//! Command-line driver: construct wave functions on singular rational
//! spectral curves, tabulate the induced potentials over a plane grid, search
//! for symmetry certificates, and run dimension counts.

mod document;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use document::{parse_rr_divisor, SpecDocument};
use output::{csv_block, json_document, sha256_hex, FieldTable, RunMetadata, VERSION};

use finitegap::{
    find_certificate, rr_report, solve_dirac, solve_oned, solve_schrodinger, validate,
    CertificateKind, CertificateOutcome, CurveSpec, FgError, Grid, InstanceSampler, OneDFamily,
    PoleDivisor, Tolerances,
};

#[derive(Parser)]
#[command(
    name = "finitegap",
    version,
    about = "Finite-gap operators from singular rational spectral curves"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    /// Odd-symmetry certificate for the scalar operator
    SchrodingerSigma,
    /// Odd-symmetry certificate for the two-component operator
    DiracSigma,
    /// Circle-reality certificate for the two-component operator
    DiracTau,
}

impl KindArg {
    fn kind(self) -> CertificateKind {
        match self {
            KindArg::SchrodingerSigma => CertificateKind::SchrodingerSigma,
            KindArg::DiracSigma => CertificateKind::DiracSigma,
            KindArg::DiracTau => CertificateKind::DiracTau,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check a configuration document for admissibility
    Validate { spec: PathBuf },
    /// Print the per-class gluing defects and the arithmetic genus
    Genus { spec: PathBuf },
    /// Tabulate the scalar-operator data u, A, xi, c over the grid
    Schrodinger {
        spec: PathBuf,
        /// Write one file per field under this prefix instead of stdout
        #[arg(long)]
        out: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Tabulate the two-component operator data U, V, xi1, xi2 over the grid
    Dirac {
        spec: PathBuf,
        /// Write one file per field under this prefix instead of stdout
        #[arg(long)]
        out: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Search for a symmetry-certificate differential and verify it
    Certify {
        spec: PathBuf,
        #[arg(long, value_enum)]
        kind: KindArg,
    },
    /// Dimension counts for a divisor: function space, constrained
    /// differentials, and the integer index identity
    Rr {
        spec: PathBuf,
        /// JSON array of divisor entries; `{"inf": true}` marks infinity
        #[arg(long)]
        divisor: Option<String>,
    },
    /// One-dimensional degenerate families on a real line segment
    Oned {
        #[command(subcommand)]
        family: OnedCmd,
    },
    /// Closed-form constant-coefficient family: solve and compare
    ExampleConstant {
        #[arg(long, allow_negative_numbers = true)]
        c: f64,
    },
}

#[derive(Subcommand)]
enum OnedCmd {
    /// Double point at w = 0 with a simple pole at w = p
    Double {
        #[arg(long, allow_negative_numbers = true)]
        p: f64,
        #[arg(long, default_value_t = -2.0, allow_negative_numbers = true)]
        x_min: f64,
        #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
        x_max: f64,
        #[arg(long, default_value_t = 41)]
        n: usize,
    },
    /// Glued pair w = ±q with a simple pole at w = p
    Pair {
        #[arg(long, allow_negative_numbers = true)]
        q: f64,
        #[arg(long, allow_negative_numbers = true)]
        p: f64,
        #[arg(long, default_value_t = -2.0, allow_negative_numbers = true)]
        x_min: f64,
        #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
        x_max: f64,
        #[arg(long, default_value_t = 41)]
        n: usize,
    },
}

/// Failure carrying the process exit code; message (if any) goes to stderr.
struct Failure {
    code: u8,
    message: Option<String>,
}

impl Failure {
    fn silent(code: u8) -> Self {
        Failure {
            code,
            message: None,
        }
    }

    fn parse(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: Some(message.into()),
        }
    }
}

impl From<FgError> for Failure {
    fn from(e: FgError) -> Self {
        let code = match e {
            FgError::InvalidRequest { .. } => 2,
            _ => 4,
        };
        Failure {
            code,
            message: Some(e.to_string()),
        }
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    // die quietly when a downstream pipe closes early instead of panicking
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if let Some(m) = &f.message {
                eprintln!("error: {m}");
            }
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command) -> CmdResult {
    match command {
        Command::Validate { spec } => cmd_validate(&spec),
        Command::Genus { spec } => cmd_genus(&spec),
        Command::Schrodinger { spec, out, format } => cmd_schrodinger(&spec, out, format),
        Command::Dirac { spec, out, format } => cmd_dirac(&spec, out, format),
        Command::Certify { spec, kind } => cmd_certify(&spec, kind),
        Command::Rr { spec, divisor } => cmd_rr(&spec, divisor),
        Command::Oned { family } => cmd_oned(family),
        Command::ExampleConstant { c } => cmd_example_constant(c),
    }
}

fn read_document(path: &PathBuf) -> Result<(String, SpecDocument), Failure> {
    let raw = std::fs::read_to_string(path)
        .map_err(|e| Failure::parse(format!("{}: {e}", path.display())))?;
    let doc = SpecDocument::parse(&raw).map_err(Failure::parse)?;
    Ok((raw, doc))
}

fn build_spec(doc: &SpecDocument) -> Result<(CurveSpec, PoleDivisor), Failure> {
    let spec = doc.curve_spec()?;
    let divisor = doc.pole_divisor()?;
    Ok((spec, divisor))
}

/// Seeded sample points for residual sweeps, avoiding the marked ends,
/// gluing support, and divisor poles.
fn residual_lambdas(
    seed: u64,
    spec: &CurveSpec,
    divisor: &PoleDivisor,
    count: usize,
) -> Vec<Complex64> {
    let mut avoid = vec![Complex64::new(0.0, 0.0)];
    avoid.extend(spec.support().iter().map(|&(w, _)| w));
    avoid.extend(divisor.entries().iter().map(|&(p, _)| p));
    InstanceSampler::new(seed).lambda_samples(count, &avoid, 0.15)
}

fn cmd_validate(path: &PathBuf) -> CmdResult {
    let (_, doc) = read_document(path)?;
    let tol = doc.tolerances();
    let spec = match doc.curve_spec() {
        Ok(s) => s,
        Err(e) => {
            println!("violation: {e}");
            return Err(Failure::silent(1));
        }
    };
    let divisor = match doc.pole_divisor() {
        Ok(d) => d,
        Err(e) => {
            println!("violation: {e}");
            return Err(Failure::silent(1));
        }
    };
    let divisor_opt = if doc.poles.is_empty() {
        None
    } else {
        Some(&divisor)
    };
    let report = validate(&spec, divisor_opt, &tol);
    if report.violations.is_empty() {
        println!("ok: admissible (p_a = {})", spec.arithmetic_genus());
        Ok(())
    } else {
        for v in &report.violations {
            println!("violation: {v}");
        }
        Err(Failure::silent(1))
    }
}

fn cmd_genus(path: &PathBuf) -> CmdResult {
    let (_, doc) = read_document(path)?;
    let spec = doc.curve_spec()?;
    if spec.classes.is_empty() {
        println!("delta: none; p_a = 0");
    } else {
        let deltas: Vec<String> = spec
            .classes
            .iter()
            .map(|c| c.delta().to_string())
            .collect();
        println!(
            "delta: {}; p_a = {}",
            deltas.join(", "),
            spec.arithmetic_genus()
        );
    }
    Ok(())
}

fn admissibility_gate(
    spec: &CurveSpec,
    divisor: &PoleDivisor,
    tol: &Tolerances,
) -> CmdResult {
    let report = validate(spec, Some(divisor), tol);
    if report.violations.is_empty() {
        Ok(())
    } else {
        Err(Failure::parse(format!(
            "inadmissible configuration: {}",
            report.violations.join("; ")
        )))
    }
}

fn emit_tables(
    meta: &RunMetadata,
    tables: &[FieldTable],
    max_residual: f64,
    residual_key: &str,
    out: Option<String>,
    format: Format,
) -> CmdResult {
    match format {
        Format::Csv => {
            if let Some(prefix) = out {
                for t in tables {
                    let path = format!("{prefix}.{}.csv", t.name);
                    std::fs::write(&path, csv_block(meta, t)).map_err(|e| Failure {
                        code: 4,
                        message: Some(format!("{path}: {e}")),
                    })?;
                }
            } else {
                for t in tables {
                    print!("{}", csv_block(meta, t));
                }
            }
            println!("# {residual_key} = {max_residual:.16e}");
        }
        Format::Json => {
            let doc = json_document(meta, tables, max_residual);
            if let Some(prefix) = out {
                let path = format!("{prefix}.json");
                std::fs::write(&path, doc).map_err(|e| Failure {
                    code: 4,
                    message: Some(format!("{path}: {e}")),
                })?;
            } else {
                println!("{doc}");
            }
        }
    }
    Ok(())
}

fn cmd_schrodinger(path: &PathBuf, out: Option<String>, format: Format) -> CmdResult {
    let (raw, doc) = read_document(path)?;
    let tol = doc.tolerances();
    let (spec, divisor) = build_spec(&doc)?;
    admissibility_gate(&spec, &divisor, &tol)?;
    let grid = doc.grid();
    let lambdas = residual_lambdas(doc.seed(), &spec, &divisor, 5);

    let mut fields: [Vec<(f64, f64, Complex64)>; 4] = Default::default();
    let mut max_residual = 0.0_f64;
    for (x, y) in grid.nodes() {
        let sol = solve_schrodinger(&spec, &divisor, x, y, &tol).map_err(|e| {
            let mut f = Failure::from(e);
            f.message = Some(format!("at grid node ({x}, {y}): {}", f.message.unwrap()));
            f
        })?;
        let s = sol.sample()?;
        fields[0].push((x, y, s.u));
        fields[1].push((x, y, s.big_a));
        fields[2].push((x, y, s.xi));
        fields[3].push((x, y, s.c_value));
        for &lam in &lambdas {
            max_residual = max_residual.max(sol.operator_residual(lam)?);
        }
    }

    let meta = RunMetadata {
        spec_sha256: sha256_hex(raw.as_bytes()),
        p_a: spec.arithmetic_genus(),
        tolerances: tol,
    };
    let [u, a, xi, c] = fields;
    let tables = vec![
        FieldTable {
            name: "u",
            values: u,
        },
        FieldTable {
            name: "A",
            values: a,
        },
        FieldTable {
            name: "xi",
            values: xi,
        },
        FieldTable {
            name: "c",
            values: c,
        },
    ];
    emit_tables(
        &meta,
        &tables,
        max_residual,
        "max_operator_residual",
        out,
        format,
    )
}

fn cmd_dirac(path: &PathBuf, out: Option<String>, format: Format) -> CmdResult {
    let (raw, doc) = read_document(path)?;
    let tol = doc.tolerances();
    let (spec, divisor) = build_spec(&doc)?;
    admissibility_gate(&spec, &divisor, &tol)?;
    let grid = doc.grid();
    let lambdas = residual_lambdas(doc.seed(), &spec, &divisor, 5);

    let mut fields: [Vec<(f64, f64, Complex64)>; 4] = Default::default();
    let mut max_residual = 0.0_f64;
    for (x, y) in grid.nodes() {
        let sol = solve_dirac(&spec, &divisor, x, y, &tol).map_err(|e| {
            let mut f = Failure::from(e);
            f.message = Some(format!("at grid node ({x}, {y}): {}", f.message.unwrap()));
            f
        })?;
        let s = sol.sample();
        fields[0].push((x, y, s.u_coeff));
        fields[1].push((x, y, s.v_coeff));
        fields[2].push((x, y, s.xi1_plus));
        fields[3].push((x, y, s.xi2_minus));
        for &lam in &lambdas {
            max_residual = max_residual.max(sol.equation_residual(lam)?);
        }
    }

    let meta = RunMetadata {
        spec_sha256: sha256_hex(raw.as_bytes()),
        p_a: spec.arithmetic_genus(),
        tolerances: tol,
    };
    let [u, v, xi1, xi2] = fields;
    let tables = vec![
        FieldTable {
            name: "U",
            values: u,
        },
        FieldTable {
            name: "V",
            values: v,
        },
        FieldTable {
            name: "xi1",
            values: xi1,
        },
        FieldTable {
            name: "xi2",
            values: xi2,
        },
    ];
    emit_tables(
        &meta,
        &tables,
        max_residual,
        "max_equation_residual",
        out,
        format,
    )
}

fn cmd_certify(path: &PathBuf, kind: KindArg) -> CmdResult {
    let (_, doc) = read_document(path)?;
    let tol = doc.tolerances();
    let (spec, divisor) = build_spec(&doc)?;
    match find_certificate(&spec, &divisor, kind.kind(), &tol)? {
        CertificateOutcome::Infeasible { reason } => {
            println!("infeasible: {reason}");
            Err(Failure::silent(3))
        }
        CertificateOutcome::Found(cert) => {
            println!("kind: {}", cert.kind.label());
            println!("solution_dim: {}", cert.solution_dim);
            println!(
                "leading_plus: {:.16e},{:.16e}",
                cert.report.leading_plus.re, cert.report.leading_plus.im
            );
            println!(
                "leading_minus: {:.16e},{:.16e}",
                cert.report.leading_minus.re, cert.report.leading_minus.im
            );
            for check in &cert.report.checks {
                println!(
                    "check {}: measured {:.3e} bound {:.3e} {}",
                    check.name,
                    check.measured,
                    check.bound,
                    if check.pass { "PASS" } else { "FAIL" }
                );
            }
            for w in &cert.report.warnings {
                println!("warning: {w}");
            }
            println!("result: {}", if cert.report.pass { "PASS" } else { "FAIL" });
            if cert.report.pass {
                Ok(())
            } else {
                Err(Failure::silent(4))
            }
        }
    }
}

fn cmd_rr(path: &PathBuf, divisor_arg: Option<String>) -> CmdResult {
    let (_, doc) = read_document(path)?;
    let tol = doc.tolerances();
    let spec = doc.curve_spec()?;
    let divisor = match divisor_arg {
        Some(raw) => parse_rr_divisor(&raw).map_err(Failure::parse)?,
        None => Vec::new(),
    };
    let rep = rr_report(&spec, &divisor, &tol)?;
    println!(
        "deg D = {}; p_a = {}; dim L = {}; dim Omega = {}; identity residual = {}",
        rep.degree, rep.p_a, rep.dim_l, rep.dim_omega, rep.identity_residual
    );
    if rep.identity_residual == 0 {
        Ok(())
    } else {
        Err(Failure {
            code: 4,
            message: Some("index identity violated — dimension counts are inconsistent".into()),
        })
    }
}

fn cmd_oned(family_cmd: OnedCmd) -> CmdResult {
    let (family, x_min, x_max, n) = match family_cmd {
        OnedCmd::Double { p, x_min, x_max, n } => (OneDFamily::DoublePoint { p }, x_min, x_max, n),
        OnedCmd::Pair {
            q,
            p,
            x_min,
            x_max,
            n,
        } => (OneDFamily::Pair { q, p }, x_min, x_max, n),
    };
    if n == 0 || x_max <= x_min {
        return Err(Failure::parse("need n ≥ 1 and x_max > x_min"));
    }
    println!("# version = {VERSION}");
    match family {
        OneDFamily::DoublePoint { p } => {
            println!("# family = double");
            println!("# p = {p:.16e}");
        }
        OneDFamily::Pair { q, p } => {
            println!("# family = pair");
            println!("# q = {q:.16e}");
            println!("# p = {p:.16e}");
        }
    }
    println!("# field = oned");
    println!("x,a,u,xi");
    let pole = family.pole();
    let w_samples: Vec<f64> = [-2.3, -0.45, 1.7, 3.2]
        .into_iter()
        .filter(|w| (w - pole).abs() > 0.15)
        .collect();
    let mut max_residual = 0.0_f64;
    let mut skipped = 0usize;
    for i in 0..n {
        let x = if n == 1 {
            x_min
        } else {
            x_min + (x_max - x_min) * i as f64 / (n - 1) as f64
        };
        match solve_oned(family, x) {
            Ok(sol) => {
                println!(
                    "{:.16e},{:.16e},{:.16e},{:.16e}",
                    x,
                    sol.a,
                    sol.u(),
                    sol.xi()
                );
                for &w in &w_samples {
                    max_residual = max_residual.max(sol.residual_1d(w)?);
                }
            }
            Err(FgError::DegeneratePosition { .. }) => {
                skipped += 1;
            }
            Err(e) => return Err(e.into()),
        }
    }
    if skipped > 0 {
        println!("# skipped_blow_up_nodes = {skipped}");
    }
    println!("# max_residual_1d = {max_residual:.16e}");
    Ok(())
}

fn cmd_example_constant(c: f64) -> CmdResult {
    if !(c.is_finite() && c.abs() > 1e-9) {
        return Err(Failure::parse("need a finite nonzero constant c"));
    }
    let tol = Tolerances::default();
    let spec = CurveSpec::plain(
        Complex64::new(1.0, 0.0),
        Complex64::new(-c * c, 0.0),
        vec![],
    );
    let divisor = PoleDivisor::simple(&[Complex64::new(c, 0.0)])?;
    let grid = Grid::default();
    let target = Complex64::new(c, 0.0);

    let mut max_du = 0.0_f64;
    let mut max_dv = 0.0_f64;
    for (x, y) in grid.nodes() {
        let sol = solve_dirac(&spec, &divisor, x, y, &tol)?;
        max_du = max_du.max((sol.u_coeff() - target).norm());
        max_dv = max_dv.max((sol.v_coeff() - target).norm());
    }

    // closed form: ψ₁ = λ/(λ−c)·E, ψ₂ = c/(c−λ)·E at a probe point
    let (px, py) = (0.3, -0.7);
    let probe = solve_dirac(&spec, &divisor, px, py, &tol)?;
    let lambdas = residual_lambdas(0, &spec, &divisor, 50);
    let mut max_wave = 0.0_f64;
    for lam in lambdas {
        let e = probe.core().eval(lam)?;
        let want1 = lam / (lam - target) * e;
        let want2 = target / (target - lam) * e;
        let d1 = (probe.psi1(lam)? - want1).norm() / want1.norm();
        let d2 = (probe.psi2(lam)? - want2).norm() / want2.norm();
        max_wave = max_wave.max(d1).max(d2);
    }

    println!("c = {c:.16e}");
    println!("max |U - c| = {max_du:.16e}");
    println!("max |V - c| = {max_dv:.16e}");
    println!("max wave deviation = {max_wave:.16e}");
    if max_du <= 1e-10 && max_dv <= 1e-10 && max_wave <= 1e-10 {
        Ok(())
    } else {
        Err(Failure {
            code: 4,
            message: Some("closed-form deviation exceeds 1e-10".into()),
        })
    }
}
