//! `biharm`: build catalog maps, solve deformation angles, certify residuals
//! and estimate energies.
//!
//! Exit codes: 0 pass, 1 usage or parse error, 2 inadmissible angle or
//! unsupported domain, 3 unsupported energy density, 4 verification failure,
//! 5 I/O failure.

mod describe;
mod report;

use biharm::deformer::{admissible_range, DeformError, Family, Flavor, Solved};
use biharm::functionals::{Equation, FunctionalError};
use biharm::quadrature::{energy, EnergyKind, QuadratureError, Scheme};
use biharm::rational::{fmt_q, to_f64};
use biharm::verifier::{certify_solution_suite, default_cases, residual_scan, ScanConfig, ScanError};
use clap::{Args, Parser, Subcommand, ValueEnum};
use describe::{BuildError, Built, Desc, ParseError};
use report::{ReportDocument, RunMeta};
use serde::Serialize;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

const MAX_CATALOG_DIM: u32 = 10;

#[derive(Parser, Debug)]
#[command(name = "biharm", version, about = "Exact biharmonic and conformal-biharmonic maps into spheres")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the solved families, their dimension ranges and angle formulas.
    Catalog(CatalogArgs),
    /// Solve the deformation angle of a cone or join.
    Solve(SolveArgs),
    /// Certify a map (or the whole case matrix) against its Euler-Lagrange equation.
    Verify(VerifyArgs),
    /// Estimate the energy, bienergy or conformal bienergy of a map on a closed domain.
    Energy(EnergyArgs),
    /// Solve, verify and integrate in one report.
    Report(ReportArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SolveFlavor {
    Biharmonic,
    Cbiharmonic,
}

impl From<SolveFlavor> for Flavor {
    fn from(f: SolveFlavor) -> Flavor {
        match f {
            SolveFlavor::Biharmonic => Flavor::Biharmonic,
            SolveFlavor::Cbiharmonic => Flavor::CBiharmonic,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum EqFlavor {
    Harmonic,
    Biharmonic,
    Cbiharmonic,
}

impl EqFlavor {
    fn equation(self) -> Equation {
        match self {
            EqFlavor::Harmonic => Equation::Harmonic,
            EqFlavor::Biharmonic => Equation::Biharmonic,
            EqFlavor::Cbiharmonic => Equation::CBiharmonic,
        }
    }

    /// Flavor used to fill in omitted angles.
    fn solve_flavor(self) -> Flavor {
        match self {
            EqFlavor::Cbiharmonic => Flavor::CBiharmonic,
            _ => Flavor::Biharmonic,
        }
    }
}

#[derive(Args, Debug)]
struct CatalogArgs {
    /// Restrict to one family (pi, mu, nu, w1, w2, w3, small-hypersphere-cbi).
    #[arg(long)]
    family: Option<String>,
    /// Print a solved map description for every admissible dimension up to 10.
    #[arg(long)]
    emit: bool,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args, Debug)]
struct SolveArgs {
    /// A cone or join description, e.g. "cone(pi(5))".
    #[arg(long)]
    map: String,
    #[arg(long, value_enum, default_value = "biharmonic")]
    flavor: SolveFlavor,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args, Debug)]
struct ScanArgs {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Random sample points for the float residual scan.
    #[arg(long, default_value_t = 64)]
    samples: usize,
    /// Gate on the max float residual norm.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Largest finite-difference step; h/2 and h/4 are also used.
    #[arg(long, default_value_t = 1e-2)]
    h: f64,
    /// Sample points that also get the finite-difference check (0 disables it).
    #[arg(long, default_value_t = 2)]
    fd_points: usize,
}

impl ScanArgs {
    fn config(&self) -> Result<ScanConfig, CliError> {
        if !(self.h > 0.0 && self.h.is_finite()) {
            return Err(CliError::Usage(format!("--h must be positive, got {}", self.h)));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(CliError::Usage(format!("--tol must be positive, got {}", self.tol)));
        }
        if self.samples == 0 {
            return Err(CliError::Usage("--samples must be positive".into()));
        }
        Ok(ScanConfig {
            samples: self.samples,
            seed: self.seed,
            tol: self.tol,
            fd_points: self.fd_points,
            hs: [self.h, self.h / 2.0, self.h / 4.0],
        })
    }
}

#[derive(Args, Debug)]
#[group(id = "target", required = true, multiple = false, args = ["map", "suite"])]
struct Target {
    #[arg(long)]
    map: Option<String>,
    /// Run the full case matrix instead of a single map.
    #[arg(long)]
    suite: bool,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    target: Target,
    /// Equation to certify; omitted angles are solved for the same flavor.
    #[arg(long, value_enum, default_value = "biharmonic")]
    flavor: EqFlavor,
    #[command(flatten)]
    scan: ScanArgs,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args, Debug)]
struct QuadArgs {
    /// Monte Carlo sample count.
    #[arg(long, default_value_t = 100_000)]
    samples: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Use the deterministic product rule with this many nodes per angle instead.
    #[arg(long)]
    nodes: Option<usize>,
}

impl QuadArgs {
    fn scheme(&self) -> Scheme {
        match self.nodes {
            Some(nodes) => Scheme::Product { nodes },
            None => Scheme::MonteCarlo { samples: self.samples, seed: self.seed },
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum EnergyFlavor {
    #[value(name = "E")]
    E,
    #[value(name = "E2")]
    E2,
    #[value(name = "E2c")]
    E2c,
}

impl From<EnergyFlavor> for EnergyKind {
    fn from(f: EnergyFlavor) -> EnergyKind {
        match f {
            EnergyFlavor::E => EnergyKind::Energy,
            EnergyFlavor::E2 => EnergyKind::Bienergy,
            EnergyFlavor::E2c => EnergyKind::ConformalBienergy,
        }
    }
}

#[derive(Args, Debug)]
struct EnergyArgs {
    #[arg(long)]
    map: String,
    #[arg(long, value_enum, default_value = "E2")]
    flavor: EnergyFlavor,
    #[command(flatten)]
    quad: QuadArgs,
    /// Flavor used to fill in omitted angles.
    #[arg(long, value_enum, default_value = "biharmonic")]
    solve: SolveFlavor,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args, Debug)]
struct ReportArgs {
    #[command(flatten)]
    target: Target,
    #[arg(long, value_enum, default_value = "biharmonic")]
    flavor: EqFlavor,
    #[command(flatten)]
    scan: ScanArgs,
    /// Monte Carlo samples for the energies of a single map.
    #[arg(long, default_value_t = 100_000)]
    energy_samples: usize,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error(transparent)]
    Scan(#[from] ScanError),
    #[error("i/o error: {0}")]
    Io(String),
}

fn functional_code(e: &FunctionalError) -> u8 {
    match e {
        FunctionalError::UnsupportedDomain(_) => 2,
        FunctionalError::NotHarmonic(_) => 1,
    }
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Parse(_) => 1,
            CliError::Build(BuildError::Map(_)) => 1,
            CliError::Build(BuildError::Deform(e)) => match e {
                DeformError::NotHarmonic(..) | DeformError::Map(_) => 1,
                DeformError::Inadmissible { .. } | DeformError::HarmonicOutcome => 2,
                DeformError::UnsupportedDensity(_)
                | DeformError::NonConstantClosed(_)
                | DeformError::NoScalarSolution(_)
                | DeformError::CrossTerm(_) => 3,
                DeformError::ResidualNonzero(_) => 4,
                DeformError::Functional(f) => functional_code(f),
            },
            CliError::Quadrature(QuadratureError::Scheme(_)) => 1,
            CliError::Quadrature(_) => 2,
            CliError::Scan(ScanError::Functional(f)) => functional_code(f),
            CliError::Scan(_) => 2,
            CliError::Io(_) => 5,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Catalog(a) => cmd_catalog(&a),
        Command::Solve(a) => cmd_solve(&a),
        Command::Verify(a) => cmd_verify(&a),
        Command::Energy(a) => cmd_energy(&a),
        Command::Report(a) => cmd_report(&a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            if let CliError::Build(BuildError::Deform(DeformError::Inadmissible { solution })) = &e {
                println!("{solution}");
            }
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::Io(format!("stdout: {e}")))
        }
    }
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("value serializes");
    s.push('\n');
    s
}

fn build(text: &str, flavor: Flavor) -> Result<(Desc, Built), CliError> {
    let desc = describe::parse(text)?;
    let built = desc.build(flavor)?;
    Ok((desc, built))
}

/// Description of a family member with its solved angle filled in.
fn family_desc(family: Family, m: u32, t: biharm::rational::Q) -> Desc {
    let b = Box::new;
    match family {
        Family::PiCone => Desc::Cone(b(Desc::Pi(m)), Some(t)),
        Family::MuCone => Desc::Cone(b(Desc::Mu(m)), Some(t)),
        Family::NuCone => Desc::Cone(b(Desc::Nu(m)), Some(t)),
        Family::W1 => Desc::Join(b(Desc::Pi(m)), b(Desc::Mu(m)), Some(t)),
        Family::W2 => Desc::Join(b(Desc::Pi(m)), b(Desc::Nu(m)), Some(t)),
        Family::W3 => Desc::Join(b(Desc::Mu(m)), b(Desc::Nu(m)), Some(t)),
        Family::SmallHypersphereCbi => Desc::Cone(b(Desc::Identity(m)), Some(t)),
    }
}

/// Every family member with an admissible angle, up to the dimension cap.
fn solved_members(families: &[Family]) -> Vec<(Family, u32, Desc, Solved)> {
    let mut out = Vec::new();
    for &f in families {
        for m in f.min_dim()..=MAX_CATALOG_DIM {
            if let Ok(s) = f.solve(m) {
                out.push((f, m, family_desc(f, m, s.solution.t.clone()), s));
            }
        }
    }
    out
}

#[derive(Serialize)]
struct FamilyEntry {
    family: &'static str,
    flavor: &'static str,
    range: String,
    formula: &'static str,
    description: &'static str,
}

#[derive(Serialize)]
struct Emitted {
    family: &'static str,
    m: u32,
    map: String,
    t: String,
}

fn cmd_catalog(a: &CatalogArgs) -> Result<u8, CliError> {
    let families: Vec<Family> = match &a.family {
        Some(k) => vec![Family::parse(k).map_err(|e| {
            CliError::Usage(format!(
                "{e}; known families: {}",
                Family::ALL.iter().map(|f| f.key()).collect::<Vec<_>>().join(", ")
            ))
        })?],
        None => Family::ALL.to_vec(),
    };
    if a.emit {
        let entries: Vec<Emitted> = solved_members(&families)
            .into_iter()
            .map(|(f, m, desc, s)| Emitted { family: f.key(), m, map: desc.to_string(), t: fmt_q(&s.solution.t) })
            .collect();
        let text = match a.format {
            Format::Json => json(&entries),
            Format::Text => entries.iter().map(|e| format!("{}\n", e.map)).collect(),
        };
        emit(&text, None)?;
        return Ok(0);
    }
    let entries: Vec<FamilyEntry> = families
        .iter()
        .map(|f| FamilyEntry {
            family: f.key(),
            flavor: f.flavor().name(),
            range: admissible_range(*f).to_string(),
            formula: f.formula(),
            description: f.description(),
        })
        .collect();
    let text = match a.format {
        Format::Json => json(&entries),
        Format::Text => entries
            .iter()
            .map(|e| {
                format!(
                    "{:<22} {:<11} m in {:<9} {:<42} {}\n",
                    e.family, e.flavor, e.range, e.formula, e.description
                )
            })
            .collect(),
    };
    emit(&text, None)?;
    Ok(0)
}

fn cmd_solve(a: &SolveArgs) -> Result<u8, CliError> {
    let desc = describe::parse(&a.map)?;
    if !matches!(desc, Desc::Cone(..) | Desc::Join(..)) {
        return Err(CliError::Usage(format!("solve expects a cone(...) or join(...) description, got {desc}")));
    }
    let built = desc.build(a.flavor.into())?;
    let solved = match &desc {
        Desc::Cone(_, Some(t)) | Desc::Join(_, _, Some(t)) => {
            return Err(CliError::Usage(format!(
                "the angle is already given ({}); drop it to solve",
                fmt_q(t)
            )))
        }
        _ => built.solutions.last().expect("outer angle was solved").clone(),
    };
    let text = match a.format {
        Format::Json => json(&serde_json::json!({
            "map": desc.with_angle(solved.t.clone()).to_string(),
            "solutions": built.solutions,
        })),
        Format::Text => {
            let mut s = String::new();
            for sol in &built.solutions[..built.solutions.len() - 1] {
                s.push_str(&format!("inner: {sol}\n"));
            }
            s.push_str(&format!("map: {}\n", built.map.name));
            s.push_str(&format!("t = {}\n", fmt_q(&solved.t)));
            s.push_str(&format!("t ~ {:.15}\n", to_f64(&solved.t)));
            if let Some(c) = &solved.cos2 {
                s.push_str(&format!("cos 2beta = {}\n", fmt_q(c)));
            }
            s.push_str(&format!("constraint: {}\n", solved.constraint_source));
            for n in &solved.notes {
                s.push_str(&format!("note: {n}\n"));
            }
            s
        }
    };
    emit(&text, None)?;
    Ok(0)
}

fn render(doc: &ReportDocument, format: Format) -> String {
    match format {
        Format::Json => doc.to_json(),
        Format::Text => doc.to_text(),
    }
}

fn scan_meta(command: &str, target: &Target, flavor: EqFlavor, cfg: ScanConfig) -> RunMeta {
    RunMeta {
        command: command.to_string(),
        input: if target.suite { Some("suite".into()) } else { target.map.clone() },
        flavor: (!target.suite).then(|| flavor.equation().name().to_string()),
        scan: Some(cfg),
        energy_scheme: None,
        units: "dimensionless",
    }
}

fn cmd_verify(a: &VerifyArgs) -> Result<u8, CliError> {
    let cfg = a.scan.config()?;
    let meta = scan_meta("verify", &a.target, a.flavor, cfg);
    let doc = match &a.target.map {
        None => {
            let suite = certify_solution_suite(&default_cases(), &cfg);
            ReportDocument::new(meta, Vec::new(), Vec::new(), Vec::new(), suite.cases)
        }
        Some(text) => {
            let (_, built) = build(text, a.flavor.solve_flavor())?;
            let r = residual_scan(&built.map, a.flavor.equation(), true, &cfg)?;
            ReportDocument::new(meta, built.solutions, vec![r], Vec::new(), Vec::new())
        }
    };
    emit(&render(&doc, a.format), a.out.as_ref())?;
    Ok(if doc.summary.pass { 0 } else { 4 })
}

fn cmd_energy(a: &EnergyArgs) -> Result<u8, CliError> {
    let (_, built) = build(&a.map, a.solve.into())?;
    let v = energy(&built.map, a.flavor.into(), a.quad.scheme())?;
    let text = match a.format {
        Format::Json => json(&v),
        Format::Text => format!(
            "{} = {:.12} +- {:.3e}\nmap: {}\nregion: {}\nscheme: {}\n",
            v.kind.key(),
            v.value,
            v.std_error,
            v.map,
            v.region,
            v.scheme
        ),
    };
    emit(&text, None)?;
    Ok(0)
}

fn cmd_report(a: &ReportArgs) -> Result<u8, CliError> {
    let cfg = a.scan.config()?;
    let mut meta = scan_meta("report", &a.target, a.flavor, cfg);
    let doc = match &a.target.map {
        None => {
            let suite = certify_solution_suite(&default_cases(), &cfg);
            ReportDocument::new(meta, Vec::new(), Vec::new(), Vec::new(), suite.cases)
        }
        Some(text) => {
            let (_, built) = build(text, a.flavor.solve_flavor())?;
            let r = residual_scan(&built.map, a.flavor.equation(), true, &cfg)?;
            let scheme = Scheme::MonteCarlo { samples: a.energy_samples, seed: a.scan.seed };
            meta.energy_scheme = Some(scheme.to_string());
            let mut energies = Vec::new();
            let mut unavailable = Vec::new();
            for kind in [EnergyKind::Energy, EnergyKind::Bienergy, EnergyKind::ConformalBienergy] {
                match energy(&built.map, kind, scheme) {
                    Ok(v) => energies.push(v),
                    Err(e) => unavailable.push(format!("{}: {e}", kind.key())),
                }
            }
            let mut doc = ReportDocument::new(meta, built.solutions, vec![r], energies, Vec::new());
            doc.unavailable = unavailable;
            doc
        }
    };
    emit(&render(&doc, a.format), a.out.as_ref())?;
    Ok(if doc.summary.pass { 0 } else { 4 })
}
