//! The versioned report document and its text rendering.
//!
//! Readers should ignore fields they do not know; the schema version only
//! changes when an existing field changes meaning. Nothing time- or
//! host-dependent goes in, so identical inputs give identical bytes.

use biharm::deformer::AngleSolution;
use biharm::quadrature::EnergyValue;
use biharm::verifier::{CaseReport, CaseStatus, ResidualReport, ScanConfig};
use biharm::functionals::Certificate;
use serde::Serialize;
use std::fmt::Write as _;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize)]
pub struct Tool {
    pub name: &'static str,
    pub version: &'static str,
    pub core_version: &'static str,
}

impl Tool {
    pub fn current() -> Self {
        Tool { name: "biharm", version: env!("CARGO_PKG_VERSION"), core_version: biharm::VERSION }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RunMeta {
    pub command: String,
    pub input: Option<String>,
    pub flavor: Option<String>,
    pub scan: Option<ScanConfig>,
    pub energy_scheme: Option<String>,
    /// All reported quantities are dimensionless.
    pub units: &'static str,
}

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub checks: usize,
    pub passed: usize,
    pub failed: usize,
    pub inadmissible: usize,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReportDocument {
    pub schema_version: u32,
    pub tool: Tool,
    pub run: RunMeta,
    pub solutions: Vec<AngleSolution>,
    pub residuals: Vec<ResidualReport>,
    pub energies: Vec<EnergyValue>,
    pub cases: Vec<CaseReport>,
    /// Quantities that were requested but could not be computed, with the reason.
    pub unavailable: Vec<String>,
    pub summary: Summary,
}

impl ReportDocument {
    pub fn new(
        run: RunMeta,
        solutions: Vec<AngleSolution>,
        residuals: Vec<ResidualReport>,
        energies: Vec<EnergyValue>,
        cases: Vec<CaseReport>,
    ) -> Self {
        let case_failed = cases
            .iter()
            .filter(|c| matches!(c.status, CaseStatus::Failed | CaseStatus::Error))
            .count();
        let inadmissible = cases.iter().filter(|c| c.status == CaseStatus::Inadmissible).count();
        let res_failed = residuals.iter().filter(|r| !r.pass).count();
        let checks = residuals.len() + cases.len();
        let failed = case_failed + res_failed;
        let summary = Summary { checks, passed: checks - failed - inadmissible, failed, inadmissible, pass: failed == 0 };
        ReportDocument {
            schema_version: SCHEMA_VERSION,
            tool: Tool::current(),
            run,
            solutions,
            residuals,
            energies,
            cases,
            unavailable: Vec::new(),
            summary,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {} (report schema {})", self.tool.name, self.tool.version, self.schema_version);
        if let Some(input) = &self.run.input {
            let _ = writeln!(out, "input: {input}");
        }
        if let Some(cfg) = &self.run.scan {
            let _ = writeln!(
                out,
                "scan: samples={} seed={} tol={:e} fd_points={} h={:?}",
                cfg.samples, cfg.seed, cfg.tol, cfg.fd_points, cfg.hs
            );
        }
        for s in &self.solutions {
            let _ = writeln!(out, "solution: {s}");
        }
        for r in &self.residuals {
            out.push_str(&residual_line(r));
        }
        for e in &self.energies {
            let _ = writeln!(out, "energy {} of {} over {}: {:.12} +- {:.3e} [{}]", e.kind.key(), e.map, e.region, e.value, e.std_error, e.scheme);
        }
        for u in &self.unavailable {
            let _ = writeln!(out, "unavailable: {u}");
        }
        for c in &self.cases {
            let status = match c.status {
                CaseStatus::Certified => "PASS",
                CaseStatus::Inadmissible => "SKIP",
                CaseStatus::Failed => "FAIL",
                CaseStatus::Error => "ERROR",
            };
            let mut line = format!("{status:<5} {}", c.id);
            if let Some(s) = &c.solution {
                let _ = write!(line, "  t={}", biharm::rational::fmt_q(&s.t));
            }
            if let Some(r) = &c.residual {
                let _ = write!(line, "  max|res|={:.2e}", r.numeric_max);
                if let Some(p) = r.fd.as_ref().and_then(|f| f.order) {
                    let _ = write!(line, "  fd-order={p:.3}");
                }
            }
            if let Some(d) = &c.detail {
                let _ = write!(line, "  ({d})");
            }
            out.push_str(&line);
            out.push('\n');
        }
        let s = &self.summary;
        let _ = writeln!(
            out,
            "summary: {} checks, {} passed, {} failed, {} inadmissible: {}",
            s.checks,
            s.passed,
            s.failed,
            s.inadmissible,
            if s.pass { "PASS" } else { "FAIL" }
        );
        out
    }
}

fn residual_line(r: &ResidualReport) -> String {
    let mut line = format!(
        "{} {} residual of {} on {}: ",
        if r.pass { "PASS" } else { "FAIL" },
        r.equation.name(),
        r.map,
        r.domain
    );
    match &r.certificate {
        Certificate::Zero => line.push_str("exact zero"),
        Certificate::Nonzero { component, witness } => {
            let _ = write!(line, "nonzero in component {component}, witness {witness}");
        }
    }
    let _ = write!(line, "; max float norm {:.3e} over {} samples (tol {:e})", r.numeric_max, r.samples, r.tol);
    if let Some(fd) = &r.fd {
        match fd.order {
            Some(p) => {
                let _ = write!(line, "; fd order {p:.3}");
            }
            None => line.push_str("; fd exact"),
        }
        if !fd.pass {
            line.push_str(" (fd check failed)");
        }
    }
    line.push('\n');
    line
}
