//! The solution suite: every closed-form family over a dimension range plus
//! closed-domain cones and joins, conformal-biharmonic cases and curves.
//! Each certified case also gets a perturbed negative control.

use super::scan::{residual_scan, ResidualReport, ScanConfig};
use crate::catalog::{curve_s2, curve_s3, curve_with_amplitude, eigenmap, hopf, identity_sphere};
use crate::deformer::{solve_cone, solve_join, AngleSolution, DeformError, Family, Flavor};
use crate::exec;
use crate::functionals::{residual, residual_norm_sq, tangency_defect, tension_residual, Equation};
use crate::map::{MapError, SphereMap};
use crate::rational::{q, Q};
use num_traits::One;
use serde::Serialize;
use std::fmt;

/// A harmonic input map by name.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Base {
    Identity(u32),
    Hopf,
    /// Degree-`k` eigenmap of `Sᵐ`; `k = 1` is the identity.
    Eigen(u32, u32),
}

impl Base {
    pub fn build(&self) -> Result<SphereMap, MapError> {
        match *self {
            Base::Identity(m) | Base::Eigen(m, 1) => identity_sphere(m),
            Base::Hopf => hopf(),
            Base::Eigen(m, k) => eigenmap(m, k),
        }
    }
}

impl fmt::Display for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Base::Identity(m) | Base::Eigen(m, 1) => write!(f, "identity({m})"),
            Base::Hopf => f.write_str("hopf"),
            Base::Eigen(m, k) => write!(f, "eigenmap({m},{k})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SuiteCase {
    Family(Family, u32),
    Cone(Base, Flavor),
    Join(Base, Base, Flavor),
    /// The curve into `S²`, or into `S³` with the given `A = a²`.
    Curve(Option<Q>),
}

impl SuiteCase {
    pub fn id(&self) -> String {
        let tag = |f: &Flavor| match f {
            Flavor::Biharmonic => "bi",
            Flavor::CBiharmonic => "cbi",
        };
        match self {
            SuiteCase::Family(f, m) => format!("{}/m={m}", f.key()),
            SuiteCase::Cone(b, f) => format!("cone-{}/{b}", tag(f)),
            SuiteCase::Join(a, b, f) => format!("join-{}/{a}+{b}", tag(f)),
            SuiteCase::Curve(None) => "curve/s2".into(),
            SuiteCase::Curve(Some(a)) => format!("curve/s3({a})"),
        }
    }

    pub fn group(&self) -> String {
        match self {
            SuiteCase::Family(f, _) => f.key().into(),
            SuiteCase::Cone(_, Flavor::Biharmonic) => "closed-cone".into(),
            SuiteCase::Cone(_, Flavor::CBiharmonic) => "cbi-cone".into(),
            SuiteCase::Join(_, _, Flavor::Biharmonic) => "closed-join".into(),
            SuiteCase::Join(_, _, Flavor::CBiharmonic) => "cbi-join".into(),
            SuiteCase::Curve(_) => "curve".into(),
        }
    }

    fn dim(&self) -> Option<u32> {
        match self {
            SuiteCase::Family(_, m) => Some(*m),
            SuiteCase::Cone(b, _) | SuiteCase::Join(b, _, _) => b.build().ok().map(|v| v.domain.dim),
            SuiteCase::Curve(_) => Some(1),
        }
    }
}

/// Dimensions covered for the families; open-ended ranges are capped here.
pub const FAMILY_DIMS: std::ops::RangeInclusive<u32> = 2..=10;

pub fn default_cases() -> Vec<SuiteCase> {
    let mut cases = Vec::new();
    for f in Family::ALL {
        if f == Family::SmallHypersphereCbi {
            continue;
        }
        for m in FAMILY_DIMS {
            cases.push(SuiteCase::Family(f, m));
        }
    }
    let bi = Flavor::Biharmonic;
    let cbi = Flavor::CBiharmonic;
    for m in 2..=5 {
        cases.push(SuiteCase::Cone(Base::Identity(m), bi));
    }
    for b in [Base::Hopf, Base::Eigen(2, 2), Base::Eigen(3, 2)] {
        cases.push(SuiteCase::Cone(b, bi));
    }
    for (a, b) in [
        (Base::Eigen(2, 2), Base::Identity(2)),
        (Base::Eigen(3, 2), Base::Identity(3)),
        (Base::Hopf, Base::Identity(3)),
    ] {
        cases.push(SuiteCase::Join(a, b, bi));
    }
    for m in 2..=5 {
        for k in 1..=3 {
            cases.push(SuiteCase::Cone(Base::Eigen(m, k), cbi));
        }
    }
    cases.push(SuiteCase::Cone(Base::Hopf, cbi));
    for m in 2..=5 {
        for (k1, k2) in [(2, 1), (3, 1), (3, 2)] {
            cases.push(SuiteCase::Join(Base::Eigen(m, k1), Base::Eigen(m, k2), cbi));
        }
    }
    cases.push(SuiteCase::Join(Base::Eigen(5, 4), Base::Eigen(5, 1), cbi));
    cases.push(SuiteCase::Curve(None));
    cases.push(SuiteCase::Curve(Some(q(3, 2))));
    cases
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseStatus {
    /// Solution certified, independent checks agree, negative control trips.
    Certified,
    /// The closed-form angle falls outside `(0, 1)`; nothing to verify.
    Inadmissible,
    /// Some check disagreed.
    Failed,
    /// The case could not be built or solved.
    Error,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CaseReport {
    pub id: String,
    pub group: String,
    pub dim: Option<u32>,
    pub status: CaseStatus,
    pub solution: Option<AngleSolution>,
    pub residual: Option<ResidualReport>,
    pub negative_control: Option<ResidualReport>,
    /// Tension is nonzero, so the map is not harmonic.
    pub proper: Option<bool>,
    /// Residuals of the negative control are tangent to the target sphere.
    pub tangent: Option<bool>,
    /// `|τ|²` is constant; recorded on closed domains and curves.
    pub tension_sq_constant: Option<bool>,
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub config: ScanConfig,
    pub cases: Vec<CaseReport>,
    pub certified: usize,
    pub inadmissible: usize,
    pub failed: usize,
}

impl SuiteReport {
    pub fn all_pass(&self) -> bool {
        self.failed == 0
    }
}

/// Moves `t` by 1/100, staying inside `(0, 1)`.
pub fn perturbed_angle(t: &Q) -> Q {
    let step = q(1, 100);
    let up = t + &step;
    if up < Q::one() {
        up
    } else {
        t - step
    }
}

fn equation_of(flavor: Flavor) -> Equation {
    match flavor {
        Flavor::Biharmonic => Equation::Biharmonic,
        Flavor::CBiharmonic => Equation::CBiharmonic,
    }
}

struct Built {
    map: SphereMap,
    control: SphereMap,
    equation: Equation,
    solution: Option<AngleSolution>,
}

enum Outcome {
    Built(Box<Built>),
    Inadmissible(AngleSolution),
    Error(String),
}

fn build(case: &SuiteCase) -> Outcome {
    let solved = match case {
        SuiteCase::Family(f, m) => f.solve(*m),
        SuiteCase::Cone(b, flavor) => match b.build() {
            Ok(v) => solve_cone(&v, *flavor),
            Err(e) => Err(e.into()),
        },
        SuiteCase::Join(a, b, flavor) => match (a.build(), b.build()) {
            (Ok(v1), Ok(v2)) => solve_join(&v1, &v2, *flavor),
            (Err(e), _) | (_, Err(e)) => Err(e.into()),
        },
        SuiteCase::Curve(a) => {
            let map = match a {
                None => Ok(curve_s2()),
                Some(a) => curve_s3(a.clone()),
            };
            let control = map.as_ref().map_err(|e| e.clone()).and_then(|m| curve_with_amplitude(m, &q(51, 100)));
            return match (map, control) {
                (Ok(map), Ok(control)) => Outcome::Built(Box::new(Built {
                    map,
                    control,
                    equation: Equation::Biharmonic,
                    solution: None,
                })),
                (Err(e), _) | (_, Err(e)) => Outcome::Error(e.to_string()),
            };
        }
    };
    match solved {
        Ok(s) => {
            let t = perturbed_angle(&s.solution.t);
            match s.map.with_angle(t) {
                Ok(control) => Outcome::Built(Box::new(Built {
                    equation: equation_of(s.solution.flavor),
                    map: s.map,
                    control,
                    solution: Some(s.solution),
                })),
                Err(e) => Outcome::Error(e.to_string()),
            }
        }
        Err(DeformError::Inadmissible { solution }) => Outcome::Inadmissible(*solution),
        Err(e) => Outcome::Error(e.to_string()),
    }
}

pub fn run_case(case: &SuiteCase, cfg: &ScanConfig) -> CaseReport {
    let mut report = CaseReport {
        id: case.id(),
        group: case.group(),
        dim: case.dim(),
        status: CaseStatus::Error,
        solution: None,
        residual: None,
        negative_control: None,
        proper: None,
        tangent: None,
        tension_sq_constant: None,
        detail: None,
    };
    let built = match build(case) {
        Outcome::Built(b) => b,
        Outcome::Inadmissible(s) => {
            report.status = CaseStatus::Inadmissible;
            report.solution = Some(s);
            return report;
        }
        Outcome::Error(e) => {
            report.detail = Some(e);
            return report;
        }
    };
    report.solution = built.solution.clone();
    let scans = (
        residual_scan(&built.map, built.equation, true, cfg),
        residual_scan(&built.control, built.equation, false, cfg),
        residual(&built.control, built.equation),
    );
    let (main, neg, control_residual) = match scans {
        (Ok(a), Ok(b), Ok(c)) => (a, b, c),
        (Err(e), _, _) | (_, Err(e), _) => {
            report.detail = Some(e.to_string());
            return report;
        }
        (_, _, Err(e)) => {
            report.detail = Some(e.to_string());
            return report;
        }
    };
    let tension = tension_residual(&built.map);
    let proper = !tension.is_zero();
    let tangent = tangency_defect(&built.control, &control_residual).is_zero()
        && tangency_defect(&built.map, &tension).is_zero();
    let closed = built.map.domain.is_closed()
        || built.map.domain.kind == crate::domain::DomainKind::ArcLengthInterval;
    let tau_const = closed.then(|| residual_norm_sq(&tension).is_spatially_constant());
    let ok = main.pass && neg.pass && proper && tangent && tau_const != Some(false);
    report.status = if ok { CaseStatus::Certified } else { CaseStatus::Failed };
    report.residual = Some(main);
    report.negative_control = Some(neg);
    report.proper = Some(proper);
    report.tangent = Some(tangent);
    report.tension_sq_constant = tau_const;
    report
}

pub fn certify_solution_suite(cases: &[SuiteCase], cfg: &ScanConfig) -> SuiteReport {
    let reports = exec::par_map(cases, |c| run_case(c, cfg));
    let count = |s: CaseStatus| reports.iter().filter(|r| r.status == s).count();
    SuiteReport {
        config: *cfg,
        certified: count(CaseStatus::Certified),
        inadmissible: count(CaseStatus::Inadmissible),
        failed: count(CaseStatus::Failed) + count(CaseStatus::Error),
        cases: reports,
    }
}
