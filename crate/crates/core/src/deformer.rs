//! Closed-form angle solvers for the cone `(√t·v, √(1−t))` and the join
//! `(√t·v₁, √(1−t)·v₂)` of harmonic maps.
//!
//! Testing the reduced equations against the maps themselves leaves a scalar
//! constraint of the form `L = k · e²`:
//!
//! * cone: `Δe − κe = (1 − 2t) e²` with `e = |∇v|²`,
//! * join: `Δd − κd = cos 2β · d²` with `d = |∇v₁|² − |∇v₂|²`,
//!
//! where `κ = 0` for the bitension and `κ = (2/3)(m−1)(m−3)` for the
//! conformal bitension on `Sᵐ`. The solver finds `k` exactly, checks that the
//! cross terms `⟨∇e, ∇v⟩` vanish, and then certifies the full residual of the
//! resulting map before reporting it.

use crate::domain::{DomainKind, DomainSpec};
use crate::field::Field;
use crate::functionals::{
    c_bitension_residual, bitension_residual, cross_terms, energy_density, tension_residual,
    Certificate, FunctionalError,
};
use crate::map::{cone, join, MapError, SphereMap};
use crate::rational::{fmt_q, in_open_unit_interval, q, qi, Q};
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Flavor {
    Biharmonic,
    CBiharmonic,
}

impl Flavor {
    pub fn name(&self) -> &'static str {
        match self {
            Flavor::Biharmonic => "biharmonic",
            Flavor::CBiharmonic => "cbiharmonic",
        }
    }

    fn kappa(&self, domain: &DomainSpec) -> Q {
        match self {
            Flavor::Biharmonic => Q::zero(),
            Flavor::CBiharmonic => domain.conformal_kappa(),
        }
    }
}

/// The energy-density shapes the solver handles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DensityShape {
    Constant(Q),
    /// `c / r²`.
    InverseSquare(Q),
    Other,
}

pub fn density_shape(e: &Field) -> DensityShape {
    if let Some(c) = e.as_constant() {
        return DensityShape::Constant(c);
    }
    match e.as_radial().and_then(|r| r.as_inverse_square()) {
        Some(c) => DensityShape::InverseSquare(c),
        None => DensityShape::Other,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Construction {
    Cone,
    Join,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AngleSolution {
    pub construction: Construction,
    pub flavor: Flavor,
    /// `sin²` of the angle, i.e. the weight on the first factor.
    #[serde(serialize_with = "crate::rational::serde_q::serialize")]
    pub t: Q,
    /// `cos 2β = 1 − 2t`, reported for joins.
    #[serde(serialize_with = "crate::rational::serde_q::option::serialize")]
    pub cos2: Option<Q>,
    pub admissible: bool,
    pub constraint_source: String,
    pub notes: Vec<String>,
}

impl fmt::Display for AngleSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t = {} (~{:.12})", fmt_q(&self.t), crate::rational::to_f64(&self.t))?;
        if let Some(c) = &self.cos2 {
            write!(f, ", cos 2beta = {}", fmt_q(c))?;
        }
        write!(f, ", {}", if self.admissible { "admissible" } else { "inadmissible" })
    }
}

/// The scalar constraint with the solved angle substituted.
#[derive(Clone, Debug)]
pub struct ConstraintReport {
    pub lhs: Field,
    pub rhs: Field,
    pub satisfied: Certificate,
}

#[derive(Clone, Debug)]
pub struct Solved {
    pub solution: AngleSolution,
    pub report: ConstraintReport,
    pub map: SphereMap,
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum DeformError {
    #[error("input map {0} is not harmonic: {1}")]
    NotHarmonic(String, String),
    #[error("unsupported energy density {0}: only constant and c/r^2 densities are solved")]
    UnsupportedDensity(String),
    #[error("non-constant energy density {0} on a closed domain admits no solution")]
    NonConstantClosed(String),
    #[error("equal energy densities: the join would be harmonic, not proper")]
    HarmonicOutcome,
    #[error("inadmissible angle: {solution}")]
    Inadmissible { solution: Box<AngleSolution> },
    #[error("cross term does not vanish: {0}")]
    CrossTerm(String),
    #[error("residual of the solved map does not vanish: {0:?}")]
    ResidualNonzero(Certificate),
    #[error("constraint has no scalar solution: {0}")]
    NoScalarSolution(String),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Functional(#[from] FunctionalError),
}

fn require_harmonic(v: &SphereMap) -> Result<(), DeformError> {
    match tension_residual(v).certificate() {
        Certificate::Zero => Ok(()),
        Certificate::Nonzero { component, witness } => Err(DeformError::NotHarmonic(
            v.name.clone(),
            format!("component {component}: {witness}"),
        )),
    }
}

/// Finds `k` with `lhs = k · base` exactly, if one exists.
fn scalar_ratio(lhs: &Field, base: &Field) -> Option<Q> {
    if lhs.is_zero() {
        return Some(Q::zero());
    }
    let k = match (lhs, base) {
        (Field::Radial(a), Field::Radial(b)) => {
            let (ma, ca) = a.leading_term()?;
            let (mb, cb) = b.leading_term()?;
            if ma != mb {
                return None;
            }
            ca / cb
        }
        _ => lhs.as_constant()? / base.as_constant()?,
    };
    lhs.sub(&base.scale(&k)).is_zero().then_some(k)
}

fn check_density(e: &Field, domain: &DomainSpec) -> Result<(), DeformError> {
    match (density_shape(e), domain.kind) {
        (DensityShape::Constant(_), _) => Ok(()),
        (_, DomainKind::RoundSphere) => Err(DeformError::NonConstantClosed(e.to_string())),
        (DensityShape::InverseSquare(_), DomainKind::PuncturedEuclidean) => Ok(()),
        _ => Err(DeformError::UnsupportedDensity(e.to_string())),
    }
}

fn certify_cross_terms(v: &SphereMap, densities: &[&Field]) -> Result<(), DeformError> {
    for e in densities {
        if e.as_constant().is_some() {
            continue;
        }
        for (i, f) in cross_terms(v, e).iter().enumerate() {
            if let crate::radial::ZeroVerdict::Nonzero { witness } = f.verdict() {
                return Err(DeformError::CrossTerm(format!(
                    "<grad e, grad {}[{i}]>: {witness}",
                    v.name
                )));
            }
        }
    }
    Ok(())
}

fn certify_map(map: &SphereMap, flavor: Flavor) -> Result<(), DeformError> {
    let residual = match flavor {
        Flavor::Biharmonic => bitension_residual(map),
        Flavor::CBiharmonic => c_bitension_residual(map)?,
    };
    match residual.certificate() {
        Certificate::Zero => Ok(()),
        c => Err(DeformError::ResidualNonzero(c)),
    }
}

fn finish(
    map: SphereMap,
    flavor: Flavor,
    mut solution: AngleSolution,
    report: ConstraintReport,
) -> Result<Solved, DeformError> {
    certify_map(&map, flavor)?;
    if tension_residual(&map).is_zero() {
        return Err(DeformError::HarmonicOutcome);
    }
    if map.domain.kind == DomainKind::PuncturedEuclidean
        && map.domain.dim == 4
        && solution.t == q(1, 2)
    {
        solution.notes.push(
            "critical dimension m = 4: the angle reduces to t = 1/2, the overall factor 1/sqrt(2)"
                .to_string(),
        );
    }
    Ok(Solved { solution, report, map })
}

/// Solves `Δe − κe = (1 − 2t) e²` for the cone over a harmonic map `v`.
pub fn solve_cone(v: &SphereMap, flavor: Flavor) -> Result<Solved, DeformError> {
    require_harmonic(v)?;
    let kappa = flavor.kappa(&v.domain);
    if flavor == Flavor::CBiharmonic && v.domain.kind == DomainKind::ArcLengthInterval {
        return Err(FunctionalError::UnsupportedDomain(v.domain.to_string()).into());
    }
    let e = energy_density(v);
    if e.is_zero() {
        return Err(DeformError::UnsupportedDensity("0 (constant map)".into()));
    }
    check_density(&e, &v.domain)?;
    certify_cross_terms(v, &[&e])?;
    let lhs = e.laplacian(&v.domain).sub(&e.scale(&kappa));
    let e2 = e.mul(&e);
    let k = scalar_ratio(&lhs, &e2).ok_or_else(|| DeformError::NoScalarSolution(lhs.to_string()))?;
    let t = (Q::one() - &k) / qi(2);
    let rhs = e2.scale(&k);
    let report = ConstraintReport {
        satisfied: certificate_of(&lhs.sub(&rhs)),
        lhs,
        rhs,
    };
    let solution = AngleSolution {
        construction: Construction::Cone,
        flavor,
        admissible: in_open_unit_interval(&t),
        t: t.clone(),
        cos2: None,
        constraint_source: match flavor {
            Flavor::Biharmonic => "Δ|∇v|² = (1 − 2 sin²α)|∇v|⁴".into(),
            Flavor::CBiharmonic => {
                "Δ|∇v|² = (1 − 2 sin²α)|∇v|⁴ + (2/3)(m−1)(m−3)|∇v|²".into()
            }
        },
        notes: Vec::new(),
    };
    if !solution.admissible {
        return Err(DeformError::Inadmissible { solution: Box::new(solution) });
    }
    let map = cone(v, t)?;
    finish(map, flavor, solution, report)
}

/// Solves `Δd − κd = cos 2β · d²`, `d = |∇v₁|² − |∇v₂|²`, for the join.
pub fn solve_join(v1: &SphereMap, v2: &SphereMap, flavor: Flavor) -> Result<Solved, DeformError> {
    if v1.domain != v2.domain {
        return Err(MapError::DomainMismatch(v1.domain.to_string(), v2.domain.to_string()).into());
    }
    if flavor == Flavor::CBiharmonic && v1.domain.kind == DomainKind::ArcLengthInterval {
        return Err(FunctionalError::UnsupportedDomain(v1.domain.to_string()).into());
    }
    require_harmonic(v1)?;
    require_harmonic(v2)?;
    let domain = v1.domain;
    let kappa = flavor.kappa(&domain);
    let e1 = energy_density(v1);
    let e2 = energy_density(v2);
    check_density(&e1, &domain)?;
    check_density(&e2, &domain)?;
    let d = e1.sub(&e2);
    if d.is_zero() {
        return Err(DeformError::HarmonicOutcome);
    }
    certify_cross_terms(v1, &[&e1, &e2])?;
    certify_cross_terms(v2, &[&e1, &e2])?;
    let lhs = d.laplacian(&domain).sub(&d.scale(&kappa));
    let d2 = d.mul(&d);
    let cos2 =
        scalar_ratio(&lhs, &d2).ok_or_else(|| DeformError::NoScalarSolution(lhs.to_string()))?;
    let t = (Q::one() - &cos2) / qi(2);
    let rhs = d2.scale(&cos2);
    let report = ConstraintReport { satisfied: certificate_of(&lhs.sub(&rhs)), lhs, rhs };
    let solution = AngleSolution {
        construction: Construction::Join,
        flavor,
        admissible: cos2.abs() < Q::one(),
        t: t.clone(),
        cos2: Some(cos2),
        constraint_source: match flavor {
            Flavor::Biharmonic => "Δ(|∇v₁|² − |∇v₂|²) = cos 2β (|∇v₁|² − |∇v₂|²)²".into(),
            Flavor::CBiharmonic => "cos 2β = −(2/3)(m−1)(m−3)/(λ₁ − λ₂)".into(),
        },
        notes: Vec::new(),
    };
    if !solution.admissible {
        return Err(DeformError::Inadmissible { solution: Box::new(solution) });
    }
    let map = join(v1, v2, t)?;
    finish(map, flavor, solution, report)
}

fn certificate_of(f: &Field) -> Certificate {
    match f.verdict() {
        crate::radial::ZeroVerdict::Zero => Certificate::Zero,
        crate::radial::ZeroVerdict::Nonzero { witness } => {
            Certificate::Nonzero { component: 0, witness }
        }
    }
}

pub fn solve_cone_biharmonic(v: &SphereMap) -> Result<Solved, DeformError> {
    solve_cone(v, Flavor::Biharmonic)
}

pub fn solve_join_biharmonic(v1: &SphereMap, v2: &SphereMap) -> Result<Solved, DeformError> {
    solve_join(v1, v2, Flavor::Biharmonic)
}

pub fn solve_cone_cbiharmonic(v: &SphereMap) -> Result<Solved, DeformError> {
    solve_cone(v, Flavor::CBiharmonic)
}

pub fn solve_join_cbiharmonic(v1: &SphereMap, v2: &SphereMap) -> Result<Solved, DeformError> {
    solve_join(v1, v2, Flavor::CBiharmonic)
}

/// The degree bound for conformal-biharmonic cones over degree-`k` eigenmaps
/// of `Sᵐ`: `k > (√(3(11m²−38m+27)) − 3m + 3)/6`, decided exactly. When the
/// discriminant is negative the bound holds for every `k`.
pub fn cbi_degree_bound(m: u32, k: u32) -> bool {
    let (m, k) = (m as i64, k as i64);
    let disc = 3 * (11 * m * m - 38 * m + 27);
    if disc < 0 {
        return true;
    }
    let lhs = 6 * k + 3 * m - 3;
    lhs > 0 && lhs * lhs > disc
}

/// Named families with the dimension ranges stated alongside their formulas.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    PiCone,
    MuCone,
    NuCone,
    W1,
    W2,
    W3,
    SmallHypersphereCbi,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DimRange {
    pub lo: u32,
    /// `None` for unbounded ranges.
    pub hi: Option<u32>,
}

impl DimRange {
    pub fn contains(&self, m: u32) -> bool {
        m >= self.lo && self.hi.is_none_or(|h| m <= h)
    }
}

impl fmt::Display for DimRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.hi {
            Some(h) => write!(f, "[{},{}]", self.lo, h),
            None => write!(f, "[{},inf)", self.lo),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown family `{0}`")]
pub struct UnknownFamily(pub String);

impl Family {
    pub const ALL: [Family; 7] = [
        Family::PiCone,
        Family::MuCone,
        Family::NuCone,
        Family::W1,
        Family::W2,
        Family::W3,
        Family::SmallHypersphereCbi,
    ];

    pub fn key(&self) -> &'static str {
        match self {
            Family::PiCone => "pi",
            Family::MuCone => "mu",
            Family::NuCone => "nu",
            Family::W1 => "w1",
            Family::W2 => "w2",
            Family::W3 => "w3",
            Family::SmallHypersphereCbi => "small-hypersphere-cbi",
        }
    }

    pub fn parse(s: &str) -> Result<Family, UnknownFamily> {
        let key = s.trim().to_ascii_lowercase();
        Family::ALL
            .into_iter()
            .find(|f| f.key() == key)
            .ok_or(UnknownFamily(s.to_string()))
    }

    pub fn description(&self) -> &'static str {
        match self {
            Family::PiCone => "cone over pi = x/r on R^m minus 0",
            Family::MuCone => "cone over mu on R^m minus 0",
            Family::NuCone => "cone over nu on R^m minus 0",
            Family::W1 => "join of pi and mu on R^m minus 0",
            Family::W2 => "join of pi and nu on R^m minus 0",
            Family::W3 => "join of mu and nu on R^m minus 0",
            Family::SmallHypersphereCbi => "conformal-biharmonic cone over the identity of S^m",
        }
    }

    pub fn formula(&self) -> &'static str {
        match self {
            Family::PiCone => "sin^2(alpha) = (3/2)(m-3)/(m-1)",
            Family::MuCone => "sin^2(beta) = (m-2)/m",
            Family::NuCone => "sin^2(gamma) = (5/6)(m-1)/(m+1)",
            Family::W1 => "cos(2 alpha) = 2(m-4)/(m+1)",
            Family::W2 => "cos(2 beta) = (m-4)/(m+2)",
            Family::W3 => "cos(2 gamma) = 2(m-4)/(m+3)",
            Family::SmallHypersphereCbi => "sin^2(alpha) = (1/3)(m-1)(m-3)/m + 1/2",
        }
    }

    pub fn flavor(&self) -> Flavor {
        match self {
            Family::SmallHypersphereCbi => Flavor::CBiharmonic,
            _ => Flavor::Biharmonic,
        }
    }

    /// Builds the input map(s) for dimension `m` and runs the solver.
    pub fn solve(&self, m: u32) -> Result<Solved, DeformError> {
        use crate::catalog::{identity_sphere, make_mu, make_nu, make_pi};
        match self {
            Family::PiCone => solve_cone_biharmonic(&make_pi(m)?),
            Family::MuCone => solve_cone_biharmonic(&make_mu(m)?),
            Family::NuCone => solve_cone_biharmonic(&make_nu(m)?),
            Family::W1 => solve_join_biharmonic(&make_pi(m)?, &make_mu(m)?),
            Family::W2 => solve_join_biharmonic(&make_pi(m)?, &make_nu(m)?),
            Family::W3 => solve_join_biharmonic(&make_mu(m)?, &make_nu(m)?),
            Family::SmallHypersphereCbi => solve_cone_cbiharmonic(&identity_sphere(m)?),
        }
    }

    /// Smallest dimension at which the family's input maps exist.
    pub fn min_dim(&self) -> u32 {
        match self {
            Family::SmallHypersphereCbi => 1,
            _ => 2,
        }
    }
}

/// Dimension range as stated with each family's formula.
pub fn admissible_range(family: Family) -> DimRange {
    match family {
        Family::PiCone => DimRange { lo: 4, hi: Some(6) },
        Family::MuCone => DimRange { lo: 3, hi: None },
        Family::NuCone => DimRange { lo: 2, hi: None },
        Family::W1 => DimRange { lo: 4, hi: Some(8) },
        Family::W2 => DimRange { lo: 2, hi: None },
        Family::W3 => DimRange { lo: 3, hi: Some(10) },
        Family::SmallHypersphereCbi => DimRange { lo: 1, hi: Some(4) },
    }
}
