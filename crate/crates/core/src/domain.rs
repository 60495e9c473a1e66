//! Domains: punctured Euclidean space, round spheres and arc-length intervals.

use crate::rational::{qi, Q};
use serde::Serialize;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DomainKind {
    /// `ℝᵐ∖{0}`.
    PuncturedEuclidean,
    /// `Sᵐ ⊂ ℝᵐ⁺¹`, handled through degree-0 homogeneous extensions.
    RoundSphere,
    /// A curve parametrized by arc length.
    ArcLengthInterval,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct DomainSpec {
    pub kind: DomainKind,
    pub dim: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DomainError {
    #[error("domain dimension must be at least {min}, got {got}")]
    DimensionTooSmall { min: u32, got: u32 },
}

impl DomainSpec {
    pub fn punctured(m: u32) -> Result<Self, DomainError> {
        if m < 2 {
            return Err(DomainError::DimensionTooSmall { min: 2, got: m });
        }
        Ok(DomainSpec { kind: DomainKind::PuncturedEuclidean, dim: m })
    }

    pub fn sphere(m: u32) -> Result<Self, DomainError> {
        if m < 1 {
            return Err(DomainError::DimensionTooSmall { min: 1, got: m });
        }
        Ok(DomainSpec { kind: DomainKind::RoundSphere, dim: m })
    }

    pub fn arc() -> Self {
        DomainSpec { kind: DomainKind::ArcLengthInterval, dim: 1 }
    }

    /// Ricci coefficient `ρ` with `Ric = ρ g`.
    pub fn ricci(&self) -> Q {
        match self.kind {
            DomainKind::RoundSphere => qi(self.dim as i64 - 1),
            _ => qi(0),
        }
    }

    pub fn scalar_curvature(&self) -> Q {
        self.ricci() * qi(self.dim as i64)
    }

    /// Coefficient `(2/3)Scal − 2ρ` that multiplies `Δu` and `|∇u|²` in the
    /// conformal bitension for an Einstein domain; `(2/3)(m−1)(m−3)` on `Sᵐ`.
    pub fn conformal_kappa(&self) -> Q {
        self.scalar_curvature() * Q::new(2.into(), 3.into()) - self.ricci() * qi(2)
    }

    pub fn is_closed(&self) -> bool {
        self.kind == DomainKind::RoundSphere
    }

    /// Number of coordinates the component expressions are written in.
    pub fn coords(&self) -> usize {
        match self.kind {
            DomainKind::PuncturedEuclidean => self.dim as usize,
            DomainKind::RoundSphere => self.dim as usize + 1,
            DomainKind::ArcLengthInterval => 1,
        }
    }
}

impl fmt::Display for DomainSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            DomainKind::PuncturedEuclidean => write!(f, "R^{}\\{{0}}", self.dim),
            DomainKind::RoundSphere => write!(f, "S^{}", self.dim),
            DomainKind::ArcLengthInterval => write!(f, "arc-length interval"),
        }
    }
}
