//! Energy densities and Euler–Lagrange residuals in the extrinsic picture.
//!
//! For `u = (√w_a f_a)` every residual component factors as
//! `√w_a · bracket_a` with a rational bracket, so certification happens on
//! the brackets. With `e = |∇u|²`, `D = ⟨Δ²u, u⟩` and
//! `κ = (2/3)Scal − 2ρ` (`Ric = ρg`):
//!
//! * tension: `Δf + e f`
//! * bitension: `Δ²f + 2(⟨∇e,∇f⟩ + eΔf) − (D − 2e²) f`
//! * conformal bitension: `Δ²f + 2(⟨∇e,∇f⟩ + eΔf) − κΔf − (D − 2e² + κe) f`

use crate::domain::{DomainKind, DomainSpec};
use crate::exec;
use crate::field::Field;
use crate::map::SphereMap;
use crate::radial::ZeroVerdict;
use crate::rational::Q;
use num_traits::Zero;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Equation {
    Harmonic,
    Biharmonic,
    CBiharmonic,
}

impl Equation {
    pub fn name(&self) -> &'static str {
        match self {
            Equation::Harmonic => "harmonic",
            Equation::Biharmonic => "biharmonic",
            Equation::CBiharmonic => "cbiharmonic",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FunctionalError {
    #[error("the conformal bitension is defined here only on round spheres and flat domains, not on {0}")]
    UnsupportedDomain(String),
    #[error("input is not harmonic: {0}")]
    NotHarmonic(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidualComponent {
    /// `w` in `√w · bracket`.
    pub factor_sq: Q,
    pub bracket: Field,
}

/// A residual vector field along the map, one bracket per non-padding
/// ambient component (padding components vanish identically).
#[derive(Clone, Debug)]
pub struct ResidualField {
    pub equation: Equation,
    pub components: Vec<ResidualComponent>,
}

/// Outcome of certifying a residual field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Certificate {
    Zero,
    Nonzero { component: usize, witness: String },
}

impl Certificate {
    pub fn is_zero(&self) -> bool {
        matches!(self, Certificate::Zero)
    }
}

impl ResidualField {
    pub fn certificate(&self) -> Certificate {
        for (i, c) in self.components.iter().enumerate() {
            if c.factor_sq.is_zero() {
                continue;
            }
            if let ZeroVerdict::Nonzero { witness } = c.bracket.verdict() {
                return Certificate::Nonzero { component: i, witness };
            }
        }
        Certificate::Zero
    }

    pub fn is_zero(&self) -> bool {
        self.certificate().is_zero()
    }
}

/// Flattened component data of a map: `(w, f, Δf, Δ²f)` per non-padding
/// ambient component.
struct Flat<'a> {
    weight: Q,
    field: &'a Field,
    lap: &'a Field,
    bilap: &'a Field,
}

fn with_flat<T>(u: &SphereMap, f: impl FnOnce(&[Flat<'_>], &Field, &Field) -> T) -> T {
    let blocks = u.blocks();
    let mut flat = Vec::new();
    let mut energy: Option<Field> = None;
    let mut bilap_dot: Option<Field> = None;
    for b in &blocks {
        let d = b.map.derived();
        let e = d.energy.scale(&b.scale);
        let bd = d.bilap_dot.scale(&b.scale);
        energy = Some(match energy {
            None => e,
            Some(acc) => acc.add(&e),
        });
        bilap_dot = Some(match bilap_dot {
            None => bd,
            Some(acc) => acc.add(&bd),
        });
        for (i, c) in b.map.components().iter().enumerate() {
            flat.push(Flat {
                weight: &b.scale * &c.weight,
                field: &c.field,
                lap: &d.lap[i],
                bilap: &d.bilap[i],
            });
        }
    }
    f(&flat, &energy.expect("nonempty map"), &bilap_dot.expect("nonempty map"))
}

/// `|∇u|²`.
pub fn energy_density(u: &SphereMap) -> Field {
    with_flat(u, |_, e, _| e.clone())
}

/// `⟨Δ²u, u⟩`.
pub fn bilaplacian_pairing(u: &SphereMap) -> Field {
    with_flat(u, |_, _, d| d.clone())
}

pub fn tension_residual(u: &SphereMap) -> ResidualField {
    with_flat(u, |flat, e, _| {
        let components = exec::par_map(flat, |c| ResidualComponent {
            factor_sq: c.weight.clone(),
            bracket: c.lap.add(&e.mul(c.field)),
        });
        ResidualField { equation: Equation::Harmonic, components }
    })
}

fn fourth_order(u: &SphereMap, kappa: &Q, equation: Equation) -> ResidualField {
    let domain = u.domain;
    with_flat(u, |flat, e, d| {
        let two = Q::from_integer(2.into());
        let e2 = e.mul(e);
        // D − 2e² + κe
        let scalar = d.sub(&e2.scale(&two)).add(&e.scale(kappa));
        let components = exec::par_map(flat, |c| {
            let div = e.grad_dot(c.field, &domain).add(&e.mul(c.lap));
            let bracket = c
                .bilap
                .add(&div.scale(&two))
                .sub(&c.lap.scale(kappa))
                .sub(&scalar.mul(c.field));
            ResidualComponent { factor_sq: c.weight.clone(), bracket }
        });
        ResidualField { equation, components }
    })
}

pub fn bitension_residual(u: &SphereMap) -> ResidualField {
    fourth_order(u, &Q::zero(), Equation::Biharmonic)
}

pub fn c_bitension_residual(u: &SphereMap) -> Result<ResidualField, FunctionalError> {
    if u.domain.kind == DomainKind::ArcLengthInterval {
        return Err(FunctionalError::UnsupportedDomain(u.domain.to_string()));
    }
    Ok(fourth_order(u, &u.domain.conformal_kappa(), Equation::CBiharmonic))
}

pub fn residual(u: &SphereMap, equation: Equation) -> Result<ResidualField, FunctionalError> {
    match equation {
        Equation::Harmonic => Ok(tension_residual(u)),
        Equation::Biharmonic => Ok(bitension_residual(u)),
        Equation::CBiharmonic => c_bitension_residual(u),
    }
}

/// `Δ²v + Δ(|∇v|²)v + 2⟨∇|∇v|², ∇v⟩ − |∇v|⁴v`, which vanishes for harmonic `v`.
pub fn laplace_of_harmonic_identity(v: &SphereMap) -> Result<ResidualField, FunctionalError> {
    if let Certificate::Nonzero { component, witness } = tension_residual(v).certificate() {
        return Err(FunctionalError::NotHarmonic(format!("component {component}: {witness}")));
    }
    let domain = v.domain;
    Ok(with_flat(v, |flat, e, _| {
        let lap_e = e.laplacian(&domain);
        let e2 = e.mul(e);
        let two = Q::from_integer(2.into());
        let components = exec::par_map(flat, |c| ResidualComponent {
            factor_sq: c.weight.clone(),
            bracket: c
                .bilap
                .add(&lap_e.mul(c.field))
                .add(&e.grad_dot(c.field, &domain).scale(&two))
                .sub(&e2.mul(c.field)),
        });
        ResidualField { equation: Equation::Harmonic, components }
    }))
}

/// `⟨R, u⟩ = Σ w f · bracket`; identically zero for the tangent residuals.
pub fn tangency_defect(u: &SphereMap, r: &ResidualField) -> Field {
    with_flat(u, |flat, e, _| {
        let mut acc = e.zero_like();
        for (c, rc) in flat.iter().zip(&r.components) {
            acc = acc.add(&c.field.mul(&rc.bracket).scale(&c.weight));
        }
        acc
    })
}

/// `|R|² = Σ w · bracket²`.
pub fn residual_norm_sq(r: &ResidualField) -> Field {
    let parts = exec::par_map(&r.components, |c| c.bracket.mul(&c.bracket).scale(&c.factor_sq));
    let mut it = parts.into_iter();
    let first = it.next().expect("nonempty residual");
    it.fold(first, |a, b| a.add(&b))
}

/// Radial cross-term `⟨∇e, ∇f⟩` for every component `f` of `v`, with `e = |∇v|²`
/// of the same map; all vanish for the radial families.
pub fn cross_terms(v: &SphereMap, density: &Field) -> Vec<Field> {
    let domain: DomainSpec = v.domain;
    with_flat(v, |flat, _, _| exec::par_map(flat, |c| density.grad_dot(c.field, &domain)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::*;
    use crate::map::{cone, join};
    use crate::radial::RadialExpr;
    use crate::rational::{q, qi};

    #[test]
    fn harmonic_catalog_maps() {
        for m in [2u32, 3, 5] {
            for v in [make_pi(m).unwrap(), make_mu(m).unwrap(), make_nu(m).unwrap()] {
                assert!(tension_residual(&v).is_zero(), "{}", v.name);
                assert!(bitension_residual(&v).is_zero(), "{}", v.name);
                assert!(laplace_of_harmonic_identity(&v).unwrap().is_zero());
            }
        }
        assert!(tension_residual(&identity_sphere(3).unwrap()).is_zero());
        assert!(tension_residual(&hopf().unwrap()).is_zero());
    }

    #[test]
    fn pi_cone_examples() {
        let p = make_pi(5).unwrap();
        let good = cone(&p, q(3, 4)).unwrap();
        assert!(!tension_residual(&good).is_zero());
        assert!(bitension_residual(&good).is_zero());
        assert!(!bitension_residual(&cone(&p, q(1, 2)).unwrap()).is_zero());
        let e = energy_density(&good);
        assert_eq!(e, Field::Radial(RadialExpr::r_pow(5, -2).scale(&qi(3))));
    }

    #[test]
    fn closed_cone_energy_and_cbi() {
        let id = identity_sphere(3).unwrap();
        let w = cone(&id, q(1, 2)).unwrap();
        assert_eq!(energy_density(&w).as_constant(), Some(q(3, 2)));
        assert!(bitension_residual(&w).is_zero());
        let cbi = c_bitension_residual(&w).unwrap();
        assert!(cbi.is_zero());
        let e5 = identity_sphere(2).unwrap();
        // t = (1/3)(m−1)(m−3)/λ + 1/2 with m = 2, λ = 2
        let t = q(1, 3) * qi(-1) / qi(2) + q(1, 2);
        assert!(c_bitension_residual(&cone(&e5, t).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn tangency_and_join() {
        let m = 5;
        let w = join(&make_pi(m).unwrap(), &make_mu(m).unwrap(), q(1, 3)).unwrap();
        let r = bitension_residual(&w);
        assert!(r.is_zero());
        assert!(tangency_defect(&w, &tension_residual(&w)).is_zero());
        let bad = w.with_angle(q(1, 2)).unwrap();
        let rb = bitension_residual(&bad);
        assert!(!rb.is_zero());
        assert!(tangency_defect(&bad, &rb).is_zero());
    }

    #[test]
    fn curve_residuals() {
        for c in [curve_s2(), curve_s3(q(3, 2)).unwrap()] {
            assert!(bitension_residual(&c).is_zero());
            assert!(!tension_residual(&c).is_zero());
            assert!(c_bitension_residual(&c).is_err());
        }
    }
}
