//! Finite-difference oracle in double-double arithmetic.
//!
//! Works from map values alone: no derivative of the exact expressions is
//! used. The Laplacian is the nested central stencil
//! `L_h g(y) = w(y) Σᵢ (g(y+heᵢ) − 2g(y) + g(y−heᵢ)) / h²` with `w = |y|²` on
//! spheres (degree-zero extension) and `w = 1` otherwise, and `Δ² ≈ L_h L_h`.
//! Residuals use `e = −⟨u, Lu⟩` and `div(e∇u) = ½(L(eu) + e·Lu − u·Le)`.

use crate::dd::DD;
use crate::domain::{DomainKind, DomainSpec};
use crate::eval::NumericMap;
use crate::functionals::Equation;
use crate::rational::to_f64;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FdError {
    #[error("point at radius {radius} is within {reach} of the singular set (h = {h})")]
    Clearance { radius: f64, reach: f64, h: f64 },
    #[error("point has {got} coordinates, domain {domain} needs {want}")]
    Dimension { got: usize, want: usize, domain: String },
    #[error("the conformal bitension is not defined on {0}")]
    UnsupportedDomain(String),
}

fn check(domain: &DomainSpec, point: &[f64], h: f64) -> Result<(), FdError> {
    if point.len() != domain.coords() {
        return Err(FdError::Dimension {
            got: point.len(),
            want: domain.coords(),
            domain: domain.to_string(),
        });
    }
    if domain.kind != DomainKind::ArcLengthInterval {
        // nested stencils reach up to 2h away from the point
        let radius = point.iter().map(|x| x * x).sum::<f64>().sqrt();
        let reach = 2.0 * h;
        if radius <= 2.0 * reach {
            return Err(FdError::Clearance { radius, reach, h });
        }
    }
    Ok(())
}

/// The star `y, y+he₀, y−he₀, y+he₁, …` in evaluation order.
fn star(y: &[DD], h: DD) -> Vec<Vec<DD>> {
    let mut out = Vec::with_capacity(2 * y.len() + 1);
    out.push(y.to_vec());
    for i in 0..y.len() {
        for s in [h, -h] {
            let mut z = y.to_vec();
            z[i] = z[i] + s;
            out.push(z);
        }
    }
    out
}

/// Applies `L_h` given vector values on the star of `y`.
fn combine(domain: &DomainSpec, y: &[DD], h: DD, vals: &[Vec<DD>]) -> Vec<DD> {
    let w = match domain.kind {
        DomainKind::RoundSphere => y.iter().fold(DD::ZERO, |a, &x| a + x * x),
        _ => DD::ONE,
    };
    let scale = w / (h * h);
    let center = &vals[0];
    (0..center.len())
        .map(|a| {
            let mut acc = DD::ZERO;
            for i in 0..y.len() {
                acc = acc + vals[1 + 2 * i][a] + vals[2 + 2 * i][a] - center[a].mul_f64(2.0);
            }
            acc * scale
        })
        .collect()
}

fn to_dd(point: &[f64]) -> Vec<DD> {
    point.iter().map(|&x| DD::new(x)).collect()
}

fn lap_dd(map: &NumericMap, domain: &DomainSpec, y: &[DD], h: DD) -> Vec<DD> {
    let vals: Vec<Vec<DD>> = star(y, h).iter().map(|z| map.eval(z)).collect();
    combine(domain, y, h, &vals)
}

pub fn fd_laplacian(
    map: &NumericMap,
    domain: &DomainSpec,
    point: &[f64],
    h: f64,
) -> Result<Vec<DD>, FdError> {
    check(domain, point, h)?;
    Ok(lap_dd(map, domain, &to_dd(point), DD::new(h)))
}

pub fn fd_bilaplacian(
    map: &NumericMap,
    domain: &DomainSpec,
    point: &[f64],
    h: f64,
) -> Result<Vec<DD>, FdError> {
    check(domain, point, h)?;
    let y = to_dd(point);
    let hh = DD::new(h);
    let inner: Vec<Vec<DD>> = star(&y, hh).iter().map(|z| lap_dd(map, domain, z, hh)).collect();
    Ok(combine(domain, &y, hh, &inner))
}

fn dot(a: &[DD], b: &[DD]) -> DD {
    a.iter().zip(b).fold(DD::ZERO, |acc, (&x, &y)| acc + x * y)
}

/// Residual vector of `equation` at `point`, from values of `u` only.
pub fn fd_residual(
    map: &NumericMap,
    domain: &DomainSpec,
    equation: Equation,
    point: &[f64],
    h: f64,
) -> Result<Vec<DD>, FdError> {
    check(domain, point, h)?;
    let y = to_dd(point);
    let hh = DD::new(h);
    // (u, Lu, e) on the star
    let level: Vec<(Vec<DD>, Vec<DD>, DD)> = star(&y, hh)
        .iter()
        .map(|z| {
            let u = map.eval(z);
            let lu = lap_dd(map, domain, z, hh);
            let e = -dot(&u, &lu);
            (u, lu, e)
        })
        .collect();
    let (u, lu, e) = &level[0];
    if equation == Equation::Harmonic {
        return Ok(u.iter().zip(lu).map(|(&ua, &la)| la + *e * ua).collect());
    }
    let kappa = match equation {
        Equation::CBiharmonic => {
            if domain.kind == DomainKind::ArcLengthInterval {
                return Err(FdError::UnsupportedDomain(domain.to_string()));
            }
            DD::new(to_f64(&domain.conformal_kappa()))
        }
        _ => DD::ZERO,
    };
    let bilap = combine(domain, &y, hh, &level.iter().map(|l| l.1.clone()).collect::<Vec<_>>());
    let eu: Vec<Vec<DD>> = level.iter().map(|(u, _, e)| u.iter().map(|&x| *e * x).collect()).collect();
    let l_eu = combine(domain, &y, hh, &eu);
    let l_e = combine(domain, &y, hh, &level.iter().map(|l| vec![l.2]).collect::<Vec<_>>())[0];
    let d = dot(&bilap, u);
    let two = DD::new(2.0);
    let scalar = d - two * *e * *e + kappa * *e;
    Ok((0..u.len())
        .map(|a| {
            let div = (l_eu[a] + *e * lu[a] - u[a] * l_e).mul_f64(0.5);
            bilap[a] + two * div - kappa * lu[a] - scalar * u[a]
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{curve_s2, identity_sphere, make_pi};

    #[test]
    fn identity_of_sphere_is_an_eigenmap() {
        // Δ_S x = −m x on Sᵐ
        let id = identity_sphere(3).unwrap();
        let nm = NumericMap::new(&id);
        let p = [0.5, -0.5, 0.5, 0.5];
        let lap = fd_laplacian(&nm, &id.domain, &p, 1e-3).unwrap();
        for (l, x) in lap.iter().zip(p) {
            assert!((l.to_f64() + 3.0 * x).abs() < 1e-5);
        }
        let r = fd_residual(&nm, &id.domain, Equation::Harmonic, &p, 1e-3).unwrap();
        assert!(r.iter().all(|x| x.to_f64().abs() < 1e-5));
    }

    #[test]
    fn clearance_is_enforced() {
        let p = make_pi(3).unwrap();
        let nm = NumericMap::new(&p);
        assert!(matches!(
            fd_laplacian(&nm, &p.domain, &[0.01, 0.0, 0.0], 0.01),
            Err(FdError::Clearance { .. })
        ));
        assert!(matches!(
            fd_laplacian(&nm, &p.domain, &[1.0, 0.0], 0.01),
            Err(FdError::Dimension { .. })
        ));
    }

    #[test]
    fn curve_bilaplacian() {
        // γ(s) = (cos √2 s, sin √2 s, 1)/√2 has γ'''' = 4 γ on the first two slots
        let c = curve_s2();
        let nm = NumericMap::new(&c);
        let s = 0.7;
        let b = fd_bilaplacian(&nm, &c.domain, &[s], 1e-3).unwrap();
        let v = nm.eval(&[s]);
        for a in 0..2 {
            assert!((b[a].to_f64() - 4.0 * v[a]).abs() < 1e-5);
        }
    }
}
