//! Constructors for the explicit maps: the radial families π, μ, ν on punctured
//! Euclidean space, polynomial eigenmaps between spheres and the biharmonic
//! curves on `S²` and `S³`.

use crate::domain::DomainSpec;
use crate::field::Field;
use crate::map::{Component, ComponentMap, EigenData, MapError, SphereMap};
use crate::poly::{Monomial, MultiPoly};
use crate::radial::RadialExpr;
use crate::rational::{fmt_q, q, qi, Q};
use crate::trig::{param, param_const, TrigExpr, TrigSpace};
use num_bigint::BigInt;
use num_traits::{One, Signed};

fn punctured(m: u32) -> Result<DomainSpec, MapError> {
    DomainSpec::punctured(m).map_err(|_| MapError::DimensionTooSmall { min: 2, got: m })
}

fn radial(c: RadialExpr, weight: &Q) -> Component {
    Component { weight: weight.clone(), field: Field::Radial(c) }
}

/// `π(x) = x/r` on `ℝᵐ∖{0}`.
pub fn make_pi(m: u32) -> Result<SphereMap, MapError> {
    let domain = punctured(m)?;
    let n = m as usize;
    let comps = (0..n)
        .map(|i| radial(RadialExpr::coordinate(n, i).mul_r_pow(-1), &Q::one()))
        .collect();
    let map = ComponentMap::new(domain, comps, None)?;
    Ok(SphereMap::from_components(format!("pi({m})"), map, None))
}

/// `μᵢⱼ = (m xᵢxⱼ/r² − δᵢⱼ)/√(m(m−1))`.
pub fn make_mu(m: u32) -> Result<SphereMap, MapError> {
    let domain = punctured(m)?;
    let n = m as usize;
    let mi = m as i64;
    let w = q(1, mi * (mi - 1));
    let x = |i| RadialExpr::coordinate(n, i);
    let mut comps = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let mut f = (&x(i) * &x(j)).mul_r_pow(-2).scale(&qi(mi));
            if i == j {
                f = &f - &RadialExpr::one(n);
            }
            comps.push(radial(f, &w));
        }
    }
    let map = ComponentMap::new(domain, comps, None)?;
    Ok(SphereMap::from_components(format!("mu({m})"), map, None))
}

/// `νᵢⱼₖ = ((δᵢⱼxₖ + δⱼₖxᵢ + δᵢₖxⱼ)/r − (m+2)xᵢxⱼxₖ/r³)/√((m−1)(m+2))`.
pub fn make_nu(m: u32) -> Result<SphereMap, MapError> {
    let domain = punctured(m)?;
    let n = m as usize;
    let mi = m as i64;
    let w = q(1, (mi - 1) * (mi + 2));
    let x = |i| RadialExpr::coordinate(n, i);
    let mut comps = Vec::with_capacity(n * n * n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let mut lin = RadialExpr::zero(n);
                if i == j {
                    lin = &lin + &x(k);
                }
                if j == k {
                    lin = &lin + &x(i);
                }
                if i == k {
                    lin = &lin + &x(j);
                }
                let cubic = (&(&x(i) * &x(j)) * &x(k)).mul_r_pow(-3).scale(&qi(mi + 2));
                comps.push(radial(&lin.mul_r_pow(-1) - &cubic, &w));
            }
        }
    }
    let map = ComponentMap::new(domain, comps, None)?;
    Ok(SphereMap::from_components(format!("nu({m})"), map, None))
}

/// Eigenmap `Sᵐ → Sⁿ` from homogeneous harmonic polynomials with `Σ F² = r^{2k}`.
pub fn make_eigenmap(m: u32, polys: Vec<MultiPoly>, k: u32) -> Result<SphereMap, MapError> {
    let weighted = polys.into_iter().map(|p| (Q::one(), p)).collect();
    make_weighted_eigenmap(format!("eigenmap({m}, degree {k})"), m, weighted, k)
}

/// Eigenmap with components `√qₐ Fₐ`; requires `Σ qₐ Fₐ² = r^{2k}`.
pub fn make_weighted_eigenmap(
    name: String,
    m: u32,
    polys: Vec<(Q, MultiPoly)>,
    k: u32,
) -> Result<SphereMap, MapError> {
    if m < 1 {
        return Err(MapError::DimensionTooSmall { min: 1, got: m });
    }
    if polys.is_empty() {
        return Err(MapError::Empty);
    }
    let n = m as usize + 1;
    for (i, (_, p)) in polys.iter().enumerate() {
        if p.nvars() != n {
            return Err(MapError::VariableCount { index: i, got: p.nvars(), expected: n });
        }
        if p.is_zero() || p.homogeneous_degree() != Some(k) {
            return Err(MapError::NotHomogeneous { index: i, degree: k });
        }
        let lap = p.laplacian();
        if let Some((mono, c)) = lap.leading_term() {
            let mut s = String::new();
            mono.fmt_factors(&mut s);
            return Err(MapError::NotHarmonic {
                index: i,
                witness: format!("Laplacian has term {} * {}", fmt_q(c), if s.is_empty() { "1".into() } else { s }),
            });
        }
    }
    let mut sum = MultiPoly::zero(n);
    for (w, p) in &polys {
        sum = &sum + &(p * p).scale(w);
    }
    let defect = &sum - &MultiPoly::radius_squared(n).pow(k);
    if let Some((mono, c)) = defect.leading_term() {
        let mut s = String::new();
        mono.fmt_factors(&mut s);
        return Err(MapError::NotSphereRestricting {
            power: 2 * k,
            witness: format!("{} * {}", fmt_q(c), if s.is_empty() { "1".into() } else { s }),
        });
    }
    let domain = DomainSpec::sphere(m).expect("m >= 1");
    let comps = polys
        .iter()
        .map(|(w, p)| radial(RadialExpr::from_poly_r(p, -(k as i32)), w))
        .collect();
    let map = ComponentMap::new(domain, comps, None)?;
    let eigen = EigenData { degree: k, eigenvalue: qi(k as i64 * (k as i64 + m as i64 - 1)) };
    Ok(SphereMap::from_components(name, map, Some(eigen)))
}

/// Identity `Sᵐ → Sᵐ` (the isometric embedding, `λ = m`).
pub fn identity_sphere(m: u32) -> Result<SphereMap, MapError> {
    let n = m as usize + 1;
    let polys = (0..n).map(|i| MultiPoly::var(n, i)).collect();
    let mut map = make_eigenmap(m, polys, 1)?;
    map.name = format!("identity_sphere({m})");
    Ok(map)
}

/// Hopf-type quadratic eigenmap `S³ → S²`, `λ = 8`.
pub fn hopf() -> Result<SphereMap, MapError> {
    let mono = |e: [u16; 4], c: i64| MultiPoly::monomial(&e, qi(c));
    let sum = |ps: &[MultiPoly]| ps.iter().fold(MultiPoly::zero(4), |a, b| &a + b);
    let polys = vec![
        sum(&[
            mono([2, 0, 0, 0], 1),
            mono([0, 2, 0, 0], 1),
            mono([0, 0, 2, 0], -1),
            mono([0, 0, 0, 2], -1),
        ]),
        sum(&[mono([1, 0, 0, 1], 2), mono([0, 1, 1, 0], 2)]),
        sum(&[mono([0, 1, 0, 1], 2), mono([1, 0, 1, 0], -2)]),
    ];
    let mut map = make_eigenmap(3, polys, 2)?;
    map.name = "hopf".to_string();
    Ok(map)
}

/// Harmonic projection of a homogeneous polynomial of degree `k` in `n` variables:
/// `H(P) = Σⱼ (−1)ʲ r^{2j} ΔʲP / (2ʲ j! Πᵢ₌₁ʲ (n+2k−2−2i))`.
pub fn harmonic_projection(p: &MultiPoly, k: u32) -> MultiPoly {
    let n = p.nvars() as i64;
    let r2 = MultiPoly::radius_squared(p.nvars());
    let mut out = MultiPoly::zero(p.nvars());
    let mut lap = p.clone();
    let mut denom = BigInt::one();
    let mut rpow = MultiPoly::constant(p.nvars(), Q::one());
    let mut j: i64 = 0;
    while !lap.is_zero() {
        let sign = if j % 2 == 0 { 1 } else { -1 };
        let c = Q::new(BigInt::from(sign), denom.clone());
        out = &out + &(&rpow * &lap).scale(&c);
        j += 1;
        denom *= BigInt::from(2 * j * (n + 2 * k as i64 - 2 - 2 * j));
        lap = lap.laplacian();
        rpow = &rpow * &r2;
    }
    out
}

/// The degree-`k` tensor eigenmap `Sᵐ → S^{N−1}`: components are harmonic
/// projections of all degree-`k` monomials, weighted by multinomial counts.
pub fn eigenmap(m: u32, k: u32) -> Result<SphereMap, MapError> {
    if m < 1 {
        return Err(MapError::DimensionTooSmall { min: 1, got: m });
    }
    if k < 1 {
        return Err(MapError::DimensionTooSmall { min: 1, got: k });
    }
    let n = m as usize + 1;
    let mut polys = Vec::new();
    let mut exps = vec![0u16; n];
    multi_indices(&mut exps, 0, k as u16, &mut |e| {
        let mult = multinomial(k, e);
        let h = harmonic_projection(&MultiPoly::monomial(e, Q::one()), k);
        polys.push((Q::from_integer(mult), h));
    });
    let mut sum = MultiPoly::zero(n);
    for (w, p) in &polys {
        sum = &sum + &(p * p).scale(w);
    }
    let mut lead = vec![0u16; n];
    lead[0] = 2 * k as u16;
    let c = sum.coeff(&Monomial(lead.into_iter().collect()));
    if !c.is_positive() {
        return Err(MapError::NotSphereRestricting { power: 2 * k, witness: "degenerate".into() });
    }
    let polys = polys.into_iter().map(|(w, p)| (w / &c, p)).collect();
    make_weighted_eigenmap(format!("eigenmap({m}, {k})"), m, polys, k)
}

fn multi_indices(exps: &mut [u16], pos: usize, left: u16, f: &mut impl FnMut(&[u16])) {
    if pos == exps.len() - 1 {
        exps[pos] = left;
        f(exps);
        exps[pos] = 0;
        return;
    }
    for e in (0..=left).rev() {
        exps[pos] = e;
        multi_indices(exps, pos + 1, left - e, f);
    }
    exps[pos] = 0;
}

fn multinomial(k: u32, exps: &[u16]) -> BigInt {
    let fact = |n: u32| (1..=n).fold(BigInt::one(), |a, b| a * BigInt::from(b));
    exps.iter().fold(fact(k), |a, &e| a / fact(e as u32))
}

/// The biharmonic curve `(cos √2 s, sin √2 s, 1)/√2` on `S²`.
pub fn curve_s2() -> SphereMap {
    let space = TrigSpace::new(vec!["w".into()], vec![param_const(qi(2))]);
    let half = q(1, 2);
    let comps = vec![
        Component { weight: half.clone(), field: Field::Trig(TrigExpr::cos(&space, 0)) },
        Component { weight: half.clone(), field: Field::Trig(TrigExpr::sin(&space, 0)) },
        Component { weight: half, field: Field::Trig(TrigExpr::constant(&space, Q::one())) },
    ];
    let map = ComponentMap::new(DomainSpec::arc(), comps, None).expect("unit norm");
    SphereMap::from_components("curve_s2", map, None)
}

/// Frequency space `{a, b}` with `a² = A`, `b² = 2 − A`.
pub fn s3_curve_space() -> std::sync::Arc<TrigSpace> {
    TrigSpace::new(vec!["a".into(), "b".into()], vec![param(), &param_const(qi(2)) - &param()])
}

/// The biharmonic curves `(sin as, cos as, sin bs, cos bs)/√2` on `S³` with
/// `a² + b² = 2`; `a² = 1` is the excluded geodesic.
pub fn curve_s3(a_sq: Q) -> Result<SphereMap, MapError> {
    if a_sq == Q::one() {
        return Err(MapError::Geodesic);
    }
    if !a_sq.is_positive() || a_sq >= qi(2) {
        return Err(MapError::ParameterOutOfRange(format!("a^2 = {}", fmt_q(&a_sq))));
    }
    let space = s3_curve_space();
    let half = q(1, 2);
    let comps = [
        TrigExpr::sin(&space, 0),
        TrigExpr::cos(&space, 0),
        TrigExpr::sin(&space, 1),
        TrigExpr::cos(&space, 1),
    ]
    .into_iter()
    .map(|f| Component { weight: half.clone(), field: Field::Trig(f) })
    .collect();
    let map = ComponentMap::new(DomainSpec::arc(), comps, Some(a_sq.clone()))?;
    Ok(SphereMap::from_components(format!("curve_s3({})", fmt_q(&a_sq)), map, None))
}

/// A curve with the amplitudes of the first frequency group set to `√t` and
/// the rest to `√(1−t)`; `t = 1/2` recovers the biharmonic curves.
pub fn curve_with_amplitude(base: &SphereMap, t: &Q) -> Result<SphereMap, MapError> {
    let crate::map::MapBody::Components(c) = &base.body else {
        return Err(MapError::Empty);
    };
    let groups: &[usize] = if c.len() == 3 { &[0, 0, 1] } else { &[0, 0, 1, 1] };
    let comps = c
        .components()
        .iter()
        .zip(groups)
        .map(|(comp, &g)| Component {
            weight: if g == 0 { t.clone() } else { Q::one() - t },
            field: comp.field.clone(),
        })
        .collect();
    let map = ComponentMap::new(*c.domain(), comps, c.param().cloned())?;
    Ok(SphereMap::from_components(format!("{}[t={}]", base.name, fmt_q(t)), map, None))
}

/// True when every flattened component list satisfies `Σ q f² = 1`.
pub fn is_zero_defect(map: &SphereMap) -> bool {
    map.blocks().iter().all(|b| b.map.norm_defect().is_zero())
}
