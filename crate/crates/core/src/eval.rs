//! Floating-point evaluation of exact fields and flattened maps.
//!
//! Coefficients are rounded once at compile time. Evaluation is generic over
//! [`Real`] so the same compiled form runs in `f64` (sampling scans,
//! quadrature) and in double-double (finite-difference oracle). Summation
//! follows the term order of the exact expression, so results are
//! reproducible but not correctly rounded.

use crate::dd::DD;
use crate::field::Field;
use crate::map::SphereMap;
use crate::poly::Exps;
use crate::rational::Q;
use std::ops::{Add, Div, Mul, Neg, Sub};

pub trait Real:
    Copy
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_f64(x: f64) -> Self;
    fn from_dd(x: DD) -> Self;
    fn to_f64(self) -> f64;
    fn sqrt(self) -> Self;
    fn powi(self, n: i32) -> Self;
    fn sin_cos(self) -> (Self, Self);
    fn zero() -> Self {
        Self::from_f64(0.0)
    }
}

impl Real for f64 {
    fn from_f64(x: f64) -> Self {
        x
    }
    fn from_dd(x: DD) -> Self {
        x.to_f64()
    }
    fn to_f64(self) -> f64 {
        self
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn powi(self, n: i32) -> Self {
        f64::powi(self, n)
    }
    fn sin_cos(self) -> (Self, Self) {
        f64::sin_cos(self)
    }
}

impl Real for DD {
    fn from_f64(x: f64) -> Self {
        DD::new(x)
    }
    fn from_dd(x: DD) -> Self {
        x
    }
    fn to_f64(self) -> f64 {
        DD::to_f64(self)
    }
    fn sqrt(self) -> Self {
        DD::sqrt(self)
    }
    fn powi(self, n: i32) -> Self {
        DD::powi(self, n)
    }
    fn sin_cos(self) -> (Self, Self) {
        DD::sin_cos(self)
    }
}

#[derive(Clone, Debug)]
pub struct RadialTerm {
    coef: DD,
    exps: Exps,
    r: i32,
}

#[derive(Clone, Debug)]
pub struct TrigTerm {
    coef: DD,
    omega: u8,
    sin: u8,
    cos: Vec<u16>,
}

/// A field compiled for repeated numeric evaluation.
#[derive(Clone, Debug)]
pub enum CompiledField {
    Radial { nvars: usize, max_exp: usize, min_r: i32, max_r: i32, terms: Vec<RadialTerm> },
    Trig { omegas: Vec<DD>, terms: Vec<TrigTerm> },
}

impl CompiledField {
    /// `param` is the value of the curve parameter for trigonometric fields.
    pub fn new(field: &Field, param: Option<&Q>) -> Self {
        match field {
            Field::Radial(e) => {
                let terms: Vec<RadialTerm> = e
                    .terms()
                    .map(|(m, c)| RadialTerm { coef: DD::from_q(c), exps: m.x.0.clone(), r: m.r })
                    .collect();
                let max_exp =
                    terms.iter().flat_map(|t| t.exps.iter()).copied().max().unwrap_or(0) as usize;
                let min_r = terms.iter().map(|t| t.r).min().unwrap_or(0);
                let max_r = terms.iter().map(|t| t.r).max().unwrap_or(0);
                CompiledField::Radial { nvars: e.nvars(), max_exp, min_r, max_r, terms }
            }
            Field::Trig(e) => {
                let a = param.cloned().unwrap_or_default();
                let omegas = e
                    .space()
                    .freq_sq
                    .iter()
                    .map(|p| DD::from_q(&p.eval_exact(std::slice::from_ref(&a))).sqrt())
                    .collect();
                let terms = e
                    .terms_for_eval()
                    .map(|(omega, sin, cos, c)| TrigTerm {
                        coef: DD::from_q(&c.eval_exact(std::slice::from_ref(&a))),
                        omega,
                        sin,
                        cos: cos.to_vec(),
                    })
                    .collect();
                CompiledField::Trig { omegas, terms }
            }
        }
    }

    pub fn eval<R: Real>(&self, point: &[R]) -> R {
        match self {
            CompiledField::Radial { max_exp, min_r, max_r, .. } => {
                let tables = Tables::new(point, *max_exp, *min_r, *max_r);
                self.eval_tables(point, &tables)
            }
            CompiledField::Trig { .. } => self.eval_tables(point, &Tables::empty()),
        }
    }

    /// Table sizes `(max exponent, min r power, max r power)` this field needs.
    pub fn bounds(&self) -> (usize, i32, i32) {
        match self {
            CompiledField::Radial { max_exp, min_r, max_r, .. } => (*max_exp, *min_r, *max_r),
            CompiledField::Trig { .. } => (0, 0, 0),
        }
    }

    /// Evaluates with power tables shared across many fields at one point.
    pub fn eval_in<R: Real>(&self, point: &[R], tables: &Tables<R>) -> R {
        self.eval_tables(point, tables)
    }

    fn eval_tables<R: Real>(&self, point: &[R], tables: &Tables<R>) -> R {
        match self {
            CompiledField::Radial { nvars, terms, .. } => {
                debug_assert_eq!(point.len(), *nvars);
                let mut acc = R::zero();
                for t in terms {
                    let mut v = R::from_dd(t.coef) * tables.rpows[(t.r - tables.min_r) as usize];
                    for (i, &e) in t.exps.iter().enumerate() {
                        if e > 0 {
                            v = v * tables.powers[i][e as usize];
                        }
                    }
                    acc = acc + v;
                }
                acc
            }
            CompiledField::Trig { omegas, terms } => {
                let s = point[0];
                let w: Vec<R> = omegas.iter().map(|&o| R::from_dd(o)).collect();
                let sc: Vec<(R, R)> = w.iter().map(|&o| (o * s).sin_cos()).collect();
                let mut acc = R::zero();
                for t in terms {
                    let mut v = R::from_dd(t.coef);
                    for i in 0..w.len() {
                        if t.omega & (1 << i) != 0 {
                            v = v * w[i];
                        }
                        if t.sin & (1 << i) != 0 {
                            v = v * sc[i].0;
                        }
                        if t.cos[i] > 0 {
                            v = v * sc[i].1.powi(t.cos[i] as i32);
                        }
                    }
                    acc = acc + v;
                }
                acc
            }
        }
    }
}

/// Coordinate powers and radial powers shared by all fields evaluated at one point.
pub struct Tables<R> {
    powers: Vec<Vec<R>>,
    rpows: Vec<R>,
    min_r: i32,
}

impl<R: Real> Tables<R> {
    /// Tables covering every field in `fields`; empty for one-dimensional points.
    pub fn covering<'a>(point: &[R], fields: impl IntoIterator<Item = &'a CompiledField>) -> Self {
        if point.len() < 2 {
            return Tables::empty();
        }
        let (mut e, mut a, mut b) = (0usize, 0i32, 0i32);
        for f in fields {
            let (fe, fa, fb) = f.bounds();
            e = e.max(fe);
            a = a.min(fa);
            b = b.max(fb);
        }
        Tables::new(point, e, a, b)
    }

    fn empty() -> Self {
        Tables { powers: Vec::new(), rpows: Vec::new(), min_r: 0 }
    }

    fn new(point: &[R], max_exp: usize, min_r: i32, max_r: i32) -> Self {
        let powers = point
            .iter()
            .map(|&x| {
                let mut p = Vec::with_capacity(max_exp + 1);
                p.push(R::from_f64(1.0));
                for e in 1..=max_exp {
                    p.push(p[e - 1] * x);
                }
                p
            })
            .collect();
        let r = point.iter().fold(R::zero(), |a, &x| a + x * x).sqrt();
        let rinv = R::from_f64(1.0) / r;
        let mut rpows = Vec::with_capacity((max_r - min_r + 1) as usize);
        let mut v = rinv.powi(-min_r.min(0)) * r.powi(min_r.max(0));
        for _ in min_r..=max_r {
            rpows.push(v);
            v = v * r;
        }
        Tables { powers, rpows, min_r }
    }
}

/// The flattened map `u = (√w₁ f₁, …, √wₙ fₙ, 0, …)` compiled for evaluation.
#[derive(Clone, Debug)]
pub struct NumericMap {
    /// `(√w, f)` per non-padding component, in ambient order.
    components: Vec<(DD, CompiledField, usize)>,
    ambient: usize,
    coords: usize,
    /// Table sizes covering every radial component.
    radial: (usize, i32, i32),
}

impl NumericMap {
    pub fn new(map: &SphereMap) -> Self {
        let blocks = map.blocks();
        let mut parts = Vec::new();
        for b in &blocks {
            for c in b.map.components() {
                parts.push((&b.scale * &c.weight, &c.field));
            }
        }
        let parts: Vec<(Q, &Field)> = parts;
        Self::from_parts(&parts, &map.slots(), map.ambient(), map.domain.coords(), map.param())
    }

    /// Vector `(√wₐ fₐ)` placed at the given ambient slots.
    pub fn from_parts(
        parts: &[(Q, &Field)],
        slots: &[usize],
        ambient: usize,
        coords: usize,
        param: Option<Q>,
    ) -> Self {
        assert_eq!(parts.len(), slots.len());
        let components: Vec<(DD, CompiledField, usize)> = parts
            .iter()
            .zip(slots)
            .map(|((w, f), &slot)| (DD::from_q(w).sqrt(), CompiledField::new(f, param.as_ref()), slot))
            .collect();
        let (mut max_exp, mut min_r, mut max_r) = (0usize, 0i32, 0i32);
        for (_, f, _) in &components {
            if let CompiledField::Radial { max_exp: e, min_r: a, max_r: b, .. } = f {
                max_exp = max_exp.max(*e);
                min_r = min_r.min(*a);
                max_r = max_r.max(*b);
            }
        }
        NumericMap { components, ambient, coords, radial: (max_exp, min_r, max_r) }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn coords(&self) -> usize {
        self.coords
    }

    /// Ambient components at a point (zero padding included).
    pub fn eval<R: Real>(&self, point: &[R]) -> Vec<R> {
        let mut out = vec![R::zero(); self.ambient];
        let (e, a, b) = self.radial;
        let tables = if self.coords > 1 { Tables::new(point, e, a, b) } else { Tables::empty() };
        for (w, f, slot) in &self.components {
            out[*slot] = R::from_dd(*w) * f.eval_tables(point, &tables);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{curve_s3, make_mu, make_pi};
    use crate::map::cone;
    use crate::rational::q;

    #[test]
    fn flattened_cone_lies_on_sphere() {
        let w = cone(&make_mu(4).unwrap(), q(1, 2)).unwrap();
        let nm = NumericMap::new(&w);
        let v = nm.eval(&[0.3f64, -1.1, 0.7, 0.2]);
        assert_eq!(v.len(), 17);
        let norm: f64 = v.iter().map(|x| x * x).sum();
        assert!((norm - 1.0).abs() < 1e-14);
    }

    #[test]
    fn f64_and_double_double_agree() {
        let nm = NumericMap::new(&make_pi(3).unwrap());
        let p = [0.5, 1.25, -0.75];
        let a = nm.eval(&p);
        let b = nm.eval(&p.map(DD::new));
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y.to_f64()).abs() < 1e-15);
        }
        let c = NumericMap::new(&curve_s3(q(3, 2)).unwrap());
        let v = c.eval(&[DD::new(0.4)]);
        let norm = v.iter().fold(DD::ZERO, |a, &x| a + x * x);
        assert!((norm - DD::ONE).to_f64().abs() < 1e-28);
    }
}
