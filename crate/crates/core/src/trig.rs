//! Trigonometric polynomials in an arc-length parameter `s`.
//!
//! A [`TrigSpace`] fixes frequencies `ω₀, ω₁, …` through their squares, which
//! are polynomials in a single parameter `A` (for the `S³` curves `A = a²`,
//! `ω₀² = A`, `ω₁² = 2 − A`). Expressions are sums of
//! `p(A) · ω^μ · Π cos(ωᵢs)^{eᵢ} sin(ωᵢs)^{fᵢ}` with `μ` a 0/1 marker per
//! frequency, `fᵢ ≤ 1` and `sin² = 1 − cos²` applied eagerly. In this normal
//! form an expression is zero for every `A` exactly when no term survives.

use crate::poly::MultiPoly;
use crate::radial::ZeroVerdict;
use crate::rational::{fmt_q, Q};
use num_traits::{One, Zero};
use smallvec::SmallVec;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrigSpace {
    /// Display names of the frequencies.
    pub names: Vec<String>,
    /// `ωᵢ²` as a polynomial in `A` (one variable).
    pub freq_sq: Vec<MultiPoly>,
}

impl TrigSpace {
    pub fn new(names: Vec<String>, freq_sq: Vec<MultiPoly>) -> Arc<Self> {
        assert_eq!(names.len(), freq_sq.len());
        assert!(names.len() <= 8, "at most eight frequencies");
        assert!(freq_sq.iter().all(|p| p.nvars() == 1));
        Arc::new(TrigSpace { names, freq_sq })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}

#[derive(Clone, PartialEq, Eq, Debug, PartialOrd, Ord, Hash)]
pub struct TMono {
    omega: u8,
    sin: u8,
    cos: SmallVec<[u16; 2]>,
}

#[derive(Clone, Debug)]
pub struct TrigExpr {
    space: Arc<TrigSpace>,
    terms: BTreeMap<TMono, MultiPoly>,
}

impl PartialEq for TrigExpr {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.space, &other.space) || self.space == other.space)
            && self.terms == other.terms
    }
}

impl Eq for TrigExpr {}

fn a_const(c: Q) -> MultiPoly {
    MultiPoly::constant(1, c)
}

impl TrigExpr {
    pub fn zero(space: &Arc<TrigSpace>) -> Self {
        TrigExpr { space: space.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(space: &Arc<TrigSpace>, c: Q) -> Self {
        Self::constant_poly(space, a_const(c))
    }

    /// A constant depending on the parameter `A`.
    pub fn constant_poly(space: &Arc<TrigSpace>, p: MultiPoly) -> Self {
        let mut e = Self::zero(space);
        e.add_term(e.unit(), p);
        e
    }

    pub fn cos(space: &Arc<TrigSpace>, i: usize) -> Self {
        let mut e = Self::zero(space);
        let mut m = e.unit();
        m.cos[i] = 1;
        e.add_term(m, a_const(Q::one()));
        e
    }

    pub fn sin(space: &Arc<TrigSpace>, i: usize) -> Self {
        let mut e = Self::zero(space);
        let mut m = e.unit();
        m.sin = 1 << i;
        e.add_term(m, a_const(Q::one()));
        e
    }

    pub fn space(&self) -> &Arc<TrigSpace> {
        &self.space
    }

    fn unit(&self) -> TMono {
        TMono { omega: 0, sin: 0, cos: SmallVec::from_elem(0, self.space.len()) }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Some(p)` when the expression does not depend on `s`.
    pub fn as_constant_poly(&self) -> Option<MultiPoly> {
        match self.terms.len() {
            0 => Some(MultiPoly::zero(1)),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                (m.omega == 0 && m.sin == 0 && m.cos.iter().all(|&e| e == 0)).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn as_constant(&self) -> Option<Q> {
        self.as_constant_poly().and_then(|p| p.as_constant())
    }

    fn add_term(&mut self, m: TMono, c: MultiPoly) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn check_space(&self, other: &Self) {
        assert!(
            Arc::ptr_eq(&self.space, &other.space) || self.space == other.space,
            "trigonometric expressions over different frequency sets"
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_space(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Q::one())
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero(&self.space);
        }
        TrigExpr {
            space: self.space.clone(),
            terms: self.terms.iter().map(|(m, p)| (m.clone(), p.scale(c))).collect(),
        }
    }

    pub fn scale_poly(&self, p: &MultiPoly) -> Self {
        let mut out = Self::zero(&self.space);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c * p);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_space(other);
        let mut out = Self::zero(&self.space);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let mut coef = ca * cb;
                let both = ma.omega & mb.omega;
                for i in 0..self.space.len() {
                    if both & (1 << i) != 0 {
                        coef = &coef * &self.space.freq_sq[i];
                    }
                }
                let mut m = TMono {
                    omega: ma.omega ^ mb.omega,
                    sin: ma.sin ^ mb.sin,
                    cos: ma.cos.iter().zip(&mb.cos).map(|(a, b)| a + b).collect(),
                };
                let doubled = ma.sin & mb.sin;
                out.add_expanded(&mut m, doubled, 0, coef);
            }
        }
        out
    }

    /// Inserts `coef · m · Π_{i ∈ doubled} sin²(ωᵢs)` with `sin² = 1 − cos²`.
    fn add_expanded(&mut self, m: &mut TMono, doubled: u8, from: usize, coef: MultiPoly) {
        let Some(i) = (from..self.space.len()).find(|i| doubled & (1 << i) != 0) else {
            self.add_term(m.clone(), coef);
            return;
        };
        self.add_expanded(m, doubled, i + 1, coef.clone());
        m.cos[i] += 2;
        self.add_expanded(m, doubled, i + 1, coef.scale(&-Q::one()));
        m.cos[i] -= 2;
    }

    /// `d/ds`.
    pub fn derivative(&self) -> Self {
        let mut out = Self::zero(&self.space);
        for (m, c) in &self.terms {
            for i in 0..self.space.len() {
                let bit = 1u8 << i;
                let (omega, coef) = if m.omega & bit != 0 {
                    (m.omega & !bit, c * &self.space.freq_sq[i])
                } else {
                    (m.omega | bit, c.clone())
                };
                // cos^e → −e ω cos^{e−1} sin
                let e = m.cos[i];
                if e > 0 {
                    let mut d = TMono { omega, sin: m.sin, cos: m.cos.clone() };
                    d.cos[i] -= 1;
                    let k = coef.scale(&-Q::from_integer(e.into()));
                    if m.sin & bit != 0 {
                        // cos^{e−1} sin² = cos^{e−1} − cos^{e+1}
                        d.sin &= !bit;
                        out.add_term(d.clone(), k.clone());
                        d.cos[i] += 2;
                        out.add_term(d, k.scale(&-Q::one()));
                    } else {
                        d.sin |= bit;
                        out.add_term(d, k);
                    }
                }
                // sin → ω cos
                if m.sin & bit != 0 {
                    let mut d = TMono { omega, sin: m.sin & !bit, cos: m.cos.clone() };
                    d.cos[i] += 1;
                    out.add_term(d, coef);
                }
            }
        }
        out
    }

    pub fn derivative_n(&self, order: u32) -> Self {
        (0..order).fold(self.clone(), |e, _| e.derivative())
    }

    pub fn verdict(&self) -> ZeroVerdict {
        match self.terms.iter().next_back() {
            None => ZeroVerdict::Zero,
            Some((m, c)) => ZeroVerdict::Nonzero {
                witness: format!("({}) * {}", fmt_a_poly(c), self.describe(m)),
            },
        }
    }

    /// Evaluates at `s` for a concrete parameter value `A`.
    pub fn eval_f64(&self, s: f64, a_param: f64) -> f64 {
        let omegas: Vec<f64> =
            self.space.freq_sq.iter().map(|p| p.eval_f64(&[a_param]).sqrt()).collect();
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut v = c.eval_f64(&[a_param]);
                for (i, w) in omegas.iter().enumerate() {
                    if m.omega & (1 << i) != 0 {
                        v *= w;
                    }
                    if m.sin & (1 << i) != 0 {
                        v *= (w * s).sin();
                    }
                    v *= (w * s).cos().powi(m.cos[i] as i32);
                }
                v
            })
            .sum()
    }

    /// Substitutes a concrete rational parameter into every coefficient.
    pub fn specialize(&self, a_param: &Q) -> Self {
        let mut out = Self::zero(&self.space);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), a_const(c.eval_exact(std::slice::from_ref(a_param))));
        }
        out
    }

    fn describe(&self, m: &TMono) -> String {
        let mut parts = Vec::new();
        for i in 0..self.space.len() {
            let name = &self.space.names[i];
            if m.omega & (1 << i) != 0 {
                parts.push(name.clone());
            }
            match m.cos[i] {
                0 => {}
                1 => parts.push(format!("cos({name}s)")),
                e => parts.push(format!("cos({name}s)^{e}")),
            }
            if m.sin & (1 << i) != 0 {
                parts.push(format!("sin({name}s)"));
            }
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }

    pub(crate) fn terms_for_eval(&self) -> impl Iterator<Item = (u8, u8, &[u16], &MultiPoly)> {
        self.terms.iter().map(|(m, c)| (m.omega, m.sin, &m.cos[..], c))
    }
}

/// Prints a polynomial in the curve parameter as a polynomial in `a^2`.
fn fmt_a_poly(p: &MultiPoly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (idx, (m, c)) in p.terms().collect::<Vec<_>>().into_iter().rev().enumerate() {
        let k = m.0[0];
        let mono = match k {
            0 => String::new(),
            1 => "a^2".to_string(),
            _ => format!("a^{}", 2 * k),
        };
        let neg = c < &Q::zero();
        let mag = if neg { -c.clone() } else { c.clone() };
        if idx > 0 {
            out.push_str(if neg { " - " } else { " + " });
        } else if neg {
            out.push('-');
        }
        if mono.is_empty() {
            out.push_str(&fmt_q(&mag));
        } else if mag.is_one() {
            out.push_str(&mono);
        } else {
            out.push_str(&format!("{}*{}", fmt_q(&mag), mono));
        }
    }
    out
}

impl fmt::Display for TrigExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(m, c)| format!("({})*{}", fmt_a_poly(c), self.describe(m)))
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// The parameter `A` as a coefficient polynomial.
pub fn param() -> MultiPoly {
    MultiPoly::var(1, 0)
}

pub fn param_const(c: Q) -> MultiPoly {
    a_const(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};

    fn s3_space() -> Arc<TrigSpace> {
        TrigSpace::new(
            vec!["a".into(), "b".into()],
            vec![param(), &param_const(qi(2)) - &param()],
        )
    }

    #[test]
    fn fourth_derivative_of_sine() {
        let sp = s3_space();
        let f = TrigExpr::sin(&sp, 0);
        let d4 = f.derivative_n(4);
        assert_eq!(d4, f.scale_poly(&(&param() * &param())));
    }

    #[test]
    fn derivative_of_constant_vanishes() {
        let sp = s3_space();
        assert!(TrigExpr::constant(&sp, q(3, 7)).derivative().is_zero());
    }

    #[test]
    fn pythagorean_identity_is_exact() {
        let sp = s3_space();
        let s = TrigExpr::sin(&sp, 1);
        let c = TrigExpr::cos(&sp, 1);
        let one = s.mul(&s).add(&c.mul(&c));
        assert_eq!(one.as_constant(), Some(qi(1)));
    }

    #[test]
    fn second_derivative_matches_frequency_squares() {
        let sp = s3_space();
        let a2 = param();
        let b2 = &param_const(qi(2)) - &param();
        let d2 = TrigExpr::cos(&sp, 1).derivative_n(2);
        assert_eq!(d2, TrigExpr::cos(&sp, 1).scale_poly(&b2).neg());
        let d2 = TrigExpr::sin(&sp, 0).derivative_n(2);
        assert_eq!(d2, TrigExpr::sin(&sp, 0).scale_poly(&a2).neg());
    }

    #[test]
    fn numeric_evaluation_matches_closed_form() {
        let sp = s3_space();
        let f = TrigExpr::sin(&sp, 0).mul(&TrigExpr::cos(&sp, 1)).derivative();
        let (a2, s) = (1.5f64, 0.7f64);
        let (a, b) = (a2.sqrt(), (2.0 - a2).sqrt());
        let expect = a * (a * s).cos() * (b * s).cos() - b * (a * s).sin() * (b * s).sin();
        assert!((f.eval_f64(s, a2) - expect).abs() < 1e-14);
        assert!(!f.verdict().is_zero());
    }
}
