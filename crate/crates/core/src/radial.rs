//! Radial-rational expressions `Σ c · x^α · r^j` on `ℝⁿ∖{0}` with `r = |x|`.
//!
//! Values are kept in a normal form of `ℚ[x, r, r⁻¹]/(r² − Σxᵢ²)`: the last
//! coordinate appears with exponent at most one (every `x_{n-1}²` is rewritten
//! as `r² − Σ_{i<n-1} xᵢ²`). The monomials `x^α r^j` with `α_{n-1} ≤ 1` form a
//! basis of that ring, so two expressions are equal as functions exactly when
//! their normal forms coincide. The independent parity-clearing test in
//! [`radial_zero_check`] decides the same question without relying on the
//! normal form.

use crate::poly::{fmt_signed_terms, Monomial, MultiPoly, PolyError};
use crate::rational::Q;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// `x^α r^j`; ordered by the graded-lex order of `x^α`, then by `j`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct RMono {
    pub x: Monomial,
    pub r: i32,
}

impl RMono {
    pub fn degree(&self) -> i64 {
        self.x.degree() as i64 + self.r as i64
    }

    fn describe(&self) -> String {
        let mut s = String::new();
        self.x.fmt_factors(&mut s);
        if self.r != 0 {
            if !s.is_empty() {
                s.push('*');
            }
            if self.r == 1 {
                s.push('r');
            } else {
                s.push_str(&format!("r^{}", self.r));
            }
        }
        s
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RadialExpr {
    nvars: usize,
    terms: BTreeMap<RMono, Q>,
}

/// Outcome of an exact zero test.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum ZeroVerdict {
    Zero,
    Nonzero { witness: String },
}

impl ZeroVerdict {
    pub fn is_zero(&self) -> bool {
        matches!(self, ZeroVerdict::Zero)
    }
}

impl RadialExpr {
    pub fn zero(nvars: usize) -> Self {
        assert!(nvars >= 2, "radial expressions need at least two coordinates");
        RadialExpr { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Q) -> Self {
        let mut e = Self::zero(nvars);
        e.add_term(RMono { x: Monomial::one(nvars), r: 0 }, c);
        e
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Q::one())
    }

    pub fn coordinate(nvars: usize, i: usize) -> Self {
        let mut e = Self::zero(nvars);
        e.add_term(RMono { x: Monomial::var(nvars, i), r: 0 }, Q::one());
        e
    }

    /// `r^j`.
    pub fn r_pow(nvars: usize, j: i32) -> Self {
        let mut e = Self::zero(nvars);
        e.add_term(RMono { x: Monomial::one(nvars), r: j }, Q::one());
        e
    }

    pub fn from_poly(p: &MultiPoly) -> Self {
        Self::from_poly_r(p, 0)
    }

    /// `p · r^j`.
    pub fn from_poly_r(p: &MultiPoly, j: i32) -> Self {
        let mut e = Self::zero(p.nvars());
        for (m, c) in p.terms() {
            e.add_term(RMono { x: m.clone(), r: j }, c.clone());
        }
        e
    }

    /// `Σ Pₖ / r^{sₖ}`.
    pub fn from_quotients<'a>(
        nvars: usize,
        parts: impl IntoIterator<Item = (&'a MultiPoly, i32)>,
    ) -> Self {
        let mut e = Self::zero(nvars);
        for (p, s) in parts {
            assert_eq!(p.nvars(), nvars);
            e = &e + &Self::from_poly_r(p, -s);
        }
        e
    }

    pub fn nvars(&self) -> usize {
        self.nvars
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

    pub fn terms(&self) -> impl Iterator<Item = (&RMono, &Q)> {
        self.terms.iter()
    }

    pub fn as_constant(&self) -> Option<Q> {
        self.single_pure_r_power(0)
    }

    /// `Some(c)` when the expression is exactly `c / r²`.
    pub fn as_inverse_square(&self) -> Option<Q> {
        self.single_pure_r_power(-2)
    }

    fn single_pure_r_power(&self, j: i32) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                (m.x.is_one() && m.r == j).then(|| c.clone())
            }
            _ => None,
        }
    }

    /// Common homogeneity degree of all terms, if any.
    pub fn homogeneous_degree(&self) -> Option<i64> {
        let mut it = self.terms.keys().map(RMono::degree);
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn is_degree_zero_homogeneous(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    pub fn leading_term(&self) -> Option<(&RMono, &Q)> {
        self.terms.iter().next_back()
    }

    pub fn verdict(&self) -> ZeroVerdict {
        match self.leading_term() {
            None => ZeroVerdict::Zero,
            Some((m, c)) => ZeroVerdict::Nonzero {
                witness: format!("{} * {}", crate::rational::fmt_q(c), m.describe_or_one()),
            },
        }
    }

    fn add_term(&mut self, mono: RMono, c: Q) {
        if c.is_zero() {
            return;
        }
        let last = self.nvars - 1;
        if mono.x.0[last] >= 2 {
            // x_last^a = x_last^(a-2) (r² − Σ_{i<last} xᵢ²)
            let mut base = mono.x.clone();
            base.0[last] -= 2;
            self.add_term(RMono { x: base.clone(), r: mono.r + 2 }, c.clone());
            for i in 0..last {
                let mut m = base.clone();
                m.0[i] += 2;
                self.add_term(RMono { x: m, r: mono.r }, -c.clone());
            }
            return;
        }
        match self.terms.entry(mono) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        RadialExpr {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    /// Multiplies by `r^j`; normal form is preserved.
    pub fn mul_r_pow(&self, j: i32) -> Self {
        RadialExpr {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (RMono { x: m.x.clone(), r: m.r + j }, c.clone()))
                .collect(),
        }
    }

    pub fn partial(&self, i: usize) -> Result<Self, PolyError> {
        if i >= self.nvars {
            return Err(PolyError::IndexOutOfRange { index: i, nvars: self.nvars });
        }
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.x.0[i];
            if e > 0 {
                let mut d = m.x.clone();
                d.0[i] -= 1;
                out.add_term(RMono { x: d, r: m.r }, c * int(e as i64));
            }
            if m.r != 0 {
                let mut d = m.x.clone();
                d.0[i] += 1;
                out.add_term(RMono { x: d, r: m.r - 2 }, c * int(m.r as i64));
            }
        }
        Ok(out)
    }

    /// Euclidean Laplacian on `ℝⁿ∖{0}`:
    /// `Δ(x^α r^j) = (Δx^α) r^j + (2j|α| + j(j+n−2)) x^α r^{j−2}`.
    pub fn laplacian(&self) -> Self {
        let n = self.nvars as i64;
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            for i in 0..self.nvars {
                let e = m.x.0[i];
                if e >= 2 {
                    let mut d = m.x.clone();
                    d.0[i] -= 2;
                    out.add_term(RMono { x: d, r: m.r }, c * int(e as i64 * (e as i64 - 1)));
                }
            }
            let j = m.r as i64;
            let k = 2 * j * m.x.degree() as i64 + j * (j + n - 2);
            if k != 0 {
                out.add_term(RMono { x: m.x.clone(), r: m.r - 2 }, c * int(k));
            }
        }
        out
    }

    /// `Σᵢ ∂ᵢf ∂ᵢg`, computed term-pairwise in closed form.
    pub fn grad_dot(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars, "dimension mismatch");
        let mut out = Self::zero(self.nvars);
        for (ma, ca) in &self.terms {
            let da = ma.x.degree() as i64;
            let ja = ma.r as i64;
            for (mb, cb) in &other.terms {
                let cab = ca * cb;
                let sum = ma.x.mul(&mb.x);
                for i in 0..self.nvars {
                    let (a, b) = (ma.x.0[i], mb.x.0[i]);
                    if a > 0 && b > 0 {
                        let mut x = sum.clone();
                        x.0[i] -= 2;
                        out.add_term(RMono { x, r: ma.r + mb.r }, &cab * int(a as i64 * b as i64));
                    }
                }
                let db = mb.x.degree() as i64;
                let jb = mb.r as i64;
                let k = jb * da + ja * db + ja * jb;
                if k != 0 {
                    out.add_term(RMono { x: sum, r: ma.r + mb.r - 2 }, cab * int(k));
                }
            }
        }
        out
    }

    /// Euler operator `⟨x, ∇f⟩`; each term is multiplied by its homogeneity degree.
    pub fn euler(&self) -> Self {
        RadialExpr {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() != 0)
                .map(|(m, c)| (m.clone(), c * int(m.degree())))
                .collect(),
        }
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        let r = point.iter().map(|v| v * v).sum::<f64>().sqrt();
        self.terms
            .iter()
            .map(|(m, c)| {
                crate::rational::to_f64(c)
                    * point
                        .iter()
                        .zip(&m.x.0)
                        .map(|(x, &e)| x.powi(e as i32))
                        .product::<f64>()
                    * r.powi(m.r)
            })
            .sum()
    }

    /// Groups terms by radial power: `Σ_j P_j r^j`.
    pub fn by_radial_power(&self) -> BTreeMap<i32, MultiPoly> {
        let mut out: BTreeMap<i32, MultiPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.r)
                .or_insert_with(|| MultiPoly::zero(self.nvars))
                .add_term(m.x.clone(), c.clone());
        }
        out
    }
}

impl RMono {
    fn describe_or_one(&self) -> String {
        let s = self.describe();
        if s.is_empty() {
            "1".to_string()
        } else {
            s
        }
    }
}

fn int(v: i64) -> Q {
    Q::from_integer(BigInt::from(v))
}

/// Euclidean Laplacian on `ℝᵐ∖{0}` (`m` is the expression's coordinate count).
pub fn euclid_laplacian(f: &RadialExpr) -> RadialExpr {
    f.laplacian()
}

pub fn gradient_dot(f: &RadialExpr, g: &RadialExpr) -> Result<RadialExpr, PolyError> {
    if f.nvars != g.nvars {
        return Err(PolyError::VariableMismatch(f.nvars, g.nvars));
    }
    Ok(f.grad_dot(g))
}

pub fn partial_derivative(f: &RadialExpr, i: usize) -> Result<RadialExpr, PolyError> {
    f.partial(i)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("expression is not degree-0 homogeneous; Euler operator is nonzero at {witness_point:?}")]
pub struct HomogeneityError {
    pub witness_point: Vec<i64>,
}

/// Laplace–Beltrami operator on `Sᵐ` acting on degree-0 homogeneous extensions
/// in `m+1` ambient coordinates: `Δ_S f = r² Δ_{ℝ^{m+1}} f`.
pub fn sphere_laplacian(f: &RadialExpr) -> Result<RadialExpr, HomogeneityError> {
    if !f.is_degree_zero_homogeneous() {
        return Err(HomogeneityError { witness_point: homogeneity_witness(f) });
    }
    Ok(f.laplacian().mul_r_pow(2))
}

/// Small integer point where the radial derivative of `f` does not vanish.
fn homogeneity_witness(f: &RadialExpr) -> Vec<i64> {
    let radial = f.euler();
    let n = f.nvars;
    let candidates = (1..=4i64).flat_map(|k| {
        (0..n).map(move |i| {
            (0..n)
                .map(|j| if j <= i { (j as i64 % k) + 1 } else { 0 })
                .collect::<Vec<_>>()
        })
    });
    for p in candidates {
        let pt: Vec<f64> = p.iter().map(|&v| v as f64).collect();
        if radial.eval_f64(&pt).abs() > 1e-9 {
            return p;
        }
    }
    let mut p = vec![0; n];
    p[0] = 1;
    p
}

/// Exact zero test by clearing radial denominators within each parity class.
///
/// Terms are split by the parity of their `r` exponent; within a class every
/// term is multiplied up to the smallest exponent of the class and the even
/// surplus `r^{2k}` is replaced by `(Σxᵢ²)^k`. The expression vanishes on
/// `ℝⁿ∖{0}` iff both resulting polynomials vanish (odd powers of `r` are not
/// polynomial, so the classes cannot cancel each other).
pub fn radial_zero_check(f: &RadialExpr) -> ZeroVerdict {
    zero_check_quotients(f.nvars, f.by_radial_power().into_iter().map(|(j, p)| (p, j)))
}

/// Same test on an unreduced list `Σ Pₖ r^{jₖ}`.
pub fn zero_check_quotients(
    nvars: usize,
    parts: impl IntoIterator<Item = (MultiPoly, i32)>,
) -> ZeroVerdict {
    let mut classes: [Vec<(MultiPoly, i32)>; 2] = [Vec::new(), Vec::new()];
    for (p, j) in parts {
        classes[j.rem_euclid(2) as usize].push((p, j));
    }
    let r2 = MultiPoly::radius_squared(nvars);
    for class in classes.iter() {
        let Some(jmin) = class.iter().map(|(_, j)| *j).min() else {
            continue;
        };
        let mut cleared = MultiPoly::zero(nvars);
        for (p, j) in class {
            let k = ((j - jmin) / 2) as u32;
            cleared = &cleared + &(p * &r2.pow(k));
        }
        if let Some((m, c)) = cleared.leading_term() {
            let mut s = String::new();
            m.fmt_factors(&mut s);
            if s.is_empty() {
                s.push('1');
            }
            return ZeroVerdict::Nonzero {
                witness: format!(
                    "{} * {} in the r^{} class",
                    crate::rational::fmt_q(c),
                    s,
                    jmin
                ),
            };
        }
    }
    ZeroVerdict::Zero
}

impl Add for &RadialExpr {
    type Output = RadialExpr;
    fn add(self, rhs: &RadialExpr) -> RadialExpr {
        assert_eq!(self.nvars, rhs.nvars, "dimension mismatch");
        let (big, small) = if self.terms.len() >= rhs.terms.len() { (self, rhs) } else { (rhs, self) };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &RadialExpr {
    type Output = RadialExpr;
    fn sub(self, rhs: &RadialExpr) -> RadialExpr {
        assert_eq!(self.nvars, rhs.nvars, "dimension mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Mul for &RadialExpr {
    type Output = RadialExpr;
    fn mul(self, rhs: &RadialExpr) -> RadialExpr {
        assert_eq!(self.nvars, rhs.nvars, "dimension mismatch");
        let mut out = RadialExpr::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(RMono { x: ma.x.mul(&mb.x), r: ma.r + mb.r }, ca * cb);
            }
        }
        out
    }
}

impl Neg for &RadialExpr {
    type Output = RadialExpr;
    fn neg(self) -> RadialExpr {
        self.scale(&-Q::one())
    }
}

impl fmt::Display for RadialExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_signed_terms(f, self.terms.iter().rev().map(|(m, c)| (m.describe(), c)))
    }
}
