//! Energy values by quadrature: `E = ½∫|∇u|²`, `E₂ = ½∫(|Δu|² − |∇u|⁴)` and
//! `E₂ᶜ = ½∫(|Δu|² − |∇u|⁴ + κ|∇u|²)` with `κ = (2/3)Scal − 2ρ`.
//!
//! Sphere domains use seeded Monte Carlo (normalized Gaussians, sharded so
//! the result does not depend on the thread count) or a Gauss–Legendre
//! product rule in hyperspherical angles. Curves are integrated over one
//! period when their frequencies are commensurable.

use crate::domain::{DomainKind, DomainSpec};
use crate::eval::{CompiledField, Tables};
use crate::exec;
use crate::field::Field;
use crate::functionals::energy_density;
use crate::map::SphereMap;
use crate::rational::{to_f64, Q};
use crate::verifier::sampling::unit_vector;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::f64::consts::PI;
use std::fmt;

/// Samples per Monte Carlo shard; each shard has its own ChaCha stream.
pub const SHARD: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum EnergyKind {
    #[serde(rename = "E")]
    Energy,
    #[serde(rename = "E2")]
    Bienergy,
    #[serde(rename = "E2c")]
    ConformalBienergy,
}

impl EnergyKind {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "E" => Some(EnergyKind::Energy),
            "E2" => Some(EnergyKind::Bienergy),
            "E2c" => Some(EnergyKind::ConformalBienergy),
            _ => None,
        }
    }

    pub fn key(&self) -> &'static str {
        match self {
            EnergyKind::Energy => "E",
            EnergyKind::Bienergy => "E2",
            EnergyKind::ConformalBienergy => "E2c",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "scheme", rename_all = "snake_case")]
pub enum Scheme {
    MonteCarlo { samples: usize, seed: u64 },
    /// Gauss–Legendre in each polar angle, trapezoid in the azimuth (and on curves).
    Product { nodes: usize },
}

impl Default for Scheme {
    fn default() -> Self {
        Scheme::MonteCarlo { samples: 100_000, seed: 1 }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scheme::MonteCarlo { samples, seed } => {
                write!(f, "monte-carlo(samples={samples}, seed={seed})")
            }
            Scheme::Product { nodes } => write!(f, "product(nodes={nodes})"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    /// Zero for the product rule's exact cases; otherwise a one-sigma estimate.
    pub std_error: f64,
    pub evaluations: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EnergyValue {
    pub kind: EnergyKind,
    pub map: String,
    pub value: f64,
    pub std_error: f64,
    pub scheme: Scheme,
    /// Integration region, e.g. `S^3` or `[0, T]`.
    pub region: String,
    pub evaluations: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QuadratureError {
    #[error("absolute energies need a closed domain, got {0}")]
    NotClosed(String),
    #[error("curve {0} is not periodic: its frequencies are incommensurable")]
    Aperiodic(String),
    #[error("the conformal bienergy is not defined on {0}")]
    UnsupportedDomain(String),
    #[error("bad quadrature scheme: {0}")]
    Scheme(String),
}

/// `vol(Sᵐ)` by `vol(Sᵐ) = 2π/(m−1) · vol(Sᵐ⁻²)`.
pub fn sphere_volume(m: u32) -> f64 {
    match m {
        0 => 2.0,
        1 => 2.0 * PI,
        _ => 2.0 * PI / (m as f64 - 1.0) * sphere_volume(m - 2),
    }
}

/// Mean and sum of squared deviations, combined pairwise in a fixed order.
#[derive(Clone, Copy, Debug, Default)]
struct Moments {
    n: f64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1.0;
        let d = x - self.mean;
        self.mean += d / self.n;
        self.m2 += d * (x - self.mean);
    }

    fn merge(self, o: Moments) -> Moments {
        if self.n == 0.0 {
            return o;
        }
        if o.n == 0.0 {
            return self;
        }
        let n = self.n + o.n;
        let d = o.mean - self.mean;
        Moments {
            n,
            mean: self.mean + d * o.n / n,
            m2: self.m2 + o.m2 + d * d * self.n * o.n / n,
        }
    }
}

fn monte_carlo(
    samples: usize,
    seed: u64,
    measure: f64,
    draw: &(dyn Fn(&mut ChaCha8Rng) -> Vec<f64> + Sync),
    f: &(dyn Fn(&[f64]) -> f64 + Sync),
) -> Result<Estimate, QuadratureError> {
    if samples < 2 {
        return Err(QuadratureError::Scheme("Monte Carlo needs at least 2 samples".into()));
    }
    let shards = samples.div_ceil(SHARD);
    let parts = exec::par_map_range(shards, |i| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i as u64);
        let count = SHARD.min(samples - i * SHARD);
        let mut m = Moments::default();
        for _ in 0..count {
            m.push(f(&draw(&mut rng)));
        }
        m
    });
    let m = parts.into_iter().fold(Moments::default(), Moments::merge);
    let var = (m.m2 / (m.n - 1.0)).max(0.0);
    Ok(Estimate {
        value: measure * m.mean,
        std_error: measure * (var / m.n).sqrt(),
        evaluations: samples,
    })
}

/// Gauss–Legendre nodes and weights on `[−1, 1]` by Newton iteration on `Pₙ`.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let k = k as f64;
                let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 0 { 1.0 } else { p1 };
            dp = n as f64 * (x * p - p0) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

/// Product rule on `Sᵐ`: Gauss–Legendre in the `m − 1` polar angles (with
/// the `sinᵏθ` factors in the integrand) and the trapezoid rule in the azimuth.
fn product_sphere(m: u32, n: usize, f: &(dyn Fn(&[f64]) -> f64 + Sync)) -> f64 {
    let gl: Vec<(f64, f64)> = gauss_legendre(n)
        .into_iter()
        .map(|(x, w)| (PI / 2.0 * (x + 1.0), PI / 2.0 * w))
        .collect();
    let polar = (m - 1) as usize;
    let az = 2 * n.max(2);
    let total = n.pow(polar as u32);
    let sums = exec::par_map_range(total, |idx| {
        let mut rest = idx;
        let mut prefix = 1.0; // product of sines so far
        let mut weight = 1.0;
        let mut x = vec![0.0; m as usize + 1];
        for (j, xj) in x.iter_mut().enumerate().take(polar) {
            let (theta, w) = gl[rest % n];
            rest /= n;
            let (s, c) = theta.sin_cos();
            *xj = prefix * c;
            weight *= w * s.powi((polar - j) as i32);
            prefix *= s;
        }
        let mut acc = 0.0;
        for k in 0..az {
            let phi = 2.0 * PI * k as f64 / az as f64;
            x[polar] = prefix * phi.cos();
            x[polar + 1] = prefix * phi.sin();
            acc += f(&x);
        }
        weight * acc * (2.0 * PI / az as f64)
    });
    sums.into_iter().sum()
}

/// `∫_{Sᵐ} f` for `f` given on unit vectors of `ℝᵐ⁺¹`.
pub fn integrate_sphere(
    m: u32,
    f: &(dyn Fn(&[f64]) -> f64 + Sync),
    scheme: Scheme,
) -> Result<Estimate, QuadratureError> {
    if m == 0 {
        return Err(QuadratureError::Scheme("S^0 is not supported".into()));
    }
    let n = m as usize + 1;
    match scheme {
        Scheme::MonteCarlo { samples, seed } => {
            monte_carlo(samples, seed, sphere_volume(m), &|rng| unit_vector(rng, n), f)
        }
        Scheme::Product { nodes } => {
            if nodes < 2 {
                return Err(QuadratureError::Scheme("product rule needs at least 2 nodes".into()));
            }
            let fine = product_sphere(m, nodes, f);
            let coarse = product_sphere(m, nodes.div_ceil(2), f);
            let evaluations = nodes.pow(m - 1) * 2 * nodes;
            Ok(Estimate { value: fine, std_error: (fine - coarse).abs(), evaluations })
        }
    }
}

/// `∫₀ᵀ f(s) ds`.
pub fn integrate_interval(
    period: f64,
    f: &(dyn Fn(&[f64]) -> f64 + Sync),
    scheme: Scheme,
) -> Result<Estimate, QuadratureError> {
    match scheme {
        Scheme::MonteCarlo { samples, seed } => {
            monte_carlo(samples, seed, period, &|rng| vec![rng.random_range(0.0..period)], f)
        }
        Scheme::Product { nodes } => {
            if nodes < 2 {
                return Err(QuadratureError::Scheme("product rule needs at least 2 nodes".into()));
            }
            // the trapezoid rule is spectrally accurate for periodic integrands
            let trap = |n: usize| {
                let vals = exec::par_map_range(n, |k| f(&[period * k as f64 / n as f64]));
                vals.into_iter().sum::<f64>() * period / n as f64
            };
            let fine = trap(nodes);
            let coarse = trap(nodes.div_ceil(2));
            Ok(Estimate { value: fine, std_error: (fine - coarse).abs(), evaluations: nodes })
        }
    }
}

fn rational_sqrt(x: &Q) -> Option<Q> {
    if x.is_negative() {
        return None;
    }
    let (n, d) = (x.numer(), x.denom());
    let (sn, sd) = (n.sqrt(), d.sqrt());
    (&sn * &sn == *n && &sd * &sd == *d).then(|| Q::new(sn, sd))
}

/// Fundamental period of a curve, when all frequency ratios are rational.
pub fn curve_period(u: &SphereMap) -> Option<f64> {
    let blocks = u.blocks();
    let trig = blocks.first()?.map.components().first()?.field.as_trig()?.clone();
    let a = u.param().unwrap_or_default();
    let sq: Vec<Q> =
        trig.space().freq_sq.iter().map(|p| p.eval_exact(std::slice::from_ref(&a))).collect();
    let base = sq.iter().find(|w| w.is_positive())?.clone();
    // ωᵢ = ω₀ · rᵢ with rᵢ rational
    let ratios: Vec<Q> =
        sq.iter().filter(|w| !w.is_zero()).map(|w| rational_sqrt(&(w / &base))).collect::<Option<_>>()?;
    let lcm = ratios.iter().fold(BigInt::one(), |l, r| l.lcm(r.denom()));
    let g = ratios
        .iter()
        .map(|r| r.numer() * (&lcm / r.denom()))
        .fold(BigInt::zero(), |g, k| g.gcd(&k));
    // common frequency ω₀·g/lcm
    let omega0 = to_f64(&base).sqrt();
    let common = omega0 * to_f64(&Q::new(g, lcm));
    Some(2.0 * PI / common)
}

/// The compiled integrand pieces: `Σ w (Δf)²` and `e`.
struct Integrand {
    laps: Vec<(f64, CompiledField)>,
    e: CompiledField,
    kind: EnergyKind,
    kappa: f64,
}

impl Integrand {
    fn new(u: &SphereMap, kind: EnergyKind) -> Self {
        let param = u.param();
        let p = param.as_ref();
        let mut laps = Vec::new();
        if kind != EnergyKind::Energy {
            for b in u.blocks() {
                let d = b.map.derived();
                for (c, lap) in b.map.components().iter().zip(&d.lap) {
                    laps.push((to_f64(&(&b.scale * &c.weight)), CompiledField::new(lap, p)));
                }
            }
        }
        let kappa = match kind {
            EnergyKind::ConformalBienergy => to_f64(&u.domain.conformal_kappa()),
            _ => 0.0,
        };
        let e: Field = energy_density(u);
        Integrand { laps, e: CompiledField::new(&e, p), kind, kappa }
    }

    fn eval(&self, x: &[f64]) -> f64 {
        let t = Tables::covering(x, self.laps.iter().map(|p| &p.1).chain([&self.e]));
        let e = self.e.eval_in(x, &t);
        if self.kind == EnergyKind::Energy {
            return 0.5 * e;
        }
        let lap_sq: f64 = self.laps.iter().map(|(w, f)| w * f.eval_in(x, &t).powi(2)).sum();
        0.5 * (lap_sq - e * e + self.kappa * e)
    }
}

pub fn energy(u: &SphereMap, kind: EnergyKind, scheme: Scheme) -> Result<EnergyValue, QuadratureError> {
    let domain: DomainSpec = u.domain;
    let (estimate, region) = match domain.kind {
        DomainKind::PuncturedEuclidean => {
            return Err(QuadratureError::NotClosed(domain.to_string()));
        }
        DomainKind::ArcLengthInterval => {
            if kind == EnergyKind::ConformalBienergy {
                return Err(QuadratureError::UnsupportedDomain(domain.to_string()));
            }
            let period = curve_period(u).ok_or_else(|| QuadratureError::Aperiodic(u.name.clone()))?;
            let integrand = Integrand::new(u, kind);
            (integrate_interval(period, &|x| integrand.eval(x), scheme)?, format!("[0, {period}]"))
        }
        DomainKind::RoundSphere => {
            let integrand = Integrand::new(u, kind);
            (integrate_sphere(domain.dim, &|x| integrand.eval(x), scheme)?, domain.to_string())
        }
    };
    Ok(EnergyValue {
        kind,
        map: u.name.clone(),
        value: estimate.value,
        std_error: estimate.std_error,
        scheme,
        region,
        evaluations: estimate.evaluations,
    })
}

pub fn dirichlet_energy(u: &SphereMap, scheme: Scheme) -> Result<EnergyValue, QuadratureError> {
    energy(u, EnergyKind::Energy, scheme)
}

pub fn bienergy(u: &SphereMap, scheme: Scheme) -> Result<EnergyValue, QuadratureError> {
    energy(u, EnergyKind::Bienergy, scheme)
}

pub fn conformal_bienergy(u: &SphereMap, scheme: Scheme) -> Result<EnergyValue, QuadratureError> {
    energy(u, EnergyKind::ConformalBienergy, scheme)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::*;
    use crate::map::cone;
    use crate::rational::q;

    #[test]
    fn volumes() {
        assert!((sphere_volume(2) - 4.0 * PI).abs() < 1e-12);
        assert!((sphere_volume(3) - 2.0 * PI * PI).abs() < 1e-12);
        assert!((sphere_volume(4) - 8.0 * PI * PI / 3.0).abs() < 1e-12);
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let nodes = gauss_legendre(5);
        let s: f64 = nodes.iter().map(|(x, w)| w * x.powi(8)).sum();
        assert!((s - 2.0 / 9.0).abs() < 1e-14);
        assert!((nodes.iter().map(|p| p.1).sum::<f64>() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn product_rule_on_spheres() {
        // ∫ x₀² = vol/(m+1)
        for m in 1..=4 {
            let est = integrate_sphere(m, &|x| x[0] * x[0], Scheme::Product { nodes: 20 }).unwrap();
            assert!((est.value - sphere_volume(m) / (m as f64 + 1.0)).abs() < 1e-11, "m={m}");
        }
    }

    #[test]
    fn closed_cone_bienergy() {
        let w = cone(&identity_sphere(3).unwrap(), q(1, 2)).unwrap();
        let target = 9.0 / 8.0 * 2.0 * PI * PI;
        let e = bienergy(&w, Scheme::Product { nodes: 20 }).unwrap();
        assert!((e.value - target).abs() < 1e-10);
        let mc = bienergy(&w, Scheme::MonteCarlo { samples: 10_000, seed: 3 }).unwrap();
        assert!((mc.value - target).abs() <= 3.0 * mc.std_error + 1e-12 * target);
    }

    #[test]
    fn curve_periods() {
        let t = curve_period(&curve_s2()).unwrap();
        assert!((t - PI * 2f64.sqrt()).abs() < 1e-12);
        assert!(curve_period(&curve_s3(q(3, 2)).unwrap()).is_none());
        // A/(2−A) = 1/4 gives a = 2/√5·…, b = 2a
        let c = curve_s3(q(2, 5)).unwrap();
        let t = curve_period(&c).unwrap();
        assert!((t - 2.0 * PI / (0.4f64).sqrt()).abs() < 1e-12);
        assert!(matches!(
            bienergy(&make_pi(3).unwrap(), Scheme::default()),
            Err(QuadratureError::NotClosed(_))
        ));
    }
}
