//! Residual scans: exact certificate, float evaluation at samples and the
//! finite-difference cross-check.

use super::fd::{fd_residual, FdError};
use super::sampling::SamplePlan;
use crate::domain::{DomainKind, DomainSpec};
use crate::eval::{CompiledField, NumericMap, Real, Tables};
use crate::exec;
use crate::field::Field;
use crate::functionals::{
    bilaplacian_pairing, energy_density, residual, Certificate, Equation, FunctionalError,
};
use crate::map::SphereMap;
use crate::rational::{to_f64, Q};
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScanConfig {
    pub samples: usize,
    pub seed: u64,
    /// Gate on the float residual norm.
    pub tol: f64,
    /// Points used for the finite-difference check; 0 disables it.
    pub fd_points: usize,
    /// Step sizes, largest first, each half the previous.
    pub hs: [f64; 3],
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig { samples: 64, seed: 1, tol: 1e-10, fd_points: 2, hs: [1e-2, 5e-3, 2.5e-3] }
    }
}

/// Below this the FD deviation counts as exact, and no order is fitted.
pub const FD_FLOOR: f64 = 1e-18;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FdCheck {
    pub points: usize,
    pub hs: [f64; 3],
    /// Max deviation from the exact residual at each step size.
    pub deviations: [f64; 3],
    /// Least-squares slope of log deviation against log h.
    pub order: Option<f64>,
    pub pass: bool,
}

impl FdCheck {
    pub fn from_deviations(points: usize, hs: [f64; 3], deviations: [f64; 3]) -> Self {
        let order = observed_order(&hs, &deviations);
        let pass = match order {
            None => deviations.iter().all(|&d| d < FD_FLOOR),
            Some(p) => {
                let c = deviations[0] / (hs[0] * hs[0]);
                (1.8..=2.2).contains(&p) && deviations[2] <= 1.25 * c * hs[2] * hs[2]
            }
        };
        FdCheck { points, hs, deviations, order, pass }
    }
}

/// Slope of `log d` against `log h`, or `None` when every deviation is below
/// [`FD_FLOOR`].
pub fn observed_order(hs: &[f64], deviations: &[f64]) -> Option<f64> {
    if deviations.iter().all(|&d| d < FD_FLOOR) {
        return None;
    }
    let xs: Vec<f64> = hs.iter().map(|h| h.ln()).collect();
    let ys: Vec<f64> = deviations.iter().map(|d| d.max(f64::MIN_POSITIVE).ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    Some(sxy / sxx)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidualReport {
    pub map: String,
    pub domain: String,
    pub equation: Equation,
    pub certificate: Certificate,
    pub samples: usize,
    pub seed: u64,
    pub tol: f64,
    /// Max over samples of the float residual norm.
    pub numeric_max: f64,
    pub fd: Option<FdCheck>,
    pub expect_zero: bool,
    pub pass: bool,
}

/// The pieces of the residual, each compiled separately, so the float
/// evaluation does not reuse the exact cancellation.
pub struct ResidualEvaluator {
    equation: Equation,
    domain: DomainSpec,
    kappa: f64,
    ambient: usize,
    comps: Vec<Piece>,
    e: CompiledField,
    de: Vec<CompiledField>,
    d: CompiledField,
}

struct Piece {
    slot: usize,
    sqrt_w: f64,
    f: CompiledField,
    lap: CompiledField,
    bilap: CompiledField,
    df: Vec<CompiledField>,
}

impl ResidualEvaluator {
    pub fn new(u: &SphereMap, equation: Equation) -> Result<Self, FunctionalError> {
        let kappa = match equation {
            Equation::CBiharmonic => {
                if u.domain.kind == DomainKind::ArcLengthInterval {
                    return Err(FunctionalError::UnsupportedDomain(u.domain.to_string()));
                }
                to_f64(&u.domain.conformal_kappa())
            }
            _ => 0.0,
        };
        let param = u.param();
        let p = param.as_ref();
        let compile = |f: &Field| CompiledField::new(f, p);
        let blocks = u.blocks();
        let mut flat: Vec<(Q, &Field, &Field, &Field)> = Vec::new();
        for b in &blocks {
            let d = b.map.derived();
            for (i, c) in b.map.components().iter().enumerate() {
                flat.push((&b.scale * &c.weight, &c.field, &d.lap[i], &d.bilap[i]));
            }
        }
        let slots = u.slots();
        let fourth = equation != Equation::Harmonic;
        let comps = exec::par_map_range(flat.len(), |i| {
            let (w, f, lap, bilap) = &flat[i];
            Piece {
                slot: slots[i],
                sqrt_w: to_f64(w).sqrt(),
                f: compile(f),
                lap: compile(lap),
                bilap: if fourth { compile(bilap) } else { compile(&f.zero_like()) },
                df: if fourth { f.partials().iter().map(compile).collect() } else { Vec::new() },
            }
        });
        let e = energy_density(u);
        let de = if fourth { e.partials().iter().map(compile).collect() } else { Vec::new() };
        let d = if fourth { compile(&bilaplacian_pairing(u)) } else { compile(&e.zero_like()) };
        Ok(ResidualEvaluator {
            equation,
            domain: u.domain,
            kappa,
            ambient: u.ambient(),
            comps,
            e: compile(&e),
            de,
            d,
        })
    }

    fn fields(&self) -> impl Iterator<Item = &CompiledField> {
        self.comps
            .iter()
            .flat_map(|c| [&c.f, &c.lap, &c.bilap].into_iter().chain(&c.df))
            .chain([&self.e, &self.d])
            .chain(&self.de)
    }

    /// Residual vector at a point, padding slots included.
    pub fn eval<R: Real>(&self, point: &[R]) -> Vec<R> {
        let t = Tables::covering(point, self.fields());
        let ev = |f: &CompiledField| f.eval_in(point, &t);
        let mut out = vec![R::zero(); self.ambient];
        let e = ev(&self.e);
        if self.equation == Equation::Harmonic {
            for c in &self.comps {
                let v = ev(&c.lap) + e * ev(&c.f);
                out[c.slot] = R::from_f64(c.sqrt_w) * v;
            }
            return out;
        }
        let metric = match self.domain.kind {
            DomainKind::RoundSphere => point.iter().fold(R::zero(), |a, &x| a + x * x),
            _ => R::from_f64(1.0),
        };
        let de: Vec<R> = self.de.iter().map(ev).collect();
        let d = ev(&self.d);
        let two = R::from_f64(2.0);
        let kappa = R::from_f64(self.kappa);
        let scalar = d - two * e * e + kappa * e;
        for c in &self.comps {
            let f = ev(&c.f);
            let lap = ev(&c.lap);
            let grad = c.df.iter().zip(&de).fold(R::zero(), |a, (g, &x)| a + ev(g) * x);
            let v = ev(&c.bilap) + two * (metric * grad + e * lap) - kappa * lap - scalar * f;
            out[c.slot] = R::from_f64(c.sqrt_w) * v;
        }
        out
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Max deviation between the FD residual and the exact one over `points`, per step.
pub fn fd_deviation(
    u: &SphereMap,
    evaluator: &ResidualEvaluator,
    equation: Equation,
    points: &[Vec<f64>],
    hs: [f64; 3],
) -> Result<[f64; 3], FdError> {
    let nm = NumericMap::new(u);
    let mut dev = [0.0f64; 3];
    for p in points {
        let pd: Vec<crate::dd::DD> = p.iter().map(|&x| crate::dd::DD::new(x)).collect();
        let exact = evaluator.eval(&pd);
        for (k, &h) in hs.iter().enumerate() {
            let approx = fd_residual(&nm, &u.domain, equation, p, h)?;
            let diff: Vec<f64> = approx.iter().zip(&exact).map(|(&a, &b)| (a - b).to_f64()).collect();
            dev[k] = dev[k].max(norm(&diff));
        }
    }
    Ok(dev)
}

/// Certifies `equation` for `u` exactly, scans the float residual over a
/// sample plan and cross-checks it against finite differences.
///
/// With `expect_zero` the scan passes when the certificate is zero, the float
/// norm stays below `tol` and the FD check converges; otherwise (negative
/// control) it passes when the certificate is nonzero and the float norm
/// exceeds `100·tol`.
pub fn residual_scan(
    u: &SphereMap,
    equation: Equation,
    expect_zero: bool,
    cfg: &ScanConfig,
) -> Result<ResidualReport, ScanError> {
    let certificate = residual(u, equation)?.certificate();
    let evaluator = ResidualEvaluator::new(u, equation)?;
    let points = SamplePlan::new(u.domain, cfg.samples, cfg.seed).points();
    let norms = exec::par_map(&points, |p| norm(&evaluator.eval(p.as_slice())));
    let numeric_max = norms.iter().copied().fold(0.0, f64::max);
    let fd = if cfg.fd_points > 0 {
        let fd_pts = &points[..cfg.fd_points.min(points.len())];
        let dev = fd_deviation(u, &evaluator, equation, fd_pts, cfg.hs)?;
        Some(FdCheck::from_deviations(fd_pts.len(), cfg.hs, dev))
    } else {
        None
    };
    let fd_ok = fd.as_ref().is_none_or(|f| f.pass);
    let pass = if expect_zero {
        certificate.is_zero() && numeric_max < cfg.tol && fd_ok
    } else {
        !certificate.is_zero() && numeric_max > 100.0 * cfg.tol && fd_ok
    };
    Ok(ResidualReport {
        map: u.name.clone(),
        domain: u.domain.to_string(),
        equation,
        certificate,
        samples: cfg.samples,
        seed: cfg.seed,
        tol: cfg.tol,
        numeric_max,
        fd,
        expect_zero,
        pass,
    })
}

/// Biharmonicity of a curve `γ: I → Sⁿ`: exact in the curve parameter, then
/// scanned numerically. Geodesics are already rejected by the constructors.
pub fn verify_curve(curve: &SphereMap, cfg: &ScanConfig) -> Result<ResidualReport, ScanError> {
    if curve.domain.kind != DomainKind::ArcLengthInterval {
        return Err(ScanError::NotACurve(curve.domain.to_string()));
    }
    residual_scan(curve, Equation::Biharmonic, true, cfg)
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ScanError {
    #[error("expected a curve, got a map on {0}")]
    NotACurve(String),
    #[error(transparent)]
    Functional(#[from] FunctionalError),
    #[error(transparent)]
    Fd(#[from] FdError),
}
