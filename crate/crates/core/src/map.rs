//! Sphere-valued maps: weighted component lists and the cone/join combinators.
//!
//! A component list stores `uₐ = √qₐ · fₐ` as the pair `(qₐ, fₐ)`, so every
//! quadratic quantity (norms, energy densities, residual pairings) stays
//! rational. Cone and join bodies keep their angle `t = sin²` exact and are
//! flattened into weighted blocks for computation.

use crate::domain::{DomainKind, DomainSpec};
use crate::exec;
use crate::field::Field;
use crate::radial::ZeroVerdict;
use crate::rational::{fmt_q, in_open_unit_interval, Q};
use num_traits::One;
use std::fmt;
use std::sync::{Arc, OnceLock};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MapError {
    #[error("dimension {got} is below the minimum {min}")]
    DimensionTooSmall { min: u32, got: u32 },
    #[error("parameter {0} must lie strictly between 0 and 1")]
    ParameterOutOfRange(String),
    #[error("domain mismatch: {0} vs {1}")]
    DomainMismatch(String, String),
    #[error("components do not lie on the unit sphere: {0}")]
    NotUnitNorm(String),
    #[error("component {index} is not homogeneous of degree {degree}")]
    NotHomogeneous { index: usize, degree: u32 },
    #[error("component {index} is not harmonic: {witness}")]
    NotHarmonic { index: usize, witness: String },
    #[error("sum of squares is not r^{power}: {witness}")]
    NotSphereRestricting { power: u32, witness: String },
    #[error("component {index} has {got} variables, expected {expected}")]
    VariableCount { index: usize, got: usize, expected: usize },
    #[error("a^2 = 1 gives a geodesic, which is excluded")]
    Geodesic,
    #[error("empty component list")]
    Empty,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    /// `q` in `u = √q · f`.
    pub weight: Q,
    pub field: Field,
}

/// Exact derived data shared by every map built on the same component list.
#[derive(Debug)]
pub struct Derived {
    pub lap: Vec<Field>,
    pub bilap: Vec<Field>,
    /// `Σ q |∇f|²`.
    pub energy: Field,
    /// `Σ q f Δ²f`.
    pub bilap_dot: Field,
}

#[derive(Debug)]
pub struct ComponentMap {
    domain: DomainSpec,
    components: Vec<Component>,
    /// Value of the curve parameter `A` for trigonometric bodies.
    param: Option<Q>,
    derived: OnceLock<Derived>,
}

impl PartialEq for ComponentMap {
    fn eq(&self, other: &Self) -> bool {
        self.domain == other.domain
            && self.param == other.param
            && self.components == other.components
    }
}

impl ComponentMap {
    /// Builds a component list after certifying `Σ q f² ≡ 1` (and degree-0
    /// homogeneity on sphere domains).
    pub fn new(
        domain: DomainSpec,
        components: Vec<Component>,
        param: Option<Q>,
    ) -> Result<Self, MapError> {
        if components.is_empty() {
            return Err(MapError::Empty);
        }
        for (i, c) in components.iter().enumerate() {
            match (&c.field, domain.kind) {
                (Field::Radial(r), DomainKind::RoundSphere) => {
                    if !r.is_degree_zero_homogeneous() {
                        return Err(MapError::NotHomogeneous { index: i, degree: 0 });
                    }
                    if r.nvars() != domain.coords() {
                        return Err(MapError::VariableCount {
                            index: i,
                            got: r.nvars(),
                            expected: domain.coords(),
                        });
                    }
                }
                (Field::Radial(r), DomainKind::PuncturedEuclidean) => {
                    if r.nvars() != domain.coords() {
                        return Err(MapError::VariableCount {
                            index: i,
                            got: r.nvars(),
                            expected: domain.coords(),
                        });
                    }
                }
                (Field::Trig(_), DomainKind::ArcLengthInterval) => {}
                _ => {
                    return Err(MapError::DomainMismatch(
                        domain.to_string(),
                        "field of another kind".into(),
                    ))
                }
            }
        }
        let map = ComponentMap { domain, components, param, derived: OnceLock::new() };
        if let ZeroVerdict::Nonzero { witness } = map.norm_defect().verdict() {
            return Err(MapError::NotUnitNorm(witness));
        }
        Ok(map)
    }

    /// The constant map onto the last coordinate, in the ring of `like`.
    pub(crate) fn unit(domain: DomainSpec, like: &Field, param: Option<Q>) -> Self {
        ComponentMap {
            domain,
            components: vec![Component { weight: Q::one(), field: like.constant_like(Q::one()) }],
            param,
            derived: OnceLock::new(),
        }
    }

    /// `Σ q f² − 1`.
    pub fn norm_defect(&self) -> Field {
        let first = &self.components[0].field;
        let mut acc = first.constant_like(-Q::one());
        for c in &self.components {
            acc = acc.add(&c.field.mul(&c.field).scale(&c.weight));
        }
        acc
    }

    pub fn domain(&self) -> &DomainSpec {
        &self.domain
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn param(&self) -> Option<&Q> {
        self.param.as_ref()
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn derived(&self) -> &Derived {
        self.derived.get_or_init(|| {
            let d = &self.domain;
            let lap: Vec<Field> = exec::par_map(&self.components, |c| c.field.laplacian(d));
            let bilap: Vec<Field> = exec::par_map(&lap, |l| l.laplacian(d));
            let grads: Vec<Field> = exec::par_map(&self.components, |c| {
                c.field.grad_dot(&c.field, d).scale(&c.weight)
            });
            let dots: Vec<Field> = exec::par_map_range(self.components.len(), |i| {
                let c = &self.components[i];
                c.field.mul(&bilap[i]).scale(&c.weight)
            });
            let zero = self.components[0].field.zero_like();
            let energy = grads.iter().fold(zero.clone(), |a, b| a.add(b));
            let bilap_dot = dots.iter().fold(zero, |a, b| a.add(b));
            Derived { lap, bilap, energy, bilap_dot }
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct EigenData {
    /// Polynomial degree `k` of the components.
    pub degree: u32,
    #[serde(serialize_with = "crate::rational::serde_q::serialize")]
    pub eigenvalue: Q,
}

#[derive(Clone, Debug)]
pub enum MapBody {
    Components(Arc<ComponentMap>),
    /// `(√t · base, √(1−t))`.
    Cone { base: Box<SphereMap>, t: Q },
    /// `(√t · left, √(1−t) · right)`, each side zero-padded to a common length.
    Join { left: Box<SphereMap>, right: Box<SphereMap>, t: Q },
}

impl PartialEq for MapBody {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (MapBody::Components(a), MapBody::Components(b)) => Arc::ptr_eq(a, b) || a == b,
            (MapBody::Cone { base: a, t: s }, MapBody::Cone { base: b, t }) => a == b && s == t,
            (
                MapBody::Join { left: a, right: b, t: s },
                MapBody::Join { left: c, right: d, t },
            ) => a == c && b == d && s == t,
            _ => false,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SphereMap {
    pub name: String,
    pub domain: DomainSpec,
    pub body: MapBody,
    pub eigen: Option<EigenData>,
}

/// A weighted slice of the flattened map: components `√(scale·q) f`, followed
/// by `pad` zero components.
#[derive(Clone, Debug)]
pub struct Block {
    pub scale: Q,
    pub map: Arc<ComponentMap>,
    pub pad: usize,
}

impl SphereMap {
    pub fn from_components(
        name: impl Into<String>,
        map: ComponentMap,
        eigen: Option<EigenData>,
    ) -> Self {
        SphereMap {
            name: name.into(),
            domain: *map.domain(),
            body: MapBody::Components(Arc::new(map)),
            eigen,
        }
    }

    /// Number of ambient target coordinates (`n + 1` for a map into `Sⁿ`).
    pub fn ambient(&self) -> usize {
        match &self.body {
            MapBody::Components(c) => c.len(),
            MapBody::Cone { base, .. } => base.ambient() + 1,
            MapBody::Join { left, right, .. } => 2 * left.ambient().max(right.ambient()),
        }
    }

    pub fn target_dim(&self) -> usize {
        self.ambient() - 1
    }

    pub fn param(&self) -> Option<Q> {
        match &self.body {
            MapBody::Components(c) => c.param().cloned(),
            MapBody::Cone { base, .. } => base.param(),
            MapBody::Join { left, right, .. } => left.param().or_else(|| right.param()),
        }
    }

    fn any_field(&self) -> Field {
        match &self.body {
            MapBody::Components(c) => c.components()[0].field.clone(),
            MapBody::Cone { base, .. } => base.any_field(),
            MapBody::Join { left, .. } => left.any_field(),
        }
    }

    /// Flattens the body into weighted blocks.
    pub fn blocks(&self) -> Vec<Block> {
        match &self.body {
            MapBody::Components(c) => {
                vec![Block { scale: Q::one(), map: c.clone(), pad: 0 }]
            }
            MapBody::Cone { base, t } => {
                let mut out = scaled(base.blocks(), t);
                let unit = ComponentMap::unit(self.domain, &base.any_field(), base.param());
                out.push(Block { scale: Q::one() - t, map: Arc::new(unit), pad: 0 });
                out
            }
            MapBody::Join { left, right, t } => {
                let width = left.ambient().max(right.ambient());
                let mut l = scaled(left.blocks(), t);
                l.last_mut().unwrap().pad += width - left.ambient();
                let mut r = scaled(right.blocks(), &(Q::one() - t));
                r.last_mut().unwrap().pad += width - right.ambient();
                l.extend(r);
                l
            }
        }
    }

    /// Ambient index of every non-padding component, in flattened order.
    pub fn slots(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut slot = 0;
        for b in self.blocks() {
            for _ in 0..b.map.len() {
                out.push(slot);
                slot += 1;
            }
            slot += b.pad;
        }
        out
    }

    /// Angle parameter of the outermost combinator, if any.
    pub fn angle(&self) -> Option<&Q> {
        match &self.body {
            MapBody::Components(_) => None,
            MapBody::Cone { t, .. } | MapBody::Join { t, .. } => Some(t),
        }
    }

    /// Same structure with the outermost angle replaced.
    pub fn with_angle(&self, t: Q) -> Result<SphereMap, MapError> {
        match &self.body {
            MapBody::Components(_) => Ok(self.clone()),
            MapBody::Cone { base, .. } => cone(base, t),
            MapBody::Join { left, right, .. } => join(left, right, t),
        }
    }
}

fn scaled(blocks: Vec<Block>, t: &Q) -> Vec<Block> {
    blocks.into_iter().map(|b| Block { scale: &b.scale * t, ..b }).collect()
}

/// `(√t · v, √(1−t))`.
pub fn cone(v: &SphereMap, t: Q) -> Result<SphereMap, MapError> {
    if !in_open_unit_interval(&t) {
        return Err(MapError::ParameterOutOfRange(fmt_q(&t)));
    }
    Ok(SphereMap {
        name: format!("cone({}, {})", v.name, fmt_q(&t)),
        domain: v.domain,
        body: MapBody::Cone { base: Box::new(v.clone()), t },
        eigen: None,
    })
}

/// `(√t · v₁, √(1−t) · v₂)`.
pub fn join(v1: &SphereMap, v2: &SphereMap, t: Q) -> Result<SphereMap, MapError> {
    if !in_open_unit_interval(&t) {
        return Err(MapError::ParameterOutOfRange(fmt_q(&t)));
    }
    if v1.domain != v2.domain {
        return Err(MapError::DomainMismatch(v1.domain.to_string(), v2.domain.to_string()));
    }
    if v1.param() != v2.param() && v1.param().is_some() && v2.param().is_some() {
        return Err(MapError::DomainMismatch(v1.name.clone(), v2.name.clone()));
    }
    Ok(SphereMap {
        name: format!("join({}, {}, {})", v1.name, v2.name, fmt_q(&t)),
        domain: v1.domain,
        body: MapBody::Join { left: Box::new(v1.clone()), right: Box::new(v2.clone()), t },
        eigen: None,
    })
}

impl fmt::Display for SphereMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} -> S^{}", self.name, self.domain, self.target_dim())
    }
}

