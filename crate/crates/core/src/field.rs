//! Scalar fields on a domain: radial-rational expressions or trigonometric
//! polynomials, with the domain's Laplacian and gradient pairing.

use crate::domain::{DomainKind, DomainSpec};
use crate::radial::{RadialExpr, ZeroVerdict};
use crate::rational::Q;
use crate::trig::TrigExpr;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Field {
    Radial(RadialExpr),
    Trig(TrigExpr),
}

macro_rules! binop {
    ($name:ident, $a:ident, $b:ident, $radial:expr, $trig:expr) => {
        pub fn $name(&self, other: &Field) -> Field {
            match (self, other) {
                (Field::Radial($a), Field::Radial($b)) => Field::Radial($radial),
                (Field::Trig($a), Field::Trig($b)) => Field::Trig($trig),
                _ => panic!("mixing radial and trigonometric fields"),
            }
        }
    };
}

impl Field {
    binop!(add, a, b, a + b, a.add(b));
    binop!(sub, a, b, a - b, a.sub(b));
    binop!(mul, a, b, a * b, a.mul(b));

    pub fn scale(&self, c: &Q) -> Field {
        match self {
            Field::Radial(a) => Field::Radial(a.scale(c)),
            Field::Trig(a) => Field::Trig(a.scale(c)),
        }
    }

    pub fn neg(&self) -> Field {
        self.scale(&-Q::from_integer(1.into()))
    }

    /// The constant `c` in the same ring as `self`.
    pub fn constant_like(&self, c: Q) -> Field {
        match self {
            Field::Radial(a) => Field::Radial(RadialExpr::constant(a.nvars(), c)),
            Field::Trig(a) => Field::Trig(TrigExpr::constant(a.space(), c)),
        }
    }

    pub fn zero_like(&self) -> Field {
        self.constant_like(Q::from_integer(0.into()))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Field::Radial(a) => a.is_zero(),
            Field::Trig(a) => a.is_zero(),
        }
    }

    pub fn verdict(&self) -> ZeroVerdict {
        match self {
            Field::Radial(a) => a.verdict(),
            Field::Trig(a) => a.verdict(),
        }
    }

    pub fn as_constant(&self) -> Option<Q> {
        match self {
            Field::Radial(a) => a.as_constant(),
            Field::Trig(a) => a.as_constant(),
        }
    }

    /// Constant along the domain; curve fields may still depend on the parameter.
    pub fn is_spatially_constant(&self) -> bool {
        match self {
            Field::Radial(a) => a.as_constant().is_some(),
            Field::Trig(a) => a.as_constant_poly().is_some(),
        }
    }

    pub fn as_radial(&self) -> Option<&RadialExpr> {
        match self {
            Field::Radial(a) => Some(a),
            Field::Trig(_) => None,
        }
    }

    pub fn as_trig(&self) -> Option<&TrigExpr> {
        match self {
            Field::Trig(a) => Some(a),
            Field::Radial(_) => None,
        }
    }

    /// Laplace–Beltrami operator of the domain.
    pub fn laplacian(&self, domain: &DomainSpec) -> Field {
        match (self, domain.kind) {
            (Field::Radial(a), DomainKind::PuncturedEuclidean) => Field::Radial(a.laplacian()),
            (Field::Radial(a), DomainKind::RoundSphere) => {
                Field::Radial(a.laplacian().mul_r_pow(2))
            }
            (Field::Trig(a), DomainKind::ArcLengthInterval) => Field::Trig(a.derivative_n(2)),
            _ => panic!("field type does not match domain {domain}"),
        }
    }

    /// Coordinate derivatives: `∂ᵢf` for radial fields, `d/ds` for curves.
    /// On sphere domains `⟨∇f, ∇g⟩ = r² Σ ∂ᵢf ∂ᵢg`.
    pub fn partials(&self) -> Vec<Field> {
        match self {
            Field::Radial(a) => (0..a.nvars())
                .map(|i| Field::Radial(a.partial(i).expect("index in range")))
                .collect(),
            Field::Trig(a) => vec![Field::Trig(a.derivative())],
        }
    }

    /// `⟨∇f, ∇g⟩` for the domain metric.
    pub fn grad_dot(&self, other: &Field, domain: &DomainSpec) -> Field {
        match (self, other, domain.kind) {
            (Field::Radial(a), Field::Radial(b), DomainKind::PuncturedEuclidean) => {
                Field::Radial(a.grad_dot(b))
            }
            (Field::Radial(a), Field::Radial(b), DomainKind::RoundSphere) => {
                Field::Radial(a.grad_dot(b).mul_r_pow(2))
            }
            (Field::Trig(a), Field::Trig(b), DomainKind::ArcLengthInterval) => {
                Field::Trig(a.derivative().mul(&b.derivative()))
            }
            _ => panic!("field types do not match domain {domain}"),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Radial(a) => a.fmt(f),
            Field::Trig(a) => a.fmt(f),
        }
    }
}
