//! Moebius maps of the upper half-plane with non-negative extended-range
//! entries, and their action on the boundary points `0`, `x > 0` and `inf`.
//!
//! The cylinder model only ever composes two kinds of parabolic maps:
//! translations `z -> z + a` and their conjugates `z -> z / (abar z + 1)`
//! fixing `0`. Products of those have non-negative entries, which is what
//! lets every sum below be evaluated without cancellation.

use crate::error::{domain, Error, Result};
use crate::numerics::ExtScalar;

/// A point of `[0, inf]` on the boundary of the upper half-plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BoundaryPoint {
    Finite(ExtScalar),
    Infinity,
}

impl BoundaryPoint {
    pub const ZERO: BoundaryPoint = BoundaryPoint::Finite(ExtScalar::ZERO);

    pub fn finite(self) -> Option<ExtScalar> {
        match self {
            BoundaryPoint::Finite(x) => Some(x),
            BoundaryPoint::Infinity => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, BoundaryPoint::Infinity)
    }
}

/// `z -> (a z + b) / (c z + d)` with `a, b, c, d >= 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MoebiusMap {
    pub a: ExtScalar,
    pub b: ExtScalar,
    pub c: ExtScalar,
    pub d: ExtScalar,
}

impl MoebiusMap {
    pub const IDENTITY: MoebiusMap = MoebiusMap {
        a: ExtScalar::ONE,
        b: ExtScalar::ZERO,
        c: ExtScalar::ZERO,
        d: ExtScalar::ONE,
    };

    /// Matrix `(a, b; c, d)`. Entries must be non-negative; the determinant is
    /// checked wherever it can be evaluated without cancellation.
    pub fn from_entries(a: ExtScalar, b: ExtScalar, c: ExtScalar, d: ExtScalar) -> Result<Self> {
        if [a, b, c, d].iter().any(|e| e.sign() < 0) {
            return Err(domain("Moebius entries must be non-negative"));
        }
        let m = MoebiusMap { a, b, c, d };
        if let Ok(det) = m.det() {
            if (det.to_f64() - 1.0).abs() > 1e-10 {
                return Err(domain(format!("determinant {det} is not 1")));
            }
        }
        Ok(m)
    }

    /// Translation `z -> z + a`, matrix `(1, a; 0, 1)`.
    pub fn parabolic_shift(a: ExtScalar) -> Result<Self> {
        if a.sign() <= 0 {
            return Err(domain(format!("translation length {a} must be positive")));
        }
        Ok(MoebiusMap {
            b: a,
            ..Self::IDENTITY
        })
    }

    /// Parabolic fixing zero, `z -> z / (abar z + 1)`, matrix `(1, 0; abar, 1)`.
    pub fn parabolic_lower(abar: ExtScalar) -> Result<Self> {
        if abar.sign() <= 0 {
            return Err(domain(format!("lower parameter {abar} must be positive")));
        }
        Ok(MoebiusMap {
            c: abar,
            ..Self::IDENTITY
        })
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &MoebiusMap) -> MoebiusMap {
        let dot = |x: ExtScalar, y: ExtScalar, u: ExtScalar, v: ExtScalar| {
            (x * y).add_same_sign(u * v)
        };
        MoebiusMap {
            a: dot(self.a, other.a, self.b, other.c),
            b: dot(self.a, other.b, self.b, other.d),
            c: dot(self.c, other.a, self.d, other.c),
            d: dot(self.c, other.b, self.d, other.d),
        }
    }

    /// `ad - bc`. Fails when the two products agree to ~1e-12, which is the
    /// normal state of affairs for long products with large entries.
    pub fn det(&self) -> Result<ExtScalar> {
        (self.a * self.d).try_sub(self.b * self.c)
    }

    pub fn apply(&self, p: BoundaryPoint) -> Result<BoundaryPoint> {
        let (num, den) = match p {
            BoundaryPoint::Infinity => (self.a, self.c),
            BoundaryPoint::Finite(x) => {
                if x.sign() < 0 {
                    return Err(domain("boundary points must be non-negative"));
                }
                (
                    (self.a * x).add_same_sign(self.b),
                    (self.c * x).add_same_sign(self.d),
                )
            }
        };
        match (num.is_zero(), den.is_zero()) {
            (true, true) => Err(Error::Indeterminate),
            (_, true) => Ok(BoundaryPoint::Infinity),
            _ => Ok(BoundaryPoint::Finite(num.try_div(den)?)),
        }
    }
}

impl Default for MoebiusMap {
    fn default() -> Self {
        Self::IDENTITY
    }
}
