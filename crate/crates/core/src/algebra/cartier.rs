use std::fmt;
use std::sync::Arc;

use super::{FiniteField, Fq, Poly, RationalFunction};

/// `coefficient * dx` on the projective line.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalDifferential {
    pub coefficient: RationalFunction,
}

impl fmt::Debug for RationalDifferential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) dx", self.coefficient)
    }
}

impl RationalDifferential {
    pub fn new(coefficient: RationalFunction) -> Self {
        RationalDifferential { coefficient }
    }

    pub fn zero(field: Arc<FiniteField>) -> Self {
        Self::new(RationalFunction::zero(field))
    }

    /// `dg`.
    pub fn exact(g: &RationalFunction) -> Self {
        Self::new(g.derivative())
    }

    /// `du / u`; `None` when `u = 0`.
    pub fn logarithmic(u: &RationalFunction) -> Option<Self> {
        u.derivative().div(u).ok().map(Self::new)
    }

    pub fn is_zero(&self) -> bool {
        self.coefficient.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(self.coefficient.add(&other.coefficient))
    }

    pub fn scale(&self, c: Fq) -> Self {
        Self::new(self.coefficient.scale(c))
    }

    pub fn mul_function(&self, g: &RationalFunction) -> Self {
        Self::new(self.coefficient.mul(g))
    }
}

/// The Cartier operator on `F_q(x) dx`.
///
/// With `omega = a/b dx = (a b^(p-1)) / b^p dx`, only the monomials
/// `x^i` with `i = -1 mod p` of `a b^(p-1)` survive.
pub fn cartier_rational(omega: &RationalDifferential) -> RationalDifferential {
    let field = omega.coefficient.field().clone();
    let p = field.characteristic() as usize;
    let a = omega.coefficient.num();
    let b = omega.coefficient.den();
    let c = a.mul(&b.pow(p as u64 - 1));
    let mut out = Vec::new();
    for (i, &ci) in c.coeffs().iter().enumerate() {
        if i % p == p - 1 {
            out.push(field.pth_root(ci));
        }
    }
    let num = Poly::new(field, out);
    RationalDifferential::new(
        RationalFunction::new(num, b.clone()).expect("denominator is nonzero"),
    )
}
