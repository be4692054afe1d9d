use std::fmt;
use std::sync::Arc;

use super::{AlgebraError, FiniteField, Fq, Poly};

/// A reduced fraction `num / den` with `den` monic and coprime to `num`.
/// Zero is stored as `0 / 1`.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl RationalFunction {
    pub fn new(num: Poly, den: Poly) -> Result<Self, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        if num.field() != den.field() {
            return Err(AlgebraError::FieldMismatch);
        }
        if num.is_zero() {
            return Ok(Self::zero(num.field().clone()));
        }
        let g = num.gcd(&den);
        let num = num.div_exact(&g).expect("gcd divides");
        let den = den.div_exact(&g).expect("gcd divides");
        let lead = num.field().inv(den.leading())?;
        Ok(RationalFunction { num: num.scale(lead), den: den.scale(lead) })
    }

    pub fn from_poly(p: Poly) -> Self {
        let one = Poly::one(p.field().clone());
        RationalFunction { num: p, den: one }
    }

    pub fn zero(field: Arc<FiniteField>) -> Self {
        Self::from_poly(Poly::zero(field))
    }

    pub fn one(field: Arc<FiniteField>) -> Self {
        Self::from_poly(Poly::one(field))
    }

    pub fn constant(field: Arc<FiniteField>, c: Fq) -> Self {
        Self::from_poly(Poly::constant(field, c))
    }

    pub fn x(field: Arc<FiniteField>) -> Self {
        Self::from_poly(Poly::x(field))
    }

    pub fn field(&self) -> &Arc<FiniteField> {
        self.num.field()
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
        Self::new(num, self.den.mul(&other.den)).expect("nonzero denominators")
    }

    pub fn neg(&self) -> Self {
        RationalFunction { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(self.num.mul(&other.num), self.den.mul(&other.den)).expect("nonzero denominators")
    }

    pub fn scale(&self, c: Fq) -> Self {
        Self::new(self.num.scale(c), self.den.clone()).expect("nonzero denominator")
    }

    pub fn inv(&self) -> Result<Self, AlgebraError> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, other: &Self) -> Result<Self, AlgebraError> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: i64) -> Result<Self, AlgebraError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let k = e.unsigned_abs();
        Ok(RationalFunction { num: base.num.pow(k), den: base.den.pow(k) })
    }

    pub fn derivative(&self) -> Self {
        let num = self
            .num
            .derivative()
            .mul(&self.den)
            .sub(&self.num.mul(&self.den.derivative()));
        Self::new(num, self.den.mul(&self.den)).expect("nonzero denominator")
    }

    /// Order at the finite point `x = a`; `None` for zero.
    pub fn valuation_at(&self, a: Fq) -> Option<i64> {
        let vn = self.num.valuation_at(a)? as i64;
        let vd = self.den.valuation_at(a).expect("nonzero denominator") as i64;
        Some(vn - vd)
    }

    /// Order at infinity, `deg den - deg num`; `None` for zero.
    pub fn valuation_at_infinity(&self) -> Option<i64> {
        let dn = self.num.degree()? as i64;
        Some(self.den.degree().expect("nonzero") as i64 - dn)
    }

    pub fn eval(&self, a: Fq) -> Result<Fq, AlgebraError> {
        self.field().div(self.num.eval(a), self.den.eval(a))
    }
}
