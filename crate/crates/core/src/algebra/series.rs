use std::fmt;
use std::sync::Arc;

use super::{AlgebraError, FiniteField, Fq, Poly, RationalFunction};

/// Truncated Laurent series `sum_{i >= start} c_i t^i + O(t^prec)`.
#[derive(Clone)]
pub struct Laurent {
    field: Arc<FiniteField>,
    start: i64,
    coeffs: Vec<Fq>,
}

impl fmt::Debug for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, &c)| format!("{}*t^{}", self.field.display(c), self.start + i as i64))
            .collect();
        write!(f, "{} + O(t^{})", terms.join(" + "), self.prec())
    }
}

impl Laurent {
    pub fn new(field: Arc<FiniteField>, start: i64, coeffs: Vec<Fq>) -> Self {
        Laurent { field, start, coeffs }
    }

    pub fn zero(field: Arc<FiniteField>, prec: i64) -> Self {
        Laurent { field, start: prec, coeffs: Vec::new() }
    }

    pub fn one(field: Arc<FiniteField>, prec: i64) -> Self {
        Self::constant(field, Fq::ONE, prec)
    }

    pub fn constant(field: Arc<FiniteField>, c: Fq, prec: i64) -> Self {
        if prec <= 0 {
            return Self::zero(field, prec);
        }
        let mut v = vec![Fq::ZERO; prec as usize];
        v[0] = c;
        Laurent { field, start: 0, coeffs: v }
    }

    /// A polynomial in `t`, truncated at absolute precision `prec`.
    pub fn from_poly(p: &Poly, prec: i64) -> Self {
        let n = prec.max(0) as usize;
        let v = (0..n).map(|i| p.coeff(i)).collect();
        Laurent { field: p.field().clone(), start: 0, coeffs: v }
    }

    /// Expansion of `r(t)` around `t = 0` with relative precision `rel`.
    pub fn from_rational(r: &RationalFunction, rel: usize) -> Result<Self, AlgebraError> {
        if r.is_zero() {
            return Err(AlgebraError::PrecisionExhausted);
        }
        let vn = r.num().low_degree().unwrap() as i64;
        let vd = r.den().low_degree().unwrap() as i64;
        let n = Laurent::from_poly(r.num(), vn + rel as i64);
        let d = Laurent::from_poly(r.den(), vd + rel as i64);
        let out = n.mul(&d.inv()?);
        debug_assert!(out.prec() >= vn - vd + rel as i64);
        Ok(out.truncate(vn - vd + rel as i64))
    }

    pub fn field(&self) -> &Arc<FiniteField> {
        &self.field
    }

    /// Absolute precision: the series is known modulo `t^prec`.
    pub fn prec(&self) -> i64 {
        self.start + self.coeffs.len() as i64
    }

    pub fn coeff(&self, i: i64) -> Fq {
        if i < self.start || i >= self.prec() {
            return Fq::ZERO;
        }
        self.coeffs[(i - self.start) as usize]
    }

    /// Index of the first nonzero known coefficient.
    pub fn valuation(&self) -> Option<i64> {
        self.coeffs
            .iter()
            .position(|c| !c.is_zero())
            .map(|i| self.start + i as i64)
    }

    /// Lower bound on the true valuation.
    fn val_bound(&self) -> i64 {
        self.valuation().unwrap_or(self.prec())
    }

    pub fn truncate(&self, prec: i64) -> Self {
        if prec >= self.prec() {
            return self.clone();
        }
        if prec <= self.start {
            return Self::zero(self.field.clone(), prec);
        }
        let mut v = self.coeffs.clone();
        v.truncate((prec - self.start) as usize);
        Laurent { field: self.field.clone(), start: self.start, coeffs: v }
    }

    /// Multiplies by `t^k`.
    pub fn shift(&self, k: i64) -> Self {
        Laurent { field: self.field.clone(), start: self.start + k, coeffs: self.coeffs.clone() }
    }

    pub fn scale(&self, c: Fq) -> Self {
        let f = &self.field;
        Laurent {
            field: f.clone(),
            start: self.start,
            coeffs: self.coeffs.iter().map(|&a| f.mul(a, c)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let f = &self.field;
        let start = self.start.min(other.start);
        let prec = self.prec().min(other.prec());
        if prec <= start {
            return Self::zero(f.clone(), prec);
        }
        let v = (start..prec).map(|i| f.add(self.coeff(i), other.coeff(i))).collect();
        Laurent { field: f.clone(), start, coeffs: v }
    }

    pub fn neg(&self) -> Self {
        self.scale(self.field.neg(Fq::ONE))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let f = &self.field;
        let (va, vb) = (self.val_bound(), other.val_bound());
        let prec = (self.prec() + vb).min(other.prec() + va);
        let start = va + vb;
        if prec <= start {
            return Self::zero(f.clone(), prec);
        }
        let n = (prec - start) as usize;
        let mut v = vec![Fq::ZERO; n];
        for i in 0..n {
            let a = self.coeff(va + i as i64);
            if a.is_zero() {
                continue;
            }
            for j in 0..(n - i) {
                let b = other.coeff(vb + j as i64);
                if !b.is_zero() {
                    v[i + j] = f.add(v[i + j], f.mul(a, b));
                }
            }
        }
        Laurent { field: f.clone(), start, coeffs: v }
    }

    /// Multiplicative inverse; needs a known nonzero leading coefficient.
    pub fn inv(&self) -> Result<Self, AlgebraError> {
        let f = &self.field;
        let v = self.valuation().ok_or(AlgebraError::PrecisionExhausted)?;
        let rel = (self.prec() - v) as usize;
        let a0inv = f.inv(self.coeff(v))?;
        let mut b = vec![Fq::ZERO; rel];
        b[0] = a0inv;
        for n in 1..rel {
            let mut s = Fq::ZERO;
            for k in 1..=n {
                let a = self.coeff(v + k as i64);
                if !a.is_zero() {
                    s = f.add(s, f.mul(a, b[n - k]));
                }
            }
            b[n] = f.neg(f.mul(s, a0inv));
        }
        Ok(Laurent { field: f.clone(), start: -v, coeffs: b })
    }

    pub fn pow_u(&self, mut e: u64) -> Self {
        if e == 0 {
            return Laurent::one(self.field.clone(), self.prec() - self.val_bound());
        }
        let mut acc: Option<Self> = None;
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul(&base),
                });
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc.expect("e > 0")
    }

    pub fn pow_i(&self, e: i64) -> Result<Self, AlgebraError> {
        if e >= 0 {
            Ok(self.pow_u(e as u64))
        } else {
            Ok(self.inv()?.pow_u(e.unsigned_abs()))
        }
    }

    /// The unique `n`-th root with constant term 1 of a series `1 + O(t)`.
    /// Requires `n` prime to the characteristic.
    pub fn root_of_unit(&self, n: u64) -> Result<Self, AlgebraError> {
        let f = &self.field;
        if self.start != 0 || self.coeff(0) != Fq::ONE {
            return Err(AlgebraError::NoRoot);
        }
        let nf = f.from_int(n as i64);
        let ninv = f.inv(nf).map_err(|_| AlgebraError::NoRoot)?;
        let prec = self.prec();
        // Coefficientwise: the t^k coefficient of y^n is n*y_k + (terms in y_1..y_{k-1}).
        let mut y = Laurent::one(f.clone(), prec);
        for k in 1..prec {
            let yn = y.pow_u(n).truncate(k + 1);
            let diff = f.sub(self.coeff(k), yn.coeff(k));
            y.coeffs[k as usize] = f.mul(diff, ninv);
        }
        Ok(y)
    }

    pub fn is_zero_to_precision(&self) -> bool {
        self.valuation().is_none()
    }
}
