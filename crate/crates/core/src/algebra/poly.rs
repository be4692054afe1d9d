use std::fmt;
use std::sync::Arc;

use super::{AlgebraError, FiniteField, Fq};

/// Dense univariate polynomial over a finite field, lowest degree first.
/// The coefficient vector never has trailing zeros.
#[derive(Clone)]
pub struct Poly {
    field: Arc<FiniteField>,
    coeffs: Vec<Fq>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.coeffs == other.coeffs
    }
}

impl Eq for Poly {}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let cs = self.field.display(c);
            let cs = if self.field.degree() > 1 && cs.contains('+') {
                format!("({cs})")
            } else {
                cs
            };
            match i {
                0 => write!(f, "{cs}")?,
                _ => {
                    if c != Fq::ONE {
                        write!(f, "{cs}*")?;
                    }
                    if i == 1 {
                        write!(f, "x")?;
                    } else {
                        write!(f, "x^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl Poly {
    pub fn new(field: Arc<FiniteField>, mut coeffs: Vec<Fq>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { field, coeffs }
    }

    pub fn zero(field: Arc<FiniteField>) -> Self {
        Poly { field, coeffs: Vec::new() }
    }

    pub fn one(field: Arc<FiniteField>) -> Self {
        Self::constant(field, Fq::ONE)
    }

    pub fn constant(field: Arc<FiniteField>, c: Fq) -> Self {
        Self::new(field, vec![c])
    }

    /// `c * x^k`.
    pub fn monomial(field: Arc<FiniteField>, c: Fq, k: usize) -> Self {
        let mut v = vec![Fq::ZERO; k + 1];
        v[k] = c;
        Self::new(field, v)
    }

    pub fn x(field: Arc<FiniteField>) -> Self {
        Self::monomial(field, Fq::ONE, 1)
    }

    /// `x - a`.
    pub fn linear(field: Arc<FiniteField>, a: Fq) -> Self {
        let na = field.neg(a);
        Self::new(field, vec![na, Fq::ONE])
    }

    /// Builds a polynomial from integer coefficients reduced mod `p`.
    pub fn from_ints(field: Arc<FiniteField>, coeffs: &[i64]) -> Self {
        let v = coeffs.iter().map(|&c| field.from_int(c)).collect();
        Self::new(field, v)
    }

    pub fn field(&self) -> &Arc<FiniteField> {
        &self.field
    }

    pub fn coeffs(&self) -> &[Fq] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Fq {
        self.coeffs.get(i).copied().unwrap_or(Fq::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == Fq::ONE
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Fq {
        self.coeffs.last().copied().unwrap_or(Fq::ZERO)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let v = (0..n).map(|i| f.add(self.coeff(i), other.coeff(i))).collect();
        Poly::new(f.clone(), v)
    }

    pub fn neg(&self) -> Poly {
        let f = &self.field;
        Poly::new(f.clone(), self.coeffs.iter().map(|&c| f.neg(c)).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: Fq) -> Poly {
        let f = &self.field;
        Poly::new(f.clone(), self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.field.clone());
        }
        let f = &self.field;
        let mut v = vec![Fq::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                v[i + j] = f.add(v[i + j], f.mul(a, b));
            }
        }
        Poly::new(f.clone(), v)
    }

    pub fn pow(&self, mut e: u64) -> Poly {
        let mut acc = Poly::one(self.field.clone());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Euclidean division `self = q * d + r` with `deg r < deg d`.
    pub fn divrem(&self, d: &Poly) -> Result<(Poly, Poly), AlgebraError> {
        if d.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        let f = &self.field;
        let dd = d.coeffs.len() - 1;
        let inv_lead = f.inv(d.leading())?;
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return Ok((Poly::zero(f.clone()), self.clone()));
        }
        let mut q = vec![Fq::ZERO; r.len() - dd];
        for k in (dd..r.len()).rev() {
            let c = f.mul(r[k], inv_lead);
            if c.is_zero() {
                continue;
            }
            q[k - dd] = c;
            for (i, &di) in d.coeffs.iter().enumerate() {
                let idx = k - dd + i;
                r[idx] = f.sub(r[idx], f.mul(c, di));
            }
        }
        Ok((Poly::new(f.clone(), q), Poly::new(f.clone(), r)))
    }

    /// Exact quotient; errors when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (q, r) = self.divrem(d).ok()?;
        r.is_zero().then_some(q)
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.field.inv(self.leading()).expect("nonzero leading coefficient");
        self.scale(inv)
    }

    /// Monic greatest common divisor (zero when both inputs are zero).
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b).expect("b is nonzero");
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Poly {
        let f = &self.field;
        let v = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| f.mul(c, f.from_int(i as i64)))
            .collect();
        Poly::new(f.clone(), v)
    }

    pub fn eval(&self, a: Fq) -> Fq {
        let f = &self.field;
        self.coeffs
            .iter()
            .rev()
            .fold(Fq::ZERO, |acc, &c| f.add(f.mul(acc, a), c))
    }

    /// The polynomial `self(x + a)`.
    pub fn shift(&self, a: Fq) -> Poly {
        // Horner in the shifted variable.
        let f = &self.field;
        let lin = Poly::new(f.clone(), vec![a, Fq::ONE]);
        let mut acc = Poly::zero(f.clone());
        for &c in self.coeffs.iter().rev() {
            acc = acc.mul(&lin).add(&Poly::constant(f.clone(), c));
        }
        acc
    }

    /// `x^deg * self(1/x)` for a given formal degree `deg >= deg self`.
    pub fn reversed(&self, deg: usize) -> Poly {
        let mut v = vec![Fq::ZERO; deg + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            v[deg - i] = c;
        }
        Poly::new(self.field.clone(), v)
    }

    /// Order of vanishing at `x = a` (`None` for the zero polynomial).
    pub fn valuation_at(&self, a: Fq) -> Option<u64> {
        if self.is_zero() {
            return None;
        }
        let lin = Poly::linear(self.field.clone(), a);
        let mut cur = self.clone();
        let mut k = 0;
        while let Some(q) = cur.div_exact(&lin) {
            cur = q;
            k += 1;
        }
        Some(k)
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn low_degree(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Reinterprets the coefficients in a larger field containing this one.
    /// Only prime-field coefficients can be moved; `None` otherwise.
    pub fn lift_prime(&self, target: &Arc<FiniteField>) -> Option<Poly> {
        if target.characteristic() != self.field.characteristic() {
            return None;
        }
        let v: Option<Vec<Fq>> = self
            .coeffs
            .iter()
            .map(|&c| self.field.prime_value(c).map(Fq))
            .collect();
        Some(Poly::new(target.clone(), v?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f7() -> Arc<FiniteField> {
        FiniteField::prime(7).unwrap()
    }

    #[test]
    fn frobenius_on_binomial() {
        let f = f7();
        let p = Poly::from_ints(f.clone(), &[1, 1]).pow(7);
        assert_eq!(p, Poly::from_ints(f, &[1, 0, 0, 0, 0, 0, 0, 1]));
    }

    #[test]
    fn divrem_reconstructs() {
        let f = f7();
        let a = Poly::from_ints(f.clone(), &[3, 0, 5, 1, 6]);
        let b = Poly::from_ints(f.clone(), &[2, 1, 1]);
        let (q, r) = a.divrem(&b).unwrap();
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.degree().unwrap_or(0) < 2);
    }

    #[test]
    fn gcd_and_valuation() {
        let f = f7();
        let x = Poly::x(f.clone());
        let xm1 = Poly::linear(f.clone(), Fq(1));
        let a = x.pow(3).mul(&xm1);
        let b = x.mul(&xm1.pow(2));
        assert_eq!(a.gcd(&b), x.mul(&xm1));
        assert_eq!(a.valuation_at(Fq(0)), Some(3));
        assert_eq!(a.valuation_at(Fq(1)), Some(1));
        assert_eq!(a.valuation_at(Fq(2)), Some(0));
    }

    #[test]
    fn shift_matches_evaluation() {
        let f = f7();
        let a = Poly::from_ints(f.clone(), &[1, 2, 3, 4]);
        let s = a.shift(Fq(3));
        for t in 0..7 {
            assert_eq!(s.eval(Fq(t)), a.eval(f.add(Fq(t), Fq(3))));
        }
    }

    #[test]
    fn derivative_kills_pth_powers() {
        let f = f7();
        let a = Poly::from_ints(f.clone(), &[1, 2, 3]).pow(7);
        assert!(a.derivative().is_zero());
    }
}
