//! Tail covers `z^m = x`, `y^p - y = z^a (b_0 x + b_1 + b_2 x^-1 + ...)` near
//! the point at infinity, their normal form `y^p - y = z^h`, and the
//! reduction of the boundary germ.
//!
//! Series are written in `w = 1/x`, so the right hand side is `z^a Phi(w)`
//! with `Phi = b_0 w^-1 + b_1 + b_2 w + ...`. The exponent `a = h - m` lies in
//! `(0, m)` for new tails and in `(-m, 0)` for primitive ones.

use std::sync::Arc;

use num_integer::Integer;
use num_traits::One;
use thiserror::Error;

use crate::algebra::{AlgebraError, FiniteField, Fq, Laurent, Poly};
use crate::Q;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TailError {
    #[error("p = {p} divides {what} = {value}")]
    NotCoprime { p: u32, what: &'static str, value: i64 },
    #[error("m = {m} does not divide (p - 1) h = {value}")]
    HasseArfViolation { m: u64, value: i64 },
    #[error("invalid ramification data: {0}")]
    InvalidData(String),
    #[error("b_0 must be nonzero")]
    ZeroLeadingCoefficient,
    #[error("{needed} coefficients needed, {stored} stored")]
    InsufficientPrecision { needed: usize, stored: usize },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("coefficients outside the prime field cannot be moved to an extension")]
    FieldExtensionUnsupported,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TailCover {
    pub field: Arc<FiniteField>,
    pub m: u64,
    pub a: i64,
    /// `b_0, b_1, ...`; `Phi` is known modulo `w^(coeffs.len() - 1)`.
    pub coeffs: Vec<Fq>,
}

impl TailCover {
    pub fn p(&self) -> u32 {
        self.field.characteristic()
    }

    pub fn h(&self) -> i64 {
        self.m as i64 + self.a
    }

    pub fn sigma(&self) -> Q {
        Q::new(self.h(), self.m as i64)
    }

    pub fn precision(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_new(&self) -> bool {
        self.a > 0
    }

    /// Right hand side is exactly `z^h` within the stored precision.
    pub fn is_canonical(&self) -> bool {
        self.coeffs.first() == Some(&Fq::ONE) && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    fn phi(&self) -> Laurent {
        Laurent::new(self.field.clone(), -1, self.coeffs.clone())
    }

    fn with_phi(&self, phi: &Laurent, n: usize) -> TailCover {
        let coeffs = (0..n).map(|k| phi.coeff(k as i64 - 1)).collect();
        TailCover { field: self.field.clone(), m: self.m, a: self.a, coeffs }
    }

    /// `(p - 1) a / m`, an integer by the Hasse–Arf condition.
    fn twist(&self) -> i64 {
        (self.p() as i64 - 1) * self.a / self.m as i64
    }
}

fn check_type(p: u32, m: u64, h: i64) -> Result<(), TailError> {
    if m == 0 || h <= 0 {
        return Err(TailError::InvalidData(format!("m = {m}, h = {h}")));
    }
    if m.is_multiple_of(p as u64) {
        return Err(TailError::NotCoprime { p, what: "m", value: m as i64 });
    }
    if h % p as i64 == 0 {
        return Err(TailError::NotCoprime { p, what: "h", value: h });
    }
    let v = (p as i64 - 1) * h;
    if v % m as i64 != 0 {
        return Err(TailError::HasseArfViolation { m, value: v });
    }
    Ok(())
}

/// The canonical tail `y^p - y = z^h`, stored with `2h + 2` coefficients.
pub fn build_tail(p: u32, m: u64, h: i64) -> Result<TailCover, TailError> {
    let field = FiniteField::prime(p)?;
    check_type(p, m, h)?;
    let mut coeffs = vec![Fq::ZERO; 2 * h as usize + 2];
    coeffs[0] = Fq::ONE;
    Ok(TailCover { field, m, a: h - m as i64, coeffs })
}

/// A tail with arbitrary coefficients over `F_p`, given as residues.
pub fn tail_from_coeffs(p: u32, m: u64, a: i64, coeffs: &[i64]) -> Result<TailCover, TailError> {
    let field = FiniteField::prime(p)?;
    check_type(p, m, m as i64 + a)?;
    if a == 0 || a.abs() >= m as i64 {
        return Err(TailError::InvalidData(format!("a = {a} must satisfy 0 < |a| < m = {m}")));
    }
    let coeffs: Vec<Fq> = coeffs.iter().map(|&c| field.from_int(c)).collect();
    if coeffs.first().is_none_or(|c| c.is_zero()) {
        return Err(TailError::ZeroLeadingCoefficient);
    }
    Ok(TailCover { field, m, a, coeffs })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Substitution {
    /// `x -> c (x + d)`, `z -> gamma z (1 + d/x)^(1/m)` with `gamma^m = c`.
    Affine { c: Fq, d: Fq, gamma: Fq },
    /// `y -> y + g`, `g = z^a sum_{k >= k0} e_k x^-k`.
    ArtinSchreier { k0: usize, e: Vec<Fq> },
}

#[derive(Clone, Debug)]
pub struct Normalized {
    pub tail: TailCover,
    pub chain: Vec<Substitution>,
}

/// Moves a tail to a field of degree `s` over `F_p`.
pub fn extend_to(t: &TailCover, s: u32) -> Result<TailCover, TailError> {
    if t.field.degree() == s {
        return Ok(t.clone());
    }
    let field = FiniteField::get(t.p(), s)?;
    let coeffs = t
        .coeffs
        .iter()
        .map(|&c| t.field.prime_value(c).map(Fq))
        .collect::<Option<Vec<_>>>()
        .ok_or(TailError::FieldExtensionUnsupported)?;
    Ok(TailCover { field, m: t.m, a: t.a, coeffs })
}

/// Brings a tail to `y^p - y = z^h`: an affine change making `b_0 = 1` (and
/// `b_1 = 0` for new tails), then `y -> y + g` removing the remaining terms.
/// Primitive tails only allow homotheties.
pub fn normalize_tail(t: &TailCover) -> Result<Normalized, TailError> {
    let h = t.h();
    check_type(t.p(), t.m, h)?;
    let needed = if t.is_new() { 2 } else { 1 };
    if t.precision() < needed {
        return Err(TailError::InsufficientPrecision { needed, stored: t.precision() });
    }
    let b0 = t.coeffs[0];
    if b0.is_zero() {
        return Err(TailError::ZeroLeadingCoefficient);
    }
    if t.is_canonical() {
        return Ok(Normalized { tail: t.clone(), chain: Vec::new() });
    }
    // gamma^h = 1 / b0, in the smallest extension where it exists
    let mut s = t.field.degree();
    let (t, gamma) = loop {
        let te = extend_to(t, s)?;
        let target = te.field.inv(te.coeffs[0])?;
        if let Some(&g) = te.field.kth_roots(target, h as u64).first() {
            break (te, g);
        }
        s += t.field.degree();
    };
    let f = t.field.clone();
    let c = f.pow_u(gamma, t.m);
    let d = if t.is_new() {
        // d = -b1 m / (b0 c h)
        let num = f.mul(t.coeffs[1], f.from_int(t.m as i64));
        let den = f.mul(f.mul(t.coeffs[0], c), f.from_int(h));
        f.neg(f.div(num, den)?)
    } else {
        Fq::ZERO
    };
    let mut chain = Vec::new();
    let affine = Substitution::Affine { c, d, gamma };
    let t1 = apply(&t, &affine)?;
    if !(gamma == Fq::ONE && d.is_zero()) {
        chain.push(affine);
    }
    let e = solve_artin_schreier(&t1)?;
    let k0 = if t.is_new() { 1 } else { 0 };
    let sub = Substitution::ArtinSchreier { k0, e };
    let t2 = apply(&t1, &sub)?;
    if let Substitution::ArtinSchreier { e, .. } = &sub {
        if e.iter().any(|x| !x.is_zero()) {
            chain.push(sub);
        }
    }
    Ok(Normalized { tail: t2, chain })
}

/// Coefficients `e_k` with `g^p - g = z^a (Phi - w^-1)` to the stored precision.
fn solve_artin_schreier(t: &TailCover) -> Result<Vec<Fq>, TailError> {
    let f = &t.field;
    let k0: i64 = if t.is_new() { 1 } else { 0 };
    let n = t.precision() as i64;
    let tw = t.twist();
    let p = t.p() as i64;
    // coefficient of w^j on the right: b_{j+1}, for k0 <= j <= n - 2
    let mut e = vec![Fq::ZERO; (n - 1).max(0) as usize];
    for j in k0..(n - 1) {
        let rhs = t.coeffs[(j + 1) as usize];
        let mut val = f.neg(rhs);
        let jt = j + tw;
        if jt % p == 0 && jt / p >= k0 {
            let i = jt / p;
            debug_assert!(i < j);
            val = f.add(val, f.pow_u(e[i as usize], p as u64));
        }
        e[j as usize] = val;
    }
    Ok(e)
}

fn one_plus_dw_pow(f: &Arc<FiniteField>, d: Fq, num: i64, den: u64, prec: i64) -> Result<Laurent, TailError> {
    let base = Laurent::from_poly(&Poly::new(f.clone(), vec![Fq::ONE, d]), prec);
    let powered = base.pow_i(num)?;
    Ok(powered.root_of_unit(den)?)
}

/// Applies one substitution to the equation, keeping the stored precision.
pub fn apply(t: &TailCover, sub: &Substitution) -> Result<TailCover, TailError> {
    let f = t.field.clone();
    let n = t.precision();
    let prec = n as i64 - 1;
    match sub {
        Substitution::Affine { c, d, gamma } => {
            let cinv = f.inv(*c)?;
            let dw_inv = Laurent::from_poly(&Poly::new(f.clone(), vec![Fq::ONE, *d]), prec + 1).inv()?;
            let mut sum = Laurent::zero(f.clone(), prec);
            for (k, &b) in t.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let k = k as i64;
                // b_k c^(1-k) w^(k-1) (1 + d w)^(1-k)
                let scalar = f.mul(b, f.pow(cinv, k - 1)?);
                let term = if k == 0 {
                    Laurent::from_poly(&Poly::new(f.clone(), vec![Fq::ONE, *d]), prec + 1).shift(-1)
                } else {
                    dw_inv.pow_u((k - 1) as u64).shift(k - 1)
                };
                sum = sum.add(&term.scale(scalar).truncate(prec));
            }
            let unit = one_plus_dw_pow(&f, *d, t.a, t.m, prec + 1)?;
            let phi = sum.mul(&unit).scale(f.pow(*gamma, t.a)?).truncate(prec);
            Ok(t.with_phi(&phi, n))
        }
        Substitution::ArtinSchreier { e, .. } => {
            let p = t.p() as i64;
            let tw = t.twist();
            let mut phi = t.phi();
            let mut corr = vec![Fq::ZERO; (prec + 1).max(0) as usize];
            for (k, &ek) in e.iter().enumerate() {
                if ek.is_zero() {
                    continue;
                }
                let k = k as i64;
                // (g^p - g) / z^a = sum e_k^p w^(kp - t) - sum e_k w^k
                let hi = k * p - tw;
                if hi < prec {
                    let i = (hi + 1) as usize;
                    corr[i] = f.add(corr[i], f.pow_u(ek, p as u64));
                }
                if k < prec {
                    let i = (k + 1) as usize;
                    corr[i] = f.sub(corr[i], ek);
                }
            }
            let corr = Laurent::new(f.clone(), -1, corr);
            phi = phi.sub(&corr);
            Ok(t.with_phi(&phi, n))
        }
    }
}

/// Applies a whole chain in order. The input must already live in the
/// field the chain was computed over, see [`extend_to`].
pub fn apply_chain(t: &TailCover, chain: &[Substitution]) -> Result<TailCover, TailError> {
    let mut cur = t.clone();
    for s in chain {
        cur = apply(&cur, s)?;
    }
    Ok(cur)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TailMetrics {
    pub sigma: Q,
    pub genus: i64,
    pub aut0_order: i64,
    pub inner_aut_order: i64,
}

/// `sigma = h/m`, genus of the Artin–Schreier curve over the `z`-line, and
/// the automorphism orders; `inner` overrides the default `h`.
pub fn tail_metrics(p: u32, m: u64, h: i64, inner: Option<i64>) -> Result<TailMetrics, TailError> {
    check_type(p, m, h)?;
    let p = p as i64;
    Ok(TailMetrics {
        sigma: Q::new(h, m as i64),
        genus: (p - 1) * (h - 1) / 2,
        aut0_order: (p - 1) * h,
        inner_aut_order: inner.unwrap_or(h),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TailClass {
    /// `0 < sigma < 1`, with the Riemann–Hurwitz count for a cover étale
    /// away from infinity (negative, so a tame point is forced) and the
    /// genus once that point is added.
    Primitive { etale_two_genus: i64, genus_with_tame_point: i64 },
    /// `1 < sigma < 2`, étale away from infinity by construction.
    New,
    NotSpecial(String),
}

pub fn classify_tail(p: u32, m: u64, h: i64) -> Result<TailClass, TailError> {
    check_type(p, m, h)?;
    let s = Q::new(h, m as i64);
    if s == Q::one() {
        return Ok(TailClass::NotSpecial("sigma = 1".into()));
    }
    if s >= Q::from_integer(2) {
        return Ok(TailClass::NotSpecial(format!("sigma = {s} is not below 2")));
    }
    if s > Q::one() {
        return Ok(TailClass::New);
    }
    let (pi, mi) = (p as i64, m as i64);
    // 2 g - 2 = -2pm + (pm - 1) + (p - 1) h, plus p(m - 1) with a tame point
    let etale = (pi - 1) * h - pi * mi + 1;
    let with_point = etale + pi * (mi - 1);
    if etale >= 0 || with_point < 0 || with_point % 2 != 0 {
        return Err(TailError::InvalidData(format!(
            "Riemann–Hurwitz bookkeeping failed: 2g = {etale} / {with_point}"
        )));
    }
    Ok(TailClass::Primitive { etale_two_genus: etale, genus_with_tame_point: with_point / 2 })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GermVerdict {
    /// `y'^p - y' = wbar z'^a + z'^h`, the first term present only at the threshold.
    GoodReduction { a: i64, h: i64, wbar_present: bool, threshold: Q },
    /// `d(wbar z'^a + z'^h)` has a zero of order `a - 1` at the origin and `m`
    /// further simple zeros.
    BadReduction { a: i64, h: i64, threshold: Q, differential: Vec<u32>, zeros_at_origin: i64, simple_zeros: u64 },
}

/// Decides reduction of the boundary germ from `val(T) / val(p)`.
pub fn germ_reduction(p: u32, m: u64, h: i64, ratio: Q, wbar: Option<u32>) -> Result<GermVerdict, TailError> {
    let a = h - m as i64;
    if p < 3 || !crate::algebra::is_prime(p as u64) {
        return Err(TailError::PreconditionViolated(format!("p = {p} is not an odd prime")));
    }
    if m == 0 || a <= 0 || a >= m as i64 {
        return Err(TailError::PreconditionViolated(format!("h = m + a with 0 < a < m fails for (m, h) = ({m}, {h})")));
    }
    if (a * (p as i64 - 1)) % m as i64 != 0 {
        return Err(TailError::PreconditionViolated(format!("m = {m} does not divide a (p - 1)")));
    }
    if h % p as i64 == 0 || m.is_multiple_of(p as u64) {
        return Err(TailError::PreconditionViolated("h and m must be prime to p".into()));
    }
    let threshold = Q::new(p as i64 * m as i64, (p as i64 - 1) * h);
    if ratio >= threshold {
        return Ok(GermVerdict::GoodReduction { a, h, wbar_present: ratio == threshold, threshold });
    }
    let field = FiniteField::prime(p)?;
    let w = field.from_int(wbar.unwrap_or(1) as i64);
    if w.is_zero() {
        return Err(TailError::PreconditionViolated("wbar must be nonzero".into()));
    }
    let mut g = vec![Fq::ZERO; h as usize + 1];
    g[a as usize] = w;
    g[h as usize] = Fq::ONE;
    let dg = Poly::new(field.clone(), g).derivative();
    let origin = dg.low_degree().expect("nonzero") as i64;
    let rest = Poly::new(field.clone(), dg.coeffs()[origin as usize..].to_vec());
    let sqfree = rest.gcd(&rest.derivative()).is_one();
    let deg = rest.degree().unwrap_or(0) as u64;
    if !sqfree || rest.eval(Fq::ZERO).is_zero() {
        return Err(TailError::PreconditionViolated("differential has repeated zeros".into()));
    }
    Ok(GermVerdict::BadReduction {
        a,
        h,
        threshold,
        differential: dg.coeffs().iter().map(|c| c.0).collect(),
        zeros_at_origin: origin,
        simple_zeros: deg,
    })
}

/// Sample of valid new tail types `(m, a)` for a prime `p` with `m <= max_m`.
pub fn new_tail_types(p: u32, max_m: u64) -> Vec<(u64, i64)> {
    let mut out = Vec::new();
    for m in 2..=max_m {
        if m % p as u64 == 0 {
            continue;
        }
        for a in 1..m as i64 {
            let h = m as i64 + a;
            if h % p as i64 != 0 && (a * (p as i64 - 1)) % m as i64 == 0 && a.gcd(&(p as i64)) == 1 {
                out.push((m, a));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn build_and_reject() {
        let t = build_tail(7, 6, 1).unwrap();
        assert!(t.is_canonical());
        assert_eq!(t.precision(), 4);
        assert!(build_tail(7, 6, 4).is_ok());
        assert!(matches!(build_tail(7, 4, 1), Err(TailError::HasseArfViolation { .. })));
        assert!(matches!(build_tail(7, 7, 1), Err(TailError::NotCoprime { .. })));
        assert!(matches!(tail_from_coeffs(3, 2, 1, &[2]), Err(TailError::NotCoprime { .. })));
    }

    #[test]
    fn canonical_is_fixed() {
        let t = build_tail(7, 3, 4).unwrap();
        let n = normalize_tail(&t).unwrap();
        assert!(n.chain.is_empty());
        assert_eq!(n.tail, t);
    }

    #[test]
    fn homothety_only_for_primitive() {
        // p = 5, m = 4, h = 3: primitive, a = -1
        let t = tail_from_coeffs(5, 4, -1, &[2, 1, 3, 0, 4, 1]).unwrap();
        let n = normalize_tail(&t).unwrap();
        assert!(n.tail.is_canonical(), "{:?}", n.tail.coeffs);
        match &n.chain[0] {
            Substitution::Affine { d, .. } => assert!(d.is_zero()),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn new_tail_normalizes() {
        let t = tail_from_coeffs(7, 6, 5, &[1, 3, 5, 0, 0, 0, 0, 0]).unwrap();
        let n = normalize_tail(&t).unwrap();
        assert!(n.tail.is_canonical(), "{:?}", n.tail.coeffs);
        let again = apply_chain(&extend_to(&t, n.tail.field.degree()).unwrap(), &n.chain).unwrap();
        assert_eq!(again, n.tail);
        let t2 = tail_from_coeffs(5, 2, 1, &[2, 0, 0, 0]).unwrap();
        let n2 = normalize_tail(&t2).unwrap();
        assert!(n2.tail.is_canonical());
    }

    #[test]
    fn precision_guard() {
        let t = TailCover { field: FiniteField::prime(7).unwrap(), m: 6, a: 5, coeffs: vec![Fq(2)] };
        assert!(matches!(normalize_tail(&t), Err(TailError::InsufficientPrecision { .. })));
    }

    #[test]
    fn metrics() {
        let m = tail_metrics(7, 6, 1, None).unwrap();
        assert_eq!((m.sigma, m.genus, m.aut0_order, m.inner_aut_order), (Q::new(1, 6), 0, 6, 1));
        let m = tail_metrics(7, 3, 2, None).unwrap();
        assert_eq!((m.sigma, m.genus, m.aut0_order, m.inner_aut_order), (Q::new(2, 3), 3, 12, 2));
        let m = tail_metrics(3, 2, 1, None).unwrap();
        assert_eq!((m.genus, m.aut0_order), (0, 2));
    }

    #[test]
    fn classes() {
        assert!(matches!(classify_tail(7, 6, 1).unwrap(), TailClass::Primitive { .. }));
        assert_eq!(classify_tail(7, 3, 4).unwrap(), TailClass::New);
        assert!(matches!(classify_tail(5, 2, 2).unwrap(), TailClass::NotSpecial(_)));
    }

    #[test]
    fn germ() {
        match germ_reduction(7, 3, 4, Q::new(7, 8), None).unwrap() {
            GermVerdict::GoodReduction { wbar_present, threshold, .. } => {
                assert!(wbar_present);
                assert_eq!(threshold, Q::new(7, 8));
            }
            other => panic!("{other:?}"),
        }
        match germ_reduction(7, 3, 4, Q::new(1, 2), None).unwrap() {
            GermVerdict::BadReduction { zeros_at_origin, simple_zeros, .. } => {
                assert_eq!((zeros_at_origin, simple_zeros), (0, 3));
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            germ_reduction(5, 2, 3, Q::one(), None).unwrap(),
            GermVerdict::GoodReduction { wbar_present: false, .. }
        ));
        assert!(germ_reduction(7, 3, 2, Q::one(), None).is_err());
    }
}
