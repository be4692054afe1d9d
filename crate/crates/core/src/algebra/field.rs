//! Finite fields `F_{p^s}` for odd primes `p`.
//!
//! Elements are packed as integers `c_0 + c_1 p + ... + c_{s-1} p^{s-1}`, where
//! `c_i` are the coefficients of the element written as a polynomial in a root
//! `α` of the defining modulus. The prime field is therefore embedded as the
//! integers `0..p`. Multiplication goes through discrete log tables built once
//! per field; fields are cached process-wide.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use super::AlgebraError;

/// Largest field order for which log tables are built.
pub const MAX_FIELD_ORDER: u64 = 1 << 21;

/// An element of a [`FiniteField`] in packed form.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Fq(pub u32);

impl Fq {
    pub const ZERO: Fq = Fq(0);
    pub const ONE: Fq = Fq(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

pub struct FiniteField {
    p: u32,
    s: u32,
    q: u32,
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    /// `p^i` for `i < s`, used for digit extraction.
    place: Vec<u32>,
}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{}", self.p, self.s)
    }
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.s == other.s
    }
}

impl Eq for FiniteField {}

fn cache() -> &'static Mutex<HashMap<(u32, u32), Arc<FiniteField>>> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, u32), Arc<FiniteField>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl FiniteField {
    /// Returns the field with `p^s` elements, building it on first use.
    pub fn get(p: u32, s: u32) -> Result<Arc<FiniteField>, AlgebraError> {
        if p == 2 || !is_prime(p as u64) {
            return Err(AlgebraError::NotOddPrime(p as u64));
        }
        if s == 0 {
            return Err(AlgebraError::InvalidDegree(s));
        }
        let order = (p as u64).checked_pow(s).unwrap_or(u64::MAX);
        if order > MAX_FIELD_ORDER {
            return Err(AlgebraError::FieldTooLarge { p, s });
        }
        let mut guard = cache().lock().expect("field cache poisoned");
        if let Some(f) = guard.get(&(p, s)) {
            return Ok(f.clone());
        }
        let field = Arc::new(Self::build(p, s));
        guard.insert((p, s), field.clone());
        Ok(field)
    }

    /// The prime field `F_p`.
    pub fn prime(p: u32) -> Result<Arc<FiniteField>, AlgebraError> {
        Self::get(p, 1)
    }

    fn build(p: u32, s: u32) -> FiniteField {
        let modulus = smallest_irreducible(p, s);
        let q = p.pow(s);
        let place: Vec<u32> = (0..s).map(|i| p.pow(i)).collect();
        let mut field = FiniteField {
            p,
            s,
            q,
            modulus,
            exp: Vec::new(),
            log: Vec::new(),
            place,
        };
        let generator = field.find_generator();
        let mut exp = Vec::with_capacity(q as usize - 1);
        let mut log = vec![0u32; q as usize];
        let mut cur = 1u32;
        for i in 0..(q - 1) {
            exp.push(cur);
            log[cur as usize] = i;
            cur = field.slow_mul(cur, generator);
        }
        debug_assert_eq!(cur, 1);
        field.exp = exp;
        field.log = log;
        field
    }

    fn digits(&self, a: u32) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.s as usize);
        let mut a = a;
        for _ in 0..self.s {
            out.push((a % self.p) as u64);
            a /= self.p;
        }
        out
    }

    fn pack(&self, digits: &[u64]) -> u32 {
        digits
            .iter()
            .enumerate()
            .map(|(i, &d)| d as u32 * self.place[i])
            .sum()
    }

    /// Multiplication by schoolbook polynomial product and reduction; only
    /// used while the log tables are being built.
    fn slow_mul(&self, a: u32, b: u32) -> u32 {
        let p = self.p as u64;
        let s = self.s as usize;
        let da = self.digits(a);
        let db = self.digits(b);
        let mut prod = vec![0u64; 2 * s - 1];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        for k in (s..prod.len()).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for (i, &mi) in self.modulus[..s].iter().enumerate() {
                let sub = c * mi as u64 % p;
                prod[k - s + i] = (prod[k - s + i] + p - sub) % p;
            }
        }
        self.pack(&prod[..s])
    }

    fn slow_pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.slow_mul(acc, base);
            }
            base = self.slow_mul(base, base);
            e >>= 1;
        }
        acc
    }

    fn find_generator(&self) -> u32 {
        let order = self.q as u64 - 1;
        let factors = prime_factors(order);
        (1..self.q)
            .find(|&g| factors.iter().all(|&r| self.slow_pow(g, order / r) != 1))
            .expect("multiplicative group of a finite field is cyclic")
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.s
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    /// Coefficients `m_0..m_s` of the monic defining polynomial.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// The primitive element whose powers index the log tables.
    pub fn generator(&self) -> Fq {
        Fq(self.exp[if self.q > 2 { 1 } else { 0 }])
    }

    /// Embeds an integer through `Z -> F_p -> F_q`.
    pub fn from_int(&self, n: i64) -> Fq {
        Fq(n.rem_euclid(self.p as i64) as u32)
    }

    /// The residue in `0..p` when the element lies in the prime field.
    pub fn prime_value(&self, a: Fq) -> Option<u32> {
        (a.0 < self.p).then_some(a.0)
    }

    pub fn elements(&self) -> impl Iterator<Item = Fq> {
        (0..self.q).map(Fq)
    }

    pub fn add(&self, a: Fq, b: Fq) -> Fq {
        if self.s == 1 {
            return Fq((a.0 + b.0) % self.p);
        }
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0;
        for &pl in &self.place {
            let d = (x % self.p + y % self.p) % self.p;
            out += d * pl;
            x /= self.p;
            y /= self.p;
        }
        Fq(out)
    }

    pub fn neg(&self, a: Fq) -> Fq {
        if self.s == 1 {
            return Fq((self.p - a.0) % self.p);
        }
        let mut x = a.0;
        let mut out = 0;
        for &pl in &self.place {
            let d = (self.p - x % self.p) % self.p;
            out += d * pl;
            x /= self.p;
        }
        Fq(out)
    }

    pub fn sub(&self, a: Fq, b: Fq) -> Fq {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Fq, b: Fq) -> Fq {
        if a.is_zero() || b.is_zero() {
            return Fq::ZERO;
        }
        let n = self.q - 1;
        let l = (self.log[a.0 as usize] as u64 + self.log[b.0 as usize] as u64) % n as u64;
        Fq(self.exp[l as usize])
    }

    pub fn inv(&self, a: Fq) -> Result<Fq, AlgebraError> {
        if a.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        let n = self.q - 1;
        let l = (n - self.log[a.0 as usize]) % n;
        Ok(Fq(self.exp[l as usize]))
    }

    pub fn div(&self, a: Fq, b: Fq) -> Result<Fq, AlgebraError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^e` for any integer `e`; `0^e` with `e < 0` is a division by zero.
    pub fn pow(&self, a: Fq, e: i64) -> Result<Fq, AlgebraError> {
        if a.is_zero() {
            return match e {
                0 => Ok(Fq::ONE),
                e if e > 0 => Ok(Fq::ZERO),
                _ => Err(AlgebraError::DivisionByZero),
            };
        }
        let n = (self.q - 1) as i64;
        let l = (self.log[a.0 as usize] as i64 * e.rem_euclid(n)).rem_euclid(n);
        Ok(Fq(self.exp[l as usize]))
    }

    /// `a^e` for a nonnegative exponent.
    pub fn pow_u(&self, a: Fq, e: u64) -> Fq {
        if e == 0 {
            return Fq::ONE;
        }
        if a.is_zero() {
            return Fq::ZERO;
        }
        let n = (self.q - 1) as u64;
        let l = (self.log[a.0 as usize] as u64 * (e % n)) % n;
        Fq(self.exp[l as usize])
    }

    /// Discrete logarithm with respect to [`Self::generator`].
    pub fn log(&self, a: Fq) -> Option<u32> {
        (!a.is_zero()).then(|| self.log[a.0 as usize])
    }

    /// Inverse of Frobenius: the unique `r` with `r^p = c`.
    pub fn pth_root(&self, c: Fq) -> Fq {
        if c.is_zero() {
            return c;
        }
        let n = (self.q - 1) as u64;
        let shift = (self.p as u64).pow(self.s - 1) % n;
        let l = self.log[c.0 as usize] as u64 * shift % n;
        Fq(self.exp[l as usize])
    }

    /// A primitive `m`-th root of unity, if `m` divides `q - 1`.
    pub fn root_of_unity(&self, m: u64) -> Option<Fq> {
        let n = self.q as u64 - 1;
        if m == 0 || !n.is_multiple_of(m) {
            return None;
        }
        Some(Fq(self.exp[(n / m) as usize % self.exp.len()]))
    }

    /// Multiplicative order of a nonzero element.
    pub fn mult_order(&self, a: Fq) -> Option<u64> {
        let l = self.log(a)? as u64;
        let n = self.q as u64 - 1;
        Some(n / num_integer::gcd(n, l))
    }

    /// All `r` with `r^k = c`, in packed order.
    pub fn kth_roots(&self, c: Fq, k: u64) -> Vec<Fq> {
        if c.is_zero() {
            return vec![Fq::ZERO];
        }
        let n = self.q as u64 - 1;
        let l = self.log[c.0 as usize] as u64;
        let g = num_integer::gcd(k, n);
        if !l.is_multiple_of(g) {
            return Vec::new();
        }
        let mut out: Vec<Fq> = (0..g)
            .map(|i| {
                // solve k*x = l (mod n): x0 = (l/g) * inv(k/g mod n/g), plus i*n/g
                let ng = n / g;
                let kg = (k / g) % ng.max(1);
                let inv = if ng == 1 { 0 } else { mod_inverse(kg, ng) };
                let x0 = if ng == 1 { 0 } else { (l / g) % ng * inv % ng };
                Fq(self.exp[((x0 + i * ng) % n) as usize])
            })
            .collect();
        out.sort();
        out
    }

    /// Renders an element as a polynomial in the generator `a` of the modulus.
    pub fn display(&self, a: Fq) -> String {
        if self.s == 1 {
            return a.0.to_string();
        }
        let d = self.digits(a.0);
        let mut terms = Vec::new();
        for (i, &c) in d.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let t = match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => "a".to_string(),
                (1, c) => format!("{c}*a"),
                (i, 1) => format!("a^{i}"),
                (i, c) => format!("{c}*a^{i}"),
            };
            terms.push(t);
        }
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join(" + ")
        }
    }
}

fn mod_inverse(a: u64, n: u64) -> u64 {
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (n as i128, a as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    t.rem_euclid(n as i128) as u64
}

// Polynomials over F_p as coefficient vectors, lowest degree first. Only used to
// pick the defining modulus.
fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn poly_mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    poly_rem(prod, m, p)
}

fn poly_rem(mut a: Vec<u64>, m: &[u64], p: u64) -> Vec<u64> {
    let dm = m.len() - 1;
    let inv_lead = pow_mod(m[dm], p - 2, p);
    trim(&mut a);
    while a.len() > dm {
        let k = a.len() - 1;
        let c = a[k] * inv_lead % p;
        for (i, &mi) in m.iter().enumerate() {
            let idx = k - dm + i;
            a[idx] = (a[idx] + p - c * mi % p) % p;
        }
        trim(&mut a);
    }
    a
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

fn poly_gcd(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> Vec<u64> {
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = poly_rem(a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// `x^(p^k) mod m`.
fn frobenius_power(m: &[u64], p: u64, k: u32) -> Vec<u64> {
    let mut cur = poly_rem(vec![0, 1], m, p);
    for _ in 0..k {
        // cur <- cur^p
        let mut acc = vec![1u64];
        let mut base = cur.clone();
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                acc = poly_mulmod(&acc, &base, m, p);
            }
            base = poly_mulmod(&base, &base, m, p);
            e >>= 1;
        }
        cur = acc;
    }
    cur
}

fn is_irreducible(m: &[u64], p: u64) -> bool {
    let s = (m.len() - 1) as u32;
    let x = poly_rem(vec![0, 1], m, p);
    if frobenius_power(m, p, s) != x {
        return false;
    }
    for r in prime_factors(s as u64) {
        let mut h = frobenius_power(m, p, s / r as u32);
        // h - x
        if h.len() < 2 {
            h.resize(2, 0);
        }
        h[1] = (h[1] + p - 1) % p;
        let g = poly_gcd(m.to_vec(), h, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

/// The monic irreducible of degree `s` whose coefficient vector
/// `(m_{s-1}, ..., m_0)` is lexicographically smallest.
fn smallest_irreducible(p: u32, s: u32) -> Vec<u32> {
    if s == 1 {
        return vec![0, 1];
    }
    let p64 = p as u64;
    let count = p64.pow(s);
    for idx in 0..count {
        let mut m = Vec::with_capacity(s as usize + 1);
        let mut v = idx;
        for _ in 0..s {
            m.push(v % p64);
            v /= p64;
        }
        if m[0] == 0 {
            continue;
        }
        m.push(1);
        if is_irreducible(&m, p64) {
            return m.into_iter().map(|c| c as u32).collect();
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_basics() {
        let f = FiniteField::prime(7).unwrap();
        assert_eq!(f.mul(Fq(3), Fq(5)), Fq(1));
        assert_eq!(f.inv(Fq(3)).unwrap(), Fq(5));
        assert_eq!(f.pth_root(Fq(3)), Fq(3));
        assert_eq!(f.pth_root(Fq(0)), Fq(0));
        assert_eq!(f.from_int(-1), Fq(6));
    }

    #[test]
    fn rejects_bad_characteristic() {
        assert!(matches!(FiniteField::get(2, 1), Err(AlgebraError::NotOddPrime(2))));
        assert!(matches!(FiniteField::get(9, 1), Err(AlgebraError::NotOddPrime(9))));
        assert!(matches!(FiniteField::get(7, 9), Err(AlgebraError::FieldTooLarge { .. })));
    }

    #[test]
    fn f9_modulus_and_generator_root() {
        let f = FiniteField::get(3, 2).unwrap();
        // x^2 + 1 is the smallest monic irreducible quadratic over F_3
        assert_eq!(f.modulus(), &[1, 0, 1]);
        let g = f.generator();
        let r = f.pth_root(g);
        assert_eq!(r, f.pow_u(g, 3));
        assert_eq!(f.pow_u(r, 3), g);
    }

    #[test]
    fn field_axioms_small_extension() {
        let f = FiniteField::get(5, 2).unwrap();
        for a in f.elements() {
            assert_eq!(f.add(a, f.neg(a)), Fq::ZERO);
            if !a.is_zero() {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), Fq::ONE);
            }
            assert_eq!(f.pow_u(f.pth_root(a), 5), a);
        }
        // distributivity on a sample
        let (a, b, c) = (Fq(7), Fq(13), Fq(21));
        assert_eq!(
            f.mul(a, f.add(b, c)),
            f.add(f.mul(a, b), f.mul(a, c))
        );
    }

    #[test]
    fn kth_roots_are_complete() {
        let f = FiniteField::get(7, 2).unwrap();
        for c in f.elements().skip(1).take(20) {
            let roots = f.kth_roots(c, 6);
            let brute: Vec<Fq> = f.elements().filter(|&r| f.pow_u(r, 6) == c).collect();
            assert_eq!(roots, brute);
        }
    }

    #[test]
    fn root_of_unity_order() {
        let f = FiniteField::prime(7).unwrap();
        let z = f.root_of_unity(6).unwrap();
        assert_eq!(f.mult_order(z), Some(6));
        assert!(f.root_of_unity(4).is_none());
    }
}
