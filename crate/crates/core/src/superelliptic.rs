//! Cyclic covers `z^m = f(x)` of the projective line with `m` prime to `p`,
//! their places over marked points, and differentials `sum_j r_j(x) z^j dx`.

use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use thiserror::Error;

use crate::algebra::{
    cartier_rational, AlgebraError, FiniteField, Fq, Laurent, Poly, RationalDifferential,
    RationalFunction,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CurveError {
    #[error("p = {p} divides m = {m}")]
    NotCoprime { p: u32, m: u64 },
    #[error("right hand side is zero")]
    EmptyRHS,
    #[error("m must be positive")]
    ZeroDegree,
    #[error("z^{m} = f is reducible: gcd of m and all exponents is {d}")]
    Reducible { m: u64, d: u64 },
    #[error("x = {0} listed twice")]
    DuplicatePoint(u32),
    #[error("differential is zero")]
    ZeroDifferential,
    #[error("no primitive {0}-th root of unity in the base field")]
    NoRootOfUnity(u64),
    #[error("expected {expected} components, got {got}")]
    ComponentCount { expected: usize, got: usize },
    #[error("no place {place} over point {point}")]
    InvalidPlace { point: usize, place: usize },
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("no splitting field within the supported size")]
    FieldTooLarge,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum XPoint {
    Finite(Fq),
    Infinity,
}

impl fmt::Display for XPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            XPoint::Finite(a) => write!(f, "{}", a.0),
            XPoint::Infinity => write!(f, "inf"),
        }
    }
}

/// The places of the curve above one marked point of the line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaceProfile {
    pub point: XPoint,
    /// Order of `f` at the point (negative degree at infinity).
    pub ord_f: i64,
    pub e: u64,
    pub place_count: u64,
    pub residual_degree: u64,
    /// Leading coefficient `u0` of `f / t^ord_f` in the local parameter.
    pub unit: Fq,
    /// Rational solutions of `Y^g = u0`, one per rational place.
    pub branch_values: Vec<Fq>,
}

impl PlaceProfile {
    /// Number of geometric places, `m / e`.
    pub fn geometric_places(&self) -> u64 {
        self.place_count * self.residual_degree
    }

    /// Order of `z` at any place above the point.
    pub fn ord_z(&self) -> i64 {
        self.ord_f / self.geometric_places() as i64
    }

    /// Order of `dx` at any place above the point.
    pub fn ord_dx(&self) -> i64 {
        match self.point {
            XPoint::Finite(_) => self.e as i64 - 1,
            XPoint::Infinity => -(self.e as i64) - 1,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SuperellipticCurve {
    field: Arc<FiniteField>,
    m: u64,
    leading: Fq,
    roots: Vec<(Fq, u64)>,
    f: Poly,
    places: Vec<PlaceProfile>,
}

/// `omega = sum_j r_j(x) z^j dx` with `0 <= j < m`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CurveDifferential {
    pub components: Vec<RationalFunction>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DifferentialKind {
    Logarithmic,
    Exact,
    Neither,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Eigencharacter {
    /// `chi(beta_0)` as a residue mod `p`.
    PrimeField(u32),
    /// Eigenvalue that is not in the prime field.
    OutsidePrimeField(Fq),
    NotEigen,
}

/// Builds `z^m = leading * prod (x - a)^n` over `F_{p^s'}` with `s | s'` the
/// smallest degree containing `mu_m` and making every marked place rational.
/// Roots with exponent zero are kept as marked points.
pub fn build_curve(
    p: u32,
    s: u32,
    m: u64,
    roots: &[(u32, u64)],
    leading: u32,
) -> Result<SuperellipticCurve, CurveError> {
    if m == 0 {
        return Err(CurveError::ZeroDegree);
    }
    let base = FiniteField::get(p, s)?;
    if m.is_multiple_of(p as u64) {
        return Err(CurveError::NotCoprime { p, m });
    }
    if leading.is_multiple_of(p) {
        return Err(CurveError::EmptyRHS);
    }
    let mut seen = Vec::new();
    for &(a, _) in roots {
        let a = a % p;
        if seen.contains(&a) {
            return Err(CurveError::DuplicatePoint(a));
        }
        seen.push(a);
    }
    let d = roots.iter().fold(m, |acc, &(_, n)| acc.gcd(&n));
    let deg: u64 = roots.iter().map(|r| r.1).sum();
    let d = d.gcd(&deg);
    if m > 1 && d != 1 {
        return Err(CurveError::Reducible { m, d });
    }
    let _ = base;
    let mut k = 1;
    loop {
        let field = FiniteField::get(p, s * k).map_err(|e| match e {
            AlgebraError::FieldTooLarge { .. } => CurveError::FieldTooLarge,
            other => other.into(),
        })?;
        if let Some(curve) = try_build(field, m, roots, leading)? {
            return Ok(curve);
        }
        k += 1;
    }
}

fn try_build(
    field: Arc<FiniteField>,
    m: u64,
    roots: &[(u32, u64)],
    leading: u32,
) -> Result<Option<SuperellipticCurve>, CurveError> {
    let q1 = field.order() as u64 - 1;
    if !q1.is_multiple_of(m) {
        return Ok(None);
    }
    let p = field.characteristic();
    let roots: Vec<(Fq, u64)> = roots.iter().map(|&(a, n)| (Fq(a % p), n)).collect();
    let leading = Fq(leading % p);
    let mut f = Poly::constant(field.clone(), leading);
    for &(a, n) in &roots {
        f = f.mul(&Poly::linear(field.clone(), a).pow(n));
    }
    let mut points: Vec<(XPoint, i64, Fq)> = Vec::new();
    for &(a, n) in &roots {
        let mut u0 = leading;
        for &(b, k) in &roots {
            if b != a {
                u0 = field.mul(u0, field.pow_u(field.sub(a, b), k));
            }
        }
        points.push((XPoint::Finite(a), n as i64, u0));
    }
    let deg = f.degree().expect("f nonzero") as i64;
    points.push((XPoint::Infinity, -deg, leading));
    points.sort_by_key(|p| p.0);

    let mut places = Vec::new();
    for (point, v, u0) in points {
        let g = m.gcd(&(v.unsigned_abs()));
        let e = m / g;
        let c = field.pow_u(u0, q1 / g);
        let d = field.mult_order(c).expect("unit");
        if d != 1 {
            return Ok(None);
        }
        let branch_values = field.kth_roots(u0, g);
        debug_assert_eq!(branch_values.len() as u64, g);
        places.push(PlaceProfile {
            point,
            ord_f: v,
            e,
            place_count: g / d,
            residual_degree: d,
            unit: u0,
            branch_values,
        });
    }
    Ok(Some(SuperellipticCurve { field, m, leading, roots, f, places }))
}

impl SuperellipticCurve {
    pub fn field(&self) -> &Arc<FiniteField> {
        &self.field
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn p(&self) -> u32 {
        self.field.characteristic()
    }

    pub fn rhs(&self) -> &Poly {
        &self.f
    }

    pub fn leading(&self) -> Fq {
        self.leading
    }

    pub fn roots(&self) -> &[(Fq, u64)] {
        &self.roots
    }

    /// Place profiles over the marked points, finite points first then infinity.
    pub fn places(&self) -> &[PlaceProfile] {
        &self.places
    }

    pub fn point_index(&self, point: XPoint) -> Option<usize> {
        self.places.iter().position(|pl| pl.point == point)
    }

    pub fn rhs_function(&self) -> RationalFunction {
        RationalFunction::from_poly(self.f.clone())
    }

    /// Primitive `m`-th root of unity `gen^((q-1)/m)`.
    pub fn zeta(&self) -> Result<Fq, CurveError> {
        self.field.root_of_unity(self.m).ok_or(CurveError::NoRootOfUnity(self.m))
    }

    /// A differential with the given components, padded with zeros.
    pub fn differential(&self, comps: Vec<RationalFunction>) -> Result<CurveDifferential, CurveError> {
        if comps.len() > self.m as usize {
            return Err(CurveError::ComponentCount { expected: self.m as usize, got: comps.len() });
        }
        let mut c = comps;
        c.resize(self.m as usize, RationalFunction::zero(self.field.clone()));
        Ok(CurveDifferential { components: c })
    }

    /// `r(x) z^j dx` with `j` reduced modulo `m` through `z^m = f`.
    pub fn monomial_differential(&self, r: RationalFunction, j: i64) -> CurveDifferential {
        let m = self.m as i64;
        let (k, jr) = (j.div_euclid(m), j.rem_euclid(m));
        let r = r.mul(&self.rhs_function().pow(k).expect("f nonzero"));
        let mut c = vec![RationalFunction::zero(self.field.clone()); self.m as usize];
        c[jr as usize] = r;
        CurveDifferential { components: c }
    }

    /// `dF` for `F = sum_k r_k z^k`, using `dz/z = f' / (m f) dx`.
    pub fn exact_differential(&self, func: &[RationalFunction]) -> CurveDifferential {
        let fl = &self.field;
        let f = self.rhs_function();
        let log_f = f.derivative().div(&f).expect("f nonzero");
        let minv = fl.inv(fl.from_int(self.m as i64)).expect("m prime to p");
        let mut c = vec![RationalFunction::zero(fl.clone()); self.m as usize];
        for (k, r) in func.iter().enumerate().take(self.m as usize) {
            let kk = fl.mul(fl.from_int(k as i64), minv);
            c[k] = r.derivative().add(&r.mul(&log_f).scale(kk));
        }
        CurveDifferential { components: c }
    }

    /// `du/u` for the monomial `u = r z^k`.
    pub fn log_differential(&self, r: &RationalFunction, k: i64) -> Result<CurveDifferential, CurveError> {
        let fl = &self.field;
        if r.is_zero() {
            return Err(CurveError::ZeroDifferential);
        }
        let f = self.rhs_function();
        let log_f = f.derivative().div(&f)?;
        let minv = fl.inv(fl.from_int(self.m as i64))?;
        let coeff = r
            .derivative()
            .div(r)?
            .add(&log_f.scale(fl.mul(fl.from_int(k), minv)));
        Ok(self.monomial_differential(coeff, 0))
    }

    /// Riemann–Hurwitz for the tame cyclic cover.
    pub fn genus(&self) -> Result<u64, CurveError> {
        let mut two_g_minus_2 = -2 * self.m as i64;
        for pl in &self.places {
            two_g_minus_2 += (pl.e as i64 - 1) * pl.geometric_places() as i64;
        }
        if two_g_minus_2 < -2 || two_g_minus_2 % 2 != 0 {
            return Err(CurveError::InternalInconsistency(format!(
                "2g - 2 = {two_g_minus_2}"
            )));
        }
        Ok(((two_g_minus_2 + 2) / 2) as u64)
    }

    fn check(&self, w: &CurveDifferential) -> Result<(), CurveError> {
        if w.components.len() != self.m as usize {
            return Err(CurveError::ComponentCount {
                expected: self.m as usize,
                got: w.components.len(),
            });
        }
        Ok(())
    }

    /// Local parameter expansion of a rational function at a marked point.
    fn expand(&self, r: &RationalFunction, point: XPoint, rel: usize) -> Result<Laurent, CurveError> {
        match point {
            XPoint::Finite(a) => {
                let rr = RationalFunction::new(r.num().shift(a), r.den().shift(a))?;
                Ok(Laurent::from_rational(&rr, rel)?)
            }
            XPoint::Infinity => {
                let dn = r.num().degree().expect("nonzero");
                let dd = r.den().degree().expect("nonzero");
                let rr = RationalFunction::new(r.num().reversed(dn), r.den().reversed(dd))?;
                Ok(Laurent::from_rational(&rr, rel)?.shift(dd as i64 - dn as i64))
            }
        }
    }

    /// `u(t) / u0` where `f = t^v u(t)` in the local parameter.
    fn normalized_unit(&self, pl: &PlaceProfile, prec: i64) -> Result<Laurent, CurveError> {
        let u = match pl.point {
            XPoint::Finite(a) => {
                let s = self.f.shift(a);
                let v = pl.ord_f as usize;
                Poly::new(self.field.clone(), s.coeffs()[v..].to_vec())
            }
            XPoint::Infinity => self.f.reversed(self.f.degree().unwrap()),
        };
        let inv = self.field.inv(pl.unit)?;
        Ok(Laurent::from_poly(&u.scale(inv), prec))
    }

    /// Order of `omega` at the given place above `places()[point]`.
    pub fn differential_order(
        &self,
        w: &CurveDifferential,
        point: usize,
        place: usize,
    ) -> Result<i64, CurveError> {
        self.check(w)?;
        let pl = self
            .places
            .get(point)
            .ok_or(CurveError::InvalidPlace { point, place })?;
        if place >= pl.branch_values.len() {
            return Err(CurveError::InvalidPlace { point, place });
        }
        if w.components.iter().all(|c| c.is_zero()) {
            return Err(CurveError::ZeroDifferential);
        }
        let e = pl.e as usize;
        let g = pl.geometric_places();
        let vp = pl.ord_z();
        let y0 = pl.branch_values[place];
        let mut best: Option<i64> = None;
        for r in 0..e {
            let terms: Vec<(usize, &RationalFunction)> = (0..)
                .map(|k| k * e + r)
                .take_while(|&j| j < self.m as usize)
                .map(|j| (j / e, &w.components[j]))
                .filter(|(_, c)| !c.is_zero())
                .collect();
            let ord_s = match terms.len() {
                0 => continue,
                // a single term is a unit times a power of t: no branch needed
                1 => {
                    let (k, c) = terms[0];
                    self.point_valuation(c, pl.point) + vp * k as i64
                }
                _ => self.sum_valuation(&terms, pl, y0, g, vp)?,
            };
            let o = r as i64 * vp + e as i64 * ord_s;
            best = Some(best.map_or(o, |b: i64| b.min(o)));
        }
        Ok(best.expect("some component is nonzero") + pl.ord_dx())
    }

    fn point_valuation(&self, r: &RationalFunction, point: XPoint) -> i64 {
        match point {
            XPoint::Finite(a) => r.valuation_at(a),
            XPoint::Infinity => r.valuation_at_infinity(),
        }
        .expect("nonzero")
    }

    /// `ord_t sum_k r_k(t) Y^k t^(v'k)` on the branch `Y = y0 (u/u0)^(1/g)`.
    fn sum_valuation(
        &self,
        terms: &[(usize, &RationalFunction)],
        pl: &PlaceProfile,
        y0: Fq,
        g: u64,
        vp: i64,
    ) -> Result<i64, CurveError> {
        let mut rel = 8usize;
        loop {
            let unit = self.normalized_unit(pl, rel as i64)?;
            let y = unit.root_of_unit(g)?.scale(y0);
            let mut sum: Option<Laurent> = None;
            for &(k, c) in terms {
                let t = self
                    .expand(c, pl.point, rel)?
                    .mul(&y.pow_u(k as u64))
                    .shift(vp * k as i64);
                sum = Some(match sum {
                    None => t,
                    Some(s) => s.add(&t),
                });
            }
            let sum = sum.expect("terms nonempty");
            if let Some(v) = sum.valuation() {
                return Ok(v);
            }
            if rel > 4096 {
                return Err(CurveError::InternalInconsistency(
                    "series cancellation did not terminate".into(),
                ));
            }
            rel *= 2;
        }
    }

    /// Lifted Cartier operator.
    pub fn cartier(&self, w: &CurveDifferential) -> Result<CurveDifferential, CurveError> {
        self.check(w)?;
        let p = self.p() as i64;
        let m = self.m as i64;
        let minv = mod_inverse(m.rem_euclid(p), p);
        let f = self.rhs_function();
        let mut out = vec![RationalFunction::zero(self.field.clone()); self.m as usize];
        for (j, r) in w.components.iter().enumerate() {
            if r.is_zero() {
                continue;
            }
            let j = j as i64;
            let s = (-j * minv).rem_euclid(p);
            let ex = (j + s * m) / p;
            debug_assert_eq!((j + s * m) % p, 0);
            let base = RationalDifferential::new(r.mul(&f.pow(-s)?));
            let c = cartier_rational(&base).coefficient;
            out[ex as usize] = out[ex as usize].add(&c);
        }
        Ok(CurveDifferential { components: out })
    }

    pub fn classify_differential(&self, w: &CurveDifferential) -> Result<DifferentialKind, CurveError> {
        let c = self.cartier(w)?;
        if c.is_zero() {
            Ok(DifferentialKind::Exact)
        } else if &c == w {
            Ok(DifferentialKind::Logarithmic)
        } else {
            Ok(DifferentialKind::Neither)
        }
    }

    /// Eigenvalue of `z -> zeta z` on `omega`.
    pub fn eigencharacter(&self, w: &CurveDifferential) -> Result<Eigencharacter, CurveError> {
        self.check(w)?;
        let zeta = self.zeta()?;
        let nz: Vec<usize> = (0..w.components.len())
            .filter(|&j| !w.components[j].is_zero())
            .collect();
        match nz.as_slice() {
            [] => Err(CurveError::ZeroDifferential),
            [j] => {
                let v = self.field.pow_u(zeta, *j as u64);
                Ok(match self.field.prime_value(v) {
                    Some(x) => Eigencharacter::PrimeField(x),
                    None => Eigencharacter::OutsidePrimeField(v),
                })
            }
            _ => Ok(Eigencharacter::NotEigen),
        }
    }

    /// Degree of the divisor of an eigen-differential `r z^j dx`, summed over
    /// the marked places plus the unmarked zeros and poles of `r`.
    pub fn divisor_degree(&self, w: &CurveDifferential) -> Result<i64, CurveError> {
        self.check(w)?;
        let nz: Vec<usize> = (0..w.components.len())
            .filter(|&j| !w.components[j].is_zero())
            .collect();
        let j = match nz.as_slice() {
            [] => return Err(CurveError::ZeroDifferential),
            [j] => *j,
            _ => {
                return Err(CurveError::InternalInconsistency(
                    "divisor degree needs a single component".into(),
                ))
            }
        };
        let r = &w.components[j];
        let mut total = 0i64;
        for (i, pl) in self.places.iter().enumerate() {
            for k in 0..pl.branch_values.len() {
                total += self.differential_order(w, i, k)? * pl.residual_degree as i64;
            }
        }
        let unmarked = |poly: &Poly| -> i64 {
            let mut d = poly.degree().unwrap_or(0) as i64;
            for pl in &self.places {
                if let XPoint::Finite(a) = pl.point {
                    d -= poly.valuation_at(a).unwrap_or(0) as i64;
                }
            }
            d
        };
        total += self.m as i64 * (unmarked(r.num()) - unmarked(r.den()));
        Ok(total)
    }
}

impl CurveDifferential {
    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        CurveDifferential {
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn scale(&self, c: Fq) -> Self {
        CurveDifferential { components: self.components.iter().map(|a| a.scale(c)).collect() }
    }

    /// Index of the only nonzero component, if there is exactly one.
    pub fn single_component(&self) -> Option<usize> {
        let mut it = (0..self.components.len()).filter(|&j| !self.components[j].is_zero());
        let j = it.next()?;
        it.next().is_none().then_some(j)
    }
}

fn mod_inverse(a: i64, p: i64) -> i64 {
    let (g, x, _) = ext_gcd(a, p);
    debug_assert_eq!(g, 1);
    x.rem_euclid(p)
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(f: &Arc<FiniteField>, n: &[i64], d: &[i64]) -> RationalFunction {
        RationalFunction::new(Poly::from_ints(f.clone(), n), Poly::from_ints(f.clone(), d)).unwrap()
    }

    fn z6() -> SuperellipticCurve {
        build_curve(7, 1, 6, &[(0, 1), (1, 1)], 1).unwrap()
    }

    #[test]
    fn places_of_sextic() {
        let c = z6();
        let zero = &c.places()[c.point_index(XPoint::Finite(Fq(0))).unwrap()];
        assert_eq!((zero.e, zero.place_count), (6, 1));
        let inf = &c.places()[c.point_index(XPoint::Infinity).unwrap()];
        assert_eq!((inf.ord_f, inf.e, inf.place_count), (-2, 3, 2));
        for pl in c.places() {
            assert_eq!(pl.e * pl.place_count * pl.residual_degree, 6);
        }
    }

    #[test]
    fn coprimality_and_rhs() {
        assert!(matches!(build_curve(7, 1, 7, &[(0, 1)], 1), Err(CurveError::NotCoprime { .. })));
        assert!(matches!(build_curve(7, 1, 2, &[(0, 1)], 7), Err(CurveError::EmptyRHS)));
        assert!(matches!(build_curve(7, 1, 2, &[(0, 2)], 1), Err(CurveError::Reducible { .. })));
    }

    #[test]
    fn genera() {
        assert_eq!(z6().genus().unwrap(), 2);
        assert_eq!(build_curve(7, 1, 2, &[(0, 1), (1, 1)], 1).unwrap().genus().unwrap(), 0);
        assert_eq!(build_curve(5, 1, 1, &[(0, 3), (2, 1)], 3).unwrap().genus().unwrap(), 0);
    }

    #[test]
    fn orders_of_standard_form() {
        let c = z6();
        let f = c.field().clone();
        let w = c.monomial_differential(rf(&f, &[1], &[0, -1, 1]), 1);
        let i0 = c.point_index(XPoint::Finite(Fq(0))).unwrap();
        let i1 = c.point_index(XPoint::Finite(Fq(1))).unwrap();
        let ii = c.point_index(XPoint::Infinity).unwrap();
        assert_eq!(c.differential_order(&w, i0, 0).unwrap(), 0);
        assert_eq!(c.differential_order(&w, i1, 0).unwrap(), 0);
        assert_eq!(c.differential_order(&w, ii, 0).unwrap(), 1);
        assert_eq!(c.differential_order(&w, ii, 1).unwrap(), 1);
        // ord at infinity computed by hand: -1 - 4 + 3 + 3
        assert_eq!(c.divisor_degree(&w).unwrap(), 2 * 2 - 2);

        let c2 = build_curve(7, 1, 2, &[(0, 1), (1, 1)], 1).unwrap();
        let w2 = c2.monomial_differential(rf(c2.field(), &[1], &[0, -1, 1]), 1);
        let ii = c2.point_index(XPoint::Infinity).unwrap();
        assert_eq!(c2.differential_order(&w2, ii, 0).unwrap(), -1);
    }

    #[test]
    fn branch_dependent_order() {
        // z^2 = x + 1 at x = 0: (1 + z) vanishes on the branch z = -1 only
        let c = build_curve(7, 1, 2, &[(6, 1), (0, 0)], 1).unwrap();
        let f = c.field().clone();
        let w = c.differential(vec![RationalFunction::one(f.clone()), RationalFunction::one(f)]).unwrap();
        let i0 = c.point_index(XPoint::Finite(Fq(0))).unwrap();
        let mut ords: Vec<i64> = (0..2).map(|k| c.differential_order(&w, i0, k).unwrap()).collect();
        ords.sort();
        assert_eq!(ords, vec![0, 1]);
    }

    #[test]
    fn cartier_on_base_component_matches_line() {
        let c = z6();
        let f = c.field().clone();
        let r = rf(&f, &[1, 2, 0, 3], &[5, 1]);
        let w = c.monomial_differential(r.clone(), 0);
        let cw = c.cartier(&w).unwrap();
        assert_eq!(cw.components[0], cartier_rational(&RationalDifferential::new(r)).coefficient);
        // z^m r dx is f r dx
        let r2 = rf(&f, &[3, 1], &[1]);
        let a = c.cartier(&c.monomial_differential(r2.clone(), 6)).unwrap();
        let b = c.cartier(&c.monomial_differential(r2.mul(&c.rhs_function()), 0)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn classification_and_character() {
        let c = z6();
        let f = c.field().clone();
        let dx_x = c.monomial_differential(rf(&f, &[1], &[0, 1]), 0);
        assert_eq!(c.classify_differential(&dx_x).unwrap(), DifferentialKind::Logarithmic);
        let dx = c.monomial_differential(RationalFunction::one(f.clone()), 0);
        assert_eq!(c.classify_differential(&dx).unwrap(), DifferentialKind::Exact);
        assert_eq!(c.eigencharacter(&dx).unwrap(), Eigencharacter::PrimeField(1));
        let w = c.monomial_differential(rf(&f, &[1], &[0, -1, 1]), 1);
        let zeta = c.zeta().unwrap();
        assert_eq!(f.mult_order(zeta), Some(6));
        assert_eq!(c.eigencharacter(&w).unwrap(), Eigencharacter::PrimeField(zeta.0));
        let mixed = c.monomial_differential(RationalFunction::one(f.clone()), 1)
            .add(&c.monomial_differential(RationalFunction::one(f), 2));
        assert_eq!(c.eigencharacter(&mixed).unwrap(), Eigencharacter::NotEigen);
    }

    #[test]
    fn eigen_line_scalar() {
        // C(z dx/(x(x-1))) = 5 z dx/(x(x-1)): 5 is the x^6 coefficient of x^5 (x-1)^5
        let c = z6();
        let f = c.field().clone();
        let w = c.monomial_differential(rf(&f, &[1], &[0, -1, 1]), 1);
        let cw = c.cartier(&w).unwrap();
        let oracle = Poly::from_ints(f.clone(), &[0, 1]).pow(5)
            .mul(&Poly::from_ints(f.clone(), &[-1, 1]).pow(5))
            .coeff(6);
        assert_eq!(oracle, Fq(5));
        assert_eq!(cw, w.scale(oracle));
    }

    #[test]
    fn field_is_raised_for_roots_of_unity() {
        // m = 4 needs F_49 when p = 7
        let c = build_curve(7, 1, 4, &[(0, 1), (1, 1)], 1).unwrap();
        assert_eq!(c.field().degree(), 2);
        assert_eq!(c.genus().unwrap(), 1);
    }
}
