//! Deformation data `(Z, omega)` on the projective line and their signatures.

use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::algebra::{FiniteField, Fq, Poly, RationalFunction};
use crate::superelliptic::{
    build_curve, CurveDifferential, CurveError, DifferentialKind, Eigencharacter,
    SuperellipticCurve, XPoint,
};
use crate::Q;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DeformationError {
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error("differential is not an eigenvector of the cyclic action")]
    NotEigen,
    #[error("differential is neither logarithmic nor exact")]
    NeitherLogNorExact,
    #[error("expected {expected} entries, got {got}")]
    WrongArity { expected: usize, got: usize },
    #[error("sigma = {0} is outside {{0}} and (0,1)")]
    SigmaOutOfRange(Q),
    #[error("entries sum to {0}, not 1")]
    SumNotOne(Q),
    #[error("no logarithmic twist exists: {0}")]
    NoLogarithmicTwist(String),
    #[error("kernel order {kernel} does not divide ({m}, {h})")]
    NotDivisible { m: u64, h: i64, kernel: u64 },
    #[error("kernel order must be positive")]
    ZeroKernel,
    #[error("differential has zeros or poles at points outside every splitting field considered")]
    IrrationalSupport,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PointKind {
    Wild,
    PrimitiveRange,
    Unit,
    NewRange,
    Other,
}

impl PointKind {
    pub fn of(sigma: Q) -> Self {
        let one = Q::one();
        let two = Q::from_integer(2);
        if sigma.is_zero() {
            PointKind::Wild
        } else if sigma > Q::zero() && sigma < one {
            PointKind::PrimitiveRange
        } else if sigma == one {
            PointKind::Unit
        } else if sigma > one && sigma < two {
            PointKind::NewRange
        } else {
            PointKind::Other
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriticalPoint {
    pub tau: XPoint,
    pub m_tau: u64,
    pub h_tau: i64,
    pub sigma: Q,
    pub kind: PointKind,
}

#[derive(Clone, Debug)]
pub struct DeformationDatum {
    pub curve: SuperellipticCurve,
    pub omega: CurveDifferential,
    /// Order of the cyclic group acting on the curve.
    pub h_order: u64,
    pub chi_kernel_order: u64,
    pub base_genus: u64,
    pub kind: DifferentialKind,
}

impl DeformationDatum {
    pub fn new(
        curve: SuperellipticCurve,
        omega: CurveDifferential,
        base_genus: u64,
    ) -> Result<Self, DeformationError> {
        let kind = curve.classify_differential(&omega)?;
        if kind == DifferentialKind::Neither || omega.is_zero() {
            return Err(DeformationError::NeitherLogNorExact);
        }
        if matches!(curve.eigencharacter(&omega)?, Eigencharacter::NotEigen) {
            return Err(DeformationError::NotEigen);
        }
        let j = omega.single_component().expect("eigen differential") as u64;
        let m = curve.m();
        Ok(DeformationDatum {
            chi_kernel_order: m.gcd(&j),
            h_order: m,
            curve,
            omega,
            base_genus,
            kind,
        })
    }
}

/// `sigma` entries partitioned into wild (`0`), primitive (`(0,1)`) and new
/// (`(1,2)`) indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Signature {
    pub entries: Vec<Q>,
    pub wild: Vec<usize>,
    pub prim: Vec<usize>,
    pub new: Vec<usize>,
}

impl Signature {
    /// Sum of fractional parts.
    pub fn fractional_sum(&self) -> Q {
        self.entries.iter().map(|s| s.fract()).sum()
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|s| s.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Specialness {
    Special(Signature),
    NotSpecial(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VcfCheck {
    pub passed: bool,
    pub sum: Q,
    pub expected: Q,
    pub residual: Q,
}

/// `(m_tau, h_tau)` for every critical point: marked points where the pair
/// differs from `(1, 1)`, plus unmarked zeros and poles of `omega`.
pub fn critical_invariants(dd: &DeformationDatum) -> Result<Vec<CriticalPoint>, DeformationError> {
    let curve = &dd.curve;
    let j = dd.omega.single_component().ok_or(CurveError::ZeroDifferential)?;
    let r = &dd.omega.components[j];
    let mut out = Vec::new();
    for (i, pl) in curve.places().iter().enumerate() {
        let ord = curve.differential_order(&dd.omega, i, 0)?;
        push_point(&mut out, pl.point, pl.e, ord + 1);
    }
    let marked: Vec<Fq> = curve
        .places()
        .iter()
        .filter_map(|pl| match pl.point {
            XPoint::Finite(a) => Some(a),
            XPoint::Infinity => None,
        })
        .collect();
    for (poly, sign) in [(r.num(), 1i64), (r.den(), -1i64)] {
        for (a, mult) in unmarked_roots(curve.field(), poly, &marked)? {
            push_point(&mut out, XPoint::Finite(a), 1, sign * mult as i64 + 1);
        }
    }
    out.sort_by_key(|c| c.tau);
    Ok(out)
}

fn push_point(out: &mut Vec<CriticalPoint>, tau: XPoint, m: u64, h: i64) {
    if (m, h) != (1, 1) {
        let sigma = Q::new(h, m as i64);
        out.push(CriticalPoint { tau, m_tau: m, h_tau: h, sigma, kind: PointKind::of(sigma) });
    }
}

fn unmarked_roots(
    field: &Arc<FiniteField>,
    poly: &Poly,
    marked: &[Fq],
) -> Result<Vec<(Fq, u64)>, DeformationError> {
    let mut rest = poly.clone();
    for &a in marked {
        let lin = Poly::linear(field.clone(), a);
        while let Some(q) = rest.div_exact(&lin) {
            rest = q;
        }
    }
    let deg = rest.degree().unwrap_or(0) as u64;
    if deg == 0 {
        return Ok(Vec::new());
    }
    let mut found = Vec::new();
    let mut total = 0;
    for a in field.elements() {
        if rest.eval(a).is_zero() {
            let k = rest.valuation_at(a).unwrap_or(0);
            total += k;
            found.push((a, k));
        }
    }
    if total != deg {
        return Err(DeformationError::IrrationalSupport);
    }
    Ok(found)
}

/// Local vanishing cycle identity `sum (sigma - 1) = 2 g_X - 2`.
pub fn check_local_vcf(sigmas: &[Q], base_genus: u64) -> VcfCheck {
    let sum: Q = sigmas.iter().map(|s| s - Q::one()).sum();
    let expected = Q::from_integer(2 * base_genus as i64 - 2);
    let residual = sum - expected;
    VcfCheck { passed: residual.is_zero(), sum, expected, residual }
}

pub fn check_local_vcf_datum(dd: &DeformationDatum) -> Result<VcfCheck, DeformationError> {
    let sig: Vec<Q> = critical_invariants(dd)?.iter().map(|c| c.sigma).collect();
    Ok(check_local_vcf(&sig, dd.base_genus))
}

/// Partitions a list of `sigma` values, or explains why it is not special.
pub fn is_special(sigmas: &[Q]) -> Specialness {
    let one = Q::one();
    let two = Q::from_integer(2);
    for s in sigmas {
        if *s == one {
            return Specialness::NotSpecial("sigma = 1 is forbidden".into());
        }
        if *s >= two {
            return Specialness::NotSpecial(format!("sigma = {s} is not below 2"));
        }
        if s.is_negative() {
            return Specialness::NotSpecial(format!("sigma = {s} is negative"));
        }
    }
    let mut sig = Signature { entries: sigmas.to_vec(), wild: vec![], prim: vec![], new: vec![] };
    for (i, s) in sigmas.iter().enumerate() {
        if s.is_zero() {
            sig.wild.push(i);
        } else if *s < one {
            sig.prim.push(i);
        } else {
            sig.new.push(i);
        }
    }
    let b0 = sig.wild.len() + sig.prim.len();
    if b0 != 3 {
        return Specialness::NotSpecial(format!("{b0} entries below 1, expected exactly 3"));
    }
    let fs = sig.fractional_sum();
    if fs != one {
        return Specialness::NotSpecial(format!("fractional parts sum to {fs}"));
    }
    Specialness::Special(sig)
}

pub fn is_special_datum(dd: &DeformationDatum) -> Result<Specialness, DeformationError> {
    let sig: Vec<Q> = critical_invariants(dd)?.iter().map(|c| c.sigma).collect();
    Ok(is_special(&sig))
}

/// Result of realizing a three-entry signature as `z^m = x^a1 (x-1)^a2`,
/// `omega = eps z dx / (x (x-1))`.
#[derive(Clone, Debug)]
pub struct NormalizedSpecial {
    pub datum: DeformationDatum,
    pub m: u64,
    pub exponents: [u64; 3],
    /// `C(omega_0) = lambda omega_0` for the untwisted form.
    pub lambda: Fq,
    pub epsilon: Fq,
    pub field: Arc<FiniteField>,
    /// Whether the twist was found among the prime field scalars.
    pub epsilon_in_prime_field: bool,
}

impl NormalizedSpecial {
    pub fn epsilon_display(&self) -> String {
        self.field.display(self.epsilon)
    }
}

fn validate_triple(sigmas: &[Q]) -> Result<(), DeformationError> {
    if sigmas.len() != 3 {
        return Err(DeformationError::WrongArity { expected: 3, got: sigmas.len() });
    }
    for s in sigmas {
        if s.is_negative() || *s >= Q::one() {
            return Err(DeformationError::SigmaOutOfRange(*s));
        }
    }
    let sum: Q = sigmas.iter().sum();
    if sum != Q::one() {
        return Err(DeformationError::SumNotOne(sum));
    }
    Ok(())
}

fn standard_form(curve: &SuperellipticCurve) -> Result<CurveDifferential, DeformationError> {
    let f = curve.field().clone();
    let r = RationalFunction::new(Poly::one(f.clone()), Poly::from_ints(f, &[0, -1, 1]))
        .map_err(CurveError::from)?;
    Ok(curve.monomial_differential(r, 1))
}

/// Multiplicative special datum attached to a signature with three entries.
pub fn build_normalized_special(p: u32, sigmas: &[Q]) -> Result<NormalizedSpecial, DeformationError> {
    validate_triple(sigmas)?;
    let m = sigmas.iter().fold(1i64, |acc, s| acc.lcm(s.denom())) as u64;
    let a: Vec<u64> = sigmas.iter().map(|s| (s * Q::from_integer(m as i64)).to_integer() as u64).collect();
    let roots = [(0u32, a[0]), (1u32, a[1])];
    let curve = build_curve(p, 1, m, &roots, 1)?;
    let w0 = standard_form(&curve)?;
    let cw = curve.cartier(&w0)?;
    let lambda = eigen_scalar(&curve, &w0, &cw)?;

    // Cartier is p^-1-linear, so the prime field scalars can never change the verdict;
    // they are still tried first so the cheapest witness wins.
    let field = curve.field().clone();
    let p_order = field.characteristic();
    for e in 1..p_order {
        let w = w0.scale(Fq(e));
        if curve.classify_differential(&w)? == DifferentialKind::Logarithmic {
            return finish(curve, w, m, &a, lambda, Fq(e), true);
        }
    }

    // eps^(p-1) = lambda^p: find the smallest extension where this is solvable.
    let s0 = field.degree();
    let mut k = 1;
    loop {
        let fk = match FiniteField::get(p, s0 * k) {
            Ok(f) => f,
            Err(_) => {
                return Err(DeformationError::NoLogarithmicTwist(format!(
                    "eps^{} = lambda^p has no solution in any supported extension",
                    p - 1
                )))
            }
        };
        k += 1;
        let lam = embed(&field, &fk, lambda);
        let Some(lam) = lam else { continue };
        let target = fk.pow_u(lam, p as u64);
        let roots = fk.kth_roots(target, p as u64 - 1);
        let Some(&eps) = roots.iter().find(|r| !r.is_zero()) else { continue };
        let curve_k = build_curve(p, fk.degree(), m, &roots_of(&a), 1)?;
        let w = standard_form(&curve_k)?.scale(eps);
        if curve_k.classify_differential(&w)? != DifferentialKind::Logarithmic {
            return Err(DeformationError::NoLogarithmicTwist(
                "candidate twist failed the Cartier check".into(),
            ));
        }
        return finish(curve_k, w, m, &a, lam, eps, false);
    }
}

fn roots_of(a: &[u64]) -> [(u32, u64); 2] {
    [(0, a[0]), (1, a[1])]
}

/// `lambda` with `C(w) = lambda w`, or the reason no twist can be logarithmic.
fn eigen_scalar(
    curve: &SuperellipticCurve,
    w: &CurveDifferential,
    cw: &CurveDifferential,
) -> Result<Fq, DeformationError> {
    if cw.is_zero() {
        return Err(DeformationError::NoLogarithmicTwist(
            "the Cartier image of z dx/(x(x-1)) is zero".into(),
        ));
    }
    if cw.single_component() != Some(1) {
        return Err(DeformationError::NoLogarithmicTwist(format!(
            "the Cartier image leaves the eigenspace of z (m = {} does not divide p - 1)",
            curve.m()
        )));
    }
    let ratio = cw.components[1].div(&w.components[1]).map_err(CurveError::from)?;
    if ratio.num().degree() != Some(0) || !ratio.den().is_one() {
        return Err(DeformationError::NoLogarithmicTwist(
            "the Cartier image is not proportional to z dx/(x(x-1))".into(),
        ));
    }
    Ok(ratio.num().coeff(0))
}

/// Moves an element into a larger field; only the prime field embeds trivially.
fn embed(from: &Arc<FiniteField>, to: &Arc<FiniteField>, a: Fq) -> Option<Fq> {
    if from == to {
        return Some(a);
    }
    from.prime_value(a).map(Fq)
}

fn finish(
    curve: SuperellipticCurve,
    w: CurveDifferential,
    m: u64,
    a: &[u64],
    lambda: Fq,
    epsilon: Fq,
    in_prime: bool,
) -> Result<NormalizedSpecial, DeformationError> {
    let field = curve.field().clone();
    let datum = DeformationDatum::new(curve, w, 0)?;
    Ok(NormalizedSpecial {
        datum,
        m,
        exponents: [a[0], a[1], a[2]],
        lambda,
        epsilon,
        field,
        epsilon_in_prime_field: in_prime,
    })
}

/// Divides every `(m_j, h_j)` by the order of the kernel of the character.
pub fn descend_by_kernel(inv: &[(u64, i64)], kernel: u64) -> Result<Vec<(u64, i64)>, DeformationError> {
    if kernel == 0 {
        return Err(DeformationError::ZeroKernel);
    }
    inv.iter()
        .map(|&(m, h)| {
            if m % kernel != 0 || h % kernel as i64 != 0 {
                Err(DeformationError::NotDivisible { m, h, kernel })
            } else {
                Ok((m / kernel, h / kernel as i64))
            }
        })
        .collect()
}

/// Reduced fractions in `(0, 1)` with denominator dividing `p - 1` (or at
/// most `p - 1` when `divide` is false), in increasing order.
fn fractions(p: u32, divide: bool) -> Vec<Q> {
    let n = p as i64 - 1;
    let mut v: Vec<Q> = (2..=n)
        .filter(|d| !divide || n % d == 0)
        .flat_map(|d| (1..d).filter(move |a| a.gcd(&d) == 1).map(move |a| Q::new(a, d)))
        .collect();
    v.sort();
    v
}

fn multisets(values: &[Q], k: usize, from: usize, cur: &mut Vec<Q>, out: &mut Vec<Vec<Q>>) {
    if cur.len() == k {
        out.push(cur.clone());
        return;
    }
    for i in from..values.len() {
        cur.push(values[i]);
        multisets(values, k, i, cur, out);
        cur.pop();
    }
}

/// All special signatures with three entries in `{0} u (0,1)` and at most
/// `max_new_tails` entries in `(1,2)`, fractional parts summing to 1.
/// Entries are sorted within each group; the list is sorted by number of
/// new tails and then lexicographically.
pub fn enumerate_signatures(p: u32, max_new_tails: usize, divide: bool) -> Vec<Signature> {
    let fr = fractions(p, divide);
    let mut b0_vals = vec![Q::zero()];
    b0_vals.extend(fr.iter().copied());
    let new_vals: Vec<Q> = fr.iter().map(|f| f + Q::one()).collect();
    let mut b0_sets = Vec::new();
    multisets(&b0_vals, 3, 0, &mut Vec::new(), &mut b0_sets);
    let mut out = Vec::new();
    for k in 0..=max_new_tails {
        let mut new_sets = Vec::new();
        multisets(&new_vals, k, 0, &mut Vec::new(), &mut new_sets);
        let mut level = Vec::new();
        for b0 in &b0_sets {
            let s0: Q = b0.iter().sum();
            if s0 > Q::one() {
                continue;
            }
            for nw in &new_sets {
                let s1: Q = nw.iter().map(|s| s - Q::one()).sum();
                if s0 + s1 != Q::one() {
                    continue;
                }
                let mut entries = b0.clone();
                entries.extend(nw.iter().copied());
                if let Specialness::Special(sig) = is_special(&entries) {
                    level.push(sig);
                }
            }
        }
        level.sort_by(|a, b| a.entries.cmp(&b.entries));
        out.extend(level);
    }
    out
}
