//! Counting and degree formulas for lifts of a special G-map.

use num_integer::Integer;
use thiserror::Error;

use crate::Q;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LiftingError {
    #[error("h values must be positive and prime to p = {p}, got {h}")]
    BadConductor { p: u64, h: u64 },
    #[error("m = {m} does not divide (p - 1) h = {value}")]
    HasseArfViolation { m: u64, value: u64 },
    #[error("|Aut| = {aut} does not divide h = {h}")]
    NotDivisible { h: u64, aut: u64 },
    #[error("n' = {n} is outside the bounds {lower} | n' | {upper}")]
    NPrimeOutOfBounds { n: u64, lower: u64, upper: u64 },
    #[error("n' = {n} does not divide p - 1 = {pm1}")]
    NPrimeNotDividing { n: u64, pm1: u64 },
    #[error("sequence lengths differ")]
    LengthMismatch,
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
}

fn lcm_all(v: &[u64]) -> u64 {
    v.iter().fold(1, |a, &b| a.lcm(&b))
}

fn check_h(p: u64, h: &[u64]) -> Result<(), LiftingError> {
    for &x in h {
        if x == 0 || x % p == 0 {
            return Err(LiftingError::BadConductor { p, h: x });
        }
    }
    Ok(())
}

/// `N = (p - 1) lcm(h_j)`, with `lcm` of the empty list equal to 1.
pub fn stable_field_degree(p: u64, h: &[u64]) -> Result<u64, LiftingError> {
    check_h(p, h)?;
    Ok((p - 1) * lcm_all(h))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatchingCount {
    pub count: u64,
    pub orbit_length: u64,
    pub orbit_count: u64,
}

/// `(p - 1) prod h_j` patching data, in orbits of length `N`.
pub fn patching_count(p: u64, h: &[u64]) -> Result<PatchingCount, LiftingError> {
    let n = stable_field_degree(p, h)?;
    let count = (p - 1) * h.iter().product::<u64>();
    if !count.is_multiple_of(n) {
        return Err(LiftingError::InternalInconsistency(format!("{n} does not divide {count}")));
    }
    Ok(PatchingCount { count, orbit_length: n, orbit_count: count / n })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecialGDatumSummary {
    pub p: u64,
    pub h_values: Vec<u64>,
    pub m_values: Vec<u64>,
    /// Candidate orders of `Aut_G` for each tail; `[1]` when unknown.
    pub aut_inner_orders: Vec<Vec<u64>>,
    pub n_prime: Option<u64>,
    pub n_prime_bounds: Option<(u64, u64)>,
    pub chi_injective: bool,
}

impl SpecialGDatumSummary {
    pub fn new(p: u64, h_values: Vec<u64>, m_values: Vec<u64>) -> Self {
        let k = h_values.len();
        SpecialGDatumSummary {
            p,
            h_values,
            m_values,
            aut_inner_orders: vec![vec![1]; k],
            n_prime: None,
            n_prime_bounds: None,
            chi_injective: true,
        }
    }

    pub fn validate(&self) -> Result<(), LiftingError> {
        if self.h_values.len() != self.m_values.len() || self.h_values.len() != self.aut_inner_orders.len() {
            return Err(LiftingError::LengthMismatch);
        }
        check_h(self.p, &self.h_values)?;
        for (&h, &m) in self.h_values.iter().zip(&self.m_values) {
            let v = (self.p - 1) * h;
            if m == 0 || !v.is_multiple_of(m) {
                return Err(LiftingError::HasseArfViolation { m, value: v });
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuliCandidate {
    pub n_prime: u64,
    pub aut_orders: Vec<u64>,
    pub lift_count: u64,
    pub n_prime_degree: u64,
    pub label: String,
}

fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

fn admissible_n_primes(s: &SpecialGDatumSummary) -> Result<Vec<u64>, LiftingError> {
    let pm1 = s.p - 1;
    if let Some(n) = s.n_prime {
        if !pm1.is_multiple_of(n) {
            return Err(LiftingError::NPrimeNotDividing { n, pm1 });
        }
        if let Some((lower, upper)) = s.n_prime_bounds {
            if n % lower != 0 || upper % n != 0 {
                return Err(LiftingError::NPrimeOutOfBounds { n, lower, upper });
            }
        }
        return Ok(vec![n]);
    }
    let (lower, upper) = s.n_prime_bounds.unwrap_or((1, pm1));
    Ok(divisors(upper).into_iter().filter(|d| d % lower == 0 && pm1.is_multiple_of(*d)).collect())
}

/// `|L| = (p-1)/n' prod h_j/|Aut_j|` and `N' = (p-1)/n' lcm h_j/|Aut_j|`,
/// one labeled candidate per choice of `n'` and of each `|Aut_j|`.
pub fn moduli_degree(s: &SpecialGDatumSummary) -> Result<Vec<ModuliCandidate>, LiftingError> {
    s.validate()?;
    for (&h, auts) in s.h_values.iter().zip(&s.aut_inner_orders) {
        for &a in auts {
            if a == 0 || h % a != 0 {
                return Err(LiftingError::NotDivisible { h, aut: a });
            }
        }
    }
    let ns = admissible_n_primes(s)?;
    let mut choices: Vec<Vec<u64>> = vec![Vec::new()];
    for auts in &s.aut_inner_orders {
        let mut next = Vec::new();
        for c in &choices {
            for &a in auts {
                let mut c = c.clone();
                c.push(a);
                next.push(c);
            }
        }
        choices = next;
    }
    let mut out = Vec::new();
    for &n in &ns {
        for auts in &choices {
            let q: Vec<u64> = s.h_values.iter().zip(auts).map(|(h, a)| h / a).collect();
            let base = (s.p - 1) / n;
            out.push(ModuliCandidate {
                n_prime: n,
                aut_orders: auts.clone(),
                lift_count: base * q.iter().product::<u64>(),
                n_prime_degree: base * lcm_all(&q),
                label: format!(
                    "n'={n}, |Aut|=[{}]",
                    auts.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(",")
                ),
            });
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mildness {
    GoodReductionForced,
    StrictlyDividesMildIfBad,
    PSquareUnknown,
}

pub fn reduction_mildness(group_order: u64, p: u64) -> Mildness {
    let mut v = 0;
    let mut n = group_order.max(1);
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    match v {
        0 => Mildness::GoodReductionForced,
        1 => Mildness::StrictlyDividesMildIfBad,
        _ => Mildness::PSquareUnknown,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftingReport {
    pub n: u64,
    pub patching: PatchingCount,
    pub candidates: Vec<ModuliCandidate>,
    /// `p m_j / ((p - 1) h_j)`: radii of the disks specializing to the tails.
    pub disk_thresholds: Vec<Q>,
    pub mildness: Option<Mildness>,
    pub empty_tail_list: bool,
    /// `h (p - 1)` when the reduction is exceptional.
    pub exceptional_degree: Option<u64>,
}

pub fn lifting_report(
    s: &SpecialGDatumSummary,
    group_order: Option<u64>,
    exceptional_h: Option<u64>,
) -> Result<LiftingReport, LiftingError> {
    s.validate()?;
    let n = stable_field_degree(s.p, &s.h_values)?;
    let patching = patching_count(s.p, &s.h_values)?;
    let candidates = moduli_degree(s)?;
    let disk_thresholds = s
        .h_values
        .iter()
        .zip(&s.m_values)
        .map(|(&h, &m)| Q::new((s.p * m) as i64, ((s.p - 1) * h) as i64))
        .collect();
    Ok(LiftingReport {
        n,
        patching,
        candidates,
        disk_thresholds,
        mildness: group_order.map(|g| reduction_mildness(g, s.p)),
        empty_tail_list: s.h_values.is_empty(),
        exceptional_degree: exceptional_h.map(|h| h * (s.p - 1)),
    })
}
