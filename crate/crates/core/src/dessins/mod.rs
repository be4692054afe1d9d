//! Genus zero dessins of prime degree: branch cycle triples in `S_p`, their
//! groups, and the lifting data predicted from their cycle types.

mod group;
mod nielsen;
mod perm;

pub use group::PermGroup;
pub use nielsen::{canonical_pair, enumerate_nielsen, monodromy_group_id, DessinClass, GroupId};
pub use perm::{CycleType, Perm};

use num_integer::Integer;
use thiserror::Error;

use crate::deformation::{build_normalized_special, is_special, DeformationError, NormalizedSpecial, Signature, Specialness};
use crate::lifting::{lifting_report, LiftingError, LiftingReport, SpecialGDatumSummary};
use crate::Q;

pub const MAX_DEGREE: usize = 11;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DessinError {
    #[error("degree {0} exceeds the supported bound {MAX_DEGREE}")]
    DegreeTooLarge(usize),
    #[error("bad cycle type {0:?}")]
    BadCycleType(String),
    #[error("Riemann–Hurwitz gives 2g - 2 = {0}, not a valid genus")]
    NonIntegralGenus(i64),
    #[error("cover has genus {0}, not 0")]
    GenusNotZero(u64),
    #[error("signature violation: {0}")]
    SignatureViolation(String),
    #[error("p-Sylow subgroup is not cyclic of order p (|G| = {0})")]
    PSylowNotCyclicOrderP(u128),
    #[error("no triples with the requested cycle types and group")]
    NoClasses,
    #[error(transparent)]
    Deformation(#[from] DeformationError),
    #[error(transparent)]
    Lifting(#[from] LiftingError),
}

/// Riemann–Hurwitz for a degree `p` cover of the line branched at three points.
pub fn cover_genus(p: usize, types: &[CycleType; 3]) -> Result<u64, DessinError> {
    let p = p as i64;
    let two_g_minus_two = -2 * p + types.iter().map(|t| p - t.cycle_count() as i64).sum::<i64>();
    if two_g_minus_two % 2 != 0 || two_g_minus_two < -2 {
        return Err(DessinError::NonIntegralGenus(two_g_minus_two));
    }
    Ok(((two_g_minus_two + 2) / 2) as u64)
}

/// `sigma_j = (cycles_j - 1) / (p - 1)`.
pub fn reduction_signature(p: usize, types: &[CycleType; 3]) -> Result<Signature, DessinError> {
    let g = cover_genus(p, types)?;
    if g != 0 {
        return Err(DessinError::GenusNotZero(g));
    }
    let sig: Vec<Q> = types.iter().map(|t| Q::new(t.cycle_count() as i64 - 1, p as i64 - 1)).collect();
    if sig.iter().copied().sum::<Q>() != Q::from_integer(1) {
        return Err(DessinError::SignatureViolation(format!("sum of {sig:?} is not 1")));
    }
    match is_special(&sig) {
        Specialness::Special(s) => Ok(s),
        Specialness::NotSpecial(r) => Err(DessinError::SignatureViolation(r)),
    }
}

/// `([N:C] lower, upper)` with `N`, `C` the normalizer and centralizer of a
/// `p`-Sylow subgroup; the lower bound is `gcd(m_j)` when `chi` is injective.
pub fn n_prime_bounds(
    p: usize,
    group: &PermGroup,
    m_values: &[u64],
    chi_injective: bool,
) -> Result<(u64, u64), DessinError> {
    let order = group.order();
    let pp = p as u128;
    if group.degree() != p || !order.is_multiple_of(pp) || order.is_multiple_of(pp * pp) {
        return Err(DessinError::PSylowNotCyclicOrderP(order));
    }
    // a p-cycle, found in the fixed element order
    let mut cyc: Option<Perm> = None;
    group.for_each_element(|g| {
        if g.cycle_type().parts == [p] {
            cyc = Some(g.clone());
            false
        } else {
            true
        }
    });
    let c = cyc.ok_or(DessinError::PSylowNotCyclicOrderP(order))?;
    // label point c^k(0) by k; the normalizer in S_p is x -> a x + b
    let mut pos = vec![0usize; p];
    let mut x = 0;
    for k in 0..p {
        pos[k] = x;
        x = c.apply(x);
    }
    let mut normalizer = 0u64;
    for a in 1..p {
        for b in 0..p {
            let mut img = vec![0u8; p];
            for k in 0..p {
                img[pos[k]] = pos[(a * k + b) % p] as u8;
            }
            if group.contains(&Perm(img)) {
                normalizer += 1;
            }
        }
    }
    // the centralizer of a p-cycle in S_p is the cycle's own group
    let upper = normalizer / p as u64;
    let lower = if chi_injective { m_values.iter().fold(0u64, |g, &m| g.gcd(&m)).max(1) } else { 1 };
    Ok((lower, upper))
}

#[derive(Clone, Debug, Default)]
pub struct DessinOverrides {
    pub aut_orders: Option<Vec<Vec<u64>>>,
    pub n_prime: Option<u64>,
    /// Group order filter; `p!` when absent.
    pub require_order: Option<u128>,
}

#[derive(Clone, Debug)]
pub struct DessinAnalysis {
    pub p: usize,
    pub types: [CycleType; 3],
    pub genus: u64,
    pub classes: Vec<DessinClass>,
    pub signature: Signature,
    pub special: NormalizedSpecial,
    pub h_values: Vec<u64>,
    pub m_values: Vec<u64>,
    pub n_prime_bounds: (u64, u64),
    pub report: LiftingReport,
    /// Predicted ramification index of `p` in the field of moduli, one per candidate.
    pub ramification_prediction: Vec<u64>,
}

pub fn analyze_dessin(p: usize, types: &[CycleType; 3], ov: &DessinOverrides) -> Result<DessinAnalysis, DessinError> {
    if p > MAX_DEGREE {
        return Err(DessinError::DegreeTooLarge(p));
    }
    let genus = cover_genus(p, types)?;
    let signature = reduction_signature(p, types)?;
    let order = ov.require_order.unwrap_or_else(|| (1..=p as u128).product());
    let classes = enumerate_nielsen(p, types, Some(order))?;
    let first = classes.first().ok_or(DessinError::NoClasses)?;
    let special = build_normalized_special(p as u32, &signature.entries)?;
    let (mut h_values, mut m_values) = (Vec::new(), Vec::new());
    for s in &signature.entries {
        if *s.numer() != 0 {
            h_values.push(*s.numer() as u64);
            m_values.push(*s.denom() as u64);
        }
    }
    let bounds = n_prime_bounds(p, &first.group(), &m_values, true)?;
    let mut summary = SpecialGDatumSummary::new(p as u64, h_values.clone(), m_values.clone());
    if let Some(a) = &ov.aut_orders {
        summary.aut_inner_orders = a.clone();
    }
    summary.n_prime = ov.n_prime;
    summary.n_prime_bounds = Some(bounds);
    let report = lifting_report(&summary, Some(first.group_order as u64), None)?;
    let ramification_prediction = report.candidates.iter().map(|c| c.n_prime_degree).collect();
    Ok(DessinAnalysis {
        p,
        types: types.clone(),
        genus,
        classes,
        signature,
        special,
        h_values,
        m_values,
        n_prime_bounds: bounds,
        report,
        ramification_prediction,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn types(s: [&str; 3], n: usize) -> [CycleType; 3] {
        s.map(|t| CycleType::parse(t, n).unwrap())
    }

    #[test]
    fn genus() {
        assert_eq!(cover_genus(7, &types(["6", "6", "2-2"], 7)).unwrap(), 0);
        assert_eq!(cover_genus(7, &types(["2-3", "2-3", "7"], 7)).unwrap(), 0);
        assert_eq!(cover_genus(7, &types(["7", "7", "7"], 7)).unwrap(), 3);
        assert_eq!(cover_genus(3, &types(["3", "3", "3"], 3)).unwrap(), 1);
        assert!(cover_genus(7, &types(["2", "7", "7"], 7)).is_err());
    }

    #[test]
    fn signatures() {
        let s = reduction_signature(7, &types(["6", "6", "2-2"], 7)).unwrap();
        assert_eq!(s.entries, vec![Q::new(1, 6), Q::new(1, 6), Q::new(2, 3)]);
        let s = reduction_signature(7, &types(["2-3", "2-3", "7"], 7)).unwrap();
        assert_eq!(s.entries, vec![Q::new(1, 2), Q::new(1, 2), Q::from_integer(0)]);
        assert_eq!(s.wild, vec![2]);
        // identity class gives sigma = 1
        assert!(matches!(
            reduction_signature(7, &types(["1", "7", "7"], 7)),
            Err(DessinError::SignatureViolation(_) | DessinError::NonIntegralGenus(_) | DessinError::GenusNotZero(_))
        ));
        assert!(matches!(reduction_signature(3, &types(["3", "3", "3"], 3)), Err(DessinError::GenusNotZero(1))));
    }

    #[test]
    fn normalizer_index() {
        let s7 = PermGroup::new(7, &[Perm::from_cycles(7, &[(0..7).collect()]), Perm::from_cycles(7, &[vec![0, 1]])]);
        assert_eq!(n_prime_bounds(7, &s7, &[6, 6, 3], true).unwrap(), (3, 6));
        assert_eq!(n_prime_bounds(7, &s7, &[2, 2], true).unwrap(), (2, 6));
        assert_eq!(n_prime_bounds(7, &s7, &[2, 2], false).unwrap(), (1, 6));
        let c7 = PermGroup::new(7, &[Perm::from_cycles(7, &[(0..7).collect()])]);
        assert_eq!(n_prime_bounds(7, &c7, &[], false).unwrap(), (1, 1));
    }
}
