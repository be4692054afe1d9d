use std::collections::BTreeMap;

use rayon::prelude::*;

use super::group::PermGroup;
use super::perm::{CycleType, Perm};
use super::{DessinError, MAX_DEGREE};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DessinClass {
    pub g0: Perm,
    pub g1: Perm,
    pub ginf: Perm,
    pub group_order: u128,
    pub transitive: bool,
    pub primitive: bool,
    pub alternating_contained: bool,
}

impl DessinClass {
    fn from_pair(g0: Perm, g1: Perm) -> Self {
        let ginf = g0.then(&g1).inverse();
        let n = g0.degree();
        let g = PermGroup::new(n, &[g0.clone(), g1.clone()]);
        let order = g.order();
        let fact: u128 = (1..=n as u128).product();
        DessinClass {
            transitive: g.is_transitive(),
            primitive: g.is_primitive(),
            alternating_contained: 2 * order >= fact,
            group_order: order,
            g0,
            g1,
            ginf,
        }
    }

    pub fn group(&self) -> PermGroup {
        PermGroup::new(self.g0.degree(), &[self.g0.clone(), self.g1.clone()])
    }

    pub fn types(&self) -> [CycleType; 3] {
        [self.g0.cycle_type(), self.g1.cycle_type(), self.ginf.cycle_type()]
    }
}

fn is_transitive(a: &Perm, b: &Perm) -> bool {
    let n = a.degree();
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut stack = vec![0];
    let mut count = 1;
    while let Some(x) = stack.pop() {
        for y in [a.apply(x), b.apply(x)] {
            if !seen[y] {
                seen[y] = true;
                count += 1;
                stack.push(y);
            }
        }
    }
    count == n
}

/// Relabels points in the order they are reached from `start` by breadth
/// first search along `a`, then `b`. Requires transitivity.
fn relabel(a: &Perm, b: &Perm, start: usize) -> (Perm, Perm) {
    let n = a.degree();
    let mut label = vec![u8::MAX; n];
    let mut order = Vec::with_capacity(n);
    label[start] = 0;
    order.push(start);
    let mut head = 0;
    while head < order.len() {
        let x = order[head];
        head += 1;
        for y in [a.apply(x), b.apply(x)] {
            if label[y] == u8::MAX {
                label[y] = order.len() as u8;
                order.push(y);
            }
        }
    }
    let c = Perm(label);
    (a.conjugate(&c), b.conjugate(&c))
}

/// The least relabeling of the pair over all starting points; two transitive
/// pairs are simultaneously conjugate exactly when these agree.
pub fn canonical_pair(a: &Perm, b: &Perm) -> (Perm, Perm) {
    (0..a.degree()).map(|s| relabel(a, b, s)).min().expect("nonempty degree")
}

const CHUNK: usize = 1 << 15;

/// Classes of transitive triples `g0 g1 ginf = 1` with the given cycle types,
/// up to simultaneous conjugation in `S_n`, sorted by canonical form.
pub fn enumerate_nielsen(
    n: usize,
    types: &[CycleType; 3],
    require_order: Option<u128>,
) -> Result<Vec<DessinClass>, DessinError> {
    if n > MAX_DEGREE {
        return Err(DessinError::DegreeTooLarge(n));
    }
    for t in types {
        if t.degree() != n {
            return Err(DessinError::BadCycleType(format!("{t} is not a partition of {n}")));
        }
    }
    let g0 = types[0].representative();
    let mut found: BTreeMap<(Perm, Perm), ()> = BTreeMap::new();
    let mut buf: Vec<Perm> = Vec::with_capacity(CHUNK);
    let process = |buf: &mut Vec<Perm>, found: &mut BTreeMap<(Perm, Perm), ()>| {
        let hits: Vec<(Perm, Perm)> = buf
            .par_iter()
            .filter_map(|g1| {
                let ginf = g0.then(g1).inverse();
                if ginf.cycle_type() != types[2] || !is_transitive(&g0, g1) {
                    return None;
                }
                let key = canonical_pair(&g0, g1);
                if let Some(o) = require_order {
                    if PermGroup::new(n, &[g0.clone(), g1.clone()]).order() != o {
                        return None;
                    }
                }
                Some(key)
            })
            .collect();
        for k in hits {
            found.insert(k, ());
        }
        buf.clear();
    };
    types[1].for_each_element(|g1| {
        buf.push(g1.clone());
        if buf.len() == CHUNK {
            process(&mut buf, &mut found);
        }
    });
    process(&mut buf, &mut found);
    Ok(found.into_keys().map(|(a, b)| DessinClass::from_pair(a, b)).collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupId {
    pub order: u128,
    pub is_full_symmetric: bool,
    pub is_alternating: bool,
    pub is_order_168: bool,
}

/// Named by order only.
pub fn monodromy_group_id(d: &DessinClass) -> GroupId {
    let n = d.g0.degree() as u128;
    let fact: u128 = (1..=n).product();
    GroupId {
        order: d.group_order,
        is_full_symmetric: d.group_order == fact,
        is_alternating: 2 * d.group_order == fact,
        is_order_168: d.group_order == 168,
    }
}
