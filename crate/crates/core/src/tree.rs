//! The tree of components of the stable reduction with its edge invariants.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::Q;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("malformed graph: {0}")]
    MalformedGraph(String),
    #[error("exceptional input: {0}")]
    ExceptionalInput(String),
    #[error("bounds too large: {0}")]
    BoundsTooLarge(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LeafKind {
    Prim,
    New,
    Wild,
}

impl LeafKind {
    pub fn name(self) -> &'static str {
        match self {
            LeafKind::Prim => "prim",
            LeafKind::New => "new",
            LeafKind::Wild => "wild",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VertexKind {
    Root,
    Interior,
    Leaf(LeafKind),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub kind: VertexKind,
    pub genus: u64,
}

impl Vertex {
    pub fn is_interior(&self) -> bool {
        matches!(self.kind, VertexKind::Root | VertexKind::Interior)
    }
}

/// An undirected edge stored once as `source -> target` with `sigma = h/m`.
/// The reverse edge carries `(m, -h)`; a declared reverse is only checked.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeEdge {
    pub source: usize,
    pub target: usize,
    pub m: u64,
    pub h: i64,
    pub declared_reverse: Option<(u64, i64)>,
}

impl TreeEdge {
    pub fn sigma(&self) -> Q {
        Q::new(self.h, self.m as i64)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionTree {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<TreeEdge>,
    pub root: usize,
    pub three_point: bool,
}

/// One orientation of a stored edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DirEdge {
    pub edge: usize,
    pub forward: bool,
    pub source: usize,
    pub target: usize,
    pub sigma: Q,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Antisymmetry { edge: usize, source: usize, target: usize, sum: Q },
    StabilizerMismatch { edge: usize, m: u64, reverse_m: u64 },
    VertexSum { vertex: usize, sum: Q, expected: Q },
    LeafRange { vertex: usize, kind: LeafKind, sigma: Q },
    BranchLeafCount { count: usize },
    Nu { detail: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Antisymmetry { edge, source, target, sum } => write!(
                f,
                "edge {edge} ({source}->{target}): sigma_e + sigma_rev = {sum}, expected 0"
            ),
            Violation::StabilizerMismatch { edge, m, reverse_m } => {
                write!(f, "edge {edge}: m = {m} but reverse m = {reverse_m}")
            }
            Violation::VertexSum { vertex, sum, expected } => write!(
                f,
                "vertex {vertex}: sum of (sigma_e - 1) = {sum}, expected {expected}"
            ),
            Violation::LeafRange { vertex, kind, sigma } => {
                write!(f, "leaf {vertex} ({}): sigma = {sigma} out of range", kind.name())
            }
            Violation::BranchLeafCount { count } => {
                write!(f, "{count} prim or wild leaves, expected 3")
            }
            Violation::Nu { detail } => write!(f, "{detail}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Validation {
    pub violations: Vec<Violation>,
}

impl Validation {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExceptionalShape {
    /// One primitive leaf with `sigma = 1`, no new leaves.
    One,
    /// No primitive leaves, one new leaf with `sigma = 2`.
    Two,
}

impl ReductionTree {
    /// Genus zero root with one leaf per entry; the leaf kind is read off
    /// the value.
    pub fn star(sigmas: &[Q], three_point: bool) -> Self {
        let mut vertices = vec![Vertex { kind: VertexKind::Root, genus: 0 }];
        let mut edges = Vec::new();
        for (i, s) in sigmas.iter().enumerate() {
            let kind = if s.is_zero() {
                LeafKind::Wild
            } else if *s <= Q::one() {
                LeafKind::Prim
            } else {
                LeafKind::New
            };
            vertices.push(Vertex { kind: VertexKind::Leaf(kind), genus: 0 });
            edges.push(TreeEdge {
                source: 0,
                target: i + 1,
                m: *s.denom() as u64,
                h: *s.numer(),
                declared_reverse: None,
            });
        }
        ReductionTree { vertices, edges, root: 0, three_point }
    }

    pub fn leaves(&self) -> impl Iterator<Item = (usize, LeafKind)> + '_ {
        self.vertices.iter().enumerate().filter_map(|(i, v)| match v.kind {
            VertexKind::Leaf(k) => Some((i, k)),
            _ => None,
        })
    }

    pub fn interior(&self) -> impl Iterator<Item = usize> + '_ {
        self.vertices.iter().enumerate().filter(|(_, v)| v.is_interior()).map(|(i, _)| i)
    }

    /// Both orientations of every edge.
    pub fn directed(&self) -> Vec<DirEdge> {
        let mut out = Vec::with_capacity(2 * self.edges.len());
        for (i, e) in self.edges.iter().enumerate() {
            let s = e.sigma();
            out.push(DirEdge { edge: i, forward: true, source: e.source, target: e.target, sigma: s });
            out.push(DirEdge { edge: i, forward: false, source: e.target, target: e.source, sigma: -s });
        }
        out
    }

    fn neighbours(&self, v: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for e in &self.edges {
            if e.source == v {
                out.push(e.target);
            } else if e.target == v {
                out.push(e.source);
            }
        }
        out
    }

    fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.source == v || e.target == v).count()
    }

    /// Vertices in the component of `T - {e}` containing `from`.
    pub fn side(&self, from: usize, across: usize) -> BTreeSet<usize> {
        let mut seen = BTreeSet::new();
        seen.insert(from);
        let mut stack = vec![from];
        while let Some(v) = stack.pop() {
            for w in self.neighbours(v) {
                if (v == from && w == across) || seen.contains(&w) {
                    continue;
                }
                seen.insert(w);
                stack.push(w);
            }
        }
        seen
    }

    /// Value on the edge pointing into the leaf.
    pub fn leaf_sigma(&self, leaf: usize) -> Option<Q> {
        self.directed().into_iter().find(|d| d.target == leaf).map(|d| d.sigma)
    }

    pub fn base_genus(&self) -> u64 {
        self.interior().map(|v| self.vertices[v].genus).sum()
    }

    /// Leaf sets `(B_prim, B_new, B_wild)`.
    pub fn leaf_sets(&self) -> (Vec<usize>, Vec<usize>, Vec<usize>) {
        let (mut p, mut n, mut w) = (vec![], vec![], vec![]);
        for (i, k) in self.leaves() {
            match k {
                LeafKind::Prim => p.push(i),
                LeafKind::New => n.push(i),
                LeafKind::Wild => w.push(i),
            }
        }
        (p, n, w)
    }

    pub fn exceptional_shape(&self) -> Option<ExceptionalShape> {
        let (prim, new, _) = self.leaf_sets();
        match (prim.as_slice(), new.as_slice()) {
            ([j], []) if self.leaf_sigma(*j) == Some(Q::one()) => Some(ExceptionalShape::One),
            ([], [j]) if self.leaf_sigma(*j) == Some(Q::from_integer(2)) => Some(ExceptionalShape::Two),
            _ => None,
        }
    }

    /// Interior vertices in breadth-first order from the root, each with the
    /// neighbour it was reached from.
    fn bfs_interior(&self) -> Vec<(usize, Option<usize>)> {
        let mut out = vec![(self.root, None)];
        let mut seen = BTreeSet::from([self.root]);
        let mut queue = VecDeque::from([self.root]);
        while let Some(v) = queue.pop_front() {
            for w in self.neighbours(v) {
                if seen.insert(w) && self.vertices[w].is_interior() {
                    out.push((w, Some(v)));
                    queue.push_back(w);
                }
            }
        }
        out
    }
}

fn check_structure(t: &ReductionTree) -> Result<(), TreeError> {
    let n = t.vertices.len();
    let bad = |s: String| Err(TreeError::MalformedGraph(s));
    if t.root >= n {
        return bad(format!("root {} is not a vertex", t.root));
    }
    if t.vertices[t.root].kind != VertexKind::Root {
        return bad("designated root is not of root kind".into());
    }
    if t.vertices.iter().filter(|v| v.kind == VertexKind::Root).count() != 1 {
        return bad("exactly one root vertex expected".into());
    }
    let mut pairs = BTreeSet::new();
    for (i, e) in t.edges.iter().enumerate() {
        if e.source >= n || e.target >= n {
            return bad(format!("edge {i} references a missing vertex"));
        }
        if e.source == e.target {
            return bad(format!("edge {i} is a loop"));
        }
        if e.m == 0 {
            return bad(format!("edge {i} has m = 0"));
        }
        if !pairs.insert((e.source.min(e.target), e.source.max(e.target))) {
            return bad(format!("edge {i} duplicates another edge"));
        }
    }
    if t.edges.len() + 1 != n {
        return bad(format!("{} vertices but {} edges", n, t.edges.len()));
    }
    if t.side(t.root, usize::MAX).len() != n {
        return bad("graph is not connected".into());
    }
    for (i, v) in t.vertices.iter().enumerate() {
        if let VertexKind::Leaf(_) = v.kind {
            if t.degree(i) != 1 {
                return bad(format!("leaf {i} has degree {}", t.degree(i)));
            }
        }
    }
    Ok(())
}

/// Edge compatibility, interior vertex sums and leaf ranges.
pub fn validate_tree(t: &ReductionTree) -> Result<Validation, TreeError> {
    check_structure(t)?;
    let mut violations = Vec::new();
    for (i, e) in t.edges.iter().enumerate() {
        if let Some((rm, rh)) = e.declared_reverse {
            if rm == 0 {
                return Err(TreeError::MalformedGraph(format!("edge {i} reverse has m = 0")));
            }
            let sum = e.sigma() + Q::new(rh, rm as i64);
            if !sum.is_zero() {
                violations.push(Violation::Antisymmetry { edge: i, source: e.source, target: e.target, sum });
            }
            if rm != e.m {
                violations.push(Violation::StabilizerMismatch { edge: i, m: e.m, reverse_m: rm });
            }
        }
    }
    let dir = t.directed();
    for v in t.interior() {
        let sum: Q = dir.iter().filter(|d| d.source == v).map(|d| d.sigma - Q::one()).sum();
        let expected = Q::from_integer(2 * t.vertices[v].genus as i64 - 2);
        if sum != expected {
            violations.push(Violation::VertexSum { vertex: v, sum, expected });
        }
    }
    let shape = t.exceptional_shape();
    for (leaf, kind) in t.leaves() {
        let s = t.leaf_sigma(leaf).expect("leaf has an edge");
        let ok = match kind {
            LeafKind::Wild => s.is_zero(),
            LeafKind::Prim => {
                (s > Q::zero() && s < Q::one())
                    || (s == Q::one() && shape == Some(ExceptionalShape::One))
            }
            LeafKind::New => {
                (s > Q::one() && s < Q::from_integer(2))
                    || (s == Q::from_integer(2) && shape == Some(ExceptionalShape::Two))
            }
        };
        if !ok {
            violations.push(Violation::LeafRange { vertex: leaf, kind, sigma: s });
        }
    }
    if t.three_point {
        let (prim, _, wild) = t.leaf_sets();
        if prim.len() + wild.len() != 3 {
            violations.push(Violation::BranchLeafCount { count: prim.len() + wild.len() });
        }
    }
    Ok(Validation { violations })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainStep {
    pub vertex: usize,
    pub sum: Q,
    pub expected: Q,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlobalVcf {
    pub lhs: Q,
    pub rhs: Q,
    pub chain: Vec<ChainStep>,
}

impl GlobalVcf {
    pub fn residual(&self) -> Q {
        self.lhs - self.rhs
    }

    pub fn passed(&self) -> bool {
        self.lhs == self.rhs && self.chain.iter().all(|c| c.sum == c.expected)
    }
}

/// `sum_prim sigma + sum_new (sigma - 1) = 2 g_X - 2 + |B_0|`, re-derived by
/// growing a chain of subtrees from the root one interior vertex at a time.
pub fn global_vcf(t: &ReductionTree) -> Result<GlobalVcf, TreeError> {
    check_structure(t)?;
    let (prim, new, wild) = t.leaf_sets();
    let s = |j: &usize| t.leaf_sigma(*j).expect("leaf edge");
    let lhs: Q = prim.iter().map(s).sum::<Q>() + new.iter().map(|j| s(j) - Q::one()).sum::<Q>();
    let gx = t.base_genus() as i64;
    let rhs = Q::from_integer(2 * gx - 2 + (prim.len() + wild.len()) as i64);
    let dir = t.directed();
    let mut inside = BTreeSet::new();
    let mut genus = 0i64;
    let mut chain = Vec::new();
    for (v, _) in t.bfs_interior() {
        inside.insert(v);
        genus += t.vertices[v].genus as i64;
        let sum: Q = dir
            .iter()
            .filter(|d| inside.contains(&d.source) && !inside.contains(&d.target))
            .map(|d| d.sigma - Q::one())
            .sum();
        chain.push(ChainStep { vertex: v, sum, expected: Q::from_integer(2 * genus - 2) });
    }
    Ok(GlobalVcf { lhs, rhs, chain })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NuEdge {
    pub source: usize,
    pub target: usize,
    pub sigma: Q,
    pub nu: i64,
    pub frac: Q,
    /// `1 - #{j in B_0 beyond e}`; absent on edges leaving a wild leaf.
    pub closed_form: Option<i64>,
    pub root_precedes: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NuProfile {
    pub edges: Vec<NuEdge>,
    pub violations: Vec<Violation>,
}

/// Floors and fractional parts of all edge values with the identities they
/// satisfy in the non-exceptional three point case.
pub fn nu_profile(t: &ReductionTree) -> Result<NuProfile, TreeError> {
    check_structure(t)?;
    let (prim, new, wild) = t.leaf_sets();
    if !t.three_point {
        return Err(TreeError::ExceptionalInput("tree is not in three point mode".into()));
    }
    if prim.len() + new.len() < 2 {
        return Err(TreeError::ExceptionalInput(format!(
            "{} tails, at least 2 needed",
            prim.len() + new.len()
        )));
    }
    if t.exceptional_shape().is_some() {
        return Err(TreeError::ExceptionalInput("exceptional leaf values".into()));
    }
    let b0: BTreeSet<usize> = prim.iter().chain(&wild).copied().collect();
    let wild: BTreeSet<usize> = wild.into_iter().collect();
    let dir = t.directed();
    let mut edges = Vec::new();
    let mut violations = Vec::new();
    for d in &dir {
        let nu = d.sigma.floor().to_integer();
        let frac = d.sigma.fract();
        let beyond = t.side(d.target, d.source);
        let behind = t.side(d.source, d.target);
        let closed_form = (!wild.contains(&d.source))
            .then(|| 1 - beyond.iter().filter(|v| b0.contains(v)).count() as i64);
        let root_precedes = behind.contains(&t.root);
        if !(-2..=1).contains(&nu) {
            violations.push(Violation::Nu {
                detail: format!("edge {}->{}: nu = {nu} outside [-2, 1]", d.source, d.target),
            });
        }
        if let Some(c) = closed_form {
            if c != nu {
                violations.push(Violation::Nu {
                    detail: format!(
                        "edge {}->{}: nu = {nu} but 1 - #B_0 beyond = {c}",
                        d.source, d.target
                    ),
                });
            }
            if (nu >= 0) != root_precedes {
                violations.push(Violation::Nu {
                    detail: format!(
                        "edge {}->{}: nu = {nu} but root precedes = {root_precedes}",
                        d.source, d.target
                    ),
                });
            }
        }
        edges.push(NuEdge { source: d.source, target: d.target, sigma: d.sigma, nu, frac, closed_form, root_precedes });
    }
    for pair in edges.chunks(2) {
        let (a, b) = (&pair[0], &pair[1]);
        if wild.contains(&a.source) || wild.contains(&a.target) {
            continue;
        }
        if a.nu + b.nu != -1 {
            violations.push(Violation::Nu {
                detail: format!("edge {}<->{}: nu + nu_rev = {}", a.source, a.target, a.nu + b.nu),
            });
        }
    }
    for v in t.interior() {
        if t.vertices[v].genus != 0 {
            violations.push(Violation::Nu { detail: format!("vertex {v} has positive genus") });
        }
        let out: Vec<&NuEdge> = edges.iter().filter(|e| e.source == v).collect();
        let fs: Q = out.iter().map(|e| e.frac).sum();
        let ns: i64 = out.iter().map(|e| e.nu - 1).sum();
        if fs != Q::one() {
            violations.push(Violation::Nu { detail: format!("vertex {v}: fractional parts sum to {fs}") });
        }
        if ns != -3 {
            violations.push(Violation::Nu { detail: format!("vertex {v}: sum of (nu - 1) = {ns}") });
        }
    }
    Ok(NuProfile { edges, violations })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub vertex: usize,
    /// The edge from `vertex` towards the root, with its value and floor.
    pub edge: (usize, usize),
    pub sigma: Q,
    pub nu: i64,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Structure {
    Star,
    Exceptional1,
    Exceptional2,
    /// Extra components outside three point mode, where nothing forbids them.
    MultiComponent,
    Inconsistent(Certificate),
}

/// Decides whether the tree has the shape forced in three point mode.
pub fn classify_structure(t: &ReductionTree) -> Result<Structure, TreeError> {
    check_structure(t)?;
    let bfs = t.bfs_interior();
    let shape = t.exceptional_shape();
    let Some(&(v, Some(parent))) = bfs.get(1) else {
        return Ok(match shape {
            Some(ExceptionalShape::One) => Structure::Exceptional1,
            Some(ExceptionalShape::Two) => Structure::Exceptional2,
            None => Structure::Star,
        });
    };
    if !t.three_point {
        return Ok(Structure::MultiComponent);
    }
    let d = t
        .directed()
        .into_iter()
        .find(|d| d.source == v && d.target == parent)
        .expect("bfs edge exists");
    let nu = d.sigma.floor().to_integer();
    let reason = match shape {
        Some(_) => "exceptional reduction has only the original component and one tail".to_string(),
        None if nu < 0 => format!(
            "omega_v has a pole of order >= 2 above the edge towards the root (sigma = {}), so it is not logarithmic, and a vertex with a single edge of negative nu carries no exact datum",
            d.sigma
        ),
        None => format!(
            "edge towards the root has nu = {nu} >= 0, contradicting the sign rule for edges not preceded by the root"
        ),
    };
    Ok(Structure::Inconsistent(Certificate { vertex: v, edge: (v, parent), sigma: d.sigma, nu, reason }))
}

/// Which admissibility rules the enumerator imposes beyond validity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationRules {
    /// Non-root interior vertices have at least three edges.
    pub stability: bool,
    /// The three leaves of `B_0` lie in distinct branches at the root.
    pub root_median: bool,
    /// Every interior vertex supports a logarithmic or an exact datum.
    pub datum_type: bool,
}

impl Default for EnumerationRules {
    fn default() -> Self {
        EnumerationRules { stability: true, root_median: true, datum_type: true }
    }
}

/// Whether the edge values at one vertex allow a logarithmic or exact
/// differential. A logarithmic form has at most simple poles. An exact form
/// has no simple poles, no order `h` divisible by `p`, and (by the external
/// lemma on such vertices) not exactly one edge with negative floor.
pub fn vertex_admits_datum(p: u64, values: &[Q]) -> bool {
    let log_ok = values.iter().all(|s| !s.is_negative());
    let negative = values.iter().filter(|s| s.floor().to_integer() < 0).count();
    let exact_ok = values
        .iter()
        .all(|s| !s.is_zero() && s.numer().rem_euclid(p as i64) != 0)
        && negative != 1;
    log_ok || exact_ok
}

#[derive(Clone, Debug)]
enum SubKind {
    Leaf(LeafKind),
    Node(Vec<usize>),
}

#[derive(Clone, Debug)]
struct Sub {
    sigma: Q,
    interior: usize,
    b0: usize,
    new: usize,
    frac: Q,
    code: String,
    kind: SubKind,
}

struct Enumerator {
    p: u64,
    max_b0_branch: usize,
    max_new: usize,
    rules: EnumerationRules,
    allowed_den: Vec<i64>,
    subs: Vec<Sub>,
}

impl Enumerator {
    fn den_ok(&self, s: &Q) -> bool {
        self.allowed_den.contains(s.denom())
    }

    /// All child multisets (as sorted index lists into `pool`) meeting the
    /// running budget.
    #[allow(clippy::too_many_arguments)]
    fn children(
        &self,
        pool: &[usize],
        from: usize,
        interior_left: usize,
        b0_left: usize,
        new_left: usize,
        frac: Q,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        out.push(cur.clone());
        for i in from..pool.len() {
            let s = &self.subs[pool[i]];
            if s.interior > interior_left || s.b0 > b0_left || s.new > new_left {
                continue;
            }
            let f = frac + s.frac;
            if f > Q::one() {
                continue;
            }
            cur.push(pool[i]);
            self.children(pool, i, interior_left - s.interior, b0_left - s.b0, new_left - s.new, f, cur, out);
            cur.pop();
        }
    }
}

/// All trees (up to root-preserving isomorphism) in three point mode whose
/// interior vertices number at most `max_interior` (root included), whose
/// edge denominators divide `p_minus_1` and are at most `max_den`, and which
/// pass [`validate_tree`] and the given admissibility rules.
pub fn enumerate_admissible_trees(
    p_minus_1: u64,
    max_interior: usize,
    max_den: u64,
    rules: EnumerationRules,
) -> Result<Vec<ReductionTree>, TreeError> {
    if max_interior == 0 || max_interior > 6 {
        return Err(TreeError::BoundsTooLarge(format!("{max_interior} interior vertices (1..=6)")));
    }
    if max_den > 12 {
        return Err(TreeError::BoundsTooLarge(format!("denominator bound {max_den} > 12")));
    }
    if !(2..=12).contains(&p_minus_1) || !p_minus_1.is_multiple_of(2) {
        return Err(TreeError::BoundsTooLarge(format!("p - 1 = {p_minus_1} must be even in 2..=12")));
    }
    let allowed_den: Vec<i64> = (1..=max_den as i64).filter(|d| p_minus_1 as i64 % d == 0).collect();
    let fr: Vec<Q> = allowed_den
        .iter()
        .filter(|&&d| d > 1)
        .flat_map(|&d| (1..d).filter(move |a| a.gcd(&d) == 1).map(move |a| Q::new(a, d)))
        .collect();
    let mut out = Vec::new();
    // ordinary signatures
    let mut b0_vals = vec![Q::zero()];
    b0_vals.extend(fr.iter().copied());
    let new_vals: Vec<Q> = fr.iter().map(|f| f + Q::one()).collect();
    let max_new = fr.iter().min().map_or(0, |m| (Q::one() / m).to_integer() as usize);
    let branch = if rules.root_median { 1 } else { 3 };
    out.extend(run_enumeration(p_minus_1 + 1, max_interior, &b0_vals, &new_vals, branch, max_new, rules, &allowed_den, None));
    // exceptional signatures
    out.extend(run_enumeration(
        p_minus_1 + 1,
        max_interior,
        &[Q::zero(), Q::one()],
        &[Q::from_integer(2)],
        branch,
        1,
        rules,
        &allowed_den,
        Some(()),
    ));
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn run_enumeration(
    p: u64,
    max_interior: usize,
    b0_vals: &[Q],
    new_vals: &[Q],
    max_b0_branch: usize,
    max_new: usize,
    rules: EnumerationRules,
    allowed_den: &[i64],
    exceptional: Option<()>,
) -> Vec<ReductionTree> {
    let mut en = Enumerator {
        p,
        max_b0_branch,
        max_new,
        rules,
        allowed_den: allowed_den.to_vec(),
        subs: Vec::new(),
    };
    for &s in b0_vals {
        let kind = if s.is_zero() { LeafKind::Wild } else { LeafKind::Prim };
        en.subs.push(Sub {
            sigma: s,
            interior: 0,
            b0: 1,
            new: 0,
            frac: s.fract(),
            code: format!("{}{}", kind.name(), s),
            kind: SubKind::Leaf(kind),
        });
    }
    for &s in new_vals {
        en.subs.push(Sub {
            sigma: s,
            interior: 0,
            b0: 0,
            new: 1,
            frac: s.fract(),
            code: format!("new{s}"),
            kind: SubKind::Leaf(LeafKind::New),
        });
    }
    // hanging subtrees by number of interior vertices; the root uses one slot
    for k in 1..max_interior {
        let pool: Vec<usize> = (0..en.subs.len()).filter(|&i| en.subs[i].interior < k).collect();
        let mut sets = Vec::new();
        en.children(&pool, 0, k - 1, en.max_b0_branch, en.max_new, Q::zero(), &mut Vec::new(), &mut sets);
        let mut fresh = Vec::new();
        for set in sets {
            let interior: usize = 1 + set.iter().map(|&i| en.subs[i].interior).sum::<usize>();
            if interior != k {
                continue;
            }
            if en.rules.stability && set.len() < 2 {
                continue;
            }
            if set.is_empty() {
                continue;
            }
            let sum: Q = set.iter().map(|&i| en.subs[i].sigma - Q::one()).sum();
            let sigma = sum + Q::one();
            if !en.den_ok(&sigma) {
                continue;
            }
            let mut values: Vec<Q> = set.iter().map(|&i| en.subs[i].sigma).collect();
            values.push(-sigma);
            if en.rules.datum_type && !vertex_admits_datum(en.p, &values) {
                continue;
            }
            let mut codes: Vec<&str> = set.iter().map(|&i| en.subs[i].code.as_str()).collect();
            codes.sort();
            fresh.push(Sub {
                sigma,
                interior,
                b0: set.iter().map(|&i| en.subs[i].b0).sum(),
                new: set.iter().map(|&i| en.subs[i].new).sum(),
                frac: set.iter().map(|&i| en.subs[i].frac).sum(),
                code: format!("v[{}]{}", codes.join(","), sigma),
                kind: SubKind::Node(set),
            });
        }
        en.subs.extend(fresh);
    }
    let pool: Vec<usize> = (0..en.subs.len()).collect();
    let mut sets = Vec::new();
    en.children(&pool, 0, max_interior - 1, 3, en.max_new, Q::zero(), &mut Vec::new(), &mut sets);
    let mut trees = Vec::new();
    let mut seen = BTreeSet::new();
    for set in sets {
        if set.iter().map(|&i| en.subs[i].b0).sum::<usize>() != 3 {
            continue;
        }
        let sum: Q = set.iter().map(|&i| en.subs[i].sigma - Q::one()).sum();
        if sum != Q::from_integer(-2) {
            continue;
        }
        if set.iter().any(|&i| en.subs[i].b0 > max_b0_branch) {
            continue;
        }
        let values: Vec<Q> = set.iter().map(|&i| en.subs[i].sigma).collect();
        if en.rules.datum_type && !vertex_admits_datum(en.p, &values) {
            continue;
        }
        let tree = materialize(&en, &set);
        let shape = tree.exceptional_shape();
        if exceptional.is_some() != shape.is_some() {
            continue;
        }
        let Ok(v) = validate_tree(&tree) else { continue };
        if !v.passed() {
            continue;
        }
        let mut codes: Vec<&str> = set.iter().map(|&i| en.subs[i].code.as_str()).collect();
        codes.sort();
        if seen.insert(codes.join(",")) {
            trees.push(tree);
        }
    }
    trees
}

fn materialize(en: &Enumerator, root_children: &[usize]) -> ReductionTree {
    let mut t = ReductionTree {
        vertices: vec![Vertex { kind: VertexKind::Root, genus: 0 }],
        edges: Vec::new(),
        root: 0,
        three_point: true,
    };
    fn attach(en: &Enumerator, t: &mut ReductionTree, parent: usize, sub: usize) {
        let s = &en.subs[sub];
        let kind = match s.kind {
            SubKind::Leaf(k) => VertexKind::Leaf(k),
            SubKind::Node(_) => VertexKind::Interior,
        };
        let id = t.vertices.len();
        t.vertices.push(Vertex { kind, genus: 0 });
        t.edges.push(TreeEdge {
            source: parent,
            target: id,
            m: *s.sigma.denom() as u64,
            h: *s.sigma.numer(),
            declared_reverse: None,
        });
        if let SubKind::Node(children) = &s.kind {
            for &c in children {
                attach(en, t, id, c);
            }
        }
    }
    for &c in root_children {
        attach(en, &mut t, 0, c);
    }
    t
}
