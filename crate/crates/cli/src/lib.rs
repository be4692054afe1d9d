//! Command line front end: argument parsing, input documents and JSON reports.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Deserialize;
use serde_json::{json, Map, Value};
use thiserror::Error;

use stabred_core::algebra::{FiniteField, Fq};
use stabred_core::deformation::{
    build_normalized_special, check_local_vcf_datum, critical_invariants, enumerate_signatures, is_special_datum,
    DeformationError, Signature, Specialness,
};
use stabred_core::dessins::{analyze_dessin, monodromy_group_id, CycleType, DessinError, DessinOverrides};
use stabred_core::lifting::Mildness;
use stabred_core::tail::{
    apply_chain, classify_tail, extend_to, germ_reduction, normalize_tail, tail_from_coeffs, tail_metrics, GermVerdict,
    Substitution, TailClass, TailError,
};
use stabred_core::tree::{
    classify_structure, global_vcf, nu_profile, validate_tree, LeafKind, ReductionTree, Structure, TreeEdge, TreeError,
    Vertex, VertexKind,
};
use stabred_core::Q;

pub const SCHEMA_VERSION: u64 = 1;

#[derive(Parser, Debug)]
#[command(name = "stabred", version, about = "Stable reduction invariants of three point covers")]
pub struct Cli {
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Count branch cycle triples of prime degree and predict lifting data.
    AnalyzeDessin {
        #[arg(long)]
        p: usize,
        /// Three cycle types, e.g. `2-3,2-3,7`.
        #[arg(long)]
        types: String,
        #[arg(long = "n-prime")]
        n_prime: Option<u64>,
        /// Candidate `|Aut|` orders per tail, e.g. `1,1,1|2`.
        #[arg(long)]
        aut: Option<String>,
        /// Monodromy group order filter (default `p!`).
        #[arg(long = "group-order")]
        group_order: Option<u128>,
    },
    /// Build and check the multiplicative special datum of a signature.
    VerifyDatum {
        #[arg(long)]
        p: u32,
        /// Three rationals, e.g. `1/6,1/6,2/3`.
        #[arg(long)]
        sigma: String,
    },
    /// List signatures with three entries below 1.
    EnumerateSignatures {
        #[arg(long)]
        p: u32,
        #[arg(long = "max-new", default_value_t = 0)]
        max_new: usize,
        /// Allow every denominator up to `p - 1`, not just divisors.
        #[arg(long = "any-denominator")]
        any_denominator: bool,
    },
    /// Validate a tree document.
    TreeCheck {
        #[arg(long)]
        input: PathBuf,
    },
    /// Bring a tail equation to normal form.
    TailNormalize {
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        p: Option<u32>,
        #[arg(long)]
        m: Option<u64>,
        #[arg(long, allow_hyphen_values = true)]
        a: Option<i64>,
        /// Coefficients `b_0,b_1,..` as residues mod `p`.
        #[arg(long, allow_hyphen_values = true)]
        coeffs: Option<String>,
    },
    /// Decide reduction of a boundary germ.
    GermReduce {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        h: i64,
        /// `val(T) / val(p)` as `a/b`.
        #[arg(long)]
        ratio: String,
        #[arg(long)]
        wbar: Option<u32>,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error at line {line}, column {column}: {message}")]
    ParseError { line: usize, column: usize, message: String },
    #[error("invalid input: {0}")]
    Input(String),
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("unknown subcommand {0:?}")]
    UnknownSubcommand(String),
}

/// Process outcome: text for stdout and stderr, and the exit status.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

pub fn rational(q: Q) -> Value {
    json!({ "num": *q.numer(), "den": *q.denom() })
}

fn rationals(v: &[Q]) -> Value {
    Value::Array(v.iter().map(|q| rational(*q)).collect())
}

pub fn parse_rational(s: &str) -> Result<Q, String> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: i64 = n.parse().map_err(|_| format!("bad rational {s:?}"))?;
    let d: i64 = d.parse().map_err(|_| format!("bad rational {s:?}"))?;
    if d == 0 {
        return Err(format!("zero denominator in {s:?}"));
    }
    Ok(Q::new(n, d))
}

fn parse_list<T, F: Fn(&str) -> Result<T, String>>(s: &str, f: F) -> Result<Vec<T>, CliError> {
    s.split(',').map(|t| f(t.trim())).collect::<Result<_, _>>().map_err(CliError::Input)
}

struct Report {
    command: &'static str,
    input: Value,
    results: Map<String, Value>,
    provenance: Map<String, Value>,
    notes: Vec<String>,
    pass: bool,
}

impl Report {
    fn new(command: &'static str, input: Value) -> Self {
        Report { command, input, results: Map::new(), provenance: Map::new(), notes: Vec::new(), pass: true }
    }

    fn set(&mut self, key: &str, v: Value) {
        self.results.insert(key.to_string(), v);
    }

    fn cite(&mut self, key: &str, formula: &str) {
        self.provenance.insert(key.to_string(), Value::String(formula.to_string()));
    }

    fn fail(&mut self, reason: impl Into<String>) {
        self.pass = false;
        self.notes.push(reason.into());
    }

    fn finish(self) -> (Value, i32) {
        let v = json!({
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "input": self.input,
            "status": if self.pass { "pass" } else { "fail" },
            "results": Value::Object(self.results),
            "provenance": Value::Object(self.provenance),
            "notes": self.notes,
        });
        (v, if self.pass { 0 } else { 1 })
    }
}

fn signature_json(s: &Signature) -> Value {
    json!({
        "entries": rationals(&s.entries),
        "wild": s.wild,
        "prim": s.prim,
        "new": s.new,
        "fractional_sum": rational(s.fractional_sum()),
    })
}

fn mildness_name(m: Mildness) -> &'static str {
    match m {
        Mildness::GoodReductionForced => "good_reduction_forced",
        Mildness::StrictlyDividesMildIfBad => "strictly_divides_mild_if_bad",
        Mildness::PSquareUnknown => "p_square_unknown",
    }
}

fn run_analyze(
    p: usize,
    types: &str,
    n_prime: Option<u64>,
    aut: Option<&str>,
    group_order: Option<u128>,
) -> Result<(Value, i32), CliError> {
    let parts: Vec<&str> = types.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(CliError::Input(format!("expected three cycle types, got {}", parts.len())));
    }
    let mut ts = Vec::new();
    for s in &parts {
        ts.push(CycleType::parse(s, p).map_err(|e| CliError::Input(e.to_string()))?);
    }
    let ts: [CycleType; 3] = ts.try_into().expect("three entries");
    let aut_orders = match aut {
        None => None,
        Some(a) => Some(
            a.split(',')
                .map(|tail| {
                    tail.split('|')
                        .map(|x| x.trim().parse::<u64>().map_err(|_| CliError::Input(format!("bad order {x:?}"))))
                        .collect::<Result<Vec<_>, _>>()
                })
                .collect::<Result<Vec<_>, _>>()?,
        ),
    };
    let input = json!({
        "p": p,
        "types": parts,
        "n_prime": n_prime,
        "aut": aut,
        "group_order": group_order.map(|g| g.to_string()),
    });
    let mut r = Report::new("analyze-dessin", input);
    let ov = DessinOverrides { aut_orders, n_prime, require_order: group_order };
    let a = match analyze_dessin(p, &ts, &ov) {
        Ok(a) => a,
        Err(DessinError::BadCycleType(s)) => return Err(CliError::Input(s)),
        Err(DessinError::DegreeTooLarge(n)) => return Err(CliError::Input(format!("degree {n} is too large"))),
        Err(DessinError::Lifting(e)) => return Err(CliError::Input(e.to_string())),
        Err(e) => {
            r.fail(e.to_string());
            return Ok(r.finish());
        }
    };
    r.set("count", json!(a.classes.len()));
    r.set(
        "classes",
        Value::Array(
            a.classes
                .iter()
                .map(|d| {
                    let id = monodromy_group_id(d);
                    json!({
                        "g0": d.g0.to_string(),
                        "g1": d.g1.to_string(),
                        "ginf": d.ginf.to_string(),
                        "group_order": id.order.to_string(),
                        "symmetric": id.is_full_symmetric,
                        "alternating": id.is_alternating,
                        "order_168": id.is_order_168,
                        "transitive": d.transitive,
                        "primitive": d.primitive,
                    })
                })
                .collect(),
        ),
    );
    r.set("genus", json!(a.genus));
    r.set("signature", signature_json(&a.signature));
    r.set(
        "special_datum",
        json!({
            "m": a.special.m,
            "exponents": a.special.exponents,
            "field_degree": a.special.field.degree(),
            "lambda": a.special.field.display(a.special.lambda),
            "epsilon": a.special.epsilon_display(),
        }),
    );
    r.set("h", json!(a.h_values));
    r.set("m", json!(a.m_values));
    r.set("N", json!(a.report.n));
    r.set(
        "patching",
        json!({
            "count": a.report.patching.count,
            "orbit_length": a.report.patching.orbit_length,
            "orbit_count": a.report.patching.orbit_count,
        }),
    );
    r.set("n_prime_bounds", json!([a.n_prime_bounds.0, a.n_prime_bounds.1]));
    r.set(
        "candidates",
        Value::Array(
            a.report
                .candidates
                .iter()
                .map(|c| {
                    json!({
                        "label": c.label,
                        "n_prime": c.n_prime,
                        "aut_orders": c.aut_orders,
                        "lift_count": c.lift_count,
                        "N_prime": c.n_prime_degree,
                    })
                })
                .collect(),
        ),
    );
    let mut n_primes: Vec<u64> = a.ramification_prediction.clone();
    n_primes.sort_unstable();
    n_primes.dedup();
    r.set("N_prime", json!(n_primes));
    r.set("ramification_index_prediction", json!(n_primes));
    r.set("disk_thresholds", rationals(&a.report.disk_thresholds));
    r.set("mildness", json!(a.report.mildness.map(mildness_name)));
    r.cite("count", "classes of transitive triples g0 g1 ginf = 1 up to simultaneous conjugation in S_p");
    r.cite("genus", "2g - 2 = -2p + sum_j (p - cycles_j)");
    r.cite("signature", "sigma_j = (cycles_j - 1)/(p - 1)");
    r.cite("special_datum", "z^m = x^a1 (x-1)^a2, omega = eps z dx/(x(x-1)), C(omega) = omega");
    r.cite("N", "N = (p-1) lcm_j h_j");
    r.cite("patching", "(p-1) prod_j h_j patching data in orbits of length N");
    r.cite("n_prime_bounds", "gcd_j m_j | n' | [N_G(P) : C_G(P)]");
    r.cite("N_prime", "N' = (p-1)/n' lcm_j (h_j / |Aut_j|)");
    r.cite("candidates", "|L| = (p-1)/n' prod_j (h_j / |Aut_j|)");
    r.cite("disk_thresholds", "p m_j / ((p-1) h_j)");
    r.notes.push(
        "decompositions of p in the fields of moduli come from number field tables and are not recomputed; only ramification indices are predicted"
            .into(),
    );
    if a.report.candidates.len() > 1 {
        r.notes.push("|Aut_j| is an input assumption; N' is reported for every candidate".into());
    }
    if a.report.candidates.iter().any(|c| c.aut_orders.iter().any(|&o| o > 1)) {
        r.notes.push(
            "tails with |Aut_j| > 1 have Galois group larger than Z/p x| Z/m (order 168 for 2-2 at p = 7); their existence and uniqueness are taken as known, no tail model is computed"
                .into(),
        );
    }
    Ok(r.finish())
}

fn run_verify(p: u32, sigma: &str) -> Result<(Value, i32), CliError> {
    let sig = parse_list(sigma, parse_rational)?;
    let mut r = Report::new("verify-datum", json!({ "p": p, "sigma": rationals(&sig) }));
    let ns = match build_normalized_special(p, &sig) {
        Ok(ns) => ns,
        Err(e @ (DeformationError::WrongArity { .. } | DeformationError::SigmaOutOfRange(_) | DeformationError::SumNotOne(_))) => {
            return Err(CliError::Input(e.to_string()))
        }
        Err(DeformationError::Curve(e)) => return Err(CliError::Input(e.to_string())),
        Err(e) => {
            r.fail(e.to_string());
            return Ok(r.finish());
        }
    };
    let dd = &ns.datum;
    let f = ns.field.clone();
    let crit = critical_invariants(dd).map_err(|e| CliError::Input(e.to_string()))?;
    let vcf = check_local_vcf_datum(dd).map_err(|e| CliError::Input(e.to_string()))?;
    let special = is_special_datum(dd).map_err(|e| CliError::Input(e.to_string()))?;
    r.set(
        "curve",
        json!({
            "m": ns.m,
            "exponents": ns.exponents,
            "field": { "p": f.characteristic(), "degree": f.degree() },
            "genus": dd.curve.genus().ok(),
        }),
    );
    r.set("lambda", json!(f.display(ns.lambda)));
    r.set("epsilon", json!(ns.epsilon_display()));
    r.set("epsilon_in_prime_field", json!(ns.epsilon_in_prime_field));
    r.set("kind", json!(format!("{:?}", dd.kind)));
    r.set("h_order", json!(dd.h_order));
    r.set("chi_kernel_order", json!(dd.chi_kernel_order));
    r.set(
        "critical_points",
        Value::Array(
            crit.iter()
                .map(|c| {
                    json!({
                        "tau": c.tau.to_string(),
                        "m": c.m_tau,
                        "h": c.h_tau,
                        "sigma": rational(c.sigma),
                        "kind": format!("{:?}", c.kind),
                    })
                })
                .collect(),
        ),
    );
    r.set(
        "vcf",
        json!({
            "passed": vcf.passed,
            "sum": rational(vcf.sum),
            "expected": rational(vcf.expected),
            "residual": rational(vcf.residual),
        }),
    );
    let reproduced: Vec<Q> = {
        let mut v: Vec<Q> = crit.iter().map(|c| c.sigma).collect();
        v.sort();
        v
    };
    let mut want = sig.clone();
    want.sort();
    r.set("signature_reproduced", json!(reproduced == want));
    match &special {
        Specialness::Special(s) => r.set("special", signature_json(s)),
        Specialness::NotSpecial(reason) => {
            r.set("special", Value::Null);
            r.fail(format!("not special: {reason}"));
        }
    }
    if !vcf.passed {
        r.fail(format!("local vanishing cycle residual {}", vcf.residual));
    }
    if reproduced != want {
        r.fail("critical points do not reproduce the signature");
    }
    if dd.kind != stabred_core::superelliptic::DifferentialKind::Logarithmic {
        r.fail("differential is not logarithmic");
    }
    r.cite("epsilon", "eps^(p-1) = lambda^p where C(omega_0) = lambda omega_0");
    r.cite("critical_points", "m = |H_xi|, h = ord_xi(omega) + 1, sigma = h/m");
    r.cite("vcf", "sum_j (sigma_j - 1) = 2 g_X - 2");
    Ok(r.finish())
}

fn run_enumerate(p: u32, max_new: usize, any: bool) -> Result<(Value, i32), CliError> {
    if p < 3 || !stabred_core::algebra::is_prime(p as u64) {
        return Err(CliError::Input(format!("p = {p} is not an odd prime")));
    }
    let sigs = enumerate_signatures(p, max_new, !any);
    let mut r = Report::new("enumerate-signatures", json!({ "p": p, "max_new": max_new, "any_denominator": any }));
    r.set("count", json!(sigs.len()));
    r.set("signatures", Value::Array(sigs.iter().map(signature_json).collect()));
    r.cite("signatures", "three entries in {0} u (0,1), others in (1,2), sum of fractional parts 1");
    Ok(r.finish())
}

fn de_rational<'de, D: serde::Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        S(String),
        I(i64),
    }
    match Raw::deserialize(d)? {
        Raw::S(s) => parse_rational(&s).map_err(serde::de::Error::custom),
        Raw::I(i) => Ok(Q::from_integer(i)),
    }
}

fn de_rational_opt<'de, D: serde::Deserializer<'de>>(d: D) -> Result<Option<Q>, D::Error> {
    de_rational(d).map(Some)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TreeDoc {
    #[serde(default = "yes")]
    three_point: bool,
    root: Option<usize>,
    vertices: Vec<VertexDoc>,
    edges: Vec<EdgeDoc>,
}

fn yes() -> bool {
    true
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct VertexDoc {
    kind: String,
    #[serde(default)]
    genus: u64,
    leaf: Option<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeDoc {
    source: usize,
    target: usize,
    #[serde(deserialize_with = "de_rational")]
    sigma: Q,
    m: Option<u64>,
    #[serde(default, deserialize_with = "de_rational_opt")]
    reverse: Option<Q>,
}

fn json_error(e: serde_json::Error) -> CliError {
    CliError::ParseError { line: e.line(), column: e.column(), message: e.to_string() }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Io { path: path.display().to_string(), message: e.to_string() })
}

fn tree_from_doc(doc: TreeDoc) -> Result<ReductionTree, CliError> {
    let mut vertices = Vec::new();
    for (i, v) in doc.vertices.iter().enumerate() {
        let kind = match (v.kind.as_str(), v.leaf.as_deref()) {
            ("root", _) => VertexKind::Root,
            ("interior", _) => VertexKind::Interior,
            ("leaf", Some("prim")) => VertexKind::Leaf(LeafKind::Prim),
            ("leaf", Some("new")) => VertexKind::Leaf(LeafKind::New),
            ("leaf", Some("wild")) => VertexKind::Leaf(LeafKind::Wild),
            _ => return Err(CliError::Input(format!("vertex {i}: unknown kind {:?}/{:?}", v.kind, v.leaf))),
        };
        vertices.push(Vertex { kind, genus: v.genus });
    }
    let root = match doc.root {
        Some(r) => r,
        None => vertices
            .iter()
            .position(|v| v.kind == VertexKind::Root)
            .ok_or_else(|| CliError::Input("no root vertex".into()))?,
    };
    let mut edges = Vec::new();
    for (i, e) in doc.edges.iter().enumerate() {
        let m = e.m.unwrap_or(*e.sigma.denom() as u64);
        let h = e.sigma * Q::from_integer(m as i64);
        if m == 0 || !h.is_integer() {
            return Err(CliError::Input(format!("edge {i}: sigma = {} is not h/{m}", e.sigma)));
        }
        let declared_reverse = match e.reverse {
            None => None,
            Some(r) => {
                let rh = r * Q::from_integer(m as i64);
                if !rh.is_integer() {
                    return Err(CliError::Input(format!("edge {i}: reverse {r} is not h/{m}")));
                }
                Some((m, rh.to_integer()))
            }
        };
        edges.push(TreeEdge { source: e.source, target: e.target, m, h: h.to_integer(), declared_reverse });
    }
    Ok(ReductionTree { vertices, edges, root, three_point: doc.three_point })
}

fn run_tree(input: &Path) -> Result<(Value, i32), CliError> {
    let text = read(input)?;
    let doc: TreeDoc = serde_json::from_str(&text).map_err(json_error)?;
    let tree = tree_from_doc(doc)?;
    let mut r = Report::new("tree-check", json!({ "input": input.display().to_string() }));
    let malformed = |e: TreeError| CliError::Input(e.to_string());
    let val = validate_tree(&tree).map_err(malformed)?;
    r.set("valid", json!(val.passed()));
    r.set("violations", json!(val.violations.iter().map(|v| v.to_string()).collect::<Vec<_>>()));
    if !val.passed() {
        r.fail(format!("{} violations", val.violations.len()));
        return Ok(r.finish());
    }
    let g = global_vcf(&tree).map_err(malformed)?;
    r.set(
        "global_vcf",
        json!({
            "lhs": rational(g.lhs),
            "rhs": rational(g.rhs),
            "residual": rational(g.residual()),
            "chain": g.chain.iter().map(|c| json!({
                "vertex": c.vertex, "sum": rational(c.sum), "expected": rational(c.expected)
            })).collect::<Vec<_>>(),
            "passed": g.passed(),
        }),
    );
    if !g.passed() {
        r.fail(format!("global vanishing cycle residual {}", g.residual()));
    }
    match nu_profile(&tree) {
        Ok(nu) => {
            r.set(
                "nu",
                json!({
                    "edges": nu.edges.iter().map(|e| json!({
                        "source": e.source, "target": e.target, "sigma": rational(e.sigma),
                        "nu": e.nu, "frac": rational(e.frac), "closed_form": e.closed_form,
                        "root_precedes": e.root_precedes,
                    })).collect::<Vec<_>>(),
                    "violations": nu.violations.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                }),
            );
            if !nu.violations.is_empty() {
                r.fail(format!("{} nu violations", nu.violations.len()));
            }
        }
        Err(TreeError::ExceptionalInput(why)) => r.set("nu", json!({ "skipped": why })),
        Err(e) => return Err(malformed(e)),
    }
    let s = classify_structure(&tree).map_err(malformed)?;
    let sv = match &s {
        Structure::Star => json!("Star"),
        Structure::Exceptional1 => json!("Exceptional1"),
        Structure::Exceptional2 => json!("Exceptional2"),
        Structure::MultiComponent => json!("MultiComponent"),
        Structure::Inconsistent(c) => {
            r.fail(format!("inconsistent at vertex {}: {}", c.vertex, c.reason));
            json!({ "Inconsistent": {
                "vertex": c.vertex, "edge": [c.edge.0, c.edge.1], "sigma": rational(c.sigma),
                "nu": c.nu, "reason": c.reason,
            }})
        }
    };
    r.set("structure", sv);
    r.cite("valid", "sigma_e + sigma_rev = 0 and sum_{s(e)=v} (sigma_e - 1) = 2 g_v - 2");
    r.cite("global_vcf", "sum_prim sigma_j + sum_new (sigma_j - 1) = 2 g_X - 2 + |B_0|");
    r.cite("nu", "nu_e = floor(sigma_e), -2 <= nu_e <= 1, nu_e + nu_rev = -1");
    Ok(r.finish())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TailDoc {
    p: u32,
    m: u64,
    a: i64,
    coeffs: Vec<i64>,
}

fn fq_json(f: &FiniteField, a: Fq) -> Value {
    Value::String(f.display(a))
}

fn run_tail(doc: TailDoc, echo: Value) -> Result<(Value, i32), CliError> {
    let t = tail_from_coeffs(doc.p, doc.m, doc.a, &doc.coeffs).map_err(|e| CliError::Input(e.to_string()))?;
    let mut r = Report::new("tail-normalize", echo);
    let h = t.h();
    let n = match normalize_tail(&t) {
        Ok(n) => n,
        Err(e @ TailError::InsufficientPrecision { .. }) => {
            r.fail(e.to_string());
            return Ok(r.finish());
        }
        Err(e) => return Err(CliError::Input(e.to_string())),
    };
    let f = n.tail.field.clone();
    let chain: Vec<Value> = n
        .chain
        .iter()
        .map(|s| match s {
            Substitution::Affine { c, d, gamma } => json!({
                "step": "affine", "c": fq_json(&f, *c), "d": fq_json(&f, *d), "gamma": fq_json(&f, *gamma),
            }),
            Substitution::ArtinSchreier { k0, e } => json!({
                "step": "artin_schreier", "k0": k0,
                "e": e.iter().map(|x| fq_json(&f, *x)).collect::<Vec<_>>(),
            }),
        })
        .collect();
    let lifted = extend_to(&t, f.degree()).map_err(|e| CliError::Input(e.to_string()))?;
    let replay = apply_chain(&lifted, &n.chain).map_err(|e| CliError::Input(e.to_string()))?;
    let verified = replay == n.tail && n.tail.is_canonical();
    r.set("h", json!(h));
    r.set("sigma", rational(t.sigma()));
    r.set("field", json!({ "p": f.characteristic(), "degree": f.degree() }));
    r.set("canonical", json!(n.tail.is_canonical()));
    r.set("equation", json!(format!("y^{} - y = z^{}", doc.p, h)));
    r.set("precision", json!(n.tail.precision()));
    r.set("chain", Value::Array(chain));
    r.set("chain_verified", json!(verified));
    if let Ok(mt) = tail_metrics(doc.p, doc.m, h, None) {
        r.set(
            "metrics",
            json!({
                "sigma": rational(mt.sigma), "genus": mt.genus,
                "aut0_order": mt.aut0_order, "inner_aut_order": mt.inner_aut_order,
            }),
        );
    }
    match classify_tail(doc.p, doc.m, h) {
        Ok(TailClass::Primitive { etale_two_genus, genus_with_tame_point }) => r.set(
            "class",
            json!({ "Primitive": { "etale_two_genus": etale_two_genus, "genus_with_tame_point": genus_with_tame_point } }),
        ),
        Ok(TailClass::New) => r.set("class", json!("New")),
        Ok(TailClass::NotSpecial(why)) => r.set("class", json!({ "NotSpecial": why })),
        Err(e) => r.set("class", json!({ "error": e.to_string() })),
    }
    if !verified {
        r.fail("substitution chain does not reproduce the normal form");
    }
    r.cite("chain", "x -> c(x+d), z -> c^(1/m) z (1 + d/x)^(1/m), y -> y + g, g^p - g = z^a (Phi - 1/x)");
    r.cite("metrics", "genus (p-1)(h-1)/2, |Aut^0| = (p-1) h");
    Ok(r.finish())
}

fn run_germ(p: u32, m: u64, h: i64, ratio: &str, wbar: Option<u32>) -> Result<(Value, i32), CliError> {
    let q = parse_rational(ratio).map_err(CliError::Input)?;
    let v = germ_reduction(p, m, h, q, wbar).map_err(|e| CliError::Input(e.to_string()))?;
    let mut r = Report::new("germ-reduce", json!({ "p": p, "m": m, "h": h, "ratio": rational(q), "wbar": wbar }));
    match v {
        GermVerdict::GoodReduction { a, h, wbar_present, threshold } => {
            r.set("verdict", json!("GoodReduction"));
            r.set("threshold", rational(threshold));
            let eq = if wbar_present {
                format!("y'^{p} - y' = wbar z'^{a} + z'^{h}")
            } else {
                format!("y'^{p} - y' = z'^{h}")
            };
            r.set("equation", json!(eq));
            r.set("conductor", json!(h));
        }
        GermVerdict::BadReduction { threshold, differential, zeros_at_origin, simple_zeros, .. } => {
            r.set("verdict", json!("BadReduction"));
            r.set("threshold", rational(threshold));
            r.set("differential_coefficients", json!(differential));
            r.set("zeros_at_origin", json!(zeros_at_origin));
            r.set("simple_zeros", json!(simple_zeros));
        }
    }
    r.cite("threshold", "p m / ((p-1) h), inclusive");
    Ok(r.finish())
}

fn dispatch(cli: &Cli) -> Result<(Value, i32), CliError> {
    match &cli.command {
        Command::AnalyzeDessin { p, types, n_prime, aut, group_order } => {
            run_analyze(*p, types, *n_prime, aut.as_deref(), *group_order)
        }
        Command::VerifyDatum { p, sigma } => run_verify(*p, sigma),
        Command::EnumerateSignatures { p, max_new, any_denominator } => run_enumerate(*p, *max_new, *any_denominator),
        Command::TreeCheck { input } => run_tree(input),
        Command::TailNormalize { input, p, m, a, coeffs } => {
            let doc = match (input, p, m, a, coeffs) {
                (Some(path), None, None, None, None) => {
                    serde_json::from_str::<TailDoc>(&read(path)?).map_err(json_error)?
                }
                (None, Some(p), Some(m), Some(a), Some(c)) => TailDoc {
                    p: *p,
                    m: *m,
                    a: *a,
                    coeffs: parse_list(c, |s| s.parse::<i64>().map_err(|_| format!("bad coefficient {s:?}")))?,
                },
                _ => return Err(CliError::Input("give either --input or all of --p --m --a --coeffs".into())),
            };
            let echo = json!({ "p": doc.p, "m": doc.m, "a": doc.a, "coeffs": doc.coeffs });
            run_tail(doc, echo)
        }
        Command::GermReduce { p, m, h, ratio, wbar } => run_germ(*p, *m, *h, ratio, *wbar),
    }
}

/// Runs one command line (including the program name) to completion.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let text = e.render().to_string();
            let (stdout, stderr) = if code == 0 { (text, String::new()) } else { (String::new(), text) };
            return Outcome { stdout, stderr, code };
        }
    };
    match dispatch(&cli) {
        Ok((report, code)) => {
            let mut text = serde_json::to_string_pretty(&report).expect("serializable");
            text.push('\n');
            if let Some(path) = &cli.out {
                if let Err(e) = std::fs::write(path, &text) {
                    return Outcome { stdout: String::new(), stderr: format!("cannot write {}: {e}\n", path.display()), code: 2 };
                }
                return Outcome { stdout: String::new(), stderr: String::new(), code };
            }
            Outcome { stdout: text, stderr: String::new(), code }
        }
        Err(e) => Outcome { stdout: String::new(), stderr: format!("error: {e}\n"), code: 2 },
    }
}
