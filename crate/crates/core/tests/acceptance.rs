//! Acceptance suite: one line per criterion, nonzero exit on any failure.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use stabred_core::algebra::{cartier_rational, FiniteField, Fq, Poly, RationalDifferential, RationalFunction};
use stabred_core::deformation::{build_normalized_special, check_local_vcf_datum, critical_invariants};
use stabred_core::dessins::{
    cover_genus, enumerate_nielsen, n_prime_bounds, reduction_signature, CycleType, DessinClass, Perm,
};
use stabred_core::lifting::{moduli_degree, stable_field_degree, SpecialGDatumSummary};
use stabred_core::superelliptic::DifferentialKind;
use stabred_core::tail::{
    apply_chain, build_tail, extend_to, germ_reduction, new_tail_types, normalize_tail, tail_from_coeffs,
    GermVerdict, Substitution, TailCover, TailError,
};
use stabred_core::tree::{
    classify_structure, enumerate_admissible_trees, global_vcf, validate_tree, EnumerationRules, LeafKind,
    ReductionTree, Structure, TreeEdge, Vertex, VertexKind,
};
use stabred_core::Q;

type Outcome = Result<String, String>;

fn q(n: i64, d: i64) -> Q {
    Q::new(n, d)
}

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn types(s: [&str; 3]) -> [CycleType; 3] {
    s.map(|t| CycleType::parse(t, 7).unwrap())
}

/// All permutations of `0..n` by Heap's algorithm.
fn all_perms(n: usize) -> Vec<Perm> {
    let mut a: Vec<u8> = (0..n as u8).collect();
    let mut c = vec![0usize; n];
    let mut out = vec![Perm(a.clone())];
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            out.push(Perm(a.clone()));
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

fn transitive(a: &Perm, b: &Perm) -> bool {
    let n = a.degree();
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut st = vec![0];
    while let Some(x) = st.pop() {
        for y in [a.apply(x), b.apply(x)] {
            if !seen[y] {
                seen[y] = true;
                st.push(y);
            }
        }
    }
    seen.iter().all(|&s| s)
}

/// Class count from a raw pair count: `S_7` acts freely on generating pairs
/// of `S_7`, so classes = |class(g0)| * #{g1} / 7!.
fn brute_force_class_count(s7: &[Perm], ts: &[CycleType; 3]) -> u128 {
    let g0 = ts[0].representative();
    let class0 = s7.iter().filter(|g| g.cycle_type() == ts[0]).count() as u128;
    let mut k = 0u128;
    for g1 in s7.iter().filter(|g| g.cycle_type() == ts[1]) {
        let ginf = g0.then(g1).inverse();
        if ginf.cycle_type() == ts[2] && transitive(&g0, g1) {
            let grp = stabred_core::dessins::PermGroup::new(7, &[g0.clone(), g1.clone()]);
            if grp.order() == 5040 {
                k += 1;
            }
        }
    }
    class0 * k / 5040
}

fn criterion_1(s7: &[Perm]) -> Outcome {
    let mut parts = Vec::new();
    for (ts, want) in [(types(["6", "6", "2-2"]), 4usize), (types(["2-3", "2-3", "7"]), 9)] {
        let t = Instant::now();
        let v = enumerate_nielsen(7, &ts, Some(5040)).map_err(|e| e.to_string())?;
        let el = t.elapsed();
        check(v.len() == want, format!("{}: {} classes, expected {want}", fmt_types(&ts), v.len()))?;
        check(el < Duration::from_secs(60), format!("took {el:?}"))?;
        let oracle = brute_force_class_count(s7, &ts);
        check(oracle == want as u128, format!("pair count oracle gives {oracle}"))?;
        for d in &v {
            check(d.g0.then(&d.g1).then(&d.ginf).is_identity() && d.transitive, "bad triple")?;
        }
        parts.push(format!("{} -> {} in {:.2?}", fmt_types(&ts), v.len(), el));
    }
    Ok(parts.join("; "))
}

fn fmt_types(ts: &[CycleType; 3]) -> String {
    format!("({},{},{})", ts[0], ts[1], ts[2])
}

fn criterion_2(classes: &[(Vec<DessinClass>, [CycleType; 3])]) -> Outcome {
    let expected = [vec![q(1, 6), q(1, 6), q(2, 3)], vec![q(1, 2), q(1, 2), Q::zero()]];
    for ((cl, ts), want) in classes.iter().zip(&expected) {
        let s = reduction_signature(7, ts).map_err(|e| e.to_string())?;
        check(&s.entries == want, format!("signature {:?}", s.entries))?;
        check(cover_genus(7, ts).map_err(|e| e.to_string())? == 0, "genus")?;
        // recount cycles on the actual triples
        for d in cl {
            let cyc = [&d.g0, &d.g1, &d.ginf].map(|g| g.cycles().len() as i64);
            let sig: Vec<Q> = cyc.iter().map(|c| q(c - 1, 6)).collect();
            check(&sig == want, "triple cycle count disagrees")?;
            check(-14 + cyc.iter().map(|c| 7 - c).sum::<i64>() == -2, "triple genus")?;
        }
    }
    Ok("(1/6,1/6,2/3) and (1/2,1/2,0), genus 0 on every triple".into())
}

fn criterion_3() -> Outcome {
    let mut parts = Vec::new();
    for sig in [vec![q(1, 6), q(1, 6), q(2, 3)], vec![q(1, 2), q(1, 2), Q::zero()]] {
        let ns = build_normalized_special(7, &sig).map_err(|e| e.to_string())?;
        let dd = &ns.datum;
        let kind = dd.curve.classify_differential(&dd.omega).map_err(|e| e.to_string())?;
        check(kind == DifferentialKind::Logarithmic, format!("{kind:?}"))?;
        let fixed = dd.curve.cartier(&dd.omega).map_err(|e| e.to_string())?;
        check(fixed == dd.omega, "C(omega) != omega")?;
        let mut got: Vec<Q> = critical_invariants(dd).map_err(|e| e.to_string())?.iter().map(|c| c.sigma).collect();
        got.sort();
        let mut want = sig.clone();
        want.sort();
        check(got == want, format!("critical sigma {got:?}"))?;
        let vcf = check_local_vcf_datum(dd).map_err(|e| e.to_string())?;
        check(vcf.passed && vcf.sum == Q::from_integer(-2), format!("vcf sum {}", vcf.sum))?;
        parts.push(format!(
            "m={} eps={} in F_7^{}",
            ns.m,
            ns.epsilon_display(),
            ns.field.degree()
        ));
    }
    Ok(parts.join("; "))
}

/// `[N:C]` for the group generated by a 7-cycle, by scanning all of `S_7`.
fn brute_normalizer_index(s7: &[Perm], group: &stabred_core::dessins::PermGroup) -> u64 {
    let c = Perm::from_cycles(7, &[(0..7).collect()]);
    let powers: Vec<Perm> = (0..7)
        .scan(Perm::identity(7), |acc, _| {
            let cur = acc.clone();
            *acc = acc.then(&c);
            Some(cur)
        })
        .collect();
    let (mut n, mut z) = (0u64, 0u64);
    for g in s7.iter().filter(|g| group.contains(g)) {
        let k = c.conjugate(g);
        if powers.contains(&k) {
            n += 1;
        }
        if k == c {
            z += 1;
        }
    }
    n / z
}

fn criterion_4(s7: &[Perm], classes: &[(Vec<DessinClass>, [CycleType; 3])]) -> Outcome {
    let e = |x: stabred_core::lifting::LiftingError| x.to_string();
    check(stable_field_degree(7, &[1, 1, 2]).map_err(e)? == 12, "N for [1,1,2]")?;
    check(stable_field_degree(7, &[1, 1]).map_err(e)? == 6, "N for [1,1]")?;
    let mut s15 = SpecialGDatumSummary::new(7, vec![1, 1], vec![2, 2]);
    s15.n_prime = Some(2);
    let n15: Vec<u64> = moduli_degree(&s15).map_err(e)?.iter().map(|c| c.n_prime_degree).collect();
    check(n15 == vec![3], format!("N' = {n15:?}"))?;
    let mut s14 = SpecialGDatumSummary::new(7, vec![1, 1, 2], vec![6, 6, 3]);
    s14.aut_inner_orders[2] = vec![1, 2];
    s14.n_prime = Some(3);
    let mut n14: Vec<u64> = moduli_degree(&s14).map_err(e)?.iter().map(|c| c.n_prime_degree).collect();
    n14.sort();
    check(n14 == vec![2, 4], format!("N' = {n14:?}"))?;
    let g = classes[0].0[0].group();
    let b14 = n_prime_bounds(7, &g, &[6, 6, 3], true).map_err(|e| e.to_string())?;
    let b15 = n_prime_bounds(7, &classes[1].0[0].group(), &[2, 2], true).map_err(|e| e.to_string())?;
    check(b14 == (3, 6) && b15 == (2, 6), format!("bounds {b14:?} {b15:?}"))?;
    let brute = brute_normalizer_index(s7, &g);
    check(brute == 6, format!("brute force [N:C] = {brute}"))?;
    Ok(format!("N = 12, 6; N' = 3 and {{2,4}}; n' bounds {b14:?}, {b15:?}; [N:C] = {brute} by scan"))
}

/// Interior genus data and leaf values satisfying every vertex sum.
fn random_tree(rng: &mut ChaCha8Rng) -> Option<ReductionTree> {
    let dens = [2i64, 3, 4, 6, 12];
    let k = rng.gen_range(1..=4);
    let mut vertices = vec![Vertex { kind: VertexKind::Root, genus: 0 }];
    let mut parent = vec![usize::MAX];
    for i in 1..k {
        vertices.push(Vertex { kind: VertexKind::Interior, genus: if rng.gen_bool(0.2) { 1 } else { 0 } });
        parent.push(rng.gen_range(0..i));
    }
    let leaf_val = |rng: &mut ChaCha8Rng| -> (LeafKind, Q) {
        let d = dens[rng.gen_range(0..dens.len())];
        let a = rng.gen_range(1..d);
        match rng.gen_range(0..20) {
            0..=8 => (LeafKind::Prim, q(a, d)),
            9..=15 => (LeafKind::New, q(a, d) + Q::one()),
            _ => (LeafKind::Wild, Q::zero()),
        }
    };
    let mut edges: Vec<TreeEdge> = Vec::new();
    let mut out_sum = vec![Q::zero(); k];
    let push_leaf = |vertices: &mut Vec<Vertex>, edges: &mut Vec<TreeEdge>, v: usize, kind: LeafKind, s: Q| {
        vertices.push(Vertex { kind: VertexKind::Leaf(kind), genus: 0 });
        edges.push(TreeEdge { source: v, target: vertices.len() - 1, m: *s.denom() as u64, h: *s.numer(), declared_reverse: None });
    };
    for v in 0..k {
        let n = if v == 0 { rng.gen_range(0..=2) } else { rng.gen_range(1..=3) };
        for _ in 0..n {
            let (kind, s) = leaf_val(rng);
            out_sum[v] += s - Q::one();
            push_leaf(&mut vertices, &mut edges, v, kind, s);
        }
    }
    for v in (1..k).rev() {
        let up = Q::from_integer(2 * vertices[v].genus as i64 - 2) - out_sum[v] + Q::one();
        let down = -up;
        let p = parent[v];
        out_sum[p] += down - Q::one();
        let reverse = if rng.gen_bool(0.3) { Some((*down.denom() as u64, -*down.numer())) } else { None };
        edges.push(TreeEdge { source: p, target: v, m: *down.denom() as u64, h: *down.numer(), declared_reverse: reverse });
    }
    // one more root leaf closes the root sum
    let two = Q::from_integer(2);
    let mut s = (-Q::one() - out_sum[0]) % two;
    if s < Q::zero() {
        s += two;
    }
    if s == Q::one() {
        return None;
    }
    let g2 = s - Q::one() + out_sum[0] + two;
    if g2 < Q::zero() || !(g2 / two).is_integer() {
        return None;
    }
    vertices[0].genus = (g2 / two).to_integer() as u64;
    let kind = if s.is_zero() {
        LeafKind::Wild
    } else if s < Q::one() {
        LeafKind::Prim
    } else {
        LeafKind::New
    };
    push_leaf(&mut vertices, &mut edges, 0, kind, s);
    Some(ReductionTree { vertices, edges, root: 0, three_point: false })
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0005);
    let (mut good, mut mutated) = (0, 0);
    while good < 1000 {
        let Some(t) = random_tree(&mut rng) else { continue };
        let v = validate_tree(&t).map_err(|e| e.to_string())?;
        check(v.passed(), format!("consistent tree rejected: {:?}", v.violations))?;
        let g = global_vcf(&t).map_err(|e| e.to_string())?;
        check(g.passed() && g.residual().is_zero(), "global identity fails on consistent tree")?;
        good += 1;
        // perturb one edge
        let mut t2 = t.clone();
        let i = rng.gen_range(0..t2.edges.len());
        let e = &mut t2.edges[i];
        let delta = q(if rng.gen_bool(0.5) { 1 } else { -1 }, [1i64, 2, 3, 6][rng.gen_range(0..4)]);
        let s = e.sigma() + delta;
        e.m = *s.denom() as u64;
        e.h = *s.numer();
        if e.declared_reverse.is_some() {
            // keep the declared reverse consistent so only the sums can catch it
            e.declared_reverse = Some((*s.denom() as u64, -*s.numer()));
        }
        let v2 = validate_tree(&t2).map_err(|e| e.to_string())?;
        let g2 = global_vcf(&t2).map_err(|e| e.to_string())?;
        check(!v2.passed(), "mutated tree validates")?;
        check(!g2.passed(), "mutated tree passes the global identity")?;
        mutated += 1;
    }
    let el = start.elapsed();
    check(el < Duration::from_secs(10), format!("took {el:?}"))?;
    Ok(format!("{good} consistent trees pass with zero residual, {mutated} mutants fail both checks, {el:.2?}"))
}

fn random_poly(rng: &mut ChaCha8Rng, f: &Arc<FiniteField>, deg: usize) -> Poly {
    let q = f.order();
    Poly::new(f.clone(), (0..=deg).map(|_| Fq(rng.gen_range(0..q))).collect())
}

fn random_function(rng: &mut ChaCha8Rng, f: &Arc<FiniteField>) -> RationalFunction {
    loop {
        let (dn, dd) = (rng.gen_range(0..5), rng.gen_range(0..4));
        let num = random_poly(rng, f, dn);
        let den = random_poly(rng, f, dd);
        if num.is_zero() || den.is_zero() {
            continue;
        }
        return RationalFunction::new(num, den).expect("nonzero denominator");
    }
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0006);
    let mut parts = Vec::new();
    for (p, s) in [(7u32, 1u32), (3, 2)] {
        let f = FiniteField::get(p, s).map_err(|e| e.to_string())?;
        for _ in 0..500 {
            let u = random_function(&mut rng, &f);
            let v = random_function(&mut rng, &f);
            if let Some(lw) = RationalDifferential::logarithmic(&u) {
                check(cartier_rational(&lw) == lw, "C(du/u) != du/u")?;
            }
            check(cartier_rational(&RationalDifferential::exact(&v)).is_zero(), "C(dv) != 0")?;
            let w1 = RationalDifferential::new(u.clone());
            let w2 = RationalDifferential::new(v.clone());
            check(
                cartier_rational(&w1.add(&w2)) == cartier_rational(&w1).add(&cartier_rational(&w2)),
                "additivity",
            )?;
            let a = Fq(rng.gen_range(0..f.order()));
            let lhs = cartier_rational(&w1.scale(f.pow_u(a, p as u64)));
            check(lhs == cartier_rational(&w1).scale(a), "C(a^p w) != a C(w)")?;
        }
        parts.push(format!("F_{}^{}: 500 samples", p, s));
    }
    Ok(parts.join(", "))
}

/// Base `p` digits of the `p`-adic integer `n/m`.
fn padic_digits(mut n: i64, m: i64, p: i64, count: usize) -> Vec<i64> {
    let minv = (1..p).find(|x| (x * m).rem_euclid(p) == 1).expect("m prime to p");
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let d = (n.rem_euclid(p) * minv).rem_euclid(p);
        out.push(d);
        n = (n - d * m) / p;
    }
    out
}

/// `binom(r, j) mod p` by Lucas' theorem on the digits of `r`.
fn lucas(r: &[i64], mut j: i64, p: i64) -> i64 {
    let mut acc = 1i64;
    let mut i = 0;
    while j > 0 {
        let (ri, ji) = (r[i], j % p);
        if ji > ri {
            return 0;
        }
        let mut b = 1i64;
        for t in 0..ji {
            b = b * (ri - t) % p;
        }
        let mut fact = 1i64;
        for t in 1..=ji {
            fact = fact * t % p;
        }
        let inv = (1..p).find(|x| (x * fact) % p == 1).unwrap();
        acc = acc * b % p * inv % p;
        j /= p;
        i += 1;
    }
    acc
}

/// Rewrites the original equation in the variable `u = 1/z` after the
/// whole chain and compares with `z^h`, coefficient by coefficient.
fn back_substitute(orig: &TailCover, out: &TailCover, chain: &[Substitution]) -> Result<(), String> {
    let f = out.field.clone();
    let p = f.characteristic() as i64;
    let (m, a) = (orig.m as i64, orig.a);
    let n = orig.precision() as i64;
    let (mut c, mut d, mut gamma) = (Fq::ONE, Fq::ZERO, Fq::ONE);
    let mut es: Vec<Fq> = Vec::new();
    for s in chain {
        match s {
            Substitution::Affine { c: c1, d: d1, gamma: g1 } => (c, d, gamma) = (*c1, *d1, *g1),
            Substitution::ArtinSchreier { e, .. } => es = e.clone(),
        }
    }
    let lo = -m;
    let hi = m * (n - 1);
    let mut ser = vec![Fq::ZERO; (hi - lo) as usize];
    let add = |ser: &mut Vec<Fq>, e: i64, v: Fq| {
        if e >= lo && e < hi {
            let i = (e - lo) as usize;
            ser[i] = f.add(ser[i], v);
        }
    };
    let ga = f.pow(gamma, a).map_err(|e| e.to_string())?;
    let cinv = f.inv(c).map_err(|e| e.to_string())?;
    for (k, &b) in orig.coeffs.iter().enumerate() {
        let k = k as i64;
        let scalar = f.mul(ga, f.mul(b, f.pow(cinv, k - 1).map_err(|e| e.to_string())?));
        let digits = padic_digits(a + m * (1 - k), m, p, 24);
        let mut j = 0i64;
        while m * (k - 1) + m * j < hi {
            let bin = f.from_int(lucas(&digits, j, p));
            let term = f.mul(scalar, f.mul(bin, f.pow_u(d, j as u64)));
            add(&mut ser, m * (k - 1) + m * j, term);
            j += 1;
        }
    }
    for (k, &e) in es.iter().enumerate() {
        let k = k as i64;
        add(&mut ser, m * k * p - a * (p - 1), f.neg(f.pow_u(e, p as u64)));
        add(&mut ser, m * k, e);
    }
    for (i, &v) in ser.iter().enumerate() {
        let e = i as i64 + lo;
        let want = if e == -m { Fq::ONE } else { Fq::ZERO };
        if v != want {
            return Err(format!("u^{e}: {} != {}", f.display(v), f.display(want)));
        }
    }
    Ok(())
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0007);
    // no new tail types exist at p = 3
    let p3_new = new_tail_types(3, 40);
    check(p3_new.is_empty(), format!("unexpected new tails at p = 3: {p3_new:?}"))?;
    let mut counts = std::collections::BTreeMap::new();
    let mut extended = 0;
    let mut done = 0;
    while done < 100 {
        let p: u32 = [3, 5, 7][done % 3];
        let (m, a) = if p == 3 {
            // primitive tails: h < m, m | 2h, 3 does not divide m h
            let opts: Vec<(u64, i64)> = (2..=8u64)
                .flat_map(|m| (1..m as i64).map(move |h| (m, h)))
                .filter(|&(m, h)| m % 3 != 0 && h % 3 != 0 && (2 * h) % m as i64 == 0)
                .map(|(m, h)| (m, h - m as i64))
                .collect();
            opts[rng.gen_range(0..opts.len())]
        } else {
            let opts = new_tail_types(p, 12);
            opts[rng.gen_range(0..opts.len())]
        };
        let h = m as i64 + a;
        let len = rng.gen_range(2..=(2 * h as usize + 2));
        let mut coeffs: Vec<i64> = (0..len).map(|_| rng.gen_range(0..p as i64)).collect();
        coeffs[0] = rng.gen_range(1..p as i64);
        let t = tail_from_coeffs(p, m, a, &coeffs).map_err(|e| e.to_string())?;
        let n = match normalize_tail(&t) {
            Ok(n) => n,
            Err(TailError::Algebra(_)) => continue, // root field beyond the supported size
            Err(e) => return Err(format!("{e} on p={p} m={m} a={a} {coeffs:?}")),
        };
        check(n.tail.is_canonical(), format!("not canonical: p={p} m={m} a={a} {coeffs:?}"))?;
        let lifted = extend_to(&t, n.tail.field.degree()).map_err(|e| e.to_string())?;
        let replay = apply_chain(&lifted, &n.chain).map_err(|e| e.to_string())?;
        check(replay == n.tail, "chain replay differs")?;
        back_substitute(&lifted, &n.tail, &n.chain).map_err(|e| format!("p={p} m={m} a={a} {coeffs:?}: {e}"))?;
        check(((p as i64 - 1) * h) % m as i64 == 0, "Hasse-Arf")?;
        if n.tail.field.degree() > 1 {
            extended += 1;
        }
        *counts.entry(p).or_insert(0) += 1;
        done += 1;
    }
    // acceptance of build_tail agrees with the divisibility
    for p in [3u32, 5, 7] {
        for m in 1..=12u64 {
            for h in 1..=30i64 {
                let r = build_tail(p, m, h);
                let coprime = m % p as u64 != 0 && h % p as i64 != 0;
                let ha = ((p as i64 - 1) * h) % m as i64 == 0;
                match r {
                    Ok(_) => check(coprime && ha, format!("accepted ({p},{m},{h})"))?,
                    Err(TailError::HasseArfViolation { .. }) => check(coprime && !ha, "wrong Hasse-Arf error")?,
                    Err(TailError::NotCoprime { .. }) => check(!coprime, "wrong coprimality error")?,
                    Err(e) => return Err(e.to_string()),
                }
            }
        }
    }
    // germ threshold
    let mut flips = 0;
    for p in [5u32, 7] {
        for (m, a) in new_tail_types(p, 12) {
            let h = m as i64 + a;
            let t = q(p as i64 * m as i64, (p as i64 - 1) * h);
            let mut ratios: Vec<Q> = (1..=40).map(|k| q(k, 16)).collect();
            ratios.extend([t, t - q(1, 1000), t + q(1, 1000)]);
            ratios.sort();
            let mut seen_good = false;
            for r in ratios {
                let good = matches!(
                    germ_reduction(p, m, h, r, None).map_err(|e| e.to_string())?,
                    GermVerdict::GoodReduction { .. }
                );
                check(!(seen_good && !good), "verdict not monotone")?;
                check(good == (r >= t), format!("flip not at threshold for ({p},{m},{h}) at {r}"))?;
                seen_good |= good;
            }
            flips += 1;
        }
    }
    Ok(format!(
        "{done} tails normalized and back-substituted (per p: {counts:?}; p=3 has no new tail types, primitive ones used; {extended} needed a field extension); germ threshold exact on {flips} types"
    ))
}

fn chain_trees() -> Vec<ReductionTree> {
    let leaf = |k| Vertex { kind: VertexKind::Leaf(k), genus: 0 };
    let e = |s: usize, t: usize, v: Q| TreeEdge { source: s, target: t, m: *v.denom() as u64, h: *v.numer(), declared_reverse: None };
    let root = Vertex { kind: VertexKind::Root, genus: 0 };
    let mid = Vertex { kind: VertexKind::Interior, genus: 0 };
    vec![
        // root -- v -- new tail
        ReductionTree {
            vertices: vec![root.clone(), mid.clone(), leaf(LeafKind::New), leaf(LeafKind::Prim), leaf(LeafKind::Prim), leaf(LeafKind::Prim)],
            edges: vec![e(1, 2, q(4, 3)), e(1, 3, q(1, 3)), e(0, 1, q(2, 3)), e(0, 4, q(1, 6)), e(0, 5, q(1, 6))],
            root: 0,
            three_point: true,
        },
        // two primitive tails on v, one on the root
        ReductionTree {
            vertices: vec![root, mid, leaf(LeafKind::Prim), leaf(LeafKind::Prim), leaf(LeafKind::Prim)],
            edges: vec![e(1, 2, q(1, 6)), e(1, 3, q(1, 6)), e(0, 1, q(-2, 3)), e(0, 4, q(2, 3))],
            root: 0,
            three_point: true,
        },
    ]
}

fn criterion_8() -> Outcome {
    let mut total = 0;
    for pm1 in [2u64, 4, 6] {
        let trees = enumerate_admissible_trees(pm1, 5, 6, EnumerationRules::default()).map_err(|e| e.to_string())?;
        for t in &trees {
            let s = classify_structure(t).map_err(|e| e.to_string())?;
            check(
                matches!(s, Structure::Star | Structure::Exceptional1 | Structure::Exceptional2),
                format!("emitted {s:?}"),
            )?;
        }
        if pm1 == 6 {
            let star = ReductionTree::star(&[q(1, 6), q(1, 6), q(2, 3)], true);
            let want = leaf_multiset(&star);
            check(trees.iter().any(|t| leaf_multiset(t) == want && t.vertices.len() == 4), "(1/6,1/6,2/3) star missing")?;
        }
        total += trees.len();
    }
    let loose = EnumerationRules { datum_type: false, ..EnumerationRules::default() };
    let inconsistent = enumerate_admissible_trees(6, 5, 6, loose)
        .map_err(|e| e.to_string())?
        .iter()
        .filter(|t| matches!(classify_structure(t), Ok(Structure::Inconsistent(_))))
        .count();
    check(inconsistent > 0, "datum rule has no effect")?;
    for t in chain_trees() {
        check(validate_tree(&t).map_err(|e| e.to_string())?.passed(), "chain tree should be locally valid")?;
        check(
            matches!(classify_structure(&t).map_err(|e| e.to_string())?, Structure::Inconsistent(_)),
            "chain counterexample accepted",
        )?;
    }
    Ok(format!(
        "{total} trees for p-1 in {{2,4,6}}, none Inconsistent ({inconsistent} appear without the datum rule); 2 chain counterexamples rejected"
    ))
}

fn leaf_multiset(t: &ReductionTree) -> Vec<Q> {
    let mut v: Vec<Q> = t.leaves().map(|(l, _)| t.leaf_sigma(l).unwrap()).collect();
    v.sort();
    v
}

fn main() -> ExitCode {
    let s7 = all_perms(7);
    let classes: Vec<(Vec<DessinClass>, [CycleType; 3])> = [types(["6", "6", "2-2"]), types(["2-3", "2-3", "7"])]
        .into_iter()
        .map(|ts| (enumerate_nielsen(7, &ts, Some(5040)).unwrap_or_default(), ts))
        .collect();
    let results: Vec<(u32, &str, Outcome)> = vec![
        (1, "Nielsen counts", criterion_1(&s7)),
        (2, "signatures", if classes.iter().all(|c| !c.0.is_empty()) { criterion_2(&classes) } else { Err("no classes".into()) }),
        (3, "special datum realization", criterion_3()),
        (4, "degree formulas", if classes.iter().all(|c| !c.0.is_empty()) { criterion_4(&s7, &classes) } else { Err("no classes".into()) }),
        (5, "vanishing cycle identities", criterion_5()),
        (6, "Cartier operator", criterion_6()),
        (7, "tail normalization", criterion_7()),
        (8, "tree shapes", criterion_8()),
    ];
    let mut ok = true;
    for (i, name, r) in &results {
        match r {
            Ok(msg) => println!("criterion {i} ({name}): PASS - {msg}"),
            Err(msg) => {
                ok = false;
                println!("criterion {i} ({name}): FAIL - {msg}");
            }
        }
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
