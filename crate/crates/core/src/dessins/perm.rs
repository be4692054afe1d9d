use std::fmt;
use std::str::FromStr;

use super::DessinError;

/// A permutation of `{0, .., n-1}` stored as its image list.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(pub Vec<u8>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n as u8).collect())
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn apply(&self, x: usize) -> usize {
        self.0[x] as usize
    }

    /// The product applying `self` first, then `other`.
    pub fn then(&self, other: &Perm) -> Perm {
        Perm(self.0.iter().map(|&x| other.0[x as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut v = vec![0u8; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            v[x as usize] = i as u8;
        }
        Perm(v)
    }

    /// `c^-1 self c`.
    pub fn conjugate(&self, c: &Perm) -> Perm {
        let mut v = vec![0u8; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            v[c.0[i] as usize] = c.0[x as usize];
        }
        Perm(v)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut c = vec![s];
            seen[s] = true;
            let mut x = self.apply(s);
            while x != s {
                seen[x] = true;
                c.push(x);
                x = self.apply(x);
            }
            out.push(c);
        }
        out
    }

    pub fn cycle_type(&self) -> CycleType {
        let mut parts: Vec<usize> = self.cycles().iter().map(|c| c.len()).collect();
        parts.sort_unstable_by(|a, b| b.cmp(a));
        CycleType { parts }
    }

    pub fn order(&self) -> u64 {
        use num_integer::Integer;
        self.cycles().iter().fold(1u64, |a, c| a.lcm(&(c.len() as u64)))
    }

    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Perm {
        let mut v: Vec<u8> = (0..n as u8).collect();
        for c in cycles {
            for k in 0..c.len() {
                v[c[k]] = c[(k + 1) % c.len()] as u8;
            }
        }
        Perm(v)
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Cycle notation on `1..=n`, fixed points omitted.
impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cs: Vec<_> = self.cycles().into_iter().filter(|c| c.len() > 1).collect();
        if cs.is_empty() {
            return write!(f, "()");
        }
        for c in cs {
            let s: Vec<String> = c.iter().map(|x| (x + 1).to_string()).collect();
            write!(f, "({})", s.join(","))?;
        }
        Ok(())
    }
}

/// A partition, parts in decreasing order, fixed points included.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CycleType {
    pub parts: Vec<usize>,
}

impl CycleType {
    /// Parses `"2-3"`, listing nontrivial cycles; padded with fixed points to degree `n`.
    pub fn parse(s: &str, n: usize) -> Result<Self, DessinError> {
        let mut parts = Vec::new();
        for tok in s.trim().split('-') {
            let k = usize::from_str(tok.trim()).map_err(|_| DessinError::BadCycleType(s.to_string()))?;
            if k == 0 {
                return Err(DessinError::BadCycleType(s.to_string()));
            }
            if k > 1 {
                parts.push(k);
            }
        }
        let used: usize = parts.iter().sum();
        if used > n {
            return Err(DessinError::BadCycleType(format!("{s} does not fit in degree {n}")));
        }
        parts.extend(std::iter::repeat_n(1, n - used));
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(CycleType { parts })
    }

    pub fn degree(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn cycle_count(&self) -> usize {
        self.parts.len()
    }

    /// `(0 1 .. k-1)(k ..)..`, longest cycles first.
    pub fn representative(&self) -> Perm {
        let mut cycles = Vec::new();
        let mut next = 0;
        for &k in &self.parts {
            cycles.push((next..next + k).collect::<Vec<_>>());
            next += k;
        }
        Perm::from_cycles(self.degree(), &cycles)
    }

    /// Number of elements of the conjugacy class in `S_n`.
    pub fn class_size(&self) -> u128 {
        let n = self.degree() as u128;
        let fact = |k: u128| (1..=k).product::<u128>();
        let mut denom: u128 = 1;
        let mut i = 0;
        while i < self.parts.len() {
            let k = self.parts[i];
            let mut j = i;
            while j < self.parts.len() && self.parts[j] == k {
                j += 1;
            }
            let mult = (j - i) as u128;
            denom *= (k as u128).pow(mult as u32) * fact(mult);
            i = j;
        }
        fact(n) / denom
    }

    /// Calls `f` on every permutation with this cycle type.
    pub fn for_each_element<F: FnMut(&Perm)>(&self, mut f: F) {
        let n = self.degree();
        let mut img = vec![u8::MAX; n];
        let mut used = vec![false; n];
        // longest cycles first; a cycle is opened at the smallest unused point
        let mut lens = self.parts.clone();
        lens.retain(|&k| k > 1);
        fill(&lens, 0, &mut img, &mut used, n, &mut f, usize::MAX);
    }

    fn string(&self) -> String {
        let nontriv: Vec<String> = self.parts.iter().rev().filter(|&&k| k > 1).map(|k| k.to_string()).collect();
        if nontriv.is_empty() {
            "1".into()
        } else {
            nontriv.join("-")
        }
    }
}

impl fmt::Display for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.string())
    }
}

/// Places the cycles `lens[i..]`. Each cycle starts at its smallest point, and
/// cycles of equal length are opened at increasing starting points.
fn fill<F: FnMut(&Perm)>(
    lens: &[usize],
    i: usize,
    img: &mut Vec<u8>,
    used: &mut Vec<bool>,
    n: usize,
    f: &mut F,
    last_start: usize,
) {
    if i == lens.len() {
        let v: Vec<u8> = (0..n).map(|x| if img[x] == u8::MAX { x as u8 } else { img[x] }).collect();
        f(&Perm(v));
        return;
    }
    let k = lens[i];
    let lo = if i > 0 && lens[i - 1] == k { last_start + 1 } else { 0 };
    for start in lo..n {
        if used[start] {
            continue;
        }
        used[start] = true;
        let mut cyc = vec![start];
        extend_cycle(lens, i, k, &mut cyc, img, used, n, f);
        used[start] = false;
    }
}

#[allow(clippy::too_many_arguments)]
fn extend_cycle<F: FnMut(&Perm)>(
    lens: &[usize],
    i: usize,
    k: usize,
    cyc: &mut Vec<usize>,
    img: &mut Vec<u8>,
    used: &mut Vec<bool>,
    n: usize,
    f: &mut F,
) {
    if cyc.len() == k {
        for j in 0..k {
            img[cyc[j]] = cyc[(j + 1) % k] as u8;
        }
        fill(lens, i + 1, img, used, n, f, cyc[0]);
        for &x in cyc.iter() {
            img[x] = u8::MAX;
        }
        return;
    }
    for x in cyc[0] + 1..n {
        if used[x] {
            continue;
        }
        used[x] = true;
        cyc.push(x);
        extend_cycle(lens, i, k, cyc, img, used, n, f);
        cyc.pop();
        used[x] = false;
    }
}
