//! Schreier–Sims with the fixed base `0, 1, .., n-1`.

use super::perm::Perm;

#[derive(Clone, Debug)]
struct Level {
    gens: Vec<Perm>,
    /// `trans[x] = u` with `u(i) = x`, for `x` in the orbit of the base point `i`.
    trans: Vec<Option<Perm>>,
}

/// A permutation group given by generators, with a stabilizer chain.
#[derive(Clone, Debug)]
pub struct PermGroup {
    n: usize,
    generators: Vec<Perm>,
    levels: Vec<Level>,
}

impl PermGroup {
    pub fn new(n: usize, generators: &[Perm]) -> Self {
        let mut g = PermGroup {
            n,
            generators: generators.to_vec(),
            levels: (0..n).map(|_| Level { gens: Vec::new(), trans: Vec::new() }).collect(),
        };
        for s in generators {
            if let Some(j) = first_moved(s) {
                g.levels[j].gens.push(s.clone());
            }
        }
        g.complete();
        g
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    fn gens_from(&self, i: usize) -> Vec<Perm> {
        self.levels[i..].iter().flat_map(|l| l.gens.iter().cloned()).collect()
    }

    fn orbit(&mut self, i: usize) {
        let gens = self.gens_from(i);
        let mut trans: Vec<Option<Perm>> = vec![None; self.n];
        trans[i] = Some(Perm::identity(self.n));
        let mut queue = vec![i];
        while let Some(x) = queue.pop() {
            let u = trans[x].clone().expect("orbit point");
            for s in &gens {
                let y = s.apply(x);
                if trans[y].is_none() {
                    trans[y] = Some(u.then(s));
                    queue.push(y);
                }
            }
        }
        self.levels[i].trans = trans;
    }

    /// Strips `h` through levels `from..`; returns the residue and its level.
    fn sift(&self, mut h: Perm, from: usize) -> Option<(Perm, usize)> {
        for j in from..self.n {
            let x = h.apply(j);
            match &self.levels[j].trans[x] {
                Some(u) => h = h.then(&u.inverse()),
                None => return Some((h, j)),
            }
        }
        if h.is_identity() {
            None
        } else {
            Some((h, self.n))
        }
    }

    fn complete(&mut self) {
        'outer: loop {
            for i in (0..self.n).rev() {
                self.orbit(i);
                let gens = self.gens_from(i);
                for x in 0..self.n {
                    let Some(u) = self.levels[i].trans[x].clone() else { continue };
                    for s in &gens {
                        let y = s.apply(x);
                        let uy = self.levels[i].trans[y].as_ref().expect("closed orbit");
                        let h = u.then(s).then(&uy.inverse());
                        if let Some((r, _)) = self.sift(h, i + 1) {
                            let j = first_moved(&r).expect("nontrivial residue");
                            self.levels[j].gens.push(r);
                            continue 'outer;
                        }
                    }
                }
            }
            return;
        }
    }

    pub fn order(&self) -> u128 {
        self.levels
            .iter()
            .map(|l| l.trans.iter().filter(|t| t.is_some()).count() as u128)
            .product()
    }

    pub fn contains(&self, g: &Perm) -> bool {
        g.degree() == self.n && self.sift(g.clone(), 0).is_none()
    }

    pub fn orbit_of(&self, x: usize) -> Vec<usize> {
        let mut seen = vec![false; self.n];
        seen[x] = true;
        let mut queue = vec![x];
        while let Some(y) = queue.pop() {
            for s in &self.generators {
                let z = s.apply(y);
                if !seen[z] {
                    seen[z] = true;
                    queue.push(z);
                }
            }
        }
        (0..self.n).filter(|&i| seen[i]).collect()
    }

    pub fn is_transitive(&self) -> bool {
        self.orbit_of(0).len() == self.n
    }

    /// Transitive with no block system other than the trivial ones.
    pub fn is_primitive(&self) -> bool {
        if !self.is_transitive() {
            return false;
        }
        (1..self.n).all(|b| self.minimal_block(b).len() == self.n)
    }

    /// Smallest block containing `0` and `b`.
    fn minimal_block(&self, b: usize) -> Vec<usize> {
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let nxt = p[y];
                p[y] = r;
                y = nxt;
            }
            r
        }
        let mut queue = vec![(0usize, b)];
        let (r0, rb) = (find(&mut parent, 0), find(&mut parent, b));
        parent[rb] = r0;
        while let Some((x, y)) = queue.pop() {
            for s in &self.generators {
                let (a, c) = (find(&mut parent, s.apply(x)), find(&mut parent, s.apply(y)));
                if a != c {
                    parent[c] = a;
                    queue.push((s.apply(x), s.apply(y)));
                }
            }
        }
        let r = find(&mut parent, 0);
        (0..self.n).filter(|&x| find(&mut parent, x) == r).collect()
    }

    /// All elements, in a fixed order. Only sensible for small groups.
    pub fn for_each_element<F: FnMut(&Perm) -> bool>(&self, mut f: F) {
        let reps: Vec<Vec<Perm>> = self
            .levels
            .iter()
            .map(|l| l.trans.iter().flatten().cloned().collect())
            .collect();
        fn rec<F: FnMut(&Perm) -> bool>(reps: &[Vec<Perm>], i: usize, acc: &Perm, f: &mut F) -> bool {
            if i == reps.len() {
                return f(acc);
            }
            for u in &reps[i] {
                if !rec(reps, i + 1, &u.then(acc), f) {
                    return false;
                }
            }
            true
        }
        rec(&reps, 0, &Perm::identity(self.n), &mut f);
    }
}

fn first_moved(g: &Perm) -> Option<usize> {
    (0..g.degree()).find(|&i| g.apply(i) != i)
}
