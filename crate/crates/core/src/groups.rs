//! Finite groups given by faithful permutation actions, stored by full
//! element enumeration.
//!
//! Elements are referred to by their index in the sorted element list; the
//! list is sorted lexicographically on one-line images, so the identity is
//! always element 0 and every derived choice (coset representatives, orbit
//! representatives) is reproducible.

use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::Error;

/// Zero based one-line notation: `p[i]` is the image of `i`.
pub type Perm = Vec<u32>;

/// Index of an element in its group's sorted element list.
pub type Elt = usize;

/// Largest group we are willing to enumerate.
pub const MAX_ORDER: usize = 50_000;

const TABLE_LIMIT: usize = 400;

#[derive(Clone, Debug)]
pub struct FiniteGroup {
    degree: usize,
    generators: Vec<Perm>,
    elements: Vec<Perm>,
    index: HashMap<Perm, Elt>,
    inverse: Vec<Elt>,
    table: Option<Vec<Elt>>,
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && self.elements == other.elements
    }
}
impl Eq for FiniteGroup {}

/// JSON form: degree and generators as one-based image arrays.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct GroupJson {
    pub degree: usize,
    pub generators: Vec<Vec<u32>>,
}

pub fn compose(a: &[u32], b: &[u32]) -> Perm {
    b.iter().map(|&x| a[x as usize]).collect()
}

pub fn invert(a: &[u32]) -> Perm {
    let mut r = vec![0; a.len()];
    for (i, &x) in a.iter().enumerate() {
        r[x as usize] = i as u32;
    }
    r
}

pub fn identity_perm(n: usize) -> Perm {
    (0..n as u32).collect()
}

fn is_perm(p: &[u32]) -> bool {
    let mut seen = vec![false; p.len()];
    for &x in p {
        match seen.get_mut(x as usize) {
            Some(s) if !*s => *s = true,
            _ => return false,
        }
    }
    true
}

impl FiniteGroup {
    /// Closure of the generators under composition.
    pub fn from_generators(degree: usize, generators: Vec<Perm>) -> Result<Self, Error> {
        for g in &generators {
            if g.len() != degree || !is_perm(g) {
                return Err(Error::Parse(format!("{g:?} is not a permutation of degree {degree}")));
            }
        }
        let id = identity_perm(degree);
        let mut seen: BTreeSet<Perm> = BTreeSet::new();
        seen.insert(id.clone());
        let mut queue = VecDeque::from([id]);
        while let Some(p) = queue.pop_front() {
            for g in &generators {
                let q = compose(g, &p);
                if seen.insert(q.clone()) {
                    if seen.len() > MAX_ORDER {
                        return Err(Error::Unsupported(format!(
                            "group order exceeds {MAX_ORDER}"
                        )));
                    }
                    queue.push_back(q);
                }
            }
        }
        let elements: Vec<Perm> = seen.into_iter().collect();
        let index: HashMap<Perm, Elt> =
            elements.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let inverse = elements.iter().map(|p| index[&invert(p)]).collect();
        let mut g = FiniteGroup { degree, generators, elements, index, inverse, table: None };
        if g.order() <= TABLE_LIMIT {
            let n = g.order();
            let mut t = Vec::with_capacity(n * n);
            for a in 0..n {
                for b in 0..n {
                    t.push(g.index[&compose(&g.elements[a], &g.elements[b])]);
                }
            }
            g.table = Some(t);
        }
        Ok(g)
    }

    pub fn from_json(j: &GroupJson) -> Result<Self, Error> {
        let mut gens = Vec::new();
        for g in &j.generators {
            if g.iter().any(|&x| x == 0 || x as usize > j.degree) {
                return Err(Error::Parse(format!("generator {g:?} not on 1..{}", j.degree)));
            }
            gens.push(g.iter().map(|&x| x - 1).collect());
        }
        Self::from_generators(j.degree, gens)
    }

    pub fn to_json(&self) -> GroupJson {
        GroupJson {
            degree: self.degree,
            generators: self
                .generators
                .iter()
                .map(|g| g.iter().map(|&x| x + 1).collect())
                .collect(),
        }
    }

    pub fn trivial() -> Self {
        Self::from_generators(1, vec![]).expect("trivial group")
    }

    /// Z/n generated by the n-cycle (1 2 ... n).
    pub fn cyclic(n: usize) -> Result<Self, Error> {
        if n == 0 {
            return Err(Error::Domain("cyclic group of order 0".into()));
        }
        let gen: Perm = (0..n as u32).map(|i| (i + 1) % n as u32).collect();
        Self::from_generators(n, vec![gen])
    }

    pub fn symmetric(d: usize) -> Result<Self, Error> {
        if d == 0 {
            return Err(Error::Domain("symmetric group on 0 points".into()));
        }
        let mut gens = Vec::new();
        if d > 1 {
            let mut t = identity_perm(d);
            t.swap(0, 1);
            gens.push(t);
            gens.push((0..d as u32).map(|i| (i + 1) % d as u32).collect());
        }
        Self::from_generators(d, gens)
    }

    /// G x H acting on the disjoint union of the two point sets.
    /// Returns the group and the map (a, b) -> element.
    pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup) -> Result<(Self, Vec<Vec<Elt>>), Error> {
        let mut gens = Vec::new();
        for p in &g.generators {
            let mut q = p.clone();
            q.extend((0..h.degree as u32).map(|x| x + g.degree as u32));
            gens.push(q);
        }
        for p in &h.generators {
            let mut q = identity_perm(g.degree);
            q.extend(p.iter().map(|&x| x + g.degree as u32));
            gens.push(q);
        }
        let prod = Self::from_generators(g.degree + h.degree, gens)?;
        let pair = (0..g.order())
            .map(|a| {
                (0..h.order())
                    .map(|b| {
                        let mut q = g.elements[a].clone();
                        q.extend(h.elements[b].iter().map(|&x| x + g.degree as u32));
                        prod.index[&q]
                    })
                    .collect()
            })
            .collect();
        Ok((prod, pair))
    }

    /// The fiber product of `p1: H1 -> G` and `p2: H2 -> G`, given as element
    /// maps, realised inside the direct product action. Returns the group and
    /// its two projections.
    pub fn fiber_product(
        h1: &FiniteGroup,
        p1: &[Elt],
        h2: &FiniteGroup,
        p2: &[Elt],
    ) -> Result<(Self, Vec<Elt>, Vec<Elt>), Error> {
        if p1.len() != h1.order() || p2.len() != h2.order() {
            return Err(Error::Mismatch("fiber product maps have the wrong length".into()));
        }
        let mut pairs = Vec::new();
        for a in 0..h1.order() {
            for b in 0..h2.order() {
                if p1[a] == p2[b] {
                    let mut q = h1.elements[a].clone();
                    q.extend(h2.elements[b].iter().map(|&x| x + h1.degree as u32));
                    pairs.push((q, a, b));
                }
            }
        }
        let gens: Vec<Perm> = pairs.iter().map(|(q, _, _)| q.clone()).collect();
        let group = Self::from_generators(h1.degree + h2.degree, gens)?;
        if group.order() != pairs.len() {
            return Err(Error::Mismatch("fiber product maps are not homomorphisms".into()));
        }
        let mut pr1 = vec![0; group.order()];
        let mut pr2 = vec![0; group.order()];
        for (q, a, b) in pairs {
            let i = group.index[&q];
            pr1[i] = a;
            pr2[i] = b;
        }
        Ok((group, pr1, pr2))
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn generator_elements(&self) -> Vec<Elt> {
        self.generators.iter().map(|g| self.index[g]).collect()
    }

    pub fn identity(&self) -> Elt {
        0
    }

    pub fn perm(&self, a: Elt) -> &Perm {
        &self.elements[a]
    }

    pub fn element(&self, p: &[u32]) -> Option<Elt> {
        self.index.get(p).copied()
    }

    pub fn elements(&self) -> std::ops::Range<Elt> {
        0..self.order()
    }

    /// `a * b`, meaning apply `b` first.
    pub fn mul(&self, a: Elt, b: Elt) -> Elt {
        match &self.table {
            Some(t) => t[a * self.order() + b],
            None => self.index[&compose(&self.elements[a], &self.elements[b])],
        }
    }

    pub fn inv(&self, a: Elt) -> Elt {
        self.inverse[a]
    }

    /// `t a t^-1`
    pub fn conj(&self, t: Elt, a: Elt) -> Elt {
        self.mul(self.mul(t, a), self.inv(t))
    }

    pub fn pow(&self, a: Elt, e: i64) -> Elt {
        let base = if e < 0 { self.inv(a) } else { a };
        let mut acc = self.identity();
        for _ in 0..e.unsigned_abs() {
            acc = self.mul(acc, base);
        }
        acc
    }

    pub fn order_of(&self, a: Elt) -> usize {
        let mut k = 1;
        let mut x = a;
        while x != self.identity() {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Elements of the cyclic subgroup generated by `a`, in power order.
    pub fn powers(&self, a: Elt) -> Vec<Elt> {
        let mut out = vec![self.identity()];
        let mut x = a;
        while x != self.identity() {
            out.push(x);
            x = self.mul(x, a);
        }
        out
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup::from_sorted(self.elements().collect(), self.order())
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup::from_sorted(vec![self.identity()], self.order())
    }

    /// Checks closure; the identity must be present.
    pub fn subgroup(&self, elems: &[Elt]) -> Result<Subgroup, Error> {
        let set: BTreeSet<Elt> = elems.iter().copied().collect();
        if let Some(&e) = set.iter().find(|&&e| e >= self.order()) {
            return Err(Error::NotSubgroup(format!("element index {e} out of range")));
        }
        if !set.contains(&self.identity()) {
            return Err(Error::NotSubgroup("identity missing".into()));
        }
        for &a in &set {
            if !set.contains(&self.inv(a)) {
                return Err(Error::NotSubgroup(format!("inverse of element {a} missing")));
            }
            for &b in &set {
                if !set.contains(&self.mul(a, b)) {
                    return Err(Error::NotSubgroup(format!("product of {a} and {b} missing")));
                }
            }
        }
        let h = Subgroup::from_sorted(set.into_iter().collect(), self.order());
        assert_eq!(self.order() % h.order(), 0, "Lagrange");
        Ok(h)
    }

    pub fn generate(&self, gens: &[Elt]) -> Subgroup {
        let mut seen = vec![false; self.order()];
        seen[self.identity()] = true;
        let mut queue = VecDeque::from([self.identity()]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(g, x);
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        let elems: Vec<Elt> = (0..self.order()).filter(|&i| seen[i]).collect();
        let h = Subgroup::from_sorted(elems, self.order());
        assert_eq!(self.order() % h.order(), 0, "Lagrange");
        h
    }

    pub fn cyclic_subgroup(&self, a: Elt) -> Subgroup {
        self.generate(&[a])
    }

    /// Every subgroup of `h`, built by joining cyclic subgroups, sorted.
    pub fn subgroups_of(&self, h: &Subgroup) -> Vec<Subgroup> {
        let cyclic: BTreeSet<Subgroup> = h.elements().iter().map(|&x| self.cyclic_subgroup(x)).collect();
        let mut found = cyclic.clone();
        let mut frontier: Vec<Subgroup> = cyclic.iter().cloned().collect();
        while let Some(a) = frontier.pop() {
            for c in &cyclic {
                if c.is_subset(&a) {
                    continue;
                }
                let mut gens = a.elements().to_vec();
                gens.extend_from_slice(c.elements());
                let j = self.generate(&gens);
                if found.insert(j.clone()) {
                    frontier.push(j);
                }
            }
        }
        found.into_iter().collect()
    }

    pub fn intersection(&self, a: &Subgroup, b: &Subgroup) -> Subgroup {
        let elems = a.elements.iter().copied().filter(|&x| b.contains(x)).collect();
        Subgroup::from_sorted(elems, self.order())
    }

    pub fn conjugate_subgroup(&self, t: Elt, h: &Subgroup) -> Subgroup {
        let mut elems: Vec<Elt> = h.elements.iter().map(|&x| self.conj(t, x)).collect();
        elems.sort_unstable();
        Subgroup::from_sorted(elems, self.order())
    }

    /// For every element, the index of its left coset `gH` in the list of
    /// canonical representatives (the smallest element of each coset).
    pub fn coset_table(&self, h: &Subgroup) -> (Vec<Elt>, Vec<usize>) {
        let mut which = vec![usize::MAX; self.order()];
        let mut reps = Vec::new();
        for g in self.elements() {
            if which[g] != usize::MAX {
                continue;
            }
            let c = reps.len();
            reps.push(g);
            for &x in h.elements() {
                which[self.mul(g, x)] = c;
            }
        }
        (reps, which)
    }

    /// Canonical representatives of G/H.
    pub fn left_cosets(&self, h: &Subgroup) -> Result<Vec<Elt>, Error> {
        self.check_subgroup(h)?;
        Ok(self.coset_table(h).0)
    }

    /// Partition of G/K into orbits of the left action of H. Orbits are listed
    /// by increasing smallest coset representative; each orbit's representative
    /// is its smallest coset representative.
    pub fn orbit_on_cosets(&self, h: &Subgroup, k: &Subgroup) -> Result<Vec<CosetOrbit>, Error> {
        self.check_subgroup(h)?;
        self.check_subgroup(k)?;
        let (reps, which) = self.coset_table(k);
        let mut done = vec![false; reps.len()];
        let mut out = Vec::new();
        for c in 0..reps.len() {
            if done[c] {
                continue;
            }
            let mut cosets = BTreeSet::new();
            for &x in h.elements() {
                let d = which[self.mul(x, reps[c])];
                done[d] = true;
                cosets.insert(reps[d]);
            }
            out.push(CosetOrbit { representative: reps[c], cosets: cosets.into_iter().collect() });
        }
        Ok(out)
    }

    /// Ok, or the lexicographically first witness `(t, n)` with `t n t^-1` outside.
    pub fn check_normal(&self, n: &Subgroup) -> Result<(), Error> {
        self.check_subgroup(n)?;
        for t in self.elements() {
            for &x in n.elements() {
                if !n.contains(self.conj(t, x)) {
                    return Err(Error::NotNormal { conjugator: t, g: x });
                }
            }
        }
        Ok(())
    }

    pub fn is_normal(&self, n: &Subgroup) -> bool {
        self.check_normal(n).is_ok()
    }

    pub fn quotient(&self, n: &Subgroup) -> Result<QuotientGroup, Error> {
        self.check_normal(n)?;
        let (reps, which) = self.coset_table(n);
        let m = reps.len();
        let act = |g: Elt| -> Perm { (0..m).map(|c| which[self.mul(g, reps[c])] as u32).collect() };
        let gens: Vec<Perm> = self.generator_elements().into_iter().map(act).collect();
        let group = FiniteGroup::from_generators(m, gens)?;
        let projection: Vec<Elt> = self
            .elements()
            .map(|g| group.element(&act(g)).expect("coset action lies in the quotient"))
            .collect();
        if group.order() != m {
            return Err(Error::Internal("quotient order mismatch".into()));
        }
        let mut lifts = vec![0; m];
        for (g, &q) in projection.iter().enumerate().rev() {
            lifts[q] = g;
        }
        Ok(QuotientGroup { group, normal: n.clone(), projection, lifts })
    }

    /// H as a group in its own right, with the inclusion map into `self`.
    pub fn subgroup_as_group(&self, h: &Subgroup) -> (FiniteGroup, Vec<Elt>) {
        let mut gens: Vec<Elt> = Vec::new();
        let mut current = self.trivial_subgroup();
        for &x in h.elements() {
            if !current.contains(x) {
                gens.push(x);
                current = self.generate(&gens);
            }
        }
        let perms = gens.iter().map(|&g| self.elements[g].clone()).collect();
        let sub = FiniteGroup::from_generators(self.degree, perms).expect("subgroup closes");
        let inclusion = sub.elements.iter().map(|p| self.index[p]).collect();
        (sub, inclusion)
    }

    /// Checks that `map` (indexed by elements of `self`) is a homomorphism into `target`.
    pub fn is_homomorphism(&self, target: &FiniteGroup, map: &[Elt]) -> bool {
        map.len() == self.order()
            && map.iter().all(|&x| x < target.order())
            && self.elements().all(|a| {
                self.elements().all(|b| map[self.mul(a, b)] == target.mul(map[a], map[b]))
            })
    }

    fn check_subgroup(&self, h: &Subgroup) -> Result<(), Error> {
        if h.parent_order != self.order() {
            return Err(Error::NotSubgroup("subgroup of a different group".into()));
        }
        Ok(())
    }
}

/// A subgroup as a sorted set of element indices of its parent.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subgroup {
    elements: Vec<Elt>,
    parent_order: usize,
}

impl Subgroup {
    fn from_sorted(elements: Vec<Elt>, parent_order: usize) -> Self {
        Subgroup { elements, parent_order }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Elt] {
        &self.elements
    }

    pub fn contains(&self, x: Elt) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    pub fn is_subset(&self, other: &Subgroup) -> bool {
        self.elements.iter().all(|&x| other.contains(x))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetOrbit {
    pub representative: Elt,
    /// Canonical representatives of the cosets in this orbit, sorted.
    pub cosets: Vec<Elt>,
}

#[derive(Clone, Debug)]
pub struct QuotientGroup {
    /// G/N acting on the cosets of N.
    pub group: FiniteGroup,
    pub normal: Subgroup,
    /// Element of G -> element of G/N.
    pub projection: Vec<Elt>,
    /// Element of G/N -> smallest element of G mapping to it.
    pub lifts: Vec<Elt>,
}

impl QuotientGroup {
    pub fn project(&self, g: Elt) -> Elt {
        self.projection[g]
    }
}
