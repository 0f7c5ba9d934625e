//! Brute force Hurwitz counts of connected covers of the projective line.
//!
//! The tuple count is the number of `(σ_1, ..., σ_k)` in `S_d` with `σ_i` of
//! the given cycle types, product one and transitive. From it we derive the
//! count up to simultaneous conjugation, the centralizer weighted count
//! `tuples / d!`, and the calibrated count: the weighted count times, for
//! every fiber whose points are labelled, the number of ways to label points
//! of equal ramification. The calibrated count gives 1 for the totally
//! ramified / simple / `(a, b)` configuration and `2 max(a, b)` for the
//! four point `(a, b)` configuration.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::algebra::{big, factorial, rat, Rational};
use crate::graphs::permutations;
use crate::Error;

pub const MAX_HURWITZ_DEGREE: usize = 7;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchFiber {
    /// Ramification profile, a partition of `d`.
    pub profile: Vec<u32>,
    /// Whether the points of this fiber are individually labelled.
    #[serde(default)]
    pub labelled: bool,
}

impl BranchFiber {
    pub fn new(profile: &[u32], labelled: bool) -> Self {
        BranchFiber { profile: profile.to_vec(), labelled }
    }

    /// `[2, 1^{d-2}]`, unlabelled.
    pub fn simple(d: usize) -> Self {
        let mut p = vec![2];
        p.extend(std::iter::repeat(1).take(d - 2));
        BranchFiber { profile: p, labelled: false }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CountMode {
    Tuples,
    Orbits,
    Weighted,
    Calibrated,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HurwitzCount {
    #[serde(with = "crate::algebra::rational_str")]
    pub tuples: Rational,
    #[serde(with = "crate::algebra::rational_str")]
    pub orbits: Rational,
    #[serde(with = "crate::algebra::rational_str")]
    pub weighted: Rational,
    #[serde(with = "crate::algebra::rational_str")]
    pub calibrated: Rational,
}

impl HurwitzCount {
    pub fn get(&self, mode: CountMode) -> &Rational {
        match mode {
            CountMode::Tuples => &self.tuples,
            CountMode::Orbits => &self.orbits,
            CountMode::Weighted => &self.weighted,
            CountMode::Calibrated => &self.calibrated,
        }
    }
}

fn cycle_type(p: &[usize]) -> Vec<u32> {
    let mut seen = vec![false; p.len()];
    let mut out = Vec::new();
    for s in 0..p.len() {
        if seen[s] {
            continue;
        }
        let mut len = 0;
        let mut x = s;
        while !seen[x] {
            seen[x] = true;
            x = p[x];
            len += 1;
        }
        out.push(len);
    }
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    b.iter().map(|&x| a[x]).collect()
}

fn invert(a: &[usize]) -> Vec<usize> {
    let mut r = vec![0; a.len()];
    for (i, &x) in a.iter().enumerate() {
        r[x] = i;
    }
    r
}

fn transitive(d: usize, perms: &[&[usize]]) -> bool {
    let mut seen = vec![false; d];
    seen[0] = true;
    let mut stack = vec![0];
    let mut count = 1;
    while let Some(x) = stack.pop() {
        for p in perms {
            let y = p[x];
            if !seen[y] {
                seen[y] = true;
                count += 1;
                stack.push(y);
            }
        }
    }
    count == d
}

/// Size of the centralizer of a transitive tuple: each centralizing
/// permutation is fixed by the image of 0.
fn centralizer_order(d: usize, perms: &[&[usize]]) -> usize {
    let mut count = 0;
    'target: for x in 0..d {
        let mut g = vec![usize::MAX; d];
        g[0] = x;
        let mut stack = vec![0];
        while let Some(y) = stack.pop() {
            for p in perms {
                let (a, b) = (p[y], p[g[y]]);
                if g[a] == usize::MAX {
                    g[a] = b;
                    stack.push(a);
                } else if g[a] != b {
                    continue 'target;
                }
            }
        }
        let mut used = vec![false; d];
        if g.iter().all(|&v| v < d && !std::mem::replace(&mut used[v], true)) {
            count += 1;
        }
    }
    count
}

fn labelling_factor(fibers: &[BranchFiber]) -> BigInt {
    let mut out = BigInt::from(1);
    for f in fibers.iter().filter(|f| f.labelled) {
        let mut mult: BTreeMap<u32, u64> = BTreeMap::new();
        for &p in &f.profile {
            *mult.entry(p).or_insert(0) += 1;
        }
        for m in mult.values() {
            out *= factorial(*m);
        }
    }
    out
}

/// All counts for connected degree `d` covers of a genus `target_genus`
/// curve with the given branch fibers. Only genus zero targets and
/// `d ≤ 7` are supported.
pub fn hurwitz_cover_count(d: usize, fibers: &[BranchFiber], target_genus: u32) -> Result<HurwitzCount, Error> {
    if target_genus != 0 {
        return Err(Error::Unsupported("only genus zero targets are enumerated".into()));
    }
    if d == 0 || d > MAX_HURWITZ_DEGREE {
        return Err(Error::Domain(format!("degree {d} outside the enumeration range 1..={MAX_HURWITZ_DEGREE}")));
    }
    if fibers.is_empty() {
        return Err(Error::Domain("no branch fibers given".into()));
    }
    let mut types = Vec::new();
    for f in fibers {
        if f.profile.iter().any(|&p| p == 0) || f.profile.iter().map(|&p| p as usize).sum::<usize>() != d {
            return Err(Error::Domain(format!("{:?} is not a partition of {d}", f.profile)));
        }
        let mut t = f.profile.clone();
        t.sort_unstable_by(|a, b| b.cmp(a));
        types.push(t);
    }
    // Counts do not depend on the order of the fibers, so the largest class
    // goes last where it is solved for rather than enumerated.
    let all = permutations(d);
    let mut classes: Vec<Vec<Vec<usize>>> =
        types.iter().map(|t| all.iter().filter(|p| cycle_type(p) == *t).cloned().collect()).collect();
    let last = (0..classes.len()).max_by_key(|&i| (classes[i].len(), i)).expect("nonempty");
    let last_type = types.remove(last);
    classes.remove(last);
    let mut order: Vec<usize> = (0..classes.len()).collect();
    order.sort_by_key(|&i| classes[i].len());
    let classes: Vec<Vec<Vec<usize>>> = order.iter().map(|&i| classes[i].clone()).collect();

    let id: Vec<usize> = (0..d).collect();
    let (first, fixed_size) = match classes.first() {
        Some(c) => (Some(c[0].clone()), c.len()),
        None => (None, 1),
    };
    let mut sum_stab = 0usize;
    let mut fixed_tuples = 0usize;
    let mut chosen: Vec<Vec<usize>> = Vec::new();
    if let Some(f) = first {
        chosen.push(f);
    }
    fn rec(
        level: usize,
        classes: &[Vec<Vec<usize>>],
        chosen: &mut Vec<Vec<usize>>,
        product: &[usize],
        last_type: &[u32],
        d: usize,
        fixed_tuples: &mut usize,
        sum_stab: &mut usize,
    ) {
        if level == classes.len() {
            let sigma = invert(product);
            if cycle_type(&sigma) != last_type {
                return;
            }
            let mut perms: Vec<&[usize]> = chosen.iter().map(|p| p.as_slice()).collect();
            perms.push(&sigma);
            if transitive(d, &perms) {
                *fixed_tuples += 1;
                *sum_stab += centralizer_order(d, &perms);
            }
            return;
        }
        for s in &classes[level] {
            let next = compose(product, s);
            chosen.push(s.clone());
            rec(level + 1, classes, chosen, &next, last_type, d, fixed_tuples, sum_stab);
            chosen.pop();
        }
    }
    let start = chosen.first().cloned().unwrap_or(id);
    rec(
        usize::from(!chosen.is_empty()),
        &classes,
        &mut chosen,
        &start,
        &last_type,
        d,
        &mut fixed_tuples,
        &mut sum_stab,
    );
    // the first enumerated class was fixed to one element, so scale back
    let centralizer_first = factorial(d as u64) / BigInt::from(fixed_size);
    let tuples = big(BigInt::from(fixed_tuples) * BigInt::from(fixed_size));
    let orbits = Rational::new(BigInt::from(sum_stab), centralizer_first.clone());
    let weighted = Rational::new(BigInt::from(fixed_tuples), centralizer_first);
    let calibrated = &weighted * big(labelling_factor(fibers));
    debug_assert!(orbits >= rat(0));
    Ok(HurwitzCount { tuples, orbits, weighted, calibrated })
}

/// Calibrated count of degree `a + b` covers totally ramified over one
/// point, simply ramified over another and with profile `(a, b)` over a
/// third, whose two points are labelled.
pub fn unique_cover_count(a: u32, b: u32) -> Result<Rational, Error> {
    let d = (a + b) as usize;
    let fibers = [BranchFiber::new(&[a + b], false), BranchFiber::simple(d), BranchFiber::new(&[a, b], true)];
    Ok(hurwitz_cover_count(d, &fibers, 0)?.calibrated)
}

/// Calibrated count of degree `a + b` covers simply ramified over two points
/// and with labelled profile `(a, b)` over two more.
pub fn four_point_cover_count(a: u32, b: u32) -> Result<Rational, Error> {
    let d = (a + b) as usize;
    let ab = BranchFiber::new(&[a, b], true);
    let fibers = [BranchFiber::simple(d), BranchFiber::simple(d), ab.clone(), ab];
    Ok(hurwitz_cover_count(d, &fibers, 0)?.calibrated)
}

/// The same four point count from a degeneration of the target into two
/// lines: gluing two `(a, b)` covers along the point of order `a + b`
/// (multiplicity `a + b`), plus for `a > b` gluing two `(a − b, b)` covers
/// with an extra degree `b` component on each side (multiplicity
/// `b²(a − b)`, divided by `b²` for the cyclic automorphisms).
pub fn degeneration_count(a: u32, b: u32) -> Result<Rational, Error> {
    let (a, b) = if a >= b { (a, b) } else { (b, a) };
    let glued = unique_cover_count(a, b)?;
    let mut out = rat((a + b) as i64) * &glued * &glued;
    if a > b {
        let inner = unique_cover_count(a - b, b)?;
        let bb = rat((b * b) as i64);
        out += rat((a - b) as i64) * &bb / &bb * &inner * &inner;
    }
    Ok(out)
}
