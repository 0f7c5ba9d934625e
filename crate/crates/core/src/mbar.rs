//! Decorated boundary classes on the moduli space of stable curves: ψ/κ
//! pullbacks, the boundary intersection formula and top degree integrals.
//!
//! A term `(c, Γ, α)` of a [`StratumClass`] stands for `c · ξ_{Γ*}(α)`, the
//! pushforward along the gluing map with no division by `#Aut(Γ)`. Integrals
//! therefore satisfy `∫ ξ_{Γ*}(α) = ∫_{M_Γ} α` with `M_Γ` the product of the
//! vertex moduli spaces.

use std::collections::{BTreeMap, HashMap};
use std::sync::{OnceLock, RwLock};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{factorial, rat, ratio, Rational};
use crate::graphs::{enumerate_generic_ab, GenericTriple, StableGraph};
use crate::Error;

/// ψ exponents on half-edges and legs, κ exponents per vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Decoration {
    pub psi_half_edges: Vec<u32>,
    pub psi_legs: Vec<u32>,
    /// For each vertex, κ index -> exponent.
    pub kappa: Vec<BTreeMap<u32, u32>>,
}

impl Decoration {
    pub fn trivial(g: &StableGraph) -> Self {
        Decoration {
            psi_half_edges: vec![0; g.num_half_edges()],
            psi_legs: vec![0; g.num_legs()],
            kappa: vec![BTreeMap::new(); g.num_vertices()],
        }
    }

    pub fn degree(&self) -> u64 {
        let psi: u64 = self.psi_half_edges.iter().chain(&self.psi_legs).map(|&a| a as u64).sum();
        let kappa: u64 = self.kappa.iter().flat_map(|m| m.iter()).map(|(&i, &e)| i as u64 * e as u64).sum();
        psi + kappa
    }

    pub fn is_trivial(&self) -> bool {
        self.degree() == 0
    }

    fn times(&self, other: &Decoration) -> Decoration {
        let mut d = self.clone();
        for (x, y) in d.psi_half_edges.iter_mut().zip(&other.psi_half_edges) {
            *x += y;
        }
        for (x, y) in d.psi_legs.iter_mut().zip(&other.psi_legs) {
            *x += y;
        }
        for (m, o) in d.kappa.iter_mut().zip(&other.kappa) {
            for (&i, &e) in o {
                *m.entry(i).or_insert(0) += e;
            }
        }
        d
    }

    /// ψ exponents of the markings at `v` and its κ indices with multiplicity.
    fn vertex_data(&self, g: &StableGraph, v: usize) -> (Vec<u32>, Vec<u32>) {
        let mut psi: Vec<u32> = g.half_edges_at(v).into_iter().map(|h| self.psi_half_edges[h]).collect();
        psi.extend(g.legs_at(v).into_iter().map(|l| self.psi_legs[l]));
        let kappa = self.kappa[v].iter().flat_map(|(&i, &e)| std::iter::repeat(i).take(e as usize)).collect();
        (psi, kappa)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    #[serde(with = "crate::algebra::rational_str")]
    pub coefficient: Rational,
    pub graph: StableGraph,
    pub decoration: Decoration,
}

impl Term {
    pub fn codimension(&self) -> u64 {
        self.graph.num_edges() as u64 + self.decoration.degree()
    }
}

/// Formal rational combination of decorated boundary classes on M̄_{g,n}.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumClass {
    pub g: u32,
    pub n: usize,
    pub terms: Vec<Term>,
}

impl StratumClass {
    pub fn zero(g: u32, n: usize) -> Self {
        StratumClass { g, n, terms: vec![] }
    }

    pub fn one(g: u32, n: usize) -> Result<Self, Error> {
        let s = StableGraph::smooth(g, n)?;
        let decoration = Decoration::trivial(&s);
        Ok(StratumClass { g, n, terms: vec![Term { coefficient: Rational::one(), graph: s, decoration }] })
    }

    /// `∏ ψ_i^{psi[i]} · ∏ κ_j^{e_j}` on the open stratum.
    pub fn monomial(g: u32, psi: &[u32], kappa: &BTreeMap<u32, u32>) -> Result<Self, Error> {
        if kappa.keys().any(|&i| i == 0) {
            return Err(Error::Domain("κ_0 is a constant, use 2g - 2 + n".into()));
        }
        let n = psi.len();
        let s = StableGraph::smooth(g, n)?;
        let decoration = Decoration { psi_half_edges: vec![], psi_legs: psi.to_vec(), kappa: vec![kappa.clone()] };
        Ok(StratumClass { g, n, terms: vec![Term { coefficient: Rational::one(), graph: s, decoration }] })
    }

    /// `[Γ]`, the pushforward of 1 along the gluing map of `gamma`.
    pub fn boundary(gamma: &StableGraph) -> Self {
        StratumClass {
            g: gamma.genus() as u32,
            n: gamma.num_legs(),
            terms: vec![Term {
                coefficient: Rational::one(),
                graph: gamma.clone(),
                decoration: Decoration::trivial(gamma),
            }],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|t| t.coefficient.is_zero())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = self.clone();
        for t in &mut out.terms {
            t.coefficient = &t.coefficient * c;
        }
        out.simplify()
    }

    pub fn add(&self, other: &StratumClass) -> Result<Self, Error> {
        if (self.g, self.n) != (other.g, other.n) {
            return Err(Error::Mismatch("classes live on different moduli spaces".into()));
        }
        let mut out = self.clone();
        out.terms.extend(other.terms.iter().cloned());
        Ok(out.simplify())
    }

    /// Merges identical (graph, decoration) pairs, drops zeros and sorts.
    pub fn simplify(mut self) -> Self {
        let mut acc: BTreeMap<(StableGraph, Decoration), Rational> = BTreeMap::new();
        for t in self.terms.drain(..) {
            *acc.entry((t.graph, t.decoration)).or_insert_with(Rational::zero) += t.coefficient;
        }
        self.terms = acc
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|((graph, decoration), coefficient)| Term { coefficient, graph, decoration })
            .collect();
        self
    }

    /// Multiplies every term `ξ_{Γ*}(α)` by a polynomial in ψ and κ classes of
    /// the ambient space, using `ξ_{Γ*}(α)·β = ξ_{Γ*}(α·ξ_Γ^*β)`.
    pub fn times_pullback(&self, poly: &StratumClass) -> Result<StratumClass, Error> {
        let mut out = StratumClass::zero(self.g, self.n);
        for t in &self.terms {
            let pulled = pullback_by_boundary(poly, &t.graph)?;
            for p in pulled.terms {
                out.terms.push(Term {
                    coefficient: &t.coefficient * &p.coefficient,
                    graph: t.graph.clone(),
                    decoration: t.decoration.times(&p.decoration),
                });
            }
        }
        Ok(out.simplify())
    }
}

/// `π^*ψ_i = ψ_i − [D_{i,n+1}]` on M̄_{g,n+1}.
pub fn pullback_psi_forgetful(g: u32, n: usize, i: usize) -> Result<StratumClass, Error> {
    if i == 0 || i > n {
        return Err(Error::Domain(format!("leg {i} out of range 1..={n}")));
    }
    if 2 * g as i64 - 2 + n as i64 <= 0 {
        return Err(Error::Domain(format!("(g, n) = ({g}, {n}) is unstable")));
    }
    let mut psi = vec![0; n + 1];
    psi[i - 1] = 1;
    let first = StratumClass::monomial(g, &psi, &BTreeMap::new())?;
    let mut legs = vec![0; n + 1];
    legs[i - 1] = 1;
    legs[n] = 1;
    let d = StableGraph::from_edges(vec![g, 0], &[(0, 1)], legs)?;
    let second = StratumClass::boundary(&d).scale(&rat(-1));
    first.add(&second)
}

/// `π^*κ_i = κ_i − ψ_{n+1}^i` on M̄_{g,n+1}.
pub fn pullback_kappa_forgetful(g: u32, n: usize, i: u32) -> Result<StratumClass, Error> {
    if i == 0 {
        return Err(Error::Domain("κ_0 is out of scope: it is the constant 2g − 2 + n".into()));
    }
    let first = StratumClass::monomial(g, &vec![0; n + 1], &BTreeMap::from([(i, 1)]))?;
    let mut psi = vec![0; n + 1];
    psi[n] = i;
    let second = StratumClass::monomial(g, &psi, &BTreeMap::new())?.scale(&rat(-1));
    first.add(&second)
}

/// `κ̃_i = κ_i − Σ_j ψ_j^i`, the κ class of the relative dualizing sheaf
/// without the log twist.
pub fn kappa_tilde(g: u32, n: usize, i: u32) -> Result<StratumClass, Error> {
    let mut c = StratumClass::monomial(g, &vec![0; n], &BTreeMap::from([(i, 1)]))?;
    for j in 0..n {
        let mut psi = vec![0; n];
        psi[j] = i;
        c = c.add(&StratumClass::monomial(g, &psi, &BTreeMap::new())?.scale(&rat(-1)))?;
    }
    Ok(c)
}

/// Pulls a polynomial in ψ and κ back along `ξ_Γ`. ψ_i goes to the vertex
/// carrying leg i and κ_i to the sum of the vertex κ_i classes. The result
/// lives on M_Γ, written as terms on `gamma`.
pub fn pullback_by_boundary(class: &StratumClass, gamma: &StableGraph) -> Result<StratumClass, Error> {
    if gamma.genus() != class.g as i64 || gamma.num_legs() != class.n {
        return Err(Error::Mismatch("graph and class have different (g, n)".into()));
    }
    let mut out = StratumClass::zero(class.g, class.n);
    for t in &class.terms {
        if t.graph.num_edges() != 0 {
            return Err(Error::Domain(
                "pullback needs a pure ψ/κ polynomial; intersect boundary strata first".into(),
            ));
        }
        let mut partial = vec![(t.coefficient.clone(), Decoration::trivial(gamma))];
        partial[0].1.psi_legs = t.decoration.psi_legs.clone();
        for (&i, &e) in &t.decoration.kappa[0] {
            for _ in 0..e {
                let mut next = Vec::new();
                for (c, d) in &partial {
                    for v in 0..gamma.num_vertices() {
                        let mut d2 = d.clone();
                        *d2.kappa[v].entry(i).or_insert(0) += 1;
                        next.push((c.clone(), d2));
                    }
                }
                partial = next;
            }
        }
        for (coefficient, decoration) in partial {
            out.terms.push(Term { coefficient, graph: gamma.clone(), decoration });
        }
    }
    Ok(out.simplify())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionTerm {
    pub triple: GenericTriple,
    /// Half-edge pairs of the edges hit from both sides.
    pub excess_edges: Vec<(usize, usize)>,
}

/// `ξ_A^* ξ_{B*}(1)` as a sum over generic (A,B)-graphs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryIntersection {
    pub a: StableGraph,
    pub b: StableGraph,
    pub terms: Vec<IntersectionTerm>,
}

impl BoundaryIntersection {
    /// Each term `(ξ_{Γ→A})_*(∏(−ψ_h − ψ_h'))` expanded into monomials; pushed
    /// on to M̄_{g,n} this is the class `ξ_{A*}ξ_A^*ξ_{B*}(1)`.
    pub fn class(&self) -> StratumClass {
        let mut out = StratumClass::zero(self.a.genus() as u32, self.a.num_legs());
        for t in &self.terms {
            out.terms.extend(excess_terms(&t.triple.gamma, &t.excess_edges));
        }
        out.simplify()
    }
}

/// Expansion of `∏_{(h,h')} (−ψ_h − ψ_h')` on `gamma`.
pub fn excess_terms(gamma: &StableGraph, edges: &[(usize, usize)]) -> Vec<Term> {
    let k = edges.len();
    let sign = if k % 2 == 0 { rat(1) } else { rat(-1) };
    (0..1usize << k)
        .map(|mask| {
            let mut d = Decoration::trivial(gamma);
            for (j, &(h, h2)) in edges.iter().enumerate() {
                let side = if mask >> j & 1 == 0 { h } else { h2 };
                d.psi_half_edges[side] += 1;
            }
            Term { coefficient: sign.clone(), graph: gamma.clone(), decoration: d }
        })
        .collect()
}

pub fn boundary_intersection(a: &StableGraph, b: &StableGraph) -> Result<BoundaryIntersection, Error> {
    let triples = enumerate_generic_ab(a, b)?;
    let terms = triples
        .into_iter()
        .map(|triple| {
            let edges = triple.gamma.edges();
            let excess_edges = triple.common_edges().into_iter().map(|e| edges[e]).collect();
            IntersectionTerm { triple, excess_edges }
        })
        .collect();
    Ok(BoundaryIntersection { a: a.clone(), b: b.clone(), terms })
}

/// ⟨τ_4⟩_2, ⟨τ_2 τ_3⟩_2 and ⟨τ_2^3⟩_2: the genus two correlators with no
/// τ_0 or τ_1 insertion, from the Witten–Kontsevich literature. Together with
/// ⟨τ_0^3⟩_0 = 1 and ⟨τ_1⟩_1 = 1/24 they determine every correlator of genus
/// at most two through the string and dilaton equations.
fn base_correlator(g: u32, a: &[u32]) -> Option<Rational> {
    match (g, a) {
        (0, [0, 0, 0]) => Some(rat(1)),
        (1, [1]) => Some(ratio(1, 24)),
        (2, [4]) => Some(ratio(1, 1152)),
        (2, [2, 3]) => Some(ratio(29, 5760)),
        (2, [2, 2, 2]) => Some(ratio(7, 240)),
        _ => None,
    }
}

pub const MAX_SUPPORTED_GENUS: u32 = 2;

type Cache = RwLock<HashMap<(u32, Vec<u32>, Vec<u32>), Rational>>;

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

fn dimension(g: u32, n: usize) -> i64 {
    3 * g as i64 - 3 + n as i64
}

fn check_stable(g: u32, n: usize) -> Result<(), Error> {
    if 2 * g as i64 - 2 + n as i64 <= 0 {
        return Err(Error::Domain(format!("M_{{{g},{n}}} is unstable")));
    }
    Ok(())
}

/// Witten–Kontsevich correlator `⟨τ_{a_1} … τ_{a_n}⟩_g`, for `g ≤ 2`.
pub fn integrate_psi(g: u32, a: &[u32]) -> Result<Rational, Error> {
    check_stable(g, a.len())?;
    let total: i64 = a.iter().map(|&x| x as i64).sum();
    if total != dimension(g, a.len()) {
        return Err(Error::Domain(format!(
            "ψ degree {total} does not match dim M_{{{g},{}}} = {}",
            a.len(),
            dimension(g, a.len())
        )));
    }
    let mut sorted = a.to_vec();
    sorted.sort_unstable();
    correlator(g, sorted)
}

fn correlator(g: u32, a: Vec<u32>) -> Result<Rational, Error> {
    if g > MAX_SUPPORTED_GENUS {
        return Err(Error::Unsupported(format!("integrals on vertices of genus {g}")));
    }
    if a.iter().map(|&x| x as i64).sum::<i64>() != dimension(g, a.len()) {
        return Ok(Rational::zero());
    }
    if let Some(v) = base_correlator(g, &a) {
        return Ok(v);
    }
    let key = (g, a.clone(), vec![]);
    if let Some(v) = cache().read().expect("cache poisoned").get(&key) {
        return Ok(v.clone());
    }
    let value = if let Some(pos) = a.iter().position(|&x| x == 0) {
        // string equation
        let mut rest = a.clone();
        rest.remove(pos);
        let mut acc = Rational::zero();
        for j in 0..rest.len() {
            if rest[j] > 0 {
                let mut b = rest.clone();
                b[j] -= 1;
                b.sort_unstable();
                acc += correlator(g, b)?;
            }
        }
        acc
    } else if let Some(pos) = a.iter().position(|&x| x == 1) {
        // dilaton equation
        let mut rest = a.clone();
        rest.remove(pos);
        let factor = 2 * g as i64 - 2 + rest.len() as i64;
        rat(factor) * correlator(g, rest)?
    } else {
        return Err(Error::Internal(format!("no recursion applies to genus {g} exponents {a:?}")));
    };
    cache().write().expect("cache poisoned").insert(key, value.clone());
    Ok(value)
}

/// Genus zero closed form `(n − 3)! / ∏ a_i!`.
pub fn genus_zero_closed_form(a: &[u32]) -> Rational {
    let n = a.len() as u64;
    let denom = a.iter().fold(num_bigint::BigInt::one(), |acc, &x| acc * factorial(x as u64));
    Rational::new(factorial(n - 3), denom)
}

/// `∫_{M̄_{g,n}} ∏ ψ_i^{psi[i]} ∏ κ_{b}` where `kappa` lists the indices b
/// with multiplicity. κ factors are removed one at a time through
/// `κ_{b_1} K = π_*(ψ_{n+1}^{b_1+1} π^*K)` and `π^*κ_b = κ_b − ψ_{n+1}^b`.
pub fn integrate_monomial(g: u32, psi: &[u32], kappa: &[u32]) -> Result<Rational, Error> {
    check_stable(g, psi.len())?;
    if kappa.iter().any(|&b| b == 0) {
        return Err(Error::Domain("κ_0 is not a decoration".into()));
    }
    let degree: i64 = psi.iter().chain(kappa).map(|&x| x as i64).sum();
    if degree != dimension(g, psi.len()) {
        return Err(Error::Domain(format!(
            "degree {degree} does not match dim M_{{{g},{}}} = {}",
            psi.len(),
            dimension(g, psi.len())
        )));
    }
    vertex_integral(g, psi.to_vec(), kappa.to_vec())
}

fn vertex_integral(g: u32, mut psi: Vec<u32>, mut kappa: Vec<u32>) -> Result<Rational, Error> {
    if g > MAX_SUPPORTED_GENUS {
        return Err(Error::Unsupported(format!("integrals on vertices of genus {g}")));
    }
    let degree: i64 = psi.iter().chain(&kappa).map(|&x| x as i64).sum();
    if degree != dimension(g, psi.len()) {
        return Ok(Rational::zero());
    }
    psi.sort_unstable();
    kappa.sort_unstable();
    if kappa.is_empty() {
        return correlator(g, psi);
    }
    let key = (g, psi.clone(), kappa.clone());
    if let Some(v) = cache().read().expect("cache poisoned").get(&key) {
        return Ok(v.clone());
    }
    let b1 = kappa.pop().unwrap();
    let rest = kappa;
    let mut acc = Rational::zero();
    for mask in 0..(1usize << rest.len()) {
        let mut extra = b1 + 1;
        let mut remaining = Vec::new();
        for (j, &b) in rest.iter().enumerate() {
            if mask >> j & 1 == 1 {
                extra += b;
            } else {
                remaining.push(b);
            }
        }
        let mut p = psi.clone();
        p.push(extra);
        let v = vertex_integral(g, p, remaining)?;
        if mask.count_ones() % 2 == 0 {
            acc += v;
        } else {
            acc -= v;
        }
    }
    cache().write().expect("cache poisoned").insert(key, acc.clone());
    Ok(acc)
}

/// Integral of a class of top codimension `3g − 3 + n`.
pub fn integrate_stratum_class(class: &StratumClass) -> Result<Rational, Error> {
    let top = dimension(class.g, class.n) as u64;
    let mut total = Rational::zero();
    for t in &class.terms {
        if t.codimension() != top {
            return Err(Error::Domain(format!(
                "term of codimension {} in a top degree integral (dimension {top})",
                t.codimension()
            )));
        }
        if t.coefficient.is_zero() {
            continue;
        }
        let mut prod = t.coefficient.clone();
        for v in 0..t.graph.num_vertices() {
            let (psi, kappa) = t.decoration.vertex_data(&t.graph, v);
            prod *= vertex_integral(t.graph.vertex_genus(v), psi, kappa)?;
            if prod.is_zero() {
                break;
            }
        }
        total += prod;
    }
    Ok(total)
}

/// All ψ monomials on `n` legs of total degree `d`, lexicographically.
pub fn psi_monomials(n: usize, d: u32) -> Vec<Vec<u32>> {
    fn rec(n: usize, d: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() + 1 == n {
            cur.push(d);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for a in (0..=d).rev() {
            cur.push(a);
            rec(n, d - a, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if d == 0 {
            out.push(vec![]);
        }
        return out;
    }
    rec(n, d, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_correlators() {
        assert_eq!(integrate_psi(0, &[0, 0, 0]).unwrap(), rat(1));
        assert_eq!(integrate_psi(0, &[1, 0, 0, 0]).unwrap(), rat(1));
        assert_eq!(integrate_psi(0, &[1, 1, 0, 0, 0]).unwrap(), rat(2));
        assert_eq!(integrate_psi(1, &[1]).unwrap(), ratio(1, 24));
        assert_eq!(integrate_psi(1, &[1, 1]).unwrap(), ratio(1, 24));
        assert!(integrate_psi(0, &[1, 0, 0]).is_err());
        assert!(integrate_psi(0, &[0, 0]).is_err());
        assert!(integrate_psi(3, &[7]).is_err());
    }

    #[test]
    fn kappa_one_on_m11() {
        assert_eq!(integrate_monomial(1, &[0], &[1]).unwrap(), ratio(1, 24));
        // κ_1 on M_{0,4} is the class of a point
        assert_eq!(integrate_monomial(0, &[0, 0, 0, 0], &[1]).unwrap(), rat(1));
    }

    #[test]
    fn forgetful_pullbacks() {
        let c = pullback_psi_forgetful(0, 3, 1).unwrap();
        assert_eq!(c.terms.len(), 2);
        // π^*ψ_1 is zero on M_{0,4}: ψ_1 and the divisor D_{1,4} are both points
        assert_eq!(integrate_stratum_class(&c).unwrap(), rat(0));
        // projection formula: ∫ π^*ψ_1 · ψ_2 = ∫_{M_{1,1}} ψ_1 · π_*ψ_2 = 1/24
        let c = pullback_psi_forgetful(1, 1, 1).unwrap();
        let psi2 = StratumClass::monomial(1, &[0, 1], &BTreeMap::new()).unwrap();
        assert_eq!(integrate_stratum_class(&c.times_pullback(&psi2).unwrap()).unwrap(), ratio(1, 24));
        assert!(pullback_psi_forgetful(1, 1, 2).is_err());
        assert!(pullback_kappa_forgetful(1, 1, 0).is_err());
        let k = pullback_kappa_forgetful(1, 1, 1).unwrap();
        // ∫ κ_1 − ψ_2 over M_{1,2} would need degree 2; check the shape instead
        assert_eq!(k.terms.len(), 2);
        assert!(k.terms.iter().any(|t| t.decoration.psi_legs == vec![0, 1]));
    }

    #[test]
    fn boundary_pullback_routes_classes() {
        let gamma = StableGraph::from_edges(vec![1, 1], &[(0, 1)], vec![0, 1]).unwrap();
        let psi1 = StratumClass::monomial(2, &[1, 0], &BTreeMap::new()).unwrap();
        let p = pullback_by_boundary(&psi1, &gamma).unwrap();
        assert_eq!(p.terms.len(), 1);
        assert_eq!(p.terms[0].decoration.psi_legs, vec![1, 0]);
        let k1 = StratumClass::monomial(2, &[0, 0], &BTreeMap::from([(1, 1)])).unwrap();
        let p = pullback_by_boundary(&k1, &gamma).unwrap();
        assert_eq!(p.terms.len(), 2);
        let one = StratumClass::one(2, 2).unwrap();
        assert_eq!(pullback_by_boundary(&one, &gamma).unwrap().terms.len(), 1);
    }

    #[test]
    fn irreducible_divisor_squares_to_zero_on_m12() {
        // the irreducible boundary divisor of M_{1,2} is a multiple of λ_1,
        // and λ_1^2 = 0 in genus one
        let a = StableGraph::from_edges(vec![0], &[(0, 0)], vec![0, 0]).unwrap();
        let x = boundary_intersection(&a, &a).unwrap();
        assert_eq!(x.terms.len(), 2 + 4);
        assert_eq!(integrate_stratum_class(&x.class()).unwrap(), rat(0));
    }
}
