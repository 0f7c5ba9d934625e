//! Admissible G-covers through their dual graphs: monodromy data, admissible
//! G-graphs, restriction and corestriction, and the intersection, pullback
//! and degree formulas on spaces of admissible G-covers.
//!
//! Flags are half-edges and legs. Every flag `f` carries a monodromy element
//! `h_f` generating its stabilizer. Legs are zero based here and one based
//! (by label) in JSON, matching [`crate::graphs`].

mod degrees;
mod hurwitz;
mod intersect;
mod pullback;
mod relabel;

pub use degrees::*;
pub use hurwitz::*;
pub use intersect::*;
pub use pullback::*;
pub use relabel::*;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::algebra::Rational;
use crate::graphs::{GraphJson, StableGraph};
use crate::groups::{Elt, FiniteGroup, GroupJson, Subgroup};
use crate::Error;

/// Labels used in [`Error::Violation`] by [`AdmissibleGGraph::validate`].
pub mod labels {
    pub const ACTION: &str = "action";
    pub const STABILIZER: &str = "stabilizer-generator";
    pub const EQUIVARIANCE: &str = "equivariance";
    pub const EDGE_COLLAPSE: &str = "edge-collapse";
    pub const BALANCING: &str = "balancing";
    pub const VERTEX_RH: &str = "vertex-riemann-hurwitz";
    pub const XI: &str = "xi-agreement";
    pub const GENUS: &str = "genus";
}

pub(crate) fn element_from_json(g: &FiniteGroup, one_based: &[u32]) -> Result<Elt, Error> {
    if one_based.len() != g.degree() || one_based.iter().any(|&x| x == 0) {
        return Err(Error::Parse(format!("{one_based:?} is not a one-based permutation of degree {}", g.degree())));
    }
    let p: Vec<u32> = one_based.iter().map(|&x| x - 1).collect();
    g.element(&p).ok_or_else(|| Error::Parse(format!("{one_based:?} is not in the group")))
}

pub(crate) fn element_to_json(g: &FiniteGroup, e: Elt) -> Vec<u32> {
    g.perm(e).iter().map(|&x| x + 1).collect()
}

/// An ordered tuple `(h_1, ..., h_b)` of group elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonodromyDatum {
    pub group: FiniteGroup,
    pub elements: Vec<Elt>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct MonodromyJson {
    pub group: GroupJson,
    pub elements: Vec<Vec<u32>>,
}

impl MonodromyDatum {
    pub fn new(group: FiniteGroup, elements: Vec<Elt>) -> Result<Self, Error> {
        if let Some(&e) = elements.iter().find(|&&e| e >= group.order()) {
            return Err(Error::Domain(format!("element index {e} outside a group of order {}", group.order())));
        }
        Ok(MonodromyDatum { group, elements })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn from_json(j: &MonodromyJson) -> Result<Self, Error> {
        let group = FiniteGroup::from_json(&j.group)?;
        let elements = j.elements.iter().map(|p| element_from_json(&group, p)).collect::<Result<_, _>>()?;
        Ok(MonodromyDatum { group, elements })
    }

    pub fn to_json(&self) -> MonodromyJson {
        MonodromyJson {
            group: self.group.to_json(),
            elements: self.elements.iter().map(|&e| element_to_json(&self.group, e)).collect(),
        }
    }
}

/// Solves `2g-2 = #G[(2g'-2) + Σ(ord h_i - 1)/ord h_i]` for the target genus.
/// Returns `(g', r, b)` with `r = Σ #G/ord h_i` marked points upstairs.
pub fn riemann_hurwitz_target(g: u32, group: &FiniteGroup, xi: &[Elt]) -> Result<(u32, usize, usize), Error> {
    let n = group.order() as i64;
    let mut ramification = 0i64;
    let mut r = 0usize;
    for &h in xi {
        if h >= group.order() {
            return Err(Error::Domain(format!("element index {h} outside the group")));
        }
        let o = group.order_of(h) as i64;
        ramification += n / o * (o - 1);
        r += (n / o) as usize;
    }
    // 2g' - 2 = (2g - 2 - ramification) / #G
    let lhs = 2 * g as i64 - 2 - ramification;
    if lhs % n != 0 || (lhs / n) % 2 != 0 {
        return Err(Error::Domain(format!(
            "Riemann-Hurwitz has no integral solution: 2g-2 = {} with #G = {n} and ramification {ramification}",
            2 * g as i64 - 2
        )));
    }
    let target = lhs / n / 2 + 1;
    if target < 0 {
        return Err(Error::Domain(format!("Riemann-Hurwitz gives negative target genus {target}")));
    }
    Ok((target as u32, r, xi.len()))
}

/// The discrete data `(g, G, ξ)` naming a space of admissible G-covers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HurwitzSpaceId {
    pub g: u32,
    pub group: FiniteGroup,
    pub xi: Vec<Elt>,
    pub target_genus: u32,
    pub marked_points: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct HurwitzSpaceJson {
    pub g: u32,
    pub group: GroupJson,
    pub xi: Vec<Vec<u32>>,
}

impl HurwitzSpaceId {
    pub fn new(g: u32, group: FiniteGroup, xi: Vec<Elt>) -> Result<Self, Error> {
        let (target_genus, marked_points, _) = riemann_hurwitz_target(g, &group, &xi)?;
        Ok(HurwitzSpaceId { g, group, xi, target_genus, marked_points })
    }

    pub fn b(&self) -> usize {
        self.xi.len()
    }

    pub fn datum(&self) -> MonodromyDatum {
        MonodromyDatum { group: self.group.clone(), elements: self.xi.clone() }
    }

    pub fn from_json(j: &HurwitzSpaceJson) -> Result<Self, Error> {
        let group = FiniteGroup::from_json(&j.group)?;
        let xi = j.xi.iter().map(|p| element_from_json(&group, p)).collect::<Result<_, _>>()?;
        Self::new(j.g, group, xi)
    }

    pub fn to_json(&self) -> HurwitzSpaceJson {
        HurwitzSpaceJson {
            g: self.g,
            group: self.group.to_json(),
            xi: self.xi.iter().map(|&e| element_to_json(&self.group, e)).collect(),
        }
    }
}

/// Images of vertices, half-edges and legs under one group element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GraphAction {
    pub vertices: Vec<usize>,
    pub half_edges: Vec<usize>,
    pub legs: Vec<usize>,
}

impl GraphAction {
    pub fn identity(g: &StableGraph) -> Self {
        GraphAction {
            vertices: (0..g.num_vertices()).collect(),
            half_edges: (0..g.num_half_edges()).collect(),
            legs: (0..g.num_legs()).collect(),
        }
    }

    /// `self` after `other`.
    fn compose(&self, other: &GraphAction) -> GraphAction {
        GraphAction {
            vertices: other.vertices.iter().map(|&v| self.vertices[v]).collect(),
            half_edges: other.half_edges.iter().map(|&h| self.half_edges[h]).collect(),
            legs: other.legs.iter().map(|&l| self.legs[l]).collect(),
        }
    }
}

fn is_bijection(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    p.iter().all(|&x| x < p.len() && !std::mem::replace(&mut seen[x], true))
}

/// A stable graph with a G-action by graph automorphisms (legs may move), a
/// monodromy element on every flag and one distinguished leg per leg orbit.
///
/// Construction only checks that the action is a homomorphism into the
/// automorphisms of the graph; [`AdmissibleGGraph::validate`] checks the
/// admissibility conditions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissibleGGraph {
    graph: StableGraph,
    group: FiniteGroup,
    /// Indexed by group element.
    action: Vec<GraphAction>,
    pub half_edge_monodromy: Vec<Elt>,
    pub leg_monodromy: Vec<Elt>,
    /// Leg orbit `i` is represented by `distinguished_legs[i]`.
    pub distinguished_legs: Vec<usize>,
}

/// JSON form. `action` has one entry per generator of `group`, in order;
/// legs are one-based labels throughout, group elements one-based images.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct GGraphJson {
    pub group: GroupJson,
    pub graph: GraphJson,
    pub action: Vec<GraphAction>,
    pub half_edge_monodromy: Vec<Vec<u32>>,
    pub leg_monodromy: Vec<Vec<u32>>,
    pub distinguished_legs: Vec<usize>,
}

impl AdmissibleGGraph {
    /// `generator_action[k]` is the action of `group.generators()[k]`.
    pub fn new(
        graph: StableGraph,
        group: FiniteGroup,
        generator_action: &[GraphAction],
        half_edge_monodromy: Vec<Elt>,
        leg_monodromy: Vec<Elt>,
        distinguished_legs: Vec<usize>,
    ) -> Result<Self, Error> {
        let bad = |w: String| Err(Error::violation(labels::ACTION, w));
        let gens = group.generator_elements();
        if generator_action.len() != gens.len() {
            return bad(format!("{} generator actions for {} generators", generator_action.len(), gens.len()));
        }
        for (k, a) in generator_action.iter().enumerate() {
            if let Err(w) = check_automorphism(&graph, a) {
                return bad(format!("generator {k}: {w}"));
            }
        }
        if half_edge_monodromy.len() != graph.num_half_edges() || leg_monodromy.len() != graph.num_legs() {
            return bad("monodromy tables do not match the graph".into());
        }
        if half_edge_monodromy.iter().chain(&leg_monodromy).any(|&h| h >= group.order()) {
            return bad("monodromy element outside the group".into());
        }
        if distinguished_legs.iter().any(|&l| l >= graph.num_legs()) {
            return bad("distinguished leg out of range".into());
        }
        // breadth first over the Cayley graph, then check every Cayley edge
        let mut action: Vec<Option<GraphAction>> = vec![None; group.order()];
        action[group.identity()] = Some(GraphAction::identity(&graph));
        let mut queue = std::collections::VecDeque::from([group.identity()]);
        while let Some(x) = queue.pop_front() {
            for (k, &s) in gens.iter().enumerate() {
                let y = group.mul(s, x);
                if action[y].is_none() {
                    action[y] = Some(generator_action[k].compose(action[x].as_ref().expect("visited")));
                    queue.push_back(y);
                }
            }
        }
        let action: Vec<GraphAction> = action.into_iter().map(|a| a.expect("generators generate")).collect();
        for x in group.elements() {
            for (k, &s) in gens.iter().enumerate() {
                if action[group.mul(s, x)] != generator_action[k].compose(&action[x]) {
                    return bad(format!("generator {k} and element {x}: not a homomorphism"));
                }
            }
        }
        Ok(AdmissibleGGraph { graph, group, action, half_edge_monodromy, leg_monodromy, distinguished_legs })
    }

    /// The trivial group acting on `graph`, every leg its own orbit.
    pub fn with_trivial_group(graph: StableGraph) -> Self {
        let n = graph.num_legs();
        let nh = graph.num_half_edges();
        AdmissibleGGraph::new(graph, FiniteGroup::trivial(), &[], vec![0; nh], vec![0; n], (0..n).collect())
            .expect("trivial action")
    }

    pub fn graph(&self) -> &StableGraph {
        &self.graph
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn action(&self, t: Elt) -> &GraphAction {
        &self.action[t]
    }

    pub fn generator_actions(&self) -> Vec<GraphAction> {
        self.group.generator_elements().into_iter().map(|s| self.action[s].clone()).collect()
    }

    pub fn act_vertex(&self, t: Elt, v: usize) -> usize {
        self.action[t].vertices[v]
    }

    pub fn act_half_edge(&self, t: Elt, h: usize) -> usize {
        self.action[t].half_edges[h]
    }

    pub fn act_leg(&self, t: Elt, l: usize) -> usize {
        self.action[t].legs[l]
    }

    /// The space this graph claims to live in: its genus, group and the
    /// monodromy at the distinguished legs.
    pub fn id(&self) -> Result<HurwitzSpaceId, Error> {
        let xi = self.distinguished_legs.iter().map(|&l| self.leg_monodromy[l]).collect();
        HurwitzSpaceId::new(self.graph.genus() as u32, self.group.clone(), xi)
    }

    fn subgroup_where(&self, pred: impl Fn(Elt) -> bool) -> Subgroup {
        let elems: Vec<Elt> = self.group.elements().filter(|&t| pred(t)).collect();
        self.group.subgroup(&elems).expect("stabilizers are subgroups")
    }

    pub fn vertex_stabilizer(&self, v: usize) -> Subgroup {
        self.subgroup_where(|t| self.act_vertex(t, v) == v)
    }

    pub fn half_edge_stabilizer(&self, h: usize) -> Subgroup {
        self.subgroup_where(|t| self.act_half_edge(t, h) == h)
    }

    pub fn leg_stabilizer(&self, l: usize) -> Subgroup {
        self.subgroup_where(|t| self.act_leg(t, l) == l)
    }

    pub fn half_edge_orbit(&self, h: usize) -> BTreeSet<usize> {
        self.group.elements().map(|t| self.act_half_edge(t, h)).collect()
    }

    pub fn leg_orbit(&self, l: usize) -> BTreeSet<usize> {
        self.group.elements().map(|t| self.act_leg(t, l)).collect()
    }

    /// Edge orbits, each listed by its edge indices in increasing order;
    /// orbits sorted by smallest edge.
    pub fn edge_orbits(&self) -> Vec<Vec<usize>> {
        let edges = self.graph.edges();
        let mut seen = vec![false; edges.len()];
        let mut out = Vec::new();
        for e in 0..edges.len() {
            if seen[e] {
                continue;
            }
            let orbit: BTreeSet<usize> = self
                .group
                .elements()
                .map(|t| self.graph.edge_index(self.act_half_edge(t, edges[e].0)))
                .collect();
            for &x in &orbit {
                seen[x] = true;
            }
            out.push(orbit.into_iter().collect());
        }
        out
    }

    /// Checks the admissibility conditions and agreement with `id`, in the
    /// order stabilizer-generator, equivariance, edge-collapse, balancing,
    /// vertex-riemann-hurwitz, xi-agreement, genus. The first failure is
    /// reported with a witness.
    pub fn validate(&self, id: &HurwitzSpaceId) -> Result<(), Error> {
        if id.group != self.group {
            return Err(Error::Mismatch("graph and space have different groups".into()));
        }
        let g = &self.group;
        let nh = self.graph.num_half_edges();
        let flags: Vec<(&str, usize, Elt, Subgroup)> = (0..nh)
            .map(|h| ("half-edge", h, self.half_edge_monodromy[h], self.half_edge_stabilizer(h)))
            .chain((0..self.graph.num_legs()).map(|l| ("leg", l, self.leg_monodromy[l], self.leg_stabilizer(l))))
            .collect();
        for (kind, f, h, stab) in &flags {
            if g.cyclic_subgroup(*h) != *stab {
                return Err(Error::violation(
                    labels::STABILIZER,
                    format!("{kind} {f}: stabilizer of order {} is not generated by element {h}", stab.order()),
                ));
            }
        }
        for s in g.generator_elements() {
            for h in 0..nh {
                let image = self.act_half_edge(s, h);
                if self.half_edge_monodromy[image] != g.conj(s, self.half_edge_monodromy[h]) {
                    return Err(Error::violation(
                        labels::EQUIVARIANCE,
                        format!("half-edge {h}, element {s}: monodromy at the image is not the conjugate"),
                    ));
                }
            }
            for l in 0..self.graph.num_legs() {
                let image = self.act_leg(s, l);
                if self.leg_monodromy[image] != g.conj(s, self.leg_monodromy[l]) {
                    return Err(Error::violation(
                        labels::EQUIVARIANCE,
                        format!("leg {l}, element {s}: monodromy at the image is not the conjugate"),
                    ));
                }
            }
        }
        for (a, b) in self.graph.edges() {
            if let Some(t) = g.elements().find(|&t| self.act_half_edge(t, a) == b) {
                return Err(Error::violation(
                    labels::EDGE_COLLAPSE,
                    format!("edge ({a}, {b}), element {t} swaps its half-edges"),
                ));
            }
        }
        for (a, b) in self.graph.edges() {
            if self.half_edge_monodromy[b] != g.inv(self.half_edge_monodromy[a]) {
                return Err(Error::violation(
                    labels::BALANCING,
                    format!(
                        "edge ({a}, {b}), monodromy {} and {} are not inverse",
                        self.half_edge_monodromy[a], self.half_edge_monodromy[b]
                    ),
                ));
            }
        }
        // every subgroup of a stabilizer has to give an integral quotient, or
        // restriction and corestriction leave the admissible graphs
        for v in 0..self.graph.num_vertices() {
            let stab = self.vertex_stabilizer(v);
            let mut subgroups = g.subgroups_of(&stab);
            subgroups.retain(|k| *k != stab);
            subgroups.insert(0, stab);
            for k in &subgroups {
                self.vertex_quotient_genus(v, k).map_err(|w| {
                    Error::violation(labels::VERTEX_RH, format!("vertex {v}, subgroup of order {}: {w}", k.order()))
                })?;
            }
        }
        self.check_distinguished(id)?;
        if self.graph.genus() != id.g as i64 {
            return Err(Error::violation(
                labels::GENUS,
                format!("graph genus {} but the space has genus {}", self.graph.genus(), id.g),
            ));
        }
        Ok(())
    }

    fn check_distinguished(&self, id: &HurwitzSpaceId) -> Result<(), Error> {
        let bad = |w: String| Err(Error::violation(labels::XI, w));
        if self.distinguished_legs.len() != id.xi.len() {
            return bad(format!("{} distinguished legs for {} monodromy elements", self.distinguished_legs.len(), id.xi.len()));
        }
        let mut covered = vec![false; self.graph.num_legs()];
        for (i, &l) in self.distinguished_legs.iter().enumerate() {
            if covered[l] {
                return bad(format!("distinguished leg {l} lies in an earlier orbit"));
            }
            for x in self.leg_orbit(l) {
                covered[x] = true;
            }
            if self.leg_monodromy[l] != id.xi[i] {
                return bad(format!("orbit {i}: leg {l} has monodromy {} but ξ has {}", self.leg_monodromy[l], id.xi[i]));
            }
        }
        if let Some(l) = covered.iter().position(|&c| !c) {
            return bad(format!("leg {l} is in no distinguished orbit"));
        }
        Ok(())
    }

    /// Genus of the quotient of the curve at `v` by a subgroup `k` of its
    /// stabilizer, from Riemann-Hurwitz over the `k`-orbits of flags at `v`.
    pub(crate) fn vertex_quotient_genus(&self, v: usize, k: &Subgroup) -> Result<u32, String> {
        let g = &self.group;
        let n = k.order() as i64;
        let mut flags: Vec<(bool, usize)> = self.graph.half_edges_at(v).into_iter().map(|h| (true, h)).collect();
        flags.extend(self.graph.legs_at(v).into_iter().map(|l| (false, l)));
        let mut seen = BTreeSet::new();
        let mut ramification = 0i64;
        for &(is_half_edge, f) in &flags {
            if seen.contains(&(is_half_edge, f)) {
                continue;
            }
            for &t in k.elements() {
                let image = if is_half_edge { self.act_half_edge(t, f) } else { self.act_leg(t, f) };
                seen.insert((is_half_edge, image));
            }
            let h = if is_half_edge { self.half_edge_monodromy[f] } else { self.leg_monodromy[f] };
            let s = g.intersection(&g.cyclic_subgroup(h), k).order() as i64;
            ramification += n / s * (s - 1);
        }
        let lhs = 2 * self.graph.vertex_genus(v) as i64 - 2 - ramification;
        if lhs % n != 0 || (lhs / n) % 2 != 0 || lhs / n / 2 + 1 < 0 {
            return Err(format!(
                "genus {} with a group of order {n} and ramification {ramification} has no integral quotient genus",
                self.graph.vertex_genus(v)
            ));
        }
        Ok((lhs / n / 2 + 1) as u32)
    }

    pub fn from_json(j: &GGraphJson) -> Result<Self, Error> {
        let group = FiniteGroup::from_json(&j.group)?;
        let graph = StableGraph::from_json(&j.graph)?;
        let mut action = Vec::new();
        for a in &j.action {
            if a.legs.iter().any(|&l| l == 0) {
                return Err(Error::Parse("leg labels in actions are one based".into()));
            }
            action.push(GraphAction {
                vertices: a.vertices.clone(),
                half_edges: a.half_edges.clone(),
                legs: a.legs.iter().map(|&l| l - 1).collect(),
            });
        }
        let he = j.half_edge_monodromy.iter().map(|p| element_from_json(&group, p)).collect::<Result<_, _>>()?;
        let lm = j.leg_monodromy.iter().map(|p| element_from_json(&group, p)).collect::<Result<_, _>>()?;
        if j.distinguished_legs.iter().any(|&l| l == 0) {
            return Err(Error::Parse("distinguished legs are one-based labels".into()));
        }
        let dl = j.distinguished_legs.iter().map(|&l| l - 1).collect();
        AdmissibleGGraph::new(graph, group, &action, he, lm, dl)
    }

    pub fn to_json(&self) -> GGraphJson {
        let g = &self.group;
        GGraphJson {
            group: g.to_json(),
            graph: self.graph.to_json(),
            action: self
                .generator_actions()
                .into_iter()
                .map(|a| GraphAction { legs: a.legs.iter().map(|&l| l + 1).collect(), ..a })
                .collect(),
            half_edge_monodromy: self.half_edge_monodromy.iter().map(|&e| element_to_json(g, e)).collect(),
            leg_monodromy: self.leg_monodromy.iter().map(|&e| element_to_json(g, e)).collect(),
            distinguished_legs: self.distinguished_legs.iter().map(|&l| l + 1).collect(),
        }
    }
}

/// A G-orbit of vertices: the stabilizer of its first vertex and the genus
/// of that vertex's quotient curve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexOrbit {
    pub stabilizer: Subgroup,
    pub quotient_genus: u32,
}

/// A G-orbit of edges from vertex orbit `from` to vertex orbit `to`. The
/// half-edge at `from` has monodromy `monodromy`; its partner is the flag
/// `shift` times the base flag at `to`, with monodromy
/// `shift^-1 monodromy^-1 shift` there.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EdgeOrbit {
    pub from: usize,
    pub to: usize,
    pub monodromy: Elt,
    pub shift: Elt,
}

/// A G-orbit of legs at vertex orbit `vertex`; its first leg is distinguished.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LegOrbit {
    pub vertex: usize,
    pub monodromy: Elt,
}

impl AdmissibleGGraph {
    /// Builds the G-graph with the given orbits of vertices, edges and legs,
    /// each orbit laid out along the canonical cosets of its stabilizer.
    /// Vertex genera come from Riemann-Hurwitz.
    pub fn from_orbits(
        group: &FiniteGroup,
        vertices: &[VertexOrbit],
        edges: &[EdgeOrbit],
        legs: &[LegOrbit],
    ) -> Result<Self, Error> {
        let g = group;
        let bad = |w: String| Err(Error::Domain(w));
        // per orbit: canonical coset reps and element -> coset index
        let layout = |s: &Subgroup| g.coset_table(s);
        let vtables: Vec<_> = vertices.iter().map(|o| layout(&o.stabilizer)).collect();
        let mut voff = vec![0];
        for (reps, _) in &vtables {
            voff.push(voff.last().unwrap() + reps.len());
        }
        let vertex_of = |i: usize, t: Elt| voff[i] + vtables[i].1[t];
        let mut ramification = vec![Rational::from_integer(0.into()); vertices.len()];
        let mut note = |i: usize, h: Elt| {
            let o = g.order_of(h) as i64;
            ramification[i] += Rational::new((o - 1).into(), o.into());
        };
        let mut attach = Vec::new();
        let mut involution = Vec::new();
        let mut he_mono = Vec::new();
        // (offset, coset table, shift) for the two flag orbits of each edge orbit
        let mut etables = Vec::new();
        for (k, e) in edges.iter().enumerate() {
            if e.from >= vertices.len() || e.to >= vertices.len() {
                return bad(format!("edge orbit {k}: vertex orbit out of range"));
            }
            let h2 = g.conj(g.inv(e.shift), g.inv(e.monodromy));
            if !vertices[e.from].stabilizer.contains(e.monodromy) || !vertices[e.to].stabilizer.contains(h2) {
                return bad(format!("edge orbit {k}: monodromy outside the vertex stabilizer"));
            }
            note(e.from, e.monodromy);
            note(e.to, h2);
            let c1 = g.cyclic_subgroup(e.monodromy);
            let c2 = g.cyclic_subgroup(h2);
            let (reps1, which1) = g.coset_table(&c1);
            let (_, which2) = g.coset_table(&c2);
            let off = attach.len();
            let m = reps1.len();
            attach.resize(off + 2 * m, 0);
            involution.resize(off + 2 * m, 0);
            he_mono.resize(off + 2 * m, 0);
            for (c, &t) in reps1.iter().enumerate() {
                let tu = g.mul(t, e.shift);
                let c2i = which2[tu];
                attach[off + c] = vertex_of(e.from, t);
                attach[off + m + c2i] = vertex_of(e.to, tu);
                involution[off + c] = off + m + c2i;
                involution[off + m + c2i] = off + c;
                he_mono[off + c] = g.conj(t, e.monodromy);
                he_mono[off + m + c2i] = g.conj(tu, h2);
            }
            etables.push((off, which1, which2));
        }
        let mut leg_vertex = Vec::new();
        let mut leg_mono = Vec::new();
        let mut ltables = Vec::new();
        let mut distinguished = Vec::new();
        for (k, l) in legs.iter().enumerate() {
            if l.vertex >= vertices.len() || !vertices[l.vertex].stabilizer.contains(l.monodromy) {
                return bad(format!("leg orbit {k}: bad vertex orbit or monodromy outside its stabilizer"));
            }
            note(l.vertex, l.monodromy);
            let (reps, which) = g.coset_table(&g.cyclic_subgroup(l.monodromy));
            distinguished.push(leg_vertex.len());
            ltables.push((leg_vertex.len(), which));
            for &t in &reps {
                leg_vertex.push(vertex_of(l.vertex, t));
                leg_mono.push(g.conj(t, l.monodromy));
            }
        }
        let mut genera = Vec::new();
        for (i, o) in vertices.iter().enumerate() {
            let n = Rational::from_integer((o.stabilizer.order() as i64).into());
            let two_g_minus_two = n * (Rational::from_integer((2 * o.quotient_genus as i64 - 2).into()) + &ramification[i]);
            let genus = match crate::algebra::rational_to_i64(&two_g_minus_two) {
                Some(x) if x % 2 == 0 => x / 2 + 1,
                _ => return bad(format!("vertex orbit {i}: Riemann-Hurwitz gives a non-integral genus")),
            };
            if genus < 0 {
                return bad(format!("vertex orbit {i}: negative genus"));
            }
            for _ in 0..vtables[i].0.len() {
                genera.push(genus as u32);
            }
        }
        let graph = StableGraph::new(genera, attach, involution, leg_vertex)?;
        let mut actions = Vec::new();
        for s in g.generator_elements() {
            let mut vs = vec![0; graph.num_vertices()];
            for (i, (reps, _)) in vtables.iter().enumerate() {
                for (c, &t) in reps.iter().enumerate() {
                    vs[voff[i] + c] = vertex_of(i, g.mul(s, t));
                }
            }
            let mut hs = vec![0; graph.num_half_edges()];
            for (off, which1, which2) in &etables {
                let m = (attach_len(which1)) as usize;
                for t in g.elements() {
                    let st = g.mul(s, t);
                    hs[off + which1[t]] = off + which1[st];
                    hs[off + m + which2[t]] = off + m + which2[st];
                }
            }
            let mut ls = vec![0; graph.num_legs()];
            for (off, which) in &ltables {
                for t in g.elements() {
                    ls[off + which[t]] = off + which[g.mul(s, t)];
                }
            }
            actions.push(GraphAction { vertices: vs, half_edges: hs, legs: ls });
        }
        AdmissibleGGraph::new(graph, g.clone(), &actions, he_mono, leg_mono, distinguished)
    }
}

/// Number of cosets in a coset table's `which` vector.
fn attach_len(which: &[usize]) -> usize {
    which.iter().max().map_or(0, |m| m + 1)
}

fn check_automorphism(graph: &StableGraph, a: &GraphAction) -> Result<(), String> {
    if a.vertices.len() != graph.num_vertices()
        || a.half_edges.len() != graph.num_half_edges()
        || a.legs.len() != graph.num_legs()
    {
        return Err("sizes do not match the graph".into());
    }
    if !is_bijection(&a.vertices) || !is_bijection(&a.half_edges) || !is_bijection(&a.legs) {
        return Err("not a bijection".into());
    }
    for v in 0..graph.num_vertices() {
        if graph.vertex_genus(a.vertices[v]) != graph.vertex_genus(v) {
            return Err(format!("vertex {v} moved to a vertex of another genus"));
        }
    }
    for h in 0..graph.num_half_edges() {
        if graph.attachment(a.half_edges[h]) != a.vertices[graph.attachment(h)] {
            return Err(format!("half-edge {h} detached from its vertex"));
        }
        if a.half_edges[graph.partner(h)] != graph.partner(a.half_edges[h]) {
            return Err(format!("edge of half-edge {h} not preserved"));
        }
    }
    for l in 0..graph.num_legs() {
        if graph.leg_vertex(a.legs[l]) != a.vertices[graph.leg_vertex(l)] {
            return Err(format!("leg {l} detached from its vertex"));
        }
    }
    Ok(())
}
