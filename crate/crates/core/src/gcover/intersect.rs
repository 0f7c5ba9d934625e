//! Boundary strata of spaces of admissible G-covers: their intersections,
//! normal bundles, and intersections with restriction and corestriction maps.

use std::collections::BTreeSet;

use super::{corestrict_graph, AdmissibleGGraph, GraphAction};
use crate::algebra::{rat, Rational};
use crate::graphs::{enumerate_generic_ab, GenericTriple, GraphIso, GraphMorphism, StableGraph};
use crate::groups::Subgroup;
use crate::mbar::{excess_terms, Decoration, StratumClass, Term};
use crate::Error;

/// Default cap on the group order for equivariant enumeration.
pub const MAX_ENUMERATION_GROUP_ORDER: usize = 48;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GIntersectionTerm {
    pub graph: AdmissibleGGraph,
    pub to_a: GraphMorphism,
    pub to_b: GraphMorphism,
    /// One half-edge pair per G-orbit of edges hit from both sides.
    pub excess_edges: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GBoundaryIntersection {
    pub terms: Vec<GIntersectionTerm>,
}

impl GBoundaryIntersection {
    /// The terms with their excess products expanded, as decorated classes
    /// on the underlying stable graphs.
    pub fn class(&self, g: u32, n: usize) -> StratumClass {
        let mut out = StratumClass::zero(g, n);
        for t in &self.terms {
            out.terms.extend(excess_terms(t.graph.graph(), &t.excess_edges));
        }
        out.simplify()
    }
}

fn same_markings(a: &AdmissibleGGraph, b: &AdmissibleGGraph) -> Result<(), Error> {
    let bad = |w: &str| Err(Error::Mismatch(format!("the two G-graphs live on different spaces: {w}")));
    if a.group() != b.group() {
        return bad("groups differ");
    }
    if a.graph().genus() != b.graph().genus() || a.graph().num_legs() != b.graph().num_legs() {
        return bad("genus or leg count differs");
    }
    if a.leg_monodromy != b.leg_monodromy || a.distinguished_legs != b.distinguished_legs {
        return bad("leg monodromy differs");
    }
    if a.group().elements().any(|t| a.action(t).legs != b.action(t).legs) {
        return bad("actions on legs differ");
    }
    Ok(())
}

/// The G-structure a generic triple inherits from equivariant maps to A and
/// B, if there is one.
fn induce(triple: &GenericTriple, a: &AdmissibleGGraph, b: &AdmissibleGGraph) -> Option<AdmissibleGGraph> {
    let gamma = &triple.gamma;
    let group = a.group();
    let nh = gamma.num_half_edges();
    let mut from_a = vec![None; nh];
    for (y, &x) in triple.to_a.f_h.iter().enumerate() {
        from_a[x] = Some(y);
    }
    let mut from_b = vec![None; nh];
    for (y, &x) in triple.to_b.f_h.iter().enumerate() {
        from_b[x] = Some(y);
    }
    let mut monodromy = vec![0; nh];
    for x in 0..nh {
        let m = match (from_a[x], from_b[x]) {
            (Some(y), Some(z)) if a.half_edge_monodromy[y] != b.half_edge_monodromy[z] => return None,
            (Some(y), _) => a.half_edge_monodromy[y],
            (None, Some(z)) => b.half_edge_monodromy[z],
            (None, None) => return None,
        };
        monodromy[x] = m;
    }
    let mut actions = Vec::new();
    for s in group.generator_elements() {
        let mut half_edges = vec![0; nh];
        for x in 0..nh {
            let via_a = from_a[x].map(|y| triple.to_a.f_h[a.act_half_edge(s, y)]);
            let via_b = from_b[x].map(|z| triple.to_b.f_h[b.act_half_edge(s, z)]);
            half_edges[x] = match (via_a, via_b) {
                (Some(p), Some(q)) if p != q => return None,
                (Some(p), _) | (None, Some(p)) => p,
                (None, None) => unreachable!("generic triples cover every edge"),
            };
        }
        let mut vertices: Vec<usize> = (0..gamma.num_vertices()).collect();
        for v in 0..gamma.num_vertices() {
            let at = gamma.half_edges_at(v);
            let images: BTreeSet<usize> = at.iter().map(|&x| gamma.attachment(half_edges[x])).collect();
            match images.len() {
                0 => {
                    let legs = gamma.legs_at(v);
                    if let Some(&l) = legs.first() {
                        vertices[v] = gamma.leg_vertex(a.act_leg(s, l));
                    }
                }
                1 => vertices[v] = *images.iter().next().expect("one image"),
                _ => return None,
            }
        }
        let action = GraphAction { vertices, half_edges, legs: a.action(s).legs.clone() };
        for (map, target) in [(&triple.to_a, a), (&triple.to_b, b)] {
            for v in 0..gamma.num_vertices() {
                if map.f_v[action.vertices[v]] != target.act_vertex(s, map.f_v[v]) {
                    return None;
                }
            }
        }
        actions.push(action);
    }
    AdmissibleGGraph::new(
        gamma.clone(),
        group.clone(),
        &actions,
        monodromy,
        a.leg_monodromy.clone(),
        a.distinguished_legs.clone(),
    )
    .ok()
}

/// `ξ_A^* ξ_{B*}(1)` on a space of admissible G-covers: a sum over admissible
/// G-graphs with equivariant maps to A and B whose edge images cover all
/// edges, each decorated by `∏(−ψ_h − ψ_h')` over G-orbit representatives of
/// the edges hit from both sides.
pub fn boundary_intersection_h(a: &AdmissibleGGraph, b: &AdmissibleGGraph) -> Result<GBoundaryIntersection, Error> {
    boundary_intersection_h_capped(a, b, MAX_ENUMERATION_GROUP_ORDER)
}

pub fn boundary_intersection_h_capped(
    a: &AdmissibleGGraph,
    b: &AdmissibleGGraph,
    max_group_order: usize,
) -> Result<GBoundaryIntersection, Error> {
    same_markings(a, b)?;
    if a.group().order() > max_group_order {
        return Err(Error::Unsupported(format!(
            "group of order {} above the enumeration cap {max_group_order}",
            a.group().order()
        )));
    }
    let id = a.id()?;
    a.validate(&id)?;
    b.validate(&id)?;
    let mut terms = Vec::new();
    for triple in enumerate_generic_ab(a.graph(), b.graph())? {
        let Some(gg) = induce(&triple, a, b) else { continue };
        if gg.validate(&id).is_err() {
            continue;
        }
        let edges = gg.graph().edges();
        let common: BTreeSet<usize> = triple.common_edges().into_iter().collect();
        let excess_edges = gg
            .edge_orbits()
            .into_iter()
            .filter(|o| common.contains(&o[0]))
            .map(|o| edges[o[0]])
            .collect();
        terms.push(GIntersectionTerm { graph: gg, to_a: triple.to_a, to_b: triple.to_b, excess_edges });
    }
    Ok(GBoundaryIntersection { terms })
}

/// `∏ (1 − ψ_ℓ − ψ_ℓ')` over G-orbit representatives of edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalBundleChern {
    pub graph: StableGraph,
    pub factors: Vec<(usize, usize)>,
}

impl NormalBundleChern {
    /// The expansion, one term per choice of `1`, `−ψ_ℓ` or `−ψ_ℓ'` in each
    /// factor, with like terms collected.
    pub fn terms(&self) -> Vec<Term> {
        let mut out: Vec<Term> = Vec::new();
        let mut partial = vec![(rat(1), Decoration::trivial(&self.graph))];
        for &(h, h2) in &self.factors {
            let mut next = Vec::new();
            for (c, d) in &partial {
                next.push((c.clone(), d.clone()));
                for side in [h, h2] {
                    let mut e = d.clone();
                    e.psi_half_edges[side] += 1;
                    next.push((-c.clone(), e));
                }
            }
            partial = next;
        }
        for (c, d) in partial {
            match out.iter_mut().find(|t| t.decoration == d) {
                Some(t) => t.coefficient += c,
                None => out.push(Term { coefficient: c, graph: self.graph.clone(), decoration: d }),
            }
        }
        out.retain(|t| t.coefficient != rat(0));
        out
    }

    /// Terms of total ψ degree `k`.
    pub fn degree_part(&self, k: u64) -> Vec<Term> {
        self.terms().into_iter().filter(|t| t.decoration.degree() == k).collect()
    }
}

pub fn normal_bundle_chern_h(gg: &AdmissibleGGraph) -> NormalBundleChern {
    let edges = gg.graph().edges();
    NormalBundleChern {
        graph: gg.graph().clone(),
        factors: gg.edge_orbits().into_iter().map(|o| edges[o[0]]).collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeExponent {
    pub edge: (usize, usize),
    /// Number of `G_1`-orbits among the edges of this G-orbit in the image.
    pub k: usize,
}

/// For a G-graph Γ and a map `α: Γ → A` to a `G_1`-graph, the exponent
/// `k` of each G-orbit of edges; the excess class is `∏(−ψ_ℓ−ψ_ℓ')^{k−1}`.
/// We count `k` as the number of `G_1`-orbits of edges of `G·e` in the image
/// of `α`, which is `#(G·e ∩ im α)/#G_1` when `G_1` acts freely on them.
pub fn restriction_boundary_exponents(
    gamma: &AdmissibleGGraph,
    g1: &Subgroup,
    a: &StableGraph,
    alpha: &GraphMorphism,
) -> Result<Vec<EdgeExponent>, Error> {
    alpha.validate(gamma.graph(), a)?;
    let group = gamma.group();
    if !g1.elements().iter().all(|&x| x < group.order()) {
        return Err(Error::NotSubgroup("G_1 is not a subgroup of the graph's group".into()));
    }
    let image = alpha.kept_edges(gamma.graph());
    let edges = gamma.graph().edges();
    let edge_of = |t, e: usize| gamma.graph().edge_index(gamma.act_half_edge(t, edges[e].0));
    for &e in &image {
        if g1.elements().iter().any(|&t| !image.contains(&edge_of(t, e))) {
            return Err(Error::Mismatch(format!("image of the edge map is not G_1-stable at edge {e}")));
        }
    }
    let mut out = Vec::new();
    for orbit in gamma.edge_orbits() {
        let hit: Vec<usize> = orbit.iter().copied().filter(|e| image.contains(e)).collect();
        if hit.is_empty() {
            return Err(Error::Domain(format!("edge map misses the G-orbit of edge {}", orbit[0])));
        }
        let mut seen = BTreeSet::new();
        let mut k = 0;
        for &e in &hit {
            if seen.insert(e) {
                k += 1;
                for &t in g1.elements() {
                    seen.insert(edge_of(t, e));
                }
            }
        }
        out.push(EdgeExponent { edge: edges[orbit[0]], k });
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorestrictionMultiplicity {
    /// `∏ ord_G(h_ℓ̃)/ord_{G/N}(h_ℓ)` over G-orbits of edges.
    pub multiplicity: Rational,
    /// Order of the kernel of `Aut(Γ,G) → Aut(A,G/N)`.
    pub automorphisms: usize,
}

/// Multiplicity of the component of `cores^* ξ_{A*}(1)` indexed by Γ, where
/// `alpha` identifies `Γ/N` with A.
pub fn corestriction_boundary_multiplicity(
    gamma: &AdmissibleGGraph,
    n: &Subgroup,
    a: &AdmissibleGGraph,
    alpha: &GraphIso,
) -> Result<CorestrictionMultiplicity, Error> {
    let c = corestrict_graph(gamma, n)?;
    let quot = &c.graph;
    let bad = |w: &str| Err(Error::Mismatch(format!("not an isomorphism Γ/N → A: {w}")));
    if quot.group() != a.group() {
        return bad("groups differ");
    }
    if alpha.vertex.len() != quot.graph().num_vertices() || alpha.half_edge.len() != quot.graph().num_half_edges() {
        return bad("map sizes");
    }
    let mut vs = alpha.vertex.clone();
    let mut hs = alpha.half_edge.clone();
    vs.sort_unstable();
    hs.sort_unstable();
    if vs != (0..vs.len()).collect::<Vec<_>>() || hs != (0..hs.len()).collect::<Vec<_>>() {
        return bad("not bijective");
    }
    if quot.graph().relabel(alpha) != *a.graph() {
        return bad("graphs do not match");
    }
    for h in 0..alpha.half_edge.len() {
        if a.half_edge_monodromy[alpha.half_edge[h]] != quot.half_edge_monodromy[h] {
            return bad("half-edge monodromy differs");
        }
    }
    if a.leg_monodromy != quot.leg_monodromy {
        return bad("leg monodromy differs");
    }
    for s in a.group().generator_elements() {
        for h in 0..alpha.half_edge.len() {
            if alpha.half_edge[quot.act_half_edge(s, h)] != a.act_half_edge(s, alpha.half_edge[h]) {
                return bad("not equivariant");
            }
        }
    }
    let g = gamma.group();
    let q = &c.quotient;
    let edges = gamma.graph().edges();
    let mut multiplicity = rat(1);
    for orbit in gamma.edge_orbits() {
        let h = gamma.half_edge_monodromy[edges[orbit[0]].0];
        multiplicity *= Rational::new(g.order_of(h).into(), q.group.order_of(q.project(h)).into());
    }
    let gens = g.generator_elements();
    let automorphisms = gamma
        .graph()
        .automorphisms()
        .into_iter()
        .filter(|phi| {
            let equivariant = gens.iter().all(|&s| {
                (0..phi.vertex.len()).all(|v| phi.vertex[gamma.act_vertex(s, v)] == gamma.act_vertex(s, phi.vertex[v]))
                    && (0..phi.half_edge.len())
                        .all(|h| phi.half_edge[gamma.act_half_edge(s, h)] == gamma.act_half_edge(s, phi.half_edge[h]))
            });
            let monodromy = (0..phi.half_edge.len())
                .all(|h| gamma.half_edge_monodromy[phi.half_edge[h]] == gamma.half_edge_monodromy[h]);
            let trivial_below = (0..phi.vertex.len()).all(|v| c.vertex_map[phi.vertex[v]] == c.vertex_map[v])
                && (0..phi.half_edge.len()).all(|h| c.half_edge_map[phi.half_edge[h]] == c.half_edge_map[h]);
            equivariant && monodromy && trivial_below
        })
        .count();
    Ok(CorestrictionMultiplicity { multiplicity, automorphisms })
}
