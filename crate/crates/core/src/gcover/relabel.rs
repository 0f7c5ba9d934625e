//! Restriction to a subgroup and corestriction to a quotient, on monodromy
//! data and on admissible G-graphs.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{labels, AdmissibleGGraph, GraphAction, MonodromyDatum};
use crate::graphs::StableGraph;
use crate::groups::{Elt, FiniteGroup, QuotientGroup, Subgroup};
use crate::Error;

/// A subgroup promoted to a group, with element translation both ways.
#[derive(Clone, Debug)]
pub struct SubgroupEmbedding {
    pub group: FiniteGroup,
    /// Element of the subgroup -> element of the parent.
    pub inclusion: Vec<Elt>,
    restriction: BTreeMap<Elt, Elt>,
}

impl SubgroupEmbedding {
    pub fn new(parent: &FiniteGroup, h: &Subgroup) -> Self {
        let (group, inclusion) = parent.subgroup_as_group(h);
        let restriction = inclusion.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        SubgroupEmbedding { group, inclusion, restriction }
    }

    /// The subgroup element equal to the parent element `e`, if any.
    pub fn restrict(&self, e: Elt) -> Option<Elt> {
        self.restriction.get(&e).copied()
    }
}

/// One distinguished point after restriction: orbit `orbit` of the original
/// data, moved by `representative`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelabelEntry {
    pub orbit: usize,
    pub representative: Elt,
}

/// Ordered representatives `t_ij` of the `G_1`-orbits on each `G/<h_i>`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelabelingData {
    pub entries: Vec<RelabelEntry>,
}

impl RelabelingData {
    /// Orbits in order of `i`, then by smallest coset representative.
    pub fn canonical(group: &FiniteGroup, g1: &Subgroup, xi: &[Elt]) -> Result<Self, Error> {
        let mut entries = Vec::new();
        for (i, &h) in xi.iter().enumerate() {
            for o in group.orbit_on_cosets(g1, &group.cyclic_subgroup(h))? {
                entries.push(RelabelEntry { orbit: i, representative: o.representative });
            }
        }
        Ok(RelabelingData { entries })
    }

    pub fn validate(&self, group: &FiniteGroup, g1: &Subgroup, xi: &[Elt]) -> Result<(), Error> {
        let bad = |w: String| Err(Error::Domain(format!("invalid relabeling data: {w}")));
        let mut hit: Vec<Vec<bool>> = Vec::new();
        let mut orbits = Vec::new();
        for &h in xi {
            let c = group.cyclic_subgroup(h);
            let (reps, which) = group.coset_table(&c);
            let os = group.orbit_on_cosets(g1, &c)?;
            // coset index -> orbit index
            let mut orbit_of = vec![0; reps.len()];
            for (k, o) in os.iter().enumerate() {
                for &r in &o.cosets {
                    orbit_of[which[r]] = k;
                }
            }
            hit.push(vec![false; os.len()]);
            orbits.push((which, orbit_of));
        }
        for e in &self.entries {
            if e.orbit >= xi.len() || e.representative >= group.order() {
                return bad(format!("entry {e:?} out of range"));
            }
            let (which, orbit_of) = &orbits[e.orbit];
            let k = orbit_of[which[e.representative]];
            if std::mem::replace(&mut hit[e.orbit][k], true) {
                return bad(format!("two representatives in one orbit of marked orbit {}", e.orbit));
            }
        }
        if let Some(i) = hit.iter().position(|h| h.iter().any(|&x| !x)) {
            return bad(format!("marked orbit {i} has an orbit with no representative"));
        }
        Ok(())
    }
}

/// `r` with `<h^r> = <h> ∩ G_1`.
fn restriction_power(group: &FiniteGroup, g1: &Subgroup, h: Elt) -> usize {
    group.order_of(h) / group.intersection(&group.cyclic_subgroup(h), g1).order()
}

/// The restricted data `h'_ij = t_ij h_i^r t_ij^-1` with
/// `r = #<t h_i t^-1> / #(<t h_i t^-1> ∩ G_1)`, in the order of `rel`
/// (canonical when `None`), as elements of `G_1`. Also returns the powers.
pub fn restriction_monodromy(
    xi: &MonodromyDatum,
    g1: &Subgroup,
    rel: Option<&RelabelingData>,
) -> Result<(MonodromyDatum, Vec<usize>), Error> {
    let g = &xi.group;
    let canonical;
    let rel = match rel {
        Some(r) => {
            r.validate(g, g1, &xi.elements)?;
            r
        }
        None => {
            canonical = RelabelingData::canonical(g, g1, &xi.elements)?;
            &canonical
        }
    };
    let emb = SubgroupEmbedding::new(g, g1);
    let mut elements = Vec::new();
    let mut powers = Vec::new();
    for e in &rel.entries {
        let conj = g.conj(e.representative, xi.elements[e.orbit]);
        let r = restriction_power(g, g1, conj);
        let h = g.pow(conj, r as i64);
        elements.push(emb.restrict(h).ok_or_else(|| Error::Internal("restricted monodromy left G_1".into()))?);
        powers.push(r);
    }
    Ok((MonodromyDatum { group: emb.group, elements }, powers))
}

/// Componentwise image in `G/N`.
pub fn corestriction_monodromy(xi: &MonodromyDatum, n: &Subgroup) -> Result<(MonodromyDatum, QuotientGroup), Error> {
    let q = xi.group.quotient(n)?;
    let elements = xi.elements.iter().map(|&h| q.project(h)).collect();
    Ok((MonodromyDatum { group: q.group.clone(), elements }, q))
}

/// The same graph with the action restricted to `G_1`, flag monodromy
/// replaced by generators of the smaller stabilizers and distinguished legs
/// moved by the relabeling data.
pub fn restrict_graph(
    gg: &AdmissibleGGraph,
    g1: &Subgroup,
    rel: Option<&RelabelingData>,
) -> Result<AdmissibleGGraph, Error> {
    let g = gg.group();
    let xi: Vec<Elt> = gg.distinguished_legs.iter().map(|&l| gg.leg_monodromy[l]).collect();
    let rel = match rel {
        Some(r) => {
            r.validate(g, g1, &xi)?;
            r.clone()
        }
        None => RelabelingData::canonical(g, g1, &xi)?,
    };
    let emb = SubgroupEmbedding::new(g, g1);
    let actions: Vec<GraphAction> = emb
        .group
        .generators()
        .iter()
        .map(|p| gg.action(g.element(p).expect("subgroup generator lies in G")).clone())
        .collect();
    let restrict = |h: Elt| -> Result<Elt, Error> {
        let r = restriction_power(g, g1, h);
        emb.restrict(g.pow(h, r as i64)).ok_or_else(|| Error::Internal("restricted monodromy left G_1".into()))
    };
    let he = gg.half_edge_monodromy.iter().map(|&h| restrict(h)).collect::<Result<_, _>>()?;
    let lm = gg.leg_monodromy.iter().map(|&h| restrict(h)).collect::<Result<_, _>>()?;
    let dl = rel.entries.iter().map(|e| gg.act_leg(e.representative, gg.distinguished_legs[e.orbit])).collect();
    AdmissibleGGraph::new(gg.graph().clone(), emb.group.clone(), &actions, he, lm, dl)
}

/// The quotient `Γ/N` as a `G/N`-graph, with the maps from `Γ` to it.
#[derive(Clone, Debug)]
pub struct Corestriction {
    pub graph: AdmissibleGGraph,
    pub quotient: QuotientGroup,
    pub vertex_map: Vec<usize>,
    pub half_edge_map: Vec<usize>,
    pub leg_map: Vec<usize>,
}

/// Classes of `0..len` under `orbit`, numbered by smallest member.
fn orbit_numbering(len: usize, orbit: impl Fn(usize) -> Vec<usize>) -> (Vec<usize>, Vec<usize>) {
    let mut map = vec![usize::MAX; len];
    let mut reps = Vec::new();
    for x in 0..len {
        if map[x] == usize::MAX {
            for y in orbit(x) {
                map[y] = reps.len();
            }
            reps.push(x);
        }
    }
    (map, reps)
}

/// Quotient by a normal subgroup. Vertex genera of the quotient come from
/// Riemann-Hurwitz for `N ∩ G_v` acting on each vertex curve.
pub fn corestrict_graph(gg: &AdmissibleGGraph, n: &Subgroup) -> Result<Corestriction, Error> {
    let g = gg.group();
    let q = g.quotient(n)?;
    let graph = gg.graph();
    let (vmap, vreps) = orbit_numbering(graph.num_vertices(), |v| n.elements().iter().map(|&t| gg.act_vertex(t, v)).collect());
    let (hmap, hreps) =
        orbit_numbering(graph.num_half_edges(), |h| n.elements().iter().map(|&t| gg.act_half_edge(t, h)).collect());
    let (lmap, lreps) = orbit_numbering(graph.num_legs(), |l| n.elements().iter().map(|&t| gg.act_leg(t, l)).collect());
    let mut genera = Vec::new();
    for &v in &vreps {
        let nv = g.intersection(n, &gg.vertex_stabilizer(v));
        let genus = gg
            .vertex_quotient_genus(v, &nv)
            .map_err(|w| Error::violation(labels::VERTEX_RH, format!("vertex {v}: {w}")))?;
        genera.push(genus);
    }
    let attach = hreps.iter().map(|&h| vmap[graph.attachment(h)]).collect();
    let involution: Vec<usize> = hreps.iter().map(|&h| hmap[graph.partner(h)]).collect();
    let legs = lreps.iter().map(|&l| vmap[graph.leg_vertex(l)]).collect();
    let qgraph = StableGraph::new(genera, attach, involution, legs)?;
    let actions: Vec<GraphAction> = q
        .group
        .generators()
        .iter()
        .map(|p| {
            let t = q.lifts[q.group.element(p).expect("generator lies in the quotient")];
            GraphAction {
                vertices: vreps.iter().map(|&v| vmap[gg.act_vertex(t, v)]).collect(),
                half_edges: hreps.iter().map(|&h| hmap[gg.act_half_edge(t, h)]).collect(),
                legs: lreps.iter().map(|&l| lmap[gg.act_leg(t, l)]).collect(),
            }
        })
        .collect();
    let he = hreps.iter().map(|&h| q.project(gg.half_edge_monodromy[h])).collect();
    let lm = lreps.iter().map(|&l| q.project(gg.leg_monodromy[l])).collect();
    let dl = gg.distinguished_legs.iter().map(|&l| lmap[l]).collect();
    let cg = AdmissibleGGraph::new(qgraph, q.group.clone(), &actions, he, lm, dl)?;
    Ok(Corestriction { graph: cg, quotient: q, vertex_map: vmap, half_edge_map: hmap, leg_map: lmap })
}
