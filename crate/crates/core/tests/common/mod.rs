//! Random admissible G-graphs and single-condition mutations, shared by the
//! acceptance run and the property tests.
#![allow(dead_code)]

use htaut::gcover::{labels, AdmissibleGGraph, EdgeOrbit, GraphAction, HurwitzSpaceId, LegOrbit, VertexOrbit};
use htaut::graphs::StableGraph;
use htaut::groups::{Elt, FiniteGroup};
use rand::rngs::StdRng;
use rand::Rng;

pub fn small_groups() -> Vec<(&'static str, FiniteGroup)> {
    let c2 = FiniteGroup::cyclic(2).unwrap();
    let (v4, _) = FiniteGroup::direct_product(&c2, &c2).unwrap();
    vec![
        ("Z/2", c2),
        ("Z/3", FiniteGroup::cyclic(3).unwrap()),
        ("Z/4", FiniteGroup::cyclic(4).unwrap()),
        ("Z/6", FiniteGroup::cyclic(6).unwrap()),
        ("Z/2xZ/2", v4),
        ("S3", FiniteGroup::symmetric(3).unwrap()),
    ]
}

fn pick<T: Copy>(rng: &mut StdRng, xs: &[T]) -> Option<T> {
    if xs.is_empty() {
        None
    } else {
        Some(xs[rng.gen_range(0..xs.len())])
    }
}

/// One attempt at a random valid G-graph with at most `max_edge_orbits` edge
/// orbits. `None` when the drawn orbit data is not a stable connected graph.
pub fn try_random_ggraph(rng: &mut StdRng, g: &FiniteGroup, max_edge_orbits: usize) -> Option<AdmissibleGGraph> {
    let nv = rng.gen_range(1..=2);
    let mut vertices = Vec::new();
    for _ in 0..nv {
        let k = rng.gen_range(0..=2);
        let gens: Vec<Elt> = (0..k).map(|_| rng.gen_range(0..g.order())).collect();
        vertices.push(VertexOrbit { stabilizer: g.generate(&gens), quotient_genus: rng.gen_range(0..=1) });
    }
    let mut edges = Vec::new();
    for _ in 0..rng.gen_range(0..=max_edge_orbits) {
        let from = rng.gen_range(0..nv);
        let to = rng.gen_range(0..nv);
        let shift = rng.gen_range(0..g.order());
        let ok: Vec<Elt> = vertices[from]
            .stabilizer
            .elements()
            .iter()
            .copied()
            .filter(|&h| vertices[to].stabilizer.contains(g.conj(g.inv(shift), g.inv(h))))
            .collect();
        edges.push(EdgeOrbit { from, to, monodromy: pick(rng, &ok)?, shift });
    }
    let mut legs = Vec::new();
    for _ in 0..rng.gen_range(0..=2) {
        let vertex = rng.gen_range(0..nv);
        let monodromy = pick(rng, vertices[vertex].stabilizer.elements())?;
        legs.push(LegOrbit { vertex, monodromy });
    }
    let gg = AdmissibleGGraph::from_orbits(g, &vertices, &edges, &legs).ok()?;
    let id = gg.id().ok()?;
    gg.validate(&id).ok()?;
    Some(gg)
}

pub fn random_ggraph(rng: &mut StdRng, g: &FiniteGroup, max_edge_orbits: usize) -> AdmissibleGGraph {
    loop {
        if let Some(gg) = try_random_ggraph(rng, g, max_edge_orbits) {
            return gg;
        }
    }
}

/// The conditions of the validator, each broken by one mutation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mutation {
    Stabilizer,
    Equivariance,
    EdgeCollapse,
    Balancing,
    VertexRiemannHurwitz,
    Xi,
    Genus,
}

impl Mutation {
    pub const ALL: [Mutation; 7] = [
        Mutation::Stabilizer,
        Mutation::Equivariance,
        Mutation::EdgeCollapse,
        Mutation::Balancing,
        Mutation::VertexRiemannHurwitz,
        Mutation::Xi,
        Mutation::Genus,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Mutation::Stabilizer => labels::STABILIZER,
            Mutation::Equivariance => labels::EQUIVARIANCE,
            Mutation::EdgeCollapse => labels::EDGE_COLLAPSE,
            Mutation::Balancing => labels::BALANCING,
            Mutation::VertexRiemannHurwitz => labels::VERTEX_RH,
            Mutation::Xi => labels::XI,
            Mutation::Genus => labels::GENUS,
        }
    }
}

fn rebuild(
    gg: &AdmissibleGGraph,
    graph: StableGraph,
    actions: &[GraphAction],
    he: Vec<Elt>,
    lm: Vec<Elt>,
) -> AdmissibleGGraph {
    AdmissibleGGraph::new(graph, gg.group().clone(), actions, he, lm, gg.distinguished_legs.clone())
        .expect("mutation keeps a group action")
}

fn graph_parts(g: &StableGraph) -> (Vec<u32>, Vec<usize>, Vec<usize>, Vec<usize>) {
    let nh = g.num_half_edges();
    (
        g.genera().to_vec(),
        (0..nh).map(|h| g.attachment(h)).collect(),
        (0..nh).map(|h| g.partner(h)).collect(),
        g.leg_vertices().to_vec(),
    )
}

/// Applies `m` to a valid G-graph, or `None` when the graph has no place
/// to break that condition alone.
pub fn mutate(gg: &AdmissibleGGraph, m: Mutation, rng: &mut StdRng) -> Option<(AdmissibleGGraph, HurwitzSpaceId)> {
    let g = gg.group();
    let graph = gg.graph();
    let mut id = gg.id().ok()?;
    let nh = graph.num_half_edges();
    let actions = gg.generator_actions();
    let mut he = gg.half_edge_monodromy.clone();
    match m {
        Mutation::Stabilizer => {
            // a proper power on a whole half-edge orbit and, inverted, on its partners
            let cands: Vec<usize> = (0..nh).filter(|&h| g.order_of(he[h]) >= 2).collect();
            let h = pick(rng, &cands)?;
            let ord = g.order_of(he[h]);
            let p = (2..=ord).find(|p| ord % p == 0).expect("order at least two");
            for x in gg.half_edge_orbit(h) {
                let y = graph.partner(x);
                he[x] = g.pow(he[x], p as i64);
                he[y] = g.inv(he[x]);
            }
            Some((rebuild(gg, graph.clone(), &actions, he, gg.leg_monodromy.clone()), id))
        }
        Mutation::Equivariance => {
            // another generator of the same cyclic group on one flag of a non-trivial orbit
            let cands: Vec<usize> =
                (0..nh).filter(|&h| g.order_of(he[h]) >= 3 && gg.half_edge_orbit(h).len() >= 2).collect();
            let h = pick(rng, &cands)?;
            let ord = g.order_of(he[h]);
            let k = (2..ord).find(|k| num_integer::gcd(*k, ord) == 1).expect("order at least three");
            he[h] = g.pow(he[h], k as i64);
            he[graph.partner(h)] = g.inv(he[h]);
            Some((rebuild(gg, graph.clone(), &actions, he, gg.leg_monodromy.clone()), id))
        }
        Mutation::EdgeCollapse => {
            // an extra free edge orbit whose half-edges are exchanged by an involution
            let invs: Vec<Elt> = g.elements().filter(|&s| g.order_of(s) == 2).collect();
            let s = pick(rng, &invs)?;
            let (genera, mut attach, mut involution, legs) = graph_parts(graph);
            for t in g.elements() {
                attach.push(gg.act_vertex(t, 0));
                involution.push(nh + g.mul(t, s));
                he.push(g.identity());
            }
            let actions: Vec<GraphAction> = actions
                .iter()
                .zip(g.generator_elements())
                .map(|(a, x)| {
                    let mut a = a.clone();
                    a.half_edges.extend(g.elements().map(|t| nh + g.mul(x, t)));
                    a
                })
                .collect();
            let graph = StableGraph::new(genera, attach, involution, legs).ok()?;
            Some((rebuild(gg, graph, &actions, he, gg.leg_monodromy.clone()), id))
        }
        Mutation::Balancing => {
            let cands: Vec<usize> = (0..nh).filter(|&h| g.order_of(he[h]) >= 3).collect();
            let h = pick(rng, &cands)?;
            for x in gg.half_edge_orbit(h) {
                he[x] = g.inv(he[x]);
            }
            Some((rebuild(gg, graph.clone(), &actions, he, gg.leg_monodromy.clone()), id))
        }
        Mutation::VertexRiemannHurwitz => {
            // raise the genus of a vertex orbit with non-trivial stabilizer by one
            let cands: Vec<usize> =
                (0..graph.num_vertices()).filter(|&v| gg.vertex_stabilizer(v).order() >= 2).collect();
            let v = pick(rng, &cands)?;
            let (mut genera, attach, involution, legs) = graph_parts(graph);
            let orbit: std::collections::BTreeSet<usize> = g.elements().map(|t| gg.act_vertex(t, v)).collect();
            for w in orbit {
                genera[w] += 1;
            }
            let graph = StableGraph::new(genera, attach, involution, legs).ok()?;
            Some((rebuild(gg, graph, &actions, he, gg.leg_monodromy.clone()), id))
        }
        Mutation::Xi => {
            if id.xi.is_empty() || rng.gen_bool(0.5) {
                id.xi.push(g.identity());
            } else {
                let i = rng.gen_range(0..id.xi.len());
                let others: Vec<Elt> = g.elements().filter(|&x| x != id.xi[i]).collect();
                id.xi[i] = pick(rng, &others)?;
            }
            Some((gg.clone(), id))
        }
        Mutation::Genus => {
            id.g += rng.gen_range(1..=2);
            Some((gg.clone(), id))
        }
    }
}
