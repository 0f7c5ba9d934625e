//! Stable graphs, their morphisms and automorphisms, and generic (A,B)-graphs.
//!
//! Vertices and half-edges are zero based. Legs are numbered by their label
//! minus one; automorphisms fix every leg.

use std::collections::{BTreeSet, HashMap};
use std::hash::{Hash, Hasher};
use std::sync::{Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::Error;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "GraphJson", into = "GraphJson")]
pub struct StableGraph {
    genera: Vec<u32>,
    attach: Vec<usize>,
    involution: Vec<usize>,
    legs: Vec<usize>,
}

/// JSON form. `half_edges[h]` is the vertex carrying half-edge `h`; `edges`
/// pairs half-edges; `legs` lists `(label, vertex)` with labels `1..=n`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct GraphJson {
    pub genera: Vec<u32>,
    pub half_edges: Vec<usize>,
    pub edges: Vec<[usize; 2]>,
    pub legs: Vec<(usize, usize)>,
}

impl TryFrom<GraphJson> for StableGraph {
    type Error = Error;
    fn try_from(j: GraphJson) -> Result<Self, Error> {
        StableGraph::from_json(&j)
    }
}

impl From<StableGraph> for GraphJson {
    fn from(g: StableGraph) -> Self {
        g.to_json()
    }
}

/// Forward maps of an isomorphism on vertices and half-edges.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GraphIso {
    pub vertex: Vec<usize>,
    pub half_edge: Vec<usize>,
}

impl GraphIso {
    pub fn identity(g: &StableGraph) -> Self {
        GraphIso {
            vertex: (0..g.num_vertices()).collect(),
            half_edge: (0..g.num_half_edges()).collect(),
        }
    }

    /// `self` after `other`.
    pub fn compose(&self, other: &GraphIso) -> GraphIso {
        GraphIso {
            vertex: other.vertex.iter().map(|&v| self.vertex[v]).collect(),
            half_edge: other.half_edge.iter().map(|&h| self.half_edge[h]).collect(),
        }
    }

    pub fn inverse(&self) -> GraphIso {
        let mut vertex = vec![0; self.vertex.len()];
        for (i, &v) in self.vertex.iter().enumerate() {
            vertex[v] = i;
        }
        let mut half_edge = vec![0; self.half_edge.len()];
        for (i, &h) in self.half_edge.iter().enumerate() {
            half_edge[h] = i;
        }
        GraphIso { vertex, half_edge }
    }
}

/// A morphism `source -> target`: a surjection on vertices and an injection
/// from target half-edges to source half-edges. Legs correspond by label.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GraphMorphism {
    pub f_v: Vec<usize>,
    pub f_h: Vec<usize>,
}

impl StableGraph {
    /// Builds and validates a connected stable graph.
    pub fn new(
        genera: Vec<u32>,
        attach: Vec<usize>,
        involution: Vec<usize>,
        legs: Vec<usize>,
    ) -> Result<Self, Error> {
        let g = Self::new_possibly_disconnected(genera, attach, involution, legs)?;
        if !g.is_connected() {
            return Err(Error::InvalidGraph("graph is disconnected".into()));
        }
        Ok(g)
    }

    /// Same checks as [`StableGraph::new`] except connectivity.
    pub fn new_possibly_disconnected(
        genera: Vec<u32>,
        attach: Vec<usize>,
        involution: Vec<usize>,
        legs: Vec<usize>,
    ) -> Result<Self, Error> {
        let nv = genera.len();
        if nv == 0 {
            return Err(Error::InvalidGraph("no vertices".into()));
        }
        if attach.len() != involution.len() {
            return Err(Error::InvalidGraph("attachment and involution lengths differ".into()));
        }
        if let Some(&v) = attach.iter().chain(legs.iter()).find(|&&v| v >= nv) {
            return Err(Error::InvalidGraph(format!("vertex {v} out of range")));
        }
        for (h, &k) in involution.iter().enumerate() {
            if k >= involution.len() || involution[k] != h || k == h {
                return Err(Error::InvalidGraph(format!(
                    "involution is not fixed point free at half-edge {h}"
                )));
            }
        }
        let g = StableGraph { genera, attach, involution, legs };
        for v in 0..nv {
            if !g.vertex_is_stable(v) {
                return Err(Error::InvalidGraph(format!("vertex {v} is unstable")));
            }
        }
        Ok(g)
    }

    /// A single vertex of genus `g` carrying legs `1..=n`.
    pub fn smooth(g: u32, n: usize) -> Result<Self, Error> {
        Self::new(vec![g], vec![], vec![], vec![0; n])
    }

    /// Builds from vertex genera, edges as vertex pairs and leg vertices.
    /// Half-edges are numbered `2i, 2i+1` for edge `i`.
    pub fn from_edges(genera: Vec<u32>, edges: &[(usize, usize)], legs: Vec<usize>) -> Result<Self, Error> {
        let mut attach = Vec::new();
        let mut involution = Vec::new();
        for (i, &(u, v)) in edges.iter().enumerate() {
            attach.push(u);
            attach.push(v);
            involution.push(2 * i + 1);
            involution.push(2 * i);
        }
        Self::new(genera, attach, involution, legs)
    }

    pub fn from_json(j: &GraphJson) -> Result<Self, Error> {
        let nh = j.half_edges.len();
        let mut involution = vec![usize::MAX; nh];
        for &[a, b] in &j.edges {
            if a >= nh || b >= nh || a == b || involution[a] != usize::MAX || involution[b] != usize::MAX {
                return Err(Error::InvalidGraph(format!("bad edge [{a}, {b}]")));
            }
            involution[a] = b;
            involution[b] = a;
        }
        if let Some(h) = involution.iter().position(|&x| x == usize::MAX) {
            return Err(Error::InvalidGraph(format!("half-edge {h} is in no edge")));
        }
        let mut legs = vec![usize::MAX; j.legs.len()];
        for &(label, v) in &j.legs {
            if label == 0 || label > legs.len() || legs[label - 1] != usize::MAX {
                return Err(Error::InvalidGraph(format!("leg labels must be 1..={}", legs.len())));
            }
            legs[label - 1] = v;
        }
        Self::new(j.genera.clone(), j.half_edges.clone(), involution, legs)
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            genera: self.genera.clone(),
            half_edges: self.attach.clone(),
            edges: self.edges().into_iter().map(|(a, b)| [a, b]).collect(),
            legs: self.legs.iter().enumerate().map(|(i, &v)| (i + 1, v)).collect(),
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.genera.len()
    }

    pub fn num_half_edges(&self) -> usize {
        self.attach.len()
    }

    pub fn num_edges(&self) -> usize {
        self.attach.len() / 2
    }

    pub fn num_legs(&self) -> usize {
        self.legs.len()
    }

    pub fn genera(&self) -> &[u32] {
        &self.genera
    }

    pub fn vertex_genus(&self, v: usize) -> u32 {
        self.genera[v]
    }

    pub fn attachment(&self, h: usize) -> usize {
        self.attach[h]
    }

    pub fn partner(&self, h: usize) -> usize {
        self.involution[h]
    }

    pub fn leg_vertex(&self, leg: usize) -> usize {
        self.legs[leg]
    }

    pub fn leg_vertices(&self) -> &[usize] {
        &self.legs
    }

    /// Edges as `(h, h')` with `h < h'`, sorted by `h`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.num_half_edges())
            .filter(|&h| h < self.involution[h])
            .map(|h| (h, self.involution[h]))
            .collect()
    }

    /// Index into [`StableGraph::edges`] of the edge containing half-edge `h`.
    pub fn edge_index(&self, h: usize) -> usize {
        let lo = h.min(self.involution[h]);
        (0..lo).filter(|&x| x < self.involution[x]).count()
    }

    pub fn half_edges_at(&self, v: usize) -> Vec<usize> {
        (0..self.num_half_edges()).filter(|&h| self.attach[h] == v).collect()
    }

    pub fn legs_at(&self, v: usize) -> Vec<usize> {
        (0..self.num_legs()).filter(|&l| self.legs[l] == v).collect()
    }

    /// Number of half-edges and legs at `v`.
    pub fn valence(&self, v: usize) -> usize {
        self.attach.iter().filter(|&&x| x == v).count() + self.legs.iter().filter(|&&x| x == v).count()
    }

    pub fn vertex_is_stable(&self, v: usize) -> bool {
        2 * self.genera[v] as i64 - 2 + self.valence(v) as i64 > 0
    }

    pub fn is_connected(&self) -> bool {
        let mut uf = UnionFind::new(self.num_vertices());
        for (a, b) in self.edges() {
            uf.union(self.attach[a], self.attach[b]);
        }
        (0..self.num_vertices()).all(|v| uf.find(v) == uf.find(0))
    }

    /// h^1 + sum of vertex genera.
    pub fn genus(&self) -> i64 {
        let h1 = self.num_edges() as i64 - self.num_vertices() as i64 + 1;
        h1 + self.genera.iter().map(|&g| g as i64).sum::<i64>()
    }

    pub fn loops_at(&self, v: usize) -> usize {
        self.edges().iter().filter(|&&(a, b)| self.attach[a] == v && self.attach[b] == v).count()
    }

    /// Dimension of the product of vertex moduli spaces.
    pub fn stratum_dimension(&self) -> i64 {
        (0..self.num_vertices())
            .map(|v| 3 * self.genera[v] as i64 - 3 + self.valence(v) as i64)
            .sum()
    }

    fn vertex_invariant(&self, v: usize) -> (u32, Vec<usize>, usize, usize) {
        (self.genera[v], self.legs_at(v), self.valence(v), self.loops_at(v))
    }

    /// Weisfeiler-Lehman style invariant; equal for isomorphic graphs.
    pub fn invariant_hash(&self) -> u64 {
        let nv = self.num_vertices();
        let mut colour: Vec<u64> = (0..nv).map(|v| hash_of(&self.vertex_invariant(v))).collect();
        for _ in 0..nv.min(4) {
            colour = (0..nv)
                .map(|v| {
                    let mut nb: Vec<u64> = self
                        .half_edges_at(v)
                        .into_iter()
                        .map(|h| colour[self.attach[self.involution[h]]])
                        .collect();
                    nb.sort_unstable();
                    hash_of(&(colour[v], nb))
                })
                .collect();
        }
        let mut sorted = colour.clone();
        sorted.sort_unstable();
        hash_of(&(self.num_edges(), self.num_legs(), sorted))
    }

    /// All isomorphisms `self -> other` fixing legs.
    pub fn isomorphisms(&self, other: &StableGraph) -> Vec<GraphIso> {
        let mut out = Vec::new();
        if self.num_vertices() != other.num_vertices()
            || self.num_half_edges() != other.num_half_edges()
            || self.num_legs() != other.num_legs()
        {
            return out;
        }
        let inv_a: Vec<_> = (0..self.num_vertices()).map(|v| self.vertex_invariant(v)).collect();
        let inv_b: Vec<_> = (0..other.num_vertices()).map(|v| other.vertex_invariant(v)).collect();
        let adj_a = self.adjacency_counts();
        let adj_b = other.adjacency_counts();
        let mut vmap = vec![usize::MAX; self.num_vertices()];
        let mut used = vec![false; other.num_vertices()];
        self.vertex_search(other, &inv_a, &inv_b, &adj_a, &adj_b, 0, &mut vmap, &mut used, &mut out);
        out
    }

    pub fn is_isomorphic(&self, other: &StableGraph) -> bool {
        self.invariant_hash() == other.invariant_hash() && !self.isomorphisms(other).is_empty()
    }

    /// Leg-fixing automorphisms, identity first.
    pub fn automorphisms(&self) -> Vec<GraphIso> {
        let mut a = self.isomorphisms(self);
        a.sort();
        let id = GraphIso::identity(self);
        if let Some(pos) = a.iter().position(|x| *x == id) {
            a.remove(pos);
            a.insert(0, id);
        }
        a
    }

    fn adjacency_counts(&self) -> Vec<Vec<usize>> {
        let nv = self.num_vertices();
        let mut m = vec![vec![0; nv]; nv];
        for (a, b) in self.edges() {
            let (u, v) = (self.attach[a], self.attach[b]);
            m[u][v] += 1;
            if u != v {
                m[v][u] += 1;
            }
        }
        m
    }

    #[allow(clippy::too_many_arguments)]
    fn vertex_search(
        &self,
        other: &StableGraph,
        inv_a: &[(u32, Vec<usize>, usize, usize)],
        inv_b: &[(u32, Vec<usize>, usize, usize)],
        adj_a: &[Vec<usize>],
        adj_b: &[Vec<usize>],
        v: usize,
        vmap: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut Vec<GraphIso>,
    ) {
        if v == self.num_vertices() {
            self.edge_bijections(other, vmap, out);
            return;
        }
        for w in 0..other.num_vertices() {
            if used[w] || inv_a[v] != inv_b[w] {
                continue;
            }
            if (0..v).any(|u| adj_a[v][u] != adj_b[w][vmap[u]]) {
                continue;
            }
            vmap[v] = w;
            used[w] = true;
            self.vertex_search(other, inv_a, inv_b, adj_a, adj_b, v + 1, vmap, used, out);
            used[w] = false;
            vmap[v] = usize::MAX;
        }
    }

    fn edge_bijections(&self, other: &StableGraph, vmap: &[usize], out: &mut Vec<GraphIso>) {
        // Group edges of both graphs by (unordered) vertex pair.
        let mut groups: Vec<(Vec<(usize, usize)>, Vec<(usize, usize)>)> = Vec::new();
        let mut index: HashMap<(usize, usize), usize> = HashMap::new();
        for (a, b) in self.edges() {
            let (u, v) = (self.attach[a], self.attach[b]);
            // orient so the first half-edge sits at the smaller image vertex
            let (a, b) = if vmap[u] <= vmap[v] { (a, b) } else { (b, a) };
            let key = (vmap[self.attach[a]], vmap[self.attach[b]]);
            let i = *index.entry(key).or_insert_with(|| {
                groups.push((vec![], vec![]));
                groups.len() - 1
            });
            groups[i].0.push((a, b));
        }
        for (a, b) in other.edges() {
            let (u, v) = (other.attach[a], other.attach[b]);
            let (a, b) = if u <= v { (a, b) } else { (b, a) };
            let key = (other.attach[a], other.attach[b]);
            match index.get(&key) {
                Some(&i) => groups[i].1.push((a, b)),
                None => return,
            }
        }
        if groups.iter().any(|(x, y)| x.len() != y.len()) {
            return;
        }
        let mut hmap = vec![usize::MAX; self.num_half_edges()];
        assign_groups(self, &groups, 0, &mut hmap, vmap, out);

        fn assign_groups(
            g: &StableGraph,
            groups: &[(Vec<(usize, usize)>, Vec<(usize, usize)>)],
            i: usize,
            hmap: &mut Vec<usize>,
            vmap: &[usize],
            out: &mut Vec<GraphIso>,
        ) {
            if i == groups.len() {
                out.push(GraphIso { vertex: vmap.to_vec(), half_edge: hmap.clone() });
                return;
            }
            let (src, dst) = &groups[i];
            let is_loop = g.attach[src[0].0] == g.attach[src[0].1];
            let k = src.len();
            for perm in permutations(k) {
                let flips = if is_loop { 1usize << k } else { 1 };
                for mask in 0..flips {
                    for (j, &p) in perm.iter().enumerate() {
                        let (a, b) = src[j];
                        let (c, d) = dst[p];
                        if mask >> j & 1 == 1 {
                            hmap[a] = d;
                            hmap[b] = c;
                        } else {
                            hmap[a] = c;
                            hmap[b] = d;
                        }
                    }
                    assign_groups(g, groups, i + 1, hmap, vmap, out);
                }
            }
        }
    }

    /// Image of the graph under relabelling vertices and half-edges by `iso`.
    pub fn relabel(&self, iso: &GraphIso) -> StableGraph {
        let mut genera = vec![0; self.num_vertices()];
        for v in 0..self.num_vertices() {
            genera[iso.vertex[v]] = self.genera[v];
        }
        let mut attach = vec![0; self.num_half_edges()];
        let mut involution = vec![0; self.num_half_edges()];
        for h in 0..self.num_half_edges() {
            attach[iso.half_edge[h]] = iso.vertex[self.attach[h]];
            involution[iso.half_edge[h]] = iso.half_edge[self.involution[h]];
        }
        let legs = self.legs.iter().map(|&v| iso.vertex[v]).collect();
        StableGraph { genera, attach, involution, legs }
    }
}

fn hash_of<T: Hash>(t: &T) -> u64 {
    let mut h = std::collections::hash_map::DefaultHasher::new();
    t.hash(&mut h);
    h.finish()
}

/// All permutations of `0..k` in lexicographic order.
pub fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        // next permutation
        let Some(i) = (1..k).rev().find(|&i| cur[i - 1] < cur[i]) else { break };
        let j = (i..k).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
    out
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let next = self.parent[y];
            self.parent[y] = r;
            y = next;
        }
        r
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.parent[hi] = lo;
        }
    }
}

/// Contracts the edges with the given indices (into [`StableGraph::edges`]).
/// New vertices are ordered by their smallest old vertex, surviving half-edges
/// keep their relative order.
pub fn contract_edges(g: &StableGraph, contract: &BTreeSet<usize>) -> Result<(StableGraph, GraphMorphism), Error> {
    let edges = g.edges();
    if let Some(&e) = contract.iter().find(|&&e| e >= edges.len()) {
        return Err(Error::Domain(format!("edge {e} out of range")));
    }
    let mut uf = UnionFind::new(g.num_vertices());
    for &e in contract {
        let (a, b) = edges[e];
        uf.union(g.attach[a], g.attach[b]);
    }
    let mut new_index = vec![usize::MAX; g.num_vertices()];
    let mut count = 0;
    for v in 0..g.num_vertices() {
        let r = uf.find(v);
        if new_index[r] == usize::MAX {
            new_index[r] = count;
            count += 1;
        }
    }
    let f_v: Vec<usize> = (0..g.num_vertices()).map(|v| new_index[uf.find(v)]).collect();
    let mut genera = vec![0i64; count];
    let mut nverts = vec![0i64; count];
    let mut nedges = vec![0i64; count];
    for v in 0..g.num_vertices() {
        genera[f_v[v]] += g.genera[v] as i64;
        nverts[f_v[v]] += 1;
    }
    for &e in contract {
        nedges[f_v[g.attach[edges[e].0]]] += 1;
    }
    let genera: Vec<u32> = (0..count).map(|w| (genera[w] + nedges[w] - nverts[w] + 1) as u32).collect();
    let contracted_half: BTreeSet<usize> =
        contract.iter().flat_map(|&e| [edges[e].0, edges[e].1]).collect();
    let f_h: Vec<usize> = (0..g.num_half_edges()).filter(|h| !contracted_half.contains(h)).collect();
    let mut pos = vec![usize::MAX; g.num_half_edges()];
    for (i, &h) in f_h.iter().enumerate() {
        pos[h] = i;
    }
    let attach = f_h.iter().map(|&h| f_v[g.attach[h]]).collect();
    let involution = f_h.iter().map(|&h| pos[g.involution[h]]).collect();
    let legs = g.legs.iter().map(|&v| f_v[v]).collect();
    let target = StableGraph { genera, attach, involution, legs };
    Ok((target, GraphMorphism { f_v, f_h }))
}

impl GraphMorphism {
    /// `other` after `self`: source -> mid -> target, where `self: source -> mid`.
    pub fn then(&self, other: &GraphMorphism) -> GraphMorphism {
        GraphMorphism {
            f_v: self.f_v.iter().map(|&v| other.f_v[v]).collect(),
            f_h: other.f_h.iter().map(|&h| self.f_h[h]).collect(),
        }
    }

    /// Precompose with an automorphism `phi` of the source.
    pub fn after_iso(&self, phi: &GraphIso) -> GraphMorphism {
        let inv = phi.inverse();
        GraphMorphism {
            f_v: phi.vertex.iter().map(|&w| self.f_v[w]).collect(),
            f_h: self.f_h.iter().map(|&h| inv.half_edge[h]).collect(),
        }
    }

    pub fn from_iso(iso: &GraphIso) -> GraphMorphism {
        GraphMorphism { f_v: iso.vertex.clone(), f_h: iso.inverse().half_edge }
    }

    /// Indices of source edges hit by the half-edge map.
    pub fn kept_edges(&self, source: &StableGraph) -> BTreeSet<usize> {
        self.f_h.iter().map(|&h| source.edge_index(h)).collect()
    }

    /// Checks every compatibility condition of a graph morphism.
    pub fn validate(&self, source: &StableGraph, target: &StableGraph) -> Result<(), Error> {
        let bad = |s: &str| Err(Error::InvalidGraph(format!("not a morphism: {s}")));
        if self.f_v.len() != source.num_vertices() || self.f_h.len() != target.num_half_edges() {
            return bad("map sizes");
        }
        if self.f_v.iter().any(|&w| w >= target.num_vertices())
            || self.f_h.iter().any(|&h| h >= source.num_half_edges())
        {
            return bad("index out of range");
        }
        if source.num_legs() != target.num_legs() {
            return bad("leg counts differ");
        }
        let hit: BTreeSet<usize> = self.f_h.iter().copied().collect();
        if hit.len() != self.f_h.len() {
            return bad("half-edge map not injective");
        }
        for a in 0..target.num_half_edges() {
            if self.f_h[target.partner(a)] != source.partner(self.f_h[a]) {
                return bad("involutions not compatible");
            }
            if self.f_v[source.attachment(self.f_h[a])] != target.attachment(a) {
                return bad("attachments not compatible");
            }
        }
        for l in 0..source.num_legs() {
            if self.f_v[source.leg_vertex(l)] != target.leg_vertex(l) {
                return bad("legs not compatible");
            }
        }
        let contracted: BTreeSet<usize> = (0..source.num_edges())
            .filter(|e| !self.kept_edges(source).contains(e))
            .collect();
        let (quot, c) = contract_edges(source, &contracted)?;
        // the morphism must factor through the contraction by an isomorphism
        let mut vmap = vec![usize::MAX; quot.num_vertices()];
        for v in 0..source.num_vertices() {
            let q = c.f_v[v];
            if vmap[q] != usize::MAX && vmap[q] != self.f_v[v] {
                return bad("vertex map does not factor through the contraction");
            }
            vmap[q] = self.f_v[v];
        }
        let mut pos = vec![usize::MAX; source.num_half_edges()];
        for (i, &h) in c.f_h.iter().enumerate() {
            pos[h] = i;
        }
        let mut hmap = vec![usize::MAX; quot.num_half_edges()];
        for a in 0..target.num_half_edges() {
            hmap[pos[self.f_h[a]]] = a;
        }
        let iso = GraphIso { vertex: vmap, half_edge: hmap };
        if quot.relabel(&iso) != *target {
            return bad("contraction is not isomorphic to the target through the given maps");
        }
        Ok(())
    }
}

/// Stable graphs of genus `g` with `n` legs and exactly `e` edges, one per
/// isomorphism class, in a deterministic order.
pub fn stable_graphs(g: u32, n: usize, e: usize) -> Result<Vec<StableGraph>, Error> {
    if 2 * g as i64 - 2 + n as i64 <= 0 {
        return Err(Error::Domain(format!("(g, n) = ({g}, {n}) is unstable")));
    }
    static CACHE: OnceLock<Mutex<HashMap<(u32, usize), Vec<Vec<StableGraph>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("graph cache poisoned");
    let levels = guard
        .entry((g, n))
        .or_insert_with(|| vec![vec![StableGraph::smooth(g, n).expect("stable")]]);
    while levels.len() <= e {
        let next = degenerate_all(levels.last().unwrap());
        levels.push(next);
    }
    Ok(levels[e].clone())
}

fn degenerate_all(graphs: &[StableGraph]) -> Vec<StableGraph> {
    let mut buckets: HashMap<u64, Vec<usize>> = HashMap::new();
    let mut out: Vec<StableGraph> = Vec::new();
    for g in graphs {
        for d in degenerations(g) {
            let key = d.invariant_hash();
            let bucket = buckets.entry(key).or_default();
            if bucket.iter().any(|&i| !out[i].isomorphisms(&d).is_empty()) {
                continue;
            }
            bucket.push(out.len());
            out.push(d);
        }
    }
    out
}

/// Graphs with one more edge that contract back to `g`.
fn degenerations(g: &StableGraph) -> Vec<StableGraph> {
    let mut out = Vec::new();
    let nh = g.num_half_edges();
    for v in 0..g.num_vertices() {
        if g.genera[v] >= 1 {
            let mut genera = g.genera.clone();
            genera[v] -= 1;
            let mut attach = g.attach.clone();
            attach.extend([v, v]);
            let mut involution = g.involution.clone();
            involution.extend([nh + 1, nh]);
            if let Ok(d) = StableGraph::new(genera, attach, involution, g.legs.clone()) {
                out.push(d);
            }
        }
        // split v into v and a new vertex w joined by an edge
        let hs = g.half_edges_at(v);
        let ls = g.legs_at(v);
        let items = hs.len() + ls.len();
        let w = g.num_vertices();
        for mask in 0..(1usize << items) {
            for g1 in 0..=g.genera[v] {
                let mut genera = g.genera.clone();
                genera[v] = g1;
                genera.push(g.genera[v] - g1);
                let mut attach = g.attach.clone();
                let mut legs = g.legs.clone();
                for (i, &h) in hs.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        attach[h] = w;
                    }
                }
                for (i, &l) in ls.iter().enumerate() {
                    if mask >> (hs.len() + i) & 1 == 1 {
                        legs[l] = w;
                    }
                }
                attach.extend([v, w]);
                let mut involution = g.involution.clone();
                involution.extend([nh + 1, nh]);
                if let Ok(d) = StableGraph::new(genera, attach, involution, legs) {
                    out.push(d);
                }
            }
        }
    }
    out
}

/// A stable graph with morphisms to both A and B whose edge images jointly
/// cover all of its edges.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GenericTriple {
    pub gamma: StableGraph,
    pub to_a: GraphMorphism,
    pub to_b: GraphMorphism,
}

impl GenericTriple {
    /// Edges of gamma in the image of both E(A) and E(B).
    pub fn common_edges(&self) -> Vec<usize> {
        let a = self.to_a.kept_edges(&self.gamma);
        let b = self.to_b.kept_edges(&self.gamma);
        a.intersection(&b).copied().collect()
    }

    pub fn swapped(&self) -> GenericTriple {
        GenericTriple { gamma: self.gamma.clone(), to_a: self.to_b.clone(), to_b: self.to_a.clone() }
    }
}

/// All morphisms `gamma -> target`.
pub fn morphisms_to(gamma: &StableGraph, target: &StableGraph) -> Vec<GraphMorphism> {
    let mut out = Vec::new();
    let ne = gamma.num_edges();
    let keep = target.num_edges();
    if keep > ne || gamma.num_legs() != target.num_legs() || gamma.genus() != target.genus() {
        return out;
    }
    let th = target.invariant_hash();
    for kept in subsets(ne, keep) {
        let contract: BTreeSet<usize> = (0..ne).filter(|e| !kept.contains(e)).collect();
        let (quot, c) = contract_edges(gamma, &contract).expect("valid edge set");
        if quot.invariant_hash() != th {
            continue;
        }
        for iso in quot.isomorphisms(target) {
            out.push(c.then(&GraphMorphism::from_iso(&iso)));
        }
    }
    out.sort();
    out
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<BTreeSet<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<BTreeSet<usize>>) {
        if cur.len() == k {
            out.push(cur.iter().copied().collect());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Generic (A,B)-graphs up to isomorphism of triples.
pub fn enumerate_generic_ab(a: &StableGraph, b: &StableGraph) -> Result<Vec<GenericTriple>, Error> {
    if a.genus() != b.genus() || a.num_legs() != b.num_legs() {
        return Err(Error::Mismatch(format!(
            "A has (g, n) = ({}, {}) but B has ({}, {})",
            a.genus(),
            a.num_legs(),
            b.genus(),
            b.num_legs()
        )));
    }
    let g = a.genus() as u32;
    let n = a.num_legs();
    let (ea, eb) = (a.num_edges(), b.num_edges());
    let mut out = Vec::new();
    for e in ea.max(eb)..=ea + eb {
        for gamma in stable_graphs(g, n, e)? {
            out.extend(generic_triples_on(&gamma, a, b));
        }
    }
    Ok(out)
}

/// Generic triples with a fixed underlying graph, one per Aut(gamma)-orbit.
pub fn generic_triples_on(gamma: &StableGraph, a: &StableGraph, b: &StableGraph) -> Vec<GenericTriple> {
    let ma = morphisms_to(gamma, a);
    if ma.is_empty() {
        return vec![];
    }
    let mb = morphisms_to(gamma, b);
    let ne = gamma.num_edges();
    let auts = gamma.automorphisms();
    let mut out = Vec::new();
    for fa in &ma {
        let ka = fa.kept_edges(gamma);
        for fb in &mb {
            let kb = fb.kept_edges(gamma);
            if ka.union(&kb).count() != ne {
                continue;
            }
            // keep only the smallest member of each orbit
            let is_min = auts.iter().skip(1).all(|phi| (fa.after_iso(phi), fb.after_iso(phi)) >= (fa.clone(), fb.clone()));
            if is_min {
                out.push(GenericTriple { gamma: gamma.clone(), to_a: fa.clone(), to_b: fb.clone() });
            }
        }
    }
    out
}
