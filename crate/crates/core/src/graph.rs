//! Directed multigraphs, their text format, random generation and cycle
//! contraction.
//!
//! Vertex and edge ids are 0-based in memory. The text format is 1-based:
//!
//! ```text
//! c comment
//! p psp <n> <m>
//! s <vertex>                                   (optional)
//! a <tail> <head> <cost> <param:0|1> <weight>  (exactly m lines)
//! ```

use std::fmt::Write as _;
use std::str::FromStr;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, ParseError, Result};
use crate::scalar::CostScalar;

pub type VertexId = usize;
pub type EdgeId = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge<C> {
    pub tail: VertexId,
    pub head: VertexId,
    pub cost: C,
    pub parameterized: bool,
    pub weight: u64,
}

impl<C> Edge<C> {
    /// Weight by which the parameter multiplies this edge: `weight` when
    /// parameterized, zero otherwise.
    #[inline]
    pub fn param_weight(&self) -> u64 {
        if self.parameterized {
            self.weight
        } else {
            0
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph<C> {
    n: usize,
    edges: Vec<Edge<C>>,
    source: Option<VertexId>,
}

/// Compressed incidence lists (in- or out-edges) indexed by vertex.
#[derive(Clone, Debug)]
pub struct Adjacency {
    offsets: Vec<usize>,
    edges: Vec<EdgeId>,
}

impl Adjacency {
    fn build<C>(g: &Graph<C>, by_head: bool) -> Self {
        let key = |e: &Edge<C>| if by_head { e.head } else { e.tail };
        let mut offsets = vec![0usize; g.n + 1];
        for e in &g.edges {
            offsets[key(e) + 1] += 1;
        }
        for v in 0..g.n {
            offsets[v + 1] += offsets[v];
        }
        let mut fill = offsets.clone();
        let mut edges = vec![0; g.edges.len()];
        for (id, e) in g.edges.iter().enumerate() {
            let slot = &mut fill[key(e)];
            edges[*slot] = id;
            *slot += 1;
        }
        Adjacency { offsets, edges }
    }

    #[inline]
    pub fn of(&self, v: VertexId) -> &[EdgeId] {
        &self.edges[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }
}

impl<C> Graph<C> {
    pub fn new(n: usize) -> Self {
        Graph {
            n,
            edges: Vec::new(),
            source: None,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge<C>] {
        &self.edges
    }

    #[inline]
    pub fn edge(&self, id: EdgeId) -> &Edge<C> {
        &self.edges[id]
    }

    pub fn source(&self) -> Option<VertexId> {
        self.source
    }

    pub fn set_source(&mut self, source: Option<VertexId>) -> Result<()> {
        if let Some(s) = source {
            self.check_vertex(s)?;
        }
        self.source = source;
        Ok(())
    }

    pub fn with_source(mut self, source: VertexId) -> Result<Self> {
        self.set_source(Some(source))?;
        Ok(self)
    }

    fn check_vertex(&self, v: VertexId) -> Result<()> {
        if v >= self.n {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n })
        } else {
            Ok(())
        }
    }

    /// Appends a parameterized weight-1 edge.
    pub fn add_edge(&mut self, tail: VertexId, head: VertexId, cost: C) -> Result<EdgeId> {
        self.push_edge(Edge {
            tail,
            head,
            cost,
            parameterized: true,
            weight: 1,
        })
    }

    pub fn push_edge(&mut self, edge: Edge<C>) -> Result<EdgeId> {
        self.check_vertex(edge.tail)?;
        self.check_vertex(edge.head)?;
        if edge.weight == 0 {
            return Err(Error::ZeroWeight);
        }
        self.edges.push(edge);
        Ok(self.edges.len() - 1)
    }

    pub fn add_vertex(&mut self) -> VertexId {
        self.n += 1;
        self.n - 1
    }

    pub fn out_adjacency(&self) -> Adjacency {
        Adjacency::build(self, false)
    }

    pub fn in_adjacency(&self) -> Adjacency {
        Adjacency::build(self, true)
    }

    /// In-degree plus out-degree of every vertex.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for e in &self.edges {
            deg[e.tail] += 1;
            deg[e.head] += 1;
        }
        deg
    }

    pub fn max_degree(&self) -> usize {
        self.degrees().into_iter().max().unwrap_or(0)
    }

    pub fn map_costs<D>(&self, mut f: impl FnMut(&C) -> D) -> Graph<D> {
        Graph {
            n: self.n,
            edges: self
                .edges
                .iter()
                .map(|e| Edge {
                    tail: e.tail,
                    head: e.head,
                    cost: f(&e.cost),
                    parameterized: e.parameterized,
                    weight: e.weight,
                })
                .collect(),
            source: self.source,
        }
    }

    /// Returns a copy with every edge edited by `f`.
    pub fn map_edges(&self, mut f: impl FnMut(&mut Edge<C>)) -> Graph<C>
    where
        C: Clone,
    {
        let mut g = self.clone();
        for e in &mut g.edges {
            f(e);
        }
        g
    }

    /// Strongly connected component index for every vertex (Kosaraju).
    pub fn strongly_connected_components(&self) -> Vec<usize> {
        let out = self.out_adjacency();
        let inn = self.in_adjacency();
        let mut order = Vec::with_capacity(self.n);
        let mut seen = vec![false; self.n];
        for root in 0..self.n {
            if seen[root] {
                continue;
            }
            seen[root] = true;
            let mut stack = vec![(root, 0usize)];
            while let Some(&mut (v, ref mut next)) = stack.last_mut() {
                if let Some(&e) = out.of(v).get(*next) {
                    *next += 1;
                    let w = self.edges[e].head;
                    if !seen[w] {
                        seen[w] = true;
                        stack.push((w, 0));
                    }
                } else {
                    order.push(v);
                    stack.pop();
                }
            }
        }
        let mut comp = vec![usize::MAX; self.n];
        let mut count = 0;
        for &root in order.iter().rev() {
            if comp[root] != usize::MAX {
                continue;
            }
            comp[root] = count;
            let mut stack = vec![root];
            while let Some(v) = stack.pop() {
                for &e in inn.of(v) {
                    let u = self.edges[e].tail;
                    if comp[u] == usize::MAX {
                        comp[u] = count;
                        stack.push(u);
                    }
                }
            }
            count += 1;
        }
        comp
    }

    pub fn is_strongly_connected(&self) -> bool {
        self.n <= 1 || self.strongly_connected_components().iter().all(|&c| c == 0)
    }

    /// Checks that `cycle` is a simple directed cycle and returns its vertices
    /// in order (the tail of each edge).
    pub fn cycle_vertices(&self, cycle: &[EdgeId]) -> Result<Vec<VertexId>> {
        if cycle.is_empty() {
            return Err(Error::NotSimpleCycle);
        }
        let mut on_cycle = vec![false; self.n];
        let mut verts = Vec::with_capacity(cycle.len());
        for (i, &id) in cycle.iter().enumerate() {
            let e = self.edges.get(id).ok_or(Error::NoSuchEdge(id))?;
            let next = &self.edges[cycle[(i + 1) % cycle.len()]];
            if e.head != next.tail || on_cycle[e.tail] {
                return Err(Error::NotSimpleCycle);
            }
            on_cycle[e.tail] = true;
            verts.push(e.tail);
        }
        Ok(verts)
    }
}

impl<C: Clone> Graph<C> {
    /// Subgraph induced by the vertices with `keep[v]`. Returns the graph
    /// (vertices renumbered in order) and the original id of each kept edge.
    pub fn induced_subgraph(&self, keep: &[bool]) -> (Graph<C>, Vec<VertexId>, Vec<EdgeId>) {
        let mut new_id = vec![usize::MAX; self.n];
        let mut vertices = Vec::new();
        for v in 0..self.n {
            if keep[v] {
                new_id[v] = vertices.len();
                vertices.push(v);
            }
        }
        let mut g = Graph::new(vertices.len());
        let mut origin = Vec::new();
        for (id, e) in self.edges.iter().enumerate() {
            if keep[e.tail] && keep[e.head] {
                g.edges.push(Edge {
                    tail: new_id[e.tail],
                    head: new_id[e.head],
                    cost: e.cost.clone(),
                    parameterized: e.parameterized,
                    weight: e.weight,
                });
                origin.push(id);
            }
        }
        g.source = self.source.filter(|&s| keep[s]).map(|s| new_id[s]);
        (g, vertices, origin)
    }
}

/// Result of contracting a cycle: where each old vertex went and where each
/// surviving edge came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexMap {
    /// `map[old] = new` for every vertex of the pre-contraction graph.
    pub map: Vec<VertexId>,
    /// Id of the vertex that replaced the cycle.
    pub contracted: VertexId,
    /// `edge_origin[new edge] = old edge`.
    pub edge_origin: Vec<EdgeId>,
}

impl VertexMap {
    pub fn old_vertex_count(&self) -> usize {
        self.map.len()
    }
}

/// Replaces the vertices of `cycle` by a single new vertex (the highest id).
/// Edges with both ends on the cycle are dropped; every other edge keeps its
/// cost, weight and flag, in the original order, with remapped endpoints.
pub fn contract_cycle<C: Clone>(g: &Graph<C>, cycle: &[EdgeId]) -> Result<(Graph<C>, VertexMap)> {
    let verts = g.cycle_vertices(cycle)?;
    let mut on_cycle = vec![false; g.n];
    for &v in &verts {
        on_cycle[v] = true;
    }
    let new_n = g.n - verts.len() + 1;
    let contracted = new_n - 1;
    let mut map = vec![contracted; g.n];
    let mut next = 0;
    for v in 0..g.n {
        if !on_cycle[v] {
            map[v] = next;
            next += 1;
        }
    }
    let mut h = Graph::new(new_n);
    let mut edge_origin = Vec::new();
    for (id, e) in g.edges.iter().enumerate() {
        let (t, hd) = (map[e.tail], map[e.head]);
        if t == hd {
            continue;
        }
        h.edges.push(Edge {
            tail: t,
            head: hd,
            cost: e.cost.clone(),
            parameterized: e.parameterized,
            weight: e.weight,
        });
        edge_origin.push(id);
    }
    h.source = g.source.map(|s| map[s]);
    Ok((
        h,
        VertexMap {
            map,
            contracted,
            edge_origin,
        },
    ))
}

/// `n` vertices and `m` distinct ordered pairs `(u, v)`, `u != v`, drawn
/// uniformly without replacement; costs uniform in `[cost_lo, cost_hi]`.
/// All edges are parameterized with weight 1. Deterministic in `seed`.
pub fn random_graph(n: usize, m: usize, cost_lo: i64, cost_hi: i64, seed: u64) -> Result<Graph<i64>> {
    let pairs = n.saturating_mul(n.saturating_sub(1));
    if m > pairs {
        return Err(Error::TooManyEdges { n, m });
    }
    if cost_lo > cost_hi {
        return Err(Error::EmptyCostRange {
            lo: cost_lo,
            hi: cost_hi,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picks = index::sample(&mut rng, pairs, m).into_vec();
    picks.sort_unstable();
    let mut g = Graph::new(n);
    g.edges.reserve(m);
    for idx in picks {
        let tail = idx / (n - 1);
        let r = idx % (n - 1);
        let head = if r >= tail { r + 1 } else { r };
        g.edges.push(Edge {
            tail,
            head,
            cost: rng.gen_range(cost_lo..=cost_hi),
            parameterized: true,
            weight: 1,
        });
    }
    Ok(g)
}

/// Draws [`random_graph`]s with successive derived seeds until one is
/// strongly connected. Returns the graph and the seed that produced it.
///
/// `m` must be at least `n` when `n > 1`, otherwise no draw can succeed.
pub fn random_strongly_connected(
    n: usize,
    m: usize,
    cost_lo: i64,
    cost_hi: i64,
    seed: u64,
) -> Result<(Graph<i64>, u64)> {
    if n > 1 && m < n {
        return Err(Error::NotStronglyConnected);
    }
    let mut s = seed;
    loop {
        let g = random_graph(n, m, cost_lo, cost_hi, s)?;
        if g.is_strongly_connected() {
            return Ok((g, s));
        }
        s = s.wrapping_add(0x9E37_79B9_7F4A_7C15);
    }
}

/// Parses the line format described in the module docs.
pub fn parse_graph<C: CostScalar>(text: &str) -> Result<Graph<C>, ParseError> {
    let mut header: Option<(usize, usize)> = None;
    let mut graph: Graph<C> = Graph::new(0);
    let mut last_line = 0;
    let mut header_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        match fields[0] {
            "c" => continue,
            "p" => {
                if header.is_some() {
                    return Err(ParseError::new(line_no, "duplicate header"));
                }
                if fields.len() != 4 || fields[1] != "psp" {
                    return Err(ParseError::new(line_no, "malformed header, expected `p psp <n> <m>`"));
                }
                let n: usize = fields[2]
                    .parse()
                    .map_err(|_| ParseError::new(line_no, "malformed header: bad vertex count"))?;
                let m: usize = fields[3]
                    .parse()
                    .map_err(|_| ParseError::new(line_no, "malformed header: bad edge count"))?;
                header = Some((n, m));
                header_line = line_no;
                graph = Graph::new(n);
                graph.edges.reserve(m);
            }
            "s" => {
                let (n, _) = header.ok_or_else(|| ParseError::new(line_no, "source line before header"))?;
                if fields.len() != 2 {
                    return Err(ParseError::new(line_no, "malformed source line"));
                }
                if graph.source.is_some() {
                    return Err(ParseError::new(line_no, "duplicate source line"));
                }
                graph.source = Some(parse_vertex(fields[1], n, line_no)?);
            }
            "a" => {
                let (n, m) = header.ok_or_else(|| ParseError::new(line_no, "edge line before header"))?;
                if fields.len() != 5 && fields.len() != 6 {
                    return Err(ParseError::new(
                        line_no,
                        "malformed edge line, expected `a <tail> <head> <cost> <param> <weight>`",
                    ));
                }
                if graph.edges.len() == m {
                    return Err(ParseError::new(
                        line_no,
                        format!("edge count mismatch: header declares {m} edges"),
                    ));
                }
                let tail = parse_vertex(fields[1], n, line_no)?;
                let head = parse_vertex(fields[2], n, line_no)?;
                let cost: C = fields[3]
                    .parse()
                    .map_err(|_| ParseError::new(line_no, format!("invalid cost {:?}", fields[3])))?;
                let parameterized = match fields[4] {
                    "0" => false,
                    "1" => true,
                    other => {
                        return Err(ParseError::new(
                            line_no,
                            format!("parameterized flag must be 0 or 1, got {other:?}"),
                        ))
                    }
                };
                let weight = match fields.get(5) {
                    None => 1,
                    Some(w) => match w.parse::<i128>() {
                        Ok(w) if w >= 1 && w <= u64::MAX as i128 => w as u64,
                        Ok(_) => return Err(ParseError::new(line_no, "weight must be at least 1")),
                        Err(_) => return Err(ParseError::new(line_no, format!("invalid weight {w:?}"))),
                    },
                };
                graph.edges.push(Edge {
                    tail,
                    head,
                    cost,
                    parameterized,
                    weight,
                });
            }
            other => {
                return Err(ParseError::new(line_no, format!("unknown line type {other:?}")));
            }
        }
    }

    let (_, m) = header.ok_or_else(|| ParseError::new(last_line.max(1), "missing `p psp` header"))?;
    if graph.edges.len() != m {
        return Err(ParseError::new(
            last_line.max(header_line),
            format!("edge count mismatch: header declares {m} edges, found {}", graph.edges.len()),
        ));
    }
    Ok(graph)
}

fn parse_vertex(field: &str, n: usize, line: usize) -> Result<VertexId, ParseError> {
    let v: i128 = field
        .parse()
        .map_err(|_| ParseError::new(line, format!("invalid vertex id {field:?}")))?;
    if v < 1 || v > n as i128 {
        return Err(ParseError::new(line, format!("vertex id {v} out of range")));
    }
    Ok(v as usize - 1)
}

impl<C: CostScalar> FromStr for Graph<C> {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        parse_graph(s)
    }
}

pub fn serialize_graph<C: std::fmt::Display>(g: &Graph<C>) -> String {
    let mut out = String::with_capacity(32 + 24 * g.edges.len());
    let _ = writeln!(out, "p psp {} {}", g.n, g.edges.len());
    if let Some(s) = g.source {
        let _ = writeln!(out, "s {}", s + 1);
    }
    for e in &g.edges {
        let _ = writeln!(
            out,
            "a {} {} {} {} {}",
            e.tail + 1,
            e.head + 1,
            e.cost,
            u8::from(e.parameterized),
            e.weight
        );
    }
    out
}
