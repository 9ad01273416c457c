//! Parametric shortest paths.
//!
//! For a graph with a source and a set of parameterized edges, `G_λ` is the
//! graph with edge costs `c(e) - λ·w(e)` on parameterized edges (`w` is the
//! edge weight, 1 unless set) and `c(e)` elsewhere. [`solve`] produces a
//! shortest-path tree of `G_λ` for every `λ` from `-∞` up to `λ*`, the
//! largest value at which `G_λ` has no negative cycle.
//!
//! The solver walks the sequence of trees one pivot at a time. Every vertex
//! carries a key: the smallest `λ` at which some path "tree path to `u`,
//! then edge `(u, v)`" catches up with the tree path to `v` while using more
//! parameterized weight. Keys live in a Fibonacci heap; the minimum key gives
//! the next pivot. When the pivoting edge closes a cycle through the pivot
//! vertex, that cycle has zero cost in `G_λ` and `λ* = λ`.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::{Adjacency, EdgeId, Graph, VertexId};
use crate::heap::{FibHeap, Handle};
use crate::scalar::{CostScalar, Extended, Field};

const NIL: usize = usize::MAX;

/// A shortest-path tree with per-vertex path cost and parameterized weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathTree<C> {
    pub source: VertexId,
    pub parent_edge: Vec<Option<EdgeId>>,
    /// Unparameterized cost `c(t_v)` of the tree path to each vertex.
    pub cost: Vec<C>,
    /// Total parameterized weight on the tree path to each vertex.
    pub pcount: Vec<u64>,
    pub children: Vec<Vec<VertexId>>,
}

impl<C: CostScalar> PathTree<C> {
    /// Assembles a tree from parent edges, recomputing path costs and counts.
    /// Fails if some vertex does not hang off `source`.
    pub fn from_parents(g: &Graph<C>, source: VertexId, parent_edge: Vec<Option<EdgeId>>) -> Result<Self> {
        let n = g.n();
        let mut children = vec![Vec::new(); n];
        for (v, pe) in parent_edge.iter().enumerate() {
            if let Some(e) = *pe {
                let edge = g.edges().get(e).ok_or(Error::NoSuchEdge(e))?;
                if edge.head != v {
                    return Err(Error::Unreachable(v));
                }
                children[edge.tail].push(v);
            } else if v != source {
                return Err(Error::Unreachable(v));
            }
        }
        if parent_edge[source].is_some() {
            return Err(Error::Unreachable(source));
        }
        let mut cost = vec![C::zero(); n];
        let mut pcount = vec![0u64; n];
        let mut seen = vec![false; n];
        seen[source] = true;
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            for &v in &children[u] {
                let e = g.edge(parent_edge[v].expect("child has a parent edge"));
                cost[v] = cost[u].clone() + e.cost.clone();
                pcount[v] = pcount[u] + e.param_weight();
                seen[v] = true;
                queue.push_back(v);
            }
        }
        if let Some(v) = seen.iter().position(|s| !s) {
            return Err(Error::Unreachable(v));
        }
        Ok(PathTree {
            source,
            parent_edge,
            cost,
            pcount,
            children,
        })
    }

    pub fn n(&self) -> usize {
        self.parent_edge.len()
    }

    /// Cost of the tree path to `v` in `G_λ`.
    pub fn distance_at(&self, v: VertexId, lambda: &C::Field) -> C::Field {
        self.cost[v].to_field() - lambda.clone() * C::Field::from_count(self.pcount[v])
    }

    pub fn distances_at(&self, lambda: &C::Field) -> Vec<C::Field> {
        (0..self.n()).map(|v| self.distance_at(v, lambda)).collect()
    }
}

/// Outcome of computing the tree for `λ = -∞`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InitialTree<C> {
    Tree(PathTree<C>),
    /// A cycle with no parameterized weight and negative cost: `λ* = -∞`.
    MinusInfCertificate(Vec<EdgeId>),
}

/// Shortest-path tree of `G_{-∞}`: Bellman–Ford on the lexicographic cost
/// (parameterized weight, then cost), so paths with less parameterized
/// weight always win.
pub fn initial_tree<C: CostScalar>(g: &Graph<C>) -> Result<InitialTree<C>> {
    let source = g.source().ok_or(Error::NoSource)?;
    let n = g.n();
    let mut label: Vec<Option<(u64, C)>> = vec![None; n];
    let mut pred: Vec<Option<EdgeId>> = vec![None; n];
    label[source] = Some((0, C::zero()));

    let mut last_changed = None;
    for _round in 0..n {
        last_changed = None;
        for (id, e) in g.edges().iter().enumerate() {
            let Some((pw, c)) = &label[e.tail] else { continue };
            let cand = (pw + e.param_weight(), c.clone() + e.cost.clone());
            let better = match &label[e.head] {
                None => true,
                Some(cur) => cand < *cur,
            };
            if better {
                label[e.head] = Some(cand);
                pred[e.head] = Some(id);
                last_changed = Some(e.head);
            }
        }
        if last_changed.is_none() {
            break;
        }
    }

    if let Some(mut x) = last_changed {
        // Still relaxing after n rounds: the predecessor graph has a cycle
        // reachable by walking back n steps.
        for _ in 0..n {
            x = g.edge(pred[x].expect("relaxed vertex has a predecessor")).tail;
        }
        let start = x;
        let mut cycle = Vec::new();
        loop {
            let e = pred[x].expect("cycle vertex has a predecessor");
            cycle.push(e);
            x = g.edge(e).tail;
            if x == start {
                break;
            }
        }
        cycle.reverse();
        return Ok(InitialTree::MinusInfCertificate(cycle));
    }

    if let Some(v) = label.iter().position(Option::is_none) {
        return Err(Error::Unreachable(v));
    }
    pred[source] = None;
    PathTree::from_parents(g, source, pred).map(InitialTree::Tree)
}

/// Result of one pivot step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Pivot<F> {
    /// `vertex` now enters through `edge`; `changed` is its subtree, every
    /// vertex of which acquired a new tree path.
    Pivoted {
        lambda: F,
        vertex: VertexId,
        edge: EdgeId,
        changed: Vec<VertexId>,
    },
    /// The pivot edge closes `cycle` (starting at the pivot vertex); the
    /// cycle costs zero in `G_λ` and `λ* = lambda`. The state is left at the
    /// last tree.
    CycleFound { lambda: F, cycle: Vec<EdgeId> },
    /// No key is finite: `λ* = +∞`.
    NoMorePivots,
}

/// Outcome of starting the solver.
pub enum Initialized<C: CostScalar> {
    Ready(Box<SolverState<C>>),
    MinusInfinity(Vec<EdgeId>),
}

/// Live pivoting state: the current tree, path values, and one heap item
/// per vertex keyed by its vertex key.
#[derive(Clone, Debug)]
pub struct SolverState<C: CostScalar> {
    graph: Graph<C>,
    inn: Adjacency,
    out: Adjacency,
    source: VertexId,
    parent: Vec<Option<EdgeId>>,
    first_child: Vec<usize>,
    next_sibling: Vec<usize>,
    prev_sibling: Vec<usize>,
    cost: Vec<C>,
    pcount: Vec<u64>,
    heap: FibHeap<Extended<C::Field>, VertexId>,
    handle: Vec<Handle>,
    key_edge: Vec<Option<EdgeId>>,
    lambda: Extended<C::Field>,
    stamp: Vec<u32>,
    epoch: u32,
    pivots: u64,
    path_changes: u64,
    changes_per_vertex: Vec<u64>,
}

impl<C: CostScalar> SolverState<C> {
    /// Computes the `-∞` tree and builds the key structures.
    pub fn start(graph: Graph<C>) -> Result<Initialized<C>> {
        match initial_tree(&graph)? {
            InitialTree::MinusInfCertificate(cycle) => Ok(Initialized::MinusInfinity(cycle)),
            InitialTree::Tree(tree) => Ok(Initialized::Ready(Box::new(Self::from_tree(
                graph,
                tree.source,
                tree.parent_edge,
                Extended::MinusInf,
            )?))),
        }
    }

    /// Builds a state around a given tree in O(m), recomputing path values,
    /// vertex keys and the heap. `lambda` is the current parameter value; the
    /// tree must be a shortest-path tree of `G_lambda`.
    pub fn from_tree(
        graph: Graph<C>,
        source: VertexId,
        parents: Vec<Option<EdgeId>>,
        lambda: Extended<C::Field>,
    ) -> Result<Self> {
        let tree = PathTree::from_parents(&graph, source, parents)?;
        let n = graph.n();
        let mut first_child = vec![NIL; n];
        let mut next_sibling = vec![NIL; n];
        let mut prev_sibling = vec![NIL; n];
        for (u, kids) in tree.children.iter().enumerate() {
            let mut prev = NIL;
            for &v in kids {
                if prev == NIL {
                    first_child[u] = v;
                } else {
                    next_sibling[prev] = v;
                }
                prev_sibling[v] = prev;
                prev = v;
            }
        }
        let inn = graph.in_adjacency();
        let out = graph.out_adjacency();
        let mut state = SolverState {
            graph,
            inn,
            out,
            source,
            parent: tree.parent_edge,
            first_child,
            next_sibling,
            prev_sibling,
            cost: tree.cost,
            pcount: tree.pcount,
            heap: FibHeap::with_capacity(n),
            handle: Vec::with_capacity(n),
            key_edge: vec![None; n],
            lambda,
            stamp: vec![0; n],
            epoch: 0,
            pivots: 0,
            path_changes: 0,
            changes_per_vertex: vec![0; n],
        };
        for v in 0..n {
            let (key, edge) = state.scratch_key(v);
            state.key_edge[v] = edge;
            let h = state.heap.insert(key, v);
            state.handle.push(h);
        }
        Ok(state)
    }

    pub fn graph(&self) -> &Graph<C> {
        &self.graph
    }

    pub fn source(&self) -> VertexId {
        self.source
    }

    pub fn lambda(&self) -> &Extended<C::Field> {
        &self.lambda
    }

    pub fn parent(&self, v: VertexId) -> Option<EdgeId> {
        self.parent[v]
    }

    pub fn parents(&self) -> &[Option<EdgeId>] {
        &self.parent
    }

    pub fn path_cost(&self, v: VertexId) -> &C {
        &self.cost[v]
    }

    pub fn path_pcount(&self, v: VertexId) -> u64 {
        self.pcount[v]
    }

    pub fn pcount_sum(&self) -> u64 {
        self.pcount.iter().sum()
    }

    pub fn pivots(&self) -> u64 {
        self.pivots
    }

    /// Total number of (vertex, new path) events so far.
    pub fn path_changes(&self) -> u64 {
        self.path_changes
    }

    pub fn changes_per_vertex(&self) -> &[u64] {
        &self.changes_per_vertex
    }

    pub fn heap_comparisons(&self) -> u64 {
        self.heap.comparisons()
    }

    /// Current key of `v` and the in-edge that determines it.
    pub fn vertex_key(&self, v: VertexId) -> (Extended<C::Field>, Option<EdgeId>) {
        let (key, _) = self.heap.get(self.handle[v]).expect("every vertex has a live heap item");
        (key.clone(), self.key_edge[v])
    }

    /// Snapshot of the current tree.
    pub fn tree(&self) -> PathTree<C> {
        let mut children = vec![Vec::new(); self.graph.n()];
        for (u, kids) in children.iter_mut().enumerate() {
            let mut c = self.first_child[u];
            while c != NIL {
                kids.push(c);
                c = self.next_sibling[c];
            }
        }
        PathTree {
            source: self.source,
            parent_edge: self.parent.clone(),
            cost: self.cost.clone(),
            pcount: self.pcount.clone(),
            children,
        }
    }

    /// Breakpoint at which `p(e)` (tree path to the tail, then `e`) ties the
    /// tree path to the head, or `+∞` if `p(e)` has no more parameterized
    /// weight than the tree path.
    pub fn edge_key(&self, e: EdgeId) -> Extended<C::Field> {
        let edge = self.graph.edge(e);
        let (u, v) = (edge.tail, edge.head);
        let den = self.pcount[u] as i128 + edge.param_weight() as i128 - self.pcount[v] as i128;
        if den <= 0 {
            return Extended::PlusInf;
        }
        let num = self.cost[u].clone() + edge.cost.clone() - self.cost[v].clone();
        Extended::Finite(C::ratio(&num, den as u64))
    }

    /// Minimum edge key over the in-edges of `v`; the first minimal in-edge
    /// wins ties.
    fn scratch_key(&self, v: VertexId) -> (Extended<C::Field>, Option<EdgeId>) {
        let mut best = Extended::PlusInf;
        let mut arg = None;
        for &e in self.inn.of(v) {
            let k = self.edge_key(e);
            if arg.is_none() || k < best {
                best = k;
                arg = Some(e);
            }
        }
        (best, arg)
    }

    fn set_key(&mut self, v: VertexId, key: Extended<C::Field>, edge: Option<EdgeId>) {
        let h = self.handle[v];
        let current = self.heap.get(h).expect("live heap item").0;
        match key.cmp(current) {
            std::cmp::Ordering::Less => {
                self.heap.decrease_key(h, key).expect("key decreases");
            }
            std::cmp::Ordering::Greater => {
                self.handle[v] = self.heap.reassign_key(h, key).expect("live heap item");
            }
            std::cmp::Ordering::Equal => {}
        }
        self.key_edge[v] = edge;
    }

    fn collect_subtree(&mut self, root: VertexId) -> Vec<VertexId> {
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.stamp.fill(0);
            self.epoch = 1;
        }
        let mut out = vec![root];
        self.stamp[root] = self.epoch;
        let mut i = 0;
        while i < out.len() {
            let mut c = self.first_child[out[i]];
            while c != NIL {
                self.stamp[c] = self.epoch;
                out.push(c);
                c = self.next_sibling[c];
            }
            i += 1;
        }
        out
    }

    fn detach(&mut self, v: VertexId, parent: VertexId) {
        let (p, n) = (self.prev_sibling[v], self.next_sibling[v]);
        if p == NIL {
            self.first_child[parent] = n;
        } else {
            self.next_sibling[p] = n;
        }
        if n != NIL {
            self.prev_sibling[n] = p;
        }
        self.prev_sibling[v] = NIL;
        self.next_sibling[v] = NIL;
    }

    fn attach(&mut self, v: VertexId, parent: VertexId) {
        let first = self.first_child[parent];
        self.next_sibling[v] = first;
        self.prev_sibling[v] = NIL;
        if first != NIL {
            self.prev_sibling[first] = v;
        }
        self.first_child[parent] = v;
    }

    /// Tree path from `top` down to `bottom` as edge ids (`top` must be an
    /// ancestor of `bottom`).
    fn tree_path(&self, top: VertexId, bottom: VertexId) -> Vec<EdgeId> {
        let mut path = Vec::new();
        let mut x = bottom;
        while x != top {
            let e = self.parent[x].expect("walk stays below top");
            path.push(e);
            x = self.graph.edge(e).tail;
        }
        path.reverse();
        path
    }

    /// Advances to the next tree (or detects the end of the sequence).
    pub fn pivot_once(&mut self) -> Pivot<C::Field> {
        let Some((key, &v)) = self.heap.find_min() else {
            return Pivot::NoMorePivots;
        };
        let lambda = match key {
            Extended::Finite(l) => l.clone(),
            _ => return Pivot::NoMorePivots,
        };
        let e = self.key_edge[v].expect("finite key has a determining edge");
        let edge = self.graph.edge(e).clone();
        let u = edge.tail;

        let subtree = self.collect_subtree(v);
        if self.stamp[u] == self.epoch {
            let mut cycle = self.tree_path(v, u);
            cycle.push(e);
            self.lambda = Extended::Finite(lambda.clone());
            return Pivot::CycleFound { lambda, cycle };
        }

        let delta_cost = self.cost[u].clone() + edge.cost.clone() - self.cost[v].clone();
        let delta_p = self.pcount[u] + edge.param_weight() - self.pcount[v];
        debug_assert!(delta_p > 0);

        if let Some(old) = self.parent[v] {
            let old_tail = self.graph.edge(old).tail;
            self.detach(v, old_tail);
        }
        self.attach(v, u);
        self.parent[v] = Some(e);

        for &w in &subtree {
            self.cost[w] = self.cost[w].clone() + delta_cost.clone();
            self.pcount[w] += delta_p;
            self.changes_per_vertex[w] += 1;
        }
        self.pivots += 1;
        self.path_changes += subtree.len() as u64;
        self.lambda = Extended::Finite(lambda.clone());

        // Keys inside the subtree may move either way: recompute them.
        for &w in &subtree {
            let (k, ke) = self.scratch_key(w);
            self.set_key(w, k, ke);
        }
        // Edges leaving the subtree can only lower their heads' keys.
        for &w in &subtree {
            for i in 0..self.out.degree(w) {
                let e2 = self.out.of(w)[i];
                let x = self.graph.edge(e2).head;
                if self.stamp[x] == self.epoch {
                    continue;
                }
                let k = self.edge_key(e2);
                let current = self.heap.get(self.handle[x]).expect("live heap item").0;
                if k < *current {
                    self.heap.decrease_key(self.handle[x], k).expect("key decreases");
                    self.key_edge[x] = Some(e2);
                }
            }
        }

        Pivot::Pivoted {
            lambda,
            vertex: v,
            edge: e,
            changed: subtree,
        }
    }

    /// Recomputes everything from scratch and lists disagreements with the
    /// maintained state. Empty means the state is consistent.
    pub fn audit(&self) -> Vec<String> {
        let mut problems = Vec::new();
        match PathTree::from_parents(&self.graph, self.source, self.parent.clone()) {
            Err(e) => problems.push(format!("parent edges do not form a tree: {e}")),
            Ok(tree) => {
                for v in 0..self.graph.n() {
                    if tree.cost[v] != self.cost[v] || tree.pcount[v] != self.pcount[v] {
                        problems.push(format!("path values of vertex {v} are stale"));
                    }
                }
                if tree.children.iter().map(Vec::len).sum::<usize>() + 1 != self.graph.n() {
                    problems.push("children lists are inconsistent".into());
                }
            }
        }
        for v in 0..self.graph.n() {
            let (want, _) = self.scratch_key(v);
            let (have, edge) = self.vertex_key(v);
            if want != have {
                problems.push(format!("vertex {v}: key {have} but in-edges give {want}"));
            }
            if let Some(e) = edge {
                if self.edge_key(e) != have {
                    problems.push(format!("vertex {v}: determining edge {e} does not attain its key"));
                }
            }
            if have < self.lambda {
                problems.push(format!("vertex {v}: key {have} below current lambda {}", self.lambda));
            }
        }
        problems
    }

    pub fn into_graph(self) -> Graph<C> {
        self.graph
    }
}

/// One entry of a vertex's parent history.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParentChange<F> {
    /// Breakpoint from which the new parent is in effect.
    pub lambda: Extended<F>,
    /// Number of pivots performed when this entry was recorded (0 for the
    /// initial tree).
    pub pivot: usize,
    pub edge: Option<EdgeId>,
}

/// The full tree sequence in compressed form: per-vertex parent histories.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParametricSolution<F> {
    pub source: VertexId,
    /// Pivot values in the order they were taken (nondecreasing).
    pub breakpoints: Vec<F>,
    pub parent_log: Vec<Vec<ParentChange<F>>>,
    pub lambda_star: Extended<F>,
    /// Zero-cost cycle of `G_{λ*}`, present iff `λ*` is finite.
    pub terminal_cycle: Option<Vec<EdgeId>>,
    /// Negative cycle without parameterized weight, present iff `λ* = -∞`.
    pub minus_inf_cycle: Option<Vec<EdgeId>>,
    pub pivot_count: u64,
    pub path_change_count: u64,
    pub changes_per_vertex: Vec<u64>,
    pub heap_comparisons: u64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SolveOptions {
    /// Drop repeated breakpoint values from `breakpoints`.
    pub dedup: bool,
}

pub fn solve<C: CostScalar>(g: &Graph<C>) -> Result<ParametricSolution<C::Field>> {
    solve_with(g, SolveOptions::default())
}

/// Runs the pivot loop to exhaustion, recording every parent change.
pub fn solve_with<C: CostScalar>(g: &Graph<C>, opts: SolveOptions) -> Result<ParametricSolution<C::Field>> {
    let source = g.source().ok_or(Error::NoSource)?;
    let mut state = match SolverState::start(g.clone())? {
        Initialized::Ready(s) => *s,
        Initialized::MinusInfinity(cycle) => {
            return Ok(ParametricSolution {
                source,
                breakpoints: Vec::new(),
                parent_log: vec![Vec::new(); g.n()],
                lambda_star: Extended::MinusInf,
                terminal_cycle: None,
                minus_inf_cycle: Some(cycle),
                pivot_count: 0,
                path_change_count: 0,
                changes_per_vertex: vec![0; g.n()],
                heap_comparisons: 0,
            })
        }
    };
    let mut parent_log: Vec<Vec<ParentChange<C::Field>>> = state
        .parents()
        .iter()
        .map(|&edge| {
            vec![ParentChange {
                lambda: Extended::MinusInf,
                pivot: 0,
                edge,
            }]
        })
        .collect();
    let mut breakpoints = Vec::new();

    let (lambda_star, terminal_cycle) = loop {
        match state.pivot_once() {
            Pivot::Pivoted { lambda, vertex, edge, .. } => {
                breakpoints.push(lambda.clone());
                parent_log[vertex].push(ParentChange {
                    lambda: Extended::Finite(lambda),
                    pivot: breakpoints.len(),
                    edge: Some(edge),
                });
            }
            Pivot::CycleFound { lambda, cycle } => break (Extended::Finite(lambda), Some(cycle)),
            Pivot::NoMorePivots => break (Extended::PlusInf, None),
        }
    };
    if opts.dedup {
        breakpoints.dedup();
    }
    Ok(ParametricSolution {
        source,
        breakpoints,
        parent_log,
        lambda_star,
        terminal_cycle,
        minus_inf_cycle: None,
        pivot_count: state.pivots(),
        path_change_count: state.path_changes(),
        changes_per_vertex: state.changes_per_vertex().to_vec(),
        heap_comparisons: state.heap_comparisons(),
    })
}

impl<F: Field> ParametricSolution<F> {
    pub fn n(&self) -> usize {
        self.parent_log.len()
    }

    /// Shortest-path tree of `G_λ`. At a breakpoint the tree after all
    /// pivots taken at that value is returned.
    pub fn tree_at<C>(&self, g: &Graph<C>, lambda: &Extended<F>) -> Result<PathTree<C>>
    where
        C: CostScalar<Field = F>,
    {
        if self.minus_inf_cycle.is_some() || *lambda > self.lambda_star {
            return Err(Error::AboveLambdaStar);
        }
        let parents = self
            .parent_log
            .iter()
            .map(|log| {
                let i = log.partition_point(|c| c.lambda <= *lambda);
                log[i.max(1) - 1].edge
            })
            .collect();
        PathTree::from_parents(g, self.source, parents)
    }

    /// The tree after exactly `pivots` pivots.
    pub fn tree_after<C>(&self, g: &Graph<C>, pivots: usize) -> Result<PathTree<C>>
    where
        C: CostScalar<Field = F>,
    {
        if self.minus_inf_cycle.is_some() {
            return Err(Error::AboveLambdaStar);
        }
        let parents = self
            .parent_log
            .iter()
            .map(|log| {
                let i = log.partition_point(|c| c.pivot <= pivots);
                log[i.max(1) - 1].edge
            })
            .collect();
        PathTree::from_parents(g, self.source, parents)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Edge;
    use crate::rational::Rational;

    fn r(n: i128) -> Rational {
        Rational::from_integer(n)
    }

    fn edge(tail: usize, head: usize, cost: i64, parameterized: bool) -> Edge<i64> {
        Edge {
            tail,
            head,
            cost,
            parameterized,
            weight: 1,
        }
    }

    /// s -> v twice: A cost 0 unparameterized, B cost 4 parameterized.
    fn parallel_pair() -> Graph<i64> {
        let mut g = Graph::new(2);
        g.push_edge(edge(0, 1, 0, false)).unwrap();
        g.push_edge(edge(0, 1, 4, true)).unwrap();
        g.with_source(0).unwrap()
    }

    fn two_cycle() -> Graph<i64> {
        let mut g = Graph::new(2);
        g.add_edge(0, 1, 3).unwrap();
        g.add_edge(1, 0, 5).unwrap();
        g.with_source(0).unwrap()
    }

    fn ready(g: Graph<i64>) -> SolverState<i64> {
        match SolverState::start(g).unwrap() {
            Initialized::Ready(s) => *s,
            Initialized::MinusInfinity(_) => panic!("unexpected -inf"),
        }
    }

    #[test]
    fn initial_tree_prefers_fewer_parameterized_edges() {
        let mut g = Graph::new(2);
        g.push_edge(edge(0, 1, 0, false)).unwrap();
        g.push_edge(edge(0, 1, -10, true)).unwrap();
        let g = g.with_source(0).unwrap();
        let InitialTree::Tree(t) = initial_tree(&g).unwrap() else { panic!() };
        assert_eq!(t.parent_edge, vec![None, Some(0)]);
    }

    #[test]
    fn initial_tree_without_parameters_is_plain_shortest_paths() {
        let mut g = Graph::new(3);
        g.push_edge(edge(0, 1, 5, false)).unwrap();
        g.push_edge(edge(0, 2, 1, false)).unwrap();
        g.push_edge(edge(2, 1, 1, false)).unwrap();
        let g = g.with_source(0).unwrap();
        let InitialTree::Tree(t) = initial_tree(&g).unwrap() else { panic!() };
        assert_eq!(t.parent_edge, vec![None, Some(2), Some(1)]);
        assert_eq!(t.cost, vec![0, 2, 1]);
        assert_eq!(t.pcount, vec![0, 0, 0]);
    }

    #[test]
    fn initial_tree_reports_unparameterized_negative_cycle() {
        let mut g = Graph::new(3);
        g.push_edge(edge(0, 1, 0, false)).unwrap();
        g.push_edge(edge(1, 2, 2, false)).unwrap();
        g.push_edge(edge(2, 1, -3, false)).unwrap();
        let g = g.with_source(0).unwrap();
        let InitialTree::MinusInfCertificate(mut c) = initial_tree(&g).unwrap() else { panic!() };
        c.sort();
        assert_eq!(c, vec![1, 2]);
        let sol = solve(&g).unwrap();
        assert_eq!(sol.lambda_star, Extended::MinusInf);
        assert!(sol.terminal_cycle.is_none());
    }

    #[test]
    fn initial_tree_reports_unreachable() {
        let mut g = Graph::new(3);
        g.add_edge(0, 1, 1).unwrap();
        let g = g.with_source(0).unwrap();
        assert_eq!(initial_tree(&g), Err(Error::Unreachable(2)));
        assert_eq!(initial_tree(&Graph::<i64>::new(1)), Err(Error::NoSource));
    }

    #[test]
    fn edge_key_formula() {
        // Tree: s -> u (cost 5, param), s -> v (cost 3, param). Extra edge
        // u -> v cost 2 param: key (5 + 2 - 3) / (1 + 1 - 1) = 4.
        let mut g = Graph::new(3);
        g.add_edge(0, 1, 5).unwrap();
        g.add_edge(0, 2, 3).unwrap();
        let e = g.add_edge(1, 2, 2).unwrap();
        let s = ready(g.with_source(0).unwrap());
        assert_eq!((s.path_cost(1), s.path_pcount(1)), (&5, 1));
        assert_eq!(s.edge_key(e), Extended::Finite(r(4)));
        // Tree edge: zero numerator over zero denominator.
        assert_eq!(s.edge_key(1), Extended::PlusInf);
    }

    #[test]
    fn edge_key_equal_counts_is_infinite() {
        let mut g = Graph::new(3);
        g.add_edge(0, 1, 5).unwrap();
        g.push_edge(edge(0, 2, 3, true)).unwrap();
        let e = g.push_edge(edge(1, 2, -100, false)).unwrap();
        let s = ready(g.with_source(0).unwrap());
        assert_eq!(s.edge_key(e), Extended::PlusInf);
    }

    #[test]
    fn tree_edge_key_is_zero_when_counts_grow() {
        // A tree edge whose head path gained parameterized weight through a
        // sibling: key 0 / Δ = 0 is impossible in a consistent tree, so the
        // denominator must be zero and the key infinite.
        let s = ready(parallel_pair());
        assert_eq!(s.edge_key(0), Extended::PlusInf);
    }

    #[test]
    fn single_pivot_instance() {
        let mut s = ready(parallel_pair());
        assert_eq!(s.parent(1), Some(0));
        match s.pivot_once() {
            Pivot::Pivoted { lambda, vertex, edge, changed } => {
                assert_eq!(lambda, r(4));
                assert_eq!((vertex, edge), (1, 1));
                assert_eq!(changed, vec![1]);
            }
            other => panic!("{other:?}"),
        }
        assert!(s.audit().is_empty(), "{:?}", s.audit());
        assert_eq!(s.pivot_once(), Pivot::NoMorePivots);
    }

    #[test]
    fn two_cycle_instance() {
        let mut s = ready(two_cycle());
        match s.pivot_once() {
            Pivot::CycleFound { lambda, mut cycle } => {
                assert_eq!(lambda, r(4));
                cycle.sort();
                assert_eq!(cycle, vec![0, 1]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn solve_parallel_pair() {
        let g = parallel_pair();
        let sol = solve(&g).unwrap();
        assert_eq!(sol.breakpoints, vec![r(4)]);
        assert_eq!(sol.lambda_star, Extended::PlusInf);
        assert!(sol.terminal_cycle.is_none());
        let log: Vec<_> = sol.parent_log[1].iter().map(|c| (c.lambda, c.edge)).collect();
        assert_eq!(log, vec![(Extended::MinusInf, Some(0)), (Extended::Finite(r(4)), Some(1))]);

        assert_eq!(sol.tree_at(&g, &Extended::Finite(r(0))).unwrap().parent_edge[1], Some(0));
        assert_eq!(sol.tree_at(&g, &Extended::Finite(r(4))).unwrap().parent_edge[1], Some(1));
        let InitialTree::Tree(t0) = initial_tree(&g).unwrap() else { panic!() };
        assert_eq!(sol.tree_at(&g, &Extended::MinusInf).unwrap(), t0);
    }

    #[test]
    fn solve_two_cycle() {
        let g = two_cycle();
        let sol = solve(&g).unwrap();
        assert!(sol.breakpoints.is_empty());
        assert_eq!(sol.lambda_star, Extended::Finite(r(4)));
        let mut c = sol.terminal_cycle.clone().unwrap();
        c.sort();
        assert_eq!(c, vec![0, 1]);
        assert_eq!(
            sol.tree_at(&g, &Extended::Finite(r(5))),
            Err(Error::AboveLambdaStar)
        );
    }

    #[test]
    fn dedup_collapses_equal_breakpoints() {
        // Two symmetric branches pivot at the same value.
        let mut g = Graph::new(3);
        g.push_edge(edge(0, 1, 0, false)).unwrap();
        g.push_edge(edge(0, 1, 2, true)).unwrap();
        g.push_edge(edge(0, 2, 0, false)).unwrap();
        g.push_edge(edge(0, 2, 2, true)).unwrap();
        let g = g.with_source(0).unwrap();
        let sol = solve(&g).unwrap();
        assert_eq!(sol.breakpoints, vec![r(2), r(2)]);
        let sol = solve_with(&g, SolveOptions { dedup: true }).unwrap();
        assert_eq!(sol.breakpoints, vec![r(2)]);
        assert_eq!(sol.pivot_count, 2);
    }

    #[test]
    fn self_loop_is_a_cycle() {
        let mut g = Graph::new(2);
        g.push_edge(edge(0, 1, 0, false)).unwrap();
        g.add_edge(1, 1, -7).unwrap();
        let sol = solve(&g.with_source(0).unwrap()).unwrap();
        assert_eq!(sol.lambda_star, Extended::Finite(r(-7)));
        assert_eq!(sol.terminal_cycle, Some(vec![1]));
    }

    #[test]
    fn weighted_keys_divide_by_weight() {
        let mut g = Graph::new(2);
        g.push_edge(Edge { tail: 0, head: 1, cost: 3, parameterized: true, weight: 1 }).unwrap();
        g.push_edge(Edge { tail: 1, head: 0, cost: 5, parameterized: true, weight: 3 }).unwrap();
        let sol = solve(&g.with_source(0).unwrap()).unwrap();
        assert_eq!(sol.lambda_star, Extended::Finite(r(2)));
    }
}
