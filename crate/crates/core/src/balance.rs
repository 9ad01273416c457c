//! Minimum balancing of strongly connected graphs.
//!
//! A potential minimum-balances a graph when, for every proper nonempty
//! vertex subset, the cheapest reduced edge entering the subset costs the
//! same as the cheapest reduced edge leaving it. The algorithm repeatedly
//! finds a minimum mean cycle, reduces costs by the shortest-path potential,
//! contracts the cycle, and keeps pivoting on the contracted graph from the
//! contracted tree instead of starting over.

use crate::cycles::Potential;
use crate::error::{Error, Result};
use crate::graph::{contract_cycle, Edge, EdgeId, Graph, VertexId, VertexMap};
use crate::parametric::{Initialized, Pivot, SolverState};
use crate::scalar::{CostScalar, Extended, Field};

/// One contraction: the global minimum cycle mean at that point and the
/// contracted cycle as edge ids of the input graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Contraction<F> {
    pub lambda: F,
    pub cycle: Vec<EdgeId>,
}

/// One contraction level: the shortest-path potential applied before the
/// contraction (over that level's vertices) and where the vertices went.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Level<F> {
    pub potential: Potential<F>,
    pub map: VertexMap,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ContractionStack<F> {
    pub levels: Vec<Level<F>>,
}

impl<F: Field> ContractionStack<F> {
    /// Sum of every level's potential, each extended to the original
    /// vertices through the maps of the levels before it.
    pub fn compose(&self, n: usize) -> Potential<F> {
        let mut total: Potential<F> = Potential::zero(n);
        for (w, slot) in total.0.iter_mut().enumerate() {
            let mut x = w;
            for level in &self.levels {
                *slot = slot.clone() + level.potential[x].clone();
                x = level.map.map[x];
            }
        }
        total
    }

    /// Where each original vertex ends up after all levels.
    pub fn final_map(&self, n: usize) -> Vec<VertexId> {
        (0..n)
            .map(|w| self.levels.iter().fold(w, |x, level| level.map.map[x]))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BalanceResult<F> {
    /// Balancing potential, normalized to 0 at vertex 0.
    pub potential: Potential<F>,
    pub contraction_trace: Vec<Contraction<F>>,
    pub contraction_count: usize,
    pub stack: ContractionStack<F>,
    pub pivots: u64,
    /// New tree paths acquired per input vertex (through its super-vertex).
    pub changes_per_vertex: Vec<u64>,
}

/// State after contracting the terminal cycle.
pub struct Rebuilt<F: Field> {
    pub state: SolverState<F>,
    /// Shortest-path potential at the contraction value, over the
    /// pre-contraction vertices.
    pub potential: Potential<F>,
    pub map: VertexMap,
}

/// Reduces costs of `state`'s graph to `c - λ + π(u) - π(v)` with `π` the
/// distances in `G_λ`, contracts `cycle`, and restarts the solver at `λ = 0`
/// on the contracted graph with the contracted tree. Every tree edge has
/// reduced cost zero, so the contracted tree is a shortest-path tree there.
/// Path weights are recomputed as tree depths, which keeps every edge key
/// consistent with the new tree.
pub fn rebuild_after_contraction<F: Field>(state: SolverState<F>, lambda: &F, cycle: &[EdgeId]) -> Result<Rebuilt<F>> {
    let tree = state.tree();
    let g = state.into_graph();
    let pi = tree.distances_at(lambda);
    let mut reduced = Graph::new(g.n());
    for e in g.edges() {
        reduced.push_edge(Edge {
            tail: e.tail,
            head: e.head,
            cost: e.cost.clone() - lambda.clone() + pi[e.tail].clone() - pi[e.head].clone(),
            parameterized: true,
            weight: 1,
        })?;
    }
    reduced.set_source(g.source())?;
    let (h, map) = contract_cycle(&reduced, cycle)?;

    let mut new_edge = vec![None; g.m()];
    for (ne, &oe) in map.edge_origin.iter().enumerate() {
        new_edge[oe] = Some(ne);
    }
    let top = g.edge(cycle[0]).tail;
    let mut parents = vec![None; h.n()];
    for (x, pe) in tree.parent_edge.iter().enumerate() {
        let on_cycle = map.map[x] == map.contracted;
        if on_cycle && x != top {
            continue;
        }
        parents[map.map[x]] = pe.map(|e| new_edge[e].expect("parent edge leaves the cycle"));
    }
    let source = map.map[tree.source];
    let state = SolverState::from_tree(h, source, parents, Extended::Finite(F::zero()))?;
    Ok(Rebuilt {
        state,
        potential: Potential(pi),
        map,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BalanceStep<F> {
    /// A pivot at the given global parameter value; `changed` vertices of the
    /// current graph acquired new paths.
    Pivoted { lambda: F, changed: usize },
    Contracted(Contraction<F>),
    Finished,
}

/// Step-by-step driver for [`min_balance`].
pub struct Balancer<F: Field> {
    n: usize,
    state: SolverState<F>,
    offset: F,
    current: Vec<VertexId>,
    members: Vec<Vec<VertexId>>,
    origin: Vec<EdgeId>,
    potential: Vec<F>,
    stack: ContractionStack<F>,
    trace: Vec<Contraction<F>>,
    pivots: u64,
    changes: Vec<u64>,
}

impl<F: Field> Balancer<F> {
    /// Starts on the input graph with every edge parameterized, source
    /// vertex 0. Self-loops are dropped: they cross no cut.
    pub fn new<C: CostScalar<Field = F>>(g: &Graph<C>) -> Result<Self> {
        let n = g.n();
        if n == 0 || !g.is_strongly_connected() {
            return Err(Error::NotStronglyConnected);
        }
        let mut h = Graph::new(n);
        let mut origin = Vec::new();
        for (id, e) in g.edges().iter().enumerate() {
            if e.tail == e.head {
                continue;
            }
            h.push_edge(Edge {
                tail: e.tail,
                head: e.head,
                cost: e.cost.to_field(),
                parameterized: true,
                weight: 1,
            })?;
            origin.push(id);
        }
        let h = h.with_source(0)?;
        let state = match SolverState::start(h)? {
            Initialized::Ready(s) => *s,
            Initialized::MinusInfinity(_) => unreachable!("every edge is parameterized"),
        };
        Ok(Balancer {
            n,
            state,
            offset: F::zero(),
            current: (0..n).collect(),
            members: (0..n).map(|v| vec![v]).collect(),
            origin,
            potential: vec![F::zero(); n],
            stack: ContractionStack { levels: Vec::new() },
            trace: Vec::new(),
            pivots: 0,
            changes: vec![0; n],
        })
    }

    pub fn state(&self) -> &SolverState<F> {
        &self.state
    }

    pub fn is_finished(&self) -> bool {
        self.state.graph().n() == 1
    }

    /// Vertex of the current graph containing input vertex `w`.
    pub fn current_vertex(&self, w: VertexId) -> VertexId {
        self.current[w]
    }

    /// Current vertex count minus the parameterized weight of the tree path
    /// of `w`'s super-vertex. Never increases.
    pub fn slack(&self, w: VertexId) -> u64 {
        self.state.graph().n() as u64 - self.state.path_pcount(self.current[w])
    }

    pub fn contractions(&self) -> &[Contraction<F>] {
        &self.trace
    }

    pub fn step(&mut self) -> Result<BalanceStep<F>> {
        if self.is_finished() {
            return Ok(BalanceStep::Finished);
        }
        match self.state.pivot_once() {
            Pivot::Pivoted { lambda, changed, .. } => {
                for &x in &changed {
                    for &w in &self.members[x] {
                        self.changes[w] += 1;
                    }
                }
                self.pivots += 1;
                Ok(BalanceStep::Pivoted {
                    lambda: self.offset.clone() + lambda,
                    changed: changed.len(),
                })
            }
            Pivot::NoMorePivots => Err(Error::NotStronglyConnected),
            Pivot::CycleFound { lambda, cycle } => self.contract(lambda, cycle),
        }
    }

    fn contract(&mut self, lambda: F, cycle: Vec<EdgeId>) -> Result<BalanceStep<F>> {
        // Swap in a placeholder while the old state is consumed.
        let placeholder = SolverState::from_tree(
            Graph::new(1).with_source(0)?,
            0,
            vec![None],
            Extended::MinusInf,
        )?;
        let old = std::mem::replace(&mut self.state, placeholder);
        let rebuilt = rebuild_after_contraction(old, &lambda, &cycle)?;

        let global = self.offset.clone() + lambda.clone();
        let contraction = Contraction {
            lambda: global,
            cycle: cycle.iter().map(|&e| self.origin[e]).collect(),
        };
        for w in 0..self.n {
            self.potential[w] = self.potential[w].clone() + rebuilt.potential[self.current[w]].clone();
            self.current[w] = rebuilt.map.map[self.current[w]];
        }
        self.origin = rebuilt.map.edge_origin.iter().map(|&e| self.origin[e]).collect();
        self.members = vec![Vec::new(); rebuilt.state.graph().n()];
        for w in 0..self.n {
            self.members[self.current[w]].push(w);
        }
        self.offset = self.offset.clone() + lambda;
        self.state = rebuilt.state;
        self.stack.levels.push(Level {
            potential: rebuilt.potential,
            map: rebuilt.map,
        });
        self.trace.push(contraction.clone());
        Ok(BalanceStep::Contracted(contraction))
    }

    pub fn into_result(self) -> BalanceResult<F> {
        BalanceResult {
            potential: Potential(self.potential).normalized_at(0),
            contraction_count: self.trace.len(),
            contraction_trace: self.trace,
            stack: self.stack,
            pivots: self.pivots,
            changes_per_vertex: self.changes,
        }
    }
}

/// Potential that minimum-balances the strongly connected graph `g`.
pub fn min_balance<C: CostScalar>(g: &Graph<C>) -> Result<BalanceResult<C::Field>> {
    let mut b = Balancer::new(g)?;
    while b.step()? != BalanceStep::Finished {}
    Ok(b.into_result())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BalanceCheck<F> {
    Balanced,
    Violation {
        subset: Vec<VertexId>,
        min_in: Option<F>,
        min_out: Option<F>,
    },
}

pub const CHECK_LIMIT: usize = 20;

/// Exhaustively checks every proper nonempty subset of `G^p`.
pub fn check_balanced<C: CostScalar>(g: &Graph<C>, p: &Potential<C::Field>) -> Result<BalanceCheck<C::Field>> {
    let n = g.n();
    if n > CHECK_LIMIT {
        return Err(Error::TooLarge { n, limit: CHECK_LIMIT });
    }
    if p.len() != n {
        return Err(Error::PotentialSize {
            expected: n,
            got: p.len(),
        });
    }
    let edges: Vec<(usize, usize, C::Field)> = g
        .edges()
        .iter()
        .filter(|e| e.tail != e.head)
        .map(|e| (e.tail, e.head, e.cost.to_field() + p[e.tail].clone() - p[e.head].clone()))
        .collect();
    let full = (1u32 << n) - 1;
    for mask in 1..full {
        let mut min_in: Option<&C::Field> = None;
        let mut min_out: Option<&C::Field> = None;
        for (t, h, c) in &edges {
            let (ti, hi) = (mask >> t & 1 == 1, mask >> h & 1 == 1);
            let slot = match (ti, hi) {
                (false, true) => &mut min_in,
                (true, false) => &mut min_out,
                _ => continue,
            };
            if slot.is_none_or(|m| c < m) {
                *slot = Some(c);
            }
        }
        if min_in != min_out {
            return Ok(BalanceCheck::Violation {
                subset: (0..n).filter(|v| mask >> v & 1 == 1).collect(),
                min_in: min_in.cloned(),
                min_out: min_out.cloned(),
            });
        }
    }
    Ok(BalanceCheck::Balanced)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycles::apply_potential;
    use crate::graph::random_strongly_connected;
    use crate::rational::Rational;

    fn r(n: i128) -> Rational {
        Rational::from_integer(n)
    }

    fn two_cycle(a: i64, b: i64) -> Graph<i64> {
        let mut g = Graph::new(2);
        g.add_edge(0, 1, a).unwrap();
        g.add_edge(1, 0, b).unwrap();
        g
    }

    #[test]
    fn balances_two_cycle() {
        let g = two_cycle(4, 0);
        let res = min_balance(&g).unwrap();
        assert_eq!(res.potential.values(), &[r(0), r(2)]);
        let h = apply_potential(&g, &res.potential).unwrap();
        assert_eq!(h.edges().iter().map(|e| e.cost).collect::<Vec<_>>(), vec![r(2), r(2)]);
        assert_eq!(check_balanced(&g, &res.potential).unwrap(), BalanceCheck::Balanced);
        assert_eq!(res.contraction_count, 1);
        assert_eq!(res.contraction_trace[0].lambda, r(2));
    }

    #[test]
    fn uniform_costs_need_no_potential() {
        let mut g = Graph::new(3);
        for (u, v) in [(0, 1), (1, 2), (2, 0), (0, 2)] {
            g.add_edge(u, v, 7).unwrap();
        }
        let res = min_balance(&g).unwrap();
        assert!(res.potential.values().iter().all(|x| *x == r(0)));
    }

    #[test]
    fn check_examples() {
        let g = two_cycle(4, 0);
        assert_eq!(
            check_balanced(&g, &Potential::zero(2)).unwrap(),
            BalanceCheck::Violation {
                subset: vec![0],
                min_in: Some(r(0)),
                min_out: Some(r(4)),
            }
        );
        let one: Graph<i64> = Graph::new(1);
        assert_eq!(check_balanced(&one, &Potential::zero(1)).unwrap(), BalanceCheck::Balanced);
        assert_eq!(min_balance(&one).unwrap().potential, Potential::zero(1));
    }

    #[test]
    fn rejects_not_strongly_connected() {
        let mut g = Graph::new(2);
        g.add_edge(0, 1, 1).unwrap();
        assert!(matches!(min_balance(&g), Err(Error::NotStronglyConnected)));
    }

    #[test]
    fn random_instances_balance() {
        for seed in 0..100 {
            let n = 2 + (seed % 7) as usize;
            let m = n + (seed as usize * 3) % (n * (n - 1) - n + 1);
            let (g, _) = random_strongly_connected(n, m, -20, 20, seed).unwrap();
            let res = min_balance(&g).unwrap();
            assert_eq!(check_balanced(&g, &res.potential).unwrap(), BalanceCheck::Balanced, "seed {seed}");
            assert!(res.contraction_count < n);
            let composed = res.stack.compose(n).normalized_at(0);
            assert_eq!(composed, res.potential);
            assert!(res.stack.final_map(n).iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn rebuild_leaves_zero_cost_tree_and_fresh_keys() {
        for seed in 0..100 {
            let (g, _) = random_strongly_connected(8, 20, -30, 30, seed).unwrap();
            let mut b = Balancer::new(&g).unwrap();
            loop {
                match b.step().unwrap() {
                    BalanceStep::Finished => break,
                    BalanceStep::Contracted(_) => {
                        let s = b.state();
                        assert!(s.audit().is_empty(), "{:?}", s.audit());
                        for v in 0..s.graph().n() {
                            if let Some(e) = s.parent(v) {
                                assert_eq!(s.graph().edge(e).cost, r(0));
                            }
                            assert!(s.graph().edges().iter().all(|e| e.cost >= r(0)));
                        }
                    }
                    BalanceStep::Pivoted { .. } => {}
                }
            }
        }
    }

    #[test]
    fn slack_never_increases() {
        for seed in 0..60 {
            let (g, _) = random_strongly_connected(9, 25, -30, 30, seed).unwrap();
            let mut b = Balancer::new(&g).unwrap();
            let mut last: Vec<u64> = (0..9).map(|w| b.slack(w)).collect();
            let mut lambdas = Vec::new();
            loop {
                let step = b.step().unwrap();
                if step == BalanceStep::Finished {
                    break;
                }
                if let BalanceStep::Contracted(c) = step {
                    lambdas.push(c.lambda);
                }
                let now: Vec<u64> = (0..9).map(|w| b.slack(w)).collect();
                for w in 0..9 {
                    assert!(now[w] <= last[w], "seed {seed} vertex {w}");
                }
                last = now;
            }
            assert!(lambdas.windows(2).all(|w| w[0] <= w[1]));
            let res = b.into_result();
            assert!(res.changes_per_vertex.iter().all(|&c| c <= 9));
        }
    }
}
