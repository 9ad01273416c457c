//! Minimum mean and minimum ratio cycles, potentials, and Karp's algorithm.

use std::fmt;
use std::ops::{Add, Index, Neg};

use crate::error::{Error, Result};
use crate::graph::{Edge, EdgeId, Graph, VertexId};
use crate::parametric::{solve, ParametricSolution};
use crate::scalar::{CostScalar, Extended, Field};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Parametric,
    Karp,
    Brute,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Parametric => "parametric",
            Method::Karp => "karp",
            Method::Brute => "brute",
        })
    }
}

/// A minimum cycle: `mean` is its total cost over its total weight (edge
/// count in mean mode).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleResult<F> {
    pub mean: F,
    pub cycle: Vec<EdgeId>,
    pub method: Method,
}

/// Vertex weights; reduce an edge `(u, v)` by `c + π(u) - π(v)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Potential<F>(pub Vec<F>);

impl<F: Field> Potential<F> {
    pub fn zero(n: usize) -> Self {
        Potential(vec![F::zero(); n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[F] {
        &self.0
    }

    /// Shifts all values so that `π(v) = 0`.
    pub fn normalized_at(mut self, v: VertexId) -> Self {
        if let Some(base) = self.0.get(v).cloned() {
            for x in &mut self.0 {
                *x = x.clone() - base.clone();
            }
        }
        self
    }
}

impl<F> Index<VertexId> for Potential<F> {
    type Output = F;
    fn index(&self, v: VertexId) -> &F {
        &self.0[v]
    }
}

impl<F: Field> Add for Potential<F> {
    type Output = Potential<F>;
    fn add(self, rhs: Self) -> Self {
        assert_eq!(self.len(), rhs.len(), "potentials over different vertex sets");
        Potential(self.0.into_iter().zip(rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl<F: Field> Neg for Potential<F> {
    type Output = Potential<F>;
    fn neg(self) -> Self {
        Potential(self.0.into_iter().map(|a| -a).collect())
    }
}

/// Replaces every cost by its reduced cost `c(e) + π(u) - π(v)`.
pub fn apply_potential<C: CostScalar>(g: &Graph<C>, p: &Potential<C::Field>) -> Result<Graph<C::Field>> {
    if p.len() != g.n() {
        return Err(Error::PotentialSize {
            expected: g.n(),
            got: p.len(),
        });
    }
    let mut h = Graph::new(g.n());
    for e in g.edges() {
        h.push_edge(Edge {
            tail: e.tail,
            head: e.head,
            cost: e.cost.to_field() + p[e.tail].clone() - p[e.head].clone(),
            parameterized: e.parameterized,
            weight: e.weight,
        })?;
    }
    h.set_source(g.source())?;
    Ok(h)
}

/// Appends a source vertex with a zero-cost unparameterized edge to every
/// other vertex. Original vertex and edge ids are unchanged.
pub fn add_artificial_source<C: CostScalar>(g: &Graph<C>) -> Graph<C> {
    let mut h = g.clone();
    let s = h.add_vertex();
    for v in 0..g.n() {
        h.push_edge(Edge {
            tail: s,
            head: v,
            cost: C::zero(),
            parameterized: false,
            weight: 1,
        })
        .expect("endpoints exist");
    }
    h.set_source(Some(s)).expect("source exists");
    h
}

/// The graph with every edge parameterized plus an artificial source; the
/// instance the cycle solvers hand to the parametric solver. With
/// `keep_weights` false every weight becomes 1.
pub fn sourceless_instance<C: CostScalar>(g: &Graph<C>, keep_weights: bool) -> Graph<C> {
    let all = g.map_edges(|e| {
        e.parameterized = true;
        if !keep_weights {
            e.weight = 1;
        }
    });
    add_artificial_source(&all)
}

fn parametric_cycle<C: CostScalar>(g: &Graph<C>, keep_weights: bool) -> Result<Option<CycleResult<C::Field>>> {
    if g.n() == 0 {
        return Ok(None);
    }
    let h = sourceless_instance(g, keep_weights);
    let sol = solve(&h)?;
    Ok(match (sol.lambda_star, sol.terminal_cycle) {
        (Extended::Finite(mean), Some(cycle)) => Some(CycleResult {
            mean,
            cycle,
            method: Method::Parametric,
        }),
        _ => None,
    })
}

/// Minimum mean cycle via the parametric solver, `None` if acyclic.
pub fn min_mean_cycle_parametric<C: CostScalar>(g: &Graph<C>) -> Result<Option<CycleResult<C::Field>>> {
    parametric_cycle(g, false)
}

/// Like [`min_mean_cycle_parametric`] but solves each strongly connected
/// component separately and keeps the best.
pub fn min_mean_cycle_parametric_scc<C: CostScalar>(g: &Graph<C>) -> Result<Option<CycleResult<C::Field>>> {
    per_component(g, false)
}

/// Minimum of total cost over total weight across all cycles.
pub fn min_ratio_cycle<C: CostScalar>(g: &Graph<C>) -> Result<Option<CycleResult<C::Field>>> {
    parametric_cycle(g, true)
}

pub fn min_ratio_cycle_scc<C: CostScalar>(g: &Graph<C>) -> Result<Option<CycleResult<C::Field>>> {
    per_component(g, true)
}

fn per_component<C: CostScalar>(g: &Graph<C>, keep_weights: bool) -> Result<Option<CycleResult<C::Field>>> {
    let comp = g.strongly_connected_components();
    let count = comp.iter().map(|&c| c + 1).max().unwrap_or(0);
    let mut best: Option<CycleResult<C::Field>> = None;
    for c in 0..count {
        let keep: Vec<bool> = comp.iter().map(|&x| x == c).collect();
        let size = keep.iter().filter(|&&k| k).count();
        let has_loop = g.edges().iter().any(|e| e.tail == e.head && keep[e.tail]);
        if size < 2 && !has_loop {
            continue;
        }
        let (sub, _, origin) = g.induced_subgraph(&keep);
        if let Some(mut r) = parametric_cycle(&sub, keep_weights)? {
            if best.as_ref().is_none_or(|b| r.mean < b.mean) {
                r.cycle = r.cycle.iter().map(|&e| origin[e]).collect();
                best = Some(r);
            }
        }
    }
    Ok(best)
}

/// Distances in `G_{λ*}` from the source, read off the terminal tree.
pub fn shortest_path_potential<C: CostScalar>(
    sol: &ParametricSolution<C::Field>,
    g: &Graph<C>,
) -> Result<Potential<C::Field>> {
    let Extended::Finite(star) = &sol.lambda_star else {
        return Err(Error::LambdaNotFinite);
    };
    let tree = sol.tree_at(g, &sol.lambda_star)?;
    Ok(Potential(tree.distances_at(star)))
}

/// Karp's dynamic program in its sourceless form: `D_k(v)` is the cheapest
/// `k`-edge walk ending at `v` (starting anywhere), for `k = 0..=n`. Returns
/// the minimum cycle mean, `None` if acyclic. Weights are ignored.
pub fn min_mean_cycle_karp<C: CostScalar>(g: &Graph<C>) -> Option<C::Field> {
    let n = g.n();
    if n == 0 {
        return None;
    }
    let mut d: Vec<Vec<Option<C>>> = Vec::with_capacity(n + 1);
    d.push(vec![Some(C::zero()); n]);
    for k in 1..=n {
        let prev = &d[k - 1];
        let mut cur: Vec<Option<C>> = vec![None; n];
        for e in g.edges() {
            let Some(du) = &prev[e.tail] else { continue };
            let cand = du.clone() + e.cost.clone();
            let slot = &mut cur[e.head];
            if slot.as_ref().is_none_or(|x| cand < *x) {
                *slot = Some(cand);
            }
        }
        d.push(cur);
    }
    let mut best: Option<C::Field> = None;
    for v in 0..n {
        let Some(dn) = &d[n][v] else { continue };
        let mut worst: Option<C::Field> = None;
        for (k, row) in d.iter().enumerate().take(n) {
            let Some(dk) = &row[v] else { continue };
            let val = C::ratio(&(dn.clone() - dk.clone()), (n - k) as u64);
            if worst.as_ref().is_none_or(|w| val > *w) {
                worst = Some(val);
            }
        }
        if let Some(w) = worst {
            if best.as_ref().is_none_or(|b| w < *b) {
                best = Some(w);
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::random_graph;
    use crate::oracle::brute_min_mean_cycle;
    use crate::rational::Rational;

    fn r(n: i128) -> Rational {
        Rational::from_integer(n)
    }

    fn triangle_with_back_edge() -> Graph<i64> {
        let mut g = Graph::new(3);
        g.add_edge(0, 1, 1).unwrap();
        g.add_edge(1, 2, 3).unwrap();
        g.add_edge(2, 0, 2).unwrap();
        g.add_edge(1, 0, 1).unwrap();
        g
    }

    fn cycle_cost(g: &Graph<i64>, c: &[EdgeId]) -> i64 {
        c.iter().map(|&e| g.edge(e).cost).sum()
    }

    #[test]
    fn artificial_source_shape() {
        let mut g = Graph::new(2);
        g.add_edge(0, 1, 3).unwrap();
        g.add_edge(1, 0, 5).unwrap();
        let h = add_artificial_source(&g);
        assert_eq!((h.n(), h.m(), h.source()), (3, 4, Some(2)));
        assert!(h.edges()[2..].iter().all(|e| e.tail == 2 && !e.parameterized && e.cost == 0));
    }

    #[test]
    fn artificial_source_keeps_min_mean() {
        for seed in 0..100 {
            let g = random_graph(6, 12, -10, 10, seed).unwrap();
            let before = brute_min_mean_cycle(&g).unwrap().map(|b| b.value);
            let h = add_artificial_source(&g);
            let after = brute_min_mean_cycle(&h).unwrap().map(|b| b.value);
            assert_eq!(before, after);
        }
    }

    #[test]
    fn mean_examples() {
        let g = triangle_with_back_edge();
        let res = min_mean_cycle_parametric(&g).unwrap().unwrap();
        assert_eq!(res.mean, r(1));
        assert_eq!(res.cycle.len(), 2);
        assert_eq!(cycle_cost(&g, &res.cycle), 2);
        assert_eq!(min_mean_cycle_karp(&g), Some(r(1)));

        let mut dag = Graph::new(3);
        dag.add_edge(0, 1, -5).unwrap();
        dag.add_edge(1, 2, -5).unwrap();
        assert_eq!(min_mean_cycle_parametric(&dag).unwrap(), None);
        assert_eq!(min_mean_cycle_karp(&dag), None);

        let mut two = Graph::new(2);
        two.add_edge(0, 1, 3).unwrap();
        two.add_edge(1, 0, 5).unwrap();
        assert_eq!(min_mean_cycle_parametric(&two).unwrap().unwrap().mean, r(4));
        assert_eq!(min_mean_cycle_karp(&two), Some(r(4)));
    }

    #[test]
    fn ratio_examples() {
        let mut g = Graph::new(2);
        g.push_edge(Edge { tail: 0, head: 1, cost: 3, parameterized: true, weight: 1 }).unwrap();
        g.push_edge(Edge { tail: 1, head: 0, cost: 5, parameterized: true, weight: 3 }).unwrap();
        assert_eq!(min_ratio_cycle(&g).unwrap().unwrap().mean, r(2));

        // Cycle A: cost 10 over weight 2. Cycle B: cost 6 over weight 1,
        // which with weights of at least 1 can only be a self-loop.
        let mut g = Graph::new(3);
        let a1 = g.add_edge(0, 1, 6).unwrap();
        let a2 = g.add_edge(1, 0, 4).unwrap();
        g.add_edge(2, 2, 6).unwrap();
        let res = min_ratio_cycle(&g).unwrap().unwrap();
        assert_eq!(res.mean, r(5));
        let mut c = res.cycle.clone();
        c.sort();
        assert_eq!(c, vec![a1, a2]);
    }

    #[test]
    fn scc_variant_agrees() {
        for seed in 0..100 {
            let g = random_graph(9, 14, -20, 20, seed).unwrap();
            let plain = min_mean_cycle_parametric(&g).unwrap().map(|r| r.mean);
            let split = min_mean_cycle_parametric_scc(&g).unwrap();
            assert_eq!(plain, split.as_ref().map(|r| r.mean));
            if let Some(res) = split {
                let total = cycle_cost(&g, &res.cycle);
                assert_eq!(Rational::new(total as i128, res.cycle.len() as i128), res.mean);
                g.cycle_vertices(&res.cycle).unwrap();
            }
        }
    }

    #[test]
    fn two_cycle_potential() {
        let mut g = Graph::new(2);
        g.add_edge(0, 1, 3).unwrap();
        g.add_edge(1, 0, 5).unwrap();
        let g = g.with_source(0).unwrap();
        let sol = solve(&g).unwrap();
        let p = shortest_path_potential(&sol, &g).unwrap();
        assert_eq!(p.values(), &[r(0), r(-1)]);
        let h = apply_potential(&g, &p).unwrap();
        assert_eq!(h.edges().iter().map(|e| e.cost).collect::<Vec<_>>(), vec![r(4), r(4)]);
    }

    #[test]
    fn potential_lower_bounds_reduced_costs() {
        for seed in 0..100 {
            let g = random_graph(10, 30, -50, 50, seed).unwrap();
            let h = sourceless_instance(&g, false);
            let sol = solve(&h).unwrap();
            let Extended::Finite(star) = sol.lambda_star else { continue };
            let p = shortest_path_potential(&sol, &h).unwrap();
            assert_eq!(p[h.source().unwrap()], r(0));
            let reduced = apply_potential(&h, &p).unwrap();
            let min = reduced.edges()[..g.m()].iter().map(|e| e.cost).min().unwrap();
            assert_eq!(min, star, "seed {seed}");
            for &e in sol.terminal_cycle.as_ref().unwrap() {
                assert_eq!(reduced.edge(e).cost, star);
            }
        }
    }

    #[test]
    fn potentials_preserve_cycle_costs() {
        for seed in 0..100u64 {
            let g = random_graph(7, 20, -30, 30, seed).unwrap();
            let p = Potential(
                (0..7)
                    .map(|v| Rational::new((seed as i128 * 31 + v * 17) % 23 - 11, 1 + v % 3))
                    .collect(),
            );
            let h = apply_potential(&g, &p).unwrap();
            if let Some(b) = brute_min_mean_cycle(&g).unwrap() {
                let orig: Rational = b.cycle.iter().fold(r(0), |a, &e| a + g.edge(e).cost.to_field());
                let red: Rational = b.cycle.iter().fold(r(0), |a, &e| a + h.edge(e).cost);
                assert_eq!(orig, red);
            }
            let back = apply_potential(&h, &-p.clone()).unwrap();
            assert_eq!(back, g.map_costs(|c| c.to_field()));
        }
    }

    #[test]
    fn potential_size_is_checked() {
        let g: Graph<i64> = Graph::new(3);
        assert_eq!(
            apply_potential(&g, &Potential::zero(2)),
            Err(Error::PotentialSize { expected: 3, got: 2 })
        );
        assert_eq!(apply_potential(&g, &Potential::zero(3)).unwrap(), g.map_costs(|c| c.to_field()));
    }
}
