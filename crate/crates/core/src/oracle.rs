//! Slow, independent reference computations.
//!
//! Nothing here calls into the parametric solver: distances come from plain
//! Bellman–Ford in `G_λ`, cycles from exhaustive enumeration, and tree
//! distances from walking parent edges directly.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, VertexId};
use crate::parametric::ParametricSolution;
use crate::scalar::{CostScalar, Extended, Field};

/// Shortest-path distances in `G_λ` from the source, or a negative cycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FixedLambdaResult<F> {
    /// `None` for vertices the source cannot reach.
    Distances(Vec<Option<F>>),
    NegativeCycle(Vec<EdgeId>),
}

fn lambda_cost<C: CostScalar>(g: &Graph<C>, e: EdgeId, lambda: &C::Field) -> C::Field {
    let edge = g.edge(e);
    let c = edge.cost.to_field();
    if edge.parameterized {
        c - lambda.clone() * C::Field::from_count(edge.weight)
    } else {
        c
    }
}

/// Bellman–Ford on `G_λ` from the graph's source.
pub fn bellman_ford_at<C: CostScalar>(g: &Graph<C>, lambda: &C::Field) -> Result<FixedLambdaResult<C::Field>> {
    let source = g.source().ok_or(Error::NoSource)?;
    let n = g.n();
    let costs: Vec<C::Field> = (0..g.m()).map(|e| lambda_cost(g, e, lambda)).collect();
    let mut dist: Vec<Option<C::Field>> = vec![None; n];
    let mut pred: Vec<Option<EdgeId>> = vec![None; n];
    dist[source] = Some(C::Field::zero());
    let mut changed = None;
    for _ in 0..n {
        changed = None;
        for (id, e) in g.edges().iter().enumerate() {
            let Some(du) = &dist[e.tail] else { continue };
            let cand = du.clone() + costs[id].clone();
            if dist[e.head].as_ref().is_none_or(|dv| cand < *dv) {
                dist[e.head] = Some(cand);
                pred[e.head] = Some(id);
                changed = Some(e.head);
            }
        }
        if changed.is_none() {
            return Ok(FixedLambdaResult::Distances(dist));
        }
    }
    let mut x = changed.expect("still relaxing after n rounds");
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
    Ok(FixedLambdaResult::NegativeCycle(cycle))
}

/// A cycle found by enumeration with its cost-to-weight ratio.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BruteCycle<F> {
    pub value: F,
    pub cycle: Vec<EdgeId>,
}

pub const BRUTE_LIMIT: usize = 10;

/// Minimum mean over all simple directed cycles (every edge counts as one).
pub fn brute_min_mean_cycle<C: CostScalar>(g: &Graph<C>) -> Result<Option<BruteCycle<C::Field>>> {
    brute_cycles(g, false)
}

/// Minimum of total cost over total weight across all simple directed cycles.
pub fn brute_min_ratio_cycle<C: CostScalar>(g: &Graph<C>) -> Result<Option<BruteCycle<C::Field>>> {
    brute_cycles(g, true)
}

fn brute_cycles<C: CostScalar>(g: &Graph<C>, weighted: bool) -> Result<Option<BruteCycle<C::Field>>> {
    if g.n() > BRUTE_LIMIT {
        return Err(Error::TooLarge {
            n: g.n(),
            limit: BRUTE_LIMIT,
        });
    }
    let mut out: Vec<Vec<EdgeId>> = vec![Vec::new(); g.n()];
    for (id, e) in g.edges().iter().enumerate() {
        out[e.tail].push(id);
    }
    let mut search = Search {
        g,
        out: &out,
        weighted,
        best: None,
        path: Vec::new(),
        on_path: 0,
    };
    // Each simple cycle is enumerated once, from its smallest vertex.
    for root in 0..g.n() {
        search.on_path = 1 << root;
        search.dfs(root, root, C::zero(), 0);
    }
    Ok(search.best)
}

struct Search<'a, C: CostScalar> {
    g: &'a Graph<C>,
    out: &'a [Vec<EdgeId>],
    weighted: bool,
    best: Option<BruteCycle<C::Field>>,
    path: Vec<EdgeId>,
    on_path: u32,
}

impl<C: CostScalar> Search<'_, C> {
    fn dfs(&mut self, root: VertexId, at: VertexId, cost: C, weight: u64) {
        for &id in &self.out[at] {
            let e = self.g.edge(id);
            let w = if self.weighted { e.weight } else { 1 };
            let c = cost.clone() + e.cost.clone();
            if e.head == root {
                let value = C::ratio(&c, weight + w);
                if self.best.as_ref().is_none_or(|b| value < b.value) {
                    let mut cycle = self.path.clone();
                    cycle.push(id);
                    self.best = Some(BruteCycle { value, cycle });
                }
            } else if e.head > root && self.on_path & (1 << e.head) == 0 {
                self.on_path |= 1 << e.head;
                self.path.push(id);
                self.dfs(root, e.head, c, weight + w);
                self.path.pop();
                self.on_path &= !(1 << e.head);
            }
        }
    }
}

/// Outcome of one certification check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CertReport {
    pub checks: Vec<Check>,
}

impl CertReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    fn record(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }
}

/// Parent edges in effect at `lambda`, read straight from the parent log.
fn parents_at<F: Field>(sol: &ParametricSolution<F>, lambda: &Extended<F>) -> Vec<Option<EdgeId>> {
    sol.parent_log
        .iter()
        .map(|log| {
            log.iter()
                .rev()
                .find(|c| c.lambda <= *lambda)
                .or(log.first())
                .and_then(|c| c.edge)
        })
        .collect()
}

/// Distances in `G_λ` along the given parent edges, or `None` if they do not
/// form a tree rooted at `source`.
fn tree_distances<C: CostScalar>(
    g: &Graph<C>,
    source: VertexId,
    parents: &[Option<EdgeId>],
    lambda: &C::Field,
) -> Option<Vec<C::Field>> {
    let n = g.n();
    let mut dist: Vec<Option<C::Field>> = vec![None; n];
    dist[source] = Some(C::Field::zero());
    for v in 0..n {
        let mut chain = Vec::new();
        let mut x = v;
        while dist[x].is_none() {
            if chain.len() > n {
                return None;
            }
            let e = parents[x]?;
            if g.edges().get(e)?.head != x {
                return None;
            }
            chain.push(e);
            x = g.edge(e).tail;
        }
        for &e in chain.iter().rev() {
            let t = g.edge(e).tail;
            let d = dist[t].clone().expect("filled on the way down") + lambda_cost(g, e, lambda);
            dist[g.edge(e).head] = Some(d);
        }
    }
    dist.into_iter().collect()
}

/// Checks a parametric solution against Bellman–Ford: tree optimality on
/// every interval, breakpoint order, and the terminal case.
pub fn certify_solution<C: CostScalar>(g: &Graph<C>, sol: &ParametricSolution<C::Field>) -> CertReport {
    let mut report = CertReport::default();
    let Some(source) = g.source() else {
        report.record("source", false, "graph has no source");
        return report;
    };
    if sol.n() != g.n() || sol.source != source {
        report.record("shape", false, "solution does not belong to this graph");
        return report;
    }

    let ordered = sol.breakpoints.windows(2).all(|w| w[0] <= w[1])
        && sol.breakpoints.last().is_none_or(|b| Extended::Finite(b.clone()) <= sol.lambda_star);
    report.record(
        "monotone breakpoints",
        ordered,
        if ordered { String::new() } else { "breakpoints decrease or exceed lambda*".to_string() },
    );

    if sol.lambda_star == Extended::MinusInf {
        check_minus_inf(g, sol, &mut report);
        return report;
    }

    let mut ends: Vec<Extended<C::Field>> = vec![Extended::MinusInf];
    let mut distinct = sol.breakpoints.clone();
    distinct.dedup();
    ends.extend(distinct.into_iter().map(Extended::Finite));
    if ends.last() != Some(&sol.lambda_star) {
        ends.push(sol.lambda_star.clone());
    }
    for w in ends.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        let parents = parents_at(sol, a);
        let one = C::Field::one();
        let points: Vec<C::Field> = match (a, b) {
            (Extended::Finite(a), Extended::Finite(b)) => {
                let mid = (a.clone() + b.clone()) / C::Field::from_int(2);
                vec![a.clone(), mid, b.clone()]
            }
            (Extended::MinusInf, Extended::Finite(b)) => vec![b.clone() - one, b.clone()],
            (Extended::Finite(a), Extended::PlusInf) => vec![a.clone(), a.clone() + one],
            _ => vec![-one.clone(), C::Field::zero(), one],
        };
        for lambda in points {
            let name = format!("tree on [{a}, {b}] at {lambda}");
            let Some(tree) = tree_distances(g, source, &parents, &lambda) else {
                report.record(name, false, "parent edges do not form a tree");
                continue;
            };
            match bellman_ford_at(g, &lambda) {
                Ok(FixedLambdaResult::Distances(d)) => {
                    let bad = (0..g.n()).find(|&v| d[v].as_ref() != Some(&tree[v]));
                    match bad {
                        None => report.record(name, true, ""),
                        Some(v) => report.record(
                            name,
                            false,
                            format!("vertex {v}: tree distance {} but shortest is {:?}", tree[v], d[v]),
                        ),
                    }
                }
                Ok(FixedLambdaResult::NegativeCycle(_)) => {
                    report.record(name, false, "negative cycle at a value below lambda*")
                }
                Err(e) => report.record(name, false, e.to_string()),
            }
        }
    }

    match (&sol.lambda_star, &sol.terminal_cycle) {
        (Extended::Finite(star), Some(cycle)) => {
            let simple = g.cycle_vertices(cycle).is_ok();
            let total = cycle
                .iter()
                .fold(C::Field::zero(), |acc, &e| acc + lambda_cost(g, e, star));
            report.record(
                "terminal cycle has zero cost at lambda*",
                simple && total.is_zero(),
                if simple { format!("cost {total}") } else { "not a simple cycle".into() },
            );
            let at_star = matches!(bellman_ford_at(g, star), Ok(FixedLambdaResult::Distances(_)));
            report.record("no negative cycle at lambda*", at_star, "");
            let above = star.clone() + C::Field::one();
            let past = matches!(bellman_ford_at(g, &above), Ok(FixedLambdaResult::NegativeCycle(_)));
            report.record("negative cycle at lambda* + 1", past, "");
        }
        (Extended::PlusInf, None) => {}
        _ => report.record("terminal cycle", false, "terminal cycle present iff lambda* is finite"),
    }
    report
}

fn check_minus_inf<C: CostScalar>(g: &Graph<C>, sol: &ParametricSolution<C::Field>, report: &mut CertReport) {
    let Some(cycle) = &sol.minus_inf_cycle else {
        report.record("minus infinity certificate", false, "lambda* is -inf without a cycle");
        return;
    };
    let simple = g.cycle_vertices(cycle).is_ok();
    let no_param = cycle.iter().all(|&e| g.edge(e).param_weight() == 0);
    let cost = cycle.iter().fold(C::zero(), |acc, &e| acc + g.edge(e).cost.clone());
    report.record(
        "minus infinity certificate",
        simple && no_param && cost < C::zero(),
        format!("cost {cost}"),
    );
}
