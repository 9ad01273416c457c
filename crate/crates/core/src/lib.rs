//! Parametric shortest paths, minimum mean and ratio cycles, and minimum
//! balancing of directed graphs, all in exact arithmetic.
//!
//! Solvers are generic over the edge-cost type through [`CostScalar`]. Input
//! graphs normally carry `i64` costs, with [`Rational`] as the type of the
//! parameter, keys and potentials. Graphs whose costs are already fractions
//! (such as the reduced graphs inside the balancing algorithm) use a field
//! type as their cost type; [`BigRational`] removes any overflow concern.
//!
//! ```
//! use psp_core::{min_mean_cycle_parametric, IntGraph, Rational};
//!
//! let g: IntGraph = "p psp 2 2\na 1 2 3 1 1\na 2 1 5 1 1\n".parse().unwrap();
//! let best = min_mean_cycle_parametric(&g).unwrap().unwrap();
//! assert_eq!(best.mean, Rational::from_integer(4));
//! ```

pub mod balance;
pub mod bench;
pub mod cycles;
pub mod error;
pub mod graph;
pub mod heap;
pub mod oracle;
pub mod parametric;
pub mod rational;
pub mod scalar;

pub use num_rational::BigRational;

pub use balance::{check_balanced, min_balance, BalanceCheck, BalanceResult, Balancer, ContractionStack};
pub use cycles::{
    add_artificial_source, apply_potential, min_mean_cycle_karp, min_mean_cycle_parametric,
    min_mean_cycle_parametric_scc, min_ratio_cycle, shortest_path_potential, CycleResult, Method, Potential,
};
pub use error::{Error, ParseError, Result};
pub use graph::{
    contract_cycle, parse_graph, random_graph, random_strongly_connected, serialize_graph, Edge, EdgeId, Graph,
    VertexId, VertexMap,
};
pub use heap::{FibHeap, Handle, HeapError};
pub use oracle::{bellman_ford_at, brute_min_mean_cycle, brute_min_ratio_cycle, certify_solution, CertReport};
pub use parametric::{initial_tree, solve, solve_with, ParametricSolution, PathTree, Pivot, SolverState};
pub use rational::Rational;
pub use scalar::{CostScalar, Extended, Field};

/// Graph with 64-bit integer costs, the input format.
pub type IntGraph = Graph<i64>;
/// Graph with `i128` fraction costs.
pub type RationalGraph = Graph<Rational>;
/// Graph with arbitrary-precision fraction costs.
pub type BigGraph = Graph<BigRational>;
/// Parameter value for integer-cost graphs, including `±∞`.
pub type Lambda = Extended<Rational>;
/// Solution of an integer-cost parametric problem.
pub type IntSolution = ParametricSolution<Rational>;
