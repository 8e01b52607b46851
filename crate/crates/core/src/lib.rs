//! Chebyshev collocation for linear two-point boundary value problems.
//!
//! An m-th order equation
//!
//! ```text
//! y^(m) + a_1(t) y^(m-1) + ... + a_m(t) y = f(t),   t in [a, b]
//! ```
//!
//! with m endpoint conditions on `y, y', ..., y^(m-1)` is rewritten as a
//! first-order companion system. Every component is expanded in translated
//! Chebyshev polynomials and the system is collocated at Chebyshev–Lobatto
//! nodes; boundary conditions replace collocation rows at the endpoint nodes.
//! One dense solve yields series for `y` and its first `m - 1` derivatives.
//!
//! ```
//! use chebbvp::{parse_problem, solve};
//!
//! let problem = parse_problem(
//!     "order = 2\ninterval = [0, 1]\ncoeff 2 = 1\nrhs = t^2 + 2\nbc: y(0) = 0\nbc: y(1) = 1\n",
//! )
//! .unwrap();
//! let sol = solve(&problem, 4).unwrap();
//! assert!((sol.evaluate(0.5, 0).unwrap() - 0.25).abs() < 1e-13);
//! assert!((sol.evaluate(0.5, 1).unwrap() - 1.0).abs() < 1e-12);
//! ```

pub mod cheb;
pub mod error;
pub mod expr;
pub mod harness;
pub mod linalg;
pub mod problem_file;
pub mod reduction;
pub mod solver;

pub use cheb::{
    basis_row, cheb_nodes, clenshaw_eval, deriv_operator, derivative_coeffs, eval_t, ChebSeries,
    DerivCoeffOperator,
};
pub use error::{ChebError, EvalError, EvaluateError, ParseError, ParseErrorKind, ProblemError, SolveError};
pub use expr::{parse_expr, Expr};
pub use problem_file::parse_problem;
pub use reduction::{
    companion_matrix_at, reduce_order, BoundaryCondition, ComponentBc, Endpoint, FirstOrderSystem,
    Problem,
};
pub use solver::{
    assemble, build_solution, impose_bcs, solve, solve_discrete, solve_system, Diagnostics,
    DerivScaling, DiscreteSystem, SpectralSolution,
};
