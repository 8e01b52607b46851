//! Chebyshev collocation for the first-order companion system.
//!
//! Each component is expanded as `y_i(t) = T(t) C_i` with `T(t)` the row of
//! translated Chebyshev polynomials of degree `0..=n`. Collocating
//! `y' - A y = f` at the `n + 1` nodes gives one dense system for all
//! `m (n + 1)` weights:
//!
//! * row `j * m + i` holds equation `i` at node `t_j` (node-major rows),
//! * column `i * (n + 1) + p` holds weight `C_{i,p}` (component-major columns).
//!
//! Boundary conditions overwrite collocation rows in the first node block
//! (`t_0 = b`) or the last one (`t_n = a`).

use crate::cheb::{basis_row, cheb_nodes, ChebSeries, DerivCoeffOperator};
use crate::error::{EvaluateError, SolveError};
use crate::linalg::{DenseMatrix, LuFactors};
use crate::reduction::{reduce_order, ComponentBc, Endpoint, FirstOrderSystem, Problem};

/// Condition estimates above `1 / sqrt(eps)` are flagged on the diagnostics.
pub const ILL_CONDITIONED: f64 = 67_108_864.0;

/// How the derivative rows are scaled. Anything but `ChainRule` is wrong and
/// exists so tests can check that the harness catches a broken operator.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum DerivScaling {
    #[default]
    ChainRule,
    Unscaled,
}

#[derive(Debug, Clone)]
pub struct DiscreteSystem {
    w: DenseMatrix,
    f: Vec<f64>,
    n: usize,
    m: usize,
    nodes: Vec<f64>,
    basis: Vec<Vec<f64>>,
    replaced: Vec<bool>,
}

impl DiscreteSystem {
    pub fn matrix(&self) -> &DenseMatrix {
        &self.w
    }

    pub fn rhs(&self) -> &[f64] {
        &self.f
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// `T(t_j)` for every node.
    pub fn basis_rows(&self) -> &[Vec<f64>] {
        &self.basis
    }

    pub fn row_index(&self, node: usize, equation: usize) -> usize {
        node * self.m + equation
    }

    pub fn column_index(&self, component: usize, p: usize) -> usize {
        component * (self.n + 1) + p
    }

    /// Rows overwritten by boundary conditions.
    pub fn replaced_rows(&self) -> impl Iterator<Item = usize> + '_ {
        self.replaced.iter().enumerate().filter(|(_, r)| **r).map(|(i, _)| i)
    }

    pub fn is_replaced(&self, row: usize) -> bool {
        self.replaced[row]
    }

    /// `W C - F`, row by row.
    pub fn residual(&self, weights: &[f64]) -> Vec<f64> {
        self.w
            .mul_vec(weights)
            .iter()
            .zip(&self.f)
            .map(|(wc, f)| wc - f)
            .collect()
    }
}

pub fn assemble(sys: &FirstOrderSystem, n: usize) -> Result<DiscreteSystem, SolveError> {
    assemble_scaled(sys, n, DerivScaling::ChainRule)
}

pub fn assemble_scaled(
    sys: &FirstOrderSystem,
    n: usize,
    scaling: DerivScaling,
) -> Result<DiscreteSystem, SolveError> {
    let m = sys.dim();
    if n < m || n == 0 {
        return Err(SolveError::DegreeTooSmall { n, m });
    }
    let (a, b) = sys.interval();
    let nodes = cheb_nodes(n, a, b)?;
    let op = DerivCoeffOperator::new(n)?;
    let scale = match scaling {
        DerivScaling::ChainRule => 4.0 / (b - a),
        DerivScaling::Unscaled => 1.0,
    };
    let np1 = n + 1;
    let size = m * np1;
    let mut w = DenseMatrix::zeros(size, size);
    let mut f = vec![0.0; size];
    let mut basis = Vec::with_capacity(np1);

    for (j, &t) in nodes.iter().enumerate() {
        let eval_err = |source| SolveError::Eval { node: j, t, source };
        let row_t = basis_row(n, t, a, b)?;
        let row_dt: Vec<f64> = op.left_apply(&row_t).iter().map(|v| scale * v).collect();
        let last = sys.companion_row_at(t).map_err(eval_err)?;
        for i in 0..m {
            let r = w.row_mut(j * m + i);
            r[i * np1..(i + 1) * np1].copy_from_slice(&row_dt);
            if i + 1 < m {
                // y_i' - y_{i+1} = 0
                for (x, tp) in r[(i + 1) * np1..(i + 2) * np1].iter_mut().zip(&row_t) {
                    *x -= tp;
                }
            } else {
                for (l, &al) in last.iter().enumerate() {
                    if al == 0.0 {
                        continue;
                    }
                    for (x, tp) in r[l * np1..(l + 1) * np1].iter_mut().zip(&row_t) {
                        *x -= al * tp;
                    }
                }
            }
        }
        f[j * m + m - 1] = sys.rhs().eval(t).map_err(eval_err)?;
        basis.push(row_t);
    }

    Ok(DiscreteSystem {
        w,
        f,
        n,
        m,
        nodes,
        basis,
        replaced: vec![false; size],
    })
}

/// Overwrite collocation rows with endpoint conditions: a right condition on
/// component `k` replaces equation `k` at `t_0 = b`, a left one replaces
/// equation `k` at `t_n = a`.
pub fn impose_bcs(mut d: DiscreteSystem, bcs: &[ComponentBc]) -> Result<DiscreteSystem, SolveError> {
    let m = d.m;
    if bcs.len() != m {
        return Err(SolveError::BcArity {
            expected: m,
            found: bcs.len(),
        });
    }
    let np1 = d.n + 1;
    for bc in bcs {
        if bc.component == 0 || bc.component > m {
            return Err(SolveError::BcComponent {
                component: bc.component,
                m,
            });
        }
        let k = bc.component - 1;
        let node = match bc.endpoint {
            Endpoint::Right => 0,
            Endpoint::Left => d.n,
        };
        let row = node * m + k;
        if d.replaced[row] {
            return Err(SolveError::ConflictingBc {
                component: bc.component,
                endpoint: bc.endpoint,
            });
        }
        let r = d.w.row_mut(row);
        r.fill(0.0);
        r[k * np1..(k + 1) * np1].copy_from_slice(&d.basis[node]);
        d.f[row] = bc.value;
        d.replaced[row] = true;
    }
    Ok(d)
}

/// Dense LU solve; returns the weights and a 1-norm condition estimate.
pub fn solve_discrete(d: &DiscreteSystem) -> Result<(Vec<f64>, f64), SolveError> {
    let lu = LuFactors::factor(&d.w).map_err(|_| SolveError::Singular {
        cond: f64::INFINITY,
    })?;
    let cond = lu.condition_estimate();
    if !cond.is_finite() {
        return Err(SolveError::Singular { cond });
    }
    let residual = |x: &[f64]| -> Vec<f64> {
        d.w.mul_vec(x).iter().zip(&d.f).map(|(wx, f)| f - wx).collect()
    };
    let norm = |r: &[f64]| r.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    // fixed-precision refinement; keep a step only if the residual shrinks
    let mut x = lu.solve(&d.f);
    let mut r = residual(&x);
    for _ in 0..3 {
        let dx = lu.solve(&r);
        let cand: Vec<f64> = x.iter().zip(&dx).map(|(a, b)| a + b).collect();
        let rc = residual(&cand);
        if norm(&rc) >= norm(&r) {
            break;
        }
        x = cand;
        r = rc;
    }
    Ok((x, cond))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diagnostics {
    /// Max-norm of `W C - F` over the collocation rows that were not
    /// replaced by boundary conditions.
    pub residual_inf: f64,
    /// Max-norm of the boundary-condition rows' residual.
    pub bc_residual_inf: f64,
    pub condition_estimate: f64,
    pub ill_conditioned: bool,
    pub n: usize,
}

/// `m` Chebyshev series; component `i` approximates `y^(i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralSolution {
    components: Vec<ChebSeries>,
    weights: Vec<f64>,
    diagnostics: Diagnostics,
}

impl SpectralSolution {
    pub fn order(&self) -> usize {
        self.components.len()
    }

    pub fn degree(&self) -> usize {
        self.diagnostics.n
    }

    pub fn interval(&self) -> (f64, f64) {
        self.components[0].interval()
    }

    /// Series for `y^(deriv)`.
    pub fn component(&self, deriv: usize) -> Option<&ChebSeries> {
        self.components.get(deriv)
    }

    pub fn components(&self) -> &[ChebSeries] {
        &self.components
    }

    /// All weights in component-major order.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn diagnostics(&self) -> &Diagnostics {
        &self.diagnostics
    }

    /// `y^(deriv)(t)`.
    pub fn evaluate(&self, t: f64, deriv: usize) -> Result<f64, EvaluateError> {
        let s = self.components.get(deriv).ok_or(EvaluateError::DerivOutOfRange {
            deriv,
            max: self.components.len() - 1,
        })?;
        Ok(s.eval(t)?)
    }
}

pub fn build_solution(weights: Vec<f64>, sys: &FirstOrderSystem, d: &DiscreteSystem, cond: f64) -> SpectralSolution {
    let (a, b) = sys.interval();
    let np1 = d.n + 1;
    let components = weights
        .chunks(np1)
        .map(|c| ChebSeries::new(c.to_vec(), a, b).expect("interval checked at assembly"))
        .collect();
    let res = d.residual(&weights);
    let (mut residual_inf, mut bc_residual_inf) = (0.0f64, 0.0f64);
    for (row, r) in res.iter().enumerate() {
        if d.replaced[row] {
            bc_residual_inf = bc_residual_inf.max(r.abs());
        } else {
            residual_inf = residual_inf.max(r.abs());
        }
    }
    SpectralSolution {
        components,
        weights,
        diagnostics: Diagnostics {
            residual_inf,
            bc_residual_inf,
            condition_estimate: cond,
            ill_conditioned: cond > ILL_CONDITIONED,
            n: d.n,
        },
    }
}

pub fn solve_system(
    sys: &FirstOrderSystem,
    n: usize,
    scaling: DerivScaling,
) -> Result<SpectralSolution, SolveError> {
    let d = assemble_scaled(sys, n, scaling)?;
    let d = impose_bcs(d, sys.component_bcs())?;
    let (c, cond) = solve_discrete(&d)?;
    Ok(build_solution(c, sys, &d, cond))
}

/// Reduce, assemble, impose conditions and solve at degree `n`.
pub fn solve(problem: &Problem, n: usize) -> Result<SpectralSolution, SolveError> {
    solve_system(&reduce_order(problem), n, DerivScaling::ChainRule)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_expr;
    use crate::expr::Expr;

    fn ex(s: &str) -> Expr {
        parse_expr(s).unwrap()
    }

    fn example1() -> Problem {
        Problem::builder(2, 0.0, 1.0)
            .coeff(2, ex("1"))
            .rhs(ex("1"))
            .bc(0, Endpoint::Left, 0.0)
            .bc(0, Endpoint::Right, 1.0)
            .build()
            .unwrap()
    }

    fn sample_max_err(sol: &SpectralSolution, deriv: usize, exact: impl Fn(f64) -> f64) -> f64 {
        let (a, b) = sol.interval();
        (0..=200)
            .map(|i| {
                let t = a + (b - a) * i as f64 / 200.0;
                (sol.evaluate(t, deriv).unwrap() - exact(t)).abs()
            })
            .fold(0.0, f64::max)
    }

    #[test]
    fn zero_dynamics_rows_are_derivative_rows() {
        let sys = FirstOrderSystem::new((-1.0, 1.0), vec![ex("0")], ex("0"), vec![]);
        let d = assemble(&sys, 1).unwrap();
        // T(t) 2M = [0, 1] at both nodes: the derivative of T_1 is T_0
        assert_eq!(d.matrix().row(0), &[0.0, 1.0]);
        assert_eq!(d.matrix().row(1), &[0.0, 1.0]);
        assert_eq!(d.rhs(), &[0.0, 0.0]);
    }

    #[test]
    fn example1_shape() {
        let sys = reduce_order(&example1());
        let d = assemble(&sys, 8).unwrap();
        assert_eq!(d.matrix().rows(), 18);
        assert_eq!(d.matrix().cols(), 18);
        for j in 0..=8 {
            assert_eq!(d.rhs()[2 * j], 0.0);
            assert_eq!(d.rhs()[2 * j + 1], 1.0);
        }
    }

    #[test]
    fn exponential_rows_residual_bounded_by_fit_error() {
        // y' = y on [-1,1]; weights of the degree-4 interpolant of e^t at the
        // nodes, found by a direct solve of the Vandermonde-type system.
        let sys = FirstOrderSystem::new((-1.0, 1.0), vec![ex("1")], ex("0"), vec![]);
        let d = assemble(&sys, 4).unwrap();
        let mut v = DenseMatrix::zeros(5, 5);
        for (j, row) in d.basis_rows().iter().enumerate() {
            v.row_mut(j).copy_from_slice(row);
        }
        let vals: Vec<f64> = d.nodes().iter().map(|t| t.exp()).collect();
        let c = LuFactors::factor(&v).unwrap().solve(&vals);
        let fit = ChebSeries::new(c.clone(), -1.0, 1.0).unwrap();
        let fit_err = (0..=400)
            .map(|i| -1.0 + i as f64 / 200.0)
            .map(|t| (fit.eval(t).unwrap() - t.exp()).abs())
            .fold(0.0, f64::max);
        let d_err = (0..=400)
            .map(|i| -1.0 + i as f64 / 200.0)
            .map(|t| (fit.derivative(1).eval(t).unwrap() - t.exp()).abs())
            .fold(0.0, f64::max);
        let res = d.residual(&c).iter().fold(0.0f64, |m, r| m.max(r.abs()));
        // residual at the nodes is p'(t_j) - e^{t_j}, bounded by the
        // derivative's fit error, itself a small multiple of the fit error
        assert!(res <= d_err + 1e-14, "{res} vs {d_err}");
        assert!(res <= 20.0 * fit_err, "{res} vs {fit_err}");
    }

    #[test]
    fn bc_row_placement() {
        let sys = reduce_order(&example1());
        let d = impose_bcs(assemble(&sys, 8).unwrap(), sys.component_bcs()).unwrap();
        let rows: Vec<usize> = d.replaced_rows().collect();
        assert_eq!(rows, vec![0, 16]);
        let r0 = d.matrix().row(0);
        assert!(r0[..9].iter().all(|v| *v == 1.0));
        assert!(r0[9..].iter().all(|v| *v == 0.0));
        assert_eq!(d.rhs()[0], 1.0);
        assert_eq!(d.rhs()[16], 0.0);
    }

    fn sixth_order() -> Problem {
        let e = std::f64::consts::E;
        Problem::builder(6, 0.0, 1.0)
            .coeff(6, ex("-1"))
            .rhs(ex("-6*exp(t)"))
            .bc(0, Endpoint::Left, 1.0)
            .bc(1, Endpoint::Left, 0.0)
            .bc(2, Endpoint::Left, -1.0)
            .bc(0, Endpoint::Right, 0.0)
            .bc(1, Endpoint::Right, -e)
            .bc(2, Endpoint::Right, -2.0 * e)
            .build()
            .unwrap()
    }

    #[test]
    fn sixth_order_rows() {
        let sys = reduce_order(&sixth_order());
        let d = impose_bcs(assemble(&sys, 11).unwrap(), sys.component_bcs()).unwrap();
        let rows: Vec<usize> = d.replaced_rows().collect();
        assert_eq!(rows, vec![0, 1, 2, 66, 67, 68]);
    }

    #[test]
    fn fifth_order_rows() {
        let e = std::f64::consts::E;
        let p = Problem::builder(5, 0.0, 1.0)
            .coeff(5, ex("-1"))
            .rhs(ex("-15*exp(t) - 10*t*exp(t)"))
            .bc(0, Endpoint::Left, 0.0)
            .bc(1, Endpoint::Left, 1.0)
            .bc(2, Endpoint::Left, 0.0)
            .bc(0, Endpoint::Right, 0.0)
            .bc(1, Endpoint::Right, -e)
            .build()
            .unwrap();
        let sys = reduce_order(&p);
        let d = impose_bcs(assemble(&sys, 11).unwrap(), sys.component_bcs()).unwrap();
        let rows: Vec<usize> = d.replaced_rows().collect();
        assert_eq!(rows, vec![0, 1, 55, 56, 57]);
    }

    #[test]
    fn bc_errors() {
        let sys = reduce_order(&example1());
        let d = assemble(&sys, 4).unwrap();
        let bc = |component, endpoint| ComponentBc { component, endpoint, value: 0.0 };
        assert_eq!(
            impose_bcs(d.clone(), &[bc(1, Endpoint::Left)]).unwrap_err(),
            SolveError::BcArity { expected: 2, found: 1 }
        );
        assert_eq!(
            impose_bcs(d.clone(), &[bc(1, Endpoint::Left), bc(1, Endpoint::Left)]).unwrap_err(),
            SolveError::ConflictingBc { component: 1, endpoint: Endpoint::Left }
        );
        assert_eq!(
            impose_bcs(d, &[bc(1, Endpoint::Left), bc(3, Endpoint::Left)]).unwrap_err(),
            SolveError::BcComponent { component: 3, m: 2 }
        );
    }

    #[test]
    fn degree_floor() {
        assert_eq!(
            solve(&example1(), 1).unwrap_err(),
            SolveError::DegreeTooSmall { n: 1, m: 2 }
        );
    }

    #[test]
    fn constant_solution() {
        let p = Problem::builder(1, 0.0, 1.0)
            .bc(0, Endpoint::Left, 5.0)
            .build()
            .unwrap();
        let sol = solve(&p, 4).unwrap();
        let c = sol.component(0).unwrap().coeffs();
        assert!((c[0] - 5.0).abs() < 1e-14);
        assert!(c[1..].iter().all(|v| v.abs() < 1e-14));
        assert_eq!(sol.order(), 1);
        assert!(sol.diagnostics().residual_inf < 1e-14);
    }

    #[test]
    fn example1_accuracy_and_derivative() {
        let sol = solve(&example1(), 8).unwrap();
        let cot1 = 1.0f64.cos() / 1.0f64.sin();
        let err0 = sample_max_err(&sol, 0, |t| 1.0 - t.cos() + cot1 * t.sin());
        let err1 = sample_max_err(&sol, 1, |t| t.sin() + cot1 * t.cos());
        assert!(err0 <= 1e-9, "{err0}");
        assert!(err1 <= 1e-8, "{err1}");
        assert!(sol.evaluate(0.0, 0).unwrap().abs() < 1e-12);
        assert!((sol.evaluate(1.0, 0).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn quadratic_is_exact() {
        // y'' + y = t^2 + 2 has the solution t^2
        let p = Problem::builder(2, 0.0, 1.0)
            .coeff(2, ex("1"))
            .rhs(ex("t^2 + 2"))
            .bc(0, Endpoint::Left, 0.0)
            .bc(0, Endpoint::Right, 1.0)
            .build()
            .unwrap();
        for n in 2..10 {
            let sol = solve(&p, n).unwrap();
            let err = sample_max_err(&sol, 0, |t| t * t);
            assert!(err <= 1e-13, "n={n}: {err}");
        }
    }

    #[test]
    fn pure_integration_chain_is_singular() {
        // With a zero last row in A the n + 1 rows of the last equation only
        // see the n non-constant weights of y_m, so W loses rank.
        let p = Problem::builder(2, 0.0, 1.0)
            .rhs(ex("2"))
            .bc(0, Endpoint::Left, 0.0)
            .bc(0, Endpoint::Right, 1.0)
            .build()
            .unwrap();
        for n in 2..10 {
            assert!(matches!(solve(&p, n), Err(SolveError::Singular { .. })), "n={n}");
        }
    }

    #[test]
    fn sixth_order_second_derivative() {
        let sol = solve(&sixth_order(), 13).unwrap();
        let err = sample_max_err(&sol, 2, |t| (-1.0 - t) * t.exp());
        assert!(err <= 1e-7, "{err}");
        let e = std::f64::consts::E;
        assert!((sol.evaluate(1.0, 2).unwrap() + 2.0 * e).abs() < 1e-9);
    }

    #[test]
    fn evaluate_errors() {
        let sol = solve(&example1(), 6).unwrap();
        assert_eq!(
            sol.evaluate(0.5, 2).unwrap_err(),
            EvaluateError::DerivOutOfRange { deriv: 2, max: 1 }
        );
        assert!(matches!(sol.evaluate(2.0, 0), Err(EvaluateError::Domain(_))));
    }

    #[test]
    fn interior_derivative_consistency() {
        let sol = solve(&sixth_order(), 11).unwrap();
        let nodes = cheb_nodes(11, 0.0, 1.0).unwrap();
        for i in 0..5 {
            let d = sol.component(i).unwrap().derivative(1);
            let next = sol.component(i + 1).unwrap();
            for &t in &nodes[1..11] {
                let diff = (d.eval(t).unwrap() - next.eval(t).unwrap()).abs();
                assert!(diff <= 1e-8, "component {i} at {t}: {diff}");
            }
        }
    }

    #[test]
    fn coefficient_failure_names_node() {
        let p = Problem::builder(2, 0.0, 1.0)
            .coeff(1, ex("1/t"))
            .bc(0, Endpoint::Left, 0.0)
            .bc(0, Endpoint::Right, 0.0)
            .build()
            .unwrap();
        match solve(&p, 4).unwrap_err() {
            SolveError::Eval { node, t, .. } => {
                assert_eq!(node, 4);
                assert_eq!(t, 0.0);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn deterministic() {
        let a = solve(&sixth_order(), 11).unwrap();
        let b = solve(&sixth_order(), 11).unwrap();
        let bits = |s: &SpectralSolution| s.weights().iter().map(|v| v.to_bits()).collect::<Vec<_>>();
        assert_eq!(bits(&a), bits(&b));
    }

    #[test]
    fn singular_system_is_reported() {
        // Two conditions on y' alone leave y defined only up to a constant.
        let p = Problem::builder(2, 0.0, 1.0)
            .bc(1, Endpoint::Left, 0.0)
            .bc(1, Endpoint::Right, 0.0)
            .build()
            .unwrap();
        assert!(matches!(solve(&p, 6), Err(SolveError::Singular { .. })));
    }
}
