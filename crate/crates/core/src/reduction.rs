//! Linear m-th order problems and their companion first-order form.
//!
//! The scalar equation
//!
//! ```text
//! y^(m) + a_1(t) y^(m-1) + ... + a_m(t) y = f(t)
//! ```
//!
//! becomes `y' = A(t) y + f(t)` in the unknowns `y_i = y^(i-1)`, and a
//! condition on `y^(k)` at an endpoint becomes a condition on `y_{k+1}`.

use std::collections::HashSet;
use std::fmt;

use crate::error::{EvalError, ProblemError};
use crate::expr::Expr;
use crate::linalg::DenseMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Endpoint {
    Left,
    Right,
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Endpoint::Left => "left",
            Endpoint::Right => "right",
        })
    }
}

/// `y^(deriv_order)` at `endpoint` equals `value`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryCondition {
    pub deriv_order: usize,
    pub endpoint: Endpoint,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Problem {
    order: usize,
    a: f64,
    b: f64,
    coeffs: Vec<Expr>,
    rhs: Expr,
    bcs: Vec<BoundaryCondition>,
    exact: Option<Expr>,
    default_degree: Option<usize>,
    label: String,
}

impl Problem {
    pub fn builder(order: usize, a: f64, b: f64) -> ProblemBuilder {
        ProblemBuilder {
            order,
            a,
            b,
            coeffs: vec![None; order],
            coeff_index_error: None,
            rhs: Expr::Num(0.0),
            bcs: Vec::new(),
            exact: None,
            default_degree: None,
            label: String::new(),
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn interval(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    /// `a_i(t)`, the multiplier of `y^(m-i)`, for `i` in `1..=m`.
    pub fn coeff(&self, i: usize) -> &Expr {
        &self.coeffs[i - 1]
    }

    pub fn coeffs(&self) -> &[Expr] {
        &self.coeffs
    }

    pub fn rhs(&self) -> &Expr {
        &self.rhs
    }

    pub fn bcs(&self) -> &[BoundaryCondition] {
        &self.bcs
    }

    pub fn exact(&self) -> Option<&Expr> {
        self.exact.as_ref()
    }

    pub fn default_degree(&self) -> Option<usize> {
        self.default_degree
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Residual of the scalar equation given `derivs[k] = y^(k)(t)` for
    /// `k = 0..=m`.
    pub fn residual(&self, t: f64, derivs: &[f64]) -> Result<f64, EvalError> {
        let m = self.order;
        assert_eq!(derivs.len(), m + 1);
        let mut r = derivs[m] - self.rhs.eval(t)?;
        for i in 1..=m {
            r += self.coeffs[i - 1].eval(t)? * derivs[m - i];
        }
        Ok(r)
    }
}

#[derive(Debug, Clone)]
pub struct ProblemBuilder {
    order: usize,
    a: f64,
    b: f64,
    coeffs: Vec<Option<Expr>>,
    coeff_index_error: Option<usize>,
    rhs: Expr,
    bcs: Vec<BoundaryCondition>,
    exact: Option<Expr>,
    default_degree: Option<usize>,
    label: String,
}

impl ProblemBuilder {
    /// Set `a_i`; omitted coefficients are zero.
    pub fn coeff(mut self, i: usize, e: Expr) -> Self {
        match i.checked_sub(1).and_then(|k| self.coeffs.get_mut(k)) {
            Some(slot) => *slot = Some(e),
            None => self.coeff_index_error = Some(i),
        }
        self
    }

    pub fn rhs(mut self, e: Expr) -> Self {
        self.rhs = e;
        self
    }

    pub fn bc(mut self, deriv_order: usize, endpoint: Endpoint, value: f64) -> Self {
        self.bcs.push(BoundaryCondition {
            deriv_order,
            endpoint,
            value,
        });
        self
    }

    pub fn exact(mut self, e: Expr) -> Self {
        self.exact = Some(e);
        self
    }

    pub fn default_degree(mut self, n: usize) -> Self {
        self.default_degree = Some(n);
        self
    }

    pub fn label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn build(self) -> Result<Problem, ProblemError> {
        let m = self.order;
        if m == 0 {
            return Err(ProblemError::InvalidOrder);
        }
        if let Some(index) = self.coeff_index_error {
            return Err(ProblemError::CoeffIndex { index, order: m });
        }
        if !(self.a.is_finite() && self.b.is_finite() && self.a < self.b) {
            return Err(ProblemError::InvalidInterval {
                a: self.a,
                b: self.b,
            });
        }
        let mut seen = HashSet::new();
        for bc in &self.bcs {
            if bc.deriv_order >= m {
                return Err(ProblemError::BcOrder {
                    k: bc.deriv_order,
                    order: m,
                });
            }
            if !seen.insert((bc.deriv_order, bc.endpoint)) {
                return Err(ProblemError::DuplicateBc {
                    k: bc.deriv_order,
                    endpoint: bc.endpoint,
                });
            }
        }
        if self.bcs.len() != m {
            return Err(ProblemError::BcCount {
                expected: m,
                found: self.bcs.len(),
            });
        }
        Ok(Problem {
            order: m,
            a: self.a,
            b: self.b,
            coeffs: self
                .coeffs
                .into_iter()
                .map(|c| c.unwrap_or(Expr::Num(0.0)))
                .collect(),
            rhs: self.rhs,
            bcs: self.bcs,
            exact: self.exact,
            default_degree: self.default_degree,
            label: self.label,
        })
    }
}

/// Condition `y_component(endpoint) = value`, components numbered from 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComponentBc {
    pub component: usize,
    pub endpoint: Endpoint,
    pub value: f64,
}

/// `y' = A(t) y + (0, ..., 0, f(t))` with `A` in companion form.
#[derive(Debug, Clone, PartialEq)]
pub struct FirstOrderSystem {
    dim: usize,
    a: f64,
    b: f64,
    companion_row: Vec<Expr>,
    rhs: Expr,
    component_bcs: Vec<ComponentBc>,
}

impl FirstOrderSystem {
    /// Build a system directly. `companion_row[l]` multiplies `y_{l+1}` in
    /// the last equation.
    pub fn new(
        interval: (f64, f64),
        companion_row: Vec<Expr>,
        rhs: Expr,
        component_bcs: Vec<ComponentBc>,
    ) -> Self {
        Self {
            dim: companion_row.len(),
            a: interval.0,
            b: interval.1,
            companion_row,
            rhs,
            component_bcs,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn interval(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    /// Entries `-a_m, -a_{m-1}, ..., -a_1` of the last row of `A`.
    pub fn companion_row(&self) -> &[Expr] {
        &self.companion_row
    }

    pub fn rhs(&self) -> &Expr {
        &self.rhs
    }

    pub fn component_bcs(&self) -> &[ComponentBc] {
        &self.component_bcs
    }

    pub fn companion_row_at(&self, t: f64) -> Result<Vec<f64>, EvalError> {
        self.companion_row.iter().map(|e| e.eval(t)).collect()
    }

    pub fn companion_matrix_at(&self, t: f64) -> Result<DenseMatrix, EvalError> {
        let m = self.dim;
        let mut a = DenseMatrix::zeros(m, m);
        for i in 0..m.saturating_sub(1) {
            a[(i, i + 1)] = 1.0;
        }
        for (l, v) in self.companion_row_at(t)?.into_iter().enumerate() {
            a[(m - 1, l)] = v;
        }
        Ok(a)
    }

    /// Forcing vector `(0, ..., 0, f(t))`.
    pub fn forcing_at(&self, t: f64) -> Result<Vec<f64>, EvalError> {
        let mut f = vec![0.0; self.dim];
        f[self.dim - 1] = self.rhs.eval(t)?;
        Ok(f)
    }

    /// `y' - A y - f` at `t`.
    pub fn residual(&self, t: f64, y: &[f64], dy: &[f64]) -> Result<Vec<f64>, EvalError> {
        let a = self.companion_matrix_at(t)?;
        let ay = a.mul_vec(y);
        let f = self.forcing_at(t)?;
        Ok((0..self.dim).map(|i| dy[i] - ay[i] - f[i]).collect())
    }
}

pub fn reduce_order(p: &Problem) -> FirstOrderSystem {
    let m = p.order();
    // y_{l+1} = y^(l) is multiplied by a_{m-l}
    let companion_row = (0..m)
        .map(|l| {
            let c = p.coeff(m - l);
            if c.is_zero() {
                Expr::Num(0.0)
            } else {
                Expr::Neg(Box::new(c.clone()))
            }
        })
        .collect();
    let component_bcs = p
        .bcs()
        .iter()
        .map(|bc| ComponentBc {
            component: bc.deriv_order + 1,
            endpoint: bc.endpoint,
            value: bc.value,
        })
        .collect();
    FirstOrderSystem::new(p.interval(), companion_row, p.rhs().clone(), component_bcs)
}

pub fn companion_matrix_at(sys: &FirstOrderSystem, t: f64) -> Result<DenseMatrix, EvalError> {
    sys.companion_matrix_at(t)
}
