//! Chebyshev polynomials of the first kind translated to an interval `[a, b]`.
//!
//! Everything here works on the affine image `x = (2t - a - b) / (b - a)` of a
//! point `t` in `[a, b]`, so a series on `[a, b]` is just a coefficient vector
//! plus its interval.

use std::f64::consts::PI;

use crate::error::ChebError;

/// Points within this many machine epsilons (relative to the interval scale)
/// outside `[a, b]` are clamped onto the nearest endpoint.
const CLAMP_EPS: f64 = 8.0 * f64::EPSILON;

fn check_interval(a: f64, b: f64) -> Result<(), ChebError> {
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(ChebError::InvalidInterval { a, b });
    }
    Ok(())
}

/// Map `t` in `[a, b]` to `x` in `[-1, 1]`, clamping values that sit a few
/// ulps outside the interval.
pub fn to_reference(t: f64, a: f64, b: f64) -> Result<f64, ChebError> {
    check_interval(a, b)?;
    let slack = CLAMP_EPS * a.abs().max(b.abs()).max(b - a);
    if !(t >= a - slack && t <= b + slack) {
        return Err(ChebError::OutOfDomain { t, a, b });
    }
    let x = (2.0 * t - a - b) / (b - a);
    Ok(x.clamp(-1.0, 1.0))
}

/// Chebyshev–Gauss–Lobatto points on `[a, b]`, numbered right to left:
/// `t_0 = b`, `t_n = a`.
pub fn cheb_nodes(n: usize, a: f64, b: f64) -> Result<Vec<f64>, ChebError> {
    if n == 0 {
        return Err(ChebError::InvalidDegree(n));
    }
    check_interval(a, b)?;
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let nf = n as f64;
    let nodes = (0..=n)
        .map(|j| {
            if j == 0 {
                b
            } else if j == n {
                a
            } else if 2 * j == n {
                mid
            } else {
                // sin form of cos(j*pi/n) is symmetric in j <-> n - j
                mid + half * (PI * (nf - 2.0 * j as f64) / (2.0 * nf)).sin()
            }
        })
        .collect();
    Ok(nodes)
}

/// `T_r` on `[a, b]` evaluated at `t`.
pub fn eval_t(r: usize, t: f64, a: f64, b: f64) -> Result<f64, ChebError> {
    let x = to_reference(t, a, b)?;
    let (mut prev, mut cur) = (1.0, x);
    if r == 0 {
        return Ok(prev);
    }
    for _ in 1..r {
        let next = 2.0 * x * cur - prev;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Row vector `[T_0(t), ..., T_n(t)]` on `[a, b]`.
pub fn basis_row(n: usize, t: f64, a: f64, b: f64) -> Result<Vec<f64>, ChebError> {
    let x = to_reference(t, a, b)?;
    Ok(basis_row_ref(n, x))
}

pub(crate) fn basis_row_ref(n: usize, x: f64) -> Vec<f64> {
    let mut row = Vec::with_capacity(n + 1);
    row.push(1.0);
    if n >= 1 {
        row.push(x);
    }
    for r in 2..=n {
        let next = 2.0 * x * row[r - 1] - row[r - 2];
        row.push(next);
    }
    row
}

/// The strictly upper-triangular matrix `M` with `2 M c` equal to the
/// Chebyshev coefficients of the derivative of the series `c` on `[-1, 1]`.
///
/// Row 0 holds `j / 2` in odd columns; row `r >= 1` holds `j` in every column
/// `j > r` with `j - r` odd.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivCoeffOperator {
    n: usize,
    entries: Vec<f64>,
}

impl DerivCoeffOperator {
    pub fn new(n: usize) -> Result<Self, ChebError> {
        if n == 0 {
            return Err(ChebError::InvalidDegree(n));
        }
        let dim = n + 1;
        let mut entries = vec![0.0; dim * dim];
        for j in (1..dim).step_by(2) {
            entries[j] = j as f64 / 2.0;
        }
        for r in 1..dim {
            for j in ((r + 1)..dim).step_by(2) {
                entries[r * dim + j] = j as f64;
            }
        }
        Ok(Self { n, entries })
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.entries[row * (self.n + 1) + col]
    }

    pub fn row(&self, row: usize) -> &[f64] {
        let dim = self.n + 1;
        &self.entries[row * dim..(row + 1) * dim]
    }

    /// `M c` for a column vector `c` of length `n + 1`.
    pub fn apply(&self, c: &[f64]) -> Vec<f64> {
        assert_eq!(c.len(), self.n + 1, "coefficient length mismatch");
        (0..=self.n)
            .map(|r| self.row(r).iter().zip(c).map(|(m, x)| m * x).sum())
            .collect()
    }

    /// `v M` for a row vector `v` of length `n + 1`.
    pub fn left_apply(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.n + 1, "row length mismatch");
        let mut out = vec![0.0; self.n + 1];
        for (r, &vr) in v.iter().enumerate() {
            if vr == 0.0 {
                continue;
            }
            for (o, m) in out.iter_mut().zip(self.row(r)) {
                *o += vr * m;
            }
        }
        out
    }

    /// Dense `M^k` by repeated multiplication.
    pub fn pow(&self, k: u32) -> Vec<f64> {
        let dim = self.n + 1;
        let mut acc = vec![0.0; dim * dim];
        for i in 0..dim {
            acc[i * dim + i] = 1.0;
        }
        for _ in 0..k {
            let mut next = vec![0.0; dim * dim];
            for i in 0..dim {
                for l in 0..dim {
                    let ail = acc[i * dim + l];
                    if ail == 0.0 {
                        continue;
                    }
                    for j in 0..dim {
                        next[i * dim + j] += ail * self.entries[l * dim + j];
                    }
                }
            }
            acc = next;
        }
        acc
    }
}

/// Convenience constructor matching [`DerivCoeffOperator::new`].
pub fn deriv_operator(n: usize) -> Result<DerivCoeffOperator, ChebError> {
    DerivCoeffOperator::new(n)
}

/// A truncated Chebyshev series `sum_j c_j T_j(t)` on `[a, b]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChebSeries {
    coeffs: Vec<f64>,
    a: f64,
    b: f64,
}

impl ChebSeries {
    pub fn new(coeffs: Vec<f64>, a: f64, b: f64) -> Result<Self, ChebError> {
        check_interval(a, b)?;
        if coeffs.is_empty() {
            return Err(ChebError::EmptySeries);
        }
        Ok(Self { coeffs, a, b })
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn interval(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Clenshaw backward recurrence.
    pub fn eval(&self, t: f64) -> Result<f64, ChebError> {
        let x = to_reference(t, self.a, self.b)?;
        Ok(clenshaw_ref(&self.coeffs, x))
    }

    /// Series of the `k`-th derivative: `(4 / (b - a))^k M^k c`.
    pub fn derivative(&self, k: u32) -> ChebSeries {
        if k == 0 || self.coeffs.len() == 1 {
            let coeffs = if k == 0 {
                self.coeffs.clone()
            } else {
                vec![0.0]
            };
            return ChebSeries {
                coeffs,
                a: self.a,
                b: self.b,
            };
        }
        let op = DerivCoeffOperator::new(self.degree()).expect("degree >= 1");
        let scale = 4.0 / (self.b - self.a);
        let mut c = self.coeffs.clone();
        for _ in 0..k {
            c = op.apply(&c);
            c.iter_mut().for_each(|v| *v *= scale);
        }
        ChebSeries {
            coeffs: c,
            a: self.a,
            b: self.b,
        }
    }
}

/// Same as [`ChebSeries::derivative`].
pub fn derivative_coeffs(s: &ChebSeries, k: u32) -> ChebSeries {
    s.derivative(k)
}

/// Same as [`ChebSeries::eval`].
pub fn clenshaw_eval(s: &ChebSeries, t: f64) -> Result<f64, ChebError> {
    s.eval(t)
}

pub(crate) fn clenshaw_ref(coeffs: &[f64], x: f64) -> f64 {
    let mut b1 = 0.0;
    let mut b2 = 0.0;
    for &c in coeffs.iter().skip(1).rev() {
        let b0 = 2.0 * x * b1 - b2 + c;
        b2 = b1;
        b1 = b0;
    }
    coeffs[0] + x * b1 - b2
}
