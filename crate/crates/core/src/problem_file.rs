//! Line-oriented problem files.
//!
//! ```text
//! # y'' + y = 1 on [0, 1]
//! order = 2
//! interval = [0, 1]
//! coeff 2 = 1
//! rhs = 1
//! bc: y(0) = 0
//! bc: y(1) = 1
//! exact = 1 - cos(t) + cot(1)*sin(t)
//! n = 8
//! label = second order
//! ```
//!
//! `coeff i` is `a_i(t)`, the multiplier of `y^(m-i)`; omitted coefficients
//! are zero. Boundary conditions are written `D<k> y(<bound>)`, `D<k>(<bound>)`
//! or with primes (`y`, `y'`, `y''`), and the bound must be spelled exactly as
//! in the `interval` line.

use crate::error::ProblemError;
use crate::expr::{parse_const_expr, parse_expr, Expr};
use crate::reduction::{Endpoint, Problem};

struct RawBc {
    line: usize,
    k: usize,
    bound: String,
    value: f64,
}

struct Interval {
    a: f64,
    b: f64,
    a_text: String,
    b_text: String,
}

fn syntax(line: usize, msg: impl Into<String>) -> ProblemError {
    ProblemError::Syntax {
        line,
        msg: msg.into(),
    }
}

fn expr_at(line: usize, src: &str) -> Result<Expr, ProblemError> {
    parse_expr(src).map_err(|source| ProblemError::Expr { line, source })
}

fn const_at(line: usize, src: &str) -> Result<f64, ProblemError> {
    let e = parse_const_expr(src).map_err(|source| ProblemError::Expr { line, source })?;
    e.eval_const()
        .map_err(|source| ProblemError::Eval { line, source })
}

fn set_once<T>(slot: &mut Option<T>, value: T, line: usize, key: &str) -> Result<(), ProblemError> {
    if slot.is_some() {
        return Err(ProblemError::DuplicateKey {
            line,
            key: key.to_string(),
        });
    }
    *slot = Some(value);
    Ok(())
}

fn parse_interval(line: usize, v: &str) -> Result<Interval, ProblemError> {
    let inner = v
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| syntax(line, "interval must look like [a, b]"))?;
    let (a_text, b_text) = inner
        .split_once(',')
        .ok_or_else(|| syntax(line, "interval must look like [a, b]"))?;
    let (a_text, b_text) = (a_text.trim(), b_text.trim());
    Ok(Interval {
        a: const_at(line, a_text)?,
        b: const_at(line, b_text)?,
        a_text: a_text.to_string(),
        b_text: b_text.to_string(),
    })
}

fn parse_bc(line: usize, body: &str) -> Result<RawBc, ProblemError> {
    let (lhs, rhs) = body
        .split_once('=')
        .ok_or_else(|| syntax(line, "boundary condition needs `= value`"))?;
    let lhs = lhs.trim();
    let (k, rest) = if let Some(after) = lhs.strip_prefix('D') {
        let digits = after.len() - after.trim_start_matches(|c: char| c.is_ascii_digit()).len();
        if digits == 0 {
            return Err(syntax(line, "expected a derivative order after `D`"));
        }
        let k = after[..digits]
            .parse()
            .map_err(|_| syntax(line, "derivative order out of range"))?;
        let rest = after[digits..].trim_start();
        (k, rest.strip_prefix('y').unwrap_or(rest))
    } else if let Some(after) = lhs.strip_prefix('y') {
        let primes = after.len() - after.trim_start_matches('\'').len();
        (primes, &after[primes..])
    } else {
        return Err(syntax(line, format!("cannot read boundary condition `{lhs}`")));
    };
    let bound = rest
        .trim()
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| syntax(line, "boundary point must be parenthesized"))?
        .trim()
        .to_string();
    Ok(RawBc {
        line,
        k,
        bound,
        value: const_at(line, rhs.trim())?,
    })
}

pub fn parse_problem(src: &str) -> Result<Problem, ProblemError> {
    let mut order: Option<usize> = None;
    let mut interval: Option<Interval> = None;
    let mut coeffs: Vec<(usize, usize, Expr)> = Vec::new();
    let mut rhs: Option<Expr> = None;
    let mut exact: Option<Expr> = None;
    let mut degree: Option<usize> = None;
    let mut label: Option<String> = None;
    let mut bcs: Vec<RawBc> = Vec::new();

    for (idx, raw) in src.lines().enumerate() {
        let line = idx + 1;
        let text = raw.split('#').next().unwrap_or("").trim();
        if text.is_empty() {
            continue;
        }
        if let Some(body) = text.strip_prefix("bc:") {
            bcs.push(parse_bc(line, body)?);
            continue;
        }
        let (key, value) = text
            .split_once('=')
            .ok_or_else(|| syntax(line, format!("expected `key = value`, got `{text}`")))?;
        let (key, value) = (key.trim(), value.trim());
        match key {
            "order" => {
                let m = value
                    .parse::<usize>()
                    .ok()
                    .filter(|m| *m > 0)
                    .ok_or(ProblemError::InvalidOrder)?;
                set_once(&mut order, m, line, key)?;
            }
            "interval" => set_once(&mut interval, parse_interval(line, value)?, line, key)?,
            "rhs" => set_once(&mut rhs, expr_at(line, value)?, line, key)?,
            "exact" => set_once(&mut exact, expr_at(line, value)?, line, key)?,
            "n" => {
                let n = value
                    .parse::<usize>()
                    .map_err(|_| syntax(line, "n must be a non-negative integer"))?;
                set_once(&mut degree, n, line, key)?;
            }
            "label" => set_once(&mut label, value.to_string(), line, key)?,
            _ => {
                let index = key
                    .strip_prefix("coeff")
                    .and_then(|i| i.trim().parse::<usize>().ok())
                    .ok_or_else(|| syntax(line, format!("unknown directive `{key}`")))?;
                if coeffs.iter().any(|(_, i, _)| *i == index) {
                    return Err(ProblemError::DuplicateKey {
                        line,
                        key: key.to_string(),
                    });
                }
                coeffs.push((line, index, expr_at(line, value)?));
            }
        }
    }

    let order = order.ok_or(ProblemError::Missing("order"))?;
    let iv = interval.ok_or(ProblemError::Missing("interval"))?;
    let rhs = rhs.ok_or(ProblemError::Missing("rhs"))?;

    let mut builder = Problem::builder(order, iv.a, iv.b).rhs(rhs);
    for (_, i, e) in coeffs {
        builder = builder.coeff(i, e);
    }
    for bc in bcs {
        let endpoint = if bc.bound == iv.a_text {
            Endpoint::Left
        } else if bc.bound == iv.b_text {
            Endpoint::Right
        } else {
            return Err(ProblemError::UnknownEndpoint {
                line: bc.line,
                found: bc.bound,
            });
        };
        builder = builder.bc(bc.k, endpoint, bc.value);
    }
    if let Some(e) = exact {
        builder = builder.exact(e);
    }
    if let Some(n) = degree {
        builder = builder.default_degree(n);
    }
    if let Some(l) = label {
        builder = builder.label(l);
    }
    builder.build()
}
