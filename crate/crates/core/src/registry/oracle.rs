//! Fiber dimensions from explicitly assembled spanning sets, without the
//! matrix builders used by the families.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exterior::{ext_basis, gl_act, wedge, ExtVector};
use crate::linalg::{rank, Matrix, Scalar, Vector};
use crate::torus::bar;

/// Dimensions of the minimal, wedge-image, intermediate and maximal fibers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct OracleDims {
    pub min: usize,
    pub fullw: usize,
    pub int: usize,
    pub max: usize,
}

fn span_rank(n: usize, p: usize, vs: &[ExtVector]) -> Result<usize> {
    let len = ext_basis(n, p).len();
    if vs.is_empty() || len == 0 {
        return Ok(0);
    }
    let rows: Vec<Vector> = vs.iter().map(ExtVector::to_dense).collect();
    Ok(rank(&Matrix::from_rows_with_cols(&rows, len)?))
}

/// Contraction of one monomial with `bar(x)`, summing over wedge positions.
fn contract(x_bar: &Vector, m: &[usize]) -> Result<ExtVector> {
    let n = x_bar.len();
    let mut out = ExtVector::zero(n, m.len() - 1);
    for (pos, &a) in m.iter().enumerate() {
        if x_bar[a].is_zero() {
            continue;
        }
        let rest: Vec<usize> = m.iter().enumerate().filter(|&(q, _)| q != pos).map(|(_, &b)| b).collect();
        // (-1)^i with one-based i = pos + 1
        let sign = if pos % 2 == 0 { -1 } else { 1 };
        out = out.add(&ExtVector::monomial(n, &rest)?.scale(&(&x_bar[a] * &Scalar::from_int(sign))))?;
    }
    Ok(out)
}

/// The four fiber dimensions on `Λ^p` at `x = k + β`, for `1 <= p < N`.
pub fn oracle_fiber_dims(n: usize, p: usize, x: &Vector) -> Result<OracleDims> {
    if x.is_zero() {
        return Err(Error::ZeroVector);
    }
    if x.len() != n || p == 0 || p >= n {
        return Err(Error::InvalidParameter(format!("oracle needs 1 <= p < N = {n} and x of length N")));
    }
    let xb = bar(x)?;
    let op = Matrix::outer(x, &xb);
    let xe = ExtVector::from_vector(x);
    let min_span = ext_basis(n, p)
        .monomials()
        .iter()
        .map(|m| gl_act(&op, &ExtVector::monomial(n, m)?))
        .collect::<Result<Vec<_>>>()?;
    let fullw_span = ext_basis(n, p - 1)
        .monomials()
        .iter()
        .map(|m| wedge(&xe, &ExtVector::monomial(n, m)?))
        .collect::<Result<Vec<_>>>()?;
    let int_span = ext_basis(n, p + 1).monomials().iter().map(|m| contract(&xb, m)).collect::<Result<Vec<_>>>()?;
    let min = span_rank(n, p, &min_span)?;
    Ok(OracleDims {
        min,
        fullw: span_rank(n, p, &fullw_span)?,
        int: span_rank(n, p, &int_span)?,
        max: ext_basis(n, p).len() - min,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let e1 = |n| Vector::unit(n, 0);
        assert_eq!(oracle_fiber_dims(4, 2, &e1(4)).unwrap(), OracleDims { min: 2, fullw: 3, int: 3, max: 4 });
        let d = oracle_fiber_dims(4, 1, &e1(4)).unwrap();
        assert_eq!((d.min, d.fullw, d.max), (1, 1, 3));
        assert_eq!(oracle_fiber_dims(6, 3, &e1(6)).unwrap().min, 6);
        assert!(oracle_fiber_dims(4, 2, &Vector::zeros(4)).is_err());
    }
}
