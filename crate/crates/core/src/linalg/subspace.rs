use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{Matrix, Scalar, Vector};
use crate::error::{Error, Result};

/// Integer arithmetic used by fraction-free elimination. The fixed-width
/// instance reports overflow by returning `None`.
trait ElimInt: Clone {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn mul(&self, o: &Self) -> Option<Self>;
    fn sub(&self, o: &Self) -> Option<Self>;
    fn div_exact(&self, o: &Self) -> Self;
    fn to_scalar_ratio(&self, den: &Self) -> Scalar;
}

impl ElimInt for i128 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        self.checked_sub(*o)
    }
    fn div_exact(&self, o: &Self) -> Self {
        self / o
    }
    fn to_scalar_ratio(&self, den: &Self) -> Scalar {
        Scalar::from_i128_ratio(*self, *den)
    }
}

impl ElimInt for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn div_exact(&self, o: &Self) -> Self {
        self / o
    }
    fn to_scalar_ratio(&self, den: &Self) -> Scalar {
        Scalar::from_bigint_ratio(self.clone(), den.clone())
    }
}

/// Clears denominators row by row. `None` when the fixed-width path overflows.
fn integer_rows_i128(rows: &[Vector]) -> Option<Vec<Vec<i128>>> {
    let mut out = Vec::with_capacity(rows.len());
    for r in rows {
        let mut l: i128 = 1;
        let mut parts = Vec::with_capacity(r.len());
        for x in r.iter() {
            let (n, d) = x.as_small()?;
            l = l.checked_mul(d as i128 / l.gcd(&(d as i128)))?;
            parts.push((n as i128, d as i128));
        }
        let mut row = Vec::with_capacity(parts.len());
        for (n, d) in parts {
            row.push(n.checked_mul(l / d)?);
        }
        out.push(row);
    }
    Some(out)
}

fn integer_rows_big(rows: &[Vector]) -> Vec<Vec<BigInt>> {
    rows.iter()
        .map(|r| {
            let l = r.iter().fold(<BigInt as One>::one(), |acc, x| acc.lcm(&x.denom()));
            r.iter().map(|x| x.numer() * (&l / x.denom())).collect()
        })
        .collect()
}

/// Fraction-free forward elimination with row swaps and column skipping.
/// Returns the nonzero echelon rows and their pivot columns.
fn bareiss<T: ElimInt>(mut m: Vec<Vec<T>>, ncols: usize) -> Option<(Vec<Vec<T>>, Vec<usize>)> {
    let nrows = m.len();
    let mut prev = T::one();
    let mut r = 0;
    let mut pivots = Vec::new();
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let (top, rest) = m.split_at_mut(r + 1);
        let piv = &top[r];
        for row in rest.iter_mut() {
            let lead = row[c].clone();
            for j in c + 1..ncols {
                let v = piv[c].mul(&row[j])?.sub(&lead.mul(&piv[j])?)?;
                row[j] = v.div_exact(&prev);
            }
            row[c] = T::zero();
        }
        prev = m[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    Some((m, pivots))
}

fn normalise<T: ElimInt>(ech: Vec<Vec<T>>, pivots: &[usize]) -> Vec<Vector> {
    let mut rows: Vec<Vector> = ech
        .iter()
        .zip(pivots)
        .map(|(row, &pc)| Vector(row.iter().map(|x| x.to_scalar_ratio(&row[pc])).collect()))
        .collect();
    for i in (0..rows.len()).rev() {
        let pc = pivots[i];
        let (above, below) = rows.split_at_mut(i);
        let pivot_row = &below[0];
        for row in above.iter_mut() {
            let f = row[pc].clone();
            if !f.is_zero() {
                for j in pc..pivot_row.len() {
                    if !pivot_row[j].is_zero() {
                        row[j] = &row[j] - &(&f * &pivot_row[j]);
                    }
                }
            }
        }
    }
    rows
}

/// Reduced row echelon form of the given rows: the nonzero rows and their
/// pivot columns. The pivot of each row is its first nonzero entry.
pub fn rref_rows(rows: &[Vector], ncols: usize) -> (Vec<Vector>, Vec<usize>) {
    let rows: Vec<Vector> = rows.iter().filter(|r| !r.is_zero()).cloned().collect();
    if rows.is_empty() {
        return (Vec::new(), Vec::new());
    }
    if let Some(ints) = integer_rows_i128(&rows) {
        if let Some((ech, piv)) = bareiss(ints, ncols) {
            return (normalise(ech, &piv), piv);
        }
    }
    let (ech, piv) = bareiss(integer_rows_big(&rows), ncols).expect("big integer elimination cannot overflow");
    (normalise(ech, &piv), piv)
}

/// The reduced row echelon form of a matrix, as a matrix with zero rows dropped.
pub fn rref(m: &Matrix) -> Matrix {
    let (rows, _) = rref_rows(&m.row_vectors(), m.cols());
    Matrix::from_rows_with_cols(&rows, m.cols()).expect("rref rows have matrix width")
}

pub fn rank(m: &Matrix) -> usize {
    rref_rows(&m.row_vectors(), m.cols()).0.len()
}

/// A subspace of `Q^n` stored by its canonical RREF basis, so two subspaces
/// are equal exactly when their bases are equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vector>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace { ambient, basis: (0..ambient).map(|i| Vector::unit(ambient, i)).collect(), pivots: (0..ambient).collect() }
    }

    pub fn span(ambient: usize, vectors: &[Vector]) -> Result<Self> {
        if let Some(v) = vectors.iter().find(|v| v.len() != ambient) {
            return Err(Error::DimensionMismatch(format!("vector of length {} in Q^{ambient}", v.len())));
        }
        let (basis, pivots) = rref_rows(vectors, ambient);
        Ok(Subspace { ambient, basis, pivots })
    }

    /// Row space of a matrix.
    pub fn row_space(m: &Matrix) -> Self {
        let (basis, pivots) = rref_rows(&m.row_vectors(), m.cols());
        Subspace { ambient: m.cols(), basis, pivots }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.basis.len() == self.ambient
    }

    /// The part of `v` left after eliminating every pivot coordinate.
    pub fn reduce(&self, v: &Vector) -> Result<Vector> {
        if v.len() != self.ambient {
            return Err(Error::DimensionMismatch(format!("vector of length {} in Q^{}", v.len(), self.ambient)));
        }
        let mut r = v.clone();
        for (b, &pc) in self.basis.iter().zip(&self.pivots) {
            let f = r[pc].clone();
            if !f.is_zero() {
                r = r.axpy(&-&f, b)?;
            }
        }
        Ok(r)
    }

    pub fn contains(&self, v: &Vector) -> Result<bool> {
        Ok(self.reduce(v)?.is_zero())
    }

    pub fn contains_subspace(&self, other: &Subspace) -> Result<bool> {
        self.same_ambient(other)?;
        for b in &other.basis {
            if !self.contains(b)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Coordinates of a member vector in the canonical basis.
    pub fn coordinates(&self, v: &Vector) -> Result<Vec<Scalar>> {
        if !self.contains(v)? {
            return Err(Error::InvalidParameter("vector not in subspace".into()));
        }
        Ok(self.pivots.iter().map(|&p| v[p].clone()).collect())
    }

    fn same_ambient(&self, other: &Subspace) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch(format!("subspaces of Q^{} and Q^{}", self.ambient, other.ambient)));
        }
        Ok(())
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.same_ambient(other)?;
        let mut vs = self.basis.clone();
        vs.extend(other.basis.iter().cloned());
        Subspace::span(self.ambient, &vs)
    }

    /// Vectors annihilated by every basis vector under the standard pairing.
    pub fn annihilator(&self) -> Subspace {
        kernel_of_rows(&self.basis, &self.pivots, self.ambient)
    }

    /// Intersection, computed as the kernel of the stacked annihilators.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.same_ambient(other)?;
        if self.is_full() {
            return Ok(other.clone());
        }
        if other.is_full() {
            return Ok(self.clone());
        }
        let mut rows = self.annihilator().basis;
        rows.extend(other.annihilator().basis);
        let (ech, piv) = rref_rows(&rows, self.ambient);
        Ok(kernel_of_rows(&ech, &piv, self.ambient))
    }

    /// Image of this subspace under `m`.
    pub fn image_under(&self, m: &Matrix) -> Result<Subspace> {
        if m.cols() != self.ambient {
            return Err(Error::DimensionMismatch(format!("{}x{} matrix on Q^{}", m.rows(), m.cols(), self.ambient)));
        }
        let imgs = self.basis.iter().map(|b| m.mul_vec(b)).collect::<Result<Vec<_>>>()?;
        Subspace::span(m.rows(), &imgs)
    }
}

/// Kernel of a matrix given by RREF rows and pivots.
fn kernel_of_rows(rows: &[Vector], pivots: &[usize], ncols: usize) -> Subspace {
    let mut is_pivot = vec![false; ncols];
    for &p in pivots {
        is_pivot[p] = true;
    }
    let mut vs = Vec::new();
    for f in (0..ncols).filter(|&c| !is_pivot[c]) {
        let mut v = Vector::unit(ncols, f);
        for (row, &pc) in rows.iter().zip(pivots) {
            v[pc] = -&row[f];
        }
        vs.push(v);
    }
    let (basis, piv) = rref_rows(&vs, ncols);
    Subspace { ambient: ncols, basis, pivots: piv }
}

/// Null space of `m`.
pub fn kernel(m: &Matrix) -> Subspace {
    let (rows, piv) = rref_rows(&m.row_vectors(), m.cols());
    kernel_of_rows(&rows, &piv, m.cols())
}

/// Column space of `m`.
pub fn image(m: &Matrix) -> Subspace {
    Subspace::row_space(&m.transpose())
}

/// Kernel of `m` restricted to the subspace `s`, i.e. `{v in s : m v = 0}`.
pub fn restricted_kernel(m: &Matrix, s: &Subspace) -> Result<Subspace> {
    if m.cols() != s.ambient_dim() {
        return Err(Error::DimensionMismatch(format!("{}x{} matrix on Q^{}", m.rows(), m.cols(), s.ambient_dim())));
    }
    if s.is_zero() {
        return Ok(Subspace::zero(s.ambient_dim()));
    }
    let b = Matrix::from_cols(s.basis(), s.ambient_dim())?;
    let mb = m.mul(&b)?;
    let coeffs = kernel(&mb);
    let vs = coeffs.basis().iter().map(|c| b.mul_vec(c)).collect::<Result<Vec<_>>>()?;
    Subspace::span(s.ambient_dim(), &vs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::new(n, d).unwrap()
    }

    #[test]
    fn rref_small_example() {
        let m = Matrix::from_int_rows(&[&[2, 4, 1], &[1, 2, 0], &[3, 6, 1]]);
        let r = rref(&m);
        assert_eq!(r, Matrix::from_int_rows(&[&[1, 2, 0], &[0, 0, 1]]));
        assert_eq!(rank(&m), 2);
    }

    #[test]
    fn rref_with_fractions() {
        let rows = vec![Vector(vec![q(1, 2), q(1, 3)]), Vector(vec![q(1, 4), q(1, 5)])];
        let (r, piv) = rref_rows(&rows, 2);
        assert_eq!(piv, vec![0, 1]);
        assert_eq!(r, vec![Vector::from_ints(&[1, 0]), Vector::from_ints(&[0, 1])]);
    }

    #[test]
    fn rref_survives_overflow() {
        let big = Scalar::from_int(i64::MAX);
        let rows = vec![
            Vector(vec![big.clone(), Scalar::one(), Scalar::zero()]),
            Vector(vec![Scalar::one(), big.clone(), Scalar::one()]),
            Vector(vec![&big * &big, big.clone(), Scalar::one()]),
        ];
        let s = Subspace::span(3, &rows).unwrap();
        for r in &rows {
            assert!(s.contains(r).unwrap());
        }
        assert_eq!(s.dim(), 3);
    }

    #[test]
    fn kernel_and_image() {
        let m = Matrix::from_int_rows(&[&[1, 1, 0], &[0, 0, 1]]);
        let k = kernel(&m);
        assert_eq!(k.basis(), &[Vector::from_ints(&[1, -1, 0])]);
        assert_eq!(image(&m).dim(), 2);
    }

    #[test]
    fn intersection_of_planes() {
        let a = Subspace::span(3, &[Vector::from_ints(&[1, 0, 0]), Vector::from_ints(&[0, 1, 0])]).unwrap();
        let b = Subspace::span(3, &[Vector::from_ints(&[0, 1, 0]), Vector::from_ints(&[0, 0, 1])]).unwrap();
        let c = a.intersect(&b).unwrap();
        assert_eq!(c.basis(), &[Vector::from_ints(&[0, 1, 0])]);
        assert_eq!(a.sum(&b).unwrap().dim(), 3);
    }

    #[test]
    fn restricted_kernel_inside_subspace() {
        let s = Subspace::span(3, &[Vector::from_ints(&[1, 1, 0]), Vector::from_ints(&[0, 0, 1])]).unwrap();
        let m = Matrix::from_int_rows(&[&[0, 0, 1]]);
        let k = restricted_kernel(&m, &s).unwrap();
        assert_eq!(k.basis(), &[Vector::from_ints(&[1, 1, 0])]);
    }
}
