//! Exterior and symmetric powers of `Q^N`.
//!
//! Basis monomials of `Λ^p` are strictly increasing index tuples in
//! lexicographic order; `Λ^0` has the single empty monomial. Indices are
//! zero-based throughout. `Sym^2` uses the pairs `i <= j` in lexicographic
//! order as its (unnormalised) basis `e_i ⊙ e_j`.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::linalg::{kernel, Matrix, Scalar, Subspace, Vector};

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}

/// `binomial(n, k)` extended by zero to negative `k`.
pub fn binomial_i(n: usize, k: i64) -> usize {
    if k < 0 {
        0
    } else {
        binomial(n, k as usize)
    }
}

/// The ordered monomial basis of `Λ^p Q^n`.
#[derive(Debug)]
pub struct ExtBasis {
    n: usize,
    p: usize,
    monomials: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
}

impl ExtBasis {
    fn build(n: usize, p: usize) -> Self {
        let mut monomials = Vec::new();
        let mut cur = Vec::with_capacity(p);
        fn rec(start: usize, n: usize, p: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == p {
                out.push(cur.clone());
                return;
            }
            for i in start..n {
                cur.push(i);
                rec(i + 1, n, p, cur, out);
                cur.pop();
            }
        }
        if p <= n {
            rec(0, n, p, &mut cur, &mut monomials);
        }
        let index = monomials.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        ExtBasis { n, p, monomials, index }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomials(&self) -> &[Vec<usize>] {
        &self.monomials
    }

    pub fn monomial(&self, i: usize) -> &[usize] {
        &self.monomials[i]
    }

    pub fn index_of(&self, m: &[usize]) -> Option<usize> {
        self.index.get(m).copied()
    }
}

type BasisCache = Mutex<HashMap<(usize, usize), Arc<ExtBasis>>>;

/// Shared, cached basis of `Λ^p Q^n`.
pub fn ext_basis(n: usize, p: usize) -> Arc<ExtBasis> {
    static CACHE: OnceLock<BasisCache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("basis cache poisoned");
    guard.entry((n, p)).or_insert_with(|| Arc::new(ExtBasis::build(n, p))).clone()
}

/// Sorts an index list, returning the sign of the sorting permutation, or
/// `None` if an index repeats.
pub fn sort_with_sign(idx: &mut [usize]) -> Option<i64> {
    let mut sign = 1;
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
        if j > 0 && idx[j - 1] == idx[j] {
            return None;
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some(sign)
}

/// `(bar e_a | e_b)` for `N = 2 half`.
fn bar_unit_pairing(half: usize, a: usize, b: usize) -> i64 {
    if a < half {
        if b == a + half {
            -1
        } else {
            0
        }
    } else if b + half == a {
        1
    } else {
        0
    }
}

/// A sparse element of `Λ^p Q^n`; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtVector {
    n: usize,
    p: usize,
    terms: BTreeMap<Vec<usize>, Scalar>,
}

impl ExtVector {
    pub fn zero(n: usize, p: usize) -> Self {
        ExtVector { n, p, terms: BTreeMap::new() }
    }

    /// The monomial `e_{i_1} ∧ ... ∧ e_{i_p}` for any index order.
    pub fn monomial(n: usize, idx: &[usize]) -> Result<Self> {
        if let Some(&i) = idx.iter().find(|&&i| i >= n) {
            return Err(Error::IndexOutOfRange(format!("index {i} in dimension {n}")));
        }
        let mut v = Self::zero(n, idx.len());
        let mut s = idx.to_vec();
        if let Some(sign) = sort_with_sign(&mut s) {
            v.add_term(s, Scalar::from_int(sign));
        }
        Ok(v)
    }

    /// The vector `x` viewed in `Λ^1`.
    pub fn from_vector(x: &Vector) -> Self {
        let mut v = Self::zero(x.len(), 1);
        for (i, c) in x.iter().enumerate() {
            v.add_term(vec![i], c.clone());
        }
        v
    }

    pub fn from_dense(n: usize, p: usize, coords: &Vector) -> Result<Self> {
        let b = ext_basis(n, p);
        if coords.len() != b.len() {
            return Err(Error::DimensionMismatch(format!("{} coordinates for Λ^{p} Q^{n}", coords.len())));
        }
        let mut v = Self::zero(n, p);
        for (i, c) in coords.iter().enumerate() {
            v.add_term(b.monomial(i).to_vec(), c.clone());
        }
        Ok(v)
    }

    pub fn to_dense(&self) -> Vector {
        let b = ext_basis(self.n, self.p);
        let mut out = Vector::zeros(b.len());
        for (m, c) in &self.terms {
            out[b.index_of(m).expect("stored monomials are sorted")] = c.clone();
        }
        out
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &Scalar)> {
        self.terms.iter()
    }

    fn add_term(&mut self, m: Vec<usize>, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn add(&self, other: &ExtVector) -> Result<ExtVector> {
        if self.n != other.n || self.p != other.p {
            return Err(Error::DimensionMismatch("exterior vectors of different shape".into()));
        }
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Scalar) -> ExtVector {
        let mut out = Self::zero(self.n, self.p);
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v * c);
        }
        out
    }
}

/// `a ∧ b`.
pub fn wedge(a: &ExtVector, b: &ExtVector) -> Result<ExtVector> {
    if a.n != b.n {
        return Err(Error::DimensionMismatch(format!("wedge of Q^{} and Q^{} elements", a.n, b.n)));
    }
    let mut out = ExtVector::zero(a.n, a.p + b.p);
    for (ma, ca) in &a.terms {
        for (mb, cb) in &b.terms {
            let mut idx: Vec<usize> = ma.iter().chain(mb).copied().collect();
            if let Some(sign) = sort_with_sign(&mut idx) {
                out.add_term(idx, &(ca * cb) * &Scalar::from_int(sign));
            }
        }
    }
    Ok(out)
}

fn check_square(a: &Matrix, n: usize) -> Result<()> {
    if a.rows() != n || a.cols() != n {
        return Err(Error::DimensionMismatch(format!("{}x{} matrix acting on Q^{n}", a.rows(), a.cols())));
    }
    Ok(())
}

/// The derivation action of `A ∈ gl_N` on an element of `Λ^p`.
pub fn gl_act(a: &Matrix, v: &ExtVector) -> Result<ExtVector> {
    check_square(a, v.n)?;
    let mut out = ExtVector::zero(v.n, v.p);
    for (m, c) in &v.terms {
        for pos in 0..m.len() {
            for row in 0..v.n {
                let e = &a[(row, m[pos])];
                if e.is_zero() {
                    continue;
                }
                let mut idx = m.clone();
                idx[pos] = row;
                if let Some(sign) = sort_with_sign(&mut idx) {
                    out.add_term(idx, &(c * e) * &Scalar::from_int(sign));
                }
            }
        }
    }
    Ok(out)
}

/// Matrix of the derivation action of `A` on `Λ^p Q^N` in the monomial basis.
pub fn gl_act_matrix(a: &Matrix, p: usize) -> Result<Matrix> {
    let n = a.rows();
    check_square(a, n)?;
    let b = ext_basis(n, p);
    let nz = a.nonzeros();
    let mut entries = Vec::new();
    for (col, m) in b.monomials().iter().enumerate() {
        for pos in 0..m.len() {
            for (row, src, e) in &nz {
                if *src != m[pos] {
                    continue;
                }
                let mut idx = m.clone();
                idx[pos] = *row;
                if let Some(sign) = sort_with_sign(&mut idx) {
                    let r = b.index_of(&idx).expect("sorted monomial is in basis");
                    entries.push((r, col, e * &Scalar::from_int(sign)));
                }
            }
        }
    }
    Matrix::from_triplets(b.len(), b.len(), &entries)
}

fn require_even(n: usize) -> Result<usize> {
    if !n.is_multiple_of(2) || n == 0 {
        return Err(Error::OddDimension(n));
    }
    Ok(n / 2)
}

/// The contraction `Λ^p → Λ^{p-2}` with the symplectic pairing:
/// `v_1∧…∧v_p ↦ Σ_{i<j} (-1)^{i+j-1} (bar v_i|v_j) v_1∧…v̂_i…v̂_j…∧v_p`
/// with one-based positions `i, j`.
pub fn theta(v: &ExtVector) -> Result<ExtVector> {
    let half = require_even(v.n)?;
    if v.p < 2 {
        return Ok(ExtVector::zero(v.n, 0));
    }
    let mut out = ExtVector::zero(v.n, v.p - 2);
    for (m, c) in &v.terms {
        for (_, rest, sign) in theta_terms(half, m) {
            out.add_term(rest, c * &Scalar::from_int(sign));
        }
    }
    Ok(out)
}

/// Nonzero terms of the contraction of one monomial.
fn theta_terms(half: usize, m: &[usize]) -> Vec<((usize, usize), Vec<usize>, i64)> {
    let mut out = Vec::new();
    for i in 0..m.len() {
        for j in i + 1..m.len() {
            let pair = bar_unit_pairing(half, m[i], m[j]);
            if pair == 0 {
                continue;
            }
            let parity = if (i + j + 1) % 2 == 0 { 1 } else { -1 };
            let rest: Vec<usize> = m.iter().enumerate().filter(|&(k, _)| k != i && k != j).map(|(_, &x)| x).collect();
            out.push(((i, j), rest, parity * pair));
        }
    }
    out
}

/// Matrix of the contraction `Λ^p → Λ^{p-2}`.
pub fn theta_matrix(n: usize, p: usize) -> Result<Matrix> {
    let half = require_even(n)?;
    let src = ext_basis(n, p);
    if p < 2 {
        return Ok(Matrix::zeros(0, src.len()));
    }
    let dst = ext_basis(n, p - 2);
    let mut entries = Vec::new();
    for (col, m) in src.monomials().iter().enumerate() {
        for (_, rest, sign) in theta_terms(half, m) {
            entries.push((dst.index_of(&rest).expect("sub-monomial is sorted"), col, Scalar::from_int(sign)));
        }
    }
    Matrix::from_triplets(dst.len(), src.len(), &entries)
}

/// The fundamental subspace: the kernel of the contraction on `Λ^p`, for
/// `0 <= p <= N/2`. For `p <= 1` this is the whole space.
pub fn fundamental_subspace(n: usize, p: usize) -> Result<Subspace> {
    let half = require_even(n)?;
    if p > half {
        return Err(Error::InvalidParameter(format!("fundamental subspace needs p <= {half}, got {p}")));
    }
    if p < 2 {
        return Ok(Subspace::full(binomial(n, p)));
    }
    Ok(kernel(&theta_matrix(n, p)?))
}

/// Predicted dimension of the fundamental subspace.
pub fn fundamental_dim(n: usize, p: usize) -> usize {
    binomial(n, p) - binomial_i(n, p as i64 - 2)
}

/// Basis pairs `(i, j)`, `i <= j`, of `Sym^2 Q^n`.
pub fn sym2_basis(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in i..n {
            out.push((i, j));
        }
    }
    out
}

/// Matrix of the derivation action `A(x ⊙ y) = Ax ⊙ y + x ⊙ Ay` on `Sym^2`.
pub fn sym2_act_matrix(a: &Matrix) -> Result<Matrix> {
    let n = a.rows();
    check_square(a, n)?;
    let basis = sym2_basis(n);
    let pos: HashMap<(usize, usize), usize> = basis.iter().enumerate().map(|(k, &ij)| (ij, k)).collect();
    let key = |x: usize, y: usize| if x <= y { (x, y) } else { (y, x) };
    let mut entries = Vec::new();
    for (col, &(i, j)) in basis.iter().enumerate() {
        for m in 0..n {
            let ei = &a[(m, i)];
            if !ei.is_zero() {
                entries.push((pos[&key(m, j)], col, ei.clone()));
            }
            let ej = &a[(m, j)];
            if !ej.is_zero() {
                entries.push((pos[&key(i, m)], col, ej.clone()));
            }
        }
    }
    Matrix::from_triplets(basis.len(), basis.len(), &entries)
}

/// The derivation action on a `Sym^2` coordinate vector.
pub fn sym2_act(a: &Matrix, v: &Vector) -> Result<Vector> {
    sym2_act_matrix(a)?.mul_vec(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mono(n: usize, idx: &[usize]) -> ExtVector {
        ExtVector::monomial(n, idx).unwrap()
    }

    #[test]
    fn basis_order_and_size() {
        let b = ext_basis(4, 2);
        assert_eq!(b.monomials(), &[vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
        assert_eq!(ext_basis(4, 0).len(), 1);
        assert_eq!(ext_basis(4, 5).len(), 0);
    }

    #[test]
    fn wedge_signs() {
        let w = wedge(&mono(4, &[1]), &mono(4, &[0])).unwrap();
        assert_eq!(w, mono(4, &[0, 1]).scale(&Scalar::from_int(-1)));
        assert!(wedge(&mono(4, &[0]), &mono(4, &[0])).unwrap().is_zero());
    }

    #[test]
    fn unit_matrix_acts_as_derivation() {
        let e12 = Matrix::unit(4, 0, 1);
        let v = gl_act(&e12, &mono(4, &[1, 2])).unwrap();
        assert_eq!(v, mono(4, &[0, 2]));
        let dense = gl_act_matrix(&e12, 2).unwrap().mul_vec(&mono(4, &[1, 2]).to_dense()).unwrap();
        assert_eq!(dense, v.to_dense());
    }

    #[test]
    fn contraction_examples() {
        // e1∧e3 ↦ -1 and e1∧e2∧e3 ↦ e2 (one-based names)
        let t = theta(&mono(4, &[0, 2])).unwrap();
        assert_eq!(t.to_dense(), Vector::from_ints(&[-1]));
        let t3 = theta(&mono(4, &[0, 1, 2])).unwrap();
        assert_eq!(t3, mono(4, &[1]));
    }

    #[test]
    fn fundamental_subspace_n4_p2() {
        let f = fundamental_subspace(4, 2).unwrap();
        assert_eq!(f.dim(), 5);
        let expect = [
            mono(4, &[0, 1]),
            mono(4, &[0, 3]),
            mono(4, &[1, 2]),
            mono(4, &[2, 3]),
            mono(4, &[0, 2]).add(&mono(4, &[1, 3]).scale(&Scalar::from_int(-1))).unwrap(),
        ];
        for v in &expect {
            assert!(f.contains(&v.to_dense()).unwrap());
        }
        assert!(fundamental_subspace(3, 1).is_err());
        assert!(fundamental_subspace(4, 3).is_err());
    }

    #[test]
    fn sym2_unit_action() {
        // E_{12}(e2 ⊙ e2) = 2 e1 ⊙ e2
        let m = sym2_act_matrix(&Matrix::unit(2, 0, 1)).unwrap();
        let v = m.mul_vec(&Vector::from_ints(&[0, 0, 1])).unwrap();
        assert_eq!(v, Vector::from_ints(&[0, 2, 0]));
        let id = sym2_act_matrix(&Matrix::identity(3)).unwrap();
        assert_eq!(id, Matrix::identity(6).scale(&Scalar::from_int(2)));
    }
}
