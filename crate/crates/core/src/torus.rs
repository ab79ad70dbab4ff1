//! Lattice degrees, the symplectic bar map and the Lie-algebra data shared
//! by the three Cartan-type algebras.
//!
//! For `N = 2n`, `bar(w) = (w_{n+1},…,w_{2n}, -w_1,…,-w_n)` and the
//! symplectic pairing is `(bar u | v)` with `(·|·)` the standard form.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exterior::{gl_act_matrix, sym2_act_matrix};
use crate::linalg::{Matrix, Scalar, Vector};

/// Which torus Lie algebra acts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AlgebraKind {
    /// Hamiltonian: generators `h_r`, needs even `N`.
    H,
    /// All vector fields: generators `D(u, r)`.
    W,
    /// Divergence-free: `D(u, r)` with `(u|r) = 0`.
    S,
}

impl fmt::Display for AlgebraKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            AlgebraKind::H => "H",
            AlgebraKind::W => "W",
            AlgebraKind::S => "S",
        };
        f.write_str(s)
    }
}

impl FromStr for AlgebraKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "H" | "h" => Ok(AlgebraKind::H),
            "W" | "w" => Ok(AlgebraKind::W),
            "S" | "s" => Ok(AlgebraKind::S),
            other => Err(Error::Parse(format!("unknown algebra kind {other:?}"))),
        }
    }
}

/// A point of the lattice `Z^N`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Degree(pub Vec<i64>);

impl Degree {
    pub fn zero(n: usize) -> Self {
        Degree(vec![0; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn add(&self, other: &Degree) -> Degree {
        Degree(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn neg(&self) -> Degree {
        Degree(self.0.iter().map(|a| -a).collect())
    }

    pub fn max_abs(&self) -> i64 {
        self.0.iter().map(|x| x.abs()).max().unwrap_or(0)
    }

    pub fn to_vector(&self) -> Vector {
        Vector::from_ints(&self.0)
    }

    /// `k + β` as a rational vector.
    pub fn shifted(&self, beta: &Vector) -> Result<Vector> {
        self.to_vector().add(beta)
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl FromStr for Degree {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')');
        if t.is_empty() {
            return Ok(Degree(Vec::new()));
        }
        t.split(',')
            .map(|x| x.trim().parse::<i64>().map_err(|_| Error::Parse(format!("not an integer degree: {s:?}"))))
            .collect::<Result<Vec<_>>>()
            .map(Degree)
    }
}

/// All nonzero `r` with `max |r_i| <= bound`, in lexicographic order.
pub fn degree_ball(n: usize, bound: i64) -> Vec<Degree> {
    let mut out = Vec::new();
    let mut cur = vec![-bound; n];
    if n == 0 {
        return out;
    }
    loop {
        if cur.iter().any(|&x| x != 0) {
            out.push(Degree(cur.clone()));
        }
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < bound {
                cur[i] += 1;
                for c in cur.iter_mut().skip(i + 1) {
                    *c = -bound;
                }
                break;
            }
        }
    }
}

fn half_of(n: usize) -> Result<usize> {
    if n == 0 || !n.is_multiple_of(2) {
        return Err(Error::OddDimension(n));
    }
    Ok(n / 2)
}

/// `bar(w) = (w_{n+1},…,w_{2n}, -w_1,…,-w_n)`.
pub fn bar(w: &Vector) -> Result<Vector> {
    let half = half_of(w.len())?;
    let mut out = Vec::with_capacity(w.len());
    out.extend(w.0[half..].iter().cloned());
    out.extend(w.0[..half].iter().map(|x| -x));
    Ok(Vector(out))
}

/// The symplectic pairing `(bar u | v)`.
pub fn sympl_form(u: &Vector, v: &Vector) -> Result<Scalar> {
    if u.len() != v.len() {
        return Err(Error::DimensionMismatch(format!("pairing of lengths {} and {}", u.len(), v.len())));
    }
    bar(u)?.dot(v)
}

/// `[h_r, h_s] = (bar r | s) h_{r+s}`: the coefficient and the degree.
pub fn bracket_h(r: &Degree, s: &Degree) -> Result<(Scalar, Degree)> {
    let c = sympl_form(&r.to_vector(), &s.to_vector())?;
    Ok((c, r.add(s)))
}

/// The Gram matrix `J` of `(u, v) ↦ uᵀ J v`, `J = [[0, I], [-I, 0]]`.
pub fn j_matrix(n: usize) -> Result<Matrix> {
    let half = half_of(n)?;
    let mut j = Matrix::zeros(n, n);
    for i in 0..half {
        j[(i, half + i)] = Scalar::one();
        j[(half + i, i)] = Scalar::from_int(-1);
    }
    Ok(j)
}

/// Membership in `sp_N = {A : AᵀJ + JA = 0}`.
pub fn is_symplectic(a: &Matrix) -> Result<bool> {
    let j = j_matrix(a.rows())?;
    Ok(a.transpose().mul(&j)?.add(&j.mul(a)?)?.is_zero())
}

/// Named generators of `sp_N`, with zero-based indices below `n = N/2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpGenerator {
    /// `E_{i,j} - E_{n+j,n+i}`, `i != j`
    X(usize, usize),
    /// `E_{i,n+j} + E_{j,n+i}`, `i < j`
    Y(usize, usize),
    /// `E_{n+j,i} + E_{n+i,j}`, `i < j`
    Z(usize, usize),
    /// `E_{i,n+i}`
    U(usize),
    /// `E_{n+i,i}`
    V(usize),
    /// `E_{i,i} - E_{n+i,n+i}`
    H(usize),
}

pub fn sp_generator(n: usize, g: SpGenerator) -> Result<Matrix> {
    let h = half_of(n)?;
    let bad = || Error::InvalidParameter(format!("{g:?} is not a generator of sp_{n}"));
    let one = Scalar::one();
    let neg = Scalar::from_int(-1);
    let entries = match g {
        SpGenerator::X(i, j) if i < h && j < h && i != j => vec![(i, j, one), (h + j, h + i, neg)],
        SpGenerator::Y(i, j) if i < j && j < h => vec![(i, h + j, one.clone()), (j, h + i, one)],
        SpGenerator::Z(i, j) if i < j && j < h => vec![(h + j, i, one.clone()), (h + i, j, one)],
        SpGenerator::U(i) if i < h => vec![(i, h + i, one)],
        SpGenerator::V(i) if i < h => vec![(h + i, i, one)],
        SpGenerator::H(i) if i < h => vec![(i, i, one), (h + i, h + i, neg)],
        _ => return Err(bad()),
    };
    Matrix::from_triplets(n, n, &entries)
}

/// Every named generator; together they form a basis of `sp_N`.
pub fn sp_generators(n: usize) -> Result<Vec<(SpGenerator, Matrix)>> {
    let h = half_of(n)?;
    let mut names = Vec::new();
    for i in 0..h {
        for j in 0..h {
            if i != j {
                names.push(SpGenerator::X(i, j));
            }
        }
    }
    for i in 0..h {
        for j in i + 1..h {
            names.push(SpGenerator::Y(i, j));
            names.push(SpGenerator::Z(i, j));
        }
    }
    for i in 0..h {
        names.push(SpGenerator::U(i));
        names.push(SpGenerator::V(i));
        names.push(SpGenerator::H(i));
    }
    names.into_iter().map(|g| Ok((g, sp_generator(n, g)?))).collect()
}

/// `u · bar(u)ᵀ`, an element of `sp_N`.
pub fn rank_one_sym(u: &Vector) -> Result<Matrix> {
    Ok(Matrix::outer(u, &bar(u)?))
}

/// A representation of `gl_N` on which the J-predicates are evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rep {
    Lambda(usize),
    Sym2,
}

impl Rep {
    /// Matrix of the derivation action of `a` in this representation.
    pub fn act_matrix(&self, a: &Matrix) -> Result<Matrix> {
        match self {
            Rep::Lambda(p) => gl_act_matrix(a, *p),
            Rep::Sym2 => sym2_act_matrix(a),
        }
    }
}

/// One `(r, u)` probe; `u` is ignored for the Hamiltonian predicate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JSample {
    pub r: Vector,
    pub u: Vector,
}

/// Outcome of a J-predicate evaluation; `witness` is the first failing sample.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JVerdict {
    pub holds: bool,
    pub witness: Option<JSample>,
}

/// Evaluates the quadratic membership predicate of `kind` for `v` in `rep`:
///
/// * H: `(r·bar(r)ᵀ)² v = 0`
/// * W: `(r·uᵀ)² v = (u|r) (r·uᵀ) v`
/// * S: `(r·uᵀ)² v = 0`, every sample must satisfy `(u|r) = 0`
pub fn j_membership(kind: AlgebraKind, rep: Rep, v: &Vector, samples: &[JSample]) -> Result<JVerdict> {
    for s in samples {
        let x = match kind {
            AlgebraKind::H => rank_one_sym(&s.r)?,
            AlgebraKind::W | AlgebraKind::S => Matrix::outer(&s.r, &s.u),
        };
        if kind == AlgebraKind::S && !s.u.dot(&s.r)?.is_zero() {
            return Err(Error::InvalidParameter(format!("S sample with (u|r) != 0: u={} r={}", s.u, s.r)));
        }
        let m = rep.act_matrix(&x)?;
        let once = m.mul_vec(v)?;
        let twice = m.mul_vec(&once)?;
        let holds = match kind {
            AlgebraKind::H | AlgebraKind::S => twice.is_zero(),
            AlgebraKind::W => twice == once.scale(&s.u.dot(&s.r)?),
        };
        if !holds {
            return Ok(JVerdict { holds: false, witness: Some(s.clone()) });
        }
    }
    Ok(JVerdict { holds: true, witness: None })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> Vector {
        Vector::from_ints(xs)
    }

    #[test]
    fn bar_examples() {
        assert_eq!(bar(&v(&[1, 2, 3, 4])).unwrap(), v(&[3, 4, -1, -2]));
        assert_eq!(bar(&v(&[1, 0, 0, 0])).unwrap(), v(&[0, 0, -1, 0]));
        assert!(bar(&v(&[1, 2, 3])).is_err());
    }

    #[test]
    fn pairing_examples() {
        assert_eq!(sympl_form(&v(&[1, 0, 0, 0]), &v(&[0, 0, 1, 0])).unwrap(), Scalar::from_int(-1));
        assert_eq!(sympl_form(&v(&[0, 0, 1, 0]), &v(&[1, 0, 0, 0])).unwrap(), Scalar::from_int(1));
    }

    #[test]
    fn bracket_example() {
        let (c, d) = bracket_h(&Degree(vec![1, 0, 0, 0]), &Degree(vec![0, 0, 1, 0])).unwrap();
        assert_eq!(c, Scalar::from_int(-1));
        assert_eq!(d, Degree(vec![1, 0, 1, 0]));
    }

    #[test]
    fn generators_are_symplectic_and_independent() {
        let gens = sp_generators(4).unwrap();
        assert_eq!(gens.len(), 10);
        for (_, g) in &gens {
            assert!(is_symplectic(g).unwrap());
        }
        let flat: Vec<Vector> = gens.iter().map(|(_, g)| g.flatten()).collect();
        assert_eq!(crate::linalg::Subspace::span(16, &flat).unwrap().dim(), 10);
    }

    #[test]
    fn rank_one_examples() {
        let e1 = v(&[1, 0, 0, 0]);
        let m = rank_one_sym(&e1).unwrap();
        assert_eq!(m, Matrix::unit(4, 0, 2).scale(&Scalar::from_int(-1)));
        assert_eq!(sp_generator(4, SpGenerator::U(0)).unwrap(), m.scale(&Scalar::from_int(-1)));
    }

    #[test]
    fn ball_has_expected_size() {
        assert_eq!(degree_ball(4, 1).len(), 80);
        assert_eq!(degree_ball(2, 2).len(), 24);
        assert_eq!(degree_ball(2, 1)[0], Degree(vec![-1, -1]));
    }

    #[test]
    fn sym2_fails_hamiltonian_predicate() {
        // e2 ⊙ e2 with r = e1 at N = 2
        let sample = JSample { r: v(&[1, 0]), u: v(&[0, 0]) };
        let verdict = j_membership(AlgebraKind::H, Rep::Sym2, &v(&[0, 0, 1]), &[sample]).unwrap();
        assert!(!verdict.holds);
        assert!(verdict.witness.is_some());
    }
}
