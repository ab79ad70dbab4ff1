//! Per-fiber homology of the wedge complex, the contraction complex and the
//! square-zero endomorphisms `f_p`.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exterior::{binomial, fundamental_dim, fundamental_subspace};
use crate::graded::{ActionSpec, FiberType, Window};
use crate::linalg::{kernel, rank, restricted_kernel, Matrix, Vector};
use crate::maps::{build_family, map_matrix, FamilyKind, FamilySpec, MapId};
use crate::torus::{AlgebraKind, Degree};

/// A complex together with the position whose homology is wanted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ComplexId {
    /// `Λ^{p-1} → Λ^p → Λ^{p+1}` by wedging with `x`
    DeRham(usize),
    /// `Λ^{p+1} → Λ^p → Λ^{p-1}` by `T`
    TChain(usize),
    /// `f_p` on `Λ^p`
    Fsq(usize),
    /// `f_p` on the fundamental subspace of `Λ^p`
    FsqFund(usize),
}

impl ComplexId {
    pub fn position(&self) -> usize {
        match *self {
            ComplexId::DeRham(p) | ComplexId::TChain(p) | ComplexId::Fsq(p) | ComplexId::FsqFund(p) => p,
        }
    }

    /// Parses a bare name such as `DERHAM` with the position supplied apart.
    pub fn from_name(name: &str, p: usize) -> Result<Self> {
        match name.trim().to_ascii_uppercase().as_str() {
            "DERHAM" => Ok(ComplexId::DeRham(p)),
            "TCHAIN" => Ok(ComplexId::TChain(p)),
            "FSQ" => Ok(ComplexId::Fsq(p)),
            "FSQ_FUND" => Ok(ComplexId::FsqFund(p)),
            other => Err(Error::Parse(format!("unknown complex {other:?}"))),
        }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        let p = self.position();
        match self {
            ComplexId::DeRham(_) | ComplexId::TChain(_) if p <= n => Ok(()),
            ComplexId::Fsq(_) | ComplexId::FsqFund(_) if p >= 1 && 2 * p <= n => Ok(()),
            _ => Err(Error::InvalidParameter(format!("{self} is not defined for N = {n}"))),
        }
    }
}

impl fmt::Display for ComplexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComplexId::DeRham(p) => write!(f, "DERHAM({p})"),
            ComplexId::TChain(p) => write!(f, "TCHAIN({p})"),
            ComplexId::Fsq(p) => write!(f, "FSQ({p})"),
            ComplexId::FsqFund(p) => write!(f, "FSQ_FUND({p})"),
        }
    }
}

impl FromStr for ComplexId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("expected NAME(p), got {s:?}"));
        let (name, rest) = s.trim().split_once('(').ok_or_else(bad)?;
        let p = rest.strip_suffix(')').ok_or_else(bad)?.trim().parse().map_err(|_| bad())?;
        Self::from_name(name, p)
    }
}

impl Serialize for ComplexId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ComplexId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Homology dimension at each degree of a window.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyTable {
    pub id: ComplexId,
    pub entries: Vec<(Degree, usize)>,
    /// the degree with `k + β = 0`, when it lies in the window
    pub special: Option<Degree>,
}

impl HomologyTable {
    pub fn get(&self, k: &Degree) -> Option<usize> {
        self.entries.iter().find(|(d, _)| d == k).map(|&(_, h)| h)
    }
}

fn check_zero(m: &Matrix, what: &str, k: &Degree) -> Result<()> {
    if m.is_zero() {
        Ok(())
    } else {
        Err(Error::Structural(format!("{what} is not zero at degree {k}")))
    }
}

/// `dim ker(out) - rank(in)` after checking `out ∘ in = 0`.
fn homology_at(out: &Matrix, inc: &Matrix, what: &str, k: &Degree) -> Result<usize> {
    check_zero(&out.mul(inc)?, what, k)?;
    Ok(kernel(out).dim() - rank(inc))
}

fn fiber_homology(id: ComplexId, k: &Degree, beta: &Vector) -> Result<usize> {
    let n = beta.len();
    let p = id.position();
    match id {
        ComplexId::DeRham(_) => {
            let out = map_matrix(MapId::Pi(p), k, beta)?;
            let inc = if p == 0 { Matrix::zeros(1, 0) } else { map_matrix(MapId::Pi(p - 1), k, beta)? };
            homology_at(&out, &inc, "pi∘pi", k)
        }
        ComplexId::TChain(_) => {
            let out = map_matrix(MapId::T(p), k, beta)?;
            let inc = if p == n { Matrix::zeros(1, 0) } else { map_matrix(MapId::T(p + 1), k, beta)? };
            homology_at(&out, &inc, "T∘T", k)
        }
        ComplexId::Fsq(_) => {
            let f = map_matrix(MapId::F(p), k, beta)?;
            homology_at(&f, &f, "f∘f", k)
        }
        ComplexId::FsqFund(_) => {
            let f = map_matrix(MapId::F(p), k, beta)?;
            check_zero(&f.mul(&f)?, "f∘f", k)?;
            let fund = fundamental_subspace(n, p)?;
            let img = fund.image_under(&f)?;
            if !fund.contains_subspace(&img)? {
                return Err(Error::Structural(format!("f does not preserve the fundamental subspace at degree {k}")));
            }
            Ok(restricted_kernel(&f, &fund)?.dim() - img.dim())
        }
    }
}

fn special_in(beta: &Vector, window: &Window) -> Option<Degree> {
    let k = Degree(beta.iter().map(|b| b.to_i64().map(|x| -x)).collect::<Option<Vec<_>>>()?);
    window.contains(&k).then_some(k)
}

/// Per-fiber homology over the window. Fails with a structural error if the
/// maps do not compose to zero at some fiber.
pub fn complex_homology(id: ComplexId, beta: &Vector, window: &Window) -> Result<HomologyTable> {
    let n = beta.len();
    if window.n() != n {
        return Err(Error::DimensionMismatch(format!("window for N = {} but beta of length {n}", window.n())));
    }
    id.validate(n)?;
    if !matches!(id, ComplexId::DeRham(_)) && !n.is_multiple_of(2) {
        return Err(Error::OddDimension(n));
    }
    let entries = window
        .degrees()
        .into_par_iter()
        .map(|k| fiber_homology(id, &k, beta).map(|h| (k, h)))
        .collect::<Result<Vec<_>>>()?;
    Ok(HomologyTable { id, entries, special: special_in(beta, window) })
}

fn family_dims(kind: FamilyKind, p: usize, fundamental: bool, spec: &ActionSpec, window: &Window) -> Result<Vec<usize>> {
    let fam = build_family(&FamilySpec::new(kind, p, fundamental), spec, window)?;
    Ok(fam.fibers().iter().map(|s| s.dim()).collect())
}

/// Closed-form homology dimensions, assembled from submodule families:
///
/// * wedge and contraction complexes: zero off the special fiber, `C(N,p)` on it;
/// * `f_p`: `dim MIN(Λ^{p+1}) + dim MIN(Λ^{p-1})`, plus `C(N,p)` on the special fiber;
/// * `f_p` on the fundamental subspace, `p < n`: `dim (x ∧ MAX∩Fund(p))`;
///   `p = n`: `dim MIN∩Fund(n-1)`; plus `dim Fund(p)` on the special fiber.
pub fn predicted_homology(id: ComplexId, beta: &Vector, window: &Window) -> Result<HomologyTable> {
    let n = beta.len();
    id.validate(n)?;
    let p = id.position();
    let degrees = window.degrees();
    let special = special_in(beta, window);
    let on_special = |k: &Degree| special.as_ref() == Some(k);
    let values: Vec<usize> = match id {
        ComplexId::DeRham(_) | ComplexId::TChain(_) => {
            degrees.iter().map(|k| if on_special(k) { binomial(n, p) } else { 0 }).collect()
        }
        ComplexId::Fsq(_) => {
            let spec = ActionSpec::untwisted(AlgebraKind::H, n, FiberType::Lambda(p), beta.clone())?;
            let upper = if p + 1 < n { family_dims(FamilyKind::Min, p + 1, false, &spec, window)? } else { vec![0; degrees.len()] };
            let lower = family_dims(FamilyKind::Min, p - 1, false, &spec, window)?;
            degrees
                .iter()
                .zip(upper.iter().zip(&lower))
                .map(|(k, (a, b))| a + b + if on_special(k) { binomial(n, p) } else { 0 })
                .collect()
        }
        ComplexId::FsqFund(_) => {
            let spec = ActionSpec::untwisted(AlgebraKind::H, n, FiberType::Lambda(p), beta.clone())?;
            let generic: Vec<usize> = if 2 * p < n {
                let max = build_family(&FamilySpec::new(FamilyKind::Max, p, true), &spec, window)?;
                max.iter()
                    .map(|(k, s)| {
                        if s.is_zero() {
                            return Ok(0);
                        }
                        s.image_under(&map_matrix(MapId::Pi(p), &k, beta)?).map(|img| img.dim())
                    })
                    .collect::<Result<_>>()?
            } else {
                family_dims(FamilyKind::Min, p - 1, true, &spec, window)?
            };
            degrees
                .iter()
                .zip(generic)
                .map(|(k, g)| g + if on_special(k) { fundamental_dim(n, p) } else { 0 })
                .collect()
        }
    };
    Ok(HomologyTable { id, entries: degrees.into_iter().zip(values).collect(), special })
}

/// Per-fiber comparison of computed and predicted homology.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyComparison {
    pub id: ComplexId,
    pub holds: bool,
    /// `(degree, predicted, computed)`
    pub rows: Vec<(Degree, usize, usize)>,
    pub special: Option<Degree>,
}

pub fn compare_with_prediction(id: ComplexId, beta: &Vector, window: &Window) -> Result<HomologyComparison> {
    let got = complex_homology(id, beta, window)?;
    let want = predicted_homology(id, beta, window)?;
    let rows: Vec<(Degree, usize, usize)> =
        want.entries.into_iter().zip(got.entries).map(|((k, e), (_, a))| (k, e, a)).collect();
    let holds = rows.iter().all(|(_, e, a)| e == a);
    Ok(HomologyComparison { id, holds, rows, special: got.special })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Scalar;

    fn half_beta(n: usize) -> Vector {
        let mut b = Vector::zeros(n);
        b.0[0] = Scalar::new(1, 2).unwrap();
        b
    }

    #[test]
    fn parse_round_trip() {
        for id in [ComplexId::DeRham(0), ComplexId::TChain(3), ComplexId::Fsq(2), ComplexId::FsqFund(1)] {
            assert_eq!(id.to_string().parse::<ComplexId>().unwrap(), id);
        }
        assert!("FSQ".parse::<ComplexId>().is_err());
        assert!(ComplexId::Fsq(3).validate(4).is_err());
        assert!(ComplexId::Fsq(0).validate(4).is_err());
    }

    #[test]
    fn examples() {
        let w = Window::new(4, 1).unwrap();
        let t = complex_homology(ComplexId::DeRham(1), &half_beta(4), &w).unwrap();
        assert!(t.entries.iter().all(|&(_, h)| h == 0));
        let t = complex_homology(ComplexId::DeRham(2), &Vector::zeros(4), &w).unwrap();
        assert_eq!(t.get(&Degree::zero(4)), Some(6));
        let t = complex_homology(ComplexId::Fsq(2), &half_beta(4), &w).unwrap();
        assert!(t.entries.iter().all(|&(_, h)| h == 2));
        let c = compare_with_prediction(ComplexId::FsqFund(2), &half_beta(4), &w).unwrap();
        assert!(c.holds);
        assert!(c.rows.iter().all(|&(_, e, _)| e == 1));
    }

    #[test]
    fn special_fiber_flagged() {
        let w = Window::new(4, 1).unwrap();
        let c = compare_with_prediction(ComplexId::DeRham(2), &Vector::zeros(4), &w).unwrap();
        assert!(c.holds);
        assert_eq!(c.special, Some(Degree::zero(4)));
    }

    #[test]
    fn predictions_hold_at_small_windows() {
        for n in [2usize, 4, 6] {
            let w = Window::new(n, 1).unwrap();
            for beta in [Vector::zeros(n), half_beta(n)] {
                let mut ids = Vec::new();
                for p in 0..=n {
                    ids.push(ComplexId::DeRham(p));
                    ids.push(ComplexId::TChain(p));
                }
                for p in 1..=n / 2 {
                    ids.push(ComplexId::Fsq(p));
                    ids.push(ComplexId::FsqFund(p));
                }
                for id in ids {
                    let c = compare_with_prediction(id, &beta, &w).unwrap();
                    assert!(c.holds, "{id} N={n} beta={beta}: {:?}", c.rows.iter().find(|r| r.1 != r.2));
                }
            }
        }
    }
}
