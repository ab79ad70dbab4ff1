//! Degree-preserving operators built from pairs of generators, and the small
//! Lie algebras they generate on a single fiber.
//!
//! With `x = k + β`:
//!
//! * H: `T_{r,s} = (bar x|r) s - (bar x|s) r` and `Ω_{r,s} = T·bar(T)ᵀ`
//! * W: `T_{r,s} = (x|r) s - (x|s) r` and `Ω_{r,s,u,v} = T_{r,s}·T_{u,v}ᵀ`

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graded::{FiberType, GradedFamily, Window};
use crate::linalg::{restricted_kernel, Matrix, Scalar, Subspace, Vector};
use crate::maps::{symplectic_extend, Frame};
use crate::torus::{bar, degree_ball, sympl_form, AlgebraKind, Degree};

/// `T_{r,s}` at degree `k`.
pub fn invariant_vec(kind: AlgebraKind, k: &Degree, beta: &Vector, r: &Vector, s: &Vector) -> Result<Vector> {
    let x = k.shifted(beta)?;
    let (cr, cs) = match kind {
        AlgebraKind::H => (sympl_form(&x, r)?, sympl_form(&x, s)?),
        AlgebraKind::W => (x.dot(r)?, x.dot(s)?),
        AlgebraKind::S => return Err(Error::InvalidParameter("no invariant operators are defined for S".into())),
    };
    s.scale(&cr).sub(&r.scale(&cs))
}

/// Parameters of an invariant operator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OmegaParams {
    /// H: `(r, s)`
    Pair(Vector, Vector),
    /// W: `(r, s, u, v)`
    Quad(Vector, Vector, Vector, Vector),
}

/// `Ω` at degree `k` as an `N × N` matrix.
pub fn omega_op(kind: AlgebraKind, k: &Degree, beta: &Vector, params: &OmegaParams) -> Result<Matrix> {
    match (kind, params) {
        (AlgebraKind::H, OmegaParams::Pair(r, s)) => {
            let t = invariant_vec(kind, k, beta, r, s)?;
            Ok(Matrix::outer(&t, &bar(&t)?))
        }
        (AlgebraKind::W, OmegaParams::Quad(r, s, u, v)) => {
            let a = invariant_vec(kind, k, beta, r, s)?;
            let b = invariant_vec(kind, k, beta, u, v)?;
            Ok(Matrix::outer(&a, &b))
        }
        _ => Err(Error::InvalidParameter(format!("operator parameters do not match algebra {kind}"))),
    }
}

/// A Lie algebra of `N × N` matrices attached to one fiber.
#[derive(Clone, Debug)]
pub struct SmallAlgebra {
    pub kind: AlgebraKind,
    /// the vectors the generators are built from
    pub frame: Vec<Vector>,
    pub generators: Vec<Matrix>,
    /// a basis of the span of the generators
    pub basis: Vec<Matrix>,
    /// commuting, diagonalisable elements
    pub cartan: Vec<Matrix>,
}

impl SmallAlgebra {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Whether the span of the generators is closed under commutators.
    pub fn is_closed(&self) -> Result<bool> {
        let n = self.frame.first().map_or(0, Vector::len);
        let span = matrix_span(n, &self.basis)?;
        for a in &self.basis {
            for b in &self.basis {
                if !span.contains(&a.commutator(b)?.flatten())? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

fn matrix_span(n: usize, ms: &[Matrix]) -> Result<Subspace> {
    let flat: Vec<Vector> = ms.iter().map(Matrix::flatten).collect();
    Subspace::span(n * n, &flat)
}

fn unflatten(n: usize, v: &Vector) -> Result<Matrix> {
    let rows: Vec<Vector> = (0..n).map(|i| Vector(v.0[i * n..(i + 1) * n].to_vec())).collect();
    Matrix::from_rows(&rows)
}

fn basis_of(n: usize, ms: &[Matrix]) -> Result<Vec<Matrix>> {
    matrix_span(n, ms)?.basis().iter().map(|v| unflatten(n, v)).collect()
}

/// Gram-Schmidt basis of `{x}^⊥` for the standard form.
pub fn orthogonal_complement_frame(x: &Vector) -> Result<Vec<Vector>> {
    if x.is_zero() {
        return Err(Error::ZeroVector);
    }
    let n = x.len();
    let mut done: Vec<Vector> = vec![x.clone()];
    for i in 0..n {
        let mut u = Vector::unit(n, i);
        for q in &done {
            let c = u.dot(q)?.checked_div(&q.dot(q)?)?;
            u = u.axpy(&-&c, q)?;
        }
        if !u.is_zero() {
            done.push(u);
        }
    }
    Ok(done.split_off(1))
}

/// The algebra acting on the fiber at `x = k + β`:
///
/// * H: spanned by `y·bar(y)ᵀ` for `y ∈ {w_i, w_i + w_j : 2 <= i < j <= N-1}`
///   of the symplectic frame of `x`, a copy of `sp_{N-2}`;
/// * W: spanned by `v_i·v_jᵀ` over an orthogonal basis of `{x}^⊥`, a copy of
///   `gl_{N-1}`.
pub fn small_algebra(kind: AlgebraKind, x: &Vector) -> Result<SmallAlgebra> {
    let n = x.len();
    match kind {
        AlgebraKind::H => {
            let frame: Frame = symplectic_extend(x)?;
            let inner: Vec<&Vector> = (2..n).map(|i| frame.w(i)).collect();
            let mut gens = Vec::new();
            for (a, wa) in inner.iter().enumerate() {
                gens.push(Matrix::outer(wa, &bar(wa)?));
                for wb in &inner[a + 1..] {
                    let y = wa.add(wb)?;
                    gens.push(Matrix::outer(&y, &bar(&y)?));
                }
            }
            let mut cartan = Vec::new();
            for i in 1..n / 2 {
                let (a, b) = (frame.w(2 * i), frame.w(2 * i + 1));
                cartan.push(Matrix::outer(a, &bar(b)?).add(&Matrix::outer(b, &bar(a)?))?);
            }
            let basis = basis_of(n, &gens)?;
            Ok(SmallAlgebra { kind, frame: frame.vectors().to_vec(), generators: gens, basis, cartan })
        }
        AlgebraKind::W => {
            let vs = orthogonal_complement_frame(x)?;
            let mut gens = Vec::new();
            for a in &vs {
                for b in &vs {
                    gens.push(Matrix::outer(a, b));
                }
            }
            let cartan = vs.iter().map(|a| Matrix::outer(a, a)).collect();
            let basis = basis_of(n, &gens)?;
            let mut frame = vec![x.clone()];
            frame.extend(vs);
            Ok(SmallAlgebra { kind, frame, generators: gens, basis, cartan })
        }
        AlgebraKind::S => Err(Error::InvalidParameter("no small algebra is defined for S".into())),
    }
}

/// Normalises a nonzero vector so its first nonzero entry is 1.
fn projective_key(v: &Vector) -> Option<Vector> {
    let i = v.leading()?;
    let c = v[i].recip().ok()?;
    Some(v.scale(&c))
}

/// A basis of the span of all `Ω` at degree `k` with parameters drawn from
/// the degree ball of radius `bound`, plus (for H) the frame operators
/// `y·bar(y)ᵀ` for frame vectors `y` with `(bar x|y) = 0`.
pub fn operator_basis(kind: AlgebraKind, k: &Degree, beta: &Vector, bound: i64) -> Result<Vec<Matrix>> {
    let n = beta.len();
    let x = k.shifted(beta)?;
    if x.is_zero() {
        return Ok(Vec::new());
    }
    let ball: Vec<Vector> = degree_ball(n, bound).iter().map(Degree::to_vector).collect();
    let mut ts: BTreeSet<Vector> = BTreeSet::new();
    for (i, r) in ball.iter().enumerate() {
        for s in &ball[i + 1..] {
            if let Some(t) = projective_key(&invariant_vec(kind, k, beta, r, s)?) {
                ts.insert(t);
            }
        }
    }
    let ts: Vec<Vector> = ts.into_iter().collect();
    let mut ops = Vec::new();
    match kind {
        AlgebraKind::H => {
            for t in &ts {
                ops.push(Matrix::outer(t, &bar(t)?));
            }
            let frame = symplectic_extend(&x)?;
            for y in frame.vectors() {
                if sympl_form(&x, y)?.is_zero() {
                    ops.push(Matrix::outer(y, &bar(y)?));
                }
            }
        }
        AlgebraKind::W => {
            // Ω is bilinear in the two invariant vectors, so a basis of their
            // span gives a spanning set of all operators.
            let span = Subspace::span(n, &ts)?;
            for a in span.basis() {
                for b in span.basis() {
                    ops.push(Matrix::outer(a, b));
                }
            }
        }
        AlgebraKind::S => return Err(Error::InvalidParameter("no invariant operators are defined for S".into())),
    }
    basis_of(n, &ops)
}

/// Per-degree outcome of an operator-invariance sweep.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorInvariance {
    pub holds: bool,
    /// `(degree, number of basis operators, preserved)`
    pub per_degree: Vec<(Degree, usize, bool)>,
}

fn preserves(fiber: FiberType, ops: &[Matrix], s: &Subspace) -> Result<bool> {
    for a in ops {
        let m = fiber.act_matrix(a)?;
        if !s.contains_subspace(&s.image_under(&m)?)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Checks that every fiber of the family is preserved by the invariant
/// operators at its degree. Invariance is linear in the operator, so a basis
/// of their span is checked.
pub fn invariance_report(family: &GradedFamily, kind: AlgebraKind, bound: i64) -> Result<OperatorInvariance> {
    let table = operator_table(kind, &family.spec().beta, family.window(), bound)?;
    invariance_report_with(family, &table)
}

/// [`operator_basis`] at every degree of the window, in window order.
pub fn operator_table(kind: AlgebraKind, beta: &Vector, window: &Window, bound: i64) -> Result<Vec<Vec<Matrix>>> {
    window.degrees().par_iter().map(|k| operator_basis(kind, k, beta, bound)).collect()
}

/// [`invariance_report`] with operators precomputed by [`operator_table`].
pub fn invariance_report_with(family: &GradedFamily, table: &[Vec<Matrix>]) -> Result<OperatorInvariance> {
    if table.len() != family.window().len() {
        return Err(Error::DimensionMismatch("operator table and window differ in size".into()));
    }
    let fiber = family.spec().fiber;
    let per_degree = family
        .fibers()
        .par_iter()
        .zip(table.par_iter())
        .enumerate()
        .map(|(i, (f, ops))| Ok((family.window().degree(i), ops.len(), preserves(fiber, ops, f)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(OperatorInvariance { holds: per_degree.iter().all(|d| d.2), per_degree })
}

/// Whether the small algebra at each degree preserves the family's fiber.
pub fn small_algebra_report(family: &GradedFamily, kind: AlgebraKind) -> Result<OperatorInvariance> {
    let spec = family.spec();
    let mut per_degree = Vec::new();
    let mut holds = true;
    for (k, f) in family.iter() {
        let x = spec.shifted(&k)?;
        if x.is_zero() {
            per_degree.push((k, 0, true));
            continue;
        }
        let alg = small_algebra(kind, &x)?;
        let ok = preserves(spec.fiber, &alg.basis, f)?;
        holds &= ok;
        per_degree.push((k, alg.dim(), ok));
    }
    Ok(OperatorInvariance { holds, per_degree })
}

/// Eigenvalue of `a` on `v`, if `v` is an eigenvector.
fn eigenvalue(a: &Matrix, v: &Vector) -> Result<Option<Scalar>> {
    let av = a.mul_vec(v)?;
    let i = v.leading().ok_or(Error::ZeroVector)?;
    let c = av[i].checked_div(&v[i])?;
    Ok(if av == v.scale(&c) { Some(c) } else { None })
}

/// Splits `s` into simultaneous eigenspaces of the Cartan elements acting on
/// the exterior-power fiber. Weights are listed in increasing lexicographic
/// order. Fails if `s` is not stable under the Cartan elements.
pub fn weight_decompose(alg: &SmallAlgebra, fiber: FiberType, s: &Subspace) -> Result<Vec<(Vec<Scalar>, Subspace)>> {
    let p = fiber.exterior_degree().ok_or_else(|| Error::InvalidParameter("weights need an exterior-power fiber".into()))?;
    let mats = alg.cartan.iter().map(|h| fiber.act_matrix(h)).collect::<Result<Vec<_>>>()?;
    for m in &mats {
        if !s.contains_subspace(&s.image_under(m)?)? {
            return Err(Error::NotInvariant("subspace is not stable under the Cartan elements".into()));
        }
    }
    // Weights of the frame vectors on Q^N.
    let mut frame_weights = Vec::new();
    for v in &alg.frame {
        let mut w = Vec::new();
        for h in &alg.cartan {
            w.push(eigenvalue(h, v)?.ok_or_else(|| Error::Structural("frame vector is not a Cartan eigenvector".into()))?);
        }
        frame_weights.push(w);
    }
    // Candidate weights on Λ^p are sums over p-subsets of frame weights.
    let mut candidates: BTreeSet<Vec<Scalar>> = BTreeSet::new();
    let l = alg.cartan.len();
    let basis = crate::exterior::ext_basis(frame_weights.len(), p);
    for m in basis.monomials() {
        let mut w = vec![Scalar::zero(); l];
        for &i in m {
            for (acc, x) in w.iter_mut().zip(&frame_weights[i]) {
                *acc = &*acc + x;
            }
        }
        candidates.insert(w);
    }
    let amb = s.ambient_dim();
    let mut out = Vec::new();
    let mut total = 0;
    for w in candidates {
        let mut space = s.clone();
        for (m, c) in mats.iter().zip(&w) {
            let shifted = m.sub(&Matrix::identity(amb).scale(c))?;
            space = restricted_kernel(&shifted, &space)?;
            if space.is_zero() {
                break;
            }
        }
        if !space.is_zero() {
            total += space.dim();
            out.push((w, space));
        }
    }
    if total != s.dim() {
        return Err(Error::Structural(format!("weight spaces span {total} of {} dimensions", s.dim())));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> Vector {
        Vector::from_ints(xs)
    }

    #[test]
    fn invariant_vec_example() {
        let t = invariant_vec(AlgebraKind::H, &Degree(vec![1, 0, 0, 0]), &Vector::zeros(4), &v(&[0, 0, 1, 0]), &v(&[0, 1, 0, 0]))
            .unwrap();
        assert_eq!(t, v(&[0, -1, 0, 0]));
        let om = omega_op(
            AlgebraKind::H,
            &Degree(vec![1, 0, 0, 0]),
            &Vector::zeros(4),
            &OmegaParams::Pair(v(&[0, 0, 1, 0]), v(&[0, 1, 0, 0])),
        )
        .unwrap();
        assert_eq!(om, Matrix::unit(4, 1, 3).scale(&Scalar::from_int(-1)));
    }

    #[test]
    fn small_algebra_at_e1() {
        let alg = small_algebra(AlgebraKind::H, &v(&[1, 0, 0, 0])).unwrap();
        assert_eq!(alg.dim(), 3);
        assert!(alg.is_closed().unwrap());
        let h = &alg.cartan[0];
        assert_eq!(h, &Matrix::unit(4, 3, 3).sub(&Matrix::unit(4, 1, 1)).unwrap());
        let ws = weight_decompose(&alg, FiberType::Lambda(1), &Subspace::full(4)).unwrap();
        let dims: Vec<(String, usize)> = ws.iter().map(|(w, s)| (w[0].to_string(), s.dim())).collect();
        assert_eq!(dims, vec![("-1".into(), 1), ("0".into(), 2), ("1".into(), 1)]);
        for y in alg.frame.iter().take(2) {
            for g in &alg.generators {
                assert!(g.mul_vec(y).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn gl_small_algebra_dim() {
        let alg = small_algebra(AlgebraKind::W, &v(&[1, 2, 0])).unwrap();
        assert_eq!(alg.dim(), 4);
        assert!(alg.is_closed().unwrap());
    }

    #[test]
    fn weight_decompose_rejects_unstable() {
        let alg = small_algebra(AlgebraKind::H, &v(&[1, 0, 0, 0])).unwrap();
        let s = Subspace::span(4, &[v(&[0, 1, 0, 1])]).unwrap();
        assert!(weight_decompose(&alg, FiberType::Lambda(1), &s).is_err());
    }
}
