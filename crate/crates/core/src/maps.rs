//! Module maps between exterior-power modules and the submodule families
//! they cut out.
//!
//! With `x = k + β` at degree `k`:
//!
//! * `π_p : Λ^p → Λ^{p+1}`, `v ↦ x ∧ v`
//! * `T_p : Λ^p → Λ^{p-1}`, `v_1∧…∧v_p ↦ Σ_i (-1)^i (bar x|v_i) v_1∧…v̂_i…∧v_p`
//! * `θ̃_p : Λ^p → Λ^{p-2}`, the contraction applied fiberwise
//! * `f_p = T_{p+1} ∘ π_p : Λ^p → Λ^p`, the action of `x·bar(x)ᵀ`

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exterior::{ext_basis, fundamental_subspace, sort_with_sign, theta_matrix};
use crate::graded::{ActionSpec, FiberType, Generator, GradedFamily, Window};
use crate::linalg::{image, kernel, Matrix, Scalar, Subspace, Vector};
use crate::torus::{bar, sympl_form, AlgebraKind, Degree};

/// A symplectic frame `(v, w_1, …, w_{N-1})` adapted to a nonzero vector `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frame {
    vectors: Vec<Vector>,
}

impl Frame {
    /// The vector the frame was built from.
    pub fn base(&self) -> &Vector {
        &self.vectors[0]
    }

    /// `w_i` for `1 <= i <= N-1`; `w_0` is the base vector.
    pub fn w(&self, i: usize) -> &Vector {
        &self.vectors[i]
    }

    pub fn vectors(&self) -> &[Vector] {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }
}

/// Projects `u` off the hyperbolic pair `(a, b)` with `(bar a|b) = 1`.
fn project_off(u: &Vector, a: &Vector, b: &Vector) -> Result<Vector> {
    let ca = sympl_form(a, u)?;
    let cb = sympl_form(b, u)?;
    u.axpy(&-&ca, b)?.axpy(&cb, a)
}

/// Extends a nonzero `v` to a symplectic basis with `(bar v|w_1) = 1`,
/// `(bar w_{2i}|w_{2i+1}) = 1` and every other pairing zero.
///
/// `w_1 = e_j / (bar v)_j` for the first `j` with `(bar v)_j != 0`; the
/// standard basis is then projected off each new pair and the next pair is
/// taken from the first surviving vector and its first partner, scaled so
/// the pairing is 1.
pub fn symplectic_extend(v: &Vector) -> Result<Frame> {
    let n = v.len();
    let bv = bar(v)?;
    let j = bv.leading().ok_or(Error::ZeroVector)?;
    let w1 = Vector::unit(n, j).scale(&bv[j].recip()?);
    let mut vectors = vec![v.clone(), w1.clone()];
    let mut rest = (0..n).map(|i| project_off(&Vector::unit(n, i), v, &w1)).collect::<Result<Vec<_>>>()?;
    while let Some(i) = rest.iter().position(|u| !u.is_zero()) {
        let a = rest[i].clone();
        let mut partner = None;
        for u in &rest[i + 1..] {
            let c = sympl_form(&a, u)?;
            if !c.is_zero() {
                partner = Some(u.scale(&c.recip()?));
                break;
            }
        }
        let b = partner.ok_or_else(|| Error::Structural("degenerate symplectic complement".into()))?;
        rest = rest.iter().map(|u| project_off(u, &a, &b)).collect::<Result<Vec<_>>>()?;
        vectors.push(a);
        vectors.push(b);
    }
    if vectors.len() != n {
        return Err(Error::Structural(format!("frame of {} vectors in dimension {n}", vectors.len())));
    }
    Ok(Frame { vectors })
}

/// The module maps between exterior-power modules.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MapId {
    Pi(usize),
    T(usize),
    ThetaTilde(usize),
    F(usize),
}

impl MapId {
    pub fn source_degree(&self) -> usize {
        match *self {
            MapId::Pi(p) | MapId::T(p) | MapId::ThetaTilde(p) | MapId::F(p) => p,
        }
    }

    /// Exterior degree of the target; `None` when the target is zero.
    pub fn target_degree(&self) -> Option<usize> {
        match *self {
            MapId::Pi(p) => Some(p + 1),
            MapId::T(p) => p.checked_sub(1),
            MapId::ThetaTilde(p) => p.checked_sub(2),
            MapId::F(p) => Some(p),
        }
    }
}

impl fmt::Display for MapId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapId::Pi(p) => write!(f, "pi({p})"),
            MapId::T(p) => write!(f, "T({p})"),
            MapId::ThetaTilde(p) => write!(f, "theta({p})"),
            MapId::F(p) => write!(f, "f({p})"),
        }
    }
}

impl FromStr for MapId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let bad = || Error::Parse(format!("unknown map {s:?}"));
        let (name, rest) = t.split_once('(').ok_or_else(bad)?;
        let p: usize = rest.trim_end_matches(')').trim().parse().map_err(|_| bad())?;
        match name.trim() {
            "pi" => Ok(MapId::Pi(p)),
            "T" => Ok(MapId::T(p)),
            "theta" => Ok(MapId::ThetaTilde(p)),
            "f" => Ok(MapId::F(p)),
            _ => Err(bad()),
        }
    }
}

/// `v ↦ x ∧ v` on `Λ^p Q^N`.
pub fn wedge_matrix(x: &Vector, p: usize) -> Result<Matrix> {
    let n = x.len();
    if p > n {
        return Err(Error::InvalidParameter(format!("Λ^{p} of Q^{n} is zero")));
    }
    let src = ext_basis(n, p);
    let dst = ext_basis(n, p + 1);
    let mut entries = Vec::new();
    for (col, m) in src.monomials().iter().enumerate() {
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            let mut idx = Vec::with_capacity(p + 1);
            idx.push(i);
            idx.extend_from_slice(m);
            if let Some(sign) = sort_with_sign(&mut idx) {
                let row = dst.index_of(&idx).expect("sorted");
                entries.push((row, col, xi * &Scalar::from_int(sign)));
            }
        }
    }
    Matrix::from_triplets(dst.len(), src.len(), &entries)
}

/// `T_p` for the vector `x`.
pub fn t_matrix(x: &Vector, p: usize) -> Result<Matrix> {
    let n = x.len();
    if p > n {
        return Err(Error::InvalidParameter(format!("Λ^{p} of Q^{n} is zero")));
    }
    let src = ext_basis(n, p);
    if p == 0 {
        return Ok(Matrix::zeros(0, 1));
    }
    let dst = ext_basis(n, p - 1);
    let bx = bar(x)?;
    let mut entries = Vec::new();
    for (col, m) in src.monomials().iter().enumerate() {
        for (pos, &a) in m.iter().enumerate() {
            let c = &bx[a];
            if c.is_zero() {
                continue;
            }
            // one-based position pos + 1
            let sign = if pos % 2 == 0 { -1 } else { 1 };
            let rest: Vec<usize> = m.iter().enumerate().filter(|&(q, _)| q != pos).map(|(_, &y)| y).collect();
            entries.push((dst.index_of(&rest).expect("sorted"), col, c * &Scalar::from_int(sign)));
        }
    }
    Matrix::from_triplets(dst.len(), src.len(), &entries)
}

/// Matrix of a module map on the fiber at `k`.
pub fn map_matrix(id: MapId, k: &Degree, beta: &Vector) -> Result<Matrix> {
    let n = beta.len();
    if k.len() != n {
        return Err(Error::InvalidDegree(format!("{k} for N = {n}")));
    }
    let x = k.shifted(beta)?;
    match id {
        MapId::Pi(p) => wedge_matrix(&x, p),
        MapId::T(p) => t_matrix(&x, p),
        MapId::ThetaTilde(p) => {
            if p > n {
                return Err(Error::InvalidParameter(format!("Λ^{p} of Q^{n} is zero")));
            }
            if p < 2 {
                return Ok(Matrix::zeros(0, ext_basis(n, p).len()));
            }
            theta_matrix(n, p)
        }
        MapId::F(p) => {
            if p >= n {
                return Err(Error::InvalidParameter(format!("f({p}) needs p < N = {n}")));
            }
            t_matrix(&x, p + 1)?.mul(&wedge_matrix(&x, p)?)
        }
    }
}

/// Outcome of an intertwining check over a window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapReport {
    pub holds: bool,
    /// `(degree, generator label)` of the first failures.
    pub failures: Vec<(Degree, String)>,
    /// `(degree, pairs checked, pairs skipped)`.
    pub per_degree: Vec<(Degree, usize, usize)>,
}

/// Checks `M(k+r)·A_src(k, g) = A_tgt(k, g)·M(k)` for every degree `k` and
/// generator `g` with `k + r` in the window. `src` and `tgt` must share kind,
/// `N` and `β`.
pub fn verify_intertwiner(
    src: &ActionSpec,
    tgt: &ActionSpec,
    window: &Window,
    gens: &[Generator],
    map: impl Fn(&Degree) -> Result<Matrix>,
) -> Result<MapReport> {
    if src.kind != tgt.kind || src.n != tgt.n || src.beta != tgt.beta {
        return Err(Error::InvalidParameter("source and target specs differ beyond the fiber".into()));
    }
    let degrees = window.degrees();
    let maps = degrees.iter().map(&map).collect::<Result<Vec<_>>>()?;
    let mut dsrc = Vec::with_capacity(gens.len());
    let mut dtgt = Vec::with_capacity(gens.len());
    let mut coeffs = Vec::with_capacity(gens.len());
    for g in gens {
        dsrc.push(src.fiber.act_matrix(&g.rank_one()?)?);
        dtgt.push(tgt.fiber.act_matrix(&g.rank_one()?)?);
        coeffs.push(g.scalar_coeff()?);
    }
    // validate the generators against the action once
    if let Some(g) = gens.first() {
        crate::graded::fiber_action(src, g, &degrees[0])?;
    }
    let mut failures = Vec::new();
    let mut per_degree = Vec::with_capacity(degrees.len());
    for (i, k) in degrees.iter().enumerate() {
        let x = src.shifted(k)?;
        let (mut checked, mut skipped) = (0, 0);
        for (gi, g) in gens.iter().enumerate() {
            let Some(j) = window.index_of(&k.add(g.shift())) else {
                skipped += 1;
                continue;
            };
            checked += 1;
            let c = coeffs[gi].dot(&x)?;
            // M(k+r)(cI + D) - (cI + D')M(k) = M(k+r)D - D'M(k) + c(M(k+r) - M(k))
            let mut lhs = maps[j].mul(&dsrc[gi])?.sub(&dtgt[gi].mul(&maps[i])?)?;
            if !c.is_zero() {
                lhs = lhs.add(&maps[j].sub(&maps[i])?.scale(&c))?;
            }
            if !lhs.is_zero() && failures.len() < 16 {
                failures.push((k.clone(), g.label()));
            }
        }
        per_degree.push((k.clone(), checked, skipped));
    }
    Ok(MapReport { holds: failures.is_empty(), failures, per_degree })
}

fn lambda_spec(spec: &ActionSpec, p: usize) -> Result<ActionSpec> {
    spec.with_fiber(if p == 0 { FiberType::Scalar } else { FiberType::Lambda(p) })
}

/// Verifies that a named map intertwines the actions of `gens`.
pub fn verify_module_map(id: MapId, spec: &ActionSpec, window: &Window, gens: &[Generator]) -> Result<MapReport> {
    let needs_h = !matches!(id, MapId::Pi(_));
    if needs_h && spec.kind != AlgebraKind::H {
        return Err(Error::InvalidParameter(format!("{id} is only defined for the Hamiltonian algebra")));
    }
    let p = id.source_degree();
    let q = id.target_degree();
    if p > spec.n || q.is_none_or(|q| q > spec.n) {
        return Err(Error::InvalidParameter(format!("{id} has a zero source or target for N = {}", spec.n)));
    }
    let src = lambda_spec(spec, p)?;
    let tgt = lambda_spec(spec, q.expect("checked"))?;
    verify_intertwiner(&src, &tgt, window, gens, |k| map_matrix(id, k, &spec.beta))
}

/// The four families cut out of `Λ^p` by the maps above.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FamilyKind {
    /// image of `f_p`
    Min,
    /// `x ∧ Λ^{p-1}`
    FullW,
    /// image of `T_{p+1}`
    Int,
    /// kernel of `f_p`
    Max,
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FamilyKind::Min => "min",
            FamilyKind::FullW => "fullw",
            FamilyKind::Int => "int",
            FamilyKind::Max => "max",
        })
    }
}

impl FromStr for FamilyKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "min" => Ok(FamilyKind::Min),
            "fullw" => Ok(FamilyKind::FullW),
            "int" => Ok(FamilyKind::Int),
            "max" => Ok(FamilyKind::Max),
            other => Err(Error::Parse(format!("unknown family {other:?}"))),
        }
    }
}

/// What the family holds at the degree `k = -β` where all maps vanish.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SpecialPolicy {
    /// the zero subspace
    Omit,
    /// the whole fiber
    Full,
}

/// A request for one family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FamilySpec {
    pub kind: FamilyKind,
    pub p: usize,
    /// intersect every fiber with the fundamental subspace
    pub fundamental: bool,
    pub special: SpecialPolicy,
}

impl FamilySpec {
    pub fn new(kind: FamilyKind, p: usize, fundamental: bool) -> Self {
        FamilySpec { kind, p, fundamental, special: SpecialPolicy::Omit }
    }

    pub fn with_special(mut self, special: SpecialPolicy) -> Self {
        self.special = special;
        self
    }

    pub fn fiber(&self) -> FiberType {
        match (self.fundamental, self.p) {
            (true, p) => FiberType::Fund(p),
            (false, 0) => FiberType::Scalar,
            (false, p) => FiberType::Lambda(p),
        }
    }
}

/// The fiber of a family at `x = k + β`, ignoring the special-degree policy.
pub fn family_fiber(kind: FamilyKind, p: usize, x: &Vector) -> Result<Subspace> {
    let n = x.len();
    match kind {
        FamilyKind::Min => Ok(image(&t_matrix(x, p + 1)?.mul(&wedge_matrix(x, p)?)?)),
        FamilyKind::Max => Ok(kernel(&t_matrix(x, p + 1)?.mul(&wedge_matrix(x, p)?)?)),
        FamilyKind::FullW if p == 0 => Ok(Subspace::zero(1)),
        FamilyKind::FullW => Ok(image(&wedge_matrix(x, p - 1)?)),
        FamilyKind::Int => {
            if p >= n {
                return Err(Error::InvalidParameter(format!("int family needs p < N = {n}")));
            }
            Ok(image(&t_matrix(x, p + 1)?))
        }
    }
}

/// Builds a family over the window. `spec` supplies the algebra, `N` and `β`;
/// its fiber is replaced by `Λ^p` or the fundamental subspace of `Λ^p`.
pub fn build_family(fam: &FamilySpec, spec: &ActionSpec, window: &Window) -> Result<GradedFamily> {
    let n = spec.n;
    let p = fam.p;
    if p > n || (fam.kind == FamilyKind::Int && p >= n) {
        return Err(Error::InvalidParameter(format!("{} family is not defined at p = {p} for N = {n}", fam.kind)));
    }
    if (fam.kind == FamilyKind::Min || fam.kind == FamilyKind::Max)
        && p >= n {
            return Err(Error::InvalidParameter(format!("{} family needs p < N", fam.kind)));
        }
    if fam.kind != FamilyKind::FullW && spec.kind != AlgebraKind::H {
        return Err(Error::InvalidParameter(format!("{} family needs the Hamiltonian algebra", fam.kind)));
    }
    let fspec = spec.with_fiber(fam.fiber())?;
    let fund = if fam.fundamental { Some(fundamental_subspace(n, p)?) } else { None };
    let full = fam.fiber().full(n)?;
    GradedFamily::from_fn(fspec, window.clone(), |k| {
        let x = spec.shifted(k)?;
        if x.is_zero() {
            return Ok(match fam.special {
                SpecialPolicy::Omit => Subspace::zero(full.ambient_dim()),
                SpecialPolicy::Full => full.clone(),
            });
        }
        let f = family_fiber(fam.kind, p, &x)?;
        match &fund {
            Some(s) => f.intersect(s),
            None => Ok(f),
        }
    })
}

/// Per-degree `dim outer - dim inner`; fails if `inner ⊄ outer` somewhere.
pub fn quotient_dims(outer: &GradedFamily, inner: &GradedFamily) -> Result<Vec<(Degree, usize)>> {
    let bad = outer.containment_failures(inner)?;
    if let Some(k) = bad.first() {
        return Err(Error::NotInvariant(format!("inner family not contained in outer at degree {k}")));
    }
    Ok(outer.iter().zip(inner.fibers()).map(|((k, o), i)| (k, o.dim() - i.dim())).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::ExtVector;
    use crate::graded::generator_set;
    use crate::torus::rank_one_sym;

    fn v(xs: &[i64]) -> Vector {
        Vector::from_ints(xs)
    }

    fn mono(idx: &[usize]) -> Vector {
        ExtVector::monomial(4, idx).unwrap().to_dense()
    }

    #[test]
    fn frame_of_e1_and_e3() {
        let f = symplectic_extend(&v(&[1, 0, 0, 0])).unwrap();
        assert_eq!(f.vectors(), &[v(&[1, 0, 0, 0]), v(&[0, 0, -1, 0]), v(&[0, 1, 0, 0]), v(&[0, 0, 0, -1])]);
        let g = symplectic_extend(&v(&[0, 0, 1, 0])).unwrap();
        assert_eq!(g.w(1), &v(&[1, 0, 0, 0]));
        assert!(symplectic_extend(&v(&[0, 0, 0, 0])).is_err());
    }

    #[test]
    fn map_examples() {
        let k = Degree(vec![1, 0, 0, 0]);
        let z = Vector::zeros(4);
        // T(1): e3 ↦ 1 at x = e1
        let t1 = map_matrix(MapId::T(1), &k, &z).unwrap();
        assert_eq!(t1.mul_vec(&v(&[0, 0, 1, 0])).unwrap(), v(&[1]));
        // f(1): e3 ↦ -e1
        let f1 = map_matrix(MapId::F(1), &k, &z).unwrap();
        assert_eq!(f1.mul_vec(&v(&[0, 0, 1, 0])).unwrap(), v(&[-1, 0, 0, 0]));
        // π(0): 1 ↦ x
        let p0 = map_matrix(MapId::Pi(0), &k, &z).unwrap();
        assert_eq!(p0.mul_vec(&v(&[1])).unwrap(), v(&[1, 0, 0, 0]));
    }

    #[test]
    fn f_is_derivation_of_rank_one() {
        let x = v(&[1, -2, 0, 3]);
        let k = Degree(vec![1, -2, 0, 3]);
        for p in 0..4 {
            let f = map_matrix(MapId::F(p), &k, &Vector::zeros(4)).unwrap();
            let d = FiberType::Lambda(p).act_matrix(&rank_one_sym(&x).unwrap()).unwrap();
            let d = if p == 0 { Matrix::zeros(1, 1) } else { d };
            assert_eq!(f, d, "p = {p}");
        }
    }

    #[test]
    fn families_at_e1() {
        let x = v(&[1, 0, 0, 0]);
        let min = family_fiber(FamilyKind::Min, 2, &x).unwrap();
        assert_eq!(min, Subspace::span(6, &[mono(&[0, 1]), mono(&[0, 3])]).unwrap());
        let dims: Vec<usize> = [FamilyKind::Min, FamilyKind::FullW, FamilyKind::Int, FamilyKind::Max]
            .iter()
            .map(|&k| family_fiber(k, 2, &x).unwrap().dim())
            .collect();
        assert_eq!(dims, vec![2, 3, 3, 4]);
        let fund = fundamental_subspace(4, 2).unwrap();
        assert_eq!(family_fiber(FamilyKind::Max, 2, &x).unwrap().intersect(&fund).unwrap().dim(), 3);
    }

    #[test]
    fn special_policy() {
        let spec = ActionSpec::untwisted(AlgebraKind::H, 2, FiberType::Lambda(1), Vector::zeros(2)).unwrap();
        let w = Window::new(2, 1).unwrap();
        let z = Degree(vec![0, 0]);
        let omit = build_family(&FamilySpec::new(FamilyKind::Max, 1, false), &spec, &w).unwrap();
        assert_eq!(omit.fiber(&z).unwrap().dim(), 0);
        let full = build_family(&FamilySpec::new(FamilyKind::Max, 1, false).with_special(SpecialPolicy::Full), &spec, &w)
            .unwrap();
        assert_eq!(full.fiber(&z).unwrap().dim(), 2);
    }

    #[test]
    fn sign_flipped_map_fails() {
        let spec = ActionSpec::untwisted(AlgebraKind::H, 4, FiberType::Lambda(2), Vector::zeros(4)).unwrap();
        let w = Window::new(4, 1).unwrap();
        let gens = generator_set(AlgebraKind::H, 4, 1).unwrap();
        let good = verify_module_map(MapId::T(2), &spec, &w, &gens).unwrap();
        assert!(good.holds);
        let tgt = spec.with_fiber(FiberType::Lambda(1)).unwrap();
        let bad = verify_intertwiner(&spec, &tgt, &w, &gens, |k| {
            let mut m = map_matrix(MapId::T(2), k, &spec.beta)?;
            // flip the sign of the first-position term only
            let x = spec.shifted(k)?;
            let bx = bar(&x)?;
            for (col, mono) in ext_basis(4, 2).monomials().iter().enumerate() {
                let row = mono[1];
                m[(row, col)] = &m[(row, col)] + &(&bx[mono[0]] * &Scalar::from_int(2));
            }
            Ok(m)
        })
        .unwrap();
        assert!(!bad.holds);
    }
}
