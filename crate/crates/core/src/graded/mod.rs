//! Graded modules `F^{α,β}(V) = V ⊗ t^{β} Q[t^{±1}]` restricted to a finite
//! window of degrees.
//!
//! The generator of degree `r` maps the fiber at `k` to the fiber at `k + r`
//! by `c·I + D`, where
//!
//! * H: `c = (bar r | k+β)`, `D` is the action of `r·bar(r)ᵀ`;
//! * W, S: `c = (u | k+β)`, `D` is the action of `r·uᵀ`.
//!
//! The degree operators `d_i` act on the fiber at `k` by `k_i + α_i`; they
//! never change which subspaces are stable, so `α` only appears in reports.

pub(crate) mod engine;

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exterior::{binomial, fundamental_subspace, gl_act_matrix, sym2_act_matrix};
use crate::linalg::{kernel, Matrix, Scalar, Subspace, Vector};
use crate::torus::{bar, degree_ball, AlgebraKind, Degree};
use engine::{Layout, PreparedGen};

/// The `gl_N`-module that every fiber is a copy of.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FiberType {
    /// `Λ^0`, the trivial module.
    Scalar,
    Lambda(usize),
    /// The fundamental subspace of `Λ^p`; ambient coordinates are those of `Λ^p`.
    Fund(usize),
    Sym2,
}

impl FiberType {
    pub fn ambient_dim(&self, n: usize) -> usize {
        match self {
            FiberType::Scalar => 1,
            FiberType::Lambda(p) | FiberType::Fund(p) => binomial(n, *p),
            FiberType::Sym2 => n * (n + 1) / 2,
        }
    }

    /// Exterior degree of the ambient space, if any.
    pub fn exterior_degree(&self) -> Option<usize> {
        match self {
            FiberType::Scalar => Some(0),
            FiberType::Lambda(p) | FiberType::Fund(p) => Some(*p),
            FiberType::Sym2 => None,
        }
    }

    /// Matrix of the derivation action of `a ∈ gl_N` on the ambient space.
    pub fn act_matrix(&self, a: &Matrix) -> Result<Matrix> {
        match self {
            FiberType::Scalar => Ok(Matrix::zeros(1, 1)),
            FiberType::Lambda(p) | FiberType::Fund(p) => gl_act_matrix(a, *p),
            FiberType::Sym2 => sym2_act_matrix(a),
        }
    }

    /// The whole fiber as a subspace of the ambient space.
    pub fn full(&self, n: usize) -> Result<Subspace> {
        match self {
            FiberType::Fund(p) => fundamental_subspace(n, *p),
            other => Ok(Subspace::full(other.ambient_dim(n))),
        }
    }

    fn validate(&self, n: usize) -> Result<()> {
        match self {
            FiberType::Lambda(p) if *p > n => {
                Err(Error::InvalidParameter(format!("Λ^{p} of Q^{n} is zero")))
            }
            FiberType::Fund(_) if !n.is_multiple_of(2) => Err(Error::OddDimension(n)),
            FiberType::Fund(p) if *p > n / 2 => {
                Err(Error::InvalidParameter(format!("fundamental fiber needs p <= {}, got {p}", n / 2)))
            }
            _ => Ok(()),
        }
    }
}

/// Which algebra acts on which fiber, with the twist parameters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionSpec {
    pub kind: AlgebraKind,
    pub n: usize,
    pub fiber: FiberType,
    pub beta: Vector,
    pub alpha: Vector,
}

impl ActionSpec {
    pub fn new(kind: AlgebraKind, n: usize, fiber: FiberType, beta: Vector, alpha: Vector) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("N must be positive".into()));
        }
        if kind == AlgebraKind::H && !n.is_multiple_of(2) {
            return Err(Error::OddDimension(n));
        }
        if beta.len() != n || alpha.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "beta of length {} and alpha of length {} for N = {n}",
                beta.len(),
                alpha.len()
            )));
        }
        fiber.validate(n)?;
        Ok(ActionSpec { kind, n, fiber, beta, alpha })
    }

    /// Same parameters with `α = 0`.
    pub fn untwisted(kind: AlgebraKind, n: usize, fiber: FiberType, beta: Vector) -> Result<Self> {
        Self::new(kind, n, fiber, beta, Vector::zeros(n))
    }

    pub fn with_fiber(&self, fiber: FiberType) -> Result<Self> {
        Self::new(self.kind, self.n, fiber, self.beta.clone(), self.alpha.clone())
    }

    pub fn with_kind(&self, kind: AlgebraKind) -> Result<Self> {
        Self::new(kind, self.n, self.fiber, self.beta.clone(), self.alpha.clone())
    }

    pub fn ambient_dim(&self) -> usize {
        self.fiber.ambient_dim(self.n)
    }

    /// `-β` when `β` is integral: the one degree where `k + β = 0`.
    pub fn special_degree(&self) -> Option<Degree> {
        self.beta.iter().map(|b| b.to_i64().map(|x| -x)).collect::<Option<Vec<_>>>().map(Degree)
    }

    pub fn is_special(&self, k: &Degree) -> bool {
        self.special_degree().is_some_and(|s| &s == k)
    }

    /// `k + β`.
    pub fn shifted(&self, k: &Degree) -> Result<Vector> {
        if k.len() != self.n {
            return Err(Error::InvalidDegree(format!("{k} for N = {}", self.n)));
        }
        k.shifted(&self.beta)
    }
}

/// A homogeneous generator of the acting algebra.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Generator {
    /// `h_r`
    Ham(Degree),
    /// `D(u, r)`
    Field { u: Vector, r: Degree },
}

impl Generator {
    pub fn shift(&self) -> &Degree {
        match self {
            Generator::Ham(r) => r,
            Generator::Field { r, .. } => r,
        }
    }

    /// The vector `a` with scalar part `(a | k+β)`.
    pub fn scalar_coeff(&self) -> Result<Vector> {
        match self {
            Generator::Ham(r) => bar(&r.to_vector()),
            Generator::Field { u, .. } => Ok(u.clone()),
        }
    }

    /// The rank-one matrix whose derivation action is the non-scalar part.
    pub fn rank_one(&self) -> Result<Matrix> {
        match self {
            Generator::Ham(r) => {
                let rv = r.to_vector();
                Ok(Matrix::outer(&rv, &bar(&rv)?))
            }
            Generator::Field { u, r } => Ok(Matrix::outer(&r.to_vector(), u)),
        }
    }

    pub fn label(&self) -> String {
        match self {
            Generator::Ham(r) => format!("h{r}"),
            Generator::Field { u, r } => format!("D({u},{r})"),
        }
    }
}

/// An integral basis of `r^⊥`.
fn integral_orthogonal_basis(r: &Degree) -> Vec<Vector> {
    let row = Matrix::from_rows(&[r.to_vector()]).expect("single row");
    kernel(&row)
        .basis()
        .iter()
        .map(|v| Vector(engine::integerise(v).into_iter().map(Scalar::from).collect()))
        .collect()
}

/// The generators of degrees `0 < max |r_i| <= bound`: `h_r` for H, `D(e_i, r)`
/// for W, and `D(u, r)` with `u` running over an integral basis of `r^⊥` for S.
pub fn generator_set(kind: AlgebraKind, n: usize, bound: i64) -> Result<Vec<Generator>> {
    if bound < 1 {
        return Err(Error::InvalidParameter(format!("generator bound must be positive, got {bound}")));
    }
    if kind == AlgebraKind::H && !n.is_multiple_of(2) {
        return Err(Error::OddDimension(n));
    }
    let mut out = Vec::new();
    for r in degree_ball(n, bound) {
        match kind {
            AlgebraKind::H => out.push(Generator::Ham(r)),
            AlgebraKind::W => {
                for i in 0..n {
                    out.push(Generator::Field { u: Vector::unit(n, i), r: r.clone() });
                }
            }
            AlgebraKind::S => {
                for u in integral_orthogonal_basis(&r) {
                    out.push(Generator::Field { u, r: r.clone() });
                }
            }
        }
    }
    Ok(out)
}

fn check_generator(spec: &ActionSpec, gen: &Generator) -> Result<()> {
    if gen.shift().len() != spec.n {
        return Err(Error::InvalidDegree(format!("generator degree {} for N = {}", gen.shift(), spec.n)));
    }
    match (spec.kind, gen) {
        (AlgebraKind::H, Generator::Ham(_)) => Ok(()),
        (AlgebraKind::W, Generator::Field { u, .. }) if u.len() == spec.n => Ok(()),
        (AlgebraKind::S, Generator::Field { u, r }) if u.len() == spec.n => {
            if u.dot(&r.to_vector())?.is_zero() {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!("S generator needs (u|r) = 0, got u={u} r={r}")))
            }
        }
        _ => Err(Error::InvalidParameter(format!("generator {} does not belong to {}", gen.label(), spec.kind))),
    }
}

/// Matrix of the generator on the fiber at `k`, landing in the fiber at `k + r`.
pub fn fiber_action(spec: &ActionSpec, gen: &Generator, k: &Degree) -> Result<Matrix> {
    check_generator(spec, gen)?;
    let c = gen.scalar_coeff()?.dot(&spec.shifted(k)?)?;
    let d = spec.fiber.act_matrix(&gen.rank_one()?)?;
    Matrix::identity(d.rows()).scale(&c).add(&d)
}

/// Eigenvalue of the degree operator `d_i` on the fiber at `k`.
pub fn d_eigenvalue(spec: &ActionSpec, i: usize, k: &Degree) -> Result<Scalar> {
    if i >= spec.n || k.len() != spec.n {
        return Err(Error::IndexOutOfRange(format!("d_{i} at degree {k} for N = {}", spec.n)));
    }
    Ok(&Scalar::from_int(k.0[i]) + &spec.alpha[i])
}

fn prepare(spec: &ActionSpec, gens: &[Generator]) -> Result<Vec<PreparedGen>> {
    gens.iter()
        .map(|g| {
            check_generator(spec, g)?;
            let a = g.scalar_coeff()?;
            let ab = a.dot(&spec.beta)?;
            let d = spec.fiber.act_matrix(&g.rank_one()?)?;
            let mut l = BigInt::from(1);
            for x in a.iter().chain(std::iter::once(&ab)) {
                l = l.lcm(&x.denom());
            }
            for (_, _, x) in d.nonzeros() {
                l = l.lcm(&x.denom());
            }
            let scale = |x: &Scalar| x.numer() * (&l / x.denom());
            let mut dcols = vec![Vec::new(); d.cols()];
            for (i, j, x) in d.nonzeros() {
                dcols[j].push((i, scale(&x)));
            }
            Ok(PreparedGen {
                shift: g.shift().0.clone(),
                coeff: a.iter().map(scale).collect(),
                cnum: scale(&ab),
                dcols,
            })
        })
        .collect()
}

/// The cube `[-d, d]^N` of degrees, enumerated lexicographically.
#[derive(Clone, Debug)]
pub struct Window {
    layout: Arc<Layout>,
}

impl PartialEq for Window {
    fn eq(&self, other: &Self) -> bool {
        self.n() == other.n() && self.d() == other.d()
    }
}

impl Eq for Window {}

impl Window {
    pub fn new(n: usize, d: i64) -> Result<Self> {
        if d < 0 || n == 0 {
            return Err(Error::InvalidParameter(format!("window needs N > 0 and d >= 0, got N = {n}, d = {d}")));
        }
        if (2 * d + 1).checked_pow(n as u32).is_none_or(|c| c > 5_000_000) {
            return Err(Error::InvalidParameter(format!("window [-{d},{d}]^{n} is too large")));
        }
        Ok(Window { layout: Arc::new(Layout::new(n, d)) })
    }

    pub fn n(&self) -> usize {
        self.layout.n
    }

    pub fn d(&self) -> i64 {
        self.layout.d
    }

    pub fn len(&self) -> usize {
        self.layout.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.layout.coords.is_empty()
    }

    pub fn degree(&self, i: usize) -> Degree {
        Degree(self.layout.coords[i].clone())
    }

    pub fn degrees(&self) -> Vec<Degree> {
        self.layout.coords.iter().map(|c| Degree(c.clone())).collect()
    }

    pub fn index_of(&self, k: &Degree) -> Option<usize> {
        if k.len() != self.n() {
            return None;
        }
        self.layout.index_of(&k.0)
    }

    pub fn contains(&self, k: &Degree) -> bool {
        self.index_of(k).is_some()
    }

    /// Interior degrees are those with `max |k_i| <= d - 1`.
    pub fn is_interior(&self, k: &Degree) -> bool {
        k.len() == self.n() && k.max_abs() < self.d()
    }

    pub(crate) fn layout(&self) -> &Layout {
        &self.layout
    }
}

/// A choice of subspace of the fiber at every degree of a window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedFamily {
    spec: ActionSpec,
    window: Window,
    fibers: Vec<Subspace>,
}

impl GradedFamily {
    pub fn new(spec: ActionSpec, window: Window, fibers: Vec<Subspace>) -> Result<Self> {
        if window.n() != spec.n {
            return Err(Error::DimensionMismatch(format!("window for N = {} with spec for N = {}", window.n(), spec.n)));
        }
        if fibers.len() != window.len() {
            return Err(Error::DimensionMismatch(format!("{} fibers for {} degrees", fibers.len(), window.len())));
        }
        let amb = spec.ambient_dim();
        if let Some(f) = fibers.iter().find(|f| f.ambient_dim() != amb) {
            return Err(Error::DimensionMismatch(format!("fiber in Q^{} where Q^{amb} expected", f.ambient_dim())));
        }
        Ok(GradedFamily { spec, window, fibers })
    }

    pub fn from_fn(spec: ActionSpec, window: Window, mut f: impl FnMut(&Degree) -> Result<Subspace>) -> Result<Self> {
        let fibers = window.degrees().iter().map(&mut f).collect::<Result<Vec<_>>>()?;
        Self::new(spec, window, fibers)
    }

    pub fn spec(&self) -> &ActionSpec {
        &self.spec
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn fibers(&self) -> &[Subspace] {
        &self.fibers
    }

    pub fn fiber(&self, k: &Degree) -> Option<&Subspace> {
        self.window.index_of(k).map(|i| &self.fibers[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (Degree, &Subspace)> {
        self.fibers.iter().enumerate().map(|(i, f)| (self.window.degree(i), f))
    }

    pub fn dims(&self) -> Vec<(Degree, usize)> {
        self.iter().map(|(k, f)| (k, f.dim())).collect()
    }

    /// Replaces the fiber at `k`.
    pub fn with_fiber(&self, k: &Degree, s: Subspace) -> Result<Self> {
        let i = self.window.index_of(k).ok_or_else(|| Error::InvalidDegree(format!("{k} outside window")))?;
        if s.ambient_dim() != self.spec.ambient_dim() {
            return Err(Error::DimensionMismatch("replacement fiber has wrong ambient".into()));
        }
        let mut out = self.clone();
        out.fibers[i] = s;
        Ok(out)
    }

    fn compatible(&self, other: &GradedFamily) -> Result<()> {
        if self.window != other.window || self.spec.ambient_dim() != other.spec.ambient_dim() {
            return Err(Error::DimensionMismatch("families over different windows or fibers".into()));
        }
        Ok(())
    }

    /// Degrees where `other` is not contained in `self`.
    pub fn containment_failures(&self, other: &GradedFamily) -> Result<Vec<Degree>> {
        self.compatible(other)?;
        let mut out = Vec::new();
        for (i, (a, b)) in self.fibers.iter().zip(&other.fibers).enumerate() {
            if !a.contains_subspace(b)? {
                out.push(self.window.degree(i));
            }
        }
        Ok(out)
    }

    /// Fiberwise intersection.
    pub fn intersect(&self, other: &GradedFamily) -> Result<GradedFamily> {
        self.compatible(other)?;
        let fibers = self.fibers.iter().zip(&other.fibers).map(|(a, b)| a.intersect(b)).collect::<Result<Vec<_>>>()?;
        Ok(GradedFamily { spec: self.spec.clone(), window: self.window.clone(), fibers })
    }

    fn integer_bases(&self) -> Vec<Vec<Vec<BigInt>>> {
        self.fibers.iter().map(|f| f.basis().iter().map(engine::integerise).collect()).collect()
    }
}

/// The smallest family stable under `gens` (within the window) that contains
/// the seeds. Images landing outside the window are dropped.
pub fn closure(spec: &ActionSpec, seeds: &[(Degree, Vector)], window: &Window, gens: &[Generator]) -> Result<GradedFamily> {
    Ok(closure_impl(spec, seeds, window, gens, None, &[])?.0)
}

/// As [`closure`], but stops once every fiber has the dimension of the
/// corresponding fiber of `bound`. Only meaningful when the closure is known
/// to lie inside `bound`, e.g. when `bound` is the full fiber family.
pub fn closure_bounded(
    spec: &ActionSpec,
    seeds: &[(Degree, Vector)],
    window: &Window,
    gens: &[Generator],
    bound: &GradedFamily,
) -> Result<GradedFamily> {
    Ok(closure_impl(spec, seeds, window, gens, Some(bound), &[])?.0)
}

/// Runs the closure until some fiber contains one of the reference vectors.
///
/// Closures are monotone: once the closure of the seeds contains a reference
/// vector `u`, it contains the whole closure of `u`. Returns the partial
/// family and the degree of the reference reached, or the complete closure
/// and `None`.
pub fn closure_until(
    spec: &ActionSpec,
    seeds: &[(Degree, Vector)],
    window: &Window,
    gens: &[Generator],
    refs: &[(Degree, Vector)],
) -> Result<(GradedFamily, Option<Degree>)> {
    closure_impl(spec, seeds, window, gens, None, refs)
}

fn closure_impl(
    spec: &ActionSpec,
    seeds: &[(Degree, Vector)],
    window: &Window,
    gens: &[Generator],
    bound: Option<&GradedFamily>,
    refs: &[(Degree, Vector)],
) -> Result<(GradedFamily, Option<Degree>)> {
    if window.n() != spec.n {
        return Err(Error::DimensionMismatch("window and spec disagree on N".into()));
    }
    let dim = spec.ambient_dim();
    let locate = |k: &Degree, v: &Vector, what: &str| -> Result<usize> {
        let i = window.index_of(k).ok_or_else(|| Error::InvalidDegree(format!("{what} degree {k} outside window")))?;
        if v.len() != dim {
            return Err(Error::DimensionMismatch(format!("{what} of length {} in fiber of dimension {dim}", v.len())));
        }
        Ok(i)
    };
    let mut int_seeds = Vec::with_capacity(seeds.len());
    for (k, v) in seeds {
        int_seeds.push((locate(k, v, "seed")?, engine::integerise(v)));
    }
    let mut ref_slots: Vec<Vec<Vec<BigInt>>> = vec![Vec::new(); window.len()];
    for (k, v) in refs {
        let i = locate(k, v, "reference")?;
        if !v.is_zero() {
            ref_slots[i].push(engine::integerise(v));
        }
    }
    let prepared = prepare(spec, gens)?;
    let caps: Option<Vec<usize>> = bound.map(|b| b.fibers.iter().map(Subspace::dim).collect());
    let stop = engine::Stop { caps: caps.as_deref(), refs: if refs.is_empty() { None } else { Some(&ref_slots) } };
    let run = engine::closure(window.layout(), dim, &prepared, &int_seeds, &stop);
    let fibers = run.spans.iter().map(|vs| Subspace::span(dim, vs)).collect::<Result<Vec<_>>>()?;
    let reached = run.reached.map(|i| window.degree(i));
    Ok((GradedFamily::new(spec.clone(), window.clone(), fibers)?, reached))
}

/// A generator moving a family vector out of the family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvarianceWitness {
    pub degree: Degree,
    pub generator: Generator,
}

/// Per-degree outcome of an invariance sweep.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvarianceReport {
    pub holds: bool,
    pub witnesses: Vec<InvarianceWitness>,
    /// `(degree, generators checked, generators skipped)` for each degree.
    pub per_degree: Vec<(Degree, usize, usize)>,
}

impl InvarianceReport {
    pub fn skipped_total(&self) -> usize {
        self.per_degree.iter().map(|(_, _, s)| s).sum()
    }
}

/// Checks that every generator maps each fiber into the target fiber,
/// whenever the target degree lies in the window.
pub fn is_invariant(family: &GradedFamily, gens: &[Generator]) -> Result<InvarianceReport> {
    let prepared = prepare(&family.spec, gens)?;
    let run = engine::sweep(family.window.layout(), &prepared, &family.integer_bases());
    let witnesses: Vec<InvarianceWitness> = run
        .failures
        .iter()
        .map(|&(i, g)| InvarianceWitness { degree: family.window.degree(i), generator: gens[g].clone() })
        .collect();
    let per_degree = (0..family.window.len()).map(|i| (family.window.degree(i), run.checked[i], run.skipped[i])).collect();
    Ok(InvarianceReport { holds: witnesses.is_empty(), witnesses, per_degree })
}

/// Invariance checked directly with rational matrices; slow, used to
/// cross-check the integer sweep.
pub fn is_invariant_exact(family: &GradedFamily, gens: &[Generator]) -> Result<bool> {
    for (k, f) in family.iter() {
        for g in gens {
            let target = k.add(g.shift());
            let Some(tf) = family.fiber(&target) else { continue };
            let img = f.image_under(&fiber_action(&family.spec, g, &k)?)?;
            if !tf.contains_subspace(&img)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec_h4(p: usize, beta: &[i64]) -> ActionSpec {
        ActionSpec::untwisted(AlgebraKind::H, 4, FiberType::Lambda(p), Vector::from_ints(beta)).unwrap()
    }

    #[test]
    fn hamiltonian_action_example() {
        // N = 4, Λ^1, r = e1, k + β = e1: h_r e3 = -e1, scalar part 0
        let spec = spec_h4(1, &[0, 0, 0, 0]);
        let g = Generator::Ham(Degree(vec![1, 0, 0, 0]));
        let m = fiber_action(&spec, &g, &Degree(vec![1, 0, 0, 0])).unwrap();
        let img = m.mul_vec(&Vector::from_ints(&[0, 0, 1, 0])).unwrap();
        assert_eq!(img, Vector::from_ints(&[-1, 0, 0, 0]));
    }

    #[test]
    fn odd_n_rejected_for_h() {
        assert!(ActionSpec::untwisted(AlgebraKind::H, 3, FiberType::Lambda(1), Vector::zeros(3)).is_err());
        assert!(generator_set(AlgebraKind::H, 3, 1).is_err());
    }

    #[test]
    fn generator_counts() {
        assert_eq!(generator_set(AlgebraKind::H, 4, 1).unwrap().len(), 80);
        assert_eq!(generator_set(AlgebraKind::W, 4, 1).unwrap().len(), 320);
        assert_eq!(generator_set(AlgebraKind::S, 4, 1).unwrap().len(), 240);
        for g in generator_set(AlgebraKind::S, 3, 1).unwrap() {
            if let Generator::Field { u, r } = &g {
                assert!(u.dot(&r.to_vector()).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn degree_eigenvalue_uses_alpha() {
        let spec = ActionSpec::new(
            AlgebraKind::H,
            2,
            FiberType::Lambda(1),
            Vector::zeros(2),
            Vector(vec![Scalar::new(1, 3).unwrap(), Scalar::zero()]),
        )
        .unwrap();
        assert_eq!(d_eigenvalue(&spec, 0, &Degree(vec![2, 0])).unwrap(), Scalar::new(7, 3).unwrap());
    }

    #[test]
    fn full_family_is_invariant_and_closure_is_monotone() {
        let spec = spec_h4(1, &[0, 0, 0, 0]);
        let w = Window::new(4, 1).unwrap();
        let gens = generator_set(AlgebraKind::H, 4, 1).unwrap();
        let full = GradedFamily::from_fn(spec.clone(), w.clone(), |_| Ok(Subspace::full(4))).unwrap();
        let rep = is_invariant(&full, &gens).unwrap();
        assert!(rep.holds);
        assert!(rep.skipped_total() > 0);
        let seed = (Degree(vec![1, 0, 0, 0]), Vector::unit(4, 1));
        let c = closure(&spec, &[seed], &w, &gens).unwrap();
        assert!(is_invariant(&c, &gens).unwrap().holds);
        assert!(is_invariant_exact(&c, &gens).unwrap());
    }
}
