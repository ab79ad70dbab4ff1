//! Named check procedures over the families, maps and complexes.
//!
//! Each check returns per-degree expected/actual records. Checks built on
//! closures establish necessary consequences inside a finite window and
//! carry a scope note saying so.

mod families;
mod homology;
mod operators;
pub mod oracle;
mod probes;
mod structure;
mod witt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graded::{closure_until, generator_set, ActionSpec, FiberType, Generator, GradedFamily, Window};
use crate::linalg::{Scalar, Subspace, Vector};
use crate::maps::{build_family, FamilyKind, FamilySpec, SpecialPolicy};
use crate::report::{CheckParams, CheckResult, Detail};
use crate::torus::{AlgebraKind, Degree};

pub use oracle::{oracle_fiber_dims, OracleDims};

/// Scope note attached to closure-based checks.
pub const CLOSURE_SCOPE: &str = "supporting evidence at desk scale";

/// Which parameter combinations `check-all` runs a check on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Grid {
    /// `N ∈ {2, 4}`, `β ∈ {0, (1/2, 0, …)}`
    Standard,
    /// `N ∈ {2, 4}`, `β = 0`; the check does not depend on `β`
    BetaFree,
    /// `N = 2`, window 3, both `β`
    Rank2,
}

type RunFn = fn(&mut Ctx) -> Result<Vec<Detail>>;
type PRange = fn(usize) -> Vec<usize>;

/// One catalogue entry.
pub struct Entry {
    pub id: &'static str,
    pub summary: &'static str,
    pub algebra: AlgebraKind,
    /// closure-based: reported with [`CLOSURE_SCOPE`]
    pub probe: bool,
    pub grid: Grid,
    prange: Option<PRange>,
    run: RunFn,
}

impl Entry {
    /// The exterior degrees the check iterates over at rank `n`; empty when
    /// the check takes no `p`.
    pub fn valid_p(&self, n: usize) -> Vec<usize> {
        self.prange.map(|f| f(n)).unwrap_or_default()
    }

    pub fn takes_p(&self) -> bool {
        self.prange.is_some()
    }
}

fn half(n: usize) -> usize {
    n / 2
}

fn p_fund(n: usize) -> Vec<usize> {
    (1..=half(n)).collect()
}

fn p_inner(n: usize) -> Vec<usize> {
    (1..n).collect()
}

fn p_all(n: usize) -> Vec<usize> {
    (0..=n).collect()
}

fn p_fund0(n: usize) -> Vec<usize> {
    (0..=half(n)).collect()
}

fn p_theta(n: usize) -> Vec<usize> {
    (2..=n).collect()
}

macro_rules! entry {
    ($id:literal, $alg:ident, $probe:literal, $grid:ident, $prange:expr, $run:path, $summary:literal) => {
        Entry {
            id: $id,
            summary: $summary,
            algebra: AlgebraKind::$alg,
            probe: $probe,
            grid: Grid::$grid,
            prange: $prange,
            run: $run,
        }
    };
}

static CATALOGUE: &[Entry] = &[
    entry!("fund-dim", H, false, BetaFree, Some(p_fund), structure::fund_dim, "dimension of the fundamental subspace of Λ^p"),
    entry!("theta-iso", H, false, BetaFree, None, structure::theta_iso, "the middle contraction is an isomorphism"),
    entry!("theta-equivariant", H, false, BetaFree, Some(p_theta), structure::theta_equivariant, "contraction commutes with sp_N"),
    entry!("L3-span", H, false, BetaFree, None, structure::l3_span, "span of u·bar(u)ᵀ is sp_N"),
    entry!("J-char", H, false, BetaFree, None, structure::j_char, "quadratic predicate of H holds on Λ^p and fails on Sym²"),
    entry!("LW", W, false, BetaFree, None, structure::lw, "quadratic predicate of W and the span of r·uᵀ"),
    entry!("LS", S, false, BetaFree, None, structure::ls, "quadratic predicate of S and the span of r·uᵀ with (u|r) = 0"),
    entry!("criterion-sym2", H, true, Rank2, None, probes::criterion_sym2, "Sym² module over H_2 is generated by any vector"),
    entry!("submodules", H, false, Standard, Some(p_inner), families::submodules, "the four families are H-invariant"),
    entry!("module-maps", H, false, Standard, None, families::module_maps, "π, T, contraction and f are module maps"),
    entry!("inclusion-chain", H, false, Standard, Some(p_inner), families::inclusion_chain, "inclusions and generic fiber dimensions"),
    entry!("similar", H, false, Standard, Some(p_fund), families::similar, "minimal and wedge-image families agree on Fund"),
    entry!("JH-quotient", H, false, Standard, Some(p_inner), families::jh_quotient, "full over maximal is the minimal family"),
    entry!("equality-quotients", H, false, Standard, Some(p_inner), families::equality_quotients, "quotients of the wedge-image family"),
    entry!("int-quotients", H, false, Standard, Some(p_inner), families::int_quotients, "quotients of the intermediate family"),
    entry!("int-kernel", H, false, Standard, Some(p_fund), families::int_kernel, "intermediate family on Fund is a kernel"),
    entry!("int-min-quotient", H, false, Standard, Some(p_fund), families::int_min_quotient, "intermediate over minimal on Fund"),
    entry!("equal", H, false, Standard, None, families::equal, "coincidences at the two ends of the fundamental range"),
    entry!("composition", H, false, Standard, Some(p_fund), families::composition, "composition factors of the fundamental modules"),
    entry!("cor-p0", H, true, Standard, None, probes::cor_p0, "the scalar module"),
    entry!("irreducible-min", H, true, Standard, Some(p_fund), probes::irreducible_min, "minimal family is generated by each of its vectors"),
    entry!("uniqueness", H, true, Standard, Some(p_fund), probes::uniqueness, "every submodule contains the minimal family"),
    entry!("generation", H, true, Standard, Some(p_fund), probes::generation, "vectors outside the maximal family generate everything"),
    entry!("between", H, true, Standard, Some(p_fund), probes::between, "invariant operators map the maximal family into the intermediate one"),
    entry!("main-classification", H, true, Standard, Some(p_fund0), probes::main_classification, "every submodule is one of the families"),
    entry!("invariant-ops", H, false, Standard, Some(p_inner), operators::invariant_ops, "degree-preserving operators preserve the families"),
    entry!("restricted", H, false, Standard, Some(p_inner), operators::restricted, "the fiber algebra sp_{N-2}"),
    entry!("derham", H, false, Standard, Some(p_all), homology::derham, "de Rham and contraction complexes"),
    entry!("fsq-homology", H, false, Standard, Some(p_fund), homology::fsq, "homology of the square complex"),
    entry!("fsq-fund-homology", H, false, Standard, Some(p_fund), homology::fsq_fund, "homology of the square complex on Fund"),
    entry!("TW", W, true, Rank2, None, probes::tw, "Sym² module over W_2 is generated by any vector"),
    entry!("TS", S, true, Rank2, None, probes::ts, "Sym² module over S_2 is generated by any vector"),
    entry!("invariances-W", W, false, Standard, Some(p_inner), witt::invariances, "degree-preserving operators of W"),
    entry!("restrict-W", W, false, Standard, Some(p_inner), witt::restrict, "the fiber algebra gl_{N-1}"),
    entry!("unique-W", W, true, Standard, Some(p_all), witt::unique, "every W-submodule contains the wedge-image family"),
    entry!("classify-W", W, true, Standard, Some(p_all), witt::classify, "W-submodules of the exterior-power modules"),
];

/// Every check, in report order.
pub fn catalogue() -> &'static [Entry] {
    CATALOGUE
}

pub fn entry(id: &str) -> Option<&'static Entry> {
    CATALOGUE.iter().find(|e| e.id == id)
}

/// FNV-1a, to derive a per-check random stream from the run seed.
fn fnv(s: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in s.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h
}

/// State shared by the parts of one check run.
pub(crate) struct Ctx<'a> {
    pub params: &'a CheckParams,
    pub entry: &'a Entry,
    pub window: Window,
    pub rng: ChaCha8Rng,
}

impl Ctx<'_> {
    pub fn n(&self) -> usize {
        self.params.n
    }

    pub fn half(&self) -> usize {
        self.params.n / 2
    }

    pub fn beta(&self) -> &Vector {
        &self.params.beta
    }

    pub fn beta_integral(&self) -> bool {
        self.params.beta.iter().all(Scalar::is_integer)
    }

    /// The degrees `p` to run over: the requested one or the whole range.
    pub fn ps(&self) -> Vec<usize> {
        match self.params.p {
            Some(p) => vec![p],
            None => self.entry.valid_p(self.params.n),
        }
    }

    pub fn spec(&self, kind: AlgebraKind, fiber: FiberType) -> Result<ActionSpec> {
        ActionSpec::new(kind, self.params.n, fiber, self.params.beta.clone(), self.params.alpha.clone())
    }

    pub fn gens(&self, kind: AlgebraKind) -> Result<Vec<Generator>> {
        generator_set(kind, self.params.n, self.params.rbound)
    }

    /// The degree `-β` when it lies in the window.
    pub fn special(&self) -> Option<Degree> {
        let s = self.spec(AlgebraKind::W, FiberType::Scalar).ok()?.special_degree()?;
        self.window.contains(&s).then_some(s)
    }

    pub fn is_special(&self, k: &Degree) -> bool {
        self.special().is_some_and(|s| &s == k)
    }

    /// Interior degrees other than `-β`.
    pub fn generic_interior(&self) -> Vec<Degree> {
        self.window.degrees().into_iter().filter(|k| self.window.is_interior(k) && !self.is_special(k)).collect()
    }

    pub fn family(&self, kind: FamilyKind, p: usize, fund: bool, special: SpecialPolicy) -> Result<GradedFamily> {
        let spec = self.spec(AlgebraKind::H, FiberType::Scalar)?;
        build_family(&FamilySpec::new(kind, p, fund).with_special(special), &spec, &self.window)
    }

    /// A random combination of the basis with coefficients in `[-3, 3]`;
    /// `None` for the zero subspace.
    pub fn random_in(&mut self, s: &Subspace) -> Option<Vector> {
        if s.is_zero() {
            return None;
        }
        loop {
            let mut v = Vector::zeros(s.ambient_dim());
            for b in s.basis() {
                let c = Scalar::from_int(self.rng.gen_range(-3..=3));
                v = v.axpy(&c, b).expect("same ambient");
            }
            if !v.is_zero() {
                return Some(v);
            }
        }
    }

    /// A random vector of `outer` outside `inner`; `None` if `inner ⊇ outer`.
    pub fn random_outside(&mut self, outer: &Subspace, inner: &Subspace) -> Result<Option<Vector>> {
        if inner.contains_subspace(outer)? {
            return Ok(None);
        }
        loop {
            let v = self.random_in(outer).expect("outer is nonzero");
            if !inner.contains(&v)? {
                return Ok(Some(v));
            }
        }
    }

    pub fn pick<'b, T>(&mut self, xs: &'b [T]) -> &'b T {
        &xs[self.rng.gen_range(0..xs.len())]
    }
}

/// Closure probes against a fixed target family.
///
/// A seed is covered when its closure contains the target on every generic
/// interior fiber. Covered seeds become references: once a later closure
/// reaches a reference it contains that reference's closure, so it is
/// covered too and the run stops early.
pub(crate) struct Prober<'a> {
    spec: &'a ActionSpec,
    window: &'a Window,
    gens: &'a [Generator],
    target: &'a GradedFamily,
    special: Option<Degree>,
    refs: Vec<(Degree, Vector)>,
}

impl<'a> Prober<'a> {
    pub fn new(spec: &'a ActionSpec, gens: &'a [Generator], target: &'a GradedFamily) -> Self {
        let window = target.window();
        let special = spec.special_degree().filter(|s| window.contains(s));
        Prober { spec, window, gens, target, special, refs: Vec::new() }
    }

    /// Also require the `-β` fiber to be covered.
    pub fn with_special(mut self) -> Self {
        self.special = None;
        self
    }

    /// `None` when covered, otherwise the first interior degree where the
    /// closure misses part of the target.
    pub fn covers(&mut self, k: &Degree, v: &Vector) -> Result<Option<Degree>> {
        let seeds = [(k.clone(), v.clone())];
        let (closure, reached) = closure_until(self.spec, &seeds, self.window, self.gens, &self.refs)?;
        if reached.is_some() {
            return Ok(None);
        }
        for (d, t) in self.target.iter() {
            if !self.window.is_interior(&d) || self.special.as_ref() == Some(&d) {
                continue;
            }
            let c = closure.fiber(&d).expect("same window");
            if !c.contains_subspace(t)? {
                return Ok(Some(d));
            }
        }
        self.refs.push((k.clone(), v.clone()));
        Ok(None)
    }
}

fn validate(entry: &Entry, params: &CheckParams) -> Result<()> {
    let n = params.n;
    if n == 0 {
        return Err(Error::InvalidParameter("N must be positive".into()));
    }
    if entry.algebra == AlgebraKind::H && !n.is_multiple_of(2) {
        return Err(Error::OddDimension(n));
    }
    if params.beta.len() != n || params.alpha.len() != n {
        return Err(Error::DimensionMismatch(format!("beta and alpha need {n} entries")));
    }
    if params.window < 0 || params.rbound < 1 {
        return Err(Error::InvalidParameter("window must be >= 0 and rbound >= 1".into()));
    }
    if let Some(p) = params.p {
        if entry.takes_p() && !entry.valid_p(n).contains(&p) {
            return Err(Error::InvalidParameter(format!("check {} is not defined at p = {p} for N = {n}", entry.id)));
        }
    }
    Ok(())
}

/// Runs one check. Invalid parameters are errors; failures met while
/// running become FAIL records.
pub fn run_check(id: &str, params: &CheckParams) -> Result<CheckResult> {
    let entry = entry(id).ok_or_else(|| Error::UnknownCheck(id.to_string()))?;
    validate(entry, params)?;
    let mut ctx = Ctx {
        params,
        entry,
        window: Window::new(params.n, params.window)?,
        rng: ChaCha8Rng::seed_from_u64(params.seed ^ fnv(id)),
    };
    let details = if entry.takes_p() && ctx.ps().is_empty() {
        vec![Detail::skipped(format!("no valid p for N = {}", params.n))]
    } else {
        match (entry.run)(&mut ctx) {
            Ok(d) => d,
            Err(e) => vec![Detail::compare(None, "completed", format!("error: {e}"), "check aborted")],
        }
    };
    let result = CheckResult::new(id, params.clone(), details);
    Ok(if entry.probe { result.with_scope(CLOSURE_SCOPE) } else { result })
}

/// The `check-all` parameter grid, in report order. `base` supplies the
/// window, generator bound, seed and sample count.
pub fn default_grid(base: &CheckParams) -> Vec<(&'static str, CheckParams)> {
    let mut out = Vec::new();
    for e in CATALOGUE {
        let (ns, window): (&[usize], i64) = match e.grid {
            Grid::Standard | Grid::BetaFree => (&[2, 4], base.window),
            Grid::Rank2 => (&[2], base.window.max(3)),
        };
        for &n in ns {
            let betas = match e.grid {
                Grid::BetaFree => vec![Vector::zeros(n)],
                _ => vec![Vector::zeros(n), CheckParams::half_beta(n)],
            };
            for beta in betas {
                let params = CheckParams {
                    n,
                    p: None,
                    beta,
                    alpha: Vector::zeros(n),
                    window,
                    rbound: base.rbound,
                    seed: base.seed,
                    samples: base.samples,
                };
                out.push((e.id, params));
            }
        }
    }
    out
}

/// Runs the whole grid; results keep grid order.
pub fn check_all(base: &CheckParams) -> Result<Vec<CheckResult>> {
    default_grid(base).par_iter().map(|(id, params)| run_check(id, params)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalogue_ids_are_unique() {
        let mut ids: Vec<&str> = CATALOGUE.iter().map(|e| e.id).collect();
        ids.sort_unstable();
        let len = ids.len();
        ids.dedup();
        assert_eq!(ids.len(), len);
    }

    #[test]
    fn unknown_and_invalid() {
        let p = CheckParams::new(4);
        assert_eq!(run_check("nope", &p).unwrap_err(), Error::UnknownCheck("nope".into()));
        assert!(matches!(run_check("composition", &CheckParams::new(3)), Err(Error::OddDimension(3))));
        assert!(run_check("composition", &p.clone().with_p(3)).is_err());
    }

    #[test]
    fn prober_covers_minimal_family() {
        let params = CheckParams::new(4).with_window(2);
        let window = Window::new(4, 2).unwrap();
        let spec = ActionSpec::untwisted(AlgebraKind::H, 4, FiberType::Fund(1), params.beta.clone()).unwrap();
        let gens = generator_set(AlgebraKind::H, 4, 1).unwrap();
        let min = build_family(&FamilySpec::new(FamilyKind::Min, 1, true), &spec, &window).unwrap();
        let mut prober = Prober::new(&spec, &gens, &min);
        // the minimal fiber at -β is zero, so take a neighbour
        let k1 = Degree(vec![1, 0, 0, 0]);
        let v = min.fiber(&k1).unwrap().basis()[0].clone();
        assert_eq!(prober.covers(&k1, &v).unwrap(), None);
        assert_eq!(prober.refs.len(), 1);
        assert_eq!(prober.covers(&k1, &v).unwrap(), None);
    }
}
