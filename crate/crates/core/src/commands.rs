//! The non-check subcommands: fiber dimensions, single closures, homology
//! tables and symplectic frames.

use crate::cli::{Command, RunConfig};
use crate::complexes::compare_with_prediction;
use crate::error::{Error, Result};
use crate::exterior::{ext_basis, fundamental_subspace};
use crate::graded::{closure, generator_set, ActionSpec, FiberType, GradedFamily, Window};
use crate::invariant::small_algebra;
use crate::linalg::{Matrix, Scalar, Subspace, Vector};
use crate::maps::{build_family, family_fiber, symplectic_extend, FamilyKind, FamilySpec, SpecialPolicy};
use crate::registry::{self, oracle_fiber_dims, CLOSURE_SCOPE};
use crate::report::{Cell, CheckParams, CheckResult, Detail, Status};
use crate::torus::{sympl_form, AlgebraKind, Degree};

impl RunConfig {
    /// Parameters for a single check.
    pub fn check_params(&self) -> CheckParams {
        CheckParams {
            n: self.n,
            p: self.p,
            beta: self.beta.clone(),
            alpha: self.alpha.clone(),
            window: self.window,
            rbound: self.rbound,
            seed: self.seed,
            samples: self.samples,
        }
    }
}

/// Runs the configured command. Parameter errors are returned as errors.
pub fn execute(config: &RunConfig) -> Result<Vec<CheckResult>> {
    let params = config.check_params();
    match &config.command {
        Command::Check { id } => Ok(vec![registry::run_check(id, &params)?]),
        Command::CheckAll => registry::check_all(&params),
        Command::Dims => Ok(vec![dims(&params)?]),
        Command::Closure { seed_fiber, seed_index } => Ok(vec![closure_report(config, seed_fiber, *seed_index)?]),
        Command::Homology { complex } => {
            let window = Window::new(params.n, params.window)?;
            let c = compare_with_prediction(*complex, &params.beta, &window)?;
            let details = c
                .rows
                .iter()
                .map(|(k, want, got)| {
                    let note = if c.special.as_ref() == Some(k) { "special fiber" } else { "" };
                    Detail::compare(Some(k), *want, *got, note)
                })
                .collect();
            Ok(vec![CheckResult::new(&format!("homology {complex}"), params, details)])
        }
        Command::Frame { vector } => Ok(vec![frame(&params, vector)?]),
    }
}

fn observation(k: &Degree, actual: impl Into<Cell>, note: String) -> Detail {
    Detail { degree: k.0.clone(), expected: Cell::Text("-".into()), actual: actual.into(), status: Status::Skipped, note: Some(note) }
}

fn tuple_text(xs: &[usize]) -> String {
    let parts: Vec<String> = xs.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(","))
}

/// Oracle dimensions against the built families, per non-special degree.
fn dims(params: &CheckParams) -> Result<CheckResult> {
    let n = params.n;
    let ps: Vec<usize> = match params.p {
        Some(p) if (1..n).contains(&p) => vec![p],
        Some(p) => return Err(Error::InvalidParameter(format!("dims needs 1 <= p < N, got p = {p}"))),
        None => (1..n).collect(),
    };
    let window = Window::new(n, params.window)?;
    let spec = ActionSpec::new(AlgebraKind::H, n, FiberType::Scalar, params.beta.clone(), params.alpha.clone())?;
    let mut details = Vec::new();
    for p in ps {
        let fams = [FamilyKind::Min, FamilyKind::FullW, FamilyKind::Int, FamilyKind::Max]
            .iter()
            .map(|&kind| build_family(&FamilySpec::new(kind, p, false), &spec, &window))
            .collect::<Result<Vec<GradedFamily>>>()?;
        for k in window.degrees() {
            let x = spec.shifted(&k)?;
            if x.is_zero() {
                details.push(observation(&k, "all maps vanish", format!("p={p}, special fiber")));
                continue;
            }
            let o = oracle_fiber_dims(n, p, &x)?;
            let got: Vec<usize> = fams.iter().map(|f| f.fiber(&k).expect("same window").dim()).collect();
            details.push(Detail::compare(
                Some(&k),
                tuple_text(&[o.min, o.fullw, o.int, o.max]),
                tuple_text(&got),
                format!("p={p}, (min, fullw, int, max)"),
            ));
        }
    }
    Ok(CheckResult::new("dims", params.clone(), details))
}

/// The fiber the closure runs in and the seed vector.
fn seed_vector(config: &RunConfig, p: usize, index: usize) -> Result<(FiberType, Vector)> {
    let n = config.n;
    let fiber = match config.algebra {
        AlgebraKind::H => {
            if p == 0 || p > n / 2 {
                return Err(Error::InvalidParameter(format!("closure over H needs 1 <= p <= N/2, got p = {p}")));
            }
            FiberType::Fund(p)
        }
        _ if p > n => return Err(Error::InvalidParameter(format!("p = {p} exceeds N = {n}"))),
        _ if p == 0 => FiberType::Scalar,
        _ => FiberType::Lambda(p),
    };
    let basis: Vec<Vector> = match fiber {
        FiberType::Fund(p) => fundamental_subspace(n, p)?.basis().to_vec(),
        FiberType::Scalar => vec![Vector::unit(1, 0)],
        _ => {
            let len = ext_basis(n, p).len();
            (0..len).map(|i| Vector::unit(len, i)).collect()
        }
    };
    let v = basis.get(index).cloned().ok_or_else(|| {
        Error::InvalidParameter(format!("seed index {index} out of range for a fiber basis of size {}", basis.len()))
    })?;
    Ok((fiber, v))
}

/// The smallest member of the predicted chain containing `v` at `x`.
fn predicted_chain(config: &RunConfig, p: usize) -> Vec<(&'static str, FamilyKind)> {
    let n = config.n / 2;
    match config.algebra {
        AlgebraKind::H if 1 < p && p < n => vec![("min", FamilyKind::Min), ("int", FamilyKind::Int), ("max", FamilyKind::Max)],
        AlgebraKind::H => vec![("min", FamilyKind::Min), ("max", FamilyKind::Max)],
        _ if p == 0 || p == config.n => Vec::new(),
        _ => vec![("fullw", FamilyKind::FullW)],
    }
}

fn closure_report(config: &RunConfig, k: &Degree, index: usize) -> Result<CheckResult> {
    let n = config.n;
    let p = config.p.unwrap_or(1);
    let (fiber, v) = seed_vector(config, p, index)?;
    let window = Window::new(n, config.window)?;
    if !window.contains(k) {
        return Err(Error::InvalidDegree(format!("seed fiber {k} outside the window of half-width {}", config.window)));
    }
    let spec = ActionSpec::new(config.algebra, n, fiber, config.beta.clone(), config.alpha.clone())?;
    let gens = generator_set(config.algebra, n, config.rbound)?;
    let c = closure(&spec, &[(k.clone(), v.clone())], &window, &gens)?;
    let mut params = config.check_params();
    params.p = Some(p);
    let id = format!("closure {}", config.algebra);
    let interior = |d: &Degree| window.is_interior(d) && !spec.is_special(d);
    let mut details = Vec::new();
    if config.algebra == AlgebraKind::S || spec.is_special(k) {
        let why = if spec.is_special(k) { "seed at the special fiber" } else { "no prediction for S" };
        for (d, f) in c.iter().filter(|(d, _)| window.is_interior(d)) {
            details.push(observation(&d, f.dim(), format!("closure dimension, {why}")));
        }
        return Ok(CheckResult::new(&id, params, details).with_scope(CLOSURE_SCOPE));
    }
    let fund = matches!(fiber, FiberType::Fund(_));
    let x = spec.shifted(k)?;
    let mut name = "everything";
    let mut fam_kind = None;
    for (label, kind) in predicted_chain(config, p) {
        let f = family_fiber(kind, p, &x)?;
        let f = if fund { f.intersect(&fundamental_subspace(n, p)?)? } else { f };
        if f.contains(&v)? {
            name = label;
            fam_kind = Some(kind);
            break;
        }
    }
    let target = match fam_kind {
        Some(kind) => {
            let hspec = spec.with_fiber(FiberType::Scalar)?;
            build_family(&FamilySpec::new(kind, p, fund).with_special(SpecialPolicy::Omit), &hspec, &window)?
        }
        None => {
            let full = fiber.full(n)?;
            GradedFamily::from_fn(spec.clone(), window.clone(), |_| Ok(full.clone()))?
        }
    };
    for ((d, cf), tf) in c.iter().zip(target.fibers()) {
        if !interior(&d) {
            continue;
        }
        let actual = if cf == tf { Cell::from(cf.dim()) } else { Cell::Text(format!("{} (differs)", cf.dim())) };
        details.push(Detail::compare(Some(&d), tf.dim(), actual, format!("closure against {name}")));
    }
    Ok(CheckResult::new(&id, params, details).with_scope(CLOSURE_SCOPE))
}

/// The symplectic frame of `v`, its pairings, and the small algebra it
/// defines.
fn frame(params: &CheckParams, v: &Vector) -> Result<CheckResult> {
    let n = v.len();
    let f = symplectic_extend(v)?;
    let vs = f.vectors();
    let names: Vec<String> = (0..vs.len()).map(|i| if i == 0 { "x".to_string() } else { format!("w{i}") }).collect();
    let listing: Vec<String> = names.iter().zip(vs).map(|(a, b)| format!("{a} = {b}")).collect();
    let mut details = vec![Detail::compare(None, n, Subspace::span(n, vs)?.dim(), format!("rank of {}", listing.join(", ")))];
    for i in 0..vs.len() {
        for j in i + 1..vs.len() {
            let want = if (i, j) == (0, 1) || (i >= 2 && i % 2 == 0 && j == i + 1) { 1 } else { 0 };
            let got = sympl_form(&vs[i], &vs[j])?;
            details.push(Detail::compare(None, &Scalar::from_int(want), &got, format!("(bar {}|{})", names[i], names[j])));
        }
    }
    let h = n / 2;
    let alg = small_algebra(AlgebraKind::H, v)?;
    let kills = alg.basis.iter().try_fold(true, |acc, a: &Matrix| -> Result<bool> {
        Ok(acc && a.mul_vec(v)?.is_zero() && a.mul_vec(&vs[1])?.is_zero())
    })?;
    details.push(Detail::compare(None, h.saturating_sub(1) * (2 * h).saturating_sub(1), alg.dim(), "dim of the small algebra"));
    details.push(Detail::claim(None, alg.is_closed()?, "small algebra closed under commutators"));
    details.push(Detail::claim(None, kills, "small algebra kills x and w1"));
    Ok(CheckResult::new("frame", params.clone(), details))
}
