//! Tensor-field modules over the Witt algebra: the wedge-image family and
//! the fiber at `-β`.

use rayon::prelude::*;

use crate::error::Result;
use crate::exterior::{binomial, binomial_i};
use crate::graded::{closure, is_invariant, FiberType, Generator, GradedFamily};
use crate::invariant::{invariance_report_with, invariant_vec, operator_table, small_algebra, small_algebra_report};
use crate::linalg::{Subspace, Vector};
use crate::maps::{build_family, FamilyKind, FamilySpec};
use crate::report::Detail;
use crate::torus::{AlgebraKind, Degree};

use super::families::tuple;
use super::{Ctx, Prober};

const W: AlgebraKind = AlgebraKind::W;

fn fiber_type(p: usize) -> FiberType {
    if p == 0 {
        FiberType::Scalar
    } else {
        FiberType::Lambda(p)
    }
}

fn wedge_family(ctx: &Ctx, p: usize) -> Result<GradedFamily> {
    build_family(&FamilySpec::new(FamilyKind::FullW, p, false), &ctx.spec(W, FiberType::Scalar)?, &ctx.window)
}

fn full_family(ctx: &Ctx, p: usize) -> Result<GradedFamily> {
    let fiber = fiber_type(p);
    let full = fiber.full(ctx.n())?;
    GradedFamily::from_fn(ctx.spec(W, fiber)?, ctx.window.clone(), |_| Ok(full.clone()))
}

fn line_family(ctx: &Ctx, p: usize, s: &Degree) -> Result<GradedFamily> {
    let fiber = fiber_type(p);
    let full = fiber.full(ctx.n())?;
    GradedFamily::from_fn(ctx.spec(W, fiber)?, ctx.window.clone(), |k| {
        Ok(if k == s { full.clone() } else { Subspace::zero(full.ambient_dim()) })
    })
}

fn invariance_detail(fam: &GradedFamily, gens: &[Generator], note: &str) -> Result<Detail> {
    let rep = is_invariant(fam, gens)?;
    let at = rep.witnesses.first().map(|w| w.degree.clone());
    Ok(Detail::claim(at.as_ref(), rep.holds, format!("{note} is invariant")))
}

/// `samples` random vectors of `outer` outside `inner` at random generic
/// interior degrees.
fn seeds(ctx: &mut Ctx, outer: &GradedFamily, inner: Option<&GradedFamily>) -> Result<Vec<(Degree, Vector)>> {
    let degrees = ctx.generic_interior();
    let mut out = Vec::new();
    if degrees.is_empty() {
        return Ok(out);
    }
    for _ in 0..ctx.params.samples {
        let k = ctx.pick(&degrees).clone();
        let o = outer.fiber(&k).expect("same window");
        let v = match inner {
            Some(i) => ctx.random_outside(o, i.fiber(&k).expect("same window"))?,
            None => ctx.random_in(o),
        };
        out.extend(v.map(|v| (k, v)));
    }
    Ok(out)
}

/// One record per probe run: seeds covered out of seeds tried.
fn probe(prober: &mut Prober, seeds: &[(Degree, Vector)], note: &str) -> Result<Detail> {
    let mut covered = 0usize;
    let mut miss = None;
    for (k, v) in seeds {
        match prober.covers(k, v)? {
            None => covered += 1,
            Some(m) => {
                miss.get_or_insert((k.clone(), m));
            }
        }
    }
    Ok(match miss {
        Some((k, m)) => Detail::compare(Some(&k), seeds.len(), covered, format!("{note}; first miss at {m}")),
        None => Detail::compare(None, seeds.len(), covered, note),
    })
}

pub(super) fn invariances(ctx: &mut Ctx) -> Result<Vec<Detail>> {
    let n = ctx.n();
    let beta = ctx.beta().clone();
    let table = operator_table(W, &beta, &ctx.window, ctx.params.rbound)?;
    let mut out = Vec::new();
    for p in ctx.ps() {
        let fam = wedge_family(ctx, p)?;
        let rep = invariance_report_with(&fam, &table)?;
        let bad = rep.per_degree.iter().find(|d| !d.2).map(|d| d.0.clone());
        out.push(Detail::claim(bad.as_ref(), rep.holds, format!("x ∧ Λ^{} preserved by Ω", p - 1)));
    }
    let degrees = ctx.window.degrees();
    let records: Vec<Option<Detail>> = degrees
        .par_iter()
        .map(|k| {
            let x = k.shifted(&beta)?;
            let Some(i) = (0..n).find(|&i| !x[i].is_zero()) else { return Ok(None) };
            let ei = Vector::unit(n, i);
            let mut ts = Vec::new();
            for j in (0..n).filter(|&j| j != i) {
                ts.push(invariant_vec(W, k, &beta, &ei, &Vector::unit(n, j))?);
            }
            let span = Subspace::span(n, &ts)?;
            let mut perp = true;
            for t in span.basis() {
                perp &= x.dot(t)?.is_zero();
            }
            let actual = if perp { span.dim().to_string() } else { format!("{} (not in x^⊥)", span.dim()) };
            Ok(Some(Detail::compare(Some(k), (n - 1).to_string(), actual, "dim span of T(e_i, e_j)")))
        })
        .collect::<Result<_>>()?;
    out.extend(records.into_iter().flatten());
    Ok(out)
}

pub(super) fn restrict(ctx: &mut Ctx) -> Result<Vec<Detail>> {
    let n = ctx.n();
    let beta = ctx.beta().clone();
    let want = format!("dim {}, closed, kills x", (n - 1) * (n - 1));
    let degrees: Vec<Degree> = ctx.window.degrees().into_iter().filter(|k| !ctx.is_special(k)).collect();
    let mut out: Vec<Detail> = degrees
        .par_iter()
        .map(|k| {
            let x = k.shifted(&beta)?;
            let alg = small_algebra(W, &x)?;
            let mut kills = true;
            for a in &alg.basis {
                kills &= a.mul_vec(&x)?.is_zero();
            }
            let actual = format!(
                "dim {}, {}, {}",
                alg.dim(),
                if alg.is_closed()? { "closed" } else { "not closed" },
                if kills { "kills x" } else { "moves x" }
            );
            Ok(Detail::compare(Some(k), want.clone(), actual, "small algebra on the fiber"))
        })
        .collect::<Result<_>>()?;
    for p in ctx.ps() {
        let rep = small_algebra_report(&wedge_family(ctx, p)?, W)?;
        let bad = rep.per_degree.iter().find(|d| !d.2).map(|d| d.0.clone());
        out.push(Detail::claim(bad.as_ref(), rep.holds, format!("x ∧ Λ^{} preserved by the small algebra", p - 1)));
    }
    Ok(out)
}

/// `p ∈ {0, N}` with `β` non-integral: every vector generates everything.
/// With `β` integral the top and bottom degrees behave dually: for `p = 0`
/// the `-β` fiber is the unique proper submodule, for `p = N` it is the
/// unique proper quotient and its complement the unique proper submodule.
fn end_degree(ctx: &mut Ctx, p: usize, gens: &[Generator]) -> Result<Vec<Detail>> {
    let full = full_family(ctx, p)?;
    let spec = full.spec().clone();
    let seeds = seeds(ctx, &full, None)?;
    let mut out = Vec::new();
    let Some(s) = ctx.special().filter(|_| ctx.beta_integral()) else {
        let mut prober = Prober::new(&spec, gens, &full).with_special();
        out.push(probe(&mut prober, &seeds, &format!("Λ^{p}, closure is everything"))?);
        return Ok(out);
    };
    let line = line_family(ctx, p, &s)?;
    let complement = full.with_fiber(&s, Subspace::zero(1))?;
    let at_s = [(s.clone(), Vector::unit(1, 0))];
    let line_holds = is_invariant(&line, gens)?.holds;
    let complement_holds = is_invariant(&complement, gens)?.holds;
    out.push(Detail::compare(Some(&s), p == 0, line_holds, format!("Λ^{p}, the -β fiber is invariant")));
    out.push(Detail::compare(Some(&s), p != 0, complement_holds, format!("Λ^{p}, its complement is invariant")));
    if p == 0 {
        let c = closure(&spec, &at_s, &ctx.window, gens)?;
        let extra: usize = c.iter().filter(|(k, _)| k != &s).map(|(_, f)| f.dim()).sum();
        out.push(Detail::compare(Some(&s), 0usize, extra, format!("Λ^{p}, closure of the -β fiber, dimension off it")));
        let mut prober = Prober::new(&spec, gens, &full).with_special();
        out.push(probe(&mut prober, &seeds, &format!("Λ^{p}, closure of vectors off -β is everything"))?);
    } else {
        let mut prober = Prober::new(&spec, gens, &complement);
        out.push(probe(&mut prober, &seeds, &format!("Λ^{p}, closure of vectors off -β is the complement"))?);
        let mut prober = Prober::new(&spec, gens, &full).with_special();
        out.push(probe(&mut prober, &at_s, &format!("Λ^{p}, closure of the -β fiber is everything"))?);
    }
    Ok(out)
}

pub(super) fn unique(ctx: &mut Ctx) -> Result<Vec<Detail>> {
    let n = ctx.n();
    let gens = ctx.gens(W)?;
    let mut out = Vec::new();
    for p in ctx.ps() {
        if p == 0 || p == n {
            out.extend(end_degree(ctx, p, &gens)?);
            continue;
        }
        let wedge = wedge_family(ctx, p)?;
        let full = full_family(ctx, p)?;
        let seeds = seeds(ctx, &full, None)?;
        let mut prober = Prober::new(wedge.spec(), &gens, &wedge);
        out.push(probe(&mut prober, &seeds, &format!("random vectors of Λ^{p}, closure contains x ∧ Λ^{}", p - 1))?);
    }
    Ok(out)
}

pub(super) fn classify(ctx: &mut Ctx) -> Result<Vec<Detail>> {
    let n = ctx.n();
    let gens = ctx.gens(W)?;
    let mut out = Vec::new();
    for p in ctx.ps() {
        if p == 0 || p == n {
            out.extend(end_degree(ctx, p, &gens)?);
            continue;
        }
        let wedge = wedge_family(ctx, p)?;
        let full = full_family(ctx, p)?;
        let label = format!("x ∧ Λ^{}", p - 1);
        out.push(invariance_detail(&wedge, &gens, &label)?);
        let want = tuple(&[binomial_i(n - 1, p as i64 - 1), binomial(n - 1, p)]);
        for (k, f) in wedge.iter() {
            if ctx.is_special(&k) {
                continue;
            }
            let got = tuple(&[f.dim(), binomial(n, p) - f.dim()]);
            out.push(Detail::compare(Some(&k), want.clone(), got, format!("Λ^{p}: dims of {label} and the quotient")));
        }
        let inside = seeds(ctx, &wedge, None)?;
        let mut prober = Prober::new(wedge.spec(), &gens, &wedge);
        out.push(probe(&mut prober, &inside, &format!("vectors of {label}, closure is the family"))?);
        let outside = seeds(ctx, &full, Some(&wedge))?;
        let mut prober = Prober::new(full.spec(), &gens, &full).with_special();
        out.push(probe(&mut prober, &outside, &format!("vectors outside {label}, closure is everything"))?);
        if let Some(s) = ctx.special().filter(|_| ctx.beta_integral()) {
            let whole = fiber_type(p).full(n)?;
            let line = ctx.random_in(&whole).expect("nonzero");
            let choices = [
                ("zero", Subspace::zero(whole.ambient_dim())),
                ("a line", Subspace::span(whole.ambient_dim(), &[line])?),
                ("everything", whole.clone()),
            ];
            for (w, sub) in &choices {
                let glued = wedge.with_fiber(&s, sub.clone())?;
                out.push(invariance_detail(&glued, &gens, &format!("{label} with {w} at -β"))?);
            }
        }
    }
    Ok(out)
}
