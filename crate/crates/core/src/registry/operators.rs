//! Degree-preserving invariant operators and the small algebras on a fiber.

use rayon::prelude::*;

use crate::error::Result;
use crate::exterior::gl_act_matrix;
use crate::invariant::{invariance_report_with, invariant_vec, operator_table, small_algebra, small_algebra_report, OperatorInvariance};
use crate::linalg::{Matrix, Subspace, Vector};
use crate::maps::{map_matrix, FamilyKind, MapId, SpecialPolicy};
use crate::report::Detail;
use crate::torus::{bar, sympl_form, AlgebraKind, Degree};

use super::Ctx;

use FamilyKind::{FullW, Int, Max, Min};

fn invariance_detail(rep: &OperatorInvariance, note: String) -> Detail {
    let bad = rep.per_degree.iter().find(|d| !d.2);
    let ops: usize = rep.per_degree.iter().map(|d| d.1).sum();
    match bad {
        Some((k, _, _)) => Detail::claim(Some(k), false, note),
        None => Detail::claim(None, true, format!("{note}, {ops} degree-operator pairs")),
    }
}

/// The vectors `T(e_i, e_j)`, `j != i`, for an index `i` with `(bar x)_i != 0`.
fn pair_vectors(k: &Degree, beta: &Vector) -> Result<Option<Vec<Vector>>> {
    let x = k.shifted(beta)?;
    let n = x.len();
    let bx = bar(&x)?;
    let Some(i) = (0..n).find(|&i| !bx[i].is_zero()) else { return Ok(None) };
    let ei = Vector::unit(n, i);
    let mut out = Vec::new();
    for j in (0..n).filter(|&j| j != i) {
        out.push(invariant_vec(AlgebraKind::H, k, beta, &ei, &Vector::unit(n, j))?);
    }
    Ok(Some(out))
}

/// `deg ↦ Λ^deg` action of `a`.
fn act(a: &Matrix, deg: usize) -> Result<Matrix> {
    gl_act_matrix(a, deg)
}

pub(super) fn invariant_ops(ctx: &mut Ctx) -> Result<Vec<Detail>> {
    let n = ctx.n();
    let beta = ctx.beta().clone();
    let table = operator_table(AlgebraKind::H, &beta, &ctx.window, ctx.params.rbound)?;
    let mut out = Vec::new();
    for p in ctx.ps() {
        for fund in [false, true] {
            if fund && p > ctx.half() {
                continue;
            }
            for kind in [Min, FullW, Int, Max] {
                let fam = ctx.family(kind, p, fund, SpecialPolicy::Omit)?;
                let rep = invariance_report_with(&fam, &table)?;
                let space = if fund { format!("Fund({p})") } else { format!("Λ^{p}") };
                out.push(invariance_detail(&rep, format!("{kind} on {space} preserved by Ω")));
            }
        }
    }
    // the pair vectors span the hyperplane bar(x)^⊥
    let degrees = ctx.window.degrees();
    let records: Vec<Option<Detail>> = degrees
        .par_iter()
        .map(|k| {
            let Some(ts) = pair_vectors(k, &beta)? else { return Ok(None) };
            let x = k.shifted(&beta)?;
            let span = Subspace::span(n, &ts)?;
            let mut ok = true;
            for t in span.basis() {
                ok &= sympl_form(&x, t)?.is_zero();
            }
            let actual = if ok { span.dim().to_string() } else { format!("{} (not in bar(x)^⊥)", span.dim()) };
            Ok(Some(Detail::compare(Some(k), (n - 1).to_string(), actual, "dim span of T(e_i, e_j)")))
        })
        .collect::<Result<_>>()?;
    out.extend(records.into_iter().flatten());
    // Ω commutes with the module maps
    let mut ids = Vec::new();
    ids.extend((0..n).map(MapId::Pi));
    ids.extend((1..=n).map(MapId::T));
    ids.extend((2..=n).map(MapId::ThetaTilde));
    ids.extend((0..n).map(MapId::F));
    for id in ids {
        let src = id.source_degree();
        let tgt = id.target_degree().expect("defined maps");
        let bad = degrees
            .par_iter()
            .zip(table.par_iter())
            .map(|(k, ops)| {
                let m = map_matrix(id, k, &beta)?;
                for a in ops {
                    if m.mul(&act(a, src)?)? != act(a, tgt)?.mul(&m)? {
                        return Ok(Some(k.clone()));
                    }
                }
                Ok(None)
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .next();
        out.push(Detail::claim(bad.as_ref(), bad.is_none(), format!("{id} commutes with Ω")));
    }
    Ok(out)
}

pub(super) fn restricted(ctx: &mut Ctx) -> Result<Vec<Detail>> {
    let h = ctx.half();
    let beta = ctx.beta().clone();
    let want = format!("dim {}, closed, kills x and w1", (h - 1) * (2 * h - 1));
    let degrees: Vec<Degree> = ctx.window.degrees().into_iter().filter(|k| !ctx.is_special(k)).collect();
    let mut out: Vec<Detail> = degrees
        .par_iter()
        .map(|k| {
            let x = k.shifted(&beta)?;
            let alg = small_algebra(AlgebraKind::H, &x)?;
            let w1 = &alg.frame[1];
            let mut kills = true;
            for a in &alg.basis {
                kills &= a.mul_vec(&x)?.is_zero() && a.mul_vec(w1)?.is_zero();
            }
            let closed = alg.is_closed()?;
            let actual = format!(
                "dim {}, {}, {}",
                alg.dim(),
                if closed { "closed" } else { "not closed" },
                if kills { "kills x and w1" } else { "moves x or w1" }
            );
            Ok(Detail::compare(Some(k), want.clone(), actual, "small algebra on the fiber"))
        })
        .collect::<Result<_>>()?;
    for p in ctx.ps() {
        for fund in [false, true] {
            if fund && p > h {
                continue;
            }
            for kind in [Min, FullW, Int, Max] {
                let fam = ctx.family(kind, p, fund, SpecialPolicy::Omit)?;
                let rep = small_algebra_report(&fam, AlgebraKind::H)?;
                let space = if fund { format!("Fund({p})") } else { format!("Λ^{p}") };
                out.push(invariance_detail(&rep, format!("{kind} on {space} preserved by the small algebra")));
            }
        }
    }
    Ok(out)
}
