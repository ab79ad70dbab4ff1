//! Fiberwise homology of the de Rham, contraction and square complexes.

use crate::complexes::{compare_with_prediction, ComplexId};
use crate::error::Result;
use crate::linalg::kernel;
use crate::maps::{map_matrix, FamilyKind, MapId, SpecialPolicy};
use crate::report::Detail;

use super::families::eq_detail;
use super::Ctx;

fn rows(ctx: &Ctx, id: ComplexId) -> Result<Vec<Detail>> {
    let c = compare_with_prediction(id, ctx.beta(), &ctx.window)?;
    Ok(c
        .rows
        .iter()
        .map(|(k, want, got)| {
            let note = if c.special.as_ref() == Some(k) { format!("{id}, special fiber") } else { id.to_string() };
            Detail::compare(Some(k), *want, *got, note)
        })
        .collect())
}

pub(super) fn derham(ctx: &mut Ctx) -> Result<Vec<Detail>> {
    let n = ctx.n();
    let mut out = Vec::new();
    for p in ctx.ps() {
        out.extend(rows(ctx, ComplexId::DeRham(p))?);
        out.extend(rows(ctx, ComplexId::TChain(p))?);
        if (1..n).contains(&p) {
            let int = ctx.family(FamilyKind::Int, p, false, SpecialPolicy::Full)?;
            for (k, f) in int.iter() {
                let ker = kernel(&map_matrix(MapId::T(p), &k, ctx.beta())?);
                out.push(eq_detail(&k, f, &ker, &format!("p={p}, INT = ker T")));
            }
        }
    }
    Ok(out)
}

pub(super) fn fsq(ctx: &mut Ctx) -> Result<Vec<Detail>> {
    let mut out = Vec::new();
    for p in ctx.ps() {
        out.extend(rows(ctx, ComplexId::Fsq(p))?);
    }
    Ok(out)
}

pub(super) fn fsq_fund(ctx: &mut Ctx) -> Result<Vec<Detail>> {
    let mut out = Vec::new();
    for p in ctx.ps() {
        out.extend(rows(ctx, ComplexId::FsqFund(p))?);
    }
    Ok(out)
}
