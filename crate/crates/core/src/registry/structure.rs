//! Finite-dimensional facts: fundamental subspaces, contraction, the
//! rank-one spans and the quadratic membership predicates.

use crate::error::Result;
use crate::exterior::{binomial, binomial_i, fundamental_subspace, gl_act_matrix, sym2_basis, theta_matrix};
use crate::linalg::{kernel, rank, Matrix, Subspace, Vector};
use crate::report::Detail;
use crate::torus::{bar, degree_ball, is_symplectic, j_membership, rank_one_sym, sp_generators, AlgebraKind, JSample, Rep};

use super::Ctx;

pub(super) fn fund_dim(ctx: &mut Ctx) -> Result<Vec<Detail>> {
    let n = ctx.n();
    let mut out = Vec::new();
    for p in ctx.ps() {
        let want = binomial(n, p) - binomial_i(n, p as i64 - 2);
        out.push(Detail::compare(None, want, fundamental_subspace(n, p)?.dim(), format!("p={p}")));
    }
    Ok(out)
}

pub(super) fn theta_iso(ctx: &mut Ctx) -> Result<Vec<Detail>> {
    let n = ctx.n();
    let h = ctx.half();
    let t = theta_matrix(n, h + 1)?;
    Ok(vec![
        Detail::compare(None, binomial(n, h + 1), binomial(n, h - 1), "source and target dimensions"),
        Detail::compare(None, binomial(n, h - 1), rank(&t), format!("rank of contraction on Λ^{}", h + 1)),
    ])
}

pub(super) fn theta_equivariant(ctx: &mut Ctx) -> Result<Vec<Detail>> {
    let n = ctx.n();
    let gens = sp_generators(n)?;
    let mut out = Vec::new();
    for p in ctx.ps() {
        let t = theta_matrix(n, p)?;
        let mut bad = None;
        for (name, g) in &gens {
            let lhs = t.mul(&gl_act_matrix(g, p)?)?;
            let rhs = gl_act_matrix(g, p - 2)?.mul(&t)?;
            if lhs != rhs {
                bad = Some(format!("{name:?}"));
                break;
            }
        }
        let note = match &bad {
            Some(g) => format!("p={p}, fails for {g}"),
            None => format!("p={p}, {} generators", gens.len()),
        };
        out.push(Detail::claim(None, bad.is_none(), note));
    }
    Ok(out)
}

fn ball_vectors(n: usize, bound: i64) -> Vec<Vector> {
    degree_ball(n, bound).iter().map(|d| d.to_vector()).collect()
}

pub(super) fn l3_span(ctx: &mut Ctx) -> Result<Vec<Detail>> {
    let n = ctx.n();
    let h = ctx.half();
    let us = ball_vectors(n, ctx.params.rbound);
    let mats = us.iter().map(rank_one_sym).collect::<Result<Vec<_>>>()?;
    let span = Subspace::span(n * n, &mats.iter().map(Matrix::flatten).collect::<Vec<_>>())?;
    let mut all_sp = true;
    for m in &mats {
        all_sp &= is_symplectic(m)?;
    }
    let mut gens_in = true;
    for (_, g) in sp_generators(n)? {
        gens_in &= span.contains(&g.flatten())?;
    }
    let mut pairs_sp = true;
    for (i, u) in us.iter().enumerate() {
        for v in &us[i + 1..] {
            let m = Matrix::outer(u, &bar(v)?).add(&Matrix::outer(v, &bar(u)?))?;
            pairs_sp &= is_symplectic(&m)?;
        }
    }
    Ok(vec![
        Detail::compare(None, h * (2 * h + 1), span.dim(), "dim span of u·bar(u)ᵀ"),
        Detail::claim(None, all_sp, "each u·bar(u)ᵀ is symplectic"),
        Detail::claim(None, gens_in, "sp_N generators lie in the span"),
        Detail::claim(None, pairs_sp, "u·bar(v)ᵀ + v·bar(u)ᵀ is symplectic"),
    ])
}

fn lambda_records(kind: AlgebraKind, n: usize, ps: impl Iterator<Item = usize>, samples: &[JSample]) -> Result<Vec<Detail>> {
    let mut out = Vec::new();
    for p in ps {
        let len = binomial(n, p);
        let mut failed = None;
        for i in 0..len {
            let v = j_membership(kind, Rep::Lambda(p), &Vector::unit(len, i), samples)?;
            if !v.holds {
                failed = Some(i);
                break;
            }
        }
        let note = match failed {
            Some(i) => format!("Λ^{p}, fails on basis vector {i}"),
            None => format!("Λ^{p}, {len} basis vectors, {} samples", samples.len()),
        };
        out.push(Detail::compare(None, "holds", if failed.is_none() { "holds" } else { "fails" }, note));
    }
    Ok(out)
}

fn sym2_records(kind: AlgebraKind, n: usize, samples: &[JSample]) -> Result<Vec<Detail>> {
    let basis = sym2_basis(n);
    let mut out = Vec::new();
    for (i, (a, b)) in basis.iter().enumerate() {
        let v = j_membership(kind, Rep::Sym2, &Vector::unit(basis.len(), i), samples)?;
        let note = match &v.witness {
            Some(w) => format!("Sym² e{a}·e{b}, witness r={} u={}", w.r, w.u),
            None => format!("Sym² e{a}·e{b}"),
        };
        out.push(Detail::compare(None, "fails", if v.holds { "holds" } else { "fails" }, note));
    }
    Ok(out)
}

pub(super) fn j_char(ctx: &mut Ctx) -> Result<Vec<Detail>> {
    let n = ctx.n();
    let samples: Vec<JSample> =
        ball_vectors(n, ctx.params.rbound).into_iter().map(|r| JSample { r, u: Vector::zeros(n) }).collect();
    let mut out = lambda_records(AlgebraKind::H, n, 0..=n, &samples)?;
    out.extend(sym2_records(AlgebraKind::H, n, &samples)?);
    Ok(out)
}

/// Unit vectors and their pairwise sums.
fn polarisation(vs: &[Vector]) -> Result<Vec<Vector>> {
    let mut out = vs.to_vec();
    for (i, a) in vs.iter().enumerate() {
        for b in &vs[i + 1..] {
            out.push(a.add(b)?);
        }
    }
    Ok(out)
}

fn outer_span_dim(n: usize, samples: &[JSample]) -> Result<usize> {
    let flat: Vec<Vector> = samples.iter().map(|s| Matrix::outer(&s.r, &s.u).flatten()).collect();
    Ok(Subspace::span(n * n, &flat)?.dim())
}

pub(super) fn lw(ctx: &mut Ctx) -> Result<Vec<Detail>> {
    let n = ctx.n();
    let units: Vec<Vector> = (0..n).map(|i| Vector::unit(n, i)).collect();
    let us = polarisation(&units)?;
    let mut samples = Vec::new();
    for r in ball_vectors(n, ctx.params.rbound) {
        for u in &us {
            samples.push(JSample { r: r.clone(), u: u.clone() });
        }
    }
    let mut out = vec![Detail::compare(None, n * n, outer_span_dim(n, &samples)?, "dim span of r·uᵀ")];
    out.extend(lambda_records(AlgebraKind::W, n, 0..=n, &samples)?);
    out.extend(sym2_records(AlgebraKind::W, n, &samples)?);
    Ok(out)
}

pub(super) fn ls(ctx: &mut Ctx) -> Result<Vec<Detail>> {
    let n = ctx.n();
    let mut samples = Vec::new();
    for r in ball_vectors(n, ctx.params.rbound) {
        let perp = kernel(&Matrix::from_rows(std::slice::from_ref(&r))?);
        for u in polarisation(perp.basis())? {
            samples.push(JSample { r: r.clone(), u });
        }
    }
    let mut out = vec![Detail::compare(None, n * n - 1, outer_span_dim(n, &samples)?, "dim span of r·uᵀ, (u|r) = 0")];
    out.extend(lambda_records(AlgebraKind::S, n, 0..n, &samples)?);
    out.extend(sym2_records(AlgebraKind::S, n, &samples)?);
    Ok(out)
}
