//! Fiberwise identities between the minimal, wedge-image, intermediate and
//! maximal families and the maps relating them.

use rayon::prelude::*;

use crate::error::Result;
use crate::exterior::{binomial, binomial_i, fundamental_dim, theta_matrix};
use crate::graded::{is_invariant, FiberType, GradedFamily};
use crate::linalg::{kernel, restricted_kernel, Matrix, Subspace};
use crate::maps::{map_matrix, verify_module_map, wedge_matrix, FamilyKind, MapId, SpecialPolicy};
use crate::report::{Cell, Detail};
use crate::torus::{AlgebraKind, Degree};

use super::oracle::oracle_fiber_dims;
use super::Ctx;

use FamilyKind::{FullW, Int, Max, Min};
use SpecialPolicy::{Full, Omit};

pub(super) fn tuple(xs: &[usize]) -> String {
    let parts: Vec<String> = xs.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(","))
}

/// Expected `a`, actual `b`, as dimensions; marked when the subspaces differ.
pub(super) fn eq_detail(k: &Degree, a: &Subspace, b: &Subspace, note: &str) -> Detail {
    let actual = if a == b { Cell::from(b.dim()) } else { Cell::Text(format!("{} (differs)", b.dim())) };
    Detail::compare(Some(k), a.dim(), actual, note)
}

pub(super) fn eq_details(a: &GradedFamily, b: &GradedFamily, note: &str) -> Vec<Detail> {
    a.iter().zip(b.fibers()).map(|((k, x), y)| eq_detail(&k, x, y, note)).collect()
}

fn family_label(kind: FamilyKind, p: usize, fund: bool, special: SpecialPolicy) -> String {
    let space = if fund { format!("Fund({p})") } else { format!("Λ^{p}") };
    let hat = if special == Full { " with full special fiber" } else { "" };
    format!("{kind} on {space}{hat}")
}

/// For each degree, compares the image and kernel of `map` restricted to
/// `src` with the predicted families. `img = None` predicts a zero image.
fn map_details(
    src: &GradedFamily,
    img: Option<&GradedFamily>,
    ker: &GradedFamily,
    map: impl Fn(&Degree) -> Result<Matrix> + Sync,
    note: &str,
) -> Result<Vec<Detail>> {
    let degrees = src.window().degrees();
    degrees
        .par_iter()
        .map(|k| {
            let m = map(k)?;
            let s = src.fiber(k).expect("same window");
            let im = s.image_under(&m)?;
            let kr = restricted_kernel(&m, s)?;
            let want_im = match img {
                Some(f) => f.fiber(k).expect("same window").clone(),
                None => Subspace::zero(m.rows()),
            };
            let want_ker = ker.fiber(k).expect("same window");
            let expected = format!("im {}, ker {}", want_im.dim(), want_ker.dim());
            let mut actual = format!("im {}, ker {}", im.dim(), kr.dim());
            if im != want_im {
                actual.push_str(" (image differs)");
            }
            if &kr != want_ker {
                actual.push_str(" (kernel differs)");
            }
            Ok(Detail::compare(Some(k), expected, actual, note))
        })
        .collect()
}

pub(super) fn full_family(ctx: &Ctx, fiber: FiberType) -> Result<GradedFamily> {
    let spec = ctx.spec(AlgebraKind::H, fiber)?;
    let full = fiber.full(ctx.n())?;
    GradedFamily::from_fn(spec, ctx.window.clone(), |_| Ok(full.clone()))
}

pub(super) fn fund_full(ctx: &Ctx, p: usize) -> Result<GradedFamily> {
    full_family(ctx, FiberType::Fund(p))
}

/// The policies to run: `Omit`, plus `Full` when `-β` is a lattice point.
pub(super) fn policies(ctx: &Ctx) -> Vec<SpecialPolicy> {
    if ctx.beta_integral() {
        vec![Omit, Full]
    } else {
        vec![Omit]
    }
}

fn map_fn(ctx: &Ctx, id: MapId) -> impl Fn(&Degree) -> Result<Matrix> + Sync {
    let beta = ctx.beta().clone();
    move |k: &Degree| map_matrix(id, k, &beta)
}

pub(super) fn submodules(ctx: &mut Ctx) -> Result<Vec<Detail>> {
    let gens = ctx.gens(AlgebraKind::H)?;
    let mut out = Vec::new();
    for p in ctx.ps() {
        for fund in [false, true] {
            if fund && p > ctx.half() {
                continue;
            }
            for policy in policies(ctx) {
                for kind in [Min, FullW, Int, Max] {
                    let fam = ctx.family(kind, p, fund, policy)?;
                    let rep = is_invariant(&fam, &gens)?;
                    let at = rep.witnesses.first().map(|w| w.degree.clone());
                    let mut note = family_label(kind, p, fund, policy);
                    if let Some(w) = rep.witnesses.first() {
                        note.push_str(&format!(", moved out by {}", w.generator.label()));
                    }
                    out.push(Detail::claim(at.as_ref(), rep.holds, note));
                }
            }
        }
    }
    Ok(out)
}

pub(super) fn module_maps(ctx: &mut Ctx) -> Result<Vec<Detail>> {
    let n = ctx.n();
    let spec = ctx.spec(AlgebraKind::H, FiberType::Scalar)?;
    let gens = ctx.gens(AlgebraKind::H)?;
    let mut ids = Vec::new();
    ids.extend((0..n).map(MapId::Pi));
    ids.extend((1..=n).map(MapId::T));
    ids.extend((2..=n).map(MapId::ThetaTilde));
    ids.extend((0..n).map(MapId::F));
    let mut out = Vec::new();
    for id in ids {
        let rep = verify_module_map(id, &spec, &ctx.window, &gens)?;
        let checked: usize = rep.per_degree.iter().map(|d| d.1).sum();
        let (at, note) = match rep.failures.first() {
            Some((k, g)) => (Some(k.clone()), format!("{id} fails for {g}")),
            None => (None, format!("{id}, {checked} degree-generator pairs")),
        };
        out.push(Detail::claim(at.as_ref(), rep.holds, note));
    }
    Ok(out)
}

pub(super) fn inclusion_chain(ctx: &mut Ctx) -> Result<Vec<Detail>> {
    let n = ctx.n();
    let mut out = Vec::new();
    for p in ctx.ps() {
        let fams = [Min, FullW, Int, Max].map(|kind| ctx.family(kind, p, false, Omit));
        let [min, fullw, int, max] = fams;
        let (min, fullw, int, max) = (min?, fullw?, int?, max?);
        let c = binomial_i;
        let want = [
            c(n - 2, p as i64 - 1),
            c(n - 1, p as i64 - 1),
            c(n - 2, p as i64 - 1) + c(n - 2, p as i64),
            binomial(n, p) - c(n - 2, p as i64 - 1),
        ];
        let rows = ctx
            .window
            .degrees()
            .par_iter()
            .map(|k| -> Result<Detail> {
                let x = ctx.spec(AlgebraKind::H, FiberType::Scalar)?.shifted(k)?;
                if x.is_zero() {
                    let zero = wedge_matrix(&x, p)?.is_zero() && map_matrix(MapId::T(p), k, ctx.beta())?.is_zero();
                    return Ok(Detail::compare(
                        Some(k),
                        "maps vanish",
                        if zero { "maps vanish" } else { "nonzero map" },
                        format!("p={p}, special fiber"),
                    ));
                }
                let f = [&min, &fullw, &int, &max].map(|fam| fam.fiber(k).expect("same window"));
                let dims = f.map(Subspace::dim);
                let mut actual = tuple(&dims);
                let chain = f[1].contains_subspace(f[0])?
                    && f[3].contains_subspace(f[1])?
                    && f[2].contains_subspace(f[0])?
                    && f[3].contains_subspace(f[2])?;
                if !chain {
                    actual.push_str(" chain broken");
                }
                let o = oracle_fiber_dims(n, p, &x)?;
                let odims = [o.min, o.fullw, o.int, o.max];
                if odims != dims {
                    actual.push_str(&format!(" oracle {}", tuple(&odims)));
                }
                Ok(Detail::compare(Some(k), tuple(&want), actual, format!("p={p}, (min,fullw,int,max)")))
            })
            .collect::<Result<Vec<_>>>()?;
        out.extend(rows);
    }
    Ok(out)
}

pub(super) fn similar(ctx: &mut Ctx) -> Result<Vec<Detail>> {
    let mut out = Vec::new();
    for p in ctx.ps() {
        let min = ctx.family(Min, p, true, Omit)?;
        let fullw = ctx.family(FullW, p, true, Omit)?;
        out.extend(eq_details(&min, &fullw, &format!("p={p}, MIN vs FULLW on Fund")));
    }
    Ok(out)
}

pub(super) fn jh_quotient(ctx: &mut Ctx) -> Result<Vec<Detail>> {
    let n = ctx.n();
    let mut out = Vec::new();
    for p in ctx.ps() {
        let min = ctx.family(Min, p, false, Omit)?;
        let max = ctx.family(Max, p, false, Full)?;
        let whole = full_family(ctx, FiberType::Lambda(p))?;
        let q = crate::maps::quotient_dims(&whole, &max)?;
        for ((k, d), m) in q.iter().zip(min.fibers()) {
            out.push(Detail::compare(Some(k), m.dim(), *d, format!("p={p}, Λ^p over MAX")));
        }
        if p <= ctx.half() && p < n {
            let fmin = ctx.family(Min, p, true, Omit)?;
            let fmax = ctx.family(Max, p, true, Full)?;
            let src = fund_full(ctx, p)?;
            out.extend(map_details(&src, Some(&fmin), &fmax, map_fn(ctx, MapId::F(p)), &format!("p={p}, f on Fund"))?);
        }
    }
    Ok(out)
}

pub(super) fn equality_quotients(ctx: &mut Ctx) -> Result<Vec<Detail>> {
    let n = ctx.n();
    let mut out = Vec::new();
    for p in ctx.ps() {
        let below = ctx.family(Min, p - 1, false, Omit)?;
        let above = if p + 1 < n { Some(ctx.family(Min, p + 1, false, Omit)?) } else { None };
        for policy in policies(ctx) {
            let tag = if policy == Full { ", full special fiber" } else { "" };
            let fullw = ctx.family(FullW, p, false, policy)?;
            let min = ctx.family(Min, p, false, policy)?;
            let max = ctx.family(Max, p, false, policy)?;
            out.extend(map_details(&fullw, Some(&below), &min, map_fn(ctx, MapId::T(p)), &format!("p={p}, T on FULLW{tag}"))?);
            out.extend(map_details(&max, above.as_ref(), &fullw, map_fn(ctx, MapId::Pi(p)), &format!("p={p}, π on MAX{tag}"))?);
        }
    }
    Ok(out)
}

pub(super) fn int_quotients(ctx: &mut Ctx) -> Result<Vec<Detail>> {
    let n = ctx.n();
    let mut out = Vec::new();
    for q in ctx.ps() {
        let above = if q + 1 < n { Some(ctx.family(Min, q + 1, false, Omit)?) } else { None };
        for policy in policies(ctx) {
            let tag = if policy == Full { ", full special fiber" } else { "" };
            let min = ctx.family(Min, q, false, policy)?;
            let fullw = ctx.family(FullW, q, false, policy)?;
            let int = ctx.family(Int, q, false, policy)?;
            let max = ctx.family(Max, q, false, policy)?;
            if let Some(above) = &above {
                out.extend(map_details(&int, Some(above), &min, map_fn(ctx, MapId::Pi(q)), &format!("p={q}, π on INT{tag}"))?);
            }
            for ((k, f), ((i, m), x)) in fullw.iter().zip(int.fibers().iter().zip(min.fibers()).zip(max.fibers())) {
                out.push(eq_detail(&k, x, &f.sum(i)?, &format!("p={q}, FULLW + INT = MAX{tag}")));
                out.push(eq_detail(&k, m, &f.intersect(i)?, &format!("p={q}, FULLW ∩ INT = MIN{tag}")));
            }
            if q >= 2 {
                let below = ctx.family(Min, q - 1, false, Omit)?;
                let dq = crate::maps::quotient_dims(&max, &int)?;
                for ((k, d), b) in dq.iter().zip(below.fibers()) {
                    out.push(Detail::compare(Some(k), b.dim(), *d, format!("p={q}, MAX over INT{tag}")));
                }
            }
        }
    }
    Ok(out)
}

fn theta_pi(ctx: &Ctx, p: usize) -> Result<impl Fn(&Degree) -> Result<Matrix> + Sync> {
    let beta = ctx.beta().clone();
    let t = theta_matrix(ctx.n(), p + 1)?;
    Ok(move |k: &Degree| t.mul(&map_matrix(MapId::Pi(p), k, &beta)?))
}

pub(super) fn int_kernel(ctx: &mut Ctx) -> Result<Vec<Detail>> {
    let mut out = Vec::new();
    for p in ctx.ps() {
        let fund = crate::exterior::fundamental_subspace(ctx.n(), p)?;
        let int = ctx.family(Int, p, true, Full)?;
        let max = ctx.family(Max, p, true, Full)?;
        let tp = theta_pi(ctx, p)?;
        for (k, i) in int.iter() {
            let m = tp(&k)?;
            let whole = kernel(&m).intersect(&fund)?;
            let on_max = restricted_kernel(&m, max.fiber(&k).expect("same window"))?;
            out.push(eq_detail(&k, i, &whole, &format!("p={p}, INT vs kernel on Fund")));
            out.push(eq_detail(&k, i, &on_max, &format!("p={p}, INT vs kernel on MAX")));
        }
        let below = ctx.family(Min, p - 1, true, Omit)?;
        for policy in policies(ctx) {
            let tag = if policy == Full { ", full special fiber" } else { "" };
            let max = ctx.family(Max, p, true, policy)?;
            let int = ctx.family(Int, p, true, policy)?;
            out.extend(map_details(&max, Some(&below), &int, map_fn(ctx, MapId::T(p)), &format!("p={p}, T on MAX∩Fund{tag}"))?);
        }
    }
    Ok(out)
}

pub(super) fn int_min_quotient(ctx: &mut Ctx) -> Result<Vec<Detail>> {
    let mut out = Vec::new();
    for p in ctx.ps() {
        let above = if p < ctx.half() { Some(ctx.family(Min, p + 1, true, Omit)?) } else { None };
        for policy in policies(ctx) {
            let tag = if policy == Full { ", full special fiber" } else { "" };
            let int = ctx.family(Int, p, true, policy)?;
            let min = ctx.family(Min, p, true, policy)?;
            out.extend(map_details(&int, above.as_ref(), &min, map_fn(ctx, MapId::Pi(p)), &format!("p={p}, π on INT∩Fund{tag}"))?);
        }
    }
    Ok(out)
}

pub(super) fn equal(ctx: &mut Ctx) -> Result<Vec<Detail>> {
    let h = ctx.half();
    let mut out = eq_details(&ctx.family(Max, 1, true, Omit)?, &ctx.family(Int, 1, true, Omit)?, "MAX = INT on Fund(1)");
    out.extend(eq_details(&ctx.family(Int, h, true, Omit)?, &ctx.family(Min, h, true, Omit)?, &format!("INT = MIN on Fund({h})")));
    Ok(out)
}

/// Generic dimension of the minimal family on `Fund(q)`: the fundamental
/// dimension one rank down.
fn generic_min_fund(n: usize, q: usize) -> usize {
    if q == 0 || q > n / 2 {
        return 0;
    }
    binomial(n - 2, q - 1) - binomial_i(n - 2, q as i64 - 3)
}

pub(super) fn composition(ctx: &mut Ctx) -> Result<Vec<Detail>> {
    let n = ctx.n();
    let h = ctx.half();
    let generic = ctx.generic_interior();
    let mut out = Vec::new();
    let mut mins = Vec::with_capacity(h + 2);
    for q in 0..=h + 1 {
        mins.push(if q == 0 || q > h { None } else { Some(ctx.family(Min, q, true, Omit)?) });
    }
    for (q, fam) in mins.iter().enumerate().take(h + 1).skip(1) {
        let fam = fam.as_ref().expect("in range");
        let mut seen: Vec<usize> = generic.iter().map(|k| fam.fiber(k).expect("same window").dim()).collect();
        seen.sort_unstable();
        seen.dedup();
        let actual = match seen.as_slice() {
            [d] => Cell::from(*d),
            _ => Cell::Text(format!("varies {seen:?}")),
        };
        out.push(Detail::compare(None, generic_min_fund(n, q), actual, format!("m{q}: generic dim of MIN on Fund({q})")));
    }
    for p in ctx.ps() {
        let m = |q: usize| generic_min_fund(n, q);
        let book = m(p - 1) + 2 * m(p) + m(p + 1);
        out.push(Detail::compare(None, fundamental_dim(n, p), book, format!("p={p}, m(p-1) + 2 m(p) + m(p+1)")));
        let min = ctx.family(Min, p, true, Omit)?;
        let int = ctx.family(Int, p, true, Omit)?;
        let max = ctx.family(Max, p, true, Omit)?;
        let whole = fund_full(ctx, p)?;
        let chain_ok = int.containment_failures(&min)?.is_empty()
            && max.containment_failures(&int)?.is_empty()
            && whole.containment_failures(&max)?.is_empty();
        out.push(Detail::claim(None, chain_ok, format!("p={p}, MIN ⊆ INT ⊆ MAX ⊆ Fund")));
        let dim_at = |f: &Option<GradedFamily>, k: &Degree| f.as_ref().map_or(0, |f| f.fiber(k).expect("same window").dim());
        for k in &generic {
            let (a, b, c) = (dim_at(&mins[p - 1], k), dim_at(&mins[p], k), dim_at(&mins[p + 1], k));
            let want = [b, b + c, b + c + a, 2 * b + c + a];
            let got = [&min, &int, &max, &whole].map(|f| f.fiber(k).expect("same window").dim());
            out.push(Detail::compare(Some(k), tuple(&want), tuple(&got), format!("p={p}, chain (min,int,max,full)")));
        }
        if let Some(s) = ctx.special() {
            let hat = ctx.family(Min, p, true, Full)?;
            let d = hat.fiber(&s).expect("same window").dim() - min.fiber(&s).expect("same window").dim();
            out.push(Detail::compare(Some(&s), fundamental_dim(n, p), d, format!("p={p}, hat MIN over MIN at the special fiber")));
        }
    }
    Ok(out)
}
