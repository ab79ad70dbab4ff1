//! Closure probes: which families single vectors generate inside the window.

use crate::error::Result;
use crate::graded::{closure, is_invariant, FiberType, Generator, GradedFamily};
use crate::invariant::operator_table;
use crate::linalg::{Subspace, Vector};
use crate::maps::{FamilyKind, SpecialPolicy};
use crate::report::Detail;
use crate::torus::{AlgebraKind, Degree};

use super::families::{fund_full, full_family};
use super::{Ctx, Prober};

use FamilyKind::{Int, Max, Min};

/// Covered/total counts per seed degree, in order of first appearance.
#[derive(Default)]
struct Tally {
    rows: Vec<(Degree, usize, usize, Option<Degree>)>,
}

impl Tally {
    fn add(&mut self, k: &Degree, miss: Option<Degree>) {
        let i = match self.rows.iter().position(|r| &r.0 == k) {
            Some(i) => i,
            None => {
                self.rows.push((k.clone(), 0, 0, None));
                self.rows.len() - 1
            }
        };
        let row = &mut self.rows[i];
        row.1 += 1;
        match miss {
            None => row.2 += 1,
            Some(m) => {
                row.3.get_or_insert(m);
            }
        }
    }

    fn details(self, note: &str) -> Vec<Detail> {
        self.rows
            .into_iter()
            .map(|(k, total, covered, miss)| {
                let note = match miss {
                    Some(m) => format!("{note}; seeds covered, first miss at {m}"),
                    None => format!("{note}; seeds covered"),
                };
                Detail::compare(Some(&k), total, covered, note)
            })
            .collect()
    }
}

fn invariance_detail(fam: &GradedFamily, gens: &[Generator], note: &str) -> Result<Detail> {
    let rep = is_invariant(fam, gens)?;
    let at = rep.witnesses.first().map(|w| w.degree.clone());
    Ok(Detail::claim(at.as_ref(), rep.holds, format!("{note} is invariant")))
}

fn run_seeds(prober: &mut Prober, seeds: &[(Degree, Vector)], note: &str) -> Result<Vec<Detail>> {
    let mut tally = Tally::default();
    for (k, v) in seeds {
        tally.add(k, prober.covers(k, v)?);
    }
    Ok(tally.details(note))
}

/// Every basis vector of the target at every interior degree.
fn basis_seeds(ctx: &Ctx, fam: &GradedFamily, with_special: bool) -> Vec<(Degree, Vector)> {
    let mut out = Vec::new();
    for (k, f) in fam.iter() {
        if !ctx.window.is_interior(&k) || (!with_special && ctx.is_special(&k)) {
            continue;
        }
        out.extend(f.basis().iter().map(|b| (k.clone(), b.clone())));
    }
    out
}

/// `count` random vectors of `outer` outside `inner`, at random generic
/// interior degrees where such vectors exist.
fn random_seeds(ctx: &mut Ctx, outer: &GradedFamily, inner: Option<&GradedFamily>, count: usize) -> Result<Vec<(Degree, Vector)>> {
    let degrees: Vec<Degree> = ctx
        .generic_interior()
        .into_iter()
        .filter(|k| {
            let o = outer.fiber(k).expect("same window");
            inner.map_or(Ok(!o.is_zero()), |i| i.fiber(k).expect("same window").contains_subspace(o).map(|c| !c)).unwrap_or(false)
        })
        .collect();
    let mut out = Vec::new();
    if degrees.is_empty() {
        return Ok(out);
    }
    for _ in 0..count {
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

/// The `Sym²` module over the given algebra: every vector generates all of it.
fn sym2_irreducible(ctx: &mut Ctx, kind: AlgebraKind) -> Result<Vec<Detail>> {
    let spec = ctx.spec(kind, FiberType::Sym2)?;
    let gens = ctx.gens(kind)?;
    let full = FiberType::Sym2.full(ctx.n())?;
    let target = GradedFamily::from_fn(spec.clone(), ctx.window.clone(), |_| Ok(full.clone()))?;
    let mut seeds = basis_seeds(ctx, &target, true);
    let interior: Vec<Degree> = ctx.window.degrees().into_iter().filter(|k| ctx.window.is_interior(k)).collect();
    for _ in 0..ctx.params.samples {
        let k = ctx.pick(&interior).clone();
        let v = ctx.random_in(&full).expect("nonzero");
        seeds.push((k, v));
    }
    let mut prober = Prober::new(&spec, &gens, &target).with_special();
    run_seeds(&mut prober, &seeds, &format!("Sym² over {kind}, closure is the full module"))
}

pub(super) fn criterion_sym2(ctx: &mut Ctx) -> Result<Vec<Detail>> {
    sym2_irreducible(ctx, AlgebraKind::H)
}

pub(super) fn tw(ctx: &mut Ctx) -> Result<Vec<Detail>> {
    sym2_irreducible(ctx, AlgebraKind::W)
}

pub(super) fn ts(ctx: &mut Ctx) -> Result<Vec<Detail>> {
    sym2_irreducible(ctx, AlgebraKind::S)
}

/// The degree-zero module: irreducible unless `-β` is a lattice point, when
/// it splits into the `-β` line and its complement.
pub(super) fn cor_p0(ctx: &mut Ctx) -> Result<Vec<Detail>> {
    let spec = ctx.spec(AlgebraKind::H, FiberType::Scalar)?;
    let gens = ctx.gens(AlgebraKind::H)?;
    let full = full_family(ctx, FiberType::Scalar)?;
    let one = Vector::unit(1, 0);
    let Some(s) = ctx.special().filter(|_| ctx.beta_integral()) else {
        let seeds = basis_seeds(ctx, &full, true);
        let mut prober = Prober::new(&spec, &gens, &full).with_special();
        return run_seeds(&mut prober, &seeds, "scalar module, closure is everything");
    };
    let complement = full.with_fiber(&s, Subspace::zero(1))?;
    let line = GradedFamily::from_fn(spec.clone(), ctx.window.clone(), |k| {
        Ok(if k == &s { Subspace::full(1) } else { Subspace::zero(1) })
    })?;
    let mut out = vec![
        invariance_detail(&complement, &gens, "complement of the -β line")?,
        invariance_detail(&line, &gens, "-β line")?,
    ];
    let seeds = basis_seeds(ctx, &full, false);
    let mut prober = Prober::new(&spec, &gens, &complement);
    out.extend(run_seeds(&mut prober, &seeds, "scalar module, closure is the complement of the -β line")?);
    let c = closure(&spec, &[(s.clone(), one)], &ctx.window, &gens)?;
    let extra: usize = c.iter().filter(|(k, _)| k != &s).map(|(_, f)| f.dim()).sum();
    out.push(Detail::compare(Some(&s), 0usize, extra, "closure of the -β line, dimension off the line"));
    Ok(out)
}

pub(super) fn irreducible_min(ctx: &mut Ctx) -> Result<Vec<Detail>> {
    let gens = ctx.gens(AlgebraKind::H)?;
    let mut out = Vec::new();
    for p in ctx.ps() {
        let min = ctx.family(Min, p, true, SpecialPolicy::Omit)?;
        let note = format!("min on Fund({p})");
        out.push(invariance_detail(&min, &gens, &note)?);
        let seeds = basis_seeds(ctx, &min, false);
        let mut prober = Prober::new(min.spec(), &gens, &min);
        out.extend(run_seeds(&mut prober, &seeds, &format!("{note}, closure of each basis vector is the family"))?);
    }
    Ok(out)
}

pub(super) fn uniqueness(ctx: &mut Ctx) -> Result<Vec<Detail>> {
    let gens = ctx.gens(AlgebraKind::H)?;
    let mut out = Vec::new();
    for p in ctx.ps() {
        let min = ctx.family(Min, p, true, SpecialPolicy::Omit)?;
        let full = fund_full(ctx, p)?;
        let seeds = random_seeds(ctx, &full, None, ctx.params.samples)?;
        let mut prober = Prober::new(min.spec(), &gens, &min);
        out.extend(run_seeds(&mut prober, &seeds, &format!("random vectors of Fund({p}), closure contains min"))?);
    }
    Ok(out)
}

pub(super) fn generation(ctx: &mut Ctx) -> Result<Vec<Detail>> {
    let gens = ctx.gens(AlgebraKind::H)?;
    let mut out = Vec::new();
    for p in ctx.ps() {
        let max = ctx.family(Max, p, true, SpecialPolicy::Omit)?;
        let full = fund_full(ctx, p)?;
        let seeds = random_seeds(ctx, &full, Some(&max), ctx.params.samples)?;
        let mut prober = Prober::new(full.spec(), &gens, &full).with_special();
        out.extend(run_seeds(&mut prober, &seeds, &format!("vectors of Fund({p}) outside max, closure is everything"))?);
    }
    Ok(out)
}

/// Ω moves any vector of the maximal family into the intermediate one, and
/// a submodule strictly above the minimal one meets the intermediate family
/// in more than the minimal one.
pub(super) fn between(ctx: &mut Ctx) -> Result<Vec<Detail>> {
    let n = ctx.half();
    let gens = ctx.gens(AlgebraKind::H)?;
    let table = operator_table(AlgebraKind::H, ctx.beta(), &ctx.window, ctx.params.rbound)?;
    let mut out = Vec::new();
    for p in ctx.ps() {
        let max = ctx.family(Max, p, true, SpecialPolicy::Omit)?;
        let int = ctx.family(Int, p, true, SpecialPolicy::Omit)?;
        let fiber = max.spec().fiber;
        let mut bad = None;
        for ((k, m), (ops, i)) in max.iter().zip(table.iter().zip(int.fibers())) {
            for a in ops {
                if !i.contains_subspace(&m.image_under(&fiber.act_matrix(a)?)?)? {
                    bad.get_or_insert(k.clone());
                }
            }
        }
        out.push(Detail::claim(bad.as_ref(), bad.is_none(), format!("Ω maps max into int on Fund({p})")));
        if p == 1 || p == n {
            continue;
        }
        let min = ctx.family(Min, p, true, SpecialPolicy::Omit)?;
        let seeds = random_seeds(ctx, &max, Some(&min), ctx.params.samples.min(10))?;
        let mut tally = Tally::default();
        for (k, v) in &seeds {
            let c = closure(max.spec(), &[(k.clone(), v.clone())], &ctx.window, &gens)?;
            let mut grows = false;
            for ((d, cf), (i, mn)) in c.iter().zip(int.fibers().iter().zip(min.fibers())) {
                if ctx.window.is_interior(&d) && !ctx.is_special(&d) && cf.intersect(i)?.dim() > mn.dim() {
                    grows = true;
                    break;
                }
            }
            tally.add(k, if grows { None } else { Some(k.clone()) });
        }
        out.extend(tally.details(&format!("vectors of max outside min on Fund({p}), closure meets int beyond min")));
    }
    Ok(out)
}

/// The chain of submodules of `Fund(p)`: each member is invariant and is
/// generated by any of its vectors outside the previous member.
pub(super) fn main_classification(ctx: &mut Ctx) -> Result<Vec<Detail>> {
    let n = ctx.half();
    let gens = ctx.gens(AlgebraKind::H)?;
    let count = ctx.params.samples.min(20);
    let mut out = Vec::new();
    for p in ctx.ps() {
        if p == 0 {
            out.extend(cor_p0(ctx)?);
            continue;
        }
        let mut chain: Vec<(String, GradedFamily)> = vec![("min".into(), ctx.family(Min, p, true, SpecialPolicy::Omit)?)];
        if 1 < p && p < n {
            chain.push(("int".into(), ctx.family(Int, p, true, SpecialPolicy::Omit)?));
        }
        chain.push(("max".into(), ctx.family(Max, p, true, SpecialPolicy::Omit)?));
        chain.push(("everything".into(), fund_full(ctx, p)?));
        for i in 0..chain.len() {
            let (name, fam) = &chain[i];
            let note = format!("{name} on Fund({p})");
            out.push(invariance_detail(fam, &gens, &note)?);
            let inner = if i == 0 { None } else { Some(&chain[i - 1].1) };
            let seeds = random_seeds(ctx, fam, inner, count)?;
            let mut prober = Prober::new(fam.spec(), &gens, fam);
            let what = match inner {
                None => format!("{note}, closure of its vectors is the family"),
                Some(_) => format!("{note}, closure of its vectors outside {} is the family", chain[i - 1].0),
            };
            out.extend(run_seeds(&mut prober, &seeds, &what)?);
        }
        if let Some(s) = ctx.special().filter(|_| ctx.beta_integral()) {
            let full = FiberType::Fund(p).full(ctx.n())?;
            let line = ctx.random_in(&full).expect("nonzero");
            let choices = [
                ("zero", Subspace::zero(full.ambient_dim())),
                ("a line", Subspace::span(full.ambient_dim(), &[line])?),
                ("everything", full.clone()),
            ];
            for (name, fam) in &chain[..chain.len() - 1] {
                for (w, sub) in &choices {
                    let glued = fam.with_fiber(&s, sub.clone())?;
                    out.push(invariance_detail(&glued, &gens, &format!("{name} on Fund({p}) with {w} at -β"))?);
                }
            }
        }
    }
    Ok(out)
}
