//! One line per acceptance criterion, then a single assertion over all of
//! them. Every criterion is exact; the only tolerance is the time budget of
//! the first one.

use std::io::Write;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use slmod::cli::{parse_config, RunConfig};
use slmod::commands::execute;
use slmod::exterior::{fundamental_subspace, theta_matrix};
use slmod::invariant::small_algebra;
use slmod::linalg::{rank, Scalar, Vector};
use slmod::maps::{family_fiber, FamilyKind};
use slmod::registry::{oracle_fiber_dims, run_check};
use slmod::report::{emit, CheckParams, Format, ReportDocument, Status};
use slmod::torus::AlgebraKind;

/// Failing records tolerated by any criterion.
const MAX_FAILS: usize = 0;
/// Wall-clock budget for the fundamental dimension table.
const FUND_DIM_BUDGET: Duration = Duration::from_secs(1);
/// Random generic fibers per rank for the hand-written dimension formulas.
const FORMULA_SAMPLES: usize = 25;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn binom(n: usize, k: i64) -> usize {
    if k < 0 || k as usize > n {
        return 0;
    }
    let k = k as usize;
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn betas(n: usize) -> [Vector; 2] {
    [Vector::zeros(n), CheckParams::half_beta(n)]
}

/// Runs `ids` on every parameter set and returns the number of records.
fn run_all(ids: &[&str], params: &[CheckParams]) -> Outcome {
    let mut records = 0;
    for id in ids {
        for p in params {
            let r = run_check(id, p).map_err(|e| format!("{id} N={}: {e}", p.n))?;
            let fails: Vec<_> = r.failures().collect();
            if fails.len() > MAX_FAILS || r.status == Status::Fail {
                let first = fails.first().map(|d| format!("{:?} {} vs {}", d.degree, d.expected, d.actual));
                return Err(format!("{id} N={} beta={}: {} failing records, first {first:?}", p.n, p.beta, fails.len()));
            }
            if r.status != Status::Pass {
                return Err(format!("{id} N={} beta={}: status {}", p.n, p.beta, r.status));
            }
            records += r.details.len();
        }
    }
    Ok(format!("{records} records"))
}

fn grid(ns: &[(usize, i64)]) -> Vec<CheckParams> {
    let mut out = Vec::new();
    for &(n, d) in ns {
        for b in betas(n) {
            out.push(CheckParams::new(n).with_window(d).with_beta(b));
        }
    }
    out
}

fn random_vector(rng: &mut ChaCha8Rng, n: usize) -> Vector {
    Vector((0..n).map(|_| Scalar::from_int(rng.gen_range(-7..=7))).collect())
}

fn fund_dims() -> Outcome {
    let t = Instant::now();
    let mut rows = 0;
    for n in [2usize, 4, 6] {
        for p in 1..=n / 2 {
            let got = fundamental_subspace(n, p).map_err(|e| e.to_string())?.dim();
            let want = binom(n, p as i64) - binom(n, p as i64 - 2);
            if got != want {
                return Err(format!("N={n} p={p}: {got} != {want}"));
            }
            rows += 1;
        }
    }
    let took = t.elapsed();
    if took > FUND_DIM_BUDGET {
        return Err(format!("took {took:?}"));
    }
    run_all(&["fund-dim"], &[CheckParams::new(2), CheckParams::new(4), CheckParams::new(6)])?;
    Ok(format!("{rows} (N, p) pairs in {took:?}"))
}

fn theta_iso() -> Outcome {
    let m = theta_matrix(4, 3).map_err(|e| e.to_string())?;
    let r = rank(&m);
    if r != 4 {
        return Err(format!("rank {r}"));
    }
    run_all(&["theta-iso"], &[CheckParams::new(4)])?;
    Ok("rank 4".into())
}

fn module_maps() -> Outcome {
    run_all(&["module-maps"], &grid(&[(4, 2)]))
}

/// The generic fiber dimensions from the binomial formulas, against the
/// family builders and the oracle at random points.
fn generic_formulas(n: usize, rng: &mut ChaCha8Rng) -> Result<usize, String> {
    let mut count = 0;
    for _ in 0..FORMULA_SAMPLES {
        let x = random_vector(rng, n);
        if x.is_zero() {
            continue;
        }
        for p in 1..n {
            let pi = p as i64;
            let want = [
                binom(n - 2, pi - 1),
                binom(n - 1, pi - 1),
                binom(n - 2, pi - 1) + binom(n - 2, pi),
                binom(n, pi) - binom(n - 2, pi - 1),
            ];
            let kinds = [FamilyKind::Min, FamilyKind::FullW, FamilyKind::Int, FamilyKind::Max];
            let mut got = [0; 4];
            for (g, kind) in got.iter_mut().zip(kinds) {
                *g = family_fiber(kind, p, &x).map_err(|e| e.to_string())?.dim();
            }
            let o = oracle_fiber_dims(n, p, &x).map_err(|e| e.to_string())?;
            if got != want || [o.min, o.fullw, o.int, o.max] != want {
                return Err(format!("N={n} p={p} x={x}: built {got:?}, oracle {:?}, formula {want:?}", [o.min, o.fullw, o.int, o.max]));
            }
            count += 1;
        }
    }
    Ok(count)
}

fn inclusion_chain() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut points = 0;
    for n in [4, 6] {
        points += generic_formulas(n, &mut rng)?;
    }
    let runs = run_all(&["inclusion-chain"], &grid(&[(4, 2), (6, 1)]))?;
    Ok(format!("{points} formula points, {runs}"))
}

fn fiberwise_equalities() -> Outcome {
    run_all(&["similar", "equal", "int-kernel"], &grid(&[(4, 2), (6, 1)]))
}

fn composition() -> Outcome {
    // generic fiber of the fundamental minimal family at N = 4
    let x = Vector::from_ints(&[3, -1, 2, 5]);
    let m = |p: usize| -> Result<usize, String> {
        let f = family_fiber(FamilyKind::Min, p, &x).map_err(|e| e.to_string())?;
        Ok(f.intersect(&fundamental_subspace(4, p).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?.dim())
    };
    let (m1, m2) = (m(1)?, m(2)?);
    let (v1, v2) = (binom(4, 1), binom(4, 2) - 1);
    if (m1, m2) != (1, 2) || 2 * m1 + m2 != v1 || m1 + 2 * m2 != v2 {
        return Err(format!("m1={m1} m2={m2}, fundamental dims {v1}, {v2}"));
    }
    let runs = run_all(&["composition"], &grid(&[(4, 2)]))?;
    Ok(format!("m1=1 m2=2, {runs}"))
}

fn probes() -> Outcome {
    let params: Vec<CheckParams> = grid(&[(4, 2)]).into_iter().map(|p| p.with_samples(100)).collect();
    run_all(&["irreducible-min", "uniqueness", "generation"], &params)
}

fn homology() -> Outcome {
    run_all(&["derham", "fsq-homology", "fsq-fund-homology"], &grid(&[(4, 2)]))
}

fn quadratic_predicates() -> Outcome {
    let params = [CheckParams::new(2), CheckParams::new(4)];
    run_all(&["J-char", "LW", "LS"], &params)
}

fn rank_two_sym2() -> Outcome {
    run_all(&["criterion-sym2", "TW", "TS"], &grid(&[(2, 3)]))
}

fn witt_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in [3usize, 4] {
        for _ in 0..5 {
            let x = random_vector(&mut rng, n);
            if x.is_zero() {
                continue;
            }
            let dim = small_algebra(AlgebraKind::W, &x).map_err(|e| e.to_string())?.dim();
            if dim != (n - 1) * (n - 1) {
                return Err(format!("N={n} x={x}: small algebra dim {dim}"));
            }
        }
    }
    run_all(&["invariances-W", "restrict-W", "unique-W", "classify-W"], &grid(&[(3, 2), (4, 2)]))
}

fn report_bytes(config: &RunConfig, threads: usize) -> Result<Vec<u8>, String> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().map_err(|e| e.to_string())?;
    let results = pool.install(|| execute(config)).map_err(|e| e.to_string())?;
    emit(&ReportDocument::new(config.clone(), results), Format::Json).map_err(|e| e.to_string())
}

/// Window 1 and 10 samples keep the two runs short; the grid and the
/// report path are the ones the default run uses.
fn determinism() -> Outcome {
    let config = parse_config(["slmod", "check-all", "--window", "1", "--samples", "10"]).map_err(|e| e.to_string())?;
    let a = report_bytes(&config, 1)?;
    let b = report_bytes(&config, 4)?;
    if a != b {
        return Err(format!("reports differ ({} vs {} bytes)", a.len(), b.len()));
    }
    Ok(format!("{} identical bytes", a.len()))
}

#[test]
fn acceptance_criteria() {
    let criteria: [Criterion; 12] = [
        ("fundamental dimension formula", fund_dims),
        ("middle contraction isomorphism", theta_iso),
        ("module-map suite", module_maps),
        ("inclusion chain and fiber dimensions", inclusion_chain),
        ("fiberwise equalities", fiberwise_equalities),
        ("composition bookkeeping", composition),
        ("irreducibility and uniqueness probes", probes),
        ("homology suite", homology),
        ("quadratic characterizations", quadratic_predicates),
        ("rank-two Sym² generation", rank_two_sym2),
        ("Witt classification suite", witt_suite),
        ("check-all determinism", determinism),
    ];
    let mut failed = Vec::new();
    let out = std::io::stdout();
    writeln!(out.lock()).expect("stdout");
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = f();
        let took = t.elapsed().as_secs_f64();
        let line = match &outcome {
            Ok(msg) => format!("PASS {:>2} {name}: {msg} ({took:.1}s)", i + 1),
            Err(msg) => format!("FAIL {:>2} {name}: {msg} ({took:.1}s)", i + 1),
        };
        writeln!(out.lock(), "{line}").expect("stdout");
        if outcome.is_err() {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
