//! Enlarging the generator set from `max |r_i| <= 1` to `max |r_i| <= 2`
//! must not change any record of the closure-based checks.

use slmod::registry::run_check;
use slmod::report::{CheckParams, Status};

fn same_records(id: &str, params: CheckParams) {
    let narrow = run_check(id, &params).unwrap();
    let mut wide_params = params.clone();
    wide_params.rbound = 2;
    let wide = run_check(id, &wide_params).unwrap();
    assert_eq!(narrow.status, Status::Pass, "{id}");
    assert_eq!(narrow.details, wide.details, "{id} beta={}", params.beta);
}

#[test]
fn rank_two_checks_are_stable() {
    for id in ["criterion-sym2", "TW", "TS"] {
        for beta in [CheckParams::half_beta(2), slmod::linalg::Vector::zeros(2)] {
            same_records(id, CheckParams::new(2).with_window(3).with_beta(beta));
        }
    }
}

#[test]
fn fundamental_probes_are_stable() {
    for id in ["irreducible-min", "uniqueness", "generation", "cor-p0"] {
        // with β = 0 the only interior degree of window 1 is the special one
        same_records(id, CheckParams::new(4).with_window(1).with_beta(CheckParams::half_beta(4)).with_samples(10));
        same_records(id, CheckParams::new(4).with_window(2).with_samples(5));
    }
}

#[test]
fn witt_probes_are_stable() {
    for id in ["unique-W", "classify-W"] {
        same_records(id, CheckParams::new(3).with_window(1).with_samples(5));
    }
}
