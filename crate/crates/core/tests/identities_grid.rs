use std::time::Instant;

use cesaro_core::identities::{standard_suite, verify_funda, verify_key};

#[test]
fn standard_grid_passes() {
    let start = Instant::now();
    let reports = standard_suite(1e-12).unwrap();
    let elapsed = start.elapsed();
    let mut worst = 0.0_f64;
    for r in &reports {
        assert!(r.passes(1e-9), "{r:?}");
        if r.tail_bound == 0.0 {
            worst = worst.max(r.rel_err);
        }
    }
    println!("{} reports, worst finite rel_err {worst:e}, {elapsed:?}", reports.len());
}

#[test]
fn reports_are_order_independent() {
    let params = [(0.3, 0.5, 1.0, 5), (2.6, 2.5, 0.5, 60), (0.7, 1.0, 2.5, 25)];
    let forward: Vec<_> = params
        .iter()
        .map(|&(a, v, r, m)| (verify_key(a, v, r, m).unwrap(), verify_funda(a, v, r, m).unwrap()))
        .collect();
    let mut backward: Vec<_> = params
        .iter()
        .rev()
        .map(|&(a, v, r, m)| (verify_key(a, v, r, m).unwrap(), verify_funda(a, v, r, m).unwrap()))
        .collect();
    backward.reverse();
    assert_eq!(forward, backward);
}
