use dmc_bench::{wide, workloads};
use dmc_core::{EvalOptions, Outcome};

#[test]
fn every_workload_finishes() {
    for w in workloads() {
        let e = w.program.run(&w.input, &EvalOptions::default()).unwrap();
        assert!(matches!(e.outcome, Outcome::Done(_)), "{}", w.name);
    }
}

#[test]
fn wide_has_the_requested_length() {
    for bits in [1, 2, 7, 64, 256] {
        assert_eq!(wide(bits).bits(), bits);
    }
}
