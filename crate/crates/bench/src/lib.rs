//! Workloads shared by the benchmarks.

use num_bigint::BigUint;

use dmc_core::derived::{dist, numeral};
use dmc_core::stdlib::lookup;
use dmc_core::{elaborate, Config, LevelIndex, ObjExpr, Program, Term, Value};

pub struct Workload {
    pub name: &'static str,
    pub program: Program,
    pub input: Value,
}

fn build(name: &'static str, term: Term, input: Value) -> Workload {
    let program = elaborate(&term, &Config::default()).expect("workload typechecks");
    Workload {
        name,
        program,
        input,
    }
}

/// A natural with `bits` binary digits, alternating ones and zeros.
pub fn wide(bits: u64) -> BigUint {
    let mut n = BigUint::from(0u8);
    for i in 0..bits {
        if i % 2 == 0 {
            n.set_bit(i, true);
        }
    }
    n.set_bit(bits.saturating_sub(1), true);
    n
}

pub fn workloads() -> Vec<Workload> {
    let ix = LevelIndex::new(0, 0);
    let n = ObjExpr::Nat(ix);
    let std = |name: &str| lookup(name, 0).expect("library entry").term;
    vec![
        build(
            "numeral 2^16",
            numeral(&BigUint::from(1u32 << 16), ix),
            Value::Star,
        ),
        build(
            "pred",
            std("pred"),
            Value::pair(Value::nat(1 << 40), Value::Star),
        ),
        build(
            "bitlen_monus 256 bits",
            std("bitlen_monus"),
            Value::pair(Value::Nat(wide(256)), Value::nat(3)),
        ),
        build(
            "kleene_bitlen 64 bits",
            std("kleene_bitlen"),
            Value::Nat(wide(64)),
        ),
        build(
            "dist 64 bits",
            dist(ix, n.clone(), n),
            Value::pair(Value::Nat(wide(64)), Value::inr(Value::nat(9))),
        ),
    ]
}
