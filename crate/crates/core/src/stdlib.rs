//! Initial and derived functions, each paired with its arithmetic meaning.

use std::fmt;

use num_bigint::BigUint;

use crate::derived::{const_nat, if_zero, iso, numeral_u64};
use crate::eval::{EvalError, EvalOptions, Outcome};
use crate::minimize::{kleene_min, safe_min};
use crate::objects::{LevelIndex, ObjExpr};
use crate::term::{Bit, Term};
use crate::typecheck::elaborate;
use crate::value::point_from_naturals;
use crate::Config;

/// Reference semantics on plain integers; `None` means the function
/// diverges at that input.
pub type Oracle = fn(&[u64]) -> Option<u64>;

#[derive(Clone)]
pub struct StdLibEntry {
    pub name: String,
    pub term: Term,
    pub reference_semantics: String,
    pub arity: usize,
    pub oracle: Oracle,
}

impl fmt::Debug for StdLibEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("StdLibEntry")
            .field("name", &self.name)
            .field("reference_semantics", &self.reference_semantics)
            .field("arity", &self.arity)
            .finish()
    }
}

impl StdLibEntry {
    /// Evaluates on naturals filling the domain's `N` slots left to right.
    pub fn run(
        &self,
        args: &[u64],
        cfg: &Config,
        opts: &EvalOptions,
    ) -> Result<Outcome, EvalError> {
        let p = elaborate(&self.term, cfg)?;
        let nats: Vec<BigUint> = args.iter().map(|&a| BigUint::from(a)).collect();
        let v = point_from_naturals(&p.dom_shape, &nats).ok_or_else(|| {
            EvalError::Shape(format!("{} takes {} arguments", self.name, self.arity))
        })?;
        Ok(p.run(&v, opts)?.outcome)
    }
}

fn entry(name: &str, term: Term, semantics: &str, arity: usize, oracle: Oracle) -> StdLibEntry {
    StdLibEntry {
        name: name.to_string(),
        term,
        reference_semantics: semantics.to_string(),
        arity,
        oracle,
    }
}

fn bit_length(x: u64) -> u64 {
    u64::from(64 - x.leading_zeros())
}

/// `π_j` out of the right-nested tensor `N[ix]^m`, `1 <= j <= m`.
pub fn proj(j: usize, m: usize, ix: LevelIndex) -> Term {
    assert!(1 <= j && j <= m, "projection index out of range");
    let n = ObjExpr::Nat(ix);
    if m == 1 {
        return Term::Id(n);
    }
    let rest = ObjExpr::power(ix, m - 1);
    if j == 1 {
        Term::Proj1(n, rest)
    } else {
        Term::comp(proj(j - 1, m - 1, ix), Term::Proj2(n, rest))
    }
}

/// `p(m) = ⌊m/2⌋` as `FR(0, π)`.
pub fn pred(ix: LevelIndex) -> Term {
    let n = ObjExpr::Nat(ix);
    Term::fr(Term::Zero(ix), Term::Proj1(n, ObjExpr::Top), ix)
}

/// `1 ∸ a` by flat recursion.
pub fn monus1(ix: LevelIndex) -> Term {
    let n = ObjExpr::Nat(ix);
    Term::fr(
        numeral_u64(1, ix),
        const_nat(ObjExpr::tensor(n, ObjExpr::Top), 0, ix),
        ix,
    )
}

/// Conditional on test for zero `Z(a; b, c) : N[1,p] ⊗ N[0,p]² → N[0,p]`,
/// `b` when `a = 0` and `c` otherwise, by flat recursion at `N[1,p]`.
pub fn zero_test(p: u8) -> Term {
    zero_test_at(LevelIndex::new(1, p), p)
}

fn zero_test_at(rec: LevelIndex, p: u8) -> Term {
    let n0 = ObjExpr::nat(0, p);
    let x = ObjExpr::tensor(n0.clone(), n0.clone());
    Term::fr(
        Term::Proj1(n0.clone(), n0.clone()),
        Term::comp(
            Term::Proj2(n0.clone(), n0),
            Term::Proj2(ObjExpr::Nat(rec), x),
        ),
        rec,
    )
}

/// The composite from the recursion diagram with step `1 ∸`: flips a bit
/// once per binary digit, so it computes the parity of the bit length.
pub fn mod2_digits(p: u8) -> Term {
    Term::srr(
        Term::Zero(LevelIndex::new(0, p)),
        monus1(LevelIndex::new(0, p)),
        p,
    )
}

/// `C` assembled as `Z ∘ (mod 2 ⊗ id)`; with the literal `mod 2` it tests
/// the parity of the bit length of `a` rather than of `a`.
pub fn c_digits(p: u8) -> Term {
    let n0 = ObjExpr::nat(0, p);
    let n1 = ObjExpr::nat(1, p);
    let bc = ObjExpr::tensor(n0.clone(), n0.clone());
    Term::seq([
        iso(
            ObjExpr::tensor(n1.clone(), bc.clone()),
            ObjExpr::tensor(ObjExpr::tensor(n1, ObjExpr::Top), bc.clone()),
        ),
        Term::par(mod2_digits(p), Term::Id(bc)),
        zero_test_at(LevelIndex::new(0, p), p),
    ])
}

/// `C(a; b, c)`: `b` when `a` is even, `c` otherwise.
pub fn cond(ix: LevelIndex) -> Term {
    Term::Cond(ix)
}

/// `(x; b) ↦ |x| ∸ b` with `|x|` the binary length of `x`, by safe
/// recursion on `x` over the state `(b', acc)`.
pub fn bitlen_monus(p: u8) -> Term {
    let ix = LevelIndex::new(0, p);
    let n0 = ObjExpr::Nat(ix);
    let y = ObjExpr::tensor(n0.clone(), n0.clone());
    let step = if_zero(
        &y,
        Term::Proj1(n0.clone(), n0.clone()),
        ix,
        Term::par(Term::Id(n0.clone()), Term::Incr(ix)),
        Term::par(Term::Id(n0.clone()), Term::Proj2(n0.clone(), n0.clone())),
    );
    let base = Term::pairing(
        n0.clone(),
        Term::Id(n0.clone()),
        const_nat(n0.clone(), 0, ix),
    );
    Term::comp(Term::Proj2(n0.clone(), n0), Term::srr(base, step, p))
}

/// `b ↦ C(b, 1, 0)` on the search variable, ignoring `x : N[1,p]`.
pub fn parity_flip(p: u8) -> Term {
    let ix = LevelIndex::new(0, p);
    let n0 = ObjExpr::Nat(ix);
    let st = ObjExpr::tensor(ObjExpr::nat(1, p), n0.clone());
    Term::comp(
        Term::Cond(ix),
        Term::pairing(
            st.clone(),
            Term::Proj2(ObjExpr::nat(1, p), n0),
            Term::pairing(
                st.clone(),
                const_nat(st.clone(), 1, ix),
                const_nat(st, 0, ix),
            ),
        ),
    )
}

/// Entries at minimization index `p`; safe arguments live in `N[0,p]`,
/// recursion arguments of the level-one schemes in `N[1,p]`.
pub fn stdlib_level(p: u8) -> Vec<StdLibEntry> {
    let cfg = Config::with_levels(p + 1);
    let ix = LevelIndex::new(0, p);
    let mut out = vec![
        entry("zero", Term::Zero(ix), "() ↦ 0", 0, |_| Some(0)),
        entry("succ1", Term::Succ(Bit::S1, ix), "m ↦ 2m", 1, |a| {
            Some(2 * a[0])
        }),
        entry("succ2", Term::Succ(Bit::S2, ix), "m ↦ 2m+1", 1, |a| {
            Some(2 * a[0] + 1)
        }),
        entry("pred", pred(ix), "m ↦ ⌊m/2⌋", 1, |a| Some(a[0] / 2)),
        entry("monus1", monus1(ix), "a ↦ 1 ∸ a", 1, |a| {
            Some(1u64.saturating_sub(a[0]))
        }),
        entry(
            "Z",
            zero_test(p),
            "(a; b, c) ↦ b if a = 0 else c",
            3,
            |a| Some(if a[0] == 0 { a[1] } else { a[2] }),
        ),
        entry(
            "mod2digits",
            mod2_digits(p),
            "a ↦ |a| mod 2 (bit-length parity)",
            1,
            |a| Some(bit_length(a[0]) % 2),
        ),
        entry(
            "C",
            cond(ix),
            "(a, b, c) ↦ b if a mod 2 = 0 else c",
            3,
            |a| Some(if a[0] % 2 == 0 { a[1] } else { a[2] }),
        ),
        entry(
            "c_digits",
            c_digits(p),
            "(a; b, c) ↦ b if |a| mod 2 = 0 else c",
            3,
            |a| {
                Some(if bit_length(a[0]).is_multiple_of(2) {
                    a[1]
                } else {
                    a[2]
                })
            },
        ),
        entry(
            "bitlen_monus",
            bitlen_monus(p),
            "(x; b) ↦ |x| ∸ b",
            2,
            |a| Some(bit_length(a[0]).saturating_sub(a[1])),
        ),
    ];
    for m in 1..=3 {
        for j in 1..=m {
            let oracle: Oracle = match j {
                1 => |a| Some(a[0]),
                2 => |a| Some(a[1]),
                _ => |a| Some(a[2]),
            };
            out.push(entry(
                &format!("proj{j}of{m}"),
                proj(j, m, ix),
                &format!("π_{j}"),
                m,
                oracle,
            ));
        }
    }
    out.push(entry(
        "kleene_bitlen",
        kleene_min(&bitlen_monus(p), &cfg).expect("well-typed search"),
        "x ↦ μb. |x| ∸ b = 0, i.e. |x|",
        1,
        |a| Some(bit_length(a[0])),
    ));
    out.push(entry(
        "safe_min_parity",
        safe_min(&parity_flip(p), &cfg).expect("well-typed search"),
        "x ↦ s²(μb. C(b, 1, 0) even) = 3",
        1,
        |_| Some(3),
    ));
    out
}

pub fn stdlib() -> Vec<StdLibEntry> {
    stdlib_level(0)
}

pub fn lookup(name: &str, p: u8) -> Option<StdLibEntry> {
    stdlib_level(p).into_iter().find(|e| e.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let cfg = Config::default();
        let opts = EvalOptions::with_fuel(100_000);
        let run = |name: &str, args: &[u64]| {
            lookup(name, 0)
                .unwrap()
                .run(args, &cfg, &opts)
                .unwrap()
                .as_u64()
        };
        assert_eq!(run("pred", &[13]), Some(6));
        assert_eq!(run("pred", &[0]), Some(0));
        assert_eq!(run("C", &[4, 7, 9]), Some(7));
        assert_eq!(run("C", &[5, 7, 9]), Some(9));
        assert_eq!(run("mod2digits", &[13]), Some(0));
    }

    #[test]
    fn entries_match_oracles_on_small_inputs() {
        let cfg = Config::default();
        let opts = EvalOptions::with_fuel(100_000);
        for p in 0..3 {
            for e in stdlib_level(p) {
                let args_list: Vec<Vec<u64>> = match e.arity {
                    0 => vec![vec![]],
                    1 => (0..20).map(|a| vec![a]).collect(),
                    2 => (0..10)
                        .flat_map(|a| (0..6).map(move |b| vec![a, b]))
                        .collect(),
                    _ => (0..6).map(|a| vec![a, 3, 8]).collect(),
                };
                for args in args_list {
                    let got = e.run(&args, &cfg, &opts).unwrap().as_u64();
                    assert_eq!(got, (e.oracle)(&args), "{} at {args:?}", e.name);
                }
            }
        }
    }

    #[test]
    fn depths() {
        let cfg = Config::default();
        for e in stdlib() {
            let d = crate::typecheck::classify(&e.term, &cfg).unwrap();
            let want = u32::from(e.name.starts_with("kleene") || e.name.starts_with("safe_min"));
            assert_eq!(d, want, "{}", e.name);
        }
    }
}
