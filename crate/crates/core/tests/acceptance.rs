//! End-to-end acceptance run: one PASS/FAIL line per criterion.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rayon::prelude::*;

use dmc_core::derived::{const_nat, if_zero, iso, numeral, unary_pred};
use dmc_core::diagram::{
    all_functors, coalgebra_corpus, coherence_case, coherence_parameter_objects, eta_suite,
    min_square_suite, powers_suite, prop_dist_suite, witness_free,
};
use dmc_core::minimize::{kleene_min, safe_min};
use dmc_core::model2i::{printed_table, render_table, rule_entry, verify_model_equations};
use dmc_core::stdlib::{bitlen_monus, cond, lookup, mod2_digits, parity_flip, pred};
use dmc_core::{
    classify, elaborate, typecheck, Bit, Config, EvalOptions, LevelIndex, ObjExpr, Outcome, Term,
    TypeErrorKind, Value,
};

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || {
        format!("took {elapsed:.2?}, limit {limit:?}")
    })
}

fn run_u64(p: &dmc_core::Program, v: &Value, opts: &EvalOptions) -> Option<u64> {
    p.run(v, opts).ok()?.outcome.as_u64()
}

fn numerals() -> Verdict {
    let start = Instant::now();
    let cfg = Config::default();
    let opts = EvalOptions::default();
    let max = 1u64 << 16;
    for k in 0..=1 {
        for p in 0..cfg.levels {
            let ix = LevelIndex::new(k, p);
            let bad = (0..=max).into_par_iter().find_any(|&m| {
                let prog =
                    elaborate(&numeral(&BigUint::from(m), ix), &cfg).expect("numeral typechecks");
                run_u64(&prog, &Value::Star, &opts) != Some(m)
            });
            if let Some(m) = bad {
                return Err(format!("numeral {m} at N[{k},{p}] evaluates wrongly"));
            }
        }
    }
    within(start.elapsed(), Duration::from_secs(5))?;
    Ok(format!("m <= 2^16 at 6 indices in {:.2?}", start.elapsed()))
}

fn initial_functions() -> Verdict {
    let cfg = Config::default();
    let opts = EvalOptions::default();
    let ix = LevelIndex::new(0, 0);
    let s1 = elaborate(&Term::Succ(Bit::S1, ix), &cfg).unwrap();
    let s2 = elaborate(&Term::Succ(Bit::S2, ix), &cfg).unwrap();
    let pr = elaborate(&pred(ix), &cfg).unwrap();
    let bad = (0..=10_000u64).into_par_iter().find_any(|&m| {
        let v = Value::nat(m);
        run_u64(&s1, &v, &opts) != Some(2 * m)
            || run_u64(&s2, &v, &opts) != Some(2 * m + 1)
            || run_u64(&pr, &v, &opts) != Some(m / 2)
    });
    if let Some(m) = bad {
        return Err(format!("s1, s2 or pred wrong at {m}"));
    }
    let c = elaborate(&cond(ix), &cfg).unwrap();
    let bad = (0..=64u64).into_par_iter().find_map_any(|a| {
        for b in 0..=64u64 {
            for d in 0..=64u64 {
                let v = Value::pair(Value::nat(a), Value::pair(Value::nat(b), Value::nat(d)));
                let want = if a % 2 == 0 { b } else { d };
                if run_u64(&c, &v, &opts) != Some(want) {
                    return Some((a, b, d));
                }
            }
        }
        None
    });
    if let Some(x) = bad {
        return Err(format!("C wrong at {x:?}"));
    }
    Ok("s1, s2, pred on 0..=10^4; C on 65^3 triples".into())
}

fn distributivity() -> Verdict {
    let start = Instant::now();
    let cfg = Config::default();
    let opts = EvalOptions::with_fuel(1_000_000);
    let mut total = 0;
    for s in [
        prop_dist_suite(32, 8, &cfg, &opts),
        powers_suite(8, 8, &cfg, &opts),
    ] {
        ensure(s.passed(), || format!("{s}\n{}", s.failures.join("\n")))?;
        total += s.samples;
    }
    within(start.elapsed(), Duration::from_secs(30))?;
    Ok(format!(
        "{total} samples, 0 disagreements, 0 inconclusive in {:.2?}",
        start.elapsed()
    ))
}

fn coherence() -> Verdict {
    let cfg = Config::default();
    let opts = EvalOptions::default();
    let mut cases = 0;
    for f in all_functors(&cfg) {
        for p in 0..cfg.levels {
            for k in 0..=1 {
                let ix = LevelIndex::new(k, p);
                let objs = coherence_parameter_objects(p);
                for x in &objs {
                    for y in &objs {
                        let (d, _) =
                            coherence_case(f, ix, x, y, 4, 2, &cfg).map_err(|e| e.to_string())?;
                        let (jl, jr) = (typecheck(&d.left, &cfg), typecheck(&d.right, &cfg));
                        ensure(jl.is_ok() && jl == jr, || {
                            format!("{}: judgments {jl:?} vs {jr:?}", d.name)
                        })?;
                        cases += 1;
                    }
                }
            }
        }
    }
    let s = dmc_core::diagram::coherence_suite(32, 8, &cfg, &opts);
    ensure(s.passed(), || format!("{s}\n{}", s.failures.join("\n")))?;
    Ok(format!("{cases} equations with identical judgments; {s}"))
}

fn min_coalgebra() -> Verdict {
    let cfg = Config::default();
    let opts = EvalOptions::with_fuel(1_000_000);
    let corpus = coalgebra_corpus(64);
    ensure(corpus.len() == 10, || {
        format!("corpus has {} cases", corpus.len())
    })?;
    for case in &corpus {
        let prog = elaborate(&Term::min(case.body.clone(), Bit::S2, case.target), &cfg)
            .map_err(|e| format!("{}: {e}", case.name))?;
        for v in &case.samples {
            let got = run_u64(&prog, v, &opts);
            let want = (case.steps)(v);
            ensure(got == Some(want), || {
                format!("{} at {v}: count {got:?}, oracle {want}", case.name)
            })?;
        }
    }
    let s = min_square_suite(64, &cfg, &opts);
    ensure(s.passed(), || format!("{s}\n{}", s.failures.join("\n")))?;
    let wf = elaborate(&witness_free(), &cfg).unwrap();
    for fuel in [1u64, 17, 1000, 123_457] {
        let out = wf.eval(&Value::nat(5), fuel).map_err(|e| e.to_string())?;
        ensure(out == Outcome::FuelExhausted(fuel), || {
            format!("witness-free h at fuel {fuel}: {out}")
        })?;
    }
    Ok(format!(
        "10 coalgebras agree with native step counts; {s}; witness-free h exhausts exactly"
    ))
}

type Native = fn(u64, u64) -> u64;

fn bit_len(x: u64) -> u64 {
    u64::from(64 - x.leading_zeros())
}

fn kleene_family() -> Vec<(&'static str, Term, Native)> {
    let ix = LevelIndex::new(0, 0);
    let n0 = ObjExpr::Nat(ix);
    let n1 = ObjExpr::nat(1, 0);
    let st = ObjExpr::tensor(n1.clone(), n0.clone());
    let f1 = bitlen_monus(0);
    let f3 = const_nat(st.clone(), 1, ix);
    let f4 = Term::comp(
        Term::Cond(ix),
        Term::pairing(
            st.clone(),
            Term::comp(Term::EpsAt(n0.clone()), Term::Proj1(n1.clone(), n0.clone())),
            Term::pairing(st.clone(), f1.clone(), f3.clone()),
        ),
    );
    let halve = Term::comp(
        pred(ix),
        iso(n0.clone(), ObjExpr::tensor(n0.clone(), ObjExpr::Top)),
    );
    let f5 = Term::comp(f1.clone(), Term::par(Term::Id(n1), halve));
    vec![
        ("F1 |x| - b", f1, |x, b| bit_len(x).saturating_sub(b)),
        ("F2 C(b,1,0)", parity_flip(0), |_, b| u64::from(b % 2 == 0)),
        ("F3 const 1", f3, |_, _| 1),
        ("F4 C(x, F1, 1)", f4, |x, b| {
            if x % 2 == 0 {
                bit_len(x).saturating_sub(b)
            } else {
                1
            }
        }),
        ("F5 F1(x, b/2)", f5, |x, b| bit_len(x).saturating_sub(b / 2)),
    ]
}

fn search(f: Native, x: u64, bound: u64, accept: fn(u64) -> bool) -> Option<u64> {
    (0..=bound).find(|&b| accept(f(x, b)))
}

fn minimization() -> Verdict {
    let cfg = Config::default();
    let witness_bound = 128;
    let unbounded = EvalOptions::with_fuel(1_000_000);
    let mut checked = 0usize;
    for (name, f, native) in kleene_family() {
        let km = elaborate(
            &kleene_min(&f, &cfg).map_err(|e| format!("{name}: {e}"))?,
            &cfg,
        )
        .unwrap();
        let sm = elaborate(
            &safe_min(&f, &cfg).map_err(|e| format!("{name}: {e}"))?,
            &cfg,
        )
        .unwrap();
        for x in 0..=64u64 {
            let v = Value::nat(x);
            let zero = search(native, x, witness_bound, |y| y == 0);
            let even = search(native, x, witness_bound, |y| y % 2 == 0);
            match zero {
                Some(b) => {
                    let got = run_u64(&km, &v, &unbounded);
                    ensure(got == Some(b), || {
                        format!("{name} kleene at {x}: {got:?}, oracle {b}")
                    })?;
                }
                None => {
                    let small = EvalOptions::with_fuel(20_000);
                    let out = km.run(&v, &small).map_err(|e| e.to_string())?.outcome;
                    ensure(out == Outcome::FuelExhausted(20_000), || {
                        format!("{name} kleene at {x} without witness: {out}")
                    })?;
                }
            }
            if let Some(b) = even {
                let got = run_u64(&sm, &v, &unbounded);
                ensure(got == Some(2 * b + 1), || {
                    format!("{name} safe_min at {x}: {got:?}, want {}", 2 * b + 1)
                })?;
            }
            for bound in [0u64, 1, 2, 3, witness_bound] {
                let opts = EvalOptions {
                    search_bound: Some(bound),
                    ..unbounded.clone()
                };
                let got = run_u64(&sm, &v, &opts);
                let oracle = search(native, x, bound, |y| y % 2 == 0);
                let want = oracle.map_or(0, |b| 2 * b + 1);
                ensure(got == Some(want), || {
                    format!("{name} bounded safe_min B={bound} at {x}: {got:?}, want {want}")
                })?;
                checked += 1;
            }
        }
    }
    Ok(format!("5 functions, x <= 64, {checked} bounded checks"))
}

/// `Min_d : N[0,0] → N[0,d]`, each level searching through the one below.
fn nested_min(d: u8) -> Term {
    let ix0 = LevelIndex::new(0, 0);
    let n = ObjExpr::Nat(ix0);
    if d == 0 {
        return Term::min(Term::Unfold(ix0), Bit::S2, ix0);
    }
    let inner_ix = LevelIndex::new(0, d - 1);
    let h = if_zero(
        &n,
        nested_min(d - 1),
        inner_ix,
        Term::comp(Term::Inl(ObjExpr::Top, n.clone()), Term::Bang(n.clone())),
        Term::seq([
            Term::Proj2(ObjExpr::Nat(inner_ix), n.clone()),
            unary_pred(ix0),
            Term::Inr(ObjExpr::Top, n.clone()),
        ]),
    );
    Term::min(h, Bit::S2, LevelIndex::new(0, d))
}

fn tiers() -> Verdict {
    let cfg = Config::with_levels(3);
    let three = typecheck(&nested_min(2), &cfg).map_err(|e| format!("three nested: {e}"))?;
    ensure(three.mindepth == 3, || {
        format!("three nested at depth {}", three.mindepth)
    })?;
    let v = run_u64(
        &elaborate(&nested_min(2), &cfg).unwrap(),
        &Value::nat(5),
        &EvalOptions::default(),
    );
    ensure(v.is_some(), || "three nested Min does not evaluate".into())?;
    let four = typecheck(&nested_min(3), &cfg);
    ensure(
        matches!(&four, Err(e) if e.kind == TypeErrorKind::MinBudgetExceeded),
        || format!("four nested: {four:?}"),
    )?;
    let ix = LevelIndex::new(0, 0);
    let corpus: Vec<(&str, Term, u32)> = vec![
        ("pred", pred(ix), 0),
        ("C", cond(ix), 0),
        ("mod2digits", mod2_digits(0), 0),
        ("Min_0", nested_min(0), 1),
        ("Min_1", nested_min(1), 2),
        ("Min_2", nested_min(2), 3),
        ("kleene_bitlen", lookup("kleene_bitlen", 0).unwrap().term, 1),
        (
            "safe_min_parity",
            lookup("safe_min_parity", 0).unwrap().term,
            1,
        ),
        ("Min_0 ⊗ Min_1", Term::par(nested_min(0), nested_min(1)), 2),
        ("pred ∘ Min_0", Term::comp(pred(ix), nested_min(0)), 1),
    ];
    for (name, t, want) in &corpus {
        let got = classify(t, &cfg).map_err(|e| format!("{name}: {e}"))?;
        ensure(got == *want, || {
            format!("{name}: classify {got}, hand count {want}")
        })?;
    }
    Ok("3 nested Min typecheck, 4 exceed the budget, 10 classifications match".into())
}

fn srr_safety() -> Verdict {
    let cfg = Config::default();
    let n = ObjExpr::nat;
    let srr_at = |y: ObjExpr| Term::srr(Term::Id(y.clone()), Term::Id(y), 0);
    let rejected = [
        n(1, 0),
        n(1, 2),
        ObjExpr::tensor(n(0, 0), n(1, 0)),
        ObjExpr::tensor(n(1, 1), n(0, 2)),
        ObjExpr::tensor(ObjExpr::Top, ObjExpr::tensor(n(0, 1), n(1, 1))),
    ];
    for y in rejected {
        let r = typecheck(&srr_at(y.clone()), &cfg);
        ensure(
            matches!(&r, Err(e) if e.kind == TypeErrorKind::SafeCodomainViolation),
            || format!("codomain {y}: {r:?}"),
        )?;
    }
    let accepted = [
        ObjExpr::Top,
        n(0, 0),
        n(0, 2),
        ObjExpr::tensor(n(0, 0), n(0, 1)),
        ObjExpr::tensor(n(0, 2), ObjExpr::tensor(ObjExpr::Top, n(0, 0))),
    ];
    for y in accepted {
        typecheck(&srr_at(y.clone()), &cfg).map_err(|e| format!("codomain {y}: {e}"))?;
    }
    Ok("5 codomains with N[1,·] rejected, 5 all-N[0,·] codomains accepted".into())
}

fn eta() -> Verdict {
    let cfg = Config::default();
    let s = eta_suite(32, &cfg, &EvalOptions::default());
    ensure(s.passed(), || format!("{s}\n{}", s.failures.join("\n")))?;
    Ok(s.to_string())
}

fn model() -> Verdict {
    let mut flags = 0;
    for i in [2u8, 3, 5] {
        let r = verify_model_equations(i);
        ensure(r.passed(), || r.to_string())?;
        ensure(!r.flagged.is_empty(), || {
            format!("i = {i}: the table discrepancy was not flagged")
        })?;
        flags += r.flagged.len();
        let table = render_table(i);
        let lines: Vec<&str> = table.lines().collect();
        for (row, (label, p, entries)) in printed_table(i.into()).into_iter().enumerate() {
            let line = lines[row + 1];
            ensure(line.starts_with(&format!("{label}^S")), || {
                format!("table row {row}: {line}")
            })?;
            let cells: Vec<&str> = line.split('|').skip(1).map(str::trim).collect();
            for (c, e) in entries.iter().enumerate() {
                let consistent = *e == rule_entry(p, c);
                let want = if consistent {
                    e.to_string()
                } else {
                    format!("{e} [!]")
                };
                ensure(cells[c] == want, || {
                    format!("i = {i}, {label}, column {c}: {} vs {want}", cells[c])
                })?;
            }
        }
    }
    Ok(format!(
        "i in {{2,3,5}} pass the three-clause rule; {flags} printed cells flagged"
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("1 numerals", numerals),
        ("2 initial functions", initial_functions),
        ("3 distributivity", distributivity),
        ("4 coherence", coherence),
        ("5 min coalgebra square", min_coalgebra),
        ("6 kleene and safe minimization", minimization),
        ("7 tier enforcement", tiers),
        ("8 safe recursion codomains", srr_safety),
        ("9 naturality of eta", eta),
        ("10 model equations", model),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL {name}: {why}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
