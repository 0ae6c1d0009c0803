use num_bigint::BigUint;
use proptest::prelude::*;

use dmc_core::derived::numeral;
use dmc_core::stdlib::{lookup, mod2_digits, pred, stdlib};
use dmc_core::{
    apply_functor_obj, classify, elaborate, Bit, Config, EvalOptions, FunctorTag, LevelIndex,
    ObjExpr, Outcome, Term, Value,
};

fn arb_index() -> impl Strategy<Value = LevelIndex> {
    (0u8..=1, 0u8..3).prop_map(|(k, p)| LevelIndex::new(k, p))
}

fn arb_obj() -> impl Strategy<Value = ObjExpr> {
    let leaf = prop_oneof![Just(ObjExpr::Top), arb_index().prop_map(ObjExpr::Nat)];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| ObjExpr::tensor(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| ObjExpr::coprod(a, b)),
        ]
    })
}

fn arb_functor() -> impl Strategy<Value = FunctorTag> {
    prop_oneof![
        Just(FunctorTag::T),
        Just(FunctorTag::G),
        (0u8..3).prop_map(FunctorTag::M)
    ]
}

proptest! {
    #[test]
    fn normalize_is_idempotent(x in arb_obj()) {
        let n = x.normalize();
        prop_assert_eq!(n.normalize(), n.clone());
        prop_assert!(x.iso_eq(&n));
    }

    #[test]
    fn functors_commute_with_normalize(x in arb_obj(), f in arb_functor()) {
        let direct = apply_functor_obj(f, &x);
        prop_assert_eq!(apply_functor_obj(f, &x.normalize()), direct.clone());
        prop_assert_eq!(x.functor_raw(f).normalize(), direct);
    }

    #[test]
    fn t_and_g_are_idempotent(x in arb_obj()) {
        for f in [FunctorTag::T, FunctorTag::G] {
            let once = apply_functor_obj(f, &x);
            prop_assert_eq!(apply_functor_obj(f, &once), once);
        }
    }

    #[test]
    fn numerals_denote_themselves(m in any::<u64>(), ix in arb_index()) {
        let t = numeral(&BigUint::from(m), ix);
        let out = dmc_core::eval(&t, &Value::Star, 1_000).unwrap();
        prop_assert_eq!(out.as_u64(), Some(m));
    }

    #[test]
    fn evaluation_is_deterministic_and_preserves_types(entry in 0usize..20, args in prop::collection::vec(0u64..200, 3)) {
        let cfg = Config::default();
        let opts = EvalOptions::with_fuel(100_000);
        let e = &stdlib()[entry % stdlib().len()];
        let p = elaborate(&e.term, &cfg).unwrap();
        let first = e.run(&args[..e.arity], &cfg, &opts).unwrap();
        let second = e.run(&args[..e.arity], &cfg, &opts).unwrap();
        prop_assert_eq!(&first, &second);
        if let Outcome::Done(v) = first {
            prop_assert!(v.inhabits(&p.cod_shape));
        }
    }

    #[test]
    fn more_fuel_never_changes_an_answer(x in 0u64..5_000, fuel in 1u64..400, extra in 0u64..1_000) {
        let cfg = Config::default();
        let e = lookup("kleene_bitlen", 0).unwrap();
        let low = e.run(&[x], &cfg, &EvalOptions::with_fuel(fuel)).unwrap();
        let high = e.run(&[x], &cfg, &EvalOptions::with_fuel(fuel + extra)).unwrap();
        match low {
            Outcome::Done(_) => prop_assert_eq!(low, high),
            Outcome::FuelExhausted(f) => prop_assert_eq!(f, fuel),
        }
    }

    #[test]
    fn safe_recursion_iterates_once_per_digit(m in 0u64..1 << 20, x in 0u64..1 << 20, step in 0usize..3) {
        let ix = LevelIndex::new(0, 0);
        let n = ObjExpr::Nat(ix);
        let (h, native): (Term, fn(u64) -> u64) = match step {
            0 => (Term::Succ(Bit::S2, ix), |y| 2 * y + 1),
            1 => (Term::comp(pred(ix), dmc_core::derived::iso(n.clone(), ObjExpr::tensor(n.clone(), ObjExpr::Top))), |y| y / 2),
            _ => (Term::Id(n.clone()), |y| y),
        };
        let t = Term::srr(Term::Id(n), h, 0);
        let v = Value::pair(Value::nat(m), Value::nat(x));
        let got = dmc_core::eval(&t, &v, 1_000).unwrap().as_u64();
        let want = (0..64 - m.leading_zeros()).fold(x, |y, _| native(y));
        prop_assert_eq!(got, Some(want));
    }

    #[test]
    fn mindepth_is_max_over_composition_and_grows_under_min(d1 in 0usize..2, d2 in 0usize..2) {
        let cfg = Config::default();
        let ix = LevelIndex::new(0, 0);
        let n = ObjExpr::Nat(ix);
        let search = Term::min(Term::Unfold(ix), Bit::S2, ix);
        let pick = |d: usize| if d == 0 { Term::Id(n.clone()) } else { search.clone() };
        let (f, g) = (pick(d1), pick(d2));
        let composite = Term::comp(f.clone(), g.clone());
        let depth = classify(&composite, &cfg).unwrap();
        prop_assert_eq!(depth, classify(&f, &cfg).unwrap().max(classify(&g, &cfg).unwrap()));
        let outer = Term::min(Term::Unfold(ix), Bit::S2, LevelIndex::new(0, 1));
        let nested = Term::comp(outer, composite);
        prop_assert!(classify(&nested, &cfg).unwrap() >= depth);
    }
}

#[test]
fn mod2_digits_tracks_bit_length_parity() {
    let cfg = Config::default();
    let p = elaborate(&mod2_digits(0), &cfg).unwrap();
    for m in 0u64..512 {
        let v = Value::pair(Value::nat(m), Value::Star);
        let got = p.eval(&v, 10_000).unwrap().as_u64();
        assert_eq!(got, Some(u64::from(64 - m.leading_zeros()) % 2));
    }
}
