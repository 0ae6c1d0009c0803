//! Derived arrows: distributivity, numerals, points, constants and the
//! small case-analysis helpers the standard library is written with.

use num_bigint::BigUint;

use crate::objects::{LevelIndex, ObjExpr};
use crate::term::{Bit, Term};
use crate::value::Value;

/// Components of the recursion diagram that defines `d_{N,X,Y}`.
#[derive(Clone, Debug)]
pub struct DistDiagram {
    /// `X ⊕ Y → (N⊗X) ⊕ (N⊗Y)`, pairing each side with `0`.
    pub base: Term,
    /// `(s^n ⊗ X) ⊕ (s^n ⊗ Y)` for `n = 1, 2`.
    pub steps: [Term; 2],
}

pub fn dist_diagram(ix: LevelIndex, x: &ObjExpr, y: &ObjExpr) -> DistDiagram {
    let n = ObjExpr::Nat(ix);
    let nx = ObjExpr::tensor(n.clone(), x.clone());
    let ny = ObjExpr::tensor(n, y.clone());
    let base = Term::copair(
        Term::seq([
            Term::LUnitInv(x.clone()),
            Term::par(Term::Zero(ix), Term::Id(x.clone())),
            Term::Inl(nx.clone(), ny.clone()),
        ]),
        Term::seq([
            Term::LUnitInv(y.clone()),
            Term::par(Term::Zero(ix), Term::Id(y.clone())),
            Term::Inr(nx.clone(), ny.clone()),
        ]),
    );
    let step = |bit| {
        Term::copair(
            Term::comp(
                Term::Inl(nx.clone(), ny.clone()),
                Term::par(Term::Succ(bit, ix), Term::Id(x.clone())),
            ),
            Term::comp(
                Term::Inr(nx.clone(), ny.clone()),
                Term::par(Term::Succ(bit, ix), Term::Id(y.clone())),
            ),
        )
    };
    DistDiagram {
        base,
        steps: [step(Bit::S1), step(Bit::S2)],
    }
}

/// `d : N[ix] ⊗ (X ⊕ Y) → (N[ix] ⊗ X) ⊕ (N[ix] ⊗ Y)`.
pub fn dist(ix: LevelIndex, x: ObjExpr, y: ObjExpr) -> Term {
    Term::Dist {
        ix,
        left: x,
        right: y,
    }
}

/// Inverse of [`dist`]: the copair of `N ⊗ in_l` and `N ⊗ in_r`.
pub fn dist_inverse(ix: LevelIndex, x: ObjExpr, y: ObjExpr) -> Term {
    let n = ObjExpr::Nat(ix);
    Term::copair(
        Term::par(Term::Id(n.clone()), Term::Inl(x.clone(), y.clone())),
        Term::par(Term::Id(n), Term::Inr(x, y)),
    )
}

/// `d_{⊤,X,Y} : ⊤ ⊗ (X ⊕ Y) → (⊤ ⊗ X) ⊕ (⊤ ⊗ Y)`.
pub fn dist_unit(x: ObjExpr, y: ObjExpr) -> Term {
    let tx = ObjExpr::tensor(ObjExpr::Top, x.clone());
    let ty = ObjExpr::tensor(ObjExpr::Top, y.clone());
    Term::comp(
        Term::copair(
            Term::comp(Term::Inl(tx.clone(), ty.clone()), Term::LUnitInv(x.clone())),
            Term::comp(Term::Inr(tx, ty), Term::LUnitInv(y.clone())),
        ),
        Term::LUnit(ObjExpr::coprod(x, y)),
    )
}

/// Canonical isomorphism `from ≅ to` as a term (two identities glued by a
/// boundary coercion).
pub fn iso(from: ObjExpr, to: ObjExpr) -> Term {
    if from == to {
        Term::Id(from)
    } else {
        Term::comp(Term::Id(to), Term::Id(from))
    }
}

/// Distributivity for a coproduct-free `a`: `A ⊗ (X ⊕ Y) → (A⊗X) ⊕ (A⊗Y)`,
/// one [`dist`] per natural-number factor.
pub fn dist_over(a: &ObjExpr, x: &ObjExpr, y: &ObjExpr) -> Term {
    match a {
        ObjExpr::Top => dist_unit(x.clone(), y.clone()),
        ObjExpr::Nat(ix) => dist(*ix, x.clone(), y.clone()),
        ObjExpr::Tensor(a1, a2) => {
            let sum = ObjExpr::coprod(x.clone(), y.clone());
            let ax = ObjExpr::tensor(a2.as_ref().clone(), x.clone());
            let ay = ObjExpr::tensor(a2.as_ref().clone(), y.clone());
            Term::seq([
                iso(
                    ObjExpr::tensor(a.clone(), sum.clone()),
                    ObjExpr::tensor(
                        a1.as_ref().clone(),
                        ObjExpr::tensor(a2.as_ref().clone(), sum),
                    ),
                ),
                Term::par(Term::Id(a1.as_ref().clone()), dist_over(a2, x, y)),
                dist_over(a1, &ax, &ay),
                iso(
                    ObjExpr::coprod(
                        ObjExpr::tensor(a1.as_ref().clone(), ax),
                        ObjExpr::tensor(a1.as_ref().clone(), ay),
                    ),
                    ObjExpr::coprod(
                        ObjExpr::tensor(a.clone(), x.clone()),
                        ObjExpr::tensor(a.clone(), y.clone()),
                    ),
                ),
            ])
        }
        ObjExpr::Coprod(..) => panic!("dist_over needs a coproduct-free left factor, got {a}"),
    }
}

/// Standard numeral `⊤ → N[ix]` spelling `m` in binary, most significant
/// digit applied first.
pub fn numeral(m: &BigUint, ix: LevelIndex) -> Term {
    let mut t = Term::Zero(ix);
    for i in (0..m.bits()).rev() {
        t = Term::comp(Term::Succ(Bit::of_low_bit(m.bit(i)), ix), t);
    }
    t
}

pub fn numeral_u64(m: u64, ix: LevelIndex) -> Term {
    numeral(&BigUint::from(m), ix)
}

/// The point `⊤ → x` denoting `v`. `None` if `v` does not inhabit `x`.
pub fn point_term(v: &Value, x: &ObjExpr) -> Option<Term> {
    Some(match (v, x) {
        (Value::Star, ObjExpr::Top) => Term::Id(ObjExpr::Top),
        (Value::Nat(n), ObjExpr::Nat(ix)) => numeral(n, *ix),
        (Value::Pair(a, b), ObjExpr::Tensor(xa, xb)) => Term::comp(
            Term::par(point_term(a, xa)?, point_term(b, xb)?),
            Term::LUnitInv(ObjExpr::Top),
        ),
        (Value::InlV(a), ObjExpr::Coprod(xa, xb)) => Term::comp(
            Term::Inl(xa.as_ref().clone(), xb.as_ref().clone()),
            point_term(a, xa)?,
        ),
        (Value::InrV(b), ObjExpr::Coprod(xa, xb)) => Term::comp(
            Term::Inr(xa.as_ref().clone(), xb.as_ref().clone()),
            point_term(b, xb)?,
        ),
        _ => return None,
    })
}

/// Constant arrow `dom → N[ix]` with value `m`.
pub fn const_nat(dom: ObjExpr, m: u64, ix: LevelIndex) -> Term {
    Term::comp(numeral_u64(m, ix), Term::Bang(dom))
}

/// Dispatch on whether `test : dom → N[ix]` is zero. `on_zero : dom → Z`;
/// `on_pos : N[ix] ⊗ dom → Z` receives the unary predecessor of the test
/// value next to the input. `dom` must be coproduct-free.
pub fn if_zero(dom: &ObjExpr, test: Term, ix: LevelIndex, on_zero: Term, on_pos: Term) -> Term {
    let n = ObjExpr::Nat(ix);
    let top_or_n = ObjExpr::coprod(ObjExpr::Top, n.clone());
    Term::seq([
        Term::Dup(dom.clone()),
        Term::par(test, Term::Id(dom.clone())),
        Term::par(Term::Unfold(ix), Term::Id(dom.clone())),
        Term::Sym(top_or_n, dom.clone()),
        dist_over(dom, &ObjExpr::Top, &n),
        Term::copair(
            Term::comp(
                on_zero,
                iso(ObjExpr::tensor(dom.clone(), ObjExpr::Top), dom.clone()),
            ),
            Term::comp(on_pos, Term::Sym(dom.clone(), n)),
        ),
    ])
}

/// `m ↦ m mod 2` as `C(m, 0, 1)`.
pub fn parity(ix: LevelIndex) -> Term {
    let n = ObjExpr::Nat(ix);
    Term::comp(
        Term::Cond(ix),
        Term::pairing(
            n.clone(),
            Term::Id(n.clone()),
            Term::pairing(n.clone(), const_nat(n.clone(), 0, ix), const_nat(n, 1, ix)),
        ),
    )
}

/// `m ↦ m ∸ 1`.
pub fn unary_pred(ix: LevelIndex) -> Term {
    Term::comp(
        Term::copair(Term::Zero(ix), Term::Id(ObjExpr::Nat(ix))),
        Term::Unfold(ix),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::eval;

    const IX: LevelIndex = LevelIndex::new(0, 0);

    fn n00() -> ObjExpr {
        ObjExpr::Nat(IX)
    }

    #[test]
    fn numeral_spelling() {
        assert_eq!(numeral_u64(0, IX), Term::Zero(IX));
        let six = Term::seq([
            Term::Zero(IX),
            Term::Succ(Bit::S2, IX),
            Term::Succ(Bit::S2, IX),
            Term::Succ(Bit::S1, IX),
        ]);
        assert_eq!(numeral_u64(6, IX), six);
        let ix = LevelIndex::new(1, 2);
        assert_eq!(
            numeral_u64(1, ix),
            Term::comp(Term::Succ(Bit::S2, ix), Term::Zero(ix))
        );
    }

    #[test]
    fn dist_on_points() {
        let d = dist(IX, n00(), ObjExpr::Top);
        let out = eval(
            &d,
            &Value::pair(Value::nat(3), Value::inl(Value::nat(7))),
            100,
        )
        .unwrap();
        assert_eq!(
            out.value(),
            Some(&Value::inl(Value::pair(Value::nat(3), Value::nat(7))))
        );
        let out = eval(
            &d,
            &Value::pair(Value::nat(0), Value::inr(Value::Star)),
            100,
        )
        .unwrap();
        assert_eq!(
            out.value(),
            Some(&Value::inr(Value::pair(Value::nat(0), Value::Star)))
        );
    }

    #[test]
    fn dist_round_trip() {
        let t = Term::comp(dist_inverse(IX, n00(), n00()), dist(IX, n00(), n00()));
        let v = Value::pair(Value::nat(5), Value::inl(Value::nat(2)));
        assert_eq!(eval(&t, &v, 100).unwrap().value(), Some(&v));
    }

    #[test]
    fn dist_over_tensor() {
        let a = ObjExpr::tensor(n00(), ObjExpr::tensor(ObjExpr::Top, n00()));
        let t = dist_over(&a, &ObjExpr::Top, &n00());
        let pt = Value::pair(Value::nat(1), Value::pair(Value::Star, Value::nat(2)));
        let out = eval(&t, &Value::pair(pt.clone(), Value::inr(Value::nat(9))), 100).unwrap();
        assert_eq!(
            out.value(),
            Some(&Value::inr(Value::pair(pt, Value::nat(9))))
        );
    }

    #[test]
    fn parity_and_pred() {
        for m in 0..20u64 {
            assert_eq!(
                eval(&parity(IX), &Value::nat(m), 10).unwrap().as_u64(),
                Some(m % 2)
            );
            assert_eq!(
                eval(&unary_pred(IX), &Value::nat(m), 10).unwrap().as_u64(),
                Some(m.saturating_sub(1))
            );
        }
    }

    #[test]
    fn if_zero_dispatch() {
        let t = if_zero(
            &n00(),
            Term::Id(n00()),
            IX,
            const_nat(n00(), 42, IX),
            Term::Proj1(n00(), n00()),
        );
        assert_eq!(eval(&t, &Value::nat(0), 100).unwrap().as_u64(), Some(42));
        assert_eq!(eval(&t, &Value::nat(9), 100).unwrap().as_u64(), Some(8));
    }

    #[test]
    fn points() {
        let x = ObjExpr::coprod(ObjExpr::Top, ObjExpr::tensor(n00(), n00()));
        let v = Value::inr(Value::pair(Value::nat(4), Value::nat(11)));
        let p = point_term(&v, &x).unwrap();
        assert_eq!(eval(&p, &Value::Star, 100).unwrap().value(), Some(&v));
    }
}
