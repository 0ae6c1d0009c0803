//! Minimization wrappers built on the coalgebraic `Min` node.

use crate::derived::{const_nat, if_zero, parity};
use crate::objects::{LevelIndex, ObjExpr};
use crate::term::{Bit, Term};
use crate::typecheck::{elaborate, TypeError, TypeErrorKind};
use crate::Config;

/// Splits the raw domain of `f : X ⊗ N[t] → N[s]` into `(X, t, s)`.
fn search_shape(
    f: &Term,
    cfg: &Config,
    what: &str,
) -> Result<(ObjExpr, LevelIndex, LevelIndex), TypeError> {
    let p = elaborate(f, cfg)?;
    let bad = || TypeError {
        kind: TypeErrorKind::Mismatch,
        location: ".".into(),
        detail: format!(
            "{what} needs an arrow X ⊗ N → N, got {} → {}",
            p.dom_shape, p.cod_shape
        ),
    };
    let ObjExpr::Tensor(x, b) = &p.dom_shape else {
        return Err(bad());
    };
    let (ObjExpr::Nat(t), ObjExpr::Nat(s)) = (b.as_ref(), &p.cod_shape) else {
        return Err(bad());
    };
    if x.has_coproduct() {
        return Err(bad());
    }
    Ok((x.as_ref().clone(), *t, *s))
}

/// Least-witness search `x ↦ μb. f(x, b) = 0` for `f : X ⊗ N[t] → N[s]`.
///
/// The coalgebra carrier is the search state `X ⊗ N[t]`; the body answers
/// `inl` once `f` vanishes and otherwise steps to `(x, b+1)`. The number of
/// steps taken is the witness, delivered in `N[t]`.
pub fn kleene_min(f: &Term, cfg: &Config) -> Result<Term, TypeError> {
    let (x, t, s) = search_shape(f, cfg, "kleene_min")?;
    let state = ObjExpr::tensor(x.clone(), ObjExpr::Nat(t));
    let carrier = ObjExpr::coprod(ObjExpr::Top, state.clone());
    let body = if_zero(
        &state,
        f.clone(),
        s,
        Term::comp(
            Term::Inl(ObjExpr::Top, state.clone()),
            Term::Bang(state.clone()),
        ),
        Term::seq([
            Term::Proj2(ObjExpr::Nat(s), state.clone()),
            Term::par(Term::Id(x.clone()), Term::Incr(t)),
            Term::Inr(ObjExpr::Top, state.clone()),
        ]),
    );
    debug_assert!(elaborate(&body, cfg)
        .map(|p| p.cod_shape == carrier)
        .unwrap_or(true));
    let start = Term::pairing(x.clone(), Term::Id(x.clone()), const_nat(x, 0, t));
    Ok(Term::comp(Term::min(body, Bit::S2, t), start))
}

/// Safe minimization `x ↦ s²(μb. h(x, b) mod 2 = 0)` for
/// `h : X ⊗ N[t] → N[t]`.
///
/// The candidate `b` comes from [`kleene_min`] on the parity of `h`; the
/// result re-tests `h(x, b)` so that a search cut off by an explicit bound
/// (which reports `b = 0` without a witness) yields `0`.
pub fn safe_min(h: &Term, cfg: &Config) -> Result<Term, TypeError> {
    let (x, t, s) = search_shape(h, cfg, "safe_min")?;
    if s != t {
        return Err(TypeError {
            kind: TypeErrorKind::Mismatch,
            location: ".".into(),
            detail: format!(
                "safe_min needs the searched argument and the result at one level, got N[{},{}] and N[{},{}]",
                t.k, t.p, s.k, s.p
            ),
        });
    }
    let n = ObjExpr::Nat(t);
    let state = ObjExpr::tensor(x.clone(), n.clone());
    let search = kleene_min(&Term::comp(parity(t), h.clone()), cfg)?;
    let finish = Term::comp(
        Term::Cond(t),
        Term::pairing(
            state.clone(),
            Term::comp(parity(t), h.clone()),
            Term::pairing(
                state.clone(),
                Term::comp(Term::Succ(Bit::S2, t), Term::Proj2(x.clone(), n)),
                const_nat(state, 0, t),
            ),
        ),
    );
    Ok(Term::comp(
        finish,
        Term::pairing(x.clone(), Term::Id(x), search),
    ))
}

/// Two-branch recursion on notation with access to the recursion argument;
/// typechecks only when the extension is switched on.
pub fn prn_extended(g: Term, h1: Term, h2: Term, ix: LevelIndex) -> Term {
    Term::prn(g, h1, h2, ix)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::{EvalOptions, Outcome};
    use crate::value::Value;

    const IX: LevelIndex = LevelIndex::new(0, 0);

    fn n() -> ObjExpr {
        ObjExpr::Nat(IX)
    }

    /// `(x, b) ↦ C(b, 1, 0)`, ignoring `x`.
    fn cond_b_1_0() -> Term {
        let st = ObjExpr::tensor(ObjExpr::Top, n());
        Term::comp(
            Term::Cond(IX),
            Term::pairing(
                st.clone(),
                Term::Proj2(ObjExpr::Top, n()),
                Term::pairing(
                    st.clone(),
                    const_nat(st.clone(), 1, IX),
                    const_nat(st, 0, IX),
                ),
            ),
        )
    }

    fn run(t: &Term, opts: &EvalOptions) -> Outcome {
        let p = elaborate(t, &Config::default()).unwrap();
        p.run(&Value::Star, opts).unwrap().outcome
    }

    #[test]
    fn safe_min_examples() {
        let cfg = Config::default();
        let opts = EvalOptions::with_fuel(10_000);
        assert_eq!(
            run(&safe_min(&cond_b_1_0(), &cfg).unwrap(), &opts).as_u64(),
            Some(3)
        );
        let st = ObjExpr::tensor(ObjExpr::Top, n());
        let zero = const_nat(st.clone(), 0, IX);
        assert_eq!(
            run(&safe_min(&zero, &cfg).unwrap(), &opts).as_u64(),
            Some(1)
        );
        let one = const_nat(st, 1, IX);
        let t = safe_min(&one, &cfg).unwrap();
        assert_eq!(run(&t, &opts), Outcome::FuelExhausted(10_000));
        let bounded = EvalOptions {
            search_bound: Some(16),
            ..opts
        };
        assert_eq!(run(&t, &bounded).as_u64(), Some(0));
    }

    #[test]
    fn kleene_rejects_wrong_shape() {
        let err = kleene_min(&Term::Id(n()), &Config::default()).unwrap_err();
        assert_eq!(err.kind, TypeErrorKind::Mismatch);
    }
}
