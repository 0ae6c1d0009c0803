//! Action of `T`, `G` and `M(q)` on terms.
//!
//! The functor is pushed through the term structurally. Generators at a
//! level the functor sends to `Top` collapse to the corresponding arrow on
//! `Top`; recursion nodes whose recursion level is killed keep only their
//! base case, composed with the left unitor.

use crate::derived::{dist, dist_unit};
use crate::objects::{FunctorTag, LevelIndex, ObjExpr};
use crate::term::Term;
use crate::typecheck::{elaborate, TypeError, TypeErrorKind};
use crate::Config;

pub fn apply_functor_term(f: FunctorTag, t: &Term, cfg: &Config) -> Result<Term, TypeError> {
    f.validate(cfg.levels).map_err(|e| TypeError {
        kind: TypeErrorKind::IndexOutOfRange,
        location: ".".into(),
        detail: e.to_string(),
    })?;
    elaborate(t, cfg)?;
    let image = Image { f, cfg }.term(t, "")?;
    elaborate(&image, cfg)?;
    Ok(image)
}

struct Image<'a> {
    f: FunctorTag,
    cfg: &'a Config,
}

impl Image<'_> {
    fn obj(&self, x: &ObjExpr) -> ObjExpr {
        x.functor_raw(self.f)
    }

    fn lvl(&self, ix: LevelIndex) -> Option<LevelIndex> {
        self.f.on_level(ix)
    }

    fn raw_dom(&self, t: &Term) -> Result<ObjExpr, TypeError> {
        Ok(elaborate(t, self.cfg)?.dom_shape)
    }

    /// Image of a killed recursion node `N ⊗ X → Y`: `F(base) ∘ l`.
    fn killed_recursion(&self, base: &Term, path: &str) -> Result<Term, TypeError> {
        let x = self.raw_dom(base)?;
        Ok(Term::comp(
            self.term(base, path)?,
            Term::LUnit(self.obj(&x)),
        ))
    }

    fn term(&self, t: &Term, path: &str) -> Result<Term, TypeError> {
        let sub = |name: &str| format!("{path}.{name}");
        Ok(match t {
            Term::Id(x) => Term::Id(self.obj(x)),
            Term::Comp(a, b) => {
                Term::comp(self.term(a, &sub("arg[0]"))?, self.term(b, &sub("arg[1]"))?)
            }
            Term::Par(a, b) => {
                Term::par(self.term(a, &sub("arg[0]"))?, self.term(b, &sub("arg[1]"))?)
            }
            Term::Copair(a, b) => {
                Term::copair(self.term(a, &sub("arg[0]"))?, self.term(b, &sub("arg[1]"))?)
            }
            Term::Sym(x, y) => Term::Sym(self.obj(x), self.obj(y)),
            Term::LUnit(x) => Term::LUnit(self.obj(x)),
            Term::LUnitInv(x) => Term::LUnitInv(self.obj(x)),
            Term::Inl(x, y) => Term::Inl(self.obj(x), self.obj(y)),
            Term::Inr(x, y) => Term::Inr(self.obj(x), self.obj(y)),
            Term::Proj1(x, y) => Term::Proj1(self.obj(x), self.obj(y)),
            Term::Proj2(x, y) => Term::Proj2(self.obj(x), self.obj(y)),
            Term::Dup(x) => Term::Dup(self.obj(x)),
            Term::Bang(x) => Term::Bang(self.obj(x)),
            Term::Zero(ix) => self.lvl(*ix).map_or(Term::Id(ObjExpr::Top), Term::Zero),
            Term::Succ(bit, ix) => self
                .lvl(*ix)
                .map_or(Term::Id(ObjExpr::Top), |j| Term::Succ(*bit, j)),
            Term::Incr(ix) => self.lvl(*ix).map_or(Term::Id(ObjExpr::Top), Term::Incr),
            Term::Cond(ix) => match self.lvl(*ix) {
                Some(j) => Term::Cond(j),
                None => Term::Bang(ObjExpr::tensor(
                    ObjExpr::Top,
                    ObjExpr::tensor(ObjExpr::Top, ObjExpr::Top),
                )),
            },
            Term::Unfold(ix) => match self.lvl(*ix) {
                Some(j) => Term::Unfold(j),
                None => {
                    return Err(TypeError {
                        kind: TypeErrorKind::Mismatch,
                        location: if path.is_empty() {
                            ".".into()
                        } else {
                            path.into()
                        },
                        detail: format!(
                            "{} sends N[{},{}] to Top, where the zero test has no image",
                            self.f, ix.k, ix.p
                        ),
                    })
                }
            },
            Term::EtaAt(x) => self.structural(x, &|ix| {
                let fx = self.obj(&ObjExpr::Nat(ix));
                if ix.k == 0 {
                    Term::Bang(fx)
                } else {
                    Term::Id(fx)
                }
            }),
            Term::EpsAt(x) => self.structural(x, &|ix| {
                let from = self.obj(&ObjExpr::Nat(LevelIndex::new(1, ix.p)));
                match self.lvl(ix) {
                    Some(j) => Term::EpsAt(ObjExpr::Nat(j)),
                    None => Term::Bang(from),
                }
            }),
            Term::Fr { base, step, ix } => match self.lvl(*ix) {
                Some(j) => Term::fr(
                    self.term(base, &sub("base"))?,
                    self.term(step, &sub("step"))?,
                    j,
                ),
                None => self.killed_recursion(base, &sub("base"))?,
            },
            Term::Srr { base, step, p } => match self.lvl(LevelIndex::new(1, *p)) {
                Some(j) => Term::srr(
                    self.term(base, &sub("base"))?,
                    self.term(step, &sub("step"))?,
                    j.p,
                ),
                None => self.killed_recursion(base, &sub("base"))?,
            },
            Term::Prn {
                base,
                step1,
                step2,
                ix,
            } => match self.lvl(*ix) {
                Some(j) => Term::prn(
                    self.term(base, &sub("base"))?,
                    self.term(step1, &sub("step1"))?,
                    self.term(step2, &sub("step2"))?,
                    j,
                ),
                None => self.killed_recursion(base, &sub("base"))?,
            },
            Term::Min { body, bit, target } => match self.lvl(*target) {
                Some(j) => Term::min(self.term(body, &sub("body"))?, *bit, j),
                None => Term::Bang(self.obj(&self.raw_dom(body)?)),
            },
            Term::Dist { ix, left, right } => match self.lvl(*ix) {
                Some(j) => dist(j, self.obj(left), self.obj(right)),
                None => dist_unit(self.obj(left), self.obj(right)),
            },
        })
    }

    /// The map `F x → F y` built from one arrow per generator of `x`,
    /// tensored and summed along the shape of `x`.
    fn structural(&self, x: &ObjExpr, gen: &dyn Fn(LevelIndex) -> Term) -> Term {
        self.structural_with_cod(x, gen).0
    }

    fn structural_with_cod(
        &self,
        x: &ObjExpr,
        gen: &dyn Fn(LevelIndex) -> Term,
    ) -> (Term, ObjExpr) {
        match x {
            ObjExpr::Top => (Term::Id(ObjExpr::Top), ObjExpr::Top),
            ObjExpr::Nat(ix) => {
                let t = gen(*ix);
                let cod = elaborate(&t, self.cfg)
                    .map(|p| p.cod_shape)
                    .unwrap_or(ObjExpr::Top);
                (t, cod)
            }
            ObjExpr::Tensor(a, b) => {
                let (ta, ca) = self.structural_with_cod(a, gen);
                let (tb, cb) = self.structural_with_cod(b, gen);
                (Term::par(ta, tb), ObjExpr::tensor(ca, cb))
            }
            ObjExpr::Coprod(a, b) => {
                let (ta, ca) = self.structural_with_cod(a, gen);
                let (tb, cb) = self.structural_with_cod(b, gen);
                (
                    Term::copair(
                        Term::comp(Term::Inl(ca.clone(), cb.clone()), ta),
                        Term::comp(Term::Inr(ca.clone(), cb.clone()), tb),
                    ),
                    ObjExpr::coprod(ca, cb),
                )
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objects::apply_functor_obj;
    use crate::term::Bit;
    use crate::typecheck::typecheck;

    fn cfg() -> Config {
        Config::default()
    }

    #[test]
    fn generator_images() {
        let s = Term::Succ(Bit::S1, LevelIndex::new(0, 2));
        assert_eq!(
            apply_functor_term(FunctorTag::T, &s, &cfg()).unwrap(),
            Term::Id(ObjExpr::Top)
        );
        let z = Term::Zero(LevelIndex::new(0, 1));
        assert_eq!(
            apply_functor_term(FunctorTag::G, &z, &cfg()).unwrap(),
            Term::Zero(LevelIndex::new(1, 1))
        );
    }

    #[test]
    fn dist_images_follow_coherence() {
        let x = ObjExpr::nat(0, 1);
        let d = dist(LevelIndex::new(0, 1), x.clone(), ObjExpr::Top);
        let g = apply_functor_term(FunctorTag::G, &d, &cfg()).unwrap();
        assert_eq!(
            g,
            dist(LevelIndex::new(1, 1), ObjExpr::nat(1, 1), ObjExpr::Top)
        );
        let t = apply_functor_term(FunctorTag::T, &d, &cfg()).unwrap();
        assert_eq!(t, dist_unit(ObjExpr::Top, ObjExpr::Top));
        let m = apply_functor_term(FunctorTag::M(1), &d, &cfg()).unwrap();
        assert_eq!(
            m,
            dist(LevelIndex::new(0, 0), ObjExpr::nat(0, 0), ObjExpr::Top)
        );
    }

    #[test]
    fn judgments_are_functor_images() {
        let t = Term::EtaAt(ObjExpr::tensor(ObjExpr::nat(0, 0), ObjExpr::nat(1, 2)));
        for f in [
            FunctorTag::T,
            FunctorTag::G,
            FunctorTag::M(0),
            FunctorTag::M(2),
        ] {
            let j = typecheck(&t, &cfg()).unwrap();
            let fj = typecheck(&apply_functor_term(f, &t, &cfg()).unwrap(), &cfg()).unwrap();
            assert_eq!(fj.dom, apply_functor_obj(f, &j.dom));
            assert_eq!(fj.cod, apply_functor_obj(f, &j.cod));
        }
    }
}
