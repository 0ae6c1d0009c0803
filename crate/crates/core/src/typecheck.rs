//! Judgments for terms: domain, codomain and minimization depth, with every
//! side condition of the recursion and minimization schemes enforced.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::derived::dist_diagram;
use crate::eval::{Cast, Code, RecCode};
use crate::objects::{in_fiber_t_over_top, FunctorTag, LevelIndex, ObjError, ObjExpr};
use crate::term::Term;
use crate::Config;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Judgment {
    pub dom: ObjExpr,
    pub cod: ObjExpr,
    pub mindepth: u32,
}

impl fmt::Display for Judgment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ⊢ {} @ depth {}", self.dom, self.cod, self.mindepth)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TypeErrorKind {
    Mismatch,
    SafeCodomainViolation,
    MinBudgetExceeded,
    MinTargetMismatch,
    IndexOutOfRange,
    DisabledExtension,
}

#[derive(Clone, Debug, PartialEq, Eq, Error, Serialize, Deserialize)]
#[error("{kind:?} at {location}: {detail}")]
pub struct TypeError {
    pub kind: TypeErrorKind,
    pub location: String,
    pub detail: String,
}

/// Location of a subterm, rendered only when an error is reported.
#[derive(Clone, Copy)]
enum Path<'a> {
    Root,
    Child(&'a Path<'a>, &'a str),
}

impl fmt::Display for Path<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Path::Root => Ok(()),
            Path::Child(parent, name) => write!(f, "{parent}.{name}"),
        }
    }
}

impl TypeError {
    fn new(kind: TypeErrorKind, path: &Path<'_>, detail: impl Into<String>) -> Self {
        let location = match path {
            Path::Root => ".".to_string(),
            p => p.to_string(),
        };
        TypeError {
            kind,
            location,
            detail: detail.into(),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("plain data")
    }
}

/// Judgment plus the raw (unnormalized) shapes values travel in.
#[derive(Clone, Debug)]
pub(crate) struct Typed {
    pub mindepth: u32,
    pub dom_shape: ObjExpr,
    pub cod_shape: ObjExpr,
}

impl Typed {
    fn new(dom: ObjExpr, cod: ObjExpr, mindepth: u32) -> Typed {
        Typed {
            mindepth,
            dom_shape: dom,
            cod_shape: cod,
        }
    }
}

/// A typechecked term ready for evaluation.
#[derive(Clone, Debug)]
pub struct Program {
    pub judgment: Judgment,
    pub dom_shape: ObjExpr,
    pub cod_shape: ObjExpr,
    pub(crate) code: Code,
}

pub fn typecheck(t: &Term, cfg: &Config) -> Result<Judgment, TypeError> {
    elaborate(t, cfg).map(|p| p.judgment)
}

/// Level of the hierarchy the term's function is placed in: its
/// minimization depth `d`, meaning membership in the `(d+1)`-th class.
pub fn classify(t: &Term, cfg: &Config) -> Result<u32, TypeError> {
    typecheck(t, cfg).map(|j| j.mindepth)
}

pub fn elaborate(t: &Term, cfg: &Config) -> Result<Program, TypeError> {
    let (typed, code) = Checker { cfg }.check(t, &Path::Root)?;
    Ok(Program {
        judgment: Judgment {
            dom: typed.dom_shape.normalize(),
            cod: typed.cod_shape.normalize(),
            mindepth: typed.mindepth,
        },
        dom_shape: typed.dom_shape,
        cod_shape: typed.cod_shape,
        code,
    })
}

fn cast(from: &ObjExpr, to: &ObjExpr) -> Option<Cast> {
    (from != to).then(|| Cast {
        from: from.clone(),
        to: to.clone(),
    })
}

/// Tensor of naturals at minimization index `p`; at safety level 0 every
/// factor must itself be safe.
fn flat_recursion_object(x: &ObjExpr, ix: LevelIndex) -> bool {
    let summands = x.summands();
    summands.len() == 1
        && summands[0]
            .iter()
            .all(|f| f.p == ix.p && (ix.k == 1 || f.k == 0))
}

struct Checker<'a> {
    cfg: &'a Config,
}

impl Checker<'_> {
    fn obj(&self, x: &ObjExpr, path: &Path<'_>) -> Result<(), TypeError> {
        x.validate(self.cfg.levels)
            .map_err(|e| self.obj_err(e, path))
    }

    fn lvl(&self, ix: LevelIndex, path: &Path<'_>) -> Result<(), TypeError> {
        ix.validate(self.cfg.levels)
            .map(|_| ())
            .map_err(|e| self.obj_err(e, path))
    }

    fn obj_err(&self, e: ObjError, path: &Path<'_>) -> TypeError {
        TypeError::new(TypeErrorKind::IndexOutOfRange, path, e.to_string())
    }

    fn same(&self, a: &ObjExpr, b: &ObjExpr, path: &Path<'_>, what: &str) -> Result<(), TypeError> {
        if a == b || a.iso_eq(b) {
            Ok(())
        } else {
            Err(TypeError::new(
                TypeErrorKind::Mismatch,
                path,
                format!("{what}: {} vs {}", a.normalize(), b.normalize()),
            ))
        }
    }

    fn check(&self, t: &Term, path: &Path<'_>) -> Result<(Typed, Code), TypeError> {
        let sub = |name: &'static str| Path::Child(path, name);
        let nat = ObjExpr::Nat;
        Ok(match t {
            Term::Id(x) => {
                self.obj(x, path)?;
                (Typed::new(x.clone(), x.clone(), 0), Code::Id)
            }
            Term::Comp(f, g) => {
                let (tg, cg) = self.check(g, &sub("arg[1]"))?;
                let (tf, cf) = self.check(f, &sub("arg[0]"))?;
                self.same(&tg.cod_shape, &tf.dom_shape, path, "composite boundary")?;
                let depth = tf.mindepth.max(tg.mindepth);
                let c = cast(&tg.cod_shape, &tf.dom_shape);
                (
                    Typed::new(tg.dom_shape, tf.cod_shape, depth),
                    Code::Comp(Box::new(cf), Box::new(cg), c),
                )
            }
            Term::Par(f, g) => {
                let (tf, cf) = self.check(f, &sub("arg[0]"))?;
                let (tg, cg) = self.check(g, &sub("arg[1]"))?;
                let depth = tf.mindepth.max(tg.mindepth);
                (
                    Typed::new(
                        ObjExpr::tensor(tf.dom_shape, tg.dom_shape),
                        ObjExpr::tensor(tf.cod_shape, tg.cod_shape),
                        depth,
                    ),
                    Code::Par(Box::new(cf), Box::new(cg)),
                )
            }
            Term::Copair(f, g) => {
                let (tf, cf) = self.check(f, &sub("arg[0]"))?;
                let (tg, cg) = self.check(g, &sub("arg[1]"))?;
                self.same(&tf.cod_shape, &tg.cod_shape, path, "copair codomains")?;
                let depth = tf.mindepth.max(tg.mindepth);
                let c = cast(&tg.cod_shape, &tf.cod_shape);
                (
                    Typed::new(
                        ObjExpr::coprod(tf.dom_shape, tg.dom_shape),
                        tf.cod_shape,
                        depth,
                    ),
                    Code::Copair(Box::new(cf), Box::new(cg), c),
                )
            }
            Term::Sym(x, y) => {
                self.obj(x, path)?;
                self.obj(y, path)?;
                (
                    Typed::new(
                        ObjExpr::tensor(x.clone(), y.clone()),
                        ObjExpr::tensor(y.clone(), x.clone()),
                        0,
                    ),
                    Code::Sym,
                )
            }
            Term::LUnit(x) => {
                self.obj(x, path)?;
                (
                    Typed::new(ObjExpr::tensor(ObjExpr::Top, x.clone()), x.clone(), 0),
                    Code::LUnit,
                )
            }
            Term::LUnitInv(x) => {
                self.obj(x, path)?;
                (
                    Typed::new(x.clone(), ObjExpr::tensor(ObjExpr::Top, x.clone()), 0),
                    Code::LUnitInv,
                )
            }
            Term::Inl(x, y) => {
                self.obj(x, path)?;
                self.obj(y, path)?;
                (
                    Typed::new(x.clone(), ObjExpr::coprod(x.clone(), y.clone()), 0),
                    Code::Inl,
                )
            }
            Term::Inr(x, y) => {
                self.obj(x, path)?;
                self.obj(y, path)?;
                (
                    Typed::new(y.clone(), ObjExpr::coprod(x.clone(), y.clone()), 0),
                    Code::Inr,
                )
            }
            Term::Proj1(x, y) => {
                self.obj(x, path)?;
                self.obj(y, path)?;
                (
                    Typed::new(ObjExpr::tensor(x.clone(), y.clone()), x.clone(), 0),
                    Code::Proj1,
                )
            }
            Term::Proj2(x, y) => {
                self.obj(x, path)?;
                self.obj(y, path)?;
                (
                    Typed::new(ObjExpr::tensor(x.clone(), y.clone()), y.clone(), 0),
                    Code::Proj2,
                )
            }
            Term::Dup(x) => {
                self.obj(x, path)?;
                (
                    Typed::new(x.clone(), ObjExpr::tensor(x.clone(), x.clone()), 0),
                    Code::Dup,
                )
            }
            Term::Bang(x) => {
                self.obj(x, path)?;
                (Typed::new(x.clone(), ObjExpr::Top, 0), Code::Bang)
            }
            Term::Zero(ix) => {
                self.lvl(*ix, path)?;
                (Typed::new(ObjExpr::Top, nat(*ix), 0), Code::Zero)
            }
            Term::Succ(bit, ix) => {
                self.lvl(*ix, path)?;
                (Typed::new(nat(*ix), nat(*ix), 0), Code::Succ(*bit))
            }
            Term::Cond(ix) => {
                self.lvl(*ix, path)?;
                let dom = ObjExpr::tensor(nat(*ix), ObjExpr::tensor(nat(*ix), nat(*ix)));
                (Typed::new(dom, nat(*ix), 0), Code::Cond)
            }
            Term::Incr(ix) => {
                self.lvl(*ix, path)?;
                (Typed::new(nat(*ix), nat(*ix), 0), Code::Incr)
            }
            Term::Unfold(ix) => {
                self.lvl(*ix, path)?;
                (
                    Typed::new(nat(*ix), ObjExpr::coprod(ObjExpr::Top, nat(*ix)), 0),
                    Code::Unfold,
                )
            }
            Term::EtaAt(x) => {
                self.obj(x, path)?;
                (
                    Typed::new(x.clone(), x.functor_raw(FunctorTag::T), 0),
                    Code::Eta(x.clone()),
                )
            }
            Term::EpsAt(x) => {
                self.obj(x, path)?;
                (
                    Typed::new(x.functor_raw(FunctorTag::G), x.clone(), 0),
                    Code::Eps,
                )
            }
            Term::Fr { base, step, ix } => {
                self.lvl(*ix, path)?;
                let (tb, cb) = self.check(base, &sub("base"))?;
                let (ts, cs) = self.check(step, &sub("step"))?;
                let x = &tb.dom_shape;
                let y = &tb.cod_shape;
                for (what, o) in [("X", x), ("Y", y)] {
                    if !flat_recursion_object(o, *ix) {
                        let need = if ix.k == 0 {
                            format!("a power of N[0,{}]", ix.p)
                        } else {
                            format!("a tensor of N[_,{}] factors", ix.p)
                        };
                        return Err(TypeError::new(
                            TypeErrorKind::Mismatch,
                            path,
                            format!(
                                "flat recursion at N[{},{}] needs {what} = {} to be {need}",
                                ix.k,
                                ix.p,
                                o.normalize()
                            ),
                        ));
                    }
                }
                let step_in = ObjExpr::tensor(nat(*ix), x.clone());
                self.same(
                    &ts.dom_shape,
                    &step_in,
                    path,
                    "flat recursion step domain N⊗X",
                )?;
                self.same(&ts.cod_shape, y, path, "flat recursion step codomain Y")?;
                let depth = tb.mindepth.max(ts.mindepth);
                let code = Code::Fr {
                    base: Box::new(cb),
                    step: Box::new(cs),
                    into_step: cast(&step_in, &ts.dom_shape),
                    out_step: cast(&ts.cod_shape, y),
                };
                (Typed::new(step_in, y.clone(), depth), code)
            }
            Term::Srr { base, step, p } => {
                let ix = LevelIndex::new(1, *p);
                self.lvl(ix, path)?;
                let (tb, cb) = self.check(base, &sub("base"))?;
                let (ts, cs) = self.check(step, &sub("step"))?;
                let y = &tb.cod_shape;
                self.same(&ts.dom_shape, y, path, "safe recursion step domain Y")?;
                self.same(&ts.cod_shape, y, path, "safe recursion step codomain Y")?;
                if !in_fiber_t_over_top(y) {
                    return Err(TypeError::new(
                        TypeErrorKind::SafeCodomainViolation,
                        path,
                        format!(
                            "safe ramified recursion needs Y in the fiber of T over Top; T({}) = {}",
                            y.normalize(),
                            crate::objects::apply_functor_obj(FunctorTag::T, y)
                        ),
                    ));
                }
                let depth = tb.mindepth.max(ts.mindepth);
                let into = cast(y, &ts.dom_shape);
                let out = cast(&ts.cod_shape, y);
                let code = Code::Rec(RecCode {
                    kind: "srr",
                    base: Box::new(cb),
                    steps: [Box::new(cs.clone()), Box::new(cs)],
                    into: [into.clone(), into],
                    out: [out.clone(), out],
                    with_argument: false,
                });
                (
                    Typed::new(
                        ObjExpr::tensor(nat(ix), tb.dom_shape.clone()),
                        y.clone(),
                        depth,
                    ),
                    code,
                )
            }
            Term::Min { body, bit, target } => {
                let (th, ch) = self.check(body, &sub("body"))?;
                let a = &th.dom_shape;
                let carrier = ObjExpr::coprod(ObjExpr::Top, a.clone());
                self.same(
                    &th.cod_shape,
                    &carrier,
                    path,
                    "minimization coalgebra h : A → ⊤ ⊕ A",
                )?;
                let depth = th.mindepth + 1;
                if depth > u32::from(self.cfg.levels) {
                    return Err(TypeError::new(
                        TypeErrorKind::MinBudgetExceeded,
                        path,
                        format!(
                            "{depth} nested minimizations exceed the budget i = {}",
                            self.cfg.levels
                        ),
                    ));
                }
                self.lvl(*target, path)?;
                if let Some(inner) = body.min_targets().into_iter().find(|t| t.p >= target.p) {
                    return Err(TypeError::new(
                        TypeErrorKind::MinTargetMismatch,
                        path,
                        format!(
                            "minimization into N[{},{}] contains a minimization into N[{},{}]; inner targets must sit at a lower minimization index",
                            target.k, target.p, inner.k, inner.p
                        ),
                    ));
                }
                let code = Code::Min {
                    body: Box::new(ch),
                    out: cast(&th.cod_shape, &carrier),
                    bit: *bit,
                };
                (Typed::new(a.clone(), nat(*target), depth), code)
            }
            Term::Dist { ix, left, right } => {
                self.lvl(*ix, path)?;
                self.obj(left, path)?;
                self.obj(right, path)?;
                let d = dist_diagram(*ix, left, right);
                let p = sub("diagram");
                let (tb, cb) = self.check(&d.base, &p)?;
                let (t1, c1) = self.check(&d.steps[0], &p)?;
                let (t2, c2) = self.check(&d.steps[1], &p)?;
                let dom = ObjExpr::tensor(nat(*ix), ObjExpr::coprod(left.clone(), right.clone()));
                let cod = ObjExpr::coprod(
                    ObjExpr::tensor(nat(*ix), left.clone()),
                    ObjExpr::tensor(nat(*ix), right.clone()),
                );
                debug_assert_eq!(tb.cod_shape, cod);
                debug_assert_eq!(t1.dom_shape, cod);
                debug_assert_eq!(t2.cod_shape, cod);
                let code = Code::Rec(RecCode {
                    kind: "dist",
                    base: Box::new(cb),
                    steps: [Box::new(c1), Box::new(c2)],
                    into: [None, None],
                    out: [None, None],
                    with_argument: false,
                });
                (Typed::new(dom, cod, 0), code)
            }
            Term::Prn {
                base,
                step1,
                step2,
                ix,
            } => {
                if !self.cfg.extended_prn {
                    return Err(TypeError::new(
                        TypeErrorKind::DisabledExtension,
                        path,
                        "two-branch recursion on notation requires the extended-prn switch",
                    ));
                }
                self.lvl(*ix, path)?;
                let (tb, cb) = self.check(base, &sub("base"))?;
                let (t1, c1) = self.check(step1, &sub("step1"))?;
                let (t2, c2) = self.check(step2, &sub("step2"))?;
                let x = &tb.dom_shape;
                let y = &tb.cod_shape;
                let step_in = ObjExpr::tensor(ObjExpr::tensor(nat(*ix), x.clone()), y.clone());
                for (ts, name) in [(&t1, "step1"), (&t2, "step2")] {
                    self.same(
                        &ts.dom_shape,
                        &step_in,
                        path,
                        &format!("{name} domain (N⊗X)⊗Y"),
                    )?;
                    self.same(&ts.cod_shape, y, path, &format!("{name} codomain Y"))?;
                }
                let depth = [&tb, &t1, &t2]
                    .iter()
                    .map(|t| t.mindepth)
                    .max()
                    .unwrap_or(0);
                let code = Code::Rec(RecCode {
                    kind: "prn",
                    base: Box::new(cb),
                    into: [cast(&step_in, &t1.dom_shape), cast(&step_in, &t2.dom_shape)],
                    out: [cast(&t1.cod_shape, y), cast(&t2.cod_shape, y)],
                    steps: [Box::new(c1), Box::new(c2)],
                    with_argument: true,
                });
                (
                    Typed::new(ObjExpr::tensor(nat(*ix), x.clone()), y.clone(), depth),
                    code,
                )
            }
        })
    }
}
