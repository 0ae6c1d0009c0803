//! Arrow syntax of the free category.

use serde::{Deserialize, Serialize};

use crate::objects::{LevelIndex, ObjExpr};

/// Binary successor choice: `1` appends a 0 bit (`2m`), `2` appends a 1 bit
/// (`2m+1`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Bit {
    S1,
    S2,
}

impl Bit {
    pub fn from_digit(n: u8) -> Option<Bit> {
        match n {
            1 => Some(Bit::S1),
            2 => Some(Bit::S2),
            _ => None,
        }
    }

    pub fn digit(self) -> u8 {
        match self {
            Bit::S1 => 1,
            Bit::S2 => 2,
        }
    }

    /// The successor that produced an odd/even positive number.
    pub fn of_low_bit(odd: bool) -> Bit {
        if odd {
            Bit::S2
        } else {
            Bit::S1
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Term {
    Id(ObjExpr),
    /// `Comp(f, g)` is `f ∘ g`: run `g`, then `f`.
    Comp(Box<Term>, Box<Term>),
    Par(Box<Term>, Box<Term>),
    Sym(ObjExpr, ObjExpr),
    LUnit(ObjExpr),
    LUnitInv(ObjExpr),
    Inl(ObjExpr, ObjExpr),
    Inr(ObjExpr, ObjExpr),
    Copair(Box<Term>, Box<Term>),
    Proj1(ObjExpr, ObjExpr),
    Proj2(ObjExpr, ObjExpr),
    Dup(ObjExpr),
    Bang(ObjExpr),
    Zero(LevelIndex),
    Succ(Bit, LevelIndex),
    /// Conditional modulo `C(a, b, c)`: `b` when `a` is even, else `c`.
    Cond(LevelIndex),
    /// Unary successor `m ↦ m+1` of the coalgebra carrier.
    Incr(LevelIndex),
    /// Structure map `(0 ⊕ s)⁻¹ : N → ⊤ ⊕ N`, `0 ↦ inl *`, `m ↦ inr (m-1)`.
    Unfold(LevelIndex),
    EtaAt(ObjExpr),
    EpsAt(ObjExpr),
    /// Flat recursion `FR(g, h) : N[ix] ⊗ X → Y`.
    Fr {
        base: Box<Term>,
        step: Box<Term>,
        ix: LevelIndex,
    },
    /// Safe ramified recursion `SRR(g, h) : N[1,p] ⊗ X → Y`.
    Srr {
        base: Box<Term>,
        step: Box<Term>,
        p: u8,
    },
    /// Bounded minimization `μ : A → N[target]` from a coalgebra `h : A → ⊤ ⊕ A`.
    Min {
        body: Box<Term>,
        bit: Bit,
        target: LevelIndex,
    },
    /// Distributivity `N[ix] ⊗ (X ⊕ Y) → (N[ix] ⊗ X) ⊕ (N[ix] ⊗ Y)`.
    Dist {
        ix: LevelIndex,
        left: ObjExpr,
        right: ObjExpr,
    },
    /// Two-branch recursion on notation with access to the recursion
    /// argument; only accepted with the extended-recursion switch on.
    Prn {
        base: Box<Term>,
        step1: Box<Term>,
        step2: Box<Term>,
        ix: LevelIndex,
    },
}

impl Term {
    pub fn comp(f: Term, g: Term) -> Term {
        Term::Comp(Box::new(f), Box::new(g))
    }

    /// Left-to-right pipeline: `seq([a, b, c])` runs `a`, then `b`, then `c`.
    pub fn seq<I: IntoIterator<Item = Term>>(stages: I) -> Term {
        let mut it = stages.into_iter();
        let first = it.next().expect("seq needs at least one stage");
        it.fold(first, |acc, next| Term::comp(next, acc))
    }

    pub fn par(f: Term, g: Term) -> Term {
        Term::Par(Box::new(f), Box::new(g))
    }

    pub fn copair(f: Term, g: Term) -> Term {
        Term::Copair(Box::new(f), Box::new(g))
    }

    /// `⟨f, g⟩ = (f ⊗ g) ∘ Δ` for arrows out of `dom`.
    pub fn pairing(dom: ObjExpr, f: Term, g: Term) -> Term {
        Term::comp(Term::par(f, g), Term::Dup(dom))
    }

    pub fn fr(base: Term, step: Term, ix: LevelIndex) -> Term {
        Term::Fr {
            base: Box::new(base),
            step: Box::new(step),
            ix,
        }
    }

    pub fn srr(base: Term, step: Term, p: u8) -> Term {
        Term::Srr {
            base: Box::new(base),
            step: Box::new(step),
            p,
        }
    }

    pub fn min(body: Term, bit: Bit, target: LevelIndex) -> Term {
        Term::Min {
            body: Box::new(body),
            bit,
            target,
        }
    }

    pub fn prn(base: Term, step1: Term, step2: Term, ix: LevelIndex) -> Term {
        Term::Prn {
            base: Box::new(base),
            step1: Box::new(step1),
            step2: Box::new(step2),
            ix,
        }
    }

    /// Short node name used in traces and error paths.
    pub fn kind(&self) -> &'static str {
        match self {
            Term::Id(_) => "id",
            Term::Comp(..) => "comp",
            Term::Par(..) => "par",
            Term::Sym(..) => "sym",
            Term::LUnit(_) => "lunit",
            Term::LUnitInv(_) => "lunit-inv",
            Term::Inl(..) => "inl",
            Term::Inr(..) => "inr",
            Term::Copair(..) => "copair",
            Term::Proj1(..) => "proj1",
            Term::Proj2(..) => "proj2",
            Term::Dup(_) => "dup",
            Term::Bang(_) => "bang",
            Term::Zero(_) => "zero",
            Term::Succ(..) => "succ",
            Term::Cond(_) => "cond",
            Term::Incr(_) => "incr",
            Term::Unfold(_) => "unfold",
            Term::EtaAt(_) => "eta",
            Term::EpsAt(_) => "eps",
            Term::Fr { .. } => "fr",
            Term::Srr { .. } => "srr",
            Term::Min { .. } => "min",
            Term::Dist { .. } => "dist",
            Term::Prn { .. } => "prn",
        }
    }

    /// Number of `Min` nodes on the most deeply nested path.
    pub fn min_nesting(&self) -> u32 {
        match self {
            Term::Min { body, .. } => 1 + body.min_nesting(),
            Term::Comp(a, b) | Term::Par(a, b) | Term::Copair(a, b) => {
                a.min_nesting().max(b.min_nesting())
            }
            Term::Fr { base, step, .. } | Term::Srr { base, step, .. } => {
                base.min_nesting().max(step.min_nesting())
            }
            Term::Prn {
                base, step1, step2, ..
            } => base
                .min_nesting()
                .max(step1.min_nesting())
                .max(step2.min_nesting()),
            _ => 0,
        }
    }

    /// Targets of every `Min` node in the term (outermost first).
    pub fn min_targets(&self) -> Vec<LevelIndex> {
        let mut out = Vec::new();
        self.visit(&mut |t| {
            if let Term::Min { target, .. } = t {
                out.push(*target);
            }
        });
        out
    }

    /// Pre-order traversal.
    pub fn visit<F: FnMut(&Term)>(&self, f: &mut F) {
        f(self);
        match self {
            Term::Comp(a, b) | Term::Par(a, b) | Term::Copair(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            Term::Fr { base, step, .. } | Term::Srr { base, step, .. } => {
                base.visit(f);
                step.visit(f);
            }
            Term::Min { body, .. } => body.visit(f),
            Term::Prn {
                base, step1, step2, ..
            } => {
                base.visit(f);
                step1.visit(f);
                step2.visit(f);
            }
            _ => {}
        }
    }

    pub fn size(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |_| n += 1);
        n
    }
}
