//! Objects of the free category: the unit `Top`, tiered naturals `N[k,p]`,
//! tensors and coproducts, together with their canonical sum-of-products
//! normal form and the actions of the functors `T`, `G` and `M(q)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Tier of a natural-number object: safety index `k` in `{0,1}` and
/// minimization index `p` in `{0,…,i-1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LevelIndex {
    pub k: u8,
    pub p: u8,
}

impl LevelIndex {
    pub const fn new(k: u8, p: u8) -> Self {
        LevelIndex { k, p }
    }

    /// Checks `k <= 1` and `p < levels`.
    pub fn validate(self, levels: u8) -> Result<Self, ObjError> {
        if self.k > 1 || self.p >= levels {
            Err(ObjError::IndexOutOfRange {
                index: self,
                levels,
            })
        } else {
            Ok(self)
        }
    }

    /// Key used to order tensor factors in the normal form.
    ///
    /// Factors are grouped by minimization index first, then by safety
    /// index, so `N[1,0]` precedes `N[0,1]`.
    pub fn sort_key(self) -> (u8, u8) {
        (self.p, self.k)
    }
}

impl fmt::Display for LevelIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} {})", self.k, self.p)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ObjError {
    #[error("index N[{},{}] out of range for i = {levels} (need k <= 1, p < i)", index.k, index.p)]
    IndexOutOfRange { index: LevelIndex, levels: u8 },
    #[error("object syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ObjExpr {
    Top,
    Nat(LevelIndex),
    Tensor(Box<ObjExpr>, Box<ObjExpr>),
    Coprod(Box<ObjExpr>, Box<ObjExpr>),
}

/// One of the structure-preserving endofunctors `T`, `G`, `M(q)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FunctorTag {
    T,
    G,
    M(u8),
}

impl fmt::Display for FunctorTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunctorTag::T => write!(f, "T"),
            FunctorTag::G => write!(f, "G"),
            FunctorTag::M(q) => write!(f, "M{q}"),
        }
    }
}

impl FunctorTag {
    pub fn validate(self, levels: u8) -> Result<Self, ObjError> {
        match self {
            FunctorTag::M(q) if q >= levels => Err(ObjError::IndexOutOfRange {
                index: LevelIndex::new(0, q),
                levels,
            }),
            _ => Ok(self),
        }
    }

    /// Image of the generator `N[ix]`; `None` stands for `Top`.
    pub fn on_level(self, ix: LevelIndex) -> Option<LevelIndex> {
        match self {
            FunctorTag::T => (ix.k == 1).then_some(ix),
            FunctorTag::G => Some(LevelIndex::new(1, ix.p)),
            FunctorTag::M(q) if ix.p == q => {
                if q == 0 {
                    None
                } else {
                    Some(LevelIndex::new(ix.k, q - 1))
                }
            }
            FunctorTag::M(_) => Some(ix),
        }
    }
}

impl ObjExpr {
    pub const fn nat(k: u8, p: u8) -> Self {
        ObjExpr::Nat(LevelIndex::new(k, p))
    }

    pub fn tensor(a: ObjExpr, b: ObjExpr) -> Self {
        ObjExpr::Tensor(Box::new(a), Box::new(b))
    }

    pub fn coprod(a: ObjExpr, b: ObjExpr) -> Self {
        ObjExpr::Coprod(Box::new(a), Box::new(b))
    }

    /// Right-nested tensor of the given factors; `Top` when empty.
    pub fn tensor_of<I: IntoIterator<Item = ObjExpr>>(factors: I) -> Self {
        let mut items: Vec<ObjExpr> = factors.into_iter().collect();
        let Some(mut acc) = items.pop() else {
            return ObjExpr::Top;
        };
        while let Some(prev) = items.pop() {
            acc = ObjExpr::tensor(prev, acc);
        }
        acc
    }

    /// `N[ix]^alpha`.
    pub fn power(ix: LevelIndex, alpha: usize) -> Self {
        ObjExpr::tensor_of(std::iter::repeat_n(ObjExpr::Nat(ix), alpha))
    }

    pub fn validate(&self, levels: u8) -> Result<(), ObjError> {
        match self {
            ObjExpr::Top => Ok(()),
            ObjExpr::Nat(ix) => ix.validate(levels).map(|_| ()),
            ObjExpr::Tensor(a, b) | ObjExpr::Coprod(a, b) => {
                a.validate(levels)?;
                b.validate(levels)
            }
        }
    }

    /// Number of summands after distributing tensors over coproducts.
    pub fn summand_count(&self) -> usize {
        match self {
            ObjExpr::Top | ObjExpr::Nat(_) => 1,
            ObjExpr::Tensor(a, b) => a.summand_count() * b.summand_count(),
            ObjExpr::Coprod(a, b) => a.summand_count() + b.summand_count(),
        }
    }

    /// Summands of the distributed form, factors in left-to-right order
    /// (not sorted). Coproduct order is preserved; a tensor of sums
    /// enumerates left summands major.
    pub fn raw_summands(&self) -> Vec<Vec<LevelIndex>> {
        match self {
            ObjExpr::Top => vec![vec![]],
            ObjExpr::Nat(ix) => vec![vec![*ix]],
            ObjExpr::Coprod(a, b) => {
                let mut out = a.raw_summands();
                out.extend(b.raw_summands());
                out
            }
            ObjExpr::Tensor(a, b) => {
                let right = b.raw_summands();
                let mut out = Vec::with_capacity(a.summand_count() * right.len());
                for l in a.raw_summands() {
                    for r in &right {
                        let mut s = l.clone();
                        s.extend_from_slice(r);
                        out.push(s);
                    }
                }
                out
            }
        }
    }

    /// Factors of the `idx`-th summand in left-to-right order.
    pub fn summand_factors(&self, idx: usize) -> Vec<LevelIndex> {
        let mut out = Vec::new();
        self.collect_summand(idx, &mut out);
        out
    }

    fn collect_summand(&self, idx: usize, out: &mut Vec<LevelIndex>) {
        match self {
            ObjExpr::Top => {}
            ObjExpr::Nat(ix) => out.push(*ix),
            ObjExpr::Coprod(a, b) => {
                let na = a.summand_count();
                if idx < na {
                    a.collect_summand(idx, out)
                } else {
                    b.collect_summand(idx - na, out)
                }
            }
            ObjExpr::Tensor(a, b) => {
                let nb = b.summand_count();
                a.collect_summand(idx / nb, out);
                b.collect_summand(idx % nb, out);
            }
        }
    }

    /// Sum-of-products form with each summand's factors sorted.
    pub fn summands(&self) -> Vec<Vec<LevelIndex>> {
        let mut out = self.raw_summands();
        for s in &mut out {
            s.sort_by_key(|ix| ix.sort_key());
        }
        out
    }

    fn from_summands(summands: Vec<Vec<LevelIndex>>) -> ObjExpr {
        let mut terms: Vec<ObjExpr> = summands
            .into_iter()
            .map(|s| ObjExpr::tensor_of(s.into_iter().map(ObjExpr::Nat)))
            .collect();
        let mut acc = terms.pop().expect("an object has at least one summand");
        while let Some(prev) = terms.pop() {
            acc = ObjExpr::coprod(prev, acc);
        }
        acc
    }

    /// Canonical representative: right-nested coproduct of right-nested
    /// tensors, unit factors dropped, tensors distributed over sums and
    /// factors ordered by [`LevelIndex::sort_key`].
    pub fn normalize(&self) -> ObjExpr {
        ObjExpr::from_summands(self.summands())
    }

    /// Equality modulo the canonical isomorphisms.
    pub fn iso_eq(&self, other: &ObjExpr) -> bool {
        self.summands() == other.summands()
    }

    /// Every generator appearing in the object, left to right.
    pub fn generators(&self) -> Vec<LevelIndex> {
        let mut out = Vec::new();
        fn go(x: &ObjExpr, out: &mut Vec<LevelIndex>) {
            match x {
                ObjExpr::Top => {}
                ObjExpr::Nat(ix) => out.push(*ix),
                ObjExpr::Tensor(a, b) | ObjExpr::Coprod(a, b) => {
                    go(a, out);
                    go(b, out);
                }
            }
        }
        go(self, &mut out);
        out
    }

    pub fn has_coproduct(&self) -> bool {
        match self {
            ObjExpr::Top | ObjExpr::Nat(_) => false,
            ObjExpr::Coprod(..) => true,
            ObjExpr::Tensor(a, b) => a.has_coproduct() || b.has_coproduct(),
        }
    }

    /// Homomorphic functor image without renormalizing; the shape of the
    /// term-level image.
    pub fn functor_raw(&self, f: FunctorTag) -> ObjExpr {
        match self {
            ObjExpr::Top => ObjExpr::Top,
            ObjExpr::Nat(ix) => f.on_level(*ix).map_or(ObjExpr::Top, ObjExpr::Nat),
            ObjExpr::Tensor(a, b) => ObjExpr::tensor(a.functor_raw(f), b.functor_raw(f)),
            ObjExpr::Coprod(a, b) => ObjExpr::coprod(a.functor_raw(f), b.functor_raw(f)),
        }
    }
}

/// Normal form of `x`, after checking every index against `levels`.
pub fn normalize_object(x: &ObjExpr, levels: u8) -> Result<ObjExpr, ObjError> {
    x.validate(levels)?;
    Ok(x.normalize())
}

/// Functor action on objects, renormalized.
pub fn apply_functor_obj(f: FunctorTag, x: &ObjExpr) -> ObjExpr {
    x.functor_raw(f).normalize()
}

/// True when `T` sends `x` to `Top`: `x` is `Top` or a tensor of
/// `N[0,_]` factors.
pub fn in_fiber_t_over_top(x: &ObjExpr) -> bool {
    apply_functor_obj(FunctorTag::T, x) == ObjExpr::Top
}

/// `M(i-1) ∘ … ∘ M(0)` applied to `x`, with `M(0)` applied first.
pub fn min_fiber_residue(x: &ObjExpr, levels: u8) -> ObjExpr {
    let mut acc = x.normalize();
    for q in 0..levels {
        acc = apply_functor_obj(FunctorTag::M(q), &acc);
    }
    acc
}

impl fmt::Display for ObjExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ObjExpr::Top => write!(f, "Top"),
            ObjExpr::Nat(ix) => write!(f, "N[{},{}]", ix.k, ix.p),
            ObjExpr::Tensor(a, b) => write!(f, "({a} * {b})"),
            ObjExpr::Coprod(a, b) => write!(f, "({a} + {b})"),
        }
    }
}

impl FromStr for ObjExpr {
    type Err = ObjError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = ObjParser {
            src: s.as_bytes(),
            pos: 0,
        };
        let x = p.expr()?;
        p.ws();
        if p.pos != p.src.len() {
            return Err(p.err("trailing input"));
        }
        Ok(x)
    }
}

struct ObjParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl ObjParser<'_> {
    fn err(&self, msg: &str) -> ObjError {
        ObjError::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> Result<(), ObjError> {
        self.ws();
        if self.src.get(self.pos) == Some(&c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", c as char)))
        }
    }

    fn digit(&mut self) -> Result<u8, ObjError> {
        self.ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| self.err("expected a small number"))
    }

    fn expr(&mut self) -> Result<ObjExpr, ObjError> {
        self.ws();
        if self.src[self.pos..].starts_with(b"Top") {
            self.pos += 3;
            return Ok(ObjExpr::Top);
        }
        if self.src.get(self.pos) == Some(&b'N') {
            self.pos += 1;
            self.eat(b'[')?;
            let k = self.digit()?;
            self.eat(b',')?;
            let p = self.digit()?;
            self.eat(b']')?;
            return Ok(ObjExpr::nat(k, p));
        }
        self.eat(b'(')?;
        let a = self.expr()?;
        self.ws();
        let op = *self
            .src
            .get(self.pos)
            .ok_or_else(|| self.err("unexpected end"))?;
        self.pos += 1;
        let b = self.expr()?;
        self.eat(b')')?;
        match op {
            b'*' => Ok(ObjExpr::tensor(a, b)),
            b'+' => Ok(ObjExpr::coprod(a, b)),
            _ => Err(self.err("expected '*' or '+'")),
        }
    }
}
