//! S-expression reader and the printed forms of objects, terms and values.
//!
//! Objects: `Top`, `(N k p)`, `(* a b)`, `(+ a b)`.
//! Levels: `(k p)`.
//! Terms: `(comp f g)`, `(succ 1 (0 0))`, `(fr g h (0 2))`, `(srr g h 2)`,
//! `(min h 1 (0 1))`, … — see [`term_from_sexp`] for the full table.

use std::fmt;

use num_bigint::BigUint;
use thiserror::Error;

use crate::objects::{LevelIndex, ObjExpr};
use crate::term::{Bit, Term};
use crate::value::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Debug)]
pub enum Sexp {
    Atom(String, Pos),
    List(Vec<Sexp>, Pos),
}

impl PartialEq for Sexp {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Sexp::Atom(a, _), Sexp::Atom(b, _)) => a == b,
            (Sexp::List(a, _), Sexp::List(b, _)) => a == b,
            _ => false,
        }
    }
}

impl Sexp {
    pub fn pos(&self) -> Pos {
        match self {
            Sexp::Atom(_, p) | Sexp::List(_, p) => *p,
        }
    }

    pub fn atom(&self) -> Option<&str> {
        match self {
            Sexp::Atom(s, _) => Some(s),
            Sexp::List(..) => None,
        }
    }

    pub fn list(&self) -> Option<&[Sexp]> {
        match self {
            Sexp::List(items, _) => Some(items),
            Sexp::Atom(..) => None,
        }
    }
}

impl fmt::Display for Sexp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sexp::Atom(s, _) => write!(f, "{s}"),
            Sexp::List(items, _) => {
                write!(f, "(")?;
                for (i, it) in items.iter().enumerate() {
                    if i > 0 {
                        write!(f, " ")?;
                    }
                    write!(f, "{it}")?;
                }
                write!(f, ")")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{pos}: {msg}")]
pub struct SyntaxError {
    pub pos: Pos,
    pub msg: String,
}

impl SyntaxError {
    pub fn new(pos: Pos, msg: impl Into<String>) -> Self {
        SyntaxError {
            pos,
            msg: msg.into(),
        }
    }
}

/// Reads every top-level s-expression in `src`. `;` starts a line comment.
pub fn read_all(src: &str) -> Result<Vec<Sexp>, SyntaxError> {
    let mut stack: Vec<(Vec<Sexp>, Pos)> = Vec::new();
    let mut top = Vec::new();
    let mut line = 1;
    let mut col = 1;
    let mut chars = src.chars().peekable();
    while let Some(c) = chars.next() {
        let here = Pos { line, col };
        let mut advance = |c: char| {
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
        };
        advance(c);
        match c {
            ';' => {
                while let Some(&n) = chars.peek() {
                    if n == '\n' {
                        break;
                    }
                    advance(n);
                    chars.next();
                }
            }
            '(' => stack.push((Vec::new(), here)),
            ')' => {
                let (items, start) = stack
                    .pop()
                    .ok_or_else(|| SyntaxError::new(here, "unbalanced ')'"))?;
                let node = Sexp::List(items, start);
                match stack.last_mut() {
                    Some((parent, _)) => parent.push(node),
                    None => top.push(node),
                }
            }
            c if c.is_whitespace() => {}
            _ => {
                let mut s = String::from(c);
                while let Some(&n) = chars.peek() {
                    if n.is_whitespace() || n == '(' || n == ')' || n == ';' {
                        break;
                    }
                    advance(n);
                    s.push(n);
                    chars.next();
                }
                let node = Sexp::Atom(s, here);
                match stack.last_mut() {
                    Some((parent, _)) => parent.push(node),
                    None => top.push(node),
                }
            }
        }
    }
    if let Some((_, start)) = stack.pop() {
        return Err(SyntaxError::new(
            start,
            "unbalanced '(': list is never closed",
        ));
    }
    Ok(top)
}

pub fn read_one(src: &str) -> Result<Sexp, SyntaxError> {
    let mut all = read_all(src)?;
    match all.len() {
        1 => Ok(all.pop().unwrap()),
        0 => Err(SyntaxError::new(Pos { line: 1, col: 1 }, "empty input")),
        _ => Err(SyntaxError::new(
            all[1].pos(),
            "expected a single expression",
        )),
    }
}

pub fn small(s: &Sexp) -> Result<u8, SyntaxError> {
    s.atom()
        .and_then(|a| a.parse::<u8>().ok())
        .ok_or_else(|| SyntaxError::new(s.pos(), format!("expected a small number, got {s}")))
}

pub fn level_from_sexp(s: &Sexp) -> Result<LevelIndex, SyntaxError> {
    match s.list() {
        Some([k, p]) => Ok(LevelIndex::new(small(k)?, small(p)?)),
        _ => Err(SyntaxError::new(
            s.pos(),
            format!("expected a level (k p), got {s}"),
        )),
    }
}

pub fn obj_from_sexp(s: &Sexp) -> Result<ObjExpr, SyntaxError> {
    match s {
        Sexp::Atom(a, _) if a == "Top" => Ok(ObjExpr::Top),
        Sexp::List(items, pos) => match items.as_slice() {
            [head, k, p] if head.atom() == Some("N") => Ok(ObjExpr::nat(small(k)?, small(p)?)),
            [head, a, b] if head.atom() == Some("*") => {
                Ok(ObjExpr::tensor(obj_from_sexp(a)?, obj_from_sexp(b)?))
            }
            [head, a, b] if head.atom() == Some("+") => {
                Ok(ObjExpr::coprod(obj_from_sexp(a)?, obj_from_sexp(b)?))
            }
            _ => Err(SyntaxError::new(
                *pos,
                format!("expected an object, got {s}"),
            )),
        },
        _ => Err(SyntaxError::new(
            s.pos(),
            format!("expected an object, got {s}"),
        )),
    }
}

pub struct ObjSexp<'a>(pub &'a ObjExpr);

impl fmt::Display for ObjSexp<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            ObjExpr::Top => write!(f, "Top"),
            ObjExpr::Nat(ix) => write!(f, "(N {} {})", ix.k, ix.p),
            ObjExpr::Tensor(a, b) => write!(f, "(* {} {})", ObjSexp(a), ObjSexp(b)),
            ObjExpr::Coprod(a, b) => write!(f, "(+ {} {})", ObjSexp(a), ObjSexp(b)),
        }
    }
}

/// Resolves bare symbols inside a term (earlier definitions).
pub trait Resolver {
    fn resolve(&self, name: &str) -> Option<Term>;
}

pub struct NoNames;

impl Resolver for NoNames {
    fn resolve(&self, _name: &str) -> Option<Term> {
        None
    }
}

impl<F: Fn(&str) -> Option<Term>> Resolver for F {
    fn resolve(&self, name: &str) -> Option<Term> {
        self(name)
    }
}

fn bit(s: &Sexp) -> Result<Bit, SyntaxError> {
    Bit::from_digit(small(s)?)
        .ok_or_else(|| SyntaxError::new(s.pos(), "successor choice must be 1 or 2"))
}

/// Parses a term. Bare symbols are looked up through `names`.
///
/// | form | node |
/// |---|---|
/// | `(id X)` `(sym X Y)` `(lunit X)` `(lunit-inv X)` | structure |
/// | `(inl X Y)` `(inr X Y)` `(copair f g)` | coproducts |
/// | `(proj1 X Y)` `(proj2 X Y)` `(dup X)` `(bang X)` | cartesian |
/// | `(comp f g)` `(par f g)` | composition, tensor |
/// | `(zero L)` `(succ n L)` `(cond L)` `(incr L)` `(unfold L)` | generators |
/// | `(eta X)` `(eps X)` | natural transformations |
/// | `(fr g h L)` `(srr g h p)` `(min h n L)` `(dist L X Y)` `(prn g h1 h2 L)` | schemes |
pub fn term_from_sexp(s: &Sexp, names: &dyn Resolver) -> Result<Term, SyntaxError> {
    let items = match s {
        Sexp::Atom(name, pos) => {
            return names
                .resolve(name)
                .ok_or_else(|| SyntaxError::new(*pos, format!("unknown name '{name}'")))
        }
        Sexp::List(items, _) => items,
    };
    let Some(head) = items.first().and_then(Sexp::atom) else {
        return Err(SyntaxError::new(s.pos(), "expected a term form"));
    };
    let args = &items[1..];
    let arity = |n: usize| -> Result<(), SyntaxError> {
        if args.len() == n {
            Ok(())
        } else {
            Err(SyntaxError::new(
                s.pos(),
                format!("'{head}' takes {n} argument(s), got {}", args.len()),
            ))
        }
    };
    let term = |i: usize| term_from_sexp(&args[i], names).map(Box::new);
    let obj = |i: usize| obj_from_sexp(&args[i]);
    let lvl = |i: usize| level_from_sexp(&args[i]);
    Ok(match head {
        "id" => {
            arity(1)?;
            Term::Id(obj(0)?)
        }
        "comp" => {
            arity(2)?;
            Term::Comp(term(0)?, term(1)?)
        }
        "par" => {
            arity(2)?;
            Term::Par(term(0)?, term(1)?)
        }
        "copair" => {
            arity(2)?;
            Term::Copair(term(0)?, term(1)?)
        }
        "sym" => {
            arity(2)?;
            Term::Sym(obj(0)?, obj(1)?)
        }
        "lunit" => {
            arity(1)?;
            Term::LUnit(obj(0)?)
        }
        "lunit-inv" => {
            arity(1)?;
            Term::LUnitInv(obj(0)?)
        }
        "inl" => {
            arity(2)?;
            Term::Inl(obj(0)?, obj(1)?)
        }
        "inr" => {
            arity(2)?;
            Term::Inr(obj(0)?, obj(1)?)
        }
        "proj1" => {
            arity(2)?;
            Term::Proj1(obj(0)?, obj(1)?)
        }
        "proj2" => {
            arity(2)?;
            Term::Proj2(obj(0)?, obj(1)?)
        }
        "dup" => {
            arity(1)?;
            Term::Dup(obj(0)?)
        }
        "bang" => {
            arity(1)?;
            Term::Bang(obj(0)?)
        }
        "zero" => {
            arity(1)?;
            Term::Zero(lvl(0)?)
        }
        "succ" => {
            arity(2)?;
            Term::Succ(bit(&args[0])?, lvl(1)?)
        }
        "cond" => {
            arity(1)?;
            Term::Cond(lvl(0)?)
        }
        "incr" => {
            arity(1)?;
            Term::Incr(lvl(0)?)
        }
        "unfold" => {
            arity(1)?;
            Term::Unfold(lvl(0)?)
        }
        "eta" => {
            arity(1)?;
            Term::EtaAt(obj(0)?)
        }
        "eps" => {
            arity(1)?;
            Term::EpsAt(obj(0)?)
        }
        "fr" => {
            arity(3)?;
            Term::Fr {
                base: term(0)?,
                step: term(1)?,
                ix: lvl(2)?,
            }
        }
        "srr" => {
            arity(3)?;
            Term::Srr {
                base: term(0)?,
                step: term(1)?,
                p: small(&args[2])?,
            }
        }
        "min" => {
            arity(3)?;
            Term::Min {
                body: term(0)?,
                bit: bit(&args[1])?,
                target: lvl(2)?,
            }
        }
        "dist" => {
            arity(3)?;
            Term::Dist {
                ix: lvl(0)?,
                left: obj(1)?,
                right: obj(2)?,
            }
        }
        "prn" => {
            arity(4)?;
            Term::Prn {
                base: term(0)?,
                step1: term(1)?,
                step2: term(2)?,
                ix: lvl(3)?,
            }
        }
        other => {
            return Err(SyntaxError::new(
                s.pos(),
                format!("unknown term form '{other}'"),
            ))
        }
    })
}

pub fn parse_term(src: &str) -> Result<Term, SyntaxError> {
    term_from_sexp(&read_one(src)?, &NoNames)
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lv = |ix: &LevelIndex| format!("({} {})", ix.k, ix.p);
        match self {
            Term::Id(x) => write!(f, "(id {})", ObjSexp(x)),
            Term::Comp(a, b) => write!(f, "(comp {a} {b})"),
            Term::Par(a, b) => write!(f, "(par {a} {b})"),
            Term::Copair(a, b) => write!(f, "(copair {a} {b})"),
            Term::Sym(x, y) => write!(f, "(sym {} {})", ObjSexp(x), ObjSexp(y)),
            Term::LUnit(x) => write!(f, "(lunit {})", ObjSexp(x)),
            Term::LUnitInv(x) => write!(f, "(lunit-inv {})", ObjSexp(x)),
            Term::Inl(x, y) => write!(f, "(inl {} {})", ObjSexp(x), ObjSexp(y)),
            Term::Inr(x, y) => write!(f, "(inr {} {})", ObjSexp(x), ObjSexp(y)),
            Term::Proj1(x, y) => write!(f, "(proj1 {} {})", ObjSexp(x), ObjSexp(y)),
            Term::Proj2(x, y) => write!(f, "(proj2 {} {})", ObjSexp(x), ObjSexp(y)),
            Term::Dup(x) => write!(f, "(dup {})", ObjSexp(x)),
            Term::Bang(x) => write!(f, "(bang {})", ObjSexp(x)),
            Term::Zero(ix) => write!(f, "(zero {})", lv(ix)),
            Term::Succ(n, ix) => write!(f, "(succ {} {})", n.digit(), lv(ix)),
            Term::Cond(ix) => write!(f, "(cond {})", lv(ix)),
            Term::Incr(ix) => write!(f, "(incr {})", lv(ix)),
            Term::Unfold(ix) => write!(f, "(unfold {})", lv(ix)),
            Term::EtaAt(x) => write!(f, "(eta {})", ObjSexp(x)),
            Term::EpsAt(x) => write!(f, "(eps {})", ObjSexp(x)),
            Term::Fr { base, step, ix } => write!(f, "(fr {base} {step} {})", lv(ix)),
            Term::Srr { base, step, p } => write!(f, "(srr {base} {step} {p})"),
            Term::Min { body, bit, target } => {
                write!(f, "(min {body} {} {})", bit.digit(), lv(target))
            }
            Term::Dist { ix, left, right } => {
                write!(f, "(dist {} {} {})", lv(ix), ObjSexp(left), ObjSexp(right))
            }
            Term::Prn {
                base,
                step1,
                step2,
                ix,
            } => {
                write!(f, "(prn {base} {step1} {step2} {})", lv(ix))
            }
        }
    }
}

/// Values: a natural number, `*`, `(pair a b)`, `(inl v)`, `(inr v)`.
pub fn value_from_sexp(s: &Sexp) -> Result<Value, SyntaxError> {
    match s {
        Sexp::Atom(a, pos) => {
            if a == "*" {
                Ok(Value::Star)
            } else {
                a.parse::<BigUint>()
                    .map(Value::Nat)
                    .map_err(|_| SyntaxError::new(*pos, format!("expected a value, got '{a}'")))
            }
        }
        Sexp::List(items, pos) => match items.as_slice() {
            [h, a, b] if h.atom() == Some("pair") => {
                Ok(Value::pair(value_from_sexp(a)?, value_from_sexp(b)?))
            }
            [h, v] if h.atom() == Some("inl") => Ok(Value::inl(value_from_sexp(v)?)),
            [h, v] if h.atom() == Some("inr") => Ok(Value::inr(value_from_sexp(v)?)),
            _ => Err(SyntaxError::new(*pos, format!("expected a value, got {s}"))),
        },
    }
}

pub fn parse_value(src: &str) -> Result<Value, SyntaxError> {
    value_from_sexp(&read_one(src)?)
}
