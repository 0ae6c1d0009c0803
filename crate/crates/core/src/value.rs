//! Points of the standard model and the canonical isomorphisms between
//! shapes that share a normal form.

use std::fmt;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde_json::json;

use crate::objects::{FunctorTag, LevelIndex, ObjExpr};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    Star,
    Nat(BigUint),
    Pair(Box<Value>, Box<Value>),
    InlV(Box<Value>),
    InrV(Box<Value>),
}

impl Value {
    pub fn nat(n: u64) -> Value {
        Value::Nat(BigUint::from(n))
    }

    pub fn pair(a: Value, b: Value) -> Value {
        Value::Pair(Box::new(a), Box::new(b))
    }

    pub fn inl(v: Value) -> Value {
        Value::InlV(Box::new(v))
    }

    pub fn inr(v: Value) -> Value {
        Value::InrV(Box::new(v))
    }

    pub fn as_nat(&self) -> Option<&BigUint> {
        match self {
            Value::Nat(n) => Some(n),
            _ => None,
        }
    }

    pub fn as_u64(&self) -> Option<u64> {
        self.as_nat().and_then(ToPrimitive::to_u64)
    }

    /// Whether the value is a point of `obj` read as a raw shape.
    pub fn inhabits(&self, obj: &ObjExpr) -> bool {
        match (self, obj) {
            (Value::Star, ObjExpr::Top) => true,
            (Value::Nat(_), ObjExpr::Nat(_)) => true,
            (Value::Pair(a, b), ObjExpr::Tensor(x, y)) => a.inhabits(x) && b.inhabits(y),
            (Value::InlV(v), ObjExpr::Coprod(x, _)) => v.inhabits(x),
            (Value::InrV(v), ObjExpr::Coprod(_, y)) => v.inhabits(y),
            _ => false,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Value::Star => json!("*"),
            Value::Nat(n) => match n.to_u64() {
                Some(small) => json!(small),
                None => json!(n.to_string()),
            },
            Value::Pair(a, b) => json!([a.to_json(), b.to_json()]),
            Value::InlV(v) => json!({ "inl": v.to_json() }),
            Value::InrV(v) => json!({ "inr": v.to_json() }),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Star => write!(f, "*"),
            Value::Nat(n) => write!(f, "{n}"),
            Value::Pair(a, b) => write!(f, "(pair {a} {b})"),
            Value::InlV(v) => write!(f, "(inl {v})"),
            Value::InrV(v) => write!(f, "(inr {v})"),
        }
    }
}

/// A value that does not inhabit the shape it was handed to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShapeError {
    pub value: Value,
    pub shape: ObjExpr,
}

impl fmt::Display for ShapeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "value {} does not inhabit {}", self.value, self.shape)
    }
}

fn shape_err(v: &Value, x: &ObjExpr) -> ShapeError {
    ShapeError {
        value: v.clone(),
        shape: x.clone(),
    }
}

/// Summand index and generator payloads (left to right) of a point.
fn flatten(
    v: &Value,
    x: &ObjExpr,
    out: &mut Vec<(LevelIndex, BigUint)>,
) -> Result<usize, ShapeError> {
    match (v, x) {
        (Value::Star, ObjExpr::Top) => Ok(0),
        (Value::Nat(n), ObjExpr::Nat(ix)) => {
            out.push((*ix, n.clone()));
            Ok(0)
        }
        (Value::InlV(inner), ObjExpr::Coprod(a, _)) => flatten(inner, a, out),
        (Value::InrV(inner), ObjExpr::Coprod(a, b)) => {
            Ok(a.summand_count() + flatten(inner, b, out)?)
        }
        (Value::Pair(l, r), ObjExpr::Tensor(a, b)) => {
            let i = flatten(l, a, out)?;
            let j = flatten(r, b, out)?;
            Ok(i * b.summand_count() + j)
        }
        _ => Err(shape_err(v, x)),
    }
}

fn rebuild(x: &ObjExpr, idx: usize, payload: &mut std::vec::IntoIter<BigUint>) -> Value {
    match x {
        ObjExpr::Top => Value::Star,
        ObjExpr::Nat(_) => Value::Nat(payload.next().expect("payload matches summand")),
        ObjExpr::Coprod(a, b) => {
            let na = a.summand_count();
            if idx < na {
                Value::inl(rebuild(a, idx, payload))
            } else {
                Value::inr(rebuild(b, idx - na, payload))
            }
        }
        ObjExpr::Tensor(a, b) => {
            let nb = b.summand_count();
            let l = rebuild(a, idx / nb, payload);
            let r = rebuild(b, idx % nb, payload);
            Value::pair(l, r)
        }
    }
}

/// Stable sorting permutation: `perm[j]` is the raw position of the
/// `j`-th factor in canonical order.
fn canonical_perm(factors: &[LevelIndex]) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..factors.len()).collect();
    perm.sort_by_key(|&i| factors[i].sort_key());
    perm
}

/// Transports a point of `from` to the corresponding point of `to`, where
/// both shapes have the same normal form. Unit factors are dropped and
/// re-inserted, tensor factors are permuted by the stable canonical sort,
/// and summands are matched by position in the distributed form.
pub fn coerce(v: &Value, from: &ObjExpr, to: &ObjExpr) -> Result<Value, ShapeError> {
    if from == to {
        return Ok(v.clone());
    }
    let mut raw = Vec::new();
    let idx = flatten(v, from, &mut raw)?;
    let src_perm = canonical_perm(&raw.iter().map(|(ix, _)| *ix).collect::<Vec<_>>());
    let canonical: Vec<(LevelIndex, BigUint)> = src_perm.iter().map(|&i| raw[i].clone()).collect();

    if idx >= to.summand_count() {
        return Err(shape_err(v, to));
    }
    let target = to.summand_factors(idx);
    let dst_perm = canonical_perm(&target);
    if target.len() != canonical.len()
        || dst_perm
            .iter()
            .zip(&canonical)
            .any(|(&j, (ix, _))| target[j].sort_key() != ix.sort_key())
    {
        return Err(shape_err(v, to));
    }
    let mut slots: Vec<Option<BigUint>> = vec![None; target.len()];
    for (j, (_, n)) in dst_perm.iter().zip(canonical) {
        slots[*j] = Some(n);
    }
    let payload: Vec<BigUint> = slots.into_iter().map(|s| s.expect("filled")).collect();
    Ok(rebuild(to, idx, &mut payload.into_iter()))
}

/// Component of `η` at a raw shape: erases the generators `T` sends to `Top`.
pub fn eta_component(v: &Value, x: &ObjExpr) -> Result<Value, ShapeError> {
    transport(v, x, FunctorTag::T)
}

/// Moves a point of `x` to the functor-image shape `F x`, replacing killed
/// generators by `*` and keeping the others.
pub fn transport(v: &Value, x: &ObjExpr, f: FunctorTag) -> Result<Value, ShapeError> {
    match (v, x) {
        (Value::Star, ObjExpr::Top) => Ok(Value::Star),
        (Value::Nat(n), ObjExpr::Nat(ix)) => Ok(match f.on_level(*ix) {
            Some(_) => Value::Nat(n.clone()),
            None => Value::Star,
        }),
        (Value::Pair(a, b), ObjExpr::Tensor(x, y)) => {
            Ok(Value::pair(transport(a, x, f)?, transport(b, y, f)?))
        }
        (Value::InlV(a), ObjExpr::Coprod(x, _)) => Ok(Value::inl(transport(a, x, f)?)),
        (Value::InrV(b), ObjExpr::Coprod(_, y)) => Ok(Value::inr(transport(b, y, f)?)),
        _ => Err(shape_err(v, x)),
    }
}

/// All points of the raw shape `x` whose naturals are at most `bound`,
/// both injections for every coproduct.
pub fn enumerate_points(x: &ObjExpr, bound: u64) -> Vec<Value> {
    match x {
        ObjExpr::Top => vec![Value::Star],
        ObjExpr::Nat(_) => (0..=bound).map(Value::nat).collect(),
        ObjExpr::Coprod(a, b) => enumerate_points(a, bound)
            .into_iter()
            .map(Value::inl)
            .chain(enumerate_points(b, bound).into_iter().map(Value::inr))
            .collect(),
        ObjExpr::Tensor(a, b) => {
            let right = enumerate_points(b, bound);
            enumerate_points(a, bound)
                .into_iter()
                .flat_map(|l| right.iter().map(move |r| Value::pair(l.clone(), r.clone())))
                .collect()
        }
    }
}

/// Builds a point of shape `x` from naturals, filling `N` slots left to right.
pub fn point_from_naturals(x: &ObjExpr, args: &[BigUint]) -> Option<Value> {
    fn go(x: &ObjExpr, it: &mut std::slice::Iter<'_, BigUint>) -> Option<Value> {
        match x {
            ObjExpr::Top => Some(Value::Star),
            ObjExpr::Nat(_) => it.next().cloned().map(Value::Nat),
            ObjExpr::Tensor(a, b) => Some(Value::pair(go(a, it)?, go(b, it)?)),
            ObjExpr::Coprod(..) => None,
        }
    }
    let mut it = args.iter();
    let v = go(x, &mut it)?;
    it.next().is_none().then_some(v)
}
