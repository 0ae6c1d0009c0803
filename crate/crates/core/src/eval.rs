//! Standard-model evaluation: terms as partial functions on binary
//! naturals, with fuel standing in for divergence.
//!
//! Fuel is charged once per scheme unfolding (every visit of a recursion
//! node at some argument) and once per minimization step. Structural nodes
//! are free.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde_json::json;
use thiserror::Error;

use crate::objects::ObjExpr;
use crate::term::{Bit, Term};
use crate::typecheck::{elaborate, Program, TypeError};
use crate::value::{coerce, eta_component, ShapeError, Value};
use crate::Config;

/// Canonical isomorphism between two shapes with the same normal form.
#[derive(Clone, Debug)]
pub(crate) struct Cast {
    pub from: ObjExpr,
    pub to: ObjExpr,
}

#[derive(Clone, Debug)]
pub(crate) struct RecCode {
    pub kind: &'static str,
    pub base: Box<Code>,
    /// Step taken for an appended 0 bit (`s¹`) and a 1 bit (`s²`).
    pub steps: [Box<Code>; 2],
    pub into: [Option<Cast>; 2],
    pub out: [Option<Cast>; 2],
    /// Steps also receive the recursion argument and the parameters.
    pub with_argument: bool,
}

#[derive(Clone, Debug)]
pub(crate) enum Code {
    Id,
    Comp(Box<Code>, Box<Code>, Option<Cast>),
    Par(Box<Code>, Box<Code>),
    Copair(Box<Code>, Box<Code>, Option<Cast>),
    Sym,
    LUnit,
    LUnitInv,
    Inl,
    Inr,
    Proj1,
    Proj2,
    Dup,
    Bang,
    Zero,
    Succ(Bit),
    Cond,
    Incr,
    Unfold,
    Eta(ObjExpr),
    Eps,
    Fr {
        base: Box<Code>,
        step: Box<Code>,
        into_step: Option<Cast>,
        out_step: Option<Cast>,
    },
    Rec(RecCode),
    Min {
        body: Box<Code>,
        out: Option<Cast>,
        bit: Bit,
    },
}

impl Code {
    fn kind(&self) -> &'static str {
        match self {
            Code::Fr { .. } => "fr",
            Code::Rec(r) => r.kind,
            Code::Min { .. } => "min",
            _ => "structural",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Done(Value),
    /// Carries the configured fuel.
    FuelExhausted(u64),
}

impl Outcome {
    pub fn value(&self) -> Option<&Value> {
        match self {
            Outcome::Done(v) => Some(v),
            Outcome::FuelExhausted(_) => None,
        }
    }

    pub fn as_u64(&self) -> Option<u64> {
        self.value().and_then(Value::as_u64)
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Outcome::Done(v) => json!({ "done": v.to_json() }),
            Outcome::FuelExhausted(n) => json!({ "fuel_exhausted": n }),
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Done(v) => write!(f, "{v}"),
            Outcome::FuelExhausted(n) => write!(f, "fuel exhausted after {n} steps"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvalOptions {
    pub fuel: u64,
    /// Total-minimization variant: a search that finds no witness among
    /// the first `B+1` states yields `0` instead of running on.
    pub search_bound: Option<u64>,
    pub trace: bool,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            fuel: 1_000_000,
            search_bound: None,
            trace: false,
        }
    }
}

impl EvalOptions {
    pub fn with_fuel(fuel: u64) -> Self {
        EvalOptions {
            fuel,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, Error)]
pub enum EvalError {
    #[error(transparent)]
    Type(#[from] TypeError),
    #[error("input {value} does not inhabit the domain {shape}")]
    Input { value: Value, shape: ObjExpr },
    #[error("internal shape defect: {0}")]
    Shape(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Evaluation {
    pub outcome: Outcome,
    pub fuel_used: u64,
    pub trace: Vec<String>,
}

enum Halt {
    Fuel,
    Shape(ShapeError),
    Defect(String),
}

impl From<ShapeError> for Halt {
    fn from(e: ShapeError) -> Self {
        Halt::Shape(e)
    }
}

struct Machine<'o> {
    opts: &'o EvalOptions,
    remaining: u64,
    trace: Vec<String>,
}

fn apply_cast(v: Value, c: &Option<Cast>) -> Result<Value, ShapeError> {
    match c {
        None => Ok(v),
        Some(c) => coerce(&v, &c.from, &c.to),
    }
}

/// A value reaching a node it cannot inhabit; typechecking rules this out.
fn mismatch(v: &Value, what: &str) -> Halt {
    Halt::Defect(format!("{what}: unexpected value {v}"))
}

impl Machine<'_> {
    fn tick(&mut self, kind: &str, input: &Value) -> Result<(), Halt> {
        if self.remaining == 0 {
            return Err(Halt::Fuel);
        }
        self.remaining -= 1;
        if self.opts.trace {
            self.trace
                .push(format!("{kind} {input} fuel={}", self.remaining));
        }
        Ok(())
    }

    fn run(&mut self, code: &Code, v: Value) -> Result<Value, Halt> {
        Ok(match code {
            Code::Id | Code::Eps => v,
            Code::Comp(f, g, c) => {
                let mid = apply_cast(self.run(g, v)?, c)?;
                self.run(f, mid)?
            }
            Code::Par(f, g) => match v {
                Value::Pair(a, b) => Value::pair(self.run(f, *a)?, self.run(g, *b)?),
                other => return Err(mismatch(&other, "par")),
            },
            Code::Copair(f, g, c) => match v {
                Value::InlV(a) => self.run(f, *a)?,
                Value::InrV(b) => apply_cast(self.run(g, *b)?, c)?,
                other => return Err(mismatch(&other, "copair")),
            },
            Code::Sym => match v {
                Value::Pair(a, b) => Value::Pair(b, a),
                other => return Err(mismatch(&other, "sym")),
            },
            Code::LUnit => match v {
                Value::Pair(_, b) => *b,
                other => return Err(mismatch(&other, "lunit")),
            },
            Code::LUnitInv => Value::pair(Value::Star, v),
            Code::Inl => Value::inl(v),
            Code::Inr => Value::inr(v),
            Code::Proj1 => match v {
                Value::Pair(a, _) => *a,
                other => return Err(mismatch(&other, "proj1")),
            },
            Code::Proj2 => match v {
                Value::Pair(_, b) => *b,
                other => return Err(mismatch(&other, "proj2")),
            },
            Code::Dup => Value::pair(v.clone(), v),
            Code::Bang => Value::Star,
            Code::Zero => Value::Nat(BigUint::zero()),
            Code::Succ(bit) => {
                let n = nat(&v)?;
                let doubled = n << 1u32;
                Value::Nat(match bit {
                    Bit::S1 => doubled,
                    Bit::S2 => doubled + 1u32,
                })
            }
            Code::Cond => match v {
                Value::Pair(a, rest) => match *rest {
                    Value::Pair(b, c) => {
                        if nat(&a)?.bit(0) {
                            *c
                        } else {
                            *b
                        }
                    }
                    other => return Err(mismatch(&other, "cond")),
                },
                other => return Err(mismatch(&other, "cond")),
            },
            Code::Incr => Value::Nat(nat(&v)? + 1u32),
            Code::Unfold => {
                let n = nat(&v)?;
                if n.is_zero() {
                    Value::inl(Value::Star)
                } else {
                    Value::inr(Value::Nat(n - 1u32))
                }
            }
            Code::Eta(x) => eta_component(&v, x)?,
            Code::Fr {
                base,
                step,
                into_step,
                out_step,
            } => {
                self.tick("fr", &v)?;
                let (m, x) = split_arg(v)?;
                if m.is_zero() {
                    self.run(base, x)?
                } else {
                    let arg = apply_cast(Value::pair(Value::Nat(m >> 1u32), x), into_step)?;
                    apply_cast(self.run(step, arg)?, out_step)?
                }
            }
            Code::Rec(r) => self.recurse(r, v)?,
            Code::Min { body, out, bit } => self.minimize(body, out, *bit, v)?,
        })
    }

    /// Recursion on notation: the base at `0`, then one step per binary
    /// digit from the most significant end, choosing the step by digit.
    fn recurse(&mut self, r: &RecCode, v: Value) -> Result<Value, Halt> {
        let input = if self.opts.trace {
            Some(v.clone())
        } else {
            None
        };
        let (m, x) = split_arg(v)?;
        self.tick(r.kind, input.as_ref().unwrap_or(&Value::Star))?;
        let mut acc = self.run(&r.base, x.clone())?;
        let mut prefix = BigUint::zero();
        for i in (0..m.bits()).rev() {
            let odd = m.bit(i);
            let which = usize::from(odd);
            self.tick(r.kind, &acc)?;
            let arg = if r.with_argument {
                Value::pair(Value::pair(Value::Nat(prefix.clone()), x.clone()), acc)
            } else {
                acc
            };
            let arg = apply_cast(arg, &r.into[which])?;
            acc = apply_cast(self.run(&r.steps[which], arg)?, &r.out[which])?;
            prefix = (prefix << 1u32) + if odd { BigUint::one() } else { BigUint::zero() };
        }
        Ok(acc)
    }

    /// Anamorphism into the naturals: iterate the coalgebra until it
    /// answers `inl`, returning the number of `inr` steps taken.
    fn minimize(
        &mut self,
        body: &Code,
        out: &Option<Cast>,
        bit: Bit,
        mut state: Value,
    ) -> Result<Value, Halt> {
        let mut count: u64 = 0;
        loop {
            self.tick("min", &state)?;
            match apply_cast(self.run(body, state)?, out)? {
                Value::InlV(_) => break,
                Value::InrV(next) => {
                    count += 1;
                    state = *next;
                    if let Some(b) = self.opts.search_bound {
                        if count > b {
                            if self.opts.trace {
                                self.trace
                                    .push(format!("min no witness up to bound {b}: 0"));
                            }
                            return Ok(Value::nat(0));
                        }
                    }
                }
                other => return Err(mismatch(&other, "min")),
            }
        }
        if self.opts.trace {
            self.trace.push(format!(
                "min result {count} (chain spelling: (s{})^{count} 0)",
                bit.digit()
            ));
        }
        Ok(Value::nat(count))
    }
}

fn nat(v: &Value) -> Result<&BigUint, Halt> {
    v.as_nat().ok_or_else(|| mismatch(v, "expected a natural"))
}

fn split_arg(v: Value) -> Result<(BigUint, Value), Halt> {
    match v {
        Value::Pair(m, x) => match *m {
            Value::Nat(m) => Ok((m, *x)),
            other => Err(mismatch(&other, "recursion argument")),
        },
        other => Err(mismatch(&other, "recursion argument")),
    }
}

impl Program {
    /// Runs on `input`, which must inhabit the domain shape or its normal
    /// form (transported along the canonical isomorphism).
    pub fn run(&self, input: &Value, opts: &EvalOptions) -> Result<Evaluation, EvalError> {
        let v = if input.inhabits(&self.dom_shape) {
            input.clone()
        } else if input.inhabits(&self.judgment.dom) {
            coerce(input, &self.judgment.dom, &self.dom_shape)
                .map_err(|e| EvalError::Shape(e.to_string()))?
        } else {
            return Err(EvalError::Input {
                value: input.clone(),
                shape: self.dom_shape.clone(),
            });
        };
        let mut m = Machine {
            opts,
            remaining: opts.fuel,
            trace: Vec::new(),
        };
        let outcome = match m.run(&self.code, v) {
            Ok(v) => Outcome::Done(v),
            Err(Halt::Fuel) => Outcome::FuelExhausted(opts.fuel),
            Err(Halt::Shape(e)) => return Err(EvalError::Shape(e.to_string())),
            Err(Halt::Defect(msg)) => return Err(EvalError::Shape(msg)),
        };
        Ok(Evaluation {
            outcome,
            fuel_used: opts.fuel - m.remaining,
            trace: m.trace,
        })
    }

    pub fn eval(&self, input: &Value, fuel: u64) -> Result<Outcome, EvalError> {
        self.run(input, &EvalOptions::with_fuel(fuel))
            .map(|e| e.outcome)
    }

    /// Output in the normal form of the codomain.
    pub fn eval_normalized(&self, input: &Value, opts: &EvalOptions) -> Result<Outcome, EvalError> {
        let e = self.run(input, opts)?;
        Ok(match e.outcome {
            Outcome::Done(v) => Outcome::Done(
                coerce(&v, &self.cod_shape, &self.judgment.cod)
                    .map_err(|e| EvalError::Shape(e.to_string()))?,
            ),
            other => other,
        })
    }

    /// Name of the outermost fuel-charging node, for diagnostics.
    pub fn head_kind(&self) -> &'static str {
        self.code.kind()
    }
}

/// Typechecks under the default configuration and evaluates.
pub fn eval(t: &Term, v: &Value, fuel: u64) -> Result<Outcome, EvalError> {
    eval_with(t, v, &Config::default(), &EvalOptions::with_fuel(fuel))
}

pub fn eval_with(
    t: &Term,
    v: &Value,
    cfg: &Config,
    opts: &EvalOptions,
) -> Result<Outcome, EvalError> {
    let p = elaborate(t, cfg)?;
    Ok(p.run(v, opts)?.outcome)
}
