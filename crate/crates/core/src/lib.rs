//! Tiered combinator calculus with flat recursion, safe ramified recursion
//! and bounded minimization: object normal forms, arrow syntax, a
//! typechecker that classifies programs by minimization depth, and a
//! fuel-bounded evaluator over binary naturals.

pub mod derived;
pub mod diagram;
pub mod eval;
pub mod functor;
pub mod minimize;
pub mod model2i;
pub mod objects;
pub mod stdlib;
pub mod syntax;
pub mod term;
pub mod typecheck;
pub mod value;

pub use eval::{eval, eval_with, EvalError, EvalOptions, Evaluation, Outcome};
pub use functor::apply_functor_term;
pub use model2i::{verify_model_equations, GridObj, ModelReport};
pub use objects::{
    apply_functor_obj, in_fiber_t_over_top, min_fiber_residue, normalize_object, FunctorTag,
    LevelIndex, ObjError, ObjExpr,
};
pub use syntax::{parse_term, parse_value, SyntaxError};
pub use term::{Bit, Term};
pub use typecheck::{classify, elaborate, typecheck, Judgment, Program, TypeError, TypeErrorKind};
pub use value::{ShapeError, Value};

/// Global configuration: the number of hierarchy levels `i` and the
/// switch for two-branch recursion on notation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Config {
    pub levels: u8,
    pub extended_prn: bool,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            levels: 3,
            extended_prn: false,
        }
    }
}

impl Config {
    pub fn with_levels(levels: u8) -> Self {
        Config {
            levels,
            ..Default::default()
        }
    }
}
