//! `.dmc` program files: definitions with declared types plus `run` and
//! `check` directives, and the command implementations behind `dmc`.

pub mod app;

use std::collections::HashMap;
use std::fmt;

use dmc_core::stdlib::lookup;
use dmc_core::syntax::{
    obj_from_sexp, read_all, small, term_from_sexp, value_from_sexp, ObjSexp, Pos, Sexp,
};
use dmc_core::{ObjExpr, SyntaxError, Term, Value};

pub type ParseError = SyntaxError;

/// `(arrow DOM COD)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub dom: ObjExpr,
    pub cod: ObjExpr,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Body {
    /// A term with its declared type; bare names refer to earlier definitions.
    Term { declared: Arrow, source: Sexp },
    /// A library entry at a minimization index.
    Std { entry: String, p: u8 },
}

#[derive(Clone, Debug)]
pub struct Definition {
    pub name: String,
    pub body: Body,
    /// The body with every reference inlined.
    pub term: Term,
    pub pos: Pos,
}

/// Positions are ignored.
impl PartialEq for Definition {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.body == other.body && self.term == other.term
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Directive {
    Run { name: String, args: Vec<Value> },
    Check { name: String },
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ProgramFile {
    pub definitions: Vec<Definition>,
    pub directives: Vec<Directive>,
}

impl ProgramFile {
    pub fn get(&self, name: &str) -> Option<&Definition> {
        self.definitions.iter().find(|d| d.name == name)
    }
}

fn err(pos: Pos, msg: impl Into<String>) -> ParseError {
    SyntaxError::new(pos, msg)
}

fn name_of(s: &Sexp) -> Result<String, ParseError> {
    s.atom()
        .filter(|a| {
            a.chars()
                .next()
                .is_some_and(|c| c.is_alphabetic() || c == '_')
        })
        .map(str::to_string)
        .ok_or_else(|| err(s.pos(), format!("expected a name, got {s}")))
}

fn fresh_name(s: &Sexp, known: &HashMap<String, Term>, pos: Pos) -> Result<String, ParseError> {
    let name = name_of(s)?;
    if known.contains_key(&name) {
        return Err(err(pos, format!("duplicate definition '{name}'")));
    }
    Ok(name)
}

fn arrow_of(s: &Sexp) -> Result<Arrow, ParseError> {
    match s.list() {
        Some([h, dom, cod]) if h.atom() == Some("arrow") => Ok(Arrow {
            dom: obj_from_sexp(dom)?,
            cod: obj_from_sexp(cod)?,
        }),
        _ => Err(err(s.pos(), format!("expected (arrow DOM COD), got {s}"))),
    }
}

/// Parses a program file. Forms:
///
/// - `(def NAME (arrow DOM COD) TERM)`
/// - `(std NAME ENTRY)` or `(std NAME ENTRY P)`, a library function
/// - `(run NAME VALUE…)` and `(check NAME)`
pub fn parse_program(src: &str) -> Result<ProgramFile, ParseError> {
    let mut file = ProgramFile::default();
    let mut known: HashMap<String, Term> = HashMap::new();
    for form in read_all(src)? {
        let pos = form.pos();
        let Some(items) = form.list() else {
            return Err(err(pos, format!("expected a top-level form, got {form}")));
        };
        let head = items.first().and_then(Sexp::atom).unwrap_or("");
        match (head, &items[1..]) {
            ("def", [name, ty, body]) => {
                let name = fresh_name(name, &known, pos)?;
                let resolve = |n: &str| known.get(n).cloned();
                let term = term_from_sexp(body, &resolve)?;
                let body = Body::Term {
                    declared: arrow_of(ty)?,
                    source: body.clone(),
                };
                known.insert(name.clone(), term.clone());
                file.definitions.push(Definition {
                    name,
                    body,
                    term,
                    pos,
                });
            }
            ("std", [name, entry, level @ ..]) if level.len() <= 1 => {
                let name = fresh_name(name, &known, pos)?;
                let entry = name_of(entry)?;
                let p = level.first().map(small).transpose()?.unwrap_or(0);
                let term = lookup(&entry, p)
                    .ok_or_else(|| err(pos, format!("no library entry '{entry}' at index {p}")))?
                    .term;
                known.insert(name.clone(), term.clone());
                file.definitions.push(Definition {
                    name,
                    body: Body::Std { entry, p },
                    term,
                    pos,
                });
            }
            ("run", [name, args @ ..]) => {
                let args = args.iter().map(value_from_sexp).collect::<Result<_, _>>()?;
                file.directives.push(Directive::Run {
                    name: name_of(name)?,
                    args,
                });
            }
            ("check", [name]) => file.directives.push(Directive::Check {
                name: name_of(name)?,
            }),
            _ => return Err(err(pos, format!("unknown or malformed form {form}"))),
        }
    }
    for d in &file.directives {
        let (Directive::Run { name, .. } | Directive::Check { name }) = d;
        if !known.contains_key(name) {
            return Err(err(
                Pos::default(),
                format!("directive names unknown definition '{name}'"),
            ));
        }
    }
    Ok(file)
}

impl fmt::Display for ProgramFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.definitions {
            match &d.body {
                Body::Term { declared, source } => writeln!(
                    f,
                    "(def {} (arrow {} {}) {source})",
                    d.name,
                    ObjSexp(&declared.dom),
                    ObjSexp(&declared.cod)
                )?,
                Body::Std { entry, p } => writeln!(f, "(std {} {entry} {p})", d.name)?,
            }
        }
        for d in &self.directives {
            match d {
                Directive::Run { name, args } => {
                    let args: Vec<String> = args.iter().map(ToString::to_string).collect();
                    writeln!(
                        f,
                        "(run {name}{}{})",
                        if args.is_empty() { "" } else { " " },
                        args.join(" ")
                    )?
                }
                Directive::Check { name } => writeln!(f, "(check {name})")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const PRED: &str = "(def pred (arrow (N 0 0) (N 0 0))\n  (comp (fr (zero (0 0)) (proj1 (N 0 0) Top) (0 0)) (lunit-inv (N 0 0))))\n(run pred 13)\n";

    #[test]
    fn one_definition() {
        let f = parse_program(PRED).unwrap();
        assert_eq!(f.definitions.len(), 1);
        assert_eq!(
            f.directives,
            vec![Directive::Run {
                name: "pred".into(),
                args: vec![Value::nat(13)]
            }]
        );
    }

    #[test]
    fn references_are_inlined() {
        let src = format!("{PRED}(def twice (arrow (N 0 0) (N 0 0)) (comp pred pred))");
        let f = parse_program(&src).unwrap();
        let pred = f.get("pred").unwrap().term.clone();
        assert_eq!(f.get("twice").unwrap().term, Term::comp(pred.clone(), pred));
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_program("(def f (arrow Top Top)\n  (id Top)").unwrap_err();
        assert_eq!(e.pos.line, 1);
        let e = parse_program(&format!("{PRED}{PRED}")).unwrap_err();
        assert!(e.msg.contains("duplicate definition"), "{e}");
        assert_eq!(e.pos.line, 4);
        assert!(parse_program("(run nowhere 1)").is_err());
    }

    #[test]
    fn library_entries() {
        let f = parse_program("(std c C)\n(std k kleene_bitlen 1)").unwrap();
        assert_eq!(
            f.definitions[1].body,
            Body::Std {
                entry: "kleene_bitlen".into(),
                p: 1
            }
        );
        assert!(parse_program("(std c nothing)").is_err());
    }

    #[test]
    fn printing_round_trips() {
        let src = format!("{PRED}(std c C 1)\n(check c)\n(run c (pair 3 (pair 4 5)))");
        let f = parse_program(&src).unwrap();
        assert_eq!(parse_program(&f.to_string()).unwrap(), f);
    }
}
