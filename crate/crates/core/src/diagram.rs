//! Extensional diagram checking: both legs of a square are evaluated on
//! sample points and compared in the normal form of the common codomain.

use std::fmt;

use rayon::prelude::*;

use crate::derived::{dist, dist_over, dist_unit, if_zero, parity, point_term};
use crate::eval::{EvalError, EvalOptions, Outcome};
use crate::functor::apply_functor_term;
use crate::objects::{FunctorTag, LevelIndex, ObjExpr};
use crate::stdlib::{cond, mod2_digits, pred, zero_test};
use crate::term::{Bit, Term};
use crate::typecheck::{elaborate, TypeError, TypeErrorKind};
use crate::value::{coerce, enumerate_points, Value};
use crate::Config;

/// Two parallel arrows expected to be equal.
#[derive(Clone, Debug)]
pub struct DiagramSpec {
    pub name: String,
    pub left: Term,
    pub right: Term,
}

impl DiagramSpec {
    pub fn new(name: impl Into<String>, left: Term, right: Term) -> Self {
        DiagramSpec {
            name: name.into(),
            left,
            right,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Disagreement {
    pub input: Value,
    pub left: Value,
    pub right: Value,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagramReport {
    pub name: String,
    pub samples: usize,
    pub disagreements: Vec<Disagreement>,
    /// Points where a leg ran out of fuel.
    pub inconclusive: Vec<Value>,
}

impl DiagramReport {
    pub fn commutes(&self) -> bool {
        self.disagreements.is_empty()
    }

    pub fn is_clean(&self) -> bool {
        self.disagreements.is_empty() && self.inconclusive.is_empty()
    }
}

impl fmt::Display for DiagramReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} samples, {} disagreements, {} inconclusive",
            self.name,
            self.samples,
            self.disagreements.len(),
            self.inconclusive.len()
        )?;
        for d in self.disagreements.iter().take(5) {
            write!(f, "\n  at {}: {} vs {}", d.input, d.left, d.right)?;
        }
        Ok(())
    }
}

/// All points of `x` with naturals at most `bound`.
pub fn default_samples(x: &ObjExpr, bound: u64) -> Vec<Value> {
    enumerate_points(x, bound)
}

enum PointResult {
    Agree,
    Disagree(Disagreement),
    Inconclusive(Value),
}

/// Evaluates both legs of `d` on every sample (points of the left leg's
/// domain, raw or normalized). Samples are processed in parallel; the report
/// lists results in sample order.
pub fn check_diagram(
    d: &DiagramSpec,
    samples: &[Value],
    cfg: &Config,
    opts: &EvalOptions,
) -> Result<DiagramReport, EvalError> {
    let left = elaborate(&d.left, cfg)?;
    let right = elaborate(&d.right, cfg)?;
    if left.judgment.dom != right.judgment.dom || left.judgment.cod != right.judgment.cod {
        return Err(TypeError {
            kind: TypeErrorKind::Mismatch,
            location: ".".into(),
            detail: format!(
                "legs of {} differ: {} vs {}",
                d.name, left.judgment, right.judgment
            ),
        }
        .into());
    }
    let results: Vec<Result<PointResult, EvalError>> = samples
        .par_iter()
        .map(|v| {
            let v = if v.inhabits(&left.dom_shape) {
                coerce(v, &left.dom_shape, &left.judgment.dom)
                    .map_err(|e| EvalError::Shape(e.to_string()))?
            } else {
                v.clone()
            };
            let a = left.eval_normalized(&v, opts)?;
            let b = right.eval_normalized(&v, opts)?;
            Ok(match (a, b) {
                (Outcome::Done(a), Outcome::Done(b)) if a == b => PointResult::Agree,
                (Outcome::Done(a), Outcome::Done(b)) => PointResult::Disagree(Disagreement {
                    input: v,
                    left: a,
                    right: b,
                }),
                _ => PointResult::Inconclusive(v),
            })
        })
        .collect();
    let mut report = DiagramReport {
        name: d.name.clone(),
        samples: samples.len(),
        disagreements: Vec::new(),
        inconclusive: Vec::new(),
    };
    for r in results {
        match r? {
            PointResult::Agree => {}
            PointResult::Disagree(x) => report.disagreements.push(x),
            PointResult::Inconclusive(v) => report.inconclusive.push(v),
        }
    }
    Ok(report)
}

/// Aggregate of many diagram checks.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SuiteReport {
    pub name: String,
    pub diagrams: usize,
    pub samples: usize,
    pub failures: Vec<String>,
    pub inconclusive: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.inconclusive.is_empty()
    }

    fn from_results(name: &str, results: Vec<(String, Result<DiagramReport, EvalError>)>) -> Self {
        let mut s = SuiteReport {
            name: name.to_string(),
            ..Default::default()
        };
        for (label, r) in results {
            s.diagrams += 1;
            match r {
                Ok(rep) => {
                    s.samples += rep.samples;
                    if !rep.commutes() {
                        s.failures.push(rep.to_string());
                    }
                    if !rep.inconclusive.is_empty() {
                        s.inconclusive.push(rep.to_string());
                    }
                }
                Err(e) => s.failures.push(format!("{label}: {e}")),
            }
        }
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "suite": self.name,
            "diagrams": self.diagrams,
            "samples": self.samples,
            "failures": self.failures,
            "inconclusive": self.inconclusive,
            "passed": self.passed(),
        })
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} diagrams, {} samples, {} failing, {} inconclusive",
            self.name,
            self.diagrams,
            self.samples,
            self.failures.len(),
            self.inconclusive.len()
        )?;
        for line in self.failures.iter().chain(&self.inconclusive).take(10) {
            write!(f, "\n  {line}")?;
        }
        Ok(())
    }
}

fn run_suite(
    name: &str,
    specs: Vec<(DiagramSpec, Vec<Value>)>,
    cfg: &Config,
    opts: &EvalOptions,
) -> SuiteReport {
    let results = specs
        .par_iter()
        .map(|(d, samples)| (d.name.clone(), check_diagram(d, samples, cfg, opts)))
        .collect();
    SuiteReport::from_results(name, results)
}

/// Parameter objects the distributivity checks range over.
pub fn dist_parameter_objects() -> Vec<ObjExpr> {
    let n = ObjExpr::nat(0, 0);
    vec![ObjExpr::Top, n.clone(), ObjExpr::tensor(n.clone(), n)]
}

/// Both squares of the distributivity proposition for one point: `m̂`
/// paired with `x` (left injection) or `y` (right injection).
pub fn dist_square(
    a: &ObjExpr,
    point: &Term,
    x: &ObjExpr,
    y: &ObjExpr,
    side: &Term,
    left_side: bool,
) -> DiagramSpec {
    let ax = ObjExpr::tensor(a.clone(), x.clone());
    let ay = ObjExpr::tensor(a.clone(), y.clone());
    let (inj_in, inj_out) = if left_side {
        (Term::Inl(x.clone(), y.clone()), Term::Inl(ax, ay))
    } else {
        (Term::Inr(x.clone(), y.clone()), Term::Inr(ax, ay))
    };
    let d = match a {
        ObjExpr::Nat(ix) => dist(*ix, x.clone(), y.clone()),
        _ => dist_over(a, x, y),
    };
    let top2 = || Term::Id(ObjExpr::tensor(ObjExpr::Top, ObjExpr::Top));
    let left = Term::seq([
        top2(),
        Term::par(point.clone(), Term::comp(inj_in, side.clone())),
        d,
    ]);
    let right = Term::seq([top2(), Term::par(point.clone(), side.clone()), inj_out]);
    DiagramSpec::new(
        format!(
            "dist {} {} at {}",
            if left_side { "inl" } else { "inr" },
            a,
            side
        ),
        left,
        right,
    )
}

/// Distributivity squares at `N[1,0]` for `m <= m_max` and parameter points
/// with naturals at most `value_bound`.
pub fn prop_dist_suite(
    m_max: u64,
    value_bound: u64,
    cfg: &Config,
    opts: &EvalOptions,
) -> SuiteReport {
    let ix = LevelIndex::new(1, 0);
    let a = ObjExpr::Nat(ix);
    let mut specs = Vec::new();
    let objs = dist_parameter_objects();
    for x in &objs {
        for y in &objs {
            for m in 0..=m_max {
                let mhat = point_term(&Value::nat(m), &a).expect("natural point");
                for (obj, left_side) in [(x, true), (y, false)] {
                    for v in enumerate_points(obj, value_bound) {
                        let side = point_term(&v, obj).expect("enumerated point");
                        specs.push((
                            dist_square(&a, &mhat, x, y, &side, left_side),
                            vec![Value::pair(Value::Star, Value::Star)],
                        ));
                    }
                }
            }
        }
    }
    run_suite("distributivity squares", specs, cfg, opts)
}

/// The `α = 2` squares with `⟨m̂₁, m̂₂⟩ : ⊤ → N[1,0]²`.
pub fn powers_suite(m_max: u64, value_bound: u64, cfg: &Config, opts: &EvalOptions) -> SuiteReport {
    let a = ObjExpr::power(LevelIndex::new(1, 0), 2);
    let mut specs = Vec::new();
    let objs = dist_parameter_objects();
    for x in &objs {
        for y in &objs {
            for m1 in 0..=m_max {
                for m2 in 0..=m_max {
                    let pt = point_term(&Value::pair(Value::nat(m1), Value::nat(m2)), &a)
                        .expect("pair of naturals");
                    for (obj, left_side) in [(x, true), (y, false)] {
                        for v in enumerate_points(obj, value_bound) {
                            let side = point_term(&v, obj).expect("enumerated point");
                            specs.push((
                                dist_square(&a, &pt, x, y, &side, left_side),
                                vec![Value::pair(Value::Star, Value::Star)],
                            ));
                        }
                    }
                }
            }
        }
    }
    run_suite("distributivity squares, powers", specs, cfg, opts)
}

/// Every functor tag valid for `cfg`.
pub fn all_functors(cfg: &Config) -> Vec<FunctorTag> {
    let mut out = vec![FunctorTag::T, FunctorTag::G];
    out.extend((0..cfg.levels).map(FunctorTag::M));
    out
}

/// One coherence equation: `F d_{N,X,Y}` against `d_{FN,FX,FY}` built
/// directly, with `d_{⊤,-,-}` when `F` kills `N`. Returns the two legs and
/// the sample grid (`m <= m_max` in the `N` slot, parameters `<= value_bound`).
pub fn coherence_case(
    f: FunctorTag,
    ix: LevelIndex,
    x: &ObjExpr,
    y: &ObjExpr,
    m_max: u64,
    value_bound: u64,
    cfg: &Config,
) -> Result<(DiagramSpec, Vec<Value>), TypeError> {
    let image = apply_functor_term(f, &dist(ix, x.clone(), y.clone()), cfg)?;
    let (fx, fy) = (x.functor_raw(f), y.functor_raw(f));
    let fresh = match f.on_level(ix) {
        Some(j) => dist(j, fx.clone(), fy.clone()),
        None => dist_unit(fx.clone(), fy.clone()),
    };
    let fnat = ObjExpr::Nat(ix).functor_raw(f);
    let firsts = enumerate_points(&fnat, m_max);
    let rest = enumerate_points(&ObjExpr::coprod(fx, fy), value_bound);
    let samples = firsts
        .iter()
        .flat_map(|a| rest.iter().map(move |b| Value::pair(a.clone(), b.clone())))
        .collect();
    let name = format!("{f} d at N[{},{}] over {x}, {y}", ix.k, ix.p);
    Ok((DiagramSpec::new(name, image, fresh), samples))
}

/// Parameter objects for coherence at minimization index `p`.
pub fn coherence_parameter_objects(p: u8) -> Vec<ObjExpr> {
    vec![
        ObjExpr::Top,
        ObjExpr::nat(0, p),
        ObjExpr::tensor(ObjExpr::nat(1, p), ObjExpr::nat(0, 0)),
    ]
}

pub fn coherence_suite(
    m_max: u64,
    value_bound: u64,
    cfg: &Config,
    opts: &EvalOptions,
) -> SuiteReport {
    let mut specs = Vec::new();
    let mut errors = Vec::new();
    for f in all_functors(cfg) {
        for p in 0..cfg.levels {
            for k in 0..=1 {
                let ix = LevelIndex::new(k, p);
                let objs = coherence_parameter_objects(p);
                for x in &objs {
                    for y in &objs {
                        match coherence_case(f, ix, x, y, m_max, value_bound, cfg) {
                            Ok(c) => specs.push(c),
                            Err(e) => errors.push(format!("{f} at N[{k},{p}]: {e}")),
                        }
                    }
                }
            }
        }
    }
    let mut s = run_suite("coherence", specs, cfg, opts);
    s.failures.extend(errors);
    s
}

/// Naturality square `T(f) ∘ η_X = η_Y ∘ f`.
pub fn eta_square(name: &str, f: &Term, cfg: &Config) -> Result<DiagramSpec, TypeError> {
    let p = elaborate(f, cfg)?;
    let tf = apply_functor_term(FunctorTag::T, f, cfg)?;
    Ok(DiagramSpec::new(
        format!("eta naturality for {name}"),
        Term::comp(tf, Term::EtaAt(p.dom_shape.clone())),
        Term::comp(Term::EtaAt(p.cod_shape.clone()), f.clone()),
    ))
}

/// Functions the naturality suite runs over, including level-one images.
pub fn eta_corpus(cfg: &Config) -> Vec<(String, Term)> {
    let ix0 = LevelIndex::new(0, 0);
    let g_pred = apply_functor_term(FunctorTag::G, &pred(ix0), cfg).expect("G image of pred");
    vec![
        ("pred".into(), pred(ix0)),
        ("G(pred)".into(), g_pred),
        ("C".into(), cond(ix0)),
        ("C at level 1".into(), cond(LevelIndex::new(1, 0))),
        ("Z".into(), zero_test(0)),
        ("mod2digits".into(), mod2_digits(0)),
    ]
}

pub fn eta_suite(bound: u64, cfg: &Config, opts: &EvalOptions) -> SuiteReport {
    let mut specs = Vec::new();
    let mut errors = Vec::new();
    for (name, f) in eta_corpus(cfg) {
        match (eta_square(&name, &f, cfg), elaborate(&f, cfg)) {
            (Ok(d), Ok(p)) => specs.push((d, default_samples(&p.dom_shape, bound))),
            (Err(e), _) | (_, Err(e)) => errors.push(format!("{name}: {e}")),
        }
    }
    let mut s = run_suite("eta naturality", specs, cfg, opts);
    s.failures.extend(errors);
    s
}

/// The finality square for `μ(h) : A → N[target]`:
/// `(0 ⊕ s)⁻¹ ∘ μ(h)` against `(1 ⊕ μ(h)) ∘ h`.
pub fn min_square(name: &str, h: &Term, bit: Bit, target: LevelIndex) -> DiagramSpec {
    let mu = Term::min(h.clone(), bit, target);
    let n = ObjExpr::Nat(target);
    let left = Term::comp(Term::Unfold(target), mu.clone());
    let right = Term::comp(
        Term::copair(
            Term::Inl(ObjExpr::Top, n.clone()),
            Term::comp(Term::Inr(ObjExpr::Top, n), mu),
        ),
        h.clone(),
    );
    DiagramSpec::new(format!("min square for {name}"), left, right)
}

/// A terminating coalgebra `h : A → ⊤ ⊕ A` with its sample states and an
/// independent count of the steps before `inl`.
#[derive(Clone)]
pub struct CoalgebraCase {
    pub name: &'static str,
    pub body: Term,
    pub target: LevelIndex,
    pub samples: Vec<Value>,
    pub steps: fn(&Value) -> u64,
}

fn nat_of(v: &Value) -> u64 {
    v.as_u64().expect("natural state")
}

fn pair_of(v: &Value) -> (u64, u64) {
    match v {
        Value::Pair(a, b) => (nat_of(a), nat_of(b)),
        _ => panic!("pair state expected"),
    }
}

fn bit_len(m: u64) -> u64 {
    u64::from(64 - m.leading_zeros())
}

pub fn coalgebra_corpus(bound: u64) -> Vec<CoalgebraCase> {
    let ix = LevelIndex::new(0, 0);
    let n = ObjExpr::Nat(ix);
    let nn = ObjExpr::tensor(n.clone(), n.clone());
    let stop = |a: &ObjExpr| Term::comp(Term::Inl(ObjExpr::Top, a.clone()), Term::Bang(a.clone()));
    let go = |a: &ObjExpr| Term::Inr(ObjExpr::Top, a.clone());
    let naturals: Vec<Value> = (0..=bound).map(Value::nat).collect();
    let pairs: Vec<Value> = default_samples(&nn, bound);
    let target = LevelIndex::new(0, 1);

    let halving = if_zero(
        &n,
        Term::Id(n.clone()),
        ix,
        stop(&n),
        Term::seq([Term::Proj2(n.clone(), n.clone()), pred(ix), go(&n)]),
    );

    let d = ObjExpr::tensor(n.clone(), nn.clone());
    let both_positive = if_zero(
        &d,
        Term::comp(
            Term::Proj2(n.clone(), n.clone()),
            Term::Proj2(n.clone(), nn.clone()),
        ),
        ix,
        Term::comp(Term::Inl(ObjExpr::Top, nn.clone()), Term::Bang(d.clone())),
        Term::comp(
            go(&nn),
            Term::pairing(
                ObjExpr::tensor(n.clone(), d.clone()),
                Term::comp(
                    Term::Proj1(n.clone(), nn.clone()),
                    Term::Proj2(n.clone(), d.clone()),
                ),
                Term::Proj1(n.clone(), d.clone()),
            ),
        ),
    );

    let descent_step = Term::comp(
        Term::Cond(ix),
        Term::pairing(
            nn.clone(),
            Term::Proj2(n.clone(), n.clone()),
            Term::pairing(
                nn.clone(),
                Term::comp(pred(ix), Term::Proj2(n.clone(), n.clone())),
                Term::Proj1(n.clone(), n.clone()),
            ),
        ),
    );

    vec![
        CoalgebraCase {
            name: "strip trailing ones",
            body: if_zero(
                &n,
                parity(ix),
                ix,
                stop(&n),
                Term::seq([Term::Proj2(n.clone(), n.clone()), pred(ix), go(&n)]),
            ),
            target,
            samples: naturals.clone(),
            steps: |v| u64::from(nat_of(v).trailing_ones()),
        },
        CoalgebraCase {
            name: "countdown",
            body: Term::Unfold(ix),
            target,
            samples: naturals.clone(),
            steps: nat_of,
        },
        CoalgebraCase {
            name: "halving",
            body: halving.clone(),
            target,
            samples: naturals.clone(),
            steps: |v| bit_len(nat_of(v)),
        },
        CoalgebraCase {
            name: "countdown by two",
            body: Term::comp(
                Term::copair(Term::Inl(ObjExpr::Top, n.clone()), Term::Unfold(ix)),
                Term::Unfold(ix),
            ),
            target,
            samples: naturals.clone(),
            steps: |v| nat_of(v) / 2,
        },
        CoalgebraCase {
            name: "transfer",
            body: if_zero(
                &nn,
                Term::Proj1(n.clone(), n.clone()),
                ix,
                stop(&nn),
                Term::comp(
                    go(&nn),
                    Term::par(
                        Term::Id(n.clone()),
                        Term::comp(Term::Incr(ix), Term::Proj2(n.clone(), n.clone())),
                    ),
                ),
            ),
            target,
            samples: pairs.clone(),
            steps: |v| pair_of(v).0,
        },
        CoalgebraCase {
            name: "minimum of a pair",
            body: if_zero(
                &nn,
                Term::Proj1(n.clone(), n.clone()),
                ix,
                stop(&nn),
                both_positive,
            ),
            target,
            samples: pairs,
            steps: |v| {
                let (a, b) = pair_of(v);
                a.min(b)
            },
        },
        CoalgebraCase {
            name: "countdown at level one",
            body: Term::Unfold(LevelIndex::new(1, 0)),
            target: LevelIndex::new(1, 1),
            samples: naturals.clone(),
            steps: nat_of,
        },
        CoalgebraCase {
            name: "immediate stop",
            body: Term::Inl(ObjExpr::Top, ObjExpr::Top),
            target,
            samples: vec![Value::Star],
            steps: |_| 0,
        },
        CoalgebraCase {
            name: "binary descent",
            body: if_zero(
                &n,
                Term::Id(n.clone()),
                ix,
                stop(&n),
                Term::comp(go(&n), descent_step),
            ),
            target,
            samples: naturals.clone(),
            steps: |v| {
                let mut m = nat_of(v);
                let mut c = 0;
                while m != 0 {
                    m = if m.is_multiple_of(2) { m / 2 } else { m - 1 };
                    c += 1;
                }
                c
            },
        },
        CoalgebraCase {
            name: "iterated length",
            body: if_zero(
                &n,
                Term::Id(n.clone()),
                ix,
                stop(&n),
                Term::seq([
                    Term::Proj1(n.clone(), n.clone()),
                    Term::min(halving, Bit::S2, ix),
                    go(&n),
                ]),
            ),
            target,
            samples: naturals,
            steps: |v| {
                let mut m = nat_of(v);
                let mut c = 0;
                while m != 0 {
                    m = bit_len(m - 1);
                    c += 1;
                }
                c
            },
        },
    ]
}

/// The coalgebra that never answers `inl`.
pub fn witness_free() -> Term {
    let n = ObjExpr::nat(0, 0);
    Term::min(Term::Inr(ObjExpr::Top, n), Bit::S2, LevelIndex::new(0, 1))
}

pub fn min_square_suite(bound: u64, cfg: &Config, opts: &EvalOptions) -> SuiteReport {
    let specs = coalgebra_corpus(bound)
        .into_iter()
        .map(|c| (min_square(c.name, &c.body, Bit::S2, c.target), c.samples))
        .collect();
    run_suite("min square", specs, cfg, opts)
}

/// Every suite with the default sample ranges.
pub fn verify_all(cfg: &Config, opts: &EvalOptions) -> Vec<SuiteReport> {
    vec![
        prop_dist_suite(32, 8, cfg, opts),
        powers_suite(8, 8, cfg, opts),
        coherence_suite(32, 8, cfg, opts),
        eta_suite(32, cfg, opts),
        min_square_suite(64, cfg, opts),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_case_square() {
        let cfg = Config::default();
        let opts = EvalOptions::default();
        let a = ObjExpr::nat(1, 0);
        let x = ObjExpr::nat(0, 0);
        let one = point_term(&Value::nat(1), &a).unwrap();
        for v in 0..=8 {
            let side = point_term(&Value::nat(v), &x).unwrap();
            let d = dist_square(&a, &one, &x, &ObjExpr::Top, &side, true);
            let r =
                check_diagram(&d, &[Value::pair(Value::Star, Value::Star)], &cfg, &opts).unwrap();
            assert!(r.is_clean(), "{r}");
        }
    }

    #[test]
    fn legs_with_different_types_are_rejected() {
        let n = ObjExpr::nat(0, 0);
        let d = DiagramSpec::new("bad", Term::Id(n.clone()), Term::Bang(n));
        let err = check_diagram(&d, &[], &Config::default(), &EvalOptions::default()).unwrap_err();
        assert!(matches!(err, EvalError::Type(e) if e.kind == TypeErrorKind::Mismatch));
    }

    #[test]
    fn a_wrong_square_is_reported() {
        let n = ObjExpr::nat(0, 0);
        let d = DiagramSpec::new("wrong", Term::Id(n.clone()), pred(LevelIndex::new(0, 0)));
        let r = check_diagram(
            &d,
            &default_samples(&n, 4),
            &Config::default(),
            &EvalOptions::default(),
        )
        .unwrap();
        assert_eq!(r.disagreements.len(), 4);
    }

    #[test]
    fn eta_square_for_pred() {
        let cfg = Config::default();
        let opts = EvalOptions::default();
        let s = eta_suite(8, &cfg, &opts);
        assert!(s.passed(), "{s}");
    }

    #[test]
    fn min_squares_on_small_states() {
        let s = min_square_suite(10, &Config::default(), &EvalOptions::default());
        assert!(s.passed(), "{s}");
    }
}
