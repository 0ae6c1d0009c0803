//! The presheaf model over `2 × i`: symbolic grids of sets, the column and
//! row actions of `T`, `G` and `M_p`, the coalgebra functor `1 ⊕ -`, and a
//! verifier comparing the grid model with the abstract generator rules.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::objects::{FunctorTag, LevelIndex, ObjError};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CellTag {
    One,
    Nat,
    X(String),
    Sum(Box<CellTag>, Box<CellTag>),
    Prod(Box<CellTag>, Box<CellTag>),
}

impl CellTag {
    pub fn x() -> CellTag {
        CellTag::X("X".into())
    }

    pub fn sum(a: CellTag, b: CellTag) -> CellTag {
        CellTag::Sum(Box::new(a), Box::new(b))
    }

    pub fn prod(a: CellTag, b: CellTag) -> CellTag {
        CellTag::Prod(Box::new(a), Box::new(b))
    }
}

impl fmt::Display for CellTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CellTag::One => write!(f, "1"),
            CellTag::Nat => write!(f, "N"),
            CellTag::X(name) => write!(f, "{name}"),
            CellTag::Sum(a, b) => write!(f, "({a}+{b})"),
            CellTag::Prod(a, b) => write!(f, "({a}*{b})"),
        }
    }
}

/// Arrow labels on grid edges and cube components.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ArrowTag {
    Id,
    /// The unique arrow into `1`.
    Bang,
    Zero,
    Succ(u8),
    Named(String),
    /// `1 ⊕ f`.
    Lift(Box<ArrowTag>),
    /// Diagrammatic order: first, then second.
    Then(Box<ArrowTag>, Box<ArrowTag>),
}

impl ArrowTag {
    /// `1 ⊕ f`, with `1 ⊕ id = id`.
    pub fn lift(f: ArrowTag) -> ArrowTag {
        match f {
            ArrowTag::Id => ArrowTag::Id,
            f => ArrowTag::Lift(Box::new(f)),
        }
    }

    /// Symbolic composite `f ; g` with identity and terminal laws applied.
    pub fn then(f: &ArrowTag, g: &ArrowTag) -> ArrowTag {
        match (f, g) {
            (ArrowTag::Id, g) => g.clone(),
            (f, ArrowTag::Id) => f.clone(),
            (ArrowTag::Zero, ArrowTag::Bang) => ArrowTag::Id,
            (_, ArrowTag::Bang) => ArrowTag::Bang,
            (ArrowTag::Lift(a), ArrowTag::Lift(b)) => ArrowTag::lift(ArrowTag::then(a, b)),
            (f, g) => ArrowTag::Then(Box::new(f.clone()), Box::new(g.clone())),
        }
    }
}

impl fmt::Display for ArrowTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArrowTag::Id => write!(f, "id"),
            ArrowTag::Bang => write!(f, "!"),
            ArrowTag::Zero => write!(f, "0"),
            ArrowTag::Succ(n) => write!(f, "s{n}"),
            ArrowTag::Named(s) => write!(f, "{s}"),
            ArrowTag::Lift(a) => write!(f, "(1+{a})"),
            ArrowTag::Then(a, b) => write!(f, "{a};{b}"),
        }
    }
}

/// A `2 × i` grid: row 0 on top, row 1 below, columns left to right.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GridObj {
    pub rows: [Vec<CellTag>; 2],
}

impl GridObj {
    pub fn levels(&self) -> usize {
        self.rows[0].len()
    }

    pub fn terminal(levels: usize) -> GridObj {
        GridObj {
            rows: [vec![CellTag::One; levels], vec![CellTag::One; levels]],
        }
    }

    pub fn is_terminal(&self) -> bool {
        self.rows.iter().flatten().all(|c| *c == CellTag::One)
    }

    /// The level `X^{p,q}`: `p` copies of `X` on top, `q` below, `1` after.
    pub fn level_of(x: &CellTag, p: usize, q: usize, levels: usize) -> GridObj {
        let row = |n: usize| {
            (0..levels)
                .map(|c| if c < n { x.clone() } else { CellTag::One })
                .collect()
        };
        GridObj {
            rows: [row(p), row(q)],
        }
    }

    /// The row object `X^{(c)}` in both rows: `X` through column `c`.
    pub fn row_object(x: &CellTag, c: usize, levels: usize) -> GridObj {
        GridObj::level_of(x, c + 1, c + 1, levels)
    }

    /// Canonical edge between two cells: identity on equal cells, the
    /// terminal arrow into `1`, a named arrow otherwise.
    pub fn edge(from: &CellTag, to: &CellTag) -> ArrowTag {
        if from == to {
            ArrowTag::Id
        } else if let (CellTag::Sum(a, b), CellTag::Sum(c, d)) = (from, to) {
            if a == c && **a == CellTag::One {
                ArrowTag::lift(GridObj::edge(b, d))
            } else {
                ArrowTag::Named(format!("{from}->{to}"))
            }
        } else if *to == CellTag::One {
            ArrowTag::Bang
        } else {
            ArrowTag::Named(format!("{from}->{to}"))
        }
    }

    /// The `i-1` horizontal arrows of a row.
    pub fn horizontal(&self, row: usize) -> Vec<ArrowTag> {
        self.rows[row]
            .windows(2)
            .map(|w| GridObj::edge(&w[0], &w[1]))
            .collect()
    }

    /// The `i` vertical arrows.
    pub fn vertical(&self) -> Vec<ArrowTag> {
        self.rows[0]
            .iter()
            .zip(&self.rows[1])
            .map(|(a, b)| GridObj::edge(a, b))
            .collect()
    }
}

impl fmt::Display for GridObj {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let row = |r: &Vec<CellTag>| {
            r.iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(" ")
        };
        write!(f, "{} | {}", row(&self.rows[0]), row(&self.rows[1]))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GridError {
    #[error("grid syntax: {0}")]
    Syntax(String),
    #[error(transparent)]
    Index(#[from] ObjError),
}

fn parse_cell(s: &str) -> Result<CellTag, GridError> {
    let s = s.trim();
    if let Some(inner) = s.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
        let mut depth = 0usize;
        for (i, ch) in inner.char_indices() {
            match ch {
                '(' => depth += 1,
                ')' => depth = depth.saturating_sub(1),
                '+' | '*' if depth == 0 => {
                    let a = parse_cell(&inner[..i])?;
                    let b = parse_cell(&inner[i + 1..])?;
                    return Ok(if ch == '+' {
                        CellTag::sum(a, b)
                    } else {
                        CellTag::prod(a, b)
                    });
                }
                _ => {}
            }
        }
        return Err(GridError::Syntax(format!("no operator in ({inner})")));
    }
    match s {
        "1" => Ok(CellTag::One),
        "N" => Ok(CellTag::Nat),
        "" => Err(GridError::Syntax("empty cell".into())),
        name if name.chars().all(|c| c.is_alphanumeric() || c == '_') => {
            Ok(CellTag::X(name.into()))
        }
        other => Err(GridError::Syntax(format!("bad cell {other:?}"))),
    }
}

impl FromStr for GridObj {
    type Err = GridError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split('|').collect();
        let [top, bottom] = parts.as_slice() else {
            return Err(GridError::Syntax(
                "expected two rows separated by '|'".into(),
            ));
        };
        let row = |r: &str| {
            r.split_whitespace()
                .map(parse_cell)
                .collect::<Result<Vec<_>, _>>()
        };
        let (top, bottom) = (row(top)?, row(bottom)?);
        if top.len() != bottom.len() || top.is_empty() {
            return Err(GridError::Syntax(
                "rows must have the same positive length".into(),
            ));
        }
        Ok(GridObj {
            rows: [top, bottom],
        })
    }
}

/// Column action of `T`: a column over `1` loses its top.
fn t_column(top: &CellTag, bottom: &CellTag) -> (CellTag, CellTag) {
    match (top, bottom) {
        (CellTag::Sum(a, b), CellTag::Sum(c, d)) => {
            let (a, c) = t_column(a, c);
            let (b, d) = t_column(b, d);
            (CellTag::sum(a, b), CellTag::sum(c, d))
        }
        (_, CellTag::One) => (CellTag::One, CellTag::One),
        _ => (top.clone(), bottom.clone()),
    }
}

/// Column action of `G`: a column over `1` is filled with its top.
fn g_column(top: &CellTag, bottom: &CellTag) -> (CellTag, CellTag) {
    match (top, bottom) {
        (CellTag::Sum(a, b), CellTag::Sum(c, d)) => {
            let (a, c) = g_column(a, c);
            let (b, d) = g_column(b, d);
            (CellTag::sum(a, b), CellTag::sum(c, d))
        }
        (_, CellTag::One) => (top.clone(), top.clone()),
        _ => (top.clone(), bottom.clone()),
    }
}

/// Row action of `M_q`: a row whose last non-`1` cell sits in column `q`
/// loses that cell.
fn m_row(row: &[CellTag], q: usize) -> Vec<CellTag> {
    let last = row.iter().rposition(|c| *c != CellTag::One);
    let mut out = row.to_vec();
    if last == Some(q) {
        out[q] = CellTag::One;
    }
    out
}

pub fn grid_functor(f: FunctorTag, x: &GridObj) -> GridObj {
    match f {
        FunctorTag::T | FunctorTag::G => {
            let col = if f == FunctorTag::T {
                t_column
            } else {
                g_column
            };
            let (top, bottom): (Vec<_>, Vec<_>) = x.rows[0]
                .iter()
                .zip(&x.rows[1])
                .map(|(a, b)| col(a, b))
                .unzip();
            GridObj {
                rows: [top, bottom],
            }
        }
        FunctorTag::M(q) => GridObj {
            rows: [m_row(&x.rows[0], q.into()), m_row(&x.rows[1], q.into())],
        },
    }
}

/// The literal chain action of `M_p` on a row `X_0 → … → X_{i-1}`: the
/// term in position `i-p+1` is repeated, shifting nothing else.
pub fn chain_rule_row(row: &[CellTag], p: usize) -> Vec<CellTag> {
    let i = row.len();
    let mut out = row.to_vec();
    if let Some(src) = (i + 1).checked_sub(p) {
        if src + 1 < i {
            out[src + 1] = row[src].clone();
        }
    }
    out
}

/// `N_{k,p}`: naturals through column `p`, in the top row only for `k = 0`
/// and in both rows for `k = 1`.
pub fn levels_of_nat(p: u8, k: u8, levels: u8) -> Result<GridObj, ObjError> {
    LevelIndex::new(k, p).validate(levels)?;
    let n = usize::from(p) + 1;
    let below = if k == 1 { n } else { 0 };
    Ok(GridObj::level_of(&CellTag::Nat, n, below, levels.into()))
}

/// The grid the abstract rules assign to a generator image (`None` = `⊤`).
fn grid_of(ix: Option<LevelIndex>, levels: u8) -> GridObj {
    match ix {
        None => GridObj::terminal(levels.into()),
        Some(ix) => levels_of_nat(ix.p, ix.k, levels).expect("image index in range"),
    }
}

/// Cellwise `1 ⊕ -`.
pub fn f2i(x: &GridObj) -> GridObj {
    let lift = |r: &Vec<CellTag>| {
        r.iter()
            .map(|c| CellTag::sum(CellTag::One, c.clone()))
            .collect()
    };
    GridObj {
        rows: [lift(&x.rows[0]), lift(&x.rows[1])],
    }
}

/// A morphism of grids: one arrow per cell, forming cubes with the edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridMap {
    pub source: GridObj,
    pub target: GridObj,
    pub cells: [Vec<ArrowTag>; 2],
}

impl GridMap {
    /// `0_{k,p} : 1^{2×i} → N_{k,p}`, zero where the target holds `N`.
    pub fn zero_cube(k: u8, p: u8, levels: u8) -> Result<GridMap, ObjError> {
        let target = levels_of_nat(p, k, levels)?;
        let arrows = |r: &Vec<CellTag>| {
            r.iter()
                .map(|c| {
                    if *c == CellTag::Nat {
                        ArrowTag::Zero
                    } else {
                        ArrowTag::Id
                    }
                })
                .collect()
        };
        Ok(GridMap {
            source: GridObj::terminal(levels.into()),
            cells: [arrows(&target.rows[0]), arrows(&target.rows[1])],
            target,
        })
    }

    /// `s^n_{k,p} : N_{k,p} → N_{k,p}`, the binary successor on `N` cells.
    pub fn succ_cube(n: u8, k: u8, p: u8, levels: u8) -> Result<GridMap, ObjError> {
        let grid = levels_of_nat(p, k, levels)?;
        let arrows = |r: &Vec<CellTag>| {
            r.iter()
                .map(|c| {
                    if *c == CellTag::Nat {
                        ArrowTag::Succ(n)
                    } else {
                        ArrowTag::Id
                    }
                })
                .collect()
        };
        Ok(GridMap {
            cells: [arrows(&grid.rows[0]), arrows(&grid.rows[1])],
            source: grid.clone(),
            target: grid,
        })
    }

    /// Cube components: columns with a natural-number target and the rest.
    pub fn cube_counts(&self) -> (usize, usize) {
        let nat_cols = (0..self.target.levels())
            .filter(|&c| self.target.rows.iter().any(|r| r[c] == CellTag::Nat))
            .count();
        (nat_cols, self.target.levels() - nat_cols)
    }

    /// Every square face (horizontal and vertical) commutes symbolically;
    /// arrows into `1` are all equal.
    pub fn faces_commute(&self) -> bool {
        let agree = |a: ArrowTag, b: ArrowTag, cod: &CellTag| *cod == CellTag::One || a == b;
        for r in 0..2 {
            let (hs, ht) = (self.source.horizontal(r), self.target.horizontal(r));
            for c in 0..hs.len() {
                let a = ArrowTag::then(&hs[c], &self.cells[r][c + 1]);
                let b = ArrowTag::then(&self.cells[r][c], &ht[c]);
                if !agree(a, b, &self.target.rows[r][c + 1]) {
                    return false;
                }
            }
        }
        let (vs, vt) = (self.source.vertical(), self.target.vertical());
        (0..vs.len()).all(|c| {
            let a = ArrowTag::then(&vs[c], &self.cells[1][c]);
            let b = ArrowTag::then(&self.cells[0][c], &vt[c]);
            agree(a, b, &self.target.rows[1][c])
        })
    }

    /// `1 ⊕ f` cellwise.
    pub fn lift(&self) -> GridMap {
        let lift = |r: &Vec<ArrowTag>| r.iter().map(|a| ArrowTag::lift(a.clone())).collect();
        GridMap {
            source: f2i(&self.source),
            target: f2i(&self.target),
            cells: [lift(&self.cells[0]), lift(&self.cells[1])],
        }
    }
}

/// An entry of the printed `M_p` table: the terminal grid or a row object.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TableEntry {
    Terminal,
    Row(usize),
    /// The printed pattern names a row object that does not exist for this `i`.
    Undefined(String),
}

impl fmt::Display for TableEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TableEntry::Terminal => write!(f, "1^{{2×i}}"),
            TableEntry::Row(c) => write!(f, "X^({c})"),
            TableEntry::Undefined(s) => write!(f, "{s}"),
        }
    }
}

/// Rows of the printed table: `M_0`, `M_1` and `M_{i-1}` (labels), each with
/// one printed entry per column `X^(0) … X^(i-1)`.
pub fn printed_table(levels: usize) -> Vec<(String, usize, Vec<TableEntry>)> {
    let cols = 0..levels;
    let mut rows = vec![(
        "M_0".to_string(),
        0,
        cols.clone()
            .map(|c| {
                if c == 0 {
                    TableEntry::Terminal
                } else {
                    TableEntry::Row(c)
                }
            })
            .collect(),
    )];
    if levels >= 2 {
        rows.push((
            "M_1".to_string(),
            1,
            cols.clone()
                .map(|c| TableEntry::Row(if c == 1 { 0 } else { c }))
                .collect(),
        ));
        let last = levels - 1;
        rows.push((
            "M_{i-1}".to_string(),
            last,
            cols.map(|c| {
                if c + 2 == levels {
                    match c.checked_sub(1) {
                        Some(prev) => TableEntry::Row(prev),
                        None => TableEntry::Undefined("X^(i-3) with i-3 < 0".into()),
                    }
                } else {
                    TableEntry::Row(c)
                }
            })
            .collect(),
        ));
    }
    rows
}

/// What the generator rule predicts for `M_p X^{(c)}`.
pub fn rule_entry(p: usize, c: usize) -> TableEntry {
    if p != c {
        TableEntry::Row(c)
    } else if c == 0 {
        TableEntry::Terminal
    } else {
        TableEntry::Row(c - 1)
    }
}

/// A printed cell that disagrees with the generator rule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableFlag {
    pub row: String,
    pub column: usize,
    pub printed: TableEntry,
    pub rule: TableEntry,
}

impl fmt::Display for TableFlag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "row {}, column X^({}): printed {}, rule gives {}",
            self.row, self.column, self.printed, self.rule
        )
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ModelReport {
    pub levels: u8,
    pub checks: usize,
    pub failures: Vec<String>,
    pub flagged: Vec<TableFlag>,
    /// Where the literal chain action agrees with the truncation rule on
    /// row objects, and where it does not.
    pub chain_agreement: Vec<String>,
}

impl ModelReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "levels": self.levels,
            "checks": self.checks,
            "failures": self.failures,
            "flagged": self.flagged.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "chain_agreement": self.chain_agreement,
            "passed": self.passed(),
        })
    }
}

impl fmt::Display for ModelReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "i = {}: {} checks, {} failures, {} flagged table cells",
            self.levels,
            self.checks,
            self.failures.len(),
            self.flagged.len()
        )?;
        for x in &self.failures {
            writeln!(f, "  FAIL {x}")?;
        }
        for x in &self.flagged {
            writeln!(f, "  FLAG {x}")?;
        }
        for x in &self.chain_agreement {
            writeln!(f, "  chain {x}")?;
        }
        Ok(())
    }
}

/// Compares the grid model with the abstract generator rules at `i = levels`.
pub fn verify_model_equations(levels: u8) -> ModelReport {
    let mut r = ModelReport {
        levels,
        ..Default::default()
    };
    let check = |ok: bool, what: String, r: &mut ModelReport| {
        r.checks += 1;
        if !ok {
            r.failures.push(what);
        }
    };
    let i = usize::from(levels);
    let mut functors = vec![FunctorTag::T, FunctorTag::G];
    functors.extend((0..levels).map(FunctorTag::M));

    for k in 0..=1u8 {
        for p in 0..levels {
            let ix = LevelIndex::new(k, p);
            let grid = levels_of_nat(p, k, levels).expect("in range");
            for &f in &functors {
                let got = grid_functor(f, &grid);
                let want = grid_of(f.on_level(ix), levels);
                check(
                    got == want,
                    format!("{f} on N_{{{k},{p}}}: grid {got}, rule {want}"),
                    &mut r,
                );
            }
            for f in [FunctorTag::T, FunctorTag::G] {
                let once = grid_functor(f, &grid);
                check(
                    grid_functor(f, &once) == once,
                    format!("{f} not idempotent on N_{{{k},{p}}}"),
                    &mut r,
                );
            }
            let mut residue = grid.clone();
            for q in 0..levels {
                residue = grid_functor(FunctorTag::M(q), &residue);
            }
            let abstract_top =
                crate::objects::min_fiber_residue(&crate::objects::ObjExpr::Nat(ix), levels)
                    == crate::objects::ObjExpr::Top;
            check(
                residue.is_terminal() == abstract_top,
                format!("carrier N_{{{k},{p}}}: grid residue {residue}, abstract residue is Top: {abstract_top}"),
                &mut r,
            );
            for (name, cube) in [
                ("zero", GridMap::zero_cube(k, p, levels)),
                ("s1", GridMap::succ_cube(1, k, p, levels)),
                ("s2", GridMap::succ_cube(2, k, p, levels)),
            ] {
                let cube = cube.expect("in range");
                check(
                    cube.faces_commute(),
                    format!("{name} cube at ({k},{p}) has a failing face"),
                    &mut r,
                );
                check(
                    cube.lift().faces_commute(),
                    format!("lifted {name} cube at ({k},{p}) has a failing face"),
                    &mut r,
                );
                check(
                    cube.cube_counts() == (usize::from(p) + 1, i - usize::from(p) - 1),
                    format!(
                        "{name} cube at ({k},{p}) has cube counts {:?}",
                        cube.cube_counts()
                    ),
                    &mut r,
                );
            }
        }
    }
    for p in 0..levels {
        let fixed = levels_of_nat(p, 1, levels).expect("in range");
        check(
            grid_functor(FunctorTag::G, &fixed) == fixed,
            format!("G moves N_{{1,{p}}}"),
            &mut r,
        );
    }
    for &f in &functors {
        let t = GridObj::terminal(i);
        check(
            grid_functor(f, &t) == t,
            format!("{f} moves the terminal grid"),
            &mut r,
        );
    }
    for (label, p, entries) in printed_table(i) {
        for (c, printed) in entries.into_iter().enumerate() {
            let rule = rule_entry(p, c);
            let grid = grid_functor(
                FunctorTag::M(p as u8),
                &GridObj::row_object(&CellTag::x(), c, i),
            );
            let rule_grid = match rule {
                TableEntry::Terminal => GridObj::terminal(i),
                TableEntry::Row(j) => GridObj::row_object(&CellTag::x(), j, i),
                TableEntry::Undefined(_) => unreachable!(),
            };
            check(
                grid == rule_grid,
                format!("M_{p} X^({c}): grid {grid}, rule {rule}"),
                &mut r,
            );
            if printed != rule {
                r.flagged.push(TableFlag {
                    row: label.clone(),
                    column: c,
                    printed,
                    rule,
                });
            }
        }
    }
    for p in 0..i {
        for c in 0..i {
            let row = GridObj::row_object(&CellTag::x(), c, i).rows[0].clone();
            let chained = chain_rule_row(&row, p);
            let truncated = m_row(&row, p);
            let verdict = if chained == truncated {
                "agrees"
            } else {
                "differs"
            };
            r.chain_agreement
                .push(format!("M_{p} on X^({c}): {verdict}"));
        }
    }
    r
}

/// The `M_p` action table in the printed layout, flagged cells marked `[!]`.
pub fn render_table(levels: u8) -> String {
    let i = usize::from(levels);
    let report = verify_model_equations(levels);
    let mut out = String::new();
    let header: Vec<String> = (0..i).map(|c| format!("X^({c})")).collect();
    out.push_str(&format!("{:<10}| {}\n", "", header.join(" | ")));
    for (label, _, entries) in printed_table(i) {
        let cells: Vec<String> = entries
            .iter()
            .enumerate()
            .map(|(c, e)| {
                let flagged = report
                    .flagged
                    .iter()
                    .any(|f| f.row == label && f.column == c);
                format!("{e}{}", if flagged { " [!]" } else { "" })
            })
            .collect();
        out.push_str(&format!(
            "{:<10}| {}\n",
            format!("{label}^S"),
            cells.join(" | ")
        ));
    }
    for f in &report.flagged {
        out.push_str(&format!("[!] {f}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn col(top: CellTag, bottom: CellTag) -> GridObj {
        GridObj {
            rows: [vec![top], vec![bottom]],
        }
    }

    #[test]
    fn column_rules() {
        let x = CellTag::x();
        assert_eq!(
            grid_functor(FunctorTag::T, &col(x.clone(), CellTag::One)),
            col(CellTag::One, CellTag::One)
        );
        assert_eq!(
            grid_functor(FunctorTag::G, &col(x.clone(), CellTag::One)),
            col(x.clone(), x.clone())
        );
        assert_eq!(
            grid_functor(FunctorTag::T, &col(x.clone(), x.clone())),
            col(x.clone(), x)
        );
    }

    #[test]
    fn m0_kills_the_first_row_object() {
        let g = GridObj::row_object(&CellTag::x(), 0, 3);
        assert!(grid_functor(FunctorTag::M(0), &g).is_terminal());
    }

    #[test]
    fn carrier_grids() {
        assert!(levels_of_nat(2, 0, 3).unwrap().rows[0]
            .iter()
            .all(|c| *c == CellTag::Nat));
        assert!(levels_of_nat(2, 1, 3)
            .unwrap()
            .rows
            .iter()
            .flatten()
            .all(|c| *c == CellTag::Nat));
        assert!(levels_of_nat(3, 0, 3).is_err());
        let lifted = f2i(&GridObj::terminal(3));
        assert!(lifted
            .rows
            .iter()
            .flatten()
            .all(|c| *c == CellTag::sum(CellTag::One, CellTag::One)));
        assert_eq!(lifted.levels(), 3);
    }

    #[test]
    fn text_round_trip() {
        let g: GridObj = "N (1+N) X | 1 1 (N*X)".parse().unwrap();
        assert_eq!(g.to_string(), "N (1+N) X | 1 1 (N*X)");
        assert!("N N".parse::<GridObj>().is_err());
        assert!("N | N N".parse::<GridObj>().is_err());
    }

    #[test]
    fn verification_flags_the_last_row() {
        let r = verify_model_equations(5);
        assert!(r.passed(), "{r}");
        let flagged: Vec<usize> = r.flagged.iter().map(|f| f.column).collect();
        assert_eq!(flagged, vec![3, 4]);
        assert!(r.flagged.iter().all(|f| f.row == "M_{i-1}"));
    }
}
