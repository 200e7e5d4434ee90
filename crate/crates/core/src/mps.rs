//! MPS reader.
//!
//! Both fixed and free MPS are read by splitting fields on whitespace, so
//! names must not contain spaces. Section headers start in column one; data
//! lines are indented. Lines starting with `*` are comments.
//!
//! Supported sections: `NAME`, `ROWS`, `COLUMNS`, `RHS`, `RANGES`, `BOUNDS`,
//! `OBJSENSE` and `ENDATA`. Only the first RHS, RANGES and BOUNDS set is
//! used. The first `N` row is the objective; other `N` rows are dropped.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::model::{Constraint, GeneralLP, Relation, Sense};

/// Bound magnitudes at or above this are read as infinite.
pub const MPS_INFINITY: f64 = 1e30;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MpsError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("unsupported MPS feature: {0}")]
    UnsupportedFeature(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowKind {
    N,
    L,
    G,
    E,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MpsRow {
    pub name: String,
    pub kind: RowKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    Up,
    Lo,
    Fx,
    Fr,
    Mi,
    Pl,
    Bv,
    Ui,
    Li,
}

impl BoundKind {
    fn parse(s: &str) -> Option<Self> {
        Some(match s.to_ascii_uppercase().as_str() {
            "UP" => BoundKind::Up,
            "LO" => BoundKind::Lo,
            "FX" => BoundKind::Fx,
            "FR" => BoundKind::Fr,
            "MI" => BoundKind::Mi,
            "PL" => BoundKind::Pl,
            "BV" => BoundKind::Bv,
            "UI" => BoundKind::Ui,
            "LI" => BoundKind::Li,
            _ => return None,
        })
    }

    fn takes_value(self) -> bool {
        matches!(
            self,
            BoundKind::Up | BoundKind::Lo | BoundKind::Fx | BoundKind::Ui | BoundKind::Li
        )
    }
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            BoundKind::Up => "UP",
            BoundKind::Lo => "LO",
            BoundKind::Fx => "FX",
            BoundKind::Fr => "FR",
            BoundKind::Mi => "MI",
            BoundKind::Pl => "PL",
            BoundKind::Bv => "BV",
            BoundKind::Ui => "UI",
            BoundKind::Li => "LI",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MpsBound {
    pub kind: BoundKind,
    pub column: usize,
    pub value: Option<f64>,
}

/// A parsed MPS file. Row and column references are indices into `rows`
/// and `columns`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct MpsModel {
    pub name: String,
    pub rows: Vec<MpsRow>,
    pub objective_row: Option<usize>,
    pub columns: Vec<String>,
    /// `(column, row, value)`, duplicates already summed.
    pub entries: Vec<(usize, usize, f64)>,
    pub rhs: Vec<(usize, f64)>,
    pub ranges: Vec<(usize, f64)>,
    pub bounds: Vec<MpsBound>,
    pub integer_columns: Vec<usize>,
    pub sense: Option<Sense>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Section {
    Name,
    ObjSense,
    Rows,
    Columns,
    Rhs,
    Ranges,
    Bounds,
}

struct Parser {
    model: MpsModel,
    row_index: HashMap<String, usize>,
    col_index: HashMap<String, usize>,
    entry_index: HashMap<(usize, usize), usize>,
    rhs_index: HashMap<usize, usize>,
    range_index: HashMap<usize, usize>,
    rhs_set: Option<String>,
    range_set: Option<String>,
    bound_set: Option<String>,
    in_integer_block: bool,
}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        message: message.into(),
    }
}

fn number(line: usize, token: &str) -> Result<f64, ParseError> {
    let cleaned = token.replace(['D', 'd'], "E");
    match cleaned.parse::<f64>() {
        Ok(v) if !v.is_nan() => Ok(v),
        _ => Err(err(line, format!("malformed number `{token}`"))),
    }
}

fn finite(line: usize, token: &str) -> Result<f64, ParseError> {
    let v = number(line, token)?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(err(line, format!("non-finite value `{token}`")))
    }
}

fn parse_sense(line: usize, token: &str) -> Result<Sense, ParseError> {
    match token.to_ascii_uppercase().as_str() {
        "MAX" | "MAXIMIZE" => Ok(Sense::Maximize),
        "MIN" | "MINIMIZE" => Ok(Sense::Minimize),
        _ => Err(err(line, format!("unknown objective sense `{token}`"))),
    }
}

impl Parser {
    fn new() -> Self {
        Parser {
            model: MpsModel::default(),
            row_index: HashMap::new(),
            col_index: HashMap::new(),
            entry_index: HashMap::new(),
            rhs_index: HashMap::new(),
            range_index: HashMap::new(),
            rhs_set: None,
            range_set: None,
            bound_set: None,
            in_integer_block: false,
        }
    }

    fn warn(&mut self, line: usize, message: String) {
        log::warn!("line {line}: {message}");
        self.model.warnings.push(format!("line {line}: {message}"));
    }

    fn row(&self, line: usize, name: &str) -> Result<usize, ParseError> {
        self.row_index
            .get(name)
            .copied()
            .ok_or_else(|| err(line, format!("undeclared row `{name}`")))
    }

    fn column(&self, line: usize, name: &str) -> Result<usize, ParseError> {
        self.col_index
            .get(name)
            .copied()
            .ok_or_else(|| err(line, format!("undeclared column `{name}`")))
    }

    /// Returns false when the line belongs to a set other than the first.
    fn same_set(slot: &mut Option<String>, name: &str) -> bool {
        match slot {
            None => {
                *slot = Some(name.to_string());
                true
            }
            Some(s) => s == name,
        }
    }

    fn rows_line(&mut self, line: usize, tokens: &[&str]) -> Result<(), ParseError> {
        let [kind, name] = tokens else {
            return Err(err(line, "ROWS entries need a type and a name"));
        };
        let kind = match kind.to_ascii_uppercase().as_str() {
            "N" => RowKind::N,
            "L" => RowKind::L,
            "G" => RowKind::G,
            "E" => RowKind::E,
            other => return Err(err(line, format!("unknown row type `{other}`"))),
        };
        if self.row_index.contains_key(*name) {
            return Err(err(line, format!("duplicate row `{name}`")));
        }
        let index = self.model.rows.len();
        if kind == RowKind::N {
            if self.model.objective_row.is_none() {
                self.model.objective_row = Some(index);
            } else {
                self.warn(line, format!("extra objective row `{name}` ignored"));
            }
        }
        self.row_index.insert(name.to_string(), index);
        self.model.rows.push(MpsRow {
            name: name.to_string(),
            kind,
        });
        Ok(())
    }

    fn columns_line(&mut self, line: usize, tokens: &[&str]) -> Result<(), ParseError> {
        if tokens.len() >= 3 && tokens[1].trim_matches('\'').eq_ignore_ascii_case("MARKER") {
            match tokens[2].trim_matches('\'').to_ascii_uppercase().as_str() {
                "INTORG" => self.in_integer_block = true,
                "INTEND" => self.in_integer_block = false,
                other => return Err(err(line, format!("unknown marker `{other}`"))),
            }
            return Ok(());
        }
        if tokens.len() != 3 && tokens.len() != 5 {
            return Err(err(line, "COLUMNS entries need a column and one or two (row, value) pairs"));
        }
        let name = tokens[0];
        let col = match self.col_index.get(name) {
            Some(&c) => c,
            None => {
                let c = self.model.columns.len();
                self.col_index.insert(name.to_string(), c);
                self.model.columns.push(name.to_string());
                if self.in_integer_block {
                    self.model.integer_columns.push(c);
                }
                c
            }
        };
        for pair in tokens[1..].chunks(2) {
            let row = self.row(line, pair[0])?;
            let value = finite(line, pair[1])?;
            match self.entry_index.get(&(col, row)) {
                Some(&k) => {
                    self.model.entries[k].2 += value;
                    self.warn(line, format!("duplicate entry ({name}, {}) summed", pair[0]));
                }
                None => {
                    self.entry_index.insert((col, row), self.model.entries.len());
                    self.model.entries.push((col, row, value));
                }
            }
        }
        Ok(())
    }

    /// Shared by RHS and RANGES: `[set] row value [row value]`.
    fn row_values(&mut self, line: usize, tokens: &[&str], ranges: bool) -> Result<(), ParseError> {
        let (set, pairs) = match tokens.len() {
            2 | 4 => ("", tokens),
            3 | 5 => (tokens[0], &tokens[1..]),
            _ => return Err(err(line, "expected one or two (row, value) pairs")),
        };
        let slot = if ranges { &mut self.range_set } else { &mut self.rhs_set };
        if !Self::same_set(slot, set) {
            return Ok(());
        }
        for pair in pairs.chunks(2) {
            let row = self.row(line, pair[0])?;
            let value = finite(line, pair[1])?;
            let (index, list) = if ranges {
                (&mut self.range_index, &mut self.model.ranges)
            } else {
                (&mut self.rhs_index, &mut self.model.rhs)
            };
            match index.get(&row) {
                Some(&k) => {
                    list[k].1 = value;
                    self.warn(line, format!("value for row `{}` given twice", pair[0]));
                }
                None => {
                    index.insert(row, list.len());
                    list.push((row, value));
                }
            }
        }
        Ok(())
    }

    fn bounds_line(&mut self, line: usize, tokens: &[&str]) -> Result<(), ParseError> {
        let Some(kind) = tokens.first().and_then(|t| BoundKind::parse(t)) else {
            return Err(err(line, format!("unknown bound type `{}`", tokens.first().unwrap_or(&""))));
        };
        let rest = &tokens[1..];
        let (set, col, value) = match (kind.takes_value(), rest.len()) {
            (true, 3) => (rest[0], rest[1], Some(rest[2])),
            (true, 2) => ("", rest[0], Some(rest[1])),
            (false, 2) => (rest[0], rest[1], None),
            (false, 1) => ("", rest[0], None),
            _ => return Err(err(line, format!("wrong number of fields for {kind} bound"))),
        };
        if !Self::same_set(&mut self.bound_set, set) {
            return Ok(());
        }
        let column = self.column(line, col)?;
        let value = match value {
            Some(t) => {
                let v = number(line, t)?;
                Some(if v >= MPS_INFINITY {
                    f64::INFINITY
                } else if v <= -MPS_INFINITY {
                    f64::NEG_INFINITY
                } else {
                    v
                })
            }
            None => None,
        };
        self.model.bounds.push(MpsBound { kind, column, value });
        Ok(())
    }
}

/// Parses MPS text. Never panics; every malformed input is a [`ParseError`].
pub fn parse_mps(text: &str) -> Result<MpsModel, ParseError> {
    let mut p = Parser::new();
    let mut section: Option<Section> = None;
    let mut last_line = 0;
    let mut ended = false;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        if raw.trim().is_empty() || raw.starts_with('*') {
            continue;
        }
        last_line = line;
        let tokens: Vec<&str> = raw.split_whitespace().collect();
        let indented = raw.starts_with(' ') || raw.starts_with('\t');
        if !indented {
            let head = tokens[0].to_ascii_uppercase();
            section = Some(match head.as_str() {
                "NAME" => {
                    p.model.name = tokens[1..].join(" ");
                    Section::Name
                }
                "OBJSENSE" => {
                    if let Some(t) = tokens.get(1) {
                        p.model.sense = Some(parse_sense(line, t)?);
                    }
                    Section::ObjSense
                }
                "ROWS" => Section::Rows,
                "COLUMNS" => Section::Columns,
                "RHS" => Section::Rhs,
                "RANGES" => Section::Ranges,
                "BOUNDS" => Section::Bounds,
                "ENDATA" => {
                    ended = true;
                    break;
                }
                _ => return Err(err(line, format!("unknown section `{}`", tokens[0]))),
            });
            continue;
        }
        match section {
            None | Some(Section::Name) => {
                return Err(err(line, "data line outside of a section"));
            }
            Some(Section::ObjSense) => {
                p.model.sense = Some(parse_sense(line, tokens[0])?);
            }
            Some(Section::Rows) => p.rows_line(line, &tokens)?,
            Some(Section::Columns) => p.columns_line(line, &tokens)?,
            Some(Section::Rhs) => p.row_values(line, &tokens, false)?,
            Some(Section::Ranges) => p.row_values(line, &tokens, true)?,
            Some(Section::Bounds) => p.bounds_line(line, &tokens)?,
        }
    }
    if !ended {
        return Err(err(last_line, "missing ENDATA"));
    }
    Ok(p.model)
}

/// Lowers a parsed model to a [`GeneralLP`].
///
/// Ranged rows become two constraints: the original relation, followed by a
/// row named `<name>#range` carrying the other side. A negative `UP` bound on
/// a variable whose lower bound is still the default zero moves the lower
/// bound to `-∞`.
pub fn lower_to_general(model: &MpsModel) -> Result<GeneralLP, MpsError> {
    if let Some(&c) = model.integer_columns.first() {
        return Err(MpsError::UnsupportedFeature(format!(
            "integer column `{}`",
            model.columns[c]
        )));
    }
    let n = model.columns.len();
    let mut glp = GeneralLP::new(model.sense.unwrap_or(Sense::Minimize), n);
    glp.var_names = model.columns.clone();

    let mut dense = vec![vec![0.0; n]; model.rows.len()];
    for &(col, row, v) in &model.entries {
        dense[row][col] += v;
    }
    let mut rhs = vec![0.0; model.rows.len()];
    for &(row, v) in &model.rhs {
        rhs[row] = v;
    }
    let mut range = vec![None; model.rows.len()];
    for &(row, v) in &model.ranges {
        range[row] = Some(v);
    }
    if let Some(obj) = model.objective_row {
        glp.objective = dense[obj].clone();
        glp.objective_constant = -rhs[obj];
    }

    for (i, row) in model.rows.iter().enumerate() {
        let mut push = |name: String, relation: Relation, value: f64| {
            glp.constraints.push(Constraint {
                name,
                coefficients: dense[i].clone(),
                relation,
                rhs: value,
            });
        };
        let b = rhs[i];
        let range_name = || format!("{}#range", row.name);
        match (row.kind, range[i]) {
            (RowKind::N, _) => {}
            (RowKind::L, None) => push(row.name.clone(), Relation::Le, b),
            (RowKind::G, None) => push(row.name.clone(), Relation::Ge, b),
            (RowKind::E, None) => push(row.name.clone(), Relation::Eq, b),
            (RowKind::L, Some(r)) => {
                push(row.name.clone(), Relation::Le, b);
                push(range_name(), Relation::Ge, b - r.abs());
            }
            (RowKind::G, Some(r)) => {
                push(row.name.clone(), Relation::Ge, b);
                push(range_name(), Relation::Le, b + r.abs());
            }
            (RowKind::E, Some(r)) if r == 0.0 => push(row.name.clone(), Relation::Eq, b),
            (RowKind::E, Some(r)) if r > 0.0 => {
                push(row.name.clone(), Relation::Ge, b);
                push(range_name(), Relation::Le, b + r);
            }
            (RowKind::E, Some(r)) => {
                push(row.name.clone(), Relation::Le, b);
                push(range_name(), Relation::Ge, b + r);
            }
        }
    }

    for bound in &model.bounds {
        let j = bound.column;
        let v = bound.value.unwrap_or(0.0);
        match bound.kind {
            BoundKind::Up => {
                if v < 0.0 && glp.lower[j] == 0.0 {
                    log::warn!("negative UP bound on `{}`: lower bound set to -inf", glp.var_names[j]);
                    glp.lower[j] = f64::NEG_INFINITY;
                }
                glp.upper[j] = v;
            }
            BoundKind::Lo => glp.lower[j] = v,
            BoundKind::Fx => {
                glp.lower[j] = v;
                glp.upper[j] = v;
            }
            BoundKind::Fr => {
                glp.lower[j] = f64::NEG_INFINITY;
                glp.upper[j] = f64::INFINITY;
            }
            BoundKind::Mi => glp.lower[j] = f64::NEG_INFINITY,
            BoundKind::Pl => glp.upper[j] = f64::INFINITY,
            BoundKind::Bv | BoundKind::Ui | BoundKind::Li => {
                return Err(MpsError::UnsupportedFeature(format!(
                    "{} bound on `{}`",
                    bound.kind, glp.var_names[j]
                )));
            }
        }
    }
    Ok(glp)
}

/// Parses and lowers in one step.
pub fn read_mps(text: &str) -> Result<GeneralLP, MpsError> {
    lower_to_general(&parse_mps(text)?)
}
