//! Finite algebras given by Cayley tables, the `.bcc` text format, and
//! primitive evaluation.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::set::ElemSet;

/// Largest supported order. Element sets are single `u64` bitsets.
pub const MAX_ORDER: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("order must be between 1 and {MAX_ORDER}, got {0}")]
    BadOrder(usize),
    #[error("table has {rows} rows of which row {row} has {len} entries; expected a square table")]
    NotSquare { rows: usize, row: usize, len: usize },
    #[error("entry {value} at ({row}, {col}) is outside [0, {order})")]
    EntryOutOfRange {
        row: usize,
        col: usize,
        value: usize,
        order: usize,
    },
    #[error("element index {index} is outside [0, {order})")]
    IndexOutOfRange { index: usize, order: usize },
    #[error("expected {order} labels, got {found}")]
    LabelCount { order: usize, found: usize },
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("not a permutation of 0..{0} fixing 0")]
    BadPermutation(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unsupported header `{0}`, expected `bcc v1`")]
    BadHeader(String),
    #[error("malformed line `{0}`")]
    Malformed(String),
    #[error("duplicate `{0}=` line")]
    DuplicateDirective(&'static str),
    #[error("`n=` line missing before the table")]
    MissingOrder,
    #[error("order must be between 1 and {MAX_ORDER}, got `{0}`")]
    BadOrder(String),
    #[error("`{0}` is not a non-negative integer")]
    BadInteger(String),
    #[error("row has {found} entries, expected {expected}")]
    RowLength { found: usize, expected: usize },
    #[error("table is not square: found {found} rows for n={expected}")]
    NotSquare { found: usize, expected: usize },
    #[error("entry {value} out of range for n={order}")]
    EntryOutOfRange { value: usize, order: usize },
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("{found} labels given for n={order}")]
    LabelCount { found: usize, order: usize },
}

/// How a law compares its two sides.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    /// `lhs = rhs`
    Eq,
    /// `lhs <= rhs`, i.e. `lhs * rhs = 0`
    Leq,
}

/// A concrete counterexample to a universally quantified law.
///
/// For `Relation::Eq` the two sides differ; for `Relation::Leq` the
/// product `lhs * rhs` is non-zero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub law: String,
    pub assignment: Vec<(String, usize)>,
    pub lhs: usize,
    pub rhs: usize,
    pub relation: Relation,
}

impl Witness {
    pub fn new(
        law: impl Into<String>,
        vars: &[&str],
        values: &[usize],
        lhs: usize,
        rhs: usize,
        relation: Relation,
    ) -> Self {
        Witness {
            law: law.into(),
            assignment: vars
                .iter()
                .zip(values)
                .map(|(v, &e)| (v.to_string(), e))
                .collect(),
            lhs,
            rhs,
            relation,
        }
    }

    /// Value bound to `var`, if the assignment mentions it.
    pub fn value(&self, var: &str) -> Option<usize> {
        self.assignment
            .iter()
            .find(|(name, _)| name == var)
            .map(|&(_, e)| e)
    }

    /// Values of the assignment in order.
    pub fn values(&self) -> Vec<usize> {
        self.assignment.iter().map(|&(_, e)| e).collect()
    }

    /// Re-checks the recorded sides against the table: true when they
    /// really violate the relation.
    pub fn is_violation(&self, a: &Algebra) -> bool {
        match self.relation {
            Relation::Eq => self.lhs != self.rhs,
            Relation::Leq => a.mul(self.lhs, self.rhs) != 0,
        }
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vars: Vec<String> = self
            .assignment
            .iter()
            .map(|(v, e)| format!("{v}={e}"))
            .collect();
        let op = match self.relation {
            Relation::Eq => "!=",
            Relation::Leq => "!<=",
        };
        write!(
            f,
            "{} fails at {}: {} {} {}",
            self.law,
            vars.join(", "),
            self.lhs,
            op,
            self.rhs
        )
    }
}

/// Outcome of checking a universally quantified property.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails(Witness),
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Verdict::Holds => None,
            Verdict::Fails(w) => Some(w),
        }
    }

    /// Material implication: fails only when `premise` is true and `self` fails.
    pub fn given(self, premise: bool) -> Verdict {
        if premise {
            self
        } else {
            Verdict::Holds
        }
    }

    /// Keeps the first failure.
    pub fn and(self, other: impl FnOnce() -> Verdict) -> Verdict {
        match self {
            Verdict::Holds => other(),
            fail => fail,
        }
    }
}

impl From<Option<Witness>> for Verdict {
    fn from(w: Option<Witness>) -> Self {
        w.map_or(Verdict::Holds, Verdict::Fails)
    }
}

impl Serialize for Verdict {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            holds: bool,
            #[serde(skip_serializing_if = "Option::is_none")]
            witness: Option<&'a Witness>,
        }
        Repr {
            holds: self.holds(),
            witness: self.witness(),
        }
        .serialize(s)
    }
}

/// A finite groupoid `(G; *, 0)` with `G = {0, .., n-1}` and the
/// distinguished constant at index 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Algebra {
    order: usize,
    table: Vec<u8>,
    labels: Option<Vec<String>>,
    name: Option<String>,
}

impl Algebra {
    pub fn from_rows(rows: &[Vec<usize>]) -> Result<Self, ModelError> {
        let n = rows.len();
        if n == 0 || n > MAX_ORDER {
            return Err(ModelError::BadOrder(n));
        }
        let mut table = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(ModelError::NotSquare {
                    rows: n,
                    row: i,
                    len: row.len(),
                });
            }
            for (j, &v) in row.iter().enumerate() {
                if v >= n {
                    return Err(ModelError::EntryOutOfRange {
                        row: i,
                        col: j,
                        value: v,
                        order: n,
                    });
                }
                table.push(v as u8);
            }
        }
        Ok(Algebra {
            order: n,
            table,
            labels: None,
            name: None,
        })
    }

    /// Builds an algebra from a row-major byte table of length `n * n`.
    pub fn from_bytes(order: usize, bytes: &[u8]) -> Result<Self, ModelError> {
        if order == 0 || order > MAX_ORDER {
            return Err(ModelError::BadOrder(order));
        }
        if bytes.len() != order * order {
            return Err(ModelError::NotSquare {
                rows: order,
                row: bytes.len() / order,
                len: bytes.len() % order,
            });
        }
        if let Some(pos) = bytes.iter().position(|&v| v as usize >= order) {
            return Err(ModelError::EntryOutOfRange {
                row: pos / order,
                col: pos % order,
                value: bytes[pos] as usize,
                order,
            });
        }
        Ok(Algebra {
            order,
            table: bytes.to_vec(),
            labels: None,
            name: None,
        })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, ModelError> {
        if labels.len() != self.order {
            return Err(ModelError::LabelCount {
                order: self.order,
                found: labels.len(),
            });
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(ModelError::DuplicateLabel(l.clone()));
            }
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Display name of an element: its label when present, else the index.
    pub fn label(&self, x: usize) -> String {
        match &self.labels {
            Some(l) => l[x].clone(),
            None => x.to_string(),
        }
    }

    /// Row-major table bytes.
    pub fn bytes(&self) -> &[u8] {
        &self.table
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.table
            .chunks(self.order)
            .map(|r| r.iter().map(|&v| v as usize).collect())
            .collect()
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn universe(&self) -> ElemSet {
        ElemSet::full(self.order)
    }

    /// `x * y` without range checks beyond slice indexing.
    #[inline]
    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.table[x * self.order + y] as usize
    }

    /// `x <= y` in the induced order, i.e. `x * y = 0`.
    #[inline]
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.mul(x, y) == 0
    }

    fn check_index(&self, x: usize) -> Result<(), ModelError> {
        if x < self.order {
            Ok(())
        } else {
            Err(ModelError::IndexOutOfRange {
                index: x,
                order: self.order,
            })
        }
    }

    pub fn product(&self, x: usize, y: usize) -> Result<usize, ModelError> {
        self.check_index(x)?;
        self.check_index(y)?;
        Ok(self.mul(x, y))
    }

    /// `x y^k`: `x` multiplied on the right by `y`, `k` times.
    pub fn right_power(&self, x: usize, y: usize, k: usize) -> Result<usize, ModelError> {
        self.check_index(x)?;
        self.check_index(y)?;
        Ok(self.pow(x, y, k))
    }

    #[inline]
    pub(crate) fn pow(&self, x: usize, y: usize, k: usize) -> usize {
        (0..k).fold(x, |acc, _| self.mul(acc, y))
    }

    /// Applies the relabeling `x -> perm[x]`. The result satisfies
    /// `perm[x] * perm[y] = perm[x * y]`. Labels follow their elements.
    pub fn relabel(&self, perm: &[usize]) -> Result<Algebra, ModelError> {
        let n = self.order;
        if !is_permutation_fixing_zero(perm, n) {
            return Err(ModelError::BadPermutation(n));
        }
        let mut table = vec![0u8; n * n];
        for x in 0..n {
            for y in 0..n {
                table[perm[x] * n + perm[y]] = perm[self.mul(x, y)] as u8;
            }
        }
        let labels = self.labels.as_ref().map(|l| {
            let mut out = vec![String::new(); n];
            for x in 0..n {
                out[perm[x]] = l[x].clone();
            }
            out
        });
        Ok(Algebra {
            order: n,
            table,
            labels,
            name: self.name.clone(),
        })
    }

    /// Serializes in the `.bcc v1` format.
    pub fn to_bcc(&self) -> String {
        self.to_string()
    }
}

pub(crate) fn is_permutation_fixing_zero(perm: &[usize], n: usize) -> bool {
    if perm.len() != n || perm.first() != Some(&0) {
        return false;
    }
    let mut seen = vec![false; n];
    perm.iter()
        .all(|&p| p < n && !std::mem::replace(&mut seen[p], true))
}

impl fmt::Display for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "bcc v1")?;
        if let Some(name) = &self.name {
            writeln!(f, "name={name}")?;
        }
        if let Some(labels) = &self.labels {
            writeln!(f, "labels={}", labels.join(","))?;
        }
        writeln!(f, "n={}", self.order)?;
        for row in self.table.chunks(self.order) {
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

impl FromStr for Algebra {
    type Err = ParseError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        parse_table(text)
    }
}

/// Parses the `.bcc` text format. Only the shape is validated; no axiom is
/// checked. The `bcc v1` header line is optional on input.
pub fn parse_table(text: &str) -> Result<Algebra, ParseError> {
    let err = |line: usize, kind| ParseError { line, kind };

    let mut name: Option<String> = None;
    let mut labels: Option<(usize, Vec<String>)> = None;
    let mut order: Option<usize> = None;
    let mut table: Vec<u8> = Vec::new();
    let mut rows = 0usize;
    let mut seen_content = false;
    let mut last_line = 0usize;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let first = !seen_content;
        seen_content = true;

        if let Some(n) = order {
            // Table body.
            if rows == n {
                return Err(err(
                    line_no,
                    ParseErrorKind::NotSquare {
                        found: rows + 1,
                        expected: n,
                    },
                ));
            }
            let mut count = 0;
            for tok in line.split_whitespace() {
                let v: usize = tok
                    .parse()
                    .map_err(|_| err(line_no, ParseErrorKind::BadInteger(tok.to_string())))?;
                if v >= n {
                    return Err(err(
                        line_no,
                        ParseErrorKind::EntryOutOfRange { value: v, order: n },
                    ));
                }
                table.push(v as u8);
                count += 1;
            }
            if count != n {
                return Err(err(
                    line_no,
                    ParseErrorKind::RowLength {
                        found: count,
                        expected: n,
                    },
                ));
            }
            rows += 1;
            continue;
        }

        if first && line.starts_with("bcc") {
            if line.split_whitespace().collect::<Vec<_>>() != ["bcc", "v1"] {
                return Err(err(line_no, ParseErrorKind::BadHeader(line.to_string())));
            }
            continue;
        }

        let Some((key, value)) = line.split_once('=') else {
            return Err(err(line_no, ParseErrorKind::Malformed(line.to_string())));
        };
        match key.trim() {
            "name" => {
                if name.is_some() {
                    return Err(err(line_no, ParseErrorKind::DuplicateDirective("name")));
                }
                name = Some(value.trim().to_string());
            }
            "labels" => {
                if labels.is_some() {
                    return Err(err(line_no, ParseErrorKind::DuplicateDirective("labels")));
                }
                let list: Vec<String> = value.split(',').map(|s| s.trim().to_string()).collect();
                for (i, l) in list.iter().enumerate() {
                    if list[..i].contains(l) {
                        return Err(err(line_no, ParseErrorKind::DuplicateLabel(l.clone())));
                    }
                }
                labels = Some((line_no, list));
            }
            "n" => {
                let v = value.trim();
                match v.parse::<usize>() {
                    Ok(n) if (1..=MAX_ORDER).contains(&n) => order = Some(n),
                    _ => return Err(err(line_no, ParseErrorKind::BadOrder(v.to_string()))),
                }
                table.reserve(order.unwrap_or(0).pow(2));
            }
            _ => return Err(err(line_no, ParseErrorKind::Malformed(line.to_string()))),
        }
    }

    let Some(n) = order else {
        return Err(err(last_line.max(1), ParseErrorKind::MissingOrder));
    };
    if rows != n {
        return Err(err(
            last_line + 1,
            ParseErrorKind::NotSquare {
                found: rows,
                expected: n,
            },
        ));
    }
    let mut a = Algebra {
        order: n,
        table,
        labels: None,
        name,
    };
    if let Some((line_no, list)) = labels {
        if list.len() != n {
            return Err(err(
                line_no,
                ParseErrorKind::LabelCount {
                    found: list.len(),
                    order: n,
                },
            ));
        }
        a.labels = Some(list);
    }
    Ok(a)
}
