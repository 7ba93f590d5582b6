//! Stored reference values and the per-cell comparison.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::reproduce::{Computed, Exhibit};

/// The reference table shipped with the binary.
pub const REFERENCE_TOML: &str = include_str!("../data/reference.toml");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Source {
    PublishedTable,
    PublishedText,
    PublishedFigure,
    ClosedForm,
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::PublishedTable => "published-table",
            Self::PublishedText => "published-text",
            Self::PublishedFigure => "published-figure",
            Self::ClosedForm => "closed-form",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Cell {
    pub key: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub abs: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rel: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lo: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hi: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub holds: Option<bool>,
    pub source: Source,
}

/// What a cell expects of its computed value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Check {
    Abs { value: f64, tol: f64 },
    Rel { value: f64, tol: f64 },
    Range { lo: f64, hi: f64 },
    Holds(bool),
}

impl Cell {
    pub fn check(&self) -> Result<Check, String> {
        let c = match (self.value, self.abs, self.rel, self.lo, self.hi, self.holds) {
            (Some(value), Some(tol), None, None, None, None) => Check::Abs { value, tol },
            (Some(value), None, Some(tol), None, None, None) => Check::Rel { value, tol },
            (None, None, None, Some(lo), Some(hi), None) if lo <= hi => Check::Range { lo, hi },
            (None, None, None, None, None, Some(h)) => Check::Holds(h),
            _ => return Err(format!("cell `{}` must give value+abs, value+rel, lo+hi or holds", self.key)),
        };
        Ok(c)
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Abs { value, tol } => write!(f, "{value} ± {tol}"),
            Self::Rel { value, tol } => write!(f, "{value} ± {}%", tol * 100.0),
            Self::Range { lo, hi } => write!(f, "[{lo}, {hi}]"),
            Self::Holds(h) => write!(f, "{h}"),
        }
    }
}

impl Check {
    pub fn accepts(&self, got: &Computed) -> bool {
        match (self, got) {
            (Self::Abs { value, tol }, Computed::Number(x)) => (x - value).abs() <= *tol,
            (Self::Rel { value, tol }, Computed::Number(x)) => (x / value - 1.0).abs() <= *tol,
            (Self::Range { lo, hi }, Computed::Number(x)) => lo <= x && x <= hi,
            (Self::Holds(h), Computed::Claim(b)) => h == b,
            _ => false,
        }
    }
}

/// Reference cells by target name.
#[derive(Debug, Clone, PartialEq)]
pub struct Reference {
    pub targets: BTreeMap<String, Vec<Cell>>,
}

impl Reference {
    pub fn parse(text: &str) -> Result<Self, String> {
        let targets: BTreeMap<String, Vec<Cell>> = toml::from_str(text).map_err(|e| e.to_string())?;
        for cell in targets.values().flatten() {
            cell.check()?;
        }
        Ok(Self { targets })
    }

    pub fn builtin() -> Self {
        Self::parse(REFERENCE_TOML).expect("shipped reference table is valid")
    }

    pub fn cells(&self, target: &str) -> &[Cell] {
        self.targets.get(target).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Compares every stored cell of the exhibit's target. A key the
    /// exhibit did not compute fails.
    pub fn compare(&self, exhibit: &Exhibit) -> Vec<Comparison> {
        self.cells(exhibit.target.name())
            .iter()
            .map(|cell| {
                let check = cell.check().expect("validated on load");
                let computed = exhibit.values.get(&cell.key).copied();
                Comparison {
                    key: cell.key.clone(),
                    computed,
                    check,
                    source: cell.source,
                    pass: computed.is_some_and(|c| check.accepts(&c)),
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub key: String,
    pub computed: Option<Computed>,
    pub check: Check,
    pub source: Source,
    pub pass: bool,
}

pub const COMPARISON_HEADER: &str = "key,computed,expected,source,status";

impl Comparison {
    pub fn csv_row(&self) -> String {
        let got = self.computed.map_or_else(|| "missing".to_string(), |c| c.to_string());
        let status = if self.pass { "PASS" } else { "FAIL" };
        format!("{},{got},{},{},{status}", self.key, self.check, self.source)
    }
}
