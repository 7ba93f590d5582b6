//! CSV and JSON forms of a contour.
//!
//! CSV layout:
//!
//! ```text
//! # method,alpha_kind,alpha,x1_label,x2_label
//! # HD,total,0.000006845,hs,tp
//! component,hs,tp
//! 0,1.0,4.0
//! ...
//! ```
//!
//! Each ring is written closed (its first point repeated at the end).
//! Further `#` lines after the column header are ignored on reading.

use std::io::{BufRead, Write};

use super::{Contour, ContourMeta, ExceedanceKind, ExceedanceSpec, Method};
use crate::error::{Error, Result};
use crate::joint::AxisLabel;

pub const CSV_FIELDS: &str = "method,alpha_kind,alpha,x1_label,x2_label";

fn label_text(l: &AxisLabel) -> String {
    if l.unit.is_empty() || l.unit == "-" {
        l.name.clone()
    } else {
        format!("{} [{}]", l.name, l.unit)
    }
}

fn parse_label(s: &str) -> AxisLabel {
    match s.trim().split_once(" [") {
        Some((name, unit)) => AxisLabel::new(name, unit.trim_end_matches(']')),
        None => AxisLabel::new(s.trim(), "-"),
    }
}

impl Contour {
    pub fn write_csv(&self, mut w: impl Write) -> Result<()> {
        writeln!(w, "# {CSV_FIELDS}")?;
        writeln!(
            w,
            "# {},{},{},{},{}",
            self.method,
            self.spec.kind(),
            self.spec.alpha(),
            label_text(&self.labels[0]),
            label_text(&self.labels[1])
        )?;
        writeln!(w, "component,{},{}", self.labels[0].name, self.labels[1].name)?;
        for (k, ring) in self.components.iter().enumerate() {
            for p in ring.iter().chain(ring.first()) {
                writeln!(w, "{k},{},{}", p[0], p[1])?;
            }
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut out = Vec::new();
        self.write_csv(&mut out).expect("writing to memory");
        String::from_utf8(out).expect("CSV is UTF-8")
    }

    /// Reads the CSV layout written by [`Contour::write_csv`]. Construction
    /// details are not stored in CSV, so `meta` comes back as `Imported`.
    pub fn read_csv(r: impl BufRead) -> Result<Self> {
        let bad = |msg: String| Error::Config(format!("contour CSV: {msg}"));
        let mut lines = r.lines();
        let mut next = || -> Result<String> {
            lines.next().ok_or_else(|| bad("unexpected end of file".into()))?.map_err(Error::from)
        };
        if next()?.trim() != format!("# {CSV_FIELDS}") {
            return Err(bad("missing field header line".into()));
        }
        let head = next()?;
        let fields: Vec<&str> = head.trim_start_matches('#').trim().split(',').collect();
        let [method, kind, alpha, l1, l2] = fields[..] else {
            return Err(bad(format!("malformed header `{head}`")));
        };
        let method: Method = method.parse()?;
        let kind: ExceedanceKind = kind.parse()?;
        let alpha: f64 = alpha.parse().map_err(|_| bad(format!("bad alpha `{alpha}`")))?;
        let spec = ExceedanceSpec::new(kind, alpha)?;
        next()?;
        let mut rings: Vec<Vec<[f64; 2]>> = Vec::new();
        for line in lines {
            let line = line?;
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let v: Vec<&str> = line.split(',').collect();
            let [k, x, y] = v[..] else {
                return Err(bad(format!("malformed row `{line}`")));
            };
            let k: usize = k.trim().parse().map_err(|_| bad(format!("bad component `{k}`")))?;
            let p = [
                x.trim().parse().map_err(|_| bad(format!("bad value `{x}`")))?,
                y.trim().parse().map_err(|_| bad(format!("bad value `{y}`")))?,
            ];
            if k == rings.len() {
                rings.push(Vec::new());
            } else if k + 1 != rings.len() {
                return Err(bad(format!("component {k} out of order")));
            }
            rings[k].push(p);
        }
        for ring in &mut rings {
            if ring.len() > 1 && ring.first() == ring.last() {
                ring.pop();
            }
        }
        Contour::new(method, spec, [parse_label(l1), parse_label(l2)], rings, ContourMeta::Imported)
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Io(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("contour JSON: {e}")))
    }
}
