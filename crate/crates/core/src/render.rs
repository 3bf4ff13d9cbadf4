//! Deterministic renderings of kinematic tables: JSON (versioned schema),
//! CSV, LaTeX and plain text.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::invariant::FlagContext;
use crate::kinematics::{KinematicTable, TableTerm};
use crate::measures::MeasureLabel;
use crate::scalar::{Scalar, ScalarJson};

pub const TABLE_SCHEMA: &str = "flagkin.kinematic-table/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Latex,
    Text,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRecord {
    pub left: String,
    pub right: String,
    pub coefficient: ScalarJson,
    /// Same value in the text form, for readers that skip the object.
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRecord {
    pub schema: String,
    pub n: usize,
    pub p: usize,
    pub q: usize,
    pub exceptional: bool,
    pub input: String,
    pub terms: Vec<TermRecord>,
}

impl TableRecord {
    pub fn from_table(t: &KinematicTable) -> Self {
        TableRecord {
            schema: TABLE_SCHEMA.to_string(),
            n: t.ctx.n,
            p: t.ctx.p,
            q: t.ctx.q,
            exceptional: t.ctx.exceptional,
            input: t.input.to_string(),
            terms: t
                .terms
                .iter()
                .map(|x| TermRecord {
                    left: x.left.to_string(),
                    right: x.right.to_string(),
                    coefficient: x.coeff.to_json_value(),
                    text: x.coeff.to_string(),
                })
                .collect(),
        }
    }

    /// Rebuilds the table; rejects unknown schemas and inconsistent headers.
    pub fn to_table(&self) -> Result<KinematicTable> {
        if self.schema != TABLE_SCHEMA {
            return Err(Error::Parse(format!("unsupported schema `{}`", self.schema)));
        }
        let ctx = FlagContext::new(self.n, self.p)?;
        if ctx.q != self.q || ctx.exceptional != self.exceptional {
            return Err(Error::Parse("header disagrees with n and p".to_string()));
        }
        let input: MeasureLabel = self.input.parse()?;
        let terms = self
            .terms
            .iter()
            .map(|r| {
                let coeff = Scalar::try_from(r.coefficient.clone())?;
                Ok(TableTerm { left: r.left.parse()?, right: r.right.parse()?, coeff })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(KinematicTable { ctx, input, terms })
    }
}

pub fn table_json(tables: &[KinematicTable]) -> String {
    let recs: Vec<TableRecord> = tables.iter().map(TableRecord::from_table).collect();
    let mut s = if recs.len() == 1 {
        serde_json::to_string_pretty(&recs[0])
    } else {
        serde_json::to_string_pretty(&recs)
    }
    .expect("table records serialize");
    s.push('\n');
    s
}

/// Parses either a single table object or an array of them.
pub fn parse_table_json(s: &str) -> Result<Vec<KinematicTable>> {
    let v: serde_json::Value = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
    let recs: Vec<TableRecord> = if v.is_array() {
        serde_json::from_value(v)
    } else {
        serde_json::from_value(v).map(|r| vec![r])
    }
    .map_err(|e| Error::Parse(e.to_string()))?;
    recs.iter().map(TableRecord::to_table).collect()
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn table_csv(tables: &[KinematicTable]) -> String {
    let mut out = String::from("n,p,input,left,right,num,den,units\n");
    for t in tables {
        for x in &t.terms {
            let j = x.coeff.to_json_value();
            let units: Vec<String> = j.units.iter().map(|u| format!("{}^{}", u.sym, u.exp)).collect();
            let row = [
                t.ctx.n.to_string(),
                t.ctx.p.to_string(),
                t.input.to_string(),
                x.left.to_string(),
                x.right.to_string(),
                j.num,
                j.den,
                units.join(" "),
            ];
            let row: Vec<String> = row.iter().map(|f| csv_field(f)).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
    }
    out
}

pub fn label_latex(l: &MeasureLabel) -> String {
    match l {
        MeasureLabel::Phi(k, a) => format!("\\Phi_{{{k},{a}}}"),
        MeasureLabel::S(k, i) => format!("S_{{{k}}}^{{(p),{i}}}"),
        MeasureLabel::PhiEx => "\\Phi_{ex}".to_string(),
        MeasureLabel::GlobS(k) => format!("S_{{{k}}}"),
        MeasureLabel::HugWeil(k) => format!("S_{{{k}}}^{{(p)}}"),
    }
}

pub fn table_latex(tables: &[KinematicTable]) -> String {
    let mut out = String::new();
    for t in tables {
        let _ = write!(out, "% n={}, p={}\n\\begin{{align*}}\n  A({}) &= ", t.ctx.n, t.ctx.p, label_latex(&t.input));
        if t.terms.is_empty() {
            out.push('0');
        }
        for (idx, x) in t.terms.iter().enumerate() {
            let c = x.coeff.to_latex();
            let (sign, body) = match c.strip_prefix('-') {
                Some(rest) => ("-", rest.to_string()),
                None => ("+", c),
            };
            if idx > 0 {
                out.push_str(" \\\\\n  &\\quad ");
                let _ = write!(out, "{sign} ");
            } else if sign == "-" {
                out.push('-');
            }
            let _ = write!(out, "{body}\\, {} \\otimes {}", label_latex(&x.left), label_latex(&x.right));
        }
        out.push_str("\n\\end{align*}\n");
    }
    out
}

pub fn table_text(tables: &[KinematicTable]) -> String {
    tables.iter().map(|t| t.to_string()).collect::<Vec<_>>().join("\n")
}

pub fn render_tables(tables: &[KinematicTable], format: Format) -> String {
    match format {
        Format::Json => table_json(tables),
        Format::Csv => table_csv(tables),
        Format::Latex => table_latex(tables),
        Format::Text => table_text(tables),
    }
}
