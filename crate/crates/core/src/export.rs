//! Serialized forms of canonical tables: JSON (the machine interface), CSV
//! and aligned text. Entries are ordered by `(w, x)` in basis order.

use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hecke::{CanonicalTable, TableLabel};
use crate::ivmodules::ModuleBasis;
use crate::laurent::LaurentPoly;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Csv,
    Text,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "text" | "txt" => Ok(Format::Text),
            _ => Err(Error::Parse(format!("unknown output format {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Entry {
    pub x: Vec<usize>,
    pub w: Vec<usize>,
    pub poly: LaurentPoly,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableExport {
    pub label: TableLabel,
    pub system: String,
    /// Permutation of the generators; absent for tables on `W`.
    pub theta: Option<Vec<usize>>,
    pub entries: Vec<Entry>,
}

#[derive(Serialize)]
struct CsvRow<'a> {
    x: String,
    w: String,
    poly: &'a str,
}

fn word_text(word: &[usize]) -> String {
    crate::hecke::word_label(word)
}

impl TableExport {
    pub fn new(basis: &ModuleBasis, table: &CanonicalTable) -> Self {
        let mut entries = Vec::new();
        for w in 0..table.len() {
            for (x, p) in table.column(w).iter() {
                entries.push(Entry { x: basis.word(x).to_vec(), w: basis.word(w).to_vec(), poly: p.clone() });
            }
        }
        Self {
            label: table.label,
            system: basis.system_name(),
            theta: basis.theta().map(|t| t.perm().to_vec()),
            entries,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Internal(e.to_string()))
    }

    /// Columns `x,w,poly`, with words dot-separated and polynomials in text form.
    pub fn to_csv(&self) -> Result<String> {
        let mut wr = csv::Writer::from_writer(Vec::new());
        for e in &self.entries {
            let poly = e.poly.to_string();
            wr.serialize(CsvRow { x: word_text(&e.x), w: word_text(&e.w), poly: &poly })
                .map_err(|err| Error::Internal(err.to_string()))?;
        }
        let bytes = wr.into_inner().map_err(|err| Error::Internal(err.to_string()))?;
        String::from_utf8(bytes).map_err(|err| Error::Internal(err.to_string()))
    }

    pub fn to_text(&self) -> String {
        let theta = match &self.theta {
            None => String::new(),
            Some(p) => format!(" theta {p:?}"),
        };
        let mut out = format!("{} table on {}{}\n", self.label.as_str(), self.system, theta);
        let rows: Vec<(String, String, String)> =
            self.entries.iter().map(|e| (word_text(&e.x), word_text(&e.w), e.poly.to_string())).collect();
        let wx = rows.iter().map(|r| r.0.len()).max().unwrap_or(0).max(1);
        let ww = rows.iter().map(|r| r.1.len()).max().unwrap_or(0).max(1);
        for (x, w, p) in rows {
            out.push_str(&format!("{x:<wx$}  {w:<ww$}  {p}\n"));
        }
        out
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => self.to_json(),
            Format::Csv => self.to_csv(),
            Format::Text => Ok(self.to_text()),
        }
    }
}
