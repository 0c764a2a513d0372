//! Human-readable tables of exact values.

use std::fmt::Write as _;

use clap::ValueEnum;

use crate::bernoulli::{bernoulli_number, euler_number, generalized_bernoulli, l_value, script_l};
use crate::characters::DirichletCharacter;
use crate::cyclotomic::CyclotomicElement;
use crate::rational::format_rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TableKind {
    Bernoulli,
    Euler,
    GeneralizedBernoulli,
    LValues,
    ScriptL,
}

impl TableKind {
    pub fn needs_characters(self) -> bool {
        !matches!(self, TableKind::Bernoulli | TableKind::Euler)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn render(&self) -> String {
        let mut widths: Vec<usize> = self.headers.iter().map(|h| h.chars().count()).collect();
        for row in &self.rows {
            for (w, c) in widths.iter_mut().zip(row) {
                *w = (*w).max(c.chars().count());
            }
        }
        let mut out = String::new();
        for row in std::iter::once(&self.headers).chain(&self.rows) {
            let cells: Vec<String> = row
                .iter()
                .zip(&widths)
                .map(|(c, &w)| format!("{c}{}", " ".repeat(w - c.chars().count())))
                .collect();
            let _ = writeln!(out, "{}", cells.join("  ").trim_end());
        }
        out
    }
}

fn coeffs(x: &CyclotomicElement) -> String {
    format!("[{}]", x.coeff_strings().join(", "))
}

/// Values of `kind` for each `k` (and each character, for the twisted kinds).
/// Undefined values are reported in their row.
pub fn value_tables(kind: TableKind, ks: &[u64], chars: &[DirichletCharacter]) -> Table {
    let strings = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    match kind {
        TableKind::Bernoulli => Table {
            headers: strings(&["k", "B_k"]),
            rows: ks.iter().map(|&k| vec![k.to_string(), format_rational(&bernoulli_number(k))]).collect(),
        },
        TableKind::Euler => Table {
            headers: strings(&["k", "E_k"]),
            rows: ks.iter().map(|&k| vec![k.to_string(), euler_number(k).to_string()]).collect(),
        },
        _ => {
            let name = match kind {
                TableKind::GeneralizedBernoulli => "B_{k,χ}",
                TableKind::LValues => "L(-k,χ)",
                _ => "𝓛_{k,χ}",
            };
            let mut rows = Vec::new();
            for chi in chars {
                for &k in ks {
                    let value = match kind {
                        TableKind::GeneralizedBernoulli => Ok(generalized_bernoulli(k, chi)),
                        TableKind::LValues => l_value(k, chi),
                        _ => script_l(k, chi),
                    };
                    let (shown, vector) = match value {
                        Ok(v) => (v.to_string(), coeffs(&v)),
                        Err(e) => (format!("undefined: {e}"), String::new()),
                    };
                    rows.push(vec![chi.key().to_string(), k.to_string(), shown, vector]);
                }
            }
            Table { headers: strings(&["chi", "k", name, "coordinates"]), rows }
        }
    }
}
