//! Tabular output as CSV (17 significant digits) or aligned text (6).

use crate::config::Format;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(usize),
    Num(f64),
    Text(String),
    Empty,
}

impl Cell {
    fn render(&self, format: Format) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Num(x) => match format {
                Format::Csv => format!("{x:.16e}"),
                Format::Table => six_significant(*x),
            },
            Cell::Text(s) => match format {
                Format::Csv => csv_quote(s),
                Format::Table => s.clone(),
            },
            Cell::Empty => String::new(),
        }
    }
}

impl From<usize> for Cell {
    fn from(i: usize) -> Self {
        Cell::Int(i)
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Empty, Cell::Num)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

fn csv_quote(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn six_significant(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    // Take the exponent after rounding so 0.9999999 prints as 1.00000.
    let scientific = format!("{x:.5e}");
    let magnitude: i32 = scientific
        .rsplit_once('e')
        .and_then(|(_, e)| e.parse().ok())
        .unwrap_or(0);
    if (-4..6).contains(&magnitude) {
        format!("{x:.*}", (5 - magnitude) as usize)
    } else {
        scientific
    }
}

/// Header, rows, and trailing `#` comment lines (warnings, mismatches).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub notes: Vec<String>,
}

impl Table {
    pub fn new(header: Vec<&'static str>) -> Self {
        Table {
            header,
            ..Table::default()
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub fn render(&self, format: Format) -> String {
        let rendered: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|row| row.iter().map(|c| c.render(format)).collect())
            .collect();
        let mut out = String::new();
        match format {
            Format::Csv => {
                out.push_str(&self.header.join(","));
                out.push('\n');
                for row in &rendered {
                    out.push_str(&row.join(","));
                    out.push('\n');
                }
            }
            Format::Table => {
                let mut widths: Vec<usize> = self.header.iter().map(|h| h.len()).collect();
                for row in &rendered {
                    for (w, cell) in widths.iter_mut().zip(row) {
                        *w = (*w).max(cell.chars().count());
                    }
                }
                let line = |cells: Vec<&str>| {
                    let padded: Vec<String> = cells
                        .iter()
                        .zip(&widths)
                        .map(|(c, w)| format!("{c:>w$}"))
                        .collect();
                    padded.join("  ").trim_end().to_string() + "\n"
                };
                out.push_str(&line(self.header.clone()));
                for row in &rendered {
                    out.push_str(&line(row.iter().map(String::as_str).collect()));
                }
            }
        }
        for note in &self.notes {
            out.push_str("# ");
            out.push_str(note);
            out.push('\n');
        }
        out
    }
}
