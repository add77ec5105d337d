//! Artifact rendering. JSON is one object with `meta` and `data`; CSV is a
//! header row plus records, preceded by `#` provenance lines.

use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{Format, RunConfig};
use crate::error::CliError;

pub const TOOL: &str = "kerr-noise";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Num(f64),
    Int(i64),
    Text(String),
    Empty,
}

impl Field {
    fn render(&self) -> String {
        match self {
            Field::Num(x) => format!("{x:.16e}"),
            Field::Int(n) => n.to_string(),
            Field::Text(s) => s.clone(),
            Field::Empty => String::new(),
        }
    }
}

impl From<f64> for Field {
    fn from(x: f64) -> Self {
        Field::Num(x)
    }
}

impl From<Option<f64>> for Field {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Field::Empty, Field::Num)
    }
}

impl From<usize> for Field {
    fn from(n: usize) -> Self {
        Field::Int(n as i64)
    }
}

impl From<&str> for Field {
    fn from(s: &str) -> Self {
        Field::Text(s.to_string())
    }
}

impl From<String> for Field {
    fn from(s: String) -> Self {
        Field::Text(s)
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Field>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Field>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

#[derive(Debug, Clone)]
pub struct Artifact {
    pub config: RunConfig,
    pub data: Value,
    pub table: Table,
    /// Extra `#` lines for the CSV form.
    pub notes: Vec<String>,
    /// Human-readable `(label, value)` lines.
    pub summary: Vec<(String, f64)>,
}

impl Artifact {
    pub fn new(config: &RunConfig, data: impl Serialize, table: Table) -> Self {
        Self {
            config: config.clone(),
            data: serde_json::to_value(data).expect("artifact data serializes"),
            table,
            notes: Vec::new(),
            summary: Vec::new(),
        }
    }

    pub fn with_summary(mut self, summary: Vec<(&str, f64)>) -> Self {
        self.summary = summary
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect();
        self
    }

    pub fn meta(&self) -> Value {
        json!({
            "tool": TOOL,
            "version": VERSION,
            "command": self.config.command.name(),
            "config": self.config,
        })
    }

    pub fn render(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Json => self.to_json(),
            Format::Csv => self.to_csv(),
        }
    }

    pub fn to_json(&self) -> Result<String, CliError> {
        let doc = json!({ "meta": self.meta(), "data": self.data });
        let mut text =
            serde_json::to_string_pretty(&doc).map_err(|e| CliError::Io(e.to_string()))?;
        text.push('\n');
        Ok(text)
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut out = String::new();
        out.push_str(&format!(
            "# {TOOL} {VERSION} {}\n",
            self.config.command.name()
        ));
        let config =
            serde_json::to_string(&self.config).map_err(|e| CliError::Io(e.to_string()))?;
        out.push_str(&format!("# config: {config}\n"));
        for note in &self.notes {
            out.push_str(&format!("# {note}\n"));
        }
        let mut writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        let io = |e: csv::Error| CliError::Io(e.to_string());
        writer.write_record(&self.table.columns).map_err(io)?;
        for row in &self.table.rows {
            writer
                .write_record(row.iter().map(Field::render))
                .map_err(io)?;
        }
        let bytes = writer
            .into_inner()
            .map_err(|e| CliError::Io(e.to_string()))?;
        out.push_str(&String::from_utf8(bytes).expect("csv output is utf-8"));
        Ok(out)
    }

    pub fn summary_text(&self) -> String {
        let width = self.summary.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        self.summary
            .iter()
            .map(|(k, v)| format!("{k:<width$}  {}\n", sig6(*v)))
            .collect()
    }
}

/// Six significant digits.
pub fn sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let mag = x.abs().log10().floor();
    if (-3.0..6.0).contains(&mag) {
        let decimals = (5.0 - mag) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.5e}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Command;

    #[test]
    fn six_digits() {
        assert_eq!(sig6(0.0202507), "0.0202507");
        assert_eq!(sig6(98.09677), "98.0968");
        assert_eq!(sig6(-16.935609), "-16.9356");
        assert_eq!(sig6(5.596652e5), "559665");
        assert_eq!(sig6(8.8333e-5), "8.83330e-5");
        assert_eq!(sig6(0.0), "0");
    }

    #[test]
    fn csv_layout() {
        let config = RunConfig::new(Command::Optimize {
            alpha: 3.0,
            kz: None,
        });
        let mut table = Table::new(&["a", "b"]);
        table.push(vec![Field::Num(0.5), Field::Text("x,y".into())]);
        let text = Artifact::new(&config, json!({}), table).to_csv().unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[0].starts_with("# kerr-noise"));
        assert!(lines[1].starts_with("# config: {"));
        assert_eq!(lines[2], "a,b");
        assert_eq!(lines[3], "5.0000000000000000e-1,\"x,y\"");
        assert!(!text.contains('\r'));
    }

    #[test]
    fn json_has_meta_and_data() {
        let config = RunConfig::new(Command::Optimize {
            alpha: 3.0,
            kz: Some(0.1),
        });
        let text = Artifact::new(&config, json!({"f": 0.1}), Table::default())
            .to_json()
            .unwrap();
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["meta"]["command"], "optimize");
        assert_eq!(v["meta"]["config"]["command"]["alpha"], 3.0);
        assert_eq!(v["data"]["f"], 0.1);
        assert_eq!(v.as_object().unwrap().len(), 2);
    }
}
