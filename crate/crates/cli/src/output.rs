use serde_json::{json, Map, Value};

use crate::args::Format;

pub const SCHEMA: &str = "hookparity/1";

/// Tabular result of one subcommand. Big integers and decimals are carried as
/// strings so no digits are lost in JSON.
#[derive(Debug, Clone)]
pub struct Report {
    pub command: &'static str,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
    /// Extra top-level facts; shown in plain and JSON output only.
    pub summary: Vec<(&'static str, Value)>,
}

impl Report {
    pub fn new(command: &'static str, columns: Vec<&'static str>) -> Self {
        Report {
            command,
            columns,
            rows: Vec::new(),
            summary: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn note(&mut self, key: &'static str, value: Value) {
        self.summary.push((key, value));
    }
}

/// Failure surfaced to the user with its exit code.
#[derive(Debug, Clone)]
pub struct CliError {
    pub kind: &'static str,
    pub code: i32,
    pub message: String,
}

fn cell_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

pub fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Plain => render_plain(report),
        Format::Csv => render_csv(report),
        Format::Json => render_json(report),
    }
}

fn render_plain(report: &Report) -> String {
    let cells: Vec<Vec<String>> = report
        .rows
        .iter()
        .map(|r| r.iter().map(cell_text).collect())
        .collect();
    let widths: Vec<usize> = report
        .columns
        .iter()
        .enumerate()
        .map(|(i, c)| {
            cells
                .iter()
                .map(|r| r[i].chars().count())
                .chain([c.chars().count()])
                .max()
                .unwrap_or(0)
        })
        .collect();
    let line = |items: Vec<String>| -> String {
        let padded: Vec<String> = items
            .iter()
            .zip(&widths)
            .map(|(s, &w)| format!("{s}{}", " ".repeat(w - s.chars().count())))
            .collect();
        padded.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(report.columns.iter().map(|c| c.to_string()).collect());
    for row in cells {
        out.push_str(&line(row));
    }
    for (k, v) in &report.summary {
        out.push_str(&format!("{k}: {}\n", cell_text(v)));
    }
    out
}

fn render_csv(report: &Report) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&report.columns).expect("in-memory write");
    for row in &report.rows {
        w.write_record(row.iter().map(cell_text))
            .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 cells")
}

fn render_json(report: &Report) -> String {
    let rows: Vec<Value> = report
        .rows
        .iter()
        .map(|r| {
            let obj: Map<String, Value> = report
                .columns
                .iter()
                .map(|c| c.to_string())
                .zip(r.iter().cloned())
                .collect();
            Value::Object(obj)
        })
        .collect();
    let summary: Map<String, Value> = report
        .summary
        .iter()
        .map(|(k, v)| (k.to_string(), v.clone()))
        .collect();
    let doc = json!({
        "schema": SCHEMA,
        "command": report.command,
        "columns": report.columns,
        "rows": rows,
        "summary": summary,
    });
    serde_json::to_string_pretty(&doc).expect("serializable") + "\n"
}

pub fn render_error(err: &CliError, format: Format) -> String {
    match format {
        Format::Json => {
            let doc = json!({
                "schema": SCHEMA,
                "error": { "kind": err.kind, "exit_code": err.code, "message": err.message },
            });
            serde_json::to_string_pretty(&doc).expect("serializable") + "\n"
        }
        _ => format!("error ({}): {}\n", err.kind, err.message),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut r = Report::new("demo", vec!["a", "b"]);
        r.push(vec![json!("x,y"), json!(3)]);
        r.push(vec![json!("say \"hi\""), Value::Null]);
        r.note("ok", json!(true));
        r
    }

    #[test]
    fn csv_quotes_per_rfc4180() {
        assert_eq!(
            render(&sample(), Format::Csv),
            "a,b\n\"x,y\",3\n\"say \"\"hi\"\"\",\n"
        );
    }

    #[test]
    fn json_has_schema_and_rows() {
        let v: Value = serde_json::from_str(&render(&sample(), Format::Json)).unwrap();
        assert_eq!(v["schema"], SCHEMA);
        assert_eq!(v["rows"][0]["a"], "x,y");
        assert_eq!(v["summary"]["ok"], true);
    }

    #[test]
    fn plain_aligns_columns() {
        let text = render(&sample(), Format::Plain);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "a         b");
        assert_eq!(lines[1], "x,y       3");
        assert_eq!(lines[3], "ok: true");
    }
}
