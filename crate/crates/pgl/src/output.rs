//! Machine-readable emission: JSON envelopes and comment-headed CSV.
//!
//! JSON documents are one object with `meta` (the invocation) and
//! `data`. CSV documents carry the same metadata as leading `#` comment
//! lines, then a header row, then data rows. Neither contains
//! timestamps, so identical invocations emit identical bytes.

use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::error::Result;

/// Output format selector shared by all subcommands.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(format!("unknown format {other:?} (expected json or csv)")),
        }
    }
}

/// Render a `{meta, data}` JSON document.
pub fn render_json<M: Serialize, D: Serialize>(meta: &M, data: &D) -> Result<String> {
    #[derive(Serialize)]
    struct Envelope<'a, M, D> {
        meta: &'a M,
        data: &'a D,
    }
    let mut text = serde_json::to_string_pretty(&Envelope { meta, data })?;
    text.push('\n');
    Ok(text)
}

/// A CSV block: metadata comments, one header line, data rows.
#[derive(Debug, Default)]
pub struct CsvDoc {
    pub comments: Vec<String>,
    pub header: String,
    pub rows: Vec<String>,
}

impl CsvDoc {
    pub fn new(header: &str) -> Self {
        Self {
            comments: Vec::new(),
            header: header.to_string(),
            rows: Vec::new(),
        }
    }

    pub fn comment(&mut self, key: &str, value: impl std::fmt::Display) {
        self.comments.push(format!("# {key}={value}"));
    }

    pub fn row(&mut self, fields: &[String]) {
        self.rows.push(fields.join(","));
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for line in &self.comments {
            out.push_str(line);
            out.push('\n');
        }
        out.push_str(&self.header);
        out.push('\n');
        for row in &self.rows {
            out.push_str(row);
            out.push('\n');
        }
        out
    }
}

/// Shortest round-trip decimal rendering, stable across runs.
pub fn fmt_f64(v: f64) -> String {
    format!("{v}")
}

/// Write to the given path, or stdout when absent.
pub fn write_output(path: Option<&Path>, content: &str) -> Result<()> {
    match path {
        Some(path) => {
            std::fs::write(path, content)?;
            Ok(())
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(content.as_bytes())?;
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde::Deserialize;

    #[test]
    fn json_envelope_round_trips() {
        #[derive(Serialize, Deserialize, PartialEq, Debug)]
        struct Meta {
            command: String,
        }
        #[derive(Serialize, Deserialize, PartialEq, Debug)]
        struct Data {
            value: f64,
        }
        let text = render_json(
            &Meta {
                command: "solve".into(),
            },
            &Data { value: 0.25 },
        )
        .unwrap();
        #[derive(Deserialize)]
        struct Envelope {
            meta: Meta,
            data: Data,
        }
        let parsed: Envelope = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed.meta.command, "solve");
        assert_eq!(parsed.data.value, 0.25);
    }

    #[test]
    fn csv_renders_comments_header_rows() {
        let mut doc = CsvDoc::new("a,b");
        doc.comment("command", "test");
        doc.row(&[fmt_f64(1.0), fmt_f64(0.5)]);
        assert_eq!(doc.render(), "# command=test\na,b\n1,0.5\n");
    }

    #[test]
    fn float_rendering_round_trips() {
        for v in [0.1, 1.0 / 3.0, 5e-324, 1e308, 0.05] {
            let s = fmt_f64(v);
            assert_eq!(s.parse::<f64>().unwrap(), v);
        }
    }
}
