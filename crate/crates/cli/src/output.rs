//! CSV emission with stable number formatting, and the run manifest.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::CliResult;

/// Version of every CSV layout; bumped when columns change.
pub const SCHEMA_VERSION: u32 = 1;

/// Twelve significant digits, shortest of fixed or exponent notation,
/// trailing zeros removed. Missing values are empty.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        return String::new();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent notation");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..12).contains(&exp) {
        let fixed = format!("{:.*}", (11 - exp) as usize, x);
        trim_zeros(&fixed).to_string()
    } else {
        format!("{}e{exp}", trim_zeros(mantissa))
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_num).unwrap_or_default()
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[derive(Debug, Clone)]
pub struct Table {
    pub schema: &'static str,
    pub columns: &'static [&'static str],
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(schema: &'static str, columns: &'static [&'static str]) -> Self {
        Self {
            schema,
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// `# schema=<name>/<version>` followed by the header and rows.
    pub fn render(&self) -> String {
        let mut out = format!(
            "# schema={}/{}\n{}\n",
            self.schema,
            SCHEMA_VERSION,
            self.columns.join(",")
        );
        for row in &self.rows {
            let fields: Vec<String> = row.iter().map(|f| csv_field(f)).collect();
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OutputDigest {
    pub file: String,
    pub sha256: String,
}

#[derive(Debug, Serialize)]
pub struct RunManifest<P: Serialize, T: Serialize, S: Serialize> {
    pub command: String,
    pub params: P,
    pub trunc: T,
    pub settings: S,
    pub tool_version: String,
    pub timestamp: String,
    pub outputs: Vec<OutputDigest>,
}

/// Writes output files into one directory and records their digests.
pub struct RunWriter {
    dir: PathBuf,
    outputs: Vec<OutputDigest>,
}

impl RunWriter {
    pub fn new(dir: &Path) -> CliResult<Self> {
        fs::create_dir_all(dir)?;
        Ok(Self {
            dir: dir.to_path_buf(),
            outputs: Vec::new(),
        })
    }

    pub fn write(&mut self, name: &str, contents: &str) -> CliResult<()> {
        fs::write(self.dir.join(name), contents)?;
        self.outputs.push(OutputDigest {
            file: name.to_string(),
            sha256: hex::encode(Sha256::digest(contents.as_bytes())),
        });
        Ok(())
    }

    pub fn write_table(&mut self, name: &str, table: &Table) -> CliResult<()> {
        self.write(name, &table.render())
    }

    /// Writes `manifest.json`; must be the last file of the run.
    pub fn finish<P: Serialize, T: Serialize, S: Serialize>(
        self,
        command: &str,
        params: P,
        trunc: T,
        settings: S,
    ) -> CliResult<PathBuf> {
        let manifest = RunManifest {
            command: command.to_string(),
            params,
            trunc,
            settings,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
            outputs: self.outputs,
        };
        let path = self.dir.join("manifest.json");
        fs::write(&path, serde_json::to_string_pretty(&manifest)? + "\n")?;
        Ok(path)
    }
}
