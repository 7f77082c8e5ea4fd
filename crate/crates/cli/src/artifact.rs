//! Self-describing output documents.
//!
//! JSON artifacts are `{"data": ..., "manifest": ...}` with keys sorted.
//! CSV artifacts start with `# key: value` comment lines (the first one holds
//! the manifest as one-line JSON) followed by a header row and data rows.
//! In both cases the manifest's checksum covers the data part only, so the
//! manifest can be embedded without a fixed point.

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    /// Extra `# key: value` lines after the manifest.
    pub meta: Vec<(String, String)>,
}

#[derive(Debug, Clone)]
pub struct Artifact {
    pub command: &'static str,
    /// Arguments that reproduce the artifact (output path removed).
    pub args: Vec<String>,
    pub params: Value,
    pub seed: Option<u64>,
    pub data: Value,
    pub table: Table,
}

#[derive(Debug, Clone, Serialize)]
struct Manifest<'a> {
    command: &'a str,
    args: &'a [String],
    params: &'a Value,
    seed: Option<u64>,
    tool: &'static str,
    version: &'static str,
    checksum: String,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

impl Artifact {
    fn manifest(&self, checksum: String) -> Manifest<'_> {
        Manifest {
            command: self.command,
            args: &self.args,
            params: &self.params,
            seed: self.seed,
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            checksum: format!("sha256:{checksum}"),
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.render_json(),
            Format::Csv => self.render_csv(),
        }
    }

    fn render_json(&self) -> String {
        // serde_json's map is ordered by key, so output is stable
        let data = serde_json::to_string(&self.data).expect("serializable");
        let manifest = serde_json::to_value(self.manifest(sha256_hex(data.as_bytes()))).expect("serializable");
        let doc = json!({ "data": self.data, "manifest": manifest });
        let mut out = serde_json::to_string_pretty(&doc).expect("serializable");
        out.push('\n');
        out
    }

    fn render_csv(&self) -> String {
        let mut body = self.table.header.join(",");
        body.push('\n');
        for row in &self.table.rows {
            body.push_str(&row.join(","));
            body.push('\n');
        }
        let manifest = serde_json::to_string(&self.manifest(sha256_hex(body.as_bytes()))).expect("serializable");
        let mut out = format!("# manifest: {manifest}\n");
        for (k, v) in &self.table.meta {
            out.push_str(&format!("# {k}: {v}\n"));
        }
        out.push_str(&body);
        out
    }
}

/// Pull the manifest back out of a rendered artifact.
pub fn read_manifest(text: &str) -> Option<Value> {
    if let Some(rest) = text.strip_prefix("# manifest: ") {
        let line = rest.lines().next()?;
        return serde_json::from_str(line).ok();
    }
    let doc: Value = serde_json::from_str(text).ok()?;
    doc.get("manifest").cloned()
}

/// `%.15g`-style formatting: 15 significant digits, `.` separator, trailing
/// zeros dropped, exponent form outside `[1e-5, 1e15)`.
pub fn fmt_num(x: f64) -> String {
    const SIG: i32 = 15;
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{:.*e}", (SIG - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..SIG).contains(&exp) {
        format!("{}e{}", trim_zeros(mantissa), exp)
    } else {
        let decimals = (SIG - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
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
