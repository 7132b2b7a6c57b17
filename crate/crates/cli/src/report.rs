use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::config::{ExperimentConfig, Format};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Comparison {
    /// `observed < threshold`
    Below,
    /// `observed ≤ threshold`
    AtMost,
}

/// One pass/fail check with the value it was decided on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Gate {
    pub name: String,
    pub observed: f64,
    pub threshold: f64,
    pub comparison: Comparison,
    pub pass: bool,
}

impl Gate {
    pub fn new(name: impl Into<String>, observed: f64, threshold: f64, comparison: Comparison) -> Self {
        let pass = match comparison {
            Comparison::Below => observed < threshold,
            Comparison::AtMost => observed <= threshold,
        };
        Gate {
            name: name.into(),
            observed,
            threshold,
            comparison,
            pass,
        }
    }

    pub fn below(name: impl Into<String>, observed: f64, threshold: f64) -> Self {
        Gate::new(name, observed, threshold, Comparison::Below)
    }

    pub fn at_most(name: impl Into<String>, observed: f64, threshold: f64) -> Self {
        Gate::new(name, observed, threshold, Comparison::AtMost)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub wall_clock_s: f64,
    pub stages: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    /// The configuration after defaults were filled in.
    pub config: ExperimentConfig,
    pub gates: Vec<Gate>,
    pub summary: BTreeMap<String, f64>,
    pub counts: BTreeMap<String, u64>,
    /// Human-readable reasons for failed gates.
    pub failures: Vec<String>,
    pub timings: Timings,
    /// Sorted primary sample, present with `--dump-samples`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<Vec<f64>>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.gates.iter().all(|g| g.pass)
    }

    pub fn gate(&self, name: &str) -> Option<&Gate> {
        self.gates.iter().find(|g| g.name == name)
    }

    /// The report with wall-clock data cleared, for comparing runs.
    pub fn without_timings(&self) -> Report {
        Report {
            timings: Timings::default(),
            ..self.clone()
        }
    }

    pub fn to_json(&self) -> serde_json::Result<String> {
        serde_json::to_string_pretty(self)
    }

    pub fn from_json(s: &str) -> serde_json::Result<Report> {
        serde_json::from_str(s)
    }

    /// One row per gate; with a sample dump, the `sample` and `ecdf` columns
    /// hold the sorted sample and its empirical CDF, one row per point.
    pub fn write_csv<W: Write>(&self, w: W) -> csv::Result<()> {
        let mut out = csv::Writer::from_writer(w);
        let samples = self.samples.as_deref().unwrap_or(&[]);
        let mut header = vec!["gate_name", "observed", "threshold", "pass"];
        if self.samples.is_some() {
            header.extend(["sample", "ecdf"]);
        }
        out.write_record(&header)?;
        let n = samples.len();
        for row in 0..self.gates.len().max(n) {
            let mut record = match self.gates.get(row) {
                Some(g) => vec![
                    g.name.clone(),
                    format!("{:?}", g.observed),
                    format!("{:?}", g.threshold),
                    g.pass.to_string(),
                ],
                None => vec![String::new(); 4],
            };
            if self.samples.is_some() {
                match samples.get(row) {
                    Some(x) => {
                        record.push(format!("{x:?}"));
                        record.push(format!("{:?}", (row + 1) as f64 / n as f64));
                    }
                    None => record.extend([String::new(), String::new()]),
                }
            }
            out.write_record(&record)?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn to_csv(&self) -> csv::Result<Vec<u8>> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(buf)
    }

    /// Writes the report in `format` to `path`, or to stdout.
    pub fn emit(&self, format: Format, path: Option<&Path>) -> io::Result<()> {
        let bytes = match format {
            Format::Json => {
                let mut s = self.to_json().map_err(io::Error::other)?;
                s.push('\n');
                s.into_bytes()
            }
            Format::Csv => self.to_csv().map_err(io::Error::other)?,
        };
        match path {
            Some(p) => {
                let mut f = BufWriter::new(File::create(p)?);
                f.write_all(&bytes)?;
                f.flush()
            }
            None => {
                let mut stdout = io::stdout().lock();
                stdout.write_all(&bytes)?;
                stdout.flush()
            }
        }
    }
}
