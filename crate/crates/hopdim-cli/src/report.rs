//! Output plumbing: single-result commands emit one JSON object (or
//! key/value text behind `--pretty`), sweeps emit CSV. Everything is
//! deterministic given the flags and seed.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Serialize)]
pub struct Report<I: Serialize, R: Serialize> {
    pub schema_version: u32,
    pub command: &'static str,
    pub inputs: I,
    pub result: R,
}

impl<I: Serialize, R: Serialize> Report<I, R> {
    pub fn new(command: &'static str, inputs: I, result: R) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            command,
            inputs,
            result,
        }
    }

    fn render(&self, pretty: bool) -> String {
        if pretty {
            let value = serde_json::to_value(self).expect("serializable report");
            let mut text = String::new();
            text.push_str(&format!("command: {}\n", self.command));
            for section in ["inputs", "result"] {
                text.push_str(section);
                text.push_str(":\n");
                if let Some(map) = value.get(section).and_then(|v| v.as_object()) {
                    for (k, v) in map {
                        text.push_str(&format!("  {k}: {v}\n"));
                    }
                }
            }
            text
        } else {
            let mut json = serde_json::to_string(self).expect("serializable report");
            json.push('\n');
            json
        }
    }

    pub fn emit(&self, out: Option<&Path>, pretty: bool) -> io::Result<()> {
        write_output(&self.render(pretty), out)
    }
}

pub fn write_output(text: &str, out: Option<&Path>) -> io::Result<()> {
    match out {
        Some(path) => fs::write(path, text),
        None => io::stdout().write_all(text.as_bytes()),
    }
}

/// Fixed-precision scientific notation used for probabilities in CSV.
pub fn fmt_prob(p: f64) -> String {
    format!("{p:.8e}")
}

/// Target probabilities echo the conventional short form (`1e-6`).
pub fn fmt_target(pf: f64) -> String {
    format!("{pf:e}")
}
