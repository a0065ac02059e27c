//! Deterministic CSV text: a `# key = value` echo block, one header row,
//! then data rows. Floats are printed in their shortest round-trip form.

use std::fmt::Write;

use crate::observables::G2;

use super::config::RunConfig;

pub const UNDEFINED: &str = "undefined";

pub fn real(v: f64) -> String {
    format!("{v:?}")
}

pub fn g2(v: G2) -> String {
    match v {
        G2::Defined(x) => real(x),
        G2::Undefined => UNDEFINED.to_owned(),
    }
}

pub struct Table {
    text: String,
}

impl Table {
    pub fn new(config: &RunConfig, header: &[&str]) -> Self {
        let mut text = String::new();
        for line in config.echo() {
            writeln!(text, "# {line}").unwrap();
        }
        text.push_str(&header.join(","));
        text.push('\n');
        Self { text }
    }

    pub fn row(&mut self, fields: &[String]) {
        self.text.push_str(&fields.join(","));
        self.text.push('\n');
    }

    pub fn finish(self) -> String {
        self.text
    }
}
