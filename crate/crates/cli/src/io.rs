use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;

use anyhow::{Context, Result};
use serde_json::Value;

use fintopo::json::parse_text;

/// Where documents come from and go to; `None` or `-` means stdio.
pub struct Io {
    pub input: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub compact: bool,
}

fn is_stdio(p: &Option<PathBuf>) -> bool {
    p.as_ref().is_none_or(|p| p.as_os_str() == "-")
}

impl Io {
    pub fn read_text(&self) -> Result<String> {
        if is_stdio(&self.input) {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s).context("reading stdin")?;
            Ok(s)
        } else {
            let p = self.input.as_ref().expect("input path");
            fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))
        }
    }

    pub fn read_json(&self) -> Result<Value> {
        Ok(parse_text(&self.read_text()?)?)
    }

    pub fn write_text(&self, text: &str) -> Result<()> {
        if is_stdio(&self.output) {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
        } else {
            let p = self.output.as_ref().expect("output path");
            fs::write(p, text).with_context(|| format!("writing {}", p.display()))?;
        }
        Ok(())
    }

    pub fn write_json(&self, v: &Value) -> Result<()> {
        let mut text = if self.compact {
            serde_json::to_string(v)?
        } else {
            serde_json::to_string_pretty(v)?
        };
        text.push('\n');
        self.write_text(&text)
    }
}
