use std::fs;
use std::io::Write;
use std::path::PathBuf;

use digitlab::Error;
use serde::Serialize;
use serde_json::{json, Value};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// What a command produced: a JSON record and, for tabular results, CSV
/// rows plus summary lines that go into the comment header.
pub struct Report {
    pub json: Value,
    pub csv: Option<String>,
    pub notes: Vec<String>,
    /// Default to CSV when neither --json nor --csv is given.
    pub table: bool,
}

impl Report {
    pub fn record<T: Serialize>(x: &T) -> Result<Report, Error> {
        Ok(Report { json: to_json(x)?, csv: None, notes: Vec::new(), table: false })
    }

    pub fn with_csv(mut self, csv: String) -> Report {
        self.csv = Some(csv);
        self
    }

    pub fn as_table(mut self) -> Report {
        self.table = true;
        self
    }

    pub fn note(mut self, s: impl Into<String>) -> Report {
        self.notes.push(s.into());
        self
    }
}

pub fn to_json<T: Serialize>(x: &T) -> Result<Value, Error> {
    serde_json::to_value(x).map_err(|e| Error::InvalidInput(format!("cannot serialize result: {e}")))
}

pub struct Emitter {
    pub json: bool,
    pub csv: bool,
    pub out: Option<PathBuf>,
    pub hash: String,
    pub command: String,
    pub args: Vec<String>,
}

impl Emitter {
    pub fn render(&self, r: Report) -> Result<String, Error> {
        let want_csv = self.csv || (!self.json && r.table && r.csv.is_some());
        if want_csv {
            let body = r.csv.ok_or_else(|| Error::InvalidInput(format!("`{}` has no tabular output; use --json", self.command)))?;
            let mut s = format!("# digitlab {VERSION} config {}\n", self.hash);
            s.push_str(&format!("# args: {}\n", self.args.join(" ")));
            for n in &r.notes {
                s.push_str(&format!("# {n}\n"));
            }
            s.push_str(&body);
            return Ok(s);
        }
        let v = json!({
            "tool": "digitlab",
            "version": VERSION,
            "config_hash": self.hash,
            "command": self.command,
            "args": self.args,
            "result": r.json,
        });
        let mut s = serde_json::to_string_pretty(&v).map_err(|e| Error::InvalidInput(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }

    pub fn emit(&self, r: Report) -> Result<(), Error> {
        let s = self.render(r)?;
        match &self.out {
            Some(p) => fs::write(p, s).map_err(|e| Error::Io(format!("{}: {e}", p.display()))),
            None => {
                let mut o = std::io::stdout().lock();
                o.write_all(s.as_bytes()).and_then(|_| o.flush()).map_err(|e| Error::Io(e.to_string()))
            }
        }
    }
}
