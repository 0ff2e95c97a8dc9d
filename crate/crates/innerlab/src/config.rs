//! Experiment configs: flat `key = value` text in `[run]`, `[params]` and
//! `[model]` sections.
//!
//! ```text
//! [run]
//! command = count
//! seed = 1
//!
//! [params]
//! R = 12
//! z = 0.3,0
//!
//! [model]
//! rotation=1,0
//! zero=0,0
//! zero=0.5,0
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use innerlab_core::innerfn::parse_pair;

use crate::format::ModelSpec;
use crate::Error;

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub command: String,
    pub seed: u64,
    pub params: BTreeMap<String, String>,
    pub model: Option<ModelSpec>,
}

impl ExperimentConfig {
    pub fn new(command: &str) -> Self {
        Self { command: command.to_owned(), seed: 0, params: BTreeMap::new(), model: None }
    }

    pub fn load(path: &Path) -> Result<Self, Error> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(path.display().to_string(), e))?;
        text.parse()
    }

    pub fn set(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.params.insert(key.to_owned(), value.to_string());
        self
    }

    fn raw(&self, key: &str) -> Result<&str, Error> {
        self.params
            .get(key)
            .map(String::as_str)
            .ok_or_else(|| Error::Usage(format!("`{}` needs parameter `{key}`", self.command)))
    }

    pub fn get_str(&self, key: &str) -> Result<&str, Error> {
        self.raw(key)
    }

    pub fn get_f64(&self, key: &str) -> Result<f64, Error> {
        let v = self.raw(key)?;
        v.trim().parse().map_err(|_| Error::Usage(format!("parameter `{key}`: bad number `{v}`")))
    }

    pub fn get_usize(&self, key: &str) -> Result<usize, Error> {
        let v = self.raw(key)?;
        v.trim().parse().map_err(|_| Error::Usage(format!("parameter `{key}`: bad count `{v}`")))
    }

    pub fn get_pair(&self, key: &str) -> Result<(f64, f64), Error> {
        Ok(parse_pair(self.raw(key)?)?)
    }

    /// Comma-separated numbers.
    pub fn get_list(&self, key: &str) -> Result<Vec<f64>, Error> {
        self.raw(key)?
            .split(',')
            .map(|t| t.trim().parse().map_err(|_| Error::Usage(format!("parameter `{key}`: bad number `{t}`"))))
            .collect()
    }

    pub fn model(&self) -> Result<&ModelSpec, Error> {
        self.model.as_ref().ok_or_else(|| Error::Usage(format!("`{}` needs a model", self.command)))
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "[run]\ncommand = {}\nseed = {}", self.command, self.seed);
        if !self.params.is_empty() {
            s.push_str("\n[params]\n");
            for (k, v) in &self.params {
                let _ = writeln!(s, "{k} = {v}");
            }
        }
        if let Some(m) = &self.model {
            s.push_str("\n[model]\n");
            s.push_str(&m.to_text());
        }
        s
    }
}

impl FromStr for ExperimentConfig {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let mut section = String::new();
        let mut run: BTreeMap<String, String> = BTreeMap::new();
        let mut params = BTreeMap::new();
        let mut model_text = String::new();
        for (lineno, line) in s.lines().enumerate() {
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            if let Some(name) = trimmed.strip_prefix('[').and_then(|t| t.strip_suffix(']')) {
                section = name.trim().to_owned();
                continue;
            }
            if section == "model" {
                model_text.push_str(trimmed);
                model_text.push('\n');
                continue;
            }
            let Some((k, v)) = trimmed.split_once('=') else {
                return Err(Error::Usage(format!("config line {}: expected key = value", lineno + 1)));
            };
            let (k, v) = (k.trim().to_owned(), v.trim().to_owned());
            match section.as_str() {
                "run" => run.insert(k, v),
                "params" => params.insert(k, v),
                other => return Err(Error::Usage(format!("config line {}: unknown section `{other}`", lineno + 1))),
            };
        }
        let command = run.remove("command").ok_or_else(|| Error::Usage("config has no command".into()))?;
        let seed = match run.remove("seed") {
            Some(v) => v.parse().map_err(|_| Error::Usage(format!("bad seed `{v}`")))?,
            None => 0,
        };
        if let Some(k) = run.keys().next() {
            return Err(Error::Usage(format!("unknown run key `{k}`")));
        }
        let model = if model_text.is_empty() { None } else { Some(model_text.parse()?) };
        Ok(Self { command, seed, params, model })
    }
}
