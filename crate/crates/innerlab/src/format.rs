//! Model files.
//!
//! Disk models use `rotation=`, `zero=` and `atom=` lines. Half-plane models
//! use `beta=` and `mass=x,c` lines. The first key decides which one a file
//! holds. Blank lines and `#` comments are ignored.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use innerlab_core::innerfn::parse_pair;
use innerlab_core::parabolic::HalfPlaneInner;
use innerlab_core::InnerModel;

use crate::Error;

#[derive(Clone, Debug, PartialEq)]
pub enum ModelSpec {
    Disk(InnerModel),
    HalfPlane(HalfPlaneInner),
}

impl ModelSpec {
    pub fn load(path: &Path) -> Result<Self, Error> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(path.display().to_string(), e))?;
        text.parse()
    }

    pub fn disk(&self) -> Result<&InnerModel, Error> {
        match self {
            ModelSpec::Disk(f) => Ok(f),
            ModelSpec::HalfPlane(_) => Err(Error::Usage("this command needs a disk model".into())),
        }
    }

    pub fn half_plane(&self) -> Result<&HalfPlaneInner, Error> {
        match self {
            ModelSpec::HalfPlane(f) => Ok(f),
            ModelSpec::Disk(_) => Err(Error::Usage("this command needs a half-plane model".into())),
        }
    }

    /// Lossless text form.
    pub fn to_text(&self) -> String {
        match self {
            ModelSpec::Disk(f) => f.to_text(),
            ModelSpec::HalfPlane(f) => halfplane_to_text(f),
        }
    }
}

fn first_key(s: &str) -> Option<&str> {
    s.lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .and_then(|l| l.split_once('='))
        .map(|(k, _)| k.trim())
}

impl FromStr for ModelSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match first_key(s) {
            Some("beta" | "mass") => Ok(ModelSpec::HalfPlane(parse_halfplane(s)?)),
            Some(_) => Ok(ModelSpec::Disk(s.parse()?)),
            None => Err(Error::Usage("empty model description".into())),
        }
    }
}

pub fn halfplane_to_text(f: &HalfPlaneInner) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "beta={}", f.beta());
    for &(x, c) in f.atoms() {
        let _ = writeln!(s, "mass={x},{c}");
    }
    s
}

fn parse_halfplane(s: &str) -> Result<HalfPlaneInner, Error> {
    let mut beta = None;
    let mut atoms = Vec::new();
    for (lineno, line) in s.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::Usage(format!("line {}: expected key=value", lineno + 1)));
        };
        match key.trim() {
            "beta" => {
                let b: f64 = value.trim().parse().map_err(|_| Error::Usage(format!("line {}: bad β", lineno + 1)))?;
                if beta.replace(b).is_some() {
                    return Err(Error::Usage(format!("line {}: duplicate beta", lineno + 1)));
                }
            }
            "mass" => atoms.push(parse_pair(value)?),
            other => return Err(Error::Usage(format!("line {}: unknown key `{other}`", lineno + 1))),
        }
    }
    Ok(HalfPlaneInner::new(beta.unwrap_or(0.0), atoms)?)
}
