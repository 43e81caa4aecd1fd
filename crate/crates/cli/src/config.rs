//! Strict JSON system configuration.
//!
//! ```json
//! { "mu": "1", "code": { "kind": "mds", "n": 4, "k": 2 } }
//! ```

use std::path::Path;

use capregion::{make_hybrid, make_mds_systematic, make_replication, make_simplex, CodeSpec, Config, HybridSpec, Rational, Scalar};
use serde::Deserialize;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub mu: String,
    pub code: CodeEntry,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum CodeEntry {
    Replication { n: usize, copies: Vec<usize> },
    Mds { n: usize, k: usize },
    Simplex { k: usize },
    Hybrid { a: usize, b: usize, c: usize },
    Generator { q: u64, rows: Vec<Vec<u64>> },
}

impl CodeEntry {
    pub fn build(&self) -> capregion::Result<CodeSpec> {
        match self {
            Self::Replication { n, copies } => make_replication(*n, copies),
            Self::Mds { n, k } => make_mds_systematic(*n, *k),
            Self::Simplex { k } => make_simplex(*k),
            Self::Hybrid { a, b, c } => make_hybrid(HybridSpec::new(*a, *b, *c)),
            Self::Generator { q, rows } => CodeSpec::from_generator(*q, rows.clone()),
        }
    }

    /// Reads positional words such as `mds 4 2` or `hybrid 2 1 1`.
    pub fn from_words(words: &[String]) -> Result<Self, String> {
        let (kind, rest) = words.split_first().ok_or("missing code kind")?;
        let nums: Vec<usize> = rest
            .iter()
            .map(|w| w.parse().map_err(|_| format!("{w:?} is not a count")))
            .collect::<Result<_, _>>()?;
        let arity = |want: usize| {
            if nums.len() == want {
                Ok(())
            } else {
                Err(format!("`{kind}` takes {want} numbers, got {}", nums.len()))
            }
        };
        match kind.as_str() {
            "mds" => arity(2).map(|_| Self::Mds { n: nums[0], k: nums[1] }),
            "simplex" => arity(1).map(|_| Self::Simplex { k: nums[0] }),
            "hybrid" => arity(3).map(|_| Self::Hybrid {
                a: nums[0],
                b: nums[1],
                c: nums[2],
            }),
            "replication" if !nums.is_empty() => Ok(Self::Replication {
                n: nums.iter().sum(),
                copies: nums,
            }),
            other => Err(format!(
                "unknown code {other:?}; expected mds N K, simplex K, hybrid A B C or replication C1 C2 .."
            )),
        }
    }
}

pub fn parse_mu(text: &str) -> Result<Rational, String> {
    let mu = Rational::parse(text).map_err(|_| format!("field `mu`: {text:?} is not a rational number"))?;
    if mu <= Rational::from_int(0) {
        return Err(format!("field `mu`: must be positive, got {mu}"));
    }
    Ok(mu)
}

pub fn load(path: &Path) -> Result<Config, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let file: ConfigFile = serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    let mu = parse_mu(&file.mu)?;
    let code = file.code.build().map_err(|e| format!("field `code`: {e}"))?;
    Config::new(code, mu).map_err(|e| e.to_string())
}

pub fn parse_demand(text: &str) -> Result<Vec<Rational>, String> {
    text.split(',')
        .map(|part| Rational::parse(part).map_err(|_| format!("demand entry {:?} is not a rational number", part.trim())))
        .collect()
}
