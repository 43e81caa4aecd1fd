//! Storage-code constructions as generator matrices over small prime fields.
//!
//! Column `j` of the `K x N` generator is the linear combination of the `K`
//! files stored on node `j`. Every constructor checks that each file is
//! recoverable from the full system before returning.

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{column_rank, inv_mod, is_prime, next_prime, spans_unit};

/// Which construction produced a [`CodeSpec`]; selects the applicable closed forms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum CodeFamily {
    Replication { copies: Vec<usize> },
    Mds,
    Simplex,
    Hybrid(HybridSpec),
    Generic,
}

/// Two-file system with `a_nodes` copies of file a, `b_nodes` copies of file b
/// and `coded_nodes` pairwise-independent coded nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HybridSpec {
    pub a_nodes: usize,
    pub b_nodes: usize,
    pub coded_nodes: usize,
}

impl HybridSpec {
    pub fn new(a_nodes: usize, b_nodes: usize, coded_nodes: usize) -> Self {
        Self {
            a_nodes,
            b_nodes,
            coded_nodes,
        }
    }

    pub fn node_count(&self) -> usize {
        self.a_nodes + self.b_nodes + self.coded_nodes
    }

    /// File a is recoverable iff a copy exists, two coded nodes exist, or a
    /// coded node can be paired with a copy of b. Symmetric for b.
    pub fn recoverable(&self) -> (bool, bool) {
        let c = self.coded_nodes;
        let a = self.a_nodes >= 1 || c >= 2 || (self.b_nodes >= 1 && c >= 1);
        let b = self.b_nodes >= 1 || c >= 2 || (self.a_nodes >= 1 && c >= 1);
        (a, b)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeSpec {
    q: u64,
    generator: Vec<Vec<u64>>,
    labels: Vec<String>,
    family: CodeFamily,
}

impl CodeSpec {
    /// Builds a code from an explicit generator (rows = files, columns = nodes).
    pub fn from_generator(q: u64, generator: Vec<Vec<u64>>) -> Result<Self> {
        Self::build(q, generator, None, CodeFamily::Generic)
    }

    fn build(
        q: u64,
        generator: Vec<Vec<u64>>,
        labels: Option<Vec<String>>,
        family: CodeFamily,
    ) -> Result<Self> {
        if !is_prime(q) {
            return Err(Error::InvalidCode(format!("field order {q} is not prime")));
        }
        let k = generator.len();
        if k == 0 {
            return Err(Error::InvalidCode("generator has no rows".into()));
        }
        let n = generator[0].len();
        if generator.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidCode("generator rows differ in length".into()));
        }
        if n < k {
            return Err(Error::InvalidCode(format!(
                "need at least as many nodes as files, got N = {n}, K = {k}"
            )));
        }
        if let Some(v) = generator.iter().flatten().find(|&&v| v >= q) {
            return Err(Error::InvalidCode(format!("entry {v} is outside GF({q})")));
        }
        let all: Vec<usize> = (0..n).collect();
        if let Some(file) = (0..k).find(|&i| !spans_unit(&generator, &all, i, q)) {
            return Err(Error::Unrecoverable(file));
        }
        let labels = labels.unwrap_or_else(|| {
            (0..n)
                .map(|j| column_label(&generator.iter().map(|r| r[j]).collect::<Vec<_>>()))
                .collect()
        });
        Ok(Self {
            q,
            generator,
            labels,
            family,
        })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// Number of files `K`.
    pub fn k(&self) -> usize {
        self.generator.len()
    }

    /// Number of nodes `N`.
    pub fn n(&self) -> usize {
        self.generator[0].len()
    }

    pub fn generator(&self) -> &[Vec<u64>] {
        &self.generator
    }

    pub fn column(&self, node: usize) -> Vec<u64> {
        self.generator.iter().map(|row| row[node]).collect()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn family(&self) -> &CodeFamily {
        &self.family
    }
}

/// Human-readable name of a stored combination, e.g. `f1+2f2`.
fn column_label(column: &[u64]) -> String {
    let terms: Vec<String> = column
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(i, &c)| {
            if c == 1 {
                format!("f{}", i + 1)
            } else {
                format!("{c}f{}", i + 1)
            }
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join("+")
    }
}

fn unit(k: usize, i: usize) -> Vec<u64> {
    (0..k).map(|r| u64::from(r == i)).collect()
}

fn from_columns(k: usize, columns: &[Vec<u64>]) -> Vec<Vec<u64>> {
    (0..k)
        .map(|r| columns.iter().map(|c| c[r]).collect())
        .collect()
}

/// Plain replication: file `i` is stored on `copies[i]` nodes.
pub fn make_replication(n: usize, copies: &[usize]) -> Result<CodeSpec> {
    if copies.is_empty() {
        return Err(Error::InvalidCode("replication needs at least one file".into()));
    }
    if let Some(file) = copies.iter().position(|&c| c == 0) {
        return Err(Error::Unrecoverable(file));
    }
    let total: usize = copies.iter().sum();
    if total != n {
        return Err(Error::InvalidCode(format!(
            "copy counts sum to {total}, expected {n} nodes"
        )));
    }
    let k = copies.len();
    let columns: Vec<Vec<u64>> = copies
        .iter()
        .enumerate()
        .flat_map(|(i, &c)| std::iter::repeat_n(unit(k, i), c))
        .collect();
    CodeSpec::build(
        2,
        from_columns(k, &columns),
        None,
        CodeFamily::Replication {
            copies: copies.to_vec(),
        },
    )
}

/// Systematic `[I | P]` MDS code with a Cauchy parity block over the smallest
/// prime `q >= n + 1`. Every `K`-subset of columns is rank-checked afterwards.
pub fn make_mds_systematic(n: usize, k: usize) -> Result<CodeSpec> {
    if k == 0 || n < k {
        return Err(Error::InvalidCode(format!(
            "MDS code needs n >= k >= 1, got ({n},{k})"
        )));
    }
    let q = next_prime(n as u64 + 1);
    let parities = n - k;
    let mut columns: Vec<Vec<u64>> = (0..k).map(|i| unit(k, i)).collect();
    // Cauchy entries 1 / (x_i - y_j) with x_i = i, y_j = k + j; each column is
    // rescaled so its first entry is 1, which preserves every minor's rank.
    for j in 0..parities {
        let y = (k + j) as u64;
        let mut col: Vec<u64> = (0..k as u64)
            .map(|x| inv_mod((x + q - y) % q, q))
            .collect();
        let scale = inv_mod(col[0], q);
        col.iter_mut().for_each(|v| *v = *v * scale % q);
        columns.push(col);
    }
    let generator = from_columns(k, &columns);
    let mut labels: Vec<String> = (1..=k).map(|i| format!("f{i}")).collect();
    labels.extend((1..=parities).map(|j| format!("p{j}")));
    let code = CodeSpec::build(q, generator, Some(labels), CodeFamily::Mds)?;
    if !is_mds(&code) {
        return Err(Error::InvalidCode(format!(
            "Cauchy construction failed the MDS rank check for ({n},{k})"
        )));
    }
    Ok(code)
}

/// Whether every `K`-subset of columns has full rank.
pub fn is_mds(code: &CodeSpec) -> bool {
    let k = code.k();
    (0..code.n())
        .combinations(k)
        .all(|cols| column_rank(code.generator(), &cols, code.q()) == k)
}

/// Binary simplex code: all nonzero `k`-bit columns in increasing binary
/// value, with row 0 holding the most significant bit.
pub fn make_simplex(k: usize) -> Result<CodeSpec> {
    if !(2..=12).contains(&k) {
        return Err(Error::InvalidCode(format!(
            "simplex code needs 2 <= k <= 12, got {k}"
        )));
    }
    let n = (1usize << k) - 1;
    let columns: Vec<Vec<u64>> = (1..=n)
        .map(|v| (0..k).map(|r| ((v >> (k - 1 - r)) & 1) as u64).collect())
        .collect();
    CodeSpec::build(2, from_columns(k, &columns), None, CodeFamily::Simplex)
}

/// Two-file hybrid: `A` columns `e1`, `B` columns `e2`, then coded columns
/// `(1, i)` for `i = 1..=C` over the smallest prime `q > C + 1`.
pub fn make_hybrid(spec: HybridSpec) -> Result<CodeSpec> {
    let (a_ok, b_ok) = spec.recoverable();
    if !a_ok {
        return Err(Error::Unrecoverable(0));
    }
    if !b_ok {
        return Err(Error::Unrecoverable(1));
    }
    let q = next_prime(spec.coded_nodes as u64 + 2);
    let mut columns = Vec::with_capacity(spec.node_count());
    columns.extend(std::iter::repeat_n(vec![1, 0], spec.a_nodes));
    columns.extend(std::iter::repeat_n(vec![0, 1], spec.b_nodes));
    columns.extend((1..=spec.coded_nodes as u64).map(|i| vec![1, i]));
    CodeSpec::build(q, from_columns(2, &columns), None, CodeFamily::Hybrid(spec))
}
