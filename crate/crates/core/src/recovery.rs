//! Enumeration of minimal recovering sets.

use itertools::Itertools;
use rayon::prelude::*;

use crate::code_model::CodeSpec;
use crate::error::{Error, Result};
use crate::field::spans_unit;

/// Default cap on `N` for exhaustive enumeration.
pub const MAX_ENUMERATION_NODES: usize = 24;

/// Per file, the lexicographically sorted list of minimal recovering sets.
/// Node indices are zero-based and sorted within each set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecoverySetIndex {
    sets: Vec<Vec<Vec<usize>>>,
}

impl RecoverySetIndex {
    pub fn file_count(&self) -> usize {
        self.sets.len()
    }

    pub fn sets(&self, file: usize) -> &[Vec<usize>] {
        &self.sets[file]
    }

    /// `t_i`, the number of recovering sets of `file`.
    pub fn count(&self, file: usize) -> usize {
        self.sets[file].len()
    }

    pub fn total(&self) -> usize {
        self.sets.iter().map(Vec::len).sum()
    }

    /// Position of `set` (sorted) in the list of `file`.
    pub fn position(&self, file: usize, set: &[usize]) -> Option<usize> {
        self.sets[file].binary_search_by(|s| s.as_slice().cmp(set)).ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = &[Vec<usize>]> {
        self.sets.iter().map(Vec::as_slice)
    }
}

/// Whether `file` can be decoded from the contents of `nodes`.
pub fn can_recover(code: &CodeSpec, file: usize, nodes: &[usize]) -> bool {
    assert!(file < code.k(), "file index out of range");
    assert!(nodes.iter().all(|&v| v < code.n()), "node index out of range");
    spans_unit(code.generator(), nodes, file, code.q())
}

pub fn enumerate_recovery_sets(code: &CodeSpec) -> Result<RecoverySetIndex> {
    enumerate_recovery_sets_capped(code, MAX_ENUMERATION_NODES)
}

/// Scans subsets by increasing size up to `K`, skipping supersets of sets
/// already found, so every emitted set is inclusion-minimal.
pub fn enumerate_recovery_sets_capped(code: &CodeSpec, max_nodes: usize) -> Result<RecoverySetIndex> {
    if code.n() > max_nodes {
        return Err(Error::TooLarge(format!(
            "recovering-set enumeration is capped at N = {max_nodes}, got N = {}",
            code.n()
        )));
    }
    let sets = (0..code.k())
        .into_par_iter()
        .map(|file| minimal_sets(code, file))
        .collect();
    Ok(RecoverySetIndex { sets })
}

fn minimal_sets(code: &CodeSpec, file: usize) -> Vec<Vec<usize>> {
    let mut found: Vec<Vec<usize>> = Vec::new();
    for size in 1..=code.k() {
        for subset in (0..code.n()).combinations(size) {
            let dominated = found
                .iter()
                .any(|f| f.iter().all(|v| subset.binary_search(v).is_ok()));
            if !dominated && can_recover(code, file, &subset) {
                found.push(subset);
            }
        }
    }
    found.sort();
    found
}
