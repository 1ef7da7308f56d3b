//! Constant-amortized-time generation of unlabeled rooted trees.
//!
//! Trees are produced as canonical preorder level sequences in decreasing
//! lexicographic order, starting at the rooted path `0,1,..,n-1` and ending
//! at the rooted star `0,1,..,1` (Beyer and Hedetniemi's successor rule).

use crate::error::{Error, Result};
use crate::tree::RootedTree;

/// Largest order the enumerator accepts unless overridden.
pub const DEFAULT_ENUMERATION_CAP: usize = 16;

/// Environment variable that overrides [`DEFAULT_ENUMERATION_CAP`].
pub const CAP_ENV_VAR: &str = "LEVEL_SPECTRA_CAP";

/// Enumeration cap from `LEVEL_SPECTRA_CAP`, falling back to the default.
pub fn cap_from_env() -> usize {
    std::env::var(CAP_ENV_VAR)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .filter(|&c: &usize| c >= 1)
        .unwrap_or(DEFAULT_ENUMERATION_CAP)
}

/// Streaming iterator over canonical level sequences of order `n`.
#[derive(Debug, Clone)]
pub struct LevelSequences {
    current: Option<Vec<usize>>,
}

impl LevelSequences {
    pub fn new(n: usize, cap: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidOrder("enumeration needs n >= 1".into()));
        }
        if n > cap {
            return Err(Error::ResourceLimit(format!(
                "enumeration of order {n} exceeds the cap of {cap}"
            )));
        }
        Ok(LevelSequences {
            current: Some((0..n).collect()),
        })
    }
}

impl Iterator for LevelSequences {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.take()?;
        let mut next = out.clone();
        // p: last position deeper than level 1; q: its parent position
        if let Some(p) = next.iter().rposition(|&l| l > 1) {
            let q = next[..p]
                .iter()
                .rposition(|&l| l == next[p] - 1)
                .expect("a parent precedes every non-root vertex");
            let period = p - q;
            for i in p..next.len() {
                next[i] = next[i - period];
            }
            self.current = Some(next);
        }
        Some(out)
    }
}

/// Every rooted tree of order `n` up to root-preserving isomorphism, once.
#[derive(Debug, Clone)]
pub struct RootedTrees {
    sequences: LevelSequences,
}

impl Iterator for RootedTrees {
    type Item = RootedTree;

    fn next(&mut self) -> Option<RootedTree> {
        self.sequences.next().map(|seq| {
            RootedTree::from_level_sequence(&seq).expect("generated sequences are valid")
        })
    }
}

/// Enumerates rooted trees of order `n` with the default cap.
pub fn enumerate_rooted_trees(n: usize) -> Result<RootedTrees> {
    enumerate_rooted_trees_with_cap(n, DEFAULT_ENUMERATION_CAP)
}

pub fn enumerate_rooted_trees_with_cap(n: usize, cap: usize) -> Result<RootedTrees> {
    Ok(RootedTrees {
        sequences: LevelSequences::new(n, cap)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_four_in_sequence() {
        let seqs: Vec<Vec<usize>> = LevelSequences::new(4, 16).unwrap().collect();
        assert_eq!(
            seqs,
            vec![
                vec![0, 1, 2, 3],
                vec![0, 1, 2, 2],
                vec![0, 1, 2, 1],
                vec![0, 1, 1, 1],
            ]
        );
    }

    #[test]
    fn small_counts() {
        let counts: Vec<usize> = (1..=4)
            .map(|n| enumerate_rooted_trees(n).unwrap().count())
            .collect();
        assert_eq!(counts, vec![1, 1, 2, 4]);
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(
            enumerate_rooted_trees(17),
            Err(Error::ResourceLimit(_))
        ));
        assert!(enumerate_rooted_trees_with_cap(17, 17).is_ok());
        assert!(matches!(enumerate_rooted_trees(0), Err(Error::InvalidOrder(_))));
    }

    #[test]
    fn first_is_path_last_is_star() {
        let trees: Vec<RootedTree> = enumerate_rooted_trees(6).unwrap().collect();
        assert!(trees.first().unwrap().is_rooted_path());
        assert!(trees.last().unwrap().is_rooted_star());
    }
}
