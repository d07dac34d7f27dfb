//! Block structures: a universe of atoms and a list of blocks, each block a
//! set of mutually orthogonal atoms summing to the unit.

use std::collections::HashMap;

use crate::error::{Error, Result};

/// Characters reserved by the context, element and pair labels.
const RESERVED: &[char] = &['|', ',', '@', '{', '}', '#', '"', '(', ')'];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockStructure {
    universe: Vec<String>,
    blocks: Vec<Vec<usize>>,
}

pub fn valid_atom_label(label: &str) -> bool {
    !label.is_empty()
        && !label
            .chars()
            .any(|c| c.is_whitespace() || c.is_control() || RESERVED.contains(&c))
}

impl BlockStructure {
    /// `blocks` index into `universe`. Atoms inside a block are sorted; block
    /// order is kept as given.
    pub fn new(universe: Vec<String>, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = HashMap::new();
        for (i, a) in universe.iter().enumerate() {
            if !valid_atom_label(a) {
                return Err(Error::InvalidBlocks(format!("invalid atom label `{a}`")));
            }
            if seen.insert(a.as_str(), i).is_some() {
                return Err(Error::InvalidBlocks(format!("atom `{a}` listed twice")));
            }
        }
        let mut used = vec![false; universe.len()];
        let mut blocks = blocks;
        for (k, block) in blocks.iter_mut().enumerate() {
            if block.is_empty() {
                return Err(Error::InvalidBlocks(format!("block {} is empty", k + 1)));
            }
            block.sort_unstable();
            let before = block.len();
            block.dedup();
            if block.len() != before {
                return Err(Error::InvalidBlocks(format!(
                    "block {} repeats an atom",
                    k + 1
                )));
            }
            for &a in block.iter() {
                if a >= universe.len() {
                    return Err(Error::InvalidBlocks(format!(
                        "block {} uses atom #{a}",
                        k + 1
                    )));
                }
                used[a] = true;
            }
        }
        if let Some(unused) = used.iter().position(|u| !u) {
            return Err(Error::InvalidBlocks(format!(
                "atom `{}` lies in no block",
                universe[unused]
            )));
        }
        Ok(Self { universe, blocks })
    }

    pub fn from_labels<S: AsRef<str>>(universe: &[S], blocks: &[&[S]]) -> Result<Self> {
        let universe: Vec<String> = universe.iter().map(|s| s.as_ref().to_owned()).collect();
        let pos: HashMap<&str, usize> = universe
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i))
            .collect();
        let blocks = blocks
            .iter()
            .map(|b| {
                b.iter()
                    .map(|a| {
                        pos.get(a.as_ref())
                            .copied()
                            .ok_or_else(|| Error::UnknownId(a.as_ref().to_owned()))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(universe, blocks)
    }

    pub fn universe(&self) -> &[String] {
        &self.universe
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn atom(&self, a: usize) -> &str {
        &self.universe[a]
    }

    /// Number of blocks containing each atom.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.universe.len()];
        for b in &self.blocks {
            for &a in b {
                deg[a] += 1;
            }
        }
        deg
    }

    /// The same structure with atoms renamed by `perm` (old index -> new
    /// index) and labels carried along.
    pub fn relabeled(&self, perm: &[usize]) -> Self {
        let mut universe = vec![String::new(); self.universe.len()];
        for (old, &new) in perm.iter().enumerate() {
            universe[new] = self.universe[old].clone();
        }
        let blocks = self
            .blocks
            .iter()
            .map(|b| {
                let mut nb: Vec<usize> = b.iter().map(|&a| perm[a]).collect();
                nb.sort_unstable();
                nb
            })
            .collect();
        Self { universe, blocks }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_malformed_structures() {
        let u = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        assert!(BlockStructure::new(u(&["a", "b"]), vec![vec![0], vec![]]).is_err());
        assert!(BlockStructure::new(u(&["a", "b"]), vec![vec![0]]).is_err());
        assert!(BlockStructure::new(u(&["a", "a"]), vec![vec![0, 1]]).is_err());
        assert!(BlockStructure::new(u(&["a|b"]), vec![vec![0]]).is_err());
        assert!(BlockStructure::new(u(&["a", "b"]), vec![vec![0, 0, 1]]).is_err());
        assert!(BlockStructure::new(u(&["x+", "x-"]), vec![vec![1, 0]]).is_ok());
    }

    #[test]
    fn degrees_count_block_memberships() {
        let b = BlockStructure::from_labels(&["a", "b", "c"], &[&["a", "b"], &["b", "c"]]).unwrap();
        assert_eq!(b.degrees(), vec![1, 2, 1]);
    }
}
