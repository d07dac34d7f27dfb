//! Named block structures used by tests, the acceptance suite and the CLI
//! examples.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use crate::blocks::BlockStructure;

fn build(universe: &[&str], blocks: &[&[&str]]) -> BlockStructure {
    BlockStructure::from_labels(universe, blocks).expect("fixture is well formed")
}

/// One block of two atoms: contexts `bot ⊂ e1|e2`.
pub fn fix_2pt() -> BlockStructure {
    single_block(2)
}

/// One block of three atoms: five contexts.
pub fn fix_3pt() -> BlockStructure {
    single_block(3)
}

/// Three disjoint two-atom blocks, like the spin observables of a qubit.
pub fn fix_spin() -> BlockStructure {
    build(
        &["x+", "x-", "y+", "y-", "z+", "z-"],
        &[&["x+", "x-"], &["y+", "y-"], &["z+", "z-"]],
    )
}

/// A single block on atoms `e1 … en`.
pub fn single_block(n: usize) -> BlockStructure {
    let universe: Vec<String> = (1..=n).map(|i| format!("e{i}")).collect();
    BlockStructure::new(universe, vec![(0..n).collect()]).expect("fixture is well formed")
}

/// Three pairwise overlapping two-atom blocks; not a valid context poset.
pub fn triangle() -> BlockStructure {
    build(&["a", "b", "c"], &[&["a", "b"], &["b", "c"], &["c", "a"]])
}

/// Eighteen vectors of R^4 in nine orthogonal bases, each vector in exactly
/// two bases (Cabello, Estebaranz and García-Alcaine). Labels spell the
/// coordinates with `m` for -1.
pub const KS_18_9: [[&str; 4]; 9] = [
    ["0001", "0010", "1100", "1m00"],
    ["0001", "0100", "1010", "10m0"],
    ["1m1m", "1mm1", "1100", "0011"],
    ["1m1m", "1111", "10m0", "010m"],
    ["0010", "0100", "1001", "100m"],
    ["1mm1", "1111", "100m", "01m0"],
    ["11m1", "111m", "1m00", "0011"],
    ["11m1", "m111", "1010", "010m"],
    ["111m", "m111", "1001", "01m0"],
];

pub fn vector_of(label: &str) -> [i32; 4] {
    let mut v = [0; 4];
    for (slot, ch) in v.iter_mut().zip(label.chars()) {
        *slot = match ch {
            '0' => 0,
            '1' => 1,
            'm' => -1,
            other => panic!("bad coordinate {other}"),
        };
    }
    v
}

pub fn cabello_18_9() -> BlockStructure {
    let universe: BTreeSet<&str> = KS_18_9.iter().flatten().copied().collect();
    let universe: Vec<&str> = universe.into_iter().collect();
    let blocks: Vec<&[&str]> = KS_18_9.iter().map(|b| &b[..]).collect();
    build(&universe, &blocks)
}

/// Every block structure with at most three blocks of at most three atoms,
/// up to renaming atoms and reordering blocks.
///
/// An atom is determined up to renaming by the set of blocks holding it, so
/// a structure on `k` blocks is a multiplicity for each nonempty subset of
/// the blocks. Overlapping and repeated blocks are included.
pub fn small_corpus() -> &'static [BlockStructure] {
    static CORPUS: OnceLock<Vec<BlockStructure>> = OnceLock::new();
    CORPUS.get_or_init(generate_corpus)
}

fn generate_corpus() -> Vec<BlockStructure> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for k in 1..=3usize {
        let masks: Vec<usize> = (1..1 << k).collect();
        let mut mult = vec![0usize; masks.len()];
        loop {
            let sizes: Vec<usize> = (0..k)
                .map(|b| {
                    masks
                        .iter()
                        .zip(&mult)
                        .filter(|(m, _)| *m >> b & 1 == 1)
                        .map(|(_, c)| c)
                        .sum()
                })
                .collect();
            if sizes.iter().all(|&s| (1..=3).contains(&s)) {
                let canon = canonical(k, &masks, &mult);
                if seen.insert(canon.clone()) {
                    out.push(realize(k, &canon));
                }
            }
            // odometer over multiplicities 0..=3
            let mut i = 0;
            while i < mult.len() && mult[i] == 3 {
                mult[i] = 0;
                i += 1;
            }
            if i == mult.len() {
                break;
            }
            mult[i] += 1;
        }
    }
    out
}

/// Sorted atom membership masks, minimized over block permutations.
fn canonical(k: usize, masks: &[usize], mult: &[usize]) -> Vec<usize> {
    let mut best: Option<Vec<usize>> = None;
    for perm in permutations(k) {
        let mut atoms: Vec<usize> = Vec::new();
        for (&m, &c) in masks.iter().zip(mult) {
            let pm = (0..k)
                .filter(|&b| m >> b & 1 == 1)
                .fold(0, |acc, b| acc | 1 << perm[b]);
            atoms.extend(std::iter::repeat_n(pm, c));
        }
        atoms.sort_unstable();
        atoms.push(1 << k); // block count marker
        if best.as_ref().is_none_or(|b| atoms < *b) {
            best = Some(atoms);
        }
    }
    best.unwrap()
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            out.push(q);
        }
    }
    out
}

fn realize(k: usize, canon: &[usize]) -> BlockStructure {
    let atoms = &canon[..canon.len() - 1];
    let universe: Vec<String> = (1..=atoms.len()).map(|i| format!("a{i}")).collect();
    let blocks = (0..k)
        .map(|b| {
            (0..atoms.len())
                .filter(|&a| atoms[a] >> b & 1 == 1)
                .collect()
        })
        .collect();
    BlockStructure::new(universe, blocks).expect("corpus structures are well formed")
}
