//! Global sections of finite presheaves and Kochen–Specker colorings of
//! block structures.

use crate::blocks::BlockStructure;
use crate::error::{Error, Result};
use crate::presheaf::Presheaf;

/// All compatible families `(x_p)_p`, as value indices per element, sorted.
///
/// Elements are assigned from the top of a linear extension down, so each
/// new value only needs checking against the values already chosen above it.
pub fn global_sections(sheaf: &Presheaf, limit: Option<usize>) -> Result<Vec<Vec<usize>>> {
    let p = sheaf.poset();
    let mut order = p.linear_extension();
    order.reverse();
    let mut chosen = vec![usize::MAX; p.len()];
    let mut out = Vec::new();

    fn go(
        sheaf: &Presheaf,
        order: &[usize],
        k: usize,
        chosen: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
        limit: Option<usize>,
    ) -> Result<()> {
        let Some(&x) = order.get(k) else {
            if limit.is_some_and(|l| out.len() >= l) {
                return Err(Error::LimitExceeded(limit.unwrap()));
            }
            out.push(chosen.clone());
            return Ok(());
        };
        let p = sheaf.poset();
        for v in 0..sheaf.value_count(x) {
            let fits = p
                .up(x)
                .ones()
                .filter(|&y| y != x)
                .all(|y| sheaf.restrict(y, x, chosen[y]) == v);
            if fits {
                chosen[x] = v;
                go(sheaf, order, k + 1, chosen, out, limit)?;
            }
        }
        chosen[x] = usize::MAX;
        Ok(())
    }

    go(sheaf, &order, 0, &mut chosen, &mut out, limit)?;
    out.sort();
    Ok(out)
}

/// A {0,1} assignment with exactly one 1 per block, given by its 1-atoms.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Coloring {
    pub ones: Vec<usize>,
}

impl Coloring {
    pub fn value(&self, atom: usize) -> bool {
        self.ones.binary_search(&atom).is_ok()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KsReport {
    pub colorable: bool,
    pub witness: Option<Coloring>,
    pub colorings: usize,
    /// Branches tried by the search; for an uncolorable structure this is
    /// the size of the exhausted search tree.
    pub nodes: u64,
    pub blocks: usize,
    pub atoms: usize,
}

struct Search<'a> {
    blocks: Vec<Vec<usize>>,
    /// Blocks containing each atom.
    member_of: Vec<Vec<usize>>,
    /// `None` unassigned.
    value: Vec<Option<bool>>,
    trail: Vec<usize>,
    nodes: u64,
    limit: Option<usize>,
    out: &'a mut Vec<Coloring>,
}

impl Search<'_> {
    fn set(&mut self, a: usize, v: bool) -> bool {
        match self.value[a] {
            Some(old) => old == v,
            None => {
                self.value[a] = Some(v);
                self.trail.push(a);
                true
            }
        }
    }

    /// Sets `a` to 1 and every atom sharing a block with it to 0.
    fn choose(&mut self, a: usize) -> bool {
        if !self.set(a, true) {
            return false;
        }
        for bi in 0..self.member_of[a].len() {
            let b = self.member_of[a][bi];
            for ai in 0..self.blocks[b].len() {
                let other = self.blocks[b][ai];
                if other != a && !self.set(other, false) {
                    return false;
                }
            }
        }
        true
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let a = self.trail.pop().unwrap();
            self.value[a] = None;
        }
    }

    fn run(&mut self, k: usize) -> Result<()> {
        let Some(block) = self.blocks.get(k).cloned() else {
            if self.limit.is_some_and(|l| self.out.len() >= l) {
                return Err(Error::LimitExceeded(self.limit.unwrap()));
            }
            let mut ones: Vec<usize> = (0..self.value.len())
                .filter(|&a| self.value[a] == Some(true))
                .collect();
            ones.sort_unstable();
            self.out.push(Coloring { ones });
            return Ok(());
        };
        if let Some(&a) = block.iter().find(|&&a| self.value[a] == Some(true)) {
            self.nodes += 1;
            let mark = self.trail.len();
            if self.choose(a) {
                self.run(k + 1)?;
            }
            self.undo(mark);
            return Ok(());
        }
        for &a in &block {
            if self.value[a].is_some() {
                continue;
            }
            self.nodes += 1;
            let mark = self.trail.len();
            if self.choose(a) {
                self.run(k + 1)?;
            }
            self.undo(mark);
        }
        Ok(())
    }
}

/// Sorted colorings together with the number of search nodes visited.
pub fn ks_search(b: &BlockStructure, limit: Option<usize>) -> Result<(Vec<Coloring>, u64)> {
    let degree = b.degrees();
    let mut blocks: Vec<Vec<usize>> = b.blocks().to_vec();
    for block in &mut blocks {
        block.sort_by_key(|&a| (std::cmp::Reverse(degree[a]), a));
    }
    blocks.sort_by_key(|block| block.len());
    let mut member_of = vec![Vec::new(); b.universe().len()];
    for (k, block) in blocks.iter().enumerate() {
        for &a in block {
            member_of[a].push(k);
        }
    }
    let mut out = Vec::new();
    let mut s = Search {
        blocks,
        member_of,
        value: vec![None; b.universe().len()],
        trail: Vec::new(),
        nodes: 0,
        limit,
        out: &mut out,
    };
    s.run(0)?;
    let nodes = s.nodes;
    out.sort();
    Ok((out, nodes))
}

/// All Kochen–Specker colorings, sorted. Works on any block structure,
/// including ones that do not form a context poset.
pub fn ks_colorings(b: &BlockStructure, limit: Option<usize>) -> Result<Vec<Coloring>> {
    ks_search(b, limit).map(|(c, _)| c)
}

pub fn ks_report(b: &BlockStructure, limit: Option<usize>) -> Result<KsReport> {
    let (colorings, nodes) = ks_search(b, limit)?;
    Ok(KsReport {
        colorable: !colorings.is_empty(),
        witness: colorings.first().cloned(),
        colorings: colorings.len(),
        nodes,
        blocks: b.blocks().len(),
        atoms: b.universe().len(),
    })
}
