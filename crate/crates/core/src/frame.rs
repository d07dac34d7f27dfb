//! Finite frames of opens with their Heyting structure, and booleanization.
//!
//! A frame is stored as a family of subsets of some base set, ordered by
//! inclusion and closed under intersection. Joins are least upper bounds in
//! the family, which need not be unions.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;

use crate::coverage::{saturate, Coverage, SiteOnPoset};
use crate::error::{Error, Result};

/// Index of an open within its frame.
pub type Open = usize;

const JOIN_TABLE_MAX: usize = 512;

#[derive(Clone, Debug)]
pub struct FiniteFrame {
    base_len: usize,
    opens: Vec<FixedBitSet>,
    index: HashMap<FixedBitSet, Open>,
    join_table: Option<Vec<u32>>,
}

fn canonical_cmp(a: &FixedBitSet, b: &FixedBitSet) -> std::cmp::Ordering {
    a.count_ones(..)
        .cmp(&b.count_ones(..))
        .then_with(|| a.ones().cmp(b.ones()))
}

impl FiniteFrame {
    /// Builds a frame from a family of subsets of `0..base_len` that is
    /// closed under intersection and has a top element.
    pub fn from_opens(base_len: usize, opens: Vec<FixedBitSet>) -> Result<Self> {
        if opens.is_empty() {
            return Err(Error::InvalidFrame(
                "a frame needs at least one open".into(),
            ));
        }
        let mut top = FixedBitSet::with_capacity(base_len);
        for o in &opens {
            top.union_with(o);
        }
        if !opens.contains(&top) {
            return Err(Error::InvalidFrame("family of opens has no top".into()));
        }
        let members: std::collections::HashSet<&FixedBitSet> = opens.iter().collect();
        for a in &opens {
            for b in &opens {
                let mut m = a.clone();
                m.intersect_with(b);
                if !members.contains(&m) {
                    return Err(Error::InvalidFrame(
                        "family of opens is not closed under intersection".into(),
                    ));
                }
            }
        }
        Ok(Self::from_closed_family(base_len, opens))
    }

    /// Skips validation; `opens` must be nonempty, closed under
    /// intersection, and contain a top.
    fn from_closed_family(base_len: usize, opens: Vec<FixedBitSet>) -> Self {
        let mut opens = opens;
        opens.sort_by(canonical_cmp);
        opens.dedup();
        let index: HashMap<FixedBitSet, Open> = opens
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, s)| (s, i))
            .collect();
        let mut frame = Self {
            base_len,
            opens,
            index,
            join_table: None,
        };
        if frame.len() <= JOIN_TABLE_MAX {
            let k = frame.len();
            let mut table = vec![0u32; k * k];
            for i in 0..k {
                for j in i..k {
                    let v = frame.scan_join(i, j) as u32;
                    table[i * k + j] = v;
                    table[j * k + i] = v;
                }
            }
            frame.join_table = Some(table);
        }
        frame
    }

    pub fn len(&self) -> usize {
        self.opens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.opens.is_empty()
    }

    pub fn base_len(&self) -> usize {
        self.base_len
    }

    pub fn open(&self, u: Open) -> &FixedBitSet {
        &self.opens[u]
    }

    pub fn opens(&self) -> &[FixedBitSet] {
        &self.opens
    }

    pub fn find(&self, set: &FixedBitSet) -> Option<Open> {
        self.index.get(set).copied()
    }

    pub fn bottom(&self) -> Open {
        0
    }

    pub fn top(&self) -> Open {
        self.opens.len() - 1
    }

    pub fn leq(&self, u: Open, v: Open) -> bool {
        self.opens[u].is_subset(&self.opens[v])
    }

    pub fn meet(&self, u: Open, v: Open) -> Open {
        let mut m = self.opens[u].clone();
        m.intersect_with(&self.opens[v]);
        self.index[&m]
    }

    pub fn join(&self, u: Open, v: Open) -> Open {
        match &self.join_table {
            Some(t) => t[u * self.len() + v] as Open,
            None => self.scan_join(u, v),
        }
    }

    // Least member containing both; the family is closed under
    // intersection, so the first superset by size is the least one.
    fn scan_join(&self, u: Open, v: Open) -> Open {
        let mut union = self.opens[u].clone();
        union.union_with(&self.opens[v]);
        if let Some(&w) = self.index.get(&union) {
            return w;
        }
        let start = u.max(v);
        (start..self.len())
            .find(|&w| union.is_subset(&self.opens[w]))
            .expect("top contains every open")
    }

    pub fn join_all(&self, us: impl IntoIterator<Item = Open>) -> Open {
        us.into_iter()
            .fold(self.bottom(), |acc, u| self.join(acc, u))
    }

    /// Heyting implication: the largest `w` with `u ∧ w <= v`.
    pub fn implies(&self, u: Open, v: Open) -> Open {
        if self.leq(u, v) {
            return self.top();
        }
        let (su, sv) = (&self.opens[u], &self.opens[v]);
        (0..self.len())
            .rev()
            .find(|&w| su.intersection(&self.opens[w]).all(|x| sv.contains(x)))
            .expect("bottom always qualifies")
    }

    pub fn negate(&self, u: Open) -> Open {
        self.implies(u, self.bottom())
    }

    pub fn is_regular(&self, u: Open) -> bool {
        self.negate(self.negate(u)) == u
    }

    /// `x ∨ ¬x = ⊤` and `¬¬x = x` for every element.
    pub fn is_boolean(&self) -> bool {
        (0..self.len()).all(|x| self.join(x, self.negate(x)) == self.top() && self.is_regular(x))
    }

    /// First triple violating `a ∧ (b ∨ c) = (a ∧ b) ∨ (a ∧ c)`.
    pub fn distributivity_violation(&self) -> Option<(Open, Open, Open)> {
        let k = self.len();
        for a in 0..k {
            for b in 0..k {
                for c in b..k {
                    let lhs = self.meet(a, self.join(b, c));
                    let rhs = self.join(self.meet(a, b), self.meet(a, c));
                    if lhs != rhs {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    /// First triple violating `w <= (u ⇒ v)  iff  u ∧ w <= v`.
    pub fn heyting_violation(&self) -> Option<(Open, Open, Open)> {
        let k = self.len();
        for u in 0..k {
            for v in 0..k {
                let imp = self.implies(u, v);
                for w in 0..k {
                    if self.leq(w, imp) != self.leq(self.meet(u, w), v) {
                        return Some((u, v, w));
                    }
                }
            }
        }
        None
    }

    /// Lattice laws that do not follow from the representation: joins are
    /// least upper bounds and meets greatest lower bounds.
    pub fn lattice_violation(&self) -> Option<(Open, Open)> {
        let k = self.len();
        for u in 0..k {
            for v in 0..k {
                let j = self.join(u, v);
                let m = self.meet(u, v);
                let join_ok = self.leq(u, j)
                    && self.leq(v, j)
                    && (0..k).all(|w| !(self.leq(u, w) && self.leq(v, w)) || self.leq(j, w));
                let meet_ok = self.leq(m, u)
                    && self.leq(m, v)
                    && (0..k).all(|w| !(self.leq(w, u) && self.leq(w, v)) || self.leq(w, m));
                if !join_ok || !meet_ok {
                    return Some((u, v));
                }
            }
        }
        None
    }
}

/// Enumerates all closed sets of `closure` on `0..n` in lectic order.
pub fn next_closure_all(
    n: usize,
    closure: impl Fn(&FixedBitSet) -> FixedBitSet,
    limit: Option<usize>,
) -> Result<Vec<FixedBitSet>> {
    let mut out = Vec::new();
    let mut current = closure(&FixedBitSet::with_capacity(n));
    let push = |out: &mut Vec<FixedBitSet>, s: FixedBitSet| -> Result<()> {
        if limit.is_some_and(|l| out.len() >= l) {
            return Err(Error::LimitExceeded(limit.unwrap()));
        }
        out.push(s);
        Ok(())
    };
    push(&mut out, current.clone())?;
    'outer: loop {
        let mut a = current.clone();
        for i in (0..n).rev() {
            if a.contains(i) {
                a.remove(i);
                continue;
            }
            let mut seed = a.clone();
            seed.insert(i);
            let b = closure(&seed);
            if b.ones().take_while(|&j| j < i).all(|j| a.contains(j)) {
                current = b;
                push(&mut out, current.clone())?;
                continue 'outer;
            }
        }
        return Ok(out);
    }
}

/// The frame presented by a site: its saturated downsets.
pub fn frame_of(site: &SiteOnPoset, limit: Option<usize>) -> Result<FiniteFrame> {
    frame_of_coverage(&saturate(site), limit)
}

pub fn frame_of_coverage(cov: &Coverage, limit: Option<usize>) -> Result<FiniteFrame> {
    let n = cov.base().len();
    let opens = next_closure_all(n, |s| cov.closure(s), limit)?;
    Ok(FiniteFrame::from_closed_family(n, opens))
}

/// The Boolean algebra of `¬¬`-stable opens, with joins `¬¬(u ∨ v)`.
pub fn booleanize(f: &FiniteFrame) -> FiniteFrame {
    let regular: Vec<FixedBitSet> = (0..f.len())
        .filter(|&u| f.is_regular(u))
        .map(|u| f.open(u).clone())
        .collect();
    FiniteFrame::from_closed_family(f.base_len(), regular)
}
