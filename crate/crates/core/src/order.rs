//! Finite posets and the order-theoretic combinatorics used everywhere else:
//! downsets, ideals, maximal elements and density.
//!
//! Elements are addressed by dense indices `0..len()`. Indices follow the
//! lexicographic order of the element ids, so every enumeration that walks
//! indices in increasing order is canonically sorted.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};

/// Which of the two coexisting orders a query is evaluated in.
///
/// Context posets are stored in inclusion order (`C <= D` iff `C` is a
/// subalgebra of `D`). Sites over contexts use the refinement order, its
/// opposite: `D` refines `C` iff `C` is included in `D`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Inclusion,
    Refinement,
}

#[derive(Clone, Debug)]
pub struct FinitePoset {
    ids: Vec<String>,
    index: HashMap<String, usize>,
    /// `down[x]` holds every `y` with `y <= x`.
    down: Vec<FixedBitSet>,
    up: Vec<FixedBitSet>,
}

impl PartialEq for FinitePoset {
    fn eq(&self, other: &Self) -> bool {
        self.ids == other.ids && self.down == other.down
    }
}

impl Eq for FinitePoset {}

impl FinitePoset {
    /// Builds the reflexive-transitive closure of `leq_pairs` over `elements`.
    pub fn new<S: AsRef<str>>(
        elements: impl IntoIterator<Item = S>,
        leq_pairs: impl IntoIterator<Item = (S, S)>,
    ) -> Result<Self> {
        let raw: Vec<String> = elements
            .into_iter()
            .map(|s| s.as_ref().to_owned())
            .collect();
        let mut pos = HashMap::with_capacity(raw.len());
        for (i, id) in raw.iter().enumerate() {
            if pos.insert(id.clone(), i).is_some() {
                return Err(Error::DuplicateId(id.clone()));
            }
        }
        let n = raw.len();
        let mut rel: Vec<FixedBitSet> = (0..n)
            .map(|i| {
                let mut row = FixedBitSet::with_capacity(n);
                row.insert(i);
                row
            })
            .collect();
        for (a, b) in leq_pairs {
            let lookup = |s: &S| {
                pos.get(s.as_ref())
                    .copied()
                    .ok_or_else(|| Error::UnknownId(s.as_ref().to_owned()))
            };
            let (ia, ib) = (lookup(&a)?, lookup(&b)?);
            // rel[b] collects everything below b
            rel[ib].insert(ia);
        }
        // Warshall on rows: if k <= j then everything below k is below j.
        for k in 0..n {
            let row_k = rel[k].clone();
            for row in rel.iter_mut() {
                if row.contains(k) {
                    row.union_with(&row_k);
                }
            }
        }
        for a in 0..n {
            for b in rel[a].ones() {
                if a != b && rel[b].contains(a) {
                    let (x, y) = if raw[a] < raw[b] { (a, b) } else { (b, a) };
                    return Err(Error::AntisymmetryViolation(raw[x].clone(), raw[y].clone()));
                }
            }
        }
        Self::from_relation(raw, |a, b| rel[b].contains(a))
    }

    /// Builds a poset from an already transitive relation. `leq(a, b)` is
    /// queried with indices into `ids` as given; the result is re-indexed in
    /// canonical id order.
    pub fn from_relation(ids: Vec<String>, leq: impl Fn(usize, usize) -> bool) -> Result<Self> {
        let n = ids.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| ids[a].cmp(&ids[b]));
        for w in order.windows(2) {
            if ids[w[0]] == ids[w[1]] {
                return Err(Error::DuplicateId(ids[w[0]].clone()));
            }
        }
        let sorted: Vec<String> = order.iter().map(|&i| ids[i].clone()).collect();
        let mut down = vec![FixedBitSet::with_capacity(n); n];
        let mut up = vec![FixedBitSet::with_capacity(n); n];
        for (x, &ox) in order.iter().enumerate() {
            for (y, &oy) in order.iter().enumerate() {
                if leq(oy, ox) {
                    down[x].insert(y);
                    up[y].insert(x);
                }
            }
        }
        for x in 0..n {
            if !down[x].contains(x) {
                return Err(Error::NotAnOrder(format!(
                    "`{}` is not below itself",
                    sorted[x]
                )));
            }
            for y in down[x].ones() {
                if y != x && down[y].contains(x) {
                    return Err(Error::AntisymmetryViolation(
                        sorted[y.min(x)].clone(),
                        sorted[y.max(x)].clone(),
                    ));
                }
                if !down[y].is_subset(&down[x]) {
                    return Err(Error::NotAnOrder(format!(
                        "not transitive through `{}` <= `{}`",
                        sorted[y], sorted[x]
                    )));
                }
            }
        }
        let index = sorted
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        Ok(Self {
            ids: sorted,
            index,
            down,
            up,
        })
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn id(&self, x: usize) -> &str {
        &self.ids[x]
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn try_index_of(&self, id: &str) -> Result<usize> {
        self.index_of(id)
            .ok_or_else(|| Error::UnknownId(id.to_owned()))
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.down[b].contains(a)
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq(a, b)
    }

    pub fn leq_in(&self, dir: Direction, a: usize, b: usize) -> bool {
        match dir {
            Direction::Inclusion => self.leq(a, b),
            Direction::Refinement => self.leq(b, a),
        }
    }

    /// `{y : y <= x}`.
    pub fn down(&self, x: usize) -> &FixedBitSet {
        &self.down[x]
    }

    /// `{y : x <= y}`.
    pub fn up(&self, x: usize) -> &FixedBitSet {
        &self.up[x]
    }

    pub fn down_in(&self, dir: Direction, x: usize) -> &FixedBitSet {
        match dir {
            Direction::Inclusion => &self.down[x],
            Direction::Refinement => &self.up[x],
        }
    }

    /// The same elements with the order reversed.
    pub fn opposite(&self) -> Self {
        Self {
            ids: self.ids.clone(),
            index: self.index.clone(),
            down: self.up.clone(),
            up: self.down.clone(),
        }
    }

    /// The poset viewed in `dir`, taking `self` to be stored in inclusion order.
    pub fn oriented(&self, dir: Direction) -> Self {
        match dir {
            Direction::Inclusion => self.clone(),
            Direction::Refinement => self.opposite(),
        }
    }

    pub fn empty_set(&self) -> FixedBitSet {
        FixedBitSet::with_capacity(self.len())
    }

    pub fn full_set(&self) -> FixedBitSet {
        let mut s = self.empty_set();
        s.insert_range(..);
        s
    }

    pub fn set_of(&self, xs: impl IntoIterator<Item = usize>) -> FixedBitSet {
        let mut s = self.empty_set();
        s.extend(xs);
        s
    }

    /// Down-closure of a set of elements.
    pub fn downset_of(&self, set: &FixedBitSet) -> FixedBitSet {
        let mut out = self.empty_set();
        for x in set.ones() {
            out.union_with(&self.down[x]);
        }
        out
    }

    pub fn upset_of(&self, set: &FixedBitSet) -> FixedBitSet {
        let mut out = self.empty_set();
        for x in set.ones() {
            out.union_with(&self.up[x]);
        }
        out
    }

    pub fn is_downset(&self, set: &FixedBitSet) -> bool {
        set.ones().all(|x| self.down[x].is_subset(set))
    }

    pub fn is_upset(&self, set: &FixedBitSet) -> bool {
        set.ones().all(|x| self.up[x].is_subset(set))
    }

    /// Every pair of members has an upper bound inside the set.
    pub fn is_up_directed(&self, set: &FixedBitSet) -> bool {
        let members: Vec<usize> = set.ones().collect();
        members.iter().enumerate().all(|(i, &a)| {
            members[i..].iter().all(|&b| {
                let mut common = self.up[a].clone();
                common.intersect_with(&self.up[b]);
                !common.is_disjoint(set)
            })
        })
    }

    pub fn is_down_directed(&self, set: &FixedBitSet) -> bool {
        let members: Vec<usize> = set.ones().collect();
        members.iter().enumerate().all(|(i, &a)| {
            members[i..].iter().all(|&b| {
                let mut common = self.down[a].clone();
                common.intersect_with(&self.down[b]);
                !common.is_disjoint(set)
            })
        })
    }

    /// Greatest lower bound of `a` and `b`, if it exists.
    pub fn meet(&self, a: usize, b: usize) -> Option<usize> {
        let mut common = self.down[a].clone();
        common.intersect_with(&self.down[b]);
        common.ones().find(|&m| common.is_subset(&self.down[m]))
    }

    pub fn has_binary_meets(&self) -> bool {
        (0..self.len()).all(|a| (a..self.len()).all(|b| self.meet(a, b).is_some()))
    }

    pub fn maximal_elements(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&x| self.up[x].count_ones(..) == 1)
            .collect()
    }

    pub fn minimal_elements(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&x| self.down[x].count_ones(..) == 1)
            .collect()
    }

    /// Minimal elements of a subset.
    pub fn minimal_in(&self, set: &FixedBitSet) -> FixedBitSet {
        let mut out = self.empty_set();
        for x in set.ones() {
            if self.down[x].intersection(set).all(|y| y == x) {
                out.insert(x);
            }
        }
        out
    }

    /// Pairs `(a, b)` with `a < b` and nothing strictly between them.
    pub fn hasse_edges(&self) -> Vec<(usize, usize)> {
        let mut edges = Vec::new();
        for b in 0..self.len() {
            for a in self.down[b].ones() {
                if a == b {
                    continue;
                }
                let between = self.up[a]
                    .intersection(&self.down[b])
                    .any(|c| c != a && c != b);
                if !between {
                    edges.push((a, b));
                }
            }
        }
        edges.sort_unstable();
        edges
    }

    /// Indices ordered so that every element comes after everything below it.
    pub fn linear_extension(&self) -> Vec<usize> {
        let mut xs: Vec<usize> = (0..self.len()).collect();
        xs.sort_by_key(|&x| (self.down[x].count_ones(..), x));
        xs
    }

    /// The induced order on `set`, with the original index of each element.
    pub fn subposet(&self, set: &FixedBitSet) -> (FinitePoset, Vec<usize>) {
        let keep: Vec<usize> = set.ones().collect();
        let ids = keep.iter().map(|&x| self.ids[x].clone()).collect();
        let sub = FinitePoset::from_relation(ids, |a, b| self.leq(keep[a], keep[b]))
            .expect("induced order of a poset is a poset");
        (sub, keep)
    }

    pub fn ids_of(&self, set: &FixedBitSet) -> Vec<&str> {
        set.ones().map(|x| self.id(x)).collect()
    }
}

/// A down-closed subset of a poset.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Downset(pub FixedBitSet);

impl Downset {
    pub fn principal(p: &FinitePoset, x: usize) -> Self {
        Downset(p.down(x).clone())
    }

    pub fn members(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.ones()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.0.contains(x)
    }

    pub fn len(&self) -> usize {
        self.0.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_clear()
    }
}

/// An up-closed, down-directed, inhabited subset.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Filter(pub FixedBitSet);

impl Filter {
    pub fn new(p: &FinitePoset, set: FixedBitSet) -> Option<Self> {
        (!set.is_clear() && p.is_upset(&set) && p.is_down_directed(&set)).then_some(Filter(set))
    }

    pub fn members(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.ones()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.0.contains(x)
    }
}

/// All ideals (inhabited, up-directed downsets) of `p`.
///
/// In a finite poset each ideal has a maximum, so these are exactly the
/// principal downsets `↓x`, returned in canonical order.
pub fn ideals_of(p: &FinitePoset) -> Vec<Downset> {
    let mut ideals: Vec<Downset> = (0..p.len()).map(|x| Downset::principal(p, x)).collect();
    ideals.sort_by(|a, b| a.0.ones().cmp(b.0.ones()));
    ideals
}

/// The maximum of an inhabited directed downset.
pub fn principal_witness(p: &FinitePoset, d: &Downset) -> Result<usize> {
    if !p.is_downset(&d.0) {
        return Err(Error::NotDirected);
    }
    d.members()
        .find(|&m| d.0.is_subset(p.down(m)))
        .ok_or(Error::NotDirected)
}

pub fn maximal_elements(p: &FinitePoset) -> Vec<usize> {
    p.maximal_elements()
}

/// Whether every `q <= x` (in `dir`) has some member of `dense` below it.
pub fn is_dense_below(p: &FinitePoset, dir: Direction, x: usize, dense: &[usize]) -> bool {
    p.down_in(dir, x)
        .ones()
        .all(|q| dense.iter().any(|&d| p.leq_in(dir, d, q)))
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    fn chain2() -> FinitePoset {
        FinitePoset::new(["bot", "top"], [("bot", "top")]).unwrap()
    }

    pub(crate) fn spin() -> FinitePoset {
        FinitePoset::new(
            ["bot", "X", "Y", "Z"],
            [("bot", "X"), ("bot", "Y"), ("bot", "Z")],
        )
        .unwrap()
    }

    fn idx(p: &FinitePoset, ids: &[&str]) -> Vec<usize> {
        ids.iter().map(|s| p.index_of(s).unwrap()).collect()
    }

    #[test]
    fn singleton_is_reflexive() {
        let p = FinitePoset::new(["a"], std::iter::empty::<(&str, &str)>()).unwrap();
        assert_eq!(p.len(), 1);
        assert!(p.leq(0, 0));
    }

    #[test]
    fn two_cycle_is_rejected() {
        let err = FinitePoset::new(["a", "b"], [("a", "b"), ("b", "a")]).unwrap_err();
        assert_eq!(err, Error::AntisymmetryViolation("a".into(), "b".into()));
    }

    #[test]
    fn unknown_and_duplicate_ids() {
        assert_eq!(
            FinitePoset::new(["a"], [("a", "z")]).unwrap_err(),
            Error::UnknownId("z".into())
        );
        assert_eq!(
            FinitePoset::new(["a", "a"], std::iter::empty::<(&str, &str)>()).unwrap_err(),
            Error::DuplicateId("a".into())
        );
    }

    #[test]
    fn three_point_context_lattice_closure() {
        let p = FinitePoset::new(
            ["⊥", "M12", "M13", "M23", "T"],
            [
                ("⊥", "M12"),
                ("⊥", "M13"),
                ("⊥", "M23"),
                ("M12", "T"),
                ("M13", "T"),
                ("M23", "T"),
            ],
        )
        .unwrap();
        let bot = p.index_of("⊥").unwrap();
        let top = p.index_of("T").unwrap();
        assert!((0..5).all(|x| p.leq(bot, x) && p.leq(x, top)));
        assert_eq!(p.down(top).count_ones(..), 5);
        assert!(p.has_binary_meets());
        assert_eq!(p.maximal_elements(), vec![top]);
        assert_eq!(p.hasse_edges().len(), 6);
    }

    #[test]
    fn ideals_of_small_posets() {
        let c = chain2();
        let ideals = ideals_of(&c);
        assert_eq!(ideals.len(), 2);
        assert_eq!(c.ids_of(&ideals[0].0), vec!["bot"]);
        assert_eq!(c.ids_of(&ideals[1].0), vec!["bot", "top"]);

        let anti = FinitePoset::new(["x", "y"], std::iter::empty::<(&str, &str)>()).unwrap();
        assert_eq!(ideals_of(&anti).len(), 2);

        let s = spin();
        let got: Vec<Vec<&str>> = ideals_of(&s).iter().map(|d| s.ids_of(&d.0)).collect();
        assert_eq!(
            got,
            vec![
                vec!["X", "bot"],
                vec!["Y", "bot"],
                vec!["Z", "bot"],
                vec!["bot"],
            ]
        );
    }

    #[test]
    fn principal_witness_examples() {
        let c = chain2();
        assert_eq!(principal_witness(&c, &Downset(c.full_set())).unwrap(), 1);
        let s = spin();
        let d = Downset(s.set_of(idx(&s, &["bot", "X"])));
        assert_eq!(s.id(principal_witness(&s, &d).unwrap()), "X");
        for x in 0..s.len() {
            if s.down(x).count_ones(..) == 1 {
                assert_eq!(principal_witness(&s, &Downset(s.set_of([x]))).unwrap(), x);
            }
        }
        let not_directed = Downset(s.set_of(idx(&s, &["bot", "X", "Y"])));
        assert_eq!(
            principal_witness(&s, &not_directed),
            Err(Error::NotDirected)
        );
        assert_eq!(
            principal_witness(&s, &Downset(s.empty_set())),
            Err(Error::NotDirected)
        );
    }

    #[test]
    fn maximal_elements_examples() {
        let s = spin();
        assert_eq!(maximal_elements(&s), idx(&s, &["X", "Y", "Z"]));
        let one = FinitePoset::new(["a"], std::iter::empty::<(&str, &str)>()).unwrap();
        assert_eq!(maximal_elements(&one), vec![0]);
    }

    #[test]
    fn density_in_refinement_order() {
        let s = spin();
        let bot = s.index_of("bot").unwrap();
        let xyz = idx(&s, &["X", "Y", "Z"]);
        assert!(is_dense_below(&s, Direction::Refinement, bot, &xyz));
        assert!(!is_dense_below(&s, Direction::Refinement, bot, &xyz[..1]));
        for x in 0..s.len() {
            assert!(!is_dense_below(&s, Direction::Refinement, x, &[]));
            assert!(!is_dense_below(&s, Direction::Inclusion, x, &[]));
        }
        // in inclusion order bot is below everything, so {bot} is dense everywhere
        assert!((0..4).all(|x| is_dense_below(&s, Direction::Inclusion, x, &[bot])));
    }

    #[test]
    fn opposite_swaps_order() {
        let s = spin();
        let o = s.opposite();
        for a in 0..4 {
            for b in 0..4 {
                assert_eq!(s.leq(a, b), o.leq(b, a));
                assert_eq!(s.leq_in(Direction::Refinement, a, b), o.leq(a, b));
            }
        }
    }
}

#[cfg(test)]
pub(crate) mod proptests {
    use super::*;
    use proptest::prelude::*;

    /// Random posets on up to `max` elements: a random DAG over index order,
    /// closed transitively.
    pub(crate) fn arb_poset(max: usize) -> impl Strategy<Value = FinitePoset> {
        (1..=max).prop_flat_map(|n| {
            proptest::collection::vec(any::<bool>(), n * n).prop_map(move |bits| {
                let ids: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
                let mut pairs = Vec::new();
                for a in 0..n {
                    for b in (a + 1)..n {
                        if bits[a * n + b] {
                            pairs.push((ids[a].clone(), ids[b].clone()));
                        }
                    }
                }
                FinitePoset::new(ids.clone(), pairs).unwrap()
            })
        })
    }

    fn all_subsets(n: usize) -> impl Iterator<Item = FixedBitSet> {
        (0u32..(1 << n)).map(move |mask| {
            let mut s = FixedBitSet::with_capacity(n);
            s.extend((0..n).filter(|i| mask & (1 << i) != 0));
            s
        })
    }

    proptest! {
        #[test]
        fn ideals_are_exactly_the_principal_downsets(p in arb_poset(7)) {
            let mut brute: Vec<FixedBitSet> = all_subsets(p.len())
                .filter(|s| !s.is_clear() && p.is_downset(s) && p.is_up_directed(s))
                .collect();
            brute.sort_by(|a, b| a.ones().cmp(b.ones()));
            let ideals: Vec<FixedBitSet> = ideals_of(&p).into_iter().map(|d| d.0).collect();
            prop_assert_eq!(&ideals, &brute);
            for d in ideals_of(&p) {
                let m = principal_witness(&p, &d).unwrap();
                prop_assert_eq!(p.down(m), &d.0);
            }
        }

        #[test]
        fn density_is_monotone(p in arb_poset(7), picks in proptest::collection::vec(0usize..7, 0..5), extra in 0usize..7) {
            let dense: Vec<usize> = picks.into_iter().filter(|&d| d < p.len()).collect();
            let mut bigger = dense.clone();
            bigger.push(extra % p.len());
            for dir in [Direction::Inclusion, Direction::Refinement] {
                for x in 0..p.len() {
                    if is_dense_below(&p, dir, x, &dense) {
                        prop_assert!(is_dense_below(&p, dir, x, &bigger));
                    }
                }
            }
        }

        #[test]
        fn hasse_edges_generate_the_order(p in arb_poset(8)) {
            let n = p.len();
            let mut reach = vec![FixedBitSet::with_capacity(n); n];
            for (x, row) in reach.iter_mut().enumerate() {
                row.insert(x);
            }
            let edges = p.hasse_edges();
            loop {
                let mut changed = false;
                for &(a, b) in &edges {
                    let from_a = reach[a].clone();
                    let before = reach[b].count_ones(..);
                    reach[b].union_with(&from_a);
                    changed |= reach[b].count_ones(..) != before;
                }
                if !changed { break; }
            }
            for b in 0..n {
                prop_assert_eq!(&reach[b], p.down(b));
            }
        }
    }
}
