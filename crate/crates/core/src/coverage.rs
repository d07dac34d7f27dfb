//! Grothendieck topologies on finite posets, presented by basic covering
//! families, and their points.
//!
//! A cover of `x` is a sieve: a down-closed subset of `↓x`. The topology
//! generated by a list of basic covers `x ◁ F` is the least one containing the
//! sieves `↓F ∩ ↓x`. It is decided through its closure operator on downsets:
//! a downset `U` is saturated when `↓G ∩ ↓y ⊆ U` implies `y ∈ U` for every
//! basic cover `x ◁ G` and every `y <= x`, and a sieve `S` covers `x` iff `x`
//! lies in the least saturated downset containing `S`.

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::order::FinitePoset;

/// A basic covering family `root ◁ family`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BasicCover {
    pub root: usize,
    pub family: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sieve {
    root: usize,
    members: FixedBitSet,
}

impl Sieve {
    /// Validates that `members` is down-closed and lies inside `↓root`.
    pub fn new(p: &FinitePoset, root: usize, members: FixedBitSet) -> Result<Self> {
        if !members.is_subset(p.down(root)) {
            return Err(Error::InvalidSieve {
                root: p.id(root).to_owned(),
                reason: "members must lie below the root".into(),
            });
        }
        if !p.is_downset(&members) {
            return Err(Error::InvalidSieve {
                root: p.id(root).to_owned(),
                reason: "members are not down-closed".into(),
            });
        }
        Ok(Self { root, members })
    }

    /// The sieve on `root` generated by `family`: `↓family ∩ ↓root`.
    pub fn generated(p: &FinitePoset, root: usize, family: &[usize]) -> Self {
        let mut members = p.downset_of(&p.set_of(family.iter().copied()));
        members.intersect_with(p.down(root));
        Self { root, members }
    }

    pub fn maximal(p: &FinitePoset, root: usize) -> Self {
        Self {
            root,
            members: p.down(root).clone(),
        }
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn members(&self) -> &FixedBitSet {
        &self.members
    }

    /// Pullback along `y <= root`: the sieve `S ∩ ↓y` on `y`.
    pub fn restrict(&self, p: &FinitePoset, y: usize) -> Self {
        debug_assert!(p.leq(y, self.root));
        let mut members = self.members.clone();
        members.intersect_with(p.down(y));
        Self { root: y, members }
    }
}

#[derive(Clone, Debug)]
pub struct SiteOnPoset {
    base: FinitePoset,
    covers: Vec<BasicCover>,
}

impl SiteOnPoset {
    pub fn new(base: FinitePoset, covers: Vec<BasicCover>) -> Result<Self> {
        for c in &covers {
            if c.root >= base.len() {
                return Err(Error::UnknownId(format!("#{}", c.root)));
            }
            for &m in &c.family {
                if m >= base.len() {
                    return Err(Error::UnknownId(format!("#{m}")));
                }
                if !base.leq(m, c.root) {
                    return Err(Error::CoverNotBelowRoot {
                        root: base.id(c.root).to_owned(),
                        member: base.id(m).to_owned(),
                    });
                }
            }
        }
        let mut covers = covers;
        for c in covers.iter_mut() {
            c.family.sort_unstable();
            c.family.dedup();
        }
        covers.sort_by(|a, b| (a.root, &a.family).cmp(&(b.root, &b.family)));
        covers.dedup();
        Ok(Self { base, covers })
    }

    /// No basic covers: only maximal sieves cover.
    pub fn trivial(base: FinitePoset) -> Self {
        Self {
            base,
            covers: Vec::new(),
        }
    }

    pub fn base(&self) -> &FinitePoset {
        &self.base
    }

    pub fn basic_covers(&self) -> &[BasicCover] {
        &self.covers
    }
}

/// The saturated topology of a site, answering covering queries.
#[derive(Clone, Debug)]
pub struct Coverage {
    site: SiteOnPoset,
    /// `↓family` for each basic cover.
    generators: Vec<FixedBitSet>,
    /// For each element `y`, the basic covers whose root is above `y`.
    above: Vec<Vec<usize>>,
    sweep: Vec<usize>,
}

/// Saturates the basic covers of `site` into a Grothendieck topology.
pub fn saturate(site: &SiteOnPoset) -> Coverage {
    let p = site.base();
    let generators: Vec<FixedBitSet> = site
        .covers
        .iter()
        .map(|c| p.downset_of(&p.set_of(c.family.iter().copied())))
        .collect();
    let mut above = vec![Vec::new(); p.len()];
    for (g, c) in site.covers.iter().enumerate() {
        for y in p.down(c.root).ones() {
            above[y].push(g);
        }
    }
    Coverage {
        site: site.clone(),
        generators,
        above,
        sweep: p.linear_extension(),
    }
}

/// True iff `a ∩ b ⊆ u`.
fn meet_within(a: &FixedBitSet, b: &FixedBitSet, u: &FixedBitSet) -> bool {
    a.as_slice()
        .iter()
        .zip(b.as_slice())
        .zip(u.as_slice())
        .all(|((x, y), z)| x & y & !z == 0)
}

impl Coverage {
    pub fn site(&self) -> &SiteOnPoset {
        &self.site
    }

    pub fn base(&self) -> &FinitePoset {
        &self.site.base
    }

    /// Least saturated downset containing `set`.
    pub fn closure(&self, set: &FixedBitSet) -> FixedBitSet {
        let p = self.base();
        let mut u = p.downset_of(set);
        loop {
            let mut changed = false;
            for &y in &self.sweep {
                if u.contains(y) {
                    continue;
                }
                let forced = self.above[y]
                    .iter()
                    .any(|&g| meet_within(&self.generators[g], p.down(y), &u));
                if forced {
                    u.union_with(p.down(y));
                    changed = true;
                }
            }
            if !changed {
                return u;
            }
        }
    }

    pub fn is_saturated(&self, downset: &FixedBitSet) -> bool {
        self.base().is_downset(downset) && self.closure(downset) == *downset
    }

    pub fn covers(&self, sieve: &Sieve) -> bool {
        self.closure(&sieve.members).contains(sieve.root)
    }

    /// `root ◁ family`, read through the sieve the family generates.
    pub fn covers_family(&self, root: usize, family: &[usize]) -> bool {
        self.covers(&Sieve::generated(self.base(), root, family))
    }

    /// Whether `↑m` meets every cover of each of its members.
    ///
    /// Only the basic covers need checking: a cover `S` of `x >= m` is
    /// reached from basic covers above `m`, and `↑m` meets `S` iff `m ∈ S`.
    pub fn principal_filter_is_point(&self, m: usize) -> bool {
        self.above[m]
            .iter()
            .all(|&g| self.generators[g].contains(m))
    }

    /// Whether an arbitrary subset is a completely prime filter.
    pub fn is_point(&self, set: &FixedBitSet) -> bool {
        let p = self.base();
        if set.is_clear() || !p.is_upset(set) || !p.is_down_directed(set) {
            return false;
        }
        set.ones().all(|a| {
            self.above[a].iter().all(|&g| {
                let mut hit = self.generators[g].clone();
                hit.intersect_with(p.down(a));
                !hit.is_disjoint(set)
            })
        })
    }

    /// The basic covers stabilized under restriction, as a site. Saturating
    /// this site again yields the same topology.
    pub fn as_site(&self) -> SiteOnPoset {
        let p = self.base();
        let mut covers = Vec::new();
        for (g, c) in self.site.covers.iter().enumerate() {
            for y in p.down(c.root).ones() {
                let mut s = self.generators[g].clone();
                s.intersect_with(p.down(y));
                covers.push(BasicCover {
                    root: y,
                    family: s.ones().collect(),
                });
            }
        }
        SiteOnPoset::new(p.clone(), covers).expect("restricted covers stay below their roots")
    }
}

/// A point of a site: inhabited, up-closed, down-directed, and meeting every
/// cover of each of its members.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CompletelyPrimeFilter {
    minimum: usize,
    members: FixedBitSet,
}

impl CompletelyPrimeFilter {
    /// The least element; finite filters are principal.
    pub fn minimum(&self) -> usize {
        self.minimum
    }

    pub fn members(&self) -> &FixedBitSet {
        &self.members
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.contains(x)
    }
}

/// All points, ordered by their minimum element.
pub fn points_of(site: &SiteOnPoset) -> Vec<CompletelyPrimeFilter> {
    points_of_coverage(&saturate(site))
}

pub fn points_of_coverage(cov: &Coverage) -> Vec<CompletelyPrimeFilter> {
    let p = cov.base();
    (0..p.len())
        .filter(|&m| cov.principal_filter_is_point(m))
        .map(|m| CompletelyPrimeFilter {
            minimum: m,
            members: p.up(m).clone(),
        })
        .collect()
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::order::proptests::arb_poset;
    use proptest::prelude::*;
    use std::collections::HashSet;

    /// Independent oracle: the least Grothendieck topology containing the
    /// generated sieves, computed by a fixpoint over every (root, sieve) pair.
    pub(crate) fn exhaustive_topology(site: &SiteOnPoset) -> HashSet<(usize, FixedBitSet)> {
        let p = site.base();
        let n = p.len();
        let mut sieves: Vec<Vec<FixedBitSet>> = vec![Vec::new(); n];
        for (x, bucket) in sieves.iter_mut().enumerate() {
            let below: Vec<usize> = p.down(x).ones().collect();
            for mask in 0u64..(1 << below.len()) {
                let s = p.set_of(
                    below
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| mask & (1 << i) != 0)
                        .map(|(_, &e)| e),
                );
                if p.is_downset(&s) {
                    bucket.push(s);
                }
            }
        }
        let mut cov: HashSet<(usize, FixedBitSet)> = HashSet::new();
        for x in 0..n {
            cov.insert((x, p.down(x).clone()));
        }
        for c in site.basic_covers() {
            cov.insert((c.root, Sieve::generated(p, c.root, &c.family).members));
        }
        loop {
            let before = cov.len();
            let current: Vec<(usize, FixedBitSet)> = cov.iter().cloned().collect();
            for (x, s) in &current {
                // stability
                for y in p.down(*x).ones() {
                    let mut r = s.clone();
                    r.intersect_with(p.down(y));
                    cov.insert((y, r));
                }
            }
            for x in 0..n {
                let covering: Vec<FixedBitSet> = cov
                    .iter()
                    .filter(|(r, _)| *r == x)
                    .map(|(_, s)| s.clone())
                    .collect();
                for cand in &sieves[x] {
                    if cov.contains(&(x, cand.clone())) {
                        continue;
                    }
                    // transitivity: some cover S of x such that cand restricted
                    // to each y in S covers y
                    let ok = covering.iter().any(|s| {
                        s.ones().all(|y| {
                            let mut r = cand.clone();
                            r.intersect_with(p.down(y));
                            cov.contains(&(y, r))
                        })
                    });
                    if ok {
                        cov.insert((x, cand.clone()));
                    }
                }
            }
            if cov.len() == before {
                return cov;
            }
        }
    }

    pub(crate) fn all_sieves(p: &FinitePoset, x: usize) -> Vec<Sieve> {
        let below: Vec<usize> = p.down(x).ones().collect();
        (0u64..(1 << below.len()))
            .filter_map(|mask| {
                let s = p.set_of(
                    below
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| mask & (1 << i) != 0)
                        .map(|(_, &e)| e),
                );
                Sieve::new(p, x, s).ok()
            })
            .collect()
    }

    fn boolean4() -> FinitePoset {
        FinitePoset::new(
            ["0", "a", "b", "1"],
            [("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")],
        )
        .unwrap()
    }

    fn ix(p: &FinitePoset, s: &str) -> usize {
        p.index_of(s).unwrap()
    }

    fn gelfand4() -> SiteOnPoset {
        let p = boolean4();
        let (z, a, b, one) = (ix(&p, "0"), ix(&p, "a"), ix(&p, "b"), ix(&p, "1"));
        SiteOnPoset::new(
            p,
            vec![
                BasicCover {
                    root: one,
                    family: vec![a, b],
                },
                BasicCover {
                    root: a,
                    family: vec![a],
                },
                BasicCover {
                    root: b,
                    family: vec![b],
                },
                BasicCover {
                    root: z,
                    family: vec![],
                },
            ],
        )
        .unwrap()
    }

    #[test]
    fn trivial_topology_covers_only_maximal_sieves() {
        let p = boolean4();
        let cov = saturate(&SiteOnPoset::trivial(p.clone()));
        for x in 0..p.len() {
            for s in all_sieves(&p, x) {
                assert_eq!(cov.covers(&s), s.members() == p.down(x));
            }
        }
    }

    #[test]
    fn boolean_square_covers() {
        let p = boolean4();
        let (z, a, b, one) = (ix(&p, "0"), ix(&p, "a"), ix(&p, "b"), ix(&p, "1"));
        let site = SiteOnPoset::new(
            p.clone(),
            vec![
                BasicCover {
                    root: one,
                    family: vec![a, b],
                },
                BasicCover {
                    root: z,
                    family: vec![],
                },
            ],
        )
        .unwrap();
        let cov = saturate(&site);
        assert!(cov.covers_family(one, &[a, b]));
        assert!(!cov.covers(&Sieve::new(&p, a, p.set_of([z])).unwrap()));
        // restriction of 1 ◁ {a,b} to a
        let restricted = Sieve::generated(&p, one, &[a, b]).restrict(&p, a);
        assert!(restricted.members().contains(a));
        assert!(cov.covers(&restricted));
        // the empty sieve covers 0
        assert!(cov.covers(&Sieve::new(&p, z, p.empty_set()).unwrap()));
    }

    #[test]
    fn sieve_validation() {
        let p = boolean4();
        let (a, b, one) = (ix(&p, "a"), ix(&p, "b"), ix(&p, "1"));
        assert!(matches!(
            Sieve::new(&p, a, p.set_of([b])),
            Err(Error::InvalidSieve { .. })
        ));
        assert!(matches!(
            Sieve::new(&p, one, p.set_of([a])),
            Err(Error::InvalidSieve { .. })
        ));
        assert!(matches!(
            SiteOnPoset::new(
                p.clone(),
                vec![BasicCover {
                    root: a,
                    family: vec![b]
                }]
            ),
            Err(Error::CoverNotBelowRoot { .. })
        ));
    }

    #[test]
    fn antichain_points() {
        for n in 1..6 {
            let ids: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
            let p = FinitePoset::new(ids, std::iter::empty::<(String, String)>()).unwrap();
            assert_eq!(points_of(&SiteOnPoset::trivial(p)).len(), n);
        }
    }

    #[test]
    fn gelfand_square_has_the_two_atoms_as_points() {
        let site = gelfand4();
        let p = site.base().clone();
        let pts = points_of(&site);
        let mins: Vec<&str> = pts.iter().map(|f| p.id(f.minimum())).collect();
        assert_eq!(mins, vec!["a", "b"]);
        assert_eq!(p.ids_of(pts[0].members()), vec!["1", "a"]);
    }

    #[test]
    fn saturation_matches_exhaustive_fixpoint_on_square() {
        let site = gelfand4();
        let cov = saturate(&site);
        let oracle = exhaustive_topology(&site);
        let p = site.base();
        for x in 0..p.len() {
            for s in all_sieves(p, x) {
                assert_eq!(cov.covers(&s), oracle.contains(&(x, s.members().clone())));
            }
        }
    }

    fn arb_site(max: usize) -> impl Strategy<Value = SiteOnPoset> {
        arb_poset(max).prop_flat_map(|p| {
            let n = p.len();
            proptest::collection::vec((0..n, proptest::collection::vec(0..n, 0..3)), 0..4).prop_map(
                move |raw| {
                    let covers = raw
                        .into_iter()
                        .map(|(root, fam)| BasicCover {
                            root,
                            family: fam.into_iter().filter(|&m| p.leq(m, root)).collect(),
                        })
                        .collect();
                    SiteOnPoset::new(p.clone(), covers).unwrap()
                },
            )
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
        #![proptest_config(ProptestConfig::with_cases(96))]

        #[test]
        fn saturation_agrees_with_exhaustive_topology(site in arb_site(5)) {
            let cov = saturate(&site);
            let oracle = exhaustive_topology(&site);
            let p = site.base();
            for x in 0..p.len() {
                for s in all_sieves(p, x) {
                    prop_assert_eq!(cov.covers(&s), oracle.contains(&(x, s.members().clone())));
                }
            }
        }

        #[test]
        fn saturating_twice_is_idempotent(site in arb_site(6)) {
            let once = saturate(&site);
            let twice = saturate(&once.as_site());
            let p = site.base();
            for x in 0..p.len() {
                for s in all_sieves(p, x) {
                    prop_assert_eq!(once.covers(&s), twice.covers(&s));
                }
            }
        }

        #[test]
        fn closure_is_extensive_monotone_idempotent(site in arb_site(7), a in any::<u8>(), b in any::<u8>()) {
            let cov = saturate(&site);
            let p = site.base();
            let pick = |m: u8| p.set_of((0..p.len()).filter(|i| m & (1 << i) != 0));
            let (sa, mut sb) = (pick(a), pick(b));
            sb.union_with(&sa);
            let ca = cov.closure(&sa);
            prop_assert!(sa.is_subset(&ca));
            prop_assert!(ca.is_subset(&cov.closure(&sb)));
            prop_assert_eq!(cov.closure(&ca), ca);
        }

        #[test]
        fn points_match_unrestricted_filter_search(site in arb_site(6)) {
            let p = site.base();
            let oracle = exhaustive_topology(&site);
            let brute: Vec<FixedBitSet> = all_subsets(p.len())
                .filter(|f| {
                    !f.is_clear() && p.is_upset(f) && p.is_down_directed(f)
                        && oracle.iter().all(|(x, s)| !f.contains(*x) || !s.is_disjoint(f))
                })
                .collect();
            let mut fast: Vec<FixedBitSet> = points_of(&site).into_iter().map(|f| f.members).collect();
            let mut brute = brute;
            brute.sort();
            fast.sort();
            prop_assert_eq!(fast, brute);
        }
    }
}
