//! The pair site of partial measurement outcomes.
//!
//! Objects are pairs `(C, u)` of a context and an element of its algebra,
//! ordered by `(D, v) <= (C, u)` iff `C ⊆ D` and `v <= e(u)` in `B_D`. A family
//! covers `(C, u)` iff the members sitting at context `C` join to at least `u`.

use std::collections::{BTreeSet, HashMap};

use fixedbitset::FixedBitSet;

use crate::contexts::{spectral_presheaf, ContextPoset, Element};
use crate::coverage::{points_of_coverage, saturate, BasicCover, Coverage, SiteOnPoset};
use crate::error::{Error, Result};
use crate::ks::global_sections;
use crate::order::{ideals_of, principal_witness, FinitePoset};

/// A site whose objects are (context, element) pairs.
#[derive(Clone, Debug)]
pub struct PairSite {
    site: SiteOnPoset,
    pairs: Vec<(usize, Element)>,
    index: HashMap<(usize, Element), usize>,
}

impl PairSite {
    pub fn site(&self) -> &SiteOnPoset {
        &self.site
    }

    pub fn poset(&self) -> &FinitePoset {
        self.site.base()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// The (context, element) at an object index.
    pub fn pair(&self, x: usize) -> (usize, Element) {
        self.pairs[x]
    }

    pub fn object(&self, context: usize, element: Element) -> Option<usize> {
        self.index.get(&(context, element)).copied()
    }

    pub fn coverage(&self) -> Coverage {
        saturate(&self.site)
    }

    /// Objects whose element is `0`.
    pub fn zero_objects(&self) -> FixedBitSet {
        let mut s = FixedBitSet::with_capacity(self.len());
        s.extend((0..self.len()).filter(|&x| self.pairs[x].1 == 0));
        s
    }
}

pub fn pair_id(cp: &ContextPoset, c: usize, u: Element) -> String {
    format!("{}@{}", cp.id(c), cp.element_label(c, u))
}

/// All pairs with the pair order; covers are supplied by `covers_of`.
pub(crate) fn pair_site_with(
    cp: &ContextPoset,
    covers_of: impl Fn(&dyn Fn(usize, Element) -> usize, usize, Element) -> Vec<usize>,
) -> PairSite {
    let mut labelled: Vec<(String, (usize, Element))> = (0..cp.len())
        .flat_map(|c| {
            cp.algebra(c)
                .elements()
                .map(move |u| (pair_id(cp, c, u), (c, u)))
        })
        .collect();
    // sorted up front so that poset indices coincide with positions here
    labelled.sort();
    let (ids, pairs): (Vec<String>, Vec<(usize, Element)>) = labelled.into_iter().unzip();
    let poset = FinitePoset::from_relation(ids, |a, b| {
        let ((d, v), (c, u)) = (pairs[a], pairs[b]);
        cp.poset().leq(c, d) && cp.algebra(d).leq(v, cp.embed(c, d, u))
    })
    .expect("pair order is a partial order");
    let index: HashMap<(usize, Element), usize> =
        pairs.iter().enumerate().map(|(x, &p)| (p, x)).collect();
    let lookup = |c: usize, u: Element| index[&(c, u)];
    let covers = pairs
        .iter()
        .enumerate()
        .map(|(x, &(c, u))| BasicCover {
            root: x,
            family: covers_of(&lookup, c, u),
        })
        .collect();
    let site = SiteOnPoset::new(poset, covers).expect("cover families lie below their roots");
    PairSite { site, pairs, index }
}

/// The pMO site: `(C, u) ◁ {(C, a) : a atom <= u}`, which includes
/// `(C, 0) ◁ ∅`.
pub fn pmo_site(cp: &ContextPoset) -> PairSite {
    pair_site_with(cp, |obj, c, u| {
        cp.algebra(c)
            .atoms_below(u)
            .map(|i| obj(c, cp.algebra(c).atom(i)))
            .collect()
    })
}

fn check_pair(cp: &ContextPoset, c: usize, u: Element) -> Result<()> {
    if c >= cp.len() {
        return Err(Error::UnknownId(format!("context #{c}")));
    }
    cp.check_element(c, u)
}

/// Whether context `c` forces `u ◁ V` for the presheaf generated by
/// `family`: only the members sitting at `c` itself count.
pub fn internal_cover_check(
    cp: &ContextPoset,
    c: usize,
    u: Element,
    family: &[(usize, Element)],
) -> Result<bool> {
    check_pair(cp, c, u)?;
    let mut join = 0;
    for &(d, v) in family {
        check_pair(cp, d, v)?;
        if d == c {
            join |= v;
        }
    }
    Ok(cp.algebra(c).leq(u, join))
}

/// A point of the pMO locale: an ideal of contexts with compatible outcomes.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConsistentIdeal {
    /// `(context, atom index)`, sorted by context.
    pub outcomes: Vec<(usize, usize)>,
}

impl ConsistentIdeal {
    pub fn contexts(&self) -> impl Iterator<Item = usize> + '_ {
        self.outcomes.iter().map(|&(c, _)| c)
    }

    pub fn outcome(&self, c: usize) -> Option<usize> {
        self.outcomes
            .iter()
            .find(|&&(d, _)| d == c)
            .map(|&(_, a)| a)
    }

    /// The largest context, which exists because finite ideals are principal.
    pub fn maximum(&self, cp: &ContextPoset) -> usize {
        let set = cp.poset().set_of(self.contexts());
        principal_witness(cp.poset(), &crate::order::Downset(set)).expect("ideal is principal")
    }
}

/// All consistent ideals: for each ideal `↓C` of the inclusion order, the
/// global sections of the spectral presheaf restricted to it.
pub fn pmo_points(cp: &ContextPoset) -> Vec<ConsistentIdeal> {
    let sigma = spectral_presheaf(cp);
    let mut out = Vec::new();
    for ideal in ideals_of(cp.poset()) {
        let (sub, keep) = sigma.restricted_to(&ideal.0);
        for section in global_sections(&sub, None).expect("no limit") {
            out.push(ConsistentIdeal {
                outcomes: keep.iter().copied().zip(section).collect(),
            });
        }
    }
    out.sort();
    out
}

/// The point `{(C, u) : σ_C <= u}` of an ideal.
pub fn ideal_to_filter(cp: &ContextPoset, site: &PairSite, ideal: &ConsistentIdeal) -> FixedBitSet {
    let mut set = FixedBitSet::with_capacity(site.len());
    for &(c, a) in &ideal.outcomes {
        let atom = cp.algebra(c).atom(a);
        for u in cp.algebra(c).elements().filter(|u| u & atom != 0) {
            set.insert(site.object(c, u).expect("pair exists"));
        }
    }
    set
}

/// The ideal `{(C, σ_C) : (C, 1) ∈ τ}` of a filter, where `σ_C` is the atom
/// the filter selects at `C`.
pub fn filter_to_ideal(
    cp: &ContextPoset,
    site: &PairSite,
    filter: &FixedBitSet,
) -> std::result::Result<ConsistentIdeal, String> {
    let mut outcomes = Vec::new();
    for c in 0..cp.len() {
        let b = cp.algebra(c);
        if !filter.contains(site.object(c, b.top()).unwrap()) {
            continue;
        }
        let atoms: Vec<usize> = (0..b.atom_count())
            .filter(|&i| filter.contains(site.object(c, b.atom(i)).unwrap()))
            .collect();
        let [a] = atoms[..] else {
            return Err(format!(
                "filter selects {} atoms at `{}`",
                atoms.len(),
                cp.id(c)
            ));
        };
        outcomes.push((c, a));
    }
    let ideal = ConsistentIdeal { outcomes };
    let set = cp.poset().set_of(ideal.contexts());
    if set.is_clear() || !cp.poset().is_downset(&set) || !cp.poset().is_up_directed(&set) {
        return Err("contexts of the filter do not form an ideal".into());
    }
    let sigma = spectral_presheaf(cp);
    for &(d, b) in &ideal.outcomes {
        for &(c, a) in &ideal.outcomes {
            if cp.poset().leq(c, d) && sigma.restrict(d, c, b) != a {
                return Err(format!(
                    "outcomes at `{}` and `{}` are incompatible",
                    cp.id(c),
                    cp.id(d)
                ));
            }
        }
    }
    Ok(ideal)
}

/// Checks that the points of the pMO site and the consistent ideals are in
/// bijection through [`filter_to_ideal`] and [`ideal_to_filter`]. Returns the
/// number of points.
pub fn check_pmo_theorem(cp: &ContextPoset) -> std::result::Result<usize, String> {
    let site = pmo_site(cp);
    let points = points_of_coverage(&site.coverage());
    let ideals = pmo_points(cp);
    let mut image = BTreeSet::new();
    for pt in &points {
        let ideal = filter_to_ideal(cp, &site, pt.members())?;
        if ideal_to_filter(cp, &site, &ideal) != *pt.members() {
            return Err(format!(
                "point at `{}` does not round-trip",
                site.poset().id(pt.minimum())
            ));
        }
        if !image.insert(ideal) {
            return Err("two points map to the same ideal".into());
        }
    }
    let expected: BTreeSet<ConsistentIdeal> = ideals.into_iter().collect();
    if image != expected {
        return Err(format!(
            "{} points but {} consistent ideals",
            image.len(),
            expected.len()
        ));
    }
    Ok(points.len())
}

pub fn verify_pmo_theorem(cp: &ContextPoset) -> bool {
    check_pmo_theorem(cp).is_ok()
}
