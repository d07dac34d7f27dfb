//! The dense (double negation) topology, ¬¬-sheafification of
//! subpresheaves, the ¬¬-Bohrification, and the site of measurement
//! outcomes.
//!
//! Formulas here use the refinement order on contexts: `D <= C` means `D`
//! refines (contains) `C`.

use std::collections::BTreeSet;

use fixedbitset::FixedBitSet;

use crate::contexts::{ContextPoset, Element, ElementKey};
use crate::coverage::{points_of_coverage, saturate, BasicCover, Coverage, SiteOnPoset};
use crate::error::Result;
use crate::frame::frame_of_coverage;
use crate::order::{Direction, FinitePoset};
use crate::pairs::{pair_site_with, PairSite};
use crate::presheaf::{Presheaf, Subpresheaf};

/// The dense topology on `p` read in direction `dir`.
///
/// A sieve on `x` is dense iff it contains every minimal element below `x`,
/// so `x ◁ min(↓x)` generates the whole topology.
pub fn dense_site(p: &FinitePoset, dir: Direction) -> SiteOnPoset {
    let base = p.oriented(dir);
    let covers = (0..base.len())
        .map(|x| BasicCover {
            root: x,
            family: base.minimal_in(base.down(x)).ones().collect(),
        })
        .collect();
    SiteOnPoset::new(base, covers).expect("minimal elements below x lie below x")
}

/// `¬¬V(p) = {x ∈ W(p) : ∀q <= p ∃r <= q. x|r ∈ V(r)}`, evaluated literally.
pub fn nn_sheafify(w: &Presheaf, v: &Subpresheaf) -> Result<Subpresheaf> {
    w.check_sub(v)?;
    let p = w.poset();
    let mut out = w.empty_sub();
    for a in 0..p.len() {
        for x in 0..w.value_count(a) {
            let dense = p
                .down(a)
                .ones()
                .all(|q| p.down(q).ones().any(|r| v.contains(r, w.restrict(a, r, x))));
            if dense {
                out.0[a].insert(x);
            }
        }
    }
    Ok(out)
}

/// `C ↦ ⋂{B_M : M maximal, M ⊇ C}` on the refinement order, with inclusions
/// as restriction maps. Values are element labels.
pub fn nn_bohrification(cp: &ContextPoset) -> Result<Presheaf> {
    let maximal = cp.maximal();
    let keys_of = |c: usize| -> Result<BTreeSet<ElementKey>> {
        cp.algebra(c)
            .elements()
            .map(|u| cp.element_key(c, u))
            .collect()
    };
    let mut maximal_keys = Vec::new();
    for &m in &maximal {
        maximal_keys.push((m, keys_of(m)?));
    }
    let mut values: Vec<Vec<ElementKey>> = Vec::with_capacity(cp.len());
    for c in 0..cp.len() {
        let mut common: Option<BTreeSet<ElementKey>> = None;
        for (m, keys) in &maximal_keys {
            if cp.poset().leq(c, *m) {
                common = Some(match common {
                    None => keys.clone(),
                    Some(acc) => acc.intersection(keys).cloned().collect(),
                });
            }
        }
        values.push(
            common
                .expect("every context lies below a maximal one")
                .into_iter()
                .collect(),
        );
    }
    let label = |key: &ElementKey| match key {
        ElementKey::Zero => "0".to_string(),
        ElementKey::One => "1".to_string(),
        ElementKey::Atoms(atoms) => {
            let b = cp.block_structure().expect("keys come from blocks");
            let names: Vec<&str> = atoms.iter().map(|&a| b.atom(a)).collect();
            format!("{{{}}}", names.join(","))
        }
    };
    let labels = values
        .iter()
        .map(|vs| vs.iter().map(label).collect())
        .collect();
    Presheaf::new(cp.poset().opposite(), labels, |from, to, x| {
        values[to]
            .iter()
            .position(|k| *k == values[from][x])
            .expect("values grow along refinement")
    })
}

/// The MO site: `(C, u) ◁ {(M, a) : M maximal ⊇ C, a atom <= e_M(u)}`.
pub fn mo_site(cp: &ContextPoset) -> PairSite {
    let maximal = cp.maximal();
    pair_site_with(cp, |obj, c, u| {
        let mut family = Vec::new();
        for &m in maximal.iter().filter(|&&m| cp.poset().leq(c, m)) {
            let image = cp.embed(c, m, u);
            family.extend(
                cp.algebra(m)
                    .atoms_below(image)
                    .map(|i| obj(m, cp.algebra(m).atom(i))),
            );
        }
        family
    })
}

/// `(C, u) ◁ F` read off the double negation condition: for every `D ⊇ C`
/// there is `E ⊇ D` with `e_E(u) <= ⋁{e_E(v) : (D', v) ∈ F, D' ⊆ E}`.
pub fn mo_covers_literal(
    cp: &ContextPoset,
    c: usize,
    u: Element,
    family: &[(usize, Element)],
) -> Result<bool> {
    cp.check_element(c, u)?;
    for &(d, v) in family {
        cp.check_element(d, v)?;
    }
    let p = cp.poset();
    let stage_covers = |e: usize| {
        let join = family
            .iter()
            .filter(|&&(d, _)| p.leq(d, e))
            .fold(0, |acc, &(d, v)| acc | cp.embed(d, e, v));
        cp.algebra(e).leq(cp.embed(c, e, u), join)
    };
    let good: Vec<bool> = (0..cp.len())
        .map(|e| p.leq(c, e) && stage_covers(e))
        .collect();
    Ok(p.up(c).ones().all(|d| p.up(d).ones().any(|e| good[e])))
}

/// A point of the spectrum of a maximal context.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MeasurementOutcome {
    pub context: usize,
    pub atom: usize,
}

/// Points of the MO site as (maximal context, atom) pairs, sorted.
pub fn mo_points(cp: &ContextPoset) -> Vec<MeasurementOutcome> {
    let site = mo_site(cp);
    mo_points_of(cp, &site, &site.coverage())
}

pub fn mo_points_of(cp: &ContextPoset, site: &PairSite, cov: &Coverage) -> Vec<MeasurementOutcome> {
    let maximal = cp.maximal();
    let mut out: Vec<MeasurementOutcome> = points_of_coverage(cov)
        .iter()
        .map(|pt| {
            let (c, u) = site.pair(pt.minimum());
            let b = cp.algebra(c);
            assert!(
                maximal.contains(&c) && b.is_atom(u),
                "MO point at a non-outcome"
            );
            MeasurementOutcome {
                context: c,
                atom: u.trailing_zeros() as usize,
            }
        })
        .collect();
    out.sort();
    out
}

/// The nonzero pairs as a poset (the forcing conditions), with the index of
/// each condition in the pair site.
pub fn forcing_poset(site: &PairSite) -> (FinitePoset, Vec<usize>) {
    let mut nonzero = site.zero_objects();
    nonzero.toggle_range(..);
    site.poset().subposet(&nonzero)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForcingCheck {
    pub mo_points: usize,
    pub dense_points: usize,
    pub points_agree: bool,
    /// `Some(equal)` when both frames have at most `FRAME_BOUND` opens.
    pub frames_agree: Option<bool>,
}

impl ForcingCheck {
    pub fn holds(&self) -> bool {
        self.points_agree && self.frames_agree != Some(false)
    }
}

pub const FRAME_BOUND: usize = 64;

/// Compares the MO site with the dense topology on the forcing conditions:
/// points must coincide, and so must the frames when both are small.
pub fn iterated_forcing_report(cp: &ContextPoset) -> ForcingCheck {
    let site = mo_site(cp);
    let mo_cov = site.coverage();
    let (forcing, keep) = forcing_poset(&site);
    let dense_cov = saturate(&dense_site(&forcing, Direction::Inclusion));

    let mo_pts: BTreeSet<FixedBitSet> = points_of_coverage(&mo_cov)
        .into_iter()
        .map(|pt| drop_zeros(pt.members(), &keep))
        .collect();
    let dense_pts: BTreeSet<FixedBitSet> = points_of_coverage(&dense_cov)
        .into_iter()
        .map(|pt| pt.members().clone())
        .collect();

    let frames_agree = match (
        frame_of_coverage(&mo_cov, Some(FRAME_BOUND)),
        frame_of_coverage(&dense_cov, Some(FRAME_BOUND)),
    ) {
        (Ok(f), Ok(g)) => {
            let a: BTreeSet<FixedBitSet> = f.opens().iter().map(|o| drop_zeros(o, &keep)).collect();
            let b: BTreeSet<FixedBitSet> = g.opens().iter().cloned().collect();
            Some(a.len() == f.len() && a == b)
        }
        _ => None,
    };
    ForcingCheck {
        mo_points: mo_pts.len(),
        dense_points: dense_pts.len(),
        points_agree: mo_pts == dense_pts,
        frames_agree,
    }
}

pub fn iterated_forcing_check(cp: &ContextPoset) -> bool {
    iterated_forcing_report(cp).holds()
}

/// Re-indexes a set of pairs onto the forcing conditions.
fn drop_zeros(set: &FixedBitSet, keep: &[usize]) -> FixedBitSet {
    let mut out = FixedBitSet::with_capacity(keep.len());
    out.extend((0..keep.len()).filter(|&i| set.contains(keep[i])));
    out
}
