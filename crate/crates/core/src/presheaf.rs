//! Set-valued presheaves on a finite poset.
//!
//! A presheaf assigns a finite set of labelled values to each element and,
//! for each `q <= p`, a restriction map from the values at `p` to the values
//! at `q`. Which concrete order this is (inclusion or refinement) is decided
//! by the poset the presheaf is built on.

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::order::FinitePoset;

#[derive(Clone, Debug)]
pub struct Presheaf {
    poset: FinitePoset,
    values: Vec<Vec<String>>,
    /// `maps[p * n + q]` for `q <= p`.
    maps: Vec<Option<Vec<usize>>>,
}

impl Presheaf {
    /// `restrict(p, q, x)` gives the restriction of value `x` at `p` to
    /// `q <= p`. The maps are checked for range, identities and composition.
    pub fn new(
        poset: FinitePoset,
        values: Vec<Vec<String>>,
        restrict: impl Fn(usize, usize, usize) -> usize,
    ) -> Result<Self> {
        let n = poset.len();
        if values.len() != n {
            return Err(Error::InvalidPresheaf(format!(
                "{} value sets for {n} elements",
                values.len()
            )));
        }
        let mut maps = vec![None; n * n];
        for p in 0..n {
            for q in poset.down(p).ones() {
                let map: Vec<usize> = (0..values[p].len()).map(|x| restrict(p, q, x)).collect();
                if let Some(bad) = map.iter().find(|&&y| y >= values[q].len()) {
                    return Err(Error::InvalidPresheaf(format!(
                        "restriction from `{}` to `{}` leaves the value set ({bad})",
                        poset.id(p),
                        poset.id(q)
                    )));
                }
                if p == q && map.iter().enumerate().any(|(x, &y)| x != y) {
                    return Err(Error::InvalidPresheaf(format!(
                        "restriction at `{}` is not the identity",
                        poset.id(p)
                    )));
                }
                maps[p * n + q] = Some(map);
            }
        }
        let sheaf = Self {
            poset,
            values,
            maps,
        };
        sheaf.check_functorial()?;
        Ok(sheaf)
    }

    fn check_functorial(&self) -> Result<()> {
        let p = &self.poset;
        for a in 0..p.len() {
            for b in p.down(a).ones() {
                for c in p.down(b).ones() {
                    for x in 0..self.values[a].len() {
                        if self.restrict(b, c, self.restrict(a, b, x)) != self.restrict(a, c, x) {
                            return Err(Error::InvalidPresheaf(format!(
                                "restrictions `{}` -> `{}` -> `{}` do not compose",
                                p.id(a),
                                p.id(b),
                                p.id(c)
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// The constant presheaf with the given values and identity maps.
    pub fn constant(poset: FinitePoset, values: Vec<String>) -> Self {
        let n = poset.len();
        let per = vec![values; n];
        Self::new(poset, per, |_, _, x| x).expect("identity maps are functorial")
    }

    pub fn poset(&self) -> &FinitePoset {
        &self.poset
    }

    pub fn values(&self, p: usize) -> &[String] {
        &self.values[p]
    }

    pub fn value_count(&self, p: usize) -> usize {
        self.values[p].len()
    }

    /// Restriction of value `x` at `p` to `q <= p`.
    pub fn restrict(&self, p: usize, q: usize, x: usize) -> usize {
        self.maps[p * self.poset.len() + q]
            .as_ref()
            .unwrap_or_else(|| panic!("no restriction from #{p} to #{q}"))[x]
    }

    /// The presheaf on the induced subposet, with the original indices.
    pub fn restricted_to(&self, set: &FixedBitSet) -> (Presheaf, Vec<usize>) {
        let (sub, keep) = self.poset.subposet(set);
        let values = keep.iter().map(|&x| self.values[x].clone()).collect();
        let sheaf = Presheaf::new(sub, values, |p, q, x| self.restrict(keep[p], keep[q], x))
            .expect("restriction of a presheaf is a presheaf");
        (sheaf, keep)
    }

    /// Empty subpresheaf.
    pub fn empty_sub(&self) -> Subpresheaf {
        Subpresheaf(
            (0..self.poset.len())
                .map(|p| FixedBitSet::with_capacity(self.values[p].len()))
                .collect(),
        )
    }

    pub fn full_sub(&self) -> Subpresheaf {
        let mut s = self.empty_sub();
        for set in s.0.iter_mut() {
            set.insert_range(..);
        }
        s
    }

    /// Checks that `v` picks values at each element and is closed under
    /// restriction.
    pub fn check_sub(&self, v: &Subpresheaf) -> Result<()> {
        let n = self.poset.len();
        if v.0.len() != n {
            return Err(Error::NotSubpresheaf {
                at: "*".into(),
                reason: format!("{} component sets for {n} elements", v.0.len()),
            });
        }
        for p in 0..n {
            if v.0[p].len() != self.values[p].len() {
                return Err(Error::NotSubpresheaf {
                    at: self.poset.id(p).to_owned(),
                    reason: "component is not a subset of the ambient values".into(),
                });
            }
            for q in self.poset.down(p).ones() {
                for x in v.0[p].ones() {
                    if !v.0[q].contains(self.restrict(p, q, x)) {
                        return Err(Error::NotSubpresheaf {
                            at: self.poset.id(p).to_owned(),
                            reason: format!(
                                "value `{}` restricts outside the component at `{}`",
                                self.values[p][x],
                                self.poset.id(q)
                            ),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// Closes an arbitrary selection of values under restriction.
    pub fn generated_sub(&self, v: &Subpresheaf) -> Subpresheaf {
        let mut out = v.clone();
        for p in 0..self.poset.len() {
            for x in v.0[p].ones() {
                for q in self.poset.down(p).ones() {
                    out.0[q].insert(self.restrict(p, q, x));
                }
            }
        }
        out
    }
}

/// A choice of values at each element; a subpresheaf when closed under
/// restriction (see [`Presheaf::check_sub`]).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subpresheaf(pub Vec<FixedBitSet>);

impl Subpresheaf {
    pub fn contains(&self, p: usize, x: usize) -> bool {
        self.0[p].contains(x)
    }

    pub fn is_subset(&self, other: &Subpresheaf) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a.is_subset(b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_composing_maps() {
        let p = FinitePoset::new(["a", "b", "c"], [("a", "b"), ("b", "c")]).unwrap();
        let vals = vec![vec!["0".to_string(), "1".to_string()]; 3];
        let (a, c) = (0, 2);
        let err = Presheaf::new(
            p,
            vals,
            |from, to, x| {
                if from == c && to == a {
                    1 - x
                } else {
                    x
                }
            },
        )
        .unwrap_err();
        assert!(matches!(err, Error::InvalidPresheaf(_)));
    }

    #[test]
    fn subpresheaf_closure_and_check() {
        let p = FinitePoset::new(["lo", "hi"], [("lo", "hi")]).unwrap();
        let w = Presheaf::constant(p.clone(), vec!["x".into(), "y".into()]);
        let hi = p.index_of("hi").unwrap();
        let mut v = w.empty_sub();
        v.0[hi].insert(1);
        assert!(matches!(w.check_sub(&v), Err(Error::NotSubpresheaf { .. })));
        let closed = w.generated_sub(&v);
        assert!(w.check_sub(&closed).is_ok());
        assert!(v.is_subset(&closed));
    }
}
