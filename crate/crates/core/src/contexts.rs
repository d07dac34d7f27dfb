//! Context posets: finite Boolean algebras ordered by subalgebra inclusion,
//! the Gelfand site of each algebra, and the spectral presheaf.
//!
//! From a block structure the contexts are the trivial algebra `{0, 1}` plus
//! every Boolean algebra generated by a coarsening (set partition with at
//! least two parts) of a single block. An element of a block context is
//! identified across contexts by its set of universe atoms, with `0` and `1`
//! shared by all contexts.

use std::collections::HashMap;

use crate::blocks::BlockStructure;
use crate::coverage::{BasicCover, SiteOnPoset};
use crate::error::{Error, Result};
use crate::order::FinitePoset;
use crate::presheaf::Presheaf;

/// An element of a finite Boolean algebra, as the set of atoms below it.
pub type Element = u64;

/// Largest number of atoms an algebra may have.
pub const MAX_ATOMS: usize = 63;

pub const TRIVIAL_CONTEXT: &str = "bot";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteBooleanAlgebra {
    atoms: Vec<String>,
}

impl FiniteBooleanAlgebra {
    pub fn new(atoms: Vec<String>) -> Result<Self> {
        if atoms.is_empty() || atoms.len() > MAX_ATOMS {
            return Err(Error::InvalidContexts(format!(
                "a Boolean algebra needs between 1 and {MAX_ATOMS} atoms, got {}",
                atoms.len()
            )));
        }
        Ok(Self { atoms })
    }

    /// The `2^n`-element algebra with atoms `a0, a1, …`.
    pub fn with_atoms(n: usize) -> Result<Self> {
        Self::new((0..n).map(|i| format!("a{i}")).collect())
    }

    pub fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    pub fn atom_label(&self, i: usize) -> &str {
        &self.atoms[i]
    }

    pub fn size(&self) -> u64 {
        1u64 << self.atoms.len()
    }

    pub fn top(&self) -> Element {
        self.size() - 1
    }

    pub fn contains(&self, u: Element) -> bool {
        u <= self.top()
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> {
        0..self.size()
    }

    pub fn atom(&self, i: usize) -> Element {
        1 << i
    }

    pub fn is_atom(&self, u: Element) -> bool {
        u.count_ones() == 1
    }

    pub fn atoms_below(&self, u: Element) -> impl Iterator<Item = usize> {
        (0..self.atoms.len()).filter(move |i| u & (1 << i) != 0)
    }

    pub fn leq(&self, u: Element, v: Element) -> bool {
        u & !v == 0
    }

    pub fn complement(&self, u: Element) -> Element {
        self.top() & !u
    }

    pub fn label(&self, u: Element) -> String {
        if u == 0 {
            "0".into()
        } else if u == self.top() {
            "1".into()
        } else {
            let names: Vec<&str> = self
                .atoms_below(u)
                .map(|i| self.atoms[i].as_str())
                .collect();
            format!("{{{}}}", names.join(","))
        }
    }
}

/// The Gelfand site of a finite Boolean algebra: `u ◁ {atoms below u}` for
/// every `u`, which includes `0 ◁ ∅`. Element ids are [`FiniteBooleanAlgebra::label`].
pub fn gelfand_site(b: &FiniteBooleanAlgebra) -> SiteOnPoset {
    let elements: Vec<Element> = b.elements().collect();
    let ids: Vec<String> = elements.iter().map(|&u| b.label(u)).collect();
    let poset = FinitePoset::from_relation(ids.clone(), |x, y| b.leq(elements[x], elements[y]))
        .expect("subset order is a partial order");
    let idx = |u: Element| poset.index_of(&b.label(u)).unwrap();
    let covers = elements
        .iter()
        .map(|&u| BasicCover {
            root: idx(u),
            family: b.atoms_below(u).map(|i| idx(b.atom(i))).collect(),
        })
        .collect();
    SiteOnPoset::new(poset, covers).expect("atoms lie below their join")
}

#[derive(Clone, Debug)]
struct BlockContext {
    /// `None` for the trivial context.
    block: Option<usize>,
    /// Universe atoms of each algebra atom.
    parts: Vec<Vec<usize>>,
    /// Universe atom -> part index.
    part_of: HashMap<usize, usize>,
}

#[derive(Clone, Debug)]
enum Repr {
    Blocks {
        structure: BlockStructure,
        contexts: Vec<BlockContext>,
    },
    Abstract {
        /// `(c, d)` with `c <= d` -> image of each atom of `c`.
        images: HashMap<(usize, usize), Vec<Element>>,
    },
}

#[derive(Clone, Debug)]
pub struct ContextPoset {
    poset: FinitePoset,
    algebras: Vec<FiniteBooleanAlgebra>,
    bottom: usize,
    repr: Repr,
}

impl ContextPoset {
    /// A context poset given directly by its order, algebra sizes, and the
    /// image of every atom along every inclusion.
    pub fn from_embeddings(
        poset: FinitePoset,
        atom_counts: Vec<usize>,
        images: HashMap<(usize, usize), Vec<Element>>,
    ) -> Result<Self> {
        let n = poset.len();
        if atom_counts.len() != n {
            return Err(Error::InvalidContexts(
                "one atom count per context is required".into(),
            ));
        }
        let algebras = atom_counts
            .iter()
            .map(|&k| FiniteBooleanAlgebra::with_atoms(k))
            .collect::<Result<Vec<_>>>()?;
        for c in 0..n {
            for d in poset.up(c).ones() {
                let img = images.get(&(c, d)).ok_or_else(|| {
                    Error::InvalidContexts(format!(
                        "missing embedding `{}` -> `{}`",
                        poset.id(c),
                        poset.id(d)
                    ))
                })?;
                let ok_shape = img.len() == atom_counts[c]
                    && img.iter().all(|&m| m != 0)
                    && img.iter().fold(0u64, |acc, &m| acc | m) == algebras[d].top()
                    && img.iter().map(|m| m.count_ones()).sum::<u32>()
                        == algebras[d].top().count_ones();
                let identity = c != d || img.iter().enumerate().all(|(i, &m)| m == 1 << i);
                if !ok_shape || !identity {
                    return Err(Error::InvalidContexts(format!(
                        "embedding `{}` -> `{}` is not an injective Boolean homomorphism",
                        poset.id(c),
                        poset.id(d)
                    )));
                }
            }
        }
        let cp = Self::assemble(poset, algebras, Repr::Abstract { images })?;
        for c in 0..n {
            for d in cp.poset.up(c).ones() {
                for e in cp.poset.up(d).ones() {
                    for i in 0..cp.atom_count(c) {
                        let a = cp.algebras[c].atom(i);
                        if cp.embed(d, e, cp.embed(c, d, a)) != cp.embed(c, e, a) {
                            return Err(Error::InvalidContexts(format!(
                                "embeddings through `{}` do not compose",
                                cp.poset.id(d)
                            )));
                        }
                    }
                }
            }
        }
        Ok(cp)
    }

    fn assemble(
        poset: FinitePoset,
        algebras: Vec<FiniteBooleanAlgebra>,
        repr: Repr,
    ) -> Result<Self> {
        let minimal = poset.minimal_elements();
        let bottom = match minimal.as_slice() {
            [b] if poset.up(*b).count_ones(..) == poset.len() => *b,
            _ => return Err(Error::InvalidContexts("no bottom context".into())),
        };
        if algebras[bottom].atom_count() != 1 {
            return Err(Error::InvalidContexts(
                "bottom context must be {0, 1}".into(),
            ));
        }
        Ok(Self {
            poset,
            algebras,
            bottom,
            repr,
        })
    }

    /// Inclusion order on contexts.
    pub fn poset(&self) -> &FinitePoset {
        &self.poset
    }

    pub fn len(&self) -> usize {
        self.poset.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poset.is_empty()
    }

    pub fn id(&self, c: usize) -> &str {
        self.poset.id(c)
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn maximal(&self) -> Vec<usize> {
        self.poset.maximal_elements()
    }

    pub fn algebra(&self, c: usize) -> &FiniteBooleanAlgebra {
        &self.algebras[c]
    }

    pub fn atom_count(&self, c: usize) -> usize {
        self.algebras[c].atom_count()
    }

    pub fn block_structure(&self) -> Option<&BlockStructure> {
        match &self.repr {
            Repr::Blocks { structure, .. } => Some(structure),
            Repr::Abstract { .. } => None,
        }
    }

    /// Image in `B_d` of atom `i` of `B_c`, for `c <= d`.
    pub fn embed_atom(&self, c: usize, d: usize, i: usize) -> Element {
        assert!(
            self.poset.leq(c, d),
            "{} is not included in {}",
            self.id(c),
            self.id(d)
        );
        match &self.repr {
            Repr::Abstract { images } => images[&(c, d)][i],
            Repr::Blocks { contexts, .. } => {
                let (cc, dc) = (&contexts[c], &contexts[d]);
                if cc.block.is_none() {
                    return self.algebras[d].top();
                }
                dc.parts
                    .iter()
                    .enumerate()
                    .filter(|(_, part)| cc.part_of[&part[0]] == i)
                    .fold(0, |acc, (j, _)| acc | (1 << j))
            }
        }
    }

    /// Image in `B_d` of `u ∈ B_c`, for `c <= d`.
    pub fn embed(&self, c: usize, d: usize, u: Element) -> Element {
        self.algebras[c]
            .atoms_below(u)
            .fold(0, |acc, i| acc | self.embed_atom(c, d, i))
    }

    /// The atom of `B_c` above atom `j` of `B_d`, for `c <= d`.
    pub fn restrict_atom(&self, d: usize, c: usize, j: usize) -> usize {
        (0..self.atom_count(c))
            .find(|&i| self.embed_atom(c, d, i) & (1 << j) != 0)
            .expect("embedded atoms partition the unit")
    }

    pub fn check_element(&self, c: usize, u: Element) -> Result<()> {
        if self.algebras[c].contains(u) {
            Ok(())
        } else {
            Err(Error::ElementNotInContext {
                context: self.id(c).to_owned(),
                element: format!("#{u}"),
            })
        }
    }

    /// Universe atoms of an element, when the poset comes from blocks. `1`
    /// has no atom set of its own and maps to `None`, as does `0`.
    fn element_atoms(&self, c: usize, u: Element) -> Option<Vec<usize>> {
        let Repr::Blocks { contexts, .. } = &self.repr else {
            return None;
        };
        if u == 0 || u == self.algebras[c].top() {
            return None;
        }
        let mut atoms: Vec<usize> = self.algebras[c]
            .atoms_below(u)
            .flat_map(|i| contexts[c].parts[i].iter().copied())
            .collect();
        atoms.sort_unstable();
        Some(atoms)
    }

    /// Context-independent name of an element: `0`, `1`, or its set of
    /// universe atoms.
    pub fn element_key(&self, c: usize, u: Element) -> Result<ElementKey> {
        self.check_element(c, u)?;
        if u == 0 {
            return Ok(ElementKey::Zero);
        }
        if u == self.algebras[c].top() {
            return Ok(ElementKey::One);
        }
        self.element_atoms(c, u)
            .map(ElementKey::Atoms)
            .ok_or(Error::RequiresBlockRepresentation)
    }

    pub fn element_label(&self, c: usize, u: Element) -> String {
        match (&self.repr, self.element_atoms(c, u)) {
            (Repr::Blocks { structure, .. }, Some(atoms)) => {
                let names: Vec<&str> = atoms.iter().map(|&a| structure.atom(a)).collect();
                format!("{{{}}}", names.join(","))
            }
            _ => self.algebras[c].label(u),
        }
    }
}

/// Element names shared between the contexts of a block-built poset.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ElementKey {
    Zero,
    One,
    Atoms(Vec<usize>),
}

/// Set partitions of `items` with at least two parts, as restricted growth
/// strings.
fn coarsenings(
    items: &[usize],
    limit: Option<usize>,
    produced: &mut usize,
) -> Result<Vec<Vec<Vec<usize>>>> {
    fn go(
        items: &[usize],
        i: usize,
        parts: &mut Vec<Vec<usize>>,
        out: &mut Vec<Vec<Vec<usize>>>,
        limit: Option<usize>,
        produced: &mut usize,
    ) -> Result<()> {
        if i == items.len() {
            if parts.len() >= 2 {
                *produced += 1;
                if limit.is_some_and(|l| *produced > l) {
                    return Err(Error::LimitExceeded(limit.unwrap()));
                }
                out.push(parts.clone());
            }
            return Ok(());
        }
        for k in 0..parts.len() {
            parts[k].push(items[i]);
            go(items, i + 1, parts, out, limit, produced)?;
            parts[k].pop();
        }
        parts.push(vec![items[i]]);
        go(items, i + 1, parts, out, limit, produced)?;
        parts.pop();
        Ok(())
    }
    let mut out = Vec::new();
    go(items, 0, &mut Vec::new(), &mut out, limit, produced)?;
    Ok(out)
}

/// Rejects blocks that disagree about a shared element: two distinct blocks
/// sharing an atom `a` give `{a}` different complements (or make it the unit
/// of one block and a proper element of the other).
fn check_identification(b: &BlockStructure, distinct: &[usize]) -> Result<()> {
    let blocks = b.blocks();
    let set_label = |atoms: &[usize]| {
        let names: Vec<&str> = atoms.iter().map(|&a| b.atom(a)).collect();
        format!("{{{}}}", names.join(","))
    };
    for (x, &i) in distinct.iter().enumerate() {
        for &j in &distinct[x + 1..] {
            let Some(&a) = blocks[i].iter().find(|a| blocks[j].contains(a)) else {
                continue;
            };
            let rest = |k: usize| {
                blocks[k]
                    .iter()
                    .copied()
                    .filter(|&t| t != a)
                    .collect::<Vec<_>>()
            };
            let (ri, rj) = (rest(i), rest(j));
            let label = |r: &[usize]| {
                if r.is_empty() {
                    "0".to_string()
                } else {
                    set_label(r)
                }
            };
            return Err(Error::InconsistentIdentification {
                first: label(&ri),
                second: label(&rj),
                reason: format!(
                    "complement of {} is {} in block {} but {} in block {}",
                    set_label(&[a]),
                    label(&ri),
                    i + 1,
                    label(&rj),
                    j + 1
                ),
            });
        }
    }
    Ok(())
}

pub fn contexts_from_blocks(b: &BlockStructure) -> Result<ContextPoset> {
    contexts_from_blocks_limited(b, None)
}

/// As [`contexts_from_blocks`], failing with `LimitExceeded` once more than
/// `limit` contexts would be generated.
pub fn contexts_from_blocks_limited(
    b: &BlockStructure,
    limit: Option<usize>,
) -> Result<ContextPoset> {
    let mut distinct: Vec<usize> = Vec::new();
    for (i, block) in b.blocks().iter().enumerate() {
        if block.len() > MAX_ATOMS {
            return Err(Error::InvalidBlocks(format!(
                "block {} has too many atoms",
                i + 1
            )));
        }
        if !distinct.iter().any(|&k| b.blocks()[k] == *block) {
            distinct.push(i);
        }
    }
    check_identification(b, &distinct)?;

    let mut contexts = vec![BlockContext {
        block: None,
        parts: Vec::new(),
        part_of: HashMap::new(),
    }];
    let mut produced = 1;
    for &k in &distinct {
        for parts in coarsenings(&b.blocks()[k], limit, &mut produced)? {
            let part_of = parts
                .iter()
                .enumerate()
                .flat_map(|(p, atoms)| atoms.iter().map(move |&a| (a, p)))
                .collect();
            contexts.push(BlockContext {
                block: Some(k),
                parts,
                part_of,
            });
        }
    }
    let id_of = |c: &BlockContext| -> String {
        if c.block.is_none() {
            return TRIVIAL_CONTEXT.to_owned();
        }
        c.parts
            .iter()
            .map(|p| p.iter().map(|&a| b.atom(a)).collect::<Vec<_>>().join(","))
            .collect::<Vec<_>>()
            .join("|")
    };
    contexts.sort_by_cached_key(id_of);
    let ids: Vec<String> = contexts.iter().map(id_of).collect();
    let included = |c: &BlockContext, d: &BlockContext| match (c.block, d.block) {
        (None, _) => true,
        (Some(x), Some(y)) if x == y => d.parts.iter().all(|part| {
            let owner = c.part_of[&part[0]];
            part.iter().all(|a| c.part_of[a] == owner)
        }),
        _ => false,
    };
    let poset = FinitePoset::from_relation(ids, |x, y| included(&contexts[x], &contexts[y]))?;
    // ids were pre-sorted, so poset indices agree with `contexts`
    let algebras = contexts
        .iter()
        .map(|c| {
            if c.block.is_none() {
                FiniteBooleanAlgebra::new(vec!["1".into()])
            } else {
                FiniteBooleanAlgebra::new(
                    c.parts
                        .iter()
                        .map(|p| p.iter().map(|&a| b.atom(a)).collect::<Vec<_>>().join(","))
                        .collect(),
                )
            }
        })
        .collect::<Result<Vec<_>>>()?;
    ContextPoset::assemble(
        poset,
        algebras,
        Repr::Blocks {
            structure: b.clone(),
            contexts,
        },
    )
}

/// The spectrum of each context (its atoms) with restriction along
/// inclusions, as a presheaf on the inclusion order.
pub fn spectral_presheaf(cp: &ContextPoset) -> Presheaf {
    let values = (0..cp.len())
        .map(|c| {
            (0..cp.atom_count(c))
                .map(|i| cp.element_label(c, cp.algebra(c).atom(i)))
                .collect()
        })
        .collect();
    Presheaf::new(cp.poset().clone(), values, |d, c, j| {
        cp.restrict_atom(d, c, j)
    })
    .expect("restriction of atoms is functorial")
}
