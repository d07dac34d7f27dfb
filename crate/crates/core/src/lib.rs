//! Finite models of context posets and the locales of partial and total
//! measurement outcomes built over them.
//!
//! The pipeline runs from a [`BlockStructure`] to a [`ContextPoset`], then to
//! pair sites ([`pmo_site`], [`mo_site`]) whose saturated topologies
//! ([`saturate`]) yield points and frames.

pub mod blocks;
pub mod contexts;
pub mod coverage;
pub mod dot;
pub mod error;
pub mod fixtures;
pub mod frame;
pub mod io;
pub mod ks;
pub mod negation;
pub mod order;
pub mod pairs;
pub mod presheaf;

pub use blocks::BlockStructure;
pub use contexts::{
    contexts_from_blocks, contexts_from_blocks_limited, gelfand_site, spectral_presheaf,
    ContextPoset, Element, FiniteBooleanAlgebra,
};
pub use coverage::{
    points_of, saturate, BasicCover, CompletelyPrimeFilter, Coverage, Sieve, SiteOnPoset,
};
pub use error::{Error, Result};
pub use frame::{booleanize, frame_of, FiniteFrame};
pub use io::{parse_block_file, to_block_file, ParseError};
pub use ks::{global_sections, ks_colorings, ks_report, Coloring, KsReport};
pub use negation::{
    dense_site, iterated_forcing_check, mo_points, mo_site, nn_bohrification, nn_sheafify,
    MeasurementOutcome,
};
pub use order::{Direction, Downset, Filter, FinitePoset};
pub use pairs::{
    internal_cover_check, pmo_points, pmo_site, verify_pmo_theorem, ConsistentIdeal, PairSite,
};
pub use presheaf::{Presheaf, Subpresheaf};
