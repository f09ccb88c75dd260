//! Pillay-form imaginaries, their geometric ranks, and the combination of
//! pairs and triples.

mod catalog;
mod combine;
mod pillay;
mod rank;

pub use combine::{
    combine_pair, combine_pair_with, combine_triple, relative_rank, relative_rank_pair, CombinedImaginary,
    Connector, Provenance, RankRoute, TripleDims,
};
pub use catalog::{direct_rank, pillay_form, CatalogTorsor, PillayForm};
pub use pillay::{
    as_imaginary, grank, grank_torsor, validate_pillay, Action, Check, PillayImaginary, RationalMap2,
    ValidationReport,
};
pub use rank::GeomRank;
