//! Closed pattern mining over interval-valued and distribution-valued data.
//!
//! The crate takes tabular data whose cells are scalars, half-open
//! intervals `]lo, hi]`, or cumulative distribution functions, grades each
//! variable by a grid of thresholds, and encodes every object as an
//! itemset over threshold atoms. Closed itemset mining then enumerates the
//! concepts of the chosen pattern language, each one decodable back into a
//! per-variable range statement.
//!
//! # Quick start
//!
//! ```
//! use rangemine::{describe, mine_closed, ThresholdGrid, Interval, Language};
//! use rangemine::encoding::{ItemVocabulary, VarSpec, EncodedDataset};
//!
//! // Domain ]0, 5] split by thresholds {1, 2, 3, 4}.
//! let grid = ThresholdGrid::new(0.0, 5.0, &[1.0, 2.0, 3.0, 4.0], 1.0).unwrap();
//! let vocab = ItemVocabulary::new(
//!     Language::I,
//!     vec![VarSpec::plain("x", grid.clone())],
//! ).unwrap();
//! let values = [Interval::new(0.0, 2.0).unwrap(), Interval::new(1.0, 4.0).unwrap()];
//! let objects = values
//!     .iter()
//!     .map(|iv| vocab.encode_interval_row(std::slice::from_ref(iv)))
//!     .collect::<Result<Vec<_>, _>>()
//!     .unwrap();
//! let ds = EncodedDataset::from_itemsets("toy", vocab, objects).unwrap();
//! let concepts = mine_closed(&ds, 1).unwrap();
//! assert_eq!(concepts.len(), 3);
//! ```

pub mod bitset;
pub mod dist;
pub mod encoding;
pub mod error;
pub mod ingest;
pub mod interval;
pub mod metrics;
pub mod mining;
pub mod pattern;

pub use bitset::BitSet;
pub use error::{Error, Result};
pub use interval::{Interval, ThresholdGrid};
pub use mining::{brute_force_closed, lattice_edges, mine_closed, Concept};
pub use pattern::{
    describe, enumerate_distinguishable, interpret, Atom, Family, Interpretation, IntervalPattern,
    Language,
};
