//! Approximate circular string matching.
//!
//! Finds every factor of a text that lies within edit distance `k` of some
//! rotation of a pattern. Search slides a window of length `m - k` over the
//! text and reads q-grams backwards from its end, summing lower bounds on
//! their edit distance to the pattern's rotations. Windows whose bound stays
//! within `k` are verified exactly.
//!
//! ```
//! use circmatch::{Alphabet, Matcher};
//!
//! let alphabet = Alphabet::dna();
//! let matcher = Matcher::new(b"ACGTTGCA", 1, &alphabet).unwrap();
//! let (hits, _stats) = matcher.search(b"TTTTGTTGCAACTTTT");
//! assert!(hits.iter().any(|o| o.start == 4 && o.distance == 0));
//! ```

pub mod alphabet;
pub mod bench;
pub mod cli;
pub mod edit;
mod error;
pub mod fasta;
pub mod index;
pub mod oracle;
pub mod search;
pub mod verify;

pub use alphabet::Alphabet;
pub use error::{Error, Result};
pub use index::QGramIndex;
pub use search::{Matcher, Mode, SearchPlan, SearchStats};
pub use verify::{rotate, Block, Occurrence};
