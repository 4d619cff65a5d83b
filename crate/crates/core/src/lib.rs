//! Burrows-Wheeler Transform construction for large repetitive texts.
//!
//! The pipeline first splits the input into overlapping phrases delimited by
//! trigger windows of a rolling Karp-Rabin hash ([`parse`]), producing a
//! dictionary of distinct phrases and a parse of dictionary ranks. The BWT of
//! the terminated text is then reconstructed from dictionary and parse alone
//! ([`pfpbwt`]), in workspace proportional to their combined size rather than
//! the text's. A run-length FM index over the result answers counting
//! queries ([`index`]).
//!
//! Reserved byte values: `0x00` terminates the on-disk dictionary, `0x01`
//! separates phrases inside concatenations, and `0x02` is the sentinel that
//! pads the text on both sides. Input texts must therefore use bytes
//! `>= 0x03`.

pub mod error;
pub mod index;
pub mod oracle;
pub mod parse;
pub mod pfpbwt;
pub mod sufsort;
pub mod trigger;

pub use error::{Error, Result};
pub use index::RlfmIndex;
pub use parse::PfpResult;
pub use pfpbwt::BwtOutput;
pub use trigger::WindowConfig;

/// Terminates the on-disk dictionary file.
pub const DICT_END: u8 = 0x00;
/// Separates phrases inside dictionary concatenations.
pub const PHRASE_SEP: u8 = 0x01;
/// Sentinel padding the text: one copy in front, `w` copies behind. Also the
/// terminator character of the finished BWT.
pub const SENTINEL: u8 = 0x02;
/// Smallest byte value the input text may use.
pub const MIN_INPUT_BYTE: u8 = 0x03;
