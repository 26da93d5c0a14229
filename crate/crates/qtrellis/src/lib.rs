//! Trellis decoding for stabilizer codes over prime-dimensional qudits.
//!
//! The normalizer of a code is laid out as a minimal trellis: a layered graph
//! whose root-to-sink paths are exactly the logical-plus-stabilizer operators.
//! A syndrome shifts the trellis onto the matching coset, and the Viterbi
//! algorithm finds the most likely correction in time linear in the edge count.

pub mod code;
pub mod ffield;
pub mod pauli;
pub mod trellis;
pub mod decode;
pub mod sim;
