//! Static-analysis toolkit for Solidity smart contracts.
//!
//! The crate bundles three related capabilities:
//!
//! * an ERC20 interface-conformance checker working on source text,
//! * a text-classification pipeline (TF-IDF plus five classifiers) that
//!   predicts whether a function needs a caller-permission check,
//! * a lineage miner that matches self-destructed contracts to their
//!   redeployed successors via token-level code similarity, with an
//!   LCS diff viewer for reviewing each candidate pair.
//!
//! Everything is pure Rust with no external toolchain dependencies; the
//! Solidity front-end is a deliberately small subset parser that extracts
//! contract units, functions, events and state variables without building
//! full expression trees.

pub mod corpus;
pub mod diag;
pub mod diffview;
pub mod erc20;
pub mod features;
pub mod lineage;
pub mod mlkit;
pub mod solfront;
pub mod textprep;

pub use diag::Diagnostic;
