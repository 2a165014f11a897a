//! Exact arithmetic core for studying generalized Fermat equations
//! `d^r a^p + b^p + c^p = 0` over quadratic fields of class number one:
//! field and ideal arithmetic, residue rings and unit/square cokernels,
//! 2-adic local discriminants, Frey-curve invariants and conductors,
//! irreducibility criteria for mod-p Galois representations, Hecke
//! eigenvalue fields, and the newform-elimination engine.
//!
//! The crate is `no_std` (alloc required); IO, data ingestion and the
//! command-line surface live in the companion `quadfermat` crate.

#![cfg_attr(not(test), no_std)]
#![deny(unsafe_code)]

extern crate alloc;

pub mod eliminate;
pub mod frey;
pub mod galois;
pub mod local2;
pub mod numfield;
pub mod poly;
pub mod quadfield;
pub mod records;
pub mod residue;
pub mod tables;

pub use quadfield::{AlgebraicInteger, BasisMode, FieldError, FieldSpec, PrimeIdeal, SplitType};
