//! Data model shared between the algorithmic core and the ingestion
//! layer: factored levels with canonical keys, newform records with
//! eigenvalue maps, and elliptic-curve records carrying j-valuations.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;

use crate::numfield::{EigenvalueField, FieldElement};
use crate::quadfield::{FieldSpec, PrimeIdeal};

/// An integral ideal as a product of prime powers, in canonical order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Level {
    factors: Vec<(PrimeIdeal, u32)>,
}

impl Level {
    pub fn new(mut factors: Vec<(PrimeIdeal, u32)>) -> Self {
        factors.sort_by_key(|(p, _)| (p.residue_char, p.norm, p.omega_residue));
        factors.retain(|(_, e)| *e > 0);
        Level { factors }
    }

    pub fn factors(&self) -> &[(PrimeIdeal, u32)] {
        &self.factors
    }

    pub fn norm(&self) -> BigInt {
        let mut n = BigInt::from(1);
        for (p, e) in &self.factors {
            n *= BigInt::from(p.norm).pow(*e);
        }
        n
    }

    /// Canonical key: prime labels joined by `.`, `^e` appended for e > 1.
    pub fn key(&self) -> String {
        use alloc::format;
        if self.factors.is_empty() {
            return String::from("1");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|(p, e)| {
                if *e == 1 {
                    p.label()
                } else {
                    format!("{}^{}", p.label(), e)
                }
            })
            .collect();
        parts.join(".")
    }

    /// Exponent of a prime (by label) in the level.
    pub fn exponent_of(&self, label: &str) -> u32 {
        self.factors
            .iter()
            .find(|(p, _)| p.label() == label)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    pub fn divides_prime(&self, p: &PrimeIdeal) -> bool {
        self.factors.iter().any(|(q, _)| q.label() == p.label())
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.key())
    }
}

/// A Hilbert or Bianchi newform presented by its eigenvalue data.
#[derive(Debug, Clone)]
pub struct NewformRecord {
    pub source_label: String,
    pub field_label: String,
    pub level_key: String,
    pub eigen_field: EigenvalueField,
    /// prime-ideal label -> Hecke eigenvalue.
    pub eigenvalues: BTreeMap<String, FieldElement>,
    pub is_rational: bool,
}

impl NewformRecord {
    pub fn eigenvalue(&self, prime_label: &str) -> Option<&FieldElement> {
        self.eigenvalues.get(prime_label)
    }
}

/// An elliptic curve over the field, as far as elimination needs it.
#[derive(Debug, Clone)]
pub struct CurveRecord {
    pub source_label: String,
    pub class_label: String,
    pub conductor_key: String,
    /// prime-over-2 label -> v_p(j); negative means potentially
    /// multiplicative reduction at that prime.
    pub j_valuations: BTreeMap<String, i64>,
    pub torsion_structure: Vec<u64>,
}

/// Completeness marker for a level's newform list, mirroring levels the
/// source could not fully enumerate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Completeness {
    Complete,
    Incomplete {
        new_dimension: Option<u64>,
        /// The source guarantees the rational sublist is exhaustive; the
        /// missing forms are irrational and feed the symbolic C_K term.
        rationals_complete: bool,
        reason: String,
    },
}

/// All newforms at one level, with completeness information.
#[derive(Debug, Clone)]
pub struct NewformLevelData {
    pub field_label: String,
    pub level_key: String,
    pub level_norm: BigInt,
    pub forms: Vec<NewformRecord>,
    pub completeness: Completeness,
}

/// Helper: all primes of the field with norm below `bound`, canonically
/// ordered.
pub fn primes_of_norm_below(field: &FieldSpec, bound: u64) -> Vec<PrimeIdeal> {
    let mut out = Vec::new();
    for q in 2..bound {
        if !crate::quadfield::is_prime_u64(q) {
            continue;
        }
        for p in field.split_rational_prime(q) {
            if p.norm < bound {
                out.push(p);
            }
        }
    }
    out.sort_by_key(|p| (p.norm, p.residue_char, p.omega_residue));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn level_keys_canonical() {
        let k = FieldSpec::new(3).unwrap();
        let p2 = k.split_rational_prime(2).remove(0);
        let d3 = k.split_rational_prime(3).remove(0);
        let lvl = Level::new(alloc::vec![(d3.clone(), 1), (p2.clone(), 4)]);
        assert_eq!(lvl.key(), "q2n2r1^4.q3n3r0");
        assert_eq!(lvl.norm(), BigInt::from(48));
        assert_eq!(lvl.exponent_of("q2n2r1"), 4);
        let lvl1 = Level::new(alloc::vec![(p2, 1), (d3, 1)]);
        assert_eq!(lvl1.key(), "q2n2r1.q3n3r0");
        assert_eq!(lvl1.norm(), BigInt::from(6));
    }

    #[test]
    fn prime_enumeration() {
        let k = FieldSpec::new(5).unwrap();
        let t: Vec<_> = primes_of_norm_below(&k, 50)
            .into_iter()
            .map(|p| p.norm)
            .collect();
        // norms: 4 (inert 2), 5 (ramified), 9, 11x2, 19x2, 29x2, 31x2, 41x2, 49
        assert_eq!(t, alloc::vec![4, 5, 9, 11, 11, 19, 19, 29, 29, 31, 31, 41, 41, 49]);
    }
}
