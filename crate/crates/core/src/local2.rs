//! 2-adic local analysis: discriminant valuations of quadratic extensions
//! `K_p(sqrt(lambda))/K_p` for primes `p | 2`, the conductor-exponent rule
//! for potentially multiplicative reduction, and the Tate step-3
//! permutation argument for the inert odd-coefficient case.
//!
//! The completion is never materialized: solvability of `x^2 = lambda`
//! inside `O_K/p^k` for `k <= 2e+3` decides everything (squares are
//! detected at `k = 2e+1` by Hensel, the unramified class at `k = 2e`).

use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;

use crate::quadfield::{AlgebraicInteger, FieldError, FieldSpec, PrimeIdeal, SplitType};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LocalError {
    OddValuation(u64),
    PreconditionViolated(&'static str),
    Field(FieldError),
}

impl fmt::Display for LocalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LocalError::OddValuation(v) => {
                write!(f, "lambda has odd valuation {v}; strip square parts first")
            }
            LocalError::PreconditionViolated(msg) => write!(f, "precondition violated: {msg}"),
            LocalError::Field(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for LocalError {}

impl From<FieldError> for LocalError {
    fn from(e: FieldError) -> Self {
        LocalError::Field(e)
    }
}

/// The local quadratic extension `K_p(sqrt(lambda))/K_p` together with the
/// valuation of its relative discriminant.
#[derive(Debug, Clone)]
pub struct LocalSqrtExtension {
    pub prime_label: alloc::string::String,
    pub lambda: AlgebraicInteger,
    pub disc_valuation: u32,
}

impl LocalSqrtExtension {
    pub fn new(
        field: &FieldSpec,
        prime: &PrimeIdeal,
        lambda: AlgebraicInteger,
    ) -> Result<Self, LocalError> {
        let n = sqrt_ext_disc_valuation(field, prime, &lambda)?;
        debug_assert!(n <= 2 * prime.ramification_index + 1);
        Ok(LocalSqrtExtension {
            prime_label: prime.label(),
            lambda,
            disc_valuation: n,
        })
    }

    /// The extension is trivial or unramified iff the discriminant
    /// valuation vanishes.
    pub fn is_unramified(&self) -> bool {
        self.disc_valuation == 0
    }
}

/// Valuation of the relative discriminant of `K_p(sqrt(lambda))/K_p`,
/// for `p | 2` and `v_p(lambda)` even (error on odd valuation).
///
/// Exhaustively tests solvability of `x^2 = lambda` in `O_K/p^k` for
/// increasing `k`; the largest solvable `k` classifies the extension:
/// `k >= 2e+1` square (Hensel), `k = 2e` unramified, odd `k = m < 2e`
/// ramified with discriminant valuation `2e - m + 1`.
pub fn sqrt_ext_disc_valuation(
    field: &FieldSpec,
    prime: &PrimeIdeal,
    lambda: &AlgebraicInteger,
) -> Result<u32, LocalError> {
    assert_eq!(prime.residue_char, 2);
    if lambda.is_zero() {
        return Err(LocalError::PreconditionViolated("lambda must be nonzero"));
    }
    let v = field.valuation(lambda, prime)?;
    if v % 2 == 1 {
        return Err(LocalError::OddValuation(v));
    }
    let e = prime.ramification_index;
    let mut lam = lambda.clone();
    if v > 0 {
        // strip the even 2-part: divide by 2^(v/e); exact since p^e = (2)
        let k = v / u64::from(e);
        let q = BigInt::from(2).pow(k as u32);
        lam = AlgebraicInteger::new(&lam.x / &q, &lam.y / &q);
        debug_assert_eq!(field.valuation(&lam, prime)?, 0);
    }
    let top = 2 * e + 3;
    let mut k_max = 0;
    for k in 1..=top {
        let lat = prime.lattice.pow(field, k);
        let solvable = lat.residues().iter().any(|x| {
            let diff = field.sub(&field.mul(x, x), &lam);
            lat.contains(&diff)
        });
        if !solvable {
            break;
        }
        k_max = k;
    }
    debug_assert!(k_max >= 1, "every unit is a square in the residue field");
    if k_max >= 2 * e {
        Ok(0)
    } else {
        debug_assert!(k_max % 2 == 1, "solvability extends from even k < 2e");
        Ok(2 * e - k_max + 1)
    }
}

/// Conductor exponent of a curve with potentially multiplicative reduction
/// in terms of the discriminant valuation `n` of the splitting extension:
/// `1` when unramified, `2n` otherwise.
pub fn conductor_exponent_potmult(n: u32) -> u32 {
    if n == 0 {
        1
    } else {
        2 * n
    }
}

/// Which of the original positions (A, B, C) each slot of the permuted
/// triple came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TatePermutation {
    /// `order[i]` = original index of the element now in slot i.
    pub order: [usize; 3],
    pub swapped_ab: bool,
    pub conductor_exponent: u32,
}

/// Step 3 of Tate's algorithm for the model `y^2 = x(x - A)(x + B)` at an
/// inert prime over 2 (residue field F4), with `A + B + C = 0` and
/// `ABC` a unit at the prime: permutes `(A, B, C)` so that the translated
/// model has `a6` of valuation exactly 1, certifying conductor exponent 4.
pub fn tate_step3_permutation(
    field: &FieldSpec,
    a: &AlgebraicInteger,
    b: &AlgebraicInteger,
    c: &AlgebraicInteger,
    prime: &PrimeIdeal,
) -> Result<TatePermutation, LocalError> {
    if prime.residue_char != 2
        || prime.split_type != SplitType::Inert
        || prime.residue_degree != 2
    {
        return Err(LocalError::PreconditionViolated(
            "prime must be inert over 2 with residue field F4",
        ));
    }
    let sum = field.add(&field.add(a, b), c);
    if !sum.is_zero() {
        return Err(LocalError::PreconditionViolated("A + B + C must vanish"));
    }
    for (name, z) in [("A", a), ("B", b), ("C", c)] {
        if z.is_zero() || field.valuation(z, prime)? > 0 {
            let _ = name;
            return Err(LocalError::PreconditionViolated(
                "A, B, C must be units at the prime",
            ));
        }
    }
    // residues in F4 = O_K/p, represented by coordinates mod 2; the three
    // residues are 1, alpha, alpha^2 in some order
    let res = |z: &AlgebraicInteger| -> (u8, u8) {
        use num_integer::Integer;
        let two = BigInt::from(2);
        let x: u8 = (&z.x.mod_floor(&two)).try_into().unwrap();
        let y: u8 = (&z.y.mod_floor(&two)).try_into().unwrap();
        (x, y)
    };
    let triple = [a.clone(), b.clone(), c.clone()];
    let residues: Vec<(u8, u8)> = triple.iter().map(res).collect();
    let alpha_sq = (1u8, 1u8); // alpha^2 = alpha + 1
    let pos = residues
        .iter()
        .position(|&r| r == alpha_sq)
        .expect("residues are 1, alpha, alpha^2 in some order");
    // rotate so that the alpha^2 element sits in slot C (index 2)
    let order: [usize; 3] = match pos {
        2 => [0, 1, 2],
        0 => [1, 2, 0],
        1 => [2, 0, 1],
        _ => unreachable!(),
    };
    let (pa, pb, pc) = (
        &triple[order[0]],
        &triple[order[1]],
        &triple[order[2]],
    );
    let a6 = translated_a6(field, pa, pb, pc);
    let v_a6 = field.valuation(&a6, prime)?;
    if v_a6 < 2 {
        return Ok(TatePermutation {
            order,
            swapped_ab: false,
            conductor_exponent: 4,
        });
    }
    // swap A and B: a6' - a6 = 2(A - B)C^2 has valuation exactly 1
    let order = [order[1], order[0], order[2]];
    let a6p = translated_a6(field, pb, pa, pc);
    debug_assert_eq!(field.valuation(&a6p, prime)?, 1);
    Ok(TatePermutation {
        order,
        swapped_ab: true,
        conductor_exponent: 4,
    })
}

/// `a6` of the model after translating the singular point `(C, 1)` to the
/// origin: `C^3 + (B - A) C^2 - ABC - 1`.
pub fn translated_a6(
    field: &FieldSpec,
    a: &AlgebraicInteger,
    b: &AlgebraicInteger,
    c: &AlgebraicInteger,
) -> AlgebraicInteger {
    let c2 = field.mul(c, c);
    let c3 = field.mul(&c2, c);
    let t1 = field.mul(&field.sub(b, a), &c2);
    let t2 = field.mul(&field.mul(a, b), c);
    let one = field.one();
    field.sub(&field.sub(&field.add(&c3, &t1), &t2), &one)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(d: i64) -> FieldSpec {
        FieldSpec::new(d).unwrap()
    }

    #[test]
    fn d3_local_discriminants() {
        let k = f(3);
        let p = &k.split_rational_prime(2)[0];
        // n1 = 0 for lambda = 1
        assert_eq!(sqrt_ext_disc_valuation(&k, p, &k.one()).unwrap(), 0);
        // n2 = 2 for lambda = -1 + 2 sqrt(3)
        let lam = k.from_sqrt_coords(-1, 2);
        assert_eq!(sqrt_ext_disc_valuation(&k, p, &lam).unwrap(), 2);
    }

    #[test]
    fn trivial_extension_inert() {
        let k = f(5);
        let p = &k.split_rational_prime(2)[0];
        assert_eq!(sqrt_ext_disc_valuation(&k, p, &k.one()).unwrap(), 0);
        // 4 = 2^2 has even valuation and unit part 1
        assert_eq!(
            sqrt_ext_disc_valuation(&k, p, &AlgebraicInteger::from_int(4)).unwrap(),
            0
        );
        // odd valuation rejected
        assert!(matches!(
            sqrt_ext_disc_valuation(&k, p, &AlgebraicInteger::from_int(2)),
            Err(LocalError::OddValuation(1))
        ));
    }

    #[test]
    fn ramified_class_inert() {
        // -1 is not a square in the unramified quadratic 2-adic field:
        // ramified class, n = 2, exponent 4
        let k = f(-11);
        let p = &k.split_rational_prime(2)[0];
        let n = sqrt_ext_disc_valuation(&k, p, &AlgebraicInteger::from_int(-1)).unwrap();
        assert_eq!(n, 2);
        assert_eq!(conductor_exponent_potmult(n), 4);
    }

    #[test]
    fn local_extension_type() {
        let k = f(3);
        let p = k.split_rational_prime(2).remove(0);
        let ext = LocalSqrtExtension::new(&k, &p, k.one()).unwrap();
        assert!(ext.is_unramified());
        assert_eq!(ext.disc_valuation, 0);
        let ext2 = LocalSqrtExtension::new(&k, &p, k.from_sqrt_coords(-1, 2)).unwrap();
        assert!(!ext2.is_unramified());
        assert_eq!(ext2.disc_valuation, 2);
        assert_eq!(ext2.prime_label, "q2n2r1");
    }

    #[test]
    fn conductor_exponent_rule() {
        assert_eq!(conductor_exponent_potmult(0), 1);
        assert_eq!(conductor_exponent_potmult(1), 2);
        assert_eq!(conductor_exponent_potmult(2), 4);
        assert_eq!(conductor_exponent_potmult(4), 8);
    }

    #[test]
    fn tate_permutation_basic() {
        let k = f(-3);
        let p = &k.split_rational_prime(2)[0];
        // residues 1, alpha, alpha^2: 1, w, 1+w work (w = alpha mod p)
        // need A + B + C = 0: take A = 1, B = w, C = -1 - w (C = alpha^2 + 2*...)
        let a = AlgebraicInteger::from_coords(1, 0);
        let b = AlgebraicInteger::from_coords(0, 1);
        let c = AlgebraicInteger::from_coords(-1, -1);
        let perm = tate_step3_permutation(&k, &a, &b, &c, p).unwrap();
        assert_eq!(perm.conductor_exponent, 4);
        // precondition violation: A divisible by the prime
        let bad = AlgebraicInteger::from_int(2);
        let c_bad = k.neg(&k.add(&bad, &b));
        assert!(matches!(
            tate_step3_permutation(&k, &bad, &b, &c_bad, p),
            Err(LocalError::PreconditionViolated(_))
        ));
    }

    #[test]
    fn tate_permutation_hits_both_branches() {
        // sweep small unit triples until both the no-swap and the swap
        // branch fire
        let k = f(-11);
        let p = &k.split_rational_prime(2)[0];
        let mut saw_plain = false;
        let mut saw_swap = false;
        for ax in -3i64..=3 {
            for ay in -3i64..=3 {
                for bx in -3i64..=3 {
                    for by in -3i64..=3 {
                        let a = AlgebraicInteger::from_coords(ax, ay);
                        let b = AlgebraicInteger::from_coords(bx, by);
                        let c = k.neg(&k.add(&a, &b));
                        if a.is_zero() || b.is_zero() || c.is_zero() {
                            continue;
                        }
                        let Ok(perm) = tate_step3_permutation(&k, &a, &b, &c, p) else {
                            continue;
                        };
                        assert_eq!(perm.conductor_exponent, 4);
                        if perm.swapped_ab {
                            saw_swap = true;
                        } else {
                            saw_plain = true;
                        }
                    }
                }
            }
        }
        assert!(saw_plain && saw_swap, "plain={saw_plain} swap={saw_swap}");
    }

    #[test]
    fn a6_swap_difference_valuation() {
        // a6' - a6 = 2(A - B)C^2 has valuation exactly 1 at the inert prime
        let k = f(-11);
        let p = &k.split_rational_prime(2)[0];
        for (ax, ay, bx, by) in [(1i64, 0i64, 0i64, 1i64), (3, 2, -2, 1), (1, 4, 2, -1)] {
            let a = AlgebraicInteger::from_coords(ax, ay);
            let b = AlgebraicInteger::from_coords(bx, by);
            let c = k.neg(&k.add(&a, &b));
            if c.is_zero()
                || k.valuation(&a, p).unwrap() > 0
                || k.valuation(&b, p).unwrap() > 0
                || k.valuation(&c, p).unwrap() > 0
            {
                continue;
            }
            let a6 = translated_a6(&k, &a, &b, &c);
            let a6p = translated_a6(&k, &b, &a, &c);
            let diff = k.sub(&a6p, &a6);
            // identity: a6' - a6 = 2(A-B)C^2
            let expect = k.mul(
                &k.mul(&AlgebraicInteger::from_int(2), &k.sub(&a, &b)),
                &k.mul(&c, &c),
            );
            assert_eq!(diff, expect);
            assert_eq!(k.valuation(&diff, p).unwrap(), 1);
        }
    }
}
