//! Frey-curve analysis for `c^r a^p + b^p + c^p = 0` (coefficient base
//! times p-th powers): invariants of `y^2 = x(x - A)(x + B)`, reduction
//! classification at every prime, conductors, the Serre conductor recipe,
//! and the frozen lowered-level plans per field.
//!
//! The exponent `p` stays symbolic: valuations of the Frey data are affine
//! in `p` and are carried as `constant + coeff * p` pairs, instantiated
//! only when a concrete exponent is supplied.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::poly;
use crate::quadfield::{AlgebraicInteger, FieldError, FieldSpec, PrimeIdeal};
use crate::records::Level;
use crate::residue::{self, ResidueError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FreyError {
    DegenerateTriple,
    NormalizationMissing,
    NotPrimitive(String),
    UnsupportedField(i64),
    Field(FieldError),
    Residue(ResidueError),
}

impl fmt::Display for FreyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FreyError::DegenerateTriple => write!(f, "A*B*(A+B) must be nonzero"),
            FreyError::NormalizationMissing => {
                write!(f, "solution carries no unit-scaling (lambda) choice")
            }
            FreyError::NotPrimitive(w) => write!(f, "triple is not primitive: {w}"),
            FreyError::UnsupportedField(d) => write!(f, "no case plan for d = {d}"),
            FreyError::Field(e) => write!(f, "{e}"),
            FreyError::Residue(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for FreyError {}

impl From<FieldError> for FreyError {
    fn from(e: FieldError) -> Self {
        FreyError::Field(e)
    }
}

impl From<ResidueError> for FreyError {
    fn from(e: ResidueError) -> Self {
        FreyError::Residue(e)
    }
}

/// A valuation affine in the symbolic exponent: `constant + p_coeff * p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SymbolicVal {
    pub constant: i64,
    pub p_coeff: i64,
}

impl SymbolicVal {
    pub fn new(constant: i64, p_coeff: i64) -> Self {
        SymbolicVal { constant, p_coeff }
    }

    pub fn eval(&self, p: u64) -> i64 {
        self.constant + self.p_coeff * p as i64
    }

    /// Whether `p` divides the value for every prime exponent `p`.
    pub fn divisible_by_p_always(&self) -> bool {
        self.constant == 0
    }

    /// Whether the value is negative for all `p >= p_min`.
    pub fn negative_for_all(&self, p_min: u64) -> bool {
        self.p_coeff < 0 && self.eval(p_min) < 0 || self.p_coeff <= 0 && self.eval(p_min) < 0
    }
}

impl fmt::Display for SymbolicVal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:+}p", self.constant, self.p_coeff)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParityCase {
    /// The prime above 2 divides `abc` (automatic when 2 ramifies).
    EvenAbc,
    /// `2` inert and coprime to `abc` (the imaginary-field extra case).
    OddAbc,
}

/// A putative solution `(a, b, c)` of `coeff^r a^p + b^p + c^p = 0`,
/// normalized so the prime above 2 divides `b` in the even case; the
/// exponent is symbolic.
#[derive(Debug, Clone)]
pub struct FreySolution {
    pub field: FieldSpec,
    pub coeff: i64,
    pub r: u32,
    pub a: AlgebraicInteger,
    pub b: AlgebraicInteger,
    pub c: AlgebraicInteger,
    pub parity: ParityCase,
    /// Recorded unit-scaling branch: index into the cokernel classes.
    pub lambda_index: Option<usize>,
}

impl FreySolution {
    pub fn new(
        field: FieldSpec,
        r: u32,
        a: AlgebraicInteger,
        b: AlgebraicInteger,
        c: AlgebraicInteger,
        parity: ParityCase,
    ) -> Result<Self, FreyError> {
        let coeff = equation_coefficient(&field).ok_or(FreyError::UnsupportedField(field.d()))?;
        if a.is_zero() || b.is_zero() || c.is_zero() {
            return Err(FreyError::DegenerateTriple);
        }
        Ok(FreySolution {
            field,
            coeff,
            r,
            a,
            b,
            c,
            parity,
            lambda_index: None,
        })
    }

    pub fn with_lambda(mut self, index: usize) -> Self {
        self.lambda_index = Some(index);
        self
    }

    /// Pairwise coprimality of `(coeff * a, b, c)` via ideal valuations.
    pub fn is_primitive(&self) -> Result<bool, FreyError> {
        let k = &self.field;
        let ca = k.mul_int(&self.a, &BigInt::from(self.coeff));
        let pairs = [(&ca, &self.b), (&ca, &self.c), (&self.b, &self.c)];
        for (u, v) in pairs {
            let g = k.norm(u).abs().gcd(&k.norm(v).abs());
            // shared prime ideal iff some prime above a common rational
            // prime divides both
            if g > num_traits::One::one() {
                for (q, _) in poly::factor(&g) {
                    let q64: u64 = (&q).try_into().expect("small test prime");
                    for p in k.split_rational_prime(q64) {
                        if k.valuation(u, &p)? > 0 && k.valuation(v, &p)? > 0 {
                            return Ok(false);
                        }
                    }
                }
            }
        }
        Ok(true)
    }

    /// Instantiates the exponent: `(A, B, C) = (coeff^r a^p, b^p, c^p)`.
    pub fn instantiate(&self, p: u64) -> (AlgebraicInteger, AlgebraicInteger, AlgebraicInteger) {
        let k = &self.field;
        let coeff_pow = BigInt::from(self.coeff).pow(self.r);
        let big_a = k.mul_int(&k.pow(&self.a, p), &coeff_pow);
        let big_b = k.pow(&self.b, p);
        let big_c = k.pow(&self.c, p);
        (big_a, big_b, big_c)
    }
}

/// The c-invariants of `y^2 = x(x - A)(x + B)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreyInvariants {
    pub delta: AlgebraicInteger,
    pub c4: AlgebraicInteger,
    pub c6: AlgebraicInteger,
}

impl FreyInvariants {
    /// `j = c4^3 / delta`, as an exact pair reduced by integer content.
    pub fn j_pair(&self, field: &FieldSpec) -> (AlgebraicInteger, AlgebraicInteger) {
        let num = field.pow(&self.c4, 3);
        let den = self.delta.clone();
        let mut content = num.x.gcd(&num.y).gcd(&den.x.gcd(&den.y));
        if content.is_zero() {
            content = num_traits::One::one();
        }
        (
            AlgebraicInteger::new(&num.x / &content, &num.y / &content),
            AlgebraicInteger::new(&den.x / &content, &den.y / &content),
        )
    }

    /// Checks `j = n` exactly (cross-multiplied).
    pub fn j_equals_int(&self, field: &FieldSpec, n: i64) -> bool {
        let num = field.pow(&self.c4, 3);
        let rhs = field.mul_int(&self.delta, &BigInt::from(n));
        num == rhs
    }
}

/// `Delta = 16 (ABC)^2`, `c4 = 16 (A^2 + AB + B^2)`,
/// `c6 = 32 (A - B)(A - C)(B - C)` for `C = -A - B`.
pub fn invariants(
    field: &FieldSpec,
    big_a: &AlgebraicInteger,
    big_b: &AlgebraicInteger,
) -> Result<FreyInvariants, FreyError> {
    let big_c = field.neg(&field.add(big_a, big_b));
    if big_a.is_zero() || big_b.is_zero() || big_c.is_zero() {
        return Err(FreyError::DegenerateTriple);
    }
    let abc = field.mul(&field.mul(big_a, big_b), &big_c);
    let delta = field.mul_int(&field.mul(&abc, &abc), &BigInt::from(16));
    let a2 = field.mul(big_a, big_a);
    let ab = field.mul(big_a, big_b);
    let b2 = field.mul(big_b, big_b);
    let c4 = field.mul_int(&field.add(&field.add(&a2, &ab), &b2), &BigInt::from(16));
    let c6 = field.mul_int(
        &field.mul(
            &field.mul(&field.sub(big_a, big_b), &field.sub(big_a, &big_c)),
            &field.sub(big_b, &big_c),
        ),
        &BigInt::from(32),
    );
    Ok(FreyInvariants { delta, c4, c6 })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReductionKind {
    Good,
    Multiplicative,
    Additive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PotentialKind {
    Good,
    Multiplicative,
}

/// Classification of the Frey curve at one prime, with its certificate
/// valuations (affine in the symbolic exponent).
#[derive(Debug, Clone)]
pub struct ReductionType {
    pub prime_label: String,
    pub kind: ReductionKind,
    pub potential: PotentialKind,
    pub conductor_exponent: u32,
    pub v_delta: SymbolicVal,
    pub v_c4_lower_bound: SymbolicVal,
    pub v_j: Option<SymbolicVal>,
}

/// Classifies reduction at `p`: multiplicative at primes over the
/// coefficient, multiplicative at other odd primes dividing `abc`,
/// potentially multiplicative (even case) or potentially good (odd case)
/// at the primes over 2, good elsewhere.
pub fn reduction_type(sol: &FreySolution, prime: &PrimeIdeal) -> Result<ReductionType, FreyError> {
    let k = &sol.field;
    let va = k.valuation(&sol.a, prime)? as i64;
    let vb = k.valuation(&sol.b, prime)? as i64;
    let vc = k.valuation(&sol.c, prime)? as i64;
    let vabc = va + vb + vc;
    let label = prime.label();
    if prime.residue_char == 2 {
        let v2 = k.valuation(&AlgebraicInteger::from_int(2), prime)? as i64;
        match sol.parity {
            ParityCase::EvenAbc => {
                // exactly one of a, b, c is divisible by this prime
                // (normalized to b when 2 has a unique prime above it)
                if vabc == 0 {
                    return Err(FreyError::NotPrimitive(String::from(
                        "even case requires the prime above 2 to divide abc",
                    )));
                }
                let v_delta = SymbolicVal::new(4 * v2, 2 * vabc);
                let v_c4 = SymbolicVal::new(4 * v2, 0);
                let v_j = SymbolicVal::new(8 * v2, -2 * vabc);
                let exponent = lambda_exponent(sol, prime)?;
                let kind = if exponent == 1 {
                    ReductionKind::Multiplicative
                } else {
                    ReductionKind::Additive
                };
                Ok(ReductionType {
                    prime_label: label,
                    kind,
                    potential: PotentialKind::Multiplicative,
                    conductor_exponent: exponent,
                    v_delta,
                    v_c4_lower_bound: v_c4,
                    v_j: Some(v_j),
                })
            }
            ParityCase::OddAbc => {
                if vabc != 0 {
                    return Err(FreyError::NotPrimitive(String::from(
                        "odd case requires abc coprime to 2",
                    )));
                }
                // v(c4) >= 4 v(2) + 1, v(Delta) = 4 v(2): v(j) >= 11 > 0
                Ok(ReductionType {
                    prime_label: label,
                    kind: ReductionKind::Additive,
                    potential: PotentialKind::Good,
                    conductor_exponent: 4,
                    v_delta: SymbolicVal::new(4 * v2, 0),
                    v_c4_lower_bound: SymbolicVal::new(4 * v2 + 1, 0),
                    v_j: None,
                })
            }
        }
    } else if sol.coeff.unsigned_abs().is_multiple_of(prime.residue_char) {
        // prime above the coefficient: multiplicative (v(c4) = 0)
        if vb > 0 || vc > 0 {
            return Err(FreyError::NotPrimitive(String::from(
                "prime above the coefficient divides b or c",
            )));
        }
        let vd = k.valuation(&AlgebraicInteger::from_int(sol.coeff), prime)? as i64;
        Ok(ReductionType {
            prime_label: label,
            kind: ReductionKind::Multiplicative,
            potential: PotentialKind::Multiplicative,
            conductor_exponent: 1,
            v_delta: SymbolicVal::new(2 * sol.r as i64 * vd, 2 * vabc),
            v_c4_lower_bound: SymbolicVal::new(0, 0),
            v_j: Some(SymbolicVal::new(-2 * sol.r as i64 * vd, -2 * vabc)),
        })
    } else if vabc > 0 {
        let distinct = [va, vb, vc].iter().filter(|&&v| v > 0).count();
        if distinct > 1 {
            return Err(FreyError::NotPrimitive(String::from(
                "an odd prime divides two of a, b, c",
            )));
        }
        Ok(ReductionType {
            prime_label: label,
            kind: ReductionKind::Multiplicative,
            potential: PotentialKind::Multiplicative,
            conductor_exponent: 1,
            v_delta: SymbolicVal::new(0, 2 * vabc),
            v_c4_lower_bound: SymbolicVal::new(0, 0),
            v_j: Some(SymbolicVal::new(0, -2 * vabc)),
        })
    } else {
        Ok(ReductionType {
            prime_label: label,
            kind: ReductionKind::Good,
            potential: PotentialKind::Good,
            conductor_exponent: 0,
            v_delta: SymbolicVal::new(0, 0),
            v_c4_lower_bound: SymbolicVal::new(0, 0),
            v_j: None,
        })
    }
}

/// Conductor exponent at a prime over 2 for the recorded scaling branch:
/// the minimal exponent of the branch's square classes.
fn lambda_exponent(sol: &FreySolution, prime: &PrimeIdeal) -> Result<u32, FreyError> {
    let idx = sol.lambda_index.ok_or(FreyError::NormalizationMissing)?;
    let coker = residue::unit_square_cokernel(&sol.field, residue::build_b_ideal(&sol.field))?;
    let vectors = coker.sharp_exponent_vectors();
    let vec = vectors
        .get(idx)
        .ok_or(FreyError::NormalizationMissing)?;
    // position of this prime among the primes above 2
    let pos = sol
        .field
        .split_rational_prime(2)
        .iter()
        .position(|q| q.label() == prime.label())
        .expect("prime above 2");
    Ok(vec[pos])
}

/// The conductor as a factored ideal (exponents concrete; the primes away
/// from 2 all carry exponent 1).
pub fn conductor(sol: &FreySolution) -> Result<Level, FreyError> {
    let k = &sol.field;
    let mut factors: Vec<(PrimeIdeal, u32)> = Vec::new();
    for p in k.split_rational_prime(2) {
        let rt = reduction_type(sol, &p)?;
        factors.push((p, rt.conductor_exponent));
    }
    // primes above the coefficient
    for (q, _) in poly::factor(&BigInt::from(sol.coeff).abs()) {
        let q64: u64 = (&q).try_into().expect("coefficient is small");
        if q64 == 2 {
            continue;
        }
        for p in k.split_rational_prime(q64) {
            factors.push((p, 1));
        }
    }
    // multiplicative primes dividing abc away from 2 and the coefficient
    let norm_abc = (k.norm(&sol.a) * k.norm(&sol.b) * k.norm(&sol.c)).abs();
    for (q, _) in poly::factor(&norm_abc) {
        let q64: u64 = match (&q).try_into() {
            Ok(v) => v,
            Err(_) => continue,
        };
        if q64 == 2 || sol.coeff.unsigned_abs().is_multiple_of(q64) {
            continue;
        }
        for p in k.split_rational_prime(q64) {
            let v = k.valuation(&sol.a, &p)?
                + k.valuation(&sol.b, &p)?
                + k.valuation(&sol.c, &p)?;
            if v > 0 {
                factors.push((p, 1));
            }
        }
    }
    Ok(Level::new(factors))
}

/// Kraus recipe for the Serre conductor in the imaginary (additive at 2)
/// case: `p^4` when `p | r`, else `p^4 * D`.
pub fn serre_conductor(sol: &FreySolution, p_divides_r: bool) -> Result<Level, FreyError> {
    let k = &sol.field;
    assert!(!k.is_real(), "recipe is stated for the imaginary fields");
    let p2 = k.split_rational_prime(2).remove(0);
    let mut factors = vec![(p2, 4u32)];
    if !p_divides_r {
        let d = k
            .split_rational_prime(sol.coeff.unsigned_abs())
            .remove(0);
        factors.push((d, 1));
    }
    Ok(Level::new(factors))
}

/// Equation coefficient base for each supported field: `d` itself, except
/// for `d = 6, 14` where the equation uses the odd ramified prime.
pub fn equation_coefficient(field: &FieldSpec) -> Option<i64> {
    match field.d() {
        6 => Some(3),
        14 => Some(7),
        d @ (3 | 5 | 7 | 11 | 13 | 19 | 23 | 17 | 21 | 29) => Some(d),
        d @ (-3 | -11 | -19 | -43 | -67) => Some(d),
        _ => None,
    }
}

/// Exponents of the prime(s) above 2 in the candidate lowered levels
/// (frozen per-field plan; the machinery's sharp sets are verified to be
/// subsets in the acceptance suite).
pub fn lowered_p_exponents(field: &FieldSpec) -> Result<Vec<u32>, FreyError> {
    Ok(match field.d() {
        3 | 5 | 7 | 11 | 19 | 23 | 17 | 21 | 29 => vec![1, 4],
        13 => vec![1],
        6 | 14 => vec![1, 8],
        -3 | -11 | -19 | -43 => vec![0, 1, 2, 3, 4],
        -67 => vec![0, 1, 2, 3],
        d => return Err(FreyError::UnsupportedField(d)),
    })
}

/// The candidate lowered levels for the field and parity case.
pub fn lowered_level(field: &FieldSpec, _parity: ParityCase) -> Result<Vec<Level>, FreyError> {
    let coeff = equation_coefficient(field).ok_or(FreyError::UnsupportedField(field.d()))?;
    let exps = lowered_p_exponents(field)?;
    let twos = field.split_rational_prime(2);
    let mut odd_part: Vec<(PrimeIdeal, u32)> = Vec::new();
    for (q, _) in poly::factor(&BigInt::from(coeff).abs()) {
        let q64: u64 = (&q).try_into().expect("coefficient is small");
        if q64 == 2 {
            continue;
        }
        for p in field.split_rational_prime(q64) {
            odd_part.push((p, 1));
        }
    }
    let mut out = Vec::new();
    for i in exps {
        let mut factors = odd_part.clone();
        match twos.len() {
            1 => {
                if i > 0 {
                    factors.push((twos[0].clone(), i));
                }
            }
            2 => {
                // split 2 (d = 17): p1 * p2^i
                factors.push((twos[0].clone(), 1));
                factors.push((twos[1].clone(), i));
            }
            _ => unreachable!(),
        }
        out.push(Level::new(factors));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(d: i64) -> FieldSpec {
        FieldSpec::new(d).unwrap()
    }

    #[test]
    fn invariants_symmetric_case() {
        let k = f(5);
        let one = AlgebraicInteger::from_int(1);
        let inv = invariants(&k, &one, &one).unwrap();
        assert_eq!(inv.delta, AlgebraicInteger::from_int(64));
        assert_eq!(inv.c4, AlgebraicInteger::from_int(48));
        assert!(inv.j_equals_int(&k, 1728));
        // A = 1, B = -2 -> C = 1, same shape by symmetry
        let inv2 = invariants(&k, &one, &AlgebraicInteger::from_int(-2)).unwrap();
        assert_eq!(inv2.delta, AlgebraicInteger::from_int(64));
        assert_eq!(inv2.c4, AlgebraicInteger::from_int(48));
        assert!(matches!(
            invariants(&k, &one, &AlgebraicInteger::from_int(-1)),
            Err(FreyError::DegenerateTriple)
        ));
    }

    #[test]
    fn j_pair_reduction() {
        let k = f(5);
        let one = AlgebraicInteger::from_int(1);
        let inv = invariants(&k, &one, &one).unwrap();
        let (num, den) = inv.j_pair(&k);
        assert_eq!(num, AlgebraicInteger::from_int(1728));
        assert_eq!(den, AlgebraicInteger::from_int(1));
    }

    #[test]
    fn symbolic_valuation_helpers() {
        let v = SymbolicVal::new(0, 2);
        assert!(v.divisible_by_p_always());
        assert_eq!(v.eval(7), 14);
        let w = SymbolicVal::new(16, -2);
        assert!(!w.divisible_by_p_always());
        assert!(w.negative_for_all(11));
        assert!(!w.negative_for_all(7));
    }

    #[test]
    fn c_invariant_identity() {
        let k = f(3);
        for (ax, ay, bx, by) in [(1i64, 1i64, 2i64, 0i64), (3, -2, 1, 1), (-5, 1, 2, 3)] {
            let a = AlgebraicInteger::from_coords(ax, ay);
            let b = AlgebraicInteger::from_coords(bx, by);
            if k.add(&a, &b).is_zero() {
                continue;
            }
            let inv = invariants(&k, &a, &b).unwrap();
            let lhs = k.sub(&k.pow(&inv.c4, 3), &k.mul(&inv.c6, &inv.c6));
            let rhs = k.mul_int(&inv.delta, &BigInt::from(1728));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn reduction_at_coefficient_prime() {
        // d = 3: a = 1, b = 1 + 2w (odd norm), need p | b... use the
        // ramified prime above 3 which must be multiplicative
        let k = f(3);
        let sol = FreySolution::new(
            k.clone(),
            1,
            AlgebraicInteger::from_int(1),
            k.from_sqrt_coords(1, 2), // 1 + 2 sqrt(3): norm -11, even at p2? N = -11 odd
            AlgebraicInteger::from_int(1),
            ParityCase::EvenAbc,
        )
        .unwrap();
        // normalized even-case solution: b = 1 + sqrt(3) has valuation
        // exactly 1 at the ramified prime above 2
        let sol = FreySolution {
            b: k.from_sqrt_coords(1, 1),
            ..sol
        };
        let d3 = k.split_rational_prime(3).remove(0);
        let rt = reduction_type(&sol, &d3).unwrap();
        assert_eq!(rt.kind, ReductionKind::Multiplicative);
        assert_eq!(rt.conductor_exponent, 1);
        // v_D(Delta) = 2 r v_D(coeff) + 2p v_D(abc) = 4 + 0p (v_D(3) = 2)
        assert_eq!(rt.v_delta, SymbolicVal::new(4, 0));
        let p2 = k.split_rational_prime(2).remove(0);
        let rt2 = reduction_type(&sol.clone().with_lambda(0), &p2).unwrap();
        // even case at the ramified 2: v(j) = 8 v(2) - 2 p v(b) = 16 - 2p
        assert_eq!(rt2.v_j, Some(SymbolicVal::new(16, -2)));
        assert_eq!(rt2.potential, PotentialKind::Multiplicative);
    }

    #[test]
    fn lambda_branch_exponents() {
        let k = f(3);
        let sol = FreySolution::new(
            k.clone(),
            1,
            AlgebraicInteger::from_int(1),
            AlgebraicInteger::from_int(2),
            AlgebraicInteger::from_int(1),
            ParityCase::EvenAbc,
        )
        .unwrap();
        let p2 = k.split_rational_prime(2).remove(0);
        assert!(matches!(
            reduction_type(&sol, &p2),
            Err(FreyError::NormalizationMissing)
        ));
        let s0 = sol.clone().with_lambda(0);
        assert_eq!(reduction_type(&s0, &p2).unwrap().conductor_exponent, 1);
        let s1 = sol.with_lambda(1);
        assert_eq!(reduction_type(&s1, &p2).unwrap().conductor_exponent, 4);
    }

    #[test]
    fn odd_case_additive() {
        let k = f(-3);
        let sol = FreySolution::new(
            k.clone(),
            1,
            AlgebraicInteger::from_int(1),
            AlgebraicInteger::from_coords(0, 1),
            AlgebraicInteger::from_coords(-1, -1),
            ParityCase::OddAbc,
        )
        .unwrap();
        let p2 = k.split_rational_prime(2).remove(0);
        let rt = reduction_type(&sol, &p2).unwrap();
        assert_eq!(rt.kind, ReductionKind::Additive);
        assert_eq!(rt.potential, PotentialKind::Good);
        assert_eq!(rt.conductor_exponent, 4);
        assert_eq!(rt.v_delta, SymbolicVal::new(4, 0));
    }

    #[test]
    fn serre_conductor_recipe() {
        let k = f(-19);
        let sol = FreySolution::new(
            k.clone(),
            1,
            AlgebraicInteger::from_int(1),
            AlgebraicInteger::from_int(2),
            AlgebraicInteger::from_int(1),
            ParityCase::EvenAbc,
        )
        .unwrap();
        let n_p = serre_conductor(&sol, false).unwrap();
        assert_eq!(n_p.key(), "q2n4^4.q19n19r10");
        assert_eq!(n_p.norm(), BigInt::from(256 * 19));
        let n_p_r = serre_conductor(&sol, true).unwrap();
        assert_eq!(n_p_r.key(), "q2n4^4");
    }

    #[test]
    fn lowered_levels_frozen() {
        let lv = lowered_level(&f(13), ParityCase::EvenAbc).unwrap();
        assert_eq!(lv.len(), 1);
        assert_eq!(lv[0].norm(), BigInt::from(52));
        let lv7 = lowered_level(&f(7), ParityCase::EvenAbc).unwrap();
        let norms: Vec<BigInt> = lv7.iter().map(|l| l.norm()).collect();
        assert_eq!(norms, vec![BigInt::from(14), BigInt::from(112)]);
        let lvm19 = lowered_level(&f(-19), ParityCase::EvenAbc).unwrap();
        let norms: Vec<BigInt> = lvm19.iter().map(|l| l.norm()).collect();
        assert_eq!(
            norms,
            vec![
                BigInt::from(19),
                BigInt::from(76),
                BigInt::from(304),
                BigInt::from(1216),
                BigInt::from(4864)
            ]
        );
        // d=17: split 2, levels p1 p2^i D
        let lv17 = lowered_level(&f(17), ParityCase::EvenAbc).unwrap();
        let norms: Vec<BigInt> = lv17.iter().map(|l| l.norm()).collect();
        assert_eq!(norms, vec![BigInt::from(68), BigInt::from(544)]);
        // d=6: l-variant, levels p^i L3 with i in {1,8}
        let lv6 = lowered_level(&f(6), ParityCase::EvenAbc).unwrap();
        let norms: Vec<BigInt> = lv6.iter().map(|l| l.norm()).collect();
        assert_eq!(norms, vec![BigInt::from(6), BigInt::from(768)]);
    }

    #[test]
    fn conductor_factored_shape() {
        // d=7, a = 5 (inert), b = 1 + sqrt7 (prime above 2 and one prime
        // above 3), c = 1 + 2 sqrt7 (the other prime above 3)
        let k = f(7);
        let sol = FreySolution::new(
            k.clone(),
            1,
            AlgebraicInteger::from_int(5),
            k.from_sqrt_coords(1, 1),
            k.from_sqrt_coords(1, 2),
            ParityCase::EvenAbc,
        )
        .unwrap()
        .with_lambda(0);
        let n = conductor(&sol).unwrap();
        // exponent 1 at the prime above 2 (lambda 0 branch), 1 at the
        // ramified prime above 7, 1 at the inert 5 and both primes above 3
        assert_eq!(n.exponent_of("q2n2r1"), 1);
        assert_eq!(n.exponent_of("q7n7r0"), 1);
        assert_eq!(n.exponent_of("q5n25"), 1);
        assert_eq!(n.factors().len(), 5);
        assert!(n.factors().iter().all(|(_, e)| *e == 1));
        // additive branch: lambda 1 has exponent 4 for d=7
        let n4 = conductor(&sol.clone().with_lambda(2)).unwrap();
        assert_eq!(n4.exponent_of("q2n2r1"), 4);
    }

    #[test]
    fn primitivity() {
        let k = f(5);
        let sol = FreySolution::new(
            k.clone(),
            1,
            AlgebraicInteger::from_int(1),
            AlgebraicInteger::from_int(2),
            AlgebraicInteger::from_int(3),
            ParityCase::EvenAbc,
        )
        .unwrap();
        assert!(sol.is_primitive().unwrap());
        let bad = FreySolution::new(
            k.clone(),
            1,
            AlgebraicInteger::from_int(3),
            AlgebraicInteger::from_int(2),
            AlgebraicInteger::from_int(9),
            ParityCase::EvenAbc,
        )
        .unwrap();
        assert!(!bad.is_primitive().unwrap());
    }
}
