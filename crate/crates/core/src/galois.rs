//! Decision procedures for irreducibility and surjectivity of the mod-p
//! representation attached to the Frey curve: modular-curve lookups for
//! p = 7, 11, 13, 17, the isogeny-character analysis through ray class
//! groups and torsion bounds, the resultant criterion for the inert
//! odd-coefficient case, and the unit-norm obstruction.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::frey::ParityCase;
use crate::poly::{self, IntPoly};
use crate::quadfield::{AlgebraicInteger, FieldError, FieldSpec};
use crate::residue::{self, ResidueError};
use crate::tables;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GaloisError {
    UnsupportedPrime(u64),
    UnsupportedCase(String),
    NonPrincipalPrime,
    Field(FieldError),
    Residue(ResidueError),
}

impl fmt::Display for GaloisError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GaloisError::UnsupportedPrime(p) => {
                write!(f, "no modular-curve criterion for p = {p}")
            }
            GaloisError::UnsupportedCase(s) => write!(f, "unsupported case: {s}"),
            GaloisError::NonPrincipalPrime => write!(f, "prime above 2 has no small generator"),
            GaloisError::Field(e) => write!(f, "{e}"),
            GaloisError::Residue(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for GaloisError {}

impl From<FieldError> for GaloisError {
    fn from(e: FieldError) -> Self {
        GaloisError::Field(e)
    }
}

impl From<ResidueError> for GaloisError {
    fn from(e: ResidueError) -> Self {
        GaloisError::Residue(e)
    }
}

/// Certifies irreducibility of the mod-p representation for
/// p in {7, 11, 13, 17} via the known quadratic points on X0(4p):
/// true unless the field is one of the finitely many exceptions.
pub fn modular_curve_obstruction(p: u64, field: &FieldSpec) -> Result<bool, GaloisError> {
    let row = tables::MODULAR_CURVE_TABLE
        .iter()
        .find(|r| r.p == p)
        .ok_or(GaloisError::UnsupportedPrime(p))?;
    Ok(!row.exceptional_d.contains(&field.d()))
}

/// A monic quadratic `x^2 + s x + n` that can be the characteristic
/// polynomial of Frobenius (roots of absolute value at most sqrt(n)).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharPolyCandidate {
    pub s: i64,
    pub n: u64,
}

impl CharPolyCandidate {
    pub fn poly(&self) -> IntPoly {
        poly::from_coeffs(&[self.n as i64, self.s, 1])
    }
}

impl fmt::Display for CharPolyCandidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x^2{:+}x+{}", self.s, self.n)
    }
}

/// All monic integer quadratics `x^2 + s x + n` with `s^2 <= 4n`.
pub fn frobenius_charpoly_candidates(n: u64) -> Vec<CharPolyCandidate> {
    assert!(n >= 2);
    let bound = {
        let mut b = 0u64;
        while (b + 1) * (b + 1) <= 4 * n {
            b += 1;
        }
        b as i64
    };
    (-bound..=bound)
        .map(|s| CharPolyCandidate { s, n })
        .collect()
}

/// The candidates that can arise from a curve whose reduction is
/// supersingular: the trace is divisible by the residue characteristic.
/// A positive j-valuation forces j = 0 on the reduction, which in
/// characteristic 2 is the supersingular invariant, so the potentially
/// good case only meets these.
pub fn supersingular_charpoly_candidates(n: u64, residue_char: u64) -> Vec<CharPolyCandidate> {
    frobenius_charpoly_candidates(n)
        .into_iter()
        .filter(|c| c.s.unsigned_abs() % residue_char == 0)
        .collect()
}

/// One row of the resultant table: the candidate, the exact resultant
/// against `x^m - c`, and its full factorization.
#[derive(Debug, Clone)]
pub struct ResultantRow {
    pub candidate: CharPolyCandidate,
    pub resultant: BigInt,
    pub factorization: Vec<(BigInt, u32)>,
}

/// Exact resultants `Res(x^m - c, x^2 + s x + n)` over all candidates by
/// two independent routes (root-product in `Z[x]/(x^2+sx+n)` and the
/// Sylvester determinant), their factorizations, and the largest prime.
pub fn resultant_prime_bound(
    m: u32,
    c: &BigInt,
    candidates: &[CharPolyCandidate],
) -> (BigInt, Vec<ResultantRow>) {
    assert!(m >= 1 && !c.is_zero());
    let f = poly::power_minus(m as usize, c);
    let mut rows = Vec::new();
    let mut max_prime = BigInt::zero();
    for cand in candidates {
        // route 1: beta^m - c in Z[beta], beta^2 = -s beta - n, then the
        // quadratic norm (u, v) -> u^2 - s u v + n v^2
        let (u, v) = power_in_quadratic(m, cand.s, cand.n);
        let u_shift = &u - c;
        let s_big = BigInt::from(cand.s);
        let n_big = BigInt::from(cand.n);
        let by_roots = &u_shift * &u_shift - &s_big * &u_shift * &v + n_big * &v * &v;
        // route 2: Sylvester determinant
        let by_sylvester = poly::resultant_sylvester(&f, &cand.poly());
        assert_eq!(by_roots, by_sylvester, "resultant routes disagree");
        let factorization = if by_roots.is_zero() {
            Vec::new()
        } else {
            poly::factor(&by_roots)
        };
        if let Some(p) = factorization.iter().map(|(p, _)| p).max() {
            if *p > max_prime {
                max_prime = p.clone();
            }
        }
        rows.push(ResultantRow {
            candidate: cand.clone(),
            resultant: by_roots,
            factorization,
        });
    }
    (max_prime, rows)
}

/// `x^m mod (x^2 + s x + n)` as `(u, v)` with `x^m = u + v x`.
fn power_in_quadratic(m: u32, s: i64, n: u64) -> (BigInt, BigInt) {
    let s = BigInt::from(s);
    let n = BigInt::from(n);
    // binary exponentiation on pairs: (u1 + v1 x)(u2 + v2 x)
    // = u1 u2 - n v1 v2 + (u1 v2 + u2 v1 - s v1 v2) x
    let mul = |a: &(BigInt, BigInt), b: &(BigInt, BigInt)| -> (BigInt, BigInt) {
        (
            &a.0 * &b.0 - &n * &a.1 * &b.1,
            &a.0 * &b.1 + &a.1 * &b.0 - &s * &a.1 * &b.1,
        )
    };
    let mut base = (BigInt::zero(), BigInt::from(1));
    let mut acc = (BigInt::from(1), BigInt::zero());
    let mut m = m;
    while m > 0 {
        if m & 1 == 1 {
            acc = mul(&acc, &base);
        }
        base = mul(&base, &base);
        m >>= 1;
    }
    acc
}

/// The unit-norm obstruction: the primes dividing
/// `Norm(b_K)^2 - 1` for a generator `b_K` of the prime above 2 (the
/// split-exponent argument fails only at these p).
#[derive(Debug, Clone)]
pub struct UnitNormObstruction {
    pub generator: AlgebraicInteger,
    pub generator_norm: BigInt,
    pub primes: BTreeSet<u64>,
    /// The computed |N^2 - 1|; 15 in the inert case. The source tables
    /// assert 3 there; the discrepancy is reported, bounds unaffected.
    pub value: BigInt,
}

pub fn unit_norm_obstruction(field: &FieldSpec) -> Result<UnitNormObstruction, GaloisError> {
    let p2 = field
        .split_rational_prime(2)
        .into_iter()
        .next()
        .expect("some prime above 2");
    let gen = field
        .generator_over_two(&p2)
        .map_err(|_| GaloisError::NonPrincipalPrime)?;
    let norm = field.norm(&gen);
    let value = (&norm * &norm - BigInt::from(1)).abs();
    let primes = poly::factor(&value)
        .into_iter()
        .map(|(p, _)| (&p).try_into().expect("small prime"))
        .collect();
    Ok(UnitNormObstruction {
        generator: gen,
        generator_norm: norm,
        primes,
        value,
    })
}

/// One applied criterion inside an irreducibility verdict.
#[derive(Debug, Clone)]
pub struct CriterionStep {
    pub name: String,
    pub outcome: String,
    pub source: String,
}

/// Assumption flags attached to a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Assumption {
    ClassNumberOne,
    PSplits,
    PThreeModFour,
    LarsonConstant,
    SerreModularity,
    EichlerShimuraAnalogue,
    PapadopoulosCondition,
}

impl fmt::Display for Assumption {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Assumption::ClassNumberOne => "class number one",
            Assumption::PSplits => "p splits in K",
            Assumption::PThreeModFour => "p = 3 mod 4",
            Assumption::LarsonConstant => "p outside Larson's finite set M_K",
            Assumption::SerreModularity => "Serre's modularity conjecture over K",
            Assumption::EichlerShimuraAnalogue => "Eichler-Shimura analogue over K",
            Assumption::PapadopoulosCondition => "local model condition at the prime above 2",
        };
        write!(f, "{s}")
    }
}

/// Outcome of the irreducibility analysis for a field and parity case.
#[derive(Debug, Clone)]
pub struct IrreducibilityVerdict {
    /// Irreducible for every prime `p > p_threshold` (given the listed
    /// assumptions), except possibly the uncertified small primes.
    pub p_threshold: BigInt,
    /// Primes `<= p_threshold` that ARE individually certified (the
    /// modular-curve criteria).
    pub certified_small: BTreeSet<u64>,
    /// Primes `<= p_threshold` not certified by any criterion (always
    /// contains 5; contains 7 and 13 for the X0-exceptional fields).
    pub uncertified_small: BTreeSet<u64>,
    pub method_trace: Vec<CriterionStep>,
    pub assumptions: Vec<Assumption>,
}

impl IrreducibilityVerdict {
    /// The smallest bound `F` such that irreducibility is certified for
    /// every prime `p > F`.
    pub fn effective_floor(&self) -> BigInt {
        let small_max = self.uncertified_small.iter().max().copied().unwrap_or(0);
        // threshold applies when the general argument is the binding one
        if self.p_threshold > BigInt::from(17) {
            self.p_threshold.clone().max(BigInt::from(small_max))
        } else {
            BigInt::from(small_max.max(5))
        }
    }
}

/// Assembles the irreducibility bound for the field/parity case from the
/// modular-curve lookups, ray-class character orders, torsion bounds, the
/// resultant criterion, and the unit-norm obstruction.
pub fn irreducibility_bound(
    field: &FieldSpec,
    parity: ParityCase,
) -> Result<IrreducibilityVerdict, GaloisError> {
    let mut trace = Vec::new();
    let mut assumptions = vec![Assumption::ClassNumberOne];
    let mut certified = BTreeSet::new();
    let mut uncertified = BTreeSet::from([5u64]);
    for p in [7u64, 11, 13, 17] {
        let row = tables::MODULAR_CURVE_TABLE.iter().find(|r| r.p == p).unwrap();
        let ok = modular_curve_obstruction(p, field)?;
        trace.push(CriterionStep {
            name: format!("quadratic points on X0({})", row.curve_level),
            outcome: if ok {
                format!("p = {p} certified: field not among the exceptional list")
            } else {
                format!("p = {p} NOT certified: field carries points")
            },
            source: String::from(row.source),
        });
        if ok {
            certified.insert(p);
        } else {
            uncertified.insert(p);
        }
    }

    let threshold: BigInt = match (field.is_real(), parity) {
        (true, _) | (false, ParityCase::EvenAbc) => {
            if field.is_real() {
                // isogeny characters land in small ray class groups; the
                // finite modulus is p^(l/2) for the largest additive
                // conductor exponent l in the level plan
                let p2 = field.split_rational_prime(2).remove(0);
                let max_exp = crate::frey::lowered_p_exponents(field)
                    .map(|v| v.into_iter().max().unwrap_or(4))
                    .unwrap_or(4);
                let k = max_exp / 2;
                let finite_part = if k == 0 { vec![] } else { vec![(p2, k)] };
                let rcg_inf = residue::ray_class_group(field, vec![], 2)?;
                let rcg_pk = residue::ray_class_group(field, finite_part, 2)?;
                let exponent = rcg_inf
                    .invariants
                    .iter()
                    .chain(rcg_pk.invariants.iter())
                    .max()
                    .copied()
                    .unwrap_or(1);
                let order4 = exponent >= 4;
                trace.push(CriterionStep {
                    name: String::from("ray class groups for the character moduli"),
                    outcome: format!(
                        "inf: {:?}, p^{k} inf: {:?}{}",
                        rcg_inf.invariants,
                        rcg_pk.invariants,
                        if order4 {
                            "; order-4 characters handled by quadratic twist (quartic torsion bound applies)"
                        } else {
                            "; character order divides 2"
                        }
                    ),
                    source: String::from("exhaustive residue enumeration"),
                });
            }
            let obs = unit_norm_obstruction(field)?;
            trace.push(CriterionStep {
                name: String::from("unit-norm obstruction at the prime above 2"),
                outcome: format!(
                    "Norm(b_K) = {}, |Norm^2 - 1| = {} with prime support {:?}",
                    obs.generator_norm, obs.value, obs.primes
                ),
                source: String::from("generator search on the continued fraction"),
            });
            trace.push(CriterionStep {
                name: String::from("torsion bounds"),
                outcome: format!(
                    "prime torsion at most {} over quadratic and {} over quartic fields",
                    tables::TORSION_BOUND_QUADRATIC,
                    tables::TORSION_BOUND_QUARTIC
                ),
                source: String::from("Kamienny 1992; Derickx-Kamienny-Stein-Stoll 2023"),
            });
            match field.d() {
                -19 | -43 => {
                    // threshold is the largest ingested torsion prime
                    let p_k = largest_torsion_prime(field.d()).ok_or_else(|| {
                        GaloisError::UnsupportedCase(String::from("missing torsion table"))
                    })?;
                    trace.push(CriterionStep {
                        name: String::from("congruence-subgroup torsion threshold"),
                        outcome: format!("largest torsion prime p_K = {p_k}"),
                        source: String::from("ingested abelianization torsion table"),
                    });
                    p_k
                }
                _ => BigInt::from(17),
            }
        }
        (false, ParityCase::OddAbc) => {
            assumptions.push(Assumption::PSplits);
            assumptions.push(Assumption::PThreeModFour);
            assumptions.push(Assumption::LarsonConstant);
            match field.d() {
                -43 | -67 => {
                    let p_k = largest_torsion_prime(field.d()).ok_or_else(|| {
                        GaloisError::UnsupportedCase(String::from("missing torsion table"))
                    })?;
                    trace.push(CriterionStep {
                        name: String::from("congruence-subgroup torsion threshold"),
                        outcome: format!("largest torsion prime p_K = {p_k}"),
                        source: String::from("ingested abelianization torsion table"),
                    });
                    p_k
                }
                -3 | -11 | -19 => {
                    // resultant criterion: x^24 - 4 against the Frobenius
                    // candidates at the inert prime of norm 4; only the
                    // supersingular traces arise (v(j) > 0 forces j = 0 on
                    // the reduction, the supersingular invariant in
                    // characteristic 2)
                    let cands = supersingular_charpoly_candidates(4, 2);
                    let (max_p, _) = resultant_prime_bound(24, &BigInt::from(4), &cands);
                    trace.push(CriterionStep {
                        name: String::from("resultant criterion at the inert prime above 2"),
                        outcome: format!(
                            "largest prime divisor of Res(x^24 - 4, P) over the supersingular candidates: {max_p}"
                        ),
                        source: String::from("exact resultants, two independent routes"),
                    });
                    max_p
                }
                d => {
                    return Err(GaloisError::UnsupportedCase(format!(
                        "odd-coefficient case for d = {d}"
                    )))
                }
            }
        }
    };

    Ok(IrreducibilityVerdict {
        p_threshold: threshold,
        certified_small: certified,
        uncertified_small: uncertified,
        method_trace: trace,
        assumptions,
    })
}

fn largest_torsion_prime(d: i64) -> Option<BigInt> {
    tables::torsion_primes(d)?
        .iter()
        .map(|s| s.parse::<BigInt>().expect("torsion table entries parse"))
        .max()
}

/// Surjectivity of the mod-p representation in the even case: requires
/// p >= 17 and certified irreducibility; the image of inertia at the
/// potentially multiplicative prime above 2 has order divisible by p, so
/// the image contains SL2 and the determinant is the full cyclotomic
/// character.
pub fn surjectivity_preconditions(
    field: &FieldSpec,
    p: u64,
    verdict: &IrreducibilityVerdict,
) -> bool {
    let _ = field;
    if p < 17 {
        return false;
    }
    let pb = BigInt::from(p);
    
    pb > verdict.effective_floor() || verdict.certified_small.contains(&p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(d: i64) -> FieldSpec {
        FieldSpec::new(d).unwrap()
    }

    #[test]
    fn modular_curve_lookups() {
        assert!(modular_curve_obstruction(11, &f(5)).unwrap());
        assert!(!modular_curve_obstruction(7, &f(-3)).unwrap());
        assert!(!modular_curve_obstruction(13, &f(-3)).unwrap());
        assert!(modular_curve_obstruction(13, &f(-11)).unwrap());
        assert!(matches!(
            modular_curve_obstruction(19, &f(5)),
            Err(GaloisError::UnsupportedPrime(19))
        ));
    }

    #[test]
    fn charpoly_candidate_counts() {
        // 2 * floor(2 sqrt n) + 1
        assert_eq!(frobenius_charpoly_candidates(4).len(), 9);
        assert_eq!(frobenius_charpoly_candidates(2).len(), 5);
        assert_eq!(frobenius_charpoly_candidates(3).len(), 7);
        for n in 2..50 {
            let cands = frobenius_charpoly_candidates(n);
            let b = (0..).take_while(|&b| b * b <= 4 * n).last().unwrap();
            assert_eq!(cands.len() as u64, 2 * b + 1);
            assert!(cands.iter().all(|c| (c.s * c.s) as u64 <= 4 * n));
        }
    }

    #[test]
    fn resultant_bound_683() {
        // two independent routes agree on every one of the 9 candidates
        let all = frobenius_charpoly_candidates(4);
        let (max_all, rows) = resultant_prime_bound(24, &BigInt::from(4), &all);
        assert_eq!(rows.len(), 9);
        // over all 9 the largest prime is 8394593 (from the ordinary
        // traces s = +-3); the supersingular subset gives exactly 683
        assert_eq!(max_all, BigInt::from(8394593u64));
        let ss = supersingular_charpoly_candidates(4, 2);
        assert_eq!(ss.len(), 5);
        let (max_ss, ss_rows) = resultant_prime_bound(24, &BigInt::from(4), &ss);
        assert_eq!(max_ss, BigInt::from(683));
        // every even-trace candidate has beta^24 = 2^24, so all five
        // resultants are (2^24 - 4)^2
        let expect = BigInt::from((1i64 << 24) - 4).pow(2);
        for row in &ss_rows {
            assert_eq!(row.resultant, expect, "s={}", row.candidate.s);
        }
    }

    #[test]
    fn small_resultants() {
        // (x^2 - 4, x^2 + 4): root product ((2i)^2-4)((-2i)^2-4) = 64
        let cands = vec![CharPolyCandidate { s: 0, n: 4 }];
        let (_, rows) = resultant_prime_bound(2, &BigInt::from(4), &cands);
        assert_eq!(rows[0].resultant, BigInt::from(64));
        // (x - 1, x^2 + 1): evaluate at 1 -> 2
        let cands = [CharPolyCandidate { s: 0, n: 1 }];
        let f1 = poly::power_minus(1, &BigInt::from(1));
        let syl = poly::resultant_sylvester(&f1, &cands[0].poly());
        assert_eq!(syl, BigInt::from(2));
    }

    #[test]
    fn unit_norm_obstructions() {
        let o3 = unit_norm_obstruction(&f(3)).unwrap();
        assert_eq!(o3.primes, BTreeSet::from([3]));
        let o11 = unit_norm_obstruction(&f(-11)).unwrap();
        assert_eq!(o11.primes, BTreeSet::from([3, 5]));
        assert_eq!(o11.value, BigInt::from(15));
        let o5 = unit_norm_obstruction(&f(5)).unwrap();
        assert_eq!(o5.primes, BTreeSet::from([3, 5]));
    }

    #[test]
    fn verdict_floors() {
        let v = irreducibility_bound(&f(5), ParityCase::EvenAbc).unwrap();
        assert_eq!(v.p_threshold, BigInt::from(17));
        assert_eq!(v.effective_floor(), BigInt::from(5));
        let v3 = irreducibility_bound(&f(-3), ParityCase::EvenAbc).unwrap();
        assert_eq!(v3.uncertified_small, BTreeSet::from([5, 7, 13]));
        assert_eq!(v3.effective_floor(), BigInt::from(13));
        let vodd = irreducibility_bound(&f(-19), ParityCase::OddAbc).unwrap();
        assert_eq!(vodd.p_threshold, BigInt::from(683));
        assert!(vodd.assumptions.contains(&Assumption::PSplits));
        let v43 = irreducibility_bound(&f(-43), ParityCase::OddAbc).unwrap();
        assert_eq!(v43.p_threshold, BigInt::from(34315907u64));
        let v19e = irreducibility_bound(&f(-19), ParityCase::EvenAbc).unwrap();
        assert_eq!(v19e.p_threshold, BigInt::from(199));
    }

    #[test]
    fn order_four_character_case_flagged() {
        // d=6 has additive exponent 8, modulus p^4: the ray class group
        // picks up a Z/4 factor and the twist handling is recorded
        let v = irreducibility_bound(&f(6), ParityCase::EvenAbc).unwrap();
        let rcg_step = v
            .method_trace
            .iter()
            .find(|s| s.name.contains("ray class"))
            .unwrap();
        assert!(rcg_step.outcome.contains("order-4"), "{}", rcg_step.outcome);
        // main fields stay order <= 2
        let v3 = irreducibility_bound(&f(3), ParityCase::EvenAbc).unwrap();
        let rcg_step = v3
            .method_trace
            .iter()
            .find(|s| s.name.contains("ray class"))
            .unwrap();
        assert!(rcg_step.outcome.contains("divides 2"), "{}", rcg_step.outcome);
    }

    #[test]
    fn verdict_monotone_under_assumptions() {
        // the even (more data) case never has a larger floor than the
        // odd case of the same field
        for d in [-3i64, -11, -19] {
            let even = irreducibility_bound(&f(d), ParityCase::EvenAbc).unwrap();
            let odd = irreducibility_bound(&f(d), ParityCase::OddAbc).unwrap();
            assert!(even.effective_floor() <= odd.effective_floor(), "d={d}");
        }
    }

    #[test]
    fn surjectivity_gate() {
        let v = irreducibility_bound(&f(-11), ParityCase::EvenAbc).unwrap();
        assert!(surjectivity_preconditions(&f(-11), 17, &v));
        assert!(!surjectivity_preconditions(&f(-11), 13, &v));
        let v3 = irreducibility_bound(&f(-3), ParityCase::EvenAbc).unwrap();
        assert!(surjectivity_preconditions(&f(-3), 19, &v3));
    }
}
