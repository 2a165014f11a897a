//! The newform-elimination engine: Hasse sets, the per-prime obstruction
//! elements `B_(f,q)` and their aggregated norm gcd `C_f`, the inertia
//! argument against curves of potentially good reduction, rational-form
//! trace comparison, and final exponent-bound assembly.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::frey::{self, ParityCase};
use crate::galois::{Assumption, IrreducibilityVerdict};
use crate::numfield::FieldElement;
use crate::poly;
use crate::quadfield::{FieldSpec, PrimeIdeal};
use crate::records::{Completeness, CurveRecord, NewformLevelData, NewformRecord};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EliminateError {
    DataGap(String),
    MissingCurveData(String),
    ZeroDifference(String),
    IrrationalForm(String),
    UnsupportedCase(String),
}

impl fmt::Display for EliminateError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EliminateError::DataGap(s) => write!(f, "missing eigenvalue data: {s}"),
            EliminateError::MissingCurveData(s) => write!(f, "missing curve data: {s}"),
            EliminateError::ZeroDifference(s) => write!(f, "trace comparison degenerate: {s}"),
            EliminateError::IrrationalForm(s) => write!(f, "operation needs a rational form: {s}"),
            EliminateError::UnsupportedCase(s) => write!(f, "unsupported case: {s}"),
        }
    }
}

impl core::error::Error for EliminateError {}

/// `{a : |a| <= 2 sqrt(norm), norm + 1 - a = 0 mod t}`: the candidate
/// Frobenius traces of a curve with a rational t-torsion structure.
///
/// ```
/// use quadfermat_core::eliminate::hasse_set;
/// assert_eq!(hasse_set(9, 4).members, vec![-6, -2, 2, 6]);
/// assert_eq!(hasse_set(5, 4).members, vec![-2, 2]);
/// ```
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HasseSet {
    pub norm: u64,
    pub t: u64,
    pub members: Vec<i64>,
}

pub fn hasse_set(norm: u64, t: u64) -> HasseSet {
    assert!(norm >= 2 && t >= 1);
    let bound = {
        let mut b = 0i64;
        while ((b + 1) * (b + 1)) as u64 <= 4 * norm {
            b += 1;
        }
        b
    };
    let members = (-bound..=bound)
        .filter(|a| (norm as i64 + 1 - a).rem_euclid(t as i64) == 0)
        .collect();
    HasseSet { norm, t, members }
}

/// The obstruction element for one prime:
/// `B = N(q) ((N(q)+1)^2 - a_q^2) prod_(a in A_q) (a - a_q)` in `O_(Q_f)`,
/// together with its absolute norm.
#[derive(Debug, Clone)]
pub struct BqContribution {
    pub prime_label: String,
    pub element: FieldElement,
    pub norm: BigInt,
}

pub fn bq(
    form: &NewformRecord,
    q: &PrimeIdeal,
    t: u64,
) -> Result<BqContribution, EliminateError> {
    let a_q = form.eigenvalue(&q.label()).ok_or_else(|| {
        EliminateError::DataGap(format!("{} lacks a_q at {}", form.source_label, q.label()))
    })?;
    let field = &form.eigen_field;
    let n = q.norm;
    let hs = hasse_set(n, t);
    // (N+1)^2 - a^2 = (N+1 - a)(N+1 + a)
    let left = field.subtract_int(&field.neg(a_q), -((n + 1) as i64));
    let right = field.subtract_int(a_q, -((n + 1) as i64));
    let mut acc = field.mul(&left, &right);
    for a in &hs.members {
        let factor = field.neg(&field.subtract_int(a_q, *a)); // a - a_q
        acc = field.mul(&acc, &factor);
    }
    let n_int = field.from_int(n as i64);
    let element = field.mul(&n_int, &acc);
    let norm = field.element_norm(&element);
    debug_assert!(norm.is_integer());
    Ok(BqContribution {
        prime_label: q.label(),
        element,
        norm: norm.to_integer(),
    })
}

/// `C_f` as the gcd of the per-prime contribution norms over the prime
/// set `T` (zero iff every contribution vanishes), with the per-prime
/// breakdown and the prime support.
#[derive(Debug, Clone)]
pub struct CfResult {
    pub value: BigInt,
    pub support: Vec<BigInt>,
    pub contributions: Vec<(String, BigInt)>,
}

pub fn cf(form: &NewformRecord, t_primes: &[PrimeIdeal]) -> Result<CfResult, EliminateError> {
    let mut value = BigInt::zero();
    let mut contributions = Vec::new();
    for q in t_primes {
        let b = bq(form, q, 4)?;
        value = value.gcd(&b.norm.abs());
        contributions.push((b.prime_label, b.norm));
    }
    let support = if value.is_zero() || value.is_one() {
        Vec::new()
    } else {
        poly::factor(&value).into_iter().map(|(p, _)| p).collect()
    };
    Ok(CfResult {
        value,
        support,
        contributions,
    })
}

/// Outcome of comparing eigenvalues against the admissible Frobenius
/// traces at one odd prime.
#[derive(Debug, Clone)]
pub struct TraceComparison {
    pub prime_label: String,
    pub good_differences: Vec<BigInt>,
    pub mult_differences: Vec<BigInt>,
    /// Primes dividing some difference; p must be one of these for the
    /// congruence to hold.
    pub primes: BTreeSet<BigInt>,
}

/// Rational-form trace comparison at an odd prime `q`: under good
/// reduction `a_q(E)` lies in the t=4 Hasse set, under multiplicative
/// reduction the trace is `+-(N(q)+1)`; either way `p` divides the
/// difference with `a_q(f)`. Fails with `ZeroDifference` when a
/// difference vanishes (branch carries no information).
pub fn trace_compare_eliminate(
    form: &NewformRecord,
    q: &PrimeIdeal,
    full_two_torsion: bool,
) -> Result<TraceComparison, EliminateError> {
    let a_q = form.eigenvalue(&q.label()).ok_or_else(|| {
        EliminateError::DataGap(format!("{} lacks a_q at {}", form.source_label, q.label()))
    })?;
    let a_q = a_q
        .as_rational()
        .filter(|r| r.is_integer())
        .ok_or_else(|| EliminateError::IrrationalForm(form.source_label.clone()))?
        .to_integer();
    let t = if full_two_torsion { 4 } else { 2 };
    let hs = hasse_set(q.norm, t);
    let mut good = Vec::new();
    for a in &hs.members {
        let diff = BigInt::from(*a) - &a_q;
        if diff.is_zero() {
            return Err(EliminateError::ZeroDifference(format!(
                "a = {a} matches the eigenvalue at {}",
                q.label()
            )));
        }
        good.push(diff);
    }
    let np1 = BigInt::from(q.norm + 1);
    let mut mult = Vec::new();
    for sign in [1i64, -1] {
        let diff = BigInt::from(sign) * &np1 - &a_q;
        if diff.is_zero() {
            return Err(EliminateError::ZeroDifference(format!(
                "multiplicative trace matches the eigenvalue at {}",
                q.label()
            )));
        }
        mult.push(diff);
    }
    let mut primes = BTreeSet::new();
    for d in good.iter().chain(mult.iter()) {
        if d.abs() > BigInt::one() {
            for (p, _) in poly::factor(d) {
                primes.insert(p);
            }
        }
    }
    Ok(TraceComparison {
        prime_label: q.label(),
        good_differences: good,
        mult_differences: mult,
        primes,
    })
}

/// Verdict for one newform.
#[derive(Debug, Clone)]
pub enum Verdict {
    EliminatedByCf {
        c_f: BigInt,
        support: Vec<BigInt>,
    },
    EliminatedByInertia {
        witness_class: String,
        fake_curve_excluded: bool,
    },
    EliminatedByTrace {
        prime_label: String,
        primes: BTreeSet<BigInt>,
    },
    Unresolved {
        reason: UnresolvedReason,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UnresolvedReason {
    InertiaInapplicable,
    MissingCurveData,
    DataGap(String),
    TraceInconclusive,
}

impl fmt::Display for UnresolvedReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UnresolvedReason::InertiaInapplicable => write!(f, "inertia argument inapplicable"),
            UnresolvedReason::MissingCurveData => write!(f, "no associated curve data"),
            UnresolvedReason::DataGap(s) => write!(f, "data gap: {s}"),
            UnresolvedReason::TraceInconclusive => write!(f, "trace comparison inconclusive"),
        }
    }
}

/// Inertia argument: a rational form with `C_f = 0` is eliminated when
/// some associated curve has `v(j) >= 0` at every prime over 2 where the
/// Frey curve is potentially multiplicative (its inertia image order then
/// divides 24 while the Frey side is divisible by p). For imaginary
/// fields the conjectural fake-curve alternative is excluded for p > 13
/// and flagged.
pub fn inertia_eliminate(
    form: &NewformRecord,
    curves: &[CurveRecord],
    potmult_prime_labels: &[String],
    imaginary: bool,
) -> Result<Verdict, EliminateError> {
    if curves.is_empty() {
        return Err(EliminateError::MissingCurveData(form.source_label.clone()));
    }
    for curve in curves {
        let good_everywhere = potmult_prime_labels.iter().all(|label| {
            curve
                .j_valuations
                .get(label)
                .is_some_and(|v| *v >= 0)
        });
        if good_everywhere {
            return Ok(Verdict::EliminatedByInertia {
                witness_class: curve.source_label.clone(),
                fake_curve_excluded: imaginary,
            });
        }
    }
    Ok(Verdict::Unresolved {
        reason: UnresolvedReason::InertiaInapplicable,
    })
}

/// Per-level elimination report.
#[derive(Debug, Clone)]
pub struct LevelReport {
    pub level_key: String,
    pub level_norm: BigInt,
    pub verdicts: Vec<(String, Verdict)>,
    pub completeness: Completeness,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CkStatus {
    /// Every candidate level is complete.
    NotApplicable,
    /// Some level is incomplete but its rational forms are listed; the
    /// missing irrational forms contribute the symbolic constant C_K.
    Incomplete,
}

/// Bound + caveats, or no bound when elimination failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FinalBound {
    Bound {
        value: BigInt,
        ck_incomplete: bool,
        excluded_primes: Vec<u64>,
    },
    Unbounded {
        reason: String,
    },
}

impl fmt::Display for FinalBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FinalBound::Bound {
                value,
                ck_incomplete,
                excluded_primes,
            } => {
                if *ck_incomplete {
                    write!(f, "max{{{value}, C_K}}")?;
                } else {
                    write!(f, "{value}")?;
                }
                if !excluded_primes.is_empty() {
                    write!(f, " (p != {:?})", excluded_primes)?;
                }
                Ok(())
            }
            FinalBound::Unbounded { reason } => write!(f, "unbounded: {reason}"),
        }
    }
}

/// The assembled per-field elimination ledger.
#[derive(Debug, Clone)]
pub struct EliminationLedger {
    pub field_label: String,
    pub d: i64,
    pub parity: ParityCase,
    pub levels: Vec<LevelReport>,
    pub surviving_primes: BTreeSet<BigInt>,
    pub ck_status: CkStatus,
    pub final_bound: FinalBound,
    pub assumptions: Vec<Assumption>,
    pub data_gaps: Vec<String>,
}

impl EliminationLedger {
    pub fn unresolved_count(&self) -> usize {
        self.levels
            .iter()
            .flat_map(|l| l.verdicts.iter())
            .filter(|(_, v)| matches!(v, Verdict::Unresolved { .. }))
            .count()
    }
}

/// Everything the engine consumes: the per-level form data and the curve
/// records for the rational forms.
pub struct EliminationInput {
    pub field: FieldSpec,
    pub parity: ParityCase,
    pub levels: Vec<NewformLevelData>,
    pub curves: BTreeMap<String, Vec<CurveRecord>>,
    /// Norm bound defining the comparison prime set T (default 50).
    pub t_norm_bound: u64,
}

/// The comparison prime set: primes of norm below the bound, excluding
/// the primes above 2 and the primes above the equation coefficient.
pub fn comparison_primes(field: &FieldSpec, t_norm_bound: u64) -> Vec<PrimeIdeal> {
    let coeff = frey::equation_coefficient(field).unwrap_or(field.d());
    crate::records::primes_of_norm_below(field, t_norm_bound)
        .into_iter()
        .filter(|p| p.residue_char != 2 && !coeff.unsigned_abs().is_multiple_of(p.residue_char))
        .collect()
}

/// Runs the full elimination for one field/parity case and assembles the
/// ledger with its final bound.
pub fn run_elimination(
    input: &EliminationInput,
    verdict: &IrreducibilityVerdict,
) -> Result<EliminationLedger, EliminateError> {
    let field = &input.field;
    let t_primes = comparison_primes(field, input.t_norm_bound);
    let imaginary = !field.is_real();
    let potmult_labels: Vec<String> = match input.parity {
        ParityCase::EvenAbc => field
            .split_rational_prime(2)
            .iter()
            .map(|p| p.label())
            .collect(),
        ParityCase::OddAbc => Vec::new(),
    };

    let mut levels = Vec::new();
    let mut survivors: BTreeSet<BigInt> = BTreeSet::new();
    let mut data_gaps = Vec::new();
    let mut any_incomplete_rational_ok = false;
    let mut fatal_incomplete: Option<String> = None;

    for level in &input.levels {
        let mut verdicts = Vec::new();
        for form in &level.forms {
            let verdict = eliminate_form(
                form,
                &t_primes,
                &input.curves,
                &potmult_labels,
                imaginary,
                input.parity,
            );
            match &verdict {
                Verdict::EliminatedByCf { support, .. } => {
                    survivors.extend(support.iter().cloned());
                }
                Verdict::EliminatedByTrace { primes, .. } => {
                    survivors.extend(primes.iter().cloned());
                }
                Verdict::Unresolved {
                    reason: UnresolvedReason::DataGap(gap),
                } => data_gaps.push(gap.clone()),
                _ => {}
            }
            verdicts.push((form.source_label.clone(), verdict));
        }
        if let Completeness::Incomplete {
            rationals_complete,
            reason,
            ..
        } = &level.completeness
        {
            // missing forms are covered by the symbolic C_K only when the
            // source guarantees the rational sublist is complete
            if *rationals_complete {
                any_incomplete_rational_ok = true;
            } else {
                fatal_incomplete = Some(format!(
                    "level {} incomplete: {reason}",
                    level.level_key
                ));
            }
        }
        levels.push(LevelReport {
            level_key: level.level_key.clone(),
            level_norm: level.level_norm.clone(),
            verdicts,
            completeness: level.completeness.clone(),
        });
    }

    let ck_status = if any_incomplete_rational_ok {
        CkStatus::Incomplete
    } else {
        CkStatus::NotApplicable
    };

    let final_bound = assemble_bound(
        field,
        input.parity,
        verdict,
        &survivors,
        &ck_status,
        &levels,
        fatal_incomplete,
        &data_gaps,
    );

    let mut assumptions = verdict.assumptions.clone();
    if imaginary {
        assumptions.push(Assumption::SerreModularity);
        if input.parity == ParityCase::EvenAbc
            && levels.iter().any(|l| {
                l.verdicts.iter().any(|(_, v)| {
                    matches!(
                        v,
                        Verdict::EliminatedByInertia {
                            fake_curve_excluded: true,
                            ..
                        }
                    )
                })
            })
        {
            assumptions.push(Assumption::EichlerShimuraAnalogue);
        }
        if field.d() == -67 {
            assumptions.push(Assumption::PapadopoulosCondition);
        }
    }
    assumptions.sort();
    assumptions.dedup();

    Ok(EliminationLedger {
        field_label: field.label(),
        d: field.d(),
        parity: input.parity,
        levels,
        surviving_primes: survivors,
        ck_status,
        final_bound,
        assumptions,
        data_gaps,
    })
}

fn eliminate_form(
    form: &NewformRecord,
    t_primes: &[PrimeIdeal],
    curves: &BTreeMap<String, Vec<CurveRecord>>,
    potmult_labels: &[String],
    imaginary: bool,
    parity: ParityCase,
) -> Verdict {
    let cf_result = match cf(form, t_primes) {
        Ok(r) => r,
        Err(EliminateError::DataGap(gap)) => {
            return Verdict::Unresolved {
                reason: UnresolvedReason::DataGap(gap),
            }
        }
        Err(_) => unreachable!("cf only raises data gaps"),
    };
    if !cf_result.value.is_zero() {
        return Verdict::EliminatedByCf {
            c_f: cf_result.value,
            support: cf_result.support,
        };
    }
    // C_f = 0: the form behaves like a curve; try the inertia argument
    // (only available when the Frey curve is potentially multiplicative
    // somewhere above 2, i.e. in the even case)
    let mut had_curves = false;
    if form.is_rational && parity == ParityCase::EvenAbc {
        if let Some(cs) = curves.get(&form.source_label) {
            had_curves = true;
            match inertia_eliminate(form, cs, potmult_labels, imaginary) {
                Ok(v @ Verdict::EliminatedByInertia { .. }) => return v,
                Ok(Verdict::Unresolved { .. }) => {}
                Ok(_) => unreachable!(),
                Err(_) => {}
            }
        }
    }
    // fall back to per-prime trace comparison
    if form.is_rational {
        for q in t_primes {
            if form.eigenvalue(&q.label()).is_none() {
                continue;
            }
            if let Ok(tc) = trace_compare_eliminate(form, q, true) {
                return Verdict::EliminatedByTrace {
                    prime_label: tc.prime_label,
                    primes: tc.primes,
                };
            }
        }
    }
    Verdict::Unresolved {
        reason: if had_curves {
            UnresolvedReason::InertiaInapplicable
        } else if form.is_rational {
            UnresolvedReason::MissingCurveData
        } else {
            UnresolvedReason::TraceInconclusive
        },
    }
}

/// Lower floor below which the analysis never certifies anything:
/// the potential-multiplicativity constraint at a ramified prime above 2
/// forces p > 7; inert primes only need p >= 5; imaginary even cases need
/// p >= 17 for surjectivity (floor 13).
fn case_floor(field: &FieldSpec, parity: ParityCase) -> BigInt {
    let ramified_two = field
        .split_rational_prime(2)
        .iter()
        .any(|p| p.ramification_index == 2);
    match (field.is_real(), parity) {
        (true, _) => BigInt::from(if ramified_two { 7 } else { 5 }),
        (false, ParityCase::EvenAbc) => BigInt::from(13),
        (false, ParityCase::OddAbc) => BigInt::from(5),
    }
}

#[allow(clippy::too_many_arguments)]
fn assemble_bound(
    field: &FieldSpec,
    parity: ParityCase,
    verdict: &IrreducibilityVerdict,
    survivors: &BTreeSet<BigInt>,
    ck_status: &CkStatus,
    levels: &[LevelReport],
    fatal_incomplete: Option<String>,
    data_gaps: &[String],
) -> FinalBound {
    if let Some(reason) = fatal_incomplete {
        return FinalBound::Unbounded { reason };
    }
    if !data_gaps.is_empty() {
        return FinalBound::Unbounded {
            reason: format!("eigenvalue data gaps: {}", data_gaps.len()),
        };
    }
    let unresolved: Vec<String> = levels
        .iter()
        .flat_map(|l| l.verdicts.iter())
        .filter(|(_, v)| matches!(v, Verdict::Unresolved { .. }))
        .map(|(label, _)| label.clone())
        .collect();
    if !unresolved.is_empty() {
        return FinalBound::Unbounded {
            reason: format!("unresolved forms: {}", unresolved.join(", ")),
        };
    }
    let mut value = case_floor(field, parity);
    value = value.max(verdict.effective_floor());
    if let Some(max_survivor) = survivors.iter().max() {
        value = value.clone().max(max_survivor.clone());
    }
    if !field.is_real() {
        if let Some(p_k) = crate::tables::torsion_primes(field.d())
            .and_then(|ps| ps.iter().map(|s| s.parse::<BigInt>().unwrap()).max())
        {
            value = value.max(p_k);
        }
    }
    // exclusions: primes dividing the coefficient that exceed the bound
    // cannot be level-lowered (p = ell fails the divisibility condition)
    let coeff = frey::equation_coefficient(field).unwrap_or(field.d());
    let mut excluded = Vec::new();
    for (q, _) in poly::factor(&BigInt::from(coeff).abs()) {
        if q > value {
            excluded.push((&q).try_into().expect("coefficient prime fits u64"));
        }
    }
    FinalBound::Bound {
        value,
        ck_incomplete: *ck_status == CkStatus::Incomplete,
        excluded_primes: excluded,
    }
}
