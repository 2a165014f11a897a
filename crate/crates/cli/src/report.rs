//! Ledger rendering: a human-readable report and a versioned JSON
//! document (sorted keys, byte-stable across runs).

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use quadfermat_core::eliminate::{
    CkStatus, EliminationLedger, FinalBound, UnresolvedReason, Verdict,
};
use quadfermat_core::frey::ParityCase;
use quadfermat_core::records::Completeness;

pub const REPORT_SCHEMA: &str = "quadfermat-ledger/1";

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct LedgerDoc {
    pub schema: String,
    pub field: String,
    pub d: i64,
    pub parity: String,
    pub levels: Vec<LevelDoc>,
    pub surviving_primes: Vec<String>,
    pub ck_incomplete: bool,
    pub bound: BoundDoc,
    pub assumptions: Vec<String>,
    pub data_gaps: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct LevelDoc {
    pub level: String,
    pub norm: String,
    pub complete: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub new_dimension: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub incomplete_reason: Option<String>,
    pub forms: Vec<FormDoc>,
}

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct FormDoc {
    pub label: String,
    pub verdict: String,
    pub method: String,
    #[serde(skip_serializing_if = "BTreeMap::is_empty", default)]
    pub detail: BTreeMap<String, String>,
}

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct BoundDoc {
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub excluded_primes: Vec<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub rendered: String,
}

fn parity_str(p: ParityCase) -> &'static str {
    match p {
        ParityCase::EvenAbc => "even-abc",
        ParityCase::OddAbc => "odd-abc",
    }
}

fn verdict_doc(verdict: &Verdict) -> FormDoc {
    let (verdict_s, method, detail): (&str, String, BTreeMap<String, String>) = match verdict {
        Verdict::EliminatedByCf { c_f, support } => (
            "eliminated",
            String::from("conductor-norm gcd (C_f)"),
            BTreeMap::from([
                (String::from("c_f"), c_f.to_string()),
                (
                    String::from("support"),
                    support
                        .iter()
                        .map(|p| p.to_string())
                        .collect::<Vec<_>>()
                        .join(","),
                ),
            ]),
        ),
        Verdict::EliminatedByInertia {
            witness_class,
            fake_curve_excluded,
        } => (
            "eliminated",
            String::from("inertia argument"),
            BTreeMap::from([
                (String::from("witness_class"), witness_class.clone()),
                (
                    String::from("fake_curve_excluded"),
                    fake_curve_excluded.to_string(),
                ),
            ]),
        ),
        Verdict::EliminatedByTrace { prime_label, primes } => (
            "eliminated",
            String::from("trace comparison"),
            BTreeMap::from([
                (String::from("prime"), prime_label.clone()),
                (
                    String::from("possible_p"),
                    primes
                        .iter()
                        .map(|p| p.to_string())
                        .collect::<Vec<_>>()
                        .join(","),
                ),
            ]),
        ),
        Verdict::Unresolved { reason } => (
            "unresolved",
            match reason {
                UnresolvedReason::InertiaInapplicable => String::from("inertia inapplicable"),
                UnresolvedReason::MissingCurveData => String::from("missing curve data"),
                UnresolvedReason::DataGap(_) => String::from("data gap"),
                UnresolvedReason::TraceInconclusive => String::from("trace inconclusive"),
            },
            BTreeMap::new(),
        ),
    };
    FormDoc {
        label: String::new(),
        verdict: verdict_s.to_string(),
        method,
        detail,
    }
}

pub fn to_doc(ledger: &EliminationLedger) -> LedgerDoc {
    let levels = ledger
        .levels
        .iter()
        .map(|l| {
            let (complete, new_dimension, incomplete_reason) = match &l.completeness {
                Completeness::Complete => (true, None, None),
                Completeness::Incomplete {
                    new_dimension,
                    reason,
                    ..
                } => (false, *new_dimension, Some(reason.clone())),
            };
            LevelDoc {
                level: l.level_key.clone(),
                norm: l.level_norm.to_string(),
                complete,
                new_dimension,
                incomplete_reason,
                forms: l
                    .verdicts
                    .iter()
                    .map(|(label, v)| {
                        let mut doc = verdict_doc(v);
                        doc.label = label.clone();
                        doc
                    })
                    .collect(),
            }
        })
        .collect();
    let bound = match &ledger.final_bound {
        FinalBound::Bound {
            value,
            excluded_primes,
            ..
        } => BoundDoc {
            kind: String::from("bound"),
            value: Some(value.to_string()),
            excluded_primes: excluded_primes.clone(),
            reason: None,
            rendered: ledger.final_bound.to_string(),
        },
        FinalBound::Unbounded { reason } => BoundDoc {
            kind: String::from("unbounded"),
            value: None,
            excluded_primes: Vec::new(),
            reason: Some(reason.clone()),
            rendered: ledger.final_bound.to_string(),
        },
    };
    LedgerDoc {
        schema: REPORT_SCHEMA.to_string(),
        field: ledger.field_label.clone(),
        d: ledger.d,
        parity: parity_str(ledger.parity).to_string(),
        levels,
        surviving_primes: ledger
            .surviving_primes
            .iter()
            .map(|p| p.to_string())
            .collect(),
        ck_incomplete: ledger.ck_status == CkStatus::Incomplete,
        bound,
        assumptions: ledger.assumptions.iter().map(|a| a.to_string()).collect(),
        data_gaps: ledger.data_gaps.clone(),
    }
}

/// Stable JSON rendering: canonical sorted object keys (via `Value`) so
/// that parse-and-re-emit is byte-identical, plus a trailing newline.
pub fn to_json(ledger: &EliminationLedger) -> String {
    let doc = to_doc(ledger);
    let value = serde_json::to_value(&doc).expect("ledger serializes");
    let mut s = serde_json::to_string_pretty(&value).expect("value serializes");
    s.push('\n');
    s
}

/// Human-readable report.
pub fn to_text(ledger: &EliminationLedger) -> String {
    use std::fmt::Write;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "field {} (d = {}), case {}",
        ledger.field_label,
        ledger.d,
        parity_str(ledger.parity)
    );
    for level in &ledger.levels {
        let _ = writeln!(out, "level {} (norm {})", level.level_key, level.level_norm);
        if let Completeness::Incomplete {
            new_dimension,
            reason,
            ..
        } = &level.completeness
        {
            let dim = new_dimension
                .map(|d| format!(" (new dimension {d})"))
                .unwrap_or_default();
            let _ = writeln!(out, "  ! incomplete{dim}: {reason}");
        }
        if level.verdicts.is_empty() {
            let _ = writeln!(out, "  no newforms at this level");
        }
        for (label, verdict) in &level.verdicts {
            let doc = verdict_doc(verdict);
            let detail = if doc.detail.is_empty() {
                String::new()
            } else {
                let kv: Vec<String> = doc
                    .detail
                    .iter()
                    .map(|(k, v)| format!("{k}={v}"))
                    .collect();
                format!(" [{}]", kv.join(", "))
            };
            let _ = writeln!(out, "  {label}: {} via {}{detail}", doc.verdict, doc.method);
        }
    }
    if !ledger.surviving_primes.is_empty() {
        let ps: Vec<String> = ledger
            .surviving_primes
            .iter()
            .map(|p| p.to_string())
            .collect();
        let _ = writeln!(out, "congruence survivors: {}", ps.join(", "));
    }
    if !ledger.assumptions.is_empty() {
        let asms: Vec<String> = ledger.assumptions.iter().map(|a| a.to_string()).collect();
        let _ = writeln!(out, "assumptions: {}", asms.join("; "));
    }
    let _ = writeln!(out, "exponent bound: no nontrivial solutions for p > {}", ledger.final_bound);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trips_byte_identical() {
        // any ledger document must re-emit identically after parsing
        let doc = LedgerDoc {
            schema: REPORT_SCHEMA.to_string(),
            field: "2.2.5.1".into(),
            d: 5,
            parity: "even-abc".into(),
            levels: vec![],
            surviving_primes: vec!["3".into()],
            ck_incomplete: false,
            bound: BoundDoc {
                kind: "bound".into(),
                value: Some("5".into()),
                excluded_primes: vec![],
                reason: None,
                rendered: "5".into(),
            },
            assumptions: vec![],
            data_gaps: vec![],
        };
        let s1 = serde_json::to_string_pretty(&doc).unwrap();
        let parsed: LedgerDoc = serde_json::from_str(&s1).unwrap();
        let s2 = serde_json::to_string_pretty(&parsed).unwrap();
        assert_eq!(s1, s2);
        assert_eq!(doc, parsed);
    }
}
