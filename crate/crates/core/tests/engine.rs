//! Engine-level runs over synthetic in-memory data: verdict routing,
//! survivor collection, the symbolic C_K term, and bound assembly,
//! independent of any document layer.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use quadfermat_core::eliminate::{
    self, CkStatus, EliminationInput, FinalBound, UnresolvedReason, Verdict,
};
use quadfermat_core::frey::ParityCase;
use quadfermat_core::galois;
use quadfermat_core::numfield::EigenvalueField;
use quadfermat_core::quadfield::FieldSpec;
use quadfermat_core::records::{
    Completeness, CurveRecord, NewformLevelData, NewformRecord,
};

fn rational_form(
    field: &FieldSpec,
    label: &str,
    level_key: &str,
    overrides: &[(&str, i64)],
) -> NewformRecord {
    let ef = EigenvalueField::rational();
    let t = eliminate::comparison_primes(field, 50);
    let mut eigenvalues = BTreeMap::new();
    for (i, p) in t.iter().enumerate() {
        let hs = eliminate::hasse_set(p.norm, 4);
        eigenvalues.insert(p.label(), ef.from_int(hs.members[i % hs.members.len()]));
    }
    for (k, v) in overrides {
        eigenvalues.insert(k.to_string(), ef.from_int(*v));
    }
    NewformRecord {
        source_label: label.to_string(),
        field_label: field.label(),
        level_key: level_key.to_string(),
        eigen_field: ef,
        eigenvalues,
        is_rational: true,
    }
}

#[test]
fn engine_routes_verdicts_and_assembles_bounds() {
    let field = FieldSpec::new(7).unwrap();
    let verdict = galois::irreducibility_bound(&field, ParityCase::EvenAbc).unwrap();
    let t = eliminate::comparison_primes(&field, 50);
    let q3 = t.iter().find(|p| p.norm == 3).unwrap();
    let p2_label = field.split_rational_prime(2)[0].label();

    // one C_f form, one inertia form (zero classes + a good-reduction
    // curve), one unresolved form (zero classes, curves all bad)
    let f_cf = rational_form(&field, "lv-a", "lv", &[(&q3.label(), 2)]);
    let f_inertia = rational_form(&field, "lv-b", "lv", &[]);
    let f_stuck = rational_form(&field, "lv-c", "lv", &[]);
    let curve = |label: &str, v: i64| CurveRecord {
        source_label: format!("{label}1"),
        class_label: label.to_string(),
        conductor_key: String::from("lv"),
        j_valuations: BTreeMap::from([(p2_label.clone(), v)]),
        torsion_structure: vec![2, 2],
    };
    let mut curves = BTreeMap::new();
    curves.insert(String::from("lv-b"), vec![curve("lv-b", 2)]);
    curves.insert(String::from("lv-c"), vec![curve("lv-c", -8)]);

    let input = EliminationInput {
        field: field.clone(),
        parity: ParityCase::EvenAbc,
        levels: vec![NewformLevelData {
            field_label: field.label(),
            level_key: String::from("lv"),
            level_norm: BigInt::from(14),
            forms: vec![f_cf, f_inertia, f_stuck],
            completeness: Completeness::Complete,
        }],
        curves,
        t_norm_bound: 50,
    };
    let ledger = eliminate::run_elimination(&input, &verdict).unwrap();
    let verdicts: Vec<&Verdict> = ledger.levels[0].verdicts.iter().map(|(_, v)| v).collect();
    assert!(matches!(verdicts[0], Verdict::EliminatedByCf { .. }));
    assert!(matches!(verdicts[1], Verdict::EliminatedByInertia { .. }));
    assert!(matches!(
        verdicts[2],
        Verdict::Unresolved {
            reason: UnresolvedReason::InertiaInapplicable
        }
    ));
    // unresolved form: no bound
    assert!(matches!(ledger.final_bound, FinalBound::Unbounded { .. }));
    // survivors from the C_f support
    assert!(ledger.surviving_primes.contains(&BigInt::from(2)));
    assert!(ledger.surviving_primes.contains(&BigInt::from(3)));
}

#[test]
fn engine_symbolic_ck_and_data_gaps() {
    let field = FieldSpec::new(-11).unwrap();
    let verdict = galois::irreducibility_bound(&field, ParityCase::EvenAbc).unwrap();
    let t = eliminate::comparison_primes(&field, 50);
    let q5 = t.iter().find(|p| p.norm == 5).unwrap();

    // a complete level plus an incomplete level whose rational sublist is
    // guaranteed: the bound survives with the symbolic C_K marker
    let f1 = rational_form(&field, "a", "l1", &[(&q5.label(), 1)]);
    let f2 = rational_form(&field, "b", "l2", &[(&q5.label(), -1)]);
    let levels = vec![
        NewformLevelData {
            field_label: field.label(),
            level_key: String::from("l1"),
            level_norm: BigInt::from(11),
            forms: vec![f1.clone()],
            completeness: Completeness::Complete,
        },
        NewformLevelData {
            field_label: field.label(),
            level_key: String::from("l2"),
            level_norm: BigInt::from(44),
            forms: vec![f2],
            completeness: Completeness::Incomplete {
                new_dimension: Some(9),
                rationals_complete: true,
                reason: String::from("irrational forms not listed"),
            },
        },
    ];
    let input = EliminationInput {
        field: field.clone(),
        parity: ParityCase::EvenAbc,
        levels,
        curves: BTreeMap::new(),
        t_norm_bound: 50,
    };
    let ledger = eliminate::run_elimination(&input, &verdict).unwrap();
    assert_eq!(ledger.ck_status, CkStatus::Incomplete);
    match &ledger.final_bound {
        FinalBound::Bound {
            value,
            ck_incomplete,
            ..
        } => {
            assert!(*ck_incomplete);
            assert_eq!(*value, BigInt::from(13));
        }
        other => panic!("expected a bound, got {other:?}"),
    }

    // a missing eigenvalue is reported as a data gap, never silently
    // shrinking the comparison set
    let mut gappy = rational_form(&field, "c", "l1", &[]);
    gappy.eigenvalues.remove(&q5.label());
    let input = EliminationInput {
        field: field.clone(),
        parity: ParityCase::EvenAbc,
        levels: vec![NewformLevelData {
            field_label: field.label(),
            level_key: String::from("l1"),
            level_norm: BigInt::from(11),
            forms: vec![gappy],
            completeness: Completeness::Complete,
        }],
        curves: BTreeMap::new(),
        t_norm_bound: 50,
    };
    let ledger = eliminate::run_elimination(&input, &verdict).unwrap();
    assert_eq!(ledger.data_gaps.len(), 1);
    assert!(matches!(ledger.final_bound, FinalBound::Unbounded { .. }));
    assert!(matches!(
        ledger.levels[0].verdicts[0].1,
        Verdict::Unresolved {
            reason: UnresolvedReason::DataGap(_)
        }
    ));
}

#[test]
fn engine_fatal_incomplete_level() {
    // an incomplete level without the rational guarantee cannot be
    // covered by C_K: no bound
    let field = FieldSpec::new(-11).unwrap();
    let verdict = galois::irreducibility_bound(&field, ParityCase::EvenAbc).unwrap();
    let input = EliminationInput {
        field: field.clone(),
        parity: ParityCase::EvenAbc,
        levels: vec![NewformLevelData {
            field_label: field.label(),
            level_key: String::from("l1"),
            level_norm: BigInt::from(11),
            forms: vec![],
            completeness: Completeness::Incomplete {
                new_dimension: Some(123),
                rationals_complete: false,
                reason: String::from("listing did not finish"),
            },
        }],
        curves: BTreeMap::new(),
        t_norm_bound: 50,
    };
    let ledger = eliminate::run_elimination(&input, &verdict).unwrap();
    assert_eq!(ledger.ck_status, CkStatus::NotApplicable);
    assert!(matches!(ledger.final_bound, FinalBound::Unbounded { .. }));
}
