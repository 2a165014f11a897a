//! Ties the pipeline together: irreducibility verdict, level plan, data
//! ingestion, and the elimination engine.

use std::collections::BTreeMap;

use thiserror::Error;

use quadfermat_core::eliminate::{self, EliminationInput, EliminationLedger};
use quadfermat_core::frey::{self, ParityCase};
use quadfermat_core::galois;
use quadfermat_core::quadfield::{FieldError, FieldSpec};
use quadfermat_core::records::CurveRecord;

use crate::store::{Store, StoreError};

#[derive(Debug, Error)]
pub enum RunError {
    #[error("{0}")]
    Field(String),
    #[error("{0}")]
    Galois(String),
    #[error("{0}")]
    Frey(String),
    #[error(transparent)]
    Store(#[from] StoreError),
    #[error("{0}")]
    Eliminate(String),
    #[error("unsupported parity case for d = {0}")]
    UnsupportedParity(i64),
}

impl From<FieldError> for RunError {
    fn from(e: FieldError) -> Self {
        RunError::Field(e.to_string())
    }
}

/// Fields with an odd-coefficient (2 coprime to abc) case.
pub fn supports_odd_case(d: i64) -> bool {
    matches!(d, -3 | -11 | -19 | -43 | -67)
}

pub fn run_case(
    d: i64,
    parity: ParityCase,
    store: &Store,
    level_filter: Option<&str>,
) -> Result<EliminationLedger, RunError> {
    let field = FieldSpec::new(d)?;
    if parity == ParityCase::OddAbc && !supports_odd_case(d) {
        return Err(RunError::UnsupportedParity(d));
    }
    let verdict = galois::irreducibility_bound(&field, parity)
        .map_err(|e| RunError::Galois(e.to_string()))?;
    let plan = frey::lowered_level(&field, parity).map_err(|e| RunError::Frey(e.to_string()))?;
    let mut levels = Vec::new();
    let mut curves: BTreeMap<String, Vec<CurveRecord>> = BTreeMap::new();
    for level in &plan {
        let key = level.key();
        if let Some(filter) = level_filter {
            if !key.contains(filter) {
                continue;
            }
        }
        let data = store.fetch_newforms(&field.label(), &key)?;
        for form in &data.forms {
            if form.is_rational {
                match store.fetch_isogeny_class(&field.label(), &form.source_label) {
                    Ok(cs) => {
                        curves.insert(form.source_label.clone(), cs);
                    }
                    Err(StoreError::NotCached(_)) => {}
                    Err(e) => return Err(e.into()),
                }
            }
        }
        levels.push(data);
    }
    let input = EliminationInput {
        field,
        parity,
        levels,
        curves,
        t_norm_bound: store.config().t_norm_bound,
    };
    eliminate::run_elimination(&input, &verdict).map_err(|e| RunError::Eliminate(e.to_string()))
}

/// Exit code policy: 0 all eliminated/verified, 2 unresolved forms,
/// 3 data gaps or incomplete data, 4 usage errors.
pub fn exit_code_for(ledger: &EliminationLedger) -> i32 {
    use quadfermat_core::eliminate::FinalBound;
    match &ledger.final_bound {
        FinalBound::Bound { .. } => 0,
        FinalBound::Unbounded { .. } => {
            if !ledger.data_gaps.is_empty()
                || ledger.levels.iter().any(|l| {
                    matches!(
                        l.completeness,
                        quadfermat_core::records::Completeness::Incomplete { .. }
                    ) && ledger.ck_status == quadfermat_core::eliminate::CkStatus::NotApplicable
                })
            {
                3
            } else {
                2
            }
        }
    }
}
