//! Newform and curve data ingestion: versioned TOML documents resolved
//! through the cache, the bundled fixtures, and (online only) a remote
//! endpoint serving the same document format. Cache hits never touch the
//! network; remote fetches are rate limited and retried with backoff.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Mutex;
use std::time::{Duration, Instant, SystemTime, UNIX_EPOCH};

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Deserialize;
use thiserror::Error;

use quadfermat_core::numfield::EigenvalueField;
use quadfermat_core::poly;
use quadfermat_core::records::{
    Completeness, CurveRecord, NewformLevelData, NewformRecord,
};

use crate::config::{DataMode, RunConfig};

pub const NEWFORMS_SCHEMA: &str = "quadfermat-newforms/1";
pub const CURVES_SCHEMA: &str = "quadfermat-curves/1";

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("not cached and offline: {0}")]
    NotCached(String),
    #[error("network error: {0}")]
    Network(String),
    #[error("schema mismatch in {path}: {why}")]
    SchemaMismatch { path: String, why: String },
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Deserialize)]
struct NewformsDoc {
    schema: String,
    #[allow(dead_code)]
    source: String,
    field: String,
    level: String,
    level_norm: u64,
    complete: bool,
    new_dimension: Option<u64>,
    rational_forms_complete: Option<bool>,
    incomplete_reason: Option<String>,
    #[serde(default, rename = "form")]
    forms: Vec<FormDoc>,
}

#[derive(Debug, Deserialize)]
struct FormDoc {
    label: String,
    eigen_poly: Vec<i64>,
    eigenvalues: BTreeMap<String, Vec<i64>>,
}

#[derive(Debug, Deserialize)]
struct CurvesDoc {
    schema: String,
    #[allow(dead_code)]
    source: String,
    field: String,
    class: String,
    #[serde(default, rename = "curve")]
    curves: Vec<CurveDoc>,
}

#[derive(Debug, Deserialize)]
struct CurveDoc {
    label: String,
    conductor: String,
    torsion: Vec<u64>,
    j_valuations: BTreeMap<String, i64>,
}

pub struct Store {
    cfg: RunConfig,
    client: Option<reqwest::blocking::Client>,
    last_request: Mutex<Option<Instant>>,
}

impl Store {
    pub fn new(cfg: RunConfig) -> Self {
        let client = match cfg.mode {
            DataMode::Online if cfg.api_base.is_some() => Some(
                reqwest::blocking::Client::builder()
                    .timeout(Duration::from_secs(30))
                    .build()
                    .expect("client construction"),
            ),
            _ => None,
        };
        Store {
            cfg,
            client,
            last_request: Mutex::new(None),
        }
    }

    pub fn config(&self) -> &RunConfig {
        &self.cfg
    }

    fn relative_path(field_label: &str, kind: &str, key: &str) -> PathBuf {
        PathBuf::from(field_label).join(kind).join(format!("{key}.toml"))
    }

    fn read_local(&self, rel: &Path) -> Option<(String, PathBuf)> {
        if let Some(cache) = &self.cfg.cache_dir {
            let p = cache.join(rel);
            if let Ok(text) = fs::read_to_string(&p) {
                return Some((text, p));
            }
        }
        let p = self.cfg.fixtures_dir.join(rel);
        fs::read_to_string(&p).ok().map(|t| (t, p))
    }

    fn fetch_document(
        &self,
        field_label: &str,
        kind: &str,
        key: &str,
    ) -> Result<(String, String), StoreError> {
        let rel = Self::relative_path(field_label, kind, key);
        if let Some((text, path)) = self.read_local(&rel) {
            return Ok((text, path.display().to_string()));
        }
        match self.cfg.mode {
            DataMode::Offline => Err(StoreError::NotCached(format!(
                "{field_label}/{kind}/{key}"
            ))),
            DataMode::Online => {
                let base = self.cfg.api_base.as_deref().ok_or_else(|| {
                    StoreError::Network(String::from("online mode without an API base URL"))
                })?;
                let url = format!("{base}/{field_label}/{kind}/{key}.toml");
                let text = self.fetch_remote(&url)?;
                self.write_cache(field_label, kind, key, &text)?;
                Ok((text, url))
            }
        }
    }

    fn fetch_remote(&self, url: &str) -> Result<String, StoreError> {
        let client = self
            .client
            .as_ref()
            .ok_or_else(|| StoreError::Network(String::from("no client configured")))?;
        // single request in flight, configurable spacing
        {
            let mut guard = self.last_request.lock().expect("rate limiter lock");
            if let Some(t) = *guard {
                let min_gap = Duration::from_millis(self.cfg.request_delay_ms);
                let since = t.elapsed();
                if since < min_gap {
                    std::thread::sleep(min_gap - since);
                }
            }
            *guard = Some(Instant::now());
        }
        let mut delay = Duration::from_millis(self.cfg.request_delay_ms.max(100));
        let mut last_err = String::new();
        for _ in 0..3 {
            match client.get(url).send() {
                Ok(resp) if resp.status().is_success() => {
                    return resp
                        .text()
                        .map_err(|e| StoreError::Network(e.to_string()));
                }
                Ok(resp) => {
                    last_err = format!("status {} from {url}", resp.status());
                }
                Err(e) => last_err = e.to_string(),
            }
            std::thread::sleep(delay);
            delay *= 2;
        }
        Err(StoreError::Network(last_err))
    }

    /// Writes a fetched document into the cache (idempotent; a cache hit
    /// never triggers the network again).
    pub fn write_cache(
        &self,
        field_label: &str,
        kind: &str,
        key: &str,
        text: &str,
    ) -> Result<(), StoreError> {
        let Some(cache) = &self.cfg.cache_dir else {
            return Ok(());
        };
        let rel = Self::relative_path(field_label, kind, key);
        let path = cache.join(&rel);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent).map_err(|e| StoreError::Io {
                path: parent.display().to_string(),
                source: e,
            })?;
        }
        let stamp = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        let body = if text.contains("fetched_at") {
            text.to_string()
        } else {
            format!("# fetched_at = {stamp}\n# source = remote\n{text}")
        };
        fs::write(&path, body).map_err(|e| StoreError::Io {
            path: path.display().to_string(),
            source: e,
        })
    }

    /// All newforms at a level, with completeness information.
    pub fn fetch_newforms(
        &self,
        field_label: &str,
        level_key: &str,
    ) -> Result<NewformLevelData, StoreError> {
        let (text, path) = self.fetch_document(field_label, "newforms", level_key)?;
        parse_newforms(&text, &path, field_label, level_key)
    }

    /// The curves of an isogeny class (keyed by the class label, which for
    /// rational forms coincides with the form label).
    pub fn fetch_isogeny_class(
        &self,
        field_label: &str,
        class_label: &str,
    ) -> Result<Vec<CurveRecord>, StoreError> {
        let (text, path) = self.fetch_document(field_label, "curves", class_label)?;
        parse_curves(&text, &path, field_label, class_label)
    }
}

fn parse_newforms(
    text: &str,
    path: &str,
    field_label: &str,
    level_key: &str,
) -> Result<NewformLevelData, StoreError> {
    let doc: NewformsDoc = toml::from_str(text).map_err(|e| StoreError::SchemaMismatch {
        path: path.to_string(),
        why: e.to_string(),
    })?;
    let mismatch = |why: String| StoreError::SchemaMismatch {
        path: path.to_string(),
        why,
    };
    if doc.schema != NEWFORMS_SCHEMA {
        return Err(mismatch(format!("schema {} != {NEWFORMS_SCHEMA}", doc.schema)));
    }
    if doc.field != field_label || doc.level != level_key {
        return Err(mismatch(format!(
            "document is for {}/{}, requested {field_label}/{level_key}",
            doc.field, doc.level
        )));
    }
    let mut forms = Vec::new();
    for f in doc.forms {
        let eigen_field = EigenvalueField::new(poly::from_coeffs(&f.eigen_poly))
            .map_err(|e| mismatch(format!("form {}: {e}", f.label)))?;
        let is_rational = eigen_field.is_rational();
        let mut eigenvalues = BTreeMap::new();
        for (prime_label, coords) in f.eigenvalues {
            if coords.len() > eigen_field.degree() {
                return Err(mismatch(format!(
                    "form {}: eigenvalue at {prime_label} has too many coordinates",
                    f.label
                )));
            }
            // Hecke bound sanity for rational values
            if coords.len() == 1 {
                let norm = parse_prime_norm(&prime_label).ok_or_else(|| {
                    mismatch(format!("bad prime label {prime_label}"))
                })?;
                let a = coords[0];
                if (a * a) as u64 > 4 * norm {
                    return Err(mismatch(format!(
                        "form {}: eigenvalue {a} at {prime_label} violates the Hecke bound",
                        f.label
                    )));
                }
            }
            let elt = eigen_field.from_coords(
                coords
                    .iter()
                    .map(|&c| BigRational::from_integer(BigInt::from(c)))
                    .collect(),
            );
            eigenvalues.insert(prime_label, elt);
        }
        forms.push(NewformRecord {
            source_label: f.label,
            field_label: doc.field.clone(),
            level_key: doc.level.clone(),
            eigen_field,
            eigenvalues,
            is_rational,
        });
    }
    let completeness = if doc.complete {
        Completeness::Complete
    } else {
        Completeness::Incomplete {
            new_dimension: doc.new_dimension,
            rationals_complete: doc.rational_forms_complete.unwrap_or(false),
            reason: doc
                .incomplete_reason
                .unwrap_or_else(|| String::from("incomplete")),
        }
    };
    Ok(NewformLevelData {
        field_label: doc.field,
        level_key: doc.level,
        level_norm: BigInt::from(doc.level_norm),
        forms,
        completeness,
    })
}

fn parse_curves(
    text: &str,
    path: &str,
    field_label: &str,
    class_label: &str,
) -> Result<Vec<CurveRecord>, StoreError> {
    let doc: CurvesDoc = toml::from_str(text).map_err(|e| StoreError::SchemaMismatch {
        path: path.to_string(),
        why: e.to_string(),
    })?;
    if doc.schema != CURVES_SCHEMA {
        return Err(StoreError::SchemaMismatch {
            path: path.to_string(),
            why: format!("schema {} != {CURVES_SCHEMA}", doc.schema),
        });
    }
    if doc.field != field_label || doc.class != class_label {
        return Err(StoreError::SchemaMismatch {
            path: path.to_string(),
            why: format!(
                "document is for {}/{}, requested {field_label}/{class_label}",
                doc.field, doc.class
            ),
        });
    }
    Ok(doc
        .curves
        .into_iter()
        .map(|c| CurveRecord {
            source_label: c.label,
            class_label: doc.class.clone(),
            conductor_key: c.conductor,
            j_valuations: c.j_valuations,
            torsion_structure: c.torsion,
        })
        .collect())
}

/// Extracts the norm from a canonical prime label `q<char>n<norm>[r<t>]`.
pub fn parse_prime_norm(label: &str) -> Option<u64> {
    let rest = label.strip_prefix('q')?;
    let n_pos = rest.find('n')?;
    let tail = &rest[n_pos + 1..];
    let norm_str = match tail.find('r') {
        Some(r_pos) => &tail[..r_pos],
        None => tail,
    };
    norm_str.parse().ok()
}
