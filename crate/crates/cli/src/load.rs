use std::fmt;
use std::fs;
use std::path::Path;
use std::sync::Arc;

use lowdin::schema::{GramSpec, LoadedState, StateSpec};
use lowdin::{GramMatrix64, Tolerances64};
use serde_json::Value;

/// Unreadable or malformed input; reported with exit code 2.
#[derive(Debug)]
pub struct BadInput(pub String);

impl fmt::Display for BadInput {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for BadInput {}

fn read_json(path: &Path) -> Result<Value, BadInput> {
    let text = fs::read_to_string(path)
        .map_err(|e| BadInput(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| BadInput(format!("{}: invalid JSON: {e}", path.display())))
}

/// Reads a Gram spec, either bare or under a top-level `gram` key.
pub fn gram_spec(path: &Path) -> Result<GramSpec, BadInput> {
    let mut value = read_json(path)?;
    if value.get("kind").is_none() {
        if let Some(inner) = value.get_mut("gram") {
            value = inner.take();
        }
    }
    serde_json::from_value(value).map_err(|e| BadInput(format!("{}: invalid Gram matrix: {e}", path.display())))
}

pub fn gram(path: &Path, tol: &Tolerances64) -> anyhow::Result<Arc<GramMatrix64>> {
    Ok(Arc::new(gram_spec(path)?.to_gram(tol)?))
}

pub fn state_spec(path: &Path) -> Result<StateSpec, BadInput> {
    serde_json::from_value(read_json(path)?)
        .map_err(|e| BadInput(format!("{}: invalid state: {e}", path.display())))
}

pub fn state(path: &Path, tol: &Tolerances64) -> anyhow::Result<LoadedState> {
    Ok(state_spec(path)?.load(tol)?)
}
