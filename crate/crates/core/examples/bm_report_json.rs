//! A b_m report as JSON, read from a field file or built in place, with the
//! on-disk cache in a temporary directory.

use cmint::cache::Cache;
use cmint::cmfield::{CmField, FieldSpec};

pub const DEFAULT_FIELD: &str = r#"{"D": 13, "delta": {"x": -29, "y": 3, "den": 2}}"#;

pub fn main() -> Result<(), Box<dyn std::error::Error>> {
    let text = match std::env::args().nth(1) {
        Some(path) => std::fs::read_to_string(path)?,
        None => DEFAULT_FIELD.to_string(),
    };
    run(&text)
}

pub fn run(field_json: &str) -> Result<(), Box<dyn std::error::Error>> {
    let spec: FieldSpec = serde_json::from_str(field_json)?;
    let field = CmField::from_spec(&spec)?;
    let dir = std::env::temp_dir().join(format!("cmint-example-{}", std::process::id()));
    let mut cache = Cache::open(&dir)?;
    for m in [1u64, 3, 5] {
        let report = cache.report(&field, m)?;
        println!("{}", serde_json::to_string(&report)?);
    }
    println!("cached {} reports in {}", cache.len(), cache.path().display());
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}
