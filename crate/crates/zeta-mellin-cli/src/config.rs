//! Optional JSON run configuration. Every field mirrors a command-line
//! flag; flags given on the command line win over file entries.

use std::path::Path;

use serde::Deserialize;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    /// Identity ids to verify (same strings as `--id`).
    pub id: Option<Vec<String>>,
    /// s-grid spec, `lo:hi:n` or a single number.
    pub s: Option<String>,
    /// x-grid spec, `lo:hi:n` or a single number.
    pub x: Option<String>,
    pub tol: Option<f64>,
    /// "paper" | "oracle" | "both".
    pub convention: Option<String>,
    /// "json" | "csv".
    pub format: Option<String>,
    pub out: Option<String>,
    pub workers: Option<usize>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<FileConfig, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| format!("invalid config JSON: {e}"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_fields() {
        let cfg: FileConfig = serde_json::from_str(
            r#"{"id":["eq1.4"],"s":"0.2:0.8:5","x":"0.5","tol":1e-6,
                "convention":"both","format":"csv","out":"r.csv","workers":2}"#,
        )
        .unwrap();
        assert_eq!(cfg.id.as_deref(), Some(&["eq1.4".to_string()][..]));
        assert_eq!(cfg.workers, Some(2));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(serde_json::from_str::<FileConfig>(r#"{"ids":["eq1.4"]}"#).is_err());
    }
}
