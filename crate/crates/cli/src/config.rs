//! Optional TOML config: one table per subcommand, keys spelled like the
//! long flags. Flags given on the command line take precedence.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::Value;

use crate::CliError;

pub fn load(path: &Path) -> Result<toml::Table, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::invalid(format!("cannot read config {}: {e}", path.display())))?;
    text.parse::<toml::Table>().map_err(|e| CliError::invalid(format!("config {}: {e}", path.display())))
}

/// Flags over the `[section]` table of the config; unset flags fall through.
pub fn overlay<T: Serialize + DeserializeOwned>(flags: &T, config: Option<&toml::Table>, section: &str) -> Result<T, CliError> {
    let mut merged = match config.and_then(|c| c.get(section)) {
        Some(v) => serde_json::to_value(v).map_err(|e| CliError::invalid(format!("config [{section}]: {e}")))?,
        None => Value::Object(Default::default()),
    };
    let Value::Object(base) = &mut merged else {
        return Err(CliError::invalid(format!("config [{section}] must be a table")));
    };
    let Value::Object(set) = serde_json::to_value(flags).expect("flag structs serialize to objects") else {
        unreachable!("flag structs serialize to objects")
    };
    for (k, v) in set {
        if !v.is_null() {
            base.insert(k, v);
        }
    }
    serde_json::from_value(merged).map_err(|e| CliError::invalid(format!("config [{section}]: {e}")))
}
