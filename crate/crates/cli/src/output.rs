use std::io::Write;
use std::path::Path;

use serde_json::Value;

use crate::CliError;

/// Writes the report in one piece: to a sibling temp file that is renamed
/// over `path`, or to stdout.
pub fn emit(report: &Value, path: Option<&Path>) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(report).map_err(|e| CliError::Io(e.to_string()))?;
    text.push('\n');
    match path {
        Some(path) => {
            let dir = path
                .parent()
                .filter(|d| !d.as_os_str().is_empty())
                .unwrap_or(Path::new("."));
            let mut tmp = tempfile::NamedTempFile::new_in(dir)
                .map_err(|e| CliError::Io(format!("creating temp file in {}: {e}", dir.display())))?;
            tmp.write_all(text.as_bytes())
                .and_then(|_| tmp.as_file().sync_all())
                .map_err(|e| CliError::Io(e.to_string()))?;
            tmp.persist(path)
                .map_err(|e| CliError::Io(format!("writing {}: {e}", path.display())))?;
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(text.as_bytes())
                .and_then(|_| lock.flush())
                .map_err(|e| CliError::Io(e.to_string()))?;
        }
    }
    Ok(())
}
