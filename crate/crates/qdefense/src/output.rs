//! All-or-nothing file output.

use std::io::Write;
use std::path::{Path, PathBuf};

use tempfile::NamedTempFile;

#[derive(Debug, thiserror::Error)]
#[error("cannot write {}: {source}", path.display())]
pub struct OutputError {
    pub path: PathBuf,
    pub source: std::io::Error,
}

fn stage(path: &Path, bytes: &[u8]) -> Result<NamedTempFile, OutputError> {
    let err = |source| OutputError {
        path: path.to_path_buf(),
        source,
    };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = NamedTempFile::new_in(dir).map_err(err)?;
    tmp.write_all(bytes).map_err(err)?;
    tmp.as_file().sync_all().map_err(err)?;
    Ok(tmp)
}

/// Writes every file, or none of them.
///
/// Each payload is staged in a temporary file next to its destination and
/// renamed into place only once all of them are staged. Staged files are
/// removed on failure; if a later rename fails, files already renamed by this
/// call are deleted again.
pub fn write_all_atomic(files: &[(&Path, &[u8])]) -> Result<(), OutputError> {
    let staged = files
        .iter()
        .map(|(path, bytes)| stage(path, bytes))
        .collect::<Result<Vec<_>, _>>()?;
    let mut done: Vec<&Path> = Vec::new();
    for (tmp, (path, _)) in staged.into_iter().zip(files) {
        if let Err(e) = tmp.persist(path) {
            for p in done {
                let _ = std::fs::remove_file(p);
            }
            return Err(OutputError {
                path: path.to_path_buf(),
                source: e.error,
            });
        }
        done.push(path);
    }
    Ok(())
}

pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), OutputError> {
    write_all_atomic(&[(path, bytes)])
}
