//! File helpers: buffered line input and outputs that only appear once complete.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{CliResult, Failure};

pub fn open_input(path: &Path) -> CliResult<BufReader<File>> {
    File::open(path).map(BufReader::new).map_err(|e| Failure::io(path, e))
}

pub fn read_to_string(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| Failure::io(path, e))
}

/// Reads up to `max` lines, without their terminators. Empty at end of input.
pub fn read_chunk(reader: &mut impl BufRead, path: &Path, max: usize) -> CliResult<Vec<String>> {
    let mut lines = Vec::new();
    while lines.len() < max {
        let mut line = String::new();
        let n = reader.read_line(&mut line).map_err(|e| Failure::io(path, e))?;
        if n == 0 {
            break;
        }
        if line.ends_with('\n') {
            line.pop();
            if line.ends_with('\r') {
                line.pop();
            }
        }
        lines.push(line);
    }
    Ok(lines)
}

/// `path` with `suffix` appended to its file name.
pub fn sidecar(path: &Path, suffix: &str) -> PathBuf {
    let mut name: OsString = path.file_name().map(OsString::from).unwrap_or_default();
    name.push(suffix);
    path.with_file_name(name)
}

/// Output written to a temporary sibling and renamed into place on `commit`.
/// Dropping it uncommitted removes the temporary file.
pub struct AtomicFile {
    dest: PathBuf,
    tmp: PathBuf,
    writer: Option<BufWriter<File>>,
}

impl AtomicFile {
    pub fn create(dest: &Path) -> CliResult<Self> {
        let tmp = sidecar(dest, &format!(".partial-{}", std::process::id()));
        let file = File::create(&tmp).map_err(|e| Failure::io(dest, e))?;
        Ok(Self {
            dest: dest.to_path_buf(),
            tmp,
            writer: Some(BufWriter::new(file)),
        })
    }

    pub fn write_line(&mut self, line: &str) -> CliResult<()> {
        let w = self.writer.as_mut().expect("not committed");
        w.write_all(line.as_bytes())
            .and_then(|_| w.write_all(b"\n"))
            .map_err(|e| Failure::io(&self.dest, e))
    }

    pub fn commit(mut self) -> CliResult<()> {
        let writer = self.writer.take().expect("not committed");
        let file = writer.into_inner().map_err(|e| Failure::io(&self.dest, e.error()))?;
        file.sync_all().map_err(|e| Failure::io(&self.dest, e))?;
        drop(file);
        std::fs::rename(&self.tmp, &self.dest).map_err(|e| Failure::io(&self.dest, e))
    }
}

impl Drop for AtomicFile {
    fn drop(&mut self) {
        if self.writer.take().is_some() {
            let _ = std::fs::remove_file(&self.tmp);
        }
    }
}

/// Writes `bytes` to `dest` through a temporary sibling.
pub fn write_atomic(dest: &Path, bytes: &[u8]) -> CliResult<()> {
    let tmp = sidecar(dest, &format!(".partial-{}", std::process::id()));
    let result = std::fs::write(&tmp, bytes).and_then(|_| std::fs::rename(&tmp, dest));
    if result.is_err() {
        let _ = std::fs::remove_file(&tmp);
    }
    result.map_err(|e| Failure::io(dest, e))
}

/// Pretty JSON document with a trailing newline.
pub fn write_json(dest: &Path, value: &impl Serialize) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    write_atomic(dest, text.as_bytes())
}
