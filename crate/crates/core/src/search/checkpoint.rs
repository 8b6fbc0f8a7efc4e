use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{RunRecord, ScanMode};
use crate::map::Params;
use crate::{Error, Result};

pub const CHECKPOINT_FORMAT_VERSION: u32 = 1;

/// Resumable scan state. Everything below `next_n` has been scanned and merged.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanCheckpoint {
    pub format_version: u32,
    pub params: Params,
    pub scan_mode: ScanMode,
    pub next_n: u64,
    /// Start of the happy run reaching up to `next_n - 1`, if any.
    pub open_run_start: Option<u64>,
    pub open_run_len: u64,
    pub found: Vec<RunRecord>,
}

impl ScanCheckpoint {
    pub fn fresh(params: Params, scan_mode: ScanMode) -> Self {
        ScanCheckpoint {
            format_version: CHECKPOINT_FORMAT_VERSION,
            params,
            scan_mode,
            next_n: 1,
            open_run_start: None,
            open_run_len: 0,
            found: Vec::new(),
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let cp: ScanCheckpoint = serde_json::from_str(&text).map_err(|e| Error::json(path, e))?;
        if cp.format_version != CHECKPOINT_FORMAT_VERSION {
            return Err(Error::FormatVersion {
                found: cp.format_version,
                expected: CHECKPOINT_FORMAT_VERSION,
            });
        }
        cp.check()?;
        Ok(cp)
    }

    /// Writes to a sibling temp file and renames it into place.
    pub fn save(&self, path: &Path) -> Result<()> {
        let json = serde_json::to_string_pretty(self).expect("checkpoint serializes");
        let dir = path
            .parent()
            .filter(|p| !p.as_os_str().is_empty())
            .unwrap_or(Path::new("."));
        let name = path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default();
        let tmp = dir.join(format!(".{name}.tmp"));
        let mut file = fs::File::create(&tmp).map_err(|e| Error::io(&tmp, e))?;
        file.write_all(json.as_bytes())
            .map_err(|e| Error::io(&tmp, e))?;
        file.sync_all().map_err(|e| Error::io(&tmp, e))?;
        fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
    }

    pub(crate) fn check(&self) -> Result<()> {
        let bad = |msg: &str| {
            Err(Error::InvalidArgument(format!(
                "inconsistent checkpoint: {msg}"
            )))
        };
        if self.next_n == 0 {
            return bad("next_n must be positive");
        }
        match self.open_run_start {
            Some(s) if s.checked_add(self.open_run_len) != Some(self.next_n) => {
                bad("open run does not end at next_n")
            }
            None if self.open_run_len != 0 => bad("run length without a start"),
            _ => Ok(()),
        }
    }
}
