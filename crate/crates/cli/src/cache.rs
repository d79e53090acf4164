use std::fs;
use std::path::{Path, PathBuf};

use pdiv::groups::{hom_series, GroupSpec};
use pdiv::series::{parse_series_text, write_series_text, ExpSeries, SeriesText};
use sha2::{Digest, Sha256};

use crate::CliError;

/// What the cache did for one lookup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CacheEvent {
    Hit,
    Miss,
    /// An entry existed but was unusable; it has been overwritten.
    Replaced(String),
}

/// File holding the h-sequence of a group, keyed by its canonical spec.
pub fn cache_path(dir: &Path, spec: &GroupSpec) -> PathBuf {
    let digest = Sha256::digest(spec.to_string().as_bytes());
    let name: String = digest.iter().take(16).map(|b| format!("{b:02x}")).collect();
    dir.join(format!("{name}.series"))
}

fn load(path: &Path, n_max: usize) -> Result<ExpSeries, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("unreadable: {e}"))?;
    let h = parse_series_text(&text)
        .and_then(SeriesText::into_exp)
        .map_err(|e| format!("corrupt: {e}"))?;
    if h.order() < n_max {
        return Err(format!("holds n <= {}, need {n_max}", h.order()));
    }
    h.truncate(n_max).map_err(|e| e.to_string())
}

/// h_0..h_{n_max} for `spec`, from `dir` when a usable entry exists,
/// otherwise computed and written back.
pub fn cache_get_or_compute(spec: &GroupSpec, n_max: usize, dir: &Path) -> Result<(ExpSeries, CacheEvent), CliError> {
    let path = cache_path(dir, spec);
    let event = if path.exists() {
        match load(&path, n_max) {
            Ok(h) => return Ok((h, CacheEvent::Hit)),
            Err(reason) => CacheEvent::Replaced(reason),
        }
    } else {
        CacheEvent::Miss
    };
    if let CacheEvent::Replaced(reason) = &event {
        eprintln!("warning: cache entry {} for {spec} discarded ({reason}); recomputing", path.display());
    }
    let h = hom_series(spec, n_max)?;
    fs::create_dir_all(dir).map_err(|e| CliError::Io(dir.to_path_buf(), e))?;
    fs::write(&path, write_series_text(&SeriesText::from_exp(&h, 0))).map_err(|e| CliError::Io(path.clone(), e))?;
    Ok((h, event))
}
