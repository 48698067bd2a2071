//! On-disk cache of SVD documents keyed by a SHA-256 of the parameters.

use std::fs;
use std::path::{Path, PathBuf};

use super::output::{io_err, sha256_hex};
use super::CliError;

pub const CACHE_ENV: &str = "SECHPROLATE_CACHE";

/// `$SECHPROLATE_CACHE`, or `sechprolate-cache` in the system temp directory.
pub fn cache_dir() -> PathBuf {
    std::env::var_os(CACHE_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("sechprolate-cache"))
}

/// Key for a canonical `name=value` list; floats are encoded by their bits.
pub fn cache_key(kind: &str, fields: &[(&str, String)]) -> String {
    let mut canon = format!("{kind};v={}", env!("CARGO_PKG_VERSION"));
    for (k, v) in fields {
        canon.push(';');
        canon.push_str(k);
        canon.push('=');
        canon.push_str(v);
    }
    sha256_hex(canon.as_bytes())
}

pub fn float_field(x: f64) -> String {
    format!("{:016x}", x.to_bits())
}

pub fn load(dir: &Path, key: &str) -> Option<Vec<u8>> {
    fs::read(dir.join(format!("{key}.json")))
        .ok()
        .filter(|b| !b.is_empty())
}

/// Writes through a temporary file and a rename.
pub fn store(dir: &Path, key: &str, bytes: &[u8]) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(io_err(format!("creating cache {}", dir.display())))?;
    let tmp = dir.join(format!("{key}.{}.tmp", std::process::id()));
    let dest = dir.join(format!("{key}.json"));
    fs::write(&tmp, bytes).map_err(io_err(format!("writing {}", tmp.display())))?;
    fs::rename(&tmp, &dest).map_err(io_err(format!("renaming into {}", dest.display())))
}
