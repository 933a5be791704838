//! On-disk census cache keyed by crossing number, convention and generator version.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use spherecurve::enumerate::GENERATOR_VERSION;
use spherecurve::{enumerate_words, Convention, CurveCensus};

/// FNV-1a; stable across builds, unlike `DefaultHasher`.
fn version_hash() -> String {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in GENERATOR_VERSION.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    format!("{h:016x}")
}

pub fn cache_path(dir: &Path, n: usize, convention: Convention) -> PathBuf {
    let mirror = if convention.identify_mirror { "m" } else { "nm" };
    let reversal = if convention.identify_reversal { "r" } else { "nr" };
    dir.join(format!("census-n{n}-{mirror}-{reversal}-{}.gw2", version_hash()))
}

/// The census for `n`, read from `dir` when a matching file exists and
/// written there otherwise.
pub fn census(dir: Option<&Path>, n: usize, convention: Convention) -> anyhow::Result<CurveCensus> {
    let Some(dir) = dir else {
        return Ok(enumerate_words(n, convention)?);
    };
    let path = cache_path(dir, n, convention);
    if let Ok(text) = fs::read_to_string(&path) {
        if let Ok((census, generator)) = CurveCensus::from_file_str(&text) {
            if generator == GENERATOR_VERSION && census.n == n && census.convention == convention {
                return Ok(census);
            }
        }
    }
    let census = enumerate_words(n, convention)?;
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, census.to_file_string()).with_context(|| format!("writing {}", tmp.display()))?;
    fs::rename(&tmp, &path).with_context(|| format!("writing {}", path.display()))?;
    Ok(census)
}
