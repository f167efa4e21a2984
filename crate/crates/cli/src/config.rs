//! Optional key=value defaults file. Command-line flags always win;
//! unknown keys are rejected so typos don't silently fall back.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{bail, Context, Result};

const KNOWN_KEYS: &[&str] =
    &["tol", "terms", "quad-points", "points", "a-min", "a-max", "columns", "format"];

pub fn load(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read config {}", path.display()))?;
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            bail!("{}:{}: expected key=value, got {line:?}", path.display(), lineno + 1);
        };
        let key = key.trim().to_ascii_lowercase();
        if !KNOWN_KEYS.contains(&key.as_str()) {
            bail!("{}:{}: unknown config key {key:?}", path.display(), lineno + 1);
        }
        map.insert(key, value.trim().to_string());
    }
    Ok(map)
}

/// Parse `map[key]` if present.
pub fn get<T: std::str::FromStr>(map: &BTreeMap<String, String>, key: &str) -> Result<Option<T>>
where
    T::Err: std::fmt::Display,
{
    match map.get(key) {
        None => Ok(None),
        Some(raw) => match raw.parse() {
            Ok(v) => Ok(Some(v)),
            Err(e) => bail!("config key {key} = {raw:?}: {e}"),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_temp(body: &str) -> std::path::PathBuf {
        let path = std::env::temp_dir().join(format!(
            "powsum-config-test-{}-{:?}.conf",
            std::process::id(),
            std::thread::current().id()
        ));
        let mut f = std::fs::File::create(&path).unwrap();
        f.write_all(body.as_bytes()).unwrap();
        path
    }

    #[test]
    fn parses_keys_and_comments() {
        let path = write_temp("# defaults\ntol = 1e-9\nterms=500\n\nformat = csv\n");
        let map = load(&path).unwrap();
        std::fs::remove_file(&path).unwrap();
        assert_eq!(get::<f64>(&map, "tol").unwrap(), Some(1e-9));
        assert_eq!(get::<u64>(&map, "terms").unwrap(), Some(500));
        assert_eq!(map.get("format").map(String::as_str), Some("csv"));
        assert_eq!(get::<u64>(&map, "points").unwrap(), None);
    }

    #[test]
    fn rejects_unknown_keys_and_garbage() {
        let path = write_temp("tolerance = 1e-9\n");
        assert!(load(&path).is_err());
        std::fs::remove_file(&path).unwrap();
        let path = write_temp("just words\n");
        assert!(load(&path).is_err());
        std::fs::remove_file(&path).unwrap();
    }

    #[test]
    fn reports_bad_values() {
        let path = write_temp("tol = banana\n");
        let map = load(&path).unwrap();
        std::fs::remove_file(&path).unwrap();
        assert!(get::<f64>(&map, "tol").is_err());
    }
}
