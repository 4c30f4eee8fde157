use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{SpectralField, TorusGrid};
use crate::error::{Error, Result};

/// Sidecar header of a field file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldHeader {
    pub n: usize,
    pub domain: String,
    pub dtype: String,
    pub layout: String,
    pub kind: String,
    #[serde(default)]
    pub meta: serde_json::Map<String, serde_json::Value>,
}

impl FieldHeader {
    pub fn new(n: usize, meta: serde_json::Map<String, serde_json::Value>) -> Self {
        Self {
            n,
            domain: "2pi".into(),
            dtype: "f64le".into(),
            layout: "row-major-x1-fastest".into(),
            kind: "real-field".into(),
            meta,
        }
    }

    fn validate(&self) -> Result<()> {
        let check = |field: &str, got: &str, want: &str| {
            if got == want {
                Ok(())
            } else {
                Err(Error::Config(format!(
                    "field header: {field} is `{got}`, expected `{want}`"
                )))
            }
        };
        check("domain", &self.domain, "2pi")?;
        check("dtype", &self.dtype, "f64le")?;
        check("layout", &self.layout, "row-major-x1-fastest")?;
        check("kind", &self.kind, "real-field")?;
        Ok(())
    }
}

/// Path of the JSON sidecar that belongs to a sample file.
pub fn header_path(data: &Path) -> PathBuf {
    let mut s = data.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

/// Write the physical samples of `f` to `data` plus its JSON sidecar.
pub fn write_field(
    data: &Path,
    f: &SpectralField,
    meta: serde_json::Map<String, serde_json::Value>,
) -> Result<()> {
    let samples = f.to_physical();
    let mut bytes = Vec::with_capacity(samples.len() * 8);
    for v in &samples {
        bytes.extend_from_slice(&v.to_le_bytes());
    }
    fs::write(data, bytes)?;
    let header = FieldHeader::new(f.grid().n(), meta);
    fs::write(header_path(data), serde_json::to_string_pretty(&header)? + "\n")?;
    Ok(())
}

/// Read a field file and its sidecar.
pub fn read_field(data: &Path) -> Result<(SpectralField, FieldHeader)> {
    let text = fs::read_to_string(header_path(data))?;
    let header: FieldHeader = serde_json::from_str(&text)?;
    header.validate()?;
    let grid = TorusGrid::new(header.n)?;
    let bytes = fs::read(data)?;
    if bytes.len() != grid.physical_len() * 8 {
        return Err(Error::Config(format!(
            "field data has {} bytes, header implies {}",
            bytes.len(),
            grid.physical_len() * 8
        )));
    }
    let samples: Vec<f64> = bytes
        .chunks_exact(8)
        .map(|b| f64::from_le_bytes(b.try_into().expect("chunk of 8")))
        .collect();
    let f = SpectralField::from_physical(&grid, &samples)?;
    Ok((f, header))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn write_read_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let g = TorusGrid::new(16).unwrap();
        let f = &SpectralField::cosine(&g, [2, 1], 0.7) + &SpectralField::sine(&g, [0, 3], -0.2);
        let path = dir.path().join("theta.f64");
        let mut meta = serde_json::Map::new();
        meta.insert("q".into(), 3.into());
        write_field(&path, &f, meta).unwrap();
        let (back, header) = read_field(&path).unwrap();
        assert_eq!(header.n, 16);
        assert_eq!(header.meta["q"], 3);
        assert!((&back - &f).max_coeff() < 1e-15);
        let raw = std::fs::read(&path).unwrap();
        assert_eq!(raw.len(), 16 * 16 * 8);
    }

    #[test]
    fn corrupted_header_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("f.f64");
        std::fs::write(&path, vec![0u8; 16 * 16 * 8]).unwrap();
        std::fs::write(header_path(&path), "{\"n\": 16, \"domain\": ").unwrap();
        assert!(matches!(read_field(&path), Err(Error::Json(_))));
        std::fs::write(
            header_path(&path),
            r#"{"n":16,"domain":"2pi","dtype":"f32le","layout":"row-major-x1-fastest","kind":"real-field","meta":{}}"#,
        )
        .unwrap();
        assert!(matches!(read_field(&path), Err(Error::Config(_))));
    }
}
