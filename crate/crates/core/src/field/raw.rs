//! QWT-RAW v1: a JSON sidecar plus a raster of little-endian `f64` pairs.
//!
//! `<stem>.json` holds the lattice description; `<stem>.bin` holds the
//! interleaved `(re, im)` samples in row-major order over the lattice axes.

use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::lattice::Lattice4;
use super::sampled::{Domain, SampledField};
use crate::error::{Error, Result};

pub const FORMAT: &str = "QWT-RAW";
pub const VERSION: u32 = 1;
pub const DTYPE: &str = "c128le";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RawHeader {
    pub format: String,
    pub version: u32,
    pub origin: Vec<f64>,
    pub spacing: f64,
    pub counts: Vec<usize>,
    pub domain: String,
    pub dtype: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub position_origin: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config_hash: Option<String>,
}

impl RawHeader {
    pub fn new(origin: Vec<f64>, spacing: f64, counts: Vec<usize>, domain: &str) -> Self {
        Self {
            format: FORMAT.into(),
            version: VERSION,
            origin,
            spacing,
            counts,
            domain: domain.into(),
            dtype: DTYPE.into(),
            position_origin: None,
            config_hash: None,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.format != FORMAT || self.version != VERSION || self.dtype != DTYPE {
            return Err(Error::InvalidField(format!(
                "unsupported raster {} v{} ({})",
                self.format, self.version, self.dtype
            )));
        }
        if self.origin.len() != self.counts.len() {
            return Err(Error::InvalidField("origin and counts differ in length".into()));
        }
        Ok(())
    }
}

fn paths(stem: &Path) -> (PathBuf, PathBuf) {
    (stem.with_extension("json"), stem.with_extension("bin"))
}

pub fn write_raw(stem: &Path, header: &RawHeader, values: &[Complex64]) -> Result<()> {
    header.validate()?;
    let (json, bin) = paths(stem);
    let mut bytes = Vec::with_capacity(values.len() * 16);
    for v in values {
        bytes.extend_from_slice(&v.re.to_le_bytes());
        bytes.extend_from_slice(&v.im.to_le_bytes());
    }
    fs::write(json, serde_json::to_string_pretty(header)? + "\n")?;
    fs::write(bin, bytes)?;
    Ok(())
}

pub fn read_raw(stem: &Path) -> Result<(RawHeader, Vec<Complex64>)> {
    let (json, bin) = paths(stem);
    let header: RawHeader = serde_json::from_str(&fs::read_to_string(json)?)?;
    header.validate()?;
    let bytes = fs::read(bin)?;
    let expected: usize = header.counts.iter().product::<usize>() * 16;
    if bytes.len() != expected {
        return Err(Error::InvalidField(format!(
            "raster has {} bytes, header implies {expected}",
            bytes.len()
        )));
    }
    let values = bytes
        .chunks_exact(16)
        .map(|c| {
            let re = f64::from_le_bytes(c[..8].try_into().expect("8 bytes"));
            let im = f64::from_le_bytes(c[8..].try_into().expect("8 bytes"));
            Complex64::new(re, im)
        })
        .collect();
    Ok((header, values))
}

impl SampledField {
    pub fn raw_header(&self) -> RawHeader {
        let mut h = RawHeader::new(
            self.lattice.origin.to_vec(),
            self.lattice.spacing,
            self.lattice.counts.to_vec(),
            self.domain.name(),
        );
        if let Domain::Frequency { position_origin } = self.domain {
            h.position_origin = Some(position_origin.to_vec());
        }
        h
    }

    pub fn save(&self, stem: &Path, config_hash: Option<&str>) -> Result<()> {
        let mut h = self.raw_header();
        h.config_hash = config_hash.map(str::to_owned);
        write_raw(stem, &h, &self.values)
    }

    pub fn load(stem: &Path) -> Result<SampledField> {
        let (h, values) = read_raw(stem)?;
        let arr4 = |v: &[f64]| -> Result<[f64; 4]> {
            v.try_into()
                .map_err(|_| Error::InvalidField(format!("expected 4 axes, found {}", v.len())))
        };
        let counts: [usize; 4] = h
            .counts
            .as_slice()
            .try_into()
            .map_err(|_| Error::InvalidField(format!("expected 4 axes, found {}", h.counts.len())))?;
        let lattice = Lattice4::new(arr4(&h.origin)?, h.spacing, counts)?;
        let domain = match h.domain.as_str() {
            "position" => Domain::Position,
            "frequency" => Domain::Frequency {
                position_origin: arr4(h.position_origin.as_deref().ok_or_else(|| {
                    Error::InvalidField("frequency raster without position_origin".into())
                })?)?,
            },
            other => return Err(Error::InvalidField(format!("unknown domain {other}"))),
        };
        SampledField::new(lattice, values, domain)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_both_domains() {
        let dir = tempfile::tempdir().unwrap();
        let lat = Lattice4::centered(4, 0.5).unwrap();
        let f = SampledField::from_fn(lat, |x| Complex64::new(x[0], -x[3] * x[1]));
        let stem = dir.path().join("f");
        f.save(&stem, Some("abc")).unwrap();
        assert_eq!(SampledField::load(&stem).unwrap(), f);
        let fh = f.dft().unwrap();
        fh.save(&stem, None).unwrap();
        assert_eq!(SampledField::load(&stem).unwrap(), fh);
        let text = fs::read_to_string(stem.with_extension("json")).unwrap();
        assert!(text.contains("\"c128le\""));
    }

    #[test]
    fn truncated_raster_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let lat = Lattice4::centered(3, 1.0).unwrap();
        let stem = dir.path().join("g");
        SampledField::zeros(lat, Domain::Position).save(&stem, None).unwrap();
        fs::write(stem.with_extension("bin"), [0u8; 16]).unwrap();
        assert!(matches!(SampledField::load(&stem), Err(Error::InvalidField(_))));
    }
}
