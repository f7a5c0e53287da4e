use std::io::{BufRead, Write};

use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::GroupQuadrature;

/// Coefficients `S(b, a) = ⟨η_(b,a) | f⟩`, one per quadrature node.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientTable {
    pub quadrature: GroupQuadrature,
    pub values: Vec<Complex64>,
    pub wavelet_fingerprint: String,
}

/// First line of a JSON-lines table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableHeader {
    pub format: String,
    pub version: u32,
    pub nodes: usize,
    pub wavelet_fingerprint: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config_hash: Option<String>,
}

impl TableHeader {
    pub const FORMAT: &'static str = "QWT-TABLE";
}

/// One node of a JSON-lines table; `V` carries the coefficient fields.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NodeRecord<V> {
    pub b: [f64; 4],
    pub lambda1: f64,
    pub theta1: f64,
    pub lambda2: f64,
    pub theta2: f64,
    pub weight: f64,
    #[serde(flatten)]
    pub value: V,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexValue {
    pub re: f64,
    pub im: f64,
}

/// Writes a header and one record per node.
pub fn write_records<V: Serialize, W: Write>(
    mut writer: W,
    quad: &GroupQuadrature,
    wavelet_fingerprint: &str,
    config_hash: Option<&str>,
    value: impl Fn(usize) -> V,
) -> Result<()> {
    let header = TableHeader {
        format: TableHeader::FORMAT.into(),
        version: 1,
        nodes: quad.len(),
        wavelet_fingerprint: wavelet_fingerprint.into(),
        config_hash: config_hash.map(str::to_owned),
    };
    serde_json::to_writer(&mut writer, &header)?;
    writer.write_all(b"\n")?;
    for i in 0..quad.len() {
        let g = quad.element(i);
        let rec = NodeRecord {
            b: g.b.vec4(),
            lambda1: g.decomp.lambda1,
            theta1: g.decomp.theta1,
            lambda2: g.decomp.lambda2,
            theta2: g.decomp.theta2,
            weight: quad.weight(i),
            value: value(i),
        };
        serde_json::to_writer(&mut writer, &rec)?;
        writer.write_all(b"\n")?;
    }
    writer.flush()?;
    Ok(())
}

/// Reads a table written by [`write_records`], checking each record against
/// the node it claims to be.
pub fn read_records<V: DeserializeOwned, R: BufRead>(
    reader: R,
    quad: &GroupQuadrature,
) -> Result<(TableHeader, Vec<V>)> {
    let mut lines = reader.lines();
    let header: TableHeader = match lines.next() {
        Some(line) => serde_json::from_str(&line?)?,
        None => return Err(Error::QuadratureMismatch("empty table".into())),
    };
    if header.format != TableHeader::FORMAT || header.version != 1 {
        return Err(Error::InvalidSpec(format!(
            "unsupported table format {} v{}",
            header.format, header.version
        )));
    }
    if header.nodes != quad.len() {
        return Err(Error::QuadratureMismatch(format!(
            "table has {} nodes, quadrature has {}",
            header.nodes,
            quad.len()
        )));
    }
    let mut values = Vec::with_capacity(quad.len());
    for (i, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        if i >= quad.len() {
            return Err(Error::QuadratureMismatch("too many records".into()));
        }
        let rec: NodeRecord<V> = serde_json::from_str(&line)?;
        let g = quad.element(i);
        let expected = [
            g.decomp.lambda1,
            g.decomp.theta1,
            g.decomp.lambda2,
            g.decomp.theta2,
        ];
        let found = [rec.lambda1, rec.theta1, rec.lambda2, rec.theta2];
        let close = |x: f64, y: f64| (x - y).abs() <= 1e-9 * x.abs().max(1.0);
        if !(g.b.vec4().iter().zip(&rec.b).all(|(x, y)| close(*x, *y))
            && expected.iter().zip(&found).all(|(x, y)| close(*x, *y)))
        {
            return Err(Error::QuadratureMismatch(format!(
                "record {i} does not match its quadrature node"
            )));
        }
        values.push(rec.value);
    }
    if values.len() != quad.len() {
        return Err(Error::QuadratureMismatch(format!(
            "table has {} records, quadrature has {}",
            values.len(),
            quad.len()
        )));
    }
    Ok((header, values))
}

impl CoefficientTable {
    pub fn check_consistent(&self) -> Result<()> {
        if self.values.len() != self.quadrature.len() {
            return Err(Error::QuadratureMismatch(format!(
                "{} values for {} nodes",
                self.values.len(),
                self.quadrature.len()
            )));
        }
        Ok(())
    }

    /// `Σ_i w_i |S_i|²`.
    pub fn energy(&self) -> f64 {
        self.values
            .iter()
            .enumerate()
            .map(|(i, v)| self.quadrature.weight(i) * v.norm_sqr())
            .sum()
    }

    pub fn write_jsonl<W: Write>(&self, writer: W, config_hash: Option<&str>) -> Result<()> {
        self.check_consistent()?;
        write_records(writer, &self.quadrature, &self.wavelet_fingerprint, config_hash, |i| {
            ComplexValue {
                re: self.values[i].re,
                im: self.values[i].im,
            }
        })
    }

    pub fn read_jsonl<R: BufRead>(reader: R, quadrature: GroupQuadrature) -> Result<Self> {
        let (header, values) = read_records::<ComplexValue, _>(reader, &quadrature)?;
        Ok(Self {
            quadrature,
            values: values.into_iter().map(|v| Complex64::new(v.re, v.im)).collect(),
            wavelet_fingerprint: header.wavelet_fingerprint,
        })
    }
}
