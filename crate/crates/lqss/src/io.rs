//! The JSON system-file format consumed by the command-line tools and
//! produced by the fixture emitter.
//!
//! A document carries the dimensions `n`, `m`, `n_y` and exactly one of a
//! `physical` section (`R`, `K`, `S`, `output_fields`) or a `quadrature`
//! section (`A`, `B`, `C`, `D`). Matrices are nested row-major arrays;
//! complex entries are `[re, im]` pairs. Unknown keys are rejected.

use num_complex::Complex;
use serde::{Deserialize, Serialize};
use std::path::Path;

use crate::error::{Error, Result};
use crate::model::{build_quadrature, PhysicalParams, QuadratureModel};
use crate::{CMat, Mat};

type C64 = Complex<f64>;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemFile {
    pub n: usize,
    pub m: usize,
    pub n_y: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub physical: Option<PhysicalSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quadrature: Option<QuadratureSection>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhysicalSection {
    #[serde(rename = "R")]
    pub r: Vec<Vec<f64>>,
    #[serde(rename = "K")]
    pub k: Vec<Vec<[f64; 2]>>,
    #[serde(rename = "S")]
    pub s: Vec<Vec<[f64; 2]>>,
    pub output_fields: Vec<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureSection {
    #[serde(rename = "A")]
    pub a: Vec<Vec<f64>>,
    #[serde(rename = "B")]
    pub b: Vec<Vec<f64>>,
    #[serde(rename = "C")]
    pub c: Vec<Vec<f64>>,
    #[serde(rename = "D")]
    pub d: Vec<Vec<f64>>,
}

fn real_matrix(rows: &[Vec<f64>], nr: usize, nc: usize, name: &str) -> Result<Mat> {
    if rows.len() != nr || rows.iter().any(|r| r.len() != nc) {
        return Err(Error::InvalidSystemFile(format!(
            "{name} must be {nr}x{nc} (row-major nested arrays)"
        )));
    }
    Ok(Mat::from_fn(nr, nc, |i, j| rows[i][j]))
}

fn complex_matrix(rows: &[Vec<[f64; 2]>], nr: usize, nc: usize, name: &str) -> Result<CMat> {
    if rows.len() != nr || rows.iter().any(|r| r.len() != nc) {
        return Err(Error::InvalidSystemFile(format!(
            "{name} must be {nr}x{nc} of [re, im] pairs"
        )));
    }
    Ok(CMat::from_fn(nr, nc, |i, j| {
        C64::new(rows[i][j][0], rows[i][j][1])
    }))
}

fn real_rows(m: &Mat) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

fn complex_rows(m: &CMat) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows())
        .map(|i| {
            (0..m.ncols())
                .map(|j| [m[(i, j)].re, m[(i, j)].im])
                .collect()
        })
        .collect()
}

impl SystemFile {
    pub fn from_physical(p: &PhysicalParams) -> Self {
        Self {
            n: p.modes(),
            m: p.fields(),
            n_y: p.output_quadratures(),
            physical: Some(PhysicalSection {
                r: real_rows(&p.r),
                k: complex_rows(&p.k),
                s: complex_rows(&p.s),
                output_fields: p.output_fields.clone(),
            }),
            quadrature: None,
        }
    }

    pub fn from_quadrature(g: &QuadratureModel) -> Self {
        Self {
            n: g.n,
            m: g.m,
            n_y: g.n_y,
            physical: None,
            quadrature: Some(QuadratureSection {
                a: real_rows(&g.a),
                b: real_rows(&g.b),
                c: real_rows(&g.c),
                d: real_rows(&g.d),
            }),
        }
    }

    /// Structural validation: exactly one section, matching dimensions.
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.m == 0 {
            return Err(Error::InvalidSystemFile(
                "n and m must be positive".into(),
            ));
        }
        if self.n_y % 2 != 0 || self.n_y > 2 * self.m {
            return Err(Error::InvalidSystemFile(format!(
                "n_y must be even and at most 2m, got n_y={}, m={}",
                self.n_y, self.m
            )));
        }
        match (&self.physical, &self.quadrature) {
            (Some(_), Some(_)) => Err(Error::InvalidSystemFile(
                "exactly one of `physical` or `quadrature` is required, found both".into(),
            )),
            (None, None) => Err(Error::InvalidSystemFile(
                "exactly one of `physical` or `quadrature` is required, found neither".into(),
            )),
            (Some(p), None) => {
                if 2 * p.output_fields.len() != self.n_y {
                    return Err(Error::InvalidSystemFile(format!(
                        "output_fields has {} entries but n_y = {}",
                        p.output_fields.len(),
                        self.n_y
                    )));
                }
                real_matrix(&p.r, 2 * self.n, 2 * self.n, "R")?;
                complex_matrix(&p.k, self.m, 2 * self.n, "K")?;
                complex_matrix(&p.s, self.m, self.m, "S")?;
                Ok(())
            }
            (None, Some(q)) => {
                real_matrix(&q.a, 2 * self.n, 2 * self.n, "A")?;
                real_matrix(&q.b, 2 * self.n, 2 * self.m, "B")?;
                real_matrix(&q.c, self.n_y, 2 * self.n, "C")?;
                real_matrix(&q.d, self.n_y, 2 * self.m, "D")?;
                Ok(())
            }
        }
    }

    /// Physical parameters, when the document has a `physical` section.
    pub fn to_physical(&self) -> Result<Option<PhysicalParams>> {
        self.validate()?;
        match &self.physical {
            None => Ok(None),
            Some(sec) => {
                let r = real_matrix(&sec.r, 2 * self.n, 2 * self.n, "R")?;
                let k = complex_matrix(&sec.k, self.m, 2 * self.n, "K")?;
                let s = complex_matrix(&sec.s, self.m, self.m, "S")?;
                let p = PhysicalParams::new(r, k, s, sec.output_fields.clone())
                    .map_err(|e| Error::InvalidSystemFile(e.to_string()))?;
                Ok(Some(p))
            }
        }
    }

    /// The quadrature model described by this document (built from the
    /// physical section when present).
    pub fn to_model(&self) -> Result<QuadratureModel> {
        self.validate()?;
        if let Some(p) = self.to_physical()? {
            return build_quadrature(&p);
        }
        let q = self.quadrature.as_ref().expect("validated");
        QuadratureModel::new(
            self.n,
            self.m,
            self.n_y,
            real_matrix(&q.a, 2 * self.n, 2 * self.n, "A")?,
            real_matrix(&q.b, 2 * self.n, 2 * self.m, "B")?,
            real_matrix(&q.c, self.n_y, 2 * self.n, "C")?,
            real_matrix(&q.d, self.n_y, 2 * self.m, "D")?,
        )
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: SystemFile = serde_json::from_str(text)?;
        doc.validate()?;
        Ok(doc)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()? + "\n")?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::opo2;

    #[test]
    fn physical_roundtrip() {
        let p = opo2(1e6, -1e6, 5e6).unwrap();
        let doc = SystemFile::from_physical(&p);
        let text = doc.to_json().unwrap();
        let back = SystemFile::from_json(&text).unwrap();
        let p2 = back.to_physical().unwrap().unwrap();
        assert!((p2.r - p.r).norm() < 1e-12);
        assert!((p2.k - p.k).norm() < 1e-12);
    }

    #[test]
    fn quadrature_roundtrip() {
        let p = opo2(1e6, -1e6, 5e6).unwrap();
        let g = build_quadrature(&p).unwrap();
        let doc = SystemFile::from_quadrature(&g);
        let back = SystemFile::from_json(&doc.to_json().unwrap()).unwrap();
        let g2 = back.to_model().unwrap();
        assert!((g2.a - g.a).norm() < 1e-9);
    }

    #[test]
    fn unknown_keys_rejected() {
        let text = r#"{"n": 1, "m": 1, "n_y": 2, "surprise": true,
            "quadrature": {"A": [[0,1],[-1,0]], "B": [[0,0],[0,0]],
                           "C": [[0,0],[0,0]], "D": [[1,0],[0,1]]}}"#;
        assert!(SystemFile::from_json(text).is_err());
    }

    #[test]
    fn both_sections_rejected() {
        let p = opo2(0.0, 0.0, 1.0).unwrap();
        let g = build_quadrature(&p).unwrap();
        let mut doc = SystemFile::from_physical(&p);
        doc.quadrature = SystemFile::from_quadrature(&g).quadrature;
        assert!(doc.validate().is_err());
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let text = r#"{"n": 2, "m": 1, "n_y": 2,
            "quadrature": {"A": [[0,1],[-1,0]], "B": [[0,0],[0,0]],
                           "C": [[0,0],[0,0]], "D": [[1,0],[0,1]]}}"#;
        assert!(SystemFile::from_json(text).is_err());
    }
}
