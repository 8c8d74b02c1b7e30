//! JSON documents for matrices, edge lists, group specs and group functions.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cayley::cayley_matrix;

use crate::constructions::{adjacency_from_edges, Provenance};
use crate::error::{Error, Result};
use crate::group::{build_standard_group, GroupFamily, GroupFunction};
use crate::matrix::DenseMatrix;

/// Largest residual accepted when re-checking a stored eigenpair.
pub const CERTIFICATE_TOLERANCE: f64 = 1e-9;

/// `A x = value x`, stored alongside a matrix and re-checked on load.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenCertificate {
    pub value: f64,
    pub vector: Vec<f64>,
}

impl EigenCertificate {
    /// `max_i |(A x)_i - value x_i|`.
    pub fn residual(&self, a: &DenseMatrix) -> Result<f64> {
        if !a.is_square() || a.cols() != self.vector.len() {
            return Err(Error::Dimension {
                expected: format!("vector of length {}", a.cols()),
                got: format!("{}", self.vector.len()),
            });
        }
        let ax = a.matvec(&self.vector);
        Ok(ax
            .iter()
            .zip(&self.vector)
            .map(|(y, x)| (y - self.value * x).abs())
            .fold(0.0, f64::max))
    }
}

/// A group function stored with the matrix it generates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CayleySource {
    pub group: GroupFamily,
    pub values: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixDocument {
    #[serde(flatten)]
    pub matrix: DenseMatrix,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Provenance>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cayley: Option<CayleySource>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eigen_certificate: Option<EigenCertificate>,
}

impl MatrixDocument {
    pub fn new(matrix: DenseMatrix) -> Self {
        MatrixDocument {
            matrix,
            provenance: None,
            generator: None,
            cayley: None,
            eigen_certificate: None,
        }
    }

    /// Re-checks the eigen certificate and the Cayley source, if present.
    pub fn validate(&self) -> Result<()> {
        if let Some(c) = &self.eigen_certificate {
            let r = c.residual(&self.matrix)?;
            if r > CERTIFICATE_TOLERANCE {
                return Err(Error::Parse(format!(
                    "stored eigenpair for {} has residual {r:e}",
                    c.value
                )));
            }
        }
        if let Some(c) = &self.cayley {
            let order = c.group.order().unwrap_or(0);
            if c.values.len() != order || self.matrix.rows() != order || !self.matrix.is_square() {
                return Err(Error::Parse(format!(
                    "Cayley source on {} does not match a {}x{} matrix",
                    c.group.label(),
                    self.matrix.rows(),
                    self.matrix.cols()
                )));
            }
            let group = Arc::new(build_standard_group(&c.group)?);
            let f = GroupFunction::new(group, c.values.clone())?;
            if cayley_matrix(&f).matrix != self.matrix {
                return Err(Error::Parse(format!(
                    "matrix is not the Cayley matrix of the stored function on {}",
                    c.group.label()
                )));
            }
        }
        Ok(())
    }
}

/// `{n, edges: [[s, t], ...]}` for an undirected simple graph.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeListDocument {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

/// Parses a matrix document or an edge list (expanded to a symmetric 0/1 matrix).
pub fn parse_matrix_input(text: &str) -> Result<MatrixDocument> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    let doc = if value.get("edges").is_some() {
        let e: EdgeListDocument = serde_json::from_value(value)?;
        MatrixDocument::new(adjacency_from_edges(e.n, &e.edges)?)
    } else {
        serde_json::from_value(value)?
    };
    doc.validate()?;
    Ok(doc)
}

pub fn to_pretty_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

/// Parses `Z12`, `D4`, `S3`, or products such as `Z2xZ2` / `D4xZ3`.
pub fn parse_group_spec(spec: &str) -> Result<GroupFamily> {
    let factor = |s: &str| -> Result<GroupFamily> {
        let s = s.trim();
        let bad = || Error::Parse(format!("unknown group factor '{s}' (expected Zn, Dn or Sn)"));
        let mut chars = s.chars();
        let kind = chars.next().ok_or_else(bad)?;
        let k: usize = chars.as_str().parse().map_err(|_| bad())?;
        if k == 0 {
            return Err(bad());
        }
        match kind.to_ascii_uppercase() {
            'Z' | 'C' => Ok(GroupFamily::Cyclic(k)),
            'D' => Ok(GroupFamily::Dihedral(k)),
            'S' => Ok(GroupFamily::Symmetric(k)),
            _ => Err(bad()),
        }
    };
    let mut parts = spec.split(['x', 'X', '*']);
    let first = factor(parts.next().unwrap_or(""))?;
    parts.try_fold(first, |acc, p| {
        Ok(GroupFamily::Product(Box::new(acc), Box::new(factor(p)?)))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_specs_roundtrip_labels() {
        for s in ["Z12", "D4", "S3", "Z2xZ2", "D4xZ3xZ2"] {
            assert_eq!(parse_group_spec(s).unwrap().label(), s);
        }
        assert!(parse_group_spec("Q8").is_err());
        assert!(parse_group_spec("Z0").is_err());
        assert!(parse_group_spec("").is_err());
    }

    #[test]
    fn edge_list_expands() {
        let doc = parse_matrix_input(r#"{"n": 3, "edges": [[0, 1], [1, 2]]}"#).unwrap();
        assert_eq!(doc.matrix.data(), &[0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0]);
        assert!(parse_matrix_input(r#"{"n": 3, "edges": [[0, 3]]}"#).is_err());
    }

    #[test]
    fn matrix_document_roundtrip() {
        let a = DenseMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let mut doc = MatrixDocument::new(a);
        doc.eigen_certificate = Some(EigenCertificate {
            value: -1.0,
            vector: vec![1.0, -1.0],
        });
        doc.provenance = Some(Provenance::new("complete", &[("n", 2)], None));
        let text = to_pretty_json(&doc);
        assert_eq!(parse_matrix_input(&text).unwrap(), doc);

        doc.eigen_certificate = Some(EigenCertificate {
            value: 1.0,
            vector: vec![1.0, -1.0],
        });
        assert!(parse_matrix_input(&to_pretty_json(&doc)).is_err());
    }

    #[test]
    fn malformed_input() {
        assert!(parse_matrix_input("[1, 2]").is_err());
        assert!(parse_matrix_input(r#"{"rows": 2, "cols": 2, "entries": [1, 2, 3]}"#).is_err());
    }
}
