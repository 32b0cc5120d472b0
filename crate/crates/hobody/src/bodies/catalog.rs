//! JSON body descriptions and the built-in verification catalog.

use super::{Body, BodyError, Ellipsoid, Polytope};
use crate::vecmat::Matrix;
use serde::{Deserialize, Serialize};
use std::path::Path;
use thiserror::Error;

/// Coordinates are expected inside this box.
pub const COORD_BOUND: f64 = 10.0;

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("cannot read catalog file: {0}")]
    Io(#[from] std::io::Error),
    #[error("catalog is not valid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("body {index}: coordinate {value} outside [-{bound}, {bound}]")]
    OutOfRange {
        index: usize,
        value: f64,
        bound: f64,
    },
    #[error("body {index}: {source}")]
    Invalid {
        index: usize,
        #[source]
        source: BodyError,
    },
    #[error("body {index}: missing field {field}")]
    Missing { index: usize, field: &'static str },
}

/// One body in a catalog file.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum BodySpec {
    Polytope {
        dim: usize,
        vertices: Vec<Vec<f64>>,
    },
    Ellipsoid {
        dim: usize,
        factor: Vec<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        center: Option<Vec<f64>>,
    },
    Ball {
        dim: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        center: Option<Vec<f64>>,
    },
    Simplex {
        dim: usize,
    },
    Cube {
        dim: usize,
    },
}

impl BodySpec {
    pub fn kind(&self) -> &'static str {
        match self {
            BodySpec::Polytope { .. } => "polytope",
            BodySpec::Ellipsoid { .. } => "ellipsoid",
            BodySpec::Ball { .. } => "ball",
            BodySpec::Simplex { .. } => "simplex",
            BodySpec::Cube { .. } => "cube",
        }
    }

    pub fn dim(&self) -> usize {
        match *self {
            BodySpec::Polytope { dim, .. }
            | BodySpec::Ellipsoid { dim, .. }
            | BodySpec::Ball { dim, .. }
            | BodySpec::Simplex { dim }
            | BodySpec::Cube { dim } => dim,
        }
    }

    pub fn build(&self, index: usize) -> Result<Body, CatalogError> {
        let check_coords = |vals: &[f64]| -> Result<(), CatalogError> {
            for &v in vals {
                if !v.is_finite() || v.abs() > COORD_BOUND {
                    return Err(CatalogError::OutOfRange {
                        index,
                        value: v,
                        bound: COORD_BOUND,
                    });
                }
            }
            Ok(())
        };
        let invalid = |source| CatalogError::Invalid { index, source };
        match self {
            BodySpec::Polytope { dim, vertices } => {
                for v in vertices {
                    check_coords(v)?;
                }
                Ok(Body::Polytope(
                    Polytope::from_vertices(*dim, vertices).map_err(invalid)?,
                ))
            }
            BodySpec::Ellipsoid {
                dim,
                factor,
                center,
            } => {
                if factor.len() != *dim {
                    return Err(CatalogError::Missing {
                        index,
                        field: "factor (n rows)",
                    });
                }
                for row in factor {
                    check_coords(row)?;
                }
                let c = center.clone().unwrap_or_else(|| vec![0.0; *dim]);
                check_coords(&c)?;
                Ok(Body::Ellipsoid(
                    Ellipsoid::new(c, Matrix::from_rows(factor)).map_err(invalid)?,
                ))
            }
            BodySpec::Ball { dim, center } => {
                let c = center.clone().unwrap_or_else(|| vec![0.0; *dim]);
                check_coords(&c)?;
                Ok(Body::Ellipsoid(
                    Ellipsoid::unit_ball(*dim).translated(&c),
                ))
            }
            BodySpec::Simplex { dim } => {
                if !(1..=4).contains(dim) {
                    return Err(CatalogError::Invalid {
                        index,
                        source: BodyError::UnsupportedDimension(*dim),
                    });
                }
                Ok(Body::Polytope(Polytope::simplex(*dim)))
            }
            BodySpec::Cube { dim } => {
                if !(1..=4).contains(dim) {
                    return Err(CatalogError::Invalid {
                        index,
                        source: BodyError::UnsupportedDimension(*dim),
                    });
                }
                Ok(Body::Polytope(Polytope::cube(*dim)))
            }
        }
    }
}

/// Parse a JSON array of body specs into `(id, body)` pairs.
pub fn parse_catalog(json: &str) -> Result<Vec<(String, Body)>, CatalogError> {
    let specs: Vec<BodySpec> = serde_json::from_str(json)?;
    specs
        .iter()
        .enumerate()
        .map(|(i, s)| Ok((format!("{}-n{}-{}", s.kind(), s.dim(), i), s.build(i)?)))
        .collect()
}

pub fn load_catalog(path: &Path) -> Result<Vec<(String, Body)>, CatalogError> {
    parse_catalog(&std::fs::read_to_string(path)?)
}

/// The built-in catalog for dimension `n`: simplex, cube, cross-polytope, ball.
pub fn default_catalog(n: usize) -> Vec<(String, Body)> {
    vec![
        (format!("simplex-n{n}"), Body::Polytope(Polytope::simplex(n))),
        (format!("cube-n{n}"), Body::Polytope(Polytope::cube(n))),
        (
            format!("cross-n{n}"),
            Body::Polytope(Polytope::cross_polytope(n)),
        ),
        (format!("ball-n{n}"), Body::Ellipsoid(Ellipsoid::unit_ball(n))),
    ]
}
