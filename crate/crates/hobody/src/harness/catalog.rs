//! Named bodies the verification suites draw from.
//!
//! A catalog is a flat list of `(name, spec)` entries; specs are small
//! declarative descriptions (kind + parameters) so catalogs can live in JSON
//! files and reports can reference bodies by stable names.

use serde::{Deserialize, Serialize};

use crate::bodies::{Body, BodyError, Ellipsoid, Polytope};
use crate::vecmat::Matrix;

/// Declarative description of a catalog body.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum BodySpec {
    /// `conv{0, e_1, .., e_n}`.
    Simplex { n: usize },
    /// `[0,1]^n`.
    Cube { n: usize },
    /// `conv{±e_1, .., ±e_n}`.
    CrossPolytope { n: usize },
    /// Regular polygon inscribed in the unit circle.
    RegularPolygon { sides: usize },
    /// Convex hull of seeded uniform points in `[-1,1]^n`.
    RandomPolytope { n: usize, points: usize, seed: u64 },
    /// Euclidean unit ball.
    Ball { n: usize },
    /// Axis-aligned ellipsoid with the given semiaxes, centered at the origin.
    Ellipsoid { semiaxes: Vec<f64> },
}

impl BodySpec {
    pub fn dim(&self) -> usize {
        match self {
            BodySpec::Simplex { n }
            | BodySpec::Cube { n }
            | BodySpec::CrossPolytope { n }
            | BodySpec::RandomPolytope { n, .. }
            | BodySpec::Ball { n } => *n,
            BodySpec::RegularPolygon { .. } => 2,
            BodySpec::Ellipsoid { semiaxes } => semiaxes.len(),
        }
    }

    /// Polytopal specs have exact facet arithmetic downstream.
    pub fn is_polytope(&self) -> bool {
        !matches!(self, BodySpec::Ball { .. } | BodySpec::Ellipsoid { .. })
    }

    pub fn build(&self) -> Result<Body, BodyError> {
        Ok(match self {
            BodySpec::Simplex { n } => Body::Polytope(Polytope::simplex(*n)),
            BodySpec::Cube { n } => Body::Polytope(Polytope::cube(*n)),
            BodySpec::CrossPolytope { n } => Body::Polytope(Polytope::cross_polytope(*n)),
            BodySpec::RegularPolygon { sides } => {
                Body::Polytope(Polytope::regular_polygon(*sides))
            }
            BodySpec::RandomPolytope { n, points, seed } => {
                Body::Polytope(Polytope::random(*n, *points, *seed)?)
            }
            BodySpec::Ball { n } => Body::Ellipsoid(Ellipsoid::unit_ball(*n)),
            BodySpec::Ellipsoid { semiaxes } => {
                let n = semiaxes.len();
                let mut factor = vec![0.0; n * n];
                for (i, &a) in semiaxes.iter().enumerate() {
                    factor[i * n + i] = a;
                }
                Body::Ellipsoid(Ellipsoid::new(vec![0.0; n], Matrix::new(n, n, factor))?)
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub name: String,
    #[serde(flatten)]
    pub spec: BodySpec,
}

/// A list of named bodies; serialized as a bare JSON array.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Catalog {
    pub entries: Vec<CatalogEntry>,
}

impl Catalog {
    /// The built-in catalog: the sharp-constant extremizers (simplices,
    /// cubes, balls) plus generic company in each dimension.
    pub fn builtin() -> Catalog {
        let entry = |name: &str, spec: BodySpec| CatalogEntry {
            name: name.to_string(),
            spec,
        };
        Catalog {
            entries: vec![
                entry("triangle", BodySpec::Simplex { n: 2 }),
                entry("square", BodySpec::Cube { n: 2 }),
                entry("diamond", BodySpec::CrossPolytope { n: 2 }),
                entry("pentagon", BodySpec::RegularPolygon { sides: 5 }),
                entry("disk", BodySpec::Ball { n: 2 }),
                entry(
                    "ellipse",
                    BodySpec::Ellipsoid {
                        semiaxes: vec![1.25, 0.8],
                    },
                ),
                entry("tetrahedron", BodySpec::Simplex { n: 3 }),
                entry("cube-3", BodySpec::Cube { n: 3 }),
                entry("octahedron", BodySpec::CrossPolytope { n: 3 }),
                entry("ball-3", BodySpec::Ball { n: 3 }),
                entry("simplex-4", BodySpec::Simplex { n: 4 }),
                entry("cube-4", BodySpec::Cube { n: 4 }),
                entry("ball-4", BodySpec::Ball { n: 4 }),
            ],
        }
    }

    /// Parse a JSON catalog, reporting the line/column on failure.
    pub fn from_json(text: &str) -> Result<Catalog, String> {
        serde_json::from_str(text)
            .map_err(|e| format!("line {}, column {}: {e}", e.line(), e.column()))
    }

    pub fn get(&self, name: &str) -> Option<&CatalogEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn of_dim(&self, n: usize) -> impl Iterator<Item = &CatalogEntry> {
        self.entries.iter().filter(move |e| e.spec.dim() == n)
    }

    /// Built polytopes of dimension `n`, in catalog order.
    pub fn polytopes_of_dim(&self, n: usize) -> Result<Vec<(String, Polytope)>, BodyError> {
        let mut out = Vec::new();
        for e in self.of_dim(n) {
            if e.spec.is_polytope() {
                match e.spec.build()? {
                    Body::Polytope(p) => out.push((e.name.clone(), p)),
                    Body::Ellipsoid(_) => unreachable!("polytopal spec built an ellipsoid"),
                }
            }
        }
        Ok(out)
    }

    /// Built bodies of dimension `n`, in catalog order.
    pub fn bodies_of_dim(&self, n: usize) -> Result<Vec<(String, Body)>, BodyError> {
        self.of_dim(n)
            .map(|e| Ok((e.name.clone(), e.spec.build()?)))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_catalog_builds_every_entry() {
        let cat = Catalog::builtin();
        for e in &cat.entries {
            let body = e.spec.build().unwrap();
            assert_eq!(body.dim(), e.spec.dim(), "{}", e.name);
            assert!(body.volume() > 0.0, "{}", e.name);
        }
        assert!(cat.get("triangle").is_some());
        assert!(cat.get("nonagon").is_none());
        assert_eq!(cat.polytopes_of_dim(2).unwrap().len(), 4);
        assert_eq!(cat.bodies_of_dim(3).unwrap().len(), 4);
    }

    #[test]
    fn catalog_round_trips_through_json() {
        let cat = Catalog::builtin();
        let text = serde_json::to_string_pretty(&cat).unwrap();
        let back = Catalog::from_json(&text).unwrap();
        assert_eq!(cat, back);
    }

    #[test]
    fn parse_errors_carry_line_and_column() {
        let bad = "[\n  {\"name\": \"x\", \"kind\": \"simplex\"}\n]";
        let err = Catalog::from_json(bad).unwrap_err();
        assert!(err.starts_with("line 2"), "{err}");
    }

    #[test]
    fn ellipse_volume_matches_the_semiaxes() {
        let body = BodySpec::Ellipsoid {
            semiaxes: vec![1.25, 0.8],
        }
        .build()
        .unwrap();
        assert!((body.volume() - std::f64::consts::PI).abs() < 1e-12);
    }
}
