//! JSON interchange formats for simplices and covers.
//!
//! Integers are encoded as JSON numbers while they fit losslessly in a double
//! (|x| <= 2^53) and as decimal strings beyond that, so files round-trip at arbitrary
//! precision.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::coverage::Cover;
use crate::dilation::{Dilation, DilationSpec};
use crate::error::{Error, Result};
use crate::lattice::{LatticeSimplex, LatticeVector};

/// Arbitrary-precision integer with the number-or-string JSON encoding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JsonInt(pub BigInt);

const SAFE_MAX: i64 = 1 << 53;

impl Serialize for JsonInt {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.abs() <= BigInt::from(SAFE_MAX) {
            serializer.serialize_i64(i64::try_from(&self.0).expect("within i64 range"))
        } else {
            serializer.serialize_str(&self.0.to_string())
        }
    }
}

struct JsonIntVisitor;

impl Visitor<'_> for JsonIntVisitor {
    type Value = JsonInt;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        write!(f, "an integer or a decimal string")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<JsonInt, E> {
        Ok(JsonInt(BigInt::from(v)))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<JsonInt, E> {
        Ok(JsonInt(BigInt::from(v)))
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<JsonInt, E> {
        Err(E::custom(format!(
            "number {v} cannot be read losslessly; encode it as a string"
        )))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<JsonInt, E> {
        v.parse::<BigInt>()
            .map(JsonInt)
            .map_err(|_| E::custom(format!("invalid integer literal {v:?}")))
    }
}

impl<'de> Deserialize<'de> for JsonInt {
    fn deserialize<D: Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<JsonInt, D::Error> {
        deserializer.deserialize_any(JsonIntVisitor)
    }
}

/// On-disk representation of a lattice simplex.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimplexFile {
    pub dim: usize,
    pub vertices: Vec<Vec<JsonInt>>,
}

impl SimplexFile {
    pub fn from_simplex(simplex: &LatticeSimplex) -> Self {
        SimplexFile {
            dim: simplex.dim(),
            vertices: simplex
                .vertices()
                .iter()
                .map(|v| v.coords().iter().map(|c| JsonInt(c.clone())).collect())
                .collect(),
        }
    }

    pub fn to_simplex(&self) -> Result<LatticeSimplex> {
        if self.vertices.len() != self.dim + 1 {
            return Err(Error::InvalidFile(format!(
                "expected {} vertices for dimension {}, found {}",
                self.dim + 1,
                self.dim,
                self.vertices.len()
            )));
        }
        for (i, v) in self.vertices.iter().enumerate() {
            if v.len() != self.dim {
                return Err(Error::InvalidFile(format!(
                    "vertex {i} has {} coordinates, expected {}",
                    v.len(),
                    self.dim
                )));
            }
        }
        LatticeSimplex::new(
            self.vertices
                .iter()
                .map(|v| LatticeVector::new(v.iter().map(|c| c.0.clone()).collect()))
                .collect(),
        )
    }

    pub fn parse(json: &str) -> Result<LatticeSimplex> {
        let file: SimplexFile =
            serde_json::from_str(json).map_err(|e| Error::InvalidFile(e.to_string()))?;
        file.to_simplex()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("simplex files always serialize")
    }
}

/// One entry of a cover file: an apex dilation (optionally translated) or an explicit
/// vertex list.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum DilationEntry {
    Apex {
        apex: usize,
        modulus: u32,
        /// One nonnegative entry per vertex `j != apex`, in increasing `j` order;
        /// omitted means no translation.
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        translation: Vec<JsonInt>,
    },
    Explicit {
        modulus: u32,
        vertices: Vec<Vec<JsonInt>>,
    },
}

/// On-disk representation of a cover; entries are resolved against a separately loaded
/// parent simplex.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoverFile {
    pub dilations: Vec<DilationEntry>,
}

impl CoverFile {
    pub fn from_cover(cover: &Cover) -> Self {
        let dilations = cover
            .dilations()
            .iter()
            .map(|d| match d.spec() {
                DilationSpec::Apex {
                    apex,
                    modulus,
                    translation,
                } => DilationEntry::Apex {
                    apex: *apex,
                    modulus: *modulus,
                    translation: if translation.iter().all(|t| t.is_zero()) {
                        Vec::new()
                    } else {
                        translation
                            .iter()
                            .enumerate()
                            .filter(|&(j, _)| j != *apex)
                            .map(|(_, t)| JsonInt(t.clone()))
                            .collect()
                    },
                },
                DilationSpec::Explicit { modulus } => DilationEntry::Explicit {
                    modulus: *modulus,
                    vertices: d
                        .vertices()
                        .iter()
                        .map(|v| v.coords().iter().map(|c| JsonInt(c.clone())).collect())
                        .collect(),
                },
            })
            .collect();
        CoverFile { dilations }
    }

    pub fn resolve(&self, parent: &LatticeSimplex) -> Result<Cover> {
        let n = parent.dim();
        let mut dilations = Vec::with_capacity(self.dilations.len());
        for (i, entry) in self.dilations.iter().enumerate() {
            let dilation = match entry {
                DilationEntry::Apex {
                    apex,
                    modulus,
                    translation,
                } => {
                    let t: Vec<BigInt> = if translation.is_empty() {
                        vec![BigInt::from(0); n]
                    } else if translation.len() == n {
                        translation.iter().map(|t| t.0.clone()).collect()
                    } else {
                        return Err(Error::InvalidFile(format!(
                            "dilation {i}: translation has {} entries, expected {n}",
                            translation.len()
                        )));
                    };
                    Dilation::translated(parent, *apex, *modulus, &t)?
                }
                DilationEntry::Explicit { modulus, vertices } => {
                    let verts: Vec<LatticeVector> = vertices
                        .iter()
                        .map(|v| LatticeVector::new(v.iter().map(|c| c.0.clone()).collect()))
                        .collect();
                    Dilation::explicit(parent, *modulus, verts)?
                }
            };
            dilations.push(dilation);
        }
        Cover::new(parent.clone(), dilations)
    }

    pub fn parse(json: &str, parent: &LatticeSimplex) -> Result<Cover> {
        let file: CoverFile =
            serde_json::from_str(json).map_err(|e| Error::InvalidFile(e.to_string()))?;
        file.resolve(parent)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("cover files always serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn simplex_file_roundtrip() {
        let p = fixtures::len5_simplex();
        let json = SimplexFile::from_simplex(&p).to_json();
        let back = SimplexFile::parse(&json).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn big_integers_roundtrip_as_strings() {
        let big: BigInt = "123456789012345678901234567890".parse().unwrap();
        let json = serde_json::to_string(&JsonInt(big.clone())).unwrap();
        assert!(json.starts_with('"'));
        let back: JsonInt = serde_json::from_str(&json).unwrap();
        assert_eq!(back.0, big);
    }

    #[test]
    fn malformed_json_is_a_parse_error() {
        assert!(matches!(
            SimplexFile::parse("{\"dim\": 4"),
            Err(Error::InvalidFile(_))
        ));
        assert!(matches!(
            SimplexFile::parse("{\"dim\": 2, \"vertices\": [[0,0],[1,0]]}"),
            Err(Error::InvalidFile(_))
        ));
    }

    #[test]
    fn cover_file_roundtrip() {
        let p = fixtures::len5_simplex();
        let cover = fixtures::len5_full_cover();
        let json = CoverFile::from_cover(&cover).to_json();
        let back = CoverFile::parse(&json, &p).unwrap();
        assert_eq!(back.dilations().len(), cover.dilations().len());
        for (a, b) in back.dilations().iter().zip(cover.dilations()) {
            assert_eq!(a.vertices(), b.vertices());
            assert_eq!(a.modulus(), b.modulus());
        }
    }

    #[test]
    fn fractional_number_is_rejected() {
        let r: std::result::Result<JsonInt, _> = serde_json::from_str("1.5");
        assert!(r.is_err());
    }
}
