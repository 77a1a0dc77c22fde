//! On-disk formats: coloring documents and block-family exports.

use std::path::Path;

use serde::{Deserialize, Serialize};

use schur_core::blocks::BlockFamily;
use schur_core::{AmbientGroup, Coloring, Enumeration, GroupElement};

#[derive(Debug, thiserror::Error)]
pub enum FileError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Format {
        path: String,
        source: serde_json::Error,
    },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Core(#[from] schur_core::Error),
}

/// A coloring document: prefix length, color count, witness dimension, the
/// enumeration it colors, and the colors themselves.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoringFile {
    pub n: usize,
    pub r: u32,
    pub k: usize,
    pub enumeration: EnumerationField,
    pub colors: Vec<u32>,
}

/// Either the named natural enumeration or an explicit integer list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EnumerationField {
    Named(String),
    Explicit(Vec<i64>),
}

impl EnumerationField {
    pub fn natural() -> Self {
        EnumerationField::Named("natural".into())
    }

    pub fn to_enumeration(&self) -> Result<Enumeration, FileError> {
        match self {
            EnumerationField::Named(name) if name == "natural" => Ok(Enumeration::natural()),
            EnumerationField::Named(name) => Err(FileError::Invalid(format!(
                "unknown enumeration {name:?}; expected \"natural\" or an element list"
            ))),
            EnumerationField::Explicit(values) => Ok(Enumeration::explicit(
                AmbientGroup::Integers,
                values.iter().map(|&v| GroupElement::Int(v)).collect(),
            )?),
        }
    }
}

impl ColoringFile {
    pub fn new(
        r: u32,
        k: usize,
        enumeration: EnumerationField,
        coloring: &Coloring,
    ) -> ColoringFile {
        ColoringFile {
            n: coloring.len(),
            r,
            k,
            enumeration,
            colors: coloring.colors().to_vec(),
        }
    }

    pub fn load(path: &Path) -> Result<ColoringFile, FileError> {
        let text = std::fs::read_to_string(path).map_err(|source| FileError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let file: ColoringFile =
            serde_json::from_str(&text).map_err(|source| FileError::Format {
                path: path.display().to_string(),
                source,
            })?;
        if file.colors.len() != file.n {
            return Err(FileError::Invalid(format!(
                "document declares n={} but carries {} colors",
                file.n,
                file.colors.len()
            )));
        }
        Ok(file)
    }

    pub fn save(&self, path: &Path) -> Result<(), FileError> {
        let text = serde_json::to_string_pretty(self).expect("serializable");
        std::fs::write(path, text + "\n").map_err(|source| FileError::Io {
            path: path.display().to_string(),
            source,
        })
    }

    pub fn coloring(&self) -> Result<Coloring, FileError> {
        Ok(Coloring::new(self.r, self.colors.clone())?)
    }
}

/// Serialized block family: per block its construction metadata and
/// elements.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockFamilyFile {
    pub blocks: Vec<BlockFileEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockFileEntry {
    pub modulus: i64,
    pub residue: i64,
    #[serde(rename = "prefixLength")]
    pub prefix_length: usize,
    pub surrogate: bool,
    pub elements: Vec<i64>,
}

impl BlockFamilyFile {
    pub fn from_family(family: &BlockFamily) -> Self {
        BlockFamilyFile {
            blocks: family
                .blocks()
                .iter()
                .map(|b| BlockFileEntry {
                    modulus: b.meta.modulus,
                    residue: b.meta.residue,
                    prefix_length: b.meta.prefix_length,
                    surrogate: b.meta.surrogate,
                    elements: b.elements.clone(),
                })
                .collect(),
        }
    }

    pub fn save(&self, path: &Path) -> Result<(), FileError> {
        let text = serde_json::to_string_pretty(self).expect("serializable");
        std::fs::write(path, text + "\n").map_err(|source| FileError::Io {
            path: path.display().to_string(),
            source,
        })
    }

    pub fn load(path: &Path) -> Result<Self, FileError> {
        let text = std::fs::read_to_string(path).map_err(|source| FileError::Io {
            path: path.display().to_string(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|source| FileError::Format {
            path: path.display().to_string(),
            source,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coloring_file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.json");
        let coloring = Coloring::new(2, vec![1, 2, 2, 1]).unwrap();
        let file = ColoringFile::new(2, 1, EnumerationField::natural(), &coloring);
        file.save(&path).unwrap();
        let loaded = ColoringFile::load(&path).unwrap();
        assert_eq!(loaded, file);
        assert_eq!(loaded.coloring().unwrap(), coloring);
        assert_eq!(
            loaded.enumeration.to_enumeration().unwrap(),
            Enumeration::natural()
        );
    }

    #[test]
    fn explicit_enumeration_field() {
        let text = r#"{"n":2,"r":1,"k":1,"enumeration":[3,5],"colors":[1,1]}"#;
        let file: ColoringFile = serde_json::from_str(text).unwrap();
        let e = file.enumeration.to_enumeration().unwrap();
        assert_eq!(e.available_len(), Some(2));
    }

    #[test]
    fn length_mismatch_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.json");
        std::fs::write(
            &path,
            r#"{"n":3,"r":1,"k":1,"enumeration":"natural","colors":[1]}"#,
        )
        .unwrap();
        assert!(matches!(
            ColoringFile::load(&path),
            Err(FileError::Invalid(_))
        ));
    }
}
