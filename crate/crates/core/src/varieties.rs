//! Polarized varieties, sheaf descriptions, and the built-in catalog.
//!
//! A variety is described by its dimension `n`, the top self-intersection
//! `H^n` of the polarization and the intersection number `c1(X).H^(n-1)`.
//! The sectional genus is always derived from those by adjunction.

use std::path::Path;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::Rational;

/// Genus of the curve cut out by `dim - 1` general members of `|H|`:
/// `g = 1 + (dim-1)/2 * h_top - c1_dot_h/2`.
pub fn derive_genus(dim: u32, h_top: i64, c1_dot_h: i64) -> Result<i64> {
    if dim == 0 {
        return Err(Error::InvalidVariety("dim must be at least 1".into()));
    }
    if h_top < 1 {
        return Err(Error::InvalidVariety(format!(
            "h_top must be at least 1, got {h_top}"
        )));
    }
    let twice = (i64::from(dim) - 1)
        .checked_mul(h_top)
        .and_then(|v| v.checked_sub(c1_dot_h))
        .ok_or_else(|| Error::InvalidVariety("intersection numbers overflow".into()))?;
    if twice.rem_euclid(2) != 0 {
        return Err(Error::InvalidVariety(format!(
            "(dim-1)*h_top - c1_dot_h = {twice} is odd, so the genus is not an integer"
        )));
    }
    let genus = 1 + twice / 2;
    if genus < 0 {
        return Err(Error::InvalidVariety(format!(
            "derived genus {genus} is negative"
        )));
    }
    Ok(genus)
}

/// Raw variety data as it appears in input files and the catalog.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VarietySpec {
    #[serde(default)]
    pub name: String,
    pub dim: u32,
    pub h_top: i64,
    pub c1_dot_h: i64,
}

/// A validated polarized variety.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "VarietySpec", into = "VarietySpec")]
pub struct Variety {
    name: String,
    dim: u32,
    h_top: i64,
    c1_dot_h: i64,
    genus: i64,
}

impl Variety {
    pub fn new(name: impl Into<String>, dim: u32, h_top: i64, c1_dot_h: i64) -> Result<Self> {
        let genus = derive_genus(dim, h_top, c1_dot_h)?;
        Ok(Variety {
            name: name.into(),
            dim,
            h_top,
            c1_dot_h,
            genus,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn h_top(&self) -> i64 {
        self.h_top
    }

    pub fn c1_dot_h(&self) -> i64 {
        self.c1_dot_h
    }

    pub fn genus(&self) -> i64 {
        self.genus
    }

    pub fn spec(&self) -> VarietySpec {
        VarietySpec {
            name: self.name.clone(),
            dim: self.dim,
            h_top: self.h_top,
            c1_dot_h: self.c1_dot_h,
        }
    }
}

impl TryFrom<VarietySpec> for Variety {
    type Error = Error;

    fn try_from(spec: VarietySpec) -> Result<Self> {
        Variety::new(spec.name, spec.dim, spec.h_top, spec.c1_dot_h)
    }
}

impl From<Variety> for VarietySpec {
    fn from(v: Variety) -> Self {
        v.spec()
    }
}

/// What is known about a (torsion-free, globally generated) sheaf.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct SheafSpec {
    pub rank: i64,
    pub degree: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h0: Option<i64>,
    /// Hilbert polynomial coefficients, constant term first.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hilbert: Option<Vec<Rational>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub regularity: Option<i64>,
}

/// The two ways a sheaf's sections can be supplied.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SectionData<'a> {
    Known(i64),
    Hilbert {
        coefficients: &'a [Rational],
        regularity: i64,
    },
}

impl SheafSpec {
    pub fn validate_for_bound(&self) -> Result<()> {
        if self.rank < 1 {
            return Err(Error::InvalidInput(format!(
                "rank must be at least 1, got {}",
                self.rank
            )));
        }
        if self.degree < 0 {
            return Err(Error::Inconsistent(format!(
                "degree {} is negative; a globally generated torsion-free sheaf has degree >= 0",
                self.degree
            )));
        }
        Ok(())
    }

    /// Exactly one of `h0` or `(hilbert, regularity)` must be present.
    pub fn section_data(&self) -> Result<SectionData<'_>> {
        self.validate_for_bound()?;
        match (self.h0, &self.hilbert, self.regularity) {
            (Some(h0), None, None) => {
                if h0 < 0 {
                    return Err(Error::InvalidInput(format!("h0 must be >= 0, got {h0}")));
                }
                Ok(SectionData::Known(h0))
            }
            (None, Some(coefficients), Some(regularity)) => Ok(SectionData::Hilbert {
                coefficients,
                regularity,
            }),
            (None, Some(_), None) | (None, None, Some(_)) => Err(Error::InvalidInput(
                "hilbert and regularity must be given together".into(),
            )),
            (None, None, None) => Err(Error::InvalidInput(
                "sheaf needs either h0 or hilbert + regularity".into(),
            )),
            _ => Err(Error::InvalidInput(
                "give either h0 or hilbert + regularity, not both".into(),
            )),
        }
    }
}

/// On-disk input document: a variety plus (optionally) a sheaf.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputFile {
    pub variety: Variety,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sheaf: Option<SheafSpec>,
}

impl InputFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("input file: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CatalogFile {
    version: u32,
    entries: Vec<InputFile>,
}

pub const CATALOG_VERSION: u32 = 1;
const CATALOG_JSON: &str = include_str!("../data/catalog.json");

fn parse_catalog(text: &str) -> Result<Vec<Variety>> {
    let file: CatalogFile =
        serde_json::from_str(text).map_err(|e| Error::Internal(format!("catalog: {e}")))?;
    if file.version != CATALOG_VERSION {
        return Err(Error::Internal(format!(
            "catalog version {} not supported",
            file.version
        )));
    }
    Ok(file.entries.into_iter().map(|e| e.variety).collect())
}

/// All built-in varieties, in file order.
pub fn catalog() -> &'static [Variety] {
    static CATALOG: OnceLock<Vec<Variety>> = OnceLock::new();
    CATALOG.get_or_init(|| parse_catalog(CATALOG_JSON).expect("bundled catalog is valid"))
}

pub fn catalog_names() -> Vec<String> {
    catalog().iter().map(|v| v.name.clone()).collect()
}

/// Looks up a catalog entry by name. Exact matches win; otherwise the name is
/// compared case-insensitively.
pub fn catalog_lookup(name: &str) -> Result<Variety> {
    let entries = catalog();
    entries
        .iter()
        .find(|v| v.name == name)
        .or_else(|| entries.iter().find(|v| v.name.eq_ignore_ascii_case(name)))
        .cloned()
        .ok_or_else(|| Error::NotFound {
            name: name.to_string(),
            available: catalog_names(),
        })
}
