//! Technology parameter database: per-node process parameters, fab carbon
//! intensities, and default packaging/design parameters.
//!
//! The database is a single JSON document (see `data/techdb.schema.json` for
//! the full schema and `data/default_db.json` for the calibrated defaults
//! shipped with the crate). Loading validates every numeric field against
//! its documented range; out-of-range values are errors unless the caller
//! explicitly opts out.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::design::DesignParams;
use crate::packaging::PackagingParams;
use crate::{Error, Result};

/// Functional class of the logic on a die. Transistor density and therefore
/// die area depend on it: digital logic scales aggressively with node,
/// memory scales moderately, analog barely.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DesignType {
    Logic,
    Memory,
    Analog,
}

impl fmt::Display for DesignType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            DesignType::Logic => "logic",
            DesignType::Memory => "memory",
            DesignType::Analog => "analog",
        };
        f.write_str(s)
    }
}

/// Transistor density per design type, in Mtransistors/mm².
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Densities {
    pub logic: f64,
    pub memory: f64,
    pub analog: f64,
}

impl Densities {
    /// Density for one design type, Mtransistors/mm².
    pub fn get(&self, t: DesignType) -> f64 {
        match t {
            DesignType::Logic => self.logic,
            DesignType::Memory => self.memory,
            DesignType::Analog => self.analog,
        }
    }
}

fn default_alpha() -> f64 {
    3.0
}

/// Process parameters of one technology node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProcessParams {
    /// Defect density, defects/cm².
    pub d0: f64,
    /// Yield model clustering parameter (dimensionless). Single documented
    /// value, so it defaults to 3 when a node entry omits it.
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    /// Transistor densities per design type, Mtransistors/mm².
    pub dt: Densities,
    /// Fab equipment efficiency derating, dimensionless in (0, 1].
    pub eta_eq: f64,
    /// Energy per wafer area, kWh/cm².
    pub epa: f64,
    /// Direct gas emissions per wafer area, g CO₂e/cm².
    pub c_gas: f64,
    /// Material footprint per wafer area, g CO₂e/cm².
    pub c_material: f64,
    /// EDA compute-productivity factor, dimensionless in (0, 1];
    /// design time divides by it, and mature nodes have higher values.
    pub eta_eda: f64,
}

/// One named node in the database: ordering index plus parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeRecord {
    /// Position in the technology progression; smaller = more advanced.
    pub feature_index: u32,
    #[serde(flatten)]
    pub params: ProcessParams,
}

/// Carbon intensities of the energy sources used by fabrication,
/// packaging, and design compute, g CO₂e/kWh.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FabProfile {
    pub c_mfg_src: f64,
    pub c_pkg_src: f64,
    pub c_des_src: f64,
}

/// The full parameter database.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TechDatabase {
    /// Technology nodes keyed by name (e.g. "7nm"); iteration order is the
    /// key order, which keeps every downstream computation deterministic.
    pub nodes: BTreeMap<String, NodeRecord>,
    pub fab: FabProfile,
    /// Default packaging parameters; systems and CLI flags may override.
    pub packaging: PackagingParams,
    /// Default design-effort parameters; systems and CLI flags may override.
    pub design: DesignParams,
}

/// Documented range of one numeric field, inclusive on both ends.
struct Range {
    field: &'static str,
    min: f64,
    max: f64,
}

const NODE_RANGES: &[Range] = &[
    Range { field: "d0", min: 0.07, max: 0.3 },
    Range { field: "alpha", min: 1.0, max: 10.0 },
    Range { field: "dt.logic", min: 5.0, max: 150.0 },
    Range { field: "dt.memory", min: 5.0, max: 150.0 },
    Range { field: "dt.analog", min: 5.0, max: 150.0 },
    Range { field: "eta_eq", min: f64::MIN_POSITIVE, max: 1.0 },
    Range { field: "epa", min: 0.8, max: 3.5 },
    Range { field: "c_gas", min: 100.0, max: 500.0 },
    Range { field: "c_material", min: 100.0, max: 500.0 },
    Range { field: "eta_eda", min: f64::MIN_POSITIVE, max: 1.0 },
];

const INTENSITY_RANGE: Range = Range {
    field: "carbon intensity",
    min: 30.0,
    max: 700.0,
};

fn check_range(origin: &str, range: &Range, value: f64) -> Result<()> {
    if !value.is_finite() || value < range.min || value > range.max {
        return Err(Error::OutOfRange {
            field: format!("{origin}.{}", range.field),
            value,
            min: range.min,
            max: range.max,
        });
    }
    Ok(())
}

impl TechDatabase {
    /// Load and validate a database from a JSON file.
    ///
    /// `allow_out_of_range` skips the numeric range checks (structural and
    /// consistency checks still apply); it exists for experiments that
    /// deliberately step outside the documented envelope.
    pub fn load(path: &Path, allow_out_of_range: bool) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text, &path.display().to_string(), allow_out_of_range)
    }

    /// Parse and validate a database from a JSON string. `origin` names the
    /// source in diagnostics.
    pub fn from_json(text: &str, origin: &str, allow_out_of_range: bool) -> Result<Self> {
        let db: TechDatabase = serde_json::from_str(text).map_err(|e| Error::Parse {
            origin: origin.to_string(),
            message: e.to_string(),
        })?;
        db.validate(allow_out_of_range)?;
        Ok(db)
    }

    /// Canonical serialization: pretty JSON that [`Self::from_json`] parses
    /// back to an equal database.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("database serialization cannot fail")
    }

    /// Parameters of a node, by name.
    pub fn lookup(&self, node: &str) -> Result<&ProcessParams> {
        self.nodes
            .get(node)
            .map(|r| &r.params)
            .ok_or_else(|| Error::UnknownNode(node.to_string()))
    }

    /// Validate structure and (unless opted out) numeric ranges.
    pub fn validate(&self, allow_out_of_range: bool) -> Result<()> {
        if self.nodes.is_empty() {
            return Err(Error::Validation("database defines no nodes".into()));
        }
        let mut seen_index: BTreeMap<u32, &str> = BTreeMap::new();
        for (name, rec) in &self.nodes {
            if let Some(prev) = seen_index.insert(rec.feature_index, name) {
                return Err(Error::Validation(format!(
                    "nodes \"{prev}\" and \"{name}\" share feature_index {}",
                    rec.feature_index
                )));
            }
            if !allow_out_of_range {
                let p = &rec.params;
                let values = [
                    p.d0,
                    p.alpha,
                    p.dt.logic,
                    p.dt.memory,
                    p.dt.analog,
                    p.eta_eq,
                    p.epa,
                    p.c_gas,
                    p.c_material,
                    p.eta_eda,
                ];
                for (range, value) in NODE_RANGES.iter().zip(values) {
                    check_range(&format!("nodes.{name}"), range, value)?;
                }
            }
        }
        if !allow_out_of_range {
            for (field, value) in [
                ("fab.c_mfg_src", self.fab.c_mfg_src),
                ("fab.c_pkg_src", self.fab.c_pkg_src),
                ("fab.c_des_src", self.fab.c_des_src),
            ] {
                check_range(field, &INTENSITY_RANGE, value)?;
            }
            self.packaging.validate()?;
        }
        self.design.validate()?;
        self.lookup(&self.packaging.node)
            .map_err(|_| Error::Validation(format!(
                "packaging node \"{}\" is not defined in the database",
                self.packaging.node
            )))?;
        Ok(())
    }

    /// Consistency warnings that are suspicious but not fatal:
    /// defect density should not grow as nodes mature, and EDA productivity
    /// should not shrink.
    pub fn consistency_warnings(&self) -> Vec<String> {
        let mut by_index: Vec<(&str, &NodeRecord)> =
            self.nodes.iter().map(|(n, r)| (n.as_str(), r)).collect();
        by_index.sort_by_key(|(_, r)| r.feature_index);
        let mut warnings = Vec::new();
        for pair in by_index.windows(2) {
            let (new_name, newer) = pair[0];
            let (old_name, older) = pair[1];
            if older.params.d0 > newer.params.d0 {
                warnings.push(format!(
                    "d0 increases from {new_name} ({}) to the more mature {old_name} ({})",
                    newer.params.d0, older.params.d0
                ));
            }
            if older.params.eta_eda < newer.params.eta_eda {
                warnings.push(format!(
                    "eta_eda decreases from {new_name} ({}) to the more mature {old_name} ({})",
                    newer.params.eta_eda, older.params.eta_eda
                ));
            }
        }
        warnings
    }
}
