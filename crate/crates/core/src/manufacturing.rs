//! Die manufacturing carbon: area, defect-limited yield, and per-area
//! carbon footprint (CFPA).
//!
//! A die's manufacturing carbon is `CFPA(yield) × area`, where CFPA folds
//! fab energy, direct gas emissions, and material footprint into one
//! per-cm² figure and divides by yield so scrapped dies are paid for by
//! the good ones. Yield falls superlinearly with area, which is the
//! modeling core of the whole crate: it is why splitting a large die into
//! chiplets reduces manufacturing carbon.

use serde::{Deserialize, Serialize};

use crate::techdb::{DesignType, FabProfile, ProcessParams, TechDatabase};
use crate::{Error, Result};

/// One die (or die-to-be) of a system.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Chiplet {
    /// Unique name within a system.
    pub name: String,
    /// Functional class; selects the transistor-density scaling model.
    #[serde(rename = "type", alias = "design_type")]
    pub design_type: DesignType,
    /// Transistor count in Mtransistors.
    pub mtransistors: f64,
    /// Technology node name, resolved against the database.
    pub node: String,
    /// Additive area beyond the transistor-derived core, mm²
    /// (communication PHYs, on-die routers).
    #[serde(default)]
    pub extra_area_mm2: f64,
    /// Optional explicit footprint for floorplanning, mm. When present,
    /// `width × height` must cover the derived die area.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub width_mm: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub height_mm: Option<f64>,
}

/// Manufacturing result for one die.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MfgResult {
    /// Die area, mm².
    pub area_mm2: f64,
    /// Defect-limited yield, in (0, 1].
    pub yield_fraction: f64,
    /// Carbon footprint per good area, g CO₂e/cm².
    pub cfpa: f64,
    /// Manufacturing carbon of the die, g CO₂e.
    pub carbon: f64,
}

/// Die area in mm²: transistor count over density, plus any additive area.
pub fn die_area(chiplet: &Chiplet, params: &ProcessParams) -> f64 {
    chiplet.mtransistors / params.dt.get(chiplet.design_type) + chiplet.extra_area_mm2
}

/// Defect-limited yield of a die of `area_mm2` using the negative-binomial
/// model: `(1 + area_cm² · d0 / alpha)^(-alpha)`.
pub fn die_yield(area_mm2: f64, params: &ProcessParams) -> f64 {
    (1.0 + (area_mm2 / 100.0) * params.d0 / params.alpha).powf(-params.alpha)
}

/// Carbon footprint per area, g CO₂e/cm²:
/// `(eta_eq · c_mfg_src · epa + c_gas + c_material) / yield`.
///
/// The equipment derating applies to the energy term only; gas and material
/// footprints are process-bound, not grid-bound.
pub fn cfpa(yield_fraction: f64, params: &ProcessParams, fab: &FabProfile) -> f64 {
    cfpa_with_source(yield_fraction, params, fab.c_mfg_src)
}

/// [`cfpa`] with an explicit energy carbon intensity, for silicon made in a
/// fab other than the chip fab (interposers and on-interposer routers use
/// the packaging fab's energy source).
pub fn cfpa_with_source(
    yield_fraction: f64,
    params: &ProcessParams,
    carbon_intensity: f64,
) -> f64 {
    (params.eta_eq * carbon_intensity * params.epa + params.c_gas + params.c_material)
        / yield_fraction
}

/// Full manufacturing result for a chiplet under a database.
pub fn chiplet_mfg_cfp(chiplet: &Chiplet, db: &TechDatabase) -> Result<MfgResult> {
    if !(chiplet.mtransistors > 0.0) {
        return Err(Error::Validation(format!(
            "chiplet \"{}\": transistor count must be positive, got {}",
            chiplet.name, chiplet.mtransistors
        )));
    }
    if chiplet.extra_area_mm2 < 0.0 {
        return Err(Error::Validation(format!(
            "chiplet \"{}\": extra area must be non-negative, got {}",
            chiplet.name, chiplet.extra_area_mm2
        )));
    }
    let params = db.lookup(&chiplet.node)?;
    let area_mm2 = die_area(chiplet, params);
    let yield_fraction = die_yield(area_mm2, params);
    let cfpa_value = cfpa(yield_fraction, params, &db.fab);
    Ok(MfgResult {
        area_mm2,
        yield_fraction,
        cfpa: cfpa_value,
        carbon: cfpa_value * area_mm2 / 100.0,
    })
}
