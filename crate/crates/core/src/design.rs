//! Design-phase carbon: CPU time spent implementing each die, converted to
//! energy and carbon, then amortized over the production volume.
//!
//! The time model anchors on a reference implementation run (synthesis,
//! place and route) of `ref_gates` gates taking `t_spr_ref` CPU-hours and
//! scales linearly with gate count. Each design iteration adds analysis
//! time as a fraction of the run; verification is either an explicit hour
//! count or a share of the total. Mature nodes divide the total by a larger
//! EDA-productivity factor, so equal-sized designs close faster on them.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::manufacturing::Chiplet;
use crate::packaging::{Architecture, PackagingParams};
use crate::techdb::{FabProfile, ProcessParams, TechDatabase};
use crate::{Error, Result};

/// Design-effort parameters. Field names match the configuration schema.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DesignParams {
    /// CPU-hours of one synthesis/place-and-route run at `ref_gates`.
    pub t_spr_ref: f64,
    /// Gate count of the reference run.
    pub ref_gates: f64,
    /// Analysis time per iteration, as a fraction of the run time.
    pub t_analyze_frac: f64,
    /// Explicit verification CPU-hours. Exactly one of `t_verif` and
    /// `verif_share` must be set.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_verif: Option<f64>,
    /// Verification as a share of total design time, in [0, 1).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verif_share: Option<f64>,
    /// Number of design iterations.
    pub n_des: f64,
    /// Power of one design compute core, watts.
    pub p_des: f64,
    /// Production volume the one-time design carbon amortizes over.
    pub n_parts: f64,
    /// Transistors per logic gate, for converting die transistor counts to
    /// gate counts.
    pub transistors_per_gate: f64,
    /// Chiplets whose design is reused as-is (zero design carbon).
    pub reuse: BTreeSet<String>,
}

impl Default for DesignParams {
    fn default() -> Self {
        DesignParams {
            t_spr_ref: 24.0,
            ref_gates: 700_000.0,
            t_analyze_frac: 0.25,
            t_verif: None,
            verif_share: Some(0.65),
            n_des: 100.0,
            p_des: 10.0,
            n_parts: 200_000.0,
            transistors_per_gate: 4.0,
            reuse: BTreeSet::new(),
        }
    }
}

impl DesignParams {
    /// Validate structural constraints.
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("design.t_spr_ref", self.t_spr_ref),
            ("design.ref_gates", self.ref_gates),
            ("design.p_des", self.p_des),
            ("design.transistors_per_gate", self.transistors_per_gate),
        ];
        for (field, value) in positive {
            if !(value > 0.0) || !value.is_finite() {
                return Err(Error::Validation(format!("{field} must be positive, got {value}")));
            }
        }
        if !(self.t_analyze_frac >= 0.0) {
            return Err(Error::Validation(format!(
                "design.t_analyze_frac must be non-negative, got {}",
                self.t_analyze_frac
            )));
        }
        if !(self.n_des >= 1.0) {
            return Err(Error::Validation(format!(
                "design.n_des must be at least 1, got {}",
                self.n_des
            )));
        }
        if !(self.n_parts >= 1.0) {
            return Err(Error::Validation(format!(
                "design.n_parts must be at least 1, got {}",
                self.n_parts
            )));
        }
        match (self.t_verif, self.verif_share) {
            (Some(t), None) => {
                if !(t >= 0.0) {
                    return Err(Error::Validation(format!(
                        "design.t_verif must be non-negative, got {t}"
                    )));
                }
            }
            (None, Some(share)) => {
                if !(0.0..1.0).contains(&share) {
                    return Err(Error::Validation(format!(
                        "design.verif_share must lie in [0, 1), got {share}"
                    )));
                }
            }
            (Some(_), Some(_)) => {
                return Err(Error::Validation(
                    "design.t_verif and design.verif_share are mutually exclusive; \
                     set exactly one"
                        .into(),
                ));
            }
            (None, None) => {
                return Err(Error::Validation(
                    "design requires exactly one of t_verif or verif_share".into(),
                ));
            }
        }
        Ok(())
    }
}

/// Per-system design carbon breakdown.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DesignResult {
    /// Unamortized design carbon per chiplet, g CO₂e.
    pub per_chiplet_carbon: BTreeMap<String, f64>,
    /// Unamortized carbon of designing the communication hardware, g CO₂e.
    pub comm_carbon: f64,
    /// Total one-time design carbon, g CO₂e.
    pub total_unamortized: f64,
    /// Design carbon attributed to each manufactured part, g CO₂e.
    pub amortized_per_part: f64,
}

/// Gate count of a chiplet under the configured transistors-per-gate ratio.
pub fn gate_count(chiplet: &Chiplet, dp: &DesignParams) -> f64 {
    chiplet.mtransistors * 1e6 / dp.transistors_per_gate
}

/// Total design CPU-hours for a raw gate count at one node:
/// iterations of (run + analysis), plus verification, divided by the
/// node's EDA-productivity factor.
pub fn design_time_for_gates(gates: f64, dp: &DesignParams, params: &ProcessParams) -> f64 {
    let t_spr = dp.t_spr_ref * gates / dp.ref_gates;
    let t_analyze = dp.t_analyze_frac * t_spr;
    let iterated = (t_spr + t_analyze) * dp.n_des;
    let t_verif = match (dp.t_verif, dp.verif_share) {
        (Some(t), _) => t,
        (None, Some(share)) => share / (1.0 - share) * iterated,
        (None, None) => 0.0,
    };
    (t_verif + iterated) / params.eta_eda
}

/// Total design CPU-hours for one chiplet.
pub fn design_time(chiplet: &Chiplet, dp: &DesignParams, params: &ProcessParams) -> f64 {
    design_time_for_gates(gate_count(chiplet, dp), dp, params)
}

/// Carbon of `t_hours` of design compute, g CO₂e.
pub fn design_carbon_for_time(t_hours: f64, dp: &DesignParams, fab: &FabProfile) -> f64 {
    t_hours * (dp.p_des / 1000.0) * fab.c_des_src
}

/// Unamortized design carbon of one chiplet; zero when its design is
/// reused.
pub fn chiplet_design_cfp(chiplet: &Chiplet, dp: &DesignParams, db: &TechDatabase) -> Result<f64> {
    if dp.reuse.contains(&chiplet.name) {
        return Ok(0.0);
    }
    let params = db.lookup(&chiplet.node)?;
    Ok(design_carbon_for_time(design_time(chiplet, dp, params), dp, &db.fab))
}

/// Design carbon of the communication hardware: one router design at each
/// node that instantiates routers. Active interposers hold one router
/// design at the package node; passive interposers put routers on the
/// chiplets, so each distinct chiplet node needs its own design. RDL and
/// bridge packages carry only pre-characterized PHY lanes, and a monolith
/// has no die-to-die network, so both cost nothing here.
pub fn comm_design_cfp(
    architecture: Architecture,
    chiplets: &[Chiplet],
    pp: &PackagingParams,
    dp: &DesignParams,
    db: &TechDatabase,
) -> Result<f64> {
    let router_gates = pp.noc_ports * pp.noc_flit_width * pp.k_router / dp.transistors_per_gate;
    match architecture {
        Architecture::ActiveInterposer => {
            let params = db.lookup(&pp.node)?;
            let t = design_time_for_gates(router_gates, dp, params);
            Ok(design_carbon_for_time(t, dp, &db.fab))
        }
        Architecture::PassiveInterposer => {
            let nodes: BTreeSet<&str> = chiplets.iter().map(|c| c.node.as_str()).collect();
            let mut total = 0.0;
            for node in nodes {
                let params = db.lookup(node)?;
                let t = design_time_for_gates(router_gates, dp, params);
                total += design_carbon_for_time(t, dp, &db.fab);
            }
            Ok(total)
        }
        Architecture::RdlFanout | Architecture::SiliconBridge | Architecture::Monolithic => {
            Ok(0.0)
        }
    }
}

/// Design carbon of a whole system: per-chiplet designs plus the
/// communication hardware design, amortized over the production volume.
pub fn system_design_cfp(
    chiplets: &[Chiplet],
    pp: &PackagingParams,
    dp: &DesignParams,
    db: &TechDatabase,
) -> Result<DesignResult> {
    let mut per_chiplet_carbon = BTreeMap::new();
    let mut total = 0.0;
    for chiplet in chiplets {
        let carbon = chiplet_design_cfp(chiplet, dp, db)?;
        total += carbon;
        per_chiplet_carbon.insert(chiplet.name.clone(), carbon);
    }
    let comm_carbon = comm_design_cfp(pp.architecture, chiplets, pp, dp, db)?;
    total += comm_carbon;
    Ok(DesignResult {
        per_chiplet_carbon,
        comm_carbon,
        total_unamortized: total,
        amortized_per_part: total / dp.n_parts,
    })
}
