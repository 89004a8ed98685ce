//! System assembly: load a system description, resolve parameter
//! overrides, plan the floorplan, and combine manufacturing, packaging,
//! communication, and design carbon into one report. Also hosts the
//! logic-splitting and design-space sweep machinery.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::design::{system_design_cfp, DesignParams};
use crate::floorplan::{build_floorplan, DieFootprint, FloorplanResult};
use crate::manufacturing::{chiplet_mfg_cfp, cfpa, die_area, die_yield, Chiplet};
use crate::packaging::{comm_cfp, package_cfp, Architecture, PackagingParams};
use crate::techdb::{DesignType, TechDatabase};
use crate::{Error, Result};

/// A complete system description: its dies, which pairs must talk to each
/// other, and optional parameter overrides scoped to this system.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSpec {
    pub name: String,
    pub chiplets: Vec<Chiplet>,
    /// Pairs of chiplet names that exchange traffic and therefore need a
    /// die-to-die link in bridge-based packages.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub connectivity: Vec<(String, String)>,
    /// Which chiplet a split partitions. Optional when the system has
    /// exactly one logic chiplet.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub logic_block: Option<String>,
    /// Packaging parameters this system overrides relative to the database.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub package: Option<PackagingOverride>,
    /// Design-effort parameters this system overrides.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub design: Option<DesignOverride>,
}

/// Partial override of [`PackagingParams`]; unset fields keep the
/// database defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PackagingOverride {
    pub architecture: Option<Architecture>,
    pub node: Option<String>,
    pub l_rdl: Option<f64>,
    pub epla_rdl: Option<f64>,
    pub l_bridge: Option<f64>,
    pub epla_bridge: Option<f64>,
    pub bridge_range_mm: Option<f64>,
    pub bridge_area_mm2: Option<f64>,
    pub l_int: Option<f64>,
    pub f_feol: Option<f64>,
    pub noc_ports: Option<f64>,
    pub noc_flit_width: Option<f64>,
    pub k_router: Option<f64>,
    pub phy_area_frac: Option<f64>,
    pub c_pkg_fixed: Option<f64>,
    pub chiplet_spacing_mm: Option<f64>,
}

impl PackagingOverride {
    /// Overlay the set fields onto `base`.
    pub fn apply(&self, base: &mut PackagingParams) {
        if let Some(v) = self.architecture {
            base.architecture = v;
        }
        if let Some(v) = &self.node {
            base.node = v.clone();
        }
        macro_rules! overlay {
            ($($field:ident),*) => {
                $(if let Some(v) = self.$field { base.$field = v; })*
            };
        }
        overlay!(
            l_rdl,
            epla_rdl,
            l_bridge,
            epla_bridge,
            bridge_range_mm,
            bridge_area_mm2,
            l_int,
            f_feol,
            noc_ports,
            noc_flit_width,
            k_router,
            phy_area_frac,
            c_pkg_fixed,
            chiplet_spacing_mm
        );
    }
}

/// Partial override of [`DesignParams`]; unset fields keep the database
/// defaults. Setting `t_verif` clears a default `verif_share` and vice
/// versa, so a system can switch verification models without fighting the
/// exactly-one-of rule.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DesignOverride {
    pub t_spr_ref: Option<f64>,
    pub ref_gates: Option<f64>,
    pub t_analyze_frac: Option<f64>,
    pub t_verif: Option<f64>,
    pub verif_share: Option<f64>,
    pub n_des: Option<f64>,
    pub p_des: Option<f64>,
    pub n_parts: Option<f64>,
    pub transistors_per_gate: Option<f64>,
    pub reuse: Option<BTreeSet<String>>,
}

impl DesignOverride {
    /// Overlay the set fields onto `base`.
    pub fn apply(&self, base: &mut DesignParams) {
        macro_rules! overlay {
            ($($field:ident),*) => {
                $(if let Some(v) = self.$field { base.$field = v; })*
            };
        }
        overlay!(t_spr_ref, ref_gates, t_analyze_frac, n_des, p_des, n_parts, transistors_per_gate);
        match (self.t_verif, self.verif_share) {
            (Some(t), None) => {
                base.t_verif = Some(t);
                base.verif_share = None;
            }
            (None, Some(s)) => {
                base.verif_share = Some(s);
                base.t_verif = None;
            }
            (Some(t), Some(s)) => {
                // Leave both set; validation rejects the combination with
                // a clear message.
                base.t_verif = Some(t);
                base.verif_share = Some(s);
            }
            (None, None) => {}
        }
        if let Some(r) = &self.reuse {
            base.reuse = r.clone();
        }
    }
}

/// Run-time parameter overrides (typically from CLI flags). These apply on
/// top of database defaults and system-file overrides.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub architecture: Option<Architecture>,
    pub n_parts: Option<f64>,
    pub n_des: Option<f64>,
    pub reuse: Option<BTreeSet<String>>,
    /// Skip packaging-parameter range checks (database loading has its own
    /// flag for node parameters).
    pub allow_out_of_range: bool,
}

/// Full carbon account of one evaluated configuration. All carbon in
/// g CO₂e, areas in mm².
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CarbonReport {
    pub system: String,
    pub architecture: Architecture,
    /// Manufacturing carbon per chiplet (includes any communication
    /// silicon the chiplet carries).
    pub per_chiplet_mfg: BTreeMap<String, f64>,
    /// Carbon of the package structures.
    pub c_package: f64,
    /// Carbon of communication silicon booked against the package.
    pub c_comm: f64,
    /// Amortized per-part design carbon.
    pub c_des: f64,
    /// Sum of all of the above.
    pub c_total: f64,
    pub package_area_mm2: f64,
    pub whitespace_mm2: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bridge_count: Option<u64>,
}

/// Read a system description from a JSON file.
pub fn load_system(path: &Path) -> Result<SystemSpec> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_system(&text, &path.display().to_string())
}

/// Parse a system description from a JSON string. `origin` names the
/// source in diagnostics.
pub fn parse_system(text: &str, origin: &str) -> Result<SystemSpec> {
    serde_json::from_str(text).map_err(|e| Error::Parse {
        origin: origin.to_string(),
        message: e.to_string(),
    })
}

impl SystemSpec {
    /// Check referential integrity and per-chiplet invariants against a
    /// database.
    pub fn validate(&self, db: &TechDatabase) -> Result<()> {
        if self.name.trim().is_empty() {
            return Err(Error::Validation("system name must not be empty".into()));
        }
        if self.chiplets.is_empty() {
            return Err(Error::Validation(format!(
                "system \"{}\" defines no chiplets",
                self.name
            )));
        }
        let mut names = BTreeSet::new();
        for c in &self.chiplets {
            if c.name.trim().is_empty() {
                return Err(Error::Validation("chiplet names must not be empty".into()));
            }
            if !names.insert(c.name.as_str()) {
                return Err(Error::Validation(format!(
                    "duplicate chiplet name \"{}\"",
                    c.name
                )));
            }
            let params = db.lookup(&c.node)?;
            if !(c.mtransistors > 0.0) || !c.mtransistors.is_finite() {
                return Err(Error::Validation(format!(
                    "chiplet \"{}\": transistor count must be positive, got {}",
                    c.name, c.mtransistors
                )));
            }
            if !(c.extra_area_mm2 >= 0.0) || !c.extra_area_mm2.is_finite() {
                return Err(Error::Validation(format!(
                    "chiplet \"{}\": extra area must be non-negative, got {}",
                    c.name, c.extra_area_mm2
                )));
            }
            match (c.width_mm, c.height_mm) {
                (Some(w), Some(h)) => {
                    if !(w > 0.0) || !(h > 0.0) {
                        return Err(Error::Validation(format!(
                            "chiplet \"{}\": explicit dimensions must be positive, got {w}x{h}",
                            c.name
                        )));
                    }
                    let area = die_area(c, params);
                    if w * h + 1e-9 < area {
                        return Err(Error::Validation(format!(
                            "chiplet \"{}\": explicit footprint {w}x{h} mm ({} mm²) cannot hold \
                             its {area} mm² of silicon",
                            c.name,
                            w * h
                        )));
                    }
                }
                (None, None) => {}
                _ => {
                    return Err(Error::Validation(format!(
                        "chiplet \"{}\": width_mm and height_mm must be given together",
                        c.name
                    )));
                }
            }
        }
        for (a, b) in &self.connectivity {
            for end in [a, b] {
                if !names.contains(end.as_str()) {
                    return Err(Error::Validation(format!(
                        "connectivity references unknown chiplet \"{end}\""
                    )));
                }
            }
            if a == b {
                return Err(Error::Validation(format!(
                    "connectivity pair [\"{a}\", \"{b}\"] links a chiplet to itself"
                )));
            }
        }
        if let Some(target) = &self.logic_block {
            if !names.contains(target.as_str()) {
                return Err(Error::Validation(format!(
                    "logic_block \"{target}\" names no chiplet"
                )));
            }
        }
        Ok(())
    }
}

/// Database defaults + system-file overrides + run-time overrides, in that
/// order, validated.
pub fn resolve_params(
    spec: &SystemSpec,
    db: &TechDatabase,
    ov: &Overrides,
) -> Result<(PackagingParams, DesignParams)> {
    let mut pp = db.packaging.clone();
    if let Some(o) = &spec.package {
        o.apply(&mut pp);
    }
    let mut dp = db.design.clone();
    if let Some(o) = &spec.design {
        o.apply(&mut dp);
    }
    if let Some(a) = ov.architecture {
        pp.architecture = a;
    }
    if let Some(v) = ov.n_parts {
        dp.n_parts = v;
    }
    if let Some(v) = ov.n_des {
        dp.n_des = v;
    }
    if let Some(r) = &ov.reuse {
        dp.reuse = r.clone();
    }
    if !db.nodes.contains_key(&pp.node) {
        return Err(Error::UnknownNode(pp.node.clone()));
    }
    if !ov.allow_out_of_range {
        pp.validate()?;
    }
    dp.validate()?;
    Ok((pp, dp))
}

/// Physical footprint of one chiplet: explicit dimensions when given
/// (recheck they still hold the silicon, which by now includes
/// communication overhead), square realization of the die area otherwise.
fn footprint(c: &Chiplet, db: &TechDatabase) -> Result<DieFootprint> {
    let params = db.lookup(&c.node)?;
    let area = die_area(c, params);
    match (c.width_mm, c.height_mm) {
        (Some(w), Some(h)) => {
            if w * h + 1e-9 < area {
                Err(Error::Validation(format!(
                    "chiplet \"{}\": explicit footprint {w}x{h} mm ({} mm²) cannot hold its \
                     {area} mm² of silicon including communication overhead",
                    c.name,
                    w * h
                )))
            } else {
                Ok(DieFootprint {
                    name: c.name.clone(),
                    width_mm: w,
                    height_mm: h,
                })
            }
        }
        (None, None) => Ok(DieFootprint::square(c.name.clone(), area)),
        _ => Err(Error::Validation(format!(
            "chiplet \"{}\": width_mm and height_mm must be given together",
            c.name
        ))),
    }
}

/// Chiplets with communication silicon folded into their extra area, plus
/// the resulting floorplan.
fn assemble(
    spec: &SystemSpec,
    db: &TechDatabase,
    pp: &PackagingParams,
) -> Result<(Vec<Chiplet>, FloorplanResult)> {
    let (_, deltas) = comm_cfp(pp.architecture, &spec.chiplets, pp, db)
        .map_err(|e| e.in_stage("packaging"))?;
    let effective: Vec<Chiplet> = spec
        .chiplets
        .iter()
        .map(|c| {
            let mut c = c.clone();
            if let Some(delta) = deltas.get(&c.name) {
                c.extra_area_mm2 += delta;
            }
            c
        })
        .collect();
    let footprints = effective
        .iter()
        .map(|c| footprint(c, db))
        .collect::<Result<Vec<_>>>()
        .map_err(|e| e.in_stage("validate"))?;
    let fp = build_floorplan(&footprints, pp.chiplet_spacing_mm)
        .map_err(|e| e.in_stage("floorplan"))?;
    Ok((effective, fp))
}

/// Evaluate a system with database defaults.
pub fn evaluate(spec: &SystemSpec, db: &TechDatabase) -> Result<CarbonReport> {
    evaluate_with(spec, db, &Overrides::default())
}

/// Evaluate a system as one monolithic die, regardless of the configured
/// architecture. All chiplets must share a node.
pub fn evaluate_monolithic(spec: &SystemSpec, db: &TechDatabase) -> Result<CarbonReport> {
    evaluate_with(
        spec,
        db,
        &Overrides {
            architecture: Some(Architecture::Monolithic),
            ..Default::default()
        },
    )
}

/// Evaluate a system with run-time overrides applied.
pub fn evaluate_with(spec: &SystemSpec, db: &TechDatabase, ov: &Overrides) -> Result<CarbonReport> {
    let (pp, dp) = resolve_params(spec, db, ov).map_err(|e| e.in_stage("validate"))?;
    spec.validate(db).map_err(|e| e.in_stage("validate"))?;
    if pp.architecture == Architecture::Monolithic {
        return evaluate_monolithic_inner(spec, db, &pp, &dp);
    }

    let (effective, fp) = assemble(spec, db, &pp)?;
    let pkg = package_cfp(&effective, &fp, &spec.connectivity, &pp, db)
        .map_err(|e| e.in_stage("packaging"))?;

    let mut per_chiplet_mfg = BTreeMap::new();
    for c in &effective {
        let mfg = chiplet_mfg_cfp(c, db).map_err(|e| e.in_stage("manufacturing"))?;
        per_chiplet_mfg.insert(c.name.clone(), mfg.carbon);
    }

    let des = system_design_cfp(&spec.chiplets, &pp, &dp, db).map_err(|e| e.in_stage("design"))?;
    let c_des = des.amortized_per_part;

    let mfg_total: f64 = per_chiplet_mfg.values().sum();
    let c_total = mfg_total + pkg.c_package + pkg.c_comm + c_des;
    Ok(CarbonReport {
        system: spec.name.clone(),
        architecture: pp.architecture,
        per_chiplet_mfg,
        c_package: pkg.c_package,
        c_comm: pkg.c_comm,
        c_des,
        c_total,
        package_area_mm2: fp.package_area_mm2,
        whitespace_mm2: fp.whitespace_mm2,
        bridge_count: pkg.bridge_count,
    })
}

/// Monolithic evaluation: fuse every chiplet into one die at their shared
/// node, yield the whole die at once, and attribute carbon to each block
/// by its area share.
fn evaluate_monolithic_inner(
    spec: &SystemSpec,
    db: &TechDatabase,
    pp: &PackagingParams,
    dp: &DesignParams,
) -> Result<CarbonReport> {
    let node = &spec.chiplets[0].node;
    if let Some(other) = spec.chiplets.iter().find(|c| &c.node != node) {
        return Err(Error::Validation(format!(
            "monolithic evaluation needs one shared node, but \"{}\" is on {} while \"{}\" \
             is on {}",
            spec.chiplets[0].name, node, other.name, other.node
        ))
        .in_stage("validate"));
    }
    let params = db.lookup(node).map_err(|e| e.in_stage("validate"))?;

    let mut total_area = 0.0;
    for c in &spec.chiplets {
        total_area += die_area(c, params);
    }
    let y = die_yield(total_area, params);
    let intensity = cfpa(y, params, &db.fab);
    let mut per_chiplet_mfg = BTreeMap::new();
    for c in &spec.chiplets {
        per_chiplet_mfg.insert(c.name.clone(), intensity * die_area(c, params) / 100.0);
    }

    let des = system_design_cfp(&spec.chiplets, pp, dp, db).map_err(|e| e.in_stage("design"))?;
    let c_des = des.amortized_per_part;

    let mfg_total: f64 = per_chiplet_mfg.values().sum();
    let c_package = pp.c_pkg_fixed;
    let c_total = mfg_total + c_package + c_des;
    Ok(CarbonReport {
        system: spec.name.clone(),
        architecture: Architecture::Monolithic,
        per_chiplet_mfg,
        c_package,
        c_comm: 0.0,
        c_des,
        c_total,
        package_area_mm2: total_area,
        whitespace_mm2: 0.0,
        bridge_count: None,
    })
}

/// Floorplan a system without costing it: communication silicon is folded
/// into the die footprints exactly as evaluation would.
pub fn plan_floorplan(
    spec: &SystemSpec,
    db: &TechDatabase,
    ov: &Overrides,
) -> Result<FloorplanResult> {
    let (pp, _) = resolve_params(spec, db, ov).map_err(|e| e.in_stage("validate"))?;
    spec.validate(db).map_err(|e| e.in_stage("validate"))?;
    if pp.architecture == Architecture::Monolithic {
        let node = &spec.chiplets[0].node;
        if let Some(other) = spec.chiplets.iter().find(|c| &c.node != node) {
            return Err(Error::Validation(format!(
                "monolithic evaluation needs one shared node, but \"{}\" is on {} while \
                 \"{}\" is on {}",
                spec.chiplets[0].name, node, other.name, other.node
            ))
            .in_stage("validate"));
        }
        let params = db.lookup(node).map_err(|e| e.in_stage("validate"))?;
        let total: f64 = spec.chiplets.iter().map(|c| die_area(c, params)).sum();
        return build_floorplan(&[DieFootprint::square(spec.name.clone(), total)], 0.0)
            .map_err(|e| e.in_stage("floorplan"));
    }
    assemble(spec, db, &pp).map(|(_, fp)| fp)
}

/// Split the designated logic chiplet into `n` equal parts chained by
/// connectivity; external links to the split chiplet reattach to the first
/// part. `n == 1` returns the system unchanged.
pub fn split_logic(spec: &SystemSpec, n: usize) -> Result<SystemSpec> {
    if n == 0 {
        return Err(Error::Validation(
            "cannot split a chiplet into zero parts".into(),
        ));
    }
    if n == 1 {
        return Ok(spec.clone());
    }
    let target = match &spec.logic_block {
        Some(name) => name.clone(),
        None => {
            let mut logic = spec
                .chiplets
                .iter()
                .filter(|c| c.design_type == DesignType::Logic);
            match (logic.next(), logic.next()) {
                (Some(only), None) => only.name.clone(),
                (None, _) => {
                    return Err(Error::Validation(format!(
                        "system \"{}\" has no logic chiplet to split",
                        spec.name
                    )));
                }
                (Some(_), Some(_)) => {
                    return Err(Error::Validation(format!(
                        "system \"{}\" has several logic chiplets; set logic_block to pick \
                         the split target",
                        spec.name
                    )));
                }
            }
        }
    };
    let idx = spec
        .chiplets
        .iter()
        .position(|c| c.name == target)
        .ok_or_else(|| Error::Validation(format!("logic_block \"{target}\" names no chiplet")))?;
    let base = &spec.chiplets[idx];
    let parts: Vec<Chiplet> = (1..=n)
        .map(|i| Chiplet {
            name: format!("{}_{i}", base.name),
            design_type: base.design_type,
            mtransistors: base.mtransistors / n as f64,
            node: base.node.clone(),
            extra_area_mm2: base.extra_area_mm2 / n as f64,
            width_mm: None,
            height_mm: None,
        })
        .collect();
    for part in &parts {
        if spec.chiplets.iter().any(|c| c.name == part.name) {
            return Err(Error::Validation(format!(
                "split part name \"{}\" collides with an existing chiplet",
                part.name
            )));
        }
    }

    let mut chiplets = Vec::with_capacity(spec.chiplets.len() + n - 1);
    chiplets.extend_from_slice(&spec.chiplets[..idx]);
    chiplets.extend(parts.iter().cloned());
    chiplets.extend_from_slice(&spec.chiplets[idx + 1..]);

    let first = parts[0].name.clone();
    let mut connectivity: Vec<(String, String)> = spec
        .connectivity
        .iter()
        .map(|(a, b)| {
            let remap = |s: &String| if *s == target { first.clone() } else { s.clone() };
            (remap(a), remap(b))
        })
        .collect();
    for i in 1..n {
        connectivity.push((format!("{target}_{i}"), format!("{target}_{}", i + 1)));
    }

    Ok(SystemSpec {
        name: spec.name.clone(),
        chiplets,
        connectivity,
        logic_block: None,
        package: spec.package.clone(),
        design: spec.design.clone(),
    })
}

/// What a sweep explores: node choices per design type, split-count
/// values, and packaging architectures. Empty lists fall back to "as
/// configured".
#[derive(Debug, Clone, Default)]
pub struct SweepSpec {
    pub node_choices: BTreeMap<DesignType, Vec<String>>,
    pub nc_values: Vec<usize>,
    pub architectures: Vec<Architecture>,
}

/// One evaluated (or failed) sweep configuration.
#[derive(Debug)]
pub struct SweepEntry {
    /// Human-readable configuration label, e.g. `"(7,14,10) nc=4"`.
    pub label: String,
    pub architecture: Architecture,
    pub nc: usize,
    pub result: Result<CarbonReport>,
}

fn strip_nm(node: &str) -> &str {
    node.strip_suffix("nm").unwrap_or(node)
}

/// Label parts follow (logic, analog, memory) order; a design type the
/// system does not contain shows as "-".
fn config_label(spec: &SystemSpec, assignment: &BTreeMap<DesignType, &str>, nc: usize) -> String {
    let part = |ty: DesignType| -> String {
        if !spec.chiplets.iter().any(|c| c.design_type == ty) {
            return "-".into();
        }
        if let Some(node) = assignment.get(&ty) {
            return strip_nm(node).to_string();
        }
        let nodes: BTreeSet<&str> = spec
            .chiplets
            .iter()
            .filter(|c| c.design_type == ty)
            .map(|c| c.node.as_str())
            .collect();
        if nodes.len() == 1 {
            strip_nm(nodes.iter().next().unwrap()).to_string()
        } else {
            "*".into()
        }
    };
    let core = format!(
        "({},{},{})",
        part(DesignType::Logic),
        part(DesignType::Analog),
        part(DesignType::Memory)
    );
    if nc > 1 {
        format!("{core} nc={nc}")
    } else {
        core
    }
}

/// Evaluate the full cross product of a sweep. Entries come back in
/// logic-node x analog-node x memory-node x split-count x architecture
/// order; per-configuration failures are recorded in the entry instead of
/// aborting the sweep.
pub fn sweep(
    spec: &SystemSpec,
    sw: &SweepSpec,
    db: &TechDatabase,
    base: &Overrides,
) -> Vec<SweepEntry> {
    let options = |ty: DesignType| -> Vec<Option<&str>> {
        let present = spec.chiplets.iter().any(|c| c.design_type == ty);
        match sw.node_choices.get(&ty) {
            Some(choices) if present && !choices.is_empty() => {
                choices.iter().map(|s| Some(s.as_str())).collect()
            }
            _ => vec![None],
        }
    };
    let logic_opts = options(DesignType::Logic);
    let analog_opts = options(DesignType::Analog);
    let memory_opts = options(DesignType::Memory);
    let nc_values = if sw.nc_values.is_empty() {
        vec![1]
    } else {
        sw.nc_values.clone()
    };
    let architectures = if sw.architectures.is_empty() {
        let from_spec = spec
            .package
            .as_ref()
            .and_then(|o| o.architecture)
            .unwrap_or(db.packaging.architecture);
        vec![base.architecture.unwrap_or(from_spec)]
    } else {
        sw.architectures.clone()
    };

    let mut entries = Vec::new();
    for logic in &logic_opts {
        for analog in &analog_opts {
            for memory in &memory_opts {
                let mut assignment: BTreeMap<DesignType, &str> = BTreeMap::new();
                for (ty, choice) in [
                    (DesignType::Logic, logic),
                    (DesignType::Analog, analog),
                    (DesignType::Memory, memory),
                ] {
                    if let Some(node) = choice {
                        assignment.insert(ty, node);
                    }
                }
                let mut assigned = spec.clone();
                for c in &mut assigned.chiplets {
                    if let Some(node) = assignment.get(&c.design_type) {
                        c.node = node.to_string();
                    }
                }
                for &nc in &nc_values {
                    for &arch in &architectures {
                        let label = config_label(spec, &assignment, nc);
                        let ov = Overrides {
                            architecture: Some(arch),
                            n_parts: base.n_parts,
                            n_des: base.n_des,
                            reuse: base.reuse.clone(),
                            allow_out_of_range: base.allow_out_of_range,
                        };
                        let result = split_logic(&assigned, nc)
                            .and_then(|split| evaluate_with(&split, db, &ov));
                        entries.push(SweepEntry {
                            label,
                            architecture: arch,
                            nc,
                            result,
                        });
                    }
                }
            }
        }
    }
    entries
}
