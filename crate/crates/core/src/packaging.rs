//! Package-level carbon: the cost of integrating multiple dies into one
//! package, plus the die-to-die communication hardware it requires.
//!
//! Five architectures are modeled:
//!
//! * `rdl_fanout` — redistribution layers spanning the whole package area.
//! * `silicon_bridge` — small silicon bridges embedded under each pair of
//!   abutting dies (EMIB-style).
//! * `passive_interposer` — metal-only silicon carrier under all dies;
//!   routers must live on the chiplets themselves.
//! * `active_interposer` — silicon carrier with transistors; routers live
//!   on the interposer.
//! * `monolithic` — single-die baseline with a fixed packaging constant.
//!
//! Communication hardware enters the model two ways: as extra die area
//! manufactured on the chiplets (routers for passive interposers, PHY
//! lanes for RDL/bridge packages), and as carbon booked directly against
//! the package (`c_comm`, routers manufactured on an active interposer).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::floorplan::{Adjacency, FloorplanResult};
use crate::manufacturing::{cfpa_with_source, die_yield, Chiplet};
use crate::techdb::TechDatabase;
use crate::{Error, Result};

/// Packaging architecture. Short CLI aliases: `rdl`, `emib` (or `bridge`),
/// `passive`, `active`, `mono`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Architecture {
    #[serde(alias = "rdl")]
    RdlFanout,
    #[serde(alias = "emib", alias = "bridge")]
    SiliconBridge,
    #[serde(alias = "passive")]
    PassiveInterposer,
    #[serde(alias = "active")]
    ActiveInterposer,
    #[serde(alias = "mono")]
    Monolithic,
}

impl Architecture {
    /// All five architectures, in canonical order.
    pub const ALL: [Architecture; 5] = [
        Architecture::RdlFanout,
        Architecture::SiliconBridge,
        Architecture::PassiveInterposer,
        Architecture::ActiveInterposer,
        Architecture::Monolithic,
    ];

    /// Canonical configuration name.
    pub fn name(&self) -> &'static str {
        match self {
            Architecture::RdlFanout => "rdl_fanout",
            Architecture::SiliconBridge => "silicon_bridge",
            Architecture::PassiveInterposer => "passive_interposer",
            Architecture::ActiveInterposer => "active_interposer",
            Architecture::Monolithic => "monolithic",
        }
    }
}

impl fmt::Display for Architecture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Architecture {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rdl" | "rdl_fanout" => Ok(Architecture::RdlFanout),
            "emib" | "bridge" | "silicon_bridge" => Ok(Architecture::SiliconBridge),
            "passive" | "passive_interposer" => Ok(Architecture::PassiveInterposer),
            "active" | "active_interposer" => Ok(Architecture::ActiveInterposer),
            "mono" | "monolithic" => Ok(Architecture::Monolithic),
            other => Err(Error::Validation(format!(
                "unknown packaging architecture \"{other}\" \
                 (expected rdl, emib, passive, active, or mono)"
            ))),
        }
    }
}

/// Package construction parameters. Field names match the configuration
/// schema; see `data/techdb.schema.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PackagingParams {
    /// Architecture evaluated by default; CLI/system files may override.
    pub architecture: Architecture,
    /// Technology node of the package interconnect (RDL layers, bridges,
    /// interposers). Mature nodes are typical.
    pub node: String,
    /// RDL metal layer count.
    pub l_rdl: f64,
    /// Energy per layer per area for RDL-class metal, kWh/cm².
    pub epla_rdl: f64,
    /// Bridge metal layer count.
    pub l_bridge: f64,
    /// Energy per layer per area for bridge silicon, kWh/cm².
    pub epla_bridge: f64,
    /// Interface length served by one bridge, mm.
    pub bridge_range_mm: f64,
    /// Silicon area of one bridge, mm².
    pub bridge_area_mm2: f64,
    /// Interposer metal layer count (passive interposer).
    pub l_int: f64,
    /// Fraction of wafer energy attributed to transistor layers when an
    /// interposer is active; the rest is metal-only and applies to the
    /// whole interposer. In [0, 1].
    pub f_feol: f64,
    /// Ports per on-package router.
    pub noc_ports: f64,
    /// Router link width, bits.
    pub noc_flit_width: f64,
    /// Router size model: transistors per port-bit.
    pub k_router: f64,
    /// PHY area per chiplet as a fraction of its core (transistor-derived)
    /// area, for RDL and bridge packages.
    pub phy_area_frac: f64,
    /// Fixed packaging carbon of the single-die baseline, g CO₂e.
    pub c_pkg_fixed: f64,
    /// Clearance between placed dies, mm. Zero or within [0.1, 1.0].
    pub chiplet_spacing_mm: f64,
}

impl Default for PackagingParams {
    fn default() -> Self {
        PackagingParams {
            architecture: Architecture::RdlFanout,
            node: "65nm".to_string(),
            l_rdl: 3.0,
            epla_rdl: 0.05,
            l_bridge: 4.0,
            epla_bridge: 0.35,
            bridge_range_mm: 2.0,
            bridge_area_mm2: 4.0,
            l_int: 6.0,
            f_feol: 0.5,
            noc_ports: 5.0,
            noc_flit_width: 512.0,
            k_router: 40.0,
            phy_area_frac: 0.01,
            c_pkg_fixed: 150.0,
            chiplet_spacing_mm: 0.5,
        }
    }
}

impl PackagingParams {
    /// Validate numeric ranges and structural constraints.
    pub fn validate(&self) -> Result<()> {
        let ranged = [
            ("packaging.l_rdl", self.l_rdl, 3.0, 4.0),
            ("packaging.epla_rdl", self.epla_rdl, 0.05, 0.2),
            ("packaging.l_bridge", self.l_bridge, 3.0, 4.0),
            ("packaging.epla_bridge", self.epla_bridge, 0.1, 0.35),
        ];
        for (field, value, min, max) in ranged {
            if !value.is_finite() || value < min || value > max {
                return Err(Error::OutOfRange {
                    field: field.to_string(),
                    value,
                    min,
                    max,
                });
            }
        }
        if self.chiplet_spacing_mm != 0.0
            && !(0.1..=1.0).contains(&self.chiplet_spacing_mm)
        {
            return Err(Error::OutOfRange {
                field: "packaging.chiplet_spacing_mm".to_string(),
                value: self.chiplet_spacing_mm,
                min: 0.1,
                max: 1.0,
            });
        }
        if !(self.bridge_range_mm > 0.0) || !(self.bridge_area_mm2 > 0.0) {
            return Err(Error::Validation(
                "packaging bridge_range_mm and bridge_area_mm2 must be positive".into(),
            ));
        }
        if self.l_int < 1.0 {
            return Err(Error::Validation(
                "packaging l_int must be at least 1".into(),
            ));
        }
        if !(0.0..=1.0).contains(&self.f_feol) {
            return Err(Error::Validation(format!(
                "packaging f_feol must lie in [0, 1], got {}",
                self.f_feol
            )));
        }
        if self.noc_ports < 1.0 || self.noc_flit_width < 0.0 || !(self.k_router > 0.0) {
            return Err(Error::Validation(
                "packaging router model requires noc_ports >= 1, noc_flit_width >= 0, \
                 k_router > 0"
                    .into(),
            ));
        }
        if !(0.0..=1.0).contains(&self.phy_area_frac) {
            return Err(Error::Validation(format!(
                "packaging phy_area_frac must lie in [0, 1], got {}",
                self.phy_area_frac
            )));
        }
        if self.c_pkg_fixed < 0.0 {
            return Err(Error::Validation(
                "packaging c_pkg_fixed must be non-negative".into(),
            ));
        }
        Ok(())
    }
}

/// Package-level carbon breakdown for one configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PackageResult {
    /// Carbon of the package structures themselves, g CO₂e.
    pub c_package: f64,
    /// Carbon of communication silicon booked against the package
    /// (active-interposer routers), g CO₂e.
    pub c_comm: f64,
    /// Extra die area each chiplet must carry for communication, mm².
    pub chiplet_area_deltas: BTreeMap<String, f64>,
    /// Package bounding-box area, mm².
    pub package_area_mm2: f64,
    /// Number of bridges (silicon-bridge architecture only).
    pub bridge_count: Option<u64>,
}

/// Carbon of a redistribution-layer fan-out package covering
/// `package_area_mm2`, g CO₂e: layers × energy per layer-area × energy
/// carbon intensity × area, divided by the package-silicon yield.
pub fn rdl_cfp(package_area_mm2: f64, pp: &PackagingParams, db: &TechDatabase) -> Result<f64> {
    let params = db.lookup(&pp.node)?;
    let y = die_yield(package_area_mm2, params);
    Ok(pp.l_rdl * pp.epla_rdl * db.fab.c_pkg_src * (package_area_mm2 / 100.0) / y)
}

/// Bridges needed for one interface of `overlap_mm`: one bridge serves up
/// to `range_mm` of edge; longer interfaces take proportionally more.
fn bridges_for_overlap(overlap_mm: f64, range_mm: f64) -> u64 {
    ((overlap_mm / range_mm).ceil() as u64).max(1)
}

/// Total bridges needed so that every `connectivity` pair gets a direct
/// bridged link: per pair, `ceil(overlap / range)` with a minimum of one.
///
/// Errors with an infeasibility if a required pair shares no interface.
/// (System-level evaluation instead provisions bridges on every package
/// interface and lets required links ride multi-hop routes; this operation
/// is the strict direct-link form.)
pub fn bridge_count(
    adjacencies: &[Adjacency],
    connectivity: &[(String, String)],
    range_mm: f64,
) -> Result<u64> {
    let mut pairs: BTreeSet<(&str, &str)> = BTreeSet::new();
    for (a, b) in connectivity {
        let (a, b) = (a.as_str(), b.as_str());
        pairs.insert(if a <= b { (a, b) } else { (b, a) });
    }
    let mut total = 0u64;
    for (a, b) in pairs {
        let adj = adjacencies
            .iter()
            .find(|adj| {
                (adj.a == a && adj.b == b) || (adj.a == b && adj.b == a)
            })
            .ok_or_else(|| {
                Error::Infeasible(format!(
                    "chiplets \"{a}\" and \"{b}\" require a link but share no \
                     package interface"
                ))
            })?;
        total += bridges_for_overlap(adj.overlap_mm, range_mm);
    }
    Ok(total)
}

/// Carbon of `n_bridges` silicon bridges, g CO₂e. Linear in the count;
/// each bridge is yielded at its own small area.
pub fn bridge_cfp(n_bridges: u64, pp: &PackagingParams, db: &TechDatabase) -> Result<f64> {
    let params = db.lookup(&pp.node)?;
    let y = die_yield(pp.bridge_area_mm2, params);
    Ok(n_bridges as f64
        * pp.l_bridge
        * pp.epla_bridge
        * db.fab.c_pkg_src
        * (pp.bridge_area_mm2 / 100.0)
        / y)
}

/// Silicon area of one router instantiated at `node`, mm²:
/// `ports × flit width × transistors-per-port-bit / logic density`.
pub fn router_area_mm2(pp: &PackagingParams, node: &str, db: &TechDatabase) -> Result<f64> {
    let params = db.lookup(node)?;
    Ok(pp.noc_ports * pp.noc_flit_width * pp.k_router / (params.dt.logic * 1e6))
}

/// Communication overhead of an architecture: directly booked carbon plus
/// per-chiplet area deltas to be manufactured on the dies.
///
/// * passive interposer — each chiplet carries one router at its own node
///   (area delta; the carbon then flows through manufacturing);
/// * active interposer — one router per chiplet on the interposer, at the
///   interposer's node, costed per area at that node's footprint intensity;
/// * RDL / bridge — each chiplet carries PHY lanes sized as a fraction of
///   its core area;
/// * monolithic — nothing.
pub fn comm_cfp(
    architecture: Architecture,
    chiplets: &[Chiplet],
    pp: &PackagingParams,
    db: &TechDatabase,
) -> Result<(f64, BTreeMap<String, f64>)> {
    let mut deltas = BTreeMap::new();
    match architecture {
        Architecture::Monolithic => Ok((0.0, deltas)),
        Architecture::PassiveInterposer => {
            for c in chiplets {
                deltas.insert(c.name.clone(), router_area_mm2(pp, &c.node, db)?);
            }
            Ok((0.0, deltas))
        }
        Architecture::ActiveInterposer => {
            let area = router_area_mm2(pp, &pp.node, db)?;
            let params = db.lookup(&pp.node)?;
            let y = die_yield(area, params);
            let per_router = cfpa_with_source(y, params, db.fab.c_pkg_src) * area / 100.0;
            Ok((chiplets.len() as f64 * per_router, deltas))
        }
        Architecture::RdlFanout | Architecture::SiliconBridge => {
            for c in chiplets {
                let params = db.lookup(&c.node)?;
                let core = c.mtransistors / params.dt.get(c.design_type);
                deltas.insert(c.name.clone(), pp.phy_area_frac * core);
            }
            Ok((0.0, deltas))
        }
    }
}

/// Every required pair must be reachable through the package's interface
/// graph (directly bridged neighbors, chained as needed).
fn connectivity_feasible(
    adjacencies: &[Adjacency],
    connectivity: &[(String, String)],
) -> Result<()> {
    let mut graph: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for adj in adjacencies {
        graph.entry(&adj.a).or_default().push(&adj.b);
        graph.entry(&adj.b).or_default().push(&adj.a);
    }
    for (a, b) in connectivity {
        let mut frontier = vec![a.as_str()];
        let mut seen: BTreeSet<&str> = frontier.iter().copied().collect();
        let mut reachable = a == b;
        while let Some(cur) = frontier.pop() {
            if cur == b {
                reachable = true;
                break;
            }
            for &next in graph.get(cur).into_iter().flatten() {
                if seen.insert(next) {
                    frontier.push(next);
                }
            }
        }
        if !reachable {
            return Err(Error::Infeasible(format!(
                "required link between \"{a}\" and \"{b}\" cannot be routed \
                 through any chain of package interfaces"
            )));
        }
    }
    Ok(())
}

/// Full package carbon for one architecture over a placed floorplan.
///
/// The floorplan must already include each chiplet's communication area
/// delta (pipeline order: deltas, then areas, then floorplan, then this).
/// For the silicon-bridge architecture, bridges are provisioned on every
/// package interface the floorplan exposes, and the explicit `connectivity`
/// requirements are checked for reachability across those interfaces.
pub fn package_cfp(
    chiplets: &[Chiplet],
    floorplan: &FloorplanResult,
    connectivity: &[(String, String)],
    pp: &PackagingParams,
    db: &TechDatabase,
) -> Result<PackageResult> {
    let arch = pp.architecture;
    let (c_comm, deltas) = comm_cfp(arch, chiplets, pp, db)?;
    let area = floorplan.package_area_mm2;
    let (c_package, bridge_count) = match arch {
        Architecture::RdlFanout => (rdl_cfp(area, pp, db)?, None),
        Architecture::SiliconBridge => {
            connectivity_feasible(&floorplan.adjacencies, connectivity)?;
            let count: u64 = floorplan
                .adjacencies
                .iter()
                .map(|adj| bridges_for_overlap(adj.overlap_mm, pp.bridge_range_mm))
                .sum();
            (bridge_cfp(count, pp, db)?, Some(count))
        }
        Architecture::PassiveInterposer => {
            let params = db.lookup(&pp.node)?;
            let y = die_yield(area, params);
            let c = pp.l_int * pp.epla_rdl * db.fab.c_pkg_src * (area / 100.0) / y;
            (c, None)
        }
        Architecture::ActiveInterposer => {
            let params = db.lookup(&pp.node)?;
            let y = die_yield(area, params);
            let a_int_cm2 = area / 100.0;
            let a_active_cm2 =
                chiplets.len() as f64 * router_area_mm2(pp, &pp.node, db)? / 100.0;
            let energy = params.eta_eq
                * db.fab.c_pkg_src
                * params.epa
                * ((1.0 - pp.f_feol) * a_int_cm2 + pp.f_feol * a_active_cm2);
            let c = (energy + (params.c_gas + params.c_material) * a_int_cm2) / y;
            (c, None)
        }
        Architecture::Monolithic => (pp.c_pkg_fixed, None),
    };
    Ok(PackageResult {
        c_package,
        c_comm,
        chiplet_area_deltas: deltas,
        package_area_mm2: area,
        bridge_count,
    })
}
