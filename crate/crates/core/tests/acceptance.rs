//! Acceptance suite: nine end-to-end checks covering closed-form behavior,
//! calibrated reference systems, split/packaging trends, floorplan
//! optimality bounds, and the design-space sweep. Each check prints one
//! verdict line (run with `--nocapture` to see them).

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use hicarbon::design::{
    design_carbon_for_time, design_time_for_gates, system_design_cfp, DesignParams,
};
use hicarbon::floorplan::build_floorplan;
use hicarbon::manufacturing::{
    cfpa_with_source, chiplet_mfg_cfp, die_area, die_yield, Chiplet,
};
use hicarbon::packaging::{
    bridge_cfp, rdl_cfp, router_area_mm2, Architecture, PackagingParams,
};
use hicarbon::system::{
    evaluate_monolithic, evaluate_with, load_system, split_logic, sweep, Overrides, SweepSpec,
    SystemSpec,
};
use hicarbon::techdb::{
    Densities, DesignType, FabProfile, NodeRecord, ProcessParams, TechDatabase,
};

fn default_db() -> TechDatabase {
    TechDatabase::from_json(
        include_str!("../data/default_db.json"),
        "default_db.json",
        false,
    )
    .unwrap()
}

fn system(name: &str) -> SystemSpec {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("data/systems")
        .join(format!("{name}.json"));
    load_system(&path).unwrap()
}

fn rel_err(actual: f64, expected: f64) -> f64 {
    (actual - expected).abs() / expected.abs().max(1e-300)
}

fn arch_overrides(arch: Architecture) -> Overrides {
    Overrides {
        architecture: Some(arch),
        ..Default::default()
    }
}

/// Total carbon of the package-level structures plus package-booked
/// communication silicon.
fn c_hi(report: &hicarbon::system::CarbonReport) -> f64 {
    report.c_package + report.c_comm
}

fn mfg_total(report: &hicarbon::system::CarbonReport) -> f64 {
    report.per_chiplet_mfg.values().sum()
}

// ---------------------------------------------------------------------
// 1. Per-operation closed forms over randomized in-range parameters.
// ---------------------------------------------------------------------

#[test]
fn criterion_1_closed_form_oracles() {
    let started = Instant::now();
    let mut rng = StdRng::seed_from_u64(0xACCE01);
    let draws = 1_000;
    let mut worst: f64 = 0.0;

    for i in 0..draws {
        let d0 = rng.gen_range(0.07..=0.3);
        let alpha = rng.gen_range(1.0..=10.0);
        let dt_logic = rng.gen_range(5.0..=150.0);
        let dt_memory = rng.gen_range(5.0..=150.0);
        let dt_analog = rng.gen_range(5.0..=150.0);
        let eta_eq = rng.gen_range(0.05..=1.0);
        let epa = rng.gen_range(0.8..=3.5);
        let c_gas = rng.gen_range(100.0..=500.0);
        let c_material = rng.gen_range(100.0..=500.0);
        let eta_eda = rng.gen_range(0.05..=1.0);
        let intensity = rng.gen_range(30.0..=700.0);

        let params = ProcessParams {
            d0,
            alpha,
            dt: Densities {
                logic: dt_logic,
                memory: dt_memory,
                analog: dt_analog,
            },
            eta_eq,
            epa,
            c_gas,
            c_material,
            eta_eda,
        };

        let design_type = match i % 3 {
            0 => DesignType::Logic,
            1 => DesignType::Memory,
            _ => DesignType::Analog,
        };
        let chiplet = Chiplet {
            name: "die".into(),
            design_type,
            mtransistors: rng.gen_range(1.0..=100_000.0),
            node: "n".into(),
            extra_area_mm2: rng.gen_range(0.0..=50.0),
            width_mm: None,
            height_mm: None,
        };

        // Area, yield, per-area intensity, and die carbon.
        let dt = match design_type {
            DesignType::Logic => dt_logic,
            DesignType::Memory => dt_memory,
            DesignType::Analog => dt_analog,
        };
        let area = die_area(&chiplet, &params);
        let expat = chiplet.mtransistors / dt + chiplet.extra_area_mm2;
        worst = worst.max(rel_err(area, expat));

        let y = die_yield(area, &params);
        let expy = (1.0 + (area / 100.0) * d0 / alpha).powf(-alpha);
        worst = worst.max(rel_err(y, expy));

        let intensity_per_cm2 = cfpa_with_source(y, &params, intensity);
        let expc = (eta_eq * intensity * epa + c_gas + c_material) / expy;
        worst = worst.max(rel_err(intensity_per_cm2, expc));

        let mut nodes = BTreeMap::new();
        nodes.insert(
            "n".to_string(),
            NodeRecord {
                feature_index: 0,
                params: params.clone(),
            },
        );
        let db = TechDatabase {
            nodes,
            fab: FabProfile {
                c_mfg_src: intensity,
                c_pkg_src: intensity,
                c_des_src: intensity,
            },
            packaging: PackagingParams {
                node: "n".into(),
                ..Default::default()
            },
            design: DesignParams::default(),
        };
        let mfg = chiplet_mfg_cfp(&chiplet, &db).unwrap();
        worst = worst.max(rel_err(mfg.carbon, expc * expat / 100.0));

        // Design time, both verification models.
        let gates = rng.gen_range(1e5..=1e10);
        let t_spr_ref = rng.gen_range(1.0..=100.0);
        let ref_gates = rng.gen_range(1e5..=1e7);
        let t_analyze_frac = rng.gen_range(0.0..=1.0);
        let n_des = rng.gen_range(1.0_f64..=500.0).round();
        let t_spr = t_spr_ref * gates / ref_gates;
        let iterated = (t_spr + t_analyze_frac * t_spr) * n_des;
        if i % 2 == 0 {
            let share = rng.gen_range(0.0..=0.95);
            let dp = DesignParams {
                t_spr_ref,
                ref_gates,
                t_analyze_frac,
                t_verif: None,
                verif_share: Some(share),
                n_des,
                ..Default::default()
            };
            let t = design_time_for_gates(gates, &dp, &params);
            let expected = (share / (1.0 - share) * iterated + iterated) / eta_eda;
            worst = worst.max(rel_err(t, expected));
        } else {
            let t_verif = rng.gen_range(0.0..=1e6);
            let dp = DesignParams {
                t_spr_ref,
                ref_gates,
                t_analyze_frac,
                t_verif: Some(t_verif),
                verif_share: None,
                n_des,
                ..Default::default()
            };
            let t = design_time_for_gates(gates, &dp, &params);
            let expected = (t_verif + iterated) / eta_eda;
            worst = worst.max(rel_err(t, expected));
        }

        // Package-level structures at the package node.
        let pp = PackagingParams {
            node: "n".into(),
            l_rdl: rng.gen_range(3.0..=4.0),
            epla_rdl: rng.gen_range(0.05..=0.2),
            l_bridge: rng.gen_range(3.0..=4.0),
            epla_bridge: rng.gen_range(0.1..=0.35),
            bridge_area_mm2: rng.gen_range(1.0..=10.0),
            ..Default::default()
        };
        let pkg_area = rng.gen_range(50.0..=2_000.0);
        let rdl = rdl_cfp(pkg_area, &pp, &db).unwrap();
        let y_pkg = (1.0 + (pkg_area / 100.0) * d0 / alpha).powf(-alpha);
        let exp_rdl = pp.l_rdl * pp.epla_rdl * intensity * (pkg_area / 100.0) / y_pkg;
        worst = worst.max(rel_err(rdl, exp_rdl));

        let n_bridges = rng.gen_range(1..=40u64);
        let bridge = bridge_cfp(n_bridges, &pp, &db).unwrap();
        let y_bridge = (1.0 + (pp.bridge_area_mm2 / 100.0) * d0 / alpha).powf(-alpha);
        let exp_bridge = n_bridges as f64
            * pp.l_bridge
            * pp.epla_bridge
            * intensity
            * (pp.bridge_area_mm2 / 100.0)
            / y_bridge;
        worst = worst.max(rel_err(bridge, exp_bridge));

        let router = router_area_mm2(&pp, "n", &db).unwrap();
        let exp_router = pp.noc_ports * pp.noc_flit_width * pp.k_router / (dt_logic * 1e6);
        worst = worst.max(rel_err(router, exp_router));
    }

    let elapsed = started.elapsed();
    assert!(
        worst <= 1e-10,
        "worst relative error {worst:e} exceeds 1e-10"
    );
    assert!(
        elapsed.as_secs_f64() < 1.0,
        "oracle suite took {elapsed:?}, expected < 1s"
    );
    println!(
        "ACCEPTANCE 1: PASS — {draws} randomized draws, worst relative error {worst:.2e}, \
         {:.0} ms",
        elapsed.as_secs_f64() * 1e3
    );
}

// ---------------------------------------------------------------------
// 2. Design-compute carbon anchor.
// ---------------------------------------------------------------------

#[test]
fn criterion_2_design_energy_anchor() {
    let dp = DesignParams {
        p_des: 10.0,
        ..Default::default()
    };
    let fab = FabProfile {
        c_mfg_src: 700.0,
        c_pkg_src: 700.0,
        c_des_src: 700.0,
    };
    let carbon = design_carbon_for_time(1.2e6, &dp, &fab);
    let err = rel_err(carbon, 8.4e6);
    assert!(
        err <= 1e-4,
        "1.2e6 CPU-hours at 10 W on 700 g/kWh gave {carbon}, expected 8.4e6 (err {err:e})"
    );
    println!(
        "ACCEPTANCE 2: PASS — 1.2e6 h x 10 W x 700 g/kWh = {carbon} g (relative error {err:.1e})"
    );
}

// ---------------------------------------------------------------------
// 3. Volume amortization anchor.
// ---------------------------------------------------------------------

#[test]
fn criterion_3_amortization_anchor() {
    // One reference-sized implementation plus a dominating verification
    // budget makes the one-time total exactly 4e8 CPU-hours, i.e. 2.4e9 g
    // at 10 W on a 600 g/kWh grid.
    let mut nodes = BTreeMap::new();
    nodes.insert(
        "n".to_string(),
        NodeRecord {
            feature_index: 0,
            params: ProcessParams {
                d0: 0.1,
                alpha: 3.0,
                dt: Densities {
                    logic: 50.0,
                    memory: 60.0,
                    analog: 6.0,
                },
                eta_eq: 0.9,
                epa: 2.0,
                c_gas: 300.0,
                c_material: 500.0,
                eta_eda: 1.0,
            },
        },
    );
    let db = TechDatabase {
        nodes,
        fab: FabProfile {
            c_mfg_src: 600.0,
            c_pkg_src: 600.0,
            c_des_src: 600.0,
        },
        packaging: PackagingParams {
            node: "n".into(),
            ..Default::default()
        },
        design: DesignParams::default(),
    };
    let dp = DesignParams {
        t_verif: Some(399_997_000.0),
        verif_share: None,
        n_parts: 200_000.0,
        ..Default::default()
    };
    let chiplets = vec![Chiplet {
        name: "a".into(),
        design_type: DesignType::Logic,
        mtransistors: 2.8,
        node: "n".into(),
        extra_area_mm2: 0.0,
        width_mm: None,
        height_mm: None,
    }];
    let pp = PackagingParams {
        node: "n".into(),
        ..Default::default()
    };
    let result = system_design_cfp(&chiplets, &pp, &dp, &db).unwrap();
    assert!(rel_err(result.total_unamortized, 2.4e9) <= 1e-4);
    let err = rel_err(result.amortized_per_part, 12_000.0);
    assert!(
        err <= 1e-4,
        "2.4e9 g over 2e5 parts gave {} per part (err {err:e})",
        result.amortized_per_part
    );
    println!(
        "ACCEPTANCE 3: PASS — 2.4e9 g over 200k parts = {} g per part (relative error {err:.1e})",
        result.amortized_per_part
    );
}

// ---------------------------------------------------------------------
// 4. Monolithic carbon grows superlinearly and convexly in die area.
// ---------------------------------------------------------------------

#[test]
fn criterion_4_superlinear_monolithic_scaling() {
    let db = default_db();
    let params = db.lookup("7nm").unwrap().clone();
    let density = params.dt.get(DesignType::Logic);
    let carbon_at = |area_mm2: f64| -> f64 {
        let chiplet = Chiplet {
            name: "die".into(),
            design_type: DesignType::Logic,
            mtransistors: density * area_mm2,
            node: "7nm".into(),
            extra_area_mm2: 0.0,
            width_mm: None,
            height_mm: None,
        };
        chiplet_mfg_cfp(&chiplet, &db).unwrap().carbon
    };

    let step = 50.0;
    let areas: Vec<f64> = (0..=14).map(|i| 100.0 + step * i as f64).collect();
    let carbons: Vec<f64> = areas.iter().map(|&a| carbon_at(a)).collect();
    assert!((areas[0], *areas.last().unwrap()) == (100.0, 800.0));

    let mut worst_ratio = f64::INFINITY;
    for &a in &areas {
        if 2.0 * a <= 800.0 {
            let ratio = carbon_at(2.0 * a) / carbon_at(a);
            worst_ratio = worst_ratio.min(ratio);
            assert!(
                ratio > 2.0,
                "doubling {a} mm² scaled carbon only {ratio}x"
            );
        }
    }
    for w in carbons.windows(3) {
        let second_diff = w[2] - 2.0 * w[1] + w[0];
        assert!(
            second_diff > 0.0,
            "carbon is not convex in area: second difference {second_diff}"
        );
    }
    println!(
        "ACCEPTANCE 4: PASS — doubling area from 100-400 mm² scales carbon by at least \
         {worst_ratio:.3}x and the curve is convex over 100-800 mm²"
    );
}

// ---------------------------------------------------------------------
// 5. Calibrated reference systems: GPU-class chiplet/mono ratio and
//    server-class split reductions.
// ---------------------------------------------------------------------

#[test]
fn criterion_5_reference_system_calibration() {
    // The calibration must hold while every parameter stays inside its
    // documented range: strict validation of the committed database file.
    let committed = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/default_db.json");
    let db = TechDatabase::load(&committed, false).unwrap();
    assert!(db.consistency_warnings().is_empty());

    let four_way = split_logic(&system("ga102"), 2).unwrap();
    let chiplet_total = evaluate_with(&four_way, &db, &arch_overrides(Architecture::SiliconBridge))
        .unwrap()
        .c_total;
    let mono_total = evaluate_monolithic(&system("ga102_mono"), &db)
        .unwrap()
        .c_total;
    let ratio = chiplet_total / mono_total;
    let ratio_err = (ratio / 0.51 - 1.0).abs();
    assert!(
        ratio_err <= 0.30,
        "4-chiplet/mono ratio {ratio:.4} deviates {ratio_err:.2} from 0.51"
    );

    let emr = system("emr");
    let emr_mono = evaluate_monolithic(&emr, &db).unwrap().c_total;
    let mut reductions = Vec::new();
    for (nc, target_pct) in [(2usize, 55.0), (4, 70.0)] {
        let split = split_logic(&emr, nc).unwrap();
        let total = evaluate_with(&split, &db, &Overrides::default()).unwrap().c_total;
        let reduction_pct = (1.0 - total / emr_mono) * 100.0;
        assert!(
            (reduction_pct - target_pct).abs() <= 10.0,
            "{nc}-way split reduces {reduction_pct:.2}%, expected {target_pct}% +/- 10pp"
        );
        reductions.push(reduction_pct);
    }
    println!(
        "ACCEPTANCE 5: PASS — chiplet/mono ratio {ratio:.4} (target 0.51 +/- 30%), \
         split reductions {:.1}% / {:.1}% (targets 55/70 +/- 10pp), database in range",
        reductions[0], reductions[1]
    );
}

// ---------------------------------------------------------------------
// 6. Splitting trades manufacturing carbon against package carbon.
// ---------------------------------------------------------------------

#[test]
fn criterion_6_split_tradeoff_is_monotone() {
    let db = default_db();
    let base = system("logic500");
    let architectures = [
        Architecture::RdlFanout,
        Architecture::SiliconBridge,
        Architecture::PassiveInterposer,
        Architecture::ActiveInterposer,
    ];
    for arch in architectures {
        let mut last_mfg = f64::INFINITY;
        let mut last_hi = 0.0;
        for nc in [2usize, 4, 6, 8] {
            let split = split_logic(&base, nc).unwrap();
            let report = evaluate_with(&split, &db, &arch_overrides(arch)).unwrap();
            let mfg = mfg_total(&report);
            let hi = c_hi(&report);
            assert!(
                mfg < last_mfg,
                "{arch:?}: manufacturing carbon should fall with nc, got {mfg} at nc={nc}"
            );
            assert!(
                hi > last_hi,
                "{arch:?}: package carbon should rise with nc, got {hi} at nc={nc}"
            );
            last_mfg = mfg;
            last_hi = hi;
        }
    }
    println!(
        "ACCEPTANCE 6: PASS — across nc = 2,4,6,8 manufacturing carbon strictly falls and \
         package carbon strictly rises for all four architectures"
    );
}

// ---------------------------------------------------------------------
// 7. Architecture crossover with split count, and router-area scaling.
// ---------------------------------------------------------------------

#[test]
fn criterion_7_architecture_crossover() {
    let db = default_db();
    let base = system("logic500");
    let hi_for = |nc: usize, arch: Architecture| -> f64 {
        let split = split_logic(&base, nc).unwrap();
        c_hi(&evaluate_with(&split, &db, &arch_overrides(arch)).unwrap())
    };

    for nc in [2usize, 4] {
        let bridge = hi_for(nc, Architecture::SiliconBridge);
        let rdl = hi_for(nc, Architecture::RdlFanout);
        assert!(
            bridge < rdl,
            "at nc={nc} bridges ({bridge:.1}) should beat fan-out ({rdl:.1})"
        );
    }
    for nc in [6usize, 8] {
        let rdl = hi_for(nc, Architecture::RdlFanout);
        for other in [
            Architecture::SiliconBridge,
            Architecture::PassiveInterposer,
            Architecture::ActiveInterposer,
        ] {
            let hi = hi_for(nc, other);
            assert!(
                rdl < hi,
                "at nc={nc} fan-out ({rdl:.1}) should beat {other:?} ({hi:.1})"
            );
        }
    }

    // Router silicon scales with the inverse logic-density ratio between
    // nodes: the same router is that much bigger on the older node.
    let pp = db.packaging.clone();
    let on_chiplet_node = router_area_mm2(&pp, "7nm", &db).unwrap();
    let on_package_node = router_area_mm2(&pp, "65nm", &db).unwrap();
    let area_ratio = on_package_node / on_chiplet_node;
    let density_ratio = db.lookup("7nm").unwrap().dt.get(DesignType::Logic)
        / db.lookup("65nm").unwrap().dt.get(DesignType::Logic);
    assert!(
        rel_err(area_ratio, density_ratio) <= 1e-12,
        "router area ratio {area_ratio} vs density ratio {density_ratio}"
    );
    println!(
        "ACCEPTANCE 7: PASS — bridges beat fan-out at nc = 2,4; fan-out beats all silicon \
         architectures at nc = 6,8; router area tracks density exactly (ratio {area_ratio:.3})"
    );
}

// ---------------------------------------------------------------------
// 8. Floorplan optimality bounds against an exhaustive oracle.
// ---------------------------------------------------------------------

mod floorplan_oracle {
    /// Shape sets are (width, height) candidates; non-dominated only.
    pub fn prune(mut shapes: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
        shapes.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
        let mut kept: Vec<(f64, f64)> = Vec::new();
        for (w, h) in shapes {
            if kept.last().map_or(true, |&(_, lh)| h < lh - 1e-12) {
                kept.push((w, h));
            }
        }
        kept
    }

    pub fn combine(a: &[(f64, f64)], b: &[(f64, f64)], spacing: f64) -> Vec<(f64, f64)> {
        let mut out = Vec::new();
        for &(w1, h1) in a {
            for &(w2, h2) in b {
                out.push((w1 + spacing + w2, h1.max(h2)));
                out.push((w1.max(w2), h1 + spacing + h2));
            }
        }
        prune(out)
    }

    pub fn leaf(dims: (f64, f64)) -> Vec<(f64, f64)> {
        prune(vec![dims, (dims.1, dims.0)])
    }

    /// Minimal bounding-box area over every slicing arrangement of `dies`.
    pub fn global_optimum(dies: &[(f64, f64)], spacing: f64) -> f64 {
        let n = dies.len();
        let full: u32 = (1 << n) - 1;
        let mut shapes: Vec<Vec<(f64, f64)>> = vec![Vec::new(); 1 << n];
        for (i, &d) in dies.iter().enumerate() {
            shapes[1 << i] = leaf(d);
        }
        for mask in 1..=full {
            if mask.count_ones() < 2 {
                continue;
            }
            let low_bit = mask & mask.wrapping_neg();
            let mut acc: Vec<(f64, f64)> = Vec::new();
            // Every split where the lowest die stays on the left avoids
            // enumerating each unordered pair twice.
            let mut sub = (mask - 1) & mask;
            while sub > 0 {
                if sub & low_bit != 0 && sub != mask {
                    acc.extend(combine(&shapes[sub as usize], &shapes[(mask ^ sub) as usize], spacing));
                }
                sub = (sub - 1) & mask;
            }
            shapes[mask as usize] = prune(acc);
        }
        shapes[full as usize]
            .iter()
            .map(|&(w, h)| w * h)
            .fold(f64::INFINITY, f64::min)
    }

    /// Area-balancing bipartition: descending-area order (stable), each
    /// die to the lighter side, ties to the first side.
    pub fn balance_split(areas: &[f64], items: &[usize]) -> (Vec<usize>, Vec<usize>) {
        let mut order: Vec<usize> = items.to_vec();
        order.sort_by(|&a, &b| areas[b].total_cmp(&areas[a]));
        let (mut left, mut right) = (Vec::new(), Vec::new());
        let (mut wl, mut wr) = (0.0f64, 0.0f64);
        for idx in order {
            if wl <= wr {
                left.push(idx);
                wl += areas[idx];
            } else {
                right.push(idx);
                wr += areas[idx];
            }
        }
        (left, right)
    }

    /// Minimal bounding-box area over arrangements whose recursive
    /// partition is the balancing one.
    pub fn balanced_optimum(dies: &[(f64, f64)], spacing: f64) -> f64 {
        let areas: Vec<f64> = dies.iter().map(|&(w, h)| w * h).collect();
        let items: Vec<usize> = (0..dies.len()).collect();
        fn shapes(
            dies: &[(f64, f64)],
            areas: &[f64],
            items: &[usize],
            spacing: f64,
        ) -> Vec<(f64, f64)> {
            if items.len() == 1 {
                return leaf(dies[items[0]]);
            }
            let (left, right) = balance_split(areas, items);
            let a = shapes(dies, areas, &left, spacing);
            let b = shapes(dies, areas, &right, spacing);
            combine(&a, &b, spacing)
        }
        shapes(dies, &areas, &items, spacing)
            .iter()
            .map(|&(w, h)| w * h)
            .fold(f64::INFINITY, f64::min)
    }
}

#[test]
fn criterion_8_floorplan_bounds() {
    use hicarbon::floorplan::DieFootprint;

    let started = Instant::now();
    let mut rng = StdRng::seed_from_u64(0xACCE08);
    let draws = 100;
    for draw in 0..draws {
        let n = rng.gen_range(1..=4usize);
        let dies: Vec<(f64, f64)> = (0..n)
            .map(|_| (rng.gen_range(1.0..=20.0), rng.gen_range(1.0..=20.0)))
            .collect();
        let spacing = if draw % 2 == 0 {
            0.0
        } else {
            rng.gen_range(0.1..=1.0)
        };
        let footprints: Vec<DieFootprint> = dies
            .iter()
            .enumerate()
            .map(|(i, &(w, h))| DieFootprint {
                name: format!("d{i}"),
                width_mm: w,
                height_mm: h,
            })
            .collect();
        let result = build_floorplan(&footprints, spacing).unwrap();

        // Structural invariants: non-negative whitespace, dies inside the
        // bounding box, and pairwise disjoint placements.
        assert!(result.whitespace_mm2 >= 0.0);
        let placed = result.placed_dies();
        assert_eq!(placed.len(), n);
        for (_, r) in &placed {
            assert!(r.x >= -1e-9 && r.y >= -1e-9);
            assert!(r.x + r.width <= result.package_width_mm + 1e-9);
            assert!(r.y + r.height <= result.package_height_mm + 1e-9);
        }
        for i in 0..placed.len() {
            for j in i + 1..placed.len() {
                let (a, b) = (&placed[i].1, &placed[j].1);
                let overlap_w = (a.x + a.width).min(b.x + b.width) - a.x.max(b.x);
                let overlap_h = (a.y + a.height).min(b.y + b.height) - a.y.max(b.y);
                assert!(
                    !(overlap_w > 1e-9 && overlap_h > 1e-9),
                    "dies {i} and {j} overlap in draw {draw}"
                );
            }
        }

        // Optimality bounds: at least as good as the partition-constrained
        // optimum, never better than the global slicing optimum.
        let lower = floorplan_oracle::global_optimum(&dies, spacing);
        let upper = floorplan_oracle::balanced_optimum(&dies, spacing);
        let area = result.package_area_mm2;
        assert!(
            area + 1e-9 >= lower,
            "draw {draw}: area {area} beats the global optimum {lower}"
        );
        assert!(
            area <= upper + 1e-9,
            "draw {draw}: area {area} misses the partition-constrained optimum {upper}"
        );
    }
    let elapsed = started.elapsed();
    assert!(
        elapsed.as_secs_f64() < 10.0,
        "floorplan oracle took {elapsed:?}, expected < 10s"
    );
    println!(
        "ACCEPTANCE 8: PASS — {draws} random die sets: packings legal, areas within \
         [global slicing optimum, partition-constrained optimum]; {:.0} ms",
        elapsed.as_secs_f64() * 1e3
    );
}

// ---------------------------------------------------------------------
// 9. Node sweep finds the expected minimum-carbon assignment.
// ---------------------------------------------------------------------

#[test]
fn criterion_9_sweep_finds_the_minimum() {
    let db = default_db();
    let choices = vec!["7nm".to_string(), "10nm".to_string(), "14nm".to_string()];
    let sw = SweepSpec {
        node_choices: BTreeMap::from([
            (DesignType::Logic, choices.clone()),
            (DesignType::Analog, choices.clone()),
            (DesignType::Memory, choices),
        ]),
        nc_values: vec![1],
        architectures: vec![Architecture::SiliconBridge],
    };
    let entries = sweep(&system("ga102"), &sw, &db, &Overrides::default());
    assert_eq!(entries.len(), 27);
    let best = entries
        .iter()
        .filter_map(|e| e.result.as_ref().ok().map(|r| (r.c_total, e.label.clone())))
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .expect("at least one configuration must evaluate");
    assert_eq!(
        best.1, "(7,14,10)",
        "minimum-carbon assignment was {} at {}",
        best.1, best.0
    );
    println!(
        "ACCEPTANCE 9: PASS — 27-point node sweep puts the minimum at {} ({:.1} g)",
        best.1, best.0
    );
}
