//! Slicing-tree floorplanner for chiplet packages.
//!
//! The placement problem here is deliberately lightweight: estimate the
//! package bounding box, the whitespace it implies, and which dies share an
//! interface. The algorithm:
//!
//! 1. Recursively bipartition the dies by greedy area balancing
//!    ([`bipartition`]), producing a fixed slicing tree.
//! 2. For every subtree, enumerate the Pareto-minimal set of realizable
//!    bounding boxes over both cut orientations and both orientations of
//!    each die. Keeping the whole frontier (rather than one locally minimal
//!    shape) guarantees the final box is the best realization of the tree.
//! 3. Pick the root shape with minimal area (ties: smaller max dimension,
//!    then smaller height — i.e. wider layouts — then generation order,
//!    which prefers side-by-side cuts) and assign die positions top-down.
//!
//! `spacing` millimeters separate the two sides of every cut. Two dies are
//! *adjacent* — able to host die-to-die interfaces — when they face each
//! other across a gap of at most 1.5× the spacing with strictly positive
//! projection overlap.

use serde::Serialize;

use crate::{Error, Result};

/// Coordinate slack for geometric comparisons, mm.
const EPS: f64 = 1e-9;

/// Die footprint handed to the floorplanner: name plus realized dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct DieFootprint {
    pub name: String,
    pub width_mm: f64,
    pub height_mm: f64,
}

impl DieFootprint {
    /// Square realization of an area.
    pub fn square(name: impl Into<String>, area_mm2: f64) -> Self {
        let side = area_mm2.sqrt();
        DieFootprint {
            name: name.into(),
            width_mm: side,
            height_mm: side,
        }
    }
}

/// Axis-aligned placed rectangle, mm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Rect {
    pub x: f64,
    pub y: f64,
    pub width: f64,
    pub height: f64,
}

impl Rect {
    fn x2(&self) -> f64 {
        self.x + self.width
    }
    fn y2(&self) -> f64 {
        self.y + self.height
    }
}

/// Orientation of a slicing cut: a `Vertical` cut places children side by
/// side, a `Horizontal` cut stacks them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Cut {
    Vertical,
    Horizontal,
}

/// Node of the realized slicing tree.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FloorplanNode {
    Leaf {
        name: String,
        rect: Rect,
    },
    Internal {
        cut: Cut,
        rect: Rect,
        first: Box<FloorplanNode>,
        second: Box<FloorplanNode>,
    },
}

/// A pair of dies sharing an interface, with the usable edge length.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Adjacency {
    pub a: String,
    pub b: String,
    /// Projection overlap along the shared edge, mm.
    pub overlap_mm: f64,
}

/// Placed floorplan plus its summary metrics.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FloorplanResult {
    pub root: FloorplanNode,
    pub package_width_mm: f64,
    pub package_height_mm: f64,
    /// Bounding-box area, mm².
    pub package_area_mm2: f64,
    /// Bounding-box area minus total die area, mm²; never negative.
    pub whitespace_mm2: f64,
    pub adjacencies: Vec<Adjacency>,
}

impl FloorplanResult {
    /// All placed dies, sorted by name.
    pub fn placed_dies(&self) -> Vec<(String, Rect)> {
        let mut out = Vec::new();
        collect_leaves(&self.root, &mut out);
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }
}

fn collect_leaves(node: &FloorplanNode, out: &mut Vec<(String, Rect)>) {
    match node {
        FloorplanNode::Leaf { name, rect } => out.push((name.clone(), *rect)),
        FloorplanNode::Internal { first, second, .. } => {
            collect_leaves(first, out);
            collect_leaves(second, out);
        }
    }
}

/// Split items into two lists balancing total area: visit areas in
/// descending order (stable for ties) and assign each to the currently
/// lighter partition, first partition on ties. Returns original indices.
pub fn bipartition(areas: &[f64]) -> Result<(Vec<usize>, Vec<usize>)> {
    if areas.len() < 2 {
        return Err(Error::Validation(format!(
            "bipartition requires at least 2 items, got {}",
            areas.len()
        )));
    }
    let mut order: Vec<usize> = (0..areas.len()).collect();
    order.sort_by(|&a, &b| areas[b].partial_cmp(&areas[a]).expect("finite areas"));
    let (mut first, mut second) = (Vec::new(), Vec::new());
    let (mut w1, mut w2) = (0.0_f64, 0.0_f64);
    for idx in order {
        if w1 <= w2 {
            first.push(idx);
            w1 += areas[idx];
        } else {
            second.push(idx);
            w2 += areas[idx];
        }
    }
    Ok((first, second))
}

// ---------------------------------------------------------------------------
// internal machinery

/// How one candidate shape of a subtree is built.
#[derive(Clone, Copy)]
enum Build {
    Leaf { rotated: bool },
    Node { cut: Cut, first: usize, second: usize },
}

/// One realizable bounding box of a subtree.
#[derive(Clone, Copy)]
struct Cand {
    w: f64,
    h: f64,
    seq: u32,
    build: Build,
}

enum ArenaNode {
    Leaf(usize),
    Node(usize, usize),
}

struct Arena<'a> {
    dies: &'a [DieFootprint],
    nodes: Vec<ArenaNode>,
    cands: Vec<Vec<Cand>>,
    spacing: f64,
}

/// Keep only Pareto-minimal shapes: sort by (w, h, seq) and retain entries
/// whose height strictly improves on everything narrower.
fn prune(mut v: Vec<Cand>) -> Vec<Cand> {
    v.sort_by(|a, b| {
        a.w.partial_cmp(&b.w)
            .unwrap()
            .then(a.h.partial_cmp(&b.h).unwrap())
            .then(a.seq.cmp(&b.seq))
    });
    let mut out: Vec<Cand> = Vec::with_capacity(v.len());
    let mut best_h = f64::INFINITY;
    for c in v {
        if c.h < best_h {
            best_h = c.h;
            out.push(c);
        }
    }
    out
}

impl<'a> Arena<'a> {
    /// Build the slicing tree for `indices` (sorted by descending area) and
    /// compute its candidate shapes. Returns the arena node id.
    fn build(&mut self, indices: &[usize], areas: &[f64]) -> usize {
        if indices.len() == 1 {
            let die = &self.dies[indices[0]];
            let mut cands = vec![Cand {
                w: die.width_mm,
                h: die.height_mm,
                seq: 0,
                build: Build::Leaf { rotated: false },
            }];
            if (die.width_mm - die.height_mm).abs() > EPS {
                cands.push(Cand {
                    w: die.height_mm,
                    h: die.width_mm,
                    seq: 1,
                    build: Build::Leaf { rotated: true },
                });
            }
            self.nodes.push(ArenaNode::Leaf(indices[0]));
            self.cands.push(prune(cands));
            return self.nodes.len() - 1;
        }
        let local_areas: Vec<f64> = indices.iter().map(|&i| areas[i]).collect();
        let (p1, p2) = bipartition(&local_areas).expect("len >= 2");
        let first_ids: Vec<usize> = p1.into_iter().map(|i| indices[i]).collect();
        let second_ids: Vec<usize> = p2.into_iter().map(|i| indices[i]).collect();
        let first = self.build(&first_ids, areas);
        let second = self.build(&second_ids, areas);

        let mut cands = Vec::new();
        let mut seq = 0u32;
        for (li, lc) in self.cands[first].iter().enumerate() {
            for (ri, rc) in self.cands[second].iter().enumerate() {
                // Side by side.
                cands.push(Cand {
                    w: lc.w + self.spacing + rc.w,
                    h: lc.h.max(rc.h),
                    seq,
                    build: Build::Node { cut: Cut::Vertical, first: li, second: ri },
                });
                seq += 1;
                // Stacked.
                cands.push(Cand {
                    w: lc.w.max(rc.w),
                    h: lc.h + self.spacing + rc.h,
                    seq,
                    build: Build::Node { cut: Cut::Horizontal, first: li, second: ri },
                });
                seq += 1;
            }
        }
        self.nodes.push(ArenaNode::Node(first, second));
        self.cands.push(prune(cands));
        self.nodes.len() - 1
    }

    /// Realize positions for the chosen candidate of `node` at (x, y).
    fn place(&self, node: usize, cand_idx: usize, x: f64, y: f64) -> FloorplanNode {
        let cand = self.cands[node][cand_idx];
        match (&self.nodes[node], cand.build) {
            (ArenaNode::Leaf(die_idx), Build::Leaf { rotated }) => {
                let die = &self.dies[*die_idx];
                let (w, h) = if rotated {
                    (die.height_mm, die.width_mm)
                } else {
                    (die.width_mm, die.height_mm)
                };
                FloorplanNode::Leaf {
                    name: die.name.clone(),
                    rect: Rect { x, y, width: w, height: h },
                }
            }
            (ArenaNode::Node(cl, cr), Build::Node { cut, first, second }) => {
                let fc = self.cands[*cl][first];
                let first_node = self.place(*cl, first, x, y);
                let second_node = match cut {
                    Cut::Vertical => self.place(*cr, second, x + fc.w + self.spacing, y),
                    Cut::Horizontal => self.place(*cr, second, x, y + fc.h + self.spacing),
                };
                FloorplanNode::Internal {
                    cut,
                    rect: Rect { x, y, width: cand.w, height: cand.h },
                    first: Box::new(first_node),
                    second: Box::new(second_node),
                }
            }
            _ => unreachable!("candidate build matches node kind"),
        }
    }
}

/// Build a floorplan for the given die footprints.
///
/// `spacing_mm` must be 0 (useful in tests and abutted assemblies) or within
/// [0.1, 1.0].
pub fn build_floorplan(dies: &[DieFootprint], spacing_mm: f64) -> Result<FloorplanResult> {
    if dies.is_empty() {
        return Err(Error::Validation("floorplan requires at least one die".into()));
    }
    if spacing_mm != 0.0 && !(0.1..=1.0).contains(&spacing_mm) {
        return Err(Error::OutOfRange {
            field: "chiplet_spacing_mm".into(),
            value: spacing_mm,
            min: 0.1,
            max: 1.0,
        });
    }
    let mut seen = std::collections::BTreeSet::new();
    for die in dies {
        if !(die.width_mm > 0.0) || !(die.height_mm > 0.0) {
            return Err(Error::Validation(format!(
                "die \"{}\" has non-positive dimensions {}x{}",
                die.name, die.width_mm, die.height_mm
            )));
        }
        if !seen.insert(die.name.as_str()) {
            return Err(Error::Validation(format!(
                "duplicate die name \"{}\"",
                die.name
            )));
        }
    }

    let areas: Vec<f64> = dies.iter().map(|d| d.width_mm * d.height_mm).collect();
    let mut order: Vec<usize> = (0..dies.len()).collect();
    order.sort_by(|&a, &b| areas[b].partial_cmp(&areas[a]).expect("finite areas"));

    let mut arena = Arena {
        dies,
        nodes: Vec::new(),
        cands: Vec::new(),
        spacing: spacing_mm,
    };
    let root = arena.build(&order, &areas);

    // Minimal area; ties prefer squarer, then wider, then generation order.
    let mut best: Option<(usize, f64, f64, f64, u32)> = None;
    for (idx, c) in arena.cands[root].iter().enumerate() {
        let key = (c.w * c.h, c.w.max(c.h), c.h, c.seq);
        let better = match &best {
            None => true,
            Some((_, a, m, h, s)) => {
                (key.0, key.1, key.2, key.3) < (*a, *m, *h, *s)
            }
        };
        if better {
            best = Some((idx, key.0, key.1, key.2, key.3));
        }
    }
    let (best_idx, ..) = best.expect("at least one candidate");
    let chosen = arena.cands[root][best_idx];
    let placed = arena.place(root, best_idx, 0.0, 0.0);

    let total_die_area: f64 = areas.iter().sum();
    let package_area = chosen.w * chosen.h;
    let mut whitespace = package_area - total_die_area;
    if whitespace < 0.0 {
        debug_assert!(whitespace > -1e-6, "dies exceed bounding box: {whitespace}");
        whitespace = 0.0;
    }

    let mut leaves = Vec::new();
    collect_leaves(&placed, &mut leaves);
    let adjacencies = adjacent_pairs(&leaves, spacing_mm);

    Ok(FloorplanResult {
        root: placed,
        package_width_mm: chosen.w,
        package_height_mm: chosen.h,
        package_area_mm2: package_area,
        whitespace_mm2: whitespace,
        adjacencies,
    })
}

/// Interface detection over a placed floorplan: pairs of dies facing each
/// other across a gap of at most `1.5 × spacing_mm` with strictly positive
/// projection overlap. Pairs are reported in lexicographic name order.
pub fn adjacencies(result: &FloorplanResult, spacing_mm: f64) -> Vec<Adjacency> {
    let mut leaves = Vec::new();
    collect_leaves(&result.root, &mut leaves);
    adjacent_pairs(&leaves, spacing_mm)
}

fn adjacent_pairs(leaves: &[(String, Rect)], spacing_mm: f64) -> Vec<Adjacency> {
    let tolerance = spacing_mm * 1.5 + EPS;
    let mut sorted: Vec<&(String, Rect)> = leaves.iter().collect();
    sorted.sort_by(|a, b| a.0.cmp(&b.0));
    let mut out = Vec::new();
    for i in 0..sorted.len() {
        for j in (i + 1)..sorted.len() {
            let (na, ra) = sorted[i];
            let (nb, rb) = sorted[j];
            if let Some(overlap) = facing_overlap(ra, rb, tolerance) {
                out.push(Adjacency {
                    a: na.clone(),
                    b: nb.clone(),
                    overlap_mm: overlap,
                });
            }
        }
    }
    out
}

/// Overlap length if `a` and `b` face each other across a gap ≤ `tolerance`.
fn facing_overlap(a: &Rect, b: &Rect, tolerance: f64) -> Option<f64> {
    // Horizontal neighbors: gap along x, overlap along y.
    let x_gap = (b.x - a.x2()).max(a.x - b.x2());
    let y_gap = (b.y - a.y2()).max(a.y - b.y2());
    let y_overlap = (a.y2().min(b.y2()) - a.y.max(b.y)).max(0.0);
    let x_overlap = (a.x2().min(b.x2()) - a.x.max(b.x)).max(0.0);
    if x_gap >= -EPS && x_gap <= tolerance && y_overlap > EPS {
        return Some(y_overlap);
    }
    if y_gap >= -EPS && y_gap <= tolerance && x_overlap > EPS {
        return Some(x_overlap);
    }
    None
}
