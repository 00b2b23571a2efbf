//! The closed-world catalog: ℝ, ℝ², Aff(ℝ)⁰, Sol and the Heisenberg group.
//!
//! Aff(ℝ)⁰ = {x ↦ ax + b : a > 0} is charted by `(s, b)` with `a = eˢ`, so
//! every chart is all of `ℝ^dim` and compact boxes in the chart are compact
//! in the group.

use std::sync::Arc;

use serde_json::{json, Value};

use super::haar::ConvergentFamily;
use super::subgroup::{ClosedSubgroupChart, SubgroupKind};
use super::{everywhere, same_coordinates, LieGroupChart, Point};
use crate::error::{structural, Result};

fn unit(_: &Point) -> f64 {
    1.0
}

fn add(x: &Point, y: &Point) -> Point {
    [x[0] + y[0], x[1] + y[1], x[2] + y[2]]
}

fn neg(x: &Point) -> Point {
    [-x[0], -x[1], -x[2]]
}

fn aff_mul(x: &Point, y: &Point) -> Point {
    // (a₁, b₁)(a₂, b₂) = (a₁a₂, b₁ + a₁b₂)
    [x[0] + y[0], x[1] + x[0].exp() * y[1], 0.0]
}

fn aff_inv(x: &Point) -> Point {
    [-x[0], -(-x[0]).exp() * x[1], 0.0]
}

fn aff_density(x: &Point) -> f64 {
    // da db / a² in (a, b) becomes e^{-s} ds db
    (-x[0]).exp()
}

fn aff_from_standard(p: &Point) -> Option<Point> {
    (p[0] > 0.0).then(|| [p[0].ln(), p[1], 0.0])
}

fn sol_mul(x: &Point, y: &Point) -> Point {
    [x[0] + x[2].exp() * y[0], x[1] + (-x[2]).exp() * y[1], x[2] + y[2]]
}

fn sol_inv(x: &Point) -> Point {
    [-(-x[2]).exp() * x[0], -x[2].exp() * x[1], -x[2]]
}

fn heis_mul(x: &Point, y: &Point) -> Point {
    [x[0] + y[0], x[1] + y[1], x[2] + y[2] + x[0] * y[1]]
}

fn heis_inv(x: &Point) -> Point {
    [-x[0], -x[1], -x[2] + x[0] * x[1]]
}

#[allow(clippy::too_many_arguments)]
fn make(
    name: &str,
    dim: usize,
    mul: super::MulFn,
    inv: super::MapFn,
    density: super::DensityFn,
    density_id: &str,
    half: f64,
    unimodular: bool,
) -> LieGroupChart {
    LieGroupChart {
        name: name.into(),
        dim,
        mul,
        inv,
        identity: [0.0; 3],
        density,
        density_id: density_id.into(),
        domain: everywhere,
        reference_box: vec![(-half, half); dim],
        unimodular,
        from_standard: same_coordinates,
    }
}

const NAMES: [&str; 5] = ["r", "r2", "aff", "sol", "heis"];

fn build(name: &str) -> Result<LieGroupChart> {
    let chart = match name {
        "r" => make("r", 1, add, neg, unit, "lebesgue", 1.0, true),
        "r2" => make("r2", 2, add, neg, unit, "lebesgue", 1.0, true),
        "aff" => LieGroupChart {
            from_standard: aff_from_standard,
            ..make("aff", 2, aff_mul, aff_inv, aff_density, "exp(-s)", 0.5, false)
        },
        "sol" => make("sol", 3, sol_mul, sol_inv, unit, "lebesgue", 0.5, true),
        "heis" => make("heis", 3, heis_mul, heis_inv, unit, "lebesgue", 0.5, true),
        other => return Err(structural(format!("unknown Lie group {other:?}; the catalog has {NAMES:?}"))),
    };
    Ok(chart)
}

/// A validated catalog chart.
pub fn chart(name: &str) -> Result<Arc<LieGroupChart>> {
    let c = build(name)?;
    c.validate()?;
    Ok(Arc::new(c))
}

/// Every catalog chart, validated.
pub fn catalog() -> Result<Vec<Arc<LieGroupChart>>> {
    NAMES.iter().map(|n| chart(n)).collect()
}

fn line(axis: usize) -> fn(&Point) -> Point {
    match axis {
        0 => |t| [t[0], 0.0, 0.0],
        1 => |t| [0.0, t[0], 0.0],
        _ => |t| [0.0, 0.0, t[0]],
    }
}

fn continuous(name: &str, parent: &Arc<LieGroupChart>, dim: usize, emb: fn(&Point) -> Point) -> ClosedSubgroupChart {
    ClosedSubgroupChart::new(name, parent.clone(), SubgroupKind::Continuous { dim }, emb)
}

fn lattice(name: &str, parent: &Arc<LieGroupChart>, dim: usize, emb: fn(&Point) -> Point) -> ClosedSubgroupChart {
    ClosedSubgroupChart::new(name, parent.clone(), SubgroupKind::Lattice { dim, spacing: 1.0 }, emb)
}

/// The declared closed subgroups of a catalog group.
pub fn subgroups(parent: &Arc<LieGroupChart>) -> Vec<ClosedSubgroupChart> {
    let mut out = match parent.name.as_str() {
        "r" => vec![continuous("r", parent, 1, |t| *t), lattice("z", parent, 1, |t| *t)],
        "r2" => vec![
            continuous("r2", parent, 2, |t| *t),
            continuous("x-axis", parent, 1, line(0)),
            continuous("diagonal", parent, 1, |t| [t[0], t[0], 0.0]),
            lattice("z2", parent, 2, |t| *t),
        ],
        "aff" => vec![
            continuous("translations", parent, 1, line(1)),
            continuous("scalings", parent, 1, line(0)),
            lattice("translation-lattice", parent, 1, line(1)),
            ClosedSubgroupChart::whole(parent.clone()),
        ],
        "sol" => vec![
            continuous("n", parent, 1, line(0)),
            continuous("y-axis", parent, 1, line(1)),
            continuous("t-axis", parent, 1, line(2)),
            lattice("t-lattice", parent, 1, line(2)),
            ClosedSubgroupChart::whole(parent.clone()),
        ],
        "heis" => vec![
            continuous("center", parent, 1, line(2)),
            continuous("x-axis", parent, 1, line(0)),
            continuous("y-axis", parent, 1, line(1)),
            lattice("center-lattice", parent, 1, line(2)),
            ClosedSubgroupChart::whole(parent.clone()),
        ],
        _ => Vec::new(),
    };
    out.push(ClosedSubgroupChart::trivial(parent.clone()));
    out
}

/// A declared subgroup by group and subgroup name.
pub fn subgroup(group: &str, name: &str) -> Result<ClosedSubgroupChart> {
    let parent = chart(group)?;
    subgroups(&parent)
        .into_iter()
        .find(|h| h.name == name)
        .ok_or_else(|| structural(format!("{group} has no catalog subgroup {name:?}")))
}

const FAMILIES: [(&str, &str, &str, &str); 5] = [
    ("lattice-in-r", "r", "z", "r"),
    ("lattice-in-r2", "r2", "z2", "r2"),
    ("translation-lattices-in-aff", "aff", "translation-lattice", "translations"),
    ("constant-sol-n", "sol", "n", "n"),
    ("center-lattices-in-heis", "heis", "center-lattice", "center"),
];

pub fn family(name: &str) -> Result<ConvergentFamily> {
    let (_, group, base, limit) =
        FAMILIES.iter().find(|f| f.0 == name).ok_or_else(|| structural(format!("unknown family {name:?}")))?;
    Ok(ConvergentFamily { name: name.into(), base: subgroup(group, base)?, limit: subgroup(group, limit)? })
}

pub fn families() -> Result<Vec<ConvergentFamily>> {
    FAMILIES.iter().map(|f| family(f.0)).collect()
}

fn kind_value(h: &ClosedSubgroupChart) -> Value {
    match h.kind {
        SubgroupKind::Continuous { dim } => json!({"name": h.name, "kind": "continuous", "dim": dim}),
        SubgroupKind::Lattice { dim, spacing } => {
            json!({"name": h.name, "kind": "lattice", "dim": dim, "spacing": spacing})
        }
        SubgroupKind::Trivial => json!({"name": h.name, "kind": "trivial", "dim": 0}),
        SubgroupKind::Whole => json!({"name": h.name, "kind": "whole", "dim": h.parent.dim}),
    }
}

/// JSON description of the catalog: groups with chart boxes, density ids and
/// subgroups, and the convergent families.
pub fn catalog_value() -> Result<Value> {
    let groups: Vec<Value> = catalog()?
        .iter()
        .map(|g| {
            json!({
                "name": g.name,
                "dim": g.dim,
                "box": g.reference_box.iter().map(|(a, b)| [a, b]).collect::<Vec<_>>(),
                "density": g.density_id,
                "unimodular": g.unimodular,
                "subgroups": subgroups(g).iter().map(kind_value).collect::<Vec<_>>(),
            })
        })
        .collect();
    let fams: Vec<Value> =
        FAMILIES.iter().map(|(n, g, b, l)| json!({"name": n, "group": g, "members": b, "limit": l})).collect();
    Ok(json!({"groups": groups, "families": fams}))
}

/// Reads a catalog file naming groups of the built-in catalog, optionally
/// overriding their reference boxes. Declared dimensions and density ids
/// must match; every chart is validated.
pub fn load_catalog(text: &str) -> Result<Vec<Arc<LieGroupChart>>> {
    let v: Value = serde_json::from_str(text)?;
    let groups = v["groups"].as_array().ok_or_else(|| structural("catalog needs a \"groups\" array"))?;
    let mut out = Vec::with_capacity(groups.len());
    for entry in groups {
        let name = entry["name"].as_str().ok_or_else(|| structural("catalog group without a name"))?;
        let mut c = build(name)?;
        if let Some(dim) = entry["dim"].as_u64() {
            if dim as usize != c.dim {
                return Err(structural(format!("{name} has dimension {}, not {dim}", c.dim)));
            }
        }
        if let Some(d) = entry["density"].as_str() {
            if d != c.density_id {
                return Err(structural(format!("{name} has density {}, not {d}", c.density_id)));
            }
        }
        if !entry["box"].is_null() {
            let bounds: Vec<(f64, f64)> = serde_json::from_value(entry["box"].clone())?;
            if bounds.len() != c.dim || bounds.iter().any(|(a, b)| a.partial_cmp(b) != Some(std::cmp::Ordering::Less)) {
                return Err(structural(format!("bad reference box for {name}")));
            }
            c.reference_box = bounds;
        }
        c.validate()?;
        out.push(Arc::new(c));
    }
    Ok(out)
}
