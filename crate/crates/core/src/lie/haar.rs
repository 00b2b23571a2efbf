//! Normalized Haar measures `m_f(H)` and probes along convergent families.

use rayon::prelude::*;
use serde::Serialize;

use super::subgroup::{admits_invariant_measure, ClosedSubgroupChart, SubgroupKind};
use super::{LieGroupChart, Point};
use crate::error::{Error, Result};

/// Largest allowed `|∫ g dm_f(H_n) − ∫ g dm_f(H)|` at the last index.
pub const CONTINUITY_TOLERANCE: f64 = 0.05;

/// Indices `n` at which a family is probed.
pub const PROBE_INDICES: std::ops::RangeInclusive<usize> = 1..=64;

/// Product of triangular bumps about the identity, `f(1) = 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BumpFunction {
    pub half_width: f64,
}

impl Default for BumpFunction {
    fn default() -> Self {
        Self { half_width: 1.5 }
    }
}

impl BumpFunction {
    pub fn eval(&self, chart: &LieGroupChart, x: &Point) -> f64 {
        (0..chart.dim).map(|i| (1.0 - (x[i] - chart.identity[i]).abs() / self.half_width).max(0.0)).product()
    }
}

/// `exp(-|x|²)` in chart coordinates, a smooth rapidly decaying test function.
pub fn gaussian(x: &Point) -> f64 {
    (-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2])).exp()
}

/// `m_f(H)` as a weighted point set: quadrature nodes for continuous `H`,
/// lattice points for discrete `H`.
#[derive(Clone, Debug)]
pub struct HaarHandle {
    pub subgroup: String,
    nodes: Vec<(Point, f64)>,
}

fn default_cells(k: usize) -> usize {
    match k {
        0 | 1 => 800,
        2 => 200,
        _ => 100,
    }
}

impl HaarHandle {
    /// Normalizes the Haar measure of `H` so that `∫ f dm_f(H) = 1`.
    ///
    /// `cells` is the number of quadrature cells per parameter axis for
    /// continuous `H`; `None` picks a default by dimension. The normalization
    /// is rejected as divergent when `f` does not vanish near the edge of the
    /// parameter window.
    pub fn new(h: &ClosedSubgroupChart, f: &BumpFunction, cells: Option<usize>) -> Result<Self> {
        let g = &h.parent;
        let k = h.param_dim();
        let w = h.window;
        let mut nodes: Vec<(Point, f64)> = Vec::new();
        let mut edge: Vec<Point> = Vec::new();
        match h.kind {
            SubgroupKind::Trivial => nodes.push((g.identity, 1.0)),
            SubgroupKind::Lattice { spacing, .. } => {
                let m = (w / spacing).floor() as i64;
                let side = (2 * m + 1) as usize;
                for mut code in 0..side.pow(k as u32) {
                    let mut t = [0.0; 3];
                    let mut on_edge = false;
                    for c in t.iter_mut().take(k) {
                        let j = (code % side) as i64 - m;
                        code /= side;
                        on_edge |= j.abs() == m;
                        *c = j as f64 * spacing;
                    }
                    let p = h.embed(&t);
                    if on_edge {
                        edge.push(p);
                    }
                    nodes.push((p, 1.0));
                }
            }
            SubgroupKind::Continuous { .. } | SubgroupKind::Whole => {
                let n = cells.unwrap_or_else(|| default_cells(k));
                let step = 2.0 * w / n as f64;
                let volume = step.powi(k as i32);
                for mut code in 0..n.pow(k as u32) {
                    let mut t = [0.0; 3];
                    let mut on_edge = false;
                    for c in t.iter_mut().take(k) {
                        let j = code % n;
                        code /= n;
                        on_edge |= j < 2 || j + 2 >= n;
                        *c = -w + (j as f64 + 0.5) * step;
                    }
                    let p = h.embed(&t);
                    if !g.in_domain(&p) {
                        return Err(Error::Domain(format!("{} leaves the chart of {}", h.name, g.name)));
                    }
                    let density = if h.kind == SubgroupKind::Whole { g.density(&p) } else { 1.0 };
                    if on_edge {
                        edge.push(p);
                    }
                    nodes.push((p, volume * density));
                }
            }
        }
        if edge.iter().any(|p| f.eval(g, p) > 0.0) {
            return Err(Error::Numeric(format!(
                "the normalization integral of f over {} does not converge inside the parameter window",
                h.name
            )));
        }
        let z: f64 = sum_ordered(&nodes, |p| f.eval(g, p));
        if !z.is_finite() || z <= 0.0 {
            return Err(Error::Numeric(format!("normalization integral {z} over {}", h.name)));
        }
        for node in &mut nodes {
            node.1 /= z;
        }
        Ok(Self { subgroup: h.name.clone(), nodes })
    }

    /// `∫ φ dm_f(H)`
    pub fn integrate(&self, phi: impl Fn(&Point) -> f64 + Sync) -> f64 {
        sum_ordered(&self.nodes, phi)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Weight of a single node (lattices and the trivial group).
    pub fn weights(&self) -> impl Iterator<Item = &(Point, f64)> {
        self.nodes.iter()
    }
}

fn sum_ordered(nodes: &[(Point, f64)], phi: impl Fn(&Point) -> f64 + Sync) -> f64 {
    let partial: Vec<f64> =
        nodes.par_chunks(4096).map(|chunk| chunk.iter().map(|(p, w)| w * phi(p)).sum::<f64>()).collect();
    partial.iter().sum()
}

/// A declared sequence `H_n → H` in the Chabauty sense.
#[derive(Clone, Debug)]
pub struct ConvergentFamily {
    pub name: String,
    /// `H_n` is this chart with lattice spacing `1/n`, or the chart itself
    /// when it is not a lattice.
    pub base: ClosedSubgroupChart,
    pub limit: ClosedSubgroupChart,
}

impl ConvergentFamily {
    pub fn member(&self, n: usize) -> ClosedSubgroupChart {
        match self.base.kind {
            SubgroupKind::Lattice { .. } => {
                let mut h = self.base.with_spacing(1.0 / n as f64);
                h.name = format!("{}[{n}]", self.base.name);
                h
            }
            _ => self.base.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ContinuityReport {
    pub family: String,
    pub indices: Vec<usize>,
    pub values: Vec<f64>,
    pub limit: f64,
    pub differences: Vec<f64>,
    pub final_difference: f64,
    pub tolerance: f64,
    pub converged: bool,
}

/// `∫ φ dm_f(H_n)` for `n = 1..=64` against `∫ φ dm_f(H)`.
pub fn continuity_probe(
    family: &ConvergentFamily,
    f: &BumpFunction,
    phi: impl Fn(&Point) -> f64 + Sync,
    tolerance: f64,
) -> Result<ContinuityReport> {
    let limit = HaarHandle::new(&family.limit, f, None)?.integrate(&phi);
    let indices: Vec<usize> = PROBE_INDICES.collect();
    let mut values = Vec::with_capacity(indices.len());
    for &n in &indices {
        values.push(HaarHandle::new(&family.member(n), f, None)?.integrate(&phi));
    }
    let differences: Vec<f64> = values.iter().map(|v| (v - limit).abs()).collect();
    let final_difference = *differences.last().expect("nonempty");
    Ok(ContinuityReport {
        family: family.name.clone(),
        indices,
        values,
        limit,
        differences,
        final_difference,
        tolerance,
        converged: final_difference <= tolerance,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClosednessReport {
    pub family: String,
    pub members_checked: Vec<usize>,
    pub limit_margin: f64,
    pub closed: bool,
}

/// Whether the limit of a family of subgroups with invariant measures on
/// `G/H_n` again has one. Members are checked at `n = 1, 2, 4, …, 64`.
pub fn closedness_probe(family: &ConvergentFamily, resolution: usize, tolerance: f64) -> Result<ClosednessReport> {
    let members: Vec<usize> = (0..=6).map(|e| 1usize << e).collect();
    for &n in &members {
        let r = admits_invariant_measure(&family.member(n), resolution, tolerance)?;
        if !r.admits {
            return Err(Error::Precondition(format!("member {n} of {} has no invariant measure", family.name)));
        }
    }
    let limit = admits_invariant_measure(&family.limit, resolution, tolerance)?;
    Ok(ClosednessReport {
        family: family.name.clone(),
        members_checked: members,
        limit_margin: limit.margin,
        closed: limit.admits,
    })
}
