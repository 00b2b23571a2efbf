//! Closed subgroups of catalog groups and the invariant-measure criterion.

use std::sync::Arc;

use serde::Serialize;

use super::quadrature::modular_function;
use super::{LieGroupChart, Point};
use crate::error::{Error, Result};

/// Margin allowed between `μ_G` and `μ_H` on sampled elements.
pub const ADMITS_TOLERANCE: f64 = 1e-2;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SubgroupKind {
    /// Image of `(ℝ^dim, +)` under the embedding.
    Continuous {
        dim: usize,
    },
    /// Image of `spacing·ℤ^dim`.
    Lattice {
        dim: usize,
        spacing: f64,
    },
    Trivial,
    /// The parent group itself, in the parent's chart.
    Whole,
}

/// A closed subgroup `H ≤ G`, given as the image of a homomorphism from a
/// vector group (or a lattice in it) into the parent chart. Its Haar
/// measure is Lebesgue (or counting) measure in the parameter.
#[derive(Clone, Debug)]
pub struct ClosedSubgroupChart {
    pub name: String,
    pub parent: Arc<LieGroupChart>,
    pub kind: SubgroupKind,
    pub embedding: fn(&Point) -> Point,
    /// Half-width of the parameter window used for integration over `H`.
    pub window: f64,
}

impl ClosedSubgroupChart {
    pub fn new(
        name: impl Into<String>,
        parent: Arc<LieGroupChart>,
        kind: SubgroupKind,
        embedding: fn(&Point) -> Point,
    ) -> Self {
        Self { name: name.into(), parent, kind, embedding, window: 4.0 }
    }

    pub fn trivial(parent: Arc<LieGroupChart>) -> Self {
        Self::new("trivial", parent, SubgroupKind::Trivial, |_| [0.0; 3])
    }

    pub fn whole(parent: Arc<LieGroupChart>) -> Self {
        let name = parent.name.clone();
        // left translation shears and rescales the chart, so the whole group needs a wider window
        Self { window: 6.0, ..Self::new(name, parent, SubgroupKind::Whole, |p| *p) }
    }

    pub fn with_spacing(&self, spacing: f64) -> Self {
        let dim = self.param_dim();
        Self { kind: SubgroupKind::Lattice { dim, spacing }, ..self.clone() }
    }

    /// Dimension of the parameter space.
    pub fn param_dim(&self) -> usize {
        match self.kind {
            SubgroupKind::Continuous { dim } | SubgroupKind::Lattice { dim, .. } => dim,
            SubgroupKind::Trivial => 0,
            SubgroupKind::Whole => self.parent.dim,
        }
    }

    pub fn embed(&self, t: &Point) -> Point {
        match self.kind {
            SubgroupKind::Trivial => self.parent.identity,
            SubgroupKind::Whole => *t,
            _ => (self.embedding)(t),
        }
    }

    /// True for subgroups whose modular function is identically 1 for
    /// structural reasons (images of abelian groups).
    pub fn trivially_unimodular(&self) -> bool {
        !matches!(self.kind, SubgroupKind::Whole)
    }

    /// Parameters of the elements sampled by [`admits_invariant_measure`].
    fn sample_params(&self) -> Vec<Point> {
        let values: &[f64] = match self.kind {
            SubgroupKind::Lattice { .. } => &[-2.0, -1.0, 1.0, 2.0],
            SubgroupKind::Trivial => &[],
            SubgroupKind::Whole => &[-0.5, 0.5],
            SubgroupKind::Continuous { .. } => &[-1.0, -0.5, 0.5, 1.0],
        };
        let scale = match self.kind {
            SubgroupKind::Lattice { spacing, .. } => spacing,
            _ => 1.0,
        };
        let k = self.param_dim();
        if k == 0 {
            return vec![[0.0; 3]];
        }
        let count = values.len().pow(k as u32);
        (0..count)
            .map(|mut code| {
                let mut p = [0.0; 3];
                for c in p.iter_mut().take(k) {
                    *c = scale * values[code % values.len()];
                    code /= values.len();
                }
                p
            })
            .collect()
    }

    /// Elements of `H` inside the parent chart used as samples.
    pub fn samples(&self) -> Vec<Point> {
        self.sample_params().iter().map(|t| self.embed(t)).filter(|h| self.parent.in_domain(h)).collect()
    }

    /// `μ_H(h)`: identically 1 for images of abelian groups, otherwise the
    /// parent's estimate in its own chart.
    pub fn modular(&self, h: &Point, n: usize) -> Result<f64> {
        if self.trivially_unimodular() {
            Ok(1.0)
        } else {
            modular_function(&self.parent, h, n)
        }
    }

    /// Whether products and inverses of sampled elements stay on the image
    /// of the parametrization, to `tol`.
    pub fn is_closed_on_samples(&self, tol: f64) -> bool {
        if self.kind == SubgroupKind::Whole {
            return true;
        }
        let g = &self.parent;
        let params = self.sample_params();
        let close = |a: &Point, b: &Point| (0..g.dim).all(|i| (a[i] - b[i]).abs() <= tol * (1.0 + b[i].abs()));
        params.iter().all(|s| {
            let hs = self.embed(s);
            let neg = [-s[0], -s[1], -s[2]];
            close(&g.inv(&hs), &self.embed(&neg))
                && params.iter().all(|t| {
                    let sum = [s[0] + t[0], s[1] + t[1], s[2] + t[2]];
                    close(&g.mul(&hs, &self.embed(t)), &self.embed(&sum))
                })
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AdmitsReport {
    pub group: String,
    pub subgroup: String,
    pub admits: bool,
    /// `max |μ_G(h) − μ_H(h)|` over the samples.
    pub margin: f64,
    pub samples: usize,
    pub tolerance: f64,
}

/// Whether `μ_G` restricted to `H` agrees with `μ_H` on sampled elements,
/// the criterion for a nonzero `G`-invariant measure on `G/H`.
pub fn admits_invariant_measure(h: &ClosedSubgroupChart, n: usize, tolerance: f64) -> Result<AdmitsReport> {
    let samples = h.samples();
    if samples.is_empty() {
        return Err(Error::Precondition(format!("no sampled element of {} lies in the chart", h.name)));
    }
    let mut margin = 0.0f64;
    for s in &samples {
        let diff = (modular_function(&h.parent, s, n)? - h.modular(s, n)?).abs();
        margin = margin.max(diff);
    }
    Ok(AdmitsReport {
        group: h.parent.name.clone(),
        subgroup: h.name.clone(),
        admits: margin <= tolerance,
        margin,
        samples: samples.len(),
        tolerance,
    })
}
