//! Numeric modular functions and Haar measures on a fixed catalog of Lie groups.
//!
//! Every group is given in a global chart on `ℝ^dim` (at most 3) with a
//! multiplication map, an inversion map and a left Haar density. Modular
//! functions follow the convention `ℓ(S) = μ_G(g) ℓ(Sg)`.

mod catalog;
mod haar;
mod quadrature;
mod subgroup;

use crate::error::{Error, Result};

pub use catalog::{catalog, catalog_value, chart, families, family, load_catalog, subgroup, subgroups};
pub use haar::{
    closedness_probe, continuity_probe, gaussian, BumpFunction, ClosednessReport, ContinuityReport, ConvergentFamily,
    HaarHandle, CONTINUITY_TOLERANCE, PROBE_INDICES,
};
pub use quadrature::{midpoint_integral, modular_function, ModularReport, DEFAULT_RESOLUTION, MODULAR_CONVENTION};
pub use subgroup::{admits_invariant_measure, AdmitsReport, ClosedSubgroupChart, SubgroupKind, ADMITS_TOLERANCE};

/// Chart coordinates; entries past the group's dimension are zero.
pub type Point = [f64; 3];

pub type MulFn = fn(&Point, &Point) -> Point;
pub type MapFn = fn(&Point) -> Point;
pub type DensityFn = fn(&Point) -> f64;
pub type DomainFn = fn(&Point) -> bool;

/// A Lie group in a single chart.
#[derive(Clone, Debug)]
pub struct LieGroupChart {
    pub name: String,
    pub dim: usize,
    pub mul: MulFn,
    pub inv: MapFn,
    pub identity: Point,
    /// Left Haar density with respect to Lebesgue measure on the chart.
    pub density: DensityFn,
    pub density_id: String,
    pub domain: DomainFn,
    /// The box `S` used for modular function estimates.
    pub reference_box: Vec<(f64, f64)>,
    pub unimodular: bool,
    /// Converts the group's customary coordinates to chart coordinates.
    pub from_standard: fn(&Point) -> Option<Point>,
}

pub(crate) fn everywhere(_: &Point) -> bool {
    true
}

pub(crate) fn same_coordinates(p: &Point) -> Option<Point> {
    Some(*p)
}

impl LieGroupChart {
    pub fn mul(&self, a: &Point, b: &Point) -> Point {
        (self.mul)(a, b)
    }

    pub fn inv(&self, a: &Point) -> Point {
        (self.inv)(a)
    }

    pub fn density(&self, x: &Point) -> f64 {
        (self.density)(x)
    }

    pub fn in_domain(&self, x: &Point) -> bool {
        x[self.dim..].iter().all(|&v| v == 0.0) && x[..self.dim].iter().all(|v| v.is_finite()) && (self.domain)(x)
    }

    /// Builds a point from up to `dim` coordinates.
    pub fn point(&self, coords: &[f64]) -> Result<Point> {
        if coords.len() != self.dim {
            return Err(Error::Structural(format!(
                "{} needs {} coordinates, got {}",
                self.name,
                self.dim,
                coords.len()
            )));
        }
        let mut p = [0.0; 3];
        p[..self.dim].copy_from_slice(coords);
        if !self.in_domain(&p) {
            return Err(Error::Domain(format!("{coords:?} is outside the chart of {}", self.name)));
        }
        Ok(p)
    }

    /// Like [`Self::point`], reading customary coordinates.
    pub fn standard_point(&self, coords: &[f64]) -> Result<Point> {
        let mut raw = [0.0; 3];
        if coords.len() != self.dim {
            return Err(Error::Structural(format!(
                "{} needs {} coordinates, got {}",
                self.name,
                self.dim,
                coords.len()
            )));
        }
        raw[..self.dim].copy_from_slice(coords);
        let p = (self.from_standard)(&raw)
            .ok_or_else(|| Error::Domain(format!("{coords:?} is not an element of {}", self.name)))?;
        self.point(&p[..self.dim])
    }

    /// `|det D(x ↦ map(x))|` at `x` by central differences.
    pub(crate) fn jacobian(&self, map: impl Fn(&Point) -> Point, x: &Point) -> f64 {
        let d = self.dim;
        let mut m = [[0.0f64; 3]; 3];
        for j in 0..d {
            let h = 1e-5 * x[j].abs().max(1.0);
            let (mut lo, mut hi) = (*x, *x);
            lo[j] -= h;
            hi[j] += h;
            let (a, b) = (map(&lo), map(&hi));
            for i in 0..d {
                m[i][j] = (b[i] - a[i]) / (2.0 * h);
            }
        }
        det(&m, d).abs()
    }

    /// Checks the group laws and left invariance of the density on a fixed
    /// grid of sample points.
    pub fn validate(&self) -> Result<()> {
        let samples = sample_points(self);
        let close =
            |a: &Point, b: &Point, tol: f64| (0..self.dim).all(|i| (a[i] - b[i]).abs() <= tol * (1.0 + b[i].abs()));
        for x in &samples {
            let e = &self.identity;
            if !close(&self.mul(e, x), x, 1e-10) || !close(&self.mul(x, e), x, 1e-10) {
                return Err(Error::Numeric(format!("{}: identity law fails at {x:?}", self.name)));
            }
            let xi = self.inv(x);
            if !close(&self.mul(x, &xi), e, 1e-10) || !close(&self.mul(&xi, x), e, 1e-10) {
                return Err(Error::Numeric(format!("{}: inverse law fails at {x:?}", self.name)));
            }
            for g in &samples {
                // ρ(gx) |det D L_g(x)| = ρ(x)
                let pulled = self.density(&self.mul(g, x)) * self.jacobian(|y| self.mul(g, y), x);
                let rho = self.density(x);
                if rho.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) || (pulled - rho).abs() > 1e-6 * rho {
                    return Err(Error::Numeric(format!(
                        "{}: density {} is not left invariant at g = {g:?}, x = {x:?}",
                        self.name, self.density_id
                    )));
                }
            }
        }
        Ok(())
    }
}

fn sample_points(chart: &LieGroupChart) -> Vec<Point> {
    const VALUES: [f64; 3] = [-0.7, 0.3, 1.1];
    let count = VALUES.len().pow(chart.dim as u32);
    (0..count)
        .map(|mut code| {
            let mut p = [0.0; 3];
            for c in p.iter_mut().take(chart.dim) {
                *c = VALUES[code % VALUES.len()];
                code /= VALUES.len();
            }
            p
        })
        .filter(|p| chart.in_domain(p))
        .collect()
}

fn det(m: &[[f64; 3]; 3], d: usize) -> f64 {
    match d {
        0 => 1.0,
        1 => m[0][0],
        2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
        _ => {
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        }
    }
}

#[cfg(test)]
mod tests;
