//! Midpoint quadrature and box-translate estimates of modular functions.

use std::sync::atomic::{AtomicBool, Ordering};

use rayon::prelude::*;
use serde::Serialize;

use super::{LieGroupChart, Point};
use crate::error::{Error, Result};

/// Cells per axis for modular function estimates.
pub const DEFAULT_RESOLUTION: usize = 64;

/// Recorded in every modular report.
pub const MODULAR_CONVENTION: &str = "l(S) = mu(g) l(Sg)";

/// Midpoint rule with `n` cells per axis over a box of dimension at most 3.
///
/// Slices along the first axis are summed in parallel and then added in
/// index order, so the result does not depend on the thread count.
pub fn midpoint_integral(bounds: &[(f64, f64)], n: usize, f: impl Fn(&Point) -> f64 + Sync) -> f64 {
    let dim = bounds.len();
    assert!((1..=3).contains(&dim) && n > 0, "box of dimension 1 to 3 with positive resolution");
    let step: Vec<f64> = bounds.iter().map(|(lo, hi)| (hi - lo) / n as f64).collect();
    let mid = |axis: usize, i: usize| bounds[axis].0 + (i as f64 + 0.5) * step[axis];
    let inner = n.pow(dim as u32 - 1);
    let slices: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut p = [0.0; 3];
            p[0] = mid(0, i);
            let mut sum = 0.0;
            for mut code in 0..inner {
                for (axis, c) in p.iter_mut().enumerate().take(dim).skip(1) {
                    *c = mid(axis, code % n);
                    code /= n;
                }
                sum += f(&p);
            }
            sum
        })
        .collect();
    slices.iter().sum::<f64>() * step.iter().product::<f64>()
}

/// `ℓ(Sg) = ∫_S ρ(xg) |det D R_g(x)| dx` over the reference box `S`.
fn translated_volume(chart: &LieGroupChart, g: &Point, n: usize) -> Result<f64> {
    let escaped = AtomicBool::new(false);
    let v = midpoint_integral(&chart.reference_box, n, |x| {
        let y = chart.mul(x, g);
        if !chart.in_domain(&y) {
            escaped.store(true, Ordering::Relaxed);
            return 0.0;
        }
        chart.density(&y) * chart.jacobian(|z| chart.mul(z, g), x)
    });
    if escaped.load(Ordering::Relaxed) {
        return Err(Error::Domain(format!("the translate Sg leaves the chart of {}; shrink S", chart.name)));
    }
    Ok(v)
}

/// Estimate of `μ_G(g) = ℓ(S)/ℓ(Sg)` with `n` cells per axis.
pub fn modular_function(chart: &LieGroupChart, g: &Point, n: usize) -> Result<f64> {
    if !chart.in_domain(g) {
        return Err(Error::Domain(format!("{g:?} is outside the chart of {}", chart.name)));
    }
    let base = midpoint_integral(&chart.reference_box, n, |x| chart.density(x));
    let moved = translated_volume(chart, g, n)?;
    let mu = base / moved;
    if !mu.is_finite() || mu <= 0.0 {
        return Err(Error::Numeric(format!("modular estimate {mu} for {} at {g:?}", chart.name)));
    }
    Ok(mu)
}

/// `{group, element, estimate, resolution, richardson_delta}`, where the delta
/// is the change of the estimate when the resolution is doubled.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ModularReport {
    pub convention: String,
    pub group: String,
    pub element: Vec<f64>,
    pub estimate: f64,
    pub resolution: usize,
    pub richardson_delta: f64,
}

impl ModularReport {
    pub fn compute(chart: &LieGroupChart, g: &Point, n: usize) -> Result<Self> {
        let estimate = modular_function(chart, g, n)?;
        let fine = modular_function(chart, g, 2 * n)?;
        Ok(Self {
            convention: MODULAR_CONVENTION.into(),
            group: chart.name.clone(),
            element: g[..chart.dim].to_vec(),
            estimate,
            resolution: n,
            richardson_delta: (fine - estimate).abs(),
        })
    }
}
