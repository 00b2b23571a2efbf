//! One function per subcommand. Each returns its JSON report and exit code.

use std::path::Path;
use std::sync::Arc;

use rand::Rng;
use serde_json::{json, Value};

use irslab_core::lie::{
    self, admits_invariant_measure, closedness_probe, continuity_probe, gaussian, BumpFunction, ModularReport, Point,
};
use irslab_core::measure::{discrete_mtp_verify, graph_mtp_verify, SubgroupMeasure, TestFunctions};
use irslab_core::schreier::enumerate_index_n;
use irslab_core::subgroup::enumerate_subgroups;
use irslab_core::FiniteGroup;

use crate::{exit, read_file, CliError, CliResult, RunConfig};

#[derive(Debug)]
pub struct Outcome {
    pub report: Value,
    pub code: i32,
}

impl Outcome {
    fn ok(report: Value) -> Self {
        Self { report, code: exit::OK }
    }

    fn check(report: Value, passed: bool) -> Self {
        Self { report, code: if passed { exit::OK } else { exit::VIOLATION } }
    }
}

pub fn load_group(path: &Path) -> CliResult<Arc<FiniteGroup>> {
    Ok(Arc::new(FiniteGroup::from_json(&read_file(path)?)?))
}

pub fn subgroups(cfg: &RunConfig, group: &Path) -> CliResult<Outcome> {
    let g = load_group(group)?;
    let lattice = enumerate_subgroups(&g, cfg.max_order)?;
    Ok(Outcome::ok(serde_json::to_value(lattice.to_report(&g))?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MtpMode {
    /// Every single-coset indicator on `Cos_G`.
    Discrete,
    /// Balls of the given radius in doubly rooted Schreier graphs.
    Graph,
}

pub fn mtp_verify(measure: &Path, group: Option<&Path>, mode: MtpMode, radius: usize) -> CliResult<Outcome> {
    let text = read_file(measure)?;
    let g = group.map(load_group).transpose()?;
    let lambda = SubgroupMeasure::from_json(&text, g)?;
    let report = match mode {
        MtpMode::Discrete => {
            let r = discrete_mtp_verify(&lambda, &TestFunctions::AllIndicators)?;
            let passed = r.passed();
            let report = json!({
                "check": "discrete-mtp",
                "carrier": lambda.carrier().name(),
                "atoms": lambda.atoms().len(),
                "passed": passed,
                "checked": r.checked,
                "violations": r.violations,
            });
            return Ok(Outcome::check(report, passed));
        }
        MtpMode::Graph => graph_mtp_verify(&lambda, radius)?,
    };
    let passed = report.violations.is_empty();
    let mut value = serde_json::to_value(&report)?;
    value["check"] = json!("graph-mtp");
    value["passed"] = json!(passed);
    Ok(Outcome::check(value, passed))
}

/// Tables of index exactly `index` and the counts for every index up to it.
pub fn free_enumerate(cfg: &RunConfig, rank: usize, index: usize, dot: bool) -> CliResult<Outcome> {
    if rank == 0 || index == 0 {
        return Err(CliError::input("rank and index must be positive"));
    }
    let mut counts = Vec::with_capacity(index);
    let mut last = Vec::new();
    for n in 1..=index {
        last = enumerate_index_n(rank, n, cfg.max_index)?;
        counts.push(last.len());
    }
    let tables: Vec<Value> = last
        .iter()
        .map(|t| {
            let mut v = serde_json::to_value(t.to_file()).expect("tables serialize");
            if dot {
                v["dot"] = json!(t.to_dot());
            }
            v
        })
        .collect();
    Ok(Outcome::ok(json!({
        "rank": rank,
        "index": index,
        "count": last.len(),
        "countsByIndex": counts,
        "tables": tables,
    })))
}

/// Seeded sample points in `[-r, r]^dim`.
pub fn sample_points(cfg: &RunConfig, stream: u64, dim: usize, count: usize, r: f64) -> Vec<Point> {
    let mut rng = cfg.rng(stream);
    (0..count)
        .map(|_| {
            let mut p = [0.0; 3];
            for c in p.iter_mut().take(dim) {
                *c = rng.random_range(-r..=r);
            }
            p
        })
        .collect()
}

/// `μ_G` at the given element (standard coordinates) or at seeded samples.
pub fn lie_modular(cfg: &RunConfig, group: &str, element: Option<&[f64]>, samples: usize) -> CliResult<Outcome> {
    let chart = lie::chart(group)?;
    let points = match element {
        Some(coords) => vec![chart.standard_point(coords)?],
        None => sample_points(cfg, 6, chart.dim, samples, 1.0),
    };
    let mut reports = Vec::with_capacity(points.len());
    for p in &points {
        reports.push(ModularReport::compute(&chart, p, cfg.resolution)?);
    }
    let deviation = reports.iter().map(|r| (r.estimate - 1.0).abs()).fold(0.0f64, f64::max);
    let tolerance = cfg.tolerance("unimodular");
    Ok(Outcome::ok(json!({
        "group": chart.name,
        "convention": lie::MODULAR_CONVENTION,
        "declaredUnimodular": chart.unimodular,
        "resolution": cfg.resolution,
        "estimates": reports,
        "maxDeviationFromOne": deviation,
        "tolerance": tolerance,
        "withinTolerance": deviation <= tolerance,
    })))
}

pub fn lie_admits(cfg: &RunConfig, group: &str, subgroup: &str) -> CliResult<Outcome> {
    let h = lie::subgroup(group, subgroup)?;
    let r = admits_invariant_measure(&h, cfg.resolution, cfg.tolerance("admits"))?;
    Ok(Outcome::ok(serde_json::to_value(r)?))
}

fn find_family(name: &str) -> CliResult<lie::ConvergentFamily> {
    Ok(lie::family(&name.to_ascii_lowercase())?)
}

pub fn lie_continuity(cfg: &RunConfig, family: &str) -> CliResult<Outcome> {
    let fam = find_family(family)?;
    let r = continuity_probe(&fam, &BumpFunction::default(), gaussian, cfg.tolerance("continuity"))?;
    Ok(Outcome::ok(serde_json::to_value(r)?))
}

pub fn lie_closedness(cfg: &RunConfig, family: &str) -> CliResult<Outcome> {
    let fam = find_family(family)?;
    let r = closedness_probe(&fam, cfg.resolution, cfg.tolerance("admits"))?;
    Ok(Outcome::ok(serde_json::to_value(r)?))
}
