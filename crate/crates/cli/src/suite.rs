//! The verification suite: one section per acceptance area, each a JSON
//! report with named checks. Sections draw randomness only from the
//! [`RunConfig`] seed, so reruns are byte-identical.

use std::path::Path;
use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use irslab_core::lie::{
    self, admits_invariant_measure, closedness_probe, continuity_probe, gaussian, modular_function, BumpFunction,
    HaarHandle, Point,
};
use irslab_core::measure::{
    build_nu, check_left_invariance, check_rho_invariance, check_right_invariance, counimodularity_check,
    discrete_mtp_verify, disintegration_uniqueness_check, graph_mtp_verify, is_conjugation_invariant, pushforward_left,
    pushforward_right, same_null_atoms, Carrier, DisintegrationInstance, SubgroupKey, SubgroupMeasure, TestFunctions,
    Weight,
};
use irslab_core::orbit::{build_fiber_measures, build_orbit_relation, check_relation_invariance};
use irslab_core::schreier::enumerate_index_n;
use irslab_core::subgroup::enumerate_subgroups;
use irslab_core::{FiniteGroup, GroupAction, RootedLabeledGraph};

use crate::commands::sample_points;
use crate::{to_pretty, CliError, CliResult, RunConfig};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Section {
    pub id: String,
    pub title: String,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl Section {
    fn new(id: &str, title: &str, checks: Vec<Check>) -> Self {
        let passed = !checks.is_empty() && checks.iter().all(|c| c.passed);
        Self { id: id.into(), title: title.into(), passed, checks }
    }

    pub fn to_value(&self) -> Value {
        serde_json::to_value(self).expect("sections serialize")
    }
}

fn check(name: impl Into<String>, passed: bool, detail: Value) -> Check {
    Check { name: name.into(), passed, detail }
}

/// Section ids in suite order, with titles.
pub const SECTIONS: [(&str, &str); 8] = [
    ("discrete-mtp", "indicator mass transport agrees with conjugation invariance on finite groups"),
    ("graph-mtp", "ball mass transport agrees with root-move invariance on Schreier graphs of F2"),
    ("coset-measure", "the coset measure of an invariant measure is left and rho invariant with the right marginals"),
    ("counimodularity", "every invariant measure on a small finite group has a bi-invariant coset measure"),
    ("orbit-relation", "counting fiber measures of transitive actions are invariant"),
    ("lie-modular", "modular functions and the invariant-measure criterion on the Lie catalog"),
    ("haar-probes", "normalized Haar measures, continuity and closedness along families"),
    ("disintegration", "factor measures of a fixed disintegration are unique"),
];

pub fn title(id: &str) -> Option<&'static str> {
    SECTIONS.iter().find(|(i, _)| *i == id).map(|(_, t)| *t)
}

pub fn run_section(cfg: &RunConfig, id: &str) -> CliResult<Section> {
    let checks = match id {
        "discrete-mtp" => discrete_mtp(cfg)?,
        "graph-mtp" => graph_mtp(cfg)?,
        "coset-measure" => coset_measure(cfg)?,
        "counimodularity" => counimodularity(cfg)?,
        "orbit-relation" => orbit_relation(cfg)?,
        "lie-modular" => lie_modular(cfg)?,
        "haar-probes" => haar_probes(cfg)?,
        "disintegration" => disintegration(cfg)?,
        other => {
            let known: Vec<&str> = SECTIONS.iter().map(|s| s.0).collect();
            return Err(CliError::input(format!("unknown section {other:?}; known: {known:?}")));
        }
    };
    Ok(Section::new(id, title(id).expect("known id"), checks))
}

/// Runs the given sections (all when empty) and writes `<id>.json` plus
/// `config.json` into `out`.
pub fn run_suite(cfg: &RunConfig, only: &[String], out: &Path) -> CliResult<Vec<Section>> {
    let ids: Vec<&str> = if only.is_empty() {
        SECTIONS.iter().map(|s| s.0).collect()
    } else {
        only.iter().map(String::as_str).collect()
    };
    std::fs::create_dir_all(out).map_err(|e| CliError::input(format!("cannot create {}: {e}", out.display())))?;
    let write = |name: &str, v: &Value| {
        let path = out.join(name);
        std::fs::write(&path, to_pretty(v))
            .map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display())))
    };
    write("config.json", &serde_json::to_value(cfg)?)?;
    let mut sections = Vec::with_capacity(ids.len());
    for id in ids {
        let s = run_section(cfg, id)?;
        write(&format!("{id}.json"), &s.to_value())?;
        sections.push(s);
    }
    Ok(sections)
}

fn q(p: i64, d: i64) -> Weight {
    Weight::new(p.into(), d.into())
}

fn random_weight(rng: &mut ChaCha8Rng) -> Weight {
    q(rng.random_range(1..8), rng.random_range(1..6))
}

fn keys(g: &Arc<FiniteGroup>, cfg: &RunConfig) -> CliResult<(Vec<SubgroupKey>, Vec<Vec<usize>>)> {
    let lat = enumerate_subgroups(g, cfg.max_order)?;
    let keys = lat.subgroups().iter().cloned().map(SubgroupKey::Finite).collect();
    Ok((keys, lat.classes().to_vec()))
}

/// Counting measures of every nonempty set of subgroups.
fn all_subset_measures(g: &Arc<FiniteGroup>, keys: &[SubgroupKey]) -> Vec<SubgroupMeasure> {
    let carrier = Carrier::Finite(g.clone());
    (1u64..1 << keys.len())
        .map(|mask| {
            let chosen = (0..keys.len()).filter(|i| mask >> i & 1 == 1).map(|i| keys[i].clone());
            SubgroupMeasure::counting(carrier.clone(), chosen).expect("nonempty")
        })
        .collect()
}

/// Random positive combinations of class-uniform measures; with
/// `perturb`, one atom is moved off its class weight.
fn random_class_measures(
    g: &Arc<FiniteGroup>,
    keys: &[SubgroupKey],
    classes: &[Vec<usize>],
    count: usize,
    perturb: bool,
    rng: &mut ChaCha8Rng,
) -> Vec<SubgroupMeasure> {
    let carrier = Carrier::Finite(g.clone());
    let split: Vec<usize> = (0..classes.len()).filter(|&c| classes[c].len() > 1).collect();
    (0..count)
        .map(|_| {
            let mut weights: Vec<Weight> =
                classes.iter().map(|_| if rng.random_bool(0.6) { random_weight(rng) } else { q(0, 1) }).collect();
            if weights.iter().all(|w| *w == q(0, 1)) {
                weights[rng.random_range(0..classes.len())] = random_weight(rng);
            }
            let mut atoms: Vec<(SubgroupKey, Weight)> = classes
                .iter()
                .zip(&weights)
                .flat_map(|(class, w)| class.iter().map(move |&i| (keys[i].clone(), w.clone())))
                .collect();
            if perturb && !split.is_empty() {
                let class = &classes[split[rng.random_range(0..split.len())]];
                atoms.push((keys[class[rng.random_range(0..class.len())]].clone(), random_weight(rng)));
            }
            SubgroupMeasure::new(carrier.clone(), atoms).expect("positive atoms")
        })
        .collect()
}

/// The exact finite test set: every subset counting measure, plus random
/// invariant and perturbed class combinations.
pub fn finite_test_set(
    cfg: &RunConfig,
    g: &Arc<FiniteGroup>,
    random: usize,
    stream: u64,
) -> CliResult<Vec<SubgroupMeasure>> {
    let (keys, classes) = keys(g, cfg)?;
    let mut rng = cfg.rng(stream);
    let mut out = all_subset_measures(g, &keys);
    out.extend(random_class_measures(g, &keys, &classes, random, false, &mut rng));
    out.extend(random_class_measures(g, &keys, &classes, random / 2, true, &mut rng));
    Ok(out)
}

fn test_groups() -> [(Arc<FiniteGroup>, usize, u64); 3] {
    [
        (Arc::new(FiniteGroup::symmetric(3)), 50, 1),
        (Arc::new(FiniteGroup::cyclic(4)), 10, 2),
        (Arc::new(FiniteGroup::dihedral(4)), 10, 3),
    ]
}

fn discrete_mtp(cfg: &RunConfig) -> CliResult<Vec<Check>> {
    let mut checks = Vec::new();
    for (g, random, stream) in test_groups() {
        let set = finite_test_set(cfg, &g, random, stream)?;
        let mut counts = [0usize; 2];
        let mut disagreements = Vec::new();
        for lambda in &set {
            let invariant = is_conjugation_invariant(lambda);
            let r = discrete_mtp_verify(lambda, &TestFunctions::AllIndicators)?;
            counts[usize::from(invariant)] += 1;
            if r.passed() != invariant {
                disagreements.push(lambda.to_value());
            }
        }
        let enough = g.name() != "S3" || (counts[0] >= 50 && counts[1] >= 50);
        checks.push(check(
            g.name(),
            enough && disagreements.is_empty(),
            json!({"invariant": counts[1], "nonInvariant": counts[0], "disagreements": disagreements}),
        ));
    }
    Ok(checks)
}

/// Subgroup counts of index `n` in `F_r` by the recursion
/// `a_n = n (n!)^{r-1} - Σ_{k<n} ((n-k)!)^{r-1} a_k`.
pub fn hall_counts(rank: u32, up_to: usize) -> Vec<u128> {
    let fact = |n: usize| (1..=n as u128).product::<u128>();
    let mut a: Vec<u128> = Vec::with_capacity(up_to);
    for n in 1..=up_to {
        let total = n as u128 * fact(n).pow(rank - 1);
        let lower: u128 = (1..n).map(|k| fact(n - k).pow(rank - 1) * a[k - 1]).sum();
        a.push(total - lower);
    }
    a
}

fn root_orbit(g: &RootedLabeledGraph, w: &Weight) -> Vec<(SubgroupKey, Weight)> {
    (0..g.size()).map(|v| (SubgroupKey::free(&g.with_root(v)).expect("connected"), w.clone())).collect()
}

/// Diracs and root orbits of every graph of index at most 3, and seeded
/// random mixtures of orbits and single roots.
pub fn graph_test_set(cfg: &RunConfig, random: usize) -> CliResult<Vec<SubgroupMeasure>> {
    let carrier = Carrier::Free { rank: 2 };
    let mut graphs = Vec::new();
    for n in 1..=3 {
        graphs.extend(enumerate_index_n(2, n, cfg.max_index)?);
    }
    let one = q(1, 1);
    let mut out = Vec::new();
    for g in &graphs {
        out.push(SubgroupMeasure::dirac(carrier.clone(), SubgroupKey::Free(g.clone()))?);
        out.push(SubgroupMeasure::new(carrier.clone(), root_orbit(g, &one))?);
    }
    let mut rng = cfg.rng(4);
    for _ in 0..random {
        let mut atoms = Vec::new();
        for _ in 0..rng.random_range(1..4) {
            let g = &graphs[rng.random_range(0..graphs.len())];
            let w = random_weight(&mut rng);
            if rng.random_bool(0.5) {
                atoms.extend(root_orbit(g, &w));
            } else {
                let v = rng.random_range(0..g.size());
                atoms.push((SubgroupKey::free(&g.with_root(v))?, w));
            }
        }
        out.push(SubgroupMeasure::new(carrier.clone(), atoms)?);
    }
    Ok(out)
}

fn graph_mtp(cfg: &RunConfig) -> CliResult<Vec<Check>> {
    let hall = hall_counts(2, 3);
    let mut counts = Vec::new();
    for n in 1..=3 {
        counts.push(enumerate_index_n(2, n, cfg.max_index)?.len() as u128);
    }
    let mut checks = vec![check("index-counts", counts == hall, json!({"enumerated": counts, "recursion": hall}))];

    let set = graph_test_set(cfg, 150)?;
    let mut tally = [0usize; 2];
    let mut disagreements = Vec::new();
    for lambda in &set {
        let invariant = is_conjugation_invariant(lambda);
        let r = graph_mtp_verify(lambda, 2)?;
        tally[usize::from(invariant)] += 1;
        if r.violations.is_empty() != invariant || !r.consistent {
            disagreements.push(lambda.to_value());
        }
    }
    checks.push(check(
        "radius-2",
        set.len() >= 100 && tally[0] > 0 && tally[1] > 0 && disagreements.is_empty(),
        json!({"measures": set.len(), "invariant": tally[1], "nonInvariant": tally[0], "disagreements": disagreements}),
    ));
    Ok(checks)
}

fn invariant_test_set(cfg: &RunConfig) -> CliResult<Vec<(String, Vec<SubgroupMeasure>)>> {
    let mut out = Vec::new();
    for (g, random, stream) in test_groups() {
        let set = finite_test_set(cfg, &g, random, stream)?;
        out.push((g.name().to_string(), set.into_iter().filter(is_conjugation_invariant).collect()));
    }
    Ok(out)
}

fn coset_measure(cfg: &RunConfig) -> CliResult<Vec<Check>> {
    let mut checks = Vec::new();
    for (name, set) in invariant_test_set(cfg)? {
        let mut failures = Vec::new();
        for lambda in &set {
            let nu = build_nu(lambda);
            let ok = check_left_invariance(&nu)
                && check_rho_invariance(&nu)
                && same_null_atoms(&pushforward_right(&nu)?, lambda)
                && same_null_atoms(&pushforward_left(&nu)?, lambda);
            if !ok {
                failures.push(lambda.to_value());
            }
        }
        checks.push(check(
            name,
            !set.is_empty() && failures.is_empty(),
            json!({"measures": set.len(), "failures": failures}),
        ));
    }
    Ok(checks)
}

/// Finite groups of order at most 24 used by the suite.
pub fn small_groups() -> Vec<Arc<FiniteGroup>> {
    let product = FiniteGroup::direct_product;
    let mut gs: Vec<FiniteGroup> = [1, 2, 3, 4, 5, 6, 7, 8, 12].into_iter().map(FiniteGroup::cyclic).collect();
    gs.extend([
        FiniteGroup::klein_four(),
        FiniteGroup::symmetric(3),
        FiniteGroup::dihedral(4),
        FiniteGroup::quaternion(),
        FiniteGroup::dihedral(5),
        FiniteGroup::dihedral(6),
        FiniteGroup::alternating(4),
        product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(4)),
        product(&FiniteGroup::klein_four(), &FiniteGroup::cyclic(2)),
        product(&FiniteGroup::cyclic(3), &FiniteGroup::cyclic(3)),
        product(&FiniteGroup::symmetric(3), &FiniteGroup::cyclic(2)),
        product(&FiniteGroup::quaternion(), &FiniteGroup::cyclic(3)),
        product(&FiniteGroup::alternating(4), &FiniteGroup::cyclic(2)),
        FiniteGroup::dihedral(12),
        FiniteGroup::symmetric(4),
    ]);
    gs.into_iter().map(Arc::new).collect()
}

fn counimodularity(cfg: &RunConfig) -> CliResult<Vec<Check>> {
    let mut rng = cfg.rng(5);
    let mut checks = Vec::new();
    for g in small_groups() {
        let (keys, classes) = keys(&g, cfg)?;
        let carrier = Carrier::Finite(g.clone());
        let mut set: Vec<SubgroupMeasure> = classes
            .iter()
            .map(|c| SubgroupMeasure::counting(carrier.clone(), c.iter().map(|&i| keys[i].clone())))
            .collect::<Result<_, _>>()?;
        set.extend(random_class_measures(&g, &keys, &classes, 3, false, &mut rng));
        let mut failures = 0usize;
        for lambda in &set {
            let (ok, witness) = counimodularity_check(lambda)?;
            if !(ok && check_left_invariance(&witness) && check_right_invariance(&witness)) {
                failures += 1;
            }
        }
        checks.push(check(
            g.name(),
            g.order() <= 24 && failures == 0,
            json!({"order": g.order(), "measures": set.len(), "failures": failures}),
        ));
    }
    Ok(checks)
}

fn orbit_relation(cfg: &RunConfig) -> CliResult<Vec<Check>> {
    let mut rng = cfg.rng(6);
    let mut checks = Vec::new();
    for g in [FiniteGroup::symmetric(3), FiniteGroup::cyclic(4)].map(Arc::new) {
        let lat = enumerate_subgroups(&g, cfg.max_order)?;
        let mut actions = 0usize;
        let mut failures = Vec::new();
        for (i, k) in lat.subgroups().iter().enumerate() {
            let action = GroupAction::on_left_cosets(g.clone(), k);
            let n = action.set_size();
            if n > 6 {
                continue;
            }
            actions += 1;
            let mut zetas = vec![vec![q(1, n as i64); n]];
            for _ in 0..3 {
                zetas.push((0..n).map(|_| q(rng.random_range(0..5), rng.random_range(1..4))).collect());
            }
            let relation = build_orbit_relation(&action);
            let fibers_ok = relation.len() == n * n && relation.is_equivalence();
            for zeta in &zetas {
                let fam = build_fiber_measures(&action, zeta)?;
                if !fibers_ok || !check_relation_invariance(&fam) {
                    failures
                        .push(json!({"subgroup": i, "zeta": zeta.iter().map(|w| w.to_string()).collect::<Vec<_>>()}));
                }
            }
        }
        checks.push(check(g.name(), failures.is_empty(), json!({"transitiveActions": actions, "failures": failures})));
    }
    Ok(checks)
}

fn lie_modular(cfg: &RunConfig) -> CliResult<Vec<Check>> {
    let n = cfg.resolution;
    let admits_tol = cfg.tolerance("admits");
    let mut checks = Vec::new();
    for (group, sub, expected) in [("sol", "n", true), ("aff", "translations", true), ("aff", "scalings", false)] {
        let r = admits_invariant_measure(&lie::subgroup(group, sub)?, n, admits_tol)?;
        let margin_ok = expected || r.margin > 0.5;
        checks.push(check(
            format!("admits {group}/{sub}"),
            r.admits == expected && margin_ok,
            serde_json::to_value(&r)?,
        ));
    }

    let sol = lie::chart("sol")?;
    let tol = cfg.tolerance("unimodular");
    let points = sample_points(cfg, 7, 3, 10, 2.0);
    let mut estimates = Vec::with_capacity(points.len());
    for p in &points {
        estimates.push(modular_function(&sol, p, n)?);
    }
    let deviation = estimates.iter().map(|m| (m - 1.0).abs()).fold(0.0f64, f64::max);
    checks.push(check(
        "sol unimodular",
        deviation <= tol,
        json!({"points": points, "estimates": estimates, "maxDeviation": deviation, "tolerance": tol}),
    ));

    let aff = lie::chart("aff")?;
    let tol = cfg.tolerance("cocycle");
    let a = sample_points(cfg, 8, 2, 20, 1.0);
    let b = sample_points(cfg, 9, 2, 20, 1.0);
    let mu = |x: &Point| modular_function(&aff, x, n);
    let (mut cocycle, mut inverse) = (0.0f64, 0.0f64);
    for (x, y) in a.iter().zip(&b) {
        let (mx, my) = (mu(x)?, mu(y)?);
        cocycle = cocycle.max((mu(&aff.mul(x, y))? - mx * my).abs());
        inverse = inverse.max((mx * mu(&aff.inv(x))? - 1.0).abs());
    }
    let g = aff.standard_point(&[2.0, 0.0])?;
    let at_two = mu(&g)?;
    checks.push(check(
        "aff cocycle",
        cocycle <= tol && inverse <= tol && (at_two - 1.0).abs() > 0.5,
        json!({"pairs": a.len(), "cocycleDeviation": cocycle, "inverseDeviation": inverse, "tolerance": tol, "muAtTwo": at_two}),
    ));
    Ok(checks)
}

fn haar_probes(cfg: &RunConfig) -> CliResult<Vec<Check>> {
    let f = BumpFunction::default();
    let tol = cfg.tolerance("haar");
    let mut worst = 0.0f64;
    let mut count = 0usize;
    for g in lie::catalog()? {
        for h in lie::subgroups(&g) {
            let handle = HaarHandle::new(&h, &f, None)?;
            worst = worst.max((handle.integrate(|x| f.eval(&g, x)) - 1.0).abs());
            count += 1;
        }
    }
    let mut checks = vec![check(
        "normalization",
        worst <= tol,
        json!({"subgroups": count, "maxDeviation": worst, "tolerance": tol}),
    )];

    let fam = lie::family("lattice-in-r")?;
    let r = continuity_probe(&fam, &f, gaussian, cfg.tolerance("continuity"))?;
    checks.push(check(
        "continuity lattice-in-r",
        r.converged,
        json!({"finalIndex": r.indices.last(), "finalDifference": r.final_difference, "limit": r.limit, "tolerance": r.tolerance}),
    ));

    for fam in lie::families()? {
        let r = closedness_probe(&fam, cfg.resolution, cfg.tolerance("admits"))?;
        checks.push(check(format!("closedness {}", fam.name), r.closed, serde_json::to_value(&r)?));
    }
    Ok(checks)
}

/// A random finite instance with `|X| ≤ 20`, every fiber of positive mass.
pub fn random_instance(rng: &mut ChaCha8Rng) -> DisintegrationInstance {
    let y = rng.random_range(1..=6);
    let x = rng.random_range(y..=20);
    let mut p: Vec<usize> = (0..y).chain((y..x).map(|_| rng.random_range(0..y))).collect();
    // shuffle so the guaranteed fiber points are not always first
    for i in (1..p.len()).rev() {
        p.swap(i, rng.random_range(0..=i));
    }
    let mut eta: Vec<Weight> = (0..x).map(|_| q(rng.random_range(0..4), rng.random_range(1..4))).collect();
    for target in 0..y {
        let first = p.iter().position(|&v| v == target).expect("every fiber is hit");
        if eta.iter().zip(&p).all(|(e, &v)| v != target || *e == q(0, 1)) {
            eta[first] = q(1, 1);
        }
    }
    let mu: Vec<Weight> = (0..y).map(|_| q(rng.random_range(0..4), rng.random_range(1..3))).collect();
    let mu_prime = if rng.random_bool(0.5) {
        mu.clone()
    } else {
        (0..y).map(|_| q(rng.random_range(0..4), rng.random_range(1..3))).collect()
    };
    DisintegrationInstance { y_size: y, p, eta, mu, mu_prime }
}

fn disintegration(cfg: &RunConfig) -> CliResult<Vec<Check>> {
    let mut rng = cfg.rng(10);
    let mut failures = 0usize;
    let mut distinct = 0usize;
    for _ in 0..1000 {
        let inst = random_instance(&mut rng);
        if !disintegration_uniqueness_check(&inst)? {
            failures += 1;
        }
        distinct += usize::from(inst.mu != inst.mu_prime);
    }
    Ok(vec![check(
        "random instances",
        failures == 0,
        json!({"instances": 1000, "distinctFactors": distinct, "failures": failures}),
    )])
}
