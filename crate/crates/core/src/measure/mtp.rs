//! Exact mass transport checks.
//!
//! Single-coset indicators span every finitely supported `f` by linearity,
//! and so do indicators of doubly-rooted ball classes once the radius
//! separates the graphs in play; testing those bases is therefore complete.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use super::coset::{build_nu, is_conjugation_invariant, rho_pushforward};
use super::{format_weight, Carrier, CosetMeasure, MassTransportFunction, SubgroupMeasure, Weight};
use crate::error::{Error, Result};
use crate::schreier::{ball_doubly_rooted, CanonicalForm, DoublyRootedLabeledGraph};

/// Bound on the number of cosets a verification may enumerate.
pub const MAX_COSET_UNIVERSE: usize = 5_000_000;

/// The family of test functions `f`.
#[derive(Clone, Debug)]
pub enum TestFunctions {
    /// Indicators of every single coset of `supp(λ)` and of its `ρ`-images.
    AllIndicators,
    Explicit(Vec<MassTransportFunction>),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub f: Value,
    pub lhs: String,
    pub rhs: String,
}

/// `{"checked": n, "violations": [{"f", "lhs", "rhs"}]}`
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MtpReport {
    pub checked: usize,
    pub violations: Vec<Violation>,
}

impl MtpReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

fn coset_universe_size(lambda: &SubgroupMeasure) -> usize {
    lambda
        .atoms()
        .keys()
        .map(|h| match (lambda.carrier(), h) {
            (Carrier::Finite(g), super::SubgroupKey::Finite(h)) => h.index_in(g),
            (_, super::SubgroupKey::Free(t)) => t.size(),
            _ => unreachable!("validated"),
        })
        .fold(0usize, usize::saturating_add)
}

fn violation(f: Value, lhs: &Weight, rhs: &Weight) -> Violation {
    Violation { f, lhs: format_weight(lhs), rhs: format_weight(rhs) }
}

fn integrate(f: &MassTransportFunction, nu: &CosetMeasure) -> Weight {
    f.support().map(|(c, v)| v * nu.weight(c)).fold(Weight::zero(), |a, b| a + b)
}

/// Compares `Σ_H λ(H) Σ_{Hg} f(Hg)` with `Σ_H λ(H) Σ_{Hg} f(g⁻¹H)` exactly for
/// each test function. Both sides are integrals of `f`, against `ν` and
/// `ρ_*ν` respectively; conjugates outside `supp(λ)` carry weight zero.
pub fn discrete_mtp_verify(lambda: &SubgroupMeasure, fs: &TestFunctions) -> Result<MtpReport> {
    let universe = coset_universe_size(lambda);
    if universe > MAX_COSET_UNIVERSE {
        return Err(Error::Resource(format!("{universe} cosets exceed the bound {MAX_COSET_UNIVERSE}")));
    }
    let nu = build_nu(lambda);
    let nu_rho = rho_pushforward(&nu);
    match fs {
        TestFunctions::AllIndicators => {
            let keys: BTreeSet<_> = nu.atoms().keys().chain(nu_rho.atoms().keys()).collect();
            let violations = keys
                .iter()
                .filter_map(|c| {
                    let (lhs, rhs) = (nu.weight(c), nu_rho.weight(c));
                    (lhs != rhs).then(|| violation(json!({"indicator": c.to_value()}), &lhs, &rhs))
                })
                .collect();
            Ok(MtpReport { checked: keys.len(), violations })
        }
        TestFunctions::Explicit(fs) => {
            let violations: Vec<Option<Violation>> = fs
                .par_iter()
                .map(|f| {
                    let (lhs, rhs) = (integrate(f, &nu), integrate(f, &nu_rho));
                    (lhs != rhs).then(|| violation(json!(f.name), &lhs, &rhs))
                })
                .collect();
            Ok(MtpReport { checked: fs.len(), violations: violations.into_iter().flatten().collect() })
        }
    }
}

/// Graph mass transport report with the direct invariance cross-check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GraphMtpReport {
    pub radius: usize,
    pub checked: usize,
    pub violations: Vec<Violation>,
    /// Direct `F(S)`-invariance of the measure on rooted graphs.
    pub invariant: bool,
    /// Whether "no violations" agreed with `invariant`.
    pub consistent: bool,
}

/// Tests `Σ_w f(Γ,v,w) dλ = Σ_w f(Γ,w,v) dλ` for the indicator of every
/// doubly-rooted `r`-ball class realized in `supp(λ)`, on either side.
pub fn graph_mtp_verify(lambda: &SubgroupMeasure, radius: usize) -> Result<GraphMtpReport> {
    if !matches!(lambda.carrier(), Carrier::Free { .. }) {
        return Err(Error::Precondition("graph mass transport needs a measure on rooted graphs".into()));
    }
    let universe = coset_universe_size(lambda);
    if universe > MAX_COSET_UNIVERSE {
        return Err(Error::Resource(format!("{universe} vertices exceed the bound {MAX_COSET_UNIVERSE}")));
    }
    let per_atom: Vec<Vec<(CanonicalForm, CanonicalForm, Weight)>> = lambda
        .atoms()
        .iter()
        .collect::<Vec<_>>()
        .par_iter()
        .map(|(h, w)| {
            let super::SubgroupKey::Free(g) = h else { unreachable!("free carrier") };
            (0..g.size())
                .map(|u| {
                    let out = DoublyRootedLabeledGraph { graph: g.clone(), second: u };
                    let back = DoublyRootedLabeledGraph { graph: g.with_root(u), second: g.root() };
                    (ball_doubly_rooted(&out, radius), ball_doubly_rooted(&back, radius), (*w).clone())
                })
                .collect()
        })
        .collect();
    let mut lhs: BTreeMap<CanonicalForm, Weight> = BTreeMap::new();
    let mut rhs: BTreeMap<CanonicalForm, Weight> = BTreeMap::new();
    for (a, b, w) in per_atom.into_iter().flatten() {
        *lhs.entry(a).or_insert_with(Weight::zero) += &w;
        *rhs.entry(b).or_insert_with(Weight::zero) += w;
    }
    let keys: BTreeSet<&CanonicalForm> = lhs.keys().chain(rhs.keys()).collect();
    let zero = Weight::zero();
    let violations: Vec<Violation> = keys
        .iter()
        .filter_map(|k| {
            let (l, r) = (lhs.get(*k).unwrap_or(&zero), rhs.get(*k).unwrap_or(&zero));
            (l != r).then(|| violation(json!({"ball": k.to_hex()}), l, r))
        })
        .collect();
    let invariant = is_conjugation_invariant(lambda);
    Ok(GraphMtpReport {
        radius,
        checked: keys.len(),
        consistent: violations.is_empty() == invariant,
        violations,
        invariant,
    })
}
