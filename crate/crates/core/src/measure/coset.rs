//! The coset measure `ν = Σ λ(H) ν_H`, its symmetries and pushforwards.

use std::collections::BTreeMap;

use num_traits::Zero;

use super::{Actor, Carrier, CosetKey, CosetMeasure, SubgroupKey, SubgroupMeasure, Weight};
use crate::error::{structural, Error, Result};
use crate::subgroup::{conjugate_subgroup, left_action_on_cosets, rho, right_cosets, right_translate, CosetId};
use crate::word::Word;

pub(crate) fn cosets_of(carrier: &Carrier, h: &SubgroupKey) -> Vec<CosetKey> {
    match (carrier, h) {
        (Carrier::Finite(g), SubgroupKey::Finite(h)) => right_cosets(g, h).into_iter().map(CosetKey::Finite).collect(),
        (_, SubgroupKey::Free(t)) => (0..t.size()).map(|vertex| CosetKey::Free { table: t.clone(), vertex }).collect(),
        _ => unreachable!("keys are validated against the carrier"),
    }
}

/// `kHk⁻¹`
pub(crate) fn conjugate(carrier: &Carrier, k: Actor, h: &SubgroupKey) -> SubgroupKey {
    match (carrier, k, h) {
        (Carrier::Finite(g), Actor::Element(k), SubgroupKey::Finite(h)) => {
            SubgroupKey::Finite(conjugate_subgroup(g, h, k))
        }
        (Carrier::Free { .. }, Actor::Letter(l), SubgroupKey::Free(t)) => {
            SubgroupKey::Free(t.root_move(&Word::letter(l)).canonical().expect("connected"))
        }
        _ => unreachable!("actors match the carrier"),
    }
}

/// `ρ(Hg) = g⁻¹H`. In a table, `g⁻¹Hg` is the table rerooted at `Hg`, and
/// `g⁻¹H = (g⁻¹Hg)g⁻¹` is the old root seen from there.
pub(crate) fn coset_rho(carrier: &Carrier, c: &CosetKey) -> CosetKey {
    match (carrier, c) {
        (Carrier::Finite(g), CosetKey::Finite(c)) => CosetKey::Finite(rho(g, c).expect("right coset")),
        (_, CosetKey::Free { table, vertex }) => {
            let (t, map) = table.with_root(*vertex).canonical_with_map().expect("connected");
            CosetKey::Free { table: t, vertex: map[table.root()] }
        }
        _ => unreachable!("keys are validated against the carrier"),
    }
}

/// `k·Hg = (kHk⁻¹)(kg)`. For a table the vertex is unchanged and the root
/// moves to `Hk⁻¹`, since `(kHk⁻¹)x ↦ Hk⁻¹x` identifies the two coset spaces.
pub(crate) fn coset_left(carrier: &Carrier, k: Actor, c: &CosetKey) -> CosetKey {
    match (carrier, k, c) {
        (Carrier::Finite(g), Actor::Element(k), CosetKey::Finite(c)) => {
            CosetKey::Finite(left_action_on_cosets(g, k, c).expect("right coset"))
        }
        (Carrier::Free { .. }, Actor::Letter(l), CosetKey::Free { table, vertex }) => {
            let (t, map) = table.root_move(&Word::letter(l)).canonical_with_map().expect("connected");
            CosetKey::Free { table: t, vertex: map[*vertex] }
        }
        _ => unreachable!("actors match the carrier"),
    }
}

/// `Hg ↦ Hgk`
pub(crate) fn coset_right(carrier: &Carrier, c: &CosetKey, k: Actor) -> CosetKey {
    match (carrier, k, c) {
        (Carrier::Finite(g), Actor::Element(k), CosetKey::Finite(c)) => {
            CosetKey::Finite(right_translate(g, c, k).expect("right coset"))
        }
        (Carrier::Free { .. }, Actor::Letter(l), CosetKey::Free { table, vertex }) => {
            CosetKey::Free { table: table.clone(), vertex: table.step(*vertex, l) }
        }
        _ => unreachable!("actors match the carrier"),
    }
}

/// `π_l(Hg) = g⁻¹Hg`
pub(crate) fn coset_conjugate_subgroup(carrier: &Carrier, c: &CosetKey) -> SubgroupKey {
    match (carrier, c) {
        (Carrier::Finite(g), CosetKey::Finite(c)) => {
            SubgroupKey::Finite(conjugate_subgroup(g, c.subgroup(), g.inv(c.representative())))
        }
        (_, CosetKey::Free { table, vertex }) => {
            SubgroupKey::Free(table.with_root(*vertex).canonical().expect("connected"))
        }
        _ => unreachable!("keys are validated against the carrier"),
    }
}

/// Whether `λ(kHk⁻¹) = λ(H)` for every atom and every `k` (every element of a
/// finite group; every letter of `S ∪ S⁻¹`, which generate `F(S)`).
pub fn is_conjugation_invariant(lambda: &SubgroupMeasure) -> bool {
    let carrier = lambda.carrier();
    let actors = carrier.actors();
    lambda.atoms().iter().all(|(h, w)| actors.iter().all(|&k| lambda.weight(&conjugate(carrier, k, h)) == *w))
}

/// Counting measure on `H\G`: weight 1 per right coset.
pub fn nu_h(carrier: &Carrier, h: &SubgroupKey) -> Result<CosetMeasure> {
    super::check_key_carrier(carrier, h)?;
    let one = Weight::from_integer(1.into());
    Ok(CosetMeasure::from_map(carrier.clone(), cosets_of(carrier, h).into_iter().map(|c| (c, one.clone())).collect()))
}

/// `ν(Hg) = λ(H)` for every right coset of every atom.
pub fn build_nu(lambda: &SubgroupMeasure) -> CosetMeasure {
    let carrier = lambda.carrier();
    let mut atoms = BTreeMap::new();
    for (h, w) in lambda.atoms() {
        for c in cosets_of(carrier, h) {
            atoms.insert(c, w.clone());
        }
    }
    CosetMeasure::from_map(carrier.clone(), atoms)
}

fn invariant_under(nu: &CosetMeasure, map: impl Fn(Actor, &CosetKey) -> CosetKey) -> bool {
    let actors = nu.carrier().actors();
    nu.atoms().iter().all(|(c, w)| actors.iter().all(|&k| nu.weight(&map(k, c)) == *w))
}

/// Whether `ν(k·c) = ν(c)` for every atom `c` and every `k`.
pub fn check_left_invariance(nu: &CosetMeasure) -> bool {
    let carrier = nu.carrier();
    invariant_under(nu, |k, c| coset_left(carrier, k, c))
}

/// Whether `ν(ck) = ν(c)` for every atom `c` and every `k`.
pub fn check_right_invariance(nu: &CosetMeasure) -> bool {
    let carrier = nu.carrier();
    invariant_under(nu, |k, c| coset_right(carrier, c, k))
}

/// `ρ_* ν`
pub fn rho_pushforward(nu: &CosetMeasure) -> CosetMeasure {
    let carrier = nu.carrier();
    let atoms = nu.atoms().iter().map(|(c, w)| (coset_rho(carrier, c), w.clone())).collect();
    CosetMeasure::from_map(carrier.clone(), atoms)
}

/// Whether `ρ_* ν = ν` atomwise.
pub fn check_rho_invariance(nu: &CosetMeasure) -> bool {
    rho_pushforward(nu) == *nu
}

fn pushforward(nu: &CosetMeasure, map: impl Fn(&CosetKey) -> SubgroupKey) -> Result<SubgroupMeasure> {
    let mut atoms: BTreeMap<SubgroupKey, Weight> = BTreeMap::new();
    for (c, w) in nu.atoms() {
        *atoms.entry(map(c)).or_insert_with(Weight::zero) += w;
    }
    SubgroupMeasure::new(nu.carrier().clone(), atoms)
}

/// `π_{r*} ν` with `π_r(Hg) = H`.
pub fn pushforward_right(nu: &CosetMeasure) -> Result<SubgroupMeasure> {
    pushforward(nu, CosetKey::subgroup)
}

/// `π_{l*} ν` with `π_l(Hg) = g⁻¹Hg`.
pub fn pushforward_left(nu: &CosetMeasure) -> Result<SubgroupMeasure> {
    let carrier = nu.carrier();
    pushforward(nu, |c| coset_conjugate_subgroup(carrier, c))
}

/// Whether two measures have the same null atoms, i.e. the same support.
pub fn same_null_atoms(a: &SubgroupMeasure, b: &SubgroupMeasure) -> bool {
    a.atoms().keys().eq(b.atoms().keys())
}

/// For conjugation-invariant `λ`, the symmetrization `ν′ = ν + ρ_*ν` of
/// `ν = build_nu(λ)` and whether it is invariant under both actions.
pub fn counimodularity_check(lambda: &SubgroupMeasure) -> Result<(bool, CosetMeasure)> {
    if !is_conjugation_invariant(lambda) {
        return Err(Error::Precondition("the subgroup measure is not conjugation invariant".into()));
    }
    let nu = build_nu(lambda);
    let sym = nu.add(&rho_pushforward(&nu))?;
    Ok((check_left_invariance(&sym) && check_right_invariance(&sym), sym))
}

/// Finite-carrier convenience: the right coset `Hg` as a coset key.
pub fn finite_coset(carrier: &Carrier, h: &SubgroupKey, g: usize) -> Result<CosetKey> {
    match (carrier, h) {
        (Carrier::Finite(group), SubgroupKey::Finite(h)) => Ok(CosetKey::Finite(CosetId::right(group, h, g))),
        _ => Err(structural("finite coset of a non-finite carrier")),
    }
}
