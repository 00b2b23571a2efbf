//! Orbit equivalence relations of finite actions and their invariant fiber measures.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::action::GroupAction;
use crate::error::{structural, Error, Result};
use crate::measure::{format_weight, Weight};

/// `E = {(x, gx)}` with the projection `(x, y) ↦ x`.
#[derive(Clone, Debug)]
pub struct OrbitRelation {
    action: GroupAction,
    pairs: BTreeSet<(usize, usize)>,
}

pub fn build_orbit_relation(action: &GroupAction) -> OrbitRelation {
    let pairs = (0..action.set_size())
        .flat_map(|x| action.group().elements().map(move |g| (x, g)))
        .map(|(x, g)| (x, action.act(g, x)))
        .collect();
    OrbitRelation { action: action.clone(), pairs }
}

impl OrbitRelation {
    pub fn action(&self) -> &GroupAction {
        &self.action
    }

    pub fn pairs(&self) -> &BTreeSet<(usize, usize)> {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// The second coordinates of `p_l⁻¹(x)`, i.e. the orbit of `x`.
    pub fn fiber(&self, x: usize) -> Vec<usize> {
        self.pairs.range((x, 0)..=(x, usize::MAX)).map(|&(_, y)| y).collect()
    }

    pub fn is_equivalence(&self) -> bool {
        let n = self.action.set_size();
        let has = |x, y| self.pairs.contains(&(x, y));
        (0..n).all(|x| has(x, x))
            && self.pairs.iter().all(|&(x, y)| has(y, x))
            && self.pairs.iter().all(|&(x, y)| self.fiber(y).iter().all(|&z| has(x, z)))
    }

    /// `[[x, y], ...]`
    pub fn to_value(&self) -> Value {
        json!(self.pairs.iter().map(|&(x, y)| [x, y]).collect::<Vec<_>>())
    }
}

/// Fiber measures `ν_x` on `{x} × Gx` with point weights `ζ`.
#[derive(Clone, Debug, PartialEq)]
pub struct FiberMeasureFamily {
    action: GroupAction,
    zeta: Vec<Weight>,
    fibers: Vec<BTreeMap<usize, Weight>>,
}

impl FiberMeasureFamily {
    /// Validates that every `ν_x` is nonzero, nonnegative and supported on the orbit of `x`.
    pub fn new(action: GroupAction, zeta: Vec<Weight>, fibers: Vec<BTreeMap<usize, Weight>>) -> Result<Self> {
        let n = action.set_size();
        if zeta.len() != n || fibers.len() != n {
            return Err(structural(format!("one weight and one fiber measure per point of {n} required")));
        }
        if zeta.iter().any(Signed::is_negative) {
            return Err(Error::Precondition("point weights must be nonnegative".into()));
        }
        for (x, nu) in fibers.iter().enumerate() {
            let orbit = action.orbit(x);
            if nu.iter().any(|(y, w)| !orbit.contains(y) || w.is_negative()) {
                return Err(Error::Precondition(format!("fiber measure over {x} leaves {{x}} × Gx")));
            }
            if nu.values().all(Zero::is_zero) {
                return Err(Error::Precondition(format!("fiber measure over {x} is zero")));
            }
        }
        let fibers = fibers.into_iter().map(|mut m| {
            m.retain(|_, w| !w.is_zero());
            m
        });
        Ok(Self { fibers: fibers.collect(), action, zeta })
    }

    pub fn action(&self) -> &GroupAction {
        &self.action
    }

    pub fn zeta(&self) -> &[Weight] {
        &self.zeta
    }

    pub fn fiber(&self, x: usize) -> &BTreeMap<usize, Weight> {
        &self.fibers[x]
    }

    /// `ν = Σ_x ζ(x) ν_x` on `E`.
    pub fn integrated(&self) -> BTreeMap<(usize, usize), Weight> {
        let mut out = BTreeMap::new();
        for (x, (z, nu)) in self.zeta.iter().zip(&self.fibers).enumerate() {
            if z.is_zero() {
                continue;
            }
            for (&y, w) in nu {
                out.insert((x, y), z * w);
            }
        }
        out
    }

    /// Pair list `[{"x", "y", "weight"}]` of the integrated measure.
    pub fn to_value(&self) -> Value {
        let pairs: Vec<Value> =
            self.integrated().iter().map(|(&(x, y), w)| json!({"x": x, "y": y, "weight": format_weight(w)})).collect();
        json!({"setSize": self.action.set_size(), "pairs": pairs})
    }
}

/// Counting measure on each fiber, weight 1 per pair.
pub fn build_fiber_measures(action: &GroupAction, zeta: &[Weight]) -> Result<FiberMeasureFamily> {
    let one = Weight::from_integer(1.into());
    let scale = vec![one; action.orbits().len()];
    build_scaled_fiber_measures(action, zeta, &scale)
}

/// Counting measure on each fiber times a positive scale per orbit (orbits in
/// the order of [`GroupAction::orbits`]); invariant measures on `G/G_x` are
/// only determined up to such a multiple.
pub fn build_scaled_fiber_measures(
    action: &GroupAction,
    zeta: &[Weight],
    scale: &[Weight],
) -> Result<FiberMeasureFamily> {
    let orbits = action.orbits();
    if scale.len() != orbits.len() {
        return Err(structural(format!("{} scales for {} orbits", scale.len(), orbits.len())));
    }
    if scale.iter().any(|s| !s.is_positive()) {
        return Err(Error::Precondition("orbit scales must be positive".into()));
    }
    let mut fibers = vec![BTreeMap::new(); action.set_size()];
    for (orbit, s) in orbits.iter().zip(scale) {
        for &x in orbit {
            fibers[x] = orbit.iter().map(|&y| (y, s.clone())).collect();
        }
    }
    FiberMeasureFamily::new(action.clone(), zeta.to_vec(), fibers)
}

/// Whether `g·(x, y) = (x, gy)` preserves every `ν_x` with `ζ(x) > 0` (the
/// others are irrelevant to the integral) and the integrated measure.
pub fn check_relation_invariance(fam: &FiberMeasureFamily) -> bool {
    let action = &fam.action;
    let group = action.group();
    let zero = Weight::zero();
    let fibers_ok = (0..action.set_size()).into_par_iter().all(|x| {
        let nu = &fam.fibers[x];
        fam.zeta[x].is_zero()
            || group.elements().all(|g| nu.iter().all(|(&y, w)| nu.get(&action.act(g, y)).unwrap_or(&zero) == w))
    });
    let total = fam.integrated();
    fibers_ok
        && group
            .elements()
            .all(|g| total.iter().all(|(&(x, y), w)| total.get(&(x, action.act(g, y))).unwrap_or(&zero) == w))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use num_bigint::BigInt;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::group::FiniteGroup;
    use crate::measure::{is_conjugation_invariant, nu_h, stabilizer_irs, Carrier, SubgroupKey};
    use crate::subgroup::{enumerate_subgroups, DEFAULT_MAX_ORDER};

    fn q(p: i64, d: i64) -> Weight {
        Weight::new(BigInt::from(p), BigInt::from(d))
    }

    fn ones(n: usize) -> Vec<Weight> {
        vec![q(1, 1); n]
    }

    #[test]
    fn relation_examples() {
        let c3 = Arc::new(FiniteGroup::cyclic(3));
        let diag = build_orbit_relation(&GroupAction::trivial(c3.clone(), 4));
        assert_eq!(diag.pairs().iter().copied().collect::<Vec<_>>(), (0..4).map(|x| (x, x)).collect::<Vec<_>>());
        let full = build_orbit_relation(&GroupAction::regular(c3));
        assert_eq!(full.len(), 9);
        assert!(full.is_equivalence());

        let s3 = Arc::new(FiniteGroup::symmetric(3));
        let lat = enumerate_subgroups(&s3, DEFAULT_MAX_ORDER).unwrap();
        let h = lat.subgroups().iter().find(|h| h.order() == 2).unwrap();
        let rel = build_orbit_relation(&GroupAction::on_left_cosets(s3, h));
        assert_eq!(rel.len(), 9);
        assert_eq!(rel.fiber(1), vec![0, 1, 2]);
        assert_eq!(rel.to_value()[0], json!([0, 0]));
    }

    #[test]
    fn fiber_measure_examples() {
        let s3 = Arc::new(FiniteGroup::symmetric(3));
        let free = build_fiber_measures(&GroupAction::regular(s3.clone()), &ones(6)).unwrap();
        assert!(free.fibers.iter().all(|f| f.len() == 6 && f.values().all(|w| *w == q(1, 1))));
        let trivial = build_fiber_measures(&GroupAction::trivial(s3.clone(), 2), &ones(2)).unwrap();
        assert!(trivial.fibers.iter().all(|f| f.len() == 1));

        let images: Vec<Vec<usize>> = s3.elements().map(|g| s3.permutation(g).unwrap().to_vec()).collect();
        let natural = GroupAction::new(s3, images).unwrap();
        let fam = build_fiber_measures(&natural, &vec![q(1, 3); 3]).unwrap();
        let nu = fam.integrated();
        assert_eq!(nu.len(), 9);
        assert!(nu.values().all(|w| *w == q(1, 3)));
        assert!(check_relation_invariance(&fam));
        assert_eq!(fam.to_value()["pairs"].as_array().unwrap().len(), 9);
    }

    #[test]
    fn invariance_examples() {
        let c4 = Arc::new(FiniteGroup::cyclic(4));
        let action = GroupAction::regular(c4);
        let mut zeta = ones(4);
        zeta[2] = q(0, 1);
        assert!(check_relation_invariance(&build_fiber_measures(&action, &zeta).unwrap()));

        // non-uniform weights on one transitive fiber: the atom at y = 0 moves to y = 1
        let mut fibers = build_fiber_measures(&action, &ones(4)).unwrap().fibers;
        fibers[0].insert(0, q(2, 1));
        let bad = FiberMeasureFamily::new(action.clone(), ones(4), fibers.clone()).unwrap();
        assert!(!check_relation_invariance(&bad));
        let mut ignored = ones(4);
        ignored[0] = q(0, 1);
        assert!(check_relation_invariance(&FiberMeasureFamily::new(action.clone(), ignored, fibers).unwrap()));

        let mut outside =
            build_fiber_measures(&GroupAction::trivial(action.group().clone(), 2), &ones(2)).unwrap().fibers;
        outside[0].insert(1, q(1, 1));
        let trivial = GroupAction::trivial(action.group().clone(), 2);
        assert!(FiberMeasureFamily::new(trivial.clone(), ones(2), outside).is_err());
        let zero = vec![BTreeMap::from([(0, q(0, 1))]), BTreeMap::from([(1, q(1, 1))])];
        assert!(FiberMeasureFamily::new(trivial, ones(2), zero).is_err());
    }

    #[test]
    fn scaled_fibers_stay_invariant() {
        let s3 = Arc::new(FiniteGroup::symmetric(3));
        let lat = enumerate_subgroups(&s3, DEFAULT_MAX_ORDER).unwrap();
        let a = GroupAction::on_left_cosets(s3.clone(), &lat.subgroups()[1]);
        let fam = build_scaled_fiber_measures(&a, &ones(a.set_size()), &[q(7, 2)]).unwrap();
        assert!(check_relation_invariance(&fam));
        assert!(build_scaled_fiber_measures(&a, &ones(a.set_size()), &[q(0, 1)]).is_err());
    }

    fn disjoint_union(a: &GroupAction, b: &GroupAction) -> GroupAction {
        let (na, g) = (a.set_size(), a.group());
        let images = g
            .elements()
            .map(|x| (0..na).map(|p| a.act(x, p)).chain((0..b.set_size()).map(|p| na + b.act(x, p))).collect())
            .collect();
        GroupAction::new(g.clone(), images).unwrap()
    }

    /// Every coset action `G/K` on at most 8 points, plus the disjoint unions
    /// of two of them that still fit.
    fn small_actions(g: &Arc<FiniteGroup>) -> Vec<GroupAction> {
        let lat = enumerate_subgroups(g, DEFAULT_MAX_ORDER).unwrap();
        let transitive: Vec<GroupAction> = lat
            .subgroups()
            .iter()
            .filter(|k| k.index_in(g) <= 8)
            .map(|k| GroupAction::on_left_cosets(g.clone(), k))
            .collect();
        let mut out = transitive.clone();
        for (i, a) in transitive.iter().enumerate() {
            for b in &transitive[i..] {
                if a.set_size() + b.set_size() <= 8 {
                    out.push(disjoint_union(a, b));
                }
            }
        }
        out
    }

    #[test]
    fn counting_fibers_are_invariant_for_small_actions() {
        let groups = [
            FiniteGroup::cyclic(4),
            FiniteGroup::cyclic(6),
            FiniteGroup::klein_four(),
            FiniteGroup::symmetric(3),
            FiniteGroup::dihedral(4),
            FiniteGroup::quaternion(),
            FiniteGroup::alternating(4),
            FiniteGroup::dihedral(6),
            FiniteGroup::symmetric(4),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for g in groups.into_iter().map(Arc::new) {
            for action in small_actions(&g) {
                let zeta: Vec<Weight> = (0..action.set_size()).map(|_| q(rng.random_range(0..4), 3)).collect();
                let fam = build_fiber_measures(&action, &zeta).unwrap();
                assert!(check_relation_invariance(&fam), "{} on {}", g.name(), action.set_size());
                assert!(build_orbit_relation(&action).is_equivalence());
            }
        }
    }

    #[test]
    fn fibers_match_coset_measures() {
        for g in [FiniteGroup::symmetric(3), FiniteGroup::cyclic(4), FiniteGroup::dihedral(4)].map(Arc::new) {
            for action in small_actions(&g) {
                let fam = build_fiber_measures(&action, &ones(action.set_size())).unwrap();
                for x in 0..action.set_size() {
                    let mass: Weight = fam.fiber(x).values().sum();
                    let stab = SubgroupKey::Finite(action.stabilizer(x));
                    let cosets = nu_h(&Carrier::Finite(g.clone()), &stab).unwrap().len();
                    assert_eq!(mass, q(cosets as i64, 1));
                    assert_eq!(cosets, g.order() / action.stabilizer(x).order());
                }
                // constant weights on each orbit are action invariant
                let lambda = stabilizer_irs(&action, &ones(action.set_size())).unwrap();
                assert!(is_conjugation_invariant(&lambda));
            }
        }
    }
}
