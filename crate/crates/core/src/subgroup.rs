//! Subgroups, cosets and the coset involution of a finite group.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{structural, Error, Result};
use crate::group::{Element, FiniteGroup, IDENTITY};

/// Default bound on the group order accepted by [`enumerate_subgroups`].
pub const DEFAULT_MAX_ORDER: usize = 200;

/// A subgroup, stored as its sorted element set.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subgroup {
    elements: Vec<Element>,
}

impl Subgroup {
    pub fn trivial() -> Self {
        Self { elements: vec![IDENTITY] }
    }

    pub fn whole(group: &FiniteGroup) -> Self {
        Self { elements: group.elements().collect() }
    }

    /// Validates that `elements` is a subgroup of `group`.
    pub fn new(group: &FiniteGroup, elements: impl IntoIterator<Item = Element>) -> Result<Self> {
        let set: BTreeSet<Element> = elements.into_iter().collect();
        if let Some(&bad) = set.iter().find(|&&g| !group.contains(g)) {
            return Err(structural(format!("element {bad} not in group of order {}", group.order())));
        }
        if !set.contains(&IDENTITY) {
            return Err(Error::Precondition("subset does not contain the identity".into()));
        }
        for &a in &set {
            if !set.contains(&group.inv(a)) || set.iter().any(|&b| !set.contains(&group.mul(a, b))) {
                return Err(Error::Precondition("subset is not closed under the group law".into()));
            }
        }
        Ok(Self { elements: set.into_iter().collect() })
    }

    fn from_sorted(elements: Vec<Element>) -> Self {
        debug_assert!(elements.windows(2).all(|w| w[0] < w[1]));
        Self { elements }
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn index_in(&self, group: &FiniteGroup) -> usize {
        group.order() / self.order()
    }

    pub fn contains(&self, g: Element) -> bool {
        self.elements.binary_search(&g).is_ok()
    }

    pub fn is_normal(&self, group: &FiniteGroup) -> bool {
        group.elements().all(|k| self.elements.iter().all(|&h| self.contains(group.conj(k, h))))
    }
}

/// Which side the subgroup multiplies on: `Hg` is [`Side::Right`], `gH` is [`Side::Left`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// A coset of a subgroup, identified by its minimum element.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CosetId {
    subgroup: Subgroup,
    representative: Element,
    side: Side,
}

impl CosetId {
    /// The right coset `Hg`.
    pub fn right(group: &FiniteGroup, subgroup: &Subgroup, g: Element) -> Self {
        let representative = subgroup.elements.iter().map(|&h| group.mul(h, g)).min().expect("nonempty");
        Self { subgroup: subgroup.clone(), representative, side: Side::Right }
    }

    /// The left coset `gH`.
    pub fn left(group: &FiniteGroup, subgroup: &Subgroup, g: Element) -> Self {
        let representative = subgroup.elements.iter().map(|&h| group.mul(g, h)).min().expect("nonempty");
        Self { subgroup: subgroup.clone(), representative, side: Side::Left }
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    pub fn representative(&self) -> Element {
        self.representative
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn elements(&self, group: &FiniteGroup) -> Vec<Element> {
        let g = self.representative;
        let mut v: Vec<Element> = match self.side {
            Side::Right => self.subgroup.elements.iter().map(|&h| group.mul(h, g)).collect(),
            Side::Left => self.subgroup.elements.iter().map(|&h| group.mul(g, h)).collect(),
        };
        v.sort_unstable();
        v
    }

    pub fn contains(&self, group: &FiniteGroup, x: Element) -> bool {
        let g = self.representative;
        match self.side {
            // x ∈ Hg  ⇔  x g⁻¹ ∈ H
            Side::Right => self.subgroup.contains(group.mul(x, group.inv(g))),
            Side::Left => self.subgroup.contains(group.mul(group.inv(g), x)),
        }
    }
}

/// The smallest subgroup containing `gens`.
pub fn generated_subgroup(group: &FiniteGroup, gens: &[Element]) -> Result<Subgroup> {
    if let Some(&bad) = gens.iter().find(|&&g| !group.contains(g)) {
        return Err(structural(format!("generator {bad} not in group of order {}", group.order())));
    }
    Ok(closure(group, gens))
}

fn closure(group: &FiniteGroup, gens: &[Element]) -> Subgroup {
    let mut member = vec![false; group.order()];
    member[IDENTITY] = true;
    let mut found = vec![IDENTITY];
    let mut next = 0;
    // In a finite group closure under products already gives inverses.
    while next < found.len() {
        let x = found[next];
        next += 1;
        for &s in gens {
            let y = group.mul(x, s);
            if !member[y] {
                member[y] = true;
                found.push(y);
            }
        }
    }
    found.sort_unstable();
    Subgroup::from_sorted(found)
}

/// `k H k⁻¹`
pub fn conjugate_subgroup(group: &FiniteGroup, h: &Subgroup, k: Element) -> Subgroup {
    let mut v: Vec<Element> = h.elements.iter().map(|&x| group.conj(k, x)).collect();
    v.sort_unstable();
    Subgroup::from_sorted(v)
}

/// The right cosets `H\G`, sorted by representative.
pub fn right_cosets(group: &FiniteGroup, h: &Subgroup) -> Vec<CosetId> {
    cosets(group, h, Side::Right)
}

/// The left cosets `G/H`, sorted by representative.
pub fn left_cosets(group: &FiniteGroup, h: &Subgroup) -> Vec<CosetId> {
    cosets(group, h, Side::Left)
}

fn cosets(group: &FiniteGroup, h: &Subgroup, side: Side) -> Vec<CosetId> {
    let mut covered = vec![false; group.order()];
    let mut out = Vec::with_capacity(h.index_in(group));
    for g in group.elements() {
        if covered[g] {
            continue;
        }
        let c = match side {
            Side::Right => CosetId::right(group, h, g),
            Side::Left => CosetId::left(group, h, g),
        };
        for x in c.elements(group) {
            covered[x] = true;
        }
        out.push(c);
    }
    out
}

fn require_right(c: &CosetId) -> Result<()> {
    match c.side {
        Side::Right => Ok(()),
        Side::Left => Err(Error::Precondition("expected a right coset".into())),
    }
}

/// `ρ(Hg) = g⁻¹H`, returned as the right coset `(g⁻¹Hg) g⁻¹`.
pub fn rho(group: &FiniteGroup, c: &CosetId) -> Result<CosetId> {
    require_right(c)?;
    let g_inv = group.inv(c.representative);
    let conj = conjugate_subgroup(group, &c.subgroup, g_inv);
    Ok(CosetId::right(group, &conj, g_inv))
}

/// `k · Hg = (kHk⁻¹)(kg)`
pub fn left_action_on_cosets(group: &FiniteGroup, k: Element, c: &CosetId) -> Result<CosetId> {
    require_right(c)?;
    let conj = conjugate_subgroup(group, &c.subgroup, k);
    Ok(CosetId::right(group, &conj, group.mul(k, c.representative)))
}

/// `Hg · k = Hgk`
pub fn right_translate(group: &FiniteGroup, c: &CosetId, k: Element) -> Result<CosetId> {
    require_right(c)?;
    Ok(CosetId::right(group, &c.subgroup, group.mul(c.representative, k)))
}

/// All subgroups of a finite group with their conjugacy classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupLattice {
    subgroups: Vec<Subgroup>,
    class_of: Vec<usize>,
    classes: Vec<Vec<usize>>,
    normal: Vec<bool>,
}

impl SubgroupLattice {
    /// Subgroups sorted by order, then by element set.
    pub fn subgroups(&self) -> &[Subgroup] {
        &self.subgroups
    }

    pub fn len(&self) -> usize {
        self.subgroups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subgroups.is_empty()
    }

    /// Conjugacy classes as lists of subgroup indices.
    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_of(&self, index: usize) -> usize {
        self.class_of[index]
    }

    pub fn is_normal(&self, index: usize) -> bool {
        self.normal[index]
    }

    pub fn position(&self, h: &Subgroup) -> Option<usize> {
        self.subgroups.binary_search_by(|s| sort_key(s).cmp(&sort_key(h))).ok()
    }

    pub fn to_report(&self, group: &FiniteGroup) -> LatticeReport {
        LatticeReport {
            group: group.name().to_string(),
            order: group.order(),
            count: self.subgroups.len(),
            class_count: self.classes.len(),
            subgroups: self
                .subgroups
                .iter()
                .enumerate()
                .map(|(id, h)| LatticeEntry {
                    id,
                    order: h.order(),
                    elements: h.elements.clone(),
                    class: self.class_of[id],
                    normal: self.normal[id],
                })
                .collect(),
        }
    }
}

fn sort_key(h: &Subgroup) -> (usize, &[Element]) {
    (h.order(), &h.elements)
}

/// JSON export of a [`SubgroupLattice`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeReport {
    pub group: String,
    pub order: usize,
    pub count: usize,
    pub class_count: usize,
    pub subgroups: Vec<LatticeEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeEntry {
    pub id: usize,
    pub order: usize,
    pub elements: Vec<Element>,
    pub class: usize,
    pub normal: bool,
}

/// JSON subgroup format: `{"group": name-or-hash, "elements": [...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubgroupFile {
    pub group: String,
    pub elements: Vec<Element>,
}

impl SubgroupFile {
    pub fn new(group: &FiniteGroup, h: &Subgroup) -> Self {
        Self { group: group.name().to_string(), elements: h.elements.clone() }
    }

    pub fn resolve(&self, group: &FiniteGroup) -> Result<Subgroup> {
        if !group.matches_key(&self.group) {
            return Err(structural(format!("subgroup refers to group {:?}, expected {:?}", self.group, group.name())));
        }
        Subgroup::new(group, self.elements.iter().copied())
    }
}

/// Enumerates every subgroup of `group`.
///
/// Starts from the closures of all generating sets of size at most two and
/// adds one generator at a time until no new subgroup appears. Every subgroup
/// is reached, since it is the top of a chain of one-generator extensions of
/// a cyclic subgroup.
pub fn enumerate_subgroups(group: &FiniteGroup, max_order: usize) -> Result<SubgroupLattice> {
    if group.order() > max_order {
        return Err(Error::Resource(format!(
            "group order {} exceeds the enumeration bound {max_order}",
            group.order()
        )));
    }
    let n = group.order();
    // each subgroup keeps a small generating set so extensions stay cheap
    let mut found: BTreeMap<Subgroup, Vec<Element>> = BTreeMap::new();
    found.insert(Subgroup::trivial(), Vec::new());
    for a in 0..n {
        for b in a..n {
            found.entry(closure(group, &[a, b])).or_insert_with(|| vec![a, b]);
        }
    }
    let mut frontier: Vec<(Subgroup, Vec<Element>)> = found.iter().map(|(h, gens)| (h.clone(), gens.clone())).collect();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for (h, gens) in &frontier {
            for g in group.elements() {
                if h.contains(g) {
                    continue;
                }
                let mut grown_gens = gens.clone();
                grown_gens.push(g);
                let grown = closure(group, &grown_gens);
                if !found.contains_key(&grown) {
                    found.insert(grown.clone(), grown_gens.clone());
                    next.push((grown, grown_gens));
                }
            }
        }
        frontier = next;
    }

    let mut subgroups: Vec<Subgroup> = found.into_keys().collect();
    subgroups.sort_by(|x, y| sort_key(x).cmp(&sort_key(y)));
    let index: BTreeMap<&Subgroup, usize> = subgroups.iter().enumerate().map(|(i, h)| (h, i)).collect();

    let mut class_of = vec![usize::MAX; subgroups.len()];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for i in 0..subgroups.len() {
        if class_of[i] != usize::MAX {
            continue;
        }
        let orbit: BTreeSet<usize> =
            group.elements().map(|k| index[&conjugate_subgroup(group, &subgroups[i], k)]).collect();
        for &j in &orbit {
            class_of[j] = classes.len();
        }
        classes.push(orbit.into_iter().collect());
    }
    let normal = class_of.iter().map(|&c| classes[c].len() == 1).collect();
    Ok(SubgroupLattice { subgroups, class_of, classes, normal })
}
