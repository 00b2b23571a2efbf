//! Finite groups given by explicit multiplication tables.
//!
//! Elements are the indices `0..order`, the identity is always element `0`,
//! and the product `g * h` is looked up in a flat `order × order` table.
//! Groups built from permutations use the composition `(g * h)(x) = g(h(x))`.

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{structural, Error, Result};

/// Index of an element inside its [`FiniteGroup`].
pub type Element = usize;

/// The identity element of every [`FiniteGroup`].
pub const IDENTITY: Element = 0;

/// A finite group on `{0..order-1}` with identity `0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    name: String,
    order: usize,
    mult: Vec<u32>,
    inv: Vec<u32>,
    perms: Option<Vec<Vec<usize>>>,
}

/// Checks whether `table` is the multiplication table of a group with
/// identity `0`.
///
/// Returns a structural error when the table is not square or has entries
/// outside `0..n`; otherwise returns whether all group axioms hold.
pub fn check_group_axioms(table: &[Vec<usize>]) -> Result<bool> {
    let n = table.len();
    if n == 0 {
        return Err(structural("empty multiplication table"));
    }
    for (i, row) in table.iter().enumerate() {
        if row.len() != n {
            return Err(structural(format!("row {i} has length {} but the table has {n} rows", row.len())));
        }
        if let Some(&bad) = row.iter().find(|&&v| v >= n) {
            return Err(structural(format!("row {i} contains out-of-range entry {bad}")));
        }
    }
    Ok(axioms_hold(n, |a, b| table[a][b]))
}

fn axioms_hold(n: usize, mul: impl Fn(usize, usize) -> usize) -> bool {
    let mut seen = vec![false; n];
    // Latin square: every row and column is a permutation.
    for a in 0..n {
        seen.iter_mut().for_each(|s| *s = false);
        for b in 0..n {
            let v = mul(a, b);
            if seen[v] {
                return false;
            }
            seen[v] = true;
        }
        seen.iter_mut().for_each(|s| *s = false);
        for b in 0..n {
            let v = mul(b, a);
            if seen[v] {
                return false;
            }
            seen[v] = true;
        }
    }
    if (0..n).any(|g| mul(0, g) != g || mul(g, 0) != g) {
        return false;
    }
    for a in 0..n {
        for b in 0..n {
            let ab = mul(a, b);
            for c in 0..n {
                if mul(ab, c) != mul(a, mul(b, c)) {
                    return false;
                }
            }
        }
    }
    // With identity and the latin property every element has a right inverse;
    // associativity makes it two-sided.
    (0..n).all(|g| (0..n).any(|h| mul(g, h) == 0 && mul(h, g) == 0))
}

/// On-disk group format: `{"order": n, "mult": [[...]], "name": "..."}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupFile {
    pub order: usize,
    pub mult: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

impl FiniteGroup {
    /// Builds a group from a full multiplication table.
    pub fn from_table(name: impl Into<String>, table: &[Vec<usize>]) -> Result<Self> {
        if !check_group_axioms(table)? {
            return Err(Error::Precondition("table does not satisfy the group axioms with identity 0".into()));
        }
        let n = table.len();
        let mult: Vec<u32> = table.iter().flatten().map(|&v| v as u32).collect();
        Ok(Self::from_flat(name.into(), n, mult, None))
    }

    fn from_flat(name: String, order: usize, mult: Vec<u32>, perms: Option<Vec<Vec<usize>>>) -> Self {
        let mut inv = vec![0u32; order];
        for g in 0..order {
            let h = (0..order).find(|&h| mult[g * order + h] == 0).expect("latin square has an inverse in every row");
            inv[g] = h as u32;
        }
        Self { name, order, mult, inv, perms }
    }

    fn from_fn(name: impl Into<String>, order: usize, mul: impl Fn(usize, usize) -> usize) -> Self {
        let mut mult = Vec::with_capacity(order * order);
        for a in 0..order {
            for b in 0..order {
                mult.push(mul(a, b) as u32);
            }
        }
        Self::from_flat(name.into(), order, mult, None)
    }

    /// Closes a set of permutations of `{0..degree-1}` under composition.
    ///
    /// Elements are numbered in breadth-first discovery order starting from the
    /// identity permutation, so the identity is element `0`.
    pub fn from_permutations(name: impl Into<String>, generators: &[Vec<usize>]) -> Result<Self> {
        let degree = generators.first().map_or(1, Vec::len);
        for p in generators {
            if p.len() != degree || !is_permutation(p) {
                return Err(structural("generators must be permutations of equal degree"));
            }
        }
        let identity: Vec<usize> = (0..degree).collect();
        let mut index: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        let mut perms = vec![identity.clone()];
        index.insert(identity, 0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for s in generators {
                let next = compose(&perms[i], s);
                if !index.contains_key(&next) {
                    index.insert(next.clone(), perms.len());
                    queue.push_back(perms.len());
                    perms.push(next);
                }
            }
        }
        let order = perms.len();
        let mut mult = Vec::with_capacity(order * order);
        for a in &perms {
            for b in &perms {
                mult.push(index[&compose(a, b)] as u32);
            }
        }
        Ok(Self::from_flat(name.into(), order, mult, Some(perms)))
    }

    pub fn cyclic(n: usize) -> Self {
        assert!(n > 0, "cyclic group of order 0");
        Self::from_fn(format!("C{n}"), n, |a, b| (a + b) % n)
    }

    /// The symmetric group on `n` points as permutations.
    pub fn symmetric(n: usize) -> Self {
        assert!(n > 0);
        let mut gens = Vec::new();
        if n > 1 {
            let mut swap: Vec<usize> = (0..n).collect();
            swap.swap(0, 1);
            let cycle: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
            gens.push(swap);
            gens.push(cycle);
        }
        Self::from_permutations(format!("S{n}"), &gens).expect("valid generators")
    }

    /// The alternating group on `n ≥ 3` points, generated by 3-cycles.
    pub fn alternating(n: usize) -> Self {
        assert!(n >= 3);
        let gens: Vec<Vec<usize>> = (0..n - 2)
            .map(|k| {
                let mut p: Vec<usize> = (0..n).collect();
                p[k] = k + 1;
                p[k + 1] = k + 2;
                p[k + 2] = k;
                p
            })
            .collect();
        Self::from_permutations(format!("A{n}"), &gens).expect("valid generators")
    }

    /// The dihedral group of order `2n` acting on the vertices of an `n`-gon.
    /// `dihedral(4)` is the symmetry group of the square, named `D4`.
    pub fn dihedral(n: usize) -> Self {
        assert!(n >= 3);
        let rotation: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        let reflection: Vec<usize> = (0..n).map(|i| (n - i) % n).collect();
        Self::from_permutations(format!("D{n}"), &[rotation, reflection]).expect("valid generators")
    }

    /// The quaternion group `{±1, ±i, ±j, ±k}`.
    pub fn quaternion() -> Self {
        // element = 4 * sign + unit, units 1, i, j, k
        const UNIT: [[(usize, usize); 4]; 4] = [
            [(0, 0), (0, 1), (0, 2), (0, 3)],
            [(0, 1), (1, 0), (0, 3), (1, 2)],
            [(0, 2), (1, 3), (1, 0), (0, 1)],
            [(0, 3), (0, 2), (1, 1), (1, 0)],
        ];
        Self::from_fn("Q8", 8, |a, b| {
            let (sa, ua) = (a / 4, a % 4);
            let (sb, ub) = (b / 4, b % 4);
            let (s, u) = UNIT[ua][ub];
            4 * ((sa + sb + s) % 2) + u
        })
    }

    pub fn klein_four() -> Self {
        let mut g = Self::direct_product(&Self::cyclic(2), &Self::cyclic(2));
        g.name = "V4".into();
        g
    }

    /// Direct product with element `(a, b)` stored at index `a * |B| + b`.
    pub fn direct_product(left: &Self, right: &Self) -> Self {
        let m = right.order;
        Self::from_fn(format!("{}x{}", left.name, right.name), left.order * m, |x, y| {
            left.mul(x / m, y / m) * m + right.mul(x % m, y % m)
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> Element {
        IDENTITY
    }

    pub fn elements(&self) -> std::ops::Range<Element> {
        0..self.order
    }

    #[inline]
    pub fn mul(&self, a: Element, b: Element) -> Element {
        self.mult[a * self.order + b] as Element
    }

    #[inline]
    pub fn inv(&self, a: Element) -> Element {
        self.inv[a] as Element
    }

    /// `k g k⁻¹`
    #[inline]
    pub fn conj(&self, k: Element, g: Element) -> Element {
        self.mul(self.mul(k, g), self.inv(k))
    }

    pub fn contains(&self, g: Element) -> bool {
        g < self.order
    }

    pub fn element_order(&self, g: Element) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != IDENTITY {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    /// Re-verifies every group axiom on the stored table.
    pub fn check_axioms(&self) -> bool {
        axioms_hold(self.order, |a, b| self.mul(a, b)) && (0..self.order).all(|g| self.mul(g, self.inv(g)) == IDENTITY)
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        (0..self.order).map(|a| (0..self.order).map(|b| self.mul(a, b)).collect()).collect()
    }

    /// Permutation realizing `g`, for groups built from permutations.
    pub fn permutation(&self, g: Element) -> Option<&[usize]> {
        self.perms.as_ref().map(|p| p[g].as_slice())
    }

    /// Element realized by the permutation `p`, for groups built from permutations.
    pub fn element_of_permutation(&self, p: &[usize]) -> Option<Element> {
        self.perms.as_ref()?.iter().position(|q| q == p)
    }

    /// Short content hash of the multiplication table.
    pub fn fingerprint(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update((self.order as u64).to_le_bytes());
        for v in &self.mult {
            hasher.update(v.to_le_bytes());
        }
        hex::encode(&hasher.finalize()[..8])
    }

    /// True when `key` names this group by name or by fingerprint.
    pub fn matches_key(&self, key: &str) -> bool {
        key == self.name || key == self.fingerprint()
    }

    pub fn to_file(&self) -> GroupFile {
        GroupFile { order: self.order, mult: self.table(), name: Some(self.name.clone()) }
    }

    pub fn from_file(file: &GroupFile) -> Result<Self> {
        if file.mult.len() != file.order {
            return Err(structural(format!("declared order {} but table has {} rows", file.order, file.mult.len())));
        }
        let name = file.name.clone().unwrap_or_default();
        let mut group = Self::from_table(name, &file.mult)?;
        if group.name.is_empty() {
            group.name = group.fingerprint();
        }
        Ok(group)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: GroupFile = serde_json::from_str(text)?;
        Self::from_file(&file)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("group serializes")
    }
}

fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    p.iter().all(|&v| v < p.len() && !std::mem::replace(&mut seen[v], true))
}

/// `(a ∘ b)(x) = a(b(x))`
fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    b.iter().map(|&x| a[x]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn c2_table_is_a_group() {
        assert!(check_group_axioms(&[vec![0, 1], vec![1, 0]]).unwrap());
    }

    #[test]
    fn non_latin_table_is_rejected() {
        assert!(!check_group_axioms(&[vec![0, 1], vec![1, 1]]).unwrap());
    }

    #[test]
    fn malformed_tables_are_structural_errors() {
        assert!(matches!(check_group_axioms(&[vec![0, 1]]), Err(Error::Structural(_))));
        assert!(matches!(check_group_axioms(&[vec![0, 2], vec![1, 0]]), Err(Error::Structural(_))));
        assert!(matches!(check_group_axioms(&[]), Err(Error::Structural(_))));
    }

    #[test]
    fn identity_must_be_zero() {
        // C2 with identity at index 1
        assert!(!check_group_axioms(&[vec![1, 0], vec![0, 1]]).unwrap());
    }

    #[test]
    fn s3_from_all_permutations_of_three_points() {
        let all: Vec<Vec<usize>> =
            vec![vec![0, 1, 2], vec![1, 0, 2], vec![0, 2, 1], vec![2, 1, 0], vec![1, 2, 0], vec![2, 0, 1]];
        let g = FiniteGroup::from_permutations("S3", &all).unwrap();
        assert_eq!(g.order(), 6);
        assert!(check_group_axioms(&g.table()).unwrap());
        assert_eq!(g, FiniteGroup::from_permutations("S3", &all).unwrap());
    }

    #[test]
    fn catalog_orders() {
        assert_eq!(FiniteGroup::symmetric(3).order(), 6);
        assert_eq!(FiniteGroup::symmetric(4).order(), 24);
        assert_eq!(FiniteGroup::alternating(4).order(), 12);
        assert_eq!(FiniteGroup::dihedral(4).order(), 8);
        assert_eq!(FiniteGroup::quaternion().order(), 8);
        assert_eq!(FiniteGroup::klein_four().order(), 4);
        for g in [
            FiniteGroup::cyclic(5),
            FiniteGroup::symmetric(4),
            FiniteGroup::dihedral(6),
            FiniteGroup::quaternion(),
            FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::symmetric(3)),
        ] {
            assert!(g.check_axioms(), "{}", g.name());
        }
    }

    #[test]
    fn quaternion_relations() {
        let q = FiniteGroup::quaternion();
        let (minus_one, i, j, k) = (4, 1, 2, 3);
        assert_eq!(q.mul(i, i), minus_one);
        assert_eq!(q.mul(i, j), k);
        assert_eq!(q.mul(j, i), 4 + k);
        assert_eq!(q.element_order(i), 4);
    }

    #[test]
    fn json_round_trip_derives_inverses() {
        let g = FiniteGroup::dihedral(4);
        let back = FiniteGroup::from_json(&g.to_json()).unwrap();
        assert_eq!(back.table(), g.table());
        for x in g.elements() {
            assert_eq!(back.inv(x), g.inv(x));
        }
        let anon = FiniteGroup::from_json(r#"{"order":2,"mult":[[0,1],[1,0]]}"#).unwrap();
        assert!(anon.matches_key(&anon.fingerprint()));
    }
}
