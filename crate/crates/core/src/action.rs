//! Actions of finite groups on finite sets.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{structural, Error, Result};
use crate::group::{Element, FiniteGroup, IDENTITY};
use crate::subgroup::{left_cosets, CosetId, Subgroup};

/// A left action `G ↷ {0..set_size-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupAction {
    group: Arc<FiniteGroup>,
    set_size: usize,
    images: Vec<usize>,
}

/// JSON action format: `{"group": ..., "setSize": n, "images": [[...]]}`,
/// where `images[g][x]` is the image of point `x` under element `g`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ActionFile {
    pub group: String,
    pub set_size: usize,
    pub images: Vec<Vec<usize>>,
}

impl GroupAction {
    pub fn new(group: Arc<FiniteGroup>, images: Vec<Vec<usize>>) -> Result<Self> {
        if images.len() != group.order() {
            return Err(structural(format!(
                "action lists {} elements, group has order {}",
                images.len(),
                group.order()
            )));
        }
        let set_size = images[0].len();
        if set_size == 0 {
            return Err(structural("action on the empty set"));
        }
        if images.iter().any(|row| row.len() != set_size || row.iter().any(|&y| y >= set_size)) {
            return Err(structural("action rows must be maps of the point set"));
        }
        let action = Self { group, set_size, images: images.into_iter().flatten().collect() };
        let g = &action.group;
        let homomorphism = (0..set_size).all(|x| action.act(IDENTITY, x) == x)
            && g.elements().all(|a| {
                g.elements().all(|b| {
                    let ab = g.mul(a, b);
                    (0..set_size).all(|x| action.act(ab, x) == action.act(a, action.act(b, x)))
                })
            });
        if !homomorphism {
            return Err(Error::Precondition("images do not define a group action".into()));
        }
        Ok(action)
    }

    fn from_fn(group: Arc<FiniteGroup>, set_size: usize, f: impl Fn(Element, usize) -> usize) -> Self {
        let images = group.elements().flat_map(|g| (0..set_size).map(move |x| (g, x))).map(|(g, x)| f(g, x)).collect();
        Self { group, set_size, images }
    }

    /// `G` acting on itself by left multiplication.
    pub fn regular(group: Arc<FiniteGroup>) -> Self {
        let n = group.order();
        let g2 = group.clone();
        Self::from_fn(group, n, move |g, x| g2.mul(g, x))
    }

    pub fn trivial(group: Arc<FiniteGroup>, set_size: usize) -> Self {
        Self::from_fn(group, set_size, |_, x| x)
    }

    /// `G` acting on the left cosets `G/K` by `g · xK = (gx)K`; point `i` is the
    /// `i`-th coset in representative order, so point 0 is `K` itself.
    pub fn on_left_cosets(group: Arc<FiniteGroup>, k: &Subgroup) -> Self {
        let cosets = left_cosets(&group, k);
        let mut table = Vec::with_capacity(group.order() * cosets.len());
        for g in group.elements() {
            for c in &cosets {
                let image = CosetId::left(&group, k, group.mul(g, c.representative()));
                table.push(cosets.binary_search(&image).expect("coset of K"));
            }
        }
        Self { set_size: cosets.len(), images: table, group }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn set_size(&self) -> usize {
        self.set_size
    }

    #[inline]
    pub fn act(&self, g: Element, x: usize) -> usize {
        self.images[g * self.set_size + x]
    }

    pub fn orbit(&self, x: usize) -> BTreeSet<usize> {
        self.group.elements().map(|g| self.act(g, x)).collect()
    }

    /// Orbits as sorted point lists, ordered by their least point.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.set_size];
        let mut out = Vec::new();
        for x in 0..self.set_size {
            if !seen[x] {
                let orbit: Vec<usize> = self.orbit(x).into_iter().collect();
                orbit.iter().for_each(|&y| seen[y] = true);
                out.push(orbit);
            }
        }
        out
    }

    pub fn is_transitive(&self) -> bool {
        self.orbit(0).len() == self.set_size
    }

    /// `G_x = {g : gx = x}`
    pub fn stabilizer(&self, x: usize) -> Subgroup {
        let elems = self.group.elements().filter(|&g| self.act(g, x) == x);
        Subgroup::new(&self.group, elems).expect("stabilizers are subgroups")
    }

    pub fn to_file(&self) -> ActionFile {
        ActionFile {
            group: self.group.name().to_string(),
            set_size: self.set_size,
            images: self.images.chunks(self.set_size).map(<[usize]>::to_vec).collect(),
        }
    }

    pub fn from_file(file: &ActionFile, group: Arc<FiniteGroup>) -> Result<Self> {
        if !group.matches_key(&file.group) {
            return Err(structural(format!("action refers to group {:?}", file.group)));
        }
        if file.images.first().map(Vec::len) != Some(file.set_size) {
            return Err(structural("setSize does not match the image rows"));
        }
        Self::new(group, file.images.clone())
    }
}
