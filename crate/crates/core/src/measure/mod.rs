//! Finitely supported rational measures on subgroup spaces and coset spaces.
//!
//! Two carriers are supported: an explicit finite group, where subgroups are
//! element sets, and a free group `F(S)` restricted to finite-index subgroups,
//! where a subgroup is its canonical coset table and the right coset `Hg` is
//! the vertex `Hg` of that table. Measures are unnormalized; absent keys have
//! weight zero.

mod coset;
mod disintegration;
mod mtp;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use crate::action::GroupAction;
use crate::error::{structural, Error, Result};
use crate::group::{Element, FiniteGroup};
use crate::schreier::{RootedLabeledGraph, TableFile};
use crate::subgroup::{CosetId, Side, Subgroup};
use crate::word::Letter;

pub use coset::{
    build_nu, check_left_invariance, check_rho_invariance, check_right_invariance, counimodularity_check, finite_coset,
    is_conjugation_invariant, nu_h, pushforward_left, pushforward_right, rho_pushforward, same_null_atoms,
};
pub use disintegration::{disintegration_uniqueness_check, DisintegrationInstance};
pub use mtp::{discrete_mtp_verify, graph_mtp_verify, GraphMtpReport, MtpReport, TestFunctions, Violation};

/// Exact nonnegative weights.
pub type Weight = BigRational;

/// Parses `"p/q"` or an integer `"p"`.
pub fn parse_weight(text: &str) -> Result<Weight> {
    let text = text.trim();
    let parsed = match text.split_once('/') {
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).map_err(|e| structural(format!("weight {text:?}: {e}")))?;
            let q = BigInt::from_str(q.trim()).map_err(|e| structural(format!("weight {text:?}: {e}")))?;
            if q.is_zero() {
                return Err(structural(format!("weight {text:?} has zero denominator")));
            }
            BigRational::new(p, q)
        }
        None => {
            BigRational::from_integer(BigInt::from_str(text).map_err(|e| structural(format!("weight {text:?}: {e}")))?)
        }
    };
    Ok(parsed)
}

/// Always `p/q` in lowest terms, `q > 0`.
pub fn format_weight(w: &Weight) -> String {
    format!("{}/{}", w.numer(), w.denom())
}

fn weight_from_value(v: &Value) -> Result<Weight> {
    match v {
        Value::String(s) => parse_weight(s),
        Value::Number(n) if n.is_i64() => Ok(BigRational::from_integer(BigInt::from(n.as_i64().unwrap()))),
        other => Err(structural(format!("weight must be a \"p/q\" string, got {other}"))),
    }
}

/// The group whose subgroups are being measured.
#[derive(Clone, Debug)]
pub enum Carrier {
    Finite(Arc<FiniteGroup>),
    Free { rank: usize },
}

impl PartialEq for Carrier {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Carrier::Finite(a), Carrier::Finite(b)) => Arc::ptr_eq(a, b) || a.table() == b.table(),
            (Carrier::Free { rank: a }, Carrier::Free { rank: b }) => a == b,
            _ => false,
        }
    }
}

/// An element acting on subgroups and cosets: every element of a finite
/// group, or a letter of `S ∪ S⁻¹` for the free group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) enum Actor {
    Element(Element),
    Letter(Letter),
}

impl Carrier {
    pub fn name(&self) -> &'static str {
        match self {
            Carrier::Finite(_) => "finite",
            Carrier::Free { .. } => "free",
        }
    }

    pub fn group(&self) -> Option<&Arc<FiniteGroup>> {
        match self {
            Carrier::Finite(g) => Some(g),
            Carrier::Free { .. } => None,
        }
    }

    pub(crate) fn actors(&self) -> Vec<Actor> {
        match self {
            Carrier::Finite(g) => g.elements().map(Actor::Element).collect(),
            Carrier::Free { rank } => Letter::all(*rank).map(Actor::Letter).collect(),
        }
    }

    fn subgroup_key_from_value(&self, v: &Value) -> Result<SubgroupKey> {
        match self {
            Carrier::Finite(g) => {
                let elements: Vec<Element> = serde_json::from_value(v.clone())?;
                Ok(SubgroupKey::Finite(Subgroup::new(g, elements)?))
            }
            Carrier::Free { rank } => {
                let file: TableFile = serde_json::from_value(v.clone())?;
                let table = RootedLabeledGraph::from_file(&file)?;
                if table.rank() != *rank {
                    return Err(structural(format!("table of rank {} in a rank-{rank} measure", table.rank())));
                }
                Ok(SubgroupKey::Free(table.canonical()?))
            }
        }
    }
}

/// A subgroup in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SubgroupKey {
    Finite(Subgroup),
    /// Canonical coset table (root 0) of a finite-index subgroup of `F(S)`.
    Free(RootedLabeledGraph),
}

impl SubgroupKey {
    /// Canonicalizes a table before wrapping it.
    pub fn free(table: &RootedLabeledGraph) -> Result<Self> {
        Ok(SubgroupKey::Free(table.canonical()?))
    }

    pub fn to_value(&self) -> Value {
        match self {
            SubgroupKey::Finite(h) => json!(h.elements()),
            SubgroupKey::Free(t) => serde_json::to_value(t.to_file()).expect("plain data"),
        }
    }
}

impl fmt::Display for SubgroupKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_value())
    }
}

/// A right coset `Hg`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CosetKey {
    Finite(CosetId),
    /// Vertex `vertex` of the canonical table of `H`.
    Free {
        table: RootedLabeledGraph,
        vertex: usize,
    },
}

impl CosetKey {
    pub fn to_value(&self) -> Value {
        match self {
            CosetKey::Finite(c) => json!({"subgroup": c.subgroup().elements(), "representative": c.representative()}),
            CosetKey::Free { table, vertex } => json!({"table": table.to_file(), "vertex": vertex}),
        }
    }

    /// The subgroup `H` of `Hg`.
    pub fn subgroup(&self) -> SubgroupKey {
        match self {
            CosetKey::Finite(c) => SubgroupKey::Finite(c.subgroup().clone()),
            CosetKey::Free { table, .. } => SubgroupKey::Free(table.clone()),
        }
    }
}

impl fmt::Display for CosetKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_value())
    }
}

fn check_weight(w: &Weight) -> Result<()> {
    if w.is_negative() {
        return Err(Error::Precondition(format!("negative weight {}", format_weight(w))));
    }
    Ok(())
}

fn check_key_carrier(carrier: &Carrier, key: &SubgroupKey) -> Result<()> {
    match (carrier, key) {
        (Carrier::Finite(_), SubgroupKey::Finite(_)) => Ok(()),
        (Carrier::Free { rank }, SubgroupKey::Free(t)) => {
            if t.rank() != *rank {
                return Err(structural(format!("table of rank {} in a rank-{rank} measure", t.rank())));
            }
            if !t.is_canonical() {
                return Err(structural("free-carrier keys must be canonical tables"));
            }
            Ok(())
        }
        _ => Err(structural("subgroup key does not match the carrier")),
    }
}

fn check_coset_carrier(carrier: &Carrier, key: &CosetKey) -> Result<()> {
    match (carrier, key) {
        (Carrier::Finite(_), CosetKey::Finite(c)) => {
            if c.side() != Side::Right {
                return Err(structural("coset measures live on right cosets"));
            }
            Ok(())
        }
        (Carrier::Free { .. }, CosetKey::Free { table, vertex }) => {
            check_key_carrier(carrier, &SubgroupKey::Free(table.clone()))?;
            if *vertex >= table.size() {
                return Err(structural(format!("vertex {vertex} outside a table of size {}", table.size())));
            }
            Ok(())
        }
        _ => Err(structural("coset key does not match the carrier")),
    }
}

/// A finitely supported measure `λ` on the subgroups of the carrier.
#[derive(Clone, Debug, PartialEq)]
pub struct SubgroupMeasure {
    carrier: Carrier,
    atoms: BTreeMap<SubgroupKey, Weight>,
}

impl SubgroupMeasure {
    /// Validates the atoms; zero weights are dropped and duplicate keys summed.
    /// At least one atom must be positive.
    pub fn new(carrier: Carrier, atoms: impl IntoIterator<Item = (SubgroupKey, Weight)>) -> Result<Self> {
        let mut map: BTreeMap<SubgroupKey, Weight> = BTreeMap::new();
        for (k, w) in atoms {
            check_weight(&w)?;
            check_key_carrier(&carrier, &k)?;
            *map.entry(k).or_insert_with(Weight::zero) += w;
        }
        map.retain(|_, w| !w.is_zero());
        if map.is_empty() {
            return Err(Error::Precondition("a subgroup measure needs a positive atom".into()));
        }
        Ok(Self { carrier, atoms: map })
    }

    /// Unit point mass.
    pub fn dirac(carrier: Carrier, key: SubgroupKey) -> Result<Self> {
        Self::new(carrier, [(key, Weight::from_integer(1.into()))])
    }

    /// Weight 1 on each of the given subgroups.
    pub fn counting(carrier: Carrier, keys: impl IntoIterator<Item = SubgroupKey>) -> Result<Self> {
        Self::new(carrier, keys.into_iter().map(|k| (k, Weight::from_integer(1.into()))))
    }

    pub fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    pub fn atoms(&self) -> &BTreeMap<SubgroupKey, Weight> {
        &self.atoms
    }

    pub fn weight(&self, key: &SubgroupKey) -> Weight {
        self.atoms.get(key).cloned().unwrap_or_else(Weight::zero)
    }

    pub fn total_mass(&self) -> Weight {
        self.atoms.values().sum()
    }

    /// Scaled to total mass 1.
    pub fn normalized(&self) -> Self {
        let total = self.total_mass();
        Self { carrier: self.carrier.clone(), atoms: self.atoms.iter().map(|(k, w)| (k.clone(), w / &total)).collect() }
    }

    pub fn to_value(&self) -> Value {
        let atoms: Vec<Value> =
            self.atoms.iter().map(|(k, w)| json!({"key": k.to_value(), "weight": format_weight(w)})).collect();
        let mut out = json!({"carrier": self.carrier.name(), "atoms": atoms});
        match &self.carrier {
            Carrier::Finite(g) => out["group"] = json!(g.name()),
            Carrier::Free { rank } => out["rank"] = json!(rank),
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_value()).expect("plain data")
    }

    /// Reads the measure format `{"carrier": "finite"|"free", "atoms": [{"key", "weight"}]}`.
    /// A finite carrier needs the group; a free carrier takes its rank from
    /// the `"rank"` field or, failing that, from the first table.
    pub fn from_json(text: &str, group: Option<Arc<FiniteGroup>>) -> Result<Self> {
        let v: Value = serde_json::from_str(text)?;
        let atoms = v["atoms"].as_array().ok_or_else(|| structural("measure needs an \"atoms\" array"))?;
        let carrier = match v["carrier"].as_str() {
            Some("finite") => {
                let g = group.ok_or_else(|| Error::Precondition("a finite measure needs its group".into()))?;
                if let Some(name) = v["group"].as_str() {
                    if !g.matches_key(name) {
                        return Err(structural(format!("measure refers to group {name:?}, not {}", g.name())));
                    }
                }
                Carrier::Finite(g)
            }
            Some("free") => {
                let rank = match v["rank"].as_u64() {
                    Some(r) => r as usize,
                    None => atoms
                        .first()
                        .and_then(|a| a["key"]["rank"].as_u64())
                        .ok_or_else(|| structural("free measure without a rank"))? as usize,
                };
                Carrier::Free { rank }
            }
            other => return Err(structural(format!("unknown carrier {other:?}"))),
        };
        let mut parsed = Vec::with_capacity(atoms.len());
        for a in atoms {
            parsed.push((carrier.subgroup_key_from_value(&a["key"])?, weight_from_value(&a["weight"])?));
        }
        Self::new(carrier, parsed)
    }
}

/// The pushforward `stab_* ζ` of point weights under `x ↦ G_x`.
pub fn stabilizer_irs(action: &GroupAction, zeta: &[Weight]) -> Result<SubgroupMeasure> {
    if zeta.len() != action.set_size() {
        return Err(structural(format!("{} point weights for {} points", zeta.len(), action.set_size())));
    }
    let atoms = zeta
        .iter()
        .enumerate()
        .map(|(x, w)| (SubgroupKey::Finite(action.stabilizer(x)), w.clone()))
        .collect::<Vec<_>>();
    SubgroupMeasure::new(Carrier::Finite(action.group().clone()), atoms)
}

/// A finitely supported measure `ν` on right cosets. May be zero.
#[derive(Clone, Debug, PartialEq)]
pub struct CosetMeasure {
    carrier: Carrier,
    atoms: BTreeMap<CosetKey, Weight>,
}

impl CosetMeasure {
    pub fn new(carrier: Carrier, atoms: impl IntoIterator<Item = (CosetKey, Weight)>) -> Result<Self> {
        let mut map: BTreeMap<CosetKey, Weight> = BTreeMap::new();
        for (k, w) in atoms {
            check_weight(&w)?;
            check_coset_carrier(&carrier, &k)?;
            *map.entry(k).or_insert_with(Weight::zero) += w;
        }
        map.retain(|_, w| !w.is_zero());
        Ok(Self { carrier, atoms: map })
    }

    /// Skips validation of keys built by this module.
    pub(crate) fn from_map(carrier: Carrier, mut atoms: BTreeMap<CosetKey, Weight>) -> Self {
        atoms.retain(|_, w| !w.is_zero());
        Self { carrier, atoms }
    }

    pub fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    pub fn atoms(&self) -> &BTreeMap<CosetKey, Weight> {
        &self.atoms
    }

    pub fn weight(&self, key: &CosetKey) -> Weight {
        self.atoms.get(key).cloned().unwrap_or_else(Weight::zero)
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn total_mass(&self) -> Weight {
        self.atoms.values().sum()
    }

    /// Atomwise sum.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.carrier != other.carrier {
            return Err(structural("adding coset measures over different carriers"));
        }
        let mut atoms = self.atoms.clone();
        for (k, w) in &other.atoms {
            *atoms.entry(k.clone()).or_insert_with(Weight::zero) += w;
        }
        Ok(Self::from_map(self.carrier.clone(), atoms))
    }

    pub fn to_value(&self) -> Value {
        let atoms: Vec<Value> =
            self.atoms.iter().map(|(k, w)| json!({"key": k.to_value(), "weight": format_weight(w)})).collect();
        json!({"carrier": self.carrier.name(), "atoms": atoms})
    }
}

/// A finitely supported nonnegative function on right cosets.
#[derive(Clone, Debug, PartialEq)]
pub struct MassTransportFunction {
    pub name: String,
    values: BTreeMap<CosetKey, Weight>,
}

impl MassTransportFunction {
    pub fn new(name: impl Into<String>, values: impl IntoIterator<Item = (CosetKey, Weight)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (k, w) in values {
            check_weight(&w)?;
            if !w.is_zero() {
                map.insert(k, w);
            }
        }
        Ok(Self { name: name.into(), values: map })
    }

    /// The indicator of a single coset.
    pub fn indicator(key: CosetKey) -> Self {
        let name = key.to_string();
        Self { name, values: BTreeMap::from([(key, Weight::from_integer(1.into()))]) }
    }

    pub fn zero() -> Self {
        Self { name: "zero".into(), values: BTreeMap::new() }
    }

    pub fn eval(&self, key: &CosetKey) -> Weight {
        self.values.get(key).cloned().unwrap_or_else(Weight::zero)
    }

    pub(crate) fn support(&self) -> impl Iterator<Item = (&CosetKey, &Weight)> {
        self.values.iter()
    }
}
