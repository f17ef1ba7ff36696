// SPDX-License-Identifier: Apache-2.0

//! Fuzzy sets on a finite ground set and finite fuzzy topologies.
//!
//! A fuzzy topology here is a finite family of membership maps that contains
//! the constants 0 and 1 and is closed under pointwise `min` and `max`. For a
//! finite family, closure under pairwise `max` already gives closure under
//! arbitrary joins.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::sync::Arc;

use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// The ordered, duplicate-free set `X` of element identifiers.
#[derive(Clone)]
pub struct GroundSet {
    elements: Arc<[String]>,
}

impl GroundSet {
    pub fn new<S: Into<String>>(elements: impl IntoIterator<Item = S>) -> Result<Self> {
        let elements: Vec<String> = elements.into_iter().map(Into::into).collect();
        if elements.is_empty() {
            return Err(Error::EmptyGround);
        }
        let mut seen = HashSet::new();
        for e in &elements {
            if !seen.insert(e.as_str()) {
                return Err(Error::DuplicateElement(e.clone()));
            }
        }
        Ok(GroundSet {
            elements: elements.into(),
        })
    }

    /// `x0, x1, …, x{n-1}`.
    pub fn numbered(n: usize) -> Result<Self> {
        GroundSet::new((0..n).map(|i| format!("x{i}")))
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn name(&self, index: usize) -> &str {
        &self.elements[index]
    }

    pub fn index_of(&self, element: &str) -> Result<usize> {
        self.elements
            .iter()
            .position(|e| e == element)
            .ok_or_else(|| Error::UnknownElement(element.to_string()))
    }

    pub fn contains(&self, element: &str) -> bool {
        self.elements.iter().any(|e| e == element)
    }
}

impl PartialEq for GroundSet {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.elements, &other.elements) || self.elements == other.elements
    }
}

impl Eq for GroundSet {}

impl fmt::Debug for GroundSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.elements.iter()).finish()
    }
}

impl Serialize for GroundSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.elements.serialize(serializer)
    }
}

/// A membership map `X → [0,1]`.
#[derive(Clone, PartialEq, Eq)]
pub struct FuzzySet {
    ground: GroundSet,
    values: Vec<Rational>,
}

impl FuzzySet {
    /// Values given in ground-set order.
    pub fn from_values(ground: &GroundSet, values: Vec<Rational>) -> Result<Self> {
        if values.len() != ground.len() {
            return Err(Error::GroundMismatch);
        }
        for v in &values {
            v.check_unit("membership value")?;
        }
        Ok(FuzzySet {
            ground: ground.clone(),
            values,
        })
    }

    /// Values keyed by element name; every element must be present.
    pub fn from_map(ground: &GroundSet, map: &BTreeMap<String, Rational>) -> Result<Self> {
        for k in map.keys() {
            ground.index_of(k)?;
        }
        let values = ground
            .elements()
            .iter()
            .map(|e| map.get(e).cloned().ok_or_else(|| Error::MissingValue(e.clone())))
            .collect::<Result<Vec<_>>>()?;
        FuzzySet::from_values(ground, values)
    }

    pub fn constant(ground: &GroundSet, v: Rational) -> Result<Self> {
        FuzzySet::from_values(ground, vec![v; ground.len()])
    }

    pub fn zero(ground: &GroundSet) -> Self {
        FuzzySet {
            ground: ground.clone(),
            values: vec![Rational::zero(); ground.len()],
        }
    }

    pub fn one(ground: &GroundSet) -> Self {
        FuzzySet {
            ground: ground.clone(),
            values: vec![Rational::one(); ground.len()],
        }
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn value_at(&self, index: usize) -> &Rational {
        &self.values[index]
    }

    pub fn value(&self, element: &str) -> Result<&Rational> {
        Ok(&self.values[self.ground.index_of(element)?])
    }

    pub fn is_constant(&self) -> bool {
        self.values.windows(2).all(|w| w[0] == w[1])
    }

    /// `{x | F(x) != 0}`, as ground indices.
    pub fn support(&self) -> Vec<usize> {
        (0..self.values.len()).filter(|&i| !self.values[i].is_zero()).collect()
    }

    /// Pointwise `self <= other`.
    pub fn le(&self, other: &FuzzySet) -> bool {
        self.values.iter().zip(&other.values).all(|(a, b)| a <= b)
    }

    fn check_ground(&self, other: &FuzzySet) -> Result<()> {
        if self.ground == other.ground {
            Ok(())
        } else {
            Err(Error::GroundMismatch)
        }
    }

    fn zip_with(&self, other: &FuzzySet, f: impl Fn(&Rational, &Rational) -> Rational) -> Self {
        FuzzySet {
            ground: self.ground.clone(),
            values: self.values.iter().zip(&other.values).map(|(a, b)| f(a, b)).collect(),
        }
    }
}

impl fmt::Debug for FuzzySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for (e, v) in self.ground.elements().iter().zip(&self.values) {
            m.entry(e, v);
        }
        m.finish()
    }
}

impl Serialize for FuzzySet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = serializer.serialize_map(Some(self.values.len()))?;
        for (e, v) in self.ground.elements().iter().zip(&self.values) {
            m.serialize_entry(e, v)?;
        }
        m.end()
    }
}

/// Pointwise minimum.
pub fn fz_meet(a: &FuzzySet, b: &FuzzySet) -> Result<FuzzySet> {
    a.check_ground(b)?;
    Ok(a.zip_with(b, |x, y| x.clone().min(y.clone())))
}

/// Pointwise maximum over a nonempty family.
pub fn fz_join<'a>(family: impl IntoIterator<Item = &'a FuzzySet>) -> Result<FuzzySet> {
    let mut it = family.into_iter();
    let first = it.next().ok_or(Error::EmptyFamily)?;
    let mut acc = first.clone();
    for f in it {
        acc.check_ground(f)?;
        acc = acc.zip_with(f, |x, y| x.clone().max(y.clone()));
    }
    Ok(acc)
}

/// `1 - f`.
pub fn fz_complement(f: &FuzzySet) -> FuzzySet {
    FuzzySet {
        ground: f.ground.clone(),
        values: f.values.iter().map(|v| Rational::one() - v).collect(),
    }
}

/// The indicator map of `subset`.
pub fn fz_indicator<S: AsRef<str>>(subset: &[S], ground: &GroundSet) -> Result<FuzzySet> {
    let mut values = vec![Rational::zero(); ground.len()];
    for e in subset {
        values[ground.index_of(e.as_ref())?] = Rational::one();
    }
    Ok(FuzzySet {
        ground: ground.clone(),
        values,
    })
}

/// A fuzzy set with a name, as it appears in topology documents.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NamedFuzzySet {
    pub name: String,
    pub values: FuzzySet,
}

impl NamedFuzzySet {
    pub fn new(name: impl Into<String>, values: FuzzySet) -> Self {
        NamedFuzzySet {
            name: name.into(),
            values,
        }
    }
}

/// Why a candidate family fails to be a fuzzy topology.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TopologyWitness {
    MissingEmpty,
    MissingWhole,
    GroundMismatch { name: String },
    MeetAbsent { left: String, right: String },
    JoinAbsent { left: String, right: String },
}

impl fmt::Display for TopologyWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TopologyWitness::MissingEmpty => write!(f, "constant-0 map missing"),
            TopologyWitness::MissingWhole => write!(f, "constant-1 map missing"),
            TopologyWitness::GroundMismatch { name } => {
                write!(f, "{name} is defined on a different ground set")
            }
            TopologyWitness::MeetAbsent { left, right } => {
                write!(f, "{left} ∧ {right} is not in the family")
            }
            TopologyWitness::JoinAbsent { left, right } => {
                write!(f, "{left} ∨ {right} is not in the family")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub witness: Option<TopologyWitness>,
}

/// Checks the fuzzy-topology axioms on a finite candidate family, returning
/// the first violation found.
pub fn fz_is_topology(ground: &GroundSet, family: &[NamedFuzzySet]) -> ValidationReport {
    let fail = |w| ValidationReport {
        valid: false,
        witness: Some(w),
    };
    for m in family {
        if m.values.ground() != ground {
            return fail(TopologyWitness::GroundMismatch { name: m.name.clone() });
        }
    }
    let present: HashSet<&[Rational]> = family.iter().map(|m| m.values.values()).collect();
    if !present.contains(FuzzySet::zero(ground).values()) {
        return fail(TopologyWitness::MissingEmpty);
    }
    if !present.contains(FuzzySet::one(ground).values()) {
        return fail(TopologyWitness::MissingWhole);
    }
    for (i, a) in family.iter().enumerate() {
        for b in &family[i + 1..] {
            let meet = a.values.zip_with(&b.values, |x, y| x.clone().min(y.clone()));
            if !present.contains(meet.values()) {
                return fail(TopologyWitness::MeetAbsent {
                    left: a.name.clone(),
                    right: b.name.clone(),
                });
            }
            let join = a.values.zip_with(&b.values, |x, y| x.clone().max(y.clone()));
            if !present.contains(join.values()) {
                return fail(TopologyWitness::JoinAbsent {
                    left: a.name.clone(),
                    right: b.name.clone(),
                });
            }
        }
    }
    ValidationReport {
        valid: true,
        witness: None,
    }
}

/// A validated finite fuzzy topology with named opens.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FuzzyTopology {
    ground: GroundSet,
    opens: Vec<NamedFuzzySet>,
}

impl FuzzyTopology {
    pub fn new(ground: GroundSet, opens: Vec<NamedFuzzySet>) -> Result<Self> {
        let mut names = HashSet::new();
        for o in &opens {
            if !names.insert(o.name.as_str()) {
                return Err(Error::DuplicateOpen(o.name.clone()));
            }
        }
        let report = fz_is_topology(&ground, &opens);
        match report.witness {
            None => Ok(FuzzyTopology { ground, opens }),
            Some(w) => Err(Error::InvalidTopology(w.to_string())),
        }
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn opens(&self) -> &[NamedFuzzySet] {
        &self.opens
    }

    pub fn open(&self, name: &str) -> Result<&FuzzySet> {
        self.opens
            .iter()
            .find(|o| o.name == name)
            .map(|o| &o.values)
            .ok_or_else(|| Error::UnknownOpen(name.to_string()))
    }

    pub fn len(&self) -> usize {
        self.opens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.opens.is_empty()
    }

    /// The family of constant maps `{0, 1} ∪ values`, named by their value.
    pub fn constants(ground: &GroundSet, values: &[Rational]) -> Result<Self> {
        let mut all = vec![Rational::zero(), Rational::one()];
        for v in values {
            if !all.contains(v) {
                all.push(v.clone());
            }
        }
        let opens = all
            .into_iter()
            .map(|v| Ok(NamedFuzzySet::new(v.to_string(), FuzzySet::constant(ground, v)?)))
            .collect::<Result<Vec<_>>>()?;
        FuzzyTopology::new(ground.clone(), opens)
    }

    pub fn to_doc(&self) -> TopologyDoc {
        TopologyDoc {
            ground_set: self.ground.elements().to_vec(),
            opens: self
                .opens
                .iter()
                .map(|o| OpenDoc {
                    name: o.name.clone(),
                    values: self
                        .ground
                        .elements()
                        .iter()
                        .cloned()
                        .zip(o.values.values().iter().cloned())
                        .collect(),
                })
                .collect(),
        }
    }
}

/// Smallest fuzzy topology containing `generators`. Generator names are
/// kept; the constants are named `"0"` and `"1"` and derived members `"O1"`,
/// `"O2"`, … in discovery order.
pub fn fz_generate_topology(ground: &GroundSet, generators: &[NamedFuzzySet]) -> Result<FuzzyTopology> {
    let mut members: Vec<NamedFuzzySet> = Vec::new();
    let mut seen: HashSet<Vec<Rational>> = HashSet::new();
    let mut push = |members: &mut Vec<NamedFuzzySet>, name: String, f: FuzzySet| {
        if seen.insert(f.values().to_vec()) {
            members.push(NamedFuzzySet::new(name, f));
            true
        } else {
            false
        }
    };
    push(&mut members, "0".into(), FuzzySet::zero(ground));
    push(&mut members, "1".into(), FuzzySet::one(ground));
    for g in generators {
        if g.values.ground() != ground {
            return Err(Error::GroundMismatch);
        }
        push(&mut members, g.name.clone(), g.values.clone());
    }
    let mut fresh = 0usize;
    let mut checked = 0usize;
    // Pairs (i, j) with j < checked were closed in an earlier round.
    loop {
        let n = members.len();
        if checked == n {
            break;
        }
        for j in checked..n {
            for i in 0..j {
                let a = &members[i].values;
                let b = &members[j].values;
                let meet = a.zip_with(b, |x, y| x.clone().min(y.clone()));
                let join = a.zip_with(b, |x, y| x.clone().max(y.clone()));
                for f in [meet, join] {
                    let name = format!("O{}", fresh + 1);
                    if push(&mut members, name, f) {
                        fresh += 1;
                    }
                }
            }
        }
        checked = n;
    }
    FuzzyTopology::new(ground.clone(), members)
}

/// JSON document for a (candidate) fuzzy topology.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TopologyDoc {
    pub ground_set: Vec<String>,
    pub opens: Vec<OpenDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpenDoc {
    pub name: String,
    pub values: BTreeMap<String, Rational>,
}

impl TopologyDoc {
    /// Parses the members without checking the topology axioms.
    pub fn family(&self) -> Result<(GroundSet, Vec<NamedFuzzySet>)> {
        let ground = GroundSet::new(self.ground_set.iter().cloned())?;
        let mut names = HashSet::new();
        let family = self
            .opens
            .iter()
            .map(|o| {
                if !names.insert(o.name.clone()) {
                    return Err(Error::DuplicateOpen(o.name.clone()));
                }
                Ok(NamedFuzzySet::new(
                    o.name.clone(),
                    FuzzySet::from_map(&ground, &o.values)?,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((ground, family))
    }

    pub fn topology(&self) -> Result<FuzzyTopology> {
        let (ground, family) = self.family()?;
        FuzzyTopology::new(ground, family)
    }
}
