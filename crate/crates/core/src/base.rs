// SPDX-License-Identifier: Apache-2.0

//! The crisp topology `ι_X(T)` on the ground set and its connectivity.
//!
//! Subsets of `X` are `u64` bit masks, bit `i` standing for the `i`-th ground
//! element, which caps ground sets at 64 elements.

use std::collections::BTreeSet;
use std::fmt;

use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize, Serializer};

use crate::cylinder::{critical_gammas, cyl_contains, subbasis_realize, SubbasisElem};
use crate::error::{Error, Result};
use crate::fuzzy::{FuzzySet, FuzzyTopology, GroundSet};
use crate::rational::Rational;

pub type Mask = u64;

fn full_mask(n: usize) -> Mask {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

fn check_size(ground: &GroundSet) -> Result<()> {
    if ground.len() > 64 {
        Err(Error::GroundTooLarge(ground.len()))
    } else {
        Ok(())
    }
}

/// A topology on a finite ground set, opens sorted by mask value.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteTopology {
    ground: GroundSet,
    opens: Vec<Mask>,
}

/// Closes `sets` under pairwise intersection and union.
fn lattice_closure(mut sets: BTreeSet<Mask>) -> BTreeSet<Mask> {
    loop {
        let cur: Vec<Mask> = sets.iter().copied().collect();
        let before = sets.len();
        for (i, a) in cur.iter().enumerate() {
            for b in &cur[i + 1..] {
                sets.insert(a & b);
                sets.insert(a | b);
            }
        }
        if sets.len() == before {
            return sets;
        }
    }
}

impl FiniteTopology {
    /// Validates the axioms on an explicit family.
    pub fn new(ground: &GroundSet, opens: impl IntoIterator<Item = Mask>) -> Result<Self> {
        check_size(ground)?;
        let full = full_mask(ground.len());
        let set: BTreeSet<Mask> = opens.into_iter().collect();
        if let Some(m) = set.iter().find(|&&m| m & !full != 0) {
            return Err(Error::InvalidTopology(format!("mask {m:#b} exceeds the ground set")));
        }
        if !set.contains(&0) {
            return Err(Error::InvalidTopology("missing ∅".into()));
        }
        if !set.contains(&full) {
            return Err(Error::InvalidTopology("missing the full set".into()));
        }
        for &a in &set {
            for &b in &set {
                if !set.contains(&(a & b)) || !set.contains(&(a | b)) {
                    return Err(Error::InvalidTopology(format!(
                        "not closed for {} and {}",
                        fmt_mask(ground, a),
                        fmt_mask(ground, b)
                    )));
                }
            }
        }
        Ok(FiniteTopology {
            ground: ground.clone(),
            opens: set.into_iter().collect(),
        })
    }

    /// The topology generated by a subbasis (plus `∅` and `X`).
    pub fn generate(ground: &GroundSet, subbasis: impl IntoIterator<Item = Mask>) -> Result<Self> {
        check_size(ground)?;
        let full = full_mask(ground.len());
        let mut set: BTreeSet<Mask> = subbasis.into_iter().map(|m| m & full).collect();
        set.insert(0);
        set.insert(full);
        Ok(FiniteTopology {
            ground: ground.clone(),
            opens: lattice_closure(set).into_iter().collect(),
        })
    }

    pub fn discrete(ground: &GroundSet) -> Result<Self> {
        FiniteTopology::generate(ground, (0..ground.len()).map(|i| 1u64 << i))
    }

    pub fn indiscrete(ground: &GroundSet) -> Result<Self> {
        FiniteTopology::generate(ground, [])
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn opens(&self) -> &[Mask] {
        &self.opens
    }

    pub fn full(&self) -> Mask {
        full_mask(self.ground.len())
    }

    pub fn is_open(&self, m: Mask) -> bool {
        self.opens.binary_search(&m).is_ok()
    }

    pub fn mask_of<S: AsRef<str>>(&self, elems: &[S]) -> Result<Mask> {
        elems
            .iter()
            .try_fold(0u64, |acc, e| Ok(acc | (1u64 << self.ground.index_of(e.as_ref())?)))
    }

    pub fn names(&self, m: Mask) -> Vec<String> {
        (0..self.ground.len())
            .filter(|i| m >> i & 1 == 1)
            .map(|i| self.ground.name(i).to_string())
            .collect()
    }

    /// Smallest open containing element `i`.
    pub fn minimal_neighborhood(&self, i: usize) -> Mask {
        self.opens
            .iter()
            .filter(|&&m| m >> i & 1 == 1)
            .fold(self.full(), |acc, m| acc & m)
    }

    pub fn specialization(&self) -> SpecializationPreorder {
        SpecializationPreorder {
            ground: self.ground.clone(),
            up: (0..self.ground.len()).map(|i| self.minimal_neighborhood(i)).collect(),
        }
    }

    pub fn to_doc(&self) -> FiniteTopologyDoc {
        FiniteTopologyDoc {
            opens: self.opens.iter().map(|&m| self.names(m)).collect(),
        }
    }
}

fn fmt_mask(ground: &GroundSet, m: Mask) -> String {
    let names: Vec<&str> = (0..ground.len())
        .filter(|i| m >> i & 1 == 1)
        .map(|i| ground.name(i))
        .collect();
    format!("{{{}}}", names.join(","))
}

impl fmt::Debug for FiniteTopology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let shown: Vec<String> = self.opens.iter().map(|&m| fmt_mask(&self.ground, m)).collect();
        write!(f, "{{{}}}", shown.join(", "))
    }
}

impl Serialize for FiniteTopology {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_doc().serialize(serializer)
    }
}

/// Wire form `{"opens":[["a"],["a","b"],[]]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteTopologyDoc {
    pub opens: Vec<Vec<String>>,
}

impl FiniteTopologyDoc {
    pub fn resolve(&self, ground: &GroundSet) -> Result<FiniteTopology> {
        check_size(ground)?;
        let masks = self
            .opens
            .iter()
            .map(|o| {
                o.iter()
                    .try_fold(0u64, |acc, e| Ok(acc | (1u64 << ground.index_of(e)?)))
            })
            .collect::<Result<Vec<_>>>()?;
        FiniteTopology::new(ground, masks)
    }
}

/// `x ≤ y` iff every open containing `x` contains `y`.
#[derive(Clone, PartialEq, Eq)]
pub struct SpecializationPreorder {
    ground: GroundSet,
    /// `up[i]` is the set of `y` with `i ≤ y`, the minimal neighborhood of `i`.
    up: Vec<Mask>,
}

impl SpecializationPreorder {
    pub fn le(&self, x: usize, y: usize) -> bool {
        self.up[x] >> y & 1 == 1
    }

    pub fn comparable(&self, x: usize, y: usize) -> bool {
        self.le(x, y) || self.le(y, x)
    }

    pub fn up_set(&self, x: usize) -> Mask {
        self.up[x]
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }
}

impl fmt::Debug for SpecializationPreorder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for (i, &u) in self.up.iter().enumerate() {
            m.entry(&self.ground.name(i), &fmt_mask(&self.ground, u));
        }
        m.finish()
    }
}

impl Serialize for SpecializationPreorder {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = serializer.serialize_map(Some(self.up.len()))?;
        for (i, &u) in self.up.iter().enumerate() {
            let names: Vec<&str> = (0..self.ground.len())
                .filter(|j| u >> j & 1 == 1)
                .map(|j| self.ground.name(j))
                .collect();
            m.serialize_entry(self.ground.name(i), &names)?;
        }
        m.end()
    }
}

/// `{x | t(x) > γ}` as a mask.
fn above_mask(t: &FuzzySet, gamma: &Rational) -> Mask {
    t.values()
        .iter()
        .enumerate()
        .filter(|(_, v)| *v > gamma)
        .fold(0u64, |acc, (i, _)| acc | 1u64 << i)
}

/// Subbasis of `ι_X(T)` by thresholding: `X`, and `{T ≥ v}`, `{T > v}` for
/// each membership value `v < 1` of each open.
pub fn iota_subbasis(topo: &FuzzyTopology) -> BTreeSet<Mask> {
    let full = full_mask(topo.ground().len());
    let mut out = BTreeSet::from([full]);
    for o in topo.opens() {
        for v in o.values.values() {
            let ge = o
                .values
                .values()
                .iter()
                .enumerate()
                .filter(|(_, w)| *w >= v)
                .fold(0u64, |acc, (i, _)| acc | 1u64 << i);
            out.insert(ge);
            if v < &Rational::one() {
                out.insert(above_mask(&o.values, v));
            }
        }
    }
    out
}

pub fn iota_x(topo: &FuzzyTopology) -> Result<FiniteTopology> {
    FiniteTopology::generate(topo.ground(), iota_subbasis(topo))
}

/// Compares the level-0 slices of the realized `T*` subbasis members,
/// projected to `X`, with the thresholding subbasis of [`iota_x`].
pub fn slice_agrees(topo: &FuzzyTopology) -> Result<bool> {
    let ground = topo.ground();
    let zero = Rational::zero();
    let mut via_slice = BTreeSet::new();
    for o in topo.opens() {
        for gamma in critical_gammas(&o.values) {
            let c = subbasis_realize(&SubbasisElem::tstar(o.name.clone(), gamma), topo)?;
            let mut m = 0u64;
            for (i, e) in ground.elements().iter().enumerate() {
                if cyl_contains(&c, e, &zero)? {
                    m |= 1u64 << i;
                }
            }
            via_slice.insert(m);
        }
    }
    Ok(via_slice == iota_subbasis(topo))
}

/// Path components of a finite space: components of the comparability graph.
pub fn connected_components(ft: &FiniteTopology) -> Vec<Vec<String>> {
    let n = ft.ground().len();
    let pre = ft.specialization();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        let mut c = i;
        while p[c] != r {
            let next = p[c];
            p[c] = r;
            c = next;
        }
        r
    }
    for x in 0..n {
        for y in x + 1..n {
            if pre.comparable(x, y) {
                let (a, b) = (find(&mut parent, x), find(&mut parent, y));
                if a != b {
                    parent[b.max(a)] = a.min(b);
                }
            }
        }
    }
    let mut comps: Vec<Vec<String>> = Vec::new();
    let mut root_slot: Vec<Option<usize>> = vec![None; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        let slot = *root_slot[r].get_or_insert_with(|| {
            comps.push(Vec::new());
            comps.len() - 1
        });
        comps[slot].push(ft.ground().name(i).to_string());
    }
    comps
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConnectivityReport {
    pub pc: bool,
    pub lpc: bool,
    pub lpc_reason: String,
    pub components: Vec<Vec<String>>,
}

pub fn check_pc_lpc(topo: &FuzzyTopology) -> Result<ConnectivityReport> {
    let components = connected_components(&iota_x(topo)?);
    Ok(ConnectivityReport {
        pc: components.len() == 1,
        lpc: true,
        lpc_reason: "finite space".into(),
        components,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fuzzy::{fz_generate_topology, fz_indicator, NamedFuzzySet};
    use crate::rational::q;

    fn ab() -> GroundSet {
        GroundSet::new(["a", "b"]).unwrap()
    }

    fn ind(elems: &[&str], g: &GroundSet, name: &str) -> NamedFuzzySet {
        NamedFuzzySet::new(name, fz_indicator(elems, g).unwrap())
    }

    #[test]
    fn iota_examples() {
        let g = ab();
        let c = FuzzyTopology::constants(&g, &[q(1, 3), q(2, 3)]).unwrap();
        assert_eq!(iota_x(&c).unwrap(), FiniteTopology::indiscrete(&g).unwrap());
        let s = fz_generate_topology(&g, &[ind(&["a"], &g, "A")]).unwrap();
        let ft = iota_x(&s).unwrap();
        assert_eq!(ft.opens(), &[0b00, 0b01, 0b11]);
        let trivial = FuzzyTopology::constants(&g, &[]).unwrap();
        assert_eq!(iota_x(&trivial).unwrap().opens(), &[0, 0b11]);
    }

    #[test]
    fn slice_agreement_examples() {
        let g = ab();
        assert!(slice_agrees(&FuzzyTopology::constants(&g, &[q(1, 3)]).unwrap()).unwrap());
        let s = fz_generate_topology(&g, &[ind(&["a"], &g, "A")]).unwrap();
        assert!(slice_agrees(&s).unwrap());
        let g3 = GroundSet::new(["a", "b", "c"]).unwrap();
        let f = FuzzySet::from_values(&g3, vec![q(1, 4), q(3, 4), q(1, 1)]).unwrap();
        let t = fz_generate_topology(&g3, &[NamedFuzzySet::new("F", f)]).unwrap();
        assert!(slice_agrees(&t).unwrap());
        assert_eq!(iota_x(&t).unwrap().opens().len(), 4);
    }

    #[test]
    fn components_examples() {
        let g = ab();
        let sier = FiniteTopology::new(&g, [0, 0b01, 0b11]).unwrap();
        assert_eq!(connected_components(&sier), vec![vec!["a", "b"]]);
        assert_eq!(
            connected_components(&FiniteTopology::discrete(&g).unwrap()),
            vec![vec!["a"], vec!["b"]]
        );
        let g3 = GroundSet::new(["a", "b", "c"]).unwrap();
        assert_eq!(connected_components(&FiniteTopology::indiscrete(&g3).unwrap()).len(), 1);
        // a ≤ b? every open containing a contains b: {a} is open, so no.
        let pre = sier.specialization();
        assert!(pre.le(1, 0));
        assert!(!pre.le(0, 1));
    }

    #[test]
    fn pc_lpc_examples() {
        let g = ab();
        let r = check_pc_lpc(&FuzzyTopology::constants(&g, &[q(1, 2)]).unwrap()).unwrap();
        assert!(r.pc && r.lpc);
        let d = fz_generate_topology(&g, &[ind(&["a"], &g, "A"), ind(&["b"], &g, "B")]).unwrap();
        let r = check_pc_lpc(&d).unwrap();
        assert!(!r.pc);
        assert_eq!(r.components.len(), 2);
        let one = GroundSet::new(["a"]).unwrap();
        assert!(check_pc_lpc(&FuzzyTopology::constants(&one, &[]).unwrap()).unwrap().pc);
    }

    #[test]
    fn rejects_non_topologies() {
        let g = ab();
        assert!(FiniteTopology::new(&g, [0b01, 0b11]).is_err());
        assert!(FiniteTopology::new(&g, [0, 0b01]).is_err());
        let g3 = GroundSet::new(["a", "b", "c"]).unwrap();
        assert!(FiniteTopology::new(&g3, [0, 0b001, 0b010, 0b111]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let g = ab();
        let sier = FiniteTopology::new(&g, [0, 0b01, 0b11]).unwrap();
        let s = serde_json::to_string(&sier).unwrap();
        assert_eq!(s, r#"{"opens":[[],["a"],["a","b"]]}"#);
        let doc: FiniteTopologyDoc = serde_json::from_str(&s).unwrap();
        assert_eq!(doc.resolve(&g).unwrap(), sier);
    }
}
