// SPDX-License-Identifier: Apache-2.0

//! Open sets on the cylinder `X × J`.
//!
//! A [`CylinderOpen`] stores one canonical [`IntervalSet`] per ground
//! element, so equality of subsets of `X × J` is structural. The sub-graph
//! map `Ψ*(T) = {(x,α) | T(x) > α}` and the subbasis of the initial topology
//! generated by the maps `T*(x,α) = T(x) − α` and `π₂(x,α) = α` into the
//! left-ray space `(−1,1]` are realized here.

use std::fmt;

use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::fuzzy::{fz_complement, FuzzySet, FuzzyTopology, GroundSet};
use crate::interval::IntervalSet;
use crate::rational::Rational;

/// A subset of `X × J`, one fiber per ground element.
#[derive(Clone, PartialEq, Eq)]
pub struct CylinderOpen {
    ground: GroundSet,
    fibers: Vec<IntervalSet>,
}

impl CylinderOpen {
    pub fn new(ground: &GroundSet, fibers: Vec<IntervalSet>) -> Result<Self> {
        if fibers.len() != ground.len() {
            return Err(Error::GroundMismatch);
        }
        Ok(CylinderOpen {
            ground: ground.clone(),
            fibers,
        })
    }

    pub fn uniform(ground: &GroundSet, fiber: IntervalSet) -> Self {
        CylinderOpen {
            ground: ground.clone(),
            fibers: vec![fiber; ground.len()],
        }
    }

    pub fn empty(ground: &GroundSet) -> Self {
        CylinderOpen::uniform(ground, IntervalSet::empty())
    }

    pub fn whole(ground: &GroundSet) -> Self {
        CylinderOpen::uniform(ground, IntervalSet::whole())
    }

    /// The slice `X × {0}`.
    pub fn slice(ground: &GroundSet) -> Self {
        CylinderOpen::uniform(ground, IntervalSet::point(Rational::zero()))
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn fibers(&self) -> &[IntervalSet] {
        &self.fibers
    }

    pub fn fiber_at(&self, index: usize) -> &IntervalSet {
        &self.fibers[index]
    }

    pub fn fiber(&self, element: &str) -> Result<&IntervalSet> {
        Ok(&self.fibers[self.ground.index_of(element)?])
    }

    pub fn is_empty(&self) -> bool {
        self.fibers.iter().all(IntervalSet::is_empty)
    }

    fn check_ground(&self, other: &CylinderOpen) -> Result<()> {
        if self.ground == other.ground {
            Ok(())
        } else {
            Err(Error::GroundMismatch)
        }
    }

    fn zip_with(
        &self,
        other: &CylinderOpen,
        f: impl Fn(&IntervalSet, &IntervalSet) -> IntervalSet,
    ) -> Result<CylinderOpen> {
        self.check_ground(other)?;
        Ok(CylinderOpen {
            ground: self.ground.clone(),
            fibers: self.fibers.iter().zip(&other.fibers).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn union(&self, other: &CylinderOpen) -> Result<CylinderOpen> {
        self.zip_with(other, IntervalSet::union)
    }

    pub fn intersect(&self, other: &CylinderOpen) -> Result<CylinderOpen> {
        self.zip_with(other, IntervalSet::intersect)
    }

    pub fn is_subset(&self, other: &CylinderOpen) -> Result<bool> {
        self.check_ground(other)?;
        Ok(self.fibers.iter().zip(&other.fibers).all(|(a, b)| a.is_subset(b)))
    }

    pub fn map_fibers(&self, f: impl Fn(&IntervalSet) -> IntervalSet) -> CylinderOpen {
        CylinderOpen {
            ground: self.ground.clone(),
            fibers: self.fibers.iter().map(f).collect(),
        }
    }

    pub fn to_doc(&self) -> CylinderDoc {
        CylinderDoc {
            fibers: self
                .ground
                .elements()
                .iter()
                .cloned()
                .zip(self.fibers.iter().cloned())
                .collect(),
        }
    }
}

impl fmt::Debug for CylinderOpen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for (e, v) in self.ground.elements().iter().zip(&self.fibers) {
            m.entry(e, v);
        }
        m.finish()
    }
}

impl Serialize for CylinderOpen {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        struct Fibers<'a>(&'a CylinderOpen);
        impl Serialize for Fibers<'_> {
            fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
                let c = self.0;
                let mut m = serializer.serialize_map(Some(c.fibers.len()))?;
                for (e, v) in c.ground.elements().iter().zip(&c.fibers) {
                    m.serialize_entry(e, v)?;
                }
                m.end()
            }
        }
        let mut m = serializer.serialize_map(Some(1))?;
        m.serialize_entry("fibers", &Fibers(self))?;
        m.end()
    }
}

/// Deserialization form of a [`CylinderOpen`]; missing elements get empty
/// fibers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CylinderDoc {
    pub fibers: std::collections::BTreeMap<String, IntervalSet>,
}

impl CylinderDoc {
    pub fn resolve(&self, ground: &GroundSet) -> Result<CylinderOpen> {
        let mut fibers = vec![IntervalSet::empty(); ground.len()];
        for (e, v) in &self.fibers {
            fibers[ground.index_of(e)?] = v.clone();
        }
        CylinderOpen::new(ground, fibers)
    }
}

/// A subbasis member of the initial topology on `X × J`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum SubbasisElem {
    /// `(T*)⁻¹((γ,1])`
    Tstar { open: String, gamma: Rational },
    /// `π₂⁻¹((γ,1])`
    Pi2 { gamma: Rational },
}

impl SubbasisElem {
    pub fn tstar(open: impl Into<String>, gamma: Rational) -> Self {
        SubbasisElem::Tstar {
            open: open.into(),
            gamma,
        }
    }

    pub fn pi2(gamma: Rational) -> Self {
        SubbasisElem::Pi2 { gamma }
    }

    pub fn gamma(&self) -> &Rational {
        match self {
            SubbasisElem::Tstar { gamma, .. } | SubbasisElem::Pi2 { gamma } => gamma,
        }
    }

    fn check_gamma(&self) -> Result<()> {
        let g = self.gamma();
        if g >= &Rational::from_integer(-1) && g < &Rational::one() {
            Ok(())
        } else {
            Err(Error::OutOfRange {
                what: "gamma",
                value: g.clone(),
                range: "[-1,1)",
            })
        }
    }
}

impl fmt::Display for SubbasisElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubbasisElem::Tstar { open, gamma } => write!(f, "({open}*)⁻¹({gamma},1]"),
            SubbasisElem::Pi2 { gamma } => write!(f, "π₂⁻¹({gamma},1]"),
        }
    }
}

/// A union of clauses, each clause a finite intersection of subbasis members.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpenExpr {
    pub clauses: Vec<Vec<SubbasisElem>>,
}

impl OpenExpr {
    pub fn clause(elems: Vec<SubbasisElem>) -> Self {
        OpenExpr { clauses: vec![elems] }
    }

    pub fn single(e: SubbasisElem) -> Self {
        OpenExpr::clause(vec![e])
    }
}

/// Fiber of `Ψ*(f)` at a point with membership `v`: `[0, v)`.
fn psi_fiber(v: &Rational) -> IntervalSet {
    IntervalSet::below(v)
}

/// `Ψ*(f) = {(x,α) ∈ X × J | f(x) > α}`.
pub fn psi_star(f: &FuzzySet) -> CylinderOpen {
    CylinderOpen {
        ground: f.ground().clone(),
        fibers: f.values().iter().map(psi_fiber).collect(),
    }
}

/// Inverts [`psi_star`]: each fiber must be `[0,v)` or empty, and the value
/// is the fiber supremum (0 for an empty fiber).
pub fn recover_membership(c: &CylinderOpen) -> Result<FuzzySet> {
    let values = c
        .fibers
        .iter()
        .enumerate()
        .map(|(i, fib)| {
            fib.as_down_set()
                .ok_or_else(|| Error::NotPsiImage(c.ground.name(i).to_string()))
        })
        .collect::<Result<Vec<_>>>()?;
    FuzzySet::from_values(&c.ground, values)
}

/// Fiber of `(T*)⁻¹((γ,1])` at a point with membership `v`:
/// `{α ∈ J | v − α > γ} = [0, v − γ)`.
pub fn tstar_fiber(v: &Rational, gamma: &Rational) -> IntervalSet {
    IntervalSet::below(&(v - gamma))
}

/// Fiber of `π₂⁻¹((γ,1])`: `(γ,1)`, or all of `J` when `γ < 0`.
pub fn pi2_fiber(gamma: &Rational) -> IntervalSet {
    IntervalSet::above(gamma)
}

pub fn subbasis_realize(e: &SubbasisElem, topo: &FuzzyTopology) -> Result<CylinderOpen> {
    e.check_gamma()?;
    match e {
        SubbasisElem::Tstar { open, gamma } => {
            let t = topo.open(open)?;
            Ok(CylinderOpen {
                ground: topo.ground().clone(),
                fibers: t.values().iter().map(|v| tstar_fiber(v, gamma)).collect(),
            })
        }
        SubbasisElem::Pi2 { gamma } => Ok(CylinderOpen::uniform(topo.ground(), pi2_fiber(gamma))),
    }
}

pub fn open_realize(expr: &OpenExpr, topo: &FuzzyTopology) -> Result<CylinderOpen> {
    let ground = topo.ground();
    let mut acc = CylinderOpen::empty(ground);
    for clause in &expr.clauses {
        if clause.is_empty() {
            return Err(Error::Precondition("empty clause in open expression".into()));
        }
        let mut meet = CylinderOpen::whole(ground);
        for e in clause {
            meet = meet.intersect(&subbasis_realize(e, topo)?)?;
        }
        acc = acc.union(&meet)?;
    }
    Ok(acc)
}

pub fn cyl_contains(c: &CylinderOpen, x: &str, alpha: &Rational) -> Result<bool> {
    c.fiber(x)?.contains(alpha)
}

/// Fiberwise complement in `X × J`. The result is a point set, not
/// necessarily open.
pub fn cyl_complement(c: &CylinderOpen) -> CylinderOpen {
    c.map_fibers(IntervalSet::complement)
}

/// A point of `X × J` where two subsets disagree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompatWitness {
    pub element: String,
    pub level: Rational,
    /// Fiber of `Ψ*(1 − f)` at `element`.
    pub psi_of_complement: IntervalSet,
    /// Fiber of `(X × J) \ Ψ*(f)` at `element`.
    pub complement_of_psi: IntervalSet,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompatReport {
    pub equal: bool,
    pub psi: CylinderOpen,
    pub complement_of_psi: CylinderOpen,
    pub psi_of_complement: CylinderOpen,
    pub witness: Option<CompatWitness>,
}

/// Compares `Ψ*(1 − f)` against `(X × J) \ Ψ*(f)`.
pub fn complement_compat(f: &FuzzySet) -> CompatReport {
    let psi = psi_star(f);
    let complement_of_psi = cyl_complement(&psi);
    let psi_of_complement = psi_star(&fz_complement(f));
    let witness = (0..f.ground().len()).find_map(|i| {
        let a = psi_of_complement.fiber_at(i);
        let b = complement_of_psi.fiber_at(i);
        if a == b {
            return None;
        }
        let diff = a.intersect(&b.complement()).union(&b.intersect(&a.complement()));
        let level = diff.parts()[0].sample();
        Some(CompatWitness {
            element: f.ground().name(i).to_string(),
            level,
            psi_of_complement: a.clone(),
            complement_of_psi: b.clone(),
        })
    });
    CompatReport {
        equal: witness.is_none(),
        psi,
        complement_of_psi,
        psi_of_complement,
        witness,
    }
}

/// Thresholds at which `{x | T(x) > γ}` can change: `−1`, every value of
/// `T`, and the midpoints between consecutive values of `{−1} ∪ T(X)`.
/// Values `γ ≥ 1` are dropped.
pub fn critical_gammas(t: &FuzzySet) -> Vec<Rational> {
    let mut vals: Vec<Rational> = t.values().to_vec();
    vals.push(Rational::from_integer(-1));
    vals.sort();
    vals.dedup();
    let mut out = vals.clone();
    for w in vals.windows(2) {
        out.push(w[0].midpoint(&w[1]));
    }
    out.retain(|g| g < &Rational::one());
    out.sort();
    out.dedup();
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LawFailure {
    pub law: String,
    pub members: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LawReport {
    pub passed: bool,
    pub checks: usize,
    pub failures: Vec<LawFailure>,
}

/// How many subfamilies [`verify_psi_laws`] enumerates exhaustively before
/// falling back to pairs plus a deterministic stride sample.
pub const PSI_SUBFAMILY_BUDGET: usize = 20_000;
const PSI_SAMPLE: usize = 2_000;

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1usize, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// All index subsets of `0..n` of size `k`, in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Subfamilies (as index lists) checked by [`verify_psi_laws`]: every
/// subfamily of size 1..=4 when that is within [`PSI_SUBFAMILY_BUDGET`];
/// otherwise sizes 1..=2 exhaustively and an evenly strided sample of sizes 3
/// and 4. The full family is always included.
pub fn psi_law_subfamilies(n: usize) -> Vec<Vec<usize>> {
    let total: usize = (1..=4).map(|k| binomial(n, k)).sum();
    let mut out = Vec::new();
    if total <= PSI_SUBFAMILY_BUDGET {
        for k in 1..=4.min(n) {
            out.extend(combinations(n, k));
        }
    } else {
        for k in 1..=2 {
            out.extend(combinations(n, k));
        }
        for k in 3..=4 {
            let count = binomial(n, k);
            let stride = (count / (PSI_SAMPLE / 2)).max(1);
            // Strided walk over the lexicographic enumeration without
            // materializing it.
            let mut idx = 0usize;
            let mut taken = 0usize;
            let mut cur: Vec<usize> = (0..k).collect();
            loop {
                if idx.is_multiple_of(stride) {
                    out.push(cur.clone());
                    taken += 1;
                    if taken >= PSI_SAMPLE / 2 {
                        break;
                    }
                }
                idx += 1;
                // next combination
                let mut i = k;
                loop {
                    if i == 0 {
                        break;
                    }
                    i -= 1;
                    if cur[i] < n - k + i {
                        cur[i] += 1;
                        for j in i + 1..k {
                            cur[j] = cur[j - 1] + 1;
                        }
                        break;
                    }
                    if i == 0 {
                        i = usize::MAX;
                        break;
                    }
                }
                if i == usize::MAX {
                    break;
                }
            }
        }
    }
    if n > 4 || total > PSI_SUBFAMILY_BUDGET {
        out.push((0..n).collect());
    }
    out
}

/// Checks `Ψ*(T1) ∩ Ψ*(T2) = Ψ*(T1 ∧ T2)` for all pairs and
/// `∪ Ψ*(Ti) = Ψ*(∨ Ti)` over [`psi_law_subfamilies`].
pub fn verify_psi_laws(topo: &FuzzyTopology) -> Result<LawReport> {
    let opens = topo.opens();
    let psis: Vec<CylinderOpen> = opens.iter().map(|o| psi_star(&o.values)).collect();
    let mut failures = Vec::new();
    let mut checks = 0usize;
    for i in 0..opens.len() {
        for j in i..opens.len() {
            checks += 1;
            let lhs = psis[i].intersect(&psis[j])?;
            let rhs = psi_star(&crate::fuzzy::fz_meet(&opens[i].values, &opens[j].values)?);
            if lhs != rhs {
                failures.push(LawFailure {
                    law: "psi_meet".into(),
                    members: vec![opens[i].name.clone(), opens[j].name.clone()],
                });
            }
        }
    }
    for fam in psi_law_subfamilies(opens.len()) {
        checks += 1;
        let mut lhs = CylinderOpen::empty(topo.ground());
        for &i in &fam {
            lhs = lhs.union(&psis[i])?;
        }
        let rhs = psi_star(&crate::fuzzy::fz_join(fam.iter().map(|&i| &opens[i].values))?);
        if lhs != rhs {
            failures.push(LawFailure {
                law: "psi_join".into(),
                members: fam.iter().map(|&i| opens[i].name.clone()).collect(),
            });
        }
    }
    Ok(LawReport {
        passed: failures.is_empty(),
        checks,
        failures,
    })
}

/// The worked counterexample: `T = 1/3` in `{0, 1, 1/3}` on `ground`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CounterexampleReport {
    pub topology: Vec<String>,
    pub psi: CylinderOpen,
    pub complement_of_psi: CylinderOpen,
    pub psi_of_complement: CylinderOpen,
    pub verdict: String,
}

pub fn counterexample(ground: &GroundSet) -> Result<CounterexampleReport> {
    let third = Rational::new(1, 3);
    let topo = FuzzyTopology::constants(ground, std::slice::from_ref(&third))?;
    let t = topo.open("1/3")?;
    let r = complement_compat(t);
    Ok(CounterexampleReport {
        topology: topo.opens().iter().map(|o| o.name.clone()).collect(),
        psi: r.psi,
        complement_of_psi: r.complement_of_psi,
        psi_of_complement: r.psi_of_complement,
        verdict: if r.equal { "equal" } else { "unequal" }.into(),
    })
}
