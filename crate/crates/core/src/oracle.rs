// SPDX-License-Identifier: Apache-2.0

//! A discretized stand-in for subsets of `X × J`: membership at the levels
//! `0, 1/N, …, (N−1)/N`. Brute-force constructions here work from membership
//! values and thresholds directly and never look at interval endpoints, so
//! they give an independent check of the symbolic results.

use serde::Serialize;

use crate::cylinder::{CylinderOpen, OpenExpr, SubbasisElem};
use crate::error::{Error, Result};
use crate::fuzzy::{FuzzySet, FuzzyTopology, GroundSet};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GridOracle {
    pub resolution: u32,
    pub elements: Vec<String>,
    pub cells: Vec<Vec<bool>>,
}

fn check_resolution(n: u32) -> Result<()> {
    if n < 2 {
        Err(Error::Precondition(format!("grid resolution {n} is below 2")))
    } else {
        Ok(())
    }
}

fn levels(n: u32) -> Vec<Rational> {
    (0..n).map(|k| Rational::new(i64::from(k), i64::from(n))).collect()
}

impl GridOracle {
    /// Cell `(x, k/N)` is `pred(index of x, k/N)`.
    pub fn from_fn(ground: &GroundSet, n: u32, mut pred: impl FnMut(usize, &Rational) -> bool) -> Result<Self> {
        check_resolution(n)?;
        let lv = levels(n);
        Ok(GridOracle {
            resolution: n,
            elements: ground.elements().to_vec(),
            cells: (0..ground.len())
                .map(|i| lv.iter().map(|a| pred(i, a)).collect())
                .collect(),
        })
    }

    fn zip(&self, other: &GridOracle, f: impl Fn(bool, bool) -> bool) -> Result<GridOracle> {
        if self.resolution != other.resolution || self.elements != other.elements {
            return Err(Error::GroundMismatch);
        }
        Ok(GridOracle {
            resolution: self.resolution,
            elements: self.elements.clone(),
            cells: self
                .cells
                .iter()
                .zip(&other.cells)
                .map(|(a, b)| a.iter().zip(b).map(|(&p, &q)| f(p, q)).collect())
                .collect(),
        })
    }

    pub fn intersect(&self, other: &GridOracle) -> Result<GridOracle> {
        self.zip(other, |a, b| a && b)
    }

    pub fn union(&self, other: &GridOracle) -> Result<GridOracle> {
        self.zip(other, |a, b| a || b)
    }

    pub fn complement(&self) -> GridOracle {
        GridOracle {
            resolution: self.resolution,
            elements: self.elements.clone(),
            cells: self.cells.iter().map(|row| row.iter().map(|c| !c).collect()).collect(),
        }
    }
}

pub fn oracle_rasterize(c: &CylinderOpen, n: u32) -> Result<GridOracle> {
    GridOracle::from_fn(c.ground(), n, |i, a| c.fiber_at(i).contains_unchecked(a))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleDiff {
    pub element: String,
    pub level: Rational,
    pub symbolic: bool,
    pub brute: bool,
}

/// `None` when the rasterized symbolic set equals `brute` everywhere,
/// otherwise the first differing cell.
pub fn oracle_diff(symbolic: &CylinderOpen, brute: &GridOracle) -> Result<Option<OracleDiff>> {
    let raster = oracle_rasterize(symbolic, brute.resolution)?;
    if raster.elements != brute.elements {
        return Err(Error::GroundMismatch);
    }
    let lv = levels(brute.resolution);
    for (i, (a, b)) in raster.cells.iter().zip(&brute.cells).enumerate() {
        if let Some(k) = (0..a.len()).find(|&k| a[k] != b[k]) {
            return Ok(Some(OracleDiff {
                element: brute.elements[i].clone(),
                level: lv[k].clone(),
                symbolic: a[k],
                brute: b[k],
            }));
        }
    }
    Ok(None)
}

pub fn oracle_compare(symbolic: &CylinderOpen, brute: &GridOracle) -> bool {
    matches!(oracle_diff(symbolic, brute), Ok(None))
}

/// `f(x) > α`
pub fn brute_psi(f: &FuzzySet, n: u32) -> Result<GridOracle> {
    GridOracle::from_fn(f.ground(), n, |i, a| f.value_at(i) > a)
}

pub fn brute_subbasis(e: &SubbasisElem, topo: &FuzzyTopology, n: u32) -> Result<GridOracle> {
    match e {
        SubbasisElem::Tstar { open, gamma } => {
            let t = topo.open(open)?;
            GridOracle::from_fn(topo.ground(), n, |i, a| &(t.value_at(i) - a) > gamma)
        }
        SubbasisElem::Pi2 { gamma } => GridOracle::from_fn(topo.ground(), n, |_, a| a > gamma),
    }
}

pub fn brute_open(expr: &OpenExpr, topo: &FuzzyTopology, n: u32) -> Result<GridOracle> {
    let mut acc = GridOracle::from_fn(topo.ground(), n, |_, _| false)?;
    for clause in &expr.clauses {
        let mut meet = GridOracle::from_fn(topo.ground(), n, |_, _| true)?;
        for e in clause {
            meet = meet.intersect(&brute_subbasis(e, topo, n)?)?;
        }
        acc = acc.union(&meet)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cylinder::psi_star;
    use crate::interval::make_interval;
    use crate::rational::q;

    fn ab() -> GroundSet {
        GroundSet::new(["a", "b"]).unwrap()
    }

    #[test]
    fn rasterize_examples() {
        let g = ab();
        let p = psi_star(&FuzzySet::constant(&g, q(1, 3)).unwrap());
        let r = oracle_rasterize(&p, 6).unwrap();
        for row in &r.cells {
            assert_eq!(row, &vec![true, true, false, false, false, false]);
        }
        let w = oracle_rasterize(&CylinderOpen::whole(&g), 4).unwrap();
        assert!(w.cells.iter().flatten().all(|&c| c));
        let e = oracle_rasterize(&CylinderOpen::empty(&g), 4).unwrap();
        assert!(e.cells.iter().flatten().all(|&c| !c));
        assert!(oracle_rasterize(&p, 1).is_err());
    }

    #[test]
    fn compare_examples() {
        let g = ab();
        let f1 = FuzzySet::from_values(&g, vec![q(1, 3), q(5, 8)]).unwrap();
        let f2 = FuzzySet::from_values(&g, vec![q(1, 2), q(1, 4)]).unwrap();
        let meet = psi_star(&f1).intersect(&psi_star(&f2)).unwrap();
        let brute = brute_psi(&f1, 64)
            .unwrap()
            .intersect(&brute_psi(&f2, 64).unwrap())
            .unwrap();
        assert!(oracle_compare(&meet, &brute));
        let join = psi_star(&f1).union(&psi_star(&f2)).unwrap();
        let brute = brute_psi(&f1, 64).unwrap().union(&brute_psi(&f2, 64).unwrap()).unwrap();
        assert!(oracle_compare(&join, &brute));
        let mut fibers = join.fibers().to_vec();
        fibers[1] = make_interval(q(0, 1), q(1, 2), true, false).unwrap();
        let corrupted = CylinderOpen::new(&g, fibers).unwrap();
        let d = oracle_diff(&corrupted, &brute).unwrap().unwrap();
        assert_eq!(d.element, "b");
        assert_eq!(d.level, q(1, 2));
        assert!(!d.symbolic && d.brute);
    }
}
