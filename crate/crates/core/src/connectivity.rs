// SPDX-License-Identifier: Apache-2.0

//! Path-connectivity of the cylinder, decided through the base space and
//! backed by a certificate either way: explicit paths between grid points
//! when `ι_X(T)` is connected, and an open-and-closed fiber block otherwise.

use std::collections::VecDeque;

use serde::Serialize;

use crate::base::{check_pc_lpc, ConnectivityReport, FiniteTopology, Mask};
use crate::cylinder::{open_realize, CylinderOpen, OpenExpr, SubbasisElem};
use crate::error::Result;
use crate::fuzzy::FuzzyTopology;
use crate::interval::IntervalSet;
use crate::path::{continuity_failure, FencePath, PathExpr};
use crate::random::PathCtx;
use crate::rational::Rational;
use crate::retraction::CylPoint;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PathFailure {
    pub from: CylPoint,
    pub to: CylPoint,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// Every pair of grid points is joined by a continuous DSL path.
    Paths {
        levels: Vec<Rational>,
        pairs: usize,
        failures: Vec<PathFailure>,
    },
    /// `component × J` and its complement are both realized as opens.
    Separation {
        component: Vec<String>,
        inside: OpenExpr,
        outside: OpenExpr,
        inside_ok: bool,
        outside_ok: bool,
    },
}

impl Certificate {
    pub fn holds(&self) -> bool {
        match self {
            Certificate::Paths { failures, .. } => failures.is_empty(),
            Certificate::Separation {
                inside_ok, outside_ok, ..
            } => *inside_ok && *outside_ok,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CylinderConnectivity {
    pub base: ConnectivityReport,
    pub certificate: Certificate,
}

/// Shortest walk from `a` to `b` along comparable pairs.
fn comparable_walk(ft: &FiniteTopology, a: usize, b: usize) -> Option<Vec<usize>> {
    let pre = ft.specialization();
    let n = ft.ground().len();
    let mut prev = vec![usize::MAX; n];
    prev[a] = a;
    let mut queue = VecDeque::from([a]);
    while let Some(c) = queue.pop_front() {
        if c == b {
            let mut walk = vec![b];
            let mut cur = b;
            while cur != a {
                cur = prev[cur];
                walk.push(cur);
            }
            walk.reverse();
            return Some(walk);
        }
        for (y, slot) in prev.iter_mut().enumerate() {
            if *slot == usize::MAX && pre.comparable(c, y) {
                *slot = c;
                queue.push_back(y);
            }
        }
    }
    None
}

/// `(x,α) → (x,0) → fence → (y,0) → (y,β)`.
pub fn connecting_path(ft: &FiniteTopology, from: &CylPoint, to: &CylPoint) -> Result<Option<PathExpr>> {
    let g = ft.ground();
    let (a, b) = (g.index_of(&from.x)?, g.index_of(&to.x)?);
    let Some(walk) = comparable_walk(ft, a, b) else {
        return Ok(None);
    };
    let names: Vec<&str> = walk.iter().map(|&i| g.name(i)).collect();
    let zero = Rational::zero();
    Ok(Some(PathExpr::concat(vec![
        PathExpr::vertical(from.x.clone(), from.alpha.clone(), zero.clone()),
        PathExpr::lift(FencePath::through(&names, ft)?, zero.clone()),
        PathExpr::vertical(to.x.clone(), zero, to.alpha.clone()),
    ])))
}

fn check_path(ctx: &PathCtx, topo: &FuzzyTopology, from: &CylPoint, to: &CylPoint) -> Result<Option<String>> {
    let Some(e) = connecting_path(&ctx.ft, from, to)? else {
        return Ok(Some("no comparable walk".into()));
    };
    if let Err(err) = e.validate_in(&ctx.ft) {
        return Ok(Some(err.to_string()));
    }
    if &e.start()? != from || &e.end()? != to {
        return Ok(Some("endpoints differ".into()));
    }
    Ok(continuity_failure(&e, topo)?.map(|t| format!("preimage of {t} is not open")))
}

/// Half the smallest positive gap between membership values and `{0, 1}`.
fn separation_step(topo: &FuzzyTopology) -> Rational {
    let mut vals: Vec<Rational> = topo
        .opens()
        .iter()
        .flat_map(|o| o.values.values().iter().cloned())
        .chain([Rational::zero(), Rational::one()])
        .collect();
    vals.sort();
    vals.dedup();
    let gap = vals
        .windows(2)
        .map(|w| &w[1] - &w[0])
        .min()
        .unwrap_or_else(Rational::one);
    gap * Rational::half()
}

/// An expression for `block × J`. Each clause is a box around `(x, α_k)`:
/// `α > α_k − ε` together with `T(y) − α > T(x) − α_k − ε` for every open
/// positive at `x`. Points of the clause satisfy `T(y) ≥ T(x)` for those
/// opens, which puts `y` above `x` in the specialization preorder, so inside
/// the component of `x`.
fn block_expr(topo: &FuzzyTopology, block: Mask) -> OpenExpr {
    let eps = separation_step(topo);
    let neg_one = Rational::from_integer(-1);
    let mut clauses = Vec::new();
    for (i, _) in topo.ground().elements().iter().enumerate() {
        if block >> i & 1 == 0 {
            continue;
        }
        let mut ak = Rational::zero();
        while ak < Rational::one() {
            let mut clause = vec![SubbasisElem::pi2(&ak - &eps)];
            for o in topo.opens() {
                let v = o.values.value_at(i);
                if v.is_positive() {
                    let g = (v - &ak - &eps).max(neg_one.clone());
                    clause.push(SubbasisElem::tstar(o.name.clone(), g));
                }
            }
            clauses.push(clause);
            ak = ak + &eps;
        }
    }
    OpenExpr { clauses }
}

fn block_cylinder(topo: &FuzzyTopology, block: Mask) -> CylinderOpen {
    let fibers = (0..topo.ground().len())
        .map(|i| {
            if block >> i & 1 == 1 {
                IntervalSet::whole()
            } else {
                IntervalSet::empty()
            }
        })
        .collect();
    CylinderOpen::new(topo.ground(), fibers).expect("one fiber per element")
}

/// Levels `0, 1/n, …, (n−1)/n` used for the path certificate.
pub fn cylinder_connectivity(topo: &FuzzyTopology, n: u32) -> Result<CylinderConnectivity> {
    let base = check_pc_lpc(topo)?;
    let ctx = PathCtx::new(topo)?;
    let certificate = if base.pc {
        let levels: Vec<Rational> = (0..n).map(|k| Rational::new(i64::from(k), i64::from(n))).collect();
        let points: Vec<CylPoint> = topo
            .ground()
            .elements()
            .iter()
            .flat_map(|x| {
                levels.iter().map(move |a| CylPoint {
                    x: x.clone(),
                    alpha: a.clone(),
                })
            })
            .collect();
        let mut failures = Vec::new();
        let mut pairs = 0;
        for from in &points {
            for to in &points {
                pairs += 1;
                if let Some(reason) = check_path(&ctx, topo, from, to)? {
                    failures.push(PathFailure {
                        from: from.clone(),
                        to: to.clone(),
                        reason,
                    });
                }
            }
        }
        Certificate::Paths {
            levels,
            pairs,
            failures,
        }
    } else {
        let comp = &base.components[0];
        let block = ctx.ft.mask_of(comp)?;
        let rest = ctx.ft.full() & !block;
        let inside = block_expr(topo, block);
        let outside = block_expr(topo, rest);
        let inside_ok = open_realize(&inside, topo)? == block_cylinder(topo, block);
        let outside_ok = open_realize(&outside, topo)? == block_cylinder(topo, rest);
        Certificate::Separation {
            component: comp.clone(),
            inside,
            outside,
            inside_ok,
            outside_ok,
        }
    };
    Ok(CylinderConnectivity { base, certificate })
}
