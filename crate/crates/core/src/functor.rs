// SPDX-License-Identifier: Apache-2.0

//! The path-level shadow of the functor `[F]` attached to a fuzzy set, and
//! the decision of complementation as path inversion.

use serde::Serialize;

use crate::cylinder::{complement_compat, CompatReport};
use crate::error::{Error, Result};
use crate::fuzzy::{fz_complement, FuzzySet};
use crate::path::{chi_eval, eval_path, functor_object_path, grid, normal_form, PathExpr};
use crate::rational::Rational;
use crate::retraction::CylPoint;

/// Resolution of the pointwise comparisons made here.
pub const DEFAULT_GRID: u32 = 64;

#[derive(Clone, Debug)]
pub struct FunctorEval {
    pub fuzzy: FuzzySet,
}

impl FunctorEval {
    pub fn new(fuzzy: FuzzySet) -> Self {
        FunctorEval { fuzzy }
    }

    pub fn object_path(&self, y: &str, z: &str, beta: &Rational) -> Result<PathExpr> {
        functor_object_path(&self.fuzzy, y, z, beta)
    }

    /// `χ_{γ, κ(F(y), 1−F(y))}(η, x)`
    pub fn morphism_eval(&self, y: &str, gamma: &PathExpr, eta: &Rational, x: &Rational) -> Result<CylPoint> {
        let fy = self.fuzzy.value(y)?;
        chi_eval(gamma, fy, &(Rational::one() - fy), eta, x)
    }
}

fn check_same_ground(f: &FuzzySet, g: &FuzzySet) -> Result<()> {
    if f.ground() == g.ground() {
        Ok(())
    } else {
        Err(Error::GroundMismatch)
    }
}

/// `p` evaluates as the reversal of `q`, both on the grid and as normal forms.
fn is_reversal(p: &PathExpr, q: &PathExpr, n: u32) -> Result<bool> {
    let one = Rational::one();
    for u in grid(n) {
        if eval_path(p, &u)? != eval_path(q, &(&one - &u))? {
            return Ok(false);
        }
    }
    Ok(normal_form(p)? == normal_form(&PathExpr::reverse(q.clone()))?)
}

/// Decides whether the `G`-object paths invert the `F`-object paths, probing
/// every `y` at level `beta` over a fixed fiber element `z`. `beta = 0` makes
/// every object path constant and is refused.
pub fn is_complement_with_probe(f: &FuzzySet, g: &FuzzySet, beta: &Rational) -> Result<bool> {
    check_same_ground(f, g)?;
    if beta.is_zero() {
        return Err(Error::Precondition("probe level must be nonzero".into()));
    }
    let z = f.ground().name(0);
    for y in f.ground().elements() {
        let pf = functor_object_path(f, y, z, beta)?;
        let pg = functor_object_path(g, y, z, beta)?;
        if !is_reversal(&pg, &pf, DEFAULT_GRID)? {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn is_complement(f: &FuzzySet, g: &FuzzySet) -> Result<bool> {
    is_complement_with_probe(f, g, &Rational::half())
}

/// Pointwise `G = 1 − F`.
pub fn is_complement_direct(f: &FuzzySet, g: &FuzzySet) -> Result<bool> {
    check_same_ground(f, g)?;
    Ok(g == &fz_complement(f))
}

pub fn check_constant_inverse(f: &FuzzySet, y: &str, z: &str, beta: &Rational) -> Result<bool> {
    let p = functor_object_path(&fz_complement(f), y, z, beta)?;
    let q = functor_object_path(f, y, z, beta)?;
    is_reversal(&p, &q, DEFAULT_GRID)
}

/// Morphism evaluation of `γ * δ` against the halving paste of the
/// evaluations of `γ` and `δ`, over an `n × n` grid of `(η, x)`.
pub fn check_functoriality_on(f: &FuzzySet, y: &str, gamma: &PathExpr, delta: &PathExpr, n: u32) -> Result<bool> {
    let fe = FunctorEval::new(f.clone());
    let (ge, ds) = (gamma.end()?, delta.start()?);
    if ge != ds {
        return Err(Error::EndpointMismatch(format!("{ge} vs {ds}")));
    }
    // the two χ squares share an edge
    let one = Rational::one();
    for x in grid(n) {
        if fe.morphism_eval(y, gamma, &one, &x)? != fe.morphism_eval(y, delta, &Rational::zero(), &x)? {
            return Ok(false);
        }
    }
    let joined = PathExpr::concat(vec![gamma.clone(), delta.clone()]);
    let two = Rational::from_integer(2);
    for eta in grid(n) {
        for x in grid(n) {
            let lhs = fe.morphism_eval(y, &joined, &eta, &x)?;
            let rhs = if eta <= Rational::half() {
                fe.morphism_eval(y, gamma, &(&eta * &two), &x)?
            } else {
                fe.morphism_eval(y, delta, &(&eta * &two - &one), &x)?
            };
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub fn check_functoriality(f: &FuzzySet, y: &str, gamma: &PathExpr, delta: &PathExpr) -> Result<bool> {
    check_functoriality_on(f, y, gamma, delta, DEFAULT_GRID)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComplementReport {
    pub inversion: bool,
    pub direct: bool,
    pub cylinder_complement_compatible: bool,
    pub compat: CompatReport,
}

pub fn complement_report(f: &FuzzySet, g: &FuzzySet) -> Result<ComplementReport> {
    let compat = complement_compat(f);
    Ok(ComplementReport {
        inversion: is_complement(f, g)?,
        direct: is_complement_direct(f, g)?,
        cylinder_complement_compatible: compat.equal,
        compat,
    })
}
