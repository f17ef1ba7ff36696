// SPDX-License-Identifier: Apache-2.0

//! A closed language of paths `I → X × J` with exact evaluation.
//!
//! Every [`PathExpr`] is piecewise affine in the level coordinate and
//! piecewise constant in the ground coordinate, so it has a finite normal
//! form ([`NormalForm`]). Containment in an open set, preimages of subbasis
//! members and equality of paths are all decided on that normal form, while
//! [`eval_path`] evaluates the expression tree directly. The two routes are
//! cross-checked in the tests.

use serde::{Deserialize, Serialize};

use crate::base::{FiniteTopology, SpecializationPreorder};
use crate::cylinder::{CylinderOpen, SubbasisElem};
use crate::error::{Error, Result};
use crate::fuzzy::{FuzzySet, FuzzyTopology, GroundSet};
use crate::interval::{Interval, IntervalSet, UnitSet};
use crate::rational::Rational;
use crate::retraction::{h_eval, CylPoint};

/// Which endpoint of a fence segment the segment midpoint maps to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
}

/// A path in the finite space `X`: `points[0], …, points[k]` on the equal
/// subdivision of `I`. On segment `i` the path is `points[i]` before the
/// midpoint and `points[i+1]` after it; the midpoint itself goes to the side
/// named by `mid[i]`, which must be the specialization-lower of the two so
/// that the side carrying the upper point is open.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FencePath {
    pub points: Vec<String>,
    pub mid: Vec<Side>,
}

impl FencePath {
    pub fn constant(x: impl Into<String>) -> Self {
        FencePath {
            points: vec![x.into()],
            mid: Vec::new(),
        }
    }

    /// Builds the fence through `points`, picking midpoint sides from the
    /// specialization preorder of `ft`.
    pub fn through<S: AsRef<str>>(points: &[S], ft: &FiniteTopology) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::MalformedPath("fence without points".into()));
        }
        let pre = ft.specialization();
        let g = ft.ground();
        let mut mid = Vec::with_capacity(points.len() - 1);
        for w in points.windows(2) {
            let (a, b) = (g.index_of(w[0].as_ref())?, g.index_of(w[1].as_ref())?);
            mid.push(if pre.le(b, a) {
                Side::Right
            } else if pre.le(a, b) {
                Side::Left
            } else {
                return Err(Error::MalformedPath(format!(
                    "{} and {} are not comparable",
                    w[0].as_ref(),
                    w[1].as_ref()
                )));
            });
        }
        Ok(FencePath {
            points: points.iter().map(|s| s.as_ref().to_string()).collect(),
            mid,
        })
    }

    fn check_shape(&self) -> Result<()> {
        if self.points.is_empty() {
            return Err(Error::MalformedPath("fence without points".into()));
        }
        if self.mid.len() + 1 != self.points.len() {
            return Err(Error::MalformedPath(format!(
                "fence with {} points needs {} midpoint sides, got {}",
                self.points.len(),
                self.points.len() - 1,
                self.mid.len()
            )));
        }
        Ok(())
    }

    /// Continuity against the specialization preorder: consecutive points are
    /// comparable and each midpoint goes to a lower one.
    pub fn check_continuous(&self, pre: &SpecializationPreorder) -> Result<()> {
        self.check_shape()?;
        let g = pre.ground();
        for (i, w) in self.points.windows(2).enumerate() {
            let (a, b) = (g.index_of(&w[0])?, g.index_of(&w[1])?);
            let ok = match self.mid[i] {
                Side::Left => pre.le(a, b),
                Side::Right => pre.le(b, a),
            };
            if !ok {
                return Err(Error::MalformedPath(format!(
                    "fence segment {} -> {} is not continuous with midpoint on the {:?}",
                    w[0], w[1], self.mid[i]
                )));
            }
        }
        Ok(())
    }

    fn segments(&self) -> usize {
        self.points.len() - 1
    }

    pub fn eval(&self, u: &Rational) -> Result<&str> {
        u.check_unit("u")?;
        self.check_shape()?;
        let k = self.segments();
        if k == 0 || u.is_one() {
            return Ok(self.points.last().unwrap());
        }
        let scaled = u * Rational::from_integer(k as i64);
        let i = floor_index(&scaled);
        let frac = &scaled - Rational::from_integer(i as i64);
        let half = Rational::half();
        let idx = if frac < half {
            i
        } else if frac > half {
            i + 1
        } else {
            match self.mid[i] {
                Side::Left => i,
                Side::Right => i + 1,
            }
        };
        Ok(&self.points[idx])
    }
}

fn floor_index(r: &Rational) -> usize {
    use num_integer::Integer;
    let f = r.numer().div_floor(r.denom());
    usize::try_from(f).expect("nonnegative index")
}

/// Paths in `X × J`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum PathExpr {
    Const {
        point: CylPoint,
    },
    /// `u ↦ (x, a0 + (a1 − a0)u)`
    VerticalAffine {
        x: String,
        a0: Rational,
        a1: Rational,
    },
    /// The fence in `X` lifted to a constant level.
    HLift {
        base: FencePath,
        level: Rational,
    },
    /// Left-nested binary concatenation, each join halving the parameter.
    Concat {
        parts: Vec<PathExpr>,
    },
    Reverse {
        inner: Box<PathExpr>,
    },
    /// `u ↦ H(t, inner(u))`
    HTransform {
        t: Rational,
        inner: Box<PathExpr>,
    },
    /// `x ↦ H(κ(s,t)(x), rho(end))`
    ChiBoundary {
        rho: Box<PathExpr>,
        s: Rational,
        t: Rational,
        end: u8,
    },
}

impl PathExpr {
    pub fn constant(x: impl Into<String>, alpha: Rational) -> Self {
        PathExpr::Const {
            point: CylPoint { x: x.into(), alpha },
        }
    }

    pub fn vertical(x: impl Into<String>, a0: Rational, a1: Rational) -> Self {
        PathExpr::VerticalAffine { x: x.into(), a0, a1 }
    }

    pub fn lift(base: FencePath, level: Rational) -> Self {
        PathExpr::HLift { base, level }
    }

    pub fn concat(parts: Vec<PathExpr>) -> Self {
        PathExpr::Concat { parts }
    }

    pub fn reverse(inner: PathExpr) -> Self {
        PathExpr::Reverse { inner: Box::new(inner) }
    }

    pub fn h_transform(t: Rational, inner: PathExpr) -> Self {
        PathExpr::HTransform {
            t,
            inner: Box::new(inner),
        }
    }

    pub fn chi_boundary(rho: PathExpr, s: Rational, t: Rational, end: u8) -> Self {
        PathExpr::ChiBoundary {
            rho: Box::new(rho),
            s,
            t,
            end,
        }
    }

    pub fn start(&self) -> Result<CylPoint> {
        eval_path(self, &Rational::zero())
    }

    pub fn end(&self) -> Result<CylPoint> {
        eval_path(self, &Rational::one())
    }

    /// Structural checks: scalars in range, fences well shaped, elements
    /// present in `ground`, concatenations endpoint-compatible.
    pub fn validate(&self, ground: &GroundSet) -> Result<()> {
        match self {
            PathExpr::Const { point } => point.check_in(ground),
            PathExpr::VerticalAffine { x, a0, a1 } => {
                ground.index_of(x)?;
                a0.check_j("a0")?;
                a1.check_j("a1")
            }
            PathExpr::HLift { base, level } => {
                base.check_shape()?;
                for p in &base.points {
                    ground.index_of(p)?;
                }
                level.check_j("level")
            }
            PathExpr::Concat { parts } => {
                if parts.is_empty() {
                    return Err(Error::MalformedPath("empty concatenation".into()));
                }
                for p in parts {
                    p.validate(ground)?;
                }
                for (i, w) in parts.windows(2).enumerate() {
                    let (e, s) = (w[0].end()?, w[1].start()?);
                    if e != s {
                        return Err(Error::EndpointMismatch(format!(
                            "part {i} ends at {e}, part {} starts at {s}",
                            i + 1
                        )));
                    }
                }
                Ok(())
            }
            PathExpr::Reverse { inner } => inner.validate(ground),
            PathExpr::HTransform { t, inner } => {
                t.check_unit("t")?;
                inner.validate(ground)
            }
            PathExpr::ChiBoundary { rho, s, t, end } => {
                s.check_unit("s")?;
                t.check_unit("t")?;
                if *end > 1 {
                    return Err(Error::MalformedPath(format!("chi boundary end {end}")));
                }
                rho.validate(ground)
            }
        }
    }

    /// [`PathExpr::validate`] plus continuity of every fence in `ft`.
    pub fn validate_in(&self, ft: &FiniteTopology) -> Result<()> {
        self.validate(ft.ground())?;
        let pre = ft.specialization();
        self.visit_fences(&mut |f| f.check_continuous(&pre))
    }

    fn visit_fences(&self, f: &mut impl FnMut(&FencePath) -> Result<()>) -> Result<()> {
        match self {
            PathExpr::Const { .. } | PathExpr::VerticalAffine { .. } => Ok(()),
            PathExpr::HLift { base, .. } => f(base),
            PathExpr::Concat { parts } => parts.iter().try_for_each(|p| p.visit_fences(f)),
            PathExpr::Reverse { inner } | PathExpr::HTransform { inner, .. } => inner.visit_fences(f),
            PathExpr::ChiBoundary { rho, .. } => rho.visit_fences(f),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            PathExpr::Const { .. } | PathExpr::VerticalAffine { .. } | PathExpr::HLift { .. } => 1,
            PathExpr::Concat { parts } => 1 + parts.iter().map(PathExpr::depth).max().unwrap_or(0),
            PathExpr::Reverse { inner } | PathExpr::HTransform { inner, .. } => 1 + inner.depth(),
            PathExpr::ChiBoundary { rho, .. } => 1 + rho.depth(),
        }
    }
}

/// `κ(s,t)(x) = (t − s)x + s`
pub fn kappa(s: &Rational, t: &Rational, x: &Rational) -> Result<Rational> {
    s.check_unit("s")?;
    t.check_unit("t")?;
    x.check_unit("x")?;
    Ok((t - s) * x + s)
}

fn eval_concat(parts: &[PathExpr], u: &Rational) -> Result<CylPoint> {
    match parts {
        [] => Err(Error::MalformedPath("empty concatenation".into())),
        [only] => eval_path(only, u),
        [init @ .., last] => {
            let two = Rational::from_integer(2);
            if u <= &Rational::half() {
                eval_concat(init, &(u * &two))
            } else {
                eval_path(last, &(u * &two - Rational::one()))
            }
        }
    }
}

pub fn eval_path(e: &PathExpr, u: &Rational) -> Result<CylPoint> {
    u.check_unit("u")?;
    match e {
        PathExpr::Const { point } => Ok(point.clone()),
        PathExpr::VerticalAffine { x, a0, a1 } => Ok(CylPoint {
            x: x.clone(),
            alpha: a0 + (a1 - a0) * u,
        }),
        PathExpr::HLift { base, level } => Ok(CylPoint {
            x: base.eval(u)?.to_string(),
            alpha: level.clone(),
        }),
        PathExpr::Concat { parts } => eval_concat(parts, u),
        PathExpr::Reverse { inner } => eval_path(inner, &(Rational::one() - u)),
        PathExpr::HTransform { t, inner } => h_eval(t, &eval_path(inner, u)?),
        PathExpr::ChiBoundary { rho, s, t, end } => {
            let eta = Rational::from_integer(i64::from(*end));
            chi_eval(rho, s, t, &eta, u)
        }
    }
}

/// `χ_{ρ,κ(s,t)}(η, x) = H(κ(s,t)(x), ρ(η))`
pub fn chi_eval(rho: &PathExpr, s: &Rational, t: &Rational, eta: &Rational, x: &Rational) -> Result<CylPoint> {
    h_eval(&kappa(s, t, x)?, &eval_path(rho, eta)?)
}

/// The vertical edge `x ↦ χ(end, x)` of the χ square.
pub fn chi_boundary(rho: &PathExpr, s: &Rational, t: &Rational, end: u8) -> Result<PathExpr> {
    if end > 1 {
        return Err(Error::MalformedPath(format!("chi boundary end {end}")));
    }
    s.check_unit("s")?;
    t.check_unit("t")?;
    let p = eval_path(rho, &Rational::from_integer(i64::from(end)))?;
    let one = Rational::one();
    Ok(PathExpr::vertical(p.x, (&one - s) * &p.alpha, (&one - t) * &p.alpha))
}

/// `u ↦ H(κ(F(y), 1−F(y))(u), (z,β))`, a vertical path at `z`.
pub fn functor_object_path(f: &FuzzySet, y: &str, z: &str, beta: &Rational) -> Result<PathExpr> {
    beta.check_j("beta")?;
    f.ground().index_of(z)?;
    let fy = f.value(y)?;
    let one = Rational::one();
    Ok(PathExpr::vertical(z, (&one - fy) * beta, fy * beta))
}

/// One affine piece: on `dom`, the path is `(x, c + m·u)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Piece {
    pub dom: Interval,
    pub x: String,
    pub c: Rational,
    pub m: Rational,
}

impl Piece {
    fn at(&self, u: &Rational) -> Rational {
        &self.c + &self.m * u
    }

    /// Levels swept over `dom`.
    pub fn image(&self) -> Interval {
        let d = &self.dom;
        if self.m.is_zero() {
            return Interval::point(self.c.clone());
        }
        let (a, b) = (self.at(d.lo()), self.at(d.hi()));
        if self.m.is_positive() {
            Interval::new(a, b, d.lo_closed(), d.hi_closed())
        } else {
            Interval::new(b, a, d.hi_closed(), d.lo_closed())
        }
        .expect("nondegenerate domain")
    }
}

/// Canonical piecewise-affine form of a path over `[0,1]`. Two paths are
/// equal as maps iff their normal forms are equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct NormalForm {
    pub pieces: Vec<Piece>,
}

fn unit_interval() -> Interval {
    Interval::new(Rational::zero(), Rational::one(), true, true).unwrap()
}

fn raw_pieces(e: &PathExpr) -> Result<Vec<Piece>> {
    let zero = Rational::zero();
    let one = Rational::one();
    match e {
        PathExpr::Const { point } => Ok(vec![Piece {
            dom: unit_interval(),
            x: point.x.clone(),
            c: point.alpha.clone(),
            m: zero,
        }]),
        PathExpr::VerticalAffine { x, a0, a1 } => Ok(vec![Piece {
            dom: unit_interval(),
            x: x.clone(),
            c: a0.clone(),
            m: a1 - a0,
        }]),
        PathExpr::HLift { base, level } => {
            base.check_shape()?;
            let k = base.segments();
            let mk = |dom: Interval, i: usize| Piece {
                dom,
                x: base.points[i].clone(),
                c: level.clone(),
                m: Rational::zero(),
            };
            if k == 0 {
                return Ok(vec![mk(unit_interval(), 0)]);
            }
            let kk = k as i64;
            let mut out = Vec::with_capacity(2 * k);
            for i in 0..k {
                let lo = Rational::new(i as i64, kk);
                let hi = Rational::new(i as i64 + 1, kk);
                let mid = Rational::new(2 * i as i64 + 1, 2 * kk);
                let last = i + 1 == k;
                let left_closed = base.mid[i] == Side::Left;
                out.push(mk(Interval::new(lo, mid.clone(), true, left_closed).unwrap(), i));
                out.push(mk(Interval::new(mid, hi, !left_closed, last).unwrap(), i + 1));
            }
            Ok(out)
        }
        PathExpr::Concat { parts } => concat_pieces(parts),
        PathExpr::Reverse { inner } => {
            let mut v: Vec<Piece> = raw_pieces(inner)?
                .into_iter()
                .map(|p| Piece {
                    dom: Interval::new(
                        &one - p.dom.hi(),
                        &one - p.dom.lo(),
                        p.dom.hi_closed(),
                        p.dom.lo_closed(),
                    )
                    .unwrap(),
                    x: p.x,
                    c: &p.c + &p.m,
                    m: -p.m,
                })
                .collect();
            v.reverse();
            Ok(v)
        }
        PathExpr::HTransform { t, inner } => {
            t.check_unit("t")?;
            let k = &one - t;
            Ok(raw_pieces(inner)?
                .into_iter()
                .map(|p| Piece {
                    dom: p.dom,
                    x: p.x,
                    c: &p.c * &k,
                    m: &p.m * &k,
                })
                .collect())
        }
        PathExpr::ChiBoundary { rho, s, t, end } => raw_pieces(&chi_boundary(rho, s, t, *end)?),
    }
}

fn concat_pieces(parts: &[PathExpr]) -> Result<Vec<Piece>> {
    let two = Rational::from_integer(2);
    let half = Rational::half();
    match parts {
        [] => Err(Error::MalformedPath("empty concatenation".into())),
        [only] => raw_pieces(only),
        [init @ .., last] => {
            let mut out: Vec<Piece> = concat_pieces(init)?
                .into_iter()
                .map(|p| Piece {
                    dom: Interval::new(
                        p.dom.lo() * &half,
                        p.dom.hi() * &half,
                        p.dom.lo_closed(),
                        p.dom.hi_closed(),
                    )
                    .unwrap(),
                    x: p.x,
                    c: p.c,
                    m: &p.m * &two,
                })
                .collect();
            let right_half = Interval::new(half.clone(), Rational::one(), false, true).unwrap();
            for p in raw_pieces(last)? {
                let dom = Interval::new(
                    (p.dom.lo() + Rational::one()) * &half,
                    (p.dom.hi() + Rational::one()) * &half,
                    p.dom.lo_closed(),
                    p.dom.hi_closed(),
                )
                .unwrap();
                if let Some(dom) = dom.intersect(&right_half) {
                    out.push(Piece {
                        dom,
                        x: p.x,
                        c: &p.c - &p.m,
                        m: &p.m * &two,
                    });
                }
            }
            Ok(out)
        }
    }
}

enum Atom {
    Point {
        u: Rational,
        x: String,
        v: Rational,
    },
    Open {
        lo: Rational,
        hi: Rational,
        x: String,
        c: Rational,
        m: Rational,
    },
}

/// Splits pieces into alternating points and open intervals, then merges
/// greedily from the left. The atoms only depend on the map, so the merged
/// list does too.
fn canonicalize(pieces: Vec<Piece>) -> Vec<Piece> {
    let mut atoms = Vec::new();
    for p in pieces {
        let d = &p.dom;
        if d.is_point() {
            atoms.push(Atom::Point {
                u: d.lo().clone(),
                x: p.x.clone(),
                v: p.at(d.lo()),
            });
            continue;
        }
        if d.lo_closed() {
            atoms.push(Atom::Point {
                u: d.lo().clone(),
                x: p.x.clone(),
                v: p.at(d.lo()),
            });
        }
        atoms.push(Atom::Open {
            lo: d.lo().clone(),
            hi: d.hi().clone(),
            x: p.x.clone(),
            c: p.c.clone(),
            m: p.m.clone(),
        });
        if d.hi_closed() {
            atoms.push(Atom::Point {
                u: d.hi().clone(),
                x: p.x.clone(),
                v: p.at(d.hi()),
            });
        }
    }
    let mut out: Vec<Piece> = Vec::new();
    for a in atoms {
        let cur = out.last_mut();
        match a {
            Atom::Point { u, x, v } => {
                if let Some(cur) = cur {
                    if cur.x == x && cur.at(&u) == v {
                        cur.dom = Interval::new(cur.dom.lo().clone(), u, cur.dom.lo_closed(), true).unwrap();
                        continue;
                    }
                }
                out.push(Piece {
                    dom: Interval::point(u),
                    x,
                    c: v,
                    m: Rational::zero(),
                });
            }
            Atom::Open { lo, hi, x, c, m } => {
                if let Some(cur) = cur {
                    let point_joins = cur.dom.is_point() && cur.x == x && &c + &m * cur.dom.lo() == cur.c;
                    let same = !cur.dom.is_point() && cur.x == x && cur.c == c && cur.m == m;
                    if point_joins || same {
                        cur.dom = Interval::new(cur.dom.lo().clone(), hi, cur.dom.lo_closed(), false).unwrap();
                        cur.c = c;
                        cur.m = m;
                        continue;
                    }
                }
                out.push(Piece {
                    dom: Interval::new(lo, hi, false, false).unwrap(),
                    x,
                    c,
                    m,
                });
            }
        }
    }
    out
}

pub fn normal_form(e: &PathExpr) -> Result<NormalForm> {
    Ok(NormalForm {
        pieces: canonicalize(raw_pieces(e)?),
    })
}

impl NormalForm {
    /// The path `η ↦ self(a + η(b − a))` for `0 ≤ a < b ≤ 1`.
    pub fn restrict(&self, a: &Rational, b: &Rational) -> Result<NormalForm> {
        a.check_unit("a")?;
        b.check_unit("b")?;
        if a >= b {
            return Err(Error::Precondition(format!("restriction to [{a},{b}]")));
        }
        let window = Interval::new(a.clone(), b.clone(), true, true).unwrap();
        let w = b - a;
        let pieces = self
            .pieces
            .iter()
            .filter_map(|p| {
                let d = p.dom.intersect(&window)?;
                Some(Piece {
                    dom: Interval::new((d.lo() - a) / &w, (d.hi() - a) / &w, d.lo_closed(), d.hi_closed()).unwrap(),
                    x: p.x.clone(),
                    c: &p.c + &p.m * a,
                    m: &p.m * &w,
                })
            })
            .collect();
        Ok(NormalForm {
            pieces: canonicalize(pieces),
        })
    }

    pub fn eval(&self, u: &Rational) -> Result<CylPoint> {
        u.check_unit("u")?;
        let p = self
            .pieces
            .iter()
            .find(|p| p.dom.contains(u))
            .ok_or_else(|| Error::MalformedPath(format!("no piece covers {u}")))?;
        Ok(CylPoint {
            x: p.x.clone(),
            alpha: p.at(u),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PathContainment {
    pub contained: bool,
    /// A parameter and the point it maps to outside the open.
    pub witness: Option<(Rational, CylPoint)>,
}

/// Exact containment of the image of `e` in `open`.
pub fn path_in_open(e: &PathExpr, open: &CylinderOpen) -> Result<PathContainment> {
    for p in normal_form(e)?.pieces {
        let img = IntervalSet::from_intervals([p.image()]);
        let fib = open.fiber(&p.x)?;
        let outside = img.intersect(&fib.complement());
        if let Some(part) = outside.parts().first() {
            let level = part.sample();
            let u = if p.m.is_zero() {
                p.dom.sample()
            } else {
                (&level - &p.c) / &p.m
            };
            return Ok(PathContainment {
                contained: false,
                witness: Some((u, CylPoint { x: p.x, alpha: level })),
            });
        }
    }
    Ok(PathContainment {
        contained: true,
        witness: None,
    })
}

/// `{u ∈ dom | m·u < r}` (or `>` when `greater`).
fn solve_linear(dom: &Interval, m: &Rational, r: &Rational, greater: bool) -> Option<Interval> {
    if m.is_zero() {
        let holds = if greater { r.is_negative() } else { r.is_positive() };
        return holds.then(|| dom.clone());
    }
    let b = r / m;
    // m·u < r  ⇔  u < b (m > 0) or u > b (m < 0); flipped for `greater`.
    let below = m.is_positive() != greater;
    if below {
        let hi_closed = if &b > dom.hi() { dom.hi_closed() } else { false };
        Interval::new(dom.lo().clone(), b.min(dom.hi().clone()), dom.lo_closed(), hi_closed)
    } else {
        let lo_closed = if &b < dom.lo() { dom.lo_closed() } else { false };
        Interval::new(b.max(dom.lo().clone()), dom.hi().clone(), lo_closed, dom.hi_closed())
    }
}

/// Exact `{u ∈ [0,1] | e(u) ∈ target}`.
pub fn path_preimage(e: &PathExpr, target: &SubbasisElem, topo: &FuzzyTopology) -> Result<UnitSet> {
    let mut parts = Vec::new();
    for p in normal_form(e)?.pieces {
        let piece = match target {
            // T(x) − (c + m·u) > γ  ⇔  m·u < T(x) − γ − c
            SubbasisElem::Tstar { open, gamma } => {
                let tx = topo.open(open)?.value(&p.x)?;
                solve_linear(&p.dom, &p.m, &(tx - gamma - &p.c), false)
            }
            // c + m·u > γ  ⇔  m·u > γ − c
            SubbasisElem::Pi2 { gamma } => solve_linear(&p.dom, &p.m, &(gamma - &p.c), true),
        };
        parts.extend(piece);
    }
    Ok(UnitSet::from_intervals(parts))
}

pub fn path_preimage_open(e: &PathExpr, target: &SubbasisElem, topo: &FuzzyTopology) -> Result<bool> {
    Ok(path_preimage(e, target, topo)?.is_open())
}

/// Subbasis members worth testing a path against: thresholds on an eighths
/// grid, the critical thresholds of every open, and the thresholds that put
/// a boundary exactly at a level the path takes at a piece endpoint.
pub fn continuity_probes(nf: &NormalForm, topo: &FuzzyTopology) -> Result<Vec<SubbasisElem>> {
    use std::collections::BTreeSet;
    let neg_one = Rational::from_integer(-1);
    let one = Rational::one();
    let mut pi2: BTreeSet<Rational> = (-8..8).map(|k| Rational::new(k, 8)).collect();
    let mut at: Vec<(usize, Rational)> = Vec::new();
    for p in &nf.pieces {
        let xi = topo.ground().index_of(&p.x)?;
        for u in [p.dom.lo(), p.dom.hi()] {
            let v = p.at(u);
            pi2.insert(v.clone());
            at.push((xi, v));
        }
    }
    let mut out: Vec<SubbasisElem> = pi2.into_iter().map(SubbasisElem::pi2).collect();
    for o in topo.opens() {
        let mut gs: BTreeSet<Rational> = crate::cylinder::critical_gammas(&o.values).into_iter().collect();
        gs.extend((-8..8).map(|k| Rational::new(k, 8)));
        for (xi, v) in &at {
            let g = o.values.value_at(*xi) - v;
            if g >= neg_one && g < one {
                gs.insert(g);
            }
        }
        out.extend(gs.into_iter().map(|g| SubbasisElem::tstar(o.name.clone(), g)));
    }
    Ok(out)
}

/// First probe whose preimage under `e` is not open, if any.
pub fn continuity_failure(e: &PathExpr, topo: &FuzzyTopology) -> Result<Option<SubbasisElem>> {
    let nf = normal_form(e)?;
    for target in continuity_probes(&nf, topo)? {
        if !path_preimage_open(e, &target, topo)? {
            return Ok(Some(target));
        }
    }
    Ok(None)
}

/// The grid `{0, 1/n, …, 1}`.
pub fn grid(n: u32) -> Vec<Rational> {
    (0..=n).map(|k| Rational::new(i64::from(k), i64::from(n))).collect()
}
