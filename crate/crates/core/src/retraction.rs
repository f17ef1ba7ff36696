// SPDX-License-Identifier: Apache-2.0

//! The deformation retraction `H(t,(x,α)) = (x,(1−t)α)` of `X × J` onto the
//! slice `X × {0}`, its end map `σ`, and checkable continuity certificates.
//!
//! A certificate ([`BoxWitness`]) is a product neighborhood `t_interval ×
//! region` of an anchor `(t,(x,α))` whose exact image under `H` stays inside
//! a subbasis member. Continuity against subbasis members is all that has to
//! be certified; everything else follows by unions and finite meets.

use serde::{Deserialize, Serialize};

use crate::cylinder::{open_realize, subbasis_realize, CylinderDoc, CylinderOpen, OpenExpr, SubbasisElem};
use crate::error::{Error, Result};
use crate::fuzzy::{FuzzyTopology, GroundSet};
use crate::interval::{Interval, IntervalSet, UnitSet};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CylPoint {
    pub x: String,
    pub alpha: Rational,
}

impl CylPoint {
    pub fn new(x: impl Into<String>, alpha: Rational) -> Result<Self> {
        alpha.check_j("alpha")?;
        Ok(CylPoint { x: x.into(), alpha })
    }

    pub fn check_in(&self, ground: &GroundSet) -> Result<()> {
        ground.index_of(&self.x)?;
        self.alpha.check_j("alpha")
    }
}

impl std::fmt::Display for CylPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.x, self.alpha)
    }
}

pub fn h_eval(t: &Rational, p: &CylPoint) -> Result<CylPoint> {
    t.check_unit("t")?;
    p.alpha.check_j("alpha")?;
    Ok(CylPoint {
        x: p.x.clone(),
        alpha: (Rational::one() - t) * &p.alpha,
    })
}

pub fn sigma_eval(p: &CylPoint) -> CylPoint {
    CylPoint {
        x: p.x.clone(),
        alpha: Rational::zero(),
    }
}

/// `{(1−t)·α | t ∈ ts, α ∈ a}` for one pair of intervals. With `s = 1 − t`
/// the product is monotone in both factors on the nonnegative quadrant, so
/// the image is an interval between the products of the lower and of the
/// upper ends.
fn box_image(ts: &Interval, a: &Interval) -> Option<Interval> {
    let one = Rational::one();
    let (s_lo, s_lo_closed) = (&one - ts.hi(), ts.hi_closed());
    let (s_hi, s_hi_closed) = (&one - ts.lo(), ts.lo_closed());
    let zero = Rational::zero();
    if s_hi.is_zero() || a.hi().is_zero() {
        return Some(Interval::point(zero));
    }
    let inf = &s_lo * a.lo();
    let inf_closed = if inf.is_zero() {
        (s_lo.is_zero() && s_lo_closed) || (a.lo().is_zero() && a.lo_closed())
    } else {
        s_lo_closed && a.lo_closed()
    };
    let sup = &s_hi * a.hi();
    Interval::new(inf, sup, inf_closed, s_hi_closed && a.hi_closed())
}

/// Exact image of `t_interval × region` under `H`, fiber by fiber.
pub fn h_image_of_box(t_interval: &Interval, region: &CylinderOpen) -> CylinderOpen {
    region.map_fibers(|fib| IntervalSet::from_intervals(fib.parts().iter().filter_map(|a| box_image(t_interval, a))))
}

/// Which of the three time regimes of the continuity argument a witness
/// comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TimeCase {
    Start,
    Interior,
    End,
}

impl TimeCase {
    pub fn of(t: &Rational) -> TimeCase {
        if t.is_zero() {
            TimeCase::Start
        } else if t.is_one() {
            TimeCase::End
        } else {
            TimeCase::Interior
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoxWitness {
    pub anchor_t: Rational,
    pub anchor: CylPoint,
    pub case: TimeCase,
    pub epsilon: Rational,
    pub t_interval: Interval,
    pub region_expr: OpenExpr,
    pub region: CylinderOpen,
    pub target: SubbasisElem,
}

/// Wire form of a [`BoxWitness`]; the region needs the ground set to resolve.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoxWitnessDoc {
    pub anchor_t: Rational,
    pub anchor: CylPoint,
    pub case: TimeCase,
    pub epsilon: Rational,
    pub t_interval: Interval,
    pub region_expr: OpenExpr,
    pub region: CylinderDoc,
    pub target: SubbasisElem,
}

impl BoxWitness {
    pub fn to_doc(&self) -> BoxWitnessDoc {
        BoxWitnessDoc {
            anchor_t: self.anchor_t.clone(),
            anchor: self.anchor.clone(),
            case: self.case,
            epsilon: self.epsilon.clone(),
            t_interval: self.t_interval.clone(),
            region_expr: self.region_expr.clone(),
            region: self.region.to_doc(),
            target: self.target.clone(),
        }
    }
}

impl BoxWitnessDoc {
    pub fn resolve(&self, ground: &GroundSet) -> Result<BoxWitness> {
        Ok(BoxWitness {
            anchor_t: self.anchor_t.clone(),
            anchor: self.anchor.clone(),
            case: self.case,
            epsilon: self.epsilon.clone(),
            t_interval: self.t_interval.clone(),
            region_expr: self.region_expr.clone(),
            region: self.region.resolve(ground)?,
            target: self.target.clone(),
        })
    }
}

fn neg_one() -> Rational {
    Rational::from_integer(-1)
}

fn clamp_gamma(g: Rational) -> Rational {
    g.max(neg_one())
}

fn interval(lo: Rational, hi: Rational, lo_closed: bool, hi_closed: bool) -> Interval {
    Interval::new(lo, hi, lo_closed, hi_closed).expect("nonempty by construction")
}

/// Builds a product neighborhood of `(t, p)` mapped by `H` into `target`.
/// The width `ε` is half the largest slack the relevant time regime allows.
pub fn continuity_witness(
    t: &Rational,
    p: &CylPoint,
    target: &SubbasisElem,
    topo: &FuzzyTopology,
) -> Result<BoxWitness> {
    t.check_unit("t")?;
    p.check_in(topo.ground())?;
    let image = h_eval(t, p)?;
    let realized = subbasis_realize(target, topo)?;
    if !realized.fiber(&p.x)?.contains(&image.alpha)? {
        return Err(Error::Precondition(format!("H({t},{p}) = {image} is not in {target}")));
    }

    let one = Rational::one();
    let half = Rational::half();
    let alpha = &p.alpha;
    let case = TimeCase::of(t);
    let tstar_value = match target {
        SubbasisElem::Tstar { open, .. } => Some(topo.open(open)?.value(&p.x)?.clone()),
        SubbasisElem::Pi2 { .. } => None,
    };
    let gamma = target.gamma().clone();

    let (epsilon, t_interval, clauses) = match (case, &tstar_value) {
        (TimeCase::End, None) => {
            if alpha.is_zero() {
                (
                    half.clone(),
                    interval(half.clone(), one.clone(), false, true),
                    vec![target.clone()],
                )
            } else {
                let eps = alpha * &half;
                (
                    eps.clone(),
                    interval(&one - &eps, one.clone(), false, true),
                    vec![SubbasisElem::pi2(alpha - &eps)],
                )
            }
        }
        (TimeCase::End, Some(tx)) => {
            if alpha.is_zero() {
                (
                    half.clone(),
                    interval(half.clone(), one.clone(), false, true),
                    vec![target.clone()],
                )
            } else {
                let slack = (tx - &gamma) * &half;
                let eps = one.clone().min(alpha.clone()).min(slack) * &half;
                let mu = clamp_gamma(&gamma - alpha + &eps + &eps);
                let open = tstar_open(target);
                (
                    eps.clone(),
                    interval(&one - &eps, one.clone(), false, true),
                    vec![SubbasisElem::tstar(open, mu), SubbasisElem::pi2(alpha - &eps)],
                )
            }
        }
        (TimeCase::Interior, None) => {
            let mut m = t.clone().min(&one - t);
            if alpha.is_positive() {
                m = m.min(((&one - t) * alpha - &gamma) / alpha);
            }
            let eps = m * &half;
            let g = &gamma + (t + &eps) * alpha;
            (
                eps.clone(),
                interval(t - &eps, t + &eps, false, false),
                vec![SubbasisElem::pi2(g)],
            )
        }
        (TimeCase::Interior, Some(tx)) => {
            let slack = (tx - alpha - &gamma + alpha * t) / (t + &one);
            let eps = t.clone().min(&one - t).min(slack) * &half;
            let mu = clamp_gamma(&gamma - alpha * t + &eps * t + &eps);
            let open = tstar_open(target);
            (
                eps.clone(),
                interval(t - &eps, t + &eps, false, false),
                vec![SubbasisElem::tstar(open, mu), SubbasisElem::pi2(alpha - &eps)],
            )
        }
        (TimeCase::Start, None) => {
            if alpha.is_zero() {
                (
                    half.clone(),
                    interval(Rational::zero(), half.clone(), true, false),
                    vec![target.clone()],
                )
            } else {
                let eps = one.clone().min(&one - &gamma / alpha) * &half;
                let g = clamp_gamma(&gamma / (&one - &eps));
                (
                    eps.clone(),
                    interval(Rational::zero(), eps.clone(), true, false),
                    vec![SubbasisElem::pi2(g)],
                )
            }
        }
        (TimeCase::Start, Some(_)) => (
            half.clone(),
            interval(Rational::zero(), half.clone(), true, false),
            vec![target.clone()],
        ),
    };

    let region_expr = OpenExpr::clause(clauses);
    let region = open_realize(&region_expr, topo)?;
    Ok(BoxWitness {
        anchor_t: t.clone(),
        anchor: p.clone(),
        case,
        epsilon,
        t_interval,
        region_expr,
        region,
        target: target.clone(),
    })
}

fn tstar_open(e: &SubbasisElem) -> String {
    match e {
        SubbasisElem::Tstar { open, .. } => open.clone(),
        SubbasisElem::Pi2 { .. } => unreachable!("called on a T* target"),
    }
}

/// Outcome of replaying a certificate, naming the first check that failed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessVerdict {
    Valid,
    AnchorOutside,
    TimeIntervalNotOpen,
    RegionMismatch,
    ImageEscapes { element: String },
    Malformed { reason: String },
}

pub fn check_witness(w: &BoxWitness, topo: &FuzzyTopology) -> WitnessVerdict {
    match check_witness_inner(w, topo) {
        Ok(v) => v,
        Err(e) => WitnessVerdict::Malformed { reason: e.to_string() },
    }
}

fn check_witness_inner(w: &BoxWitness, topo: &FuzzyTopology) -> Result<WitnessVerdict> {
    w.anchor.check_in(topo.ground())?;
    if !w.t_interval.contains(&w.anchor_t) || !w.region.fiber(&w.anchor.x)?.contains(&w.anchor.alpha)? {
        return Ok(WitnessVerdict::AnchorOutside);
    }
    if !UnitSet::from_intervals([w.t_interval.clone()]).is_open() {
        return Ok(WitnessVerdict::TimeIntervalNotOpen);
    }
    if open_realize(&w.region_expr, topo)? != w.region {
        return Ok(WitnessVerdict::RegionMismatch);
    }
    let image = h_image_of_box(&w.t_interval, &w.region);
    let target = subbasis_realize(&w.target, topo)?;
    for (i, e) in topo.ground().elements().iter().enumerate() {
        if !image.fiber_at(i).is_subset(target.fiber_at(i)) {
            return Ok(WitnessVerdict::ImageEscapes { element: e.clone() });
        }
    }
    Ok(WitnessVerdict::Valid)
}

pub fn verify_witness(w: &BoxWitness, topo: &FuzzyTopology) -> bool {
    check_witness(w, topo) == WitnessVerdict::Valid
}

/// `σ(c)`: the slice point `(x,0)` is hit iff the fiber at `x` is nonempty.
pub fn sigma_image(c: &CylinderOpen) -> CylinderOpen {
    c.map_fibers(|fib| {
        if fib.is_empty() {
            IntervalSet::empty()
        } else {
            IntervalSet::point(Rational::zero())
        }
    })
}

pub fn sigma_image_subbasis(e: &SubbasisElem, topo: &FuzzyTopology) -> Result<CylinderOpen> {
    Ok(sigma_image(&subbasis_realize(e, topo)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cylinder::psi_star;
    use crate::fuzzy::{FuzzySet, NamedFuzzySet};
    use crate::interval::make_interval;
    use crate::rational::q;

    fn ab() -> GroundSet {
        GroundSet::new(["a", "b"]).unwrap()
    }

    fn consts(vals: &[Rational]) -> FuzzyTopology {
        FuzzyTopology::constants(&ab(), vals).unwrap()
    }

    fn pt(alpha: Rational) -> CylPoint {
        CylPoint::new("a", alpha).unwrap()
    }

    fn iv(lo: Rational, hi: Rational, lc: bool, hc: bool) -> Interval {
        Interval::new(lo, hi, lc, hc).unwrap()
    }

    #[test]
    fn h_and_sigma_examples() {
        assert_eq!(h_eval(&q(1, 2), &pt(q(2, 3))).unwrap(), pt(q(1, 3)));
        assert_eq!(h_eval(&q(1, 1), &pt(q(3, 7))).unwrap(), pt(q(0, 1)));
        assert_eq!(h_eval(&q(0, 1), &pt(q(3, 7))).unwrap(), pt(q(3, 7)));
        assert!(h_eval(&q(3, 2), &pt(q(0, 1))).is_err());
        assert_eq!(sigma_eval(&pt(q(1, 3))), pt(q(0, 1)));
        assert_eq!(sigma_eval(&pt(q(0, 1))), pt(q(0, 1)));
    }

    #[test]
    fn box_image_examples() {
        let g = ab();
        let fib = make_interval(q(0, 1), q(1, 2), true, false).unwrap();
        let region = CylinderOpen::uniform(&g, fib.clone());
        let img = h_image_of_box(&iv(q(1, 2), q(3, 4), true, true), &region);
        let expect = make_interval(q(0, 1), q(1, 4), true, false).unwrap();
        assert_eq!(img, CylinderOpen::uniform(&g, expect.clone()));
        // independent grid check at step 1/120: the image's points are products
        // of sampled t and α, and image members have preimages on a finer grid
        for i in 60..=90 {
            for j in 0..60 {
                let v = (q(1, 1) - q(i, 120)) * q(j, 120);
                assert!(expect.contains(&v).unwrap());
            }
        }
        assert!(!expect.contains(&q(1, 4)).unwrap());
        let one = h_image_of_box(&Interval::point(q(1, 1)), &region);
        assert_eq!(one, CylinderOpen::uniform(&g, IntervalSet::point(q(0, 1))));
        let zero = h_image_of_box(&Interval::point(q(0, 1)), &region);
        assert_eq!(zero, region);
    }

    #[test]
    fn box_image_endpoint_flags() {
        let a = iv(q(1, 4), q(1, 2), false, true);
        // t ∈ [0,1/2): s ∈ (1/2,1]; products (1/8, 1/2]
        assert_eq!(
            box_image(&iv(q(0, 1), q(1, 2), true, false), &a).unwrap(),
            iv(q(1, 8), q(1, 2), false, true)
        );
        // t ∈ (1/2,1]: s ∈ [0,1/2); zero attained through s = 0
        assert_eq!(
            box_image(&iv(q(1, 2), q(1, 1), false, true), &a).unwrap(),
            iv(q(0, 1), q(1, 4), true, false)
        );
        // t ∈ (1/2,1): s ∈ (0,1/2) and α > 1/4, so zero is not attained
        assert_eq!(
            box_image(&iv(q(1, 2), q(1, 1), false, false), &a).unwrap(),
            iv(q(0, 1), q(1, 4), false, false)
        );
    }

    #[test]
    fn witness_examples() {
        let topo = consts(&[q(2, 3)]);
        let w = continuity_witness(&q(0, 1), &pt(q(1, 3)), &SubbasisElem::tstar("2/3", q(0, 1)), &topo).unwrap();
        assert_eq!(w.t_interval, iv(q(0, 1), q(1, 2), true, false));
        assert_eq!(w.region, subbasis_realize(&w.target, &topo).unwrap());
        assert!(verify_witness(&w, &topo));

        let w = continuity_witness(&q(1, 1), &pt(q(0, 1)), &SubbasisElem::pi2(q(-1, 2)), &topo).unwrap();
        assert_eq!(w.t_interval, iv(q(1, 2), q(1, 1), false, true));
        assert_eq!(w.region, CylinderOpen::whole(topo.ground()));
        assert!(verify_witness(&w, &topo));

        let w = continuity_witness(&q(1, 2), &pt(q(1, 4)), &SubbasisElem::tstar("2/3", q(1, 8)), &topo).unwrap();
        assert_eq!(w.case, TimeCase::Interior);
        assert_eq!(w.epsilon, q(5, 36));
        assert!(verify_witness(&w, &topo));
    }

    #[test]
    fn widened_interior_witness() {
        let topo = consts(&[q(2, 3)]);
        // Here the region is small enough that even t ∈ [0,1] stays inside:
        // the region's fibers sit below 11/24 and the target fiber is [0,13/24).
        let w = continuity_witness(&q(1, 2), &pt(q(1, 4)), &SubbasisElem::tstar("2/3", q(1, 8)), &topo).unwrap();
        let mut wide = w.clone();
        wide.t_interval = iv(q(0, 1), q(1, 1), true, true);
        assert!(verify_witness(&wide, &topo));

        // A π₂ target: widening lets t = 1 collapse the box onto level 0.
        let w = continuity_witness(&q(1, 2), &pt(q(1, 2)), &SubbasisElem::pi2(q(1, 8)), &topo).unwrap();
        assert!(verify_witness(&w, &topo));
        let mut wide = w.clone();
        wide.t_interval = iv(q(0, 1), q(1, 1), true, true);
        assert_eq!(
            check_witness(&wide, &topo),
            WitnessVerdict::ImageEscapes { element: "a".into() }
        );

        // A T* target with little slack: the region reaches above 1/3 and
        // t = 0 keeps it there.
        let w = continuity_witness(&q(1, 2), &pt(q(1, 2)), &SubbasisElem::tstar("2/3", q(1, 3)), &topo).unwrap();
        assert!(verify_witness(&w, &topo));
        let mut wide = w;
        wide.t_interval = iv(q(0, 1), q(1, 1), true, true);
        assert!(!verify_witness(&wide, &topo));
    }

    #[test]
    fn witness_rejections() {
        let topo = consts(&[q(2, 3)]);
        let err = continuity_witness(&q(0, 1), &pt(q(3, 4)), &SubbasisElem::tstar("2/3", q(0, 1)), &topo);
        assert!(matches!(err, Err(Error::Precondition(_))));
        let w = continuity_witness(&q(0, 1), &pt(q(1, 3)), &SubbasisElem::tstar("2/3", q(0, 1)), &topo).unwrap();
        let mut empty = w.clone();
        empty.region_expr = OpenExpr::default();
        empty.region = CylinderOpen::empty(topo.ground());
        assert_eq!(check_witness(&empty, &topo), WitnessVerdict::AnchorOutside);
        let mut closed = w.clone();
        closed.t_interval = iv(q(0, 1), q(1, 2), true, true);
        assert_eq!(check_witness(&closed, &topo), WitnessVerdict::TimeIntervalNotOpen);
        let mut bogus = w;
        bogus.region = CylinderOpen::whole(topo.ground());
        assert_eq!(check_witness(&bogus, &topo), WitnessVerdict::RegionMismatch);
    }

    #[test]
    fn all_time_regimes_verify_on_a_grid() {
        let g = ab();
        let f = FuzzySet::from_values(&g, vec![q(1, 5), q(7, 8)]).unwrap();
        let topo = crate::fuzzy::fz_generate_topology(&g, &[NamedFuzzySet::new("F", f)]).unwrap();
        let mut targets = Vec::new();
        for k in -4..4 {
            let gamma = q(k, 4);
            targets.push(SubbasisElem::pi2(gamma.clone()));
            for o in topo.opens() {
                targets.push(SubbasisElem::tstar(o.name.clone(), gamma.clone()));
            }
        }
        let mut seen = std::collections::HashSet::new();
        for ti in 0..=4 {
            let t = q(ti, 4);
            for x in ["a", "b"] {
                for ai in 0..6 {
                    let p = CylPoint::new(x, q(ai, 6)).unwrap();
                    for target in &targets {
                        if let Ok(w) = continuity_witness(&t, &p, target, &topo) {
                            assert!(verify_witness(&w, &topo), "{w:?}");
                            seen.insert(w.case);
                        }
                    }
                }
            }
        }
        assert_eq!(seen.len(), 3);
    }

    #[test]
    fn sigma_subbasis_examples() {
        let topo = consts(&[q(1, 3)]);
        let slice = CylinderOpen::slice(topo.ground());
        assert_eq!(
            sigma_image_subbasis(&SubbasisElem::tstar("1/3", q(0, 1)), &topo).unwrap(),
            slice
        );
        assert_eq!(
            sigma_image_subbasis(&SubbasisElem::tstar("1/3", q(1, 2)), &topo).unwrap(),
            CylinderOpen::empty(topo.ground())
        );
        assert_eq!(sigma_image_subbasis(&SubbasisElem::pi2(q(1, 2)), &topo).unwrap(), slice);
        assert_eq!(sigma_image(&psi_star(topo.open("1/3").unwrap())), slice);
    }

    #[test]
    fn sigma_does_not_commute_with_mixed_meets() {
        // Meets of T* members commute with σ; mixing in a π₂ member can
        // empty a fiber that both factors hit separately.
        let topo = consts(&[q(1, 3)]);
        let a = SubbasisElem::tstar("1/3", q(0, 1));
        let b = SubbasisElem::pi2(q(1, 2));
        let meet = open_realize(&OpenExpr::clause(vec![a.clone(), b.clone()]), &topo).unwrap();
        let lhs = sigma_image(&meet);
        let rhs = sigma_image_subbasis(&a, &topo)
            .unwrap()
            .intersect(&sigma_image_subbasis(&b, &topo).unwrap())
            .unwrap();
        assert_ne!(lhs, rhs);
    }

    #[test]
    fn certificate_round_trip() {
        let topo = consts(&[q(2, 3)]);
        let w = continuity_witness(&q(1, 2), &pt(q(1, 4)), &SubbasisElem::tstar("2/3", q(1, 8)), &topo).unwrap();
        let s = serde_json::to_string(&vec![w.to_doc()]).unwrap();
        let back: Vec<BoxWitnessDoc> = serde_json::from_str(&s).unwrap();
        let w2 = back[0].resolve(topo.ground()).unwrap();
        assert_eq!(w2, w);
        assert_eq!(serde_json::to_string(&vec![w2.to_doc()]).unwrap(), s);
    }
}
