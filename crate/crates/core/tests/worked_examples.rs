// SPDX-License-Identifier: Apache-2.0

// Worked values checked through the public API only.

use fuzzy_cylinder::cylinder::{
    complement_compat, counterexample, cyl_complement, cyl_contains, psi_star, subbasis_realize, verify_psi_laws,
    SubbasisElem,
};
use fuzzy_cylinder::functor::{complement_report, is_complement};
use fuzzy_cylinder::fuzzy::{fz_complement, fz_indicator, fz_is_topology, FuzzySet, FuzzyTopology, GroundSet};
use fuzzy_cylinder::interval::{make_interval, IntervalSet};
use fuzzy_cylinder::path::{chi_eval, eval_path, kappa, PathExpr};
use fuzzy_cylinder::retraction::{
    continuity_witness, h_eval, sigma_image_subbasis, verify_witness, CylPoint, TimeCase,
};
use fuzzy_cylinder::{q, Rational};

fn ground() -> GroundSet {
    GroundSet::new(["a", "b", "c"]).unwrap()
}

fn below(v: Rational) -> IntervalSet {
    IntervalSet::below(&v)
}

#[test]
fn constant_third() {
    let g = ground();
    let r = counterexample(&g).unwrap();
    for i in 0..g.len() {
        assert_eq!(r.psi.fiber_at(i), &below(q(1, 3)));
        assert_eq!(
            r.complement_of_psi.fiber_at(i),
            &make_interval(q(1, 3), q(1, 1), true, false).unwrap()
        );
        assert_eq!(r.psi_of_complement.fiber_at(i), &below(q(2, 3)));
    }
    assert_eq!(r.verdict, "unequal");
    let third = FuzzySet::constant(&g, q(1, 3)).unwrap();
    assert!(!cyl_contains(&psi_star(&third), "a", &q(1, 3)).unwrap());
    assert_eq!(fz_complement(&third), FuzzySet::constant(&g, q(2, 3)).unwrap());
}

#[test]
fn constant_topologies_validate_and_satisfy_laws() {
    let g = ground();
    for values in [vec![q(1, 3)], vec![q(1, 3), q(2, 3)]] {
        let t = FuzzyTopology::constants(&g, &values).unwrap();
        assert!(fz_is_topology(&g, t.opens()).valid);
        assert!(verify_psi_laws(&t).unwrap().passed);
    }
}

#[test]
fn crisp_sets_are_compatible() {
    let g = ground();
    let ia = fz_indicator(&["a"], &g).unwrap();
    assert_eq!(fz_complement(&ia), fz_indicator(&["b", "c"], &g).unwrap());
    assert!(complement_compat(&ia).equal);
    assert!(complement_compat(&FuzzySet::one(&g)).equal);
    assert_eq!(
        cyl_complement(&psi_star(&FuzzySet::one(&g))),
        psi_star(&FuzzySet::zero(&g))
    );
}

#[test]
fn tstar_at_zero_is_psi() {
    let g = ground();
    let f = FuzzySet::from_values(&g, vec![q(1, 2), q(0, 1), q(5, 6)]).unwrap();
    let t =
        fuzzy_cylinder::fuzzy::fz_generate_topology(&g, &[fuzzy_cylinder::fuzzy::NamedFuzzySet::new("F", f.clone())])
            .unwrap();
    assert_eq!(
        subbasis_realize(&SubbasisElem::tstar("F", q(0, 1)), &t).unwrap(),
        psi_star(&f)
    );
}

#[test]
fn retraction_endpoints_and_witnesses() {
    let p = CylPoint::new("a", q(3, 5)).unwrap();
    assert_eq!(h_eval(&q(0, 1), &p).unwrap(), p);
    assert_eq!(h_eval(&q(1, 1), &p).unwrap(), CylPoint::new("a", q(0, 1)).unwrap());

    let g = GroundSet::new(["x"]).unwrap();
    let t = FuzzyTopology::constants(&g, &[q(2, 3)]).unwrap();
    let target = SubbasisElem::tstar("2/3", q(0, 1));
    let w = continuity_witness(&q(0, 1), &CylPoint::new("x", q(1, 3)).unwrap(), &target, &t).unwrap();
    assert_eq!(w.case, TimeCase::Start);
    assert_eq!(w.region, subbasis_realize(&target, &t).unwrap());
    assert!(verify_witness(&w, &t));

    let w = continuity_witness(
        &q(1, 1),
        &CylPoint::new("x", q(0, 1)).unwrap(),
        &SubbasisElem::pi2(q(-1, 2)),
        &t,
    )
    .unwrap();
    assert_eq!(w.case, TimeCase::End);
    assert!(verify_witness(&w, &t));

    let slice = sigma_image_subbasis(&SubbasisElem::pi2(q(1, 2)), &t).unwrap();
    assert_eq!(slice.fiber_at(0), &IntervalSet::point(q(0, 1)));
}

#[test]
fn homotopy_ends() {
    let (s, t) = (q(1, 4), q(3, 4));
    assert_eq!(kappa(&s, &t, &q(0, 1)).unwrap(), s);
    assert_eq!(kappa(&s, &t, &q(1, 1)).unwrap(), t);
    let v = PathExpr::vertical("a", q(0, 1), q(1, 2));
    let u = q(1, 3);
    assert_eq!(
        eval_path(&PathExpr::h_transform(q(0, 1), v.clone()), &u).unwrap(),
        eval_path(&v, &u).unwrap()
    );
    assert!(eval_path(&PathExpr::h_transform(q(1, 1), v), &u)
        .unwrap()
        .alpha
        .is_zero());
    let rho = PathExpr::Const {
        point: CylPoint::new("z", q(1, 2)).unwrap(),
    };
    assert_eq!(
        chi_eval(&rho, &q(0, 1), &q(1, 2), &q(2, 7), &q(0, 1)).unwrap(),
        CylPoint::new("z", q(1, 2)).unwrap()
    );
}

#[test]
fn complement_as_inversion() {
    let g = ground();
    let third = FuzzySet::constant(&g, q(1, 3)).unwrap();
    let two_thirds = FuzzySet::constant(&g, q(2, 3)).unwrap();
    assert!(is_complement(&third, &two_thirds).unwrap());
    let r = complement_report(&third, &two_thirds).unwrap();
    assert!(r.inversion && !r.cylinder_complement_compatible);
    let ia = fz_indicator(&["a"], &g).unwrap();
    let r = complement_report(&ia, &fz_complement(&ia)).unwrap();
    assert!(r.inversion && r.cylinder_complement_compatible);
    assert!(!is_complement(&third, &third).unwrap());
}
