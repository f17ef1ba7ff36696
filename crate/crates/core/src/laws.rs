// SPDX-License-Identifier: Apache-2.0

//! Randomized law sweeps. Each sweep draws its cases from a seed, checks the
//! exact identities, cross-checks every cylinder set it builds against a
//! grid rasterization computed straight from membership values, and returns a
//! [`SweepReport`].

use std::collections::BTreeMap;

use serde::Serialize;

use crate::base::{iota_x, slice_agrees, FiniteTopology};
use crate::connectivity::cylinder_connectivity;
use crate::cylinder::{
    complement_compat, counterexample, critical_gammas, open_realize, psi_law_subfamilies, psi_star,
    recover_membership, subbasis_realize, verify_psi_laws, CylinderOpen, OpenExpr, SubbasisElem,
};
use crate::error::Result;
use crate::functor::{check_constant_inverse, check_functoriality_on, is_complement_direct, is_complement_with_probe};
use crate::fuzzy::{fz_complement, fz_indicator, FuzzySet, GroundSet};
use crate::interval::IntervalSet;
use crate::oracle::{brute_open, brute_psi, brute_subbasis, oracle_diff, GridOracle};
use crate::path::{chi_boundary, chi_eval, continuity_failure, eval_path, grid, kappa, normal_form, PathExpr};
use crate::random::{Gen, PathCtx, DEN_MAX, GENERATORS_MAX, GROUND_MAX};
use crate::rational::Rational;
use crate::retraction::{
    check_witness, continuity_witness, h_eval, h_image_of_box, sigma_eval, sigma_image, sigma_image_subbasis, CylPoint,
    TimeCase, WitnessVerdict,
};
use crate::sweep::{map_cases, Mode};

/// Resolution of the grid oracle.
pub const ORACLE_N: u32 = 64;

#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub seed: u64,
    pub cases: u64,
    pub mode: Mode,
    /// Paths are compared on `{0, 1/grid, …, 1}`.
    pub grid: u32,
}

impl SweepConfig {
    pub fn new(seed: u64, cases: u64) -> Self {
        SweepConfig {
            seed,
            cases,
            mode: Mode::default(),
            grid: 64,
        }
    }

    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_grid(mut self, grid: u32) -> Self {
        self.grid = grid;
        self
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub law: String,
    pub cases: usize,
    pub checks: usize,
    pub oracle_checks: usize,
    pub oracle_failures: usize,
    pub failures: Vec<String>,
    pub notes: BTreeMap<String, usize>,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Per-case accumulator.
#[derive(Default)]
struct Tally {
    checks: usize,
    oracle_checks: usize,
    oracle_failures: usize,
    failures: Vec<String>,
    notes: BTreeMap<String, usize>,
}

/// Failures kept per report; the count is still exact.
const MAX_FAILURE_TEXTS: usize = 20;

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn oracle(&mut self, symbolic: &CylinderOpen, brute: &GridOracle, what: impl FnOnce() -> String) {
        self.oracle_checks += 1;
        let diff = oracle_diff(symbolic, brute);
        if !matches!(diff, Ok(None)) {
            self.oracle_failures += 1;
        }
        match diff {
            Ok(None) => {}
            Ok(Some(d)) => self.failures.push(format!(
                "{}: oracle differs at ({}, {}): symbolic {}, brute {}",
                what(),
                d.element,
                d.level,
                d.symbolic,
                d.brute
            )),
            Err(e) => self.failures.push(format!("{}: {e}", what())),
        }
    }

    fn note(&mut self, key: &str) {
        *self.notes.entry(key.to_string()).or_default() += 1;
    }

    fn error(&mut self, context: &str, e: crate::error::Error) {
        self.checks += 1;
        self.failures.push(format!("{context}: unexpected error: {e}"));
    }

    fn absorb<T>(&mut self, context: &str, r: Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.error(context, e);
                None
            }
        }
    }
}

fn finish(law: &str, cases: usize, tallies: Vec<Tally>) -> SweepReport {
    let mut r = SweepReport {
        law: law.to_string(),
        cases,
        ..Default::default()
    };
    let mut failure_count = 0usize;
    for t in tallies {
        r.checks += t.checks;
        r.oracle_checks += t.oracle_checks;
        r.oracle_failures += t.oracle_failures;
        failure_count += t.failures.len();
        for f in t.failures {
            if r.failures.len() < MAX_FAILURE_TEXTS {
                r.failures.push(f);
            }
        }
        for (k, v) in t.notes {
            *r.notes.entry(k).or_default() += v;
        }
    }
    if failure_count > r.failures.len() {
        r.failures.push(format!("… {} failures in total", failure_count));
    }
    r
}

fn run(law: &str, cfg: &SweepConfig, body: impl Fn(&mut Gen, &mut Tally) + Sync + Send) -> SweepReport {
    let seed = cfg.seed;
    let tallies = map_cases(cfg.mode, cfg.cases, |case| {
        let mut g = Gen::for_case(seed, case);
        let mut t = Tally::default();
        body(&mut g, &mut t);
        t
    });
    finish(law, cfg.cases as usize, tallies)
}

/// The `{0, 1, 1/3}` counterexample, checked against its closed forms and
/// the grid oracle.
pub fn counterexample_sweep(ground: &GroundSet) -> SweepReport {
    let mut t = Tally::default();
    let third = Rational::new(1, 3);
    if let Some(r) = t.absorb("counterexample", counterexample(ground)) {
        let below = |v: Rational| CylinderOpen::uniform(ground, IntervalSet::below(&v));
        let above_closed = CylinderOpen::uniform(
            ground,
            crate::interval::make_interval(third.clone(), Rational::one(), true, false).unwrap(),
        );
        t.check(r.psi == below(third.clone()), || "Ψ*(T) is not X×[0,1/3)".into());
        t.check(r.complement_of_psi == above_closed, || {
            "complement is not X×[1/3,1)".into()
        });
        t.check(r.psi_of_complement == below(Rational::new(2, 3)), || {
            "Ψ*(1−T) is not X×[0,2/3)".into()
        });
        t.check(r.verdict == "unequal", || "verdict is not unequal".into());
        let f = FuzzySet::constant(ground, third).unwrap();
        let bf = brute_psi(&f, ORACLE_N).unwrap();
        t.oracle(&r.psi, &bf, || "Ψ*(T)".into());
        t.oracle(&r.complement_of_psi, &bf.complement(), || "complement".into());
        let bc = brute_psi(&fz_complement(&f), ORACLE_N).unwrap();
        t.oracle(&r.psi_of_complement, &bc, || "Ψ*(1−T)".into());
    }
    finish("counterexample", 1, vec![t])
}

/// Meet and join laws of `Ψ*` on generated topologies.
pub fn psi_law_sweep(cfg: &SweepConfig) -> SweepReport {
    run("psi_laws", cfg, |g, t| {
        let topo = g.topology(GROUND_MAX, GENERATORS_MAX, DEN_MAX);
        *t.notes.entry("opens".into()).or_default() += topo.len();
        let Some(r) = t.absorb("verify_psi_laws", verify_psi_laws(&topo)) else {
            return;
        };
        t.checks += r.checks;
        for f in r.failures {
            t.failures.push(format!("{} fails for {:?}", f.law, f.members));
        }
        let opens = topo.opens();
        let psis: Vec<CylinderOpen> = opens.iter().map(|o| psi_star(&o.values)).collect();
        let brutes: Vec<GridOracle> = opens.iter().map(|o| brute_psi(&o.values, ORACLE_N).unwrap()).collect();
        for i in 0..opens.len() {
            t.oracle(&psis[i], &brutes[i], || format!("Ψ*({})", opens[i].name));
            for j in i + 1..opens.len() {
                let meet = psis[i].intersect(&psis[j]).unwrap();
                t.oracle(&meet, &brutes[i].intersect(&brutes[j]).unwrap(), || {
                    format!("Ψ*({}) ∩ Ψ*({})", opens[i].name, opens[j].name)
                });
            }
        }
        for fam in psi_law_subfamilies(opens.len()) {
            if fam.len() < 2 {
                continue;
            }
            let mut sym = psis[fam[0]].clone();
            let mut brute = brutes[fam[0]].clone();
            for &i in &fam[1..] {
                sym = sym.union(&psis[i]).unwrap();
                brute = brute.union(&brutes[i]).unwrap();
            }
            t.oracle(&sym, &brute, || format!("union over {fam:?}"));
        }
    })
}

/// `recover_membership ∘ Ψ* = id`.
pub fn round_trip_sweep(cfg: &SweepConfig) -> SweepReport {
    run("round_trip", cfg, |g, t| {
        let ground = g.ground(GROUND_MAX);
        let f = g.fuzzy_set(&ground, DEN_MAX);
        let p = psi_star(&f);
        match recover_membership(&p) {
            Ok(back) => t.check(back == f, || format!("{f:?} comes back as {back:?}")),
            Err(e) => t.error("recover_membership", e),
        }
        t.oracle(&p, &brute_psi(&f, ORACLE_N).unwrap(), || format!("Ψ*({f:?})"));
    })
}

/// Complement compatibility for every crisp subset of grounds up to `max_n`.
pub fn indicator_sweep(max_n: usize) -> SweepReport {
    let mut tallies = Vec::new();
    let mut cases = 0;
    for n in 1..=max_n {
        let ground = GroundSet::numbered(n).unwrap();
        for mask in 0u32..(1 << n) {
            cases += 1;
            let mut t = Tally::default();
            let subset: Vec<&str> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| ground.name(i)).collect();
            let f = fz_indicator(&subset, &ground).unwrap();
            let r = complement_compat(&f);
            t.check(r.equal, || {
                format!("indicator of {subset:?} is not compatible: {:?}", r.witness)
            });
            let bf = brute_psi(&f, ORACLE_N).unwrap();
            t.oracle(&r.psi, &bf, || format!("Ψ*(I_{subset:?})"));
            t.oracle(&r.complement_of_psi, &bf.complement(), || {
                format!("complement of Ψ*(I_{subset:?})")
            });
            t.oracle(
                &r.psi_of_complement,
                &brute_psi(&fz_complement(&f), ORACLE_N).unwrap(),
                || format!("Ψ*(1−I_{subset:?})"),
            );
            tallies.push(t);
        }
    }
    finish("indicator_compat", cases, tallies)
}

fn random_anchor_time(g: &mut Gen, case: TimeCase) -> Rational {
    match case {
        TimeCase::Start => Rational::zero(),
        TimeCase::End => Rational::one(),
        TimeCase::Interior => {
            let d = 2 + g.below(31) as i64;
            Rational::new(1 + g.below((d - 1) as usize) as i64, d)
        }
    }
}

/// Continuity certificates for `H`, plus the pointwise retraction equations
/// and down-closure of `H`-preimages of `T*` members. Each case is one
/// topology with `anchors` anchors spread over the three time regimes.
pub fn retraction_sweep(cfg: &SweepConfig, anchors: usize) -> SweepReport {
    run("retraction", cfg, |g, t| {
        let topo = g.topology(5, 3, DEN_MAX);
        let ground = topo.ground().clone();
        for j in 0..anchors {
            let case = [TimeCase::Start, TimeCase::Interior, TimeCase::End][j % 3];
            let time = random_anchor_time(g, case);
            let p = g.point(&ground, DEN_MAX);

            // retraction equations at this point
            let zero = CylPoint {
                x: p.x.clone(),
                alpha: Rational::zero(),
            };
            t.check(h_eval(&time, &zero).unwrap() == zero, || {
                format!("H({time}, ·) moves {zero}")
            });
            t.check(h_eval(&Rational::zero(), &p).unwrap() == p, || {
                format!("H(0, {p}) ≠ {p}")
            });
            t.check(h_eval(&Rational::one(), &p).unwrap() == sigma_eval(&p), || {
                format!("H(1, {p}) ≠ σ({p})")
            });

            let image = h_eval(&time, &p).unwrap();
            let mut target = None;
            for _ in 0..64 {
                let e = g.subbasis(&topo, DEN_MAX);
                let r = subbasis_realize(&e, &topo).unwrap();
                if r.fiber(&p.x).unwrap().contains_unchecked(&image.alpha) {
                    target = Some((e, r));
                    break;
                }
            }
            let Some((target, realized)) = target else {
                t.note("anchors_without_target");
                continue;
            };

            if let SubbasisElem::Tstar { .. } = target {
                // H-preimage of a T* member is down-closed in α
                for k in 0..16 {
                    let a = &p.alpha * Rational::new(k, 16);
                    let q = h_eval(
                        &time,
                        &CylPoint {
                            x: p.x.clone(),
                            alpha: a,
                        },
                    )
                    .unwrap();
                    t.check(realized.fiber(&q.x).unwrap().contains_unchecked(&q.alpha), || {
                        format!("H-preimage of {target} not down-closed below {p} at t={time}")
                    });
                }
            }

            let w = match continuity_witness(&time, &p, &target, &topo) {
                Ok(w) => w,
                Err(e) => {
                    t.error(&format!("witness for t={time}, {p}, {target}"), e);
                    continue;
                }
            };
            t.note(match w.case {
                TimeCase::Start => "case_start",
                TimeCase::Interior => "case_interior",
                TimeCase::End => "case_end",
            });
            t.note("anchors");
            let verdict = check_witness(&w, &topo);
            t.check(verdict == WitnessVerdict::Valid, || {
                format!("witness for t={time}, {p}, {target}: {verdict:?}")
            });
            t.oracle(&w.region, &brute_open(&w.region_expr, &topo, ORACLE_N).unwrap(), || {
                format!("region for t={time}, {p}")
            });
            t.oracle(&realized, &brute_subbasis(&target, &topo, ORACLE_N).unwrap(), || {
                format!("{target}")
            });
            // sampled soundness of the box image
            let img = h_image_of_box(&w.t_interval, &w.region);
            for ti in 0..=8 {
                let s = Rational::new(ti, 8);
                let tt = w.t_interval.lo() + (w.t_interval.hi() - w.t_interval.lo()) * &s;
                if !w.t_interval.contains(&tt) {
                    continue;
                }
                for (xi, fib) in w.region.fibers().iter().enumerate() {
                    for part in fib.parts() {
                        let a = part.sample();
                        let v = (Rational::one() - &tt) * &a;
                        t.check(img.fiber_at(xi).contains_unchecked(&v), || {
                            format!("box image misses H({tt}, ({}, {a}))", ground.name(xi))
                        });
                    }
                }
            }
        }
    })
}

/// σ on subbasis members and on finite meets of `T*` members.
pub fn sigma_sweep(cfg: &SweepConfig) -> SweepReport {
    run("sigma", cfg, |g, t| {
        let topo = g.topology(5, 3, DEN_MAX);
        let ground = topo.ground().clone();
        let slice = CylinderOpen::slice(&ground);
        let brute_sigma = |b: &GridOracle| {
            GridOracle::from_fn(&ground, ORACLE_N, |i, a| a.is_zero() && b.cells[i].iter().any(|&c| c)).unwrap()
        };
        let mut tstars = Vec::new();
        for o in topo.opens() {
            for gamma in critical_gammas(&o.values) {
                tstars.push(SubbasisElem::tstar(o.name.clone(), gamma));
            }
        }
        let pi2s: Vec<SubbasisElem> = (-4..4).map(|k| SubbasisElem::pi2(Rational::new(k, 4))).collect();
        for e in tstars.iter().chain(&pi2s) {
            let realized = subbasis_realize(e, &topo).unwrap();
            let img = sigma_image_subbasis(e, &topo).unwrap();
            let expect = match e {
                SubbasisElem::Tstar { .. } => realized.intersect(&slice).unwrap(),
                SubbasisElem::Pi2 { .. } => slice.clone(),
            };
            t.check(img == expect, || format!("σ({e}) = {img:?}, expected {expect:?}"));
            let b = brute_subbasis(e, &topo, ORACLE_N).unwrap();
            t.oracle(&realized, &b, || format!("{e}"));
            t.oracle(&img, &brute_sigma(&b), || format!("σ({e})"));
        }
        for _ in 0..24 {
            let k = 2 + g.below(2);
            let clause: Vec<SubbasisElem> = (0..k).map(|_| g.pick(&tstars).clone()).collect();
            let expr = OpenExpr::clause(clause.clone());
            let meet = open_realize(&expr, &topo).unwrap();
            let lhs = sigma_image(&meet);
            let mut rhs = slice.clone();
            for e in &clause {
                rhs = rhs.intersect(&sigma_image_subbasis(e, &topo).unwrap()).unwrap();
            }
            t.check(lhs == rhs, || format!("σ does not commute with the meet {clause:?}"));
            let b = brute_open(&expr, &topo, ORACLE_N).unwrap();
            t.oracle(&meet, &b, || format!("meet {clause:?}"));
            t.oracle(&lhs, &brute_sigma(&b), || format!("σ(meet {clause:?})"));
        }
    })
}

fn same_on_grid(a: &PathExpr, b: &PathExpr, n: u32) -> Result<bool> {
    for u in grid(n) {
        if eval_path(a, &u)? != eval_path(b, &u)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn same_path(a: &PathExpr, b: &PathExpr, n: u32) -> Result<bool> {
    Ok(same_on_grid(a, b, n)? && normal_form(a)? == normal_form(b)?)
}

/// Path identities and continuity of every path built along the way.
pub fn path_sweep(cfg: &SweepConfig) -> SweepReport {
    let n = cfg.grid;
    run("paths", cfg, move |g, t| {
        let topo = g.topology(4, 3, 16);
        let Some(ctx) = t.absorb("context", PathCtx::new(&topo)) else {
            return;
        };
        let gamma = g.path(&ctx, 3);
        let r = (|| -> Result<()> {
            gamma.validate_in(&ctx.ft)?;
            let nf = normal_form(&gamma)?;
            let mut ok = true;
            for u in grid(n) {
                ok &= nf.eval(&u)? == eval_path(&gamma, &u)?;
            }
            t.check(ok, || format!("normal form disagrees with evaluation for {gamma:?}"));

            let (s, tt) = (g.time(8), g.time(8));
            let one = Rational::one();

            // H ∘ γ_t reversed
            let a = PathExpr::reverse(PathExpr::h_transform(tt.clone(), gamma.clone()));
            let b = PathExpr::h_transform(tt.clone(), PathExpr::reverse(gamma.clone()));
            t.check(same_path(&a, &b, n)?, || format!("reverse/transform differ at t={tt}"));

            // H distributes over concatenation
            let k = 2 + g.below(3);
            let mut parts = vec![gamma.clone()];
            while parts.len() < k {
                let end = parts.last().unwrap().end()?;
                parts.push(g.path_from(&ctx, &end, 1));
            }
            let lhs = PathExpr::h_transform(tt.clone(), PathExpr::concat(parts.clone()));
            let rhs = PathExpr::concat(
                parts
                    .iter()
                    .map(|p| PathExpr::h_transform(tt.clone(), p.clone()))
                    .collect(),
            );
            t.check(same_path(&lhs, &rhs, n)?, || {
                format!("transform of a {k}-fold concatenation differs")
            });

            let grid_pts = grid(n);
            let (lo, hi) = {
                let mut a = g.time(16);
                let mut b = g.time(16);
                if a == b {
                    b = if a.is_one() { Rational::zero() } else { one.clone() };
                }
                if a > b {
                    std::mem::swap(&mut a, &mut b);
                }
                (a, b)
            };
            let restricted = nf.restrict(&lo, &hi)?;
            let start = gamma.start()?;
            let constant = PathExpr::Const { point: start.clone() };
            let mut vinv = true;
            let mut bounds = true;
            let mut res = true;
            let mut cons = true;
            for x in &grid_pts {
                let kx = kappa(&s, &tt, x)?;
                let c0 = chi_eval(&constant, &s, &tt, &Rational::zero(), x)?;
                for eta in &grid_pts {
                    let v = chi_eval(&gamma, &s, &tt, eta, x)?;
                    vinv &= v == chi_eval(&gamma, &tt, &s, eta, &(&one - x))?;
                    let u = &lo + eta * (&hi - &lo);
                    res &= chi_eval(&gamma, &s, &tt, &u, x)? == h_eval(&kx, &restricted.eval(eta)?)?;
                    cons &= chi_eval(&constant, &s, &tt, eta, x)? == c0;
                }
            }
            for eta in &grid_pts {
                bounds &= chi_eval(&gamma, &s, &tt, eta, &Rational::zero())?
                    == eval_path(&PathExpr::h_transform(s.clone(), gamma.clone()), eta)?;
                bounds &= chi_eval(&gamma, &s, &tt, eta, &one)?
                    == eval_path(&PathExpr::h_transform(tt.clone(), gamma.clone()), eta)?;
            }
            t.check(vinv, || {
                format!("χ(s,t) and χ(t,s) are not mirror images, s={s}, t={tt}")
            });
            t.check(bounds, || "χ edges are not H∘γ_s and H∘γ_t".into());
            t.check(res, || format!("restriction to [{lo},{hi}] breaks χ"));
            t.check(cons, || "χ of a constant path depends on η".into());

            // boundary square endpoints
            let p = chi_boundary(&gamma, &s, &tt, 0)?;
            let q = chi_boundary(&gamma, &s, &tt, 1)?;
            let loop_ = PathExpr::concat(vec![
                PathExpr::reverse(p),
                PathExpr::h_transform(s.clone(), gamma.clone()),
                q,
            ]);
            loop_.validate_in(&ctx.ft)?;
            let ht = PathExpr::h_transform(tt.clone(), gamma.clone());
            t.check(loop_.start()? == ht.start()? && loop_.end()? == ht.end()?, || {
                "boundary square endpoints differ".into()
            });

            // functoriality pasting
            let f = g.fuzzy_set(&ctx.ground, 16);
            let y = ctx.ground.name(g.below(ctx.ground.len())).to_string();
            let delta = g.path_from(&ctx, &gamma.end()?, 2);
            t.check(check_functoriality_on(&f, &y, &gamma, &delta, n)?, || {
                "functoriality pasting fails".into()
            });

            for (label, e) in [
                ("path", &gamma),
                ("transformed concatenation", &lhs),
                ("boundary loop", &loop_),
                ("reversed transform", &a),
            ] {
                t.note("continuity_paths");
                match continuity_failure(e, &topo)? {
                    None => t.checks += 1,
                    Some(target) => t.check(false, || format!("{label} has a non-open preimage of {target}: {e:?}")),
                }
            }
            Ok(())
        })();
        if let Err(e) = r {
            t.error(&format!("path {gamma:?}"), e);
        }
        t.note(&format!("depth_{}", gamma.depth()));
    })
}

/// Complement decision against the direct test, with half the pairs exact
/// complements and half perturbed at one element.
pub fn complement_sweep(cfg: &SweepConfig) -> SweepReport {
    let probes = [Rational::new(1, 4), Rational::half(), Rational::new(3, 4)];
    run("complement", cfg, move |g, t| {
        let ground = g.ground(GROUND_MAX);
        let f = g.fuzzy_set(&ground, DEN_MAX);
        let mut gv = fz_complement(&f).values().to_vec();
        let exact = g.coin();
        if !exact {
            let i = g.below(ground.len());
            let mut v = g.unit(DEN_MAX);
            while v == gv[i] {
                v = g.unit(DEN_MAX);
            }
            gv[i] = v;
        }
        let gg = FuzzySet::from_values(&ground, gv).unwrap();
        t.note(if exact { "exact_pairs" } else { "perturbed_pairs" });
        let direct = is_complement_direct(&f, &gg).unwrap();
        t.check(direct == exact, || "construction of the pair is off".into());
        for beta in &probes {
            let v = is_complement_with_probe(&f, &gg, beta).unwrap();
            t.check(v == direct, || {
                format!("probe {beta}: decision {v}, direct {direct} for {f:?}, {gg:?}")
            });
        }
        let fc = fz_complement(&f);
        t.check(is_complement_with_probe(&f, &fc, &Rational::half()).unwrap(), || {
            "F vs 1−F".into()
        });
        t.check(is_complement_with_probe(&fc, &f, &Rational::half()).unwrap(), || {
            "1−F vs F".into()
        });
        let y = ground.name(g.below(ground.len()));
        let z = ground.name(g.below(ground.len()));
        let beta = g.level(DEN_MAX);
        t.check(check_constant_inverse(&f, y, z, &beta).unwrap(), || {
            format!("constant inverse at {y}, {z}, {beta}")
        });
    })
}

/// Base-space facts: `ι_X(T)` is a topology, slices agree with it, and the
/// connectivity verdict comes with a valid certificate.
pub fn base_sweep(cfg: &SweepConfig) -> SweepReport {
    run("base", cfg, |g, t| {
        let topo = g.topology(3, 2, 8);
        let Some(ft) = t.absorb("iota_x", iota_x(&topo)) else {
            return;
        };
        let valid = FiniteTopology::new(ft.ground(), ft.opens().iter().copied()).is_ok();
        t.check(valid, || format!("ι_X is not a topology: {ft:?}"));
        t.check(slice_agrees(&topo).unwrap_or(false), || {
            "slice disagrees with ι_X".into()
        });
        match cylinder_connectivity(&topo, 2) {
            Ok(c) => {
                t.note(if c.base.pc { "connected" } else { "disconnected" });
                t.check(c.certificate.holds(), || {
                    format!("connectivity certificate fails: {:?}", c.certificate)
                });
            }
            Err(e) => t.error("connectivity", e),
        }
    })
}

/// Every sweep with the case counts used by the `laws` command.
pub fn run_all(seed: u64, cases: u64, mode: Mode, grid_n: u32) -> Vec<SweepReport> {
    let cfg = SweepConfig::new(seed, cases).with_mode(mode).with_grid(grid_n);
    let g2 = GroundSet::numbered(2).unwrap();
    vec![
        counterexample_sweep(&g2),
        psi_law_sweep(&cfg),
        round_trip_sweep(&SweepConfig {
            cases: cases * 5,
            ..cfg.clone()
        }),
        indicator_sweep(5),
        retraction_sweep(
            &SweepConfig {
                cases: cases.div_ceil(5).max(1),
                ..cfg.clone()
            },
            6,
        ),
        sigma_sweep(&cfg),
        path_sweep(&SweepConfig {
            cases: cases * 2,
            ..cfg.clone()
        }),
        complement_sweep(&SweepConfig {
            cases: cases * 5,
            ..cfg.clone()
        }),
        base_sweep(&cfg),
    ]
}
