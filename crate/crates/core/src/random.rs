// SPDX-License-Identifier: Apache-2.0

//! Seeded generators for sweeps. A `(seed, case)` pair always yields the same
//! object, independent of how many cases run or in which order.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::base::{iota_x, FiniteTopology, SpecializationPreorder};
use crate::cylinder::SubbasisElem;
use crate::error::Result;
use crate::fuzzy::{fz_generate_topology, FuzzySet, FuzzyTopology, GroundSet, NamedFuzzySet};
use crate::path::{FencePath, PathExpr};
use crate::rational::Rational;
use crate::retraction::CylPoint;

/// Largest denominator used for membership values.
pub const DEN_MAX: i64 = 32;
/// Largest ground set.
pub const GROUND_MAX: usize = 6;
/// Most generators per random topology.
pub const GENERATORS_MAX: usize = 4;

pub struct Gen {
    rng: ChaCha8Rng,
}

impl Gen {
    pub fn new(seed: u64) -> Self {
        Gen {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Generator for case `case` of a sweep seeded with `seed`.
    pub fn for_case(seed: u64, case: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(case);
        Gen { rng }
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    pub fn coin(&mut self) -> bool {
        self.rng.gen_bool(0.5)
    }

    /// A value in `[0,1]` with denominator at most `den_max`, biased toward
    /// the endpoints so constants show up.
    pub fn unit(&mut self, den_max: i64) -> Rational {
        match self.rng.gen_range(0..10) {
            0 => Rational::zero(),
            1 => Rational::one(),
            _ => {
                let d = self.rng.gen_range(1..=den_max);
                Rational::new(self.rng.gen_range(0..=d), d)
            }
        }
    }

    /// A level in `J = [0,1)`.
    pub fn level(&mut self, den_max: i64) -> Rational {
        let d = self.rng.gen_range(1..=den_max);
        Rational::new(self.rng.gen_range(0..d), d)
    }

    /// A time in `[0,1]`.
    pub fn time(&mut self, den_max: i64) -> Rational {
        let d = self.rng.gen_range(1..=den_max);
        Rational::new(self.rng.gen_range(0..=d), d)
    }

    /// A threshold in `[−1,1)`.
    pub fn gamma(&mut self, den_max: i64) -> Rational {
        let d = self.rng.gen_range(1..=den_max);
        Rational::new(self.rng.gen_range(-d..d), d)
    }

    pub fn ground(&mut self, max: usize) -> GroundSet {
        GroundSet::numbered(self.rng.gen_range(1..=max)).expect("nonempty")
    }

    pub fn fuzzy_set(&mut self, ground: &GroundSet, den_max: i64) -> FuzzySet {
        let values = (0..ground.len()).map(|_| self.unit(den_max)).collect();
        FuzzySet::from_values(ground, values).expect("values in range")
    }

    pub fn generators(&mut self, ground: &GroundSet, max: usize, den_max: i64) -> Vec<NamedFuzzySet> {
        let k = self.rng.gen_range(1..=max);
        (1..=k)
            .map(|i| NamedFuzzySet::new(format!("T{i}"), self.fuzzy_set(ground, den_max)))
            .collect()
    }

    pub fn topology_on(&mut self, ground: &GroundSet, max_generators: usize, den_max: i64) -> FuzzyTopology {
        let gens = self.generators(ground, max_generators, den_max);
        fz_generate_topology(ground, &gens).expect("generated family is a topology")
    }

    pub fn topology(&mut self, max_ground: usize, max_generators: usize, den_max: i64) -> FuzzyTopology {
        let g = self.ground(max_ground);
        self.topology_on(&g, max_generators, den_max)
    }

    pub fn subbasis(&mut self, topo: &FuzzyTopology, den_max: i64) -> SubbasisElem {
        let gamma = self.gamma(den_max);
        if self.below(3) == 0 {
            SubbasisElem::pi2(gamma)
        } else {
            let o = &topo.opens()[self.below(topo.len())];
            SubbasisElem::tstar(o.name.clone(), gamma)
        }
    }

    pub fn point(&mut self, ground: &GroundSet, den_max: i64) -> CylPoint {
        CylPoint {
            x: ground.name(self.below(ground.len())).to_string(),
            alpha: self.level(den_max),
        }
    }

    pub fn pick<'a, T>(&mut self, items: &'a [T]) -> &'a T {
        items.choose(&mut self.rng).expect("nonempty choice")
    }
}

/// What path generation needs to know about the ambient space.
pub struct PathCtx {
    pub ground: GroundSet,
    pub ft: FiniteTopology,
    pub pre: SpecializationPreorder,
}

impl PathCtx {
    pub fn new(topo: &FuzzyTopology) -> Result<Self> {
        let ft = iota_x(topo)?;
        let pre = ft.specialization();
        Ok(PathCtx {
            ground: topo.ground().clone(),
            ft,
            pre,
        })
    }
}

/// Levels used inside generated paths; small denominators keep nested
/// transforms readable.
const PATH_DEN: i64 = 8;

impl Gen {
    fn fence_walk(&mut self, ctx: &PathCtx, from: &str) -> FencePath {
        let n = ctx.ground.len();
        let steps = self.below(4);
        let mut cur = ctx.ground.index_of(from).expect("known element");
        let mut pts = vec![from.to_string()];
        for _ in 0..steps {
            let nbrs: Vec<usize> = (0..n).filter(|&y| ctx.pre.comparable(cur, y)).collect();
            cur = *self.pick(&nbrs);
            pts.push(ctx.ground.name(cur).to_string());
        }
        FencePath::through(&pts, &ctx.ft).expect("walk follows comparable pairs")
    }

    /// A time `t` with `(1−t)·a = alpha` for some level `a`, and that `a`.
    fn shrink_from(&mut self, alpha: &Rational) -> (Rational, Rational) {
        if alpha.is_zero() {
            if self.coin() {
                return (Rational::one(), self.level(PATH_DEN));
            }
            return (self.time(PATH_DEN), Rational::zero());
        }
        let one = Rational::one();
        loop {
            let t = Rational::new(self.below(8) as i64, 8);
            let k = &one - &t;
            if &k > alpha {
                let a = alpha / &k;
                return (t, a);
            }
        }
    }

    /// A path starting at `p`.
    pub fn path_from(&mut self, ctx: &PathCtx, p: &CylPoint, depth: usize) -> PathExpr {
        let kinds = if depth == 0 { 3 } else { 7 };
        match self.below(kinds) {
            0 => PathExpr::Const { point: p.clone() },
            1 => PathExpr::vertical(p.x.clone(), p.alpha.clone(), self.level(PATH_DEN)),
            2 => PathExpr::lift(self.fence_walk(ctx, &p.x), p.alpha.clone()),
            3 => {
                let n = 2 + self.below(3);
                let mut parts = Vec::with_capacity(n);
                let mut at = p.clone();
                for _ in 0..n {
                    let part = self.path_from(ctx, &at, depth - 1);
                    at = part.end().expect("generated paths evaluate");
                    parts.push(part);
                }
                PathExpr::concat(parts)
            }
            4 => PathExpr::reverse(self.path_to(ctx, p, depth - 1)),
            5 => {
                let (t, a) = self.shrink_from(&p.alpha);
                let inner = self.path_from(
                    ctx,
                    &CylPoint {
                        x: p.x.clone(),
                        alpha: a,
                    },
                    depth - 1,
                );
                PathExpr::h_transform(t, inner)
            }
            _ => {
                let (s, a) = self.shrink_from(&p.alpha);
                let t = self.time(PATH_DEN);
                let anchor = CylPoint {
                    x: p.x.clone(),
                    alpha: a,
                };
                let end = self.below(2) as u8;
                let rho = if end == 0 {
                    self.path_from(ctx, &anchor, depth - 1)
                } else {
                    self.path_to(ctx, &anchor, depth - 1)
                };
                PathExpr::chi_boundary(rho, s, t, end)
            }
        }
    }

    /// A path ending at `p`.
    pub fn path_to(&mut self, ctx: &PathCtx, p: &CylPoint, depth: usize) -> PathExpr {
        match self.below(3) {
            0 => PathExpr::vertical(p.x.clone(), self.level(PATH_DEN), p.alpha.clone()),
            1 => {
                let mut f = self.fence_walk(ctx, &p.x);
                // walking backwards flips which side each midpoint favors
                f.points.reverse();
                f.mid.reverse();
                for s in &mut f.mid {
                    *s = match s {
                        crate::path::Side::Left => crate::path::Side::Right,
                        crate::path::Side::Right => crate::path::Side::Left,
                    };
                }
                PathExpr::lift(f, p.alpha.clone())
            }
            _ => PathExpr::reverse(self.path_from(ctx, p, depth)),
        }
    }

    pub fn path(&mut self, ctx: &PathCtx, depth: usize) -> PathExpr {
        let p = self.point(&ctx.ground, PATH_DEN);
        self.path_from(ctx, &p, depth)
    }
}
