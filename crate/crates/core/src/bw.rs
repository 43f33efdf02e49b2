//! Deterministic games: top-class peeling, and the interval structure of a parametrized BW-game.

use std::collections::HashMap;

use crate::decomposition::{certify, find_top, SolveResult};
use crate::error::{Error, Result};
use crate::game::{Game, Situation};
use crate::pump::Ctx;
use crate::rational::{reconstruct, Rational};
use crate::restrict::{restrict_game, ParamBWGame};
use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Values (true units) and an optimal situation of a game without random positions.
#[derive(Clone, Debug)]
pub struct BwSolution {
    pub values: Vec<Rational>,
    pub situation: Situation,
}

/// Repeatedly splits off the top class of the remaining positions. No verification.
pub fn bw_solution(game: &Game, ctx: &mut Ctx) -> Result<BwSolution> {
    if game.num_random() > 0 {
        return Err(Error::InvariantViolation("solve_bw called on a game with random positions".into()));
    }
    let n = game.n();
    let mut rest = vec![true; n];
    let mut values = vec![Rational::zero(); n];
    let mut situation = Situation::empty(n);
    while rest.iter().any(|&b| b) {
        let sub = restrict_game(game, &rest)
            .map_err(|e| Error::InvariantViolation(format!("remainder after peeling is not a game: {e}")))?;
        let top = find_top(&sub.game, ctx)?;
        for (i, &v) in sub.map.iter().enumerate() {
            if top.set[i] {
                values[v] = top.value.clone();
                rest[v] = false;
            }
        }
        sub.lift_situation(&top.situation, &mut situation);
    }
    Ok(BwSolution { values, situation })
}

/// Solves a BW-game and certifies the result.
pub fn solve_bw(game: &Game, ctx: &mut Ctx) -> Result<SolveResult> {
    let sol = bw_solution(game, ctx)?;
    certify(game, &sol.situation, ctx)
}

/// Memoised values of `pg` at parameter values, in the stored reward units of the base game.
pub struct ParamValues<'a> {
    pg: &'a ParamBWGame,
    cache: HashMap<Rational, Vec<Rational>>,
}

impl<'a> ParamValues<'a> {
    pub fn new(pg: &'a ParamBWGame) -> Self {
        ParamValues { pg, cache: HashMap::new() }
    }

    pub fn at(&mut self, x: &Rational, ctx: &mut Ctx) -> Result<&[Rational]> {
        if !self.cache.contains_key(x) {
            let g = self.pg.instantiate(x);
            let scale = Rational::from_integer(self.pg.base.scale().clone());
            let vals = bw_solution(&g, ctx)?.values.into_iter().map(|v| v * &scale).collect();
            self.cache.insert(x.clone(), vals);
        }
        Ok(&self.cache[x])
    }

    pub fn probes(&self) -> usize {
        self.cache.len()
    }
}

fn sweep_bound(pg: &ParamBWGame) -> Rational {
    Rational::from_integer(pg.r_bound.clone())
}

/// `(lambda1(v), lambda2(v))` by two binary searches, each stopped below `1/n^2` and finished by
/// rational reconstruction with denominators at most `n`. Cross-checked against the values at `-R`
/// and `R`.
fn interval_of(vals: &mut ParamValues, v: usize, ctx: &mut Ctx) -> Result<(Rational, Rational)> {
    let n = vals.pg.n();
    let max_den = BigInt::from(n);
    let width = Rational::new(BigInt::one(), BigInt::from(n * n));
    let r = sweep_bound(vals.pg);
    let two = Rational::from_integer(2.into());
    let at_lo = vals.at(&-&r, ctx)?[v].clone();
    let at_hi = vals.at(&r, ctx)?[v].clone();

    // lambda2: the last x with value(x) >= x.
    let lambda2 = if at_hi >= r {
        r.clone()
    } else {
        let (mut lo, mut hi) = (-&r, r.clone());
        while &hi - &lo >= width {
            let mid = (&lo + &hi) / &two;
            if vals.at(&mid, ctx)?[v] < mid {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        reconstruct(&lo, &hi, &max_den)
            .ok_or_else(|| Error::InvariantViolation(format!("no lambda2 candidate for position {v}")))?
    };
    // lambda1: the first x with value(x) <= x.
    let lambda1 = if at_lo <= -&r {
        -&r
    } else {
        let (mut lo, mut hi) = (-&r, r.clone());
        while &hi - &lo >= width {
            let mid = (&lo + &hi) / &two;
            if vals.at(&mid, ctx)?[v] > mid {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        reconstruct(&lo, &hi, &max_den)
            .ok_or_else(|| Error::InvariantViolation(format!("no lambda1 candidate for position {v}")))?
    };
    if lambda1 != at_lo || lambda2 != at_hi {
        return Err(Error::InvariantViolation(format!(
            "position {v}: binary search gave [{lambda1}, {lambda2}], direct evaluation [{at_lo}, {at_hi}]"
        )));
    }
    Ok((lambda1, lambda2))
}

/// The interval `I(v) = [lambda1(v), lambda2(v)]` on which the value of `v` equals the parameter.
pub fn position_interval(pg: &ParamBWGame, v: usize, ctx: &mut Ctx) -> Result<(Rational, Rational)> {
    interval_of(&mut ParamValues::new(pg), v, ctx)
}

/// One interval of the sweep with the positions below, on, and above the parameter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
    pub minus: Vec<bool>,
    pub zero: Vec<bool>,
    pub plus: Vec<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntervalStructure {
    pub breakpoints: Vec<Rational>,
    pub intervals: Vec<Interval>,
    pub lambda1: Vec<Rational>,
    pub lambda2: Vec<Rational>,
}

/// Splits `[-R, R]` at every `lambda` and classifies each position on every piece.
///
/// Boundaries are closed on both sides: a position whose value is constant and equal to an
/// endpoint of the piece is counted below (or above) rather than left out.
pub fn find_intervals(pg: &ParamBWGame, ctx: &mut Ctx) -> Result<IntervalStructure> {
    let n = pg.n();
    let r = sweep_bound(pg);
    let mut vals = ParamValues::new(pg);
    let mut lambda1 = Vec::with_capacity(n);
    let mut lambda2 = Vec::with_capacity(n);
    for v in 0..n {
        let (a, b) = interval_of(&mut vals, v, ctx)?;
        lambda1.push(a);
        lambda2.push(b);
    }
    let mut breakpoints: Vec<Rational> = lambda1.iter().chain(&lambda2).cloned().collect();
    breakpoints.push(-&r);
    breakpoints.push(r);
    breakpoints.sort();
    breakpoints.dedup();
    let mut intervals = Vec::new();
    for pair in breakpoints.windows(2) {
        let (lo, hi) = (&pair[0], &pair[1]);
        let minus: Vec<bool> = lambda2.iter().map(|l| l <= lo).collect();
        let plus: Vec<bool> = lambda1.iter().map(|l| l >= hi).collect();
        let zero: Vec<bool> = (0..n).map(|v| lambda1[v] <= *lo && *hi <= lambda2[v]).collect();
        for v in 0..n {
            if minus[v] as u8 + zero[v] as u8 + plus[v] as u8 != 1 {
                return Err(Error::InvariantViolation(format!(
                    "position {v} is not classified exactly once on [{lo}, {hi}]"
                )));
            }
        }
        intervals.push(Interval { lo: lo.clone(), hi: hi.clone(), minus, zero, plus });
    }
    Ok(IntervalStructure { breakpoints, intervals, lambda1, lambda2 })
}

#[cfg(test)]
mod test {
    use super::*;
    use crate::game::{Arc, Owner};
    use crate::rational::int;
    use crate::restrict::parametrize_bw;

    #[test]
    fn self_loop_and_cycle() {
        let g = Game::new(vec![Owner::White], vec![Arc::det(0, 0, 5)]).unwrap();
        let s = solve_bw(&g, &mut Ctx::default()).unwrap();
        assert_eq!(s.values, vec![int(5)]);
        let g = Game::new(vec![Owner::White, Owner::Black], vec![Arc::det(0, 1, 1), Arc::det(1, 0, 3)]).unwrap();
        let s = solve_bw(&g, &mut Ctx::default()).unwrap();
        assert_eq!(s.values, vec![int(2), int(2)]);
    }

    #[test]
    fn white_between_param_and_loop() {
        // White 0 picks the larger of x (via random 1) and the loop at 2; R = 3 from a transient arc.
        let g = Game::new(
            vec![Owner::White, Owner::Random, Owner::Black],
            vec![Arc::det(0, 1, 0), Arc::det(0, 2, 3), Arc::random(1, 1, 0, int(1)), Arc::det(2, 2, 1)],
        )
        .unwrap();
        let pg = parametrize_bw(&g, &[true, true, true]).unwrap();
        let mut ctx = Ctx::default();
        assert_eq!(position_interval(&pg, pg.index[0].unwrap(), &mut ctx).unwrap(), (int(1), int(3)));
        assert_eq!(position_interval(&pg, pg.w, &mut ctx).unwrap(), (int(-3), int(3)));
        assert_eq!(position_interval(&pg, pg.index[2].unwrap(), &mut ctx).unwrap(), (int(1), int(1)));
        let is = find_intervals(&pg, &mut ctx).unwrap();
        assert_eq!(is.breakpoints, vec![int(-3), int(1), int(3)]);
        assert_eq!(is.intervals.len(), 2);
        let v = pg.index[0].unwrap();
        assert!(is.intervals[0].plus[v] && is.intervals[1].zero[v]);
    }
}
