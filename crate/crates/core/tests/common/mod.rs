#![allow(dead_code)]

use std::collections::HashMap;

use bwr::bw::{find_intervals, ParamValues};
use bwr::game::Situation;
use bwr::pump::Ctx;
use bwr::rational::{int, Rational};
use bwr::restrict::{ParamBWGame, ParamInstance};

/// Restricts `s` (a situation of the original game) to the positions of `inst`, with `w` on its loop.
pub fn situation_in_instance(inst: &ParamInstance, s: &Situation) -> Option<Situation> {
    let back: HashMap<usize, usize> =
        inst.arc_map.iter().enumerate().filter_map(|(j, a)| a.map(|a| (a, j))).collect();
    let mut local = Situation::empty(inst.game.n());
    for (i, &v) in inst.map.iter().enumerate() {
        if let Some(a) = s.arc(v) {
            local.set(i, *back.get(&a)?);
        }
    }
    local.set(inst.w, *inst.game.out(inst.w).last()?);
    Some(local)
}

/// Parameters at which to probe `pg`: every breakpoint and the midpoint of every gap.
pub fn sample_points(breakpoints: &[Rational]) -> Vec<Rational> {
    let mut pts = breakpoints.to_vec();
    for w in breakpoints.windows(2) {
        pts.push((&w[0] + &w[1]) / int(2));
    }
    pts.sort();
    pts
}

/// Checks the three regimes of every position interval and the partition of every piece by
/// re-solving `pg` at sampled parameters. Returns the list of failures.
pub fn interval_failures(pg: &ParamBWGame, ctx: &mut Ctx) -> Result<Vec<String>, bwr::error::Error> {
    let is = find_intervals(pg, ctx)?;
    let mut vals = ParamValues::new(pg);
    let mut bad = Vec::new();
    for x in sample_points(&is.breakpoints) {
        let mu = vals.at(&x, ctx)?.to_vec();
        for v in 0..pg.n() {
            let (l1, l2) = (&is.lambda1[v], &is.lambda2[v]);
            let ok = if x < *l1 {
                mu[v] > x
            } else if x > *l2 {
                mu[v] < x
            } else {
                mu[v] == x
            };
            if !ok {
                bad.push(format!("position {v} at {x}: value {} with interval [{l1}, {l2}]", mu[v]));
            }
        }
    }
    for piece in &is.intervals {
        let mid = (&piece.lo + &piece.hi) / int(2);
        let mu = vals.at(&mid, ctx)?.to_vec();
        for v in 0..pg.n() {
            let cls = [piece.minus[v], piece.zero[v], piece.plus[v]];
            if cls.iter().filter(|&&b| b).count() != 1 {
                bad.push(format!("position {v} classified {cls:?} on [{}, {}]", piece.lo, piece.hi));
            }
            let expect = [mu[v] < mid, mu[v] == mid, mu[v] > mid];
            if piece.lo < piece.hi && cls != expect {
                bad.push(format!("position {v} classified {cls:?} on [{}, {}] but value {} at {mid}", piece.lo, piece.hi, mu[v]));
            }
        }
    }
    Ok(bad)
}

/// A random subset mask from the bits of `bits`, never empty.
pub fn mask(n: usize, bits: u64) -> Vec<bool> {
    let mut m: Vec<bool> = (0..n).map(|i| bits >> i & 1 == 1).collect();
    if !m.iter().any(|&b| b) {
        m[0] = true;
    }
    m
}
