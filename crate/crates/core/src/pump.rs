//! The pumping algorithm for ergodic games, with partition finding and potential reduction.

use crate::chain::value_vector;
use crate::error::{Error, Result};
use crate::game::{Game, Owner, Situation};
use crate::linalg::null_vector;
use crate::mdp::verify_saddle_point;
use crate::potential::{extract_locally_optimal_situation, local_values_of, transform_rewards, LocalValues, Potential};
use crate::rational::{fmt_rational, int, Rational};
use num_bigint::BigInt;
use num_traits::{One, Pow, Signed, Zero};

/// Solver switches shared by every layer.
#[derive(Clone, Debug)]
pub struct PumpConfig {
    /// Overrides the accuracy derived from the game parameters.
    pub epsilon: Option<Rational>,
    /// Check the paper-level bounds (step size, phase length, spread, norm) and record violations.
    pub check_bounds: bool,
    /// Verify every ergodic solution with two best-response solves.
    pub verify: bool,
    /// Record one trace line per pumping iteration.
    pub trace: bool,
}

impl Default for PumpConfig {
    fn default() -> Self {
        PumpConfig { epsilon: None, check_bounds: true, verify: true, trace: false }
    }
}

/// Counters and recorded bound violations, accumulated over all pump runs of a solve.
#[derive(Clone, Debug, Default)]
pub struct PumpStats {
    pub runs: u64,
    pub iterations: u64,
    pub phases: u64,
    pub reductions: u64,
    pub find_partition_calls: u64,
    pub infinite_delta: u64,
    /// Pump runs that ended with a contra-ergodic partition.
    pub partitions: u64,
    /// Unbounded steps whose limit local values touch, so no partition is certified.
    pub degenerate_infinite_delta: u64,
    pub violations: Vec<String>,
    pub trace: Vec<String>,
}

#[derive(Clone, Debug, Default)]
pub struct Ctx {
    pub config: PumpConfig,
    pub stats: PumpStats,
}

impl Ctx {
    pub fn new(config: PumpConfig) -> Ctx {
        Ctx { config, stats: PumpStats::default() }
    }

    fn violation(&mut self, msg: String) {
        self.stats.violations.push(msg);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PartitionSource {
    InfiniteDelta,
    FindPartition,
}

/// `(V+, V-, V0)` with the potential witnessing the local-value separation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContraErgodicPartition {
    pub plus: Vec<bool>,
    pub minus: Vec<bool>,
    pub zero: Vec<bool>,
    pub x: Potential,
    pub source: PartitionSource,
}

/// Lists every violated contra-ergodic decomposition condition.
pub fn check_partition(game: &Game, p: &ContraErgodicPartition) -> Vec<String> {
    let n = game.n();
    let mut out = Vec::new();
    if !p.plus.iter().any(|&b| b) || !p.minus.iter().any(|&b| b) {
        out.push("V+ or V- is empty".to_string());
    }
    for v in 0..n {
        let k = p.plus[v] as u8 + p.minus[v] as u8 + p.zero[v] as u8;
        if k != 1 {
            out.push(format!("position {v} lies in {k} parts"));
        }
    }
    for (i, a) in game.arcs().iter().enumerate() {
        let o = game.owner(a.from);
        if p.minus[a.from] && o != Owner::Black && !p.minus[a.to] {
            out.push(format!("arc {i} leaves V- from a {o:?} position"));
        }
        if p.plus[a.from] && o != Owner::White && !p.plus[a.to] {
            out.push(format!("arc {i} leaves V+ from a {o:?} position"));
        }
    }
    for v in 0..n {
        let stays = |set: &[bool]| game.out(v).iter().any(|&i| set[game.arc(i).to]);
        if p.plus[v] && game.owner(v) == Owner::White && !stays(&p.plus) {
            out.push(format!("White position {v} cannot stay in V+"));
        }
        if p.minus[v] && game.owner(v) == Owner::Black && !stays(&p.minus) {
            out.push(format!("Black position {v} cannot stay in V-"));
        }
    }
    let rx = transform_rewards(game, &p.x);
    let m = local_values_of(game, &rx).m;
    let lo_plus = (0..n).filter(|&v| p.plus[v]).map(|v| confined_value(game, &rx, &m, &p.plus, true, v)).min();
    let hi_minus = (0..n).filter(|&v| p.minus[v]).map(|v| confined_value(game, &rx, &m, &p.minus, false, v)).max();
    if let (Some(Some(a)), Some(Some(b))) = (lo_plus, hi_minus) {
        if a <= b {
            out.push(format!("confined local values do not separate: {} <= {}", fmt_rational(&a), fmt_rational(&b)));
        }
    }
    out
}

/// Local value at `v` when the player who may leave `set` is restricted to arcs inside it:
/// White in `V+`, Black in `V-`. `None` if there is no such arc.
fn confined_value(game: &Game, rx: &[Rational], m: &[Rational], set: &[bool], plus: bool, v: usize) -> Option<Rational> {
    let inside = game.out(v).iter().filter(|&&i| set[game.arc(i).to]).map(|&i| &rx[i]);
    match game.owner(v) {
        Owner::White if plus => inside.max().cloned(),
        Owner::Black if !plus => inside.min().cloned(),
        _ => Some(m[v].clone()),
    }
}

/// Accuracy under which a locally optimal situation of an ergodic game is optimal:
/// `1 / (n^2 max(1, k 2^k) D^(2k+2) + 1)`.
pub fn accuracy(game: &Game) -> Rational {
    let p = game.params();
    let k = p.k as u32;
    let n2 = BigInt::from(p.n * p.n);
    let kk = (BigInt::from(p.k) << p.k).max(BigInt::one());
    let d = Pow::pow(&p.d, 2 * k + 2);
    Rational::new(BigInt::one(), n2 * kk * d + 1)
}

/// Phase thresholds `t_i = m- + i M / 4`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Thresholds(pub [Rational; 5]);

impl Thresholds {
    pub fn new(lv: &LocalValues) -> Thresholds {
        let m = lv.range();
        let t = |i: i64| &lv.m_minus + &m * Rational::new(i.into(), 4.into());
        Thresholds([t(0), t(1), t(2), t(3), t(4)])
    }
}

/// Largest `delta` keeping pumped local values `>= t1` and the others `<= t3`; `None` is infinity.
/// `pumped` marks `V_x[t2, t4]`; `rx` and `m` are the current transformed rewards and local values.
pub fn compute_delta(game: &Game, rx: &[Rational], m: &[Rational], pumped: &[bool], t: &Thresholds) -> Option<Rational> {
    let (t1, t3) = (&t.0[1], &t.0[3]);
    let mut best: Option<Rational> = None;
    let mut bound = |d: Rational| {
        if best.as_ref().is_none_or(|b| d < *b) {
            best = Some(d);
        }
    };
    for v in 0..game.n() {
        let out = game.out(v);
        let split = |inside: bool| out.iter().copied().filter(move |&i| pumped[game.arc(i).to] == inside);
        if pumped[v] {
            match game.owner(v) {
                Owner::White => {
                    let stay = split(true).map(|i| &rx[i]).max();
                    if stay.is_none_or(|s| s < t1) {
                        if let Some(r) = split(false).map(|i| &rx[i]).max() {
                            bound(r - t1);
                        }
                    }
                }
                Owner::Black => {
                    if let Some(r) = split(false).map(|i| &rx[i]).min() {
                        bound(r - t1);
                    }
                }
                Owner::Random => {
                    let q: Rational = split(false).map(|i| game.prob(i)).sum();
                    if q.is_positive() {
                        bound((&m[v] - t1) / q);
                    }
                }
            }
        } else {
            match game.owner(v) {
                Owner::White => {
                    if let Some(r) = split(true).map(|i| &rx[i]).max() {
                        bound(t3 - r);
                    }
                }
                Owner::Black => {
                    let stay = split(false).map(|i| &rx[i]).min();
                    if stay.is_none_or(|s| s > t3) {
                        if let Some(r) = split(true).map(|i| &rx[i]).min() {
                            bound(t3 - r);
                        }
                    }
                }
                Owner::Random => {
                    let p: Rational = split(true).map(|i| game.prob(i)).sum();
                    if p.is_positive() {
                        bound((t3 - &m[v]) / p);
                    }
                }
            }
        }
    }
    best
}

#[derive(Clone, Debug)]
pub enum PumpOutcome {
    /// `M_x <= epsilon`, with the locally optimal situation for `x`.
    Ergodic { x: Potential, situation: Situation },
    Partition(ContraErgodicPartition),
}

/// With `delta` unbounded, the split `(pumped, rest)` certifies non-ergodicity only if the
/// limiting local values separate strictly. Otherwise returns the step after which no
/// local value changes any more.
fn degenerate_step(game: &Game, rx: &[Rational], m: &[Rational], plus: &[bool], minus: &[bool]) -> Option<Rational> {
    let n = game.n();
    let lo = (0..n).filter(|&v| plus[v]).filter_map(|v| confined_value(game, rx, m, plus, true, v)).min();
    let hi = (0..n).filter(|&v| minus[v]).filter_map(|v| confined_value(game, rx, m, minus, false, v)).max();
    match (lo, hi) {
        (Some(a), Some(b)) if a <= b => {}
        _ => return None,
    }
    let mut step = Rational::zero();
    for v in 0..n {
        let (inside, outside): (Vec<usize>, Vec<usize>) =
            game.out(v).iter().partition(|&&i| plus[game.arc(i).to] == plus[v]);
        let best = |arcs: &[usize], hi: bool| {
            let it = arcs.iter().map(|&i| &rx[i]);
            if hi { it.max().cloned() } else { it.min().cloned() }
        };
        let gap = match game.owner(v) {
            Owner::White if plus[v] => best(&outside, true).zip(best(&inside, true)).map(|(o, s)| o - s),
            Owner::Black if !plus[v] => best(&inside, false).zip(best(&outside, false)).map(|(s, o)| s - o),
            _ => None,
        };
        if let Some(g) = gap {
            step = step.max(g);
        }
    }
    Some(step)
}

fn range_of(values: &[Rational]) -> Rational {
    let hi = values.iter().max().unwrap();
    let lo = values.iter().min().unwrap();
    hi - lo
}

fn d_pow_k(game: &Game) -> BigInt {
    let p = game.params();
    Pow::pow(&p.d, p.k as u32)
}

pub fn pump(game: &Game, epsilon: &Rational, ctx: &mut Ctx) -> Result<PumpOutcome> {
    let n = game.n();
    let d_k = d_pow_k(game);
    let n2 = BigInt::from(n * n);
    let check = ctx.config.check_bounds;
    ctx.stats.runs += 1;
    let mut x: Potential = vec![Rational::zero(); n];
    let mut phase: u64 = 0;
    loop {
        ctx.stats.phases += 1;
        let rx = transform_rewards(game, &x);
        let lv = local_values_of(game, &rx);
        if lv.range() <= *epsilon {
            return Ok(PumpOutcome::Ergodic { situation: extract_locally_optimal_situation(game, &x), x });
        }
        let t = Thresholds::new(&lv);
        let m_h = lv.range();
        let r_h = range_of(&rx);
        let n_h = (Rational::from_integer(&n2 * &d_k) * &r_h * int(8) / &m_h).floor().to_integer() + 1;
        let x_phase = x.clone();
        let mut rx = rx;
        let mut m = lv.m;
        let mut entered_middle: Vec<bool> = m.iter().map(|v| *v >= t.0[1] && *v <= t.0[3]).collect();
        let mut i = BigInt::one();
        let mut in_phase: u64 = 0;
        let phase_over = loop {
            if i >= n_h {
                break false;
            }
            if range_of(&m) <= *epsilon {
                return Ok(PumpOutcome::Ergodic { situation: extract_locally_optimal_situation(game, &x), x });
            }
            let pumped: Vec<bool> = m.iter().map(|v| *v >= t.0[2]).collect();
            let delta = compute_delta(game, &rx, &m, &pumped, &t);
            ctx.stats.iterations += 1;
            in_phase += 1;
            if ctx.config.trace {
                let d = delta.as_ref().map_or("inf".to_string(), fmt_rational);
                ctx.stats
                    .trace
                    .push(format!("run={} phase={phase} i={i} delta={d} M={}", ctx.stats.runs, fmt_rational(&range_of(&m))));
            }
            let delta = match delta {
                Some(d) => d,
                None => {
                    ctx.stats.infinite_delta += 1;
                    let minus: Vec<bool> = pumped.iter().map(|b| !b).collect();
                    match degenerate_step(game, &rx, &m, &pumped, &minus) {
                        None => {
                            let zero = vec![false; n];
                            let p = ContraErgodicPartition { plus: pumped, minus, zero, x, source: PartitionSource::InfiniteDelta };
                            if check {
                                for e in check_partition(game, &p) {
                                    ctx.violation(format!("infinite-delta partition: {e}"));
                                }
                            }
                            ctx.stats.partitions += 1;
                            return Ok(PumpOutcome::Partition(p));
                        }
                        Some(d) => {
                            ctx.stats.degenerate_infinite_delta += 1;
                            d.max(&m_h / int(4))
                        }
                    }
                }
            };
            if check && delta < &m_h / int(4) {
                ctx.violation(format!("delta {} below M_h/4 = {}", fmt_rational(&delta), fmt_rational(&(&m_h / int(4)))));
            }
            for v in 0..n {
                if pumped[v] {
                    x[v] -= &delta;
                }
            }
            // Only arcs between pumped and unpumped positions change.
            for (j, a) in game.arcs().iter().enumerate() {
                match (pumped[a.from], pumped[a.to]) {
                    (true, false) => rx[j] -= &delta,
                    (false, true) => rx[j] += &delta,
                    _ => {}
                }
            }
            let new_m = local_values_of(game, &rx).m;
            if check {
                for v in 0..n {
                    if (&new_m[v] - &m[v]).abs() > delta {
                        ctx.violation(format!("local value of {v} moved by more than delta"));
                    }
                    let middle = new_m[v] >= t.0[1] && new_m[v] <= t.0[3];
                    if entered_middle[v] && !middle {
                        ctx.violation(format!("local value of {v} left [t1, t3] within a phase"));
                    }
                    entered_middle[v] |= middle;
                }
            }
            m = new_m;
            let low_empty = !m.iter().any(|v| *v < t.0[1]);
            let high_empty = !m.iter().any(|v| *v > t.0[3]);
            if low_empty || high_empty {
                break true;
            }
            i += 1;
        };
        if check && BigInt::from(in_phase) > n_h {
            ctx.violation(format!("phase {phase} used {in_phase} iterations, bound {n_h}"));
        }
        if !phase_over {
            ctx.stats.find_partition_calls += 1;
            let p = find_partition(game, &x, &x_phase, &r_h, ctx)?;
            ctx.stats.partitions += 1;
            return Ok(PumpOutcome::Partition(p));
        }
        let before = m_h;
        x = reduce_potentials(game, &x, ctx)?;
        ctx.stats.reductions += 1;
        if check {
            let after = local_values_of(game, &transform_rewards(game, &x)).range();
            if after * int(4) > before * int(3) {
                ctx.violation(format!("phase {phase} did not contract the local-value range by 3/4"));
            }
        }
        phase += 1;
    }
}

/// One constraint `a . y <= b`.
struct Row {
    a: Vec<Rational>,
    b: Rational,
}

/// Moves `x` to an extreme point of the polyhedron of potentials that keep every local value
/// within the current local-value range, shifted to be nonnegative.
pub fn reduce_potentials(game: &Game, x: &[Rational], ctx: &mut Ctx) -> Result<Potential> {
    let n = game.n();
    let lo = x.iter().min().unwrap().clone();
    let mut y: Vec<Rational> = x.iter().map(|v| v - &lo).collect();
    let rx = transform_rewards(game, &y);
    let lv = local_values_of(game, &rx);
    let (mm, mp) = (&lv.m_minus, &lv.m_plus);
    let mut rows: Vec<Row> = Vec::new();
    let mut push_pair = |a: Vec<Rational>, r: Rational, upper: bool, lower: bool| {
        if a.iter().all(|c| c.is_zero()) {
            return;
        }
        if upper {
            rows.push(Row { a: a.clone(), b: mp - &r });
        }
        if lower {
            rows.push(Row { a: a.iter().map(|c| -c).collect(), b: &r - mm });
        }
    };
    for v in 0..n {
        match game.owner(v) {
            Owner::Random => {
                let mut a = vec![Rational::zero(); n];
                let mut r = Rational::zero();
                for &i in game.out(v) {
                    let arc = game.arc(i);
                    let p = game.prob(i);
                    a[v] += &p;
                    a[arc.to] -= &p;
                    r += &p * Rational::from_integer(arc.reward.clone());
                }
                push_pair(a, r, true, true);
            }
            o => {
                for &i in game.out(v) {
                    let arc = game.arc(i);
                    let mut a = vec![Rational::zero(); n];
                    a[v] += Rational::one();
                    a[arc.to] -= Rational::one();
                    let in_e = rx[i] >= *mm && rx[i] <= *mp;
                    let r = Rational::from_integer(arc.reward.clone());
                    push_pair(a, r, in_e || o == Owner::White, in_e || o == Owner::Black);
                }
            }
        }
    }
    for v in 0..n {
        let mut a = vec![Rational::zero(); n];
        a[v] = -Rational::one();
        rows.push(Row { a, b: Rational::zero() });
    }
    let dot = |a: &[Rational], y: &[Rational]| -> Rational { a.iter().zip(y).filter(|(c, _)| !c.is_zero()).map(|(c, v)| c * v).sum() };
    if rows.iter().any(|r| dot(&r.a, &y) > r.b) {
        return Err(Error::InfeasibleInput);
    }
    for _ in 0..=n {
        let active: Vec<Vec<Rational>> = rows.iter().filter(|r| dot(&r.a, &y) == r.b).map(|r| r.a.clone()).collect();
        let Some(d) = null_vector(&active, n) else {
            break;
        };
        let step = |d: &[Rational]| -> Option<Rational> {
            rows.iter()
                .filter_map(|r| {
                    let ad = dot(&r.a, d);
                    ad.is_positive().then(|| (&r.b - dot(&r.a, &y)) / ad)
                })
                .min()
        };
        let (d, t) = match step(&d) {
            Some(t) => (d, t),
            None => {
                let neg: Vec<Rational> = d.iter().map(|c| -c).collect();
                match step(&neg) {
                    Some(t) => (neg, t),
                    None => return Err(Error::InvariantViolation("potential polyhedron contains a line".into())),
                }
            }
        };
        for v in 0..n {
            y[v] += &t * &d[v];
        }
    }
    let active: Vec<Vec<Rational>> = rows.iter().filter(|r| dot(&r.a, &y) == r.b).map(|r| r.a.clone()).collect();
    if null_vector(&active, n).is_some() {
        return Err(Error::InvariantViolation("potential reduction did not reach an extreme point".into()));
    }
    if ctx.config.check_bounds {
        let p = game.params();
        let kk = BigInt::from(p.k) * Pow::pow(&(BigInt::from(2) * &p.d), p.k as u32);
        let bound = Rational::from_integer(BigInt::from(n) * &p.r_range * kk.max(BigInt::one()));
        let norm = y.iter().map(|v| v.abs()).max().unwrap();
        if norm > bound {
            ctx.violation(format!("reduced potential norm {} exceeds {}", fmt_rational(&norm), fmt_rational(&bound)));
        }
        let after = local_values_of(game, &transform_rewards(game, &y));
        if after.m_minus < *mm || after.m_plus > *mp {
            ctx.violation("potential reduction widened the local-value range".into());
        }
    }
    Ok(y)
}

/// Builds `V- = X`, `V+ = Y` from the potential drift of the current phase and checks the result.
pub fn find_partition(game: &Game, x: &[Rational], x_phase: &[Rational], r_h: &Rational, ctx: &mut Ctx) -> Result<ContraErgodicPartition> {
    let n = game.n();
    let rel: Vec<Rational> = x.iter().zip(x_phase).map(|(a, b)| a - b).collect();
    let rx = transform_rewards(game, x);
    let lv = local_values_of(game, &rx);
    let ext: Vec<bool> = game
        .arcs()
        .iter()
        .enumerate()
        .map(|(i, a)| game.owner(a.from).is_deterministic() && rx[i] == lv.m[a.from])
        .collect();
    let mut levels: Vec<Rational> = rel.clone();
    levels.sort();
    levels.dedup();
    let x_min = levels[0].clone();
    // (i)/(ii): nothing White or Random, and no extremal Black arc, leaves {rel >= t}.
    let lower_ok = |t: &Rational| {
        game.arcs().iter().enumerate().all(|(i, a)| {
            let crossing = rel[a.from] >= *t && rel[a.to] < *t;
            !crossing || (game.owner(a.from) == Owner::Black && !ext[i])
        })
    };
    // (iii)/(iv): nothing Black or Random, and no extremal White arc, leaves {rel <= t}.
    let upper_ok = |t: &Rational| {
        game.arcs().iter().enumerate().all(|(i, a)| {
            let crossing = rel[a.from] <= *t && rel[a.to] > *t;
            !crossing || (game.owner(a.from) == Owner::White && !ext[i])
        })
    };
    let t_l = levels.iter().rev().find(|t| lower_ok(t)).unwrap().clone();
    let t_u = levels.iter().find(|t| upper_ok(t)).unwrap().clone();
    let minus: Vec<bool> = rel.iter().map(|v| *v >= t_l).collect();
    let plus: Vec<bool> = rel.iter().map(|v| *v <= t_u).collect();
    let zero: Vec<bool> = (0..n).map(|v| !minus[v] && !plus[v]).collect();
    let p = ContraErgodicPartition { plus, minus, zero, x: x.to_vec(), source: PartitionSource::FindPartition };
    if ctx.config.check_bounds {
        let params = game.params();
        let theta_k = Pow::pow(&params.theta, params.k as u32);
        let bound = Rational::from_integer(BigInt::from(n)) * r_h / theta_k;
        let spread = (-&t_l).max(&t_u - &x_min);
        if spread > bound {
            ctx.violation(format!("partition spread {} exceeds {}", fmt_rational(&spread), fmt_rational(&bound)));
        }
    }
    let errors = check_partition(game, &p);
    if !errors.is_empty() {
        let msg = format!("find_partition: {}", errors.join("; "));
        ctx.violation(msg.clone());
        return Err(Error::InvariantViolation(msg));
    }
    Ok(p)
}

/// Optimal solution of an ergodic game.
#[derive(Clone, Debug)]
pub struct ErgodicSolution {
    /// Common value, in true reward units.
    pub value: Rational,
    pub situation: Situation,
    /// Potential with local-value range at most the accuracy.
    pub x: Potential,
}

pub fn solve_ergodic(game: &Game, ctx: &mut Ctx) -> Result<ErgodicSolution> {
    let eps = ctx.config.epsilon.clone().unwrap_or_else(|| accuracy(game));
    match pump(game, &eps, ctx)? {
        PumpOutcome::Partition(p) => Err(Error::NotErgodic(Box::new(p))),
        PumpOutcome::Ergodic { x, situation } => {
            let values = value_vector(game, &situation)?;
            if values.iter().any(|v| *v != values[0]) {
                return Err(Error::InvariantViolation("pump succeeded but the value is not constant".into()));
            }
            if ctx.config.verify && !verify_saddle_point(game, &situation)?.ok {
                return Err(Error::InvariantViolation("pump situation is not a saddle point".into()));
            }
            Ok(ErgodicSolution { value: values[0].clone(), situation, x })
        }
    }
}

/// Denominator bound `sqrt(k) 2^(k/2) D^(k+1)` on ergodic class values, compared exactly by squaring.
pub fn denominator_within_bound(den: &BigInt, k: usize, d: &BigInt) -> bool {
    // den <= sqrt(k 2^k) D^(k+1)  <=>  den^2 <= k 2^k D^(2k+2)
    let rhs = (BigInt::from(k) << k) * Pow::pow(d, 2 * k as u32 + 2);
    den * den <= rhs
}

#[cfg(test)]
mod test {
    use super::*;
    use crate::game::Arc;
    use crate::rational::{int, rat};

    fn two_loops() -> Game {
        Game::new(vec![Owner::White, Owner::Black], vec![Arc::det(0, 0, 1), Arc::det(1, 1, 0)]).unwrap()
    }

    #[test]
    fn constant_rewards_succeed_immediately() {
        let g = Game::new(vec![Owner::White, Owner::Black], vec![Arc::det(0, 1, 3), Arc::det(1, 0, 3)]).unwrap();
        let mut ctx = Ctx::default();
        let s = solve_ergodic(&g, &mut ctx).unwrap();
        assert_eq!(s.value, int(3));
        assert_eq!(s.x, vec![int(0), int(0)]);
        assert_eq!(ctx.stats.iterations, 0);
    }

    #[test]
    fn two_loops_infinite_delta() {
        let g = two_loops();
        let lv = local_values_of(&g, &transform_rewards(&g, &[int(0), int(0)]));
        let t = Thresholds::new(&lv);
        let rx = transform_rewards(&g, &[int(0), int(0)]);
        assert_eq!(compute_delta(&g, &rx, &lv.m, &[true, false], &t), None);
        let mut ctx = Ctx::default();
        match solve_ergodic(&g, &mut ctx) {
            Err(Error::NotErgodic(p)) => {
                assert_eq!(p.plus, vec![true, false]);
                assert_eq!(p.minus, vec![false, true]);
                assert_eq!(p.source, PartitionSource::InfiniteDelta);
            }
            other => panic!("{other:?}"),
        }
        assert!(ctx.stats.violations.is_empty());
    }

    #[test]
    fn touching_limits_are_not_a_partition() {
        // Unbounded delta, but the confined local values meet at 1 and 3; the value is 2.
        let g = Game::new(
            vec![Owner::White, Owner::Black],
            vec![Arc::det(0, 0, 1), Arc::det(0, 1, 4), Arc::det(1, 1, 3), Arc::det(1, 0, 0)],
        )
        .unwrap();
        let mut ctx = Ctx::default();
        let s = solve_ergodic(&g, &mut ctx).unwrap();
        assert_eq!(s.value, int(2));
        assert_eq!(ctx.stats.degenerate_infinite_delta, 1);
        assert!(ctx.stats.violations.is_empty(), "{:?}", ctx.stats.violations);
    }

    #[test]
    fn random_half_mass_delta() {
        // v = 0 random, half its mass to the unpumped position 1.
        let g = Game::new(
            vec![Owner::Random, Owner::White],
            vec![Arc::random(0, 0, 4, rat(1, 2)), Arc::random(0, 1, 4, rat(1, 2)), Arc::det(1, 1, 0)],
        )
        .unwrap();
        let x = vec![int(0), int(0)];
        let rx = transform_rewards(&g, &x);
        let lv = local_values_of(&g, &rx);
        let t = Thresholds::new(&lv);
        assert_eq!(lv.m[0], t.0[4]);
        let d = compute_delta(&g, &rx, &lv.m, &[true, false], &t).unwrap();
        assert_eq!(d, (&t.0[4] - &t.0[1]) * int(2));
    }

    #[test]
    fn cycle_pumps_to_mean() {
        let g = Game::new(vec![Owner::White, Owner::Black], vec![Arc::det(0, 1, 1), Arc::det(1, 0, 3)]).unwrap();
        let mut ctx = Ctx::default();
        let s = solve_ergodic(&g, &mut ctx).unwrap();
        assert_eq!(s.value, int(2));
        assert!(ctx.stats.violations.is_empty(), "{:?}", ctx.stats.violations);
    }

    #[test]
    fn reduce_zero_is_vertex() {
        let g = Game::new(vec![Owner::White, Owner::Black], vec![Arc::det(0, 1, 1), Arc::det(1, 0, 3)]).unwrap();
        let mut ctx = Ctx::default();
        assert_eq!(reduce_potentials(&g, &[int(0), int(0)], &mut ctx).unwrap(), vec![int(0), int(0)]);
    }

    #[test]
    fn accuracy_values() {
        let g = two_loops();
        assert_eq!(accuracy(&g), rat(1, 5));
        assert!(!denominator_within_bound(&BigInt::from(1), 0, &BigInt::from(1)));
        assert!(denominator_within_bound(&BigInt::from(2), 1, &BigInt::from(2)));
    }
}
