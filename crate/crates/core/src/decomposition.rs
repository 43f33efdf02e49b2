//! Top and bottom classes, ergodicity intervals of parametrized games, and the rank-guessing solver.

use std::collections::HashMap;

use crate::bw::{bw_solution, find_intervals, solve_bw};
use crate::closure::{black_closure, black_semi_closure, white_semi_closure};
use crate::error::{Error, Result};
use crate::game::{Game, Owner, Situation};
use crate::mdp::{canonical_potential, verify_saddle_point};
use crate::potential::{transform_rewards, CanonicalReport, Potential};
use crate::pump::{solve_ergodic, ContraErgodicPartition, Ctx};
use crate::rational::{reconstruct, Rational};
use crate::restrict::{parametrize_bw, parametrize_bwr, restrict_game};
use num_bigint::BigInt;
use num_traits::{One, Pow, Signed};

/// The positions of highest (or lowest) value, solved, with the opponent's strategy elsewhere.
#[derive(Clone, Debug)]
pub struct ExtremeClass {
    pub set: Vec<bool>,
    /// Optimal choices on `set`, all staying inside it.
    pub situation: Situation,
    /// Common value on `set`, in true units.
    pub value: Rational,
    /// Choices of the opponent outside `set` that hold every other position to a value no better
    /// than `value`: Black for the top class, White for the bottom class.
    pub containment: Situation,
}

fn extreme_class(game: &Game, ctx: &mut Ctx, top: bool) -> Result<ExtremeClass> {
    let n = game.n();
    let mut cur = vec![true; n];
    let mut containment = Situation::empty(n);
    loop {
        let sub = restrict_game(game, &cur)
            .map_err(|e| Error::InvariantViolation(format!("removing a semi-closure left an invalid game: {e}")))?;
        match solve_ergodic(&sub.game, ctx) {
            Ok(sol) => {
                let mut situation = Situation::empty(n);
                sub.lift_situation(&sol.situation, &mut situation);
                return Ok(ExtremeClass { set: cur, situation, value: sol.value, containment });
            }
            Err(Error::NotErgodic(p)) => {
                let (side, confined) = if top { (&p.minus, Owner::Black) } else { (&p.plus, Owner::White) };
                let cl = if top { black_semi_closure(&sub.game, side) } else { white_semi_closure(&sub.game, side) };
                let mut local = cl.strategy.clone();
                confine(&sub.game, &p, side, confined, &mut local);
                sub.lift_situation(&local, &mut containment);
                for (i, &v) in sub.map.iter().enumerate() {
                    if cl.set[i] {
                        cur[v] = false;
                    }
                }
            }
            Err(e) => return Err(e),
        }
    }
}

/// Lets `owner` stay inside `side` along its best transformed reward there.
fn confine(game: &Game, p: &ContraErgodicPartition, side: &[bool], owner: Owner, s: &mut Situation) {
    let rx = transform_rewards(game, &p.x);
    for v in game.positions_of(owner) {
        if !side[v] {
            continue;
        }
        let inside = game.out(v).iter().copied().filter(|&i| side[game.arc(i).to]);
        let pick = if owner == Owner::Black {
            inside.min_by(|&a, &b| rx[a].cmp(&rx[b]))
        } else {
            inside.max_by(|&a, &b| rx[a].cmp(&rx[b]).then(b.cmp(&a)))
        };
        if let Some(i) = pick {
            s.set(v, i);
        }
    }
}

/// The top class: peels Black semi-closures of `V-` until the pump succeeds.
pub fn find_top(game: &Game, ctx: &mut Ctx) -> Result<ExtremeClass> {
    extreme_class(game, ctx, true)
}

/// The bottom class: peels White semi-closures of `V+` until the pump succeeds.
pub fn find_bottom(game: &Game, ctx: &mut Ctx) -> Result<ExtremeClass> {
    extreme_class(game, ctx, false)
}

/// The parameter values for which `G[Y](x)` is ergodic, clipped to `[-R, R]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ErgodicityInterval {
    Empty,
    Interval { tau1: Rational, tau2: Rational },
}

/// Outcome of one probe of `G[Y](x)`; class values are in stored units.
#[derive(Clone, Debug, PartialEq, Eq)]
enum Probe {
    Ergodic,
    /// The bottom class has value `z < x`. It is closed for White and random moves, so Black holds
    /// it to `z` for every parameter: nothing above `z` is ergodic.
    Left(Rational),
    /// The top class has value `y > x`. It is closed for Black and random moves, so White secures
    /// `y` there for every parameter: nothing below `y` is ergodic.
    Right(Rational),
}

struct ErgodicityProbe<'a> {
    game: &'a Game,
    y: &'a [bool],
    cache: HashMap<Rational, Probe>,
}

impl ErgodicityProbe<'_> {
    fn at(&mut self, x: &Rational, ctx: &mut Ctx) -> Result<Probe> {
        if let Some(p) = self.cache.get(x) {
            return Ok(p.clone());
        }
        let inst = parametrize_bwr(self.game, self.y, x)?;
        let scale = Rational::from_integer(self.game.scale().clone());
        let top = find_top(&inst.game, ctx)?;
        let p = if top.set.iter().all(|&b| b) {
            Probe::Ergodic
        } else if &top.value * &scale > *x {
            Probe::Right(top.value * &scale)
        } else {
            Probe::Left(find_bottom(&inst.game, ctx)?.value * &scale)
        };
        self.cache.insert(x.clone(), p.clone());
        Ok(p)
    }

    fn ergodic(&mut self, x: &Rational, ctx: &mut Ctx) -> Result<bool> {
        Ok(self.at(x, ctx)? == Probe::Ergodic)
    }
}

/// Denominator bound for the ends of an ergodicity interval of `G[Y](x)`, in stored units:
/// `n' max(1, ceil(sqrt(k' 2^k'))) D^(k'+1)` with `n' = |Y| + 1` and `k'` the random positions of `Y`.
pub fn interval_denominator_bound(game: &Game, y: &[bool]) -> BigInt {
    let n = y.iter().filter(|&&b| b).count() + 1;
    let k = (0..game.n()).filter(|&v| y[v] && game.owner(v) == Owner::Random).count();
    let kk = BigInt::from(k) << k;
    let mut root = kk.sqrt();
    if &root * &root < kk {
        root += 1;
    }
    let d = game.params().d;
    BigInt::from(n) * root.max(BigInt::one()) * Pow::pow(&d, k as u32 + 1)
}

fn sweep_bound(game: &Game) -> Rational {
    Rational::from_integer(game.params().r_abs.max(BigInt::one()))
}

/// The ergodicity interval of `G[Y](x)` within `[-R, R]` (parameter in stored units).
///
/// Every non-ergodic probe certifies a top or bottom class whose value does not depend on the
/// parameter, so the search jumps straight to that value. Each jump passes a distinct class value,
/// so there are at most `|Y| + 1` probes per side and every probe has a small denominator.
pub fn find_ergodicity_interval(game: &Game, y: &[bool], ctx: &mut Ctx) -> Result<ErgodicityInterval> {
    let r = sweep_bound(game);
    let mut probe = ErgodicityProbe { game, y, cache: HashMap::new() };
    let mut x = -&r;
    let tau1 = loop {
        match probe.at(&x, ctx)? {
            Probe::Ergodic => break x,
            Probe::Left(_) => return Ok(ErgodicityInterval::Empty),
            Probe::Right(v) if v > r => return Ok(ErgodicityInterval::Empty),
            Probe::Right(v) if v > x => x = v,
            Probe::Right(_) => return Err(Error::InvariantViolation("top class value below the parameter".into())),
        }
    };
    let mut x = r.clone();
    let tau2 = loop {
        match probe.at(&x, ctx)? {
            Probe::Ergodic => break x,
            Probe::Left(v) if v >= tau1 && v < x => x = v,
            _ => {
                return Err(Error::InvariantViolation(format!(
                    "ergodic at {tau1} but a class rules out every parameter in [{tau1}, {x}]"
                )))
            }
        }
    };
    Ok(ErgodicityInterval::Interval { tau1, tau2 })
}

/// The same interval by plain bisection on the parameter, stopping below `1/Q^2` for the bound `Q`
/// of [`interval_denominator_bound`] and finishing each end by rational reconstruction. Much
/// slower, since probes get large denominators; kept as an independent check.
pub fn find_ergodicity_interval_bisection(game: &Game, y: &[bool], ctx: &mut Ctx) -> Result<ErgodicityInterval> {
    let r = sweep_bound(game);
    let q = interval_denominator_bound(game, y);
    let width = Rational::new(BigInt::one(), &q * &q);
    let two = Rational::from_integer(2.into());
    let mut probe = ErgodicityProbe { game, y, cache: HashMap::new() };
    let lo_end = -&r;
    let inside = match (probe.at(&lo_end, ctx)?, probe.at(&r, ctx)?) {
        (Probe::Ergodic, _) => lo_end.clone(),
        (_, Probe::Ergodic) => r.clone(),
        (Probe::Left(_), _) | (_, Probe::Right(_)) => return Ok(ErgodicityInterval::Empty),
        (Probe::Right(_), Probe::Left(_)) => {
            let (mut lo, mut hi) = (lo_end.clone(), r.clone());
            let mut found = None;
            while &hi - &lo >= width {
                let mid = (&lo + &hi) / &two;
                match probe.at(&mid, ctx)? {
                    Probe::Ergodic => {
                        found = Some(mid);
                        break;
                    }
                    Probe::Right(_) => lo = mid,
                    Probe::Left(_) => hi = mid,
                }
            }
            // A single ergodic point is a fraction with small denominator in the last bracket.
            let found = match found {
                Some(x) => Some(x),
                None => match reconstruct(&lo, &hi, &q) {
                    Some(c) if probe.ergodic(&c, ctx)? => Some(c),
                    _ => None,
                },
            };
            match found {
                Some(x) => x,
                None => return Ok(ErgodicityInterval::Empty),
            }
        }
    };
    let end = |from: &Rational, limit: Rational, probe: &mut ErgodicityProbe, ctx: &mut Ctx| -> Result<Rational> {
        if probe.ergodic(&limit, ctx)? {
            return Ok(limit);
        }
        // `good` is ergodic, `bad` is not; the end lies in between.
        let (mut good, mut bad) = (from.clone(), limit);
        while (&good - &bad).abs() >= width {
            let mid = (&good + &bad) / &two;
            if probe.ergodic(&mid, ctx)? {
                good = mid;
            } else {
                bad = mid;
            }
        }
        let (lo, hi) = if good < bad { (&good, &bad) } else { (&bad, &good) };
        match reconstruct(lo, hi, &q) {
            Some(c) if probe.ergodic(&c, ctx)? => Ok(c),
            _ => Err(Error::InvariantViolation(format!(
                "no ergodic endpoint with denominator at most {q} between {lo} and {hi}"
            ))),
        }
    };
    let tau1 = end(&inside, lo_end.clone(), &mut probe, ctx)?;
    let tau2 = end(&inside, r.clone(), &mut probe, ctx)?;
    Ok(ErgodicityInterval::Interval { tau1, tau2 })
}

/// Optimal choices on `Y` for every parameter in `[tau1, tau2]`: White from the game at `tau2`,
/// Black from the game at `tau1`. Written into `s`.
pub fn combine_interval_strategies(
    game: &Game,
    y: &[bool],
    tau1: &Rational,
    tau2: &Rational,
    s: &mut Situation,
    ctx: &mut Ctx,
) -> Result<()> {
    let n = game.n();
    for (tau, owner) in [(tau2, Owner::White), (tau1, Owner::Black)] {
        let inst = parametrize_bwr(game, y, tau)?;
        let sol = solve_ergodic(&inst.game, ctx)?;
        let mut lifted = Situation::empty(n);
        inst.lift_situation(&sol.situation, &mut lifted);
        for v in game.positions_of(owner) {
            if y[v] {
                if let Some(a) = lifted.arc(v) {
                    s.set(v, a);
                }
            }
        }
    }
    Ok(())
}

/// Value classes in increasing order of value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValueDecomposition {
    pub thetas: Vec<Rational>,
    pub classes: Vec<Vec<bool>>,
}

impl ValueDecomposition {
    pub fn from_values(values: &[Rational]) -> ValueDecomposition {
        let mut thetas: Vec<Rational> = values.to_vec();
        thetas.sort();
        thetas.dedup();
        let classes = thetas.iter().map(|t| values.iter().map(|v| v == t).collect()).collect();
        ValueDecomposition { thetas, classes }
    }

    pub fn class_of(&self, v: usize) -> Option<usize> {
        self.classes.iter().position(|c| c[v])
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionReport {
    pub ok: bool,
    pub violations: Vec<String>,
}

/// Checks that the classes partition the positions and that no arc breaks the class order:
/// White never moves up, Black never moves down, both can stay, and random positions of the
/// lowest and highest class never leave it.
pub fn check_decomposition(game: &Game, d: &ValueDecomposition) -> DecompositionReport {
    let mut violations = Vec::new();
    let n = game.n();
    let mut class = vec![usize::MAX; n];
    for v in 0..n {
        let owners: Vec<usize> = (0..d.classes.len()).filter(|&i| d.classes[i][v]).collect();
        match owners.as_slice() {
            [i] => class[v] = *i,
            _ => violations.push(format!("position {v} lies in {} classes", owners.len())),
        }
    }
    if !violations.is_empty() {
        return DecompositionReport { ok: false, violations };
    }
    let last = d.classes.len() - 1;
    for (i, a) in game.arcs().iter().enumerate() {
        let (cf, ct) = (class[a.from], class[a.to]);
        match game.owner(a.from) {
            Owner::White if ct > cf => violations.push(format!("(i) White arc {i} leads to a higher class")),
            Owner::Black if ct < cf => violations.push(format!("(ii) Black arc {i} leads to a lower class")),
            Owner::Random if cf != ct && cf == 0 => {
                violations.push(format!("(v) random arc {i} leaves the lowest class"))
            }
            Owner::Random if cf != ct && cf == last => {
                violations.push(format!("(vi) random arc {i} leaves the highest class"))
            }
            _ => {}
        }
    }
    for v in 0..n {
        let o = game.owner(v);
        if o.is_deterministic() && !game.out(v).iter().any(|&i| class[game.arc(i).to] == class[v]) {
            let tag = if o == Owner::White { "(iii)" } else { "(iv)" };
            violations.push(format!("{tag} {o:?} position {v} cannot stay in its class"));
        }
    }
    DecompositionReport { ok: violations.is_empty(), violations }
}

/// Canonical-form certificate for one value class, computed on `G[S(theta)](theta)`.
#[derive(Clone, Debug)]
pub struct ClassCertificate {
    pub theta: Rational,
    pub positions: Vec<usize>,
    /// Potential on the class positions followed by `w`; `None` if none was found.
    pub potential: Option<Potential>,
    pub report: Option<CanonicalReport>,
}

impl ClassCertificate {
    pub fn ok(&self) -> bool {
        self.report.as_ref().is_some_and(|r| r.ok)
    }
}

#[derive(Clone, Debug)]
pub struct SolveResult {
    /// Optimal values in true units.
    pub values: Vec<Rational>,
    pub situation: Situation,
    pub decomposition: ValueDecomposition,
    pub decomposition_report: DecompositionReport,
    pub certificates: Vec<ClassCertificate>,
    /// Rank guesses tried (0 when no guessing was needed).
    pub guesses: u64,
}

impl SolveResult {
    pub fn certified(&self) -> bool {
        self.decomposition_report.ok && self.certificates.iter().all(|c| c.ok())
    }
}

fn class_certificate(game: &Game, s: &Situation, theta: &Rational, class: &[bool]) -> Result<ClassCertificate> {
    let positions: Vec<usize> = (0..game.n()).filter(|&v| class[v]).collect();
    let theta_stored = theta * Rational::from_integer(game.scale().clone());
    let inst = parametrize_bwr(game, class, &theta_stored)?;
    let mut local = Situation::empty(inst.game.n());
    let back: HashMap<usize, usize> =
        inst.arc_map.iter().enumerate().filter_map(|(j, a)| a.map(|a| (a, j))).collect();
    for (i, &v) in inst.map.iter().enumerate() {
        if let Some(a) = s.arc(v) {
            match back.get(&a) {
                Some(&j) => local.set(i, j),
                None => return Ok(ClassCertificate { theta: theta.clone(), positions, potential: None, report: None }),
            }
        }
    }
    local.set(inst.w, inst.game.out(inst.w)[0]);
    let found = canonical_potential(&inst.game, &local, theta)?;
    let (potential, report) = match found {
        Some((x, r)) => (Some(x), Some(r)),
        None => (None, None),
    };
    Ok(ClassCertificate { theta: theta.clone(), positions, potential, report })
}

/// Verifies `s` as a saddle point and attaches the value decomposition and per-class certificates.
pub fn certify(game: &Game, s: &Situation, _ctx: &mut Ctx) -> Result<SolveResult> {
    let check = verify_saddle_point(game, s)?;
    if !check.ok {
        return Err(Error::InvariantViolation("the computed situation is not a saddle point".into()));
    }
    let decomposition = ValueDecomposition::from_values(&check.values);
    let decomposition_report = check_decomposition(game, &decomposition);
    let mut certificates = Vec::new();
    for (theta, class) in decomposition.thetas.iter().zip(&decomposition.classes) {
        certificates.push(class_certificate(game, s, theta, class)?);
    }
    Ok(SolveResult {
        values: check.values,
        situation: s.clone(),
        decomposition,
        decomposition_report,
        certificates,
        guesses: 0,
    })
}

/// Dense rank guesses for `k` random positions (values `1..=m` all used), in lexicographic order.
#[derive(Clone, Debug)]
pub struct RankGuesses {
    k: usize,
    next: Option<Vec<usize>>,
}

impl RankGuesses {
    pub fn new(k: usize) -> RankGuesses {
        RankGuesses { k, next: Some(vec![1; k]) }
    }

    fn dense(g: &[usize]) -> bool {
        let m = g.iter().copied().max().unwrap_or(0);
        (1..=m).all(|r| g.contains(&r))
    }

    fn advance(&self, g: &mut [usize]) -> bool {
        for i in (0..g.len()).rev() {
            if g[i] < self.k {
                g[i] += 1;
                for x in g.iter_mut().skip(i + 1) {
                    *x = 1;
                }
                return true;
            }
        }
        false
    }
}

impl Iterator for RankGuesses {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let cur = self.next.take()?;
        let mut g = cur.clone();
        while self.advance(&mut g) {
            if Self::dense(&g) {
                self.next = Some(g);
                break;
            }
        }
        Some(cur)
    }
}

/// Errors that mean the current branch of a guess is infeasible rather than a bug.
fn dead_branch(e: &Error) -> bool {
    matches!(e, Error::Game(_) | Error::NotErgodic(_) | Error::LinAlg(_))
}

struct Search<'a> {
    game: &'a Game,
    /// Guessed rank of every random position (0 for deterministic ones).
    rank: Vec<usize>,
    k: usize,
}

fn any(mask: &[bool]) -> bool {
    mask.iter().any(|&b| b)
}

impl Search<'_> {
    fn accept(&self, s: &Situation) -> Result<Option<Situation>> {
        if !s.is_complete(self.game) {
            return Ok(None);
        }
        Ok(verify_saddle_point(self.game, s)?.ok.then(|| s.clone()))
    }

    fn solve_bw_part(&self, y: &[bool], s: &mut Situation, ctx: &mut Ctx) -> Result<()> {
        let sub = restrict_game(self.game, y)?;
        let sol = bw_solution(&sub.game, ctx)?;
        sub.lift_situation(&sol.situation, s);
        Ok(())
    }

    fn level(&self, u: &[bool], l: usize, s: &Situation, ctx: &mut Ctx) -> Result<Option<Situation>> {
        let g = self.game;
        let n = g.n();
        if !any(u) {
            return self.accept(s);
        }
        let random = |v: usize| g.owner(v) == Owner::Random;
        if !(0..n).any(|v| u[v] && random(v)) {
            let mut s = s.clone();
            return match self.solve_bw_part(u, &mut s, ctx) {
                Ok(()) => self.accept(&s),
                Err(e) if dead_branch(&e) => Ok(None),
                Err(e) => Err(e),
            };
        }
        if l > self.k {
            return Ok(None);
        }
        let high: Vec<bool> = (0..n).map(|v| u[v] && random(v) && self.rank[v] > l).collect();
        let closed = black_closure(g, &high).set;
        let ul: Vec<bool> = (0..n).map(|v| u[v] && !closed[v]).collect();
        if !any(&ul) {
            return self.level(u, l + 1, s, ctx);
        }
        let pg = match parametrize_bw(g, &ul) {
            Ok(pg) => pg,
            Err(_) => return Ok(None),
        };
        let structure = find_intervals(&pg, ctx)?;
        let lift = |mask: &[bool]| -> Vec<bool> {
            (0..n).map(|v| ul[v] && pg.index[v].is_some_and(|i| mask[i])).collect()
        };
        for interval in &structure.intervals {
            let plus = lift(&interval.plus);
            let zero = lift(&interval.zero);
            let mut s1 = s.clone();
            let attempt = (|| -> Result<bool> {
                if any(&plus) {
                    self.solve_bw_part(&plus, &mut s1, ctx)?;
                }
                if any(&zero) {
                    if (0..n).any(|v| zero[v] && random(v)) {
                        match find_ergodicity_interval(g, &zero, ctx)? {
                            ErgodicityInterval::Empty => return Ok(false),
                            ErgodicityInterval::Interval { tau1, tau2 } => {
                                combine_interval_strategies(g, &zero, &tau1, &tau2, &mut s1, ctx)?
                            }
                        }
                    } else {
                        self.solve_bw_part(&zero, &mut s1, ctx)?;
                    }
                }
                Ok(true)
            })();
            match attempt {
                Ok(true) => {}
                Ok(false) => continue,
                Err(e) if dead_branch(&e) => continue,
                Err(e) => return Err(e),
            }
            let rest: Vec<bool> = (0..n).map(|v| u[v] && !plus[v] && !zero[v]).collect();
            let found = if any(&rest) { self.level(&rest, l + 1, &s1, ctx)? } else { self.accept(&s1)? };
            if found.is_some() {
                return Ok(found);
            }
        }
        Ok(None)
    }
}

/// Solves any valid game: BW-games directly, otherwise by trying rank guesses for the random
/// positions until a situation passes the saddle-point check.
pub fn bwr_solve(game: &Game, ctx: &mut Ctx) -> Result<SolveResult> {
    let randoms: Vec<usize> = game.positions_of(Owner::Random).collect();
    let k = randoms.len();
    if k == 0 {
        return solve_bw(game, ctx);
    }
    let mut tried = 0;
    for guess in RankGuesses::new(k) {
        tried += 1;
        let mut rank = vec![0; game.n()];
        for (&v, &g) in randoms.iter().zip(&guess) {
            rank[v] = g;
        }
        let search = Search { game, rank, k };
        let all = vec![true; game.n()];
        if let Some(s) = search.level(&all, 1, &Situation::empty(game.n()), ctx)? {
            let mut result = certify(game, &s, ctx)?;
            result.guesses = tried;
            return Ok(result);
        }
    }
    Err(Error::ExhaustedGuesses)
}
