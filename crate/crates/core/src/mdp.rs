//! One-player mean-payoff MDPs (multichain policy iteration), saddle-point verification and
//! canonical potentials.

use crate::chain::{build_chain, chain_structure, stationary, MarkovChain};
use crate::error::{Error, Result};
use crate::game::{Game, Owner, Situation};
use crate::linalg::solve;
use crate::potential::{check_canonical_form, CanonicalReport, Potential};
use crate::rational::Rational;
use num_traits::{One, Zero};

/// Gain and bias of a chain, in stored reward units.
#[derive(Clone, Debug)]
pub struct GainBias {
    pub gain: Vec<Rational>,
    pub bias: Vec<Rational>,
}

/// Solves `g = P g`, `g + h = r + P h` with `sum pi h = 0` on every recurrent class.
pub fn gain_bias(chain: &MarkovChain) -> Result<GainBias> {
    let n = chain.n();
    let st = chain_structure(chain);
    let mut gain = vec![Rational::zero(); n];
    let mut bias = vec![Rational::zero(); n];
    for &c in &st.absorbing {
        let class = &st.classes[c];
        let pi = stationary(chain, class)?;
        let g: Rational = class.iter().zip(&pi).map(|(v, p)| p * &chain.reward[*v]).sum();
        let size = class.len();
        let pos = |v: usize| class.iter().position(|&u| u == v).unwrap();
        let mut a = vec![vec![Rational::zero(); size]; size];
        let mut b = vec![Rational::zero(); size];
        for (i, &v) in class.iter().enumerate().take(size - 1) {
            a[i][i] += Rational::one();
            for (u, p) in &chain.transition[v] {
                a[i][pos(*u)] -= p;
            }
            b[i] = &chain.reward[v] - &g;
        }
        a[size - 1] = pi;
        for (v, h) in class.iter().zip(solve(&a, &b)?) {
            gain[*v] = g.clone();
            bias[*v] = h;
        }
    }
    let t = &st.transient;
    if !t.is_empty() {
        let idx = |v: usize| t.binary_search(&v).ok();
        let mut a = vec![vec![Rational::zero(); t.len()]; t.len()];
        let mut bg = vec![Rational::zero(); t.len()];
        for (i, &v) in t.iter().enumerate() {
            a[i][i] += Rational::one();
            for (u, p) in &chain.transition[v] {
                match idx(*u) {
                    Some(j) => a[i][j] -= p,
                    None => bg[i] += p * &gain[*u],
                }
            }
        }
        let gt = solve(&a, &bg)?;
        for (v, g) in t.iter().zip(&gt) {
            gain[*v] = g.clone();
        }
        let mut bh = vec![Rational::zero(); t.len()];
        for (i, &v) in t.iter().enumerate() {
            bh[i] = &chain.reward[v] - &gain[v];
            for (u, p) in &chain.transition[v] {
                if idx(*u).is_none() {
                    bh[i] += p * &bias[*u];
                }
            }
        }
        for (v, h) in t.iter().zip(solve(&a, &bh)?) {
            bias[*v] = h;
        }
    }
    Ok(GainBias { gain, bias })
}

#[derive(Clone, Debug)]
pub struct BestResponse {
    /// Optimal values in true reward units.
    pub values: Vec<Rational>,
    pub situation: Situation,
    /// Bias of the optimal policy, in stored units.
    pub bias: Vec<Rational>,
    pub iterations: u64,
}

fn policy_count_bound(game: &Game, optimizer: Owner) -> u64 {
    let mut c: u64 = 1;
    for v in game.positions_of(optimizer) {
        c = c.saturating_mul(game.out(v).len() as u64);
    }
    c.saturating_add(1)
}

/// Optimal response of `optimizer` when the other player's choices in `fixed` are held fixed.
///
/// The optimizer starts from its own choices in `fixed` (first arcs where absent).
pub fn best_response(game: &Game, fixed: &Situation, optimizer: Owner) -> Result<BestResponse> {
    assert!(optimizer.is_deterministic());
    let sign = if optimizer == Owner::White { Rational::one() } else { -Rational::one() };
    let mut s = fixed.clone();
    for v in game.positions_of(optimizer) {
        if s.arc(v).is_none() {
            s.set(v, game.out(v)[0]);
        }
    }
    let limit = policy_count_bound(game, optimizer);
    let rewards: Vec<Rational> = game.arcs().iter().map(|a| Rational::from_integer(a.reward.clone())).collect();
    let mut iterations = 0;
    loop {
        iterations += 1;
        if iterations > limit {
            return Err(Error::NonTermination(limit));
        }
        let gb = gain_bias(&build_chain(game, &s))?;
        let (g, h) = (&gb.gain, &gb.bias);
        let mut changed = false;
        // Gain improvement where possible, otherwise bias improvement among gain-preserving arcs.
        for v in game.positions_of(optimizer) {
            let cur = s.arc(v).unwrap();
            let to = |i: usize| game.arc(i).to;
            let gkey = |i: usize| &sign * &g[to(i)];
            let gbest = game.out(v).iter().map(|&i| gkey(i)).max().unwrap();
            if gkey(cur) < gbest {
                s.set(v, game.out(v).iter().copied().find(|&i| gkey(i) == gbest).unwrap());
                changed = true;
                continue;
            }
            let candidates: Vec<usize> = game.out(v).iter().copied().filter(|&i| g[to(i)] == g[v]).collect();
            let hkey = |i: usize| &sign * (&rewards[i] + &h[to(i)]);
            let hbest = candidates.iter().map(|&i| hkey(i)).max().unwrap();
            if hkey(cur) < hbest {
                s.set(v, candidates.iter().copied().find(|&i| hkey(i) == hbest).unwrap());
                changed = true;
            }
        }
        if !changed {
            let scale = Rational::from_integer(game.scale().clone());
            let values = g.iter().map(|x| x / &scale).collect();
            return Ok(BestResponse { values, situation: s, bias: gb.bias, iterations });
        }
    }
}

#[derive(Clone, Debug)]
pub struct SaddleCheck {
    pub ok: bool,
    /// `mu_s` in true units.
    pub values: Vec<Rational>,
    /// Best values White can reach against `s_B`.
    pub white_best: Vec<Rational>,
    /// Best values Black can reach against `s_W`.
    pub black_best: Vec<Rational>,
}

pub fn verify_saddle_point(game: &Game, s: &Situation) -> Result<SaddleCheck> {
    let values = crate::chain::value_vector(game, s)?;
    let white_best = best_response(game, s, Owner::White)?.values;
    let black_best = best_response(game, s, Owner::Black)?.values;
    let ok = white_best == values && black_best == values;
    Ok(SaddleCheck { ok, values, white_best, black_best })
}

/// A canonical potential for a game whose optimal values are all `theta` (true units), starting
/// from an optimal situation `s`. Alternates a Black best response with White bias improvement;
/// returns `None` if no canonical form is reached within the policy bound.
pub fn canonical_potential(game: &Game, s: &Situation, theta: &Rational) -> Result<Option<(Potential, CanonicalReport)>> {
    let scale = Rational::from_integer(game.scale().clone());
    let theta_s = theta * &scale;
    let mu = vec![theta_s.clone(); game.n()];
    let mut s = s.clone();
    let limit = policy_count_bound(game, Owner::White);
    for _ in 0..limit {
        let br = best_response(game, &s, Owner::Black)?;
        if br.values.iter().any(|v| v != theta) {
            return Ok(None);
        }
        s = br.situation;
        let x: Potential = br.bias.iter().map(|h| -h).collect();
        let report = check_canonical_form(game, &x, &mu);
        if report.ok {
            return Ok(Some((x, report)));
        }
        let mut changed = false;
        for v in game.positions_of(Owner::White) {
            let cur = s.arc(v).unwrap();
            let q = |i: usize| Rational::from_integer(game.arc(i).reward.clone()) + &br.bias[game.arc(i).to];
            let best = game.out(v).iter().map(|&i| q(i)).max().unwrap();
            if q(cur) < best {
                s.set(v, game.out(v).iter().copied().find(|&i| q(i) == best).unwrap());
                changed = true;
            }
        }
        if !changed {
            return Ok(None);
        }
    }
    Ok(None)
}
