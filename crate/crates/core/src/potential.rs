//! Potential transformations, local values and canonical-form checks.

use crate::game::{Game, Owner, Situation};
use crate::rational::{fmt_rational, Rational};
use num_traits::Zero;

pub type Potential = Vec<Rational>;

pub fn zero_potential(n: usize) -> Potential {
    vec![Rational::zero(); n]
}

/// `r_x(v,u) = r(v,u) + x(v) - x(u)` for every arc, indexed like `game.arcs()`.
pub fn transform_rewards(game: &Game, x: &[Rational]) -> Vec<Rational> {
    game.arcs()
        .iter()
        .map(|a| Rational::from_integer(a.reward.clone()) + &x[a.from] - &x[a.to])
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalValues {
    pub m: Vec<Rational>,
    pub m_plus: Rational,
    pub m_minus: Rational,
}

impl LocalValues {
    pub fn range(&self) -> Rational {
        &self.m_plus - &self.m_minus
    }
}

/// The local value operator applied to arc weights `w` (max for White, min for Black, expectation for Random).
pub fn local_values_of(game: &Game, w: &[Rational]) -> LocalValues {
    let m: Vec<Rational> = (0..game.n()).map(|v| local_value(game, w, v)).collect();
    let m_plus = m.iter().max().cloned().unwrap_or_else(Rational::zero);
    let m_minus = m.iter().min().cloned().unwrap_or_else(Rational::zero);
    LocalValues { m, m_plus, m_minus }
}

pub fn local_value(game: &Game, w: &[Rational], v: usize) -> Rational {
    let out = game.out(v);
    match game.owner(v) {
        Owner::White => out.iter().map(|&i| &w[i]).max().unwrap().clone(),
        Owner::Black => out.iter().map(|&i| &w[i]).min().unwrap().clone(),
        Owner::Random => out.iter().map(|&i| game.prob(i) * &w[i]).sum(),
    }
}

pub fn local_values(game: &Game, x: &[Rational]) -> LocalValues {
    local_values_of(game, &transform_rewards(game, x))
}

/// For each deterministic position, an arc attaining its local value; ties go to the lowest
/// successor index, then the lowest arc index.
pub fn extract_locally_optimal_situation(game: &Game, x: &[Rational]) -> Situation {
    let rx = transform_rewards(game, x);
    let mut s = Situation::empty(game.n());
    for v in 0..game.n() {
        if !game.owner(v).is_deterministic() {
            continue;
        }
        let m = local_value(game, &rx, v);
        let best = game
            .out(v)
            .iter()
            .copied()
            .filter(|&i| rx[i] == m)
            .min_by_key(|&i| (game.arc(i).to, i))
            .unwrap();
        s.set(v, best);
    }
    s
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CanonicalViolation {
    /// `mu(v)` differs from the local value of `mu` (first equation of C1).
    ValueEquation { position: usize, mu: String, local: String },
    /// `mu(v)` differs from the local value of the transformed rewards (second equation of C1).
    RewardEquation { position: usize, mu: String, local: String },
    /// A deterministic arc attaining `mu(v)` leads to a position of different value (C2).
    Locality { arc: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalReport {
    pub ok: bool,
    pub violations: Vec<CanonicalViolation>,
}

pub fn check_canonical_form(game: &Game, x: &[Rational], mu: &[Rational]) -> CanonicalReport {
    let rx = transform_rewards(game, x);
    let mu_arcs: Vec<Rational> = game.arcs().iter().map(|a| mu[a.to].clone()).collect();
    let mut violations = Vec::new();
    for v in 0..game.n() {
        let lm = local_value(game, &mu_arcs, v);
        if lm != mu[v] {
            violations.push(CanonicalViolation::ValueEquation {
                position: v,
                mu: fmt_rational(&mu[v]),
                local: fmt_rational(&lm),
            });
        }
        let lr = local_value(game, &rx, v);
        if lr != mu[v] {
            violations.push(CanonicalViolation::RewardEquation {
                position: v,
                mu: fmt_rational(&mu[v]),
                local: fmt_rational(&lr),
            });
        }
        if game.owner(v).is_deterministic() {
            for &i in game.out(v) {
                if rx[i] == mu[v] && mu[game.arc(i).to] != mu[v] {
                    violations.push(CanonicalViolation::Locality { arc: i });
                }
            }
        }
    }
    CanonicalReport { ok: violations.is_empty(), violations }
}
