//! Brute-force ground truth for small games: every situation is evaluated exactly.

use crate::chain::value_vector;
use crate::error::{Error, Result};
use crate::game::{Game, Owner, Situation};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleBudget {
    pub max_situations: u64,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget { max_situations: 20_000 }
    }
}

fn strategy_count(game: &Game, owner: Owner) -> u64 {
    game.positions_of(owner).fold(1u64, |c, v| c.saturating_mul(game.out(v).len() as u64))
}

/// All pure strategies of one player, as situations with only that player's choices, in
/// odometer order (last position varies fastest).
fn strategies(game: &Game, owner: Owner) -> Vec<Situation> {
    let positions: Vec<usize> = game.positions_of(owner).collect();
    let mut digits = vec![0usize; positions.len()];
    let mut out = Vec::new();
    loop {
        let mut s = Situation::empty(game.n());
        for (&v, &d) in positions.iter().zip(&digits) {
            s.set(v, game.out(v)[d]);
        }
        out.push(s);
        let mut i = positions.len();
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < game.out(positions[i]).len() {
                break;
            }
            digits[i] = 0;
        }
    }
}

fn join(w: &Situation, b: &Situation, game: &Game) -> Situation {
    let mut s = w.clone();
    let black: Vec<bool> = (0..game.n()).map(|v| game.owner(v) == Owner::Black).collect();
    s.overlay(b, &black);
    s
}

/// Every pure stationary situation, White strategies outermost.
pub fn enumerate_situations(game: &Game, budget: OracleBudget) -> Result<impl Iterator<Item = Situation> + '_> {
    let total = strategy_count(game, Owner::White).saturating_mul(strategy_count(game, Owner::Black));
    if total > budget.max_situations {
        return Err(Error::BudgetExceeded(total));
    }
    let whites = strategies(game, Owner::White);
    let blacks = strategies(game, Owner::Black);
    Ok(whites.into_iter().flat_map(move |w| blacks.clone().into_iter().map(move |b| join(&w, &b, game))))
}

#[derive(Clone, Debug)]
pub struct OracleSolution {
    /// Values in true units.
    pub values: Vec<Rational>,
    pub situation: Situation,
    pub situations: u64,
}

fn componentwise(a: &mut [Rational], b: &[Rational], max: bool) {
    for (x, y) in a.iter_mut().zip(b) {
        if (max && y > x) || (!max && y < x) {
            *x = y.clone();
        }
    }
}

/// Evaluates every situation and returns the first one (in enumeration order) that no unilateral
/// deviation improves for either player at any position.
pub fn brute_force_solve(game: &Game, budget: OracleBudget) -> Result<OracleSolution> {
    let total = strategy_count(game, Owner::White).saturating_mul(strategy_count(game, Owner::Black));
    if total > budget.max_situations {
        return Err(Error::BudgetExceeded(total));
    }
    let whites = strategies(game, Owner::White);
    let blacks = strategies(game, Owner::Black);
    let mut table: Vec<Vec<Vec<Rational>>> = Vec::with_capacity(whites.len());
    for w in &whites {
        let mut row = Vec::with_capacity(blacks.len());
        for b in &blacks {
            row.push(value_vector(game, &join(w, b, game))?);
        }
        table.push(row);
    }
    // Best White reply to each Black strategy, best Black reply to each White strategy.
    let mut col_max: Vec<Vec<Rational>> = table[0].clone();
    for row in &table[1..] {
        for (b, vals) in row.iter().enumerate() {
            componentwise(&mut col_max[b], vals, true);
        }
    }
    let row_min: Vec<Vec<Rational>> = table
        .iter()
        .map(|row| {
            let mut m = row[0].clone();
            for vals in &row[1..] {
                componentwise(&mut m, vals, false);
            }
            m
        })
        .collect();
    for (wi, row) in table.iter().enumerate() {
        for (bi, vals) in row.iter().enumerate() {
            if *vals == col_max[bi] && *vals == row_min[wi] {
                return Ok(OracleSolution {
                    values: vals.clone(),
                    situation: join(&whites[wi], &blacks[bi], game),
                    situations: total,
                });
            }
        }
    }
    Err(Error::NoSaddleFound)
}

#[cfg(test)]
mod test {
    use super::*;
    use crate::game::Arc;
    use crate::rational::int;

    #[test]
    fn counts() {
        let g = Game::new(
            vec![Owner::White, Owner::White],
            vec![Arc::det(0, 0, 0), Arc::det(0, 1, 0), Arc::det(1, 0, 0), Arc::det(1, 1, 0), Arc::det(1, 1, 2)],
        )
        .unwrap();
        assert_eq!(enumerate_situations(&g, OracleBudget::default()).unwrap().count(), 6);
        let r = Game::new(vec![Owner::Random], vec![Arc::random(0, 0, 1, int(1))]).unwrap();
        assert_eq!(enumerate_situations(&r, OracleBudget::default()).unwrap().count(), 1);
        assert!(matches!(
            enumerate_situations(&g, OracleBudget { max_situations: 5 }).err(),
            Some(Error::BudgetExceeded(6))
        ));
    }

    #[test]
    fn loop_value() {
        let g = Game::new(vec![Owner::Black], vec![Arc::det(0, 0, -3)]).unwrap();
        assert_eq!(brute_force_solve(&g, OracleBudget::default()).unwrap().values, vec![int(-3)]);
    }
}
