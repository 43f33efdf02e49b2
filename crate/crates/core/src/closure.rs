//! Black/White closures and semi-closures with their forcing strategies.

use crate::game::{Game, Owner, Situation};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Closure {
    pub set: Vec<bool>,
    /// For each position of the forcing player added by rule (1), the arc used to enter the set.
    pub strategy: Situation,
}

/// Fixed point of: add a `forcer` position (or, for semi-closures, also a random position) with
/// some arc into the set; add any other position whose arcs all lead into the set.
fn closure(game: &Game, s: &[bool], forcer: Owner, semi: bool) -> Closure {
    let n = game.n();
    let mut set = s.to_vec();
    let mut strategy = Situation::empty(n);
    let mut changed = true;
    while changed {
        changed = false;
        for v in 0..n {
            if set[v] {
                continue;
            }
            let o = game.owner(v);
            let some_rule = o == forcer || (semi && o == Owner::Random);
            let entering = game.out(v).iter().copied().find(|&i| set[game.arc(i).to]);
            let add = if some_rule {
                entering.is_some()
            } else {
                game.out(v).iter().all(|&i| set[game.arc(i).to])
            };
            if add {
                set[v] = true;
                if o == forcer {
                    strategy.set(v, entering.unwrap());
                }
                changed = true;
            }
        }
    }
    Closure { set, strategy }
}

/// Positions from which Black forces a move into `s` with probability one.
pub fn black_closure(game: &Game, s: &[bool]) -> Closure {
    closure(game, s, Owner::Black, false)
}

/// Positions from which White forces a move into `s` with probability one.
pub fn white_closure(game: &Game, s: &[bool]) -> Closure {
    closure(game, s, Owner::White, false)
}

/// Positions from which Black reaches `s` with positive probability.
pub fn black_semi_closure(game: &Game, s: &[bool]) -> Closure {
    closure(game, s, Owner::Black, true)
}

/// Positions from which White reaches `s` with positive probability.
pub fn white_semi_closure(game: &Game, s: &[bool]) -> Closure {
    closure(game, s, Owner::White, true)
}

#[cfg(test)]
mod test {
    use super::*;
    use crate::game::Arc;
    use crate::rational::rat;

    fn sample() -> Game {
        // 0:B -> {1, 2}; 1 loop; 2:R -> {1, 3}; 3:W -> {3, 1}
        Game::new(
            vec![Owner::Black, Owner::White, Owner::Random, Owner::White],
            vec![
                Arc::det(0, 1, 0),
                Arc::det(0, 2, 0),
                Arc::det(1, 1, 0),
                Arc::random(2, 1, 0, rat(1, 2)),
                Arc::random(2, 3, 0, rat(1, 2)),
                Arc::det(3, 3, 0),
                Arc::det(3, 1, 0),
            ],
        )
        .unwrap()
    }

    #[test]
    fn trivial_fixed_points() {
        let g = sample();
        assert_eq!(black_closure(&g, &[true; 4]).set, vec![true; 4]);
        assert_eq!(black_closure(&g, &[false; 4]).set, vec![false; 4]);
    }

    #[test]
    fn black_rules() {
        let g = sample();
        let s = [false, true, false, false];
        let c = black_closure(&g, &s);
        assert_eq!(c.set, vec![true, true, false, false]);
        assert_eq!(c.strategy.successor(&g, 0), Some(1));
        let c = black_semi_closure(&g, &s);
        assert_eq!(c.set, vec![true, true, true, false]);
        let c = white_closure(&g, &[false, false, false, true]);
        assert_eq!(c.set, vec![false, false, false, true]);
        let c = white_closure(&g, &s);
        assert_eq!(c.set, vec![true; 4]);
        assert_eq!(c.strategy.successor(&g, 3), Some(1));
        let c = white_semi_closure(&g, &s);
        assert_eq!(c.set, vec![true, true, true, true]);
    }
}
