//! Restrictions `G[Y]` and the parametrized games `G[Y](x)` and `Ĝ[Y](x)`.

use crate::game::{Arc, Game, GameError, Owner, Situation};
use crate::rational::Rational;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// `G[Y]`: positions of `Y` and the arcs between them. Random positions may have lost mass.
#[derive(Clone, Debug)]
pub struct PartialGame {
    pub owners: Vec<Owner>,
    pub names: Vec<String>,
    pub arcs: Vec<Arc>,
    /// Probability mass each random position lost to positions outside `Y`.
    pub lost: Vec<Rational>,
    /// New index -> original index.
    pub map: Vec<usize>,
    /// New arc index -> original arc index.
    pub arc_map: Vec<usize>,
    pub scale: BigInt,
}

impl PartialGame {
    pub fn n(&self) -> usize {
        self.owners.len()
    }

    /// The restriction as a game; fails if some random position lost mass.
    pub fn into_game(self) -> Result<Game, GameError> {
        if let Some(v) = (0..self.n()).find(|&v| !self.lost[v].is_zero()) {
            return Err(GameError::BadProbabilitySum(
                self.map[v],
                crate::rational::fmt_rational(&(Rational::one() - &self.lost[v])),
            ));
        }
        Game::with_names(self.owners, self.names, self.arcs, self.scale)
    }
}

/// A restricted game together with its index map back to the parent game.
#[derive(Clone, Debug)]
pub struct SubGame {
    pub game: Game,
    pub map: Vec<usize>,
    pub arc_map: Vec<usize>,
}

impl SubGame {
    /// Lifts a mask over the subgame to the parent game.
    pub fn lift_mask(&self, mask: &[bool], parent_n: usize) -> Vec<bool> {
        let mut out = vec![false; parent_n];
        for (i, &v) in self.map.iter().enumerate() {
            if i < mask.len() && mask[i] {
                out[v] = true;
            }
        }
        out
    }

    /// Copies the choices of a situation of the subgame into a situation of the parent game.
    pub fn lift_situation(&self, sub: &Situation, parent: &mut Situation) {
        for (i, &v) in self.map.iter().enumerate() {
            if let Some(a) = sub.arc(i) {
                parent.set(v, self.arc_map[a]);
            }
        }
    }
}

pub fn restrict(game: &Game, y: &[bool]) -> Result<PartialGame, GameError> {
    let mut index = vec![usize::MAX; game.n()];
    let mut map = Vec::new();
    for v in 0..game.n() {
        if y[v] {
            index[v] = map.len();
            map.push(v);
        }
    }
    let mut arcs = Vec::new();
    let mut arc_map = Vec::new();
    let mut lost = vec![Rational::zero(); map.len()];
    for (nv, &v) in map.iter().enumerate() {
        let mut kept = 0;
        for &i in game.out(v) {
            let a = game.arc(i);
            if y[a.to] {
                arcs.push(Arc { from: nv, to: index[a.to], reward: a.reward.clone(), prob: a.prob.clone() });
                arc_map.push(i);
                kept += 1;
            } else if let Some(p) = &a.prob {
                lost[nv] += p;
            }
        }
        if kept == 0 && game.owner(v).is_deterministic() {
            return Err(GameError::EmptyOutDegree(v));
        }
    }
    Ok(PartialGame {
        owners: map.iter().map(|&v| game.owner(v)).collect(),
        names: map.iter().map(|&v| game.name(v).to_string()).collect(),
        arcs,
        lost,
        map,
        arc_map,
        scale: game.scale().clone(),
    })
}

/// `G[Y]` as a game, for sets that no random position of `Y` can leave.
pub fn restrict_game(game: &Game, y: &[bool]) -> Result<SubGame, GameError> {
    let pg = restrict(game, y)?;
    let map = pg.map.clone();
    let arc_map = pg.arc_map.clone();
    Ok(SubGame { game: pg.into_game()?, map, arc_map })
}

/// `G[Y](x)` with integer rewards: every reward is multiplied by `den(x)`.
#[derive(Clone, Debug)]
pub struct ParamInstance {
    pub game: Game,
    /// New index -> original index, for every position except `w`.
    pub map: Vec<usize>,
    /// New arc index -> original arc index (`None` for arcs into or at `w`).
    pub arc_map: Vec<Option<usize>>,
    pub w: usize,
    /// Factor applied to the original rewards.
    pub factor: BigInt,
}

impl ParamInstance {
    pub fn lift_mask(&self, mask: &[bool], parent_n: usize) -> Vec<bool> {
        let mut out = vec![false; parent_n];
        for (i, &v) in self.map.iter().enumerate() {
            if mask[i] {
                out[v] = true;
            }
        }
        out
    }

    pub fn lift_situation(&self, sub: &Situation, parent: &mut Situation) {
        for (i, &v) in self.map.iter().enumerate() {
            if let Some(a) = sub.arc(i) {
                if let Some(orig) = self.arc_map[a] {
                    parent.set(v, orig);
                }
            }
        }
    }
}

pub fn parametrize_bwr(game: &Game, y: &[bool], x: &Rational) -> Result<ParamInstance, GameError> {
    let pg = restrict(game, y)?;
    let q = x.denom().clone();
    let w = pg.n();
    let mut owners = pg.owners.clone();
    owners.push(Owner::White);
    let mut names = pg.names.clone();
    names.push("w".to_string());
    let mut arcs = Vec::with_capacity(pg.arcs.len() + w + 1);
    let mut arc_map = Vec::with_capacity(pg.arcs.len() + w + 1);
    let mut next = 0;
    for v in 0..w {
        while next < pg.arcs.len() && pg.arcs[next].from == v {
            let a = &pg.arcs[next];
            arcs.push(Arc { reward: &a.reward * &q, ..a.clone() });
            arc_map.push(Some(pg.arc_map[next]));
            next += 1;
        }
        if pg.lost[v].is_positive() {
            arcs.push(Arc { from: v, to: w, reward: BigInt::zero(), prob: Some(pg.lost[v].clone()) });
            arc_map.push(None);
        }
    }
    arcs.push(Arc { from: w, to: w, reward: x.numer().clone(), prob: None });
    arc_map.push(None);
    let g = Game::with_names(owners, names, arcs, &pg.scale * &q)?;
    Ok(ParamInstance { game: g, map: pg.map, arc_map, w, factor: q })
}

/// `Ĝ[Y](x)`: random positions of `Y` lose their arcs and are merged into one White position `w`
/// whose self-loop carries the parameter.
#[derive(Clone, Debug)]
pub struct ParamBWGame {
    /// The BW-game with the parametric loop reward stored as 0.
    pub base: Game,
    pub w: usize,
    /// Index of the parametric self-loop arc in `base`.
    pub param_arc: usize,
    /// Original index -> index in `base` (random positions of `Y` map to `w`).
    pub index: Vec<Option<usize>>,
    /// Deterministic positions: index in `base` -> original index.
    pub map: Vec<usize>,
    /// Arc index in `base` -> original arc index (`None` for the parametric loop).
    pub arc_map: Vec<Option<usize>>,
    /// Parameter sweep bound `R`: all values of the sweep lie in `[-R, R]`.
    pub r_bound: BigInt,
}

impl ParamBWGame {
    pub fn n(&self) -> usize {
        self.base.n()
    }

    pub fn lift_situation(&self, sub: &Situation, parent: &mut Situation) {
        for (i, &v) in self.map.iter().enumerate() {
            if let Some(a) = sub.arc(i) {
                if let Some(orig) = self.arc_map[a] {
                    parent.set(v, orig);
                }
            }
        }
    }

    /// Instantiates the parameter, scaling all rewards by `den(x)` to keep them integral.
    pub fn instantiate(&self, x: &Rational) -> Game {
        let q = x.denom().clone();
        let arcs: Vec<Arc> = self
            .base
            .arcs()
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let reward = if i == self.param_arc { x.numer().clone() } else { &a.reward * &q };
                Arc { reward, ..a.clone() }
            })
            .collect();
        Game::with_names(
            self.base.owners().to_vec(),
            self.base.names().to_vec(),
            arcs,
            self.base.scale() * &q,
        )
        .expect("instantiating a valid parametrized game")
    }
}

pub fn parametrize_bw(game: &Game, y: &[bool]) -> Result<ParamBWGame, GameError> {
    let n = game.n();
    let mut index = vec![None; n];
    let mut map = Vec::new();
    for v in 0..n {
        if y[v] && game.owner(v).is_deterministic() {
            index[v] = Some(map.len());
            map.push(v);
        }
    }
    let w = map.len();
    for v in 0..n {
        if y[v] && game.owner(v) == Owner::Random {
            index[v] = Some(w);
        }
    }
    let mut arcs = Vec::new();
    let mut arc_map = Vec::new();
    for (nv, &v) in map.iter().enumerate() {
        let start = arcs.len();
        for &i in game.out(v) {
            let a = game.arc(i);
            if let Some(t) = index[a.to] {
                arcs.push(Arc { from: nv, to: t, reward: a.reward.clone(), prob: None });
                arc_map.push(Some(i));
            }
        }
        if arcs.len() == start {
            return Err(GameError::EmptyOutDegree(v));
        }
    }
    let param_arc = arcs.len();
    arcs.push(Arc { from: w, to: w, reward: BigInt::zero(), prob: None });
    arc_map.push(None);
    let mut owners: Vec<Owner> = map.iter().map(|&v| game.owner(v)).collect();
    owners.push(Owner::White);
    let mut names: Vec<String> = map.iter().map(|&v| game.name(v).to_string()).collect();
    names.push("w".to_string());
    let base = Game::with_names(owners, names, arcs, game.scale().clone())?;
    let r_bound = game.params().r_abs.max(BigInt::one());
    Ok(ParamBWGame { base, w, param_arc, index, map, arc_map, r_bound })
}

#[cfg(test)]
mod test {
    use super::*;
    use crate::rational::{int, rat};

    fn two_loops() -> Game {
        Game::new(vec![Owner::White, Owner::Black], vec![Arc::det(0, 0, 1), Arc::det(1, 1, 0)]).unwrap()
    }

    #[test]
    fn restrict_identity_and_loop() {
        let g = two_loops();
        let s = restrict_game(&g, &[true, true]).unwrap();
        assert_eq!(s.game, g);
        let s = restrict_game(&g, &[false, true]).unwrap();
        assert_eq!(s.game.n(), 1);
        assert_eq!(s.map, vec![1]);
        assert_eq!(s.game.arc(0).reward, BigInt::from(0));
    }

    #[test]
    fn restrict_empty_out_degree() {
        let g = Game::new(
            vec![Owner::White, Owner::Black],
            vec![Arc::det(0, 1, 0), Arc::det(1, 1, 0)],
        )
        .unwrap();
        assert_eq!(restrict(&g, &[true, false]).unwrap_err(), GameError::EmptyOutDegree(0));
    }

    #[test]
    fn lost_mass_goes_to_w() {
        let g = Game::new(
            vec![Owner::Random, Owner::White, Owner::White],
            vec![
                Arc::random(0, 1, 2, rat(1, 2)),
                Arc::random(0, 2, 0, rat(1, 2)),
                Arc::det(1, 0, 0),
                Arc::det(2, 2, 0),
            ],
        )
        .unwrap();
        let inst = parametrize_bwr(&g, &[true, true, false], &rat(1, 3)).unwrap();
        assert_eq!(inst.w, 2);
        let to_w: Vec<&Arc> = inst.game.arcs().iter().filter(|a| a.from == 0 && a.to == 2).collect();
        assert_eq!(to_w.len(), 1);
        assert_eq!(to_w[0].prob, Some(rat(1, 2)));
        assert_eq!(inst.factor, BigInt::from(3));
        let reward_01 = inst.game.arcs().iter().find(|a| a.from == 0 && a.to == 1).unwrap();
        assert_eq!(reward_01.reward, BigInt::from(6));
        let full = parametrize_bwr(&g, &[true, true, true], &int(4)).unwrap();
        assert_eq!(full.game.n(), 4);
        assert_eq!(full.game.out(3).len(), 1);
    }

    #[test]
    fn bw_contraction() {
        let g = Game::new(vec![Owner::Random], vec![Arc::random(0, 0, 3, int(1))]).unwrap();
        let pg = parametrize_bw(&g, &[true]).unwrap();
        assert_eq!(pg.n(), 1);
        assert_eq!(pg.index, vec![Some(0)]);
        let inst = pg.instantiate(&rat(-3, 2));
        assert_eq!(inst.arc(0).reward, BigInt::from(-3));
        assert_eq!(inst.scale(), &BigInt::from(2));
    }
}
