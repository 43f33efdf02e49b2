//! Game representation and validation.

use crate::rational::{int, lcm_denominators, Rational};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Owner {
    White,
    Black,
    Random,
}

impl Owner {
    pub fn is_deterministic(self) -> bool {
        self != Owner::Random
    }

    pub fn opponent(self) -> Owner {
        match self {
            Owner::White => Owner::Black,
            Owner::Black => Owner::White,
            Owner::Random => Owner::Random,
        }
    }

    pub fn letter(self) -> &'static str {
        match self {
            Owner::White => "W",
            Owner::Black => "B",
            Owner::Random => "R",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arc {
    pub from: usize,
    pub to: usize,
    pub reward: BigInt,
    /// Transition probability; present exactly on arcs leaving random positions.
    pub prob: Option<Rational>,
}

impl Arc {
    pub fn det(from: usize, to: usize, reward: i64) -> Arc {
        Arc { from, to, reward: reward.into(), prob: None }
    }

    pub fn random(from: usize, to: usize, reward: i64, prob: Rational) -> Arc {
        Arc { from, to, reward: reward.into(), prob: Some(prob) }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GameError {
    #[error("position {0} has no outgoing arc")]
    TerminalPosition(usize),
    #[error("probabilities at random position {0} sum to {1}, not 1")]
    BadProbabilitySum(usize, String),
    #[error("non-positive or missing probability on an arc of random position {0}")]
    NonPositiveProbability(usize),
    #[error("probability given on an arc of deterministic position {0}")]
    UnexpectedProbability(usize),
    #[error("arc endpoint {0} out of range")]
    BadArcEndpoint(usize),
    #[error("position {0} loses all of its arcs in the restriction")]
    EmptyOutDegree(usize),
    #[error("the game has no positions")]
    Empty,
}

/// A BWR-game: positions owned by White, Black or Random, integer rewards, rational probabilities.
///
/// `scale` records a positive factor by which all rewards were multiplied; true rewards are
/// `reward / scale`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Game {
    owners: Vec<Owner>,
    names: Vec<String>,
    arcs: Vec<Arc>,
    out: Vec<Vec<usize>>,
    scale: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameParams {
    pub n: usize,
    pub k: usize,
    /// Least common denominator of all transition probabilities.
    pub d: BigInt,
    /// Largest absolute reward.
    pub r_abs: BigInt,
    /// Reward range `r+ - r-`.
    pub r_range: BigInt,
    /// Smallest positive transition probability (1 when there are no random positions).
    pub theta: Rational,
}

impl Game {
    pub fn new(owners: Vec<Owner>, arcs: Vec<Arc>) -> Result<Game, GameError> {
        let names = (0..owners.len()).map(|i| i.to_string()).collect();
        Game::with_names(owners, names, arcs, BigInt::one())
    }

    pub fn with_names(
        owners: Vec<Owner>,
        names: Vec<String>,
        arcs: Vec<Arc>,
        scale: BigInt,
    ) -> Result<Game, GameError> {
        let n = owners.len();
        if n == 0 {
            return Err(GameError::Empty);
        }
        let mut out = vec![Vec::new(); n];
        for (i, a) in arcs.iter().enumerate() {
            if a.from >= n {
                return Err(GameError::BadArcEndpoint(a.from));
            }
            if a.to >= n {
                return Err(GameError::BadArcEndpoint(a.to));
            }
            out[a.from].push(i);
        }
        let g = Game { owners, names, arcs, out, scale };
        check(&g)?;
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.owners.len()
    }

    pub fn owner(&self, v: usize) -> Owner {
        self.owners[v]
    }

    pub fn owners(&self) -> &[Owner] {
        &self.owners
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn arc(&self, i: usize) -> &Arc {
        &self.arcs[i]
    }

    /// Arc indices leaving `v`, in increasing index order.
    pub fn out(&self, v: usize) -> &[usize] {
        &self.out[v]
    }

    pub fn scale(&self) -> &BigInt {
        &self.scale
    }

    pub fn positions_of(&self, o: Owner) -> impl Iterator<Item = usize> + '_ {
        (0..self.n()).filter(move |&v| self.owners[v] == o)
    }

    pub fn num_random(&self) -> usize {
        self.owners.iter().filter(|&&o| o == Owner::Random).count()
    }

    /// Probability of an arc in the induced chain: its stored probability, or 1 for deterministic sources.
    pub fn prob(&self, i: usize) -> Rational {
        self.arcs[i].prob.clone().unwrap_or_else(Rational::one)
    }

    pub fn with_scale(mut self, scale: BigInt) -> Game {
        self.scale = scale;
        self
    }

    /// Converts a value measured in stored (scaled) reward units back to true units.
    pub fn unscale(&self, v: &Rational) -> Rational {
        v / Rational::from_integer(self.scale.clone())
    }

    pub fn params(&self) -> GameParams {
        let probs: Vec<Rational> = self.arcs.iter().filter_map(|a| a.prob.clone()).collect();
        let d = lcm_denominators(probs.iter());
        let theta = probs.iter().min().cloned().unwrap_or_else(Rational::one);
        let r_abs = self.arcs.iter().map(|a| a.reward.abs()).max().unwrap_or_default();
        let r_max = self.arcs.iter().map(|a| a.reward.clone()).max().unwrap_or_default();
        let r_min = self.arcs.iter().map(|a| a.reward.clone()).min().unwrap_or_default();
        GameParams {
            n: self.n(),
            k: self.num_random(),
            d,
            r_abs,
            r_range: r_max - r_min,
            theta,
        }
    }
}

fn check(g: &Game) -> Result<(), GameError> {
    for v in 0..g.n() {
        if g.out[v].is_empty() {
            return Err(GameError::TerminalPosition(v));
        }
        if g.owners[v] == Owner::Random {
            let mut sum = Rational::zero();
            for &i in &g.out[v] {
                match &g.arcs[i].prob {
                    Some(p) if p.is_positive() => sum += p,
                    _ => return Err(GameError::NonPositiveProbability(v)),
                }
            }
            if sum != int(1) {
                return Err(GameError::BadProbabilitySum(v, crate::rational::fmt_rational(&sum)));
            }
        } else if g.out[v].iter().any(|&i| g.arcs[i].prob.is_some()) {
            return Err(GameError::UnexpectedProbability(v));
        }
    }
    Ok(())
}

/// Checks the model assumptions and returns the derived parameters.
pub fn validate(game: &Game) -> Result<GameParams, GameError> {
    check(game)?;
    Ok(game.params())
}

/// A pair of pure stationary strategies, stored as the chosen arc index of every deterministic position.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Situation {
    choice: Vec<Option<usize>>,
}

impl Situation {
    pub fn empty(n: usize) -> Situation {
        Situation { choice: vec![None; n] }
    }

    /// Every deterministic position takes its first arc.
    pub fn first_arcs(game: &Game) -> Situation {
        let choice = (0..game.n())
            .map(|v| game.owner(v).is_deterministic().then(|| game.out(v)[0]))
            .collect();
        Situation { choice }
    }

    pub fn arc(&self, v: usize) -> Option<usize> {
        self.choice[v]
    }

    pub fn set(&mut self, v: usize, arc: usize) {
        self.choice[v] = Some(arc);
    }

    pub fn clear(&mut self, v: usize) {
        self.choice[v] = None;
    }

    pub fn successor(&self, game: &Game, v: usize) -> Option<usize> {
        self.choice[v].map(|a| game.arc(a).to)
    }

    pub fn len(&self) -> usize {
        self.choice.len()
    }

    pub fn is_empty(&self) -> bool {
        self.choice.is_empty()
    }

    /// True when every deterministic position has a choice along one of its own arcs.
    pub fn is_complete(&self, game: &Game) -> bool {
        self.choice.len() == game.n()
            && (0..game.n()).all(|v| match (game.owner(v), self.choice[v]) {
                (Owner::Random, None) => true,
                (Owner::Random, Some(_)) => false,
                (_, Some(a)) => game.arc(a).from == v,
                (_, None) => false,
            })
    }

    /// Copies the choices of `other` at positions where `mask` holds.
    pub fn overlay(&mut self, other: &Situation, mask: &[bool]) {
        for v in 0..self.choice.len() {
            if mask[v] {
                self.choice[v] = other.choice[v];
            }
        }
    }

    pub fn choices(&self) -> &[Option<usize>] {
        &self.choice
    }
}
