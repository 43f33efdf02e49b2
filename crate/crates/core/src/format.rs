//! The JSON game file format. See `docs/game-format.md` for the grammar.

use std::collections::HashMap;

use crate::game::{Arc, Game, GameError, Owner};
use crate::rational::{fmt_rational, parse_rational};
use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameFile {
    pub version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale: Option<IntField>,
    pub positions: Vec<PositionEntry>,
    pub arcs: Vec<ArcEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PositionEntry {
    pub id: String,
    pub owner: OwnerCode,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum OwnerCode {
    W,
    B,
    R,
}

impl From<OwnerCode> for Owner {
    fn from(c: OwnerCode) -> Owner {
        match c {
            OwnerCode::W => Owner::White,
            OwnerCode::B => Owner::Black,
            OwnerCode::R => Owner::Random,
        }
    }
}

impl From<Owner> for OwnerCode {
    fn from(o: Owner) -> OwnerCode {
        match o {
            Owner::White => OwnerCode::W,
            Owner::Black => OwnerCode::B,
            Owner::Random => OwnerCode::R,
        }
    }
}

/// An integer written either as a JSON number or as a decimal string (for values beyond 64 bits).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum IntField {
    Num(i64),
    Text(String),
}

impl IntField {
    fn value(&self) -> Result<BigInt, FormatError> {
        match self {
            IntField::Num(n) => Ok((*n).into()),
            IntField::Text(s) => s.trim().parse().map_err(|_| FormatError::Parse(format!("not an integer: {s:?}"))),
        }
    }

    fn canonical(n: &BigInt) -> IntField {
        match i64::try_from(n) {
            Ok(v) => IntField::Num(v),
            Err(_) => IntField::Text(n.to_string()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArcEntry {
    pub from: String,
    pub to: String,
    pub reward: IntField,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prob: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormatError {
    /// Malformed text: bad JSON, wrong field types, unparseable numbers.
    #[error("parse error: {0}")]
    Parse(String),
    /// Well-formed file describing an invalid game.
    #[error("validation error: {0}")]
    Validation(String),
}

impl From<GameError> for FormatError {
    fn from(e: GameError) -> Self {
        FormatError::Validation(e.to_string())
    }
}

impl GameFile {
    pub fn parse(text: &str) -> Result<GameFile, FormatError> {
        serde_json::from_str(text).map_err(|e| FormatError::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("game files always serialize");
        s.push('\n');
        s
    }

    pub fn to_game(&self) -> Result<Game, FormatError> {
        if self.version != FORMAT_VERSION {
            return Err(FormatError::Validation(format!("unsupported version {}", self.version)));
        }
        let scale = match &self.scale {
            Some(s) => s.value()?,
            None => BigInt::one(),
        };
        if !scale.is_positive() {
            return Err(FormatError::Validation(format!("scale must be positive, got {scale}")));
        }
        let mut index = HashMap::new();
        for (i, p) in self.positions.iter().enumerate() {
            if index.insert(p.id.as_str(), i).is_some() {
                return Err(FormatError::Validation(format!("duplicate position id {:?}", p.id)));
            }
        }
        let lookup = |id: &str| {
            index.get(id).copied().ok_or_else(|| FormatError::Validation(format!("unknown position id {id:?}")))
        };
        let mut arcs = Vec::with_capacity(self.arcs.len());
        for a in &self.arcs {
            let prob = match &a.prob {
                Some(p) => Some(parse_rational(p).map_err(|e| FormatError::Parse(e.to_string()))?),
                None => None,
            };
            arcs.push(Arc { from: lookup(&a.from)?, to: lookup(&a.to)?, reward: a.reward.value()?, prob });
        }
        let owners = self.positions.iter().map(|p| p.owner.into()).collect();
        let names = self.positions.iter().map(|p| p.id.clone()).collect();
        Ok(Game::with_names(owners, names, arcs, scale)?)
    }

    /// Canonical form: `scale` omitted when 1, rewards as numbers when they fit in 64 bits,
    /// probabilities as reduced `num/den`.
    pub fn from_game(game: &Game) -> GameFile {
        let positions = (0..game.n())
            .map(|v| PositionEntry { id: game.name(v).to_string(), owner: game.owner(v).into() })
            .collect();
        let arcs = game
            .arcs()
            .iter()
            .map(|a| ArcEntry {
                from: game.name(a.from).to_string(),
                to: game.name(a.to).to_string(),
                reward: IntField::canonical(&a.reward),
                prob: a.prob.as_ref().map(fmt_rational),
            })
            .collect();
        let scale = (!game.scale().is_one()).then(|| IntField::canonical(game.scale()));
        GameFile { version: FORMAT_VERSION, scale, positions, arcs }
    }
}

pub fn read_game(text: &str) -> Result<Game, FormatError> {
    GameFile::parse(text)?.to_game()
}

pub fn write_game(game: &Game) -> String {
    GameFile::from_game(game).to_json()
}

#[cfg(test)]
mod test {
    use super::*;
    use crate::instances::gen_figure2;

    const LOOP: &str = r#"{"version": 1, "positions": [{"id": "a", "owner": "W"}],
        "arcs": [{"from": "a", "to": "a", "reward": 7}]}"#;

    #[test]
    fn parse_and_round_trip() {
        let g = read_game(LOOP).unwrap();
        assert_eq!(g.n(), 1);
        assert_eq!(g.arc(0).reward, BigInt::from(7));
        let g = gen_figure2(3).unwrap();
        let text = write_game(&g);
        let back = read_game(&text).unwrap();
        assert_eq!(back, g);
        assert_eq!(write_game(&back), text);
    }

    #[test]
    fn big_rewards_as_strings() {
        let text = r#"{"version": 1, "scale": "100000000000000000000", "positions": [{"id": "a", "owner": "B"}],
            "arcs": [{"from": "a", "to": "a", "reward": "-123456789012345678901234567890"}]}"#;
        let g = read_game(text).unwrap();
        assert_eq!(read_game(&write_game(&g)).unwrap(), g);
    }

    #[test]
    fn errors_are_classified() {
        let parse = |t: &str| matches!(read_game(t), Err(FormatError::Parse(_)));
        let invalid = |t: &str| matches!(read_game(t), Err(FormatError::Validation(_)));
        assert!(parse("{"));
        assert!(parse(&LOOP.replace("\"W\"", "\"X\"")));
        assert!(parse(&LOOP.replace("\"version\": 1", "\"version\": 1, \"extra\": 0")));
        assert!(invalid(&LOOP.replace("\"version\": 1", "\"version\": 2")));
        assert!(invalid(&LOOP.replace("\"to\": \"a\"", "\"to\": \"b\"")));
        assert!(invalid(&LOOP.replace("\"reward\": 7", "\"reward\": 7, \"prob\": \"1/2\"")));
        assert!(invalid(r#"{"version": 1, "positions": [{"id": "a", "owner": "W"}], "arcs": []}"#));
    }
}
