//! Generators for the lower-bound examples and for random test families.

use crate::game::{Arc, Game, Owner};
use crate::rational::{rat, Rational};
use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid generator parameters: {0}")]
pub struct GenError(pub String);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum GenSpec {
    Figure1 { l: usize, d: u64 },
    Figure2 { r: u64 },
    Random { n: usize, k: usize, d: u64, r: i64, max_out: usize, seed: u64 },
    Tripartite { sizes: [usize; 3], d: u64, r: i64, seed: u64 },
}

impl GenSpec {
    pub fn generate(&self) -> Result<Game, GenError> {
        match *self {
            GenSpec::Figure1 { l, d } => gen_figure1(l, d),
            GenSpec::Figure2 { r } => gen_figure2(r),
            GenSpec::Random { n, k, d, r, max_out, seed } => gen_random(n, k, d, r, max_out, seed),
            GenSpec::Tripartite { sizes, d, r, seed } => gen_tripartite(sizes, d, r, seed),
        }
    }
}

/// Index of `u_i` (`side = false`) or `v_i` (`side = true`) in the figure-1 chain; `u_0 = v_0`.
pub fn figure1_index(l: usize, i: usize, side: bool) -> usize {
    if side {
        l + i
    } else {
        l - i
    }
}

/// The all-random chain `u_l, ..., u_1, u_0, v_1, ..., v_l` with end loops of reward `1` and `-1`.
pub fn gen_figure1(l: usize, d: u64) -> Result<Game, GenError> {
    if l == 0 || d == 0 {
        return Err(GenError("figure1 needs l >= 1 and D >= 1".into()));
    }
    let n = 2 * l + 1;
    let out = rat(d as i64, d as i64 + 1);
    let back = rat(1, d as i64 + 1);
    let idx = |i: usize, side: bool| figure1_index(l, i, side);
    let mut arcs = Vec::new();
    for v in 0..n {
        let (i, side) = if v < l { (l - v, false) } else { (v - l, true) };
        if i == 0 {
            arcs.push(Arc::random(v, idx(1, false), 0, rat(1, 2)));
            arcs.push(Arc::random(v, idx(1, true), 0, rat(1, 2)));
            continue;
        }
        arcs.push(Arc::random(v, idx(i - 1, side), 0, back.clone()));
        if i == l {
            let reward = if side { -1 } else { 1 };
            arcs.push(Arc::random(v, v, reward, out.clone()));
        } else {
            arcs.push(Arc::random(v, idx(i + 1, side), 0, out.clone()));
        }
    }
    let names = (0..n)
        .map(|v| if v < l { format!("u{}", l - v) } else if v == l { "u0".to_string() } else { format!("v{}", v - l) })
        .collect();
    Game::with_names(vec![Owner::Random; n], names, arcs, BigInt::from(1)).map_err(|e| GenError(e.to_string()))
}

/// The four-position Black game with rewards multiplied by 4 (scale 4).
pub fn gen_figure2(r: u64) -> Result<Game, GenError> {
    if r == 0 {
        return Err(GenError("figure2 needs R >= 1".into()));
    }
    let big = 4 * r as i64;
    let arcs = vec![
        Arc::det(0, 0, 4),
        Arc::det(0, 1, big),
        Arc::det(0, 2, big),
        Arc::det(1, 3, big),
        Arc::det(1, 2, 3),
        Arc::det(2, 3, big),
        Arc::det(2, 1, 1),
        Arc::det(3, 3, 0),
    ];
    let names = ["u1", "u2", "u3", "u4"].iter().map(|s| s.to_string()).collect();
    Game::with_names(vec![Owner::Black; 4], names, arcs, BigInt::from(4)).map_err(|e| GenError(e.to_string()))
}

/// A uniformly random composition of `total` into `parts` positive integers.
fn composition(rng: &mut ChaCha8Rng, total: u64, parts: usize) -> Vec<u64> {
    let mut cuts: Vec<u64> = (1..total).collect();
    cuts.shuffle(rng);
    let mut cuts: Vec<u64> = cuts.into_iter().take(parts - 1).collect();
    cuts.sort_unstable();
    let mut out = Vec::with_capacity(parts);
    let mut prev = 0;
    for c in cuts.into_iter().chain(std::iter::once(total)) {
        out.push(c - prev);
        prev = c;
    }
    out
}

fn probabilities(rng: &mut ChaCha8Rng, d: u64, parts: usize) -> Vec<Rational> {
    let total = d * (parts as u64).div_ceil(d);
    composition(rng, total, parts).into_iter().map(|c| rat(c as i64, total as i64)).collect()
}

/// Random game with `k` random positions among `n`; random positions have at most `D` successors,
/// so their probabilities have denominators dividing `D`.
pub fn gen_random(n: usize, k: usize, d: u64, r: i64, max_out: usize, seed: u64) -> Result<Game, GenError> {
    if n == 0 || k > n || d == 0 || r < 0 || max_out == 0 {
        return Err(GenError("random needs n >= 1, k <= n, D >= 1, R >= 0, max_out >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut owners: Vec<Owner> = (0..n).map(|v| if v < k { Owner::Random } else if rng.random_bool(0.5) { Owner::White } else { Owner::Black }).collect();
    owners.shuffle(&mut rng);
    let mut arcs = Vec::new();
    for (v, &o) in owners.iter().enumerate() {
        let cap = if o == Owner::Random { max_out.min(d as usize) } else { max_out }.min(n);
        let deg = rng.random_range(1..=cap);
        let mut succ: Vec<usize> = (0..n).collect();
        succ.shuffle(&mut rng);
        succ.truncate(deg);
        succ.sort_unstable();
        let probs = (o == Owner::Random).then(|| probabilities(&mut rng, d, deg));
        for (j, &u) in succ.iter().enumerate() {
            let reward = rng.random_range(-r..=r);
            arcs.push(Arc { from: v, to: u, reward: reward.into(), prob: probs.as_ref().map(|p| p[j].clone()) });
        }
    }
    Game::new(owners, arcs).map_err(|e| GenError(e.to_string()))
}

/// Complete tripartite game on White, Black and Random parts of the given sizes. Random
/// probabilities have denominators dividing the least multiple of `D` that is at least the out-degree.
pub fn gen_tripartite(sizes: [usize; 3], d: u64, r: i64, seed: u64) -> Result<Game, GenError> {
    if sizes.contains(&0) || d == 0 || r < 0 {
        return Err(GenError("tripartite needs three nonempty parts, D >= 1, R >= 0".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let parts = [Owner::White, Owner::Black, Owner::Random];
    let owners: Vec<Owner> = parts.iter().zip(sizes).flat_map(|(&o, s)| std::iter::repeat_n(o, s)).collect();
    let n = owners.len();
    let mut arcs = Vec::new();
    for v in 0..n {
        let succ: Vec<usize> = (0..n).filter(|&u| owners[u] != owners[v]).collect();
        let probs = (owners[v] == Owner::Random).then(|| probabilities(&mut rng, d, succ.len()));
        for (j, &u) in succ.iter().enumerate() {
            let reward = rng.random_range(-r..=r);
            arcs.push(Arc { from: v, to: u, reward: reward.into(), prob: probs.as_ref().map(|p| p[j].clone()) });
        }
    }
    Game::new(owners, arcs).map_err(|e| GenError(e.to_string()))
}

#[cfg(test)]
mod test {
    use super::*;
    use crate::rational::int;

    #[test]
    fn figure1_parameters() {
        let g = gen_figure1(3, 2).unwrap();
        let p = g.params();
        assert_eq!((p.n, p.k), (7, 7));
        assert_eq!(p.d, BigInt::from(6));
        assert_eq!(p.theta, rat(1, 3));
        assert_eq!(p.r_abs, BigInt::from(1));
        let g = gen_figure1(1, 1).unwrap();
        assert!(g.arcs().iter().all(|a| a.prob == Some(rat(1, 2))));
    }

    #[test]
    fn figure2_shape() {
        let g = gen_figure2(8).unwrap();
        assert_eq!(g.n(), 4);
        assert_eq!(g.scale(), &BigInt::from(4));
        assert_eq!(g.arcs().iter().map(|a| a.reward.clone()).max().unwrap(), BigInt::from(32));
    }

    #[test]
    fn random_is_reproducible() {
        let a = gen_random(6, 2, 3, 2, 3, 11).unwrap();
        let b = gen_random(6, 2, 3, 2, 3, 11).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.num_random(), 2);
        assert_eq!(gen_random(5, 0, 1, 2, 3, 1).unwrap().num_random(), 0);
        for arc in a.arcs() {
            if let Some(p) = &arc.prob {
                assert!(BigInt::from(3) % p.denom() == BigInt::from(0));
            }
        }
    }

    #[test]
    fn tripartite_is_complete() {
        let g = gen_tripartite([2, 1, 2], 3, 2, 5).unwrap();
        assert_eq!(g.n(), 5);
        assert_eq!(g.out(0).len(), 3);
        assert_eq!(g.out(4).len(), 3);
        let sum: Rational = g.out(4).iter().map(|&i| g.prob(i)).sum();
        assert_eq!(sum, int(1));
    }
}
