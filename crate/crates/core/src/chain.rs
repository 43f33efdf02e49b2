//! Markov chains induced by situations: classes, limiting distributions and values.

use crate::game::{Game, Situation};
use crate::linalg::{solve, solve_many, LinAlgError};
use crate::rational::Rational;
use num_traits::{One, Zero};
use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

/// Sparse row-stochastic chain with expected one-step rewards in stored reward units.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkovChain {
    /// `transition[v]` lists `(u, p(v,u))` with parallel arcs merged, sorted by `u`.
    pub transition: Vec<Vec<(usize, Rational)>>,
    pub reward: Vec<Rational>,
    pub scale: Rational,
}

impl MarkovChain {
    pub fn n(&self) -> usize {
        self.transition.len()
    }

    pub fn prob(&self, v: usize, u: usize) -> Rational {
        self.transition[v]
            .iter()
            .find(|(t, _)| *t == u)
            .map_or_else(Rational::zero, |(_, p)| p.clone())
    }

    pub fn dense(&self) -> Vec<Vec<Rational>> {
        let n = self.n();
        let mut m = vec![vec![Rational::zero(); n]; n];
        for (v, row) in self.transition.iter().enumerate() {
            for (u, p) in row {
                m[v][*u] = p.clone();
            }
        }
        m
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainStructure {
    /// Strongly connected components, in topological order of the condensation (sources first).
    pub classes: Vec<Vec<usize>>,
    pub class_of: Vec<usize>,
    /// Indices into `classes` of the absorbing classes.
    pub absorbing: Vec<usize>,
    pub transient: Vec<usize>,
}

impl ChainStructure {
    pub fn is_absorbing_position(&self, v: usize) -> bool {
        self.absorbing.contains(&self.class_of[v])
    }
}

pub fn build_chain(game: &Game, s: &Situation) -> MarkovChain {
    let n = game.n();
    let mut transition = Vec::with_capacity(n);
    let mut reward = Vec::with_capacity(n);
    for v in 0..n {
        let arcs: Vec<usize> = if game.owner(v).is_deterministic() {
            vec![s.arc(v).expect("situation must cover every deterministic position")]
        } else {
            game.out(v).to_vec()
        };
        let mut row: Vec<(usize, Rational)> = Vec::new();
        let mut r = Rational::zero();
        for i in arcs {
            let a = game.arc(i);
            let p = game.prob(i);
            r += &p * Rational::from_integer(a.reward.clone());
            match row.iter_mut().find(|(u, _)| *u == a.to) {
                Some((_, q)) => *q += p,
                None => row.push((a.to, p)),
            }
        }
        row.sort_by_key(|(u, _)| *u);
        transition.push(row);
        reward.push(r);
    }
    MarkovChain { transition, reward, scale: Rational::from_integer(game.scale().clone()) }
}

pub fn chain_structure(chain: &MarkovChain) -> ChainStructure {
    let n = chain.n();
    let mut g = DiGraph::<(), ()>::with_capacity(n, n);
    let nodes: Vec<_> = (0..n).map(|_| g.add_node(())).collect();
    for (v, row) in chain.transition.iter().enumerate() {
        for (u, _) in row {
            g.add_edge(nodes[v], nodes[*u], ());
        }
    }
    // tarjan_scc yields components in reverse topological order.
    let mut classes: Vec<Vec<usize>> = tarjan_scc(&g)
        .into_iter()
        .map(|c| {
            let mut c: Vec<usize> = c.into_iter().map(|x| x.index()).collect();
            c.sort_unstable();
            c
        })
        .collect();
    classes.reverse();
    let mut class_of = vec![0; n];
    for (i, c) in classes.iter().enumerate() {
        for &v in c {
            class_of[v] = i;
        }
    }
    let mut absorbing = Vec::new();
    let mut transient = Vec::new();
    for (i, c) in classes.iter().enumerate() {
        let closed = c.iter().all(|&v| chain.transition[v].iter().all(|(u, _)| class_of[*u] == i));
        if closed {
            absorbing.push(i);
        } else {
            transient.extend(c.iter().copied());
        }
    }
    transient.sort_unstable();
    ChainStructure { classes, class_of, absorbing, transient }
}

/// Stationary distribution of a closed class, indexed like `class`.
pub fn stationary(chain: &MarkovChain, class: &[usize]) -> Result<Vec<Rational>, LinAlgError> {
    let c = class.len();
    let pos = |v: usize| class.iter().position(|&u| u == v);
    // Columns are pi_i; rows j < c-1 state sum_i pi_i (delta_ij - p_ij) = 0, last row sum pi = 1.
    let mut a = vec![vec![Rational::zero(); c]; c];
    for (i, &v) in class.iter().enumerate() {
        for (u, p) in &chain.transition[v] {
            if let Some(j) = pos(*u) {
                if j + 1 < c {
                    a[j][i] -= p;
                }
            }
        }
    }
    for j in 0..c - 1 {
        a[j][j] += Rational::one();
    }
    a[c - 1] = vec![Rational::one(); c];
    let mut b = vec![Rational::zero(); c];
    b[c - 1] = Rational::one();
    solve(&a, &b)
}

/// Absorption probabilities into each absorbing class, as `result[class][t]` over `st.transient`.
fn absorption(chain: &MarkovChain, st: &ChainStructure) -> Result<Vec<Vec<Rational>>, LinAlgError> {
    let t = &st.transient;
    let idx = |v: usize| t.binary_search(&v).ok();
    let mut a = vec![vec![Rational::zero(); t.len()]; t.len()];
    for (i, &v) in t.iter().enumerate() {
        a[i][i] += Rational::one();
        for (u, p) in &chain.transition[v] {
            if let Some(j) = idx(*u) {
                a[i][j] -= p;
            }
        }
    }
    let bs: Vec<Vec<Rational>> = st
        .absorbing
        .iter()
        .map(|&c| {
            t.iter()
                .map(|&v| {
                    chain.transition[v]
                        .iter()
                        .filter(|(u, _)| st.class_of[*u] == c)
                        .map(|(_, p)| p.clone())
                        .sum()
                })
                .collect()
        })
        .collect();
    solve_many(&a, &bs)
}

/// Limiting distribution `p*(start, .)`.
pub fn limiting_distribution(chain: &MarkovChain, start: usize) -> Result<Vec<Rational>, LinAlgError> {
    let st = chain_structure(chain);
    let mut out = vec![Rational::zero(); chain.n()];
    let c0 = st.class_of[start];
    if st.absorbing.contains(&c0) {
        let class = &st.classes[c0];
        for (v, p) in class.iter().zip(stationary(chain, class)?) {
            out[*v] = p;
        }
        return Ok(out);
    }
    let abs = absorption(chain, &st)?;
    let ti = st.transient.binary_search(&start).unwrap();
    for (k, &c) in st.absorbing.iter().enumerate() {
        let w = &abs[k][ti];
        if w.is_zero() {
            continue;
        }
        let class = &st.classes[c];
        for (v, p) in class.iter().zip(stationary(chain, class)?) {
            out[*v] = w * p;
        }
    }
    Ok(out)
}

/// Per-class gains and the full value vector, in true reward units.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainValues {
    pub structure: ChainStructure,
    pub mu: Vec<Rational>,
}

pub fn chain_values(chain: &MarkovChain) -> Result<ChainValues, LinAlgError> {
    let n = chain.n();
    let st = chain_structure(chain);
    let mut mu = vec![Rational::zero(); n];
    for &c in &st.absorbing {
        let class = &st.classes[c];
        let pi = stationary(chain, class)?;
        let g: Rational = class.iter().zip(&pi).map(|(v, p)| p * &chain.reward[*v]).sum();
        let g = g / &chain.scale;
        for &v in class {
            mu[v] = g.clone();
        }
    }
    let t = &st.transient;
    if !t.is_empty() {
        let idx = |v: usize| t.binary_search(&v).ok();
        let mut a = vec![vec![Rational::zero(); t.len()]; t.len()];
        let mut b = vec![Rational::zero(); t.len()];
        for (i, &v) in t.iter().enumerate() {
            a[i][i] += Rational::one();
            for (u, p) in &chain.transition[v] {
                match idx(*u) {
                    Some(j) => a[i][j] -= p,
                    None => b[i] += p * &mu[*u],
                }
            }
        }
        for (v, val) in t.iter().zip(solve(&a, &b)?) {
            mu[*v] = val;
        }
    }
    Ok(ChainValues { structure: st, mu })
}

/// `mu_s`, in true reward units.
pub fn value_vector(game: &Game, s: &Situation) -> Result<Vec<Rational>, LinAlgError> {
    Ok(chain_values(&build_chain(game, s))?.mu)
}

#[cfg(test)]
mod test {
    use super::*;
    use crate::game::{Arc, Owner};
    use crate::rational::{int, rat};

    #[test]
    fn two_loops_and_path() {
        let g = Game::new(
            vec![Owner::White, Owner::Black],
            vec![Arc::det(0, 1, 5), Arc::det(1, 1, 2)],
        )
        .unwrap();
        let s = Situation::first_arcs(&g);
        let ch = build_chain(&g, &s);
        let st = chain_structure(&ch);
        assert_eq!(st.transient, vec![0]);
        assert_eq!(st.absorbing.len(), 1);
        assert_eq!(value_vector(&g, &s).unwrap(), vec![int(2), int(2)]);
    }

    #[test]
    fn split_and_cycle_mean() {
        let g = Game::new(
            vec![Owner::Random, Owner::White, Owner::White],
            vec![
                Arc::random(0, 1, 0, rat(1, 2)),
                Arc::random(0, 2, 0, rat(1, 2)),
                Arc::det(1, 1, 4),
                Arc::det(2, 2, 1),
            ],
        )
        .unwrap();
        let ch = build_chain(&g, &Situation::first_arcs(&g));
        assert_eq!(limiting_distribution(&ch, 0).unwrap(), vec![int(0), rat(1, 2), rat(1, 2)]);
        assert_eq!(value_vector(&g, &Situation::first_arcs(&g)).unwrap()[0], rat(5, 2));

        let c = Game::new(vec![Owner::White, Owner::Black], vec![Arc::det(0, 1, 1), Arc::det(1, 0, 3)]).unwrap();
        assert_eq!(value_vector(&c, &Situation::first_arcs(&c)).unwrap(), vec![int(2), int(2)]);
    }

    #[test]
    fn scale_is_divided_out() {
        let g = Game::new(vec![Owner::White], vec![Arc::det(0, 0, 6)]).unwrap().with_scale(4.into());
        assert_eq!(value_vector(&g, &Situation::first_arcs(&g)).unwrap(), vec![rat(3, 2)]);
    }
}
