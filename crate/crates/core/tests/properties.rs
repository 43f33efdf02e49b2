mod common;

use bwr::bw::solve_bw;
use bwr::chain::{build_chain, value_vector};
use bwr::closure::{black_closure, black_semi_closure, white_closure, white_semi_closure};
use bwr::decomposition::{
    bwr_solve, combine_interval_strategies, find_bottom, find_ergodicity_interval, find_ergodicity_interval_bisection,
    find_top, ErgodicityInterval,
};
use bwr::game::{Arc, Game, Owner, Situation};
use bwr::instances::gen_random;
use bwr::linalg::{rank, solve};
use bwr::mdp::{gain_bias, verify_saddle_point};
use bwr::oracle::{brute_force_solve, OracleBudget};
use bwr::potential::{local_values, transform_rewards};
use bwr::pump::Ctx;
use bwr::rational::{int, max_abs, Rational};
use bwr::restrict::{parametrize_bw, parametrize_bwr};
use num_traits::Zero;
use proptest::prelude::*;

fn game(max_n: usize, max_k: usize) -> impl Strategy<Value = Game> {
    (1..=max_n, 0..=max_k, 1u64..=3, 0i64..=3, 1usize..=3, any::<u64>())
        .prop_map(|(n, k, d, r, out, seed)| gen_random(n, k.min(n), d, r, out, seed).unwrap())
}

fn situation(g: &Game, picks: &[usize]) -> Situation {
    let mut s = Situation::empty(g.n());
    for v in 0..g.n() {
        if g.owner(v).is_deterministic() {
            let out = g.out(v);
            s.set(v, out[picks[v % picks.len()] % out.len()]);
        }
    }
    s
}

fn oracle(g: &Game) -> Vec<Rational> {
    brute_force_solve(g, OracleBudget { max_situations: 1 << 20 }).unwrap().values
}

fn subset(a: &[bool], b: &[bool]) -> bool {
    a.iter().zip(b).all(|(&x, &y)| !x || y)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn linear_solve_is_exact(n in 1usize..5, entries in prop::collection::vec(-4i64..=4, 30)) {
        let a: Vec<Vec<Rational>> = (0..n).map(|i| (0..n).map(|j| int(entries[i * n + j])).collect()).collect();
        let b: Vec<Rational> = (0..n).map(|i| int(entries[25 + i])).collect();
        match solve(&a, &b) {
            Ok(x) => {
                for i in 0..n {
                    let lhs: Rational = (0..n).map(|j| &a[i][j] * &x[j]).sum();
                    prop_assert_eq!(&lhs, &b[i]);
                }
            }
            Err(_) => prop_assert!(rank(&a, n) < n),
        }
    }

    #[test]
    fn value_vector_is_the_gain(g in game(6, 3), picks in prop::collection::vec(0usize..3, 6)) {
        let s = situation(&g, &picks);
        let gb = gain_bias(&build_chain(&g, &s)).unwrap();
        prop_assert_eq!(value_vector(&g, &s).unwrap(), gb.gain);
    }

    #[test]
    fn potentials_do_not_change_values(g in game(4, 2), xs in prop::collection::vec(-3i64..=3, 4)) {
        let x: Vec<Rational> = (0..g.n()).map(|v| int(xs[v])).collect();
        let arcs: Vec<Arc> = g.arcs().iter().zip(transform_rewards(&g, &x))
            .map(|(a, r)| Arc { reward: r.to_integer(), ..a.clone() })
            .collect();
        let h = Game::with_names(g.owners().to_vec(), g.names().to_vec(), arcs, g.scale().clone()).unwrap();
        prop_assert_eq!(oracle(&g), oracle(&h));
    }

    #[test]
    fn local_values_are_2_lipschitz(g in game(6, 3), a in prop::collection::vec(-6i64..=6, 6), b in prop::collection::vec(-6i64..=6, 6)) {
        let x: Vec<Rational> = (0..g.n()).map(|v| int(a[v])).collect();
        let y: Vec<Rational> = (0..g.n()).map(|v| int(b[v])).collect();
        let diff: Vec<Rational> = x.iter().zip(&y).map(|(p, q)| p - q).collect();
        let (mx, my) = (local_values(&g, &x).m, local_values(&g, &y).m);
        let moved: Vec<Rational> = mx.iter().zip(&my).map(|(p, q)| p - q).collect();
        prop_assert!(max_abs(&moved) <= max_abs(&diff) * int(2));
    }

    #[test]
    fn closures_are_monotone_and_extensive(g in game(7, 3), s in any::<u64>(), t in any::<u64>()) {
        let n = g.n();
        let small: Vec<bool> = (0..n).map(|i| s >> i & 1 == 1 && t >> i & 1 == 1).collect();
        let big: Vec<bool> = (0..n).map(|i| s >> i & 1 == 1).collect();
        for f in [black_closure, white_closure, black_semi_closure, white_semi_closure] {
            let (cs, cb) = (f(&g, &small), f(&g, &big));
            prop_assert!(subset(&small, &cs.set));
            prop_assert!(subset(&cs.set, &cb.set));
            prop_assert_eq!(&f(&g, &cb.set).set, &cb.set);
            for v in 0..n {
                if let Some(a) = cb.strategy.arc(v) {
                    prop_assert!(cb.set[g.arc(a).to]);
                }
            }
        }
    }

    #[test]
    fn oracle_situation_is_a_saddle_point(g in game(5, 2)) {
        let sol = brute_force_solve(&g, OracleBudget { max_situations: 1 << 20 }).unwrap();
        let check = verify_saddle_point(&g, &sol.situation).unwrap();
        prop_assert!(check.ok);
        prop_assert_eq!(check.values, sol.values);
    }

    #[test]
    fn bw_games_match_the_oracle(g in game(6, 0)) {
        let s = solve_bw(&g, &mut Ctx::default()).unwrap();
        prop_assert!(s.certified());
        prop_assert_eq!(s.values, oracle(&g));
    }

    #[test]
    fn extreme_classes_are_closed(g in game(5, 2)) {
        let values = oracle(&g);
        let mut ctx = Ctx::default();
        for (c, top) in [(find_top(&g, &mut ctx).unwrap(), true), (find_bottom(&g, &mut ctx).unwrap(), false)] {
            let extreme = if top { values.iter().max() } else { values.iter().min() }.unwrap();
            prop_assert_eq!(&c.value, extreme);
            // The player who would like to leave cannot, and neither can chance.
            let trapped = if top { Owner::Black } else { Owner::White };
            for v in (0..g.n()).filter(|&v| c.set[v]) {
                prop_assert_eq!(&values[v], extreme);
                if g.owner(v) == trapped || g.owner(v) == Owner::Random {
                    prop_assert!(g.out(v).iter().all(|&i| c.set[g.arc(i).to]));
                } else {
                    prop_assert!(c.set[g.arc(c.situation.arc(v).unwrap()).to]);
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn solver_matches_the_oracle(g in game(5, 2)) {
        let s = bwr_solve(&g, &mut Ctx::default()).unwrap();
        prop_assert!(s.certified());
        prop_assert_eq!(s.values, oracle(&g));
    }

    #[test]
    fn interval_search_agrees_with_bisection(g in game(3, 2), bits in any::<u64>()) {
        let y = common::mask(g.n(), bits);
        prop_assume!(parametrize_bwr(&g, &y, &Rational::zero()).is_ok());
        let jump = find_ergodicity_interval(&g, &y, &mut Ctx::default()).unwrap();
        let bisect = find_ergodicity_interval_bisection(&g, &y, &mut Ctx::default()).unwrap();
        prop_assert_eq!(jump, bisect);
    }

    #[test]
    fn combined_strategies_are_optimal_on_the_interval(g in game(5, 2), bits in any::<u64>()) {
        let y = common::mask(g.n(), bits);
        prop_assume!(parametrize_bwr(&g, &y, &Rational::zero()).is_ok());
        let mut ctx = Ctx::default();
        let ErgodicityInterval::Interval { tau1, tau2 } = find_ergodicity_interval(&g, &y, &mut ctx).unwrap() else {
            return Ok(());
        };
        let mut s = Situation::empty(g.n());
        combine_interval_strategies(&g, &y, &tau1, &tau2, &mut s, &mut ctx).unwrap();
        for x in [tau1.clone(), (&tau1 + &tau2) / int(2), tau2.clone()] {
            let inst = parametrize_bwr(&g, &y, &x).unwrap();
            let local = common::situation_in_instance(&inst, &s).unwrap();
            let check = verify_saddle_point(&inst.game, &local).unwrap();
            prop_assert!(check.ok, "not optimal at {}", x);
            let expect = g.unscale(&x);
            prop_assert!(check.values.iter().all(|v| *v == expect));
        }
    }

    #[test]
    fn intervals_follow_the_three_regimes(g in game(6, 3), bits in any::<u64>()) {
        let y = common::mask(g.n(), bits);
        let Ok(pg) = parametrize_bw(&g, &y) else { return Ok(()) };
        let bad = common::interval_failures(&pg, &mut Ctx::default()).unwrap();
        prop_assert!(bad.is_empty(), "{:?}", bad);
    }
}
