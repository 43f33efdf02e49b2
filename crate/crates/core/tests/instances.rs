use bwr::chain::{build_chain, chain_structure, limiting_distribution};
use bwr::decomposition::bwr_solve;
use bwr::format::{read_game, write_game};
use bwr::game::Situation;
use bwr::instances::{figure1_index, gen_figure1, gen_figure2, gen_random, gen_tripartite};
use bwr::oracle::{brute_force_solve, OracleBudget};
use bwr::potential::check_canonical_form;
use bwr::pump::{solve_ergodic, Ctx};
use bwr::rational::{int, rat, Rational};

#[test]
fn figure1_stationary_mass_at_the_centre() {
    for l in 1..=3usize {
        for d in 2..=3i64 {
            let g = gen_figure1(l, d as u64).unwrap();
            let chain = build_chain(&g, &Situation::empty(g.n()));
            let st = chain_structure(&chain);
            assert_eq!(st.absorbing.len(), 1);
            assert_eq!(st.classes.len(), 1);
            let u0 = figure1_index(l, 0, false);
            let p = limiting_distribution(&chain, u0).unwrap();
            let expect = rat(d - 1, (d + 1) * d.pow(l as u32) - 2);
            assert_eq!(p[u0], expect, "l={l} D={d}");
            assert_eq!(p.iter().sum::<Rational>(), int(1));
        }
    }
    let g = gen_figure1(3, 2).unwrap();
    let p = limiting_distribution(&build_chain(&g, &Situation::empty(7)), 0).unwrap();
    assert_eq!(p[figure1_index(3, 0, false)], rat(1, 22));
}

/// Potentials with `x(u_i) - x(u_(i-1)) = sign D^(l-i+1)` and the mirror image on the `v` side.
fn figure1_potential(l: usize, d: i64, sign: i64) -> Vec<Rational> {
    let mut x = vec![int(0); 2 * l + 1];
    let mut acc = 0i64;
    for i in 1..=l {
        acc += sign * d.pow((l - i + 1) as u32);
        x[figure1_index(l, i, false)] = int(acc);
        x[figure1_index(l, i, true)] = int(-acc);
    }
    x
}

#[test]
fn figure1_canonical_potentials() {
    for l in 1..=4usize {
        for d in 2..=3i64 {
            let g = gen_figure1(l, d as u64).unwrap();
            let zero = vec![int(0); g.n()];
            assert!(check_canonical_form(&g, &figure1_potential(l, d, -1), &zero).ok, "l={l} D={d}");
            assert!(!check_canonical_form(&g, &figure1_potential(l, d, 1), &zero).ok);
        }
    }
}

#[test]
fn figure1_values_are_zero() {
    for (l, d) in [(1, 1), (1, 2), (2, 2), (2, 3)] {
        let g = gen_figure1(l, d).unwrap();
        let o = brute_force_solve(&g, OracleBudget::default()).unwrap();
        assert!(o.values.iter().all(|v| *v == int(0)));
        assert_eq!(bwr_solve(&g, &mut Ctx::default()).unwrap().values, o.values);
    }
}

#[test]
fn figure2_values_and_iterations() {
    let mut last = 0;
    for r in [1u64, 8, 16] {
        let g = gen_figure2(r).unwrap();
        assert!(brute_force_solve(&g, OracleBudget::default()).unwrap().values.iter().all(|v| *v == int(0)));
        let mut ctx = Ctx::default();
        assert_eq!(solve_ergodic(&g, &mut ctx).unwrap().value, int(0));
        assert!(ctx.stats.violations.is_empty());
        assert!(ctx.stats.iterations >= last);
        if r >= 8 {
            assert!(ctx.stats.iterations >= r);
        }
        last = ctx.stats.iterations;
    }
}

#[test]
fn tripartite_games_are_ergodic() {
    let g = gen_tripartite([1, 1, 1], 2, 2, 0).unwrap();
    let o = brute_force_solve(&g, OracleBudget::default()).unwrap();
    let e = solve_ergodic(&g, &mut Ctx::default()).unwrap();
    assert!(o.values.iter().all(|v| *v == e.value));
    for seed in 0..10 {
        let g = gen_tripartite([2, 2, 2], 3, 2, seed).unwrap();
        let mut ctx = Ctx::default();
        let e = solve_ergodic(&g, &mut ctx).unwrap();
        assert_eq!(ctx.stats.partitions, 0);
        assert_eq!(brute_force_solve(&g, OracleBudget::default()).unwrap().values, vec![e.value; 6]);
    }
}

#[test]
fn generated_files_round_trip() {
    let games = [
        gen_figure1(2, 3).unwrap(),
        gen_figure2(5).unwrap(),
        gen_random(6, 2, 3, 2, 3, 4).unwrap(),
        gen_tripartite([1, 2, 3], 2, 1, 8).unwrap(),
    ];
    for g in games {
        let text = write_game(&g);
        let back = read_game(&text).unwrap();
        assert_eq!(back, g);
        assert_eq!(write_game(&back), text);
    }
}
