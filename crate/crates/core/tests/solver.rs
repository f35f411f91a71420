use mqsolve::monomial::Monomial;
use mqsolve::par::Workers;
use mqsolve::poly::{parse, random_system, serialize};
use mqsolve::solver::{boolean_solve, boolean_solve_sat, brute_force, Method, SolveConfig};
use mqsolve::{Assignment, QuadraticPoly, QuadraticSystem};
use proptest::prelude::*;

/// Shift constants so that `x` satisfies every equation.
fn plant(s: &QuadraticSystem, x: u64) -> QuadraticSystem {
    let a = Assignment::from_u64(s.n(), x);
    let polys = s
        .polys()
        .iter()
        .map(|p| {
            let mut monos = p.monomials();
            if p.evaluate(&a).unwrap() {
                monos.push(Monomial(0));
            }
            QuadraticPoly::from_monomials(s.n(), monos).unwrap()
        })
        .collect();
    QuadraticSystem::new(s.n(), polys).unwrap()
}

fn config(method: Method, delta: usize, seed: u64) -> SolveConfig {
    SolveConfig {
        method,
        delta,
        seed,
        ..SolveConfig::default()
    }
}

#[test]
fn planted_solution_is_recovered() {
    for seed in 0..20u64 {
        let n = 10 + (seed % 3) as usize;
        let x = seed.wrapping_mul(0x9E37_79B9) & ((1 << n) - 1);
        let s = plant(&random_system(n, n + 2, seed).unwrap(), x);
        for method in [Method::Dense, Method::LasVegas] {
            let (sol, _) = boolean_solve(&s, &config(method, 0, seed)).unwrap();
            assert!(sol.to_u64s().contains(&x), "seed {seed} {method:?}");
            for a in sol.as_slice() {
                assert!(s.is_solution(a).unwrap());
            }
        }
    }
}

#[test]
fn sat_agrees_with_full_solve() {
    for seed in 0..30u64 {
        let s = random_system(9, 9, seed).unwrap();
        let all = brute_force(&s);
        let one = boolean_solve_sat(&s, &config(Method::LasVegas, 0, seed)).unwrap();
        match one {
            Some(a) => assert!(all.contains(&a.as_u64().unwrap())),
            None => assert!(all.is_empty(), "seed {seed}"),
        }
    }
}

#[test]
fn workers_do_not_change_results() {
    let s = random_system(12, 12, 99).unwrap();
    let runs: Vec<_> = [Workers::Sequential, Workers::Threads(3), Workers::Auto]
        .into_iter()
        .map(|workers| {
            let cfg = SolveConfig {
                workers,
                ..config(Method::LasVegas, 1, 5)
            };
            let (sol, report) = boolean_solve(&s, &cfg).unwrap();
            (sol.to_u64s(), report.pruned(), report.applications())
        })
        .collect();
    assert!(runs.windows(2).all(|w| w[0] == w[1]));
}

#[test]
fn text_round_trip_preserves_solutions() {
    let s = random_system(8, 10, 3).unwrap();
    let back = parse(&serialize(&s)).unwrap();
    assert_eq!(back, s);
    assert_eq!(brute_force(&back), brute_force(&s));
}

#[test]
fn explicit_k_and_d0_override() {
    let s = plant(&random_system(12, 12, 4).unwrap(), 0b1010_0110_0101);
    for k in 3..=9 {
        for d0 in [2, 3] {
            let cfg = SolveConfig {
                k: Some(k),
                d0_override: Some(d0),
                ..config(Method::Dense, 0, 1)
            };
            let Ok((sol, report)) = boolean_solve(&s, &cfg) else {
                continue;
            };
            assert_eq!(report.plan.d0, d0);
            assert_eq!(sol.to_u64s(), brute_force(&s), "k={k} d0={d0}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn matches_brute_force(seed in any::<u64>(), n in 6usize..=11, extra in 0usize..=3, delta in 0usize..=2) {
        let s = random_system(n, n + extra, seed).unwrap();
        let expected = brute_force(&s);
        for method in [Method::Dense, Method::LasVegas] {
            let (sol, report) = boolean_solve(&s, &config(method, delta, seed)).unwrap();
            prop_assert_eq!(sol.to_u64s(), expected.clone());
            prop_assert_eq!(report.branches.len(), 1usize << report.plan.specialized());
        }
    }
}
