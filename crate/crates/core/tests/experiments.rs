use mqsolve::experiments::filtering::{certificate_degree, is_inconsistent};
use mqsolve::experiments::{
    filtering_experiment, k_for_d0_2, left_consistency_probability, strong_semiregular_check,
    to_f64, FilterParams,
};
use mqsolve::gf2::{BitMatrix, BitVec};
use mqsolve::hilbert::{d0, first_nonpositive_value, macaulay_sizes};
use mqsolve::par::Workers;
use mqsolve::poly::random_system;
use mqsolve::rng::derive_seed;
use mqsolve::solver::Method;
use mqsolve::SplitMix64;

#[test]
fn unpruned_counts_at_gamma_055() {
    let params = FilterParams {
        n: 12,
        m: 12,
        k: 6,
        delta: 0,
        trials: 200,
        seed: 11,
        method: Method::LasVegas,
    };
    let stats = filtering_experiment(params, Workers::Auto).unwrap();
    assert!(stats.avg_unpruned <= 3.0, "avg {}", stats.avg_unpruned);
    assert!(stats.max_unpruned <= 12, "max {}", stats.max_unpruned);
}

#[test]
fn average_unpruned_follows_rank_model() {
    let n = 12;
    let k = k_for_d0_2(n).unwrap();
    let sizes = macaulay_sizes(n - k, n, 2);
    let (r, c) = (
        usize::try_from(sizes.r_mac).unwrap(),
        usize::try_from(sizes.c_mac).unwrap(),
    );
    let q = to_f64(&left_consistency_probability(r, c).unwrap());
    let predicted = (1.0 - q) * (1u64 << k) as f64 + 1.0;
    let params = FilterParams {
        n,
        m: n,
        k,
        delta: 0,
        trials: 200,
        seed: 3,
        method: Method::Dense,
    };
    let stats = filtering_experiment(params, Workers::Auto).unwrap();
    assert!(
        (stats.avg_unpruned - predicted).abs() <= 0.25 * predicted + 2.0,
        "measured {} predicted {predicted}",
        stats.avg_unpruned
    );
}

#[test]
fn random_systems_are_strong_semiregular() {
    let holds = (0..100u64)
        .filter(|&i| {
            let s = random_system(12, 12, derive_seed(21, i)).unwrap();
            strong_semiregular_check(&s, 0.55).unwrap().holds
        })
        .count();
    assert!(holds >= 95, "{holds}/100");
}

fn inconsistent_systems(n: usize, count: usize) -> Vec<mqsolve::QuadraticSystem> {
    (0..)
        .map(|i| random_system(n, n, derive_seed(n as u64, i)).unwrap())
        .filter(is_inconsistent)
        .take(count)
        .collect()
}

#[test]
fn certificate_degree_within_hilbert_bound() {
    let mut total = 0;
    let mut within = 0;
    for n in 7..=10usize {
        let bound = d0(n, n).unwrap();
        for s in inconsistent_systems(n, 40) {
            total += 1;
            within += usize::from(certificate_degree(&s, bound).unwrap().is_some());
        }
    }
    assert!(within * 100 >= total * 99, "{within}/{total}");
}

/// At n = m = 6 the series coefficient at d0 = 3 is exactly zero, so the
/// degree-3 matrix is square and often singular; one more degree suffices.
#[test]
fn certificate_degree_at_zero_coefficient() {
    assert_eq!(d0(6, 6).unwrap(), 3);
    assert_eq!(first_nonpositive_value(6, 6).unwrap(), 0.into());
    let systems = inconsistent_systems(6, 40);
    let degrees: Vec<usize> = systems
        .iter()
        .map(|s| {
            certificate_degree(s, 4)
                .unwrap()
                .expect("certificate by degree 4")
        })
        .collect();
    let at_three = degrees.iter().filter(|&&d| d == 3).count();
    assert!(
        at_three > 0 && at_three < systems.len(),
        "{at_three}/{}",
        systems.len()
    );
}

#[test]
fn left_consistency_matches_simulation() {
    let samples = 20_000;
    let mut rng = SplitMix64::new(8);
    for (p, q) in [(8usize, 8usize), (10, 8), (6, 9), (12, 10)] {
        let r = BitVec::unit(q, q - 1);
        let mut hits = 0;
        for _ in 0..samples {
            let rows: Vec<Vec<bool>> = (0..p)
                .map(|_| (0..q).map(|_| rng.next_u64() & 1 == 1).collect())
                .collect();
            let m = BitMatrix::from_rows(&rows).unwrap();
            hits += usize::from(m.solve_left(&r).unwrap().is_some());
        }
        let prob = to_f64(&left_consistency_probability(p, q).unwrap());
        let expected = samples as f64 * prob;
        let sigma = (expected * (1.0 - prob)).sqrt();
        assert!(
            (hits as f64 - expected).abs() <= 3.0 * sigma,
            "p={p} q={q}: {hits} vs {expected:.0}"
        );
    }
}
