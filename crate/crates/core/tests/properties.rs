use dynsub::channels::{
    entropy_exchange, lindblad_bounds, purified_exchange_entropy, sigma_hat, Channel,
};
use dynsub::classical::{
    entropy_uniform, product_bounds, slomczynski_bounds, symmetric_bound, ProbVector,
};
use dynsub::matcore::{
    eigvals_hermitian, kron, max_abs_diff, partial_trace, reshuffle, trace, von_neumann_entropy,
    Side, HERMIT_TOL,
};
use dynsub::quasifree::{
    qf_apply, qf_bistochastic_entropy, qf_compose, qf_jam_symbol, qf_map_entropy, qf_odot_symbol,
};
use dynsub::randgen::{
    ginibre, random_bistochastic_channel, random_bistochastic_matrix, random_channel,
    random_density, random_qf_map, random_qf_symbol, random_stochastic, BistochasticMethod,
    RngStream,
};
use dynsub::statecomp::{
    membership, odot_raw, odot_state, BipartiteOperator, StateClass, CLASS_TOL,
};
use proptest::prelude::*;
use rand_chacha::ChaCha20Rng;

fn rng(seed: u64, k: u64) -> ChaCha20Rng {
    RngStream::new(seed, k).rng()
}

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(|a, b| a.total_cmp(b));
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn reshuffle_is_an_involution(seed in any::<u64>(), n in 1usize..5) {
        let x = ginibre(n * n, &mut rng(seed, 0));
        prop_assert_eq!(reshuffle(&reshuffle(&x).unwrap()).unwrap(), x);
    }

    #[test]
    fn partial_traces_of_products(seed in any::<u64>(), n in 1usize..5) {
        let a = random_density(n, &mut rng(seed, 0));
        let b = random_density(n, &mut rng(seed, 1));
        let ab = kron(a.as_matrix(), b.as_matrix());
        prop_assert!(max_abs_diff(&partial_trace(&ab, Side::A).unwrap(), b.as_matrix()) < 1e-12);
        prop_assert!(max_abs_diff(&partial_trace(&ab, Side::B).unwrap(), a.as_matrix()) < 1e-12);
    }

    #[test]
    fn composition_is_associative_and_matches_odot(seed in any::<u64>(), n in 2usize..4) {
        let a = random_channel(n, &mut rng(seed, 0));
        let b = random_channel(n, &mut rng(seed, 1));
        let c = random_channel(n, &mut rng(seed, 2));
        let left = Channel::compose(&Channel::compose(&a, &b).unwrap(), &c).unwrap();
        let right = Channel::compose(&a, &Channel::compose(&b, &c).unwrap()).unwrap();
        prop_assert!(max_abs_diff(left.choi(), right.choi()) < 1e-10);

        let ab = Channel::compose(&a, &b).unwrap();
        let raw = odot_raw(
            &BipartiteOperator::new(a.choi().clone()).unwrap(),
            &BipartiteOperator::new(b.choi().clone()).unwrap(),
        ).unwrap();
        prop_assert!(max_abs_diff(raw.as_matrix(), ab.choi()) < 1e-10);
        let states = odot_state(&a.jam_state().unwrap(), &b.jam_state().unwrap()).unwrap();
        prop_assert!(max_abs_diff(states.as_matrix(), ab.jam_state().unwrap().as_matrix()) < 1e-10);
    }

    #[test]
    fn map_entropy_range_and_kraus_weights(seed in any::<u64>(), n in 2usize..5) {
        let ch = random_channel(n, &mut rng(seed, 0));
        let s = ch.map_entropy().unwrap();
        prop_assert!(s >= -1e-12 && s <= 2.0 * (n as f64).ln() + 1e-9);
        let k = ch.to_kraus().unwrap();
        let ev = eigvals_hermitian(ch.choi(), HERMIT_TOL).unwrap();
        let mut w = k.weights().to_vec();
        w.resize(n * n, 0.0);
        for (a, b) in sorted(w).iter().zip(sorted(ev.values().to_vec())) {
            prop_assert!((a - b).abs() < 1e-9);
        }
        prop_assert!(k.completeness_deviation() < 1e-9);
    }

    #[test]
    fn dynamical_subadditivity_bistochastic(seed in any::<u64>(), n in 2usize..4) {
        let c1 = random_bistochastic_channel(n, &mut rng(seed, 0), BistochasticMethod::Sinkhorn).unwrap();
        let c2 = random_bistochastic_channel(n, &mut rng(seed, 1), BistochasticMethod::Sinkhorn).unwrap();
        let (s1, s2) = (c1.map_entropy().unwrap(), c2.map_entropy().unwrap());
        let s21 = Channel::compose(&c2, &c1).unwrap().map_entropy().unwrap();
        let s12 = Channel::compose(&c1, &c2).unwrap().map_entropy().unwrap();
        prop_assert!(s21 <= s1 + s2 + 1e-8);
        prop_assert!(s1.max(s2) <= s21.min(s12) + 1e-8);
    }

    #[test]
    fn bistochastic_odot_stays_in_both_classes(seed in any::<u64>(), n in 2usize..4) {
        let c1 = random_bistochastic_channel(n, &mut rng(seed, 0), BistochasticMethod::UnitaryMixture).unwrap();
        let c2 = random_bistochastic_channel(n, &mut rng(seed, 1), BistochasticMethod::Sinkhorn).unwrap();
        let s = odot_state(&c2.jam_state().unwrap(), &c1.jam_state().unwrap()).unwrap();
        prop_assert_eq!(membership(&s, CLASS_TOL).unwrap(), StateClass::DII);
        prop_assert!((trace(s.as_matrix()).re - 1.0).abs() < 1e-9);
    }

    #[test]
    fn exchange_entropy_two_routes_and_lindblad(seed in any::<u64>(), n in 2usize..4) {
        let ch = random_channel(n, &mut rng(seed, 0));
        let rho = random_density(n, &mut rng(seed, 1));
        let by_kraus = entropy_exchange(&ch, &rho).unwrap();
        prop_assert!((by_kraus - purified_exchange_entropy(&ch, &rho).unwrap()).abs() < 1e-9);
        prop_assert!(lindblad_bounds(&ch, &rho).unwrap().holds(1e-8));
        let sh = sigma_hat(&ch, &rho).unwrap();
        prop_assert!((von_neumann_entropy(&sh) - by_kraus).abs() < 1e-12);
    }

    #[test]
    fn diagonal_embedding_identity(seed in any::<u64>(), n in 2usize..6) {
        let t = random_stochastic(n, &mut rng(seed, 0));
        let s = Channel::from_stochastic(&t).map_entropy().unwrap();
        prop_assert!((s - entropy_uniform(&t) - (n as f64).ln()).abs() < 1e-9);
    }

    #[test]
    fn classical_bounds(seed in any::<u64>(), n in 2usize..7) {
        let t1 = random_stochastic(n, &mut rng(seed, 0));
        let t2 = random_stochastic(n, &mut rng(seed, 1));
        prop_assert!(product_bounds(&t2, &t1).unwrap().holds(1e-10));
        let probs: Vec<f64> = {
            let p = random_stochastic(n, &mut rng(seed, 2));
            p.column(0)
        };
        let p = ProbVector::new(probs).unwrap();
        prop_assert!(slomczynski_bounds(&t1, &p).unwrap().holds(1e-10));
        let b1 = random_bistochastic_matrix(n, &mut rng(seed, 3)).unwrap();
        let b2 = random_bistochastic_matrix(n, &mut rng(seed, 4)).unwrap();
        prop_assert!(symmetric_bound(&b1, &b2).unwrap().slack() >= -1e-10);
    }

    #[test]
    fn quasi_free_composition_laws(seed in any::<u64>(), n in 1usize..7) {
        let later = random_qf_map(n, &mut rng(seed, 0), false);
        let earlier = random_qf_map(n, &mut rng(seed, 1), false);
        let m = qf_compose(&later, &earlier).unwrap();
        let q = random_qf_symbol(n, &mut rng(seed, 2));
        let two = qf_apply(&later, &qf_apply(&earlier, &q).unwrap()).unwrap();
        prop_assert!(max_abs_diff(qf_apply(&m, &q).unwrap().as_matrix(), two.as_matrix()) < 1e-12);
        let odot = qf_odot_symbol(&qf_jam_symbol(&later), &qf_jam_symbol(&earlier)).unwrap();
        prop_assert!(max_abs_diff(odot.as_matrix(), qf_jam_symbol(&m).as_matrix()) < 1e-12);
    }

    #[test]
    fn quasi_free_bistochastic_entropy(seed in any::<u64>(), n in 1usize..9) {
        let m1 = random_qf_map(n, &mut rng(seed, 0), true);
        let m2 = random_qf_map(n, &mut rng(seed, 1), true);
        let (s1, s2) = (qf_map_entropy(&m1), qf_map_entropy(&m2));
        prop_assert!((s1 - qf_bistochastic_entropy(m1.r())).abs() < 1e-10);
        let s21 = qf_map_entropy(&qf_compose(&m2, &m1).unwrap());
        prop_assert!(s21 <= s1 + s2 + 1e-8);
        prop_assert!(s1.max(s2) <= s21 + 1e-8);
    }
}
