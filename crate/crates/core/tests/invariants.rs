use num_complex::Complex64 as C64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use quenchscape_core::expressivity::{
    empirical_bound, frame_potentials, haar_frame_potential, haar_loss_variance, sample_ensemble,
    variance_bound, EnsembleConfig,
};
use quenchscape_core::models::{
    build_long_range_ising, build_nn_ising, sample_disorder, DisorderSpec, LongRangeIsingParams,
    ModelConfig, NNIsingParams, Phase,
};
use quenchscape_core::phase::spacing_ratios;
use quenchscape_core::quantum::{
    diagonalize, eigenvalues, evolve, expectation, haar_random_state, reduced_density,
    von_neumann_entropy, DenseHermitian, StateVector,
};
use quenchscape_core::variational::{
    loss, maxcut_hamiltonian, phase_init, LossKind, LossSpec, MaxCutInstance,
};

fn random_hermitian(n: usize, seed: u64) -> DenseHermitian {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = 1 << n;
    let mut e = vec![C64::new(0.0, 0.0); d * d];
    for i in 0..d {
        e[i * d + i] = C64::new(rng.random_range(-2.0..2.0), 0.0);
        for j in 0..i {
            let z = C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            e[i * d + j] = z;
            e[j * d + i] = z.conj();
        }
    }
    DenseHermitian::new(n, e).unwrap()
}

fn random_state(n: usize, seed: u64) -> StateVector {
    haar_random_state(n, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap()
}

fn distance(a: &StateVector, b: &StateVector) -> f64 {
    a.amplitudes()
        .iter()
        .zip(b.amplitudes())
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

fn frobenius(a: &DenseHermitian) -> f64 {
    a.entries().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn is_hermitian(h: &DenseHermitian) -> bool {
    let d = h.dim();
    (0..d).all(|i| (0..d).all(|j| (h.get(i, j) - h.get(j, i).conj()).norm() <= 1e-12))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn evolution_is_unitary(n in 1usize..=4, seed in any::<u64>(), t in -20.0f64..20.0) {
        let spec = diagonalize(&random_hermitian(n, seed)).unwrap();
        let psi = random_state(n, seed ^ 1);
        let out = evolve(&spec, t, &psi).unwrap();
        prop_assert!((out.norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn evolution_composes(n in 1usize..=4, seed in any::<u64>(), t1 in -5.0f64..5.0, t2 in -5.0f64..5.0) {
        let spec = diagonalize(&random_hermitian(n, seed)).unwrap();
        let psi = random_state(n, seed ^ 2);
        let once = evolve(&spec, t1 + t2, &psi).unwrap();
        let twice = evolve(&spec, t2, &evolve(&spec, t1, &psi).unwrap()).unwrap();
        prop_assert!(distance(&once, &twice) < 1e-9);
    }

    #[test]
    fn spectrum_reconstructs_operator(n in 1usize..=5, seed in any::<u64>()) {
        let h = random_hermitian(n, seed);
        let back = diagonalize(&h).unwrap().reconstruct();
        let diff = back.add(&h.scaled(-1.0)).unwrap();
        prop_assert!(frobenius(&diff) / frobenius(&h) < 1e-8);
    }

    #[test]
    fn entropy_is_symmetric_across_a_cut(n in 2usize..=6, seed in any::<u64>(), mask in 1u32..63) {
        let subsystem: Vec<usize> = (1..=n).filter(|q| mask >> (q - 1) & 1 == 1).collect();
        let complement: Vec<usize> = (1..=n).filter(|q| mask >> (q - 1) & 1 == 0).collect();
        prop_assume!(!subsystem.is_empty() && !complement.is_empty());
        let psi = random_state(n, seed);
        let sa = von_neumann_entropy(&reduced_density(&psi, &subsystem).unwrap()).unwrap();
        let sb = von_neumann_entropy(&reduced_density(&psi, &complement).unwrap()).unwrap();
        prop_assert!((sa - sb).abs() < 1e-8);
    }

    #[test]
    fn expectation_within_spectral_radius(n in 1usize..=4, seed in any::<u64>()) {
        let o = random_hermitian(n, seed);
        let ev = eigenvalues(&o).unwrap();
        let radius = ev[0].abs().max(ev[ev.len() - 1].abs());
        let value = expectation(&random_state(n, seed ^ 3), &o).unwrap();
        prop_assert!(value.abs() <= radius + 1e-12);
    }

    #[test]
    fn built_hamiltonians_are_hermitian(
        n in 2usize..=5,
        seed in any::<u64>(),
        j in -2.0f64..2.0,
        b in -3.0f64..3.0,
        alpha in 0.2f64..3.0,
    ) {
        let h = sample_disorder(&DisorderSpec::new(10.0).unwrap(), n, &mut ChaCha8Rng::seed_from_u64(seed));
        let nn = build_nn_ising(&NNIsingParams { n, j, b, h: h.clone() }).unwrap();
        let lr = build_long_range_ising(&LongRangeIsingParams { n, j, b, alpha, h }).unwrap();
        prop_assert!(is_hermitian(&nn) && is_hermitian(&lr));
    }

    #[test]
    fn nn_without_transverse_field_is_diagonal(n in 2usize..=5, seed in any::<u64>(), j in -2.0f64..2.0) {
        let h = sample_disorder(&DisorderSpec::new(5.0).unwrap(), n, &mut ChaCha8Rng::seed_from_u64(seed));
        let op = build_nn_ising(&NNIsingParams { n, j, b: 0.0, h }).unwrap();
        prop_assert!(op.is_diagonal());
    }

    #[test]
    fn free_long_range_spectrum_is_enumerable(n in 2usize..=4, seed in any::<u64>(), b in -2.0f64..2.0) {
        let h = sample_disorder(&DisorderSpec::new(6.0).unwrap(), n, &mut ChaCha8Rng::seed_from_u64(seed));
        let op = build_long_range_ising(&LongRangeIsingParams { n, j: 0.0, b, alpha: 1.0, h: h.clone() }).unwrap();
        let mut want: Vec<f64> = (0..1usize << n)
            .map(|s| (0..n).map(|i| if s >> i & 1 == 0 { b + h[i] } else { -(b + h[i]) }).sum())
            .collect();
        want.sort_by(f64::total_cmp);
        let got = eigenvalues(&op).unwrap();
        for (g, w) in got.iter().zip(&want) {
            prop_assert!((g - w).abs() < 1e-10);
        }
    }

    #[test]
    fn clean_nn_spectrum_is_translation_invariant(n in 2usize..=5, j in -2.0f64..2.0, b in -3.0f64..3.0) {
        // A defect on qubit 1 and on qubit 2 are related by a cyclic relabelling.
        let h: Vec<f64> = (0..n).map(|i| if i == 0 { 0.7 } else { 0.0 }).collect();
        let mut shifted_h = h.clone();
        shifted_h.rotate_right(1);
        let a = eigenvalues(&build_nn_ising(&NNIsingParams { n, j, b, h }).unwrap()).unwrap();
        let c = eigenvalues(&build_nn_ising(&NNIsingParams { n, j, b, h: shifted_h }).unwrap()).unwrap();
        for (x, y) in a.iter().zip(&c) {
            prop_assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn spacing_ratios_are_affine_invariant(
        seed in any::<u64>(),
        scale_exp in -3i32..4,
        shift in -4i32..4,
    ) {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        // Dyadic levels and power-of-two scales keep the affine map exact.
        let mut e: Vec<f64> = (0..40).map(|_| rng.random_range(-10_000i32..10_000) as f64 / 1024.0).collect();
        e.sort_by(f64::total_cmp);
        let c = 2f64.powi(scale_exp);
        let shifted: Vec<f64> = e.iter().map(|x| c * x + shift as f64 * 64.0).collect();
        prop_assert_eq!(spacing_ratios(&shifted).unwrap(), spacing_ratios(&e).unwrap());
    }

    #[test]
    fn empirical_bound_never_exceeds_theoretical(
        n in 1usize..=5,
        seed in any::<u64>(),
        df1 in 0.0f64..0.5,
        df2 in 0.0f64..0.5,
        k in 0.05f64..0.99,
    ) {
        let o = random_hermitian(n, seed);
        prop_assume!(o.hilbert_schmidt_norm() >= 1.0);
        let f1 = haar_frame_potential(n, 1).unwrap() + df1;
        let f2 = haar_frame_potential(n, 2).unwrap() + df2;
        // Dominance holds while the bracket multiplying the norm is non-negative.
        prop_assume!(df2.sqrt() >= df1);
        let theory = variance_bound(f1, f2, &o, n).unwrap();
        let emp = empirical_bound(f1, f2, &o, n, k).unwrap();
        prop_assert!(emp <= theory + 1e-12 * theory.abs().max(1.0));
    }

    #[test]
    fn bounds_ignore_unrealizable_noise(
        n in 2usize..=5,
        seed in any::<u64>(),
        df1 in -1e-2f64..1e-2,
        df2 in -1e-3f64..0.0,
        k in 0.05f64..0.99,
    ) {
        let o = random_hermitian(n, seed);
        prop_assume!(o.hilbert_schmidt_norm() >= 1.0);
        let f1 = haar_frame_potential(n, 1).unwrap() + df1;
        let f2 = haar_frame_potential(n, 2).unwrap() + df2;
        let haar = haar_loss_variance(&o, n).unwrap();
        prop_assert_eq!(variance_bound(f1, f2, &o, n).unwrap(), haar);
        prop_assert_eq!(empirical_bound(f1, f2, &o, n, k).unwrap(), haar);
    }

    #[test]
    fn maxcut_energy_is_flip_symmetric(seed in any::<u64>(), n in 2usize..=6) {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut w = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in 0..i {
                let v = rng.random_range(-3i32..=3) as f64;
                w[i][j] = v;
                w[j][i] = v;
            }
        }
        let inst = MaxCutInstance::new(w).unwrap();
        let full = (1usize << n) - 1;
        for s in 0..=full {
            prop_assert_eq!(inst.energy(s), inst.energy(full ^ s));
        }
        let diag = maxcut_hamiltonian(&inst).unwrap().diagonal();
        prop_assert_eq!(diag.len(), full + 1);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn loss_within_operator_spectrum(seed in any::<u64>(), depth in 0usize..4, mbl in any::<bool>()) {
        let n = 5;
        let model = ModelConfig::nearest_neighbor();
        let o = random_hermitian(n, seed);
        let ev = eigenvalues(&o).unwrap();
        let spec = LossSpec::new(LossKind::ObservableExpectation, o, Default::default(), model).unwrap();
        let phase = if mbl { Phase::Mbl } else { Phase::Thermalized };
        let params = phase_init(&model, phase, n, depth, seed).unwrap();
        let value = loss(&params, &spec).unwrap();
        prop_assert!(value >= ev[0] - 1e-10 && value <= ev[ev.len() - 1] + 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn frame_potentials_respect_haar_floor(
        seed in any::<u64>(),
        n in 2usize..=4,
        depth in 1usize..=8,
        mbl in any::<bool>(),
    ) {
        let phase = if mbl { Phase::Mbl } else { Phase::Thermalized };
        let cfg = EnsembleConfig::for_phase(ModelConfig::nearest_neighbor(), phase, n, depth, 300, seed);
        let est = frame_potentials(&sample_ensemble(&cfg).unwrap()).unwrap();
        for (t, e) in [1u32, 2].into_iter().zip(&est) {
            let haar = haar_frame_potential(n, t).unwrap();
            prop_assert!(e.value >= haar - 3.0 * e.std_error, "t={} {} < {}", t, e.value, haar);
        }
    }
}

#[test]
fn maxcut_reference_minimizers_pair_up() {
    let inst = MaxCutInstance::reference();
    let bf = inst.brute_force();
    let full = (1usize << 5) - 1;
    for s in &bf.optima {
        let idx = usize::from_str_radix(s, 2).unwrap();
        assert!(bf.optima.contains(&inst.bitstring(full ^ idx)));
    }
}

#[test]
fn disorder_statistics() {
    let w = 7.0;
    let spec = DisorderSpec::new(w).unwrap();
    let draws = sample_disorder(&spec, 100_000, &mut ChaCha8Rng::seed_from_u64(99));
    let n = draws.len() as f64;
    let mean = draws.iter().sum::<f64>() / n;
    let var = draws.iter().map(|h| (h - mean).powi(2)).sum::<f64>() / (n - 1.0);
    let sigma = (w * w / 12.0 / n).sqrt();
    assert!(mean.abs() < 3.0 * sigma);
    assert!((var / (w * w / 12.0) - 1.0).abs() < 0.05);
    assert!(draws.iter().all(|h| h.abs() <= w / 2.0));
}
