use hom_core::analysis::{
    beam_splitter_decompose, brute_force_output, dip_scan, hom_kernel, output_probabilities, propagate, schmidt_decompose,
};
use hom_core::random::{random_packet, random_schmidt_spec, random_unitary};
use hom_core::{synthesize_kernel, to_time_domain, Band, BlockKernel, Execution, FrequencyGrid, ModeBasis, TwoPhotonState};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn basis(n_red: usize, n_blue: usize) -> ModeBasis {
    ModeBasis::new(
        FrequencyGrid::uniform(100.0, 8.0, n_red, Band::Red).unwrap(),
        FrequencyGrid::uniform(180.0, 8.0, n_blue, Band::Blue).unwrap(),
    )
}

fn haar_kernel(rng: &mut ChaCha8Rng, basis: ModeBasis) -> BlockKernel {
    let u = random_unitary(rng, basis.len());
    BlockKernel::new(basis, u).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn synthesized_kernels_are_unitary(seed in any::<u64>(), n in 2usize..12, count in 0usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = basis(n, n + 1);
        let spec = random_schmidt_spec(&mut rng, &b, count.min(n), 0.02).unwrap();
        let k = synthesize_kernel(&spec, &b).unwrap();
        prop_assert!(k.verify_unitarity().max() < 1e-10);
    }

    #[test]
    fn probability_is_conserved(seed in any::<u64>(), n1 in 1usize..10, n2 in 1usize..10) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = basis(n1, n2);
        let k = haar_kernel(&mut rng, b.clone());
        let pr = random_packet(&mut rng, b.band1());
        let pb = random_packet(&mut rng, b.band2());
        let out = k.apply(&TwoPhotonState::product(&b, &pr, &pb).unwrap()).unwrap();
        let p = output_probabilities(&out);
        prop_assert!((p.total() - 1.0).abs() < 1e-12);
        prop_assert!(p.rr >= 0.0 && p.rb >= 0.0 && p.bb >= 0.0);
        prop_assert!(out.asymmetry() < 1e-12);
    }

    #[test]
    fn oracle_agrees_with_pair_matrix(seed in any::<u64>(), n1 in 1usize..5, n2 in 1usize..5) {
        prop_assume!(n1 + n2 <= 8);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = basis(n1, n2);
        let k = haar_kernel(&mut rng, b.clone());
        let pr = random_packet(&mut rng, b.band1());
        let pb = random_packet(&mut rng, b.band2());
        let fast = propagate(&k, &pr, &pb).unwrap();
        let slow = brute_force_output(&k, &pr, &pb).unwrap();
        prop_assert!((fast.rr - slow.rr).abs() < 1e-12);
        prop_assert!((fast.rb - slow.rb).abs() < 1e-12);
        prop_assert!((fast.bb - slow.bb).abs() < 1e-12);
    }

    #[test]
    fn common_delay_keeps_overlaps(seed in any::<u64>(), n in 1usize..40, delay in -20.0f64..20.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = FrequencyGrid::uniform(50.0, 6.0, n, Band::Red).unwrap();
        let p = random_packet(&mut rng, &g);
        let q = random_packet(&mut rng, &g);
        let before = p.inner(&q).unwrap().norm();
        let after = p.delayed(delay).inner(&q.delayed(delay)).unwrap().norm();
        prop_assert!((before - after).abs() < 1e-12);
        prop_assert!((p.delayed(delay).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn time_domain_round_trip(seed in any::<u64>(), n in 1usize..64, extra in 0usize..64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = FrequencyGrid::uniform(30.0, 5.0, n, Band::Blue).unwrap();
        let p = random_packet(&mut rng, &g);
        let t = to_time_domain(&p, n + extra).unwrap();
        prop_assert!((t.norm_sqr() - 1.0).abs() < 1e-10);
        let back = t.to_spectrum(&g).unwrap();
        prop_assert!((back.amplitudes() - p.amplitudes()).camax() < 1e-10);
    }

    #[test]
    fn splitter_decomposition_reconstructs(seed in any::<u64>(), n in 2usize..9, count in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = basis(n, n);
        let spec = random_schmidt_spec(&mut rng, &b, count.min(n), 0.05).unwrap();
        let k = synthesize_kernel(&spec, &b).unwrap();
        let d = beam_splitter_decompose(&k).unwrap();
        prop_assert!(d.residual < 1e-8);
        let via_blocks = hom_kernel(&k).unwrap();
        prop_assert!((d.hom_kernel().matrix() - via_blocks.matrix()).camax() < 1e-8);
        let schmidt = schmidt_decompose(&via_blocks);
        prop_assert!(schmidt.residual(&via_blocks) < 1e-10);
    }

    #[test]
    fn scan_execution_modes_agree(seed in any::<u64>(), n in 1usize..16) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = basis(n, n);
        let k = haar_kernel(&mut rng, b.clone());
        let pr = random_packet(&mut rng, b.band1());
        let pb = random_packet(&mut rng, b.band2());
        let delays: Vec<f64> = (0..17).map(|i| i as f64 * 0.25 - 2.0).collect();
        let seq = dip_scan(&k, &pr, &pb, &delays, Execution::Sequential).unwrap();
        let par = dip_scan(&k, &pr, &pb, &delays, Execution::Parallel).unwrap();
        prop_assert_eq!(seq, par);
    }
}
