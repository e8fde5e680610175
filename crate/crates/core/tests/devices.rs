use hom_core::analysis::{check_interference_condition, propagate};
use hom_core::random::random_packet;
use hom_core::{
    moving_mirror, passive_splitter, to_time_domain, Band, FrequencyGrid, GaussianShape, MirrorParams,
    SplitterCoefficients, WavePacket,
};
use nalgebra::DVector;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Single-photon output amplitudes for a photon entering on the red side.
fn single_photon_output(kernel: &hom_core::BlockKernel, red: &WavePacket) -> DVector<Complex64> {
    let mut input = DVector::zeros(kernel.dim());
    input.rows_mut(0, red.len()).copy_from(red.amplitudes());
    kernel.matrix().transpose() * input
}

#[test]
fn mirror_compresses_reflected_envelope() {
    let red = FrequencyGrid::uniform(200.0, 24.0, 192, Band::Red).unwrap();
    let params = MirrorParams::new(SplitterCoefficients::new(0.0, 1.0).unwrap(), 0.2).unwrap();
    let alpha = params.doppler_factor();
    let kernel = moving_mirror(params, &red).unwrap();
    let packet = WavePacket::gaussian(&red, GaussianShape::new(200.0, 1.0).with_delay(0.7)).unwrap();

    let out = single_photon_output(&kernel, &packet);
    let blue_amps: Vec<Complex64> = out.rows(red.len(), red.len()).iter().copied().collect();
    let blue = WavePacket::from_amplitudes(kernel.basis().band2().clone(), blue_amps).unwrap();

    let t_red = to_time_domain(&packet, 256).unwrap();
    let t_blue = to_time_domain(&blue, 256).unwrap();
    assert!((t_blue.spacing() - alpha * t_red.spacing()).abs() < 1e-12);
    // Full reflection carries the -ρ sign of the red-to-blue block.
    let scale = -alpha.sqrt();
    for (b, r) in t_blue.amplitudes().iter().zip(t_red.amplitudes()) {
        assert!((b * scale - r).norm() < 1e-10);
    }
    let (_, rms_r) = t_red.mean_and_rms();
    let (_, rms_b) = t_blue.mean_and_rms();
    assert!((rms_b / rms_r - alpha).abs() < 1e-6);
}

#[test]
fn passive_dip_vanishes_only_for_identical_packets() {
    let g = FrequencyGrid::uniform(200.0, 16.0, 48, Band::Red).unwrap();
    let k = passive_splitter(SplitterCoefficients::balanced(), &g);
    let (b1, b2) = (k.basis().band1(), k.basis().band2());
    let shape = GaussianShape::new(200.0, 1.0).with_chirp(0.2);
    let red = WavePacket::gaussian(b1, shape).unwrap();

    let same = WavePacket::gaussian(b2, shape).unwrap();
    assert!(propagate(&k, &red, &same).unwrap().rb < 1e-14);
    assert!(check_interference_condition(&red, &same, &k).unwrap() < 1e-12);

    let phased = same.with_phase(1.1);
    assert!(propagate(&k, &red, &phased).unwrap().rb < 1e-14);
    assert!(check_interference_condition(&red, &phased, &k).unwrap() < 1e-12);

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for other in [
        WavePacket::gaussian(b2, shape.with_delay(0.3)).unwrap(),
        WavePacket::gaussian(b2, GaussianShape::new(200.0, 1.0)).unwrap(),
        random_packet(&mut rng, b2),
    ] {
        let p = propagate(&k, &red, &other).unwrap().rb;
        let overlap = red.regridded(b2).unwrap().inner(&other).unwrap().norm_sqr();
        assert!((p - 0.5 * (1.0 - overlap)).abs() < 1e-12);
        assert!(p > 1e-4);
        assert!(check_interference_condition(&red, &other, &k).unwrap() > 1e-3);
    }
}
