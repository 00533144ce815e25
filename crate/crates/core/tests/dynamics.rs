use std::f64::consts::PI;

use num_complex::Complex64;
use wavequant_core::coeffs::{CoefficientTable, MultiIndex, PlaneWaveGrid};
use wavequant_core::dynamics::{
    default_window, energy_density, energy_density_plane_wave, evolve_free, evolve_with_atom, expectation,
    field_energy, fit_decay, gaussian_state, plane_wave_couplings, to_plane_wave, to_wavelet, wavelet_couplings,
    AtomParams, Basis, Diagonal, GaussianPhotonSpec, Integrator, SingleExcitationState,
};
use wavequant_core::field::{assemble_hamiltonian, SpatialGrid};
use wavequant_core::mra::Wavelet1D;
use wavequant_core::Error;

fn table(l: f64) -> CoefficientTable {
    let w = Wavelet1D::meyer();
    let band = w.covered_band(0, 1).unwrap();
    let n_max = (band.1 * l / (2.0 * PI)).floor() as i32;
    let g = PlaneWaveGrid::build(2, l, n_max, Some(band)).unwrap();
    CoefficientTable::build(&w, &g, 0, 1).unwrap()
}

fn photon(r0x: f64) -> GaussianPhotonSpec {
    GaussianPhotonSpec { k0: [7.0, 0.0, 0.0], r0: [r0x, 0.0, 0.0], dk2: 0.25 }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn gaussian_state_shape() {
    let t = table(8.0);
    let g = t.grid();
    let s = gaussian_state(g, &photon(-4.0)).unwrap();
    assert!((s.norm_sqr() - 1.0).abs() < 1e-14);
    let peak = (0..g.len()).max_by(|&a, &b| s.amps[a].norm().total_cmp(&s.amps[b].norm())).unwrap();
    let nearest = (0..g.len())
        .min_by(|&a, &b| {
            let d = |j: usize| (g.k(j)[0] - 7.0).hypot(g.k(j)[1]);
            d(a).total_cmp(&d(b))
        })
        .unwrap();
    assert_eq!(peak, nearest);
    let moved = gaussian_state(g, &photon(1.3)).unwrap();
    for (a, b) in s.amps.iter().zip(&moved.amps) {
        assert!((a.norm() - b.norm()).abs() < 1e-15);
    }
    let far = GaussianPhotonSpec { k0: [900.0, 0.0, 0.0], r0: [0.0; 3], dk2: 0.25 };
    assert!(matches!(gaussian_state(g, &far), Err(Error::Config { ref key, .. }) if key == "k0"));
    let bad = GaussianPhotonSpec { dk2: 0.0, ..photon(0.0) };
    assert!(matches!(gaussian_state(g, &bad), Err(Error::Config { ref key, .. }) if key == "dk2"));
}

#[test]
fn basis_change_isometry_and_round_trip() {
    let t = table(8.0);
    let pw = gaussian_state(t.grid(), &photon(-2.0)).unwrap();
    let wv = to_wavelet(&pw, &t).unwrap();
    assert_eq!(wv.basis, Basis::Wavelet);
    assert!((wv.norm_sqr() - 1.0).abs() < 1e-6);
    let back = to_plane_wave(&wv, &t).unwrap();
    let err = back.amps.iter().zip(&pw.amps).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    assert!(err < 1e-10, "{err}");

    let zero = SingleExcitationState::vacuum(Basis::Wavelet, t.len());
    assert!(to_plane_wave(&zero, &t).unwrap().amps.iter().all(|c| c.norm() == 0.0));
}

#[test]
fn single_wavelet_mode_occupies_band_corners() {
    // ψψ at s = 1 has both |k_x| and |k_y| inside the scale-1 wavelet band.
    let t = table(8.0);
    let mu = t.position(&MultiIndex::new(1, [0, 0, 0], 3)).unwrap();
    let mut st = SingleExcitationState::vacuum(Basis::Wavelet, t.len());
    st.amps[mu] = c(1.0, 0.0);
    let pw = to_plane_wave(&st, &t).unwrap();
    let g = t.grid();
    let (lo, _) = Wavelet1D::meyer().psi_band().unwrap();
    let mut quad = [0.0; 4];
    let mut outside = 0.0;
    for j in 0..g.len() {
        let k = g.k(j);
        let p = pw.amps[j].norm_sqr();
        if k[0].abs() >= 2.0 * lo - 1e-12 && k[1].abs() >= 2.0 * lo - 1e-12 {
            quad[(k[0] < 0.0) as usize * 2 + (k[1] < 0.0) as usize] += p;
        } else {
            outside += p;
        }
    }
    assert!(outside < 1e-20, "{outside}");
    // the band is clipped at the top, so only the split between corners is fixed
    let total: f64 = quad.iter().sum();
    assert!(total > 0.5);
    for q in quad {
        assert!((q / total - 0.25).abs() < 1e-10, "{quad:?}");
    }
}

#[test]
fn plane_wave_evolution_keeps_moduli() {
    let t = table(8.0);
    let s0 = gaussian_state(t.grid(), &photon(-2.0)).unwrap();
    let h = Diagonal(t.grid().omegas());
    let s1 = evolve_free(&s0, &h, 3.7, Integrator::default()).unwrap();
    assert!((s1.time - 3.7).abs() < 1e-15);
    for (j, (a, b)) in s0.amps.iter().zip(&s1.amps).enumerate() {
        assert!((a.norm() - b.norm()).abs() < 1e-13);
        let e = a * Complex64::from_polar(1.0, -t.grid().omega(j) * 3.7);
        assert!((e - b).norm() < 1e-13);
    }
}

#[test]
fn wavelet_evolution_matches_diagonal_oracle() {
    let t = table(8.0);
    let w = assemble_hamiltonian(&t, None).unwrap();
    let pw0 = gaussian_state(t.grid(), &photon(-2.0)).unwrap();
    let wv0 = to_wavelet(&pw0, &t).unwrap();
    let e0 = expectation(&w, &wv0.amps);
    assert!((e0 - field_energy(t.grid(), &pw0.amps)).abs() < 1e-8);
    let mut wv = wv0.clone();
    let mut pw = pw0.clone();
    let diag = Diagonal(t.grid().omegas());
    for _ in 0..10 {
        wv = evolve_free(&wv, &w, 1.0, Integrator::default()).unwrap();
        pw = evolve_free(&pw, &diag, 1.0, Integrator::default()).unwrap();
        let fid = to_plane_wave(&wv, &t).unwrap().fidelity(&pw);
        assert!(fid > 1.0 - 1e-6, "t = {}: {fid}", wv.time);
        assert!((wv.norm_sqr() - wv0.norm_sqr()).abs() < 1e-8);
        assert!((expectation(&w, &wv.amps) - e0).abs() < 1e-8);
    }
}

#[test]
fn eigenvector_acquires_single_phase() {
    let t = table(8.0);
    let w = assemble_hamiltonian(&t, Some(0.0)).unwrap();
    let g = t.grid();
    let j = g.len() / 3;
    let mut e = vec![c(0.0, 0.0); g.len()];
    e[j] = c(1.0, 0.0);
    let v = to_wavelet(&SingleExcitationState::new(Basis::PlaneWave, e), &t).unwrap();
    let tt = 2.9;
    let out = evolve_free(&v, &w, tt, Integrator::default()).unwrap();
    let ph = Complex64::from_polar(1.0, -g.omega(j) * tt);
    let err = out.amps.iter().zip(&v.amps).map(|(a, b)| (a - b * ph).norm()).fold(0.0, f64::max);
    assert!(err < 1e-8, "{err}");
}

#[test]
fn rk4_agrees_with_chebyshev_at_small_step() {
    let t = table(8.0);
    let w = assemble_hamiltonian(&t, None).unwrap();
    let v = to_wavelet(&gaussian_state(t.grid(), &photon(0.0)).unwrap(), &t).unwrap();
    let a = evolve_free(&v, &w, 0.5, Integrator::default()).unwrap();
    let b = evolve_free(&v, &w, 0.5, Integrator::Rk4 { dt: 0.002 }).unwrap();
    assert!(a.fidelity(&b) > 1.0 - 1e-9);
    // the default step 0.4/ω_max violates the per-step drift bound
    let dt = wavequant_core::dynamics::default_rk4_dt(t.grid().omega_max());
    assert!(matches!(evolve_free(&v, &w, 0.5, Integrator::Rk4 { dt }), Err(Error::Numerical(_))));
}

#[test]
fn energy_density_integrates_to_field_energy() {
    let t = table(8.0);
    let pw = gaussian_state(t.grid(), &photon(-2.0)).unwrap();
    let sg = SpatialGrid::default_for(t.grid());
    let rho = energy_density(&pw, &t, &sg).unwrap();
    let e = field_energy(t.grid(), &pw.amps);
    assert!((rho.total() - e).abs() < 0.02 * e, "{} vs {e}", rho.total());
    // same density from the wavelet representation
    let rho_w = energy_density(&to_wavelet(&pw, &t).unwrap(), &t, &sg).unwrap();
    let d = rho.rho.iter().zip(&rho_w.rho).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    assert!(d < 1e-10);
    // the L = 8 box is only a few widths across, so periodic tails pull the centroid
    let cen = rho.centroid();
    assert!((cen[0] + 2.0).abs() < 0.25 && cen[1].abs() < 1e-3, "{cen:?}");
}

#[test]
fn gaussian_photon_moves_ballistically() {
    let t = table(16.0);
    let g = t.grid();
    let s0 = gaussian_state(g, &photon(-4.0)).unwrap();
    let s6 = evolve_free(&s0, &Diagonal(g.omegas()), 6.0, Integrator::default()).unwrap();
    let sg = SpatialGrid::default_for(g);
    let c0 = energy_density_plane_wave(g, &s0.amps, &sg).unwrap().centroid();
    let c6 = energy_density_plane_wave(g, &s6.amps, &sg).unwrap().centroid();
    let dx = c6[0] - c0[0];
    assert!((dx - 6.0).abs() < 0.3, "dx = {dx}");
    assert!((c6[1] - c0[1]).abs() < 1e-8);
}

#[test]
fn decoupled_atom_stays_excited() {
    let t = table(8.0);
    let g = t.grid();
    let atom = AtomParams::new(10.0, 0.0, [0.0; 3]).unwrap();
    let st = SingleExcitationState::excited_atom(Basis::PlaneWave, g.len());
    let tr = evolve_with_atom(&st, &Diagonal(g.omegas()), &atom, plane_wave_couplings(g, &atom), 3.0, 0.5, Integrator::default())
        .unwrap();
    assert!(tr.prob_atom.iter().all(|p| (p - 1.0).abs() < 1e-14));
    assert!(matches!(AtomParams::new(-1.0, 0.1, [0.0; 3]), Err(Error::Config { ref key, .. }) if key == "omega_a"));
}

#[test]
fn atom_decay_rate_matches_golden_rule() {
    let t = table(16.0);
    let g = t.grid();
    let atom = AtomParams::new(10.0, 0.06, [0.0; 3]).unwrap();
    let st = SingleExcitationState::excited_atom(Basis::PlaneWave, g.len());
    let t_end = 14.0;
    let tr = evolve_with_atom(&st, &Diagonal(g.omegas()), &atom, plane_wave_couplings(g, &atom), t_end, 0.25, Integrator::default())
        .unwrap();
    assert!(tr.norm_drift() < 1e-8);
    assert!(tr.energy_drift() < 1e-8);
    let fit = fit_decay(&tr, default_window(atom.omega_a, t_end)).unwrap();
    assert!((fit.gamma_theory - 0.18).abs() < 1e-15);
    assert!((fit.gamma / 0.18 - 1.0).abs() < 0.1, "{fit:?}");
    assert!(fit.r_squared > 0.99, "{fit:?}");
}

#[test]
fn wavelet_and_plane_wave_atom_routes_agree() {
    let t = table(8.0);
    let g = t.grid();
    let w = assemble_hamiltonian(&t, Some(0.0)).unwrap();
    let atom = AtomParams::new(10.0, 0.06, [0.3, -0.7, 0.0]).unwrap();
    let pw = evolve_with_atom(
        &SingleExcitationState::excited_atom(Basis::PlaneWave, g.len()),
        &Diagonal(g.omegas()),
        &atom,
        plane_wave_couplings(g, &atom),
        4.0,
        0.5,
        Integrator::default(),
    )
    .unwrap();
    let wv = evolve_with_atom(
        &SingleExcitationState::excited_atom(Basis::Wavelet, t.len()),
        &w,
        &atom,
        wavelet_couplings(&t, &atom),
        4.0,
        0.5,
        Integrator::default(),
    )
    .unwrap();
    for (a, b) in pw.prob_atom.iter().zip(&wv.prob_atom) {
        assert!((a - b).abs() < 1e-9, "{a} vs {b}");
    }
    let back = to_plane_wave(&wv.final_state, &t).unwrap();
    assert!(back.fidelity(&pw.final_state) > 1.0 - 1e-8);
    assert!(wv.energy_drift() < 1e-8);
}

#[test]
fn atom_far_from_coupled_modes_barely_decays() {
    // Only modes centred within radius 2 of the origin couple to the atom.
    let t = table(8.0);
    let w = assemble_hamiltonian(&t, None).unwrap();
    let near: Vec<bool> = t
        .indices()
        .iter()
        .map(|m| {
            let c = t.center(m);
            c[0].hypot(c[1]) <= 2.0
        })
        .collect();
    let depletion = |pos: [f64; 3]| {
        let atom = AtomParams::new(10.0, 0.06, pos).unwrap();
        let gs: Vec<Complex64> = wavelet_couplings(&t, &atom)
            .into_iter()
            .zip(&near)
            .map(|(g, &k)| if k { g } else { c(0.0, 0.0) })
            .collect();
        let st = SingleExcitationState::excited_atom(Basis::Wavelet, t.len());
        let tr = evolve_with_atom(&st, &w, &atom, gs, 3.0, 0.5, Integrator::default()).unwrap();
        1.0 - tr.prob_atom.last().unwrap()
    };
    let on_site = depletion([0.0; 3]);
    let far = depletion([4.0 - 1.0 / 32.0, 4.0 - 1.0 / 32.0, 0.0]);
    println!("depletion at t=3: on-site {on_site:.3e}, far {far:.3e}");
    assert!(on_site > 0.1 * (1.0 - (-0.18f64 * 3.0).exp()));
    assert!(far * 10.0 < on_site);
}

#[test]
fn trajectory_csv_header() {
    let t = table(8.0);
    let g = t.grid();
    let atom = AtomParams::new(10.0, 0.06, [0.0; 3]).unwrap();
    let st = SingleExcitationState::excited_atom(Basis::PlaneWave, g.len());
    let tr = evolve_with_atom(&st, &Diagonal(g.omegas()), &atom, plane_wave_couplings(g, &atom), 1.0, 0.25, Integrator::default())
        .unwrap();
    let csv = tr.to_csv();
    let mut lines = csv.as_str().lines();
    assert_eq!(lines.next(), Some("t,prob_atom,norm_field"));
    assert_eq!(lines.count(), 5);
}
