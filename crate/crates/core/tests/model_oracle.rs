//! Model construction checked against the dense 4x4 oracle.

use xdiscord::model::{hamiltonian_matrix, is_degenerate};
use xdiscord::oracle::{dense_eig4, dense_expm4, spin_hamiltonian, Real4};
use xdiscord::{critical_omega, gibbs_state, ground_state, hamiltonian_spectrum, ModelParams};

fn max_abs_diff(a: &Real4, b: &Real4) -> f64 {
    let mut m: f64 = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            m = m.max((a[i][j] - b[i][j]).abs());
        }
    }
    m
}

/// Gibbs state via the dense exponential of -H/tbar, normalized by its trace.
fn dense_gibbs(omega: f64, delta: f64, tbar: f64) -> Real4 {
    let h = spin_hamiltonian(omega, delta);
    let scaled = h.map(|row| row.map(|x| -x / tbar));
    let e = dense_expm4(&scaled).unwrap();
    let z: f64 = (0..4).map(|i| e[i][i]).sum();
    e.map(|row| row.map(|x| x / z))
}

#[test]
fn kron_hamiltonian_matches_closed_form_matrix() {
    for &(o, d) in &[(0.0, 0.0), (0.3, 0.9), (0.684, 0.683), (2.0, 1.0)] {
        let p = ModelParams::new(o, d).unwrap();
        assert!(max_abs_diff(&spin_hamiltonian(o, d), &hamiltonian_matrix(&p)) < 1e-15);
    }
}

#[test]
fn spectrum_matches_jacobi() {
    for i in 0..=20 {
        for j in 0..=10 {
            let (o, d) = (i as f64 * 0.1, j as f64 * 0.1);
            let p = ModelParams::new(o, d).unwrap();
            let mut analytic = hamiltonian_spectrum(&p).as_array();
            analytic.sort_by(f64::total_cmp);
            let dense = dense_eig4(&spin_hamiltonian(o, d)).unwrap();
            for (a, e) in analytic.iter().zip(dense.values) {
                assert!((a - e).abs() < 1e-12, "omega={o} delta={d}");
            }
        }
    }
}

#[test]
fn spectrum_at_reported_crossing() {
    let p = ModelParams::new(0.684, 0.683).unwrap();
    let dense = dense_eig4(&spin_hamiltonian(0.684, 0.683)).unwrap();
    let s = hamiltonian_spectrum(&p);
    // two lowest levels nearly coincide
    assert!((dense.values[0] - dense.values[1]).abs() < 1e-3);
    assert!((s.ground_energy() - dense.values[0]).abs() < 1e-12);
}

#[test]
fn full_inhomogeneity_keeps_block_level_lowest() {
    for i in 0..=50 {
        let o = i as f64 * 0.2;
        let s = hamiltonian_spectrum(&ModelParams::new(o, 1.0).unwrap());
        assert!(s.lam3 < s.lam1, "omega = {o}");
        let dense = dense_eig4(&spin_hamiltonian(o, 1.0)).unwrap();
        assert!((dense.values[0] - s.lam3).abs() < 1e-12);
    }
}

#[test]
fn gibbs_matches_dense_exponential_on_grid() {
    let mut count = 0;
    for &o in &[0.0, 0.25, 0.5, 0.684, 1.0, 1.7] {
        for &d in &[0.0, 0.3, 0.683, 0.9, 1.0] {
            for &t in &[0.05, 0.1, 0.25, 0.5, 1.0, 5.0] {
                let rho = gibbs_state(&ModelParams::thermal(o, d, t).unwrap()).unwrap();
                let diff = max_abs_diff(&rho.to_dense(), &dense_gibbs(o, d, t));
                assert!(diff <= 1e-10, "omega={o} delta={d} tbar={t} diff={diff:e}");
                count += 1;
            }
        }
    }
    assert!(count >= 100);
}

#[test]
fn gibbs_at_zero_field_unit_temperature_matches_dense() {
    let rho = gibbs_state(&ModelParams::thermal(0.0, 0.0, 1.0).unwrap()).unwrap();
    assert!(max_abs_diff(&rho.to_dense(), &dense_gibbs(0.0, 0.0, 1.0)) < 1e-14);
}

#[test]
fn gibbs_states_are_valid() {
    for i in 0..40 {
        for j in 0..=10 {
            for &t in &[1e-4, 0.005, 0.02, 0.3, 3.0, 1e3] {
                let p = ModelParams::thermal(i as f64 * 0.05, j as f64 * 0.1, t).unwrap();
                gibbs_state(&p).unwrap().validate().unwrap();
            }
        }
    }
}

#[test]
fn ground_state_projects_onto_lowest_dense_eigenvector() {
    for &(o, d) in &[
        (0.0, 0.0),
        (0.3, 0.683),
        (0.9, 0.683),
        (2.0, 0.0),
        (1.0, 1.0),
    ] {
        let p = ModelParams::new(o, d).unwrap();
        assert!(!is_degenerate(&p));
        let e = dense_eig4(&spin_hamiltonian(o, d)).unwrap();
        let v: [f64; 4] = std::array::from_fn(|i| e.vectors[i][0]);
        let mut proj = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                proj[i][j] = v[i] * v[j];
            }
        }
        let rho = ground_state(&p).unwrap();
        assert!(
            max_abs_diff(&rho.to_dense(), &proj) < 1e-12,
            "omega={o} delta={d}"
        );
    }
}

#[test]
fn low_temperature_gibbs_approaches_ground_state() {
    let tbar = 1e-6;
    for &d in &[0.0, 0.2, 0.5, 0.683, 0.9] {
        let oc = critical_omega(d).unwrap();
        for o in [0.0, 0.3, oc - 0.05, oc - 0.01, oc, oc + 0.01, oc + 0.2, 2.5] {
            if o < 0.0 {
                continue;
            }
            let g = ground_state(&ModelParams::new(o, d).unwrap()).unwrap();
            let t = gibbs_state(&ModelParams::thermal(o, d, tbar).unwrap()).unwrap();
            let diff = max_abs_diff(&g.to_dense(), &t.to_dense());
            assert!(diff <= 1e-4, "omega={o} delta={d} diff={diff:e}");
        }
    }
}

fn bisect_crossing(delta: f64) -> f64 {
    let gap = |o: f64| hamiltonian_spectrum(&ModelParams::new(o, delta).unwrap()).crossing_gap();
    let (mut lo, mut hi) = (1e-9, 1.0);
    while gap(hi) > 0.0 {
        hi *= 2.0;
    }
    assert!(gap(lo) > 0.0);
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        if gap(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn critical_omega_is_the_level_crossing() {
    for k in 0..=99 {
        let d = k as f64 / 100.0;
        let root = bisect_crossing(d);
        assert!(
            (critical_omega(d).unwrap() - root).abs() < 1e-10,
            "delta = {d}"
        );
    }
    assert!((bisect_crossing(0.99) - 3.5445).abs() < 1e-3);
}

#[test]
fn crossing_has_a_single_sign_change() {
    // gap > 0 below omega_c, < 0 above
    for &d in &[0.0, 0.4, 0.683, 0.95] {
        let oc = critical_omega(d).unwrap();
        for k in 1..200 {
            let o = k as f64 * 0.025;
            let g = hamiltonian_spectrum(&ModelParams::new(o, d).unwrap()).crossing_gap();
            if (o - oc).abs() > 1e-9 {
                assert_eq!(g > 0.0, o < oc, "delta={d} omega={o}");
            }
        }
    }
}
