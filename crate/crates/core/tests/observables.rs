use kinam::fields::{gauge_transform, make_coulomb_quadratic, make_uniform_b, make_zero_field, FieldConfig, Gauge};
use kinam::operators::*;
use kinam::verification::*;
use kinam::{
    gaussian_packet, Complex64, Grid, Index3, LinearOperator, PacketSpec, Polynomial, Rational, Vec3, WaveFunction,
};

fn unit_b(gauge: Gauge) -> FieldConfig {
    make_uniform_b(&Vec3::from_ints([0, 0, 1]), gauge).unwrap()
}

fn ev(op: &LinearOperator, psi: &WaveFunction) -> Complex64 {
    expectation(op, psi).unwrap()
}

fn plane() -> Grid {
    Grid::centered(&[96, 96], 0.1).unwrap()
}

#[test]
fn position_moments_of_gaussians() {
    let g = plane();
    let x = build_position(&g, Index3::X);
    assert!(x.matrix().get(0, 0).re < 0.0);
    let centered = gaussian_packet(&g, &PacketSpec::centered(0.5)).unwrap();
    assert!(ev(&x, &centered).norm() < 1e-10);
    let shifted = gaussian_packet(&g, &PacketSpec::centered(0.5).at([0.7, -0.3, 0.0])).unwrap();
    assert!((ev(&x, &shifted).re - 0.7).abs() < 1e-8, "{}", ev(&x, &shifted).re);
    assert!((ev(&build_position(&g, Index3::Y), &shifted).re + 0.3).abs() < 1e-8);
}

#[test]
fn derivative_of_sine_is_second_order() {
    let err = |h: f64| {
        let n = (8.0 / h) as usize;
        let g = Grid::centered(&[n], h).unwrap();
        let f = WaveFunction::from_fn(g, |r| Complex64::new((2.0 * r[0]).sin(), 0.0)).unwrap();
        let d = build_derivative(&g, Index3::X).apply(&f).unwrap();
        (2..n - 2)
            .map(|p| (d.amplitudes()[p].re - 2.0 * (2.0 * g.coordinate(p)[0]).cos()).abs())
            .fold(0.0, f64::max)
    };
    let ratio = err(0.1) / err(0.05);
    assert!((ratio - 4.0).abs() < 0.1, "{ratio}");
    let g = Grid::centered(&[16], 0.1).unwrap();
    let c = WaveFunction::from_fn(g, |_| Complex64::new(1.0, 0.0)).unwrap();
    let d = build_derivative(&g, Index3::X).apply(&c).unwrap();
    assert!(d.amplitudes()[1..15].iter().all(|v| v.norm() == 0.0));
}

#[test]
fn zero_field_momenta() {
    let g = plane();
    let cfg = make_zero_field();
    let d = build_derivative(&g, Index3::X)
        .matrix()
        .scale(Complex64::new(0.0, -1.0));
    assert!(build_pi(&g, &cfg, Index3::X).matrix().max_abs_diff(&d).unwrap() < 1e-15);
    for i in Index3::ALL {
        let a = build_kinetic_l(&g, &cfg, i);
        let b = build_l(&g, &cfg, i);
        assert!(a.matrix().max_abs_diff(b.matrix()).unwrap() == 0.0);
    }
    let psi = gaussian_packet(&g, &PacketSpec::centered(0.6).moving([1.5, 0.0, 0.0])).unwrap();
    let p = ev(&build_pi(&g, &cfg, Index3::X), &psi).re;
    // O((kh)²) lattice correction: ⟨sin(kh)/h⟩
    assert!((p - 1.5).abs() < 1.5 * 0.01, "{p}");
}

#[test]
fn canonical_angular_momentum_of_vortex() {
    let g = plane();
    let cfg = make_zero_field();
    let lz = build_l(&g, &cfg, Index3::Z);
    let real = gaussian_packet(&g, &PacketSpec::centered(0.6).at([0.2, 0.1, 0.0])).unwrap();
    assert!(ev(&lz, &real).norm() < 1e-10);
    let vortex = gaussian_packet(&g, &PacketSpec::centered(0.6).with_vortex(1)).unwrap();
    assert!((ev(&lz, &vortex).re - 1.0).abs() < 1e-2);
    let anti = gaussian_packet(&g, &PacketSpec::centered(0.6).with_vortex(-2)).unwrap();
    assert!((ev(&lz, &anti).re + 2.0).abs() < 2e-2);
}

// symmetric gauge: L_z = l_z − (qB/2c)(x² + y²)
#[test]
fn symmetric_gauge_kinetic_lz_correction() {
    let g = Grid::centered(&[12, 12, 8], 0.3).unwrap();
    let cfg = unit_b(Gauge::Symmetric);
    let diff = build_kinetic_l(&g, &cfg, Index3::Z)
        .minus(&build_l(&g, &cfg, Index3::Z))
        .unwrap();
    let r2 = Polynomial::from_terms([(Rational::new(-1, 2), [2, 0, 0]), (Rational::new(-1, 2), [0, 2, 0])]);
    let want = LinearOperator::polynomial_diagonal("c", g, &r2, 1.0);
    assert!(diff.matrix().max_abs_diff(want.matrix()).unwrap() < 1e-12);
}

#[test]
fn gaussian_kinetic_energy() {
    let g = Grid::centered(&[512], 0.02).unwrap();
    let sigma = 0.8;
    let psi = gaussian_packet(&g, &PacketSpec::centered(sigma)).unwrap();
    let e = ev(&build_hamiltonian(&g, &make_zero_field()), &psi).re;
    let want = 1.0 / (8.0 * sigma * sigma);
    assert!((e - want).abs() / want < 1e-3, "{e} vs {want}");
}

#[test]
fn zero_field_has_no_force_or_torque() {
    let g = Grid::centered(&[10, 10, 10], 0.3).unwrap();
    let cfg = make_zero_field();
    for k in Index3::ALL {
        for f in ForceForm::ALL {
            assert!(build_magnetic_force(&g, &cfg, k, f).matrix().max_abs() < 1e-12);
        }
        assert!(build_torque(&g, &cfg, k).matrix().max_abs() < 1e-12);
    }
}

// ⟨M⟩ ≈ (q/c) v × B for a packet with mean velocity v
#[test]
fn lorentz_force_on_moving_packet() {
    let g = Grid::centered(&[96, 96], 0.1).unwrap();
    let cfg = unit_b(Gauge::Symmetric);
    let psi = gaussian_packet(&g, &PacketSpec::centered(1.0).moving([0.5, 0.0, 0.0])).unwrap();
    let v = [Index3::X, Index3::Y].map(|i| ev(&build_pi(&g, &cfg, i), &psi).re);
    let mx = ev(&build_magnetic_force(&g, &cfg, Index3::X, ForceForm::Expanded), &psi).re;
    let my = ev(&build_magnetic_force(&g, &cfg, Index3::Y, ForceForm::Expanded), &psi).re;
    // v × ẑ = (v_y, −v_x)
    assert!((mx - v[1]).abs() < 1e-3 && (my + v[0]).abs() < 1e-3, "{mx} {my} {v:?}");
}

#[test]
fn canonical_commutator_is_second_order() {
    let err = |n: usize| {
        let g = Grid::centered(&[n], 8.0 / n as f64).unwrap();
        let psi = gaussian_packet(&g, &PacketSpec::centered(0.8)).unwrap();
        let x = build_position(&g, Index3::X);
        let p = build_momentum(&g, &make_zero_field(), Index3::X);
        let c = commutator_apply(&x, &p, &psi).unwrap();
        c.sub(&psi.scaled(Complex64::new(0.0, 1.0))).unwrap().norm()
    };
    let ratio = err(80) / err(160);
    assert!((ratio - 4.0).abs() < 0.2, "{ratio}");
}

#[test]
fn packets_hit_their_moments() {
    let g = plane();
    let spec = PacketSpec::centered(0.5).at([0.4, -0.2, 0.0]).moving([0.8, -0.6, 0.0]);
    let psi = gaussian_packet(&g, &spec).unwrap();
    assert!((psi.norm() - 1.0).abs() < 1e-12);
    assert!(
        (ev(&build_position(&g, Index3::X), &psi).re - 0.4).abs() < 1e-8,
        "{}",
        ev(&build_position(&g, Index3::X), &psi).re
    );
    let py = ev(&build_momentum(&g, &make_zero_field(), Index3::Y), &psi).re;
    assert!((py + 0.6).abs() < 0.6 * 0.01);
}

#[test]
fn kinetic_commutators_for_vortex_and_landau_gauge() {
    let g = Grid::centered(&[64, 64, 64], 0.3).unwrap();
    let psi = gaussian_packet(&g, &PacketSpec::centered(1.8).with_vortex(1)).unwrap();
    assert!(
        verify_kinetic_ll_commutation(&unit_b(Gauge::Symmetric), &psi, 1e-2)
            .unwrap()
            .pass
    );
    let centered = gaussian_packet(&g, &PacketSpec::centered(1.8)).unwrap();
    let r = verify_kinetic_ll_commutation(&unit_b(Gauge::Landau), &centered, 1e-2).unwrap();
    assert!(
        r.pass,
        "{:?}",
        r.components.iter().map(|c| c.residual).collect::<Vec<_>>()
    );
}

#[test]
fn zero_field_kinetic_commutator_equals_canonical() {
    let g = Grid::centered(&[24, 24, 24], 0.25).unwrap();
    let psi = gaussian_packet(&g, &PacketSpec::centered(0.75).moving([0.5, 0.2, 0.0])).unwrap();
    let a = verify_kinetic_ll_commutation(&make_zero_field(), &psi, 1.0).unwrap();
    let b = verify_ll_commutation(&make_zero_field(), &psi, 1.0).unwrap();
    for (x, y) in a.components.iter().zip(&b.components) {
        assert!((x.residual - y.residual).abs() < 1e-12);
    }
}

// lattice gauge covariance is only approximate; the gap must close with h
#[test]
fn pipi_residual_is_gauge_covariant() {
    let gap = |n: usize, h: f64| {
        let g = Grid::centered(&[n, n, n], h).unwrap();
        let lan = unit_b(Gauge::Landau);
        let chi = Polynomial::monomial(Rational::new(1, 2), [1, 1, 0]);
        let sym = gauge_transform(&lan, &chi);
        let psi = gaussian_packet(&g, &PacketSpec::centered(0.75)).unwrap();
        let psi2 = psi.multiply_pointwise(|r| Complex64::from_polar(1.0, r[0] * r[1] / 2.0));
        let a = verify_pipi_commutation(&lan, &psi, 1.0).unwrap();
        let b = verify_pipi_commutation(&sym, &psi2, 1.0).unwrap();
        relative_gap(a.residual, b.residual)
    };
    let (coarse, fine) = (gap(24, 0.25), gap(48, 0.125));
    assert!(fine < 0.6 * coarse, "{coarse} {fine}");
}

#[test]
fn static_torque_identity_in_trivial_fields() {
    let g = Grid::centered(&[24, 24, 24], 0.25).unwrap();
    let psi = gaussian_packet(&g, &PacketSpec::centered(0.75).moving([0.4, 0.0, 0.2])).unwrap();
    let central = make_coulomb_quadratic(Rational::new(1, 2));
    let rep = verify_central_torque(&central, &psi, 1e-10).unwrap();
    assert!(rep.pass);
    for cfg in [make_zero_field(), central] {
        let r = verify_angular_ehrenfest_static(&cfg, &psi, 1.0).unwrap();
        assert!(r.residual.is_finite());
    }
}

#[test]
fn constant_gauge_function_shifts_nothing() {
    let g = Grid::centered(&[24, 24, 24], 0.25).unwrap();
    let psi = gaussian_packet(&g, &PacketSpec::centered(0.75).with_vortex(1)).unwrap();
    let rep = verify_gauge_expectations(
        &unit_b(Gauge::Landau),
        &Polynomial::constant(Rational::new(7, 3)),
        &psi,
        1e-12,
        0.05,
    )
    .unwrap();
    assert!(rep.measured_l_shift.iter().all(|v| v.abs() < 1e-12));
    assert!(rep.kinetic.residual < 1e-12);
    let chi = Polynomial::monomial(Rational::new(1, 2), [1, 1, 0]);
    let centered = gaussian_packet(&g, &PacketSpec::centered(0.75)).unwrap();
    let rep = verify_gauge_expectations(&unit_b(Gauge::Landau), &chi, &centered, 1e-2, 0.05).unwrap();
    assert!(rep.predicted_l_shift[2].abs() < 1e-12 && rep.measured_l_shift[2].abs() < 1e-2);
}
