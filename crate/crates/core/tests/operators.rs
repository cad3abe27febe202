use kinam::fields::{make_uniform_b, make_zero_field, FieldConfig, Gauge, PolyVec, Polynomial};
use kinam::operators::{
    boundary_closure, build_derivative, build_force, build_hamiltonian, build_kinetic_l, build_kinetic_l_from_pi,
    build_l, build_magnetic_force, build_pi, build_position, build_torque, commutator_apply, expectation, ForceForm,
};
use kinam::sparse::CsrMatrix;
use kinam::{gaussian_packet, Complex64, Grid, Index3, PacketSpec, Rational, Vec3, WaveFunction};
use proptest::prelude::*;

fn unit_b(gauge: Gauge) -> FieldConfig {
    make_uniform_b(&Vec3::from_ints([0, 0, 1]), gauge).unwrap()
}

fn nonuniform() -> FieldConfig {
    // A = (0, x², 0): Hmag = (0, 0, 2x)
    let a = PolyVec::new([
        Polynomial::zero(),
        Polynomial::monomial(Rational::from_integer(1), [2, 0, 0]),
        Polynomial::zero(),
    ]);
    FieldConfig::new(a, Polynomial::zero())
}

#[test]
fn derivative_matches_hand_stencil() {
    let g = Grid::centered(&[9, 8], 0.3).unwrap();
    let psi = WaveFunction::random(g, 3);
    let d = build_derivative(&g, Index3::X).apply(&psi).unwrap();
    let a = psi.amplitudes();
    for p in 0..g.len() {
        let [i, j, _] = g.multi_index(p);
        let at = |ii: isize| -> Complex64 {
            if !(0..9).contains(&ii) {
                Complex64::new(0.0, 0.0)
            } else {
                a[g.flat_index([ii as usize, j, 0])]
            }
        };
        let want = (at(i as isize + 1) - at(i as isize - 1)) / 0.6;
        assert!((d.amplitudes()[p] - want).norm() < 1e-13);
    }
    let dz = build_derivative(&g, Index3::Z).apply(&psi).unwrap();
    assert!(dz.norm() == 0.0);
}

// [x, D]ψ = −(ψ₊ + ψ₋)/2, the neighbour average with zero ghosts
#[test]
fn position_derivative_commutator_is_average() {
    let g = Grid::centered(&[12], 0.2).unwrap();
    let psi = WaveFunction::random(g, 5);
    let x = build_position(&g, Index3::X);
    let d = build_derivative(&g, Index3::X);
    let c = commutator_apply(&x, &d, &psi).unwrap();
    let a = psi.amplitudes();
    for i in 0..12 {
        let l = if i > 0 { a[i - 1] } else { Complex64::new(0.0, 0.0) };
        let r = if i + 1 < 12 { a[i + 1] } else { Complex64::new(0.0, 0.0) };
        assert!((c.amplitudes()[i] + (l + r) * 0.5).norm() < 1e-12);
    }
}

#[test]
fn landau_pi_x_diagonal_is_y() {
    let g = Grid::centered(&[8, 10], 0.5).unwrap();
    let cfg = unit_b(Gauge::Landau);
    let pi = build_pi(&g, &cfg, Index3::X);
    for (p, v) in pi.matrix().diagonal_values().iter().enumerate() {
        let y = g.coordinate(p)[1];
        assert!((v.re - y).abs() < 1e-14 && v.im == 0.0);
    }
}

#[test]
fn zero_field_hamiltonian_is_composed_laplacian() {
    let g = Grid::centered(&[10, 9, 8], 0.25).unwrap();
    let cfg = make_zero_field();
    let h = build_hamiltonian(&g, &cfg);
    let mut lap = CsrMatrix::zeros(g.len(), g.len());
    for a in Index3::ALL {
        let d = build_derivative(&g, a);
        lap = lap.add(&d.matrix().matmul(d.matrix()).unwrap()).unwrap();
    }
    let want = lap
        .scale(Complex64::new(-0.5, 0.0))
        .add(&boundary_closure(&g, &cfg).matrix().scale(Complex64::new(0.5, 0.0)))
        .unwrap();
    assert!(h.matrix().max_abs_diff(&want).unwrap() < 1e-12);
}

#[test]
fn hermitian_operators() {
    let g = Grid::centered(&[10, 10, 10], 0.3).unwrap();
    for cfg in [unit_b(Gauge::Symmetric), unit_b(Gauge::Landau), nonuniform()] {
        for i in Index3::ALL {
            for op in [
                build_pi(&g, &cfg, i),
                build_l(&g, &cfg, i),
                build_kinetic_l(&g, &cfg, i),
            ] {
                assert!(op.is_hermitian());
                assert!(op.passes_hermiticity(7, 1e-12), "{}", op.label());
            }
        }
        let h = build_hamiltonian(&g, &cfg);
        assert!(h.passes_hermiticity(1, 1e-12));
    }
}

#[test]
fn expanded_force_flag_follows_uniformity() {
    let g = Grid::centered(&[8, 8, 8], 0.3).unwrap();
    let u = build_magnetic_force(&g, &unit_b(Gauge::Symmetric), Index3::X, ForceForm::Expanded);
    assert!(u.is_hermitian() && u.passes_hermiticity(2, 1e-12));
    let n = build_magnetic_force(&g, &nonuniform(), Index3::X, ForceForm::Expanded);
    assert!(!n.is_hermitian());
    assert!(build_torque(&g, &unit_b(Gauge::Symmetric), Index3::Z).is_hermitian());
}

#[test]
fn kinetic_l_routes_agree() {
    let g = Grid::centered(&[9, 9, 9], 0.3).unwrap();
    let cfg = unit_b(Gauge::Symmetric);
    for i in Index3::ALL {
        let a = build_kinetic_l(&g, &cfg, i);
        let b = build_kinetic_l_from_pi(&g, &cfg, i);
        assert!(a.matrix().max_abs_diff(b.matrix()).unwrap() < 1e-12);
    }
}

#[test]
fn electric_force_of_linear_potential() {
    // V = 2x: qE = (−2, 0, 0) everywhere
    let cfg = FieldConfig::new(
        PolyVec::zero(),
        Polynomial::monomial(Rational::from_integer(2), [1, 0, 0]),
    );
    let g = Grid::centered(&[32, 32], 0.2).unwrap();
    let psi = gaussian_packet(&g, &PacketSpec::centered(0.6)).unwrap();
    let fx = expectation(&build_force(&g, &cfg, Index3::X), &psi).unwrap();
    assert!((fx.re + 2.0).abs() < 1e-12 && fx.im.abs() < 1e-12);
}

#[test]
fn expectation_rejects_unnormalized() {
    let g = Grid::centered(&[8], 0.5).unwrap();
    let psi = WaveFunction::random(g, 0).scaled(Complex64::new(2.0, 0.0));
    assert!(expectation(&build_position(&g, Index3::X), &psi).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    // conj(⟨φ|Aψ⟩) = ⟨ψ|Aφ⟩ for the kinetic momenta in arbitrary fields
    #[test]
    fn pi_symmetric_inner_products(seed_a in any::<u64>(), seed_b in any::<u64>(), axis in 1i64..=3) {
        let g = Grid::centered(&[8, 8, 8], 0.4).unwrap();
        let cfg = nonuniform();
        let pi = build_pi(&g, &cfg, Index3::new(axis).unwrap());
        let a = WaveFunction::random(g, seed_a);
        let b = WaveFunction::random(g, seed_b);
        let l = a.inner(&pi.apply(&b).unwrap()).unwrap();
        let r = b.inner(&pi.apply(&a).unwrap()).unwrap().conj();
        prop_assert!((l - r).norm() < 1e-12 * (1.0 + l.norm()));
    }

    #[test]
    fn csr_matvec_matches_dense(entries in prop::collection::vec((0usize..6, 0usize..6, -3.0f64..3.0, -3.0f64..3.0), 0..30),
                                x in prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 6)) {
        let m = CsrMatrix::from_row_fn(6, 6, |i, row| {
            for &(r, c, re, im) in &entries {
                if r == i {
                    row.push((c, Complex64::new(re, im)));
                }
            }
        });
        let x: Vec<Complex64> = x.into_iter().map(|(a, b)| Complex64::new(a, b)).collect();
        let y = m.matvec(&x).unwrap();
        for i in 0..6 {
            let mut want = Complex64::new(0.0, 0.0);
            for &(r, c, re, im) in &entries {
                if r == i {
                    want += Complex64::new(re, im) * x[c];
                }
            }
            prop_assert!((y[i] - want).norm() < 1e-12);
        }
    }
}
