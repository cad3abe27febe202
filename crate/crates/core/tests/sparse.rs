use kinam::sparse::CsrMatrix;
use kinam::Complex64;
use proptest::prelude::*;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn dense_mul(a: &[Complex64], b: &[Complex64], n: usize) -> Vec<Complex64> {
    let mut out = vec![ZERO; n * n];
    for i in 0..n {
        for k in 0..n {
            for j in 0..n {
                out[i * n + j] += a[i * n + k] * b[k * n + j];
            }
        }
    }
    out
}

fn sample(n: usize, seed: u64) -> CsrMatrix {
    // deterministic banded pattern with a few gaps
    CsrMatrix::from_row_fn(n, n, |i, row| {
        for j in i.saturating_sub(2)..(i + 3).min(n) {
            let h = (i * 31 + j * 17 + seed as usize) % 7;
            if h != 0 {
                row.push((j, c(h as f64 - 3.0, (i as f64 - j as f64) * 0.5)));
            }
        }
    })
}

#[test]
fn duplicates_merge_and_zeros_drop() {
    let m = CsrMatrix::from_row_fn(2, 2, |i, row| {
        row.push((0, c(1.0, 0.0)));
        row.push((0, c(2.0, 0.0)));
        if i == 1 {
            row.push((1, c(1.0, 0.0)));
            row.push((1, c(-1.0, 0.0)));
        }
    });
    assert_eq!(m.get(0, 0), c(3.0, 0.0));
    assert_eq!(m.nnz(), 2);
}

#[test]
fn matmul_matches_dense() {
    let n = 9;
    let a = sample(n, 1);
    let b = sample(n, 5);
    let p = a.matmul(&b).unwrap().to_dense();
    let d = dense_mul(&a.to_dense(), &b.to_dense(), n);
    for (x, y) in p.iter().zip(&d) {
        assert!((x - y).norm() < 1e-13);
    }
}

#[test]
fn adjoint_is_involution() {
    let a = sample(11, 3);
    assert_eq!(a.adjoint().adjoint(), a);
    assert_eq!(a.adjoint().get(4, 3), a.get(3, 4).conj());
}

#[test]
fn dimension_errors() {
    let a = CsrMatrix::identity(3);
    assert!(a.matvec(&[ZERO; 2]).is_err());
    assert!(a.add(&CsrMatrix::identity(4)).is_err());
    assert!(a.scale_rows(&[ZERO; 4]).is_err());
}

#[test]
fn gershgorin_brackets_identity() {
    let a = CsrMatrix::identity(5).scale(c(2.0, 0.0));
    assert_eq!(a.gershgorin_lower_bound(), 2.0);
    assert_eq!(a.gershgorin_upper_bound(), 2.0);
}

proptest! {
    #[test]
    fn matvec_is_linear(
        xs in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 10),
        ys in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 10),
        alpha in -2.0f64..2.0,
    ) {
        let a = sample(10, 7);
        let x: Vec<Complex64> = xs.iter().map(|&(r, i)| c(r, i)).collect();
        let y: Vec<Complex64> = ys.iter().map(|&(r, i)| c(r, i)).collect();
        let combo: Vec<Complex64> = x.iter().zip(&y).map(|(a, b)| a * alpha + b).collect();
        let lhs = a.matvec(&combo).unwrap();
        let ax = a.matvec(&x).unwrap();
        let ay = a.matvec(&y).unwrap();
        for k in 0..10 {
            prop_assert!((lhs[k] - (ax[k] * alpha + ay[k])).norm() < 1e-12);
        }
    }
}
