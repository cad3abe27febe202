//! Exhaustive checks of the Levi-Civita / Kronecker contractions behind the
//! kinetic angular-momentum commutator.
//!
//! Everything here is exact: indices are enumerated over `1..=3` and all
//! arithmetic is on [`Rational`]s, so a reported failure is a genuine
//! counterexample rather than round-off.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::exact::{Index3, Rational, Vec3};

/// Signature of the permutation `(i, j, k)`; zero when any index repeats.
pub fn levi_civita(i: Index3, j: Index3, k: Index3) -> i64 {
    eps(i.slot(), j.slot(), k.slot())
}

/// Kronecker delta on 1-based indices.
pub fn kronecker(i: Index3, j: Index3) -> i64 {
    delta(i.slot(), j.slot())
}

// zero-based helpers shared with the grid operator builders
pub(crate) fn eps(i: usize, j: usize, k: usize) -> i64 {
    if i == j || j == k || i == k {
        return 0;
    }
    // (i, j, k) is a cyclic rotation of (0, 1, 2) iff j == i + 1 mod 3
    if (i + 1) % 3 == j {
        1
    } else {
        -1
    }
}

pub(crate) fn delta(i: usize, j: usize) -> i64 {
    (i == j) as i64
}

fn q(n: i64) -> Rational {
    Rational::from_integer(n as i128)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityFailure {
    /// 1-based index tuple, in the order documented by the identity.
    pub indices: Vec<u8>,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub identity: String,
    pub cases_checked: usize,
    pub failures: Vec<IdentityFailure>,
}

impl IdentityReport {
    pub fn new(identity: &str) -> Self {
        IdentityReport {
            identity: identity.to_string(),
            cases_checked: 0,
            failures: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn check(&mut self, indices: &[usize], lhs: Rational, rhs: Rational) {
        if lhs != rhs {
            self.failures.push(IdentityFailure {
                indices: indices.iter().map(|&s| s as u8 + 1).collect(),
                lhs: lhs.to_string(),
                rhs: rhs.to_string(),
            });
        }
    }

    /// Folds another report's cases and failures into this one.
    pub fn absorb(&mut self, other: IdentityReport) {
        self.cases_checked += other.cases_checked;
        self.failures.extend(other.failures);
    }
}

/// The three expressions of the delta contraction for one tuple `(i, j, a, d)`:
/// `Σ_bc (ε_iab ε_jcd − ε_jab ε_icd) δ_bc`, `δ_id δ_ja − δ_ia δ_jd` and
/// `−Σ_k ε_ijk ε_kad`.
pub fn delta_contraction_terms(i: usize, j: usize, a: usize, d: usize) -> [i64; 3] {
    let mut lhs = 0;
    for b in 0..3 {
        for c in 0..3 {
            lhs += (eps(i, a, b) * eps(j, c, d) - eps(j, a, b) * eps(i, c, d)) * delta(b, c);
        }
    }
    let middle = delta(i, d) * delta(j, a) - delta(i, a) * delta(j, d);
    let rhs = -(0..3).map(|k| eps(i, j, k) * eps(k, a, d)).sum::<i64>();
    [lhs, middle, rhs]
}

/// Checks `(ε_iab ε_jcd − ε_jab ε_icd) δ_bc = δ_id δ_ja − δ_ia δ_jd = −ε_ijk ε_kad`
/// for all 81 tuples; each equality of the chain is tested on its own.
pub fn verify_delta_contraction() -> IdentityReport {
    let mut report = IdentityReport::new("delta-contraction");
    for i in 0..3 {
        for j in 0..3 {
            for a in 0..3 {
                for d in 0..3 {
                    let [lhs, middle, rhs] = delta_contraction_terms(i, j, a, d);
                    report.cases_checked += 1;
                    report.check(&[i, j, a, d], q(lhs), q(middle));
                    report.check(&[i, j, a, d], q(middle), q(rhs));
                }
            }
        }
    }
    report
}

/// Coefficient tensor of one of the four triple-ε contractions
/// `ε_bde ε_·· ε_··` indexed by `[a][b][c][d]` for fixed `(i, j)`.
///
/// The four variants, in order, are `ε_iab ε_jcd`, `ε_icb ε_jad`,
/// `ε_jab ε_icd` and `ε_jcb ε_iad`.
fn pair_coefficient(variant: usize, i: usize, j: usize, a: usize, b: usize, c: usize, d: usize) -> i64 {
    match variant {
        0 => eps(i, a, b) * eps(j, c, d),
        1 => eps(i, c, b) * eps(j, a, d),
        2 => eps(j, a, b) * eps(i, c, d),
        3 => eps(j, c, b) * eps(i, a, d),
        _ => unreachable!(),
    }
}

/// `Σ_{abcde} ε_bde P^{variant}_{abcd} x_a x_c H_e`.
pub fn quadruple_sum(variant: usize, i: usize, j: usize, x: &Vec3, h: &Vec3) -> Rational {
    let mut total = Rational::zero();
    for a in 0..3 {
        for b in 0..3 {
            for c in 0..3 {
                for d in 0..3 {
                    let p = pair_coefficient(variant, i, j, a, b, c, d);
                    if p == 0 {
                        continue;
                    }
                    for e in 0..3 {
                        let s = eps(b, d, e) * p;
                        if s != 0 {
                            total += q(s) * x.0[a] * x.0[c] * h.0[e];
                        }
                    }
                }
            }
        }
    }
    total
}

/// `(x·H) ε_ijk x_k`.
fn cross_term(i: usize, j: usize, x: &Vec3, h: &Vec3) -> Rational {
    let xh = x.dot(h);
    (0..3).map(|k| q(eps(i, j, k)) * xh * x.0[k]).sum()
}

/// Checks the four triple-ε contractions against `±(x·H) ε_ijk x_k`
/// (signs `+ + − −`) for all nine `(i, j)`, then checks their combination
/// `¼(Q₁ + Q₂ − Q₃ − Q₄) = (x·H) ε_ijk x_k`.
pub fn verify_quadruple_contractions(x: &Vec3, hmag: &Vec3) -> IdentityReport {
    const SIGNS: [i64; 4] = [1, 1, -1, -1];
    let mut report = IdentityReport::new("quadruple-contractions");
    for i in 0..3 {
        for j in 0..3 {
            let expected = cross_term(i, j, x, hmag);
            let mut combined = Rational::zero();
            for (variant, sign) in SIGNS.iter().enumerate() {
                let value = quadruple_sum(variant, i, j, x, hmag);
                report.cases_checked += 1;
                report.check(&[i, j, variant], value, q(*sign) * expected);
                combined += q(*sign) * value;
            }
            report.cases_checked += 1;
            report.check(&[i, j, 4], combined / q(4), expected);
        }
    }
    report
}

/// Curl of a constant gradient matrix: `H_e = ε_ebd ∂_b A_d`.
pub fn curl_of_gradient(grad_a: &[[Rational; 3]; 3]) -> Vec3 {
    let mut h = [Rational::zero(); 3];
    for (e, he) in h.iter_mut().enumerate() {
        for b in 0..3 {
            for d in 0..3 {
                let s = eps(e, b, d);
                if s != 0 {
                    *he += q(s) * grad_a[b][d];
                }
            }
        }
    }
    Vec3(h)
}

/// The successive forms of `Σ (ε_iab ε_jcd − ε_jab ε_icd) x_a x_c ∂_b A_d`:
///
/// 0. the raw contraction,
/// 1. symmetrized over `a ↔ c` (half the four-term combination),
/// 2. with `∂_b A_d` replaced by its antisymmetric part,
/// 3. rewritten through `H_e` with `∂_b A_d − ∂_d A_b = ε_bde H_e`,
/// 4. the closed form `(x·H) ε_ijk x_k`.
pub fn field_contraction_chain(i: usize, j: usize, x: &Vec3, g: &[[Rational; 3]; 3]) -> [Rational; 5] {
    const SIGNS: [i64; 4] = [1, 1, -1, -1];
    let h = curl_of_gradient(g);
    let mut raw = Rational::zero();
    let mut symmetrized = Rational::zero();
    let mut antisymmetrized = Rational::zero();
    let mut via_h = Rational::zero();
    for a in 0..3 {
        for c in 0..3 {
            let xx = x.0[a] * x.0[c];
            if xx.is_zero() {
                continue;
            }
            for b in 0..3 {
                for d in 0..3 {
                    let direct = eps(i, a, b) * eps(j, c, d) - eps(j, a, b) * eps(i, c, d);
                    if direct != 0 {
                        raw += q(direct) * xx * g[b][d];
                    }
                    let combo: i64 = (0..4).map(|v| SIGNS[v] * pair_coefficient(v, i, j, a, b, c, d)).sum();
                    if combo == 0 {
                        continue;
                    }
                    symmetrized += q(combo) * xx * g[b][d] / q(2);
                    antisymmetrized += q(combo) * xx * (g[b][d] - g[d][b]) / q(4);
                    for e in 0..3 {
                        let s = eps(b, d, e);
                        if s != 0 {
                            via_h += q(s * combo) * xx * h.0[e] / q(4);
                        }
                    }
                }
            }
        }
    }
    [raw, symmetrized, antisymmetrized, via_h, cross_term(i, j, x, &h)]
}

/// Verifies every step of the field-contraction chain for all nine `(i, j)`.
pub fn verify_field_contraction(x: &Vec3, grad_a: &[[Rational; 3]; 3]) -> IdentityReport {
    let mut report = IdentityReport::new("field-contraction");
    for i in 0..3 {
        for j in 0..3 {
            let chain = field_contraction_chain(i, j, x, grad_a);
            for step in 0..4 {
                report.cases_checked += 1;
                report.check(&[i, j, step], chain[step], chain[step + 1]);
            }
        }
    }
    report
}

/// Seeded random integer vector with components in `[-9, 9]`.
pub fn random_int_vec3(rng: &mut impl Rng) -> Vec3 {
    Vec3::from_ints([0; 3].map(|_| rng.gen_range(-9..=9)))
}

/// Seeded random rational 3×3 matrix with entries `p/q`, `|p| ≤ 9`, `1 ≤ q ≤ 9`.
pub fn random_rational_matrix(rng: &mut impl Rng) -> [[Rational; 3]; 3] {
    let mut m = [[Rational::zero(); 3]; 3];
    for row in m.iter_mut() {
        for v in row.iter_mut() {
            *v = Rational::new(rng.gen_range(-9..=9), rng.gen_range(1..=9));
        }
    }
    m
}

/// Full tensor suite: the delta contraction, then `samples` seeded random
/// inputs for each of the quadruple and field contractions, plus the
/// degenerate quadruple cases (zero, parallel, orthogonal).
pub fn run_tensor_suite(seed: u64, samples: usize) -> Vec<IdentityReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut quad = IdentityReport::new("quadruple-contractions");
    let mut field = IdentityReport::new("field-contraction");

    let degenerate = [
        ([0, 0, 0], [0, 0, 0]),
        ([1, -2, 3], [2, -4, 6]),
        ([1, 2, 0], [-2, 1, 0]),
        ([0, 0, 1], [0, 0, 5]),
    ];
    for (x, h) in degenerate {
        quad.absorb(verify_quadruple_contractions(&Vec3::from_ints(x), &Vec3::from_ints(h)));
    }
    for _ in 0..samples {
        let x = random_int_vec3(&mut rng);
        let h = random_int_vec3(&mut rng);
        quad.absorb(verify_quadruple_contractions(&x, &h));
    }
    for _ in 0..samples {
        let x = random_int_vec3(&mut rng);
        let g = random_rational_matrix(&mut rng);
        field.absorb(verify_field_contraction(&x, &g));
    }
    vec![verify_delta_contraction(), quad, field]
}
