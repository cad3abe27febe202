use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::poly::{CompiledPolynomial, Polynomial};
use crate::error::{Error, Result};
use crate::exact::{rational_to_f64, Rational, Vec3};
use crate::tensor::eps;

/// Three polynomial components.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PolyVec(pub [Polynomial; 3]);

impl PolyVec {
    pub fn new(components: [Polynomial; 3]) -> Self {
        PolyVec(components)
    }

    pub fn zero() -> Self {
        PolyVec::default()
    }

    pub fn component(&self, axis: usize) -> &Polynomial {
        &self.0[axis]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Polynomial::is_zero)
    }

    /// `(∇×F)_e = ε_ebd ∂_b F_d`.
    pub fn curl(&self) -> PolyVec {
        let mut out: [Polynomial; 3] = Default::default();
        for (e, slot) in out.iter_mut().enumerate() {
            for b in 0..3 {
                for d in 0..3 {
                    match eps(e, b, d) {
                        1 => *slot = &*slot + &self.0[d].derivative(b),
                        -1 => *slot = &*slot - &self.0[d].derivative(b),
                        _ => {}
                    }
                }
            }
        }
        PolyVec(out)
    }

    pub fn add(&self, other: &PolyVec) -> PolyVec {
        PolyVec([0, 1, 2].map(|a| &self.0[a] + &other.0[a]))
    }

    pub fn sub(&self, other: &PolyVec) -> PolyVec {
        PolyVec([0, 1, 2].map(|a| &self.0[a] - &other.0[a]))
    }

    pub fn scale(&self, s: Rational) -> PolyVec {
        PolyVec([0, 1, 2].map(|a| self.0[a].scale(s)))
    }

    pub fn eval(&self, r: &[Rational; 3]) -> [Rational; 3] {
        [0, 1, 2].map(|a| self.0[a].eval(r))
    }

    pub fn eval_f64(&self, r: [f64; 3]) -> [f64; 3] {
        [0, 1, 2].map(|a| self.0[a].eval_f64(r))
    }

    pub fn compile(&self) -> [CompiledPolynomial; 3] {
        [0, 1, 2].map(|a| self.0[a].compile())
    }

    /// True when every component is constant.
    pub fn is_constant(&self) -> bool {
        self.0.iter().all(|p| p.as_constant().is_some())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Gauge {
    Symmetric,
    Landau,
}

/// Static electromagnetic field with the physical constants of the particle.
///
/// The magnetic field `Hmag = ∇×A` and electric field `E = −∇V` are derived
/// once at construction; `∂A/∂t` is carried but always zero.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldConfig {
    a: PolyVec,
    v: Polynomial,
    charge: Rational,
    hbar: Rational,
    mass: Rational,
    light_speed: Rational,
    da_dt: PolyVec,
    hmag: PolyVec,
    efield: PolyVec,
}

impl FieldConfig {
    /// Field from potentials, with `q = ħ = m = c = 1`.
    pub fn new(a: PolyVec, v: Polynomial) -> Self {
        let hmag = a.curl();
        let efield = v.gradient().scale(-Rational::one());
        FieldConfig {
            a,
            v,
            charge: Rational::one(),
            hbar: Rational::one(),
            mass: Rational::one(),
            light_speed: Rational::one(),
            da_dt: PolyVec::zero(),
            hmag,
            efield,
        }
    }

    /// Replaces the physical constants; all except the charge must be positive.
    pub fn with_constants(
        mut self,
        charge: Rational,
        hbar: Rational,
        mass: Rational,
        light_speed: Rational,
    ) -> Result<Self> {
        for (name, v) in [("hbar", hbar), ("m", mass), ("c", light_speed)] {
            if v <= Rational::zero() {
                return Err(Error::InvalidField(format!("{name} must be positive, got {v}")));
            }
        }
        self.charge = charge;
        self.hbar = hbar;
        self.mass = mass;
        self.light_speed = light_speed;
        Ok(self)
    }

    pub fn with_charge(self, charge: Rational) -> Self {
        let (h, m, c) = (self.hbar, self.mass, self.light_speed);
        self.with_constants(charge, h, m, c)
            .expect("constants already validated")
    }

    pub fn vector_potential(&self) -> &PolyVec {
        &self.a
    }

    pub fn scalar_potential(&self) -> &Polynomial {
        &self.v
    }

    pub fn hmag(&self) -> &PolyVec {
        &self.hmag
    }

    pub fn efield(&self) -> &PolyVec {
        &self.efield
    }

    pub fn da_dt(&self) -> &PolyVec {
        &self.da_dt
    }

    pub fn is_static(&self) -> bool {
        self.da_dt.is_zero()
    }

    pub fn charge(&self) -> Rational {
        self.charge
    }

    pub fn hbar(&self) -> Rational {
        self.hbar
    }

    pub fn mass(&self) -> Rational {
        self.mass
    }

    pub fn light_speed(&self) -> Rational {
        self.light_speed
    }

    pub fn hbar_f64(&self) -> f64 {
        rational_to_f64(self.hbar)
    }

    pub fn mass_f64(&self) -> f64 {
        rational_to_f64(self.mass)
    }

    pub fn charge_f64(&self) -> f64 {
        rational_to_f64(self.charge)
    }

    /// `q/c`.
    pub fn coupling(&self) -> Rational {
        self.charge / self.light_speed
    }

    pub fn coupling_f64(&self) -> f64 {
        rational_to_f64(self.coupling())
    }

    /// True when `Hmag` is spatially constant.
    pub fn has_uniform_hmag(&self) -> bool {
        self.hmag.is_constant()
    }

    /// `(∇×Hmag)_k = ε_kmn ∂_m H_n`, which enters the expanded magnetic force.
    pub fn curl_hmag(&self) -> PolyVec {
        self.hmag.curl()
    }

    /// `∂_i A_j − ∂_j A_i` as a polynomial.
    pub fn field_strength(&self, i: usize, j: usize) -> Polynomial {
        &self.a.0[j].derivative(i) - &self.a.0[i].derivative(j)
    }
}

/// `A = 0`, `V = 0`.
pub fn make_zero_field() -> FieldConfig {
    FieldConfig::new(PolyVec::zero(), Polynomial::zero())
}

/// Uniform magnetic field `B` in the symmetric gauge `A = ½ B×r` or the
/// Landau gauge `A = (−B_z y, 0, 0)`; the latter requires `B ∥ ẑ`.
pub fn make_uniform_b(b: &Vec3, gauge: Gauge) -> Result<FieldConfig> {
    let coord = Polynomial::coordinate;
    let a = match gauge {
        Gauge::Symmetric => {
            let half = Rational::new(1, 2);
            // (B×r)_i = ε_ijk B_j x_k
            let mut comps: [Polynomial; 3] = Default::default();
            for (i, slot) in comps.iter_mut().enumerate() {
                for j in 0..3 {
                    for k in 0..3 {
                        let s = eps(i, j, k);
                        if s != 0 {
                            let c = b.0[j] * half * Rational::from_integer(s as i128);
                            *slot = &*slot + &coord(k).scale(c);
                        }
                    }
                }
            }
            PolyVec(comps)
        }
        Gauge::Landau => {
            if !b.0[0].is_zero() || !b.0[1].is_zero() {
                return Err(Error::InvalidField(format!(
                    "Landau gauge A = (-B_z y, 0, 0) needs B along z; got B = ({}, {}, {})",
                    b.0[0], b.0[1], b.0[2]
                )));
            }
            PolyVec([coord(1).scale(-b.0[2]), Polynomial::zero(), Polynomial::zero()])
        }
    };
    Ok(FieldConfig::new(a, Polynomial::zero()))
}

/// `A = 0`, `V = k (x² + y² + z²)`.
pub fn make_coulomb_quadratic(k: Rational) -> FieldConfig {
    let r2 = Polynomial::from_terms([
        (Rational::one(), [2, 0, 0]),
        (Rational::one(), [0, 2, 0]),
        (Rational::one(), [0, 0, 2]),
    ]);
    FieldConfig::new(PolyVec::zero(), r2.scale(k))
}

/// Static gauge transformation `A → A + ∇χ`; `V` and the constants are kept.
pub fn gauge_transform(cfg: &FieldConfig, chi: &Polynomial) -> FieldConfig {
    let a = cfg.a.add(&chi.gradient());
    let mut out = FieldConfig::new(a, cfg.v.clone());
    out.charge = cfg.charge;
    out.hbar = cfg.hbar;
    out.mass = cfg.mass;
    out.light_speed = cfg.light_speed;
    out
}
