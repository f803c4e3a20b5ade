//! Complex amplitudes `ψ·e^{jθ}`.
//!
//! Storage is rectangular. Note the naming: [`QuantumAmplitude::modulus`] is
//! the squared magnitude `ψ² = re² + im²`, which is the belief a proposition
//! carries, while [`QuantumAmplitude::psi`] is the Euclidean magnitude `ψ`.

use std::f64::consts::FRAC_PI_4;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "RectForm", into = "RectForm")]
pub struct QuantumAmplitude(Complex64);

impl QuantumAmplitude {
    pub const ZERO: QuantumAmplitude = QuantumAmplitude(Complex64::new(0.0, 0.0));
    pub const ONE: QuantumAmplitude = QuantumAmplitude(Complex64::new(1.0, 0.0));

    pub const fn new(re: f64, im: f64) -> Self {
        QuantumAmplitude(Complex64::new(re, im))
    }

    pub fn try_new(re: f64, im: f64) -> Result<Self> {
        if !re.is_finite() || !im.is_finite() {
            return Err(Error::InvalidAmplitude(format!(
                "non-finite component ({re}, {im})"
            )));
        }
        Ok(Self::new(re, im))
    }

    pub fn from_polar(psi: f64, theta: f64) -> Result<Self> {
        if !psi.is_finite() || !theta.is_finite() {
            return Err(Error::InvalidAmplitude(format!(
                "non-finite polar form ({psi}, {theta})"
            )));
        }
        if psi < 0.0 {
            return Err(Error::InvalidAmplitude(format!("negative psi {psi}")));
        }
        Ok(QuantumAmplitude(Complex64::from_polar(psi, theta)))
    }

    /// Lifts a real mass `m ∈ [0, 1]` by splitting it evenly between the real
    /// and imaginary parts: `ψ = √m`, `θ = π/4`.
    pub fn embed_real(mass: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&mass) {
            return Err(Error::MassOutOfRange(mass));
        }
        let half = (mass / 2.0).sqrt();
        Ok(Self::new(half, half))
    }

    pub fn re(self) -> f64 {
        self.0.re
    }

    pub fn im(self) -> f64 {
        self.0.im
    }

    /// Euclidean magnitude ψ.
    pub fn psi(self) -> f64 {
        self.0.norm()
    }

    /// Phase θ in (−π, π].
    pub fn theta(self) -> f64 {
        self.0.arg()
    }

    /// Squared magnitude ψ², the belief carried by this amplitude.
    pub fn modulus(self) -> f64 {
        self.0.norm_sqr()
    }

    pub fn scale_real(self, c: f64) -> Self {
        QuantumAmplitude(self.0 * c)
    }

    pub fn is_zero(self) -> bool {
        self.0.re == 0.0 && self.0.im == 0.0
    }

    pub fn is_finite(self) -> bool {
        self.0.re.is_finite() && self.0.im.is_finite()
    }

    pub fn as_complex(self) -> Complex64 {
        self.0
    }

    /// Componentwise closeness, for tests and golden comparisons.
    pub fn abs_diff(self, other: Self) -> f64 {
        (self.0.re - other.0.re).abs().max((self.0.im - other.0.im).abs())
    }
}

/// θ = π/4, the phase of every embedded real mass.
pub const EMBED_PHASE: f64 = FRAC_PI_4;

impl From<Complex64> for QuantumAmplitude {
    fn from(c: Complex64) -> Self {
        QuantumAmplitude(c)
    }
}

impl Add for QuantumAmplitude {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        QuantumAmplitude(self.0 + rhs.0)
    }
}

impl AddAssign for QuantumAmplitude {
    fn add_assign(&mut self, rhs: Self) {
        self.0 += rhs.0;
    }
}

impl Sub for QuantumAmplitude {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        QuantumAmplitude(self.0 - rhs.0)
    }
}

impl Mul for QuantumAmplitude {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        QuantumAmplitude(self.0 * rhs.0)
    }
}

impl Neg for QuantumAmplitude {
    type Output = Self;
    fn neg(self) -> Self {
        QuantumAmplitude(-self.0)
    }
}

impl std::iter::Sum for QuantumAmplitude {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::ZERO, Add::add)
    }
}

impl fmt::Debug for QuantumAmplitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:+}j", self.0.re, self.0.im)
    }
}

/// Prints `ψe^{θj}`; precision applies to both ψ and θ.
impl fmt::Display for QuantumAmplitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prec = f.precision().unwrap_or(4);
        write!(f, "{:.prec$}e^{{{:.prec$}j}}", self.psi(), self.theta())
    }
}

#[derive(Serialize, Deserialize)]
struct RectForm {
    re: f64,
    im: f64,
}

impl From<RectForm> for QuantumAmplitude {
    fn from(r: RectForm) -> Self {
        Self::new(r.re, r.im)
    }
}

impl From<QuantumAmplitude> for RectForm {
    fn from(a: QuantumAmplitude) -> Self {
        RectForm {
            re: a.re(),
            im: a.im(),
        }
    }
}
