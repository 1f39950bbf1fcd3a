//! Spectral representation of real periodic fields/distributions on the
//! torus T = R/Z.
//!
//! Fourier convention: `u_hat(k) = \int_T u(x) e^{-2 pi i k x} dx`, so that
//! `u(x) = sum_k u_hat(k) e^{2 pi i k x}` and the derivative acts modewise as
//! multiplication by `2 pi i k`. A real field has Hermitian-symmetric
//! coefficients, `u_hat(-k) = conj(u_hat(k))`; we exploit this and store only
//! the modes `k = 0..=K`, which makes the symmetry an invariant that cannot
//! be broken by construction.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};

pub const TAU: f64 = std::f64::consts::TAU;

/// A real periodic field (or distribution) with modes `|k| <= cutoff`.
///
/// Serializes to a list of `(k, Re, Im)` triples for `k = 0..=cutoff` plus
/// the cutoff and the mean-zero flag; negative modes are implied by
/// Hermitian symmetry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FieldRepr", into = "FieldRepr")]
pub struct SpectralField {
    cutoff: usize,
    mean_zero: bool,
    /// Coefficients for k = 0..=cutoff. `coeffs[0]` is real; zero if `mean_zero`.
    coeffs: Vec<Complex64>,
}

/// Test functions live in the same band and satisfy the same invariants.
pub type TestFunction = SpectralField;

#[derive(Serialize, Deserialize)]
struct FieldRepr {
    cutoff: usize,
    mean_zero: bool,
    coeffs: Vec<(usize, f64, f64)>,
}

impl From<SpectralField> for FieldRepr {
    fn from(f: SpectralField) -> Self {
        FieldRepr {
            cutoff: f.cutoff,
            mean_zero: f.mean_zero,
            coeffs: f
                .coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| (k, c.re, c.im))
                .collect(),
        }
    }
}

impl TryFrom<FieldRepr> for SpectralField {
    type Error = LabError;

    fn try_from(r: FieldRepr) -> Result<Self> {
        let mut f = SpectralField::zero(r.cutoff, r.mean_zero);
        if r.coeffs.len() != r.cutoff + 1 {
            return Err(LabError::Parameter(format!(
                "expected {} coefficients, got {}",
                r.cutoff + 1,
                r.coeffs.len()
            )));
        }
        for (k, re, im) in r.coeffs {
            if k > r.cutoff {
                return Err(LabError::Parameter(format!("mode {k} beyond cutoff")));
            }
            f.set_coeff(k, Complex64::new(re, im));
        }
        Ok(f)
    }
}

impl SpectralField {
    pub fn zero(cutoff: usize, mean_zero: bool) -> Self {
        SpectralField {
            cutoff,
            mean_zero,
            coeffs: vec![Complex64::ZERO; cutoff + 1],
        }
    }

    /// Build from the nonnegative modes; negative modes follow by symmetry.
    pub fn from_modes(cutoff: usize, mean_zero: bool, modes: &[(usize, Complex64)]) -> Self {
        let mut f = Self::zero(cutoff, mean_zero);
        for &(k, c) in modes {
            f.set_coeff(k, c);
        }
        f
    }

    /// The constant field `c`.
    pub fn constant(cutoff: usize, c: f64) -> Self {
        let mut f = Self::zero(cutoff, false);
        f.coeffs[0] = Complex64::new(c, 0.0);
        f
    }

    /// `sin(2 pi k x)`: modes `+-k` with coefficients `-+ i/2`.
    pub fn sine(cutoff: usize, k: usize) -> Self {
        Self::from_modes(cutoff, true, &[(k, Complex64::new(0.0, -0.5))])
    }

    /// `cos(2 pi k x)`: modes `+-k` with coefficients `1/2`.
    pub fn cosine(cutoff: usize, k: usize) -> Self {
        Self::from_modes(cutoff, true, &[(k, Complex64::new(0.5, 0.0))])
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn is_mean_zero(&self) -> bool {
        self.mean_zero
    }

    /// The spatial mean, i.e. the zero mode.
    pub fn mean(&self) -> f64 {
        self.coeffs[0].re
    }

    /// Coefficient for any signed mode; `conj` for negative k, zero beyond the band.
    pub fn coeff(&self, k: i64) -> Complex64 {
        let a = k.unsigned_abs() as usize;
        if a > self.cutoff {
            Complex64::ZERO
        } else if k >= 0 {
            self.coeffs[a]
        } else {
            self.coeffs[a].conj()
        }
    }

    /// Set mode `k >= 0`. Mode 0 keeps only the real part, and is pinned to
    /// zero when the field is flagged mean-zero.
    pub fn set_coeff(&mut self, k: usize, v: Complex64) {
        assert!(k <= self.cutoff, "mode {k} beyond cutoff {}", self.cutoff);
        if k == 0 {
            self.coeffs[0] = if self.mean_zero {
                Complex64::ZERO
            } else {
                Complex64::new(v.re, 0.0)
            };
        } else {
            self.coeffs[k] = v;
        }
    }

    /// Nonnegative-mode coefficients, `k = 0..=cutoff`.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// `||u||_{L^2}^2 = sum_k |u_hat(k)|^2` over the full signed band.
    pub fn l2_norm_sq(&self) -> f64 {
        let mut s = self.coeffs[0].re * self.coeffs[0].re;
        for c in &self.coeffs[1..] {
            s += 2.0 * c.norm_sqr();
        }
        s
    }

    /// Point evaluation by direct mode summation.
    pub fn eval(&self, x: f64) -> f64 {
        // u(x) = u_hat(0) + 2 sum_{k>=1} Re(u_hat(k) e^{2 pi i k x})
        let rot = Complex64::from_polar(1.0, TAU * x);
        let mut phase = Complex64::ONE;
        let mut s = self.coeffs[0].re;
        for c in &self.coeffs[1..] {
            phase *= rot;
            s += 2.0 * (c * phase).re;
        }
        s
    }

    /// Sample spatial white noise restricted to the band `|k| <= cutoff`:
    /// the zero mode is standard normal (or zero), and for `k > 0`
    /// `u_hat(k) = (a + i b)/sqrt(2)` with independent standard normals, so
    /// `E|u_hat(k)|^2 = 1` and `E[u(phi) u(psi)] = <phi, psi>_{L^2}`.
    pub fn sample_white_noise<R: Rng>(cutoff: usize, rng: &mut R, mean_zero: bool) -> Result<Self> {
        if cutoff < 1 {
            return Err(LabError::Parameter("white noise needs cutoff >= 1".into()));
        }
        let mut f = Self::zero(cutoff, mean_zero);
        if !mean_zero {
            f.coeffs[0] = Complex64::new(rng.sample(StandardNormal), 0.0);
        }
        let half = std::f64::consts::FRAC_1_SQRT_2;
        for k in 1..=cutoff {
            let a: f64 = rng.sample(StandardNormal);
            let b: f64 = rng.sample(StandardNormal);
            f.coeffs[k] = Complex64::new(a * half, b * half);
        }
        Ok(f)
    }

    /// Modewise filter `u_hat(k) -> rho_hat(k/N) u_hat(k)`.
    pub fn mollify(&self, m: &Mollifier) -> Self {
        let mut out = self.clone();
        for (k, c) in out.coeffs.iter_mut().enumerate() {
            *c *= m.weight(k as f64);
        }
        out
    }

    /// Antiderivative kernel: mode `k != 0` maps to `u_hat(k)/(2 pi i k)`,
    /// mode 0 maps to 0, so that `d/dx (Theta * u) = u - mean(u)`.
    pub fn theta_convolve(&self) -> Self {
        let mut out = Self::zero(self.cutoff, self.mean_zero);
        for k in 1..=self.cutoff {
            // 1/(2 pi i k) = -i/(2 pi k)
            let mul = Complex64::new(0.0, -1.0 / (TAU * k as f64));
            out.coeffs[k] = self.coeffs[k] * mul;
        }
        out
    }

    /// Spectral derivative: mode `k` maps to `(2 pi i k) u_hat(k)`.
    pub fn derivative(&self) -> Self {
        let mut out = Self::zero(self.cutoff, self.mean_zero);
        for k in 1..=self.cutoff {
            out.coeffs[k] = self.coeffs[k] * Complex64::new(0.0, TAU * k as f64);
        }
        out
    }

    /// Plancherel pairing `u(phi) = sum_k u_hat(k) conj(phi_hat(k))`.
    ///
    /// Real by Hermitian symmetry; the imaginary parts cancel pairwise and
    /// are never formed.
    pub fn pair(&self, phi: &SpectralField) -> f64 {
        let n = self.cutoff.min(phi.cutoff);
        let mut s = self.coeffs[0].re * phi.coeffs[0].re;
        for k in 1..=n {
            let p = self.coeffs[k] * phi.coeffs[k].conj();
            s += 2.0 * p.re;
        }
        s
    }

    /// Coefficientwise sum; bands must match.
    pub fn add(&self, other: &SpectralField) -> Result<Self> {
        if self.cutoff != other.cutoff {
            return Err(LabError::Parameter("cutoff mismatch in add".into()));
        }
        let mut out = self.clone();
        out.mean_zero = self.mean_zero && other.mean_zero;
        for (a, b) in out.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &SpectralField) -> Result<Self> {
        self.add(&other.scale(-1.0))
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = self.clone();
        for c in out.coeffs.iter_mut() {
            *c *= s;
        }
        out
    }

    /// Largest coefficientwise distance to `other` over the shared band.
    pub fn max_coeff_distance(&self, other: &SpectralField) -> f64 {
        let n = self.cutoff.max(other.cutoff);
        (0..=n as i64)
            .map(|k| (self.coeff(k) - other.coeff(k)).norm())
            .fold(0.0, f64::max)
    }
}

/// Smoothing kernel given by its Fourier-transform profile `rho_hat` and a
/// scale `N`; the filter applied to mode `k` is `rho_hat(k/N)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Mollifier {
    pub shape: MollifierShape,
    /// Scale N (or L); larger means less smoothing.
    pub scale: f64,
}

/// Even, real, `C^inf` profile with `rho_hat == 1` on `[-plateau, plateau]`
/// and support `[-support, support]`. The transition uses the standard
/// smooth step built from `exp(-1/t)`, so all derivatives vanish at both
/// junctions and the corresponding spatial kernel has mass one
/// (`rho_hat(0) = 1`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MollifierShape {
    pub plateau: f64,
    pub support: f64,
}

impl MollifierShape {
    /// Default profile: identity on `|xi| <= 1/2`, vanishing beyond `|xi| = 1`.
    pub fn standard() -> Self {
        MollifierShape {
            plateau: 0.5,
            support: 1.0,
        }
    }

    /// A second, genuinely different profile for mollifier-independence tests.
    pub fn wide() -> Self {
        MollifierShape {
            plateau: 0.25,
            support: 1.25,
        }
    }

    /// Profile value `rho_hat(xi)`.
    pub fn eval(&self, xi: f64) -> f64 {
        let a = xi.abs();
        if a <= self.plateau {
            1.0
        } else if a >= self.support {
            0.0
        } else {
            smooth_step((a - self.plateau) / (self.support - self.plateau))
        }
    }

    /// `int rho_hat(xi)^2 dxi` by composite Simpson on `[-support, support]`.
    pub fn l2_profile_sq(&self) -> f64 {
        simpson(|xi| self.eval(xi).powi(2), -self.support, self.support, 1 << 13)
    }
}

/// Smooth partition-of-unity step: 1 at s=0, 0 at s=1, flat to all orders
/// at both ends.
fn smooth_step(s: f64) -> f64 {
    let f = |t: f64| if t > 0.0 { (-1.0 / t).exp() } else { 0.0 };
    let num = f(1.0 - s);
    num / (num + f(s))
}

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let n = if n % 2 == 0 { n } else { n + 1 };
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + i as f64 * h);
    }
    s * h / 3.0
}

impl Mollifier {
    pub fn new(shape: MollifierShape, scale: f64) -> Self {
        assert!(scale > 0.0, "mollifier scale must be positive");
        Mollifier { shape, scale }
    }

    pub fn standard(scale: f64) -> Self {
        Self::new(MollifierShape::standard(), scale)
    }

    /// Filter weight applied to mode `k`.
    pub fn weight(&self, k: f64) -> f64 {
        self.shape.eval(k / self.scale)
    }

    /// True when the filter is exactly the identity on `|k| <= cutoff`.
    pub fn is_identity_on(&self, cutoff: usize) -> bool {
        cutoff as f64 <= self.plateau_modes()
    }

    /// Largest |k| with weight exactly 1.
    pub fn plateau_modes(&self) -> f64 {
        self.shape.plateau * self.scale
    }

    /// Largest |k| with nonzero weight.
    pub fn support_modes(&self) -> f64 {
        self.shape.support * self.scale
    }
}

/// The two renormalization constants attached to a mollifier at scale N.
///
/// `torus` is the pointwise variance of band-limited mollified white noise,
/// `sum_{|k| <= K} rho_hat(k/N)^2`; `line` is the whole-line normalization
/// `N int rho_hat(xi)^2 dxi` (equal to the squared L^2(R) norm of the
/// rescaled spatial kernel). They differ by an O(1) quantity reported as
/// `discrepancy`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct RenormConstants {
    pub torus: f64,
    pub line: f64,
}

impl RenormConstants {
    pub fn discrepancy(&self) -> f64 {
        self.torus - self.line
    }

    /// Torus constant with the zero mode removed (mean-frozen ensembles).
    pub fn torus_mean_zero(&self) -> f64 {
        self.torus - 1.0
    }
}

/// Both normalizations of the diverging variance constant `c_N`.
pub fn renorm_constant(m: &Mollifier, cutoff: usize) -> RenormConstants {
    let mut torus = m.weight(0.0).powi(2);
    for k in 1..=cutoff {
        torus += 2.0 * m.weight(k as f64).powi(2);
    }
    RenormConstants {
        torus,
        line: m.scale * m.shape.l2_profile_sq(),
    }
}
