//! Uniform-grid evaluation and alias-free products via zero-padded FFTs.
//!
//! A band-limited field with cutoff K is synthesized on M >= 3K+1 points, so
//! the pointwise product of two such fields (modes up to 2K) folds no alias
//! back into the band |k| <= K: the truncated product coefficients are exact.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{LabError, Result};
use crate::field::SpectralField;

/// FFT plans plus scratch buffers for a fixed cutoff and grid length.
/// One workspace per worker thread; methods take `&mut self`.
pub struct GridWorkspace {
    cutoff: usize,
    grid_len: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
    buf: Vec<Complex64>,
    buf2: Vec<Complex64>,
}

/// Smallest power of two >= 3K+1 (and >= 8).
pub fn dealias_len(cutoff: usize) -> usize {
    (3 * cutoff + 1).next_power_of_two().max(8)
}

impl GridWorkspace {
    /// Workspace on the dealiasing grid for the given cutoff.
    pub fn new(cutoff: usize) -> Self {
        Self::with_len(cutoff, dealias_len(cutoff))
    }

    /// Workspace on an explicit grid; `grid_len >= 2*cutoff + 1` so that
    /// synthesis and band-limited analysis are exact.
    pub fn with_len(cutoff: usize, grid_len: usize) -> Self {
        assert!(grid_len >= 2 * cutoff + 1, "grid too short for the band");
        let mut planner = FftPlanner::new();
        GridWorkspace {
            cutoff,
            grid_len,
            fwd: planner.plan_fft_forward(grid_len),
            inv: planner.plan_fft_inverse(grid_len),
            buf: vec![Complex64::ZERO; grid_len],
            buf2: vec![Complex64::ZERO; grid_len],
        }
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn grid_len(&self) -> usize {
        self.grid_len
    }

    /// Grid points x_j = j / M.
    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        let m = self.grid_len as f64;
        (0..self.grid_len).map(move |j| j as f64 / m)
    }

    fn load(&mut self, field: &SpectralField) {
        let m = self.grid_len;
        self.buf.fill(Complex64::ZERO);
        self.buf[0] = Complex64::new(field.mean(), 0.0);
        for k in 1..=field.cutoff().min(self.cutoff) {
            let c = field.coeffs()[k];
            self.buf[k] = c;
            self.buf[m - k] = c.conj();
        }
    }

    /// Field values on the grid (exact for band-limited input).
    pub fn synthesize(&mut self, field: &SpectralField, out: &mut Vec<f64>) {
        self.load(field);
        self.inv.process(&mut self.buf);
        out.clear();
        out.extend(self.buf.iter().map(|c| c.re));
    }

    /// Band-limited Fourier coefficients of grid values: forward DFT divided
    /// by M, truncated to the workspace band.
    pub fn analyze(&mut self, values: &[f64], mean_zero: bool) -> SpectralField {
        assert_eq!(values.len(), self.grid_len);
        for (b, &v) in self.buf.iter_mut().zip(values) {
            *b = Complex64::new(v, 0.0);
        }
        self.fwd.process(&mut self.buf);
        let scale = 1.0 / self.grid_len as f64;
        let mut f = SpectralField::zero(self.cutoff, mean_zero);
        f.set_coeff(0, self.buf[0] * scale);
        for k in 1..=self.cutoff {
            f.set_coeff(k, self.buf[k] * scale);
        }
        f
    }

    /// Exact Fourier coefficients of the pointwise product `u v`, truncated
    /// to the band; alias-free because the grid holds >= 3K+1 points.
    pub fn product(&mut self, u: &SpectralField, v: &SpectralField) -> Result<SpectralField> {
        if u.cutoff() != v.cutoff() {
            return Err(LabError::Parameter(format!(
                "product needs equal cutoffs, got {} and {}",
                u.cutoff(),
                v.cutoff()
            )));
        }
        if self.grid_len < 3 * u.cutoff() + 1 {
            return Err(LabError::Parameter(
                "grid too short for an alias-free product".into(),
            ));
        }
        self.load(u);
        self.inv.process(&mut self.buf);
        std::mem::swap(&mut self.buf, &mut self.buf2);
        self.load(v);
        self.inv.process(&mut self.buf);
        for (a, b) in self.buf.iter_mut().zip(&self.buf2) {
            // both grids are real up to round-off
            *a = Complex64::new(a.re * b.re, 0.0);
        }
        self.fwd.process(&mut self.buf);
        let scale = 1.0 / self.grid_len as f64;
        let mut f = SpectralField::zero(self.cutoff, false);
        f.set_coeff(0, self.buf[0] * scale);
        for k in 1..=self.cutoff {
            f.set_coeff(k, self.buf[k] * scale);
        }
        Ok(f)
    }
}

/// One-shot dealiased product (plans a transient workspace).
pub fn product_dealiased(u: &SpectralField, v: &SpectralField) -> Result<SpectralField> {
    GridWorkspace::new(u.cutoff()).product(u, v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{SpectralField, TAU};
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Quadrature oracle: rectangle rule on a fine grid by direct mode
    /// summation, independent of the FFT path.
    fn quadrature(f: impl Fn(f64) -> f64, n: usize) -> f64 {
        (0..n).map(|j| f(j as f64 / n as f64)).sum::<f64>() / n as f64
    }

    #[test]
    fn square_of_cosine_is_trig_identity() {
        // cos^2(2 pi x) = 1/2 + cos(4 pi x)/2
        let u = SpectralField::cosine(4, 1);
        let sq = product_dealiased(&u, &u).unwrap();
        assert_relative_eq!(sq.mean(), 0.5, epsilon = 1e-14);
        assert_relative_eq!(sq.coeff(2).re, 0.25, epsilon = 1e-14);
        assert!(sq.coeff(1).norm() < 1e-14);
        assert!(sq.coeff(3).norm() < 1e-14);
        assert!(sq.coeff(4).norm() < 1e-14);

        // truncated when the band is too small for mode 2
        let narrow = SpectralField::cosine(1, 1);
        let sq1 = product_dealiased(&narrow, &narrow).unwrap();
        assert_relative_eq!(sq1.mean(), 0.5, epsilon = 1e-14);
        assert_eq!(sq1.cutoff(), 1);
        assert!(sq1.coeff(1).norm() < 1e-14);
    }

    #[test]
    fn product_with_zero_is_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let u = SpectralField::sample_white_noise(16, &mut rng, false).unwrap();
        let z = SpectralField::zero(16, false);
        let p = product_dealiased(&u, &z).unwrap();
        assert!(p.l2_norm_sq() == 0.0);
    }

    #[test]
    fn cutoff_mismatch_is_an_error() {
        let u = SpectralField::zero(4, false);
        let v = SpectralField::zero(8, false);
        assert!(product_dealiased(&u, &v).is_err());
    }

    #[test]
    fn squared_field_pairing_matches_fine_grid_quadrature() {
        // pair(u^2, phi) vs direct quadrature of Pi_K(u^2) phi. The band
        // projection discards modes K < |m| <= 2K, so compare against the
        // quadrature of u(x)^2 phi(x) with phi band-limited inside K,
        // making the projection invisible to the pairing.
        let k = 16;
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let u = SpectralField::sample_white_noise(k, &mut rng, false).unwrap();
        let phi = SpectralField::sine(k, 3);
        let sq = product_dealiased(&u, &u).unwrap();
        let spectral = sq.pair(&phi);
        let oracle = quadrature(|x| u.eval(x).powi(2) * phi.eval(x), 1 << 12);
        assert!(
            (spectral - oracle).abs() < 1e-10,
            "spectral {spectral} vs quadrature {oracle}"
        );
    }

    #[test]
    fn product_coefficients_match_direct_convolution() {
        // Independent O(K^2) convolution oracle for every mode in the band.
        let k = 12;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let u = SpectralField::sample_white_noise(k, &mut rng, false).unwrap();
        let v = SpectralField::sample_white_noise(k, &mut rng, false).unwrap();
        let p = product_dealiased(&u, &v).unwrap();
        for m in 0..=k as i64 {
            let mut c = num_complex::Complex64::ZERO;
            for k1 in -(k as i64)..=k as i64 {
                c += u.coeff(k1) * v.coeff(m - k1);
            }
            assert!(
                (p.coeff(m) - c).norm() < 1e-12,
                "mode {m}: fft {} vs conv {c}",
                p.coeff(m)
            );
        }
    }

    #[test]
    fn synthesis_matches_direct_evaluation() {
        let k = 8;
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let u = SpectralField::sample_white_noise(k, &mut rng, false).unwrap();
        let mut ws = GridWorkspace::new(k);
        let mut grid = Vec::new();
        ws.synthesize(&u, &mut grid);
        for (j, x) in ws.points().enumerate() {
            assert_relative_eq!(grid[j], u.eval(x), epsilon = 1e-11);
        }
    }

    #[test]
    fn analyze_inverts_synthesize() {
        let k = 11;
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let u = SpectralField::sample_white_noise(k, &mut rng, false).unwrap();
        let mut ws = GridWorkspace::new(k);
        let mut grid = Vec::new();
        ws.synthesize(&u, &mut grid);
        let back = ws.analyze(&grid, false);
        assert!(back.max_coeff_distance(&u) < 1e-12);
    }

    #[test]
    fn odd_grid_length_works() {
        // Cole-Hopf evaluation uses the (2K+1)-point grid.
        let k = 6;
        let mut ws = GridWorkspace::with_len(k, 2 * k + 1);
        let u = SpectralField::sine(k, 2);
        let mut grid = Vec::new();
        ws.synthesize(&u, &mut grid);
        for (j, x) in ws.points().enumerate() {
            assert_relative_eq!(grid[j], (TAU * 2.0 * x).sin(), epsilon = 1e-12);
        }
        let back = ws.analyze(&grid, true);
        assert!(back.max_coeff_distance(&u) < 1e-13);
    }
}
