//! Initial-data presets and seeded random band-limited fields.

use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::spectral::{sobolev_norm, Grid, SpectralField};

/// Initial vorticity families selectable from a run config.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    GaussianBump,
    ModePair,
    RandomBand,
}

impl Preset {
    pub fn parse(s: &str) -> Result<Preset> {
        match s {
            "gaussian_bump" => Ok(Preset::GaussianBump),
            "mode_pair" => Ok(Preset::ModePair),
            "random_band" => Ok(Preset::RandomBand),
            other => Err(Error::InvalidArgument(format!(
                "unknown preset `{other}` (expected gaussian_bump, mode_pair or random_band)"
            ))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Preset::GaussianBump => "gaussian_bump",
            Preset::ModePair => "mode_pair",
            Preset::RandomBand => "random_band",
        }
    }
}

/// Enforce `f_hat(-k, -eta) = conj(f_hat(k, eta))` by averaging mirrored
/// pairs; makes the physical counterpart real.
pub fn conjugate_symmetrize(f: &mut SpectralField) {
    let g = Arc::clone(&f.grid);
    for i in 0..g.nx() {
        for j in 0..g.nv() {
            let (mi, mj) = g.mirror(i, j);
            if (mi, mj) < (i, j) {
                continue;
            }
            let a = f.coeffs[[i, j]];
            let b = f.coeffs[[mi, mj]];
            let avg = 0.5 * (a + b.conj());
            f.coeffs[[i, j]] = avg;
            f.coeffs[[mi, mj]] = avg.conj();
        }
    }
    // self-paired slots must be real
    let (i0, j0) = (0usize, 0usize);
    f.coeffs[[i0, j0]] = Complex64::new(f.coeffs[[i0, j0]].re, 0.0);
}

/// Seeded random real field with coefficients supported on
/// `|k| <= k_band`, `|j| <= j_band` and smooth exponential decay.
pub fn random_smooth_field(grid: &Arc<Grid>, seed: u64, k_band: i64, j_band: i64) -> SpectralField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut f = SpectralField::zeros(grid);
    let deta = grid.deta();
    for i in 0..grid.nx() {
        let Some(k) = grid.wavenumber_x(i) else {
            continue;
        };
        for j in 0..grid.nv() {
            let Some(jj) = grid.eta_index(j) else { continue };
            if k.abs() > k_band || jj.abs() > j_band {
                continue;
            }
            let decay = (-0.5 * (k.abs() as f64 + (jj.abs() as f64) * deta)).exp();
            let re: f64 = rng.gen_range(-1.0..1.0);
            let im: f64 = rng.gen_range(-1.0..1.0);
            f.coeffs[[i, j]] = Complex64::new(re, im) * decay;
        }
    }
    conjugate_symmetrize(&mut f);
    f
}

/// Build the configured initial vorticity, mean-free and normalized so that
/// `||omega_in||_{H^sigma}` equals `amplitude`.
pub fn initial_vorticity(
    grid: &Arc<Grid>,
    preset: Preset,
    seed: u64,
    amplitude: f64,
    sigma: f64,
) -> Result<SpectralField> {
    if !(amplitude >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "amplitude must be nonnegative, got {amplitude}"
        )));
    }
    let mut f = match preset {
        Preset::GaussianBump => gaussian_bump(grid)?,
        Preset::ModePair => mode_pair(grid)?,
        Preset::RandomBand => {
            let j_band = ((3.0 / grid.deta()).floor() as i64).clamp(1, grid.nv() as i64 / 2 - 1);
            let k_band = 4.min(grid.kmax() as i64);
            random_smooth_field(grid, seed, k_band, j_band)
        }
    };
    f.coeffs[[0, 0]] = Complex64::ZERO;
    f.dealias_mut();
    let norm = sobolev_norm(&f, sigma);
    if norm == 0.0 && amplitude > 0.0 {
        return Err(Error::InvalidArgument(
            "preset produced an identically zero field".into(),
        ));
    }
    let scale = if amplitude == 0.0 { 0.0 } else { amplitude / norm };
    f.coeffs.mapv_inplace(|c| c * scale);
    Ok(f)
}

/// `cos(z)` carrier with a Gaussian envelope centered in the v-domain.
fn gaussian_bump(grid: &Arc<Grid>) -> Result<SpectralField> {
    let lv = grid.lv();
    let s = lv / 16.0;
    let p = crate::spectral::PhysicalField::from_fn(grid, |z, v| {
        let dv = v - 0.5 * lv;
        z.cos() * (-dv * dv / (2.0 * s * s)).exp()
    });
    crate::spectral::to_spectral(&p)
}

/// Two plane-wave pairs, one per x-wavenumber, tilted in v.
fn mode_pair(grid: &Arc<Grid>) -> Result<SpectralField> {
    let deta = grid.deta();
    // snap the tilts to the lattice
    let eta1 = (2.0 / deta).round() * deta;
    let eta2 = (1.0 / deta).round() * deta;
    let p = crate::spectral::PhysicalField::from_fn(grid, |z, v| {
        (z + eta1 * v).cos() + (2.0 * z + eta2 * v).cos()
    });
    crate::spectral::to_spectral(&p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_field_is_real_and_band_limited() {
        let grid = Grid::new(8, 64, 32.0 * std::f64::consts::PI).unwrap();
        let f = random_smooth_field(&grid, 7, 3, 10);
        assert!(f.conjugate_asymmetry() < 1e-14);
        for i in 0..grid.nx() {
            for j in 0..grid.nv() {
                let k = grid.wavenumber_x(i);
                let jj = grid.eta_index(j);
                let out_of_band = match (k, jj) {
                    (Some(k), Some(jj)) => k.abs() > 3 || jj.abs() > 10,
                    _ => true,
                };
                if out_of_band {
                    assert_eq!(f.coeffs[[i, j]], Complex64::ZERO);
                }
            }
        }
    }

    #[test]
    fn presets_are_normalized_and_mean_free() {
        let grid = Grid::new(8, 64, 32.0 * std::f64::consts::PI).unwrap();
        for preset in [Preset::GaussianBump, Preset::ModePair, Preset::RandomBand] {
            let f = initial_vorticity(&grid, preset, 3, 0.25, 4.0).unwrap();
            assert!((sobolev_norm(&f, 4.0) - 0.25).abs() < 1e-12, "{preset:?}");
            assert_eq!(f.coeffs[[0, 0]], Complex64::ZERO);
            assert!(f.conjugate_asymmetry() < 1e-12);
        }
    }

    #[test]
    fn fixed_seed_is_reproducible() {
        let grid = Grid::new(6, 32, 16.0 * std::f64::consts::PI).unwrap();
        let a = random_smooth_field(&grid, 11, 3, 6);
        let b = random_smooth_field(&grid, 11, 3, 6);
        assert_eq!(a.coeffs, b.coeffs);
    }
}
