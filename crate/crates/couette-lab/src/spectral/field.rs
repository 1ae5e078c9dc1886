use std::sync::Arc;

use ndarray::Array2;
use num_complex::Complex64;

use super::grid::Grid;
use crate::error::{Error, Result};

/// Real collocation values on the `(z, v)` grid.
#[derive(Debug, Clone)]
pub struct PhysicalField {
    pub grid: Arc<Grid>,
    pub values: Array2<f64>,
}

/// Complex Fourier coefficients `f_hat_k(eta)` on the truncated lattice.
///
/// The unitary normalization is fixed so that Parseval is weightless:
/// `||p||_{L^2}^2 = sum |f_hat|^2` exactly. A pure mode `e^{i(kz + eta v)}`
/// carries the single coefficient `sqrt(2 pi Lv)`.
#[derive(Debug, Clone)]
pub struct SpectralField {
    pub grid: Arc<Grid>,
    pub coeffs: Array2<Complex64>,
    /// Time at which sheared-frame symbols applied to this field are meant
    /// to be evaluated. Purely informational; operators take `t` explicitly.
    pub time_tag: f64,
}

impl PhysicalField {
    pub fn zeros(grid: &Arc<Grid>) -> Self {
        PhysicalField {
            grid: Arc::clone(grid),
            values: Array2::zeros((grid.nx(), grid.nv())),
        }
    }

    /// Fill from a closure of the physical coordinates `(z, v)`.
    pub fn from_fn(grid: &Arc<Grid>, f: impl Fn(f64, f64) -> f64) -> Self {
        let mut p = PhysicalField::zeros(grid);
        for a in 0..grid.nx() {
            let z = grid.z_point(a);
            for b in 0..grid.nv() {
                p.values[[a, b]] = f(z, grid.v_point(b));
            }
        }
        p
    }

    /// Discrete `L^2(dz dv)` norm (trapezoid = exact lattice quadrature).
    pub fn l2_norm(&self) -> f64 {
        let cell = self.cell_area();
        (self.values.iter().map(|v| v * v).sum::<f64>() * cell).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    fn cell_area(&self) -> f64 {
        let g = &self.grid;
        (2.0 * std::f64::consts::PI / g.nx() as f64) * (g.lv() / g.nv() as f64)
    }
}

impl SpectralField {
    pub fn zeros(grid: &Arc<Grid>) -> Self {
        SpectralField {
            grid: Arc::clone(grid),
            coeffs: Array2::zeros((grid.nx(), grid.nv())),
            time_tag: 0.0,
        }
    }

    /// `sqrt(sum |f_hat|^2)`; equals the physical `L^2` norm by Parseval.
    pub fn l2_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0f64, |m, c| m.max(c.norm()))
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs
            .iter()
            .all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// Apply a real scalar symbol `m(k, eta)` coefficient-wise.
    pub fn multiply_symbol(&self, symbol: impl Fn(i64, f64) -> f64) -> SpectralField {
        let mut out = self.clone();
        out.multiply_symbol_mut(|k, eta| Complex64::new(symbol(k, eta), 0.0));
        out
    }

    /// Apply a complex scalar symbol `m(k, eta)` coefficient-wise, in place.
    /// Nyquist slots are forced to zero.
    pub fn multiply_symbol_mut(&mut self, symbol: impl Fn(i64, f64) -> Complex64) {
        let grid = Arc::clone(&self.grid);
        for i in 0..grid.nx() {
            let k = grid.wavenumber_x(i);
            for j in 0..grid.nv() {
                let c = &mut self.coeffs[[i, j]];
                match (k, grid.eta(j)) {
                    (Some(k), Some(eta)) => *c *= symbol(k, eta),
                    _ => *c = Complex64::ZERO,
                }
            }
        }
    }

    /// Complex-symbol variant returning a new field.
    pub fn map_symbol(&self, symbol: impl Fn(i64, f64) -> Complex64) -> SpectralField {
        let mut out = self.clone();
        out.multiply_symbol_mut(symbol);
        out
    }

    /// Zero every mode with `|k| > frac * kmax` or `|j| > frac * jmax`.
    /// Idempotent by construction.
    pub fn dealias(&self) -> SpectralField {
        let mut out = self.clone();
        out.dealias_mut();
        out
    }

    pub fn dealias_mut(&mut self) {
        let (k_cut, j_cut) = self.grid.dealias_cutoffs();
        let grid = Arc::clone(&self.grid);
        for i in 0..grid.nx() {
            let keep_k = matches!(grid.wavenumber_x(i), Some(k) if k.abs() <= k_cut);
            for j in 0..grid.nv() {
                let keep_j = matches!(grid.eta_index(j), Some(jj) if jj.abs() <= j_cut);
                if !(keep_k && keep_j) {
                    self.coeffs[[i, j]] = Complex64::ZERO;
                }
            }
        }
    }

    /// Project to nonzero x-modes (`P_neq`).
    pub fn project_nonzero_x(&self) -> SpectralField {
        let mut out = self.clone();
        for j in 0..out.grid.nv() {
            out.coeffs[[0, j]] = Complex64::ZERO;
        }
        out
    }

    /// Zero-x-mode row as 1D spectral data over eta.
    pub fn zero_mode_row(&self) -> Vec<Complex64> {
        (0..self.grid.nv()).map(|j| self.coeffs[[0, j]]).collect()
    }

    /// Max deviation from conjugate symmetry, relative to the largest
    /// coefficient. Zero for fields with a real physical counterpart.
    pub fn conjugate_asymmetry(&self) -> f64 {
        let scale = self.max_abs().max(f64::MIN_POSITIVE);
        let g = &self.grid;
        let mut worst = 0.0f64;
        for i in 0..g.nx() {
            for j in 0..g.nv() {
                let (mi, mj) = g.mirror(i, j);
                let d = (self.coeffs[[i, j]] - self.coeffs[[mi, mj]].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst / scale
    }
}

/// Forward transform with the unitary normalization.
///
/// Rejects non-finite input. Nyquist slots of the output are zeroed so the
/// result lives on the symmetric truncated lattice.
pub fn to_spectral(p: &PhysicalField) -> Result<SpectralField> {
    if !p.values.iter().all(|v| v.is_finite()) {
        return Err(Error::NonFinite("physical field".into()));
    }
    let grid = &p.grid;
    let mut buf: Array2<Complex64> = p.values.mapv(|v| Complex64::new(v, 0.0));
    fft2_in_place(grid, &mut buf, Direction::Forward);
    let nf = (2.0 * std::f64::consts::PI * grid.lv()).sqrt() / (grid.nx() * grid.nv()) as f64;
    buf.mapv_inplace(|c| c * nf);
    let mut f = SpectralField {
        grid: Arc::clone(grid),
        coeffs: buf,
        time_tag: 0.0,
    };
    zero_nyquist(&mut f);
    Ok(f)
}

/// Inverse transform; checks that the result is real (conjugate symmetry)
/// before discarding imaginary parts.
pub fn to_physical(f: &SpectralField) -> Result<PhysicalField> {
    let grid = &f.grid;
    let mut buf = f.coeffs.clone();
    fft2_in_place(grid, &mut buf, Direction::Inverse);
    let scale = 1.0 / (2.0 * std::f64::consts::PI * grid.lv()).sqrt();
    let mut max_im = 0.0f64;
    let mut max_abs = 0.0f64;
    let values = buf.mapv(|c| {
        let c = c * scale;
        max_im = max_im.max(c.im.abs());
        max_abs = max_abs.max(c.norm());
        c.re
    });
    if max_abs > 0.0 && max_im > 1e-8 * max_abs {
        return Err(Error::NotReal {
            residue: max_im / max_abs,
        });
    }
    Ok(PhysicalField {
        grid: Arc::clone(grid),
        values,
    })
}

/// Sheared Laplacian multiplier `-(k^2 + (eta - k t)^2)` applied
/// coefficient-wise.
pub fn apply_delta_l(f: &SpectralField, t: f64) -> SpectralField {
    let mut out = f.multiply_symbol(|k, eta| {
        let sheared = eta - k as f64 * t;
        -((k * k) as f64 + sheared * sheared)
    });
    out.time_tag = t;
    out
}

/// Sheared gradient `(ik, i(eta - kt))`: returns `(d_z f, (d_v - t d_z) f)`.
pub fn apply_nabla_l(f: &SpectralField, t: f64) -> (SpectralField, SpectralField) {
    let dz = f.map_symbol(|k, _| Complex64::new(0.0, k as f64));
    let dv = f.map_symbol(|k, eta| Complex64::new(0.0, eta - k as f64 * t));
    (dz, dv)
}

/// The `l^1` Japanese bracket `<k, eta> = (1 + (|k| + |eta|)^2)^{1/2}`.
pub fn bracket(k: i64, eta: f64) -> f64 {
    let m = k.abs() as f64 + eta.abs();
    (1.0 + m * m).sqrt()
}

/// One-dimensional bracket `<eta>`.
pub fn bracket1(eta: f64) -> f64 {
    (1.0 + eta * eta).sqrt()
}

/// Sobolev norm `(sum <k,eta>^{2 sigma} |f_hat|^2)^{1/2}` with the l^1
/// bracket. `sigma = 0` is the `L^2` norm.
pub fn sobolev_norm(f: &SpectralField, sigma: f64) -> f64 {
    weighted_l2(f, |k, eta| bracket(k, eta).powf(2.0 * sigma))
}

/// `sqrt(sum m(k,eta) |f_hat|^2)` for a nonnegative weight `m`.
pub fn weighted_l2(f: &SpectralField, weight: impl Fn(i64, f64) -> f64) -> f64 {
    let g = &f.grid;
    let mut acc = 0.0f64;
    for i in 0..g.nx() {
        let Some(k) = g.wavenumber_x(i) else { continue };
        for j in 0..g.nv() {
            let Some(eta) = g.eta(j) else { continue };
            let a = f.coeffs[[i, j]].norm_sqr();
            if a > 0.0 {
                acc += weight(k, eta) * a;
            }
        }
    }
    acc.sqrt()
}

fn zero_nyquist(f: &mut SpectralField) {
    let g = Arc::clone(&f.grid);
    let iny = g.kmax() + 1;
    let jny = g.nv() / 2;
    for j in 0..g.nv() {
        f.coeffs[[iny, j]] = Complex64::ZERO;
    }
    for i in 0..g.nx() {
        f.coeffs[[i, jny]] = Complex64::ZERO;
    }
}

pub(crate) enum Direction {
    Forward,
    Inverse,
}

/// Unnormalized 2D FFT over both axes, in place.
pub(crate) fn fft2_in_place(grid: &Arc<Grid>, data: &mut Array2<Complex64>, dir: Direction) {
    let (nx, nv) = (grid.nx(), grid.nv());
    debug_assert_eq!(data.dim(), (nx, nv));
    let (plan_x, plan_v) = match dir {
        Direction::Forward => (grid.fwd_x(), grid.fwd_v()),
        Direction::Inverse => (grid.inv_x(), grid.inv_v()),
    };
    // v direction: rows are contiguous in row-major layout
    for mut row in data.rows_mut() {
        let slice = row.as_slice_mut().expect("row-major layout");
        plan_v.process(slice);
    }
    // x direction: gather strided columns
    let mut col = vec![Complex64::ZERO; nx];
    for j in 0..nv {
        for i in 0..nx {
            col[i] = data[[i, j]];
        }
        plan_x.process(&mut col);
        for i in 0..nx {
            data[[i, j]] = col[i];
        }
    }
}

/// 1D unnormalized FFT helpers on the v-grid (used for profiles).
pub(crate) fn fft_v(grid: &Arc<Grid>, data: &mut [Complex64], dir: Direction) {
    debug_assert_eq!(data.len(), grid.nv());
    match dir {
        Direction::Forward => grid.fwd_v().process(data),
        Direction::Inverse => grid.inv_v().process(data),
    }
}
