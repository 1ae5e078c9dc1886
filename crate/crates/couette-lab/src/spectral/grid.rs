use std::fmt;
use std::sync::Arc;

use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Truncated Fourier lattice on the doubly periodic domain
/// `T_{2pi} x T_{Lv}`.
///
/// x-wavenumbers are the integers `k` with `|k| <= kmax`; v-wavenumbers are
/// the multiples `eta = j * (2 pi / Lv)` with `|j| <= nv/2 - 1`. The unpaired
/// Nyquist slots in either direction are kept identically zero so the lattice
/// stays symmetric about the origin and conjugate symmetry is well defined.
pub struct Grid {
    kmax: usize,
    nv: usize,
    lv: f64,
    dealias_fraction: f64,
    nx: usize,
    plans: FftPlans,
}

struct FftPlans {
    fwd_x: Arc<dyn Fft<f64>>,
    inv_x: Arc<dyn Fft<f64>>,
    fwd_v: Arc<dyn Fft<f64>>,
    inv_v: Arc<dyn Fft<f64>>,
}

impl Grid {
    pub const DEFAULT_LV: f64 = 32.0 * std::f64::consts::PI;
    pub const DEFAULT_DEALIAS: f64 = 2.0 / 3.0;

    pub fn new(kmax: usize, nv: usize, lv: f64) -> Result<Arc<Grid>> {
        Grid::with_dealias(kmax, nv, lv, Self::DEFAULT_DEALIAS)
    }

    pub fn with_dealias(
        kmax: usize,
        nv: usize,
        lv: f64,
        dealias_fraction: f64,
    ) -> Result<Arc<Grid>> {
        if kmax < 1 {
            return Err(Error::InvalidGrid("kmax must be >= 1".into()));
        }
        if nv < 4 || !nv.is_power_of_two() {
            return Err(Error::InvalidGrid(format!(
                "nv must be a power of two >= 4, got {nv}"
            )));
        }
        if !(lv > 0.0) || !lv.is_finite() {
            return Err(Error::InvalidGrid(format!("lv must be positive, got {lv}")));
        }
        if !(dealias_fraction > 0.0 && dealias_fraction <= 1.0) {
            return Err(Error::InvalidGrid(format!(
                "dealias fraction must lie in (0, 1], got {dealias_fraction}"
            )));
        }
        let nx = 2 * (kmax + 1);
        let mut planner = FftPlanner::new();
        let plans = FftPlans {
            fwd_x: planner.plan_fft_forward(nx),
            inv_x: planner.plan_fft_inverse(nx),
            fwd_v: planner.plan_fft_forward(nv),
            inv_v: planner.plan_fft_inverse(nv),
        };
        Ok(Arc::new(Grid {
            kmax,
            nv,
            lv,
            dealias_fraction,
            nx,
            plans,
        }))
    }

    pub fn kmax(&self) -> usize {
        self.kmax
    }

    /// Number of physical collocation points in x (`2 (kmax + 1)`).
    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn nv(&self) -> usize {
        self.nv
    }

    pub fn lv(&self) -> f64 {
        self.lv
    }

    pub fn dealias_fraction(&self) -> f64 {
        self.dealias_fraction
    }

    /// v-frequency spacing `2 pi / Lv`.
    pub fn deta(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.lv
    }

    /// Largest represented `|eta|` (the symmetric lattice excludes Nyquist).
    pub fn eta_max(&self) -> f64 {
        (self.nv as f64 / 2.0 - 1.0) * self.deta()
    }

    /// x-wavenumber of FFT row `i`; `None` for the zeroed Nyquist slot.
    pub fn wavenumber_x(&self, i: usize) -> Option<i64> {
        debug_assert!(i < self.nx);
        if i <= self.kmax {
            Some(i as i64)
        } else if i == self.kmax + 1 {
            None
        } else {
            Some(i as i64 - self.nx as i64)
        }
    }

    /// v-frequency of FFT column `j`; `None` for the zeroed Nyquist slot.
    pub fn eta(&self, j: usize) -> Option<f64> {
        self.eta_index(j).map(|jj| jj as f64 * self.deta())
    }

    /// Signed integer lattice index of column `j`.
    pub fn eta_index(&self, j: usize) -> Option<i64> {
        debug_assert!(j < self.nv);
        let half = self.nv / 2;
        if j < half {
            Some(j as i64)
        } else if j == half {
            None
        } else {
            Some(j as i64 - self.nv as i64)
        }
    }

    /// FFT slot indices of the mirrored mode `(-k, -eta)`.
    pub fn mirror(&self, i: usize, j: usize) -> (usize, usize) {
        let mi = if i == 0 { 0 } else { self.nx - i };
        let mj = if j == 0 { 0 } else { self.nv - j };
        (mi, mj)
    }

    pub fn z_point(&self, a: usize) -> f64 {
        2.0 * std::f64::consts::PI * a as f64 / self.nx as f64
    }

    pub fn v_point(&self, b: usize) -> f64 {
        self.lv * b as f64 / self.nv as f64
    }

    /// Dealiasing cutoffs: retained modes satisfy `|k| <= k_cut` and
    /// `|j| <= j_cut`.
    pub fn dealias_cutoffs(&self) -> (i64, i64) {
        let k_cut = (self.dealias_fraction * self.kmax as f64).floor() as i64;
        let j_cut = (self.dealias_fraction * (self.nv as f64 / 2.0 - 1.0)).floor() as i64;
        (k_cut, j_cut)
    }

    /// Iterate over live lattice slots as `(i, j, k, eta)`.
    pub fn modes(self: &Arc<Self>) -> impl Iterator<Item = (usize, usize, i64, f64)> + '_ {
        let grid = Arc::clone(self);
        (0..self.nx).flat_map(move |i| {
            let grid = Arc::clone(&grid);
            (0..grid.nv).filter_map(move |j| {
                let k = grid.wavenumber_x(i)?;
                let eta = grid.eta(j)?;
                Some((i, j, k, eta))
            })
        })
    }

    pub fn same(&self, other: &Grid) -> bool {
        self.kmax == other.kmax
            && self.nv == other.nv
            && self.lv == other.lv
            && self.dealias_fraction == other.dealias_fraction
    }

    pub(crate) fn fwd_x(&self) -> &Arc<dyn Fft<f64>> {
        &self.plans.fwd_x
    }

    pub(crate) fn inv_x(&self) -> &Arc<dyn Fft<f64>> {
        &self.plans.inv_x
    }

    pub(crate) fn fwd_v(&self) -> &Arc<dyn Fft<f64>> {
        &self.plans.fwd_v
    }

    pub(crate) fn inv_v(&self) -> &Arc<dyn Fft<f64>> {
        &self.plans.inv_v
    }
}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid")
            .field("kmax", &self.kmax)
            .field("nv", &self.nv)
            .field("lv", &self.lv)
            .field("dealias_fraction", &self.dealias_fraction)
            .finish()
    }
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        self.same(other)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_dimensions() {
        assert!(Grid::new(0, 64, 1.0).is_err());
        assert!(Grid::new(4, 60, 1.0).is_err());
        assert!(Grid::new(4, 64, -1.0).is_err());
    }

    #[test]
    fn wavenumbers_cover_symmetric_range() {
        let g = Grid::new(3, 8, 2.0 * std::f64::consts::PI).unwrap();
        let ks: Vec<_> = (0..g.nx()).map(|i| g.wavenumber_x(i)).collect();
        assert_eq!(
            ks,
            vec![
                Some(0),
                Some(1),
                Some(2),
                Some(3),
                None,
                Some(-3),
                Some(-2),
                Some(-1)
            ]
        );
        let js: Vec<_> = (0..8).map(|j| g.eta_index(j)).collect();
        assert_eq!(
            js,
            vec![
                Some(0),
                Some(1),
                Some(2),
                Some(3),
                None,
                Some(-3),
                Some(-2),
                Some(-1)
            ]
        );
        // eta spacing is 2 pi / Lv = 1 here
        assert!((g.eta(2).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn mirror_maps_to_negated_mode() {
        let g = Grid::new(3, 8, 1.0).unwrap();
        for i in 0..g.nx() {
            for j in 0..g.nv() {
                let (mi, mj) = g.mirror(i, j);
                match (g.wavenumber_x(i), g.wavenumber_x(mi)) {
                    (Some(k), Some(mk)) => assert_eq!(mk, -k),
                    (None, None) => {}
                    _ => panic!("mirror changed Nyquist status"),
                }
                match (g.eta_index(j), g.eta_index(mj)) {
                    (Some(e), Some(me)) => assert_eq!(me, -e),
                    (None, None) => {}
                    _ => panic!("mirror changed Nyquist status"),
                }
            }
        }
    }
}
