//! Photoelectron momentum distributions: a square 2D histogram over the
//! final-momentum plane with incoherent (weight) or coherent (amplitude)
//! accumulation.

use crate::field::LaserPulse;
use crate::geom::Vec2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BinMode {
    /// Bins accumulate real weights.
    Incoherent,
    /// Bins accumulate √w·e^{iφ}; probabilities appear on finalisation.
    Coherent,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PmdSpec {
    pub p_min: f64,
    pub p_max: f64,
    /// Bins per axis.
    pub n_bins: usize,
    pub mode: BinMode,
}

impl PmdSpec {
    /// Default attoclock grid: n×n bins over [−1.5·A₀, +1.5·A₀]².
    pub fn for_pulse(pulse: &LaserPulse, n_bins: usize, mode: BinMode) -> PmdSpec {
        let a0 = pulse.peak_vector_potential_mag();
        PmdSpec {
            p_min: -1.5 * a0,
            p_max: 1.5 * a0,
            n_bins,
            mode,
        }
    }

    pub fn bin_width(&self) -> f64 {
        (self.p_max - self.p_min) / self.n_bins as f64
    }

    /// Bin indices (ix, iy) for momentum p, or None when outside the grid.
    pub fn locate(&self, p: Vec2) -> Option<(usize, usize)> {
        let w = self.bin_width();
        let fx = (p.x - self.p_min) / w;
        let fy = (p.y - self.p_min) / w;
        if fx < 0.0 || fy < 0.0 {
            return None;
        }
        let (ix, iy) = (fx as usize, fy as usize);
        if ix >= self.n_bins || iy >= self.n_bins {
            None
        } else {
            Some((ix, iy))
        }
    }

    pub fn center(&self, ix: usize, iy: usize) -> Vec2 {
        let w = self.bin_width();
        Vec2::new(
            self.p_min + (ix as f64 + 0.5) * w,
            self.p_min + (iy as f64 + 0.5) * w,
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PmdData {
    Real(Vec<f64>),
    Complex(Vec<Complex64>),
}

/// 2D momentum histogram. Data is row-major with x fastest:
/// `index = iy * n_bins + ix`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentumDistribution {
    pub spec: PmdSpec,
    pub data: PmdData,
    /// Total weight that landed in bins.
    pub binned_weight: f64,
    /// Weight excluded as bound (negative final energy).
    pub bound_weight: f64,
    /// Ionised weight whose momentum fell outside the grid.
    pub out_of_grid_weight: f64,
    /// Set when the grid excluded more than 1% of the ionised weight.
    pub warning: Option<String>,
}

impl MomentumDistribution {
    pub fn new(spec: PmdSpec) -> Self {
        let n = spec.n_bins * spec.n_bins;
        let data = match spec.mode {
            BinMode::Incoherent => PmdData::Real(vec![0.0; n]),
            BinMode::Coherent => PmdData::Complex(vec![Complex64::new(0.0, 0.0); n]),
        };
        MomentumDistribution {
            spec,
            data,
            binned_weight: 0.0,
            bound_weight: 0.0,
            out_of_grid_weight: 0.0,
            warning: None,
        }
    }

    /// Construct directly from a real probability grid (grid-solver output).
    pub fn from_probability(spec: PmdSpec, prob: Vec<f64>, bound_weight: f64) -> Self {
        assert_eq!(prob.len(), spec.n_bins * spec.n_bins);
        let binned_weight = prob.iter().sum();
        MomentumDistribution {
            spec,
            data: PmdData::Real(prob),
            binned_weight,
            bound_weight,
            out_of_grid_weight: 0.0,
            warning: None,
        }
    }

    pub fn add(&mut self, p: Vec2, weight: f64, phase: f64) {
        match self.spec.locate(p) {
            Some((ix, iy)) => {
                let idx = iy * self.spec.n_bins + ix;
                match &mut self.data {
                    PmdData::Real(bins) => bins[idx] += weight,
                    PmdData::Complex(bins) => {
                        bins[idx] += Complex64::from_polar(weight.sqrt(), phase)
                    }
                }
                self.binned_weight += weight;
            }
            None => self.out_of_grid_weight += weight,
        }
    }

    /// Per-bin probabilities; |amplitude|² for coherent data.
    pub fn probability(&self) -> Vec<f64> {
        match &self.data {
            PmdData::Real(bins) => bins.clone(),
            PmdData::Complex(bins) => bins.iter().map(|a| a.norm_sqr()).collect(),
        }
    }

    pub fn total_probability(&self) -> f64 {
        match &self.data {
            PmdData::Real(bins) => bins.iter().sum(),
            PmdData::Complex(bins) => bins.iter().map(|a| a.norm_sqr()).sum(),
        }
    }

    /// Flat index of the maximum-probability bin.
    pub fn argmax(&self) -> Option<usize> {
        let prob = self.probability();
        let (mut best, mut idx) = (f64::NEG_INFINITY, None);
        for (i, &v) in prob.iter().enumerate() {
            if v > best {
                best = v;
                idx = Some(i);
            }
        }
        if best <= 0.0 {
            None
        } else {
            idx
        }
    }

    /// Angular distribution dP/dθ·Δθ over n_ang uniform bins in (−π, π].
    /// Each Cartesian bin is subsampled 3×3 to suppress grid–wedge aliasing.
    pub fn angular_distribution(&self, n_ang: usize) -> Vec<f64> {
        let prob = self.probability();
        let mut out = vec![0.0; n_ang];
        let w = self.spec.bin_width();
        for iy in 0..self.spec.n_bins {
            for ix in 0..self.spec.n_bins {
                let v = prob[iy * self.spec.n_bins + ix];
                if v == 0.0 {
                    continue;
                }
                let c = self.spec.center(ix, iy);
                for sy in -1i64..=1 {
                    for sx in -1i64..=1 {
                        let p = c + Vec2::new(sx as f64, sy as f64) * (w / 3.0);
                        if p.norm_sq() == 0.0 {
                            continue;
                        }
                        let frac =
                            (p.angle() + std::f64::consts::PI) / (2.0 * std::f64::consts::PI);
                        let ia = ((frac * n_ang as f64) as usize).min(n_ang - 1);
                        out[ia] += v / 9.0;
                    }
                }
            }
        }
        out
    }

    /// Radial spectrum over energy E = p²/2 with n_e uniform bins up to
    /// E_max = p_max²/2; returns (bin centres, probability per bin). Bins
    /// are subsampled 3×3 like the angular marginal.
    pub fn energy_spectrum(&self, n_e: usize) -> (Vec<f64>, Vec<f64>) {
        let prob = self.probability();
        let e_max = 0.5 * self.spec.p_max * self.spec.p_max;
        let de = e_max / n_e as f64;
        let mut out = vec![0.0; n_e];
        let w = self.spec.bin_width();
        for iy in 0..self.spec.n_bins {
            for ix in 0..self.spec.n_bins {
                let v = prob[iy * self.spec.n_bins + ix];
                if v == 0.0 {
                    continue;
                }
                let c = self.spec.center(ix, iy);
                for sy in -1i64..=1 {
                    for sx in -1i64..=1 {
                        let p = c + Vec2::new(sx as f64, sy as f64) * (w / 3.0);
                        let ie = (0.5 * p.norm_sq() / de) as usize;
                        if ie < n_e {
                            out[ie] += v / 9.0;
                        }
                    }
                }
            }
        }
        let centres = (0..n_e).map(|i| (i as f64 + 0.5) * de).collect();
        (centres, out)
    }

    /// Record the out-of-grid warning if more than `frac` of the ionised
    /// weight missed the grid.
    pub fn check_coverage(&mut self, frac: f64) {
        let total = self.binned_weight + self.out_of_grid_weight;
        if total > 0.0 && self.out_of_grid_weight > frac * total {
            self.warning = Some(format!(
                "grid excluded {:.3}% of ionised weight",
                100.0 * self.out_of_grid_weight / total
            ));
        }
    }
}
