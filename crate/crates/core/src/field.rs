//! Analytic laser pulse: vector potential, electric field, and derived
//! dimensionless parameters.
//!
//! Conventions (also spelled out in the configuration reference):
//!
//! * The polarisation ellipse has its major axis along x, minor along y;
//!   propagation is along the absent z axis (dipole approximation).
//! * The envelope is applied to the vector potential A, and E = −dA/dt is
//!   taken analytically. This guarantees a continuous A with compact support
//!   and zero net momentum transfer ∫E dt = 0.
//! * With carrier phase θ = ω(t − t_c) + φ_CEP and envelope g(t),
//!
//!   A(t) = −f0/(ω√(1+ε²)) · g(t) · [sin θ, −ε·h·cos θ]
//!   E(t) =  f0/√(1+ε²)    · g(t) · [cos θ, +ε·h·sin θ]  −  (g′/g·ω) term,
//!
//!   so `f0` is the peak field of the corresponding linear (ε = 0) pulse and
//!   a circular pulse has constant |E| = f0/√2 over a flat envelope.
//! * Helicity h = +1 rotates A and E counterclockwise, h = −1 clockwise.

use crate::error::{Result, SfiError};
use crate::geom::Vec2;
use crate::units;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Helicity {
    Counterclockwise,
    Clockwise,
}

impl Helicity {
    /// +1 for counterclockwise, −1 for clockwise rotation of A and E.
    pub fn sign(self) -> f64 {
        match self {
            Helicity::Counterclockwise => 1.0,
            Helicity::Clockwise => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Envelope {
    /// cos² window over the full pulse duration.
    CosSquared,
    /// Linear ramps of `ramp_cycles` on both ends, flat top between.
    Trapezoidal { ramp_cycles: f64 },
    /// Single sin² excursion of A along the major axis lasting half a carrier
    /// period. Ellipticity, CEP and helicity are ignored for this shape; the
    /// field is f0·sin(2ωt)·x̂ on the window.
    HalfCycle,
}

/// Analytic laser pulse in the polarisation plane.
///
/// The pulse window is [0, duration]; the envelope peaks at the window
/// centre. Outside the window A and E vanish identically.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LaserPulse {
    pub wavelength_nm: f64,
    pub peak_intensity_w_cm2: f64,
    pub ellipticity: f64,
    pub helicity: Helicity,
    pub cep_rad: f64,
    pub envelope: Envelope,
    pub duration_cycles: f64,
    /// Carrier angular frequency in a.u. (cached).
    omega_au: f64,
    /// Peak field of the linear-equivalent pulse in a.u. (cached).
    f0_au: f64,
}

impl LaserPulse {
    pub fn new(
        wavelength_nm: f64,
        peak_intensity_w_cm2: f64,
        ellipticity: f64,
        helicity: Helicity,
        cep_rad: f64,
        envelope: Envelope,
        duration_cycles: f64,
    ) -> Result<Self> {
        if !(wavelength_nm > 0.0) {
            return Err(SfiError::InvalidParameter(format!(
                "wavelength must be positive, got {wavelength_nm} nm"
            )));
        }
        if !(peak_intensity_w_cm2 >= 0.0) {
            return Err(SfiError::InvalidParameter(format!(
                "peak intensity must be nonnegative, got {peak_intensity_w_cm2} W/cm²"
            )));
        }
        if !(0.0..=1.0).contains(&ellipticity) {
            return Err(SfiError::InvalidParameter(format!(
                "ellipticity must lie in [0, 1], got {ellipticity}"
            )));
        }
        if !(duration_cycles > 0.0) {
            return Err(SfiError::InvalidParameter(format!(
                "duration must be positive, got {duration_cycles} cycles"
            )));
        }
        if let Envelope::Trapezoidal { ramp_cycles } = envelope {
            if !(ramp_cycles >= 0.0) || 2.0 * ramp_cycles > duration_cycles {
                return Err(SfiError::InvalidParameter(format!(
                    "trapezoidal ramps ({ramp_cycles} cycles each) exceed the pulse duration"
                )));
            }
        }
        Ok(LaserPulse {
            wavelength_nm,
            peak_intensity_w_cm2,
            ellipticity,
            helicity,
            cep_rad,
            envelope,
            duration_cycles,
            omega_au: units::omega_au_from_wavelength(wavelength_nm),
            f0_au: units::field_au_from_intensity(peak_intensity_w_cm2),
        })
    }

    pub fn omega(&self) -> f64 {
        self.omega_au
    }

    pub fn f0(&self) -> f64 {
        self.f0_au
    }

    /// Carrier period 2π/ω in a.u.
    pub fn period(&self) -> f64 {
        2.0 * PI / self.omega_au
    }

    /// Pulse window [t_start, t_end] outside which A ≡ E ≡ 0.
    pub fn window(&self) -> (f64, f64) {
        match self.envelope {
            Envelope::HalfCycle => (0.0, PI / self.omega_au),
            _ => (0.0, self.duration_cycles * self.period()),
        }
    }

    /// Envelope value and time derivative at t (zero outside the window).
    fn envelope_g(&self, t: f64) -> (f64, f64) {
        let (t0, t1) = self.window();
        if t <= t0 || t >= t1 {
            return (0.0, 0.0);
        }
        match self.envelope {
            Envelope::CosSquared => {
                let tw = t1 - t0;
                let u = PI * (t - 0.5 * (t0 + t1)) / tw;
                let c = u.cos();
                (c * c, -PI / tw * (2.0 * u).sin())
            }
            Envelope::Trapezoidal { ramp_cycles } => {
                let tr = ramp_cycles * self.period();
                if tr == 0.0 {
                    // Degenerate flat-top; edges handled by the window test.
                    (1.0, 0.0)
                } else if t < t0 + tr {
                    ((t - t0) / tr, 1.0 / tr)
                } else if t > t1 - tr {
                    ((t1 - t) / tr, -1.0 / tr)
                } else {
                    (1.0, 0.0)
                }
            }
            Envelope::HalfCycle => {
                let s = (self.omega_au * t).sin();
                (s * s, self.omega_au * (2.0 * self.omega_au * t).sin())
            }
        }
    }

    /// Vector potential A(t) in a.u.
    pub fn vector_potential(&self, t: f64) -> Vec2 {
        let (g, _) = self.envelope_g(t);
        if g == 0.0 {
            return Vec2::ZERO;
        }
        match self.envelope {
            Envelope::HalfCycle => Vec2::new(-self.f0_au / self.omega_au * g, 0.0),
            _ => {
                let eps = self.ellipticity;
                let h = self.helicity.sign();
                let amp = self.f0_au / (self.omega_au * (1.0 + eps * eps).sqrt());
                let theta = self.carrier_phase(t);
                let (s, c) = theta.sin_cos();
                Vec2::new(-amp * g * s, amp * g * eps * h * c)
            }
        }
    }

    /// Electric field E(t) = −dA/dt in a.u.
    pub fn electric_field(&self, t: f64) -> Vec2 {
        let (g, dg) = self.envelope_g(t);
        if g == 0.0 && dg == 0.0 {
            return Vec2::ZERO;
        }
        match self.envelope {
            Envelope::HalfCycle => Vec2::new(self.f0_au / self.omega_au * dg, 0.0),
            _ => {
                let eps = self.ellipticity;
                let h = self.helicity.sign();
                let amp = self.f0_au / (self.omega_au * (1.0 + eps * eps).sqrt());
                let theta = self.carrier_phase(t);
                let (s, c) = theta.sin_cos();
                let w = self.omega_au;
                Vec2::new(
                    amp * (g * w * c + dg * s),
                    amp * eps * h * (g * w * s - dg * c),
                )
            }
        }
    }

    fn carrier_phase(&self, t: f64) -> f64 {
        let (t0, t1) = self.window();
        self.omega_au * (t - 0.5 * (t0 + t1)) + self.cep_rad
    }

    /// Time of the global maximum of |E(t)| (dense scan + parabolic refine).
    pub fn t_peak_field(&self) -> f64 {
        let (t0, t1) = self.window();
        let n = (4096.0 * self.duration_cycles.max(1.0)) as usize;
        let dt = (t1 - t0) / n as f64;
        let mut best = (0.0, t0);
        let mut mags = vec![0.0; n + 1];
        for (i, m) in mags.iter_mut().enumerate() {
            let t = t0 + i as f64 * dt;
            *m = self.electric_field(t).norm_sq();
            if *m > best.0 {
                best = (*m, t);
            }
        }
        let i = ((best.1 - t0) / dt).round() as usize;
        if i == 0 || i >= n {
            return best.1;
        }
        // Parabolic refinement on |E|².
        let (ym, y0, yp) = (mags[i - 1], mags[i], mags[i + 1]);
        let denom = ym - 2.0 * y0 + yp;
        if denom.abs() < 1e-300 {
            best.1
        } else {
            best.1 + 0.5 * dt * (ym - yp) / denom
        }
    }

    /// Peak |E| over the window.
    pub fn peak_field_mag(&self) -> f64 {
        self.electric_field(self.t_peak_field()).norm()
    }

    /// Peak |A| over the window (dense scan).
    pub fn peak_vector_potential_mag(&self) -> f64 {
        let (t0, t1) = self.window();
        let n = (4096.0 * self.duration_cycles.max(1.0)) as usize;
        let dt = (t1 - t0) / n as f64;
        (0..=n)
            .map(|i| self.vector_potential(t0 + i as f64 * dt).norm())
            .fold(0.0, f64::max)
    }
}

/// Keldysh parameter γ = ω·κ/F₀.
pub fn keldysh_parameter(pulse: &LaserPulse, atom: &crate::atom::AtomModel) -> Result<f64> {
    if pulse.f0() == 0.0 {
        return Err(SfiError::UndefinedKeldysh);
    }
    Ok(pulse.omega() * atom.kappa() / pulse.f0())
}
