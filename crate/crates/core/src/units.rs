//! Atomic-unit conversions. Everything downstream of the construction
//! boundary is in Hartree atomic units.

/// I (W/cm²) = AU_INTENSITY · F² with F the peak field in a.u.
pub const AU_INTENSITY_W_CM2: f64 = 3.50945e16;

/// ω (a.u.) = WAVELENGTH_TO_OMEGA / λ (nm).
pub const WAVELENGTH_TO_OMEGA: f64 = 45.5633;

/// One hartree in electron volts.
pub const HARTREE_EV: f64 = 27.211386;

/// One atomic unit of time in attoseconds.
pub const AU_TIME_AS: f64 = 24.188843;

/// Peak electric field (a.u.) for a laser intensity in W/cm².
pub fn field_au_from_intensity(intensity_w_cm2: f64) -> f64 {
    (intensity_w_cm2 / AU_INTENSITY_W_CM2).sqrt()
}

/// Angular frequency (a.u.) for a vacuum wavelength in nm.
pub fn omega_au_from_wavelength(wavelength_nm: f64) -> f64 {
    WAVELENGTH_TO_OMEGA / wavelength_nm
}

/// Ionisation potential in a.u. from eV.
pub fn energy_au_from_ev(ev: f64) -> f64 {
    ev / HARTREE_EV
}
