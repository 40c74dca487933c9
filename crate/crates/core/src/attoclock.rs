//! Attoclock analysis: offset-angle extraction from momentum distributions,
//! angle-to-time conversion, and the Keldysh–Rutherford predictor.
//!
//! Sign convention (stated in every output): offsets are measured from the
//! −A(t_max) direction and counted positive in the rotation sense of the
//! vector potential (the streaking direction). Flipping the helicity negates
//! every offset.

use crate::atom::AtomModel;
use crate::error::{Result, SfiError};
use crate::field::LaserPulse;
use crate::geom::{wrap_angle, Vec2};
use crate::pmd::{MomentumDistribution, PmdSpec};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtractMethod {
    /// Argmax bin of the 2D distribution, refined by a local quadratic fit.
    Peak2d,
    /// Argmax of the radially integrated angular distribution.
    AngularMarginal,
    /// Angular maximum of one ATI ring (rings indexed outward from 0).
    EnergyResolved { ring: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OffsetReport {
    pub method: ExtractMethod,
    /// Signed offset from −A(t_max), positive in the helicity direction.
    pub offset_angle_rad: f64,
    pub peak_momentum: Vec2,
    pub uncertainty_rad: f64,
    /// Angle of the −A(t_max) reference in the lab frame.
    pub reference_angle_rad: f64,
}

/// Angular bins for marginal extraction: one wedge per grid cell keeps the
/// wedge arc at typical radii comparable to the cell size, so the
/// piecewise-constant binning does not alias.
fn n_ang_for(spec: &PmdSpec) -> usize {
    spec.n_bins.max(64)
}

/// Extract the attoclock offset angle from a momentum distribution.
pub fn extract_offset(
    pmd: &MomentumDistribution,
    pulse: &LaserPulse,
    method: ExtractMethod,
) -> Result<OffsetReport> {
    let prob = pmd.probability();
    let max = prob.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = prob.iter().cloned().fold(f64::INFINITY, f64::min);
    if !(max > 0.0) || max == min {
        return Err(SfiError::NoUniquePeak);
    }
    let t_max = pulse.t_peak_field();
    let reference = -pulse.vector_potential(t_max);
    if reference.norm() == 0.0 {
        return Err(SfiError::InvalidParameter(
            "reference vector potential vanishes at peak field".into(),
        ));
    }
    let theta_ref = reference.angle();
    let hel = pulse.helicity.sign();

    let (peak, fit_sigma) = match method {
        ExtractMethod::Peak2d => peak_2d(&prob, &pmd.spec)?,
        ExtractMethod::AngularMarginal => {
            let ang = pmd.angular_distribution(n_ang_for(&pmd.spec));
            let (theta, sigma) = angular_peak(&ang)?;
            let radius = radial_centroid(&prob, &pmd.spec, theta);
            (Vec2::new(theta.cos(), theta.sin()) * radius, sigma)
        }
        ExtractMethod::EnergyResolved { ring } => {
            let (theta, radius, sigma) = ring_peak(pmd, ring)?;
            (Vec2::new(theta.cos(), theta.sin()) * radius, sigma)
        }
    };

    let offset = hel * wrap_angle(peak.angle() - theta_ref);
    // Half a bin of angular width at the peak radius as the systematic floor.
    let sys = 0.5 * pmd.spec.bin_width() / peak.norm().max(pmd.spec.bin_width());
    Ok(OffsetReport {
        method,
        offset_angle_rad: offset,
        peak_momentum: peak,
        uncertainty_rad: (sys * sys + fit_sigma * fit_sigma).sqrt(),
        reference_angle_rad: theta_ref,
    })
}

/// Quadratic-surface refinement over a 5×5 stencil around the argmax bin.
fn peak_2d(prob: &[f64], spec: &PmdSpec) -> Result<(Vec2, f64)> {
    let n = spec.n_bins;
    let idx = prob
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .ok_or(SfiError::NoUniquePeak)?;
    let (iy, ix) = (idx / n, idx % n);
    let cx = ix.clamp(2, n - 3);
    let cy = iy.clamp(2, n - 3);
    // Least squares for f = a + b·u + c·v + d·u² + e·u·v + g·v² on the
    // symmetric 5×5 stencil, where odd and even moments decouple.
    let (mut s0, mut su, mut sv, mut suu, mut svv, mut suv) = (0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
    let (mut m_u2, mut m_u4, mut m_u2v2) = (0.0, 0.0, 0.0);
    for dv in -2i64..=2 {
        for du in -2i64..=2 {
            let f = prob[(cy as i64 + dv) as usize * n + (cx as i64 + du) as usize];
            let (u, v) = (du as f64, dv as f64);
            s0 += f;
            su += f * u;
            sv += f * v;
            suu += f * u * u;
            svv += f * v * v;
            suv += f * u * v;
            m_u2 += u * u;
            m_u4 += u * u * u * u;
            m_u2v2 += u * u * v * v;
        }
    }
    let n_pts = 25.0;
    let b = su / m_u2;
    let c = sv / m_u2;
    let e = suv / m_u2v2;
    // d and g from the symmetric even-moment system
    // [n m2 m2; m2 m4 m22; m2 m22 m4]·[a d g]ᵀ = [s0 suu svv]ᵀ.
    let (a11, a12, a22, a23) = (n_pts, m_u2, m_u4, m_u2v2);
    let det = a11 * (a22 * a22 - a23 * a23) - a12 * (a12 * a22 - a23 * a12)
        + a12 * (a12 * a23 - a22 * a12);
    let det_d = a11 * (suu * a22 - a23 * svv) - s0 * (a12 * a22 - a23 * a12)
        + a12 * (a12 * svv - suu * a12);
    let det_g = a11 * (a22 * svv - suu * a23) - a12 * (a12 * svv - suu * a12)
        + s0 * (a12 * a23 - a22 * a12);
    let (d, g) = (det_d / det, det_g / det);

    // Stationary point of the fitted quadratic.
    let (hxx, hyy, hxy) = (2.0 * d, 2.0 * g, e);
    let deth = hxx * hyy - hxy * hxy;
    let (mut sx, mut sy) = (0.0, 0.0);
    if deth > 1e-300 && hxx < 0.0 {
        sx = (-b * hyy + c * hxy) / deth;
        sy = (-c * hxx + b * hxy) / deth;
        if sx.abs() > 2.0 || sy.abs() > 2.0 {
            sx = 0.0;
            sy = 0.0;
        }
    }
    let w = spec.bin_width();
    let centre = spec.center(cx, cy);
    let peak = Vec2::new(centre.x + sx * w, centre.y + sy * w);

    // Residual scatter propagated through the curvature gives the error.
    let a0 = (s0 - d * m_u2 - g * m_u2) / n_pts;
    let mut ss_res = 0.0;
    for dv in -2i64..=2 {
        for du in -2i64..=2 {
            let f = prob[(cy as i64 + dv) as usize * n + (cx as i64 + du) as usize];
            let (u, v) = (du as f64, dv as f64);
            let fit = a0 + b * u + c * v + d * u * u + e * u * v + g * v * v;
            ss_res += (f - fit) * (f - fit);
        }
    }
    let curv = hxx.abs().max(1e-300);
    let sigma_bins = (ss_res / 19.0).sqrt() / curv; // 25 points − 6 params
    let sigma_rad = (sigma_bins * w / peak.norm().max(w)).min(std::f64::consts::PI);
    Ok((peak, sigma_rad))
}

/// Parabolic refinement of the angular-histogram maximum; returns the peak
/// angle and a residual-based uncertainty.
fn angular_peak(ang: &[f64]) -> Result<(f64, f64)> {
    let n = ang.len();
    let imax = ang
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .ok_or(SfiError::NoUniquePeak)?;
    if ang[imax] <= 0.0 {
        return Err(SfiError::NoUniquePeak);
    }
    let dth = 2.0 * std::f64::consts::PI / n as f64;
    let ym = ang[(imax + n - 1) % n];
    let y0 = ang[imax];
    let yp = ang[(imax + 1) % n];
    let denom = ym - 2.0 * y0 + yp;
    let shift = if denom.abs() < 1e-300 {
        0.0
    } else {
        (0.5 * (ym - yp) / denom).clamp(-0.5, 0.5)
    };
    let theta = -std::f64::consts::PI + (imax as f64 + 0.5 + shift) * dth;
    // Five-point residual scatter sets the statistical error scale.
    let mut ss = 0.0;
    for k in 0..5 {
        let i = (imax + n + k - 2) % n;
        let u = k as f64 - 2.0;
        let fit = y0 + 0.5 * (yp - ym) * u + 0.5 * denom * u * u;
        ss += (ang[i] - fit) * (ang[i] - fit);
    }
    let curv = denom.abs().max(1e-300);
    let sigma = ((ss / 2.0).sqrt() / curv).min(1.0) * dth;
    Ok((wrap_angle(theta), sigma))
}

fn radial_centroid(prob: &[f64], spec: &PmdSpec, theta: f64) -> f64 {
    let n = spec.n_bins;
    let dth = 2.0 * std::f64::consts::PI / n_ang_for(spec) as f64;
    let (mut wr, mut wsum) = (0.0, 0.0);
    for iy in 0..n {
        for ix in 0..n {
            let v = prob[iy * n + ix];
            if v == 0.0 {
                continue;
            }
            let c = spec.center(ix, iy);
            if wrap_angle(c.angle() - theta).abs() < dth {
                wr += v * c.norm();
                wsum += v;
            }
        }
    }
    if wsum > 0.0 {
        wr / wsum
    } else {
        spec.p_max * 0.5
    }
}

/// Per-ring angular maximum: rings are local maxima of the radial energy
/// spectrum, indexed outward.
fn ring_peak(pmd: &MomentumDistribution, ring: usize) -> Result<(f64, f64, f64)> {
    let n_e = 2 * pmd.spec.n_bins;
    let (energies, spectrum) = pmd.energy_spectrum(n_e);
    let smax = spectrum.iter().cloned().fold(0.0, f64::max);
    if smax <= 0.0 {
        return Err(SfiError::NoUniquePeak);
    }
    let mut rings = Vec::new();
    for i in 1..n_e - 1 {
        if spectrum[i] > spectrum[i - 1]
            && spectrum[i] >= spectrum[i + 1]
            && spectrum[i] > 0.02 * smax
        {
            rings.push(i);
        }
    }
    if ring >= rings.len() {
        return Err(SfiError::InvalidParameter(format!(
            "ring index {ring} out of range: {} rings detected",
            rings.len()
        )));
    }
    let e_ring = energies[rings[ring]];
    let p_ring = (2.0 * e_ring).sqrt();
    // At least one Cartesian bin of radial width, in energy units.
    let half_band = (energies[1] - energies[0]).max(p_ring * pmd.spec.bin_width());
    // Angular distribution restricted to the ring's energy band.
    let prob = pmd.probability();
    let n = pmd.spec.n_bins;
    let n_ang = n_ang_for(&pmd.spec);
    let w = pmd.spec.bin_width();
    let mut ang = vec![0.0; n_ang];
    for iy in 0..n {
        for ix in 0..n {
            let v = prob[iy * n + ix];
            if v == 0.0 {
                continue;
            }
            let c = pmd.spec.center(ix, iy);
            for sy in -1i64..=1 {
                for sx in -1i64..=1 {
                    let p = c + Vec2::new(sx as f64, sy as f64) * (w / 3.0);
                    let e = 0.5 * p.norm_sq();
                    if (e - e_ring).abs() <= half_band {
                        let frac =
                            (p.angle() + std::f64::consts::PI) / (2.0 * std::f64::consts::PI);
                        let ia = ((frac * n_ang as f64) as usize).min(n_ang - 1);
                        ang[ia] += v / 9.0;
                    }
                }
            }
        }
    }
    let (theta, sigma) = angular_peak(&ang)?;
    Ok((theta, p_ring, sigma))
}

/// Convert an offset angle to a delay. Exact linear mapping Δt = θ/ω for
/// circular polarisation; for ε < 1 the elliptical rotation of −A is
/// inverted numerically (carrier geometry, envelope-free).
pub fn angle_to_time(offset_angle_rad: f64, pulse: &LaserPulse) -> Result<f64> {
    let eps = pulse.ellipticity;
    if eps < 0.5 {
        return Err(SfiError::AngleTimeUnreliable(eps));
    }
    let w = pulse.omega();
    if (eps - 1.0).abs() < 1e-12 {
        return Ok(offset_angle_rad / w);
    }
    if offset_angle_rad.abs() >= std::f64::consts::PI {
        return Err(SfiError::InvalidParameter(format!(
            "offset angle {offset_angle_rad} exceeds half a turn"
        )));
    }
    // Direction of −A for carrier phase θc: u(θc) = [sin θc, −ε·h·cos θc],
    // so tan of the momentum angle is an ε-scaled tan of the phase.
    let h = pulse.helicity.sign();
    let beta = |theta_c: f64| -> f64 {
        let (s, c) = theta_c.sin_cos();
        (-eps * h * c).atan2(s)
    };
    let (w0, w1) = pulse.window();
    let theta_ref = w * (pulse.t_peak_field() - 0.5 * (w0 + w1)) + pulse.cep_rad;
    let beta_ref = beta(theta_ref);
    // Offset along the helicity direction as a function of the delay;
    // accumulated in small increments to avoid wrap ambiguity.
    let chi = |dt: f64| -> f64 {
        let steps = 256;
        let mut acc = 0.0;
        let mut prev = beta_ref;
        for k in 1..=steps {
            let bnow = beta(theta_ref + w * dt * k as f64 / steps as f64);
            acc += wrap_angle(bnow - prev);
            prev = bnow;
        }
        h * acc
    };
    let period = pulse.period();
    let (mut lo, mut hi) = (-0.5 * period, 0.5 * period);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if chi(mid) < offset_angle_rad {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Keldysh–Rutherford offset-angle prediction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KeldyshRutherford {
    /// Signed full arctan form, positive in the helicity direction.
    pub angle_rad: f64,
    /// Small-angle form reported alongside.
    pub small_angle_rad: f64,
    /// Model validity flags: short pulse, field below barrier suppression.
    pub short_pulse_ok: bool,
    pub weak_field_ok: bool,
}

/// Rutherford deflection with v = A₀ = F₀/ω and impact parameter b = Ip/F₀:
/// θ = 2·arctan(z_eff/(v²·b)), signed along the helicity.
pub fn keldysh_rutherford(pulse: &LaserPulse, atom: &AtomModel) -> KeldyshRutherford {
    let f0 = pulse.f0();
    let w = pulse.omega();
    let h = pulse.helicity.sign();
    if f0 == 0.0 {
        return KeldyshRutherford {
            angle_rad: 0.0,
            small_angle_rad: 0.0,
            short_pulse_ok: true,
            weak_field_ok: true,
        };
    }
    let x = atom.z_eff * w * w / (f0 * atom.ip_au);
    KeldyshRutherford {
        angle_rad: h * 2.0 * x.atan(),
        small_angle_rad: h * 2.0 * x,
        short_pulse_ok: pulse.duration_cycles <= 2.0,
        weak_field_ok: f0 < crate::barrier::barrier_suppression_field(atom),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atom::PotentialKind;
    use crate::field::{Envelope, Helicity};
    use crate::pmd::BinMode;
    use approx::assert_relative_eq;

    fn pulse_ccw() -> LaserPulse {
        LaserPulse::new(
            800.0,
            0.86e14,
            1.0,
            Helicity::Counterclockwise,
            0.0,
            Envelope::CosSquared,
            2.0,
        )
        .unwrap()
    }

    fn hydrogen() -> AtomModel {
        AtomModel::new(0.5, 1.0, PotentialKind::Coulomb).unwrap()
    }

    /// Gaussian blob at the −A(t_max) radius, rotated by `rot` in the
    /// helicity direction.
    fn synthetic_pmd(pulse: &LaserPulse, rot: f64, sigma: f64) -> MomentumDistribution {
        let spec = PmdSpec::for_pulse(pulse, 256, BinMode::Incoherent);
        let reference = -pulse.vector_potential(pulse.t_peak_field());
        let centre = reference.rotated(rot * pulse.helicity.sign());
        let n = spec.n_bins;
        let mut prob = vec![0.0; n * n];
        for iy in 0..n {
            for ix in 0..n {
                let d = spec.center(ix, iy) - centre;
                prob[iy * n + ix] = (-d.norm_sq() / (2.0 * sigma * sigma)).exp();
            }
        }
        MomentumDistribution::from_probability(spec, prob, 0.0)
    }

    #[test]
    fn blob_at_reference_reads_zero_offset() {
        let pulse = pulse_ccw();
        let pmd = synthetic_pmd(&pulse, 0.0, 0.08);
        for method in [
            ExtractMethod::Peak2d,
            ExtractMethod::AngularMarginal,
            ExtractMethod::EnergyResolved { ring: 0 },
        ] {
            let rep = extract_offset(&pmd, &pulse, method).unwrap();
            assert!(
                rep.offset_angle_rad.abs() < 0.01,
                "{method:?}: offset {} rad",
                rep.offset_angle_rad
            );
        }
    }

    #[test]
    fn rotated_blob_reads_its_rotation() {
        let pulse = pulse_ccw();
        let pmd = synthetic_pmd(&pulse, 0.1, 0.08);
        for method in [ExtractMethod::Peak2d, ExtractMethod::AngularMarginal] {
            let rep = extract_offset(&pmd, &pulse, method).unwrap();
            assert!(
                (rep.offset_angle_rad - 0.1).abs() < 0.002,
                "{method:?}: offset {} rad",
                rep.offset_angle_rad
            );
        }
        // A clockwise pulse with the blob rotated in its own helicity
        // direction reads the same positive offset.
        let pulse_cw = LaserPulse::new(
            800.0,
            0.86e14,
            1.0,
            Helicity::Clockwise,
            0.0,
            Envelope::CosSquared,
            2.0,
        )
        .unwrap();
        let pmd_cw = synthetic_pmd(&pulse_cw, 0.1, 0.08);
        let rep = extract_offset(&pmd_cw, &pulse_cw, ExtractMethod::Peak2d).unwrap();
        assert!((rep.offset_angle_rad - 0.1).abs() < 0.002);
    }

    #[test]
    fn degenerate_distribution_rejected() {
        let pulse = pulse_ccw();
        let spec = PmdSpec::for_pulse(&pulse, 64, BinMode::Incoherent);
        let flat = MomentumDistribution::from_probability(spec, vec![1.0; 64 * 64], 0.0);
        assert!(matches!(
            extract_offset(&flat, &pulse, ExtractMethod::Peak2d),
            Err(SfiError::NoUniquePeak)
        ));
        let empty = MomentumDistribution::new(spec);
        assert!(extract_offset(&empty, &pulse, ExtractMethod::Peak2d).is_err());
    }

    #[test]
    fn correlated_blob_separates_estimators() {
        // Radial–angular tilted ridge: the 2D max and the angular marginal
        // disagree; a dense-grid evaluation of both estimators pins the gap.
        let pulse = pulse_ccw();
        let spec = PmdSpec::for_pulse(&pulse, 256, BinMode::Incoherent);
        let r0 = 0.8 * pulse.peak_vector_potential_mag();
        let theta0 = (-pulse.vector_potential(pulse.t_peak_field())).angle();
        let (sr, sth, tilt) = (0.22, 0.10, 1.3);
        let density = |r: f64, th: f64| -> f64 {
            let u = r - r0;
            let dv = wrap_angle(th - theta0) - tilt * u;
            (-u * u / (2.0 * sr * sr) - dv * dv / (2.0 * sth * sth)).exp()
        };
        let n = spec.n_bins;
        let mut prob = vec![0.0; n * n];
        for iy in 0..n {
            for ix in 0..n {
                let c = spec.center(ix, iy);
                prob[iy * n + ix] = density(c.norm(), c.angle());
            }
        }
        let pmd = MomentumDistribution::from_probability(spec, prob, 0.0);
        let p2 = extract_offset(&pmd, &pulse, ExtractMethod::Peak2d).unwrap();
        let am = extract_offset(&pmd, &pulse, ExtractMethod::AngularMarginal).unwrap();
        let gap_impl = am.offset_angle_rad - p2.offset_angle_rad;

        // Oracle: the 2D density max sits at (r0, θ0) by construction; the
        // marginal max of M(θ) = ∫ density·r dr comes from fine quadrature.
        let mut best = (f64::NEG_INFINITY, 0.0);
        let n_th = 16384;
        for k in 0..n_th {
            let th = theta0 + (k as f64 / n_th as f64 - 0.5) * 1.0;
            let mut m = 0.0;
            let nr = 600;
            for j in 0..nr {
                let r = r0 - 4.0 * sr + 8.0 * sr * (j as f64 + 0.5) / nr as f64;
                m += density(r, th) * r;
            }
            if m > best.0 {
                best = (m, th);
            }
        }
        let gap_oracle = wrap_angle(best.1 - theta0);
        assert!(
            gap_oracle.abs() > 0.01,
            "oracle gap unexpectedly small: {gap_oracle}"
        );
        assert!(
            (gap_impl - gap_oracle).abs() < 0.015,
            "implementation gap {gap_impl} vs oracle {gap_oracle}"
        );
    }

    #[test]
    fn angle_to_time_circular_and_elliptical() {
        let pulse = pulse_ccw();
        assert_eq!(angle_to_time(0.0, &pulse).unwrap(), 0.0);
        let dt = angle_to_time(pulse.omega() * 5.0, &pulse).unwrap();
        assert_relative_eq!(dt, 5.0, max_relative = 1e-12);
        assert_relative_eq!(dt * crate::units::AU_TIME_AS, 120.94, max_relative = 1e-3);

        // ε = 0.87: recover a synthetic true delay through the tan mapping;
        // closed-form forward map as the oracle.
        let pe = LaserPulse::new(
            800.0,
            0.86e14,
            0.87,
            Helicity::Counterclockwise,
            0.0,
            Envelope::CosSquared,
            2.0,
        )
        .unwrap();
        let w = pe.omega();
        let dt_true = 4.0;
        let beta = |theta_c: f64| (-0.87 * theta_c.cos()).atan2(theta_c.sin());
        let th_ref = w * (pe.t_peak_field() - 0.5 * pe.window().1);
        let offset = wrap_angle(beta(th_ref + w * dt_true) - beta(th_ref));
        let recovered = angle_to_time(offset, &pe).unwrap();
        assert_relative_eq!(recovered, dt_true, epsilon = 1e-6);
        // The naive circular mapping is measurably different.
        assert!((offset / w - dt_true).abs() > 0.05);

        let lin = LaserPulse::new(
            800.0,
            0.86e14,
            0.3,
            Helicity::Counterclockwise,
            0.0,
            Envelope::CosSquared,
            2.0,
        )
        .unwrap();
        assert!(matches!(
            angle_to_time(0.1, &lin),
            Err(SfiError::AngleTimeUnreliable(_))
        ));
    }

    #[test]
    fn keldysh_rutherford_values() {
        // Closed-form oracle: hydrogen, 800 nm, 0.86e14 W/cm² → 0.260623 rad.
        let kr = keldysh_rutherford(&pulse_ccw(), &hydrogen());
        assert_relative_eq!(kr.angle_rad, 0.2606229245, max_relative = 1e-6);
        assert_relative_eq!(kr.small_angle_rad, 0.2621082335, max_relative = 1e-6);
        assert!(kr.short_pulse_ok && kr.weak_field_ok);

        // No charge, no offset.
        let free = AtomModel::new(0.5, 0.0, PotentialKind::Coulomb).unwrap();
        assert_eq!(keldysh_rutherford(&pulse_ccw(), &free).angle_rad, 0.0);

        // Clockwise pulses report negative angles.
        let cw = LaserPulse::new(
            800.0,
            0.86e14,
            1.0,
            Helicity::Clockwise,
            0.0,
            Envelope::CosSquared,
            2.0,
        )
        .unwrap();
        assert!(keldysh_rutherford(&cw, &hydrogen()).angle_rad < 0.0);
    }

    #[test]
    fn keldysh_rutherford_grows_as_intensity_drops() {
        let atom = hydrogen();
        let mut last = 0.0;
        for i in 0..10 {
            let intensity = 2.0e14 * 10f64.powf(-(i as f64) / 9.0);
            let p = LaserPulse::new(
                800.0,
                intensity,
                1.0,
                Helicity::Counterclockwise,
                0.0,
                Envelope::CosSquared,
                2.0,
            )
            .unwrap();
            let kr = keldysh_rutherford(&p, &atom);
            assert!(kr.angle_rad > last, "θ_KR not monotone at {intensity}");
            last = kr.angle_rad;
        }
    }
}
