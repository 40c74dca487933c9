//! Static-barrier geometry along the instantaneous field direction and the
//! quasistatic rate used to weight and draw trajectory initial conditions.

use crate::atom::AtomModel;
use crate::error::{Result, SfiError};
use crate::field::LaserPulse;
use crate::geom::Vec2;
use crate::rngstream::stream_rng;
use rand::Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BarrierRegime {
    Tunnelling,
    OverBarrier,
}

/// Where the classical trajectory starts for a given instantaneous field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BarrierSolution {
    pub regime: BarrierRegime,
    /// Distance of the starting point from the ion along −E.
    pub exit_position_au: f64,
    /// Energy above the barrier top (over-barrier regime only).
    pub delta_e_au: Option<f64>,
    /// Longitudinal launch speed: 0 when tunnelling, √(2ΔE) over the barrier.
    pub v_parallel_au: f64,
}

/// Which static model locates the tunnel exit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExitModel {
    /// Outer root of F·z² − Ip·z + z_eff = 0.
    #[default]
    FieldDirection,
    /// Separation of the static problem in parabolic coordinates (m = 0
    /// ground state): largest root of F·η³ − 2·Ip·η² + 4·β₂·η + 1 = 0 with
    /// β₂ = z_eff − κ/2, exit at z = η/2.
    Parabolic,
}

/// Barrier-suppression threshold F_c = Ip²/(4·z_eff); infinite for z_eff = 0.
pub fn barrier_suppression_field(atom: &AtomModel) -> f64 {
    if atom.z_eff == 0.0 {
        f64::INFINITY
    } else {
        atom.ip_au * atom.ip_au / (4.0 * atom.z_eff)
    }
}

/// Tunnel-exit solution for instantaneous field strength `f_inst`.
pub fn tunnel_exit(atom: &AtomModel, f_inst: f64, model: ExitModel) -> Result<BarrierSolution> {
    if !(f_inst > 0.0) {
        return Err(SfiError::NoBarrier(f_inst));
    }
    let ip = atom.ip_au;
    let z = atom.z_eff;
    if f_inst > barrier_suppression_field(atom) {
        // Suppressed barrier: start at the barrier top with the surplus
        // energy ΔE = −Ip + 2√(z·F) fed into the longitudinal velocity.
        let delta_e = -ip + 2.0 * (z * f_inst).sqrt();
        return Ok(BarrierSolution {
            regime: BarrierRegime::OverBarrier,
            exit_position_au: (z / f_inst).sqrt(),
            delta_e_au: Some(delta_e),
            v_parallel_au: obi_initial_velocity(delta_e)?,
        });
    }
    let exit = match model {
        ExitModel::FieldDirection => {
            let disc = (ip * ip - 4.0 * f_inst * z).max(0.0);
            (ip + disc.sqrt()) / (2.0 * f_inst)
        }
        ExitModel::Parabolic => parabolic_exit(atom, f_inst)?,
    };
    Ok(BarrierSolution {
        regime: BarrierRegime::Tunnelling,
        exit_position_au: exit,
        delta_e_au: None,
        v_parallel_au: 0.0,
    })
}

/// Largest root of the parabolic-coordinate exit equation, by bisection.
fn parabolic_exit(atom: &AtomModel, f: f64) -> Result<f64> {
    let ip = atom.ip_au;
    let beta2 = atom.z_eff - 0.5 * atom.kappa();
    let cubic = |eta: f64| f * eta * eta * eta - 2.0 * ip * eta * eta + 4.0 * beta2 * eta + 1.0;
    // The outer root sits just below η = 2·Ip/F where the cubic is positive.
    let mut hi = 2.0 * ip / f;
    if cubic(hi) < 0.0 {
        hi = 4.0 * ip / f;
    }
    let mut lo = hi;
    let mut found = false;
    for _ in 0..200 {
        lo *= 0.5;
        if cubic(lo) < 0.0 {
            found = true;
            break;
        }
    }
    if !found {
        return Err(SfiError::NoBarrier(f));
    }
    let (mut a, mut b) = (lo, hi);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if cubic(m) < 0.0 {
            a = m;
        } else {
            b = m;
        }
    }
    Ok(0.25 * (a + b)) // z = η/2
}

/// Longitudinal launch speed for over-barrier ionisation, v = √(2ΔE).
pub fn obi_initial_velocity(delta_e: f64) -> Result<f64> {
    if delta_e < 0.0 {
        return Err(SfiError::NotOverBarrier(delta_e));
    }
    Ok((2.0 * delta_e).sqrt())
}

/// Quasistatic ionisation-rate density
/// w(F, v⊥) = exp(−2κ³/(3F))·exp(−κ·v⊥²/F), relative (no prefactor).
/// Zero field gives zero weight.
pub fn quasistatic_rate(atom: &AtomModel, f_inst: f64, v_perp: f64) -> f64 {
    if f_inst <= 0.0 {
        return 0.0;
    }
    let k = atom.kappa();
    (-2.0 * k * k * k / (3.0 * f_inst) - k * v_perp * v_perp / f_inst).exp()
}

/// One weighted draw of trajectory initial conditions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InitialSample {
    pub t0: f64,
    pub r0: Vec2,
    pub v0: Vec2,
    pub weight: f64,
    /// |E(t0)| at the draw (diagnostic).
    pub f_inst: f64,
    /// Signed transverse launch speed (diagnostic).
    pub v_perp: f64,
}

/// Optional longitudinal-momentum prescription applied on top of the
/// quasistatic launch (none is shipped; the default leaves v∥ at the
/// barrier-model value).
pub trait LaunchAdjustment: Sync {
    fn adjust(&self, e_hat: Vec2, barrier: &BarrierSolution, v0: Vec2) -> Vec2;
}

#[derive(Debug, Clone)]
pub struct SampleOptions {
    pub exit_model: ExitModel,
    /// Transverse cutoff in units of √(F_max/κ); the default 5 keeps the
    /// truncated weight below 1e-5 of the total.
    pub v_max_factor: f64,
    /// Restrict birth times to a sub-window (defaults to the pulse window).
    pub t_window: Option<(f64, f64)>,
}

impl Default for SampleOptions {
    fn default() -> Self {
        SampleOptions {
            exit_model: ExitModel::default(),
            v_max_factor: 5.0,
            t_window: None,
        }
    }
}

fn peak_field_in_window(pulse: &LaserPulse, w: (f64, f64)) -> f64 {
    let n = 8192;
    let dt = (w.1 - w.0) / n as f64;
    (0..=n)
        .map(|i| pulse.electric_field(w.0 + i as f64 * dt).norm())
        .fold(0.0, f64::max)
}

/// Importance-sampled initial conditions: t₀ uniform over the window, v⊥
/// uniform over (−v_max, v_max), weight = quasistatic rate at the draw.
/// Deterministic per (seed, index); parallel generation order-independent.
pub fn sample_initial_conditions(
    pulse: &LaserPulse,
    atom: &AtomModel,
    n: usize,
    seed: u64,
    opts: &SampleOptions,
    adjust: Option<&dyn LaunchAdjustment>,
) -> Result<Vec<InitialSample>> {
    if n == 0 {
        return Err(SfiError::Sampling("requested zero samples".into()));
    }
    let window = opts.t_window.unwrap_or_else(|| pulse.window());
    let f_max = peak_field_in_window(pulse, window);
    if f_max == 0.0 {
        return Err(SfiError::Sampling("field is identically zero".into()));
    }
    let v_max = opts.v_max_factor * (f_max / atom.kappa()).sqrt();
    let samples = (0..n)
        .map(|i| {
            let mut rng = stream_rng(seed, i as u64);
            let t0 = window.0 + rng.random::<f64>() * (window.1 - window.0);
            let v_perp = (2.0 * rng.random::<f64>() - 1.0) * v_max;
            draw_sample(pulse, atom, t0, v_perp, opts.exit_model, adjust)
        })
        .collect();
    Ok(samples)
}

fn draw_sample(
    pulse: &LaserPulse,
    atom: &AtomModel,
    t0: f64,
    v_perp: f64,
    model: ExitModel,
    adjust: Option<&dyn LaunchAdjustment>,
) -> InitialSample {
    let e = pulse.electric_field(t0);
    let f = e.norm();
    let weight = quasistatic_rate(atom, f, v_perp);
    if weight == 0.0 || f == 0.0 {
        return InitialSample {
            t0,
            r0: Vec2::ZERO,
            v0: Vec2::ZERO,
            weight: 0.0,
            f_inst: f,
            v_perp,
        };
    }
    // tunnel_exit cannot fail for f > 0.
    let barrier = tunnel_exit(atom, f, model).expect("positive field");
    let e_hat = e * (1.0 / f);
    let out_dir = -e_hat;
    let r0 = out_dir * barrier.exit_position_au;
    let mut v0 = out_dir.perp() * v_perp + out_dir * barrier.v_parallel_au;
    if let Some(adj) = adjust {
        v0 = adj.adjust(e_hat, &barrier, v0);
    }
    InitialSample {
        t0,
        r0,
        v0,
        weight,
        f_inst: f,
        v_perp,
    }
}

/// Rejection sampler drawing unweighted samples from the same density;
/// retained as the independent oracle for the importance sampler.
pub fn rejection_sample_initial_conditions(
    pulse: &LaserPulse,
    atom: &AtomModel,
    n: usize,
    seed: u64,
    opts: &SampleOptions,
) -> Result<Vec<InitialSample>> {
    if n == 0 {
        return Err(SfiError::Sampling("requested zero samples".into()));
    }
    let window = opts.t_window.unwrap_or_else(|| pulse.window());
    let f_max = peak_field_in_window(pulse, window);
    if f_max == 0.0 {
        return Err(SfiError::Sampling("field is identically zero".into()));
    }
    let v_max = opts.v_max_factor * (f_max / atom.kappa()).sqrt();
    let bound = quasistatic_rate(atom, f_max, 0.0);
    let samples = (0..n)
        .map(|i| {
            let mut rng = stream_rng(seed, i as u64);
            loop {
                let t0 = window.0 + rng.random::<f64>() * (window.1 - window.0);
                let v_perp = (2.0 * rng.random::<f64>() - 1.0) * v_max;
                let u: f64 = rng.random();
                let w = quasistatic_rate(atom, pulse.electric_field(t0).norm(), v_perp);
                if u * bound < w {
                    let mut s = draw_sample(pulse, atom, t0, v_perp, opts.exit_model, None);
                    s.weight = 1.0;
                    return s;
                }
            }
        })
        .collect();
    Ok(samples)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atom::PotentialKind;
    use crate::field::{Envelope, Helicity};
    use approx::assert_relative_eq;

    fn hydrogen() -> AtomModel {
        AtomModel::new(0.5, 1.0, PotentialKind::Coulomb).unwrap()
    }

    #[test]
    fn field_direction_exit_quadratic_root() {
        // Quadratic-root oracle: (0.5 + √(0.25 − 0.2)) / 0.1 = 7.2360679…
        let s = tunnel_exit(&hydrogen(), 0.05, ExitModel::FieldDirection).unwrap();
        assert_eq!(s.regime, BarrierRegime::Tunnelling);
        assert_relative_eq!(
            s.exit_position_au,
            (0.5 + 0.05f64.sqrt()) / 0.1,
            max_relative = 1e-12
        );
        assert_eq!(s.v_parallel_au, 0.0);
        assert!(s.delta_e_au.is_none());
    }

    #[test]
    fn regime_boundary_is_continuous() {
        // F = Ip²/4Z = 0.0625: double root, exit = 4, ΔE = 0, v∥ = 0.
        let atom = hydrogen();
        let s = tunnel_exit(&atom, 0.0625, ExitModel::FieldDirection).unwrap();
        assert_eq!(s.regime, BarrierRegime::Tunnelling);
        assert_relative_eq!(s.exit_position_au, 4.0, max_relative = 1e-12);
        assert_eq!(s.v_parallel_au, 0.0);

        // Just above: over-barrier branch agrees continuously.
        let s2 = tunnel_exit(&atom, 0.0625 * (1.0 + 1e-9), ExitModel::FieldDirection).unwrap();
        assert_eq!(s2.regime, BarrierRegime::OverBarrier);
        assert!((s2.exit_position_au - 4.0).abs() < 1e-4);
        assert!(s2.v_parallel_au < 1e-4);
    }

    #[test]
    fn over_barrier_energy_and_velocity() {
        // Closed-form oracle: ΔE = −0.5 + 2√0.09 = 0.1, v∥ = √0.2.
        let s = tunnel_exit(&hydrogen(), 0.09, ExitModel::FieldDirection).unwrap();
        assert_eq!(s.regime, BarrierRegime::OverBarrier);
        assert_relative_eq!(s.delta_e_au.unwrap(), 0.1, max_relative = 1e-12);
        assert_relative_eq!(s.v_parallel_au, 0.2f64.sqrt(), max_relative = 1e-12);
        assert_relative_eq!(s.exit_position_au, (1.0f64 / 0.09).sqrt(), max_relative = 1e-12);
    }

    #[test]
    fn obi_velocity_values() {
        assert_eq!(obi_initial_velocity(0.0).unwrap(), 0.0);
        assert_relative_eq!(obi_initial_velocity(0.5).unwrap(), 1.0, max_relative = 1e-15);
        assert_relative_eq!(
            obi_initial_velocity(0.1).unwrap(),
            0.4472135954999579,
            max_relative = 1e-12
        );
        assert!(obi_initial_velocity(-1e-9).is_err());
    }

    #[test]
    fn rate_values_and_shape() {
        let atom = hydrogen(); // κ = 1
        assert_relative_eq!(
            quasistatic_rate(&atom, 0.05, 0.0),
            (-40.0f64 / 3.0).exp(),
            max_relative = 1e-12
        );
        // v⊥ = √(F/κ) costs exactly one e-fold.
        let f = 0.05;
        let vp = (f / atom.kappa()).sqrt();
        assert_relative_eq!(
            quasistatic_rate(&atom, f, vp) / quasistatic_rate(&atom, f, 0.0),
            (-1.0f64).exp(),
            max_relative = 1e-12
        );
        // Field-ratio oracle: exp(−(2/3)(1/0.06 − 1/0.05)) = exp(+20/9).
        assert_relative_eq!(
            quasistatic_rate(&atom, 0.06, 0.0) / quasistatic_rate(&atom, 0.05, 0.0),
            (2.0f64 / 3.0 * (1.0 / 0.05 - 1.0 / 0.06)).exp(),
            max_relative = 1e-10
        );
        // Monotone in F, even and decreasing in v⊥, zero at zero field.
        assert!(quasistatic_rate(&atom, 0.051, 0.1) > quasistatic_rate(&atom, 0.05, 0.1));
        assert_eq!(
            quasistatic_rate(&atom, 0.05, 0.3),
            quasistatic_rate(&atom, 0.05, -0.3)
        );
        assert!(quasistatic_rate(&atom, 0.05, 0.3) < quasistatic_rate(&atom, 0.05, 0.2));
        assert_eq!(quasistatic_rate(&atom, 0.0, 0.0), 0.0);
    }

    #[test]
    fn exit_monotone_and_weak_field_limit() {
        let atom = hydrogen();
        let mut last = f64::INFINITY;
        for i in 1..40 {
            let f = 0.0015 * i as f64;
            let s = tunnel_exit(&atom, f, ExitModel::FieldDirection).unwrap();
            assert!(s.exit_position_au < last);
            last = s.exit_position_au;
        }
        // Weak-field limit: exit·F/Ip → 1, deficit ~ 4F·Z/Ip² for hydrogen.
        for f in [1e-3, 1e-4, 1e-5] {
            let s = tunnel_exit(&atom, f, ExitModel::FieldDirection).unwrap();
            assert!((s.exit_position_au * f / atom.ip_au - 1.0).abs() < 5.0 * f);
        }
    }

    #[test]
    fn parabolic_exit_matches_field_direction_at_weak_field() {
        let atom = hydrogen();
        for f in [1e-3, 3e-4, 1e-4] {
            let fd = tunnel_exit(&atom, f, ExitModel::FieldDirection).unwrap();
            let pb = tunnel_exit(&atom, f, ExitModel::Parabolic).unwrap();
            let rel = (pb.exit_position_au - fd.exit_position_au).abs() / fd.exit_position_au;
            assert!(rel < 0.02, "F={f}: parabolic {} vs field-direction {}",
                pb.exit_position_au, fd.exit_position_au);
        }
    }

    #[test]
    fn no_barrier_without_field() {
        assert!(matches!(
            tunnel_exit(&hydrogen(), 0.0, ExitModel::FieldDirection),
            Err(SfiError::NoBarrier(_))
        ));
        assert!(tunnel_exit(&hydrogen(), -0.01, ExitModel::Parabolic).is_err());
    }

    fn flat_circular() -> LaserPulse {
        LaserPulse::new(
            800.0,
            0.88e14,
            1.0,
            Helicity::Counterclockwise,
            0.0,
            Envelope::Trapezoidal { ramp_cycles: 0.25 },
            8.0,
        )
        .unwrap()
    }

    #[test]
    fn sampler_is_deterministic() {
        let pulse = flat_circular();
        let atom = hydrogen();
        let a =
            sample_initial_conditions(&pulse, &atom, 500, 42, &SampleOptions::default(), None)
                .unwrap();
        let b =
            sample_initial_conditions(&pulse, &atom, 500, 42, &SampleOptions::default(), None)
                .unwrap();
        assert_eq!(a, b);
        let c =
            sample_initial_conditions(&pulse, &atom, 500, 43, &SampleOptions::default(), None)
                .unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn sampler_rejects_empty_requests() {
        let pulse = flat_circular();
        let atom = hydrogen();
        assert!(
            sample_initial_conditions(&pulse, &atom, 0, 1, &SampleOptions::default(), None)
                .is_err()
        );
        let dark = LaserPulse::new(
            800.0,
            0.0,
            1.0,
            Helicity::Counterclockwise,
            0.0,
            Envelope::CosSquared,
            2.0,
        )
        .unwrap();
        assert!(
            sample_initial_conditions(&dark, &atom, 10, 1, &SampleOptions::default(), None)
                .is_err()
        );
    }

    #[test]
    fn transverse_marginal_variance_on_plateau() {
        // Conditioned on plateau birth times the transverse marginal is a
        // zero-mean Gaussian with variance F/(2κ); Gaussian-moment oracle.
        let pulse = flat_circular();
        let atom = hydrogen();
        let f_plateau = pulse.f0() / 2f64.sqrt();
        let samples =
            rejection_sample_initial_conditions(&pulse, &atom, 40_000, 9, &SampleOptions::default())
                .unwrap();
        let (t0, t1) = pulse.window();
        let tr = 0.25 * pulse.period();
        let on_plateau: Vec<f64> = samples
            .iter()
            .filter(|s| s.t0 > t0 + tr && s.t0 < t1 - tr)
            .map(|s| s.v_perp)
            .collect();
        assert!(on_plateau.len() > 30_000);
        let n = on_plateau.len() as f64;
        let mean = on_plateau.iter().sum::<f64>() / n;
        let var = on_plateau.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
        let expected = f_plateau / (2.0 * atom.kappa());
        assert!(mean.abs() < 3.0 * (expected / n).sqrt(), "mean {mean}");
        assert!(
            (var - expected).abs() / expected < 0.03,
            "var {var} vs {expected}"
        );
    }

    #[test]
    fn importance_weights_match_rejection_density() {
        // Coarse 12×12 histogram comparison between the weighted importance
        // samples and the unweighted rejection oracle.
        let pulse = flat_circular();
        let atom = hydrogen();
        let opts = SampleOptions::default();
        let imp = sample_initial_conditions(&pulse, &atom, 60_000, 5, &opts, None).unwrap();
        let rej = rejection_sample_initial_conditions(&pulse, &atom, 60_000, 6, &opts).unwrap();
        let (t0, t1) = pulse.window();
        let vmax = opts.v_max_factor * (pulse.f0() / 2f64.sqrt() / atom.kappa()).sqrt();
        let nb = 12;
        let mut h_imp = vec![0.0f64; nb * nb];
        let mut h_imp_sq = vec![0.0f64; nb * nb];
        let mut h_rej = vec![0.0f64; nb * nb];
        let bin = |s: &InitialSample| {
            let it = (((s.t0 - t0) / (t1 - t0)) * nb as f64) as usize;
            let iv = (((s.v_perp + vmax) / (2.0 * vmax)) * nb as f64) as usize;
            (it.min(nb - 1), iv.min(nb - 1))
        };
        for s in &imp {
            let (it, iv) = bin(s);
            h_imp[it * nb + iv] += s.weight;
            h_imp_sq[it * nb + iv] += s.weight * s.weight;
        }
        for s in &rej {
            let (it, iv) = bin(s);
            h_rej[it * nb + iv] += 1.0;
        }
        let (si, sr) = (h_imp.iter().sum::<f64>(), h_rej.iter().sum::<f64>());
        for i in 0..nb * nb {
            let (pi, pr) = (h_imp[i] / si, h_rej[i] / sr);
            if pr > 0.01 {
                // Agreement within combined Monte Carlo error.
                let sigma_imp = h_imp_sq[i].sqrt() / si;
                let sigma_rej = h_rej[i].sqrt() / sr;
                let sigma = (sigma_imp * sigma_imp + sigma_rej * sigma_rej).sqrt();
                assert!(
                    (pi - pr).abs() < 5.0 * sigma,
                    "bin {i}: importance {pi} vs rejection {pr} (σ = {sigma})"
                );
            }
        }
    }
}
