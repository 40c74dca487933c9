//! Classical trajectory propagation in the combined laser and ionic field,
//! asymptotic-momentum mapping, semiclassical phase accumulation, and
//! binning into momentum distributions.

use crate::atom::{AtomModel, PotentialKind};
use crate::error::{Result, SfiError};
use crate::field::LaserPulse;
use crate::geom::Vec2;
use crate::integrator::{integrate, StepControl, StepFlow};
use crate::pmd::{BinMode, MomentumDistribution, PmdSpec};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrajStatus {
    Propagating,
    Bound,
    Ionised,
}

/// One classical electron trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Trajectory {
    pub t0: f64,
    pub r0: Vec2,
    pub v0: Vec2,
    pub weight: f64,
    /// Current state.
    pub t: f64,
    pub r: Vec2,
    pub v: Vec2,
    pub status: TrajStatus,
    /// Running action integral ∫(v²/2 + V) dt from t0; None when the
    /// trajectory was created without phase tracking.
    pub phase_integral: Option<f64>,
    /// Final semiclassical phase, set at finalisation.
    pub phase: Option<f64>,
    /// Asymptotic momentum, set at finalisation for ionised trajectories.
    pub p_inf: Option<Vec2>,
    /// Closest approach to the ion seen so far.
    pub min_r: f64,
}

impl Trajectory {
    pub fn new(t0: f64, r0: Vec2, v0: Vec2, weight: f64) -> Self {
        Trajectory {
            t0,
            r0,
            v0,
            weight,
            t: t0,
            r: r0,
            v: v0,
            status: TrajStatus::Propagating,
            phase_integral: Some(0.0),
            phase: None,
            p_inf: None,
            min_r: r0.norm(),
        }
    }

    /// Without phase tracking (transcribed trajectories, backward runs).
    pub fn new_unphased(t0: f64, r0: Vec2, v0: Vec2, weight: f64) -> Self {
        let mut t = Self::new(t0, r0, v0, weight);
        t.phase_integral = None;
        t
    }

    pub fn from_sample(s: &crate::barrier::InitialSample) -> Self {
        Trajectory::new(s.t0, s.r0, s.v0, s.weight)
    }

    /// Total mechanical energy v²/2 + V(r) at the current state.
    pub fn energy(&self, atom: &AtomModel) -> f64 {
        0.5 * self.v.norm_sq() + atom.potential(self.r)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct PropagateOptions {
    /// Relative step tolerance of the adaptive integrator.
    pub tol: f64,
    /// Below this radius singular potentials switch to fictitious-time
    /// (dt = r·dτ) substeps.
    pub r_switch: f64,
    /// Below this radius a close encounter is reported as unresolved.
    pub collision_floor: f64,
    pub max_steps: usize,
}

impl Default for PropagateOptions {
    fn default() -> Self {
        PropagateOptions {
            tol: 1e-10,
            r_switch: 1.0,
            collision_floor: 1e-4,
            max_steps: 50_000_000,
        }
    }
}

fn step_control(opts: &PropagateOptions) -> StepControl {
    StepControl {
        rtol: opts.tol,
        atol: (opts.tol * 1e-3).max(1e-14),
        h_init: 1e-3,
        h_min: 1e-13,
        h_max: 1e6,
        max_steps: opts.max_steps,
    }
}

/// Acceleration −E(t) − ∇V(r) on the electron.
#[inline]
fn accel(pulse: &LaserPulse, atom: &AtomModel, t: f64, r: Vec2) -> Vec2 {
    atom.force(r) - pulse.electric_field(t)
}

fn is_singular(atom: &AtomModel) -> bool {
    atom.z_eff > 0.0
        && matches!(
            atom.potential_kind,
            PotentialKind::Coulomb | PotentialKind::Yukawa { .. }
        )
}

/// Snapshot handed to step observers.
#[derive(Debug, Clone, Copy)]
pub struct StepState {
    pub t: f64,
    pub r: Vec2,
    pub v: Vec2,
}

struct EndState {
    t: f64,
    r: Vec2,
    v: Vec2,
    action: f64,
    min_r: f64,
}

/// Integrate the classical equations of motion from (t, r, v) to t_target
/// (forward or backward), calling `obs` after every accepted step.
///
/// Near a singular ion (pure Coulomb or Yukawa) the stepping switches to the
/// time-regularised form d/dτ = r·d/dt below `r_switch`, which keeps close
/// encounters resolvable; approaches below `collision_floor` abort with
/// [`SfiError::CollisionUnresolved`].
fn integrate_classical<O>(
    pulse: &LaserPulse,
    atom: &AtomModel,
    start: StepState,
    action0: f64,
    t_target: f64,
    opts: &PropagateOptions,
    mut obs: O,
) -> Result<EndState>
where
    O: FnMut(StepState, StepState) -> StepFlow,
{
    let ctrl = step_control(opts);
    let singular = is_singular(atom);
    let dir = if t_target >= start.t { 1.0 } else { -1.0 };
    let mut t = start.t;
    let mut y = [start.r.x, start.r.y, start.v.x, start.v.y, action0];
    let mut min_r = start.r.norm();
    let mut halted = false;

    let f5 = |tt: f64, s: &[f64; 5]| -> [f64; 5] {
        let r = Vec2::new(s[0], s[1]);
        let v = Vec2::new(s[2], s[3]);
        let a = accel(pulse, atom, tt, r);
        [v.x, v.y, a.x, a.y, 0.5 * v.norm_sq() + atom.potential(r)]
    };

    let unpack5 = |tt: f64, s: &[f64; 5]| StepState {
        t: tt,
        r: Vec2::new(s[0], s[1]),
        v: Vec2::new(s[2], s[3]),
    };

    loop {
        if (t - t_target) * dir >= 0.0 || halted {
            break;
        }
        let r_now = (y[0] * y[0] + y[1] * y[1]).sqrt();
        if !singular || r_now > opts.r_switch {
            // Plain stepping; bail out to regularised mode when the orbit
            // dives under r_switch.
            t = integrate(&f5, t, t_target, &mut y, &ctrl, |t0, y0, t1, y1| {
                let rn = (y1[0] * y1[0] + y1[1] * y1[1]).sqrt();
                min_r = min_r.min(rn);
                if obs(unpack5(t0, y0), unpack5(t1, y1)) == StepFlow::Halt {
                    halted = true;
                    return StepFlow::Halt;
                }
                if singular && rn < opts.r_switch {
                    StepFlow::Halt
                } else {
                    StepFlow::Continue
                }
            })
            .map_err(|e| collision_context(e, min_r))?;
        } else {
            // Fictitious-time substeps: state gains t, derivatives scale by
            // dir·r so τ always advances.
            let mut z = [y[0], y[1], y[2], y[3], y[4], t];
            let f6 = |_tau: f64, s: &[f64; 6]| -> [f64; 6] {
                let r = Vec2::new(s[0], s[1]);
                let v = Vec2::new(s[2], s[3]);
                let rn = r.norm().max(1e-12);
                let a = accel(pulse, atom, s[5], r);
                let sc = dir * rn;
                [
                    sc * v.x,
                    sc * v.y,
                    sc * a.x,
                    sc * a.y,
                    sc * (0.5 * v.norm_sq() + atom.potential(r)),
                    sc,
                ]
            };
            let mut collided = false;
            let r_exit = 1.5 * opts.r_switch;
            integrate(&f6, 0.0, f64::MAX, &mut z, &ctrl, |tau0, z0, _tau1, z1| {
                let _ = tau0;
                let rn = (z1[0] * z1[0] + z1[1] * z1[1]).sqrt();
                min_r = min_r.min(rn);
                let s0 = StepState {
                    t: z0[5],
                    r: Vec2::new(z0[0], z0[1]),
                    v: Vec2::new(z0[2], z0[3]),
                };
                let s1 = StepState {
                    t: z1[5],
                    r: Vec2::new(z1[0], z1[1]),
                    v: Vec2::new(z1[2], z1[3]),
                };
                if obs(s0, s1) == StepFlow::Halt {
                    halted = true;
                    return StepFlow::Halt;
                }
                if rn < opts.collision_floor {
                    collided = true;
                    return StepFlow::Halt;
                }
                if rn > r_exit || (s1.t - t_target) * dir >= 0.0 {
                    return StepFlow::Halt;
                }
                StepFlow::Continue
            })
            .map_err(|e| collision_context(e, min_r))?;
            if collided {
                return Err(SfiError::CollisionUnresolved {
                    t: z[5],
                    closest_approach: min_r,
                });
            }
            y = [z[0], z[1], z[2], z[3], z[4]];
            t = z[5];
            if !halted && (t - t_target) * dir > 0.0 {
                // The τ step overran the target; walk back the short excess.
                t = integrate(&f5, t, t_target, &mut y, &ctrl, |t0, y0, t1, y1| {
                    obs(unpack5(t0, y0), unpack5(t1, y1))
                })
                .map_err(|e| collision_context(e, min_r))?;
            }
        }
    }

    Ok(EndState {
        t,
        r: Vec2::new(y[0], y[1]),
        v: Vec2::new(y[2], y[3]),
        action: y[4],
        min_r,
    })
}

fn collision_context(e: SfiError, min_r: f64) -> SfiError {
    match e {
        SfiError::CollisionUnresolved { t, .. } => SfiError::CollisionUnresolved {
            t,
            closest_approach: min_r,
        },
        other => other,
    }
}

/// Propagate a trajectory to `t_end` with adaptive error control.
pub fn propagate(
    traj: &Trajectory,
    pulse: &LaserPulse,
    atom: &AtomModel,
    t_end: f64,
    opts: &PropagateOptions,
) -> Result<Trajectory> {
    if t_end < traj.t {
        return Err(SfiError::InvalidParameter(format!(
            "t_end = {t_end} precedes the trajectory time {}",
            traj.t
        )));
    }
    let start = StepState {
        t: traj.t,
        r: traj.r,
        v: traj.v,
    };
    let end = integrate_classical(
        pulse,
        atom,
        start,
        traj.phase_integral.unwrap_or(0.0),
        t_end,
        opts,
        |_, _| StepFlow::Continue,
    )?;
    let mut out = *traj;
    out.t = end.t;
    out.r = end.r;
    out.v = end.v;
    out.min_r = traj.min_r.min(end.min_r);
    if traj.phase_integral.is_some() {
        out.phase_integral = Some(end.action);
    }
    Ok(out)
}

/// Backward/forward propagation with an event observer; used by the
/// backward-propagation analysis.
pub fn propagate_with_observer<O>(
    traj: &Trajectory,
    pulse: &LaserPulse,
    atom: &AtomModel,
    t_target: f64,
    opts: &PropagateOptions,
    obs: O,
) -> Result<Trajectory>
where
    O: FnMut(StepState, StepState) -> StepFlow,
{
    let start = StepState {
        t: traj.t,
        r: traj.r,
        v: traj.v,
    };
    let end = integrate_classical(pulse, atom, start, 0.0, t_target, opts, obs)?;
    let mut out = *traj;
    out.t = end.t;
    out.r = end.r;
    out.v = end.v;
    out.min_r = traj.min_r.min(end.min_r);
    out.phase_integral = None;
    Ok(out)
}

/// Outcome of a parallel ensemble propagation.
#[derive(Debug, Clone)]
pub struct EnsembleOutcome {
    pub trajectories: Vec<Trajectory>,
    pub collision_count: usize,
    pub collision_weight: f64,
    /// Samples dropped up front because their rate weight was zero.
    pub zero_weight_count: usize,
}

/// Propagate an ensemble of sampled initial conditions to `t_end` in
/// parallel. Collisions are counted and their weight tracked; the surviving
/// trajectories keep their input order, so results are reproducible
/// independent of scheduling.
pub fn propagate_ensemble(
    samples: &[crate::barrier::InitialSample],
    pulse: &LaserPulse,
    atom: &AtomModel,
    t_end: f64,
    opts: &PropagateOptions,
) -> EnsembleOutcome {
    let results: Vec<Option<std::result::Result<Trajectory, f64>>> = samples
        .par_iter()
        .map(|s| {
            if s.weight == 0.0 {
                return None;
            }
            let traj = Trajectory::from_sample(s);
            Some(match propagate(&traj, pulse, atom, t_end, opts) {
                Ok(t) => Ok(t),
                Err(_) => Err(s.weight),
            })
        })
        .collect();
    let mut out = EnsembleOutcome {
        trajectories: Vec::with_capacity(samples.len()),
        collision_count: 0,
        collision_weight: 0.0,
        zero_weight_count: 0,
    };
    for r in results {
        match r {
            None => out.zero_weight_count += 1,
            Some(Ok(t)) => out.trajectories.push(t),
            Some(Err(w)) => {
                out.collision_count += 1;
                out.collision_weight += w;
            }
        }
    }
    out
}

/// Analytic asymptotic momentum of the post-pulse Kepler motion through the
/// trajectory's current state. Requires positive total energy.
pub fn asymptotic_momentum(traj: &Trajectory, atom: &AtomModel) -> Result<Vec2> {
    let energy = traj.energy(atom);
    if energy <= 0.0 {
        return Err(SfiError::BoundTrajectory { energy });
    }
    let p_mag = (2.0 * energy).sqrt();
    if !atom.has_coulomb_tail() {
        // Short-range or free: the direction is already asymptotic.
        let vhat = traj.v.unit();
        if vhat == Vec2::ZERO {
            return Err(SfiError::BoundTrajectory { energy });
        }
        return Ok(vhat * p_mag);
    }
    let z = atom.z_eff;
    let r = traj.r;
    let v = traj.v;
    let rn = r.norm();
    let l = r.cross(v);
    if l.abs() < 1e-12 * rn * v.norm().max(1e-300) {
        // Radial orbit: escapes (or falls in) along the radius.
        let sign = if v.dot(r) >= 0.0 { 1.0 } else { -1.0 };
        return Ok(r.unit() * (p_mag * sign));
    }
    // Laplace–Runge–Lenz vector points at the perihelion.
    let a_rl = Vec2::new(v.y * l - z * r.x / rn, -v.x * l - z * r.y / rn);
    let ecc = a_rl.norm() / z;
    let theta_p = a_rl.angle();
    let nu_inf = (-1.0 / ecc).acos();
    let theta_out = theta_p + l.signum() * nu_inf;
    Ok(Vec2::new(theta_out.cos(), theta_out.sin()) * p_mag)
}

/// Post-pulse contribution of the Coulomb tail to the semiclassical phase:
/// lim_{t→∞} [ Z·∫ dt′/r(t′) − (Z/κ)·ln t ] along the outgoing hyperbola.
/// The discarded (Z/κ)·ln t reference is common to every trajectory of the
/// same final energy, so it drops out of any fixed-momentum interference.
pub fn post_pulse_coulomb_phase(r: Vec2, v: Vec2, z: f64) -> f64 {
    if z == 0.0 {
        return 0.0;
    }
    let rn = r.norm();
    let energy = 0.5 * v.norm_sq() - z / rn;
    if energy <= 0.0 {
        return 0.0;
    }
    let kappa = (2.0 * energy).sqrt();
    let a = z / (kappa * kappa);
    let l = r.cross(v);
    let ecc = (1.0 + 2.0 * energy * l * l / (z * z)).sqrt();
    let ch = ((rn / a + 1.0) / ecc).max(1.0);
    let xi = (ch + (ch * ch - 1.0).sqrt()).ln() * if r.dot(v) >= 0.0 { 1.0 } else { -1.0 };
    -(z / kappa) * (xi + (ecc * (a * a * a / z).sqrt() / 2.0).ln())
}

/// Semiclassical phase φ = Ip·t₀ − ∫(v²/2 + V) dt + post-pulse Coulomb
/// correction, from the stored action integral.
pub fn accumulate_phase(traj: &Trajectory, atom: &AtomModel) -> Result<f64> {
    let action = traj.phase_integral.ok_or(SfiError::MissingPathSamples)?;
    let mut phi = atom.ip_au * traj.t0 - action;
    if atom.has_coulomb_tail() && traj.energy(atom) > 0.0 {
        phi += post_pulse_coulomb_phase(traj.r, traj.v, atom.z_eff);
    }
    Ok(phi)
}

/// Decide bound/ionised, attach the asymptotic momentum, and (for coherent
/// binning) the final phase.
pub fn finalize_trajectory(traj: &mut Trajectory, atom: &AtomModel, with_phase: bool) {
    match asymptotic_momentum(traj, atom) {
        Ok(p) => {
            traj.status = TrajStatus::Ionised;
            traj.p_inf = Some(p);
            if with_phase {
                traj.phase = accumulate_phase(traj, atom).ok();
            }
        }
        Err(_) => {
            traj.status = TrajStatus::Bound;
            traj.p_inf = None;
        }
    }
}

/// Bin finalised trajectories into a momentum distribution. Bound
/// trajectories are excluded and their weight reported separately.
pub fn bin_pmd(trajs: &[Trajectory], spec: PmdSpec) -> Result<MomentumDistribution> {
    let mut pmd = MomentumDistribution::new(spec);
    for traj in trajs {
        match traj.status {
            TrajStatus::Propagating => {
                return Err(SfiError::InvalidParameter(
                    "bin_pmd requires finalised trajectories".into(),
                ))
            }
            TrajStatus::Bound => pmd.bound_weight += traj.weight,
            TrajStatus::Ionised => {
                let p = traj.p_inf.expect("ionised trajectory has p_inf");
                let phase = match spec.mode {
                    BinMode::Incoherent => 0.0,
                    BinMode::Coherent => traj.phase.ok_or(SfiError::MissingPathSamples)?,
                };
                pmd.add(p, traj.weight, phase);
            }
        }
    }
    pmd.check_coverage(0.01);
    Ok(pmd)
}

/// Relative deviation |F(⟨r⟩) − ⟨F⟩| / |⟨F⟩| between the ionic force at the
/// ensemble's mean position and the mean ionic force, with weight-averaged
/// means. The uniform laser force cancels in the numerator and is omitted.
pub fn ehrenfest_deviation(trajs: &[Trajectory], atom: &AtomModel) -> Result<f64> {
    ehrenfest_deviation_with(trajs, |r| atom.force(r))
}

/// Same measure for an arbitrary test force field.
pub fn ehrenfest_deviation_with<F>(trajs: &[Trajectory], force: F) -> Result<f64>
where
    F: Fn(Vec2) -> Vec2,
{
    let live: Vec<&Trajectory> = trajs
        .iter()
        .filter(|t| t.status == TrajStatus::Propagating && t.weight > 0.0)
        .collect();
    if live.len() < 2 {
        return Err(SfiError::EmptyInput(
            "ehrenfest deviation needs at least 2 propagating trajectories".into(),
        ));
    }
    let wsum: f64 = live.iter().map(|t| t.weight).sum();
    let mut r_mean = Vec2::ZERO;
    let mut f_mean = Vec2::ZERO;
    for t in &live {
        r_mean += t.r * (t.weight / wsum);
        f_mean += force(t.r) * (t.weight / wsum);
    }
    let f_at_mean = force(r_mean);
    let denom = f_mean.norm();
    if denom == 0.0 {
        return Err(SfiError::ForceNode);
    }
    Ok((f_at_mean - f_mean).norm() / denom)
}
