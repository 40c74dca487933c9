use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum SfiError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("undefined Keldysh parameter: peak field is zero")]
    UndefinedKeldysh,

    #[error("no barrier without field (F = {0})")]
    NoBarrier(f64),

    #[error("not in over-barrier regime (ΔE = {0})")]
    NotOverBarrier(f64),

    #[error("cannot sample initial conditions: {0}")]
    Sampling(String),

    #[error("collision unresolved at t = {t}, closest approach {closest_approach} a.u.")]
    CollisionUnresolved { t: f64, closest_approach: f64 },

    #[error("Ehrenfest deviation undefined at force node")]
    ForceNode,

    #[error("trajectory has no stored phase integral; propagate with phase accumulation enabled")]
    MissingPathSamples,

    #[error("trajectory is bound (E = {energy} a.u.), no asymptotic momentum")]
    BoundTrajectory { energy: f64 },

    #[error("ground state did not converge: residual {residual} after {iterations} iterations")]
    GroundStateNonConvergence { residual: f64, iterations: usize },

    #[error("no bound state on this grid: lowest state energy {energy} ≥ 0")]
    GroundStateUnbound { energy: f64 },

    #[error("time step fails stability bound: dt·E_max = {0} ≥ π")]
    StepTooLarge(f64),

    #[error("Gabor window δ₀ = {delta0} does not resolve the grid (needs δ₀ > 2·dx = {min})")]
    WindowTooNarrow { delta0: f64, min: f64 },

    #[error("bound-state projection basis missing")]
    MissingBoundBasis,

    #[error("nothing to transcribe: bound fraction {bound_fraction} exceeds 99.9%")]
    NothingToTranscribe { bound_fraction: f64 },

    #[error("no unique peak: distribution is degenerate or empty")]
    NoUniquePeak,

    #[error("angle-time mapping unreliable below ellipticity 0.5 (got {0})")]
    AngleTimeUnreliable(f64),

    #[error("delay reference undefined: {0}")]
    DelayReference(String),

    #[error("empty input: {0}")]
    EmptyInput(String),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("malformed file: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, SfiError>;
