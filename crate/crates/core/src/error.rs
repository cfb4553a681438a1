use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("contact form is not positive on the Hamiltonian field at {point:?} (lambda(X_H) = {value})")]
    NotStarShaped { point: [f64; 4], value: f64 },

    #[error("contact frame degenerates: |lambda(X3)| = {value}")]
    DegenerateFrame { value: f64 },

    #[error("frame loses rank along the orbit at parameter {t}")]
    FrameDegenerate { t: f64 },

    #[error("step size underflow at t = {t} (h = {step})")]
    StepUnderflow { t: f64, step: f64 },

    #[error("integrator exceeded {steps} steps at t = {t}")]
    StepLimit { t: f64, steps: usize },

    #[error("Newton iteration did not converge after {iterations} iterations (residual {residual})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("loop does not close: gap {gap}")]
    NotClosed { gap: f64 },

    #[error("hypothesis failed: {0}")]
    HypothesisFailure(String),

    #[error("critical point structure mismatch: {0}")]
    StructureMismatch(String),

    #[error("no return within {elapsed} time units")]
    NoReturn { elapsed: f64 },

    #[error("orbit is not hyperbolic (trace {trace})")]
    NotHyperbolic { trace: f64 },

    #[error("path sampling too coarse: angular step {step} exceeds pi/2")]
    SamplingTooCoarse { step: f64 },

    #[error("degenerate orbit: winding interval endpoint within {margin} of an integer")]
    DegenerateOrbit { margin: f64 },

    #[error("integer rounding unsafe: raw value {raw}")]
    RoundingUnsafe { raw: f64 },

    #[error("operator asymmetry {residual} exceeds bound")]
    AsymmetryTooLarge { residual: f64 },

    #[error("trusted spectral band too narrow: {0}")]
    BandTooNarrow(String),

    #[error("section vanishes or has vanishing pairing: {0}")]
    VanishingSection(String),

    #[error("no stereographic pole with distance above {best}")]
    NoSafePole { best: f64 },

    #[error("push-off comes within {distance} of the original curve")]
    OffsetTooLarge { distance: f64 },

    #[error("point g = {g} lies outside the energy cap")]
    OutsideEnergyCap { g: f64 },

    #[error("root bracket failure on [{lo}, {hi}]")]
    BracketFailure { lo: f64, hi: f64 },

    #[error("profile did not reach its asymptote within s-span {s_span} (gap {gap})")]
    SlowConvergence { s_span: f64, gap: f64 },

    #[error("winding unreliable: projected derivative norm {norm}")]
    UnreliableWinding { norm: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
