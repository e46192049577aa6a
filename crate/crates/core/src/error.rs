use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised by the dielectric, mixing, polaron, matching and signal layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("frequency {nu_thz} THz is outside the tabulated range [{lo_thz}, {hi_thz}] THz")]
    OutOfRange { nu_thz: f64, lo_thz: f64, hi_thz: f64 },

    #[error("invalid liquid model: {0}")]
    InvalidModel(String),

    #[error("Clausius-Mossotti divergence at {nu_thz} THz, ce = {ce_um} uM")]
    ClausiusMossottiDivergence { nu_thz: f64, ce_um: f64 },

    #[error("singular denominator: {0}")]
    Singular(String),

    #[error("no polaron resonance in range [{lo_thz}, {hi_thz}] THz")]
    NoResonance { lo_thz: f64, hi_thz: f64 },

    #[error("no consistent eps''(nu0): R = {0} exceeds 1/4")]
    NoConsistentLoss(f64),

    #[error("singular line shape at {nu_thz} THz: |eps| below 1e-12")]
    SingularLineshape { nu_thz: f64 },

    #[error("degenerate line shape: {0}")]
    DegenerateLineshape(String),

    #[error("target frequency {nu_thz} THz unreachable in {liquid}: required concentration {ce_um} uM is negative")]
    Unreachable { liquid: String, nu_thz: f64, ce_um: f64 },

    #[error("no profile-matched impostoron in range [{lo_thz}, {hi_thz}] THz")]
    NoProfileMatch { lo_thz: f64, hi_thz: f64 },

    #[error("grid error: {0}")]
    Grid(String),

    #[error("no signal: map is identically zero")]
    NoSignal,

    #[error("step fit failed: {0}")]
    StepFit(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("maximum on spectrum edge at {nu_thz} THz")]
    EdgePeak { nu_thz: f64 },

    #[error("unbounded width: no half-maximum crossing on the {side} side of {nu_thz} THz")]
    UnboundedWidth { nu_thz: f64, side: &'static str },

    #[error("{path}:{line}: {msg}")]
    Parse { path: String, line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn grid(msg: impl Into<String>) -> Self {
        Error::Grid(msg.into())
    }
}
