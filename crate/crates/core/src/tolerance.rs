/// Numerical tolerances shared by every module.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Maximum deviation from Hermiticity of a valid density matrix.
    pub hermitian: f64,
    /// Maximum deviation of the trace from one.
    pub trace: f64,
    /// Smallest admissible eigenvalue of a density matrix or Choi matrix.
    pub psd: f64,
    /// Trace preservation and Kraus/natural compatibility.
    pub channel: f64,
    /// Eigenvalues within this distance of 1 count towards the fixed-point multiplicity.
    pub eigenvalue_one: f64,
    /// Required residual `|Phi v - v|` of a fixed point.
    pub fixed_point_residual: f64,
    /// Convergence threshold of the power-iteration fallback.
    pub power_iteration: f64,
    pub power_iteration_max_iter: usize,
    /// Eigenvalue gap below which a qubit spectrum is treated as degenerate.
    pub degenerate_gap: f64,
    /// Absolute tolerance of adaptive quadrature.
    pub quadrature: f64,
}

pub const TOL: Tolerances = Tolerances {
    hermitian: 1e-12,
    trace: 1e-12,
    psd: 1e-10,
    channel: 1e-10,
    eigenvalue_one: 1e-8,
    fixed_point_residual: 1e-10,
    power_iteration: 1e-12,
    power_iteration_max_iter: 1_000_000,
    degenerate_gap: 1e-12,
    quadrature: 1e-9,
};

impl Default for Tolerances {
    fn default() -> Self {
        TOL
    }
}
