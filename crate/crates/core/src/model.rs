//! Model parameters, phase classification, and the mean-field ground-state
//! solution of the two-photon Dicke model.
//!
//! The cavity mode at frequency `omega` couples to `n_qubits` two-level
//! systems with transition frequency `epsilon` through a two-photon term of
//! strength `g`. After the Holstein-Primakoff mapping and dropping the spin
//! fluctuations, the dynamics of the cavity reduces to a quadratic
//! Hamiltonian with effective two-photon drive `g_beta`; everything in this
//! module is a scalar function of `(omega, epsilon, n_qubits, g)` and the
//! real order parameter `beta`.

use crate::error::{Error, Result};

/// Default guard below the unbounded boundary, relative to `omega`.
///
/// Couplings with `omega/2 - g < omega * DEFAULT_BOUNDARY_GAP` are rejected:
/// the excitation frequency vanishes there, periods diverge and
/// floating-point cancellation dominates every downstream quantity.
pub const DEFAULT_BOUNDARY_GAP: f64 = 1e-10;

/// Validated physical inputs plus the derived combinations
/// `lambda = omega / (2 epsilon N)` and `mu = 4 g^2 / omega^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    omega: f64,
    epsilon: f64,
    n_qubits: u64,
    g: f64,
    lambda: f64,
    mu: f64,
}

impl ModelParams {
    /// Validates the inputs and populates the derived quantities.
    ///
    /// Requires `omega > 0`, `epsilon > 0`, `n_qubits >= 1`, `0 <= g` and
    /// `g < omega/2` (with the default guard of [`DEFAULT_BOUNDARY_GAP`]).
    pub fn new(omega: f64, epsilon: f64, n_qubits: u64, g: f64) -> Result<Self> {
        Self::with_boundary_gap(omega, epsilon, n_qubits, g, DEFAULT_BOUNDARY_GAP)
    }

    /// Same as [`ModelParams::new`] with a caller-chosen relative guard
    /// below the unbounded boundary.
    pub fn with_boundary_gap(
        omega: f64,
        epsilon: f64,
        n_qubits: u64,
        g: f64,
        boundary_gap: f64,
    ) -> Result<Self> {
        if !omega.is_finite() || omega <= 0.0 {
            return Err(Error::NonPositiveFrequency {
                name: "omega",
                value: omega,
            });
        }
        if !epsilon.is_finite() || epsilon <= 0.0 {
            return Err(Error::NonPositiveFrequency {
                name: "epsilon",
                value: epsilon,
            });
        }
        if n_qubits < 1 {
            return Err(Error::ZeroQubits);
        }
        if !g.is_finite() || g < 0.0 {
            return Error::domain_err("g", format!("coupling must be finite and >= 0, got {g}"));
        }
        let min_gap = boundary_gap * omega;
        if omega / 2.0 - g < min_gap {
            return Err(Error::UnboundedRegion {
                g,
                boundary: omega / 2.0,
                min_gap,
            });
        }
        let n = n_qubits as f64;
        Ok(Self {
            omega,
            epsilon,
            n_qubits,
            g,
            lambda: omega / (2.0 * epsilon * n),
            mu: 4.0 * g * g / (omega * omega),
        })
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn n_qubits(&self) -> u64 {
        self.n_qubits
    }

    /// Qubit count as a float, the form every formula consumes.
    pub fn n(&self) -> f64 {
        self.n_qubits as f64
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// The product `N * epsilon`, the natural second axis of the phase
    /// diagram.
    pub fn n_epsilon(&self) -> f64 {
        self.n() * self.epsilon
    }
}

/// Which side of the quantum critical point a parameter set sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseTag {
    Normal,
    Superradiant,
}

impl std::fmt::Display for PhaseTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PhaseTag::Normal => write!(f, "Normal"),
            PhaseTag::Superradiant => write!(f, "Superradiant"),
        }
    }
}

/// Phase classification together with the critical coupling it used.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Phase {
    pub tag: PhaseTag,
    pub g_t: f64,
}

/// Sign of the order-parameter branch in the superradiant phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn sign(&self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

impl std::fmt::Display for Branch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Branch::Plus => write!(f, "+"),
            Branch::Minus => write!(f, "-"),
        }
    }
}

/// Complete mean-field ground-state data for one parameter point and one
/// order-parameter branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanFieldSolution {
    pub params: ModelParams,
    pub phase: Phase,
    /// Order parameter of the chosen branch; zero in the normal phase.
    pub beta0: f64,
    /// Effective two-photon drive `g sqrt(N - beta0^2) (2 beta0) / N`.
    pub g_beta: f64,
    /// Hyperbolic rotation angle diagonalizing the quadratic Hamiltonian.
    pub theta_a: f64,
    /// Frequency of the elementary excitations, `sqrt(omega^2 - 4 g_beta^2)`.
    pub omega_a: f64,
    /// Ground-state energy of the diagonalized Hamiltonian.
    pub e_g: f64,
}

/// Critical coupling `g_t = sqrt(omega epsilon N / 4)` separating the
/// normal and superradiant phases.
pub fn critical_coupling(p: &ModelParams) -> f64 {
    (p.omega * p.epsilon * p.n() / 4.0).sqrt()
}

/// Classifies the parameter point; the tie `g = g_t` counts as normal.
pub fn classify_phase(p: &ModelParams) -> Phase {
    let g_t = critical_coupling(p);
    let tag = if p.g <= g_t {
        PhaseTag::Normal
    } else {
        PhaseTag::Superradiant
    };
    Phase { tag, g_t }
}

/// Energy-minimizing order parameter.
///
/// Zero in the normal phase; in the superradiant phase
/// `+-sqrt((N/2)(1 - sqrt((1 - mu) / (4 mu^2 lambda^2 - mu))))`.
pub fn order_parameter(p: &ModelParams, branch: Branch) -> Result<f64> {
    let phase = classify_phase(p);
    if phase.tag == PhaseTag::Normal {
        return Ok(0.0);
    }
    let disc = 4.0 * p.mu * p.mu * p.lambda * p.lambda - p.mu;
    if disc <= 0.0 {
        return Error::domain_err(
            "order parameter",
            format!("4 mu^2 lambda^2 - mu = {disc} is not positive while g > g_t"),
        );
    }
    let ratio = (1.0 - p.mu) / disc;
    // ratio lies in (0, 1) for valid superradiant parameters; the max guard
    // absorbs rounding right at the phase boundary.
    let beta_sq = 0.5 * p.n() * (1.0 - ratio.sqrt()).max(0.0);
    Ok(branch.sign() * beta_sq.sqrt())
}

/// Effective two-photon coupling `g sqrt(N - beta^2) (2 beta) / N` for a
/// real order parameter.
pub fn effective_coupling(p: &ModelParams, beta: f64) -> Result<f64> {
    let n = p.n();
    if !(beta * beta < n) {
        return Error::domain_err(
            "effective coupling",
            format!("beta^2 = {} must stay below N = {n}", beta * beta),
        );
    }
    Ok(p.g * (n - beta * beta).sqrt() * (2.0 * beta) / n)
}

/// Bogoliubov angle `0.5 * artanh(2 g_beta / omega)`.
pub fn bogoliubov_angle(p: &ModelParams, g_beta: f64) -> Result<f64> {
    let x = 2.0 * g_beta / p.omega;
    if !(x.abs() < 1.0) {
        return Error::domain_err(
            "bogoliubov angle",
            format!(
                "2|g_beta| = {} must stay below omega = {}",
                2.0 * g_beta.abs(),
                p.omega
            ),
        );
    }
    Ok(0.5 * x.atanh())
}

/// Excitation frequency `sqrt(omega^2 - 4 g_beta^2)`, the positive root.
pub fn excitation_frequency(p: &ModelParams, g_beta: f64) -> Result<f64> {
    let rad = p.omega * p.omega - 4.0 * g_beta * g_beta;
    if !(rad > 0.0) {
        return Error::domain_err(
            "excitation frequency",
            format!("omega^2 - 4 g_beta^2 = {rad} must be positive"),
        );
    }
    Ok(rad.sqrt())
}

/// Ground-state energy `omega_a/2 + epsilon (beta^2 - N/2) - omega/2` of
/// the diagonalized mean-field Hamiltonian.
pub fn ground_state_energy(p: &ModelParams, beta: f64) -> Result<f64> {
    let g_beta = effective_coupling(p, beta)?;
    let omega_a = excitation_frequency(p, g_beta)?;
    Ok(omega_a / 2.0 + p.epsilon * (beta * beta - p.n() / 2.0) - p.omega / 2.0)
}

/// Solves the full mean-field problem for one branch.
pub fn solve_mean_field(p: &ModelParams, branch: Branch) -> Result<MeanFieldSolution> {
    let phase = classify_phase(p);
    if phase.tag == PhaseTag::Normal {
        // g_beta = 0 leaves the cavity mode untouched: the diagonalized
        // frequency is omega itself and the energy is -epsilon N / 2.
        return Ok(MeanFieldSolution {
            params: *p,
            phase,
            beta0: 0.0,
            g_beta: 0.0,
            theta_a: 0.0,
            omega_a: p.omega,
            e_g: -p.epsilon * p.n() / 2.0,
        });
    }
    let beta0 = order_parameter(p, branch)?;
    let g_beta = effective_coupling(p, beta0)?;
    let theta_a = bogoliubov_angle(p, g_beta)?;
    let omega_a = excitation_frequency(p, g_beta)?;
    let e_g = ground_state_energy(p, beta0)?;
    Ok(MeanFieldSolution {
        params: *p,
        phase,
        beta0,
        g_beta,
        theta_a,
        omega_a,
        e_g,
    })
}
