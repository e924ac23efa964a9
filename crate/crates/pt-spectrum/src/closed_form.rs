//! Exact eigenfunctions of the driven non-Hermitian oscillator,
//!
//!   psi_n(x, t) = exp(-i E_n t - i theta(t))
//!                 * exp(alpha (x + i g) - (x + i g)^2 / 2) * H_n(x + i g),
//!
//! with E_n = 2(n + 1/2), plus the space-time symmetry checks that probe
//! them: a finite-difference residual of the Schrodinger equation, the
//! state-level PT test and the parity (odd imaginary potential / even
//! modulus) condition.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{hermite_eval, HERMITE_N_MAX};
use crate::model::{Drive, GridState, PhaseIntegral, ShiftSolution, SpatialGrid};
use crate::shift::{phase_integral, solve_shift_analytic};
use crate::DECAY_THRESHOLD;

/// Defect threshold for the parity-condition verdict.
pub const PARITY_TOL: f64 = 1e-10;

/// Tolerance for deciding a sampled drive even in time.
pub const TIME_PARITY_TOL: f64 = 1e-10;

/// Everything needed to evaluate one exact eigenfunction: quantum number,
/// drive, shift solution and accumulated phase. The energy constant is
/// E_n = 2n + 1 exactly.
#[derive(Debug, Clone)]
pub struct ClosedFormState {
    pub n: usize,
    pub drive: Drive,
    pub shift: ShiftSolution,
    pub phase: PhaseIntegral,
}

impl ClosedFormState {
    /// Build a state from an already-solved shift. The constructor runs the
    /// phase integral, which includes the drive/shift consistency check.
    pub fn new(n: usize, drive: Drive, shift: ShiftSolution) -> Result<Self> {
        if n > HERMITE_N_MAX {
            return Err(Error::HermiteOrder {
                n,
                max: HERMITE_N_MAX,
            });
        }
        let phase = phase_integral(&drive, &shift)?;
        Ok(Self {
            n,
            drive,
            shift,
            phase,
        })
    }

    /// Convenience constructor for constant/polynomial drives using the
    /// analytic particular shift solution.
    pub fn analytic(n: usize, drive: Drive) -> Result<Self> {
        let shift = solve_shift_analytic(&drive)?;
        Self::new(n, drive, shift)
    }

    /// E_n = 2(n + 1/2).
    pub fn energy_level(&self) -> f64 {
        2.0 * self.n as f64 + 1.0
    }

    /// psi_n(x, t).
    pub fn psi(&self, x: f64, t: f64) -> Result<Complex64> {
        let g = self.shift.g(t)?;
        let alpha = self.shift.alpha(t)?;
        let theta = self.phase.theta(t)?;
        let z = Complex64::new(x, g);
        let exponent =
            alpha * z - 0.5 * z * z + Complex64::new(0.0, -(self.energy_level() * t + theta));
        Ok(exponent.exp() * hermite_eval(self.n, z)?)
    }

    /// Amplitudes at every grid node without any decay requirement; used by
    /// the residual and symmetry checks, which exclude or normalize away the
    /// boundary anyway.
    fn eval_on_grid(&self, grid: &SpatialGrid, t: f64) -> Result<Vec<Complex64>> {
        grid.nodes().map(|x| self.psi(x, t)).collect()
    }

    /// Sample onto a grid, enforcing that the state has decayed below
    /// `DECAY_THRESHOLD` times its peak at both endpoints.
    pub fn sample(&self, grid: &SpatialGrid, t: f64) -> Result<GridState> {
        let amplitudes = self.eval_on_grid(grid, t)?;
        let max = amplitudes.iter().map(|a| a.norm()).fold(0.0, f64::max);
        let edge = amplitudes[0]
            .norm()
            .max(amplitudes[amplitudes.len() - 1].norm());
        if !(max > 0.0) || edge > DECAY_THRESHOLD * max {
            return Err(Error::Truncation(format!(
                "endpoint amplitude {:.3e} of peak {:.3e} exceeds {:.1e} of peak; widen the grid",
                edge, max, DECAY_THRESHOLD
            )));
        }
        GridState::new(*grid, t, amplitudes, Some(self.n))
    }
}

/// Normalized L2 residual of i d_t psi + d_xx psi - (x^2 + 2 i f x) psi with
/// centered second-order differences in x and t. Two nodes on each side are
/// excluded so only interior stencils enter. Decays as O(h^2 + dt_fd^2).
pub fn pde_residual(
    state: &ClosedFormState,
    grid: &SpatialGrid,
    t: f64,
    dt_fd: f64,
) -> Result<f64> {
    if !(dt_fd > 0.0) {
        return Err(Error::InvalidInput(format!(
            "time step for the residual must be positive, got {dt_fd}"
        )));
    }
    let h = grid.spacing();
    let psi_m = state.eval_on_grid(grid, t - dt_fd)?;
    let psi_0 = state.eval_on_grid(grid, t)?;
    let psi_p = state.eval_on_grid(grid, t + dt_fd)?;
    let f = state.drive.eval(t)?;

    let n = grid.n_points();
    let mut res_sq = 0.0;
    let mut norm_sq = 0.0;
    for j in 2..n - 2 {
        let x = grid.node(j);
        let dt_term = Complex64::new(0.0, 1.0) * (psi_p[j] - psi_m[j]) / (2.0 * dt_fd);
        let dxx = (psi_0[j - 1] - 2.0 * psi_0[j] + psi_0[j + 1]) / (h * h);
        let pot = Complex64::new(x * x, 2.0 * f * x);
        let r = dt_term + dxx - pot * psi_0[j];
        res_sq += r.norm_sqr();
        norm_sq += psi_0[j].norm_sqr();
    }
    if !(norm_sq > 0.0) {
        return Err(Error::InvalidInput(
            "state vanishes on the grid interior".into(),
        ));
    }
    Ok((res_sq / norm_sq).sqrt())
}

/// Is the Hamiltonian PT symmetric, i.e. is the drive even in time?
/// Constants and polynomials are decided exactly; sampled drives need a
/// symmetric span and are compared pointwise within `TIME_PARITY_TOL`.
pub fn pt_check_hamiltonian(drive: &Drive) -> Result<bool> {
    if let Some(decision) = drive.is_even_in_time() {
        return Ok(decision);
    }
    let (lo, hi) = drive.span().expect("sampled drives have a span");
    if (lo + hi).abs() > 1e-9 * (hi - lo).max(1.0) {
        return Err(Error::Undecidable(format!(
            "sampled span [{lo}, {hi}] is not symmetric about t = 0"
        )));
    }
    let m = 2001;
    let mut max_dev: f64 = 0.0;
    for i in 0..m {
        let t = hi * i as f64 / (m - 1) as f64;
        max_dev = max_dev.max((drive.eval(-t)? - drive.eval(t)?).abs());
    }
    Ok(max_dev <= TIME_PARITY_TOL)
}

/// Deviation below which a state counts as a PT eigenstate (symmetry
/// unbroken at the state level).
pub const PT_UNBROKEN_TOL: f64 = 1e-8;

/// Outcome of the state-level PT test: the residual after removing the best
/// unit-modulus eigenphase, and that phase.
#[derive(Debug, Clone, Copy)]
pub struct PtStateCheck {
    /// min over |lambda| = 1 of ||PT psi - lambda psi|| / ||psi||.
    pub deviation: f64,
    /// The minimizing phase, the measured PT eigenvalue candidate.
    pub phase: Complex64,
}

impl PtStateCheck {
    /// The state passes as a PT eigenstate within `PT_UNBROKEN_TOL`.
    pub fn unbroken(&self) -> bool {
        self.deviation <= PT_UNBROKEN_TOL
    }
}

/// Forms (PT psi)(x, t) = conj(psi(-x, -t)) on a symmetric grid and measures
/// how close psi is to a PT eigenstate. Only meaningful for drives even in
/// time; others report `NotApplicable`.
pub fn pt_check_state(state: &ClosedFormState, grid: &SpatialGrid, t: f64) -> Result<PtStateCheck> {
    if !grid.is_symmetric() {
        return Err(Error::InvalidInput(
            "PT state check requires a symmetric grid".into(),
        ));
    }
    if !pt_check_hamiltonian(&state.drive)? {
        return Err(Error::NotApplicable(
            "drive is odd in time; the Hamiltonian is not PT symmetric".into(),
        ));
    }
    let psi = state.eval_on_grid(grid, t)?;
    let psi_rev = state.eval_on_grid(grid, -t)?;
    let n = grid.n_points();
    let pt_psi: Vec<Complex64> = (0..n).map(|j| psi_rev[n - 1 - j].conj()).collect();

    // <psi, PT psi> with the conjugate-linear slot first; the minimizing
    // unit lambda is its phase.
    let mut inner = Complex64::new(0.0, 0.0);
    let mut norm_sq = 0.0;
    for j in 0..n {
        inner += psi[j].conj() * pt_psi[j];
        norm_sq += psi[j].norm_sqr();
    }
    let phase = if inner.norm() > 0.0 {
        inner / inner.norm()
    } else {
        Complex64::new(1.0, 0.0)
    };
    let mut dev_sq = 0.0;
    for j in 0..n {
        dev_sq += (pt_psi[j] - phase * psi[j]).norm_sqr();
    }
    Ok(PtStateCheck {
        deviation: (dev_sq / norm_sq).sqrt(),
        phase,
    })
}

/// Outcome of the parity condition: the imaginary potential must be odd in
/// x and the modulus squared even in x.
#[derive(Debug, Clone, Copy)]
pub struct ParityCondition {
    /// max |U_I(-x) + U_I(x)| / max |U_I| (zero when the drive vanishes).
    pub uimag_odd_defect: f64,
    /// max | |psi(-x)|^2 - |psi(x)|^2 | / max |psi|^2.
    pub modulus_even_defect: f64,
    /// Both defects within `PARITY_TOL`.
    pub satisfied: bool,
}

/// Measures the parity condition for a state at time t on a symmetric grid.
pub fn parity_condition_check(
    state: &ClosedFormState,
    grid: &SpatialGrid,
    t: f64,
) -> Result<ParityCondition> {
    if !grid.is_symmetric() {
        return Err(Error::InvalidInput(
            "parity condition check requires a symmetric grid".into(),
        ));
    }
    let f = state.drive.eval(t)?;
    let n = grid.n_points();
    let psi = state.eval_on_grid(grid, t)?;
    let abs2: Vec<f64> = psi.iter().map(|a| a.norm_sqr()).collect();

    let u: Vec<f64> = grid.nodes().map(|x| 2.0 * f * x).collect();
    let u_max = u.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let uimag_odd_defect = if u_max > 0.0 {
        (0..n)
            .map(|j| (u[n - 1 - j] + u[j]).abs())
            .fold(0.0, f64::max)
            / u_max
    } else {
        0.0
    };

    let abs2_max = abs2.iter().copied().fold(0.0, f64::max);
    let modulus_even_defect = (0..n)
        .map(|j| (abs2[n - 1 - j] - abs2[j]).abs())
        .fold(0.0, f64::max)
        / abs2_max;

    Ok(ParityCondition {
        uimag_odd_defect,
        modulus_even_defect,
        satisfied: uimag_odd_defect <= PARITY_TOL && modulus_even_defect <= PARITY_TOL,
    })
}
