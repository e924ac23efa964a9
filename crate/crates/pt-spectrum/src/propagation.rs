//! Independent time integration of i psi_t = -psi_xx + V(x, t) psi by the
//! trapezoidal (Crank-Nicolson) rule, used to validate the closed-form
//! states end to end. The potential may be complex; the norm is then not
//! conserved, which is physical here rather than a defect.

use num_complex::Complex64;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::model::{Drive, GridState, SpatialGrid};
use crate::numeric::simpson_uniform;

/// Near-boundary amplitude (relative to the peak) above which a propagation
/// warns that the grid edge is being reached. Complex potentials with a gain
/// region amplify the roundoff floor toward this level without actually
/// contaminating the bulk solution, hence a warning rather than an abort.
pub const REFLECTION_THRESHOLD: f64 = 1e-8;

/// Near-boundary amplitude at which the propagation is aborted: beyond this
/// the Dirichlet wall feeds visible artifacts back into the solution.
pub const REFLECTION_ABORT: f64 = 1e-4;

/// Norm-squared growth factor treated as divergence.
const NORM_BLOWUP: f64 = 1e24;

/// Grid, step and potential for one propagation. The span must be an
/// integer number of steps and the grid symmetric.
#[derive(Clone)]
pub struct PropagationConfig {
    pub grid: SpatialGrid,
    pub dt: f64,
    pub t0: f64,
    pub t1: f64,
    potential: Arc<dyn Fn(f64, f64) -> Complex64 + Send + Sync>,
}

impl std::fmt::Debug for PropagationConfig {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PropagationConfig")
            .field("grid", &self.grid)
            .field("dt", &self.dt)
            .field("t0", &self.t0)
            .field("t1", &self.t1)
            .finish_non_exhaustive()
    }
}

impl PropagationConfig {
    pub fn new(
        grid: SpatialGrid,
        dt: f64,
        t0: f64,
        t1: f64,
        potential: Arc<dyn Fn(f64, f64) -> Complex64 + Send + Sync>,
    ) -> Result<Self> {
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(Error::InvalidInput(format!(
                "dt must be positive, got {dt}"
            )));
        }
        if !(t1 > t0) {
            return Err(Error::InvalidInput(format!(
                "need t0 < t1, got [{t0}, {t1}]"
            )));
        }
        let steps = (t1 - t0) / dt;
        if (steps - steps.round()).abs() > 1e-6 * steps.max(1.0) || steps.round() < 1.0 {
            return Err(Error::InvalidInput(format!(
                "span/dt = {steps} is not a positive integer"
            )));
        }
        if !grid.is_symmetric() {
            return Err(Error::InvalidInput(
                "propagation grid must be symmetric".into(),
            ));
        }
        Ok(Self {
            grid,
            dt,
            t0,
            t1,
            potential,
        })
    }

    /// Config with the physical potential x^2 + 2 i f(t) x of the drive.
    pub fn for_drive(grid: SpatialGrid, dt: f64, t0: f64, t1: f64, drive: &Drive) -> Result<Self> {
        if let Some((lo, hi)) = drive.span() {
            if t0 < lo - 1e-12 || t1 > hi + 1e-12 {
                return Err(Error::OutOfSpan { t: t1, lo, hi });
            }
        }
        let drive = drive.clone();
        let potential = Arc::new(move |x: f64, t: f64| {
            let f = drive.eval(t).expect("span was validated at construction");
            Complex64::new(x * x, 2.0 * f * x)
        });
        Self::new(grid, dt, t0, t1, potential)
    }

    pub fn n_steps(&self) -> usize {
        ((self.t1 - self.t0) / self.dt).round() as usize
    }

    pub fn potential(&self, x: f64, t: f64) -> Complex64 {
        (self.potential)(x, t)
    }
}

/// Advance the state from t0 to t1, invoking `on_sample` with the running
/// state at t0, every `sample_every`-th step (when nonzero) and at t1.
///
/// Each step solves one complex tridiagonal system:
/// (I + i dt/2 H) psi' = (I - i dt/2 H) psi with H = -D2 + V(x, t + dt/2)
/// and Dirichlet zeros at the grid endpoints.
pub fn propagate_sampled(
    initial: &GridState,
    cfg: &PropagationConfig,
    sample_every: usize,
    mut on_sample: impl FnMut(f64, &GridState),
) -> Result<GridState> {
    if initial.grid != cfg.grid {
        return Err(Error::InvalidInput(
            "initial state grid differs from config grid".into(),
        ));
    }
    if (initial.t - cfg.t0).abs() > 1e-9 * (1.0 + cfg.t0.abs()) {
        return Err(Error::InvalidInput(format!(
            "initial state is at t = {}, config starts at {}",
            initial.t, cfg.t0
        )));
    }
    let n = cfg.grid.n_points();
    let h = cfg.grid.spacing();
    let dt = cfg.dt;
    let peak = initial.max_abs();
    let edge = initial.amplitudes[0]
        .norm()
        .max(initial.amplitudes[n - 1].norm())
        .max(initial.amplitudes[1].norm())
        .max(initial.amplitudes[n - 2].norm());
    if edge > REFLECTION_THRESHOLD * peak {
        return Err(Error::Truncation(format!(
            "initial boundary amplitude {:.3e} of peak {:.3e}; widen the grid",
            edge, peak
        )));
    }

    let mut psi = initial.amplitudes.clone();
    psi[0] = Complex64::new(0.0, 0.0);
    psi[n - 1] = Complex64::new(0.0, 0.0);
    let norm0: f64 = psi.iter().map(|a| a.norm_sqr()).sum();

    // Off-diagonal of I +- i dt/2 H; the Laplacian contributes -1/h^2 to H.
    let a_off = Complex64::new(0.0, -dt / (2.0 * h * h));
    let b_off = -a_off;
    let m = n - 2; // interior unknowns

    let mut a_diag = vec![Complex64::new(0.0, 0.0); m];
    let mut rhs = vec![Complex64::new(0.0, 0.0); m];
    let mut c_prime = vec![Complex64::new(0.0, 0.0); m];

    if sample_every > 0 {
        on_sample(cfg.t0, initial);
    }

    let n_steps = cfg.n_steps();
    let mut warned = false;
    for step in 0..n_steps {
        let t_mid = cfg.t0 + (step as f64 + 0.5) * dt;
        for j in 0..m {
            let x = cfg.grid.node(j + 1);
            let v = cfg.potential(x, t_mid);
            let i_half = Complex64::new(0.0, 0.5 * dt);
            let h_diag = 2.0 / (h * h) + v;
            a_diag[j] = 1.0 + i_half * h_diag;
            let b_diag = 1.0 - i_half * h_diag;
            let left = if j == 0 {
                Complex64::new(0.0, 0.0)
            } else {
                psi[j]
            };
            let right = if j == m - 1 {
                Complex64::new(0.0, 0.0)
            } else {
                psi[j + 2]
            };
            rhs[j] = b_diag * psi[j + 1] + b_off * (left + right);
        }

        // Thomas solve with constant off-diagonals; diagonally dominant, so
        // no pivoting.
        let mut denom = a_diag[0];
        c_prime[0] = a_off / denom;
        rhs[0] /= denom;
        for j in 1..m {
            denom = a_diag[j] - a_off * c_prime[j - 1];
            if j < m - 1 {
                c_prime[j] = a_off / denom;
            }
            rhs[j] = (rhs[j] - a_off * rhs[j - 1]) / denom;
        }
        for j in (0..m - 1).rev() {
            let next = rhs[j + 1];
            rhs[j] -= c_prime[j] * next;
        }

        let mut norm = 0.0;
        let mut peak = 0.0f64;
        for j in 0..m {
            psi[j + 1] = rhs[j];
            let a2 = rhs[j].norm_sqr();
            norm += a2;
            peak = peak.max(a2);
        }
        let t_now = cfg.t0 + (step as f64 + 1.0) * dt;
        if !norm.is_finite() {
            return Err(Error::Divergence(format!(
                "non-finite amplitudes at t = {t_now}"
            )));
        }
        if norm > NORM_BLOWUP * norm0 {
            return Err(Error::Divergence(format!(
                "norm grew by more than 1e12 at t = {t_now}"
            )));
        }
        let edge2 = psi[1].norm_sqr().max(psi[n - 2].norm_sqr());
        if edge2 > (REFLECTION_ABORT * REFLECTION_ABORT) * peak {
            return Err(Error::Reflection(format!(
                "boundary amplitude reached {:.3e} of peak at t = {t_now}",
                (edge2 / peak).sqrt()
            )));
        }
        if !warned && edge2 > (REFLECTION_THRESHOLD * REFLECTION_THRESHOLD) * peak {
            warned = true;
            eprintln!(
                "warning: boundary amplitude reached {:.3e} of peak at t = {t_now}; \
                 widen the grid if late-time output matters",
                (edge2 / peak).sqrt()
            );
        }

        let is_last = step + 1 == n_steps;
        if sample_every > 0 && ((step + 1) % sample_every == 0 || is_last) {
            let snapshot = GridState::new(cfg.grid, t_now, psi.clone(), initial.n)?;
            on_sample(t_now, &snapshot);
        }
    }

    GridState::new(cfg.grid, cfg.t1, psi, initial.n)
}

/// Propagate and return only the final state.
pub fn crank_nicolson_propagate(initial: &GridState, cfg: &PropagationConfig) -> Result<GridState> {
    propagate_sampled(initial, cfg, 0, |_, _| {})
}

/// Norm-squared history (Simpson on the grid) sampled along the propagation,
/// including both endpoints.
pub fn norm_trajectory(
    initial: &GridState,
    cfg: &PropagationConfig,
    sample_every: usize,
) -> Result<Vec<(f64, f64)>> {
    if sample_every == 0 {
        return Err(Error::InvalidInput(
            "sample_every must be at least 1".into(),
        ));
    }
    let h = cfg.grid.spacing();
    let mut out = Vec::new();
    propagate_sampled(initial, cfg, sample_every, |t, state| {
        let abs2: Vec<f64> = state.amplitudes.iter().map(|a| a.norm_sqr()).collect();
        out.push((t, simpson_uniform(h, &abs2)));
    })?;
    Ok(out)
}
