//! Domain types shared by every solver: drives, shift solutions, phase
//! integrals, spatial grids, sampled states and complex energies, plus
//! Hermite-polynomial evaluation at complex argument.
//!
//! Everything here is immutable after construction and cheap to clone, so
//! parameter sweeps can share values freely across threads.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::poly;
use crate::spline::CubicSpline;

/// Largest Hermite order the forward recurrence is allowed to reach in f64.
pub const HERMITE_N_MAX: usize = 64;

/// Physicists' Hermite polynomial H_n evaluated at a complex argument via
/// the three-term recurrence H_{k+1} = 2 z H_k - 2 k H_{k-1}, seeded with
/// H_0 = 1 and H_1 = 2z.
pub fn hermite_eval(n: usize, z: Complex64) -> Result<Complex64> {
    if n > HERMITE_N_MAX {
        return Err(Error::HermiteOrder {
            n,
            max: HERMITE_N_MAX,
        });
    }
    let mut h_prev = Complex64::new(1.0, 0.0);
    if n == 0 {
        return Ok(h_prev);
    }
    let mut h = 2.0 * z;
    for k in 1..n {
        let next = 2.0 * (z * h - k as f64 * h_prev);
        h_prev = h;
        h = next;
    }
    Ok(h)
}

/// The real-valued drive f(t) multiplying the imaginary linear potential.
#[derive(Debug, Clone)]
pub enum Drive {
    Constant {
        f0: f64,
    },
    /// f(t) = sum_k coeffs[k] t^k.
    Polynomial {
        coeffs: Vec<f64>,
    },
    Sampled(SampledDrive),
}

/// Tabulated drive with a cubic-spline interpolant (not-a-knot ends).
/// Evaluation is only defined inside the sampled span.
#[derive(Debug, Clone)]
pub struct SampledDrive {
    times: Vec<f64>,
    values: Vec<f64>,
    spline: CubicSpline,
}

impl SampledDrive {
    pub fn new(times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if times.len() != values.len() {
            return Err(Error::InvalidInput(format!(
                "sampled drive has {} times but {} values",
                times.len(),
                values.len()
            )));
        }
        if times.len() < 2 {
            return Err(Error::InvalidInput(
                "sampled drive needs at least two samples".into(),
            ));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidInput(
                "sampled drive times must be strictly increasing".into(),
            ));
        }
        if times.iter().chain(values.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(
                "sampled drive contains non-finite entries".into(),
            ));
        }
        let spline = CubicSpline::new(times.clone(), values.clone());
        Ok(Self {
            times,
            values,
            spline,
        })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    fn span(&self) -> (f64, f64) {
        (self.times[0], *self.times.last().unwrap())
    }

    fn check_span(&self, t: f64) -> Result<()> {
        let (lo, hi) = self.span();
        // tiny slack for roundoff at the span edges
        let eps = 1e-12 * (hi - lo).max(1.0);
        if t < lo - eps || t > hi + eps {
            return Err(Error::OutOfSpan { t, lo, hi });
        }
        Ok(())
    }
}

impl Drive {
    pub fn constant(f0: f64) -> Self {
        Drive::Constant { f0 }
    }

    pub fn polynomial(coeffs: Vec<f64>) -> Self {
        Drive::Polynomial { coeffs }
    }

    pub fn sampled(times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        Ok(Drive::Sampled(SampledDrive::new(times, values)?))
    }

    /// f(t).
    pub fn eval(&self, t: f64) -> Result<f64> {
        match self {
            Drive::Constant { f0 } => Ok(*f0),
            Drive::Polynomial { coeffs } => Ok(poly::eval(coeffs, t)),
            Drive::Sampled(s) => {
                s.check_span(t)?;
                Ok(s.spline.eval(t.clamp(s.span().0, s.span().1)))
            }
        }
    }

    /// k-th time derivative of f at t (k = 0 is the value itself). For
    /// sampled drives orders above three vanish piecewise.
    pub fn deriv(&self, t: f64, order: usize) -> Result<f64> {
        if order == 0 {
            return self.eval(t);
        }
        match self {
            Drive::Constant { .. } => Ok(0.0),
            Drive::Polynomial { coeffs } => {
                let mut c = coeffs.clone();
                for _ in 0..order {
                    c = poly::derivative(&c);
                }
                Ok(poly::eval(&c, t))
            }
            Drive::Sampled(s) => {
                s.check_span(t)?;
                let (_, d1, d2, d3) = s.spline.eval_derivs(t.clamp(s.span().0, s.span().1));
                Ok(match order {
                    1 => d1,
                    2 => d2,
                    3 => d3,
                    _ => 0.0,
                })
            }
        }
    }

    /// Time span on which the drive can be evaluated; `None` means all of R.
    pub fn span(&self) -> Option<(f64, f64)> {
        match self {
            Drive::Sampled(s) => Some(s.span()),
            _ => None,
        }
    }

    /// Exact time-parity decision where one exists: constants are always
    /// even, polynomials are even iff every odd coefficient vanishes.
    /// Sampled drives return `None`; deciding them needs a tolerance (see
    /// the Hamiltonian PT check).
    pub fn is_even_in_time(&self) -> Option<bool> {
        match self {
            Drive::Constant { .. } => Some(true),
            Drive::Polynomial { coeffs } => {
                Some(coeffs.iter().skip(1).step_by(2).all(|&c| c == 0.0))
            }
            Drive::Sampled(_) => None,
        }
    }

    /// Crude sup of |f| over [lo, hi], used to scale residual tolerances.
    pub(crate) fn max_abs_over(&self, lo: f64, hi: f64) -> f64 {
        let n = 257;
        (0..n)
            .filter_map(|i| {
                let t = lo + (hi - lo) * i as f64 / (n - 1) as f64;
                self.eval(t).ok().map(f64::abs)
            })
            .fold(0.0, f64::max)
    }
}

/// Cubic Hermite interpolation of (value, slope) node data on one interval.
/// `s` is the local coordinate in [0, 1], `h` the interval length.
fn hermite_cubic(y0: f64, m0: f64, y1: f64, m1: f64, h: f64, s: f64) -> f64 {
    let s2 = s * s;
    let s3 = s2 * s;
    y0 * (2.0 * s3 - 3.0 * s2 + 1.0)
        + m0 * h * (s3 - 2.0 * s2 + s)
        + y1 * (-2.0 * s3 + 3.0 * s2)
        + m1 * h * (s3 - s2)
}

/// Uniformly stepped (g, g') trajectory with the node accelerations kept
/// for dense output.
#[derive(Debug, Clone)]
pub struct ShiftTrajectory {
    pub(crate) t0: f64,
    pub(crate) dt: f64,
    pub(crate) g: Vec<f64>,
    pub(crate) gdot: Vec<f64>,
    pub(crate) gddot: Vec<f64>,
}

impl ShiftTrajectory {
    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn t1(&self) -> f64 {
        self.t0 + self.dt * (self.g.len() - 1) as f64
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn g_values(&self) -> &[f64] {
        &self.g
    }

    pub fn gdot_values(&self) -> &[f64] {
        &self.gdot
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.g.len()).map(|i| self.t0 + i as f64 * self.dt)
    }

    /// Interval index and local coordinate for t, with roundoff slack at
    /// the span edges.
    fn locate(&self, t: f64) -> Result<(usize, f64)> {
        let (lo, hi) = (self.t0, self.t1());
        let eps = 1e-9 * (hi - lo).max(1.0);
        if t < lo - eps || t > hi + eps {
            return Err(Error::OutOfSpan { t, lo, hi });
        }
        let raw = (t - lo) / self.dt;
        let i = (raw.floor() as usize).min(self.g.len() - 2);
        Ok((i, raw - i as f64))
    }

    fn g_at(&self, t: f64) -> Result<f64> {
        let (i, s) = self.locate(t)?;
        Ok(hermite_cubic(
            self.g[i],
            self.gdot[i],
            self.g[i + 1],
            self.gdot[i + 1],
            self.dt,
            s,
        ))
    }

    fn gdot_at(&self, t: f64) -> Result<f64> {
        let (i, s) = self.locate(t)?;
        Ok(hermite_cubic(
            self.gdot[i],
            self.gddot[i],
            self.gdot[i + 1],
            self.gddot[i + 1],
            self.dt,
            s,
        ))
    }
}

/// Solution (g, alpha) of the auxiliary shift system, with alpha = g'/2 by
/// construction.
#[derive(Debug, Clone)]
pub enum ShiftSolution {
    /// The polynomial particular solution of g'' + 4g = 4f.
    AnalyticPolynomial {
        g_coeffs: Vec<f64>,
    },
    NumericTrajectory(ShiftTrajectory),
}

impl ShiftSolution {
    /// Imaginary coordinate displacement g(t).
    pub fn g(&self, t: f64) -> Result<f64> {
        match self {
            ShiftSolution::AnalyticPolynomial { g_coeffs } => Ok(poly::eval(g_coeffs, t)),
            ShiftSolution::NumericTrajectory(tr) => tr.g_at(t),
        }
    }

    /// g'(t).
    pub fn gdot(&self, t: f64) -> Result<f64> {
        match self {
            ShiftSolution::AnalyticPolynomial { g_coeffs } => {
                Ok(poly::eval(&poly::derivative(g_coeffs), t))
            }
            ShiftSolution::NumericTrajectory(tr) => tr.gdot_at(t),
        }
    }

    /// Gauge exponent alpha(t) = g'(t)/2.
    pub fn alpha(&self, t: f64) -> Result<f64> {
        Ok(self.gdot(t)? / 2.0)
    }

    /// Span where the solution is defined; `None` means all of R.
    pub fn span(&self) -> Option<(f64, f64)> {
        match self {
            ShiftSolution::AnalyticPolynomial { .. } => None,
            ShiftSolution::NumericTrajectory(tr) => Some((tr.t0, tr.t1())),
        }
    }

    /// Sup of the defining-ODE residual |g'' + 4g - 4f| measured
    /// independently of how the solution was produced: polynomial residuals
    /// are evaluated coefficient-exactly, trajectory residuals estimate g''
    /// by centered differences of the stored g' values.
    pub fn residual_sup(&self, drive: &Drive) -> Result<f64> {
        match self {
            ShiftSolution::AnalyticPolynomial { g_coeffs } => {
                let f_coeffs = match drive {
                    Drive::Constant { f0 } => vec![*f0],
                    Drive::Polynomial { coeffs } => coeffs.clone(),
                    Drive::Sampled(_) => {
                        return Err(Error::Consistency(
                            "analytic polynomial shift paired with a sampled drive".into(),
                        ))
                    }
                };
                let gdd = poly::derivative(&poly::derivative(g_coeffs));
                let r = poly::sub(
                    &poly::add(&gdd, &poly::scale(g_coeffs, 4.0)),
                    &poly::scale(&f_coeffs, 4.0),
                );
                // Residual coefficients are compared at t ~ O(1) scale:
                // sup over |t| <= 1 is bounded by the coefficient sum.
                Ok(r.iter().map(|c| c.abs()).sum())
            }
            ShiftSolution::NumericTrajectory(tr) => {
                let n = tr.g.len();
                if n < 3 {
                    return Ok(0.0);
                }
                let mut sup: f64 = 0.0;
                for i in 1..n - 1 {
                    let t = tr.t0 + i as f64 * tr.dt;
                    let f = drive.eval(t)?;
                    let gdd = (tr.gdot[i + 1] - tr.gdot[i - 1]) / (2.0 * tr.dt);
                    sup = sup.max((gdd + 4.0 * tr.g[i] - 4.0 * f).abs());
                }
                Ok(sup)
            }
        }
    }
}

/// Accumulated phase theta(t), the time integral of (2f - g) g + g'^2 / 4
/// from 0 to t. Always real with theta(0) = 0.
#[derive(Debug, Clone)]
pub enum PhaseIntegral {
    /// Exact polynomial antiderivative (zero constant term).
    AnalyticPolynomial {
        theta_coeffs: Vec<f64>,
    },
    NumericCumulative(PhaseTrajectory),
}

/// Cumulative phase at uniform nodes plus the integrand there, interpolated
/// with a cubic Hermite between nodes.
#[derive(Debug, Clone)]
pub struct PhaseTrajectory {
    pub(crate) t0: f64,
    pub(crate) dt: f64,
    pub(crate) theta: Vec<f64>,
    /// Integrand values q(t_i) = theta'(t_i) at the nodes.
    pub(crate) q: Vec<f64>,
}

impl PhaseIntegral {
    pub fn theta(&self, t: f64) -> Result<f64> {
        match self {
            PhaseIntegral::AnalyticPolynomial { theta_coeffs } => Ok(poly::eval(theta_coeffs, t)),
            PhaseIntegral::NumericCumulative(tr) => {
                let (lo, hi) = (tr.t0, tr.t0 + tr.dt * (tr.theta.len() - 1) as f64);
                let eps = 1e-9 * (hi - lo).max(1.0);
                if t < lo - eps || t > hi + eps {
                    return Err(Error::OutOfSpan { t, lo, hi });
                }
                let raw = (t - lo) / tr.dt;
                let i = (raw.floor() as usize).min(tr.theta.len() - 2);
                let s = raw - i as f64;
                Ok(hermite_cubic(
                    tr.theta[i],
                    tr.q[i],
                    tr.theta[i + 1],
                    tr.q[i + 1],
                    tr.dt,
                    s,
                ))
            }
        }
    }
}

/// Uniform spatial grid on [x_min, x_max].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpatialGrid {
    x_min: f64,
    x_max: f64,
    n_points: usize,
}

impl SpatialGrid {
    pub fn new(x_min: f64, x_max: f64, n_points: usize) -> Result<Self> {
        if !(x_min.is_finite() && x_max.is_finite()) || !(x_min < x_max) {
            return Err(Error::InvalidInput(format!(
                "grid bounds must satisfy x_min < x_max, got [{x_min}, {x_max}]"
            )));
        }
        if n_points < 3 {
            return Err(Error::InvalidInput(format!(
                "grid needs at least 3 points, got {n_points}"
            )));
        }
        Ok(Self {
            x_min,
            x_max,
            n_points,
        })
    }

    /// Symmetric grid on [-half_width, half_width], as required by the
    /// parity-sensitive checks.
    pub fn symmetric(half_width: f64, n_points: usize) -> Result<Self> {
        if !(half_width > 0.0) {
            return Err(Error::InvalidInput("half width must be positive".into()));
        }
        Self::new(-half_width, half_width, n_points)
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn spacing(&self) -> f64 {
        (self.x_max - self.x_min) / (self.n_points - 1) as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.spacing()
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_points).map(move |i| self.node(i))
    }

    pub fn is_symmetric(&self) -> bool {
        (self.x_min + self.x_max).abs() <= 1e-12 * (self.x_max - self.x_min)
    }
}

/// Complex amplitudes sampled on a grid at one instant. Amplitudes are raw
/// (not L2-normalized); expectation values divide by the grid norm.
#[derive(Debug, Clone)]
pub struct GridState {
    pub grid: SpatialGrid,
    pub t: f64,
    pub amplitudes: Vec<Complex64>,
    /// Quantum label when the state is a sampled eigenfunction.
    pub n: Option<usize>,
}

impl GridState {
    pub fn new(
        grid: SpatialGrid,
        t: f64,
        amplitudes: Vec<Complex64>,
        n: Option<usize>,
    ) -> Result<Self> {
        if amplitudes.len() != grid.n_points() {
            return Err(Error::InvalidInput(format!(
                "state has {} amplitudes on a {}-point grid",
                amplitudes.len(),
                grid.n_points()
            )));
        }
        let mut sum = 0.0;
        for a in &amplitudes {
            if !a.re.is_finite() || !a.im.is_finite() {
                return Err(Error::InvalidInput("non-finite amplitude".into()));
            }
            sum += a.norm_sqr();
        }
        if !(sum > 0.0 && sum.is_finite()) {
            return Err(Error::InvalidInput(
                "state norm must be finite and nonzero".into(),
            ));
        }
        Ok(Self {
            grid,
            t,
            amplitudes,
            n,
        })
    }

    /// Largest amplitude magnitude on the grid.
    pub fn max_abs(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }
}

/// A complex energy expectation value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexEnergy {
    pub re: f64,
    pub im: f64,
}

impl ComplexEnergy {
    pub fn new(re: f64, im: f64) -> Self {
        Self { re, im }
    }

    pub fn as_complex(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

impl From<Complex64> for ComplexEnergy {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermite_low_orders() {
        // H_0 = 1 everywhere
        let z = Complex64::new(-2.3, 0.7);
        assert_eq!(hermite_eval(0, z).unwrap(), Complex64::new(1.0, 0.0));
        // H_1(3 + 4i) = 2(3 + 4i) = 6 + 8i
        let h1 = hermite_eval(1, Complex64::new(3.0, 4.0)).unwrap();
        assert_eq!(h1, Complex64::new(6.0, 8.0));
        // H_2(0) = -2, one recurrence step from H_0, H_1
        let h2 = hermite_eval(2, Complex64::new(0.0, 0.0)).unwrap();
        assert_eq!(h2, Complex64::new(-2.0, 0.0));
    }

    #[test]
    fn hermite_order_cap() {
        assert!(matches!(
            hermite_eval(HERMITE_N_MAX + 1, Complex64::new(0.0, 0.0)),
            Err(Error::HermiteOrder { .. })
        ));
        assert!(hermite_eval(HERMITE_N_MAX, Complex64::new(0.5, 0.0)).is_ok());
    }

    /// Direct summation H_n(x) = n! sum_m (-1)^m / (m! (n-2m)!) (2x)^{n-2m},
    /// evaluated exactly in integer arithmetic for half-integer x (2x is an
    /// integer, so every term is an integer; n <= 20 fits in i128 with room
    /// to spare). Independent of the recurrence.
    fn hermite_direct_exact(n: usize, two_x: i128) -> f64 {
        let fact = |k: usize| (1..=k as i128).product::<i128>();
        let mut sum: i128 = 0;
        for m in 0..=n / 2 {
            let sign: i128 = if m % 2 == 0 { 1 } else { -1 };
            let coeff = fact(n) / (fact(m) * fact(n - 2 * m));
            sum += sign * coeff * two_x.pow((n - 2 * m) as u32);
        }
        sum as f64
    }

    #[test]
    fn hermite_matches_direct_summation() {
        for n in 0..=20 {
            for two_x in -10..=10i128 {
                let x = two_x as f64 / 2.0;
                let got = hermite_eval(n, Complex64::new(x, 0.0)).unwrap().re;
                let want = hermite_direct_exact(n, two_x);
                let scale = want.abs().max(1.0);
                assert!(
                    (got - want).abs() <= 1e-10 * scale,
                    "n={n} x={x}: {got} vs {want}"
                );
            }
        }
    }

    #[test]
    fn drive_eval_examples() {
        assert_eq!(Drive::constant(1.0).eval(5.0).unwrap(), 1.0);
        // f(t) = t
        assert_eq!(Drive::polynomial(vec![0.0, 1.0]).eval(2.0).unwrap(), 2.0);
        // f(t) = t^2
        assert_eq!(
            Drive::polynomial(vec![0.0, 0.0, 1.0]).eval(2.0).unwrap(),
            4.0
        );
    }

    #[test]
    fn sampled_drive_span_and_accuracy() {
        let n = 401;
        let times: Vec<f64> = (0..n)
            .map(|i| -2.0 + 4.0 * i as f64 / (n - 1) as f64)
            .collect();
        let values: Vec<f64> = times.iter().map(|&t| t * t).collect();
        let d = Drive::sampled(times, values).unwrap();
        assert!((d.eval(1.3).unwrap() - 1.69).abs() < 1e-8);
        assert!(matches!(d.eval(2.5), Err(Error::OutOfSpan { .. })));
        assert!(matches!(d.eval(-2.5), Err(Error::OutOfSpan { .. })));
    }

    #[test]
    fn sampled_drive_rejects_unsorted_times() {
        assert!(Drive::sampled(vec![0.0, 0.0, 1.0], vec![1.0, 2.0, 3.0]).is_err());
        assert!(Drive::sampled(vec![0.0, -1.0], vec![1.0, 2.0]).is_err());
    }

    #[test]
    fn time_parity_classification() {
        assert_eq!(Drive::constant(3.0).is_even_in_time(), Some(true));
        assert_eq!(
            Drive::polynomial(vec![0.0, 0.0, 1.0]).is_even_in_time(),
            Some(true)
        );
        assert_eq!(
            Drive::polynomial(vec![0.0, 1.0]).is_even_in_time(),
            Some(false)
        );
        let s = Drive::sampled(vec![-1.0, 0.0, 1.0], vec![1.0, 0.0, 1.0]).unwrap();
        assert_eq!(s.is_even_in_time(), None);
    }

    #[test]
    fn grid_invariants() {
        assert!(SpatialGrid::new(1.0, -1.0, 10).is_err());
        assert!(SpatialGrid::new(-1.0, 1.0, 2).is_err());
        let g = SpatialGrid::symmetric(12.0, 2401).unwrap();
        assert!(g.is_symmetric());
        assert!((g.spacing() - 0.01).abs() < 1e-15);
        assert!((g.node(1200)).abs() < 1e-12);
    }

    #[test]
    fn grid_state_validation() {
        let g = SpatialGrid::symmetric(1.0, 3).unwrap();
        assert!(GridState::new(g, 0.0, vec![Complex64::new(0.0, 0.0); 3], None).is_err());
        assert!(GridState::new(g, 0.0, vec![Complex64::new(1.0, 0.0); 4], None).is_err());
        assert!(GridState::new(g, 0.0, vec![Complex64::new(1.0, 0.0); 3], None).is_ok());
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        /// f64 direct sum plus the sum of term magnitudes; the latter bounds
        /// how much precision cancellation can destroy.
        fn hermite_direct_with_condition(n: usize, x: f64) -> (f64, f64) {
            let fact = |k: usize| (1..=k).map(|i| i as f64).product::<f64>();
            let mut sum = 0.0;
            let mut mag = 0.0;
            for m in 0..=n / 2 {
                let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                let term =
                    fact(n) / (fact(m) * fact(n - 2 * m)) * (2.0 * x).powi((n - 2 * m) as i32);
                sum += sign * term;
                mag += term.abs();
            }
            (sum, mag)
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(256))]

            #[test]
            fn recurrence_tracks_direct_sum(n in 0usize..=20, x in -5.0f64..5.0) {
                let got = hermite_eval(n, Complex64::new(x, 0.0)).unwrap().re;
                let (want, condition) = hermite_direct_with_condition(n, x);
                // both routes round; allow for the cancellation in the sum
                prop_assert!((got - want).abs() <= 1e-12 * condition.max(1.0));
            }

            #[test]
            fn conjugate_product_is_real_and_even(
                n in 0usize..=10,
                x in -4.0f64..4.0,
                g in -3.0f64..3.0,
            ) {
                let p = hermite_eval(n, Complex64::new(x, -g)).unwrap()
                    * hermite_eval(n, Complex64::new(x, g)).unwrap();
                let q = hermite_eval(n, Complex64::new(-x, -g)).unwrap()
                    * hermite_eval(n, Complex64::new(-x, g)).unwrap();
                let scale = p.norm().max(1.0);
                prop_assert!(p.im.abs() <= 1e-12 * scale);
                prop_assert!((p - q).norm() <= 1e-11 * scale);
            }
        }
    }
}
