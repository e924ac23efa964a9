//! Energy expectation values and norm bookkeeping: closed-form complex
//! energies for the two lowest levels, grid quadrature for everything, and
//! the expectation of the imaginary potential that decides whether the
//! spectrum is real.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::model::{ComplexEnergy, Drive, GridState, ShiftSolution};
use crate::numeric::{second_derivative_4, simpson_uniform};
use crate::DECAY_THRESHOLD;

/// How an expectation value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnergyMethod {
    Closed,
    Quadrature,
}

/// Bundle of the expectation values reported for one state at one time.
#[derive(Debug, Clone, Copy)]
pub struct ExpectationReport {
    pub energy: ComplexEnergy,
    pub u_imag: f64,
    pub norm_sq: f64,
    pub method: EnergyMethod,
}

/// Closed-form complex energy for n = 0 or n = 1:
///
///   <0|E|0> = 1 + g^2 + alpha^2 + 2 i alpha f
///   <1|E|1> = (E11 + 2 i alpha f (3 + 2 alpha^2 + 2 g^2)) / (1 + 2 g^2 + 2 alpha^2)
///   E11     = 3 + 7 (g^2 + alpha^2) + 4 alpha^2 g^2 + 2 (alpha^4 + g^4)
///
/// Higher levels have no tabulated closed form; use the quadrature route.
pub fn energy_closed(
    n: usize,
    drive: &Drive,
    shift: &ShiftSolution,
    t: f64,
) -> Result<ComplexEnergy> {
    let g = shift.g(t)?;
    let a = shift.alpha(t)?;
    let f = drive.eval(t)?;
    match n {
        0 => Ok(ComplexEnergy::new(1.0 + g * g + a * a, 2.0 * a * f)),
        1 => {
            let g2 = g * g;
            let a2 = a * a;
            let e11 = 3.0 + 7.0 * (g2 + a2) + 4.0 * a2 * g2 + 2.0 * (a2 * a2 + g2 * g2);
            let denom = 1.0 + 2.0 * g2 + 2.0 * a2;
            Ok(ComplexEnergy::new(
                e11 / denom,
                2.0 * a * f * (3.0 + 2.0 * a2 + 2.0 * g2) / denom,
            ))
        }
        _ => Err(Error::Unsupported(format!(
            "closed-form energy exists only for n = 0, 1 (got n = {n}); use quadrature"
        ))),
    }
}

fn check_decay(state: &GridState) -> Result<()> {
    let max = state.max_abs();
    let edge = state.amplitudes[0]
        .norm()
        .max(state.amplitudes[state.amplitudes.len() - 1].norm());
    if edge > DECAY_THRESHOLD * max {
        return Err(Error::Truncation(format!(
            "endpoint amplitude {:.3e} of peak {:.3e}; quadrature would be truncated",
            edge, max
        )));
    }
    Ok(())
}

/// Simpson integral of |psi|^2 over the grid.
pub fn norm_sq(state: &GridState) -> f64 {
    let abs2: Vec<f64> = state.amplitudes.iter().map(|a| a.norm_sqr()).collect();
    simpson_uniform(state.grid.spacing(), &abs2)
}

/// <E> = integral psi* (-d_xx + x^2 + 2 i f x) psi / integral |psi|^2, with
/// a fourth-order centered second derivative and Simpson quadrature.
pub fn energy_quadrature(state: &GridState, drive: &Drive) -> Result<ComplexEnergy> {
    check_decay(state)?;
    let h = state.grid.spacing();
    let f = drive.eval(state.t)?;
    let d2 = second_derivative_4(h, &state.amplitudes);
    let integrand: Vec<Complex64> = state
        .amplitudes
        .iter()
        .zip(&d2)
        .enumerate()
        .map(|(j, (a, dd))| {
            let x = state.grid.node(j);
            a.conj() * (-dd + Complex64::new(x * x, 2.0 * f * x) * a)
        })
        .collect();
    let num = simpson_uniform(h, &integrand);
    let den = norm_sq(state);
    if !(den > 0.0) {
        return Err(Error::InvalidInput("state norm vanished".into()));
    }
    Ok(ComplexEnergy::from(num / den))
}

/// <U_I> = 2 f(t) <x>. The position expectation of any state is real; its
/// imaginary part is asserted tiny as a self-check and the real part is
/// returned.
pub fn u_imag_expectation(state: &GridState, drive: &Drive) -> Result<f64> {
    check_decay(state)?;
    let h = state.grid.spacing();
    let f = drive.eval(state.t)?;
    let integrand: Vec<Complex64> = state
        .amplitudes
        .iter()
        .enumerate()
        .map(|(j, a)| a.conj() * state.grid.node(j) * a)
        .collect();
    let num = simpson_uniform(h, &integrand);
    let den = norm_sq(state);
    if !(den > 0.0) {
        return Err(Error::InvalidInput("state norm vanished".into()));
    }
    let x_exp = num / den;
    if x_exp.im.abs() > 1e-10 * (1.0 + x_exp.re.abs()) {
        return Err(Error::Consistency(format!(
            "<x> acquired an imaginary part {:.3e}",
            x_exp.im
        )));
    }
    Ok(2.0 * f * x_exp.re)
}

/// Quadrature-route report for a sampled state.
pub fn report_quadrature(state: &GridState, drive: &Drive) -> Result<ExpectationReport> {
    Ok(ExpectationReport {
        energy: energy_quadrature(state, drive)?,
        u_imag: u_imag_expectation(state, drive)?,
        norm_sq: norm_sq(state),
        method: EnergyMethod::Quadrature,
    })
}

/// Closed-form report for n = 0, 1. The norm comes from the Gaussian
/// integrals of the exact states and <U_I> equals Im <E> identically for
/// them, so no grid is involved.
pub fn report_closed(
    n: usize,
    drive: &Drive,
    shift: &ShiftSolution,
    t: f64,
) -> Result<ExpectationReport> {
    let energy = energy_closed(n, drive, shift, t)?;
    let g = shift.g(t)?;
    let a = shift.alpha(t)?;
    let gauss = PI.sqrt() * (g * g + a * a).exp();
    let norm_sq = match n {
        0 => gauss,
        1 => 4.0 * gauss * (a * a + 0.5 + g * g),
        _ => unreachable!("energy_closed already rejected n >= 2"),
    };
    Ok(ExpectationReport {
        energy,
        u_imag: energy.im,
        norm_sq,
        method: EnergyMethod::Closed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_form::ClosedFormState;
    use crate::model::SpatialGrid;
    use crate::shift::solve_shift_analytic;

    fn drive_t() -> Drive {
        Drive::polynomial(vec![0.0, 1.0])
    }

    fn drive_t2() -> Drive {
        Drive::polynomial(vec![0.0, 0.0, 1.0])
    }

    #[test]
    fn closed_energy_linear_drive_ground() {
        // <0|E|0> = t^2 + 5/4 + i t at t = 1
        let d = drive_t();
        let s = solve_shift_analytic(&d).unwrap();
        let e = energy_closed(0, &d, &s, 1.0).unwrap();
        assert!((e.re - 2.25).abs() < 1e-14);
        assert!((e.im - 1.0).abs() < 1e-14);
    }

    #[test]
    fn closed_energy_linear_drive_excited() {
        // <1|E|1> at t = 1 equals (119 + 44i)/28
        let d = drive_t();
        let s = solve_shift_analytic(&d).unwrap();
        let e = energy_closed(1, &d, &s, 1.0).unwrap();
        assert!((e.re - 119.0 / 28.0).abs() < 1e-13);
        assert!((e.im - 44.0 / 28.0).abs() < 1e-13);
    }

    #[test]
    fn closed_energy_linear_drive_excited_trajectory() {
        // the general-t form specialized to f = t:
        // (39 + 16(4t^2 + t^4) + 4i(7t + 4t^3)) / (4(3 + 4t^2))
        let d = drive_t();
        let s = solve_shift_analytic(&d).unwrap();
        for &t in &[0.0f64, 0.3, 0.7, 1.0, 1.6, 2.0, -1.2] {
            let e = energy_closed(1, &d, &s, t).unwrap();
            let denom = 4.0 * (3.0 + 4.0 * t * t);
            let want_re = (39.0 + 16.0 * (4.0 * t * t + t.powi(4))) / denom;
            let want_im = 4.0 * (7.0 * t + 4.0 * t.powi(3)) / denom;
            assert!(
                (e.re - want_re).abs() <= 1e-13 * want_re.abs().max(1.0),
                "t={t}"
            );
            assert!(
                (e.im - want_im).abs() <= 1e-13 * want_im.abs().max(1.0),
                "t={t}"
            );
        }
    }

    #[test]
    fn closed_energy_quadratic_drive_ground() {
        // <0|E|0> = t^4 + 5/4 + 2 i t^3 at t = 1
        let d = drive_t2();
        let s = solve_shift_analytic(&d).unwrap();
        let e = energy_closed(0, &d, &s, 1.0).unwrap();
        assert!((e.re - 2.25).abs() < 1e-14);
        assert!((e.im - 2.0).abs() < 1e-14);
    }

    #[test]
    fn closed_energy_constant_drive_is_shifted_real() {
        let d = Drive::constant(2.0);
        let s = solve_shift_analytic(&d).unwrap();
        for &t in &[0.0, 3.0, 7.0] {
            let e = energy_closed(0, &d, &s, t).unwrap();
            assert!((e.re - 5.0).abs() < 1e-14);
            assert_eq!(e.im, 0.0);
        }
    }

    #[test]
    fn closed_energy_rejects_higher_levels() {
        let d = drive_t();
        let s = solve_shift_analytic(&d).unwrap();
        assert!(matches!(
            energy_closed(2, &d, &s, 0.0),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn norm_of_gaussian_ground_state() {
        let s = ClosedFormState::analytic(0, Drive::constant(0.0)).unwrap();
        let grid = SpatialGrid::symmetric(12.0, 2400).unwrap();
        let st = s.sample(&grid, 0.0).unwrap();
        assert!((norm_sq(&st) - PI.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn norm_is_homogeneous_of_degree_two() {
        let s = ClosedFormState::analytic(0, drive_t2()).unwrap();
        let grid = SpatialGrid::symmetric(12.0, 2401).unwrap();
        let st = s.sample(&grid, 1.0).unwrap();
        let base = norm_sq(&st);
        assert!(base.is_finite() && base > 0.0);
        let mut doubled = st.clone();
        for a in &mut doubled.amplitudes {
            *a *= 2.0;
        }
        assert!((norm_sq(&doubled) - 4.0 * base).abs() < 1e-10 * base);
    }

    #[test]
    fn quadrature_agrees_with_closed_form() {
        for (n, d) in [
            (0usize, drive_t()),
            (1, drive_t()),
            (0, drive_t2()),
            (1, drive_t2()),
        ] {
            let shift = solve_shift_analytic(&d).unwrap();
            for &t in &[0.0, 0.5, 1.0, 2.0] {
                // widen for the drift of the state center at late times
                let half = (shift.g(t).unwrap().abs() + shift.alpha(t).unwrap().abs() + 10.0)
                    .ceil()
                    .max(12.0);
                let grid = SpatialGrid::symmetric(half, (200.0 * half) as usize + 1).unwrap();
                let closed = energy_closed(n, &d, &shift, t).unwrap();
                let cf = ClosedFormState::new(n, d.clone(), shift.clone()).unwrap();
                let st = cf.sample(&grid, t).unwrap();
                let quad = energy_quadrature(&st, &d).unwrap();
                let err = (quad.as_complex() - closed.as_complex()).norm();
                assert!(
                    err <= 1e-6 * closed.as_complex().norm(),
                    "n={n} t={t}: closed {closed:?} vs quadrature {quad:?}"
                );
            }
        }
    }

    #[test]
    fn quadrature_zero_drive_excited_level() {
        let d = Drive::constant(0.0);
        let cf = ClosedFormState::analytic(2, d.clone()).unwrap();
        let grid = SpatialGrid::symmetric(12.0, 4801).unwrap();
        let st = cf.sample(&grid, 0.7).unwrap();
        let e = energy_quadrature(&st, &d).unwrap();
        assert!((e.re - 5.0).abs() <= 1e-8, "re = {}", e.re);
        assert!(e.im.abs() <= 1e-8);
    }

    #[test]
    fn u_imag_examples() {
        let grid = SpatialGrid::symmetric(12.0, 2401).unwrap();
        // constant drive: alpha = 0 so <U_I> = 0 at any level
        let d = Drive::constant(1.0);
        for n in 0..=3 {
            let cf = ClosedFormState::analytic(n, d.clone()).unwrap();
            let st = cf.sample(&grid, 1.4).unwrap();
            assert!(u_imag_expectation(&st, &d).unwrap().abs() <= 1e-10);
        }
        // f = t at t = 1: <U_I> = 1, matching Im <E>
        let d = drive_t();
        let cf = ClosedFormState::analytic(0, d.clone()).unwrap();
        let st = cf.sample(&grid, 1.0).unwrap();
        assert!((u_imag_expectation(&st, &d).unwrap() - 1.0).abs() <= 1e-8);
        // zero drive
        let d = Drive::constant(0.0);
        let cf = ClosedFormState::analytic(0, d.clone()).unwrap();
        let st = cf.sample(&grid, 0.0).unwrap();
        assert_eq!(u_imag_expectation(&st, &d).unwrap(), 0.0);
    }

    #[test]
    fn truncation_detected_on_narrow_grid() {
        let d = drive_t2();
        let cf = ClosedFormState::analytic(0, d.clone()).unwrap();
        let grid = SpatialGrid::symmetric(12.0, 2401).unwrap();
        let mut st = cf.sample(&grid, 1.0).unwrap();
        // fake a slowly-decaying tail
        let peak = st.max_abs();
        let len = st.amplitudes.len();
        st.amplitudes[0] = Complex64::new(1e-3 * peak, 0.0);
        st.amplitudes[len - 1] = Complex64::new(1e-3 * peak, 0.0);
        assert!(matches!(
            energy_quadrature(&st, &d),
            Err(Error::Truncation(_))
        ));
    }

    #[test]
    fn energy_invariant_under_state_scaling() {
        let d = drive_t2();
        let cf = ClosedFormState::analytic(1, d.clone()).unwrap();
        let grid = SpatialGrid::symmetric(12.0, 2401).unwrap();
        let st = cf.sample(&grid, 0.5).unwrap();
        let base = energy_quadrature(&st, &d).unwrap();
        let mut scaled = st.clone();
        let c = Complex64::new(-0.7, 2.3);
        for a in &mut scaled.amplitudes {
            *a *= c;
        }
        let e = energy_quadrature(&scaled, &d).unwrap();
        assert!((e.as_complex() - base.as_complex()).norm() <= 1e-10 * base.as_complex().norm());
    }

    #[test]
    fn closed_report_norm_matches_quadrature() {
        let grid = SpatialGrid::symmetric(12.0, 2401).unwrap();
        for (n, d) in [(0usize, drive_t2()), (1, drive_t2())] {
            let shift = solve_shift_analytic(&d).unwrap();
            let rep = report_closed(n, &d, &shift, 1.0).unwrap();
            let cf = ClosedFormState::new(n, d.clone(), shift).unwrap();
            let st = cf.sample(&grid, 1.0).unwrap();
            let quad = norm_sq(&st);
            assert!(
                (rep.norm_sq - quad).abs() <= 1e-8 * quad,
                "n={n}: {} vs {}",
                rep.norm_sq,
                quad
            );
        }
    }
}
