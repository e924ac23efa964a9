//! Quadrature, finite-difference and tridiagonal-solve primitives shared by
//! the higher-level modules.

use num_complex::Complex64;
use std::ops::{Add, AddAssign, Div, Mul, Sub};

/// Composite Simpson rule on uniformly spaced samples.
///
/// An odd interval count is closed with a 3/8 rule on the last three
/// intervals, which keeps the composite rule fourth order.
pub(crate) fn simpson_uniform<T>(h: f64, v: &[T]) -> T
where
    T: Copy + Default + AddAssign + Add<Output = T> + Mul<f64, Output = T>,
{
    let mut acc = T::default();
    let n_int = v.len().saturating_sub(1);
    if n_int == 0 {
        return acc;
    }
    if n_int == 1 {
        return (v[0] + v[1]) * (h / 2.0);
    }
    // Simpson pairs over the even-length prefix.
    let simpson_end = if n_int % 2 == 0 { n_int } else { n_int - 3 };
    let mut i = 0;
    while i + 2 <= simpson_end {
        acc += (v[i] + v[i + 1] * 4.0 + v[i + 2]) * (h / 3.0);
        i += 2;
    }
    if n_int % 2 != 0 {
        // 3/8 rule over the trailing three intervals.
        let j = n_int - 3;
        acc += (v[j] + v[j + 1] * 3.0 + v[j + 2] * 3.0 + v[j + 3]) * (3.0 * h / 8.0);
    }
    acc
}

/// Thomas algorithm for a general tridiagonal system; no pivoting, the
/// caller guarantees diagonal dominance.
pub(crate) fn thomas<T>(sub: &[T], diag: &[T], sup: &[T], rhs: &[T]) -> Vec<T>
where
    T: Copy + Default + Add<Output = T> + Sub<Output = T> + Mul<Output = T> + Div<Output = T>,
{
    let n = diag.len();
    assert!(n > 0 && rhs.len() == n);
    assert!(n == 1 || (sub.len() == n - 1 && sup.len() == n - 1));

    let mut c_prime = vec![T::default(); n.saturating_sub(1)];
    let mut d_prime = vec![T::default(); n];

    let mut denom = diag[0];
    if n > 1 {
        c_prime[0] = sup[0] / denom;
    }
    d_prime[0] = rhs[0] / denom;
    for i in 1..n {
        denom = diag[i] - sub[i - 1] * c_prime[i - 1];
        if i < n - 1 {
            c_prime[i] = sup[i] / denom;
        }
        d_prime[i] = (rhs[i] - sub[i - 1] * d_prime[i - 1]) / denom;
    }

    let mut x = vec![T::default(); n];
    x[n - 1] = d_prime[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = d_prime[i] - c_prime[i] * x[i + 1];
    }
    x
}

/// Fourth-order centered second derivative of uniformly sampled complex data.
/// Samples outside the slice are taken as zero (decayed-tail convention).
pub(crate) fn second_derivative_4(h: f64, v: &[Complex64]) -> Vec<Complex64> {
    let n = v.len();
    let at = |i: isize| -> Complex64 {
        if i < 0 || i >= n as isize {
            Complex64::new(0.0, 0.0)
        } else {
            v[i as usize]
        }
    };
    let scale = 1.0 / (12.0 * h * h);
    (0..n as isize)
        .map(|j| {
            (-at(j - 2) + 16.0 * at(j - 1) - 30.0 * at(j) + 16.0 * at(j + 1) - at(j + 2)) * scale
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simpson_integrates_cubics_exactly() {
        // x^3 on [0, 1] with an even interval count
        let n = 101;
        let h = 1.0 / (n as f64 - 1.0);
        let v: Vec<f64> = (0..n).map(|i| (i as f64 * h).powi(3)).collect();
        assert!((simpson_uniform(h, &v) - 0.25).abs() < 1e-14);
        // odd interval count exercises the 3/8 tail
        let n = 100;
        let h = 1.0 / (n as f64 - 1.0);
        let v: Vec<f64> = (0..n).map(|i| (i as f64 * h).powi(3)).collect();
        assert!((simpson_uniform(h, &v) - 0.25).abs() < 1e-14);
    }

    #[test]
    fn thomas_solves_reference_system() {
        // [2 1 0; 1 2 1; 0 1 2] x = [4, 8, 8] -> x = [1, 2, 3]
        let x = thomas(&[1.0, 1.0], &[2.0, 2.0, 2.0], &[1.0, 1.0], &[4.0, 8.0, 8.0]);
        for (got, want) in x.iter().zip([1.0f64, 2.0, 3.0]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn thomas_complex_roundtrip() {
        let sub = vec![Complex64::new(0.0, 0.5); 3];
        let sup = vec![Complex64::new(0.0, 0.5); 3];
        let diag = vec![Complex64::new(2.0, 1.0); 4];
        let x_true: Vec<Complex64> = (0..4).map(|i| Complex64::new(i as f64, -1.0)).collect();
        let mut rhs = vec![Complex64::default(); 4];
        for i in 0..4 {
            rhs[i] = diag[i] * x_true[i];
            if i > 0 {
                rhs[i] += sub[i - 1] * x_true[i - 1];
            }
            if i < 3 {
                rhs[i] += sup[i] * x_true[i + 1];
            }
        }
        let x = thomas(&sub, &diag, &sup, &rhs);
        for (got, want) in x.iter().zip(&x_true) {
            assert!((got - want).norm() < 1e-12);
        }
    }

    #[test]
    fn second_derivative_on_gaussian() {
        let n = 2001;
        let h = 20.0 / (n as f64 - 1.0);
        let v: Vec<Complex64> = (0..n)
            .map(|i| {
                let x = -10.0 + i as f64 * h;
                Complex64::new((-0.5 * x * x).exp(), 0.0)
            })
            .collect();
        let d2 = second_derivative_4(h, &v);
        // (x^2 - 1) e^{-x^2/2}
        let mid = n / 2;
        let x = -10.0 + mid as f64 * h;
        let want = (x * x - 1.0) * (-0.5 * x * x).exp();
        assert!((d2[mid].re - want).abs() < 1e-7);
    }
}
