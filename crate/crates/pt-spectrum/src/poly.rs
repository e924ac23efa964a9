//! Minimal polynomial arithmetic on coefficient slices (ascending powers).

/// Horner evaluation.
pub(crate) fn eval(coeffs: &[f64], t: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * t + c)
}

pub(crate) fn derivative(coeffs: &[f64]) -> Vec<f64> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, &c)| k as f64 * c)
        .collect()
}

/// Antiderivative with zero constant term.
pub(crate) fn antiderivative(coeffs: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(coeffs.len() + 1);
    out.push(0.0);
    for (k, &c) in coeffs.iter().enumerate() {
        out.push(c / (k + 1) as f64);
    }
    out
}

pub(crate) fn mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    out
}

pub(crate) fn scale(a: &[f64], k: f64) -> Vec<f64> {
    a.iter().map(|&c| k * c).collect()
}

/// a - b, padded to the longer length.
pub(crate) fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| a.get(i).copied().unwrap_or(0.0) - b.get(i).copied().unwrap_or(0.0))
        .collect()
}

pub(crate) fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| a.get(i).copied().unwrap_or(0.0) + b.get(i).copied().unwrap_or(0.0))
        .collect()
}

/// Drop trailing zero coefficients (keeps at least one entry).
pub(crate) fn trim(mut v: Vec<f64>) -> Vec<f64> {
    while v.len() > 1 && v.last() == Some(&0.0) {
        v.pop();
    }
    v
}
