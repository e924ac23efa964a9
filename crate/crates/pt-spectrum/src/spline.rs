//! Cubic spline through strictly increasing knots with not-a-knot boundary
//! conditions. Gives the C^2 interpolant sampled drives need so that the
//! shift ODE sees a continuous second derivative; not-a-knot (rather than
//! natural) ends keep the edge derivatives honest, which the shift solver
//! relies on when it seeds initial data from the span start.

use crate::numeric::thomas;

#[derive(Debug, Clone)]
pub(crate) struct CubicSpline {
    xs: Vec<f64>,
    ys: Vec<f64>,
    /// Second derivative of the spline at each knot.
    y2: Vec<f64>,
}

impl CubicSpline {
    /// Knots must be strictly increasing; `xs.len() == ys.len() >= 2`.
    pub(crate) fn new(xs: Vec<f64>, ys: Vec<f64>) -> Self {
        let n = xs.len();
        debug_assert!(n >= 2 && ys.len() == n);
        let y2 = match n {
            2 => vec![0.0; 2],
            3 => {
                // single parabola through the three points
                let h0 = xs[1] - xs[0];
                let h1 = xs[2] - xs[1];
                let m = 2.0 * ((ys[2] - ys[1]) / h1 - (ys[1] - ys[0]) / h0) / (h0 + h1);
                vec![m; 3]
            }
            _ => {
                // Interior equations for the second derivatives m_i:
                // (h_{i-1}/6) m_{i-1} + ((h_{i-1}+h_i)/3) m_i + (h_i/6) m_{i+1}
                //   = (y_{i+1}-y_i)/h_i - (y_i-y_{i-1})/h_{i-1}
                // with the boundary m's eliminated through the not-a-knot
                // relations (third derivative continuous across the second
                // and second-to-last knots).
                let h = |i: usize| xs[i + 1] - xs[i];
                let k = n - 2; // unknowns m_1 .. m_{n-2}
                let mut sub = vec![0.0; k - 1];
                let mut diag = vec![0.0; k];
                let mut sup = vec![0.0; k - 1];
                let mut rhs = vec![0.0; k];
                for i in 1..n - 1 {
                    let j = i - 1;
                    let (h0, h1) = (h(i - 1), h(i));
                    diag[j] = (h0 + h1) / 3.0;
                    if j > 0 {
                        sub[j - 1] = h0 / 6.0;
                    }
                    if j < k - 1 {
                        sup[j] = h1 / 6.0;
                    }
                    rhs[j] = (ys[i + 1] - ys[i]) / h1 - (ys[i] - ys[i - 1]) / h0;
                }
                // left: m_0 = ((h0+h1) m_1 - h0 m_2) / h1
                let (h0, h1) = (h(0), h(1));
                diag[0] += h0 / 6.0 * (h0 + h1) / h1;
                sup[0] -= h0 / 6.0 * h0 / h1;
                // right: m_{n-1} = ((h_{n-2}+h_{n-3}) m_{n-2} - h_{n-2} m_{n-3}) / h_{n-3}
                let (ha, hb) = (h(n - 3), h(n - 2));
                diag[k - 1] += hb / 6.0 * (ha + hb) / ha;
                sub[k - 2] -= hb / 6.0 * hb / ha;

                let sol = thomas(&sub, &diag, &sup, &rhs);
                let mut y2 = vec![0.0; n];
                y2[1..n - 1].copy_from_slice(&sol);
                y2[0] = ((h0 + h1) * y2[1] - h0 * y2[2]) / h1;
                y2[n - 1] = ((ha + hb) * y2[n - 2] - hb * y2[n - 3]) / ha;
                y2
            }
        };
        Self { xs, ys, y2 }
    }

    fn segment(&self, x: f64) -> usize {
        // Rightmost knot <= x, clamped to a valid segment index.
        match self.xs.binary_search_by(|k| k.partial_cmp(&x).unwrap()) {
            Ok(i) => i.min(self.xs.len() - 2),
            Err(i) => i.saturating_sub(1).min(self.xs.len() - 2),
        }
    }

    /// Value and first three derivatives; `x` must lie within the knot span.
    pub(crate) fn eval_derivs(&self, x: f64) -> (f64, f64, f64, f64) {
        let i = self.segment(x);
        let h = self.xs[i + 1] - self.xs[i];
        let a = (self.xs[i + 1] - x) / h;
        let b = (x - self.xs[i]) / h;
        let (ya, yb) = (self.ys[i], self.ys[i + 1]);
        let (ma, mb) = (self.y2[i], self.y2[i + 1]);
        let value = a * ya + b * yb + ((a * a * a - a) * ma + (b * b * b - b) * mb) * h * h / 6.0;
        let d1 =
            (yb - ya) / h - (3.0 * a * a - 1.0) / 6.0 * h * ma + (3.0 * b * b - 1.0) / 6.0 * h * mb;
        let d2 = a * ma + b * mb;
        let d3 = (mb - ma) / h;
        (value, d1, d2, d3)
    }

    pub(crate) fn eval(&self, x: f64) -> f64 {
        self.eval_derivs(x).0
    }
}
