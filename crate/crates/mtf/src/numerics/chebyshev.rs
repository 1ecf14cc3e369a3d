//! Chebyshev interpolants on finite intervals (Clenshaw evaluation).

pub(crate) struct Chebyshev {
    a: f64,
    b: f64,
    coeffs: Vec<f64>,
}

impl Chebyshev {
    /// Fit `f` on [a, b] at n+1 Chebyshev points and drop trailing
    /// coefficients below `trim` relative to the largest one.
    pub(crate) fn fit<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize, trim: f64) -> Self {
        let nodes: Vec<f64> = (0..=n)
            .map(|j| {
                let t = (std::f64::consts::PI * j as f64 / n as f64).cos();
                0.5 * (a + b) + 0.5 * (b - a) * t
            })
            .collect();
        let vals: Vec<f64> = nodes.iter().map(|&x| f(x)).collect();
        let mut coeffs = vec![0.0; n + 1];
        for (k, c) in coeffs.iter_mut().enumerate() {
            let mut s = 0.5 * (vals[0] + if k % 2 == 0 { vals[n] } else { -vals[n] });
            for j in 1..n {
                s += vals[j] * (std::f64::consts::PI * (k * j) as f64 / n as f64).cos();
            }
            *c = 2.0 * s / n as f64;
        }
        let scale = coeffs.iter().fold(0.0_f64, |m, c| m.max(c.abs()));
        let mut keep = coeffs.len();
        while keep > 8 && coeffs[keep - 1].abs() < trim * scale && coeffs[keep - 2].abs() < trim * scale {
            keep -= 1;
        }
        coeffs.truncate(keep);
        Chebyshev { a, b, coeffs }
    }

    pub(crate) fn eval(&self, x: f64) -> f64 {
        let t = (2.0 * x - self.a - self.b) / (self.b - self.a);
        let (mut b1, mut b2) = (0.0, 0.0);
        for &c in self.coeffs.iter().skip(1).rev() {
            let b0 = 2.0 * t * b1 - b2 + c;
            b2 = b1;
            b1 = b0;
        }
        t * b1 - b2 + 0.5 * self.coeffs[0]
    }
}

#[cfg(test)]
mod tests {
    use super::Chebyshev;

    #[test]
    fn reproduces_smooth_function() {
        let ch = Chebyshev::fit(|x: f64| (0.3 * x).sin() * (-0.1 * x).exp(), -5.0, 30.0, 96, 1e-16);
        for i in 0..200 {
            let x = -5.0 + 35.0 * i as f64 / 199.0;
            let exact = (0.3 * x).sin() * (-0.1 * x).exp();
            assert!((ch.eval(x) - exact).abs() < 1e-12, "x={x}");
        }
    }
}
