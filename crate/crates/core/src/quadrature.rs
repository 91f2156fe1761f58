//! Gauss–Hermite quadrature and normalised Hermite functions.

use nalgebra::{DMatrix, SymmetricEigen};

/// Normalised Hermite functions φ₀..φ_n at `x`:
/// φ_n(x) = (2ⁿ n! √π)^{-1/2} H_n(x) e^{-x²/2}.
pub fn hermite_functions(n: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    hermite_functions_into(x, n, &mut out);
    out
}

pub(crate) fn hermite_functions_into(x: f64, n: usize, out: &mut Vec<f64>) {
    out.clear();
    let p0 = std::f64::consts::PI.powf(-0.25) * (-0.5 * x * x).exp();
    out.push(p0);
    if n == 0 {
        return;
    }
    out.push(std::f64::consts::SQRT_2 * x * p0);
    for k in 2..=n {
        let kf = k as f64;
        let next = (2.0 / kf).sqrt() * x * out[k - 1] - ((kf - 1.0) / kf).sqrt() * out[k - 2];
        out.push(next);
    }
}

/// Nodes of the order-`q` Gauss–Hermite rule together with *scaled* weights
/// `w_k e^{x_k²}`, so that `∫ f(x) dx ≈ Σ_k W_k f(x_k)` for `f` that decays
/// like a product of Hermite functions.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussHermite {
    pub nodes: Vec<f64>,
    pub scaled_weights: Vec<f64>,
}

impl GaussHermite {
    pub fn new(q: usize) -> Self {
        assert!(q >= 1, "quadrature order must be positive");
        // Golub–Welsch: eigenvalues of the Jacobi matrix, then Newton polish
        let mut jac = DMatrix::zeros(q, q);
        for k in 1..q {
            let b = (k as f64 / 2.0).sqrt();
            jac[(k, k - 1)] = b;
            jac[(k - 1, k)] = b;
        }
        let mut nodes: Vec<f64> = SymmetricEigen::new(jac).eigenvalues.iter().copied().collect();
        nodes.sort_by(|a, b| a.total_cmp(b));

        let mut buf = Vec::with_capacity(q + 1);
        for x in nodes.iter_mut() {
            for _ in 0..3 {
                // φ_q'(x) = √(2q) φ_{q-1}(x) − x φ_q(x); at a root φ_q = 0
                hermite_functions_into(*x, q, &mut buf);
                let d = (2.0 * q as f64).sqrt() * buf[q - 1] - *x * buf[q];
                if d == 0.0 {
                    break;
                }
                let dx = buf[q] / d;
                *x -= dx;
                if dx.abs() <= 1e-16 * x.abs().max(1.0) {
                    break;
                }
            }
        }
        // enforce the exact reflection symmetry of the rule
        for k in 0..q / 2 {
            let x = 0.5 * (nodes[q - 1 - k] - nodes[k]);
            nodes[k] = -x;
            nodes[q - 1 - k] = x;
        }
        if q % 2 == 1 {
            nodes[q / 2] = 0.0;
        }
        let scaled_weights = nodes
            .iter()
            .map(|&x| {
                hermite_functions_into(x, q - 1, &mut buf);
                1.0 / buf.iter().map(|v| v * v).sum::<f64>()
            })
            .collect();
        Self { nodes, scaled_weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// `∫ f(x) dx` for functions carrying their own Gaussian decay.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.scaled_weights).map(|(&x, &w)| w * f(x)).sum()
    }

    /// Table `φ_n(x_k)` with rows k = node, columns n = 0..=n_max.
    pub fn hermite_table(&self, n_max: usize) -> DMatrix<f64> {
        let mut t = DMatrix::zeros(self.order(), n_max + 1);
        let mut buf = Vec::with_capacity(n_max + 1);
        for (k, &x) in self.nodes.iter().enumerate() {
            hermite_functions_into(x, n_max, &mut buf);
            for n in 0..=n_max {
                t[(k, n)] = buf[n];
            }
        }
        t
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orthonormality() {
        let gh = GaussHermite::new(60);
        let t = gh.hermite_table(25);
        for m in 0..=25 {
            for n in 0..=25 {
                let s: f64 = (0..gh.order()).map(|k| gh.scaled_weights[k] * t[(k, m)] * t[(k, n)]).sum();
                let expect = if m == n { 1.0 } else { 0.0 };
                assert!((s - expect).abs() < 1e-12, "({m},{n}) -> {s}");
            }
        }
    }

    #[test]
    fn gaussian_moments() {
        // ∫ x² e^{-x²} dx = √π / 2
        let gh = GaussHermite::new(20);
        let v = gh.integrate(|x| x * x * (-x * x).exp());
        assert!((v - std::f64::consts::PI.sqrt() / 2.0).abs() < 1e-13);
    }

    #[test]
    fn nodes_are_roots_and_symmetric() {
        let gh = GaussHermite::new(41);
        for (a, b) in gh.nodes.iter().zip(gh.nodes.iter().rev()) {
            assert!((a + b).abs() < 1e-12);
        }
        for &x in &gh.nodes {
            let phi = hermite_functions(41, x);
            let scale = phi.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            assert!(phi[41].abs() < 1e-12 * scale);
        }
    }
}
