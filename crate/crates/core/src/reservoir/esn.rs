//! Reference leaky echo state network.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::linalg::Matrix;
use super::StateMatrix;
use crate::{lit, to_f64, Error, Result, Scalar};

const RADIUS_BURN_IN: usize = 200;
const RADIUS_ITERATIONS: usize = 3000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Activation {
    #[default]
    Tanh,
    /// Linear reservoir, used for delay-line and linear-baseline oracles.
    Identity,
}

impl Activation {
    fn apply<T: Scalar>(self, x: T) -> T {
        match self {
            Activation::Tanh => x.tanh(),
            Activation::Identity => x,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EsnConfig<T> {
    /// Reservoir size `N_x`.
    pub size: usize,
    /// Input dimension `N_u`.
    pub inputs: usize,
    /// Leak rate `alpha_r` in (0, 1].
    pub leak: T,
    pub spectral_radius: T,
    pub input_scale: T,
    /// Fraction of nonzero recurrent weights, in (0, 1].
    pub density: T,
    pub seed: u64,
    pub activation: Activation,
}

impl<T: Scalar> EsnConfig<T> {
    pub fn new(size: usize, seed: u64) -> Self {
        Self {
            size,
            inputs: 1,
            leak: T::one(),
            spectral_radius: lit(0.9),
            input_scale: T::one(),
            density: lit(0.2),
            seed,
            activation: Activation::Tanh,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.size == 0 {
            return Err(Error::domain("N_x", 0.0, "reservoir size must be >= 1"));
        }
        if self.inputs == 0 {
            return Err(Error::domain("N_u", 0.0, "input size must be >= 1"));
        }
        if !(self.leak > T::zero() && self.leak <= T::one()) {
            return Err(Error::domain("leak", to_f64(self.leak), "must lie in (0, 1]"));
        }
        if !(self.density > T::zero() && self.density <= T::one()) {
            return Err(Error::domain("density", to_f64(self.density), "must lie in (0, 1]"));
        }
        if !(self.spectral_radius >= T::zero() && self.spectral_radius.is_finite()) {
            return Err(Error::domain(
                "spectral_radius",
                to_f64(self.spectral_radius),
                "must be finite and >= 0",
            ));
        }
        if !(self.input_scale.is_finite()) {
            return Err(Error::domain("input_scale", to_f64(self.input_scale), "must be finite"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EsnWeights<T> {
    /// `N_x x N_u` input weights.
    pub w_in: Matrix<T>,
    /// `N_x x N_x` recurrent weights.
    pub w: Matrix<T>,
}

impl<T: Scalar> EsnWeights<T> {
    /// Seeded random weights rescaled to the configured spectral radius.
    pub fn random(cfg: &EsnConfig<T>) -> Result<Self> {
        cfg.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let n = cfg.size;
        let density = to_f64(cfg.density);

        let mut w = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                if rng.random::<f64>() < density {
                    w[(i, j)] = lit(rng.random_range(-1.0..=1.0));
                }
            }
        }
        let rho = spectral_radius(&w);
        if rho > T::zero() {
            w.scale(cfg.spectral_radius / rho);
        }

        let mut w_in = Matrix::zeros(n, cfg.inputs);
        let scale = to_f64(cfg.input_scale);
        for i in 0..n {
            for j in 0..cfg.inputs {
                w_in[(i, j)] = lit(scale * rng.random_range(-1.0..=1.0));
            }
        }
        Ok(Self { w_in, w })
    }

    /// Shift register of `depth + 1` cells: cell `i` holds the input from
    /// `i` steps ago when run with identity activation and unit leak.
    pub fn delay_line(depth: usize) -> Self {
        let n = depth + 1;
        let mut w = Matrix::zeros(n, n);
        for i in 1..n {
            w[(i, i - 1)] = T::one();
        }
        let mut w_in = Matrix::zeros(n, 1);
        w_in[(0, 0)] = T::one();
        Self { w_in, w }
    }

    pub fn size(&self) -> usize {
        self.w.rows()
    }

    pub fn inputs(&self) -> usize {
        self.w_in.cols()
    }
}

/// Spectral radius estimated from the asymptotic growth rate of `||W^k v||`.
pub fn spectral_radius<T: Scalar>(w: &Matrix<T>) -> T {
    let n = w.rows();
    if n == 0 {
        return T::zero();
    }
    // Deterministic, generic start vector.
    let mut v: Vec<T> = (0..n)
        .map(|i| lit(1.0 + 0.37 * ((i * 7919) % 101) as f64 / 101.0))
        .collect();
    let mut log_growth = 0.0f64;
    for it in 0..RADIUS_BURN_IN + RADIUS_ITERATIONS {
        let next = w.matvec(&v).expect("square matrix");
        let norm = to_f64(next.iter().fold(T::zero(), |s, &x| s + x * x).sqrt());
        if norm == 0.0 || !norm.is_finite() {
            return T::zero();
        }
        if it >= RADIUS_BURN_IN {
            log_growth += norm.ln();
        }
        let inv = lit::<T>(norm.recip());
        v = next.into_iter().map(|x| x * inv).collect();
    }
    lit((log_growth / RADIUS_ITERATIONS as f64).exp())
}

/// One leaky-integrator step
/// `x_n = (1 - alpha_r) x_{n-1} + alpha_r f(W_in u_n + W x_{n-1})`.
pub fn esn_update<T: Scalar>(
    x_prev: &[T],
    u: &[T],
    weights: &EsnWeights<T>,
    leak: T,
    activation: Activation,
) -> Result<Vec<T>> {
    if x_prev.len() != weights.size() {
        return Err(Error::DimensionMismatch {
            what: "reservoir state",
            expected: weights.size(),
            found: x_prev.len(),
        });
    }
    if u.len() != weights.inputs() {
        return Err(Error::DimensionMismatch {
            what: "reservoir input",
            expected: weights.inputs(),
            found: u.len(),
        });
    }
    let drive = weights.w_in.matvec(u)?;
    let recur = weights.w.matvec(x_prev)?;
    Ok(x_prev
        .iter()
        .zip(drive.iter().zip(&recur))
        .map(|(&x, (&a, &b))| (T::one() - leak) * x + leak * activation.apply(a + b))
        .collect())
}

/// Drives the network from a zero state with a scalar input sequence and
/// collects `[1; u_n; x_n]` columns.
pub fn run_esn<T: Scalar>(
    weights: &EsnWeights<T>,
    inputs: &[T],
    leak: T,
    activation: Activation,
) -> Result<StateMatrix<T>> {
    if weights.inputs() != 1 {
        return Err(Error::DimensionMismatch {
            what: "scalar-input network",
            expected: 1,
            found: weights.inputs(),
        });
    }
    let mut x = vec![T::zero(); weights.size()];
    let mut states = Vec::with_capacity(inputs.len());
    for &u in inputs {
        x = esn_update(&x, &[u], weights, leak, activation)?;
        states.push(x.clone());
    }
    StateMatrix::assemble(inputs, &states)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use nalgebra::DMatrix;
    use proptest::prelude::*;

    fn eig_radius(w: &Matrix<f64>) -> f64 {
        let m = DMatrix::from_row_slice(w.rows(), w.cols(), w.as_slice());
        m.complex_eigenvalues().iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn zero_state_zero_input_stays_zero() {
        let w = EsnWeights::random(&EsnConfig::<f64>::new(20, 1)).unwrap();
        let x = esn_update(&[0.0; 20], &[0.0], &w, 0.3, Activation::Tanh).unwrap();
        assert!(x.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn unit_leak_is_plain_tanh() {
        let w = EsnWeights::random(&EsnConfig::<f64>::new(10, 2)).unwrap();
        let x_prev: Vec<f64> = (0..10).map(|i| 0.1 * i as f64 - 0.4).collect();
        let x = esn_update(&x_prev, &[0.7], &w, 1.0, Activation::Tanh).unwrap();
        let pre: Vec<f64> = w
            .w_in
            .matvec(&[0.7])
            .unwrap()
            .iter()
            .zip(w.w.matvec(&x_prev).unwrap())
            .map(|(a, b)| a + b)
            .collect();
        for (xi, p) in x.iter().zip(pre) {
            assert_eq!(*xi, p.tanh());
            assert!(xi.abs() < 1.0);
        }
    }

    #[test]
    fn dimension_mismatch() {
        let w = EsnWeights::<f64>::delay_line(3);
        assert!(esn_update(&[0.0; 3], &[1.0], &w, 1.0, Activation::Identity).is_err());
        assert!(esn_update(&[0.0; 4], &[1.0, 2.0], &w, 1.0, Activation::Identity).is_err());
    }

    #[test]
    fn rescaled_radius_matches_eigenvalues() {
        for (size, density, seed) in [(30, 0.2, 1), (100, 0.1, 7), (50, 1.0, 3)] {
            let mut cfg = EsnConfig::new(size, seed);
            cfg.density = density;
            cfg.spectral_radius = 0.95;
            let w = EsnWeights::random(&cfg).unwrap();
            let rho = eig_radius(&w.w);
            assert!((rho / 0.95 - 1.0).abs() < 0.01, "size {size}: {rho}");
        }
    }

    #[test]
    fn seeded_weights_are_reproducible() {
        let cfg = EsnConfig::<f64>::new(15, 11);
        assert_eq!(EsnWeights::random(&cfg).unwrap(), EsnWeights::random(&cfg).unwrap());
        let other = EsnConfig { seed: 12, ..cfg };
        assert_ne!(EsnWeights::random(&cfg).unwrap(), EsnWeights::random(&other).unwrap());
    }

    #[test]
    fn invalid_config() {
        let mut cfg = EsnConfig::<f64>::new(0, 1);
        assert!(cfg.validate().is_err());
        cfg.size = 5;
        cfg.leak = 0.0;
        assert!(cfg.validate().is_err());
        cfg.leak = 1.0;
        cfg.density = 1.5;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn delay_line_shifts_inputs() {
        let w = EsnWeights::<f64>::delay_line(3);
        let inputs = [1.0, 2.0, 3.0, 4.0, 5.0];
        let x = run_esn(&w, &inputs, 1.0, Activation::Identity).unwrap();
        assert_eq!(x.column(4), vec![1.0, 5.0, 5.0, 4.0, 3.0, 2.0]);
        assert_eq!(spectral_radius(&w.w), 0.0);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn contracting_network_decays(seed in 0u64..1000, leak in 0.2f64..1.0) {
            let mut cfg = EsnConfig::new(20, seed);
            cfg.spectral_radius = 0.8;
            let w = EsnWeights::random(&cfg).unwrap();
            let mut x: Vec<f64> = (0..20).map(|i| ((i as f64) * 0.61).sin()).collect();
            let start = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            for _ in 0..400 {
                x = esn_update(&x, &[0.0], &w, leak, Activation::Tanh).unwrap();
            }
            let end = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            prop_assert!(end < 1e-3 * start);
        }
    }

    #[test]
    fn radius_estimate_on_known_matrix() {
        // Rotation-scaling block with complex eigenvalues of modulus 0.5, plus 0.3.
        let w = Matrix::from_rows(&[vec![0.0, -0.5, 0.0], vec![0.5, 0.0, 0.0], vec![0.0, 0.0, 0.3]]).unwrap();
        assert_relative_eq!(spectral_radius(&w), 0.5, max_relative = 1e-6);
    }
}
