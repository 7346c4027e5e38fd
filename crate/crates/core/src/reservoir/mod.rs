//! Reservoir computing on top of the bubble solver: time-multiplexed
//! virtual neurons, ridge readouts, memory capacities and a reference
//! echo state network.

mod bubble;
mod capacity;
mod esn;
pub mod linalg;
mod readout;

pub use bubble::{
    bits_to_forcing, harvest_virtual_neurons, run_bits, run_bubble_memory, BubbleReservoir, BubbleReservoirConfig,
};
pub use capacity::{memory_capacity, parity_target, pc_capacity, stm_capacity, CapacityReport, TaskCapacity};
pub use esn::{esn_update, run_esn, spectral_radius, Activation, EsnConfig, EsnWeights};
pub use linalg::Matrix;
pub use readout::{predict, train_readout, train_readout_vec, ReadoutModel};

use crate::{Error, Result, Scalar};

/// Bias-augmented feature matrix: one column `[1; u_n; x_n]` per symbol.
#[derive(Debug, Clone, PartialEq)]
pub struct StateMatrix<T> {
    x: Matrix<T>,
}

impl<T: Scalar> StateMatrix<T> {
    /// Wraps a feature matrix whose first row must be all ones.
    pub fn new(x: Matrix<T>) -> Result<Self> {
        if x.rows() == 0 || x.cols() == 0 {
            return Err(Error::Empty("state matrix"));
        }
        if x.row(0).iter().any(|&v| v != T::one()) {
            return Err(Error::domain("X[0, :]", f64::NAN, "bias row must be all ones"));
        }
        Ok(Self { x })
    }

    /// Builds `[1; u_n; x_n]` columns from a scalar input and per-step states.
    pub fn assemble(inputs: &[T], states: &[Vec<T>]) -> Result<Self> {
        if inputs.len() != states.len() {
            return Err(Error::DimensionMismatch {
                what: "inputs vs states",
                expected: inputs.len(),
                found: states.len(),
            });
        }
        let width = states.first().map_or(0, Vec::len);
        let mut x = Matrix::zeros(2 + width, inputs.len());
        for (n, (&u, s)) in inputs.iter().zip(states).enumerate() {
            if s.len() != width {
                return Err(Error::DimensionMismatch {
                    what: "state width",
                    expected: width,
                    found: s.len(),
                });
            }
            x[(0, n)] = T::one();
            x[(1, n)] = u;
            for (j, &v) in s.iter().enumerate() {
                x[(2 + j, n)] = v;
            }
        }
        Self::new(x)
    }

    pub fn features(&self) -> usize {
        self.x.rows()
    }

    pub fn steps(&self) -> usize {
        self.x.cols()
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.x
    }

    pub fn column(&self, n: usize) -> Vec<T> {
        self.x.column(n)
    }

    /// Columns at the given symbol indices, in order.
    pub fn select(&self, indices: &[usize]) -> Result<Self> {
        let mut out = Matrix::zeros(self.features(), indices.len());
        for (c, &n) in indices.iter().enumerate() {
            if n >= self.steps() {
                return Err(Error::DimensionMismatch {
                    what: "column index",
                    expected: self.steps(),
                    found: n,
                });
            }
            for i in 0..self.features() {
                out[(i, c)] = self.x[(i, n)];
            }
        }
        Self::new(out)
    }

    /// Drops the `u_n` row, leaving `[1; x_n]`.
    pub fn without_input_row(&self) -> Result<Self> {
        let keep: Vec<usize> = std::iter::once(0).chain(2..self.features()).collect();
        let mut out = Matrix::zeros(keep.len(), self.steps());
        for (r, &i) in keep.iter().enumerate() {
            out.row_mut(r).copy_from_slice(self.x.row(i));
        }
        Self::new(out)
    }
}
