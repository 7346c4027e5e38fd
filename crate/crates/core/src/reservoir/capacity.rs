//! Short-term-memory and parity-check capacities.
//!
//! For every delay `k` a separate readout is trained on the first half of
//! the symbols and scored on the second half by the squared correlation
//! between prediction and target. Capacities sum `r^2(k)` over `k = 1..=k_max`;
//! the `k = 0` entry is reported but not summed.

use rayon::prelude::*;

use super::readout::{predict, train_readout_vec};
use super::StateMatrix;
use crate::analysis::pearson_r2;
use crate::{lit, Error, Result, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct TaskCapacity<T> {
    /// `r^2(k)` for `k = 0..=k_max`.
    pub r2: Vec<T>,
    pub capacity: T,
}

impl<T: Scalar> TaskCapacity<T> {
    fn from_r2(r2: Vec<T>) -> Self {
        let capacity = r2.iter().skip(1).fold(T::zero(), |s, &v| s + v);
        Self { r2, capacity }
    }

    pub fn k_max(&self) -> usize {
        self.r2.len() - 1
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CapacityReport<T> {
    pub stm: TaskCapacity<T>,
    pub pc: TaskCapacity<T>,
}

impl<T: Scalar> CapacityReport<T> {
    pub fn c_stm(&self) -> T {
        self.stm.capacity
    }

    pub fn c_pc(&self) -> T {
        self.pc.capacity
    }
}

/// `u_{n-k} XOR u_{n-k-1} XOR u_{n-k-2}` for `n = k+2 .. len`.
pub fn parity_target(bits: &[u8], k: usize) -> Result<Vec<u8>> {
    if bits.len() < k + 3 {
        return Err(Error::TooShort {
            what: "bit sequence for parity target",
            needed: k + 3,
            got: bits.len(),
        });
    }
    Ok((k + 2..bits.len())
        .map(|n| (bits[n - k] ^ bits[n - k - 1] ^ bits[n - k - 2]) & 1)
        .collect())
}

#[derive(Clone, Copy)]
enum Task {
    Stm,
    Parity,
}

impl Task {
    /// Earliest symbol index with a defined target at delay `k`.
    fn first(self, k: usize) -> usize {
        match self {
            Task::Stm => k,
            Task::Parity => k + 2,
        }
    }

    fn target(self, bits: &[u8], n: usize, k: usize) -> u8 {
        match self {
            Task::Stm => bits[n - k],
            Task::Parity => bits[n - k] ^ bits[n - k - 1] ^ bits[n - k - 2],
        }
    }
}

fn check<T: Scalar>(x: &StateMatrix<T>, bits: &[u8], k_max: usize) -> Result<()> {
    if x.steps() != bits.len() {
        return Err(Error::DimensionMismatch {
            what: "state columns vs bits",
            expected: bits.len(),
            found: x.steps(),
        });
    }
    if k_max == 0 {
        return Err(Error::domain("k_max", 0.0, "must be >= 1"));
    }
    // The parity task at k_max needs at least one training symbol beyond
    // the feature count in the first half.
    let half = bits.len() / 2;
    if half <= Task::Parity.first(k_max) + x.features() {
        return Err(Error::KMaxTooLarge { k_max, len: bits.len() });
    }
    Ok(())
}

fn r2_at<T: Scalar>(x: &StateMatrix<T>, bits: &[u8], task: Task, k: usize, beta: T) -> Result<T> {
    let half = bits.len() / 2;
    let train: Vec<usize> = (task.first(k)..half).collect();
    let test: Vec<usize> = (half..bits.len()).collect();
    let target = |idx: &[usize]| -> Vec<T> { idx.iter().map(|&n| lit(task.target(bits, n, k) as f64)).collect() };

    let model = train_readout_vec(&x.select(&train)?, &target(&train), beta)?;
    let pred = predict(&model, &x.select(&test)?)?;
    match pearson_r2(pred.row(0), &target(&test)) {
        Ok(r2) => Ok(r2),
        // A constant prediction or target carries no information about the other.
        Err(Error::ZeroVariance(_)) => Ok(T::zero()),
        Err(e) => Err(e),
    }
}

fn task_capacity<T: Scalar>(
    x: &StateMatrix<T>,
    bits: &[u8],
    task: Task,
    beta: T,
    k_max: usize,
) -> Result<TaskCapacity<T>> {
    check(x, bits, k_max)?;
    let r2 = (0..=k_max)
        .into_par_iter()
        .map(|k| r2_at(x, bits, task, k, beta))
        .collect::<Result<Vec<T>>>()?;
    Ok(TaskCapacity::from_r2(r2))
}

/// Recall of `u_{n-k}`.
pub fn stm_capacity<T: Scalar>(x: &StateMatrix<T>, bits: &[u8], beta: T, k_max: usize) -> Result<TaskCapacity<T>> {
    task_capacity(x, bits, Task::Stm, beta, k_max)
}

/// Three-bit parity of `u_{n-k}, u_{n-k-1}, u_{n-k-2}`.
pub fn pc_capacity<T: Scalar>(x: &StateMatrix<T>, bits: &[u8], beta: T, k_max: usize) -> Result<TaskCapacity<T>> {
    task_capacity(x, bits, Task::Parity, beta, k_max)
}

pub fn memory_capacity<T: Scalar>(x: &StateMatrix<T>, bits: &[u8], beta: T, k_max: usize) -> Result<CapacityReport<T>> {
    Ok(CapacityReport {
        stm: stm_capacity(x, bits, beta, k_max)?,
        pc: pc_capacity(x, bits, beta, k_max)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reservoir::{run_esn, Activation, EsnWeights};
    use crate::score::BinarySequence;

    fn bits(n: usize, seed: u64) -> Vec<u8> {
        BinarySequence::<f64>::random(n, seed, 1.0).unwrap().bits
    }

    #[test]
    fn parity_windows() {
        assert_eq!(parity_target(&[1, 0, 1], 0).unwrap(), vec![0]);
        assert_eq!(parity_target(&[1, 1, 1], 0).unwrap(), vec![1]);
        assert_eq!(parity_target(&[0; 10], 2).unwrap(), vec![0; 6]);
        assert_eq!(parity_target(&[1, 1, 0, 0, 1], 1).unwrap(), vec![0, 1]);
        assert!(parity_target(&[1, 0], 0).is_err());
        assert!(parity_target(&[1, 0, 1, 1], 2).is_err());
    }

    #[test]
    fn delay_line_recalls_up_to_depth() {
        let u = bits(600, 9);
        let inputs: Vec<f64> = u.iter().map(|&b| b as f64).collect();
        let x = run_esn(&EsnWeights::delay_line(6), &inputs, 1.0, Activation::Identity).unwrap();
        let stm = stm_capacity(&x, &u, 1e-10, 10).unwrap();
        for k in 0..=6 {
            assert!(stm.r2[k] > 0.99, "k={k}: {}", stm.r2[k]);
        }
        for k in 7..=10 {
            assert!(stm.r2[k] < 0.05, "k={k}: {}", stm.r2[k]);
        }
        assert!((stm.capacity - 6.0).abs() < 0.2);
    }

    #[test]
    fn memoryless_states_give_nothing() {
        let u = bits(400, 4);
        let states = vec![vec![0.25; 5]; u.len()];
        let inputs = vec![0.0; u.len()];
        let x = StateMatrix::assemble(&inputs, &states).unwrap();
        let report = memory_capacity(&x, &u, 1e-8, 5).unwrap();
        assert!(report.stm.r2.iter().all(|&r| r < 1e-12));
        assert!(report.pc.r2.iter().all(|&r| r < 1e-12));
    }

    #[test]
    fn k_max_too_large() {
        let u = bits(10, 1);
        let inputs: Vec<f64> = u.iter().map(|&b| b as f64).collect();
        let x = run_esn(&EsnWeights::delay_line(2), &inputs, 1.0, Activation::Identity).unwrap();
        assert!(matches!(
            stm_capacity(&x, &u, 1e-8, 15),
            Err(Error::KMaxTooLarge { .. })
        ));
        assert!(matches!(
            stm_capacity(&x, &u[..9], 1e-8, 1),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn capacities_are_deterministic() {
        let u = bits(300, 2);
        let inputs: Vec<f64> = u.iter().map(|&b| b as f64).collect();
        let w = EsnWeights::random(&crate::reservoir::EsnConfig::new(12, 5)).unwrap();
        let x = run_esn(&w, &inputs, 0.8, Activation::Tanh).unwrap();
        assert_eq!(
            memory_capacity(&x, &u, 1e-8, 6).unwrap(),
            memory_capacity(&x, &u, 1e-8, 6).unwrap()
        );
    }
}
