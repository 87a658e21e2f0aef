//! Built-in data set: 20 samples of a four-inductor RL ladder driven by a
//! sinusoidal voltage, sampled at 0.5 s and printed to four decimals.
//!
//! The generating system has order 4. The input obeys a fourth-order
//! recursion with characteristic roots `1/2` (double) and `e^{±iπ/4}`, so it
//! is not persistently exciting and the data only determines the transfer
//! function at some points.

use crate::signals::DataSet;

/// Name used on the command line (`--data @paper-rl`).
pub const RL_LADDER_NAME: &str = "paper-rl";

/// Model order of the generating circuit.
pub const RL_LADDER_ORDER: usize = 4;

pub const RL_LADDER_INPUT: [f64; 20] = [
    6.0000, 4.8284, 1.5000, -1.8284, -3.3750, -2.4534, 0.2188, 2.9534, 4.0703, 2.8675, 0.0215,
    -2.8167, -3.9937, -2.8250, 0.0018, 2.8294, 4.0005, 2.8287, 0.0001, -2.8284,
];

pub const RL_LADDER_OUTPUT: [f64; 20] = [
    0.0, 1.4373, 2.0864, 1.9180, 1.1637, 0.3228, -0.1050, 0.1073, 0.7958, 1.5108, 1.7858, 1.4135,
    0.5692, -0.2919, -0.7007, -0.4495, 0.2862, 1.0504, 1.3730, 1.0452,
];

pub fn rl_ladder() -> DataSet {
    DataSet::from_vecs(RL_LADDER_INPUT.to_vec(), RL_LADDER_OUTPUT.to_vec())
        .expect("fixture is well-formed")
}

/// Reduced first-order model reported for this data set:
/// `y_{t+1} - 1.0790 y_t = 0.1367 u_{t+1} + 0.1045 u_t`.
pub fn rl_ladder_reduced_params() -> crate::systems::SystemParams {
    crate::systems::SystemParams::new(vec![-1.0790], vec![0.1045, 0.1367])
        .expect("fixture is well-formed")
}
