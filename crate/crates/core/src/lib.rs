//! Discrete-event simulator and analytical toolkit for small-cell
//! backhaul scheduling, SDN multi-operator orchestration, fronthaul
//! I/Q link budgets, shared-FFT interleaving, and converged HFC
//! fronthaul/backhaul scenarios.
//!
//! Everything is deterministic given a master seed: the event kernel
//! breaks ties FIFO and all randomness flows through counter-based
//! ChaCha8 streams, so a scenario configuration plus a seed fully
//! determines every emitted statistic.

pub mod hfc;
pub mod interleave;
pub mod linkbudget;
pub mod orchestrator;
pub mod sim;
pub mod smgw;
pub mod traffic;
