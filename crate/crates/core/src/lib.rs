//! Time-optimal control of the two-level reduction of unstructured quantum
//! search.
//!
//! The search problem restricted to the span of the marked state and the
//! uniform superposition is a single qubit driven by H(u) = H0 + u Hd with
//! |u| <= 1. This crate provides:
//!
//! - [`dynamics`]: exact piecewise-constant evolution of that qubit (SU(2)
//!   propagators, no ODE stepping error);
//! - [`protocols`]: the standard control families (constant drift,
//!   bang-bang search iteration, bang-singular-bang, multi-bang) and the
//!   closed-form optimal switching times;
//! - [`pmp`]: verification of the Pontryagin necessary conditions via
//!   costate integration, and exact adjoint-state gradients for gridded
//!   controls;
//! - [`bloch`]: the Bloch-sphere geometric picture — the control vector
//!   fields, the commutator frame coefficients, the singular arc and its
//!   classification by Lie derivatives;
//! - [`optimizer`]: deterministic searches over protocol parameters,
//!   projected gradient ascent, and the qubit-count sweep table;
//! - [`csv`]: byte-stable CSV emission for all of the above.
//!
//! # Example
//!
//! ```
//! use grover_control::{optimal_times, verify, Overlap, PmpConfig, Protocol};
//!
//! // Closed-form optimal switching times at overlap x = 1/2 ...
//! let x = Overlap::new(0.5)?;
//! let times = optimal_times(x)?;
//! assert!(times.tf < std::f64::consts::PI / 0.5); // faster than the drift
//!
//! // ... and the resulting protocol satisfies the necessary conditions.
//! let protocol = Protocol::bang_singular_bang(times.t1, times.t2)?;
//! let report = verify(x, &protocol, &PmpConfig::default())?;
//! assert!(report.passed());
//! # Ok::<(), grover_control::Error>(())
//! ```

pub use num_complex::Complex64;

pub mod bloch;
pub mod csv;
pub mod dynamics;
pub mod error;
pub mod optimizer;
pub mod pmp;
pub mod protocols;

pub use bloch::{
    alpha_beta, bloch_to_state, classify_arc, grover_theta_analysis, pauli_field, problem_fields,
    project_trajectory, reduced_rhs, singular_arc_theta, state_to_bloch, ArcClassification,
    ArcKind, BlochPoint, BlochSample, GroverThetaAnalysis, PauliAxis, ProblemFields,
    TangentVector, POLE_BAND,
};
pub use dynamics::{
    control_hamiltonian, evolve, grover_hamiltonians, initial_state, propagate_const,
    GroverHamiltonians, Overlap, PauliHamiltonian, QubitState, Trajectory,
};
pub use error::{Error, Result};
pub use optimizer::{
    gradient_descent, optimize_t1_bsb, optimize_t1_multibang, protocol_fidelity, sweep_times,
    GradOptResult, ScalarOptResult, SweepRow,
};
pub use pmp::{
    adjoint_gradient, backward_costate, c_hamiltonian, switching_function, terminal_costate,
    verify, CostateTrajectory, PmpConfig, SwitchingRecord, VerificationReport, Violation,
};
pub use protocols::{
    asymptotic_times, optimal_times, psi1_magnitude, t2_of_t1, OptimalTimes, Protocol, Segment,
};
