//! Quantum Newton method: a comparison-based HHL-style linear solver on an
//! exact statevector simulator, its classical counting model, and a Newton
//! driver for nonlinear finite-difference PDEs.
//!
//! Everything numerical is generic over [`Real`]; the aliases below fix the
//! scalar to `f64`.
//!
//! ```
//! use qnm_core::linalg::Matrix;
//! use qnm_core::model::model_qlss_solve;
//! use qnm_core::qlss::{EncodingMode, QlssConfig};
//!
//! let a = Matrix::<f64>::from_real_diagonal(&[1.0, 2.0]);
//! let b = qnm_core::linalg::vector::to_complex(&[1.0, 1.0]);
//! let config = QlssConfig::new(4, EncodingMode::HermitianPd);
//! let r = model_qlss_solve(&a, &b, &config).unwrap();
//! assert!((r.solution[0].re - 1.0).abs() < 1e-12);
//! assert!((r.solution[1].re - 0.5).abs() < 1e-12);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod linalg;
pub mod model;
pub mod pde;
pub mod qarith;
pub mod qlss;
pub mod qsim;
pub mod resources;
mod scalar;
pub mod solvers;

pub use scalar::Real;

pub type Complex64 = num_complex::Complex<f64>;
pub type ComplexMatrix = linalg::Matrix<f64>;
pub type State = qsim::StateVector<f64>;
pub type QuantumCircuit = qsim::Circuit<f64>;
pub type Eigen = linalg::EigenDecomposition<f64>;
pub type LinearSystem = pde::LinearProblem<f64>;
pub type SolveResult = qlss::QlssResult<f64>;
pub type NewtonOutcome = solvers::NewtonResult<f64>;
