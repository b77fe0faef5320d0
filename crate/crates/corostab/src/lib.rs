//! Corotational stress rates and their induced tangent stiffness tensors
//! for isotropic Cauchy-elastic laws, constitutive stability scans
//! (positive definiteness of the stiffness versus monotonicity of the
//! stress in logarithmic strain), and hypo-elastic rate integration along
//! deformation paths.

// indexed loops over fixed 3x3/6x6 matrices read better than iterator
// chains in the dense kernels
#![allow(clippy::needless_range_loop)]

pub mod constitutive;
pub mod error;
pub mod kinematics;
pub mod pathsim;
pub mod rates;
pub mod report;
pub mod stability;
pub mod tensor;

pub use error::{Error, Result};
