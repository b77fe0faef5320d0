//! Dense tensor algebra on 3x3 symmetric/skew tensors and their
//! fourth-order operators: eigendecomposition, primary matrix functions,
//! Daleckii-Krein Fréchet derivatives and the Mandel representation.

pub mod eig;
pub mod mat3;
pub mod primary;
pub mod scale;
pub mod sym;
pub mod tensor4;

pub use eig::{eig_sym3, jacobi_eig, MAX_JACOBI_SWEEPS};
pub use mat3::Mat3;
pub use primary::{
    apply_primary, apply_primary_sym, exp_skew, frechet_primary, log_coercivity_constant,
    REPEATED_EIG_REL_TOL,
};
pub use scale::ScaleFunction;
pub use sym::{Skew3, Sym3, SymPd3, SPD_EIG_FLOOR};
pub use tensor4::{mandel_basis, mandel_decode, mandel_encode, OperatorSource, Tensor4, SQRT_2};
