pub mod fp;
pub mod gf2;
pub mod graded;
pub mod presented;
pub mod qmat;
pub mod scalar;
pub mod snf;

pub use presented::{LinalgError, Orders, Submodule};
pub use qmat::QMat;
pub use scalar::Prime;
