//! Exact homological algebra for quiver-presented homology theories:
//! p-local linear algebra, quiver representations, exact couples, Steenrod
//! Ext charts, and Mayer–Vietoris assembly of Adams E2 terms.

pub mod assembly;
pub mod bp_analysis;
pub mod couples;
pub mod linalg;
pub mod par;
pub mod quiver;
pub mod steenrod;

pub use linalg::{Orders, Prime, QMat};
