pub mod ext;
pub mod hom;
pub mod preset;
pub mod rep;
pub mod resolve;
pub mod serial;
pub mod tensor;

pub use preset::{integral_preset, PresetBuilder, Regime, SimplesPreset};
pub use rep::{representable, FreeRep, RepError, RepMap, Representation};
