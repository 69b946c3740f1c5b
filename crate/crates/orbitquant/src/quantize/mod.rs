//! Fourier transforms, Weyl and Pedersen quantization, the group Fourier transform and
//! the operator calculi built on them.

pub mod grid;
pub mod group_fourier;
pub mod ops;
pub mod symbols;
pub mod verify;
pub mod weyl;

pub use grid::{fourier_g_gstar, fourier_g_gstar_inverse, Axis, GridFunction, GridND};
pub use group_fourier::{
    delta_q, group_fourier, group_fourier_at, inverse_group_fourier, inverse_group_fourier_grid, w_inverse, w_transform,
    w_transform_dual, Coordinate, OperatorSection, SectionOptions,
};
pub use ops::{conv_right, op_g_gstar_apply, op_g_gstar_kernel, op_group_apply, op_group_kernel, OperatorSymbol};
pub use symbols::{AxisMode, DualSymbol, GaussPoly, JointField, SeparableField, SymbolField};
pub use verify::{verify_suite, Report, Suite, VerifyConfig};
pub use weyl::{orbit_integral, pedersen_dequantize, pedersen_quantize, sharp_product, trace, weyl_lambda, OrbitSamples};
