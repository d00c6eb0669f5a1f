//! The standard mollifier kernel and the two smoothing operators: with
//! respect to a background metric, and with respect to a covering with a
//! partition of unity.

mod background;
mod convergence;
mod kernel;
mod smooth;

pub use background::{Background, SphereChart};
pub use convergence::{convergence_report, ConvergenceMode, ConvergenceRow, ConvergenceTable};
pub use kernel::{normalization_constant, profile, profile_d1_over_s, profile_d2_aux, MollifierKernel};
pub use smooth::{smooth_wrt_background, smooth_wrt_p, SmoothParams, SmoothedMode, SmoothedTensor};
