//! Gabor frames for windows `P(t)/(t - iw)` built from modulated Cauchy kernels and for
//! the imaginary-shifted sinc: the invertibility criterion, closed-form frame operators,
//! numerical frame bounds and parameter scans.

pub mod criterion;
pub mod error;
pub mod estimate;
pub mod frame_bounds;
pub mod frame_operator;
pub mod linalg;
pub mod sampled;
pub mod scan;
pub mod window;

pub use error::{Error, Result};
pub use estimate::{FrameEstimate, Method, Verdict};
pub use sampled::{inner_product, tf_shift, SampledFunction};
pub use window::{
    hypothesis_margin, rescale_window, window_eval, window_fourier, CauchyTerm, Lattice, WindowSpec, C64,
};
