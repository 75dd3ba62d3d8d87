//! Video quality measurement toolkit.
//!
//! Full-reference metrics (MSE, PSNR, SSIM), no-reference metrics
//! (blockiness, blur, NIQE, BRISQUE), degradation generators, a QAM/AWGN
//! channel emulator and a sweep harness that correlates every metric
//! against PSNR.

pub mod channel;
pub mod corpus;
pub mod dct;
pub mod distortion;
pub mod error;
pub mod eval;
pub mod filter;
pub mod fr;
pub mod frame;
pub mod nr;
pub mod rng;

pub use error::{Error, Result};
pub use frame::{Frame, VideoSequence};
pub use rng::Rng;
