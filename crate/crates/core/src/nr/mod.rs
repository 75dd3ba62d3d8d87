//! No-reference metrics and the natural-scene-statistics machinery behind them.

pub mod blockiness;
pub mod blur;
pub mod brisque;
pub mod features;
pub mod model_io;
pub mod niqe;
pub mod nss;

pub use blockiness::blockiness;
pub use blur::blur;
pub use brisque::{brisque_score, train_brisque, BrisqueRegressor};
pub use features::{brisque_features, FeatureVector, FEATURE_DIM};
pub use niqe::{niqe_fit, niqe_score, MvgModel};
pub use nss::{fit_aggd, fit_ggd, mscn, AggdFit, GgdFit, MscnField};
