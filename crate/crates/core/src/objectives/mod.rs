//! The concrete submodular objective families.

mod coverage;
mod cut;
mod decomposable;
mod dpp;
mod exemplar;
mod gp;
pub mod lipschitz;
mod modular;

pub(crate) mod linalg;

pub use coverage::Coverage;
pub use cut::GraphCut;
pub use decomposable::{restricted_eval, ConstantComponents, Decomposable, Restricted};
pub use dpp::DppLogDet;
pub use exemplar::{exemplar_loss, Exemplar};
pub use gp::{InfoGain, SeKernel};
pub use lipschitz::{exemplar_lambda, info_gain_lambda, lipschitz_probe, EuclideanMetric, Metric};
pub use modular::Modular;
