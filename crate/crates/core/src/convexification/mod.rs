//! Minkowski averaging, nets of set families and the convexification oracles.

pub(crate) mod averages;
mod mazur;
mod net;
mod shapley;

pub use averages::{averages_sequence, rational_witness, repeated_average, Witness, EXACT_CAP};
pub use mazur::{mazur_conet, MazurConet};
pub use net::{build_family_net, gamma_limit, quantize, FamilyNet, GammaLimit, QuantizedSequence};
pub use shapley::{oracle_csv, shapley_folkman_gap, SfGap};
