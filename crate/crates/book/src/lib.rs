// Every chapter of the guide is attached to a module so that `cargo test`
// runs its code blocks as doc-tests.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/distance-rank.md")]
pub mod distance_rank {}
#[doc = include_str!("../../../book/src/baselines.md")]
pub mod baselines {}
#[doc = include_str!("../../../book/src/preprocessing.md")]
pub mod preprocessing {}
#[doc = include_str!("../../../book/src/choosing-features.md")]
pub mod choosing_features {}
#[doc = include_str!("../../../book/src/evaluation.md")]
pub mod evaluation {}
#[doc = include_str!("../../../book/src/synthetic-data.md")]
pub mod synthetic_data {}
#[doc = include_str!("../../../book/src/command-line.md")]
pub mod command_line {}
