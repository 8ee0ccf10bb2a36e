//! Witness inequalities, non-decomposability bounds and the no-go constructions.

mod falsify;
mod report;
mod sandwich;
mod strict;
mod swap;
mod unitary_param;

pub use falsify::{falsify_decomposition, FalsifyOptions, FalsifyResult, HISTOGRAM_EDGES};
pub use report::{excluded_mediator_dim, witness_accessible, witness_inaccessible, WitnessOptions, WitnessReport};
pub use sandwich::{sandwich_check, SandwichCheck};
pub use strict::{strict_inclusion_demo, strict_inclusion_dilation, StrictInclusion};
pub use swap::{adversarial_swap_search, random_dilation, swap_dilation_test, ProbeTarget, SwapSearch, SwapSearchOptions};
