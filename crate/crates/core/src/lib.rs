//! Exact intersection calculus for tautological classes on moduli spaces of
//! stable curves and of admissible G-covers.
//!
//! Everything is computed with arbitrary precision rationals; there is no
//! floating point anywhere in the crate.

pub mod algebra;
pub mod delliptic;
pub mod gcover;
pub mod graphs;
pub mod groups;
pub mod mbar;
pub mod qmod;

mod error;
pub use error::Error;

pub use algebra::{QSeries, Rational};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/algebra.md")]
    mod algebra {}
    #[doc = include_str!("../../../book/src/groups.md")]
    mod groups {}
    #[doc = include_str!("../../../book/src/graphs.md")]
    mod graphs {}
    #[doc = include_str!("../../../book/src/mbar.md")]
    mod mbar {}
    #[doc = include_str!("../../../book/src/gcover.md")]
    mod gcover {}
    #[doc = include_str!("../../../book/src/delliptic.md")]
    mod delliptic {}
    #[doc = include_str!("../../../book/src/qmod.md")]
    mod qmod {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
