//! Exact differential-operator realizations of induced and coinduced modules
//! over Lie superalgebras.
//!
//! The pipeline: build an algebra ([`liealg`]), split it as `g = g_- + h`
//! ([`decomp`]), compute the series `phi(X, g)` and `h(X, g)` either in closed
//! form ([`series`]) or as a sum over paths in the action graph ([`graph`]),
//! then assemble operators ([`realize`]) and check them ([`verify`]).

pub mod conventions;
pub mod decomp;
pub mod graph;
pub mod liealg;
pub mod realize;
pub mod scalar;
pub mod series;
pub mod superpoly;
pub mod verify;

pub use scalar::Scalar;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/algebras.md")]
    mod algebras {}
    #[doc = include_str!("../../../book/src/superpoly.md")]
    mod superpoly {}
    #[doc = include_str!("../../../book/src/series.md")]
    mod series {}
    #[doc = include_str!("../../../book/src/operators.md")]
    mod operators {}
    #[doc = include_str!("../../../book/src/verify.md")]
    mod verify {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../book/src/conventions.md")]
    mod conventions {}
}
