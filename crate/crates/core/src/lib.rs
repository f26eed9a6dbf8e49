//! Crystals of symmetrizable Kac-Moody algebras through rigged
//! configurations.
//!
//! ```
//! use std::sync::Arc;
//! use rigged_crystals::cartan::CartanMatrix;
//! use rigged_crystals::explorer::generate;
//! use rigged_crystals::rigged::HighestWeight;
//!
//! let b2 = Arc::new(CartanMatrix::named("B2").unwrap());
//! let g = generate(b2, HighestWeight::dominant(vec![0, 1]).unwrap(), usize::MAX).unwrap();
//! assert_eq!(g.node_count(), 4);
//! ```
//!
//! The guide in `book/` walks through each module.

#![allow(clippy::needless_range_loop)]

pub mod cartan;
pub mod explorer;
pub mod folding;
pub mod rigged;
pub mod tensor;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/cartan.md")]
    mod cartan {}
    #[doc = include_str!("../../../book/src/rigged.md")]
    mod rigged {}
    #[doc = include_str!("../../../book/src/explorer.md")]
    mod explorer {}
    #[doc = include_str!("../../../book/src/folding.md")]
    mod folding {}
    #[doc = include_str!("../../../book/src/tensor.md")]
    mod tensor {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
