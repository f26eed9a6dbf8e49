#![allow(dead_code)]

use std::sync::Arc;

use rigged_crystals::cartan::CartanMatrix;
use rigged_crystals::rigged::{HighestWeight, RiggedConfiguration};

pub fn named(s: &str) -> Arc<CartanMatrix> {
    Arc::new(CartanMatrix::named(s).unwrap())
}

pub fn rows(r: &[&[i64]]) -> Arc<CartanMatrix> {
    Arc::new(CartanMatrix::from_rows(r.iter().map(|x| x.to_vec()).collect()).unwrap())
}

pub fn dominant(c: &[i64]) -> HighestWeight {
    HighestWeight::dominant(c.to_vec()).unwrap()
}

/// Types and highest weights the random walks start from.
pub fn corpus() -> Vec<(Arc<CartanMatrix>, HighestWeight)> {
    vec![
        (named("A1"), HighestWeight::Infinity),
        (named("A2"), HighestWeight::Infinity),
        (named("A3"), HighestWeight::Infinity),
        (named("B3"), HighestWeight::Infinity),
        (named("C3"), HighestWeight::Infinity),
        (named("D4"), HighestWeight::Infinity),
        (named("G2"), HighestWeight::Infinity),
        (named("A2~"), HighestWeight::Infinity),
        (rows(&[&[2, -6], &[-4, 2]]), HighestWeight::Infinity),
        (rows(&[&[2, -2, -3], &[-2, 2, 0], &[-3, 0, 2]]), HighestWeight::Infinity),
        (named("A2"), dominant(&[2, 1])),
        (named("B2"), dominant(&[1, 1])),
        (named("G2"), dominant(&[1, 0])),
        (named("A3"), dominant(&[0, 2, 1])),
        (named("A1~"), dominant(&[1, 1])),
    ]
}

/// The element reached from the highest-weight element by applying
/// `f_{step mod rank}` for each step, skipping steps that annihilate.
pub fn walk(cartan: &Arc<CartanMatrix>, hw: &HighestWeight, steps: &[usize]) -> RiggedConfiguration {
    let mut x = RiggedConfiguration::empty(cartan.clone(), hw.clone()).unwrap();
    for &s in steps {
        if let Some(y) = x.f(s % cartan.rank()) {
            x = y;
        }
    }
    x
}
