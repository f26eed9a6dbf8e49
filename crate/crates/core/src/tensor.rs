//! Tensor products of rigged-configuration crystals and the
//! Littlewood-Richardson decomposition of `RC(mu) (x) RC(lambda)`.
//!
//! Tensor products use the anti-Kashiwara convention: for `b2 (x) b1`,
//! `f_a` acts on `b2` when `eps_a(b2) >= phi_a(b1)` and on `b1` otherwise,
//! while `e_a` acts on `b2` when `eps_a(b2) > phi_a(b1)`.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use serde_json::{json, Value};
use thiserror::Error;

use crate::cartan::{CartanError, CartanMatrix, Weight};
use crate::explorer::{generate, CrystalGraph};
use crate::rigged::{HighestWeight, RiggedConfiguration, RiggedError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TensorError {
    #[error("a tensor product needs at least one factor")]
    Empty,
    #[error("factors are over different Cartan matrices")]
    MixedCartan,
    #[error("enumeration stopped at depth {0} before exhausting the crystal")]
    EnumerationTruncated(usize),
    #[error("type is not finite; a depth bound is required")]
    DepthRequired,
    #[error(transparent)]
    Cartan(#[from] CartanError),
    #[error(transparent)]
    Rigged(#[from] RiggedError),
}

/// `b_n (x) ... (x) b_1`, stored left to right.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TensorElement {
    factors: Vec<RiggedConfiguration>,
}

impl TensorElement {
    pub fn new(factors: Vec<RiggedConfiguration>) -> Result<Self, TensorError> {
        let first = factors.first().ok_or(TensorError::Empty)?;
        if factors.iter().any(|b| b.cartan() != first.cartan()) {
            return Err(TensorError::MixedCartan);
        }
        Ok(TensorElement { factors })
    }

    pub fn factors(&self) -> &[RiggedConfiguration] {
        &self.factors
    }

    /// The rightmost factor `b_1`.
    pub fn rightmost(&self) -> &RiggedConfiguration {
        self.factors.last().unwrap()
    }

    pub fn leftmost(&self) -> &RiggedConfiguration {
        &self.factors[0]
    }

    pub fn weight(&self) -> Weight {
        let rank = self.factors[0].cartan().rank();
        self.factors.iter().fold(Weight::zero(rank), |acc, b| &acc + &b.weight())
    }

    pub fn epsilon(&self, a: usize) -> i64 {
        stats(&self.factors, a).0
    }

    pub fn phi(&self, a: usize) -> i64 {
        stats(&self.factors, a).1
    }

    pub fn f(&self, a: usize) -> Option<Self> {
        let (pos, new) = act(&self.factors, a, Op::Lower)?;
        let mut factors = self.factors.clone();
        factors[pos] = new;
        Some(TensorElement { factors })
    }

    pub fn e(&self, a: usize) -> Option<Self> {
        let (pos, new) = act(&self.factors, a, Op::Raise)?;
        let mut factors = self.factors.clone();
        factors[pos] = new;
        Some(TensorElement { factors })
    }

    pub fn is_highest_weight(&self) -> bool {
        let rank = self.factors[0].cartan().rank();
        (0..rank).all(|a| self.e(a).is_none())
    }
}

#[derive(Clone, Copy)]
enum Op {
    Lower,
    Raise,
}

// (eps, phi) of factors[0] (x) (factors[1] (x) (...)).
fn stats(factors: &[RiggedConfiguration], a: usize) -> (i64, i64) {
    let (left, rest) = factors.split_first().unwrap();
    let (el, pl) = (left.epsilon(a), left.phi(a));
    if rest.is_empty() {
        return (el, pl);
    }
    let (er, pr) = stats(rest, a);
    // <h_a, wt> = phi - eps for each side
    let eps = er.max(el - (pr - er));
    let phi = pl.max(pr + (pl - el));
    (eps, phi)
}

fn act(factors: &[RiggedConfiguration], a: usize, op: Op) -> Option<(usize, RiggedConfiguration)> {
    let (left, rest) = factors.split_first().unwrap();
    let on_left = match rest.is_empty() {
        true => true,
        false => {
            let eps_left = left.epsilon(a);
            let phi_rest = stats(rest, a).1;
            match op {
                Op::Lower => eps_left >= phi_rest,
                Op::Raise => eps_left > phi_rest,
            }
        }
    };
    if on_left {
        let new = match op {
            Op::Lower => left.f(a),
            Op::Raise => left.e(a),
        }?;
        Some((0, new))
    } else {
        act(rest, a, op).map(|(pos, new)| (pos + 1, new))
    }
}

/// One irreducible summand `RC(weight)` with its certifying elements of
/// `RC(mu)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    /// `lambda + wt(nu, J)`, with `wt` measured in `RC(mu)`.
    pub weight: Weight,
    pub witnesses: Vec<RiggedConfiguration>,
}

impl Component {
    pub fn multiplicity(&self) -> usize {
        self.witnesses.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    cartan: Arc<CartanMatrix>,
    pub components: Vec<Component>,
    /// Set when the enumeration of `RC(mu)` was cut off by a depth bound.
    pub partial: bool,
    pub depth: usize,
}

impl Decomposition {
    pub fn cartan(&self) -> &Arc<CartanMatrix> {
        &self.cartan
    }

    /// Errors with `EnumerationTruncated` if the result is partial.
    pub fn require_complete(self) -> Result<Self, TensorError> {
        match self.partial {
            true => Err(TensorError::EnumerationTruncated(self.depth)),
            false => Ok(self),
        }
    }

    /// Number of summands counted with multiplicity.
    pub fn total_multiplicity(&self) -> usize {
        self.components.iter().map(Component::multiplicity).sum()
    }

    /// `(<h_a, weight>)_a` for each summand, with multiplicity.
    pub fn lambda_coordinates(&self) -> Vec<(Vec<i64>, usize)> {
        self.components
            .iter()
            .map(|c| (self.cartan.lambda_coordinates(&c.weight).unwrap(), c.multiplicity()))
            .collect()
    }

    pub fn to_json_value(&self) -> Value {
        let components: Vec<Value> = self
            .components
            .iter()
            .map(|c| {
                json!({
                    "weight": self.cartan.lambda_coordinates(&c.weight).unwrap(),
                    "multiplicity": c.multiplicity(),
                    "witnesses": c.witnesses.iter().map(|w| w.to_json_value()).collect::<Vec<_>>(),
                })
            })
            .collect();
        json!({"components": components, "partial": self.partial})
    }
}

impl fmt::Display for Decomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:<24} {:>12}  witness", "component", "multiplicity")?;
        for c in &self.components {
            let coords = self.cartan.lambda_coordinates(&c.weight).unwrap();
            let name = Weight::from_lambda(coords).to_string();
            for (i, w) in c.witnesses.iter().enumerate() {
                let witness = w.to_json_value().to_string();
                if i == 0 {
                    writeln!(f, "{name:<24} {:>12}  {witness}", c.multiplicity())?;
                } else {
                    writeln!(f, "{:<24} {:>12}  {witness}", "", "")?;
                }
            }
        }
        if self.partial {
            writeln!(f, "(partial: enumeration truncated at depth {})", self.depth)?;
        }
        Ok(())
    }
}

/// The rigging condition selecting highest-weight summands: the smallest
/// rigging of part `a` is at least `-c_a` (empty parts impose nothing).
pub fn satisfies_lr_bound(x: &RiggedConfiguration, lambda: &[i64]) -> bool {
    x.parts().iter().zip(lambda).all(|(p, &c)| p.min_rigging().is_none_or(|m| m >= -c))
}

fn enumerate(cartan: &Arc<CartanMatrix>, hw: &[i64], depth: Option<usize>) -> Result<CrystalGraph, TensorError> {
    let hw = HighestWeight::dominant(hw.to_vec())?;
    let bound = match depth {
        Some(d) => d,
        None if cartan.is_finite_type() => usize::MAX,
        None => return Err(TensorError::DepthRequired),
    };
    Ok(generate(cartan.clone(), hw, bound)?)
}

/// Decomposes `RC(mu) (x) RC(lambda)` by selecting the elements of `RC(mu)`
/// that satisfy [`satisfies_lr_bound`].
///
/// Without `depth` the type must be finite and `RC(mu)` is enumerated
/// completely; with `depth` the result is flagged partial if elements remain
/// beyond the bound.
pub fn lr_decompose(
    cartan: &Arc<CartanMatrix>,
    mu: &[i64],
    lambda: &[i64],
    depth: Option<usize>,
) -> Result<Decomposition, TensorError> {
    HighestWeight::dominant(lambda.to_vec())?;
    if lambda.len() != cartan.rank() {
        return Err(RiggedError::RankMismatch { expected: cartan.rank(), got: lambda.len() }.into());
    }
    let graph = enumerate(cartan, mu, depth)?;
    let shift = Weight::from_lambda(lambda.to_vec());
    let mut components: Vec<Component> = Vec::new();
    for x in graph.nodes().iter().filter(|x| satisfies_lr_bound(x, lambda)) {
        let weight = &shift + &x.weight();
        match components.iter_mut().find(|c| c.weight == weight) {
            Some(c) => c.witnesses.push(x.clone()),
            None => components.push(Component { weight, witnesses: vec![x.clone()] }),
        }
    }
    for c in &mut components {
        c.witnesses.sort_by(|x, y| x.parts().cmp(y.parts()));
    }
    components.sort_by(|x, y| component_order(&x.weight, &y.weight));
    Ok(Decomposition { cartan: cartan.clone(), components, partial: !graph.is_complete(), depth: graph.depth() })
}

// Fewer boxes first, then lexicographically larger root coordinates.
fn component_order(x: &Weight, y: &Weight) -> Ordering {
    let boxes = |w: &Weight| -w.alpha.iter().sum::<i64>();
    boxes(x).cmp(&boxes(y)).then_with(|| y.alpha.cmp(&x.alpha)).then_with(|| x.lambda.cmp(&y.lambda))
}

/// All highest-weight elements of `RC(mu) (x) RC(lambda)`, found by checking
/// every pair. Finite type only.
pub fn highest_weight_scan(
    cartan: &Arc<CartanMatrix>,
    mu: &[i64],
    lambda: &[i64],
) -> Result<Vec<TensorElement>, TensorError> {
    if !cartan.is_finite_type() {
        return Err(CartanError::NotFiniteType { cap: crate::cartan::DEFAULT_ROOT_CAP }.into());
    }
    let left = enumerate(cartan, mu, None)?;
    let right = enumerate(cartan, lambda, None)?;
    let mut out = Vec::new();
    for x in left.nodes() {
        for y in right.nodes() {
            let t = TensorElement { factors: vec![x.clone(), y.clone()] };
            if t.is_highest_weight() {
                out.push(t);
            }
        }
    }
    Ok(out)
}
