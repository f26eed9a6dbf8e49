//! Rigged configurations and their crystal structure.
//!
//! A [`RiggedConfiguration`] is a tuple of rigged partitions, one per index
//! of the Cartan matrix. The vacancy number of a string of length `i` in
//! part `a` is
//!
//! ```text
//! p_i^(a) = c_a - sum_b A_ab sum_j min(i, j) m_j^(b)
//! ```
//!
//! where `c_a` is the coefficient of the highest weight (zero for `B(inf)`).
//! The crystal operators change one string of part `a` and shift every other
//! rigging so that its colabel `p_i^(a) - x` is unchanged.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use serde_json::{Map, Value};
use thiserror::Error;

use crate::cartan::{CartanMatrix, Weight};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RiggedError {
    #[error("expected {expected} parts, got {got}")]
    PartCount { expected: usize, got: usize },
    #[error("highest weight has {got} coefficients, expected {expected}")]
    RankMismatch { expected: usize, got: usize },
    #[error("highest weight must have non-negative coefficients")]
    NotDominant,
    #[error("string lengths must be positive")]
    ZeroLength,
    #[error("string ({length}, {rigging}) not found in part {part}")]
    StringNotFound { part: String, length: u32, rigging: i64 },
    #[error("unknown index {0:?}")]
    UnknownIndex(String),
    #[error("invalid rigged configuration JSON: {0}")]
    Json(String),
}

/// One row of a rigged partition: a length and its rigging (label).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RiggedString {
    pub length: u32,
    pub rigging: i64,
}

impl RiggedString {
    pub fn new(length: u32, rigging: i64) -> Self {
        RiggedString { length, rigging }
    }
}

/// Weakly decreasing lexicographic order: longer strings first, then larger
/// riggings first.
impl Ord for RiggedString {
    fn cmp(&self, other: &Self) -> Ordering {
        other.length.cmp(&self.length).then(other.rigging.cmp(&self.rigging))
    }
}

impl PartialOrd for RiggedString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A multiset of strings kept in canonical (weakly decreasing) order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RiggedPartition {
    strings: Vec<RiggedString>,
}

impl RiggedPartition {
    pub fn new(strings: impl IntoIterator<Item = RiggedString>) -> Result<Self, RiggedError> {
        let mut strings: Vec<_> = strings.into_iter().collect();
        if strings.iter().any(|s| s.length == 0) {
            return Err(RiggedError::ZeroLength);
        }
        strings.sort();
        Ok(RiggedPartition { strings })
    }

    pub fn strings(&self) -> &[RiggedString] {
        &self.strings
    }

    pub fn is_empty(&self) -> bool {
        self.strings.is_empty()
    }

    pub fn len(&self) -> usize {
        self.strings.len()
    }

    /// `|nu^(a)|`, the number of boxes.
    pub fn size(&self) -> u64 {
        self.strings.iter().map(|s| s.length as u64).sum()
    }

    /// `m_i`: how many strings have length `i`.
    pub fn multiplicity(&self, i: u32) -> usize {
        self.strings.iter().filter(|s| s.length == i).count()
    }

    /// `J_i`: the riggings of the strings of length `i`, weakly decreasing.
    pub fn riggings(&self, i: u32) -> Vec<i64> {
        self.strings.iter().filter(|s| s.length == i).map(|s| s.rigging).collect()
    }

    /// The smallest rigging, `None` for the empty partition.
    pub fn min_rigging(&self) -> Option<i64> {
        self.strings.iter().map(|s| s.rigging).min()
    }

    /// `sum_j min(i, j) m_j`.
    pub fn min_sum(&self, i: u32) -> i64 {
        self.strings.iter().map(|s| s.length.min(i) as i64).sum()
    }

    fn insert(&mut self, s: RiggedString) {
        let pos = self.strings.partition_point(|t| *t <= s);
        self.strings.insert(pos, s);
    }
}

/// The highest weight a configuration is measured against.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum HighestWeight {
    /// `B(inf)`: all `c_a` are zero and `f_a` never annihilates.
    Infinity,
    /// A dominant weight given by its fundamental-weight coefficients.
    Dominant(Vec<i64>),
}

impl HighestWeight {
    pub fn dominant(coeffs: Vec<i64>) -> Result<Self, RiggedError> {
        if coeffs.iter().any(|&c| c < 0) {
            return Err(RiggedError::NotDominant);
        }
        Ok(HighestWeight::Dominant(coeffs))
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, HighestWeight::Infinity)
    }

    #[inline]
    pub fn coefficient(&self, a: usize) -> i64 {
        match self {
            HighestWeight::Infinity => 0,
            HighestWeight::Dominant(c) => c[a],
        }
    }

    /// The highest weight as a [`Weight`] (zero for infinity).
    pub fn to_weight(&self, rank: usize) -> Weight {
        match self {
            HighestWeight::Infinity => Weight::zero(rank),
            HighestWeight::Dominant(c) => Weight::from_lambda(c.clone()),
        }
    }

    fn check_rank(&self, rank: usize) -> Result<(), RiggedError> {
        match self {
            HighestWeight::Dominant(c) if c.len() != rank => {
                Err(RiggedError::RankMismatch { expected: rank, got: c.len() })
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for HighestWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HighestWeight::Infinity => write!(f, "inf"),
            HighestWeight::Dominant(c) => {
                let parts: Vec<String> = c.iter().map(|x| x.to_string()).collect();
                write!(f, "{}", parts.join(","))
            }
        }
    }
}

/// An element of `RC(inf)` or `RC(lambda)`.
#[derive(Debug, Clone)]
pub struct RiggedConfiguration {
    cartan: Arc<CartanMatrix>,
    highest_weight: HighestWeight,
    parts: Vec<RiggedPartition>,
}

impl PartialEq for RiggedConfiguration {
    fn eq(&self, other: &Self) -> bool {
        self.parts == other.parts
            && self.highest_weight == other.highest_weight
            && (Arc::ptr_eq(&self.cartan, &other.cartan) || self.cartan == other.cartan)
    }
}

impl Eq for RiggedConfiguration {}

impl std::hash::Hash for RiggedConfiguration {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.parts.hash(state);
        self.highest_weight.hash(state);
    }
}

impl RiggedConfiguration {
    /// The configuration with every partition empty; the highest-weight
    /// element of its crystal.
    pub fn empty(cartan: Arc<CartanMatrix>, highest_weight: HighestWeight) -> Result<Self, RiggedError> {
        highest_weight.check_rank(cartan.rank())?;
        let parts = vec![RiggedPartition::default(); cartan.rank()];
        Ok(RiggedConfiguration { cartan, highest_weight, parts })
    }

    pub fn from_parts(
        cartan: Arc<CartanMatrix>,
        highest_weight: HighestWeight,
        parts: Vec<RiggedPartition>,
    ) -> Result<Self, RiggedError> {
        highest_weight.check_rank(cartan.rank())?;
        if parts.len() != cartan.rank() {
            return Err(RiggedError::PartCount { expected: cartan.rank(), got: parts.len() });
        }
        Ok(RiggedConfiguration { cartan, highest_weight, parts })
    }

    /// Builds a configuration from `(length, rigging)` lists, one per index.
    pub fn from_strings(
        cartan: Arc<CartanMatrix>,
        highest_weight: HighestWeight,
        parts: &[&[(u32, i64)]],
    ) -> Result<Self, RiggedError> {
        let parts = parts
            .iter()
            .map(|p| RiggedPartition::new(p.iter().map(|&(l, x)| RiggedString::new(l, x))))
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_parts(cartan, highest_weight, parts)
    }

    pub fn cartan(&self) -> &Arc<CartanMatrix> {
        &self.cartan
    }

    pub fn highest_weight(&self) -> &HighestWeight {
        &self.highest_weight
    }

    pub fn parts(&self) -> &[RiggedPartition] {
        &self.parts
    }

    pub fn part(&self, a: usize) -> &RiggedPartition {
        &self.parts[a]
    }

    /// Total number of boxes; the depth of the element below the root.
    pub fn size(&self) -> u64 {
        self.parts.iter().map(|p| p.size()).sum()
    }

    /// The same configuration measured against another highest weight.
    pub fn with_highest_weight(&self, highest_weight: HighestWeight) -> Result<Self, RiggedError> {
        highest_weight.check_rank(self.cartan.rank())?;
        Ok(RiggedConfiguration { highest_weight, ..self.clone() })
    }

    /// `p_i^(a)`.
    pub fn vacancy(&self, a: usize, i: u32) -> i64 {
        self.vacancy_with(a, i, self.highest_weight.coefficient(a))
    }

    fn vacancy_with(&self, a: usize, i: u32, c: i64) -> i64 {
        let row = &self.cartan.rows()[a];
        c - self
            .parts
            .iter()
            .zip(row)
            .filter(|(_, &entry)| entry != 0)
            .map(|(p, &entry)| entry * p.min_sum(i))
            .sum::<i64>()
    }

    /// `p_inf^(a) = c_a - sum_b A_ab |nu^(b)|`, equal to `<h_a, wt>`.
    pub fn vacancy_infinity(&self, a: usize) -> i64 {
        let row = &self.cartan.rows()[a];
        self.highest_weight.coefficient(a)
            - self.parts.iter().zip(row).map(|(p, &entry)| entry * p.size() as i64).sum::<i64>()
    }

    /// `p_i^(a) - x` for a string present in part `a`.
    pub fn colabel(&self, a: usize, string: RiggedString) -> Result<i64, RiggedError> {
        if !self.parts[a].strings.contains(&string) {
            return Err(RiggedError::StringNotFound {
                part: self.cartan.label(a).to_string(),
                length: string.length,
                rigging: string.rigging,
            });
        }
        Ok(self.vacancy(a, string.length) - string.rigging)
    }

    /// The lowering operator `f_a`. `None` only when the configuration is
    /// cut by a dominant highest weight and the result is not valid.
    pub fn f(&self, a: usize) -> Option<Self> {
        let part = &self.parts[a];
        let (removed, old_len, new) = match part.min_rigging() {
            Some(x) if x <= 0 => {
                // longest string rigged x: first in canonical order
                let idx = part.strings.iter().position(|s| s.rigging == x).unwrap();
                let s = part.strings[idx];
                (Some(idx), s.length, RiggedString::new(s.length + 1, x - 1))
            }
            _ => (None, 0, RiggedString::new(1, -1)),
        };
        let mut out = self.clone();
        if let Some(idx) = removed {
            out.parts[a].strings.remove(idx);
        }
        // a box added at column old_len + 1 lowers p_i^(b) by A_ba for i > old_len
        out.shift_riggings(a, |len| len > old_len, -1);
        out.parts[a].insert(new);
        if !self.highest_weight.is_infinity() && !out.is_valid() {
            return None;
        }
        Some(out)
    }

    /// The raising operator `e_a`; `None` when every rigging of part `a` is
    /// non-negative.
    pub fn e(&self, a: usize) -> Option<Self> {
        let part = &self.parts[a];
        let x = part.min_rigging().filter(|&x| x < 0)?;
        // shortest string rigged x: last in canonical order
        let idx = part.strings.iter().rposition(|s| s.rigging == x).unwrap();
        let old_len = part.strings[idx].length;
        let mut out = self.clone();
        out.parts[a].strings.remove(idx);
        // a box removed from column old_len raises p_i^(b) by A_ba for i >= old_len
        out.shift_riggings(a, |len| len >= old_len, 1);
        if old_len > 1 {
            out.parts[a].insert(RiggedString::new(old_len - 1, x + 1));
        }
        Some(out)
    }

    // Shifting every string of a fixed length by the same amount keeps the
    // canonical order, so no re-sort is needed.
    fn shift_riggings(&mut self, a: usize, affected: impl Fn(u32) -> bool, sign: i64) {
        for b in 0..self.parts.len() {
            let entry = self.cartan.entry(b, a);
            if entry == 0 {
                continue;
            }
            for s in &mut self.parts[b].strings {
                if affected(s.length) {
                    s.rigging += sign * entry;
                }
            }
        }
    }

    /// `eps_a = -min(0, x)` with `x` the smallest rigging of part `a`.
    pub fn epsilon(&self, a: usize) -> i64 {
        -self.parts[a].min_rigging().unwrap_or(0).min(0)
    }

    /// `phi_a = p_inf^(a) - min(0, x)`.
    pub fn phi(&self, a: usize) -> i64 {
        self.vacancy_infinity(a) + self.epsilon(a)
    }

    /// `lambda - sum_a |nu^(a)| alpha_a`.
    pub fn weight(&self) -> Weight {
        let rank = self.cartan.rank();
        let mut w = self.highest_weight.to_weight(rank);
        for (k, p) in w.alpha.iter_mut().zip(&self.parts) {
            *k = -(p.size() as i64);
        }
        w
    }

    /// Every rigging satisfies `x <= p_i^(a)(nu; lambda)` for the dominant
    /// weight with coefficients `lambda`.
    pub fn is_lambda_valid(&self, lambda: &[i64]) -> bool {
        self.parts.iter().enumerate().all(|(a, p)| {
            p.strings.iter().all(|s| s.rigging <= self.vacancy_with(a, s.length, lambda[a]))
        })
    }

    /// Validity against the configuration's own highest weight. Riggings
    /// are unbounded above in `RC(inf)`.
    pub fn is_valid(&self) -> bool {
        match &self.highest_weight {
            HighestWeight::Infinity => true,
            HighestWeight::Dominant(c) => self.is_lambda_valid(c),
        }
    }

    /// All riggings non-negative.
    pub fn is_highest_weight(&self) -> bool {
        self.parts.iter().all(|p| p.strings.iter().all(|s| s.rigging >= 0))
    }

    /// The text form: a `(label)` header per part followed by rows
    /// `length : rigging (vacancy)`, or `  -` for an empty part.
    pub fn canonical_text(&self) -> String {
        self.to_string()
    }

    /// `{"1": [[2,-2]], "2": [[1,0]]}`.
    pub fn to_json_value(&self) -> Value {
        let mut map = Map::new();
        for (a, p) in self.parts.iter().enumerate() {
            let rows: Vec<Value> =
                p.strings.iter().map(|s| Value::from(vec![Value::from(s.length), Value::from(s.rigging)])).collect();
            map.insert(self.cartan.label(a).to_string(), Value::Array(rows));
        }
        Value::Object(map)
    }

    /// Inverse of [`to_json_value`](Self::to_json_value). Missing labels are
    /// read as empty partitions.
    pub fn from_json_value(
        cartan: Arc<CartanMatrix>,
        highest_weight: HighestWeight,
        value: &Value,
    ) -> Result<Self, RiggedError> {
        let obj = value.as_object().ok_or_else(|| RiggedError::Json("expected an object".into()))?;
        let mut parts = vec![RiggedPartition::default(); cartan.rank()];
        for (label, rows) in obj {
            let a = cartan.index_of(label).map_err(|_| RiggedError::UnknownIndex(label.clone()))?;
            let rows: Vec<(u32, i64)> =
                serde_json::from_value(rows.clone()).map_err(|e| RiggedError::Json(e.to_string()))?;
            parts[a] = RiggedPartition::new(rows.into_iter().map(|(l, x)| RiggedString::new(l, x)))?;
        }
        Self::from_parts(cartan, highest_weight, parts)
    }
}

impl fmt::Display for RiggedConfiguration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (a, p) in self.parts.iter().enumerate() {
            if a > 0 {
                writeln!(f)?;
            }
            write!(f, "({})", self.cartan.label(a))?;
            if p.is_empty() {
                write!(f, "\n  -")?;
            }
            for s in &p.strings {
                write!(f, "\n  {} : {} ({})", s.length, s.rigging, self.vacancy(a, s.length))?;
            }
        }
        Ok(())
    }
}
