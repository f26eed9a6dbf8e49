//! Realizing a symmetrizable type as a folding of a simply-laced one, and
//! virtualizing rigged configurations along the folding.
//!
//! [`build_folding`] constructs a simple graph on vertices `v_{a,s}`,
//! `s in Z/(N d_a)`, whose cyclic shift `v_{a,s} -> v_{a,s+1}` is a diagram
//! automorphism with orbit quotient recovering the Cartan matrix: every
//! vertex of orbit `a` has exactly `-A_ab` neighbours in orbit `b`.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::cartan::{CartanError, CartanMatrix, Symmetrizer, Weight};
use crate::explorer::{generate_with, CrystalGraph};
use crate::rigged::{HighestWeight, RiggedConfiguration, RiggedError, RiggedPartition, RiggedString};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FoldingError {
    #[error("symmetrizer does not symmetrize the matrix")]
    BadSymmetrizer,
    #[error("-A[{b}][{a}] is not divisible by the reduced symmetrizer entry of {a}")]
    NonIntegralC { a: String, b: String },
    #[error("multiple edges generated between orbits {a} and {b}")]
    MultiEdgeDetected { a: String, b: String },
    #[error("edge joins vertex {0} to itself")]
    SelfLoop(usize),
    #[error("orbit map must be onto the base index set (index {0} has no preimage)")]
    NotSurjective(String),
    #[error("expected {expected} scaling factors, got {got}")]
    GammaLength { expected: usize, got: usize },
    #[error("scaling factors must be positive")]
    ZeroGamma,
    #[error("configuration is over a different Cartan matrix")]
    CartanMismatch,
    #[error("not in the virtual image: {0}")]
    NotInVirtualImage(ImageViolation),
    #[error(transparent)]
    Cartan(#[from] CartanError),
    #[error(transparent)]
    Rigged(#[from] RiggedError),
}

/// Which of the virtual-image conditions failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ImageCondition {
    /// Parts differ between two vertices of one orbit.
    OrbitConstancy,
    /// A rigging is not a multiple of the orbit's scaling factor.
    RiggingDivisibility,
    /// A length is not a multiple of the orbit's scaling factor.
    LengthDivisibility,
    /// The highest weight is not the image of a base weight.
    HighestWeight,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImageViolation {
    pub condition: ImageCondition,
    pub vertex: String,
}

impl fmt::Display for ImageViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} fails at vertex {}", self.condition, self.vertex)
    }
}

/// A vertex `v_{orbit, offset}` of the simply-laced diagram.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VirtualVertex {
    pub orbit: usize,
    pub offset: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoldedDiagram {
    base: Arc<CartanMatrix>,
    virtual_cartan: Arc<CartanMatrix>,
    vertices: Vec<VirtualVertex>,
    orbits: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
    gamma: Vec<u32>,
    n: Option<u64>,
    c: Option<Vec<Vec<u64>>>,
}

/// Builds the folding of `cartan` with scaling factors all equal to 1.
///
/// Each unordered pair `a < b` contributes the edges
/// `{v_{a, s mod N d_a}, v_{b, (s + k) mod N d_b}}` for `k < c_ab` and
/// `s < N d_a d_b`. Generating the mirrored pass `(b, a)` as well would
/// produce a different edge set whenever `1 < c_ab < N gcd(d_a, d_b)` and
/// overcount neighbours, so only one pass per pair is used.
pub fn build_folding(cartan: &Arc<CartanMatrix>, d: &Symmetrizer) -> Result<FoldedDiagram, FoldingError> {
    if !d.is_valid_for(cartan) {
        return Err(FoldingError::BadSymmetrizer);
    }
    let rank = cartan.rank();
    let dv = d.values();
    let mut n = 0u64;
    for a in 0..rank {
        for b in 0..rank {
            if a != b {
                n = n.max((-cartan.entry(a, b)) as u64 * dv[a] / dv[a].lcm(&dv[b]));
            }
        }
    }
    let n = n.max(1);

    let mut vertices = Vec::new();
    let mut orbits = vec![Vec::new(); rank];
    for a in 0..rank {
        for s in 0..(n * dv[a]) as usize {
            orbits[a].push(vertices.len());
            vertices.push(VirtualVertex { orbit: a, offset: s });
        }
    }

    let mut c = vec![vec![0u64; rank]; rank];
    let mut edges = BTreeSet::new();
    for a in 0..rank {
        for b in 0..rank {
            if !cartan.adjacent(a, b) {
                continue;
            }
            let g = dv[a].gcd(&dv[b]);
            let reduced_a = dv[a] / g;
            let minus_aba = (-cartan.entry(b, a)) as u64;
            if !minus_aba.is_multiple_of(reduced_a) {
                return Err(FoldingError::NonIntegralC {
                    a: cartan.label(a).to_string(),
                    b: cartan.label(b).to_string(),
                });
            }
            c[a][b] = minus_aba / reduced_a;
        }
    }
    for a in 0..rank {
        for b in (a + 1)..rank {
            if c[a][b] == 0 {
                continue;
            }
            let (size_a, size_b) = (n * dv[a], n * dv[b]);
            for s in 0..n * dv[a] * dv[b] {
                let u = orbits[a][(s % size_a) as usize];
                let mut seen = HashSet::new();
                for k in 0..c[a][b] {
                    let v = orbits[b][((s + k) % size_b) as usize];
                    if !seen.insert(v) {
                        return Err(FoldingError::MultiEdgeDetected {
                            a: cartan.label(a).to_string(),
                            b: cartan.label(b).to_string(),
                        });
                    }
                    edges.insert((u.min(v), u.max(v)));
                }
            }
        }
    }
    let edges: Vec<_> = edges.into_iter().collect();
    let virtual_cartan = virtual_matrix(cartan, &vertices, &edges)?;
    Ok(FoldedDiagram {
        base: cartan.clone(),
        virtual_cartan: Arc::new(virtual_cartan),
        vertices,
        orbits,
        edges,
        gamma: vec![1; rank],
        n: Some(n),
        c: Some(c),
    })
}

fn vertex_label(cartan: &CartanMatrix, v: VirtualVertex) -> String {
    format!("{}_{}", cartan.label(v.orbit), v.offset)
}

fn virtual_matrix(
    base: &CartanMatrix,
    vertices: &[VirtualVertex],
    edges: &[(usize, usize)],
) -> Result<CartanMatrix, FoldingError> {
    let size = vertices.len();
    let mut m = vec![vec![0i64; size]; size];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 2;
    }
    for &(u, v) in edges {
        if u == v {
            return Err(FoldingError::SelfLoop(u));
        }
        if m[u][v] != 0 {
            let (a, b) = (vertices[u].orbit, vertices[v].orbit);
            return Err(FoldingError::MultiEdgeDetected {
                a: base.label(a).to_string(),
                b: base.label(b).to_string(),
            });
        }
        m[u][v] = -1;
        m[v][u] = -1;
    }
    let labels = vertices.iter().map(|&v| vertex_label(base, v)).collect();
    Ok(CartanMatrix::new(m, labels)?)
}

impl FoldedDiagram {
    /// A folding given by an explicit simple graph, orbit map and scaling
    /// factors. Vertex offsets are positions within each orbit. No
    /// structural property is checked here; see [`verify_folding`].
    pub fn from_graph(
        base: Arc<CartanMatrix>,
        orbit_of: &[usize],
        edges: &[(usize, usize)],
        gamma: Vec<u32>,
    ) -> Result<Self, FoldingError> {
        let rank = base.rank();
        if gamma.len() != rank {
            return Err(FoldingError::GammaLength { expected: rank, got: gamma.len() });
        }
        if gamma.contains(&0) {
            return Err(FoldingError::ZeroGamma);
        }
        let mut orbits = vec![Vec::new(); rank];
        let mut vertices = Vec::new();
        for (v, &a) in orbit_of.iter().enumerate() {
            if a >= rank {
                return Err(FoldingError::Cartan(CartanError::UnknownIndex(a.to_string())));
            }
            vertices.push(VirtualVertex { orbit: a, offset: orbits[a].len() });
            orbits[a].push(v);
        }
        if let Some(a) = orbits.iter().position(Vec::is_empty) {
            return Err(FoldingError::NotSurjective(base.label(a).to_string()));
        }
        let mut edges: Vec<_> = edges.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
        edges.sort();
        let virtual_cartan = virtual_matrix(&base, &vertices, &edges)?;
        Ok(FoldedDiagram {
            base,
            virtual_cartan: Arc::new(virtual_cartan),
            vertices,
            orbits,
            edges,
            gamma,
            n: None,
            c: None,
        })
    }

    pub fn base(&self) -> &Arc<CartanMatrix> {
        &self.base
    }

    pub fn virtual_cartan(&self) -> &Arc<CartanMatrix> {
        &self.virtual_cartan
    }

    pub fn vertices(&self) -> &[VirtualVertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Virtual vertices mapping to base index `a`.
    pub fn orbit(&self, a: usize) -> &[usize] {
        &self.orbits[a]
    }

    pub fn gamma(&self) -> &[u32] {
        &self.gamma
    }

    /// `N`, for diagrams produced by [`build_folding`].
    pub fn n(&self) -> Option<u64> {
        self.n
    }

    /// `c_ab`, for diagrams produced by [`build_folding`].
    pub fn c(&self, a: usize, b: usize) -> Option<u64> {
        self.c.as_ref().map(|c| c[a][b])
    }

    /// The orbit-preserving cyclic shift `v_{a,s} -> v_{a,s+1}`.
    pub fn automorphism(&self, v: usize) -> usize {
        let VirtualVertex { orbit, offset } = self.vertices[v];
        let orbit_vertices = &self.orbits[orbit];
        orbit_vertices[(offset + 1) % orbit_vertices.len()]
    }

    /// A copy with one edge deleted.
    pub fn without_edge(&self, u: usize, v: usize) -> Result<Self, FoldingError> {
        let edges: Vec<_> = self.edges.iter().copied().filter(|&e| e != (u.min(v), u.max(v))).collect();
        let virtual_cartan = virtual_matrix(&self.base, &self.vertices, &edges)?;
        Ok(FoldedDiagram { edges, virtual_cartan: Arc::new(virtual_cartan), ..self.clone() })
    }

    /// `Lambda_a -> gamma_a sum_{b in orbit(a)} Lambda_b`, and likewise for
    /// `alpha_a`.
    pub fn weight_embed(&self, w: &Weight) -> Weight {
        let size = self.vertices.len();
        let mut out = Weight::zero(size);
        for (v, vert) in self.vertices.iter().enumerate() {
            let g = self.gamma[vert.orbit] as i64;
            out.lambda[v] = g * w.lambda[vert.orbit];
            out.alpha[v] = g * w.alpha[vert.orbit];
        }
        out
    }

    /// The image of `alpha_a` in simple-root coordinates of the virtual type.
    pub fn root_embed(&self, a: usize) -> Vec<i64> {
        self.weight_embed(&Weight::simple_root(self.base.rank(), a)).alpha
    }

    fn embed_highest_weight(&self, hw: &HighestWeight) -> HighestWeight {
        match hw {
            HighestWeight::Infinity => HighestWeight::Infinity,
            HighestWeight::Dominant(c) => HighestWeight::Dominant(self.weight_embed(&Weight::from_lambda(c.clone())).lambda),
        }
    }

    /// Copies part `a` to every vertex of its orbit, scaling lengths and
    /// riggings by `gamma_a`.
    pub fn virtualize(&self, rc: &RiggedConfiguration) -> Result<RiggedConfiguration, FoldingError> {
        if **rc.cartan() != *self.base {
            return Err(FoldingError::CartanMismatch);
        }
        let parts = self
            .vertices
            .iter()
            .map(|vert| {
                let g = self.gamma[vert.orbit];
                RiggedPartition::new(
                    rc.part(vert.orbit)
                        .strings()
                        .iter()
                        .map(|s| RiggedString::new(g * s.length, g as i64 * s.rigging)),
                )
            })
            .collect::<Result<Vec<_>, _>>()?;
        let hw = self.embed_highest_weight(rc.highest_weight());
        Ok(RiggedConfiguration::from_parts(self.virtual_cartan.clone(), hw, parts)?)
    }

    pub fn check_virtual_image(&self, vrc: &RiggedConfiguration) -> Result<(), FoldingError> {
        if **vrc.cartan() != *self.virtual_cartan {
            return Err(FoldingError::CartanMismatch);
        }
        let fail = |condition, v: usize| {
            Err(FoldingError::NotInVirtualImage(ImageViolation {
                condition,
                vertex: self.virtual_cartan.label(v).to_string(),
            }))
        };
        for (a, orbit) in self.orbits.iter().enumerate() {
            let g = self.gamma[a];
            let first = orbit[0];
            for &v in orbit {
                if vrc.part(v) != vrc.part(first) {
                    return fail(ImageCondition::OrbitConstancy, v);
                }
                if let HighestWeight::Dominant(c) = vrc.highest_weight() {
                    if c[v] != c[first] || c[v] % g as i64 != 0 {
                        return fail(ImageCondition::HighestWeight, v);
                    }
                }
            }
            for s in vrc.part(first).strings() {
                if s.length % g != 0 {
                    return fail(ImageCondition::LengthDivisibility, first);
                }
                if s.rigging % g as i64 != 0 {
                    return fail(ImageCondition::RiggingDivisibility, first);
                }
            }
        }
        Ok(())
    }

    pub fn is_in_virtual_image(&self, vrc: &RiggedConfiguration) -> bool {
        self.check_virtual_image(vrc).is_ok()
    }

    /// Inverse of [`virtualize`](Self::virtualize).
    pub fn devirtualize(&self, vrc: &RiggedConfiguration) -> Result<RiggedConfiguration, FoldingError> {
        self.check_virtual_image(vrc)?;
        let parts = self
            .orbits
            .iter()
            .enumerate()
            .map(|(a, orbit)| {
                let g = self.gamma[a];
                RiggedPartition::new(
                    vrc.part(orbit[0]).strings().iter().map(|s| RiggedString::new(s.length / g, s.rigging / g as i64)),
                )
            })
            .collect::<Result<Vec<_>, _>>()?;
        let hw = match vrc.highest_weight() {
            HighestWeight::Infinity => HighestWeight::Infinity,
            HighestWeight::Dominant(c) => HighestWeight::Dominant(
                self.orbits.iter().enumerate().map(|(a, o)| c[o[0]] / self.gamma[a] as i64).collect(),
            ),
        };
        Ok(RiggedConfiguration::from_parts(self.base.clone(), hw, parts)?)
    }

    /// `prod_{b in orbit(a)} f_b^{gamma_a}`. The factors commute because
    /// orbit vertices are pairwise non-adjacent.
    pub fn virtual_f(&self, vrc: &RiggedConfiguration, a: usize) -> Option<RiggedConfiguration> {
        self.apply_orbit(vrc, a, |x, b| x.f(b))
    }

    /// `prod_{b in orbit(a)} e_b^{gamma_a}`.
    pub fn virtual_e(&self, vrc: &RiggedConfiguration, a: usize) -> Option<RiggedConfiguration> {
        self.apply_orbit(vrc, a, |x, b| x.e(b))
    }

    fn apply_orbit(
        &self,
        vrc: &RiggedConfiguration,
        a: usize,
        op: impl Fn(&RiggedConfiguration, usize) -> Option<RiggedConfiguration>,
    ) -> Option<RiggedConfiguration> {
        let mut x = vrc.clone();
        for &b in &self.orbits[a] {
            for _ in 0..self.gamma[a] {
                x = op(&x, b)?;
            }
        }
        Some(x)
    }

    /// `eps_b(vrc) / gamma_a`, provided it is the same integer for every `b`
    /// in the orbit.
    pub fn virtual_epsilon(&self, vrc: &RiggedConfiguration, a: usize) -> Option<i64> {
        self.orbit_quotient(a, |b| vrc.epsilon(b))
    }

    pub fn virtual_phi(&self, vrc: &RiggedConfiguration, a: usize) -> Option<i64> {
        self.orbit_quotient(a, |b| vrc.phi(b))
    }

    fn orbit_quotient(&self, a: usize, stat: impl Fn(usize) -> i64) -> Option<i64> {
        let g = self.gamma[a] as i64;
        let values: BTreeSet<i64> = self.orbits[a].iter().map(|&b| stat(b)).collect();
        match values.into_iter().collect::<Vec<_>>()[..] {
            [v] if v % g == 0 => Some(v / g),
            _ => None,
        }
    }

    pub fn to_json_value(&self) -> Value {
        let vert = |v: usize| json!([self.base.label(self.vertices[v].orbit), self.vertices[v].offset]);
        let mut orbit = Map::new();
        for (v, vv) in self.vertices.iter().enumerate() {
            orbit.insert(self.virtual_cartan.label(v).to_string(), json!(self.base.label(vv.orbit)));
        }
        json!({
            "N": self.n,
            "gamma": self.gamma,
            "c": self.c,
            "vertices": (0..self.vertices.len()).map(vert).collect::<Vec<_>>(),
            "edges": self.edges.iter().map(|&(u, v)| json!([vert(u), vert(v)])).collect::<Vec<_>>(),
            "virtual_cartan": self.virtual_cartan.to_json_value(),
            "orbit": orbit,
        })
    }

    /// Undirected DOT graph, one fill color per orbit.
    pub fn to_dot(&self) -> String {
        const PALETTE: [&str; 8] =
            ["lightcoral", "lightblue", "palegreen", "gold", "plum", "lightsalmon", "lightcyan", "wheat"];
        let mut out = String::from("graph folding {\n  node [style=filled];\n");
        for (v, vert) in self.vertices.iter().enumerate() {
            out.push_str(&format!(
                "  v{v} [label=\"{}\", fillcolor={}];\n",
                self.virtual_cartan.label(v),
                PALETTE[vert.orbit % PALETTE.len()]
            ));
        }
        for &(u, v) in &self.edges {
            out.push_str(&format!("  v{u} -- v{v};\n"));
        }
        out.push_str("}\n");
        out
    }
}

/// One named structural check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoldingReport {
    pub checks: Vec<Check>,
}

impl FoldingReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json_value(&self) -> Value {
        Value::Array(
            self.checks
                .iter()
                .map(|c| json!({"check": c.name, "passed": c.passed, "failures": c.failures}))
                .collect(),
        )
    }
}

impl fmt::Display for FoldingReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{} {}", if c.passed { "PASS" } else { "FAIL" }, c.name)?;
            for msg in &c.failures {
                writeln!(f, "    {msg}")?;
            }
        }
        Ok(())
    }
}

fn check(name: &'static str, failures: Vec<String>) -> Check {
    Check { name, passed: failures.is_empty(), failures }
}

/// Checks that `fd` folds onto `cartan`: a simple graph, non-adjacent orbits,
/// an automorphism given by the cyclic shift, neighbour counts `-A_ab`, and
/// `c_ab <= N` when those values are known.
pub fn verify_folding(fd: &FoldedDiagram, cartan: &CartanMatrix) -> FoldingReport {
    let vc = &fd.virtual_cartan;
    let label = |v: usize| vc.label(v).to_string();
    let mut checks = Vec::new();

    let mut simple = Vec::new();
    if !vc.is_simply_laced() {
        simple.push("virtual Cartan matrix is not simply laced".to_string());
    }
    checks.push(check("simple_graph", simple));

    let mut internal = Vec::new();
    for &(u, v) in &fd.edges {
        if fd.vertices[u].orbit == fd.vertices[v].orbit {
            internal.push(format!("{} and {} share an orbit", label(u), label(v)));
        }
    }
    checks.push(check("orbit_non_adjacency", internal));

    let mut auto = Vec::new();
    let edge_set: HashSet<(usize, usize)> = fd.edges.iter().copied().collect();
    for &(u, v) in &fd.edges {
        let (x, y) = (fd.automorphism(u), fd.automorphism(v));
        if !edge_set.contains(&(x.min(y), x.max(y))) {
            auto.push(format!("edge {}-{} maps to non-edge {}-{}", label(u), label(v), label(x), label(y)));
        }
    }
    checks.push(check("automorphism", auto));

    let mut counts = Vec::new();
    if cartan.rank() != fd.base.rank() {
        counts.push(format!("rank {} does not match base rank {}", cartan.rank(), fd.base.rank()));
    } else {
        let mut neighbours = vec![vec![0i64; cartan.rank()]; fd.vertices.len()];
        for &(u, v) in &fd.edges {
            neighbours[u][fd.vertices[v].orbit] += 1;
            neighbours[v][fd.vertices[u].orbit] += 1;
        }
        for (v, vert) in fd.vertices.iter().enumerate() {
            for b in 0..cartan.rank() {
                let a = vert.orbit;
                if a != b && neighbours[v][b] != -cartan.entry(a, b) {
                    counts.push(format!(
                        "{} has {} neighbours in orbit {}, expected {}",
                        label(v),
                        neighbours[v][b],
                        cartan.label(b),
                        -cartan.entry(a, b)
                    ));
                }
            }
        }
    }
    checks.push(check("edge_counts", counts));

    let mut bound = Vec::new();
    if let (Some(n), Some(c)) = (fd.n, &fd.c) {
        for (a, row) in c.iter().enumerate() {
            for (b, &cab) in row.iter().enumerate() {
                if cab > n {
                    bound.push(format!("c[{}][{}] = {cab} exceeds N = {n}", cartan.label(a), cartan.label(b)));
                }
            }
        }
    }
    checks.push(check("c_bound", bound));

    FoldingReport { checks }
}

/// The image of `RC(hw)` under the virtual operators, mapped back to the base
/// type.
pub fn generate_virtual(fd: &FoldedDiagram, hw: HighestWeight, depth: usize) -> Result<CrystalGraph, FoldingError> {
    let root = fd.virtualize(&RiggedConfiguration::empty(fd.base.clone(), hw)?)?;
    let graph = generate_with(root, fd.base.rank(), depth, |x, a| fd.virtual_f(x, a));
    graph.try_map_nodes(|x| fd.devirtualize(x))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    NotInImage,
    Lowering,
    Raising,
    Epsilon,
    Phi,
    Weight,
    Pairing,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub node: usize,
    pub index: usize,
    pub kind: ViolationKind,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SweepReport {
    pub elements: usize,
    pub checks: usize,
    pub violations: Vec<Violation>,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks on every node `x` of `graph` and every index `a` that
/// virtualization commutes with `f_a` and `e_a` (including annihilation),
/// that `eps_b(v(x)) = gamma_a eps_a(x)` and `phi_b(v(x)) = gamma_a phi_a(x)`
/// for every `b` in the orbit, and that weights and their pairings agree.
pub fn virtualization_sweep(fd: &FoldedDiagram, graph: &CrystalGraph) -> Result<SweepReport, FoldingError> {
    let mut report = SweepReport { elements: graph.node_count(), ..Default::default() };
    let vc = &fd.virtual_cartan;
    for (node, x) in graph.nodes().iter().enumerate() {
        let vx = fd.virtualize(x)?;
        let mut flag = |ok: bool, index, kind| {
            report.checks += 1;
            if !ok {
                report.violations.push(Violation { node, index, kind });
            }
        };
        flag(fd.is_in_virtual_image(&vx), 0, ViolationKind::NotInImage);
        let vwt = vx.weight();
        flag(vwt == fd.weight_embed(&x.weight()), 0, ViolationKind::Weight);
        for a in 0..fd.base.rank() {
            let g = fd.gamma[a] as i64;
            let lowered = x.f(a).map(|y| fd.virtualize(&y)).transpose()?;
            flag(lowered == fd.virtual_f(&vx, a), a, ViolationKind::Lowering);
            let raised = x.e(a).map(|y| fd.virtualize(&y)).transpose()?;
            flag(raised == fd.virtual_e(&vx, a), a, ViolationKind::Raising);
            let pairing = x.cartan().pairing_unchecked(a, &x.weight());
            for &b in &fd.orbits[a] {
                flag(vx.epsilon(b) == g * x.epsilon(a), a, ViolationKind::Epsilon);
                flag(vx.phi(b) == g * x.phi(a), a, ViolationKind::Phi);
                flag(vc.pairing_unchecked(b, &vwt) == g * pairing, a, ViolationKind::Pairing);
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::explorer::{generate, isomorphic};

    fn cm(rows: &[&[i64]]) -> Arc<CartanMatrix> {
        Arc::new(CartanMatrix::from_rows(rows.iter().map(|r| r.to_vec()).collect()).unwrap())
    }

    fn fold(a: &Arc<CartanMatrix>) -> FoldedDiagram {
        build_folding(a, &a.symmetrizer().unwrap()).unwrap()
    }

    fn v(fd: &FoldedDiagram, a: usize, s: usize) -> usize {
        fd.orbit(a)[s]
    }

    #[test]
    fn rank_two_example() {
        let a = cm(&[&[2, -6], &[-4, 2]]);
        let fd = build_folding(&a, &Symmetrizer::from(vec![2, 3])).unwrap();
        assert_eq!(fd.n(), Some(2));
        assert_eq!((fd.c(0, 1), fd.c(1, 0)), (Some(2), Some(2)));
        assert_eq!((fd.orbit(0).len(), fd.orbit(1).len()), (4, 6));
        assert_eq!(fd.edges().len(), 24);
        // the displayed graph is complete bipartite between the two orbits
        for s in 0..4 {
            for t in 0..6 {
                let (x, y) = (v(&fd, 0, s), v(&fd, 1, t));
                assert!(fd.edges().contains(&(x.min(y), x.max(y))));
            }
        }
        assert!(verify_folding(&fd, &a).all_passed());
    }

    #[test]
    fn simply_laced_is_identity() {
        let a = Arc::new(CartanMatrix::named("A2").unwrap());
        let fd = fold(&a);
        assert_eq!(fd.n(), Some(1));
        assert_eq!(fd.virtual_cartan().rows(), a.rows());
        assert!(verify_folding(&fd, &a).all_passed());
        let x = a.clone();
        let w = &Weight::from_lambda(vec![2, 1]) - &Weight::simple_root(2, 0);
        assert_eq!(fd.weight_embed(&w), w);
        let rc = RiggedConfiguration::from_strings(x, HighestWeight::Infinity, &[&[(2, -1)], &[(1, 0)]]).unwrap();
        let vrc = fd.virtualize(&rc).unwrap();
        assert_eq!(vrc.parts(), rc.parts());
        for b in 0..2 {
            assert_eq!(fd.virtual_f(&vrc, b).unwrap().parts(), rc.f(b).unwrap().parts());
        }
    }

    #[test]
    fn c2_folds_to_a3_path() {
        let a = cm(&[&[2, -2], &[-1, 2]]);
        let fd = build_folding(&a, &Symmetrizer::from(vec![1, 2])).unwrap();
        assert_eq!(fd.n(), Some(1));
        assert_eq!(fd.vertices().len(), 3);
        let (v10, v20, v21) = (v(&fd, 0, 0), v(&fd, 1, 0), v(&fd, 1, 1));
        assert_eq!(fd.edges(), &[(v10, v20), (v10, v21)]);
        assert!(verify_folding(&fd, &a).all_passed());

        assert_eq!(fd.weight_embed(&Weight::fundamental(2, 0)).lambda, vec![1, 0, 0]);
        assert_eq!(fd.weight_embed(&Weight::fundamental(2, 1)).lambda, vec![0, 1, 1]);
        assert_eq!(fd.root_embed(1), vec![0, 1, 1]);
    }

    #[test]
    fn example_weight_embedding() {
        let a = cm(&[&[2, -6], &[-4, 2]]);
        let fd = fold(&a);
        let img = fd.weight_embed(&Weight::fundamental(2, 0));
        assert_eq!(img.lambda.iter().sum::<i64>(), 4);
        assert!(fd.orbit(0).iter().all(|&b| img.lambda[b] == 1));
    }

    #[test]
    fn corrupted_diagram_fails_edge_count() {
        let a = cm(&[&[2, -6], &[-4, 2]]);
        let fd = fold(&a);
        let (u, w) = fd.edges()[0];
        let broken = fd.without_edge(u, w).unwrap();
        let report = verify_folding(&broken, &a);
        assert!(!report.check("edge_counts").unwrap().passed);
        assert!(report.check("simple_graph").unwrap().passed);
        assert!(!report.all_passed());
    }

    #[test]
    fn mirrored_pass_would_overcount() {
        // pairs with c = 2 inside N = 3: residues {0, 1} vs {0, 2} mod 3
        let a = cm(&[&[2, -2, -3], &[-2, 2, 0], &[-3, 0, 2]]);
        let fd = fold(&a);
        assert_eq!(fd.n(), Some(3));
        assert_eq!(fd.c(0, 1), Some(2));
        let report = verify_folding(&fd, &a);
        assert!(report.all_passed(), "{report}");
        // union with the (b, a) pass
        let mut union: BTreeSet<(usize, usize)> = fd.edges().iter().copied().collect();
        for s in 0..3u64 {
            for k in 0..2u64 {
                let x = v(&fd, 1, (s % 3) as usize);
                let y = v(&fd, 0, ((s + k) % 3) as usize);
                union.insert((x.min(y), x.max(y)));
            }
        }
        assert!(union.len() > fd.edges().len());
    }

    #[test]
    fn bad_symmetrizer_rejected() {
        let a = cm(&[&[2, -2], &[-1, 2]]);
        assert_eq!(build_folding(&a, &Symmetrizer::from(vec![2, 1])), Err(FoldingError::BadSymmetrizer));
    }

    #[test]
    fn virtualize_examples() {
        let a = cm(&[&[2, -2], &[-1, 2]]);
        let fd = fold(&a);
        let empty = RiggedConfiguration::empty(a.clone(), HighestWeight::Infinity).unwrap();
        let ve = fd.virtualize(&empty).unwrap();
        assert!(ve.parts().iter().all(RiggedPartition::is_empty));

        let x = RiggedConfiguration::from_strings(a.clone(), HighestWeight::Infinity, &[&[], &[(1, -1)]]).unwrap();
        let vx = fd.virtualize(&x).unwrap();
        let one = RiggedPartition::new([RiggedString::new(1, -1)]).unwrap();
        assert!(vx.part(v(&fd, 0, 0)).is_empty());
        assert_eq!(vx.part(v(&fd, 1, 0)), &one);
        assert_eq!(vx.part(v(&fd, 1, 1)), &one);
        assert_eq!(fd.devirtualize(&vx).unwrap(), x);

        // virtual_f on the empty element adds (1,-1) to both orbit vertices
        assert_eq!(fd.virtual_f(&ve, 1).unwrap(), vx);
        let (b0, b1) = (v(&fd, 1, 0), v(&fd, 1, 1));
        assert_eq!(vx.f(b0).unwrap().f(b1), vx.f(b1).unwrap().f(b0));
    }

    fn a1_doubled() -> FoldedDiagram {
        let a1 = Arc::new(CartanMatrix::named("A1").unwrap());
        FoldedDiagram::from_graph(a1, &[0], &[], vec![2]).unwrap()
    }

    #[test]
    fn scaled_virtualization() {
        let fd = a1_doubled();
        let a1 = fd.base().clone();
        let x = RiggedConfiguration::from_strings(a1, HighestWeight::Infinity, &[&[(1, -1)]]).unwrap();
        let vx = fd.virtualize(&x).unwrap();
        assert_eq!(vx.part(0).strings(), &[RiggedString::new(2, -2)]);
        assert_eq!(fd.devirtualize(&vx).unwrap(), x);
        assert_eq!(fd.virtual_epsilon(&vx, 0), Some(1));
        assert_eq!(fd.virtual_phi(&vx, 0), Some(x.phi(0)));
    }

    #[test]
    fn image_conditions() {
        let a = cm(&[&[2, -2], &[-1, 2]]);
        let fd = fold(&a);
        let vc = fd.virtual_cartan().clone();
        let (b0, b1) = (v(&fd, 1, 0), v(&fd, 1, 1));
        let mut parts = vec![RiggedPartition::default(); 3];
        parts[b0] = RiggedPartition::new([RiggedString::new(1, -1)]).unwrap();
        let lopsided = RiggedConfiguration::from_parts(vc, HighestWeight::Infinity, parts.clone()).unwrap();
        assert!(!fd.is_in_virtual_image(&lopsided));
        match fd.devirtualize(&lopsided) {
            Err(FoldingError::NotInVirtualImage(v)) => assert_eq!(v.condition, ImageCondition::OrbitConstancy),
            other => panic!("{other:?}"),
        }
        parts[b1] = parts[b0].clone();
        let balanced = RiggedConfiguration::from_parts(fd.virtual_cartan().clone(), HighestWeight::Infinity, parts).unwrap();
        assert!(fd.is_in_virtual_image(&balanced));

        let doubled = a1_doubled();
        let odd =
            RiggedConfiguration::from_strings(doubled.virtual_cartan().clone(), HighestWeight::Infinity, &[&[(1, -2)]])
                .unwrap();
        match doubled.check_virtual_image(&odd) {
            Err(FoldingError::NotInVirtualImage(v)) => assert_eq!(v.condition, ImageCondition::LengthDivisibility),
            other => panic!("{other:?}"),
        }
        let odd_rigging =
            RiggedConfiguration::from_strings(doubled.virtual_cartan().clone(), HighestWeight::Infinity, &[&[(2, -1)]])
                .unwrap();
        assert!(matches!(
            doubled.check_virtual_image(&odd_rigging),
            Err(FoldingError::NotInVirtualImage(ImageViolation { condition: ImageCondition::RiggingDivisibility, .. }))
        ));
    }

    #[test]
    fn sweep_passes_on_fixtures() {
        for rows in [&[&[2, -2][..], &[-1, 2]][..], &[&[2, -3], &[-1, 2]], &[&[2, -1], &[-3, 2]]] {
            let a = cm(rows);
            let fd = fold(&a);
            for hw in [HighestWeight::Infinity, HighestWeight::Dominant(vec![1, 1])] {
                let g = generate(a.clone(), hw, 4).unwrap();
                let report = virtualization_sweep(&fd, &g).unwrap();
                assert!(report.passed(), "{:?}", &report.violations[..report.violations.len().min(5)]);
            }
        }
        let doubled = a1_doubled();
        let g = generate(doubled.base().clone(), HighestWeight::Infinity, 6).unwrap();
        assert!(virtualization_sweep(&doubled, &g).unwrap().passed());
    }

    #[test]
    fn virtual_graph_matches_identity_folding() {
        let a = Arc::new(CartanMatrix::named("A2").unwrap());
        let fd = fold(&a);
        let hw = HighestWeight::Dominant(vec![1, 1]);
        let direct = generate(a, hw.clone(), 20).unwrap();
        let image = generate_virtual(&fd, hw, 20).unwrap();
        assert!(isomorphic(&direct, &image).unwrap());
        assert_eq!(direct, image);
    }

    #[test]
    fn json_export_shape() {
        let a = cm(&[&[2, -6], &[-4, 2]]);
        let j = fold(&a).to_json_value();
        assert_eq!(j["N"], 2);
        assert_eq!(j["vertices"].as_array().unwrap().len(), 10);
        assert_eq!(j["edges"].as_array().unwrap().len(), 24);
        assert_eq!(j["vertices"][0], json!(["1", 0]));
        assert_eq!(j["orbit"]["2_5"], "2");
    }
}
