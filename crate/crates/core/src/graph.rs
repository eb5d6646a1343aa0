//! Action graph of `ad(g_-)` on `g` and the path integral over it.
//!
//! Vertices are adapted basis indices of `g`. There is an edge `s -> t`
//! labelled by the `g_-` basis vector `P_i` whenever the coefficient `c` of
//! `e_t` in `[P_i, e_s]` is nonzero. A path from `M` of length `n` with labels
//! `i_1, ..., i_n` contributes `K(p) * prod(-c) * X^{i_n} ... X^{i_1} (x) e_T`,
//! newest label leftmost, with `K(p) = +-c(k(p), n)`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::decomp::Decomposition;
use crate::liealg::GVector;
use crate::scalar::{c_coeff_with, BernoulliConvention, Scalar, BERNOULLI_CONVENTION};
use crate::series::{phi_h_general, GPoly};
use crate::superpoly::{Indeterminate, Monomial, Parity};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("unbounded enumeration from a vertex that reaches a cycle: {0:?}")]
    Cycle(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub source: usize,
    pub target: usize,
    /// Position of the label inside `g_-`.
    pub label: usize,
    pub weight: Scalar,
}

#[derive(Debug, Clone)]
pub struct ActionGraph {
    dim: usize,
    edges: Vec<Edge>,
    out: Vec<Vec<usize>>,
    label_parity: Vec<Parity>,
    in_minus: Vec<bool>,
    int_weights: Option<Vec<i64>>,
}

impl ActionGraph {
    pub fn build(decomp: &Decomposition) -> Self {
        let alg = decomp.algebra();
        let dim = alg.dim();
        let mut edges = Vec::new();
        let mut out = vec![Vec::new(); dim];
        for s in 0..dim {
            for (i, &p) in decomp.minus().iter().enumerate() {
                for (t, c) in alg.bracket_basis(p, s).iter() {
                    out[s].push(edges.len());
                    edges.push(Edge { source: s, target: t, label: i, weight: c.clone() });
                }
            }
        }
        let int_weights = edges
            .iter()
            .map(|e| e.weight.to_i128().and_then(|w| i64::try_from(w).ok()))
            .collect::<Option<Vec<i64>>>();
        ActionGraph {
            dim,
            label_parity: (0..decomp.var_count()).map(|i| decomp.var(i).parity).collect(),
            in_minus: (0..dim).map(|v| decomp.is_minus(v)).collect(),
            edges,
            out,
            int_weights,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.dim
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn outgoing(&self, v: usize) -> impl Iterator<Item = &Edge> {
        self.out[v].iter().map(|&e| &self.edges[e])
    }

    pub fn is_minus(&self, v: usize) -> bool {
        self.in_minus[v]
    }

    /// A cycle reachable from `source`, as a vertex list.
    pub fn find_cycle_from(&self, source: usize) -> Option<Vec<usize>> {
        // 0 = unseen, 1 = on stack, 2 = done
        let mut color = vec![0u8; self.dim];
        let mut stack: Vec<(usize, usize)> = vec![(source, 0)];
        let mut trail = vec![source];
        color[source] = 1;
        while let Some(&mut (v, ref mut pos)) = stack.last_mut() {
            if *pos < self.out[v].len() {
                let t = self.edges[self.out[v][*pos]].target;
                *pos += 1;
                match color[t] {
                    0 => {
                        color[t] = 1;
                        stack.push((t, 0));
                        trail.push(t);
                    }
                    1 => {
                        let start = trail.iter().position(|&x| x == t).unwrap();
                        let mut cyc = trail[start..].to_vec();
                        cyc.push(t);
                        return Some(cyc);
                    }
                    _ => {}
                }
            } else {
                color[v] = 2;
                stack.pop();
                trail.pop();
            }
        }
        None
    }

    /// Number of paths (including the trivial one) from every vertex, by
    /// dynamic programming. Fails on a cycle.
    pub fn path_counts(&self) -> Result<Vec<u128>, GraphError> {
        let mut memo: Vec<Option<u128>> = vec![None; self.dim];
        for v in 0..self.dim {
            if let Some(c) = self.find_cycle_from(v) {
                return Err(GraphError::Cycle(c));
            }
        }
        fn go(g: &ActionGraph, v: usize, memo: &mut Vec<Option<u128>>) -> u128 {
            if let Some(c) = memo[v] {
                return c;
            }
            let mut c = 1u128;
            for &e in &g.out[v] {
                c += go(g, g.edges[e].target, memo);
            }
            memo[v] = Some(c);
            c
        }
        Ok((0..self.dim).map(|v| go(self, v, &mut memo)).collect())
    }
}

/// A directed path: a source vertex and a sequence of edge indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Path {
    pub source: usize,
    pub edges: Vec<usize>,
}

impl Path {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Vertex sequence `v_0 = source, ..., v_n = target`.
    pub fn vertices(&self, graph: &ActionGraph) -> Vec<usize> {
        let mut v = vec![self.source];
        v.extend(self.edges.iter().map(|&e| graph.edges[e].target));
        v
    }

    pub fn target(&self, graph: &ActionGraph) -> usize {
        self.edges.last().map_or(self.source, |&e| graph.edges[e].target)
    }
}

/// Depth-first stream of all paths from a vertex, trivial path first,
/// outgoing edges in index order.
pub struct PathIter<'g> {
    graph: &'g ActionGraph,
    source: usize,
    max_length: usize,
    stack: Vec<(usize, usize)>,
    edges: Vec<usize>,
    started: bool,
    hit_limit: bool,
}

impl PathIter<'_> {
    /// Whether some path was cut at the length limit.
    pub fn hit_limit(&self) -> bool {
        self.hit_limit
    }
}

impl Iterator for PathIter<'_> {
    type Item = Path;

    fn next(&mut self) -> Option<Path> {
        if !self.started {
            self.started = true;
            self.stack.push((self.source, 0));
            return Some(Path { source: self.source, edges: Vec::new() });
        }
        while let Some(&mut (v, ref mut pos)) = self.stack.last_mut() {
            let out = &self.graph.out[v];
            if *pos < out.len() && self.edges.len() < self.max_length {
                let e = out[*pos];
                *pos += 1;
                self.edges.push(e);
                self.stack.push((self.graph.edges[e].target, 0));
                return Some(Path { source: self.source, edges: self.edges.clone() });
            }
            if *pos < out.len() {
                self.hit_limit = true;
            }
            self.stack.pop();
            self.edges.pop();
        }
        None
    }
}

/// Enumerate paths from `source`. Without a length bound the graph must be
/// acyclic from `source`.
pub fn enumerate_paths(graph: &ActionGraph, source: usize, max_length: Option<usize>) -> Result<PathIter<'_>, GraphError> {
    let max_length = match max_length {
        Some(m) => m,
        None => {
            if let Some(c) = graph.find_cycle_from(source) {
                return Err(GraphError::Cycle(c));
            }
            usize::MAX
        }
    };
    Ok(PathIter { graph, source, max_length, stack: Vec::new(), edges: Vec::new(), started: false, hit_limit: false })
}

/// How `k(p)` is read off a path with vertices `v_0, ..., v_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum KRule {
    /// Largest `j` with `v_j` in `h`; `0` when no vertex lies in `h`.
    LongestHPrefix,
    /// Smallest `j` with `v_j` in `g_-`; `n` when there is none.
    FirstMinusVisit,
}

impl KRule {
    pub const ALL: [KRule; 2] = [KRule::LongestHPrefix, KRule::FirstMinusVisit];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PathConventions {
    /// `K(p) = -c(k, n)` instead of `+c(k, n)`.
    pub negate_k: bool,
    pub k_rule: KRule,
    pub bernoulli: BernoulliConvention,
}

impl PathConventions {
    /// The combination that reproduces the closed-form series.
    pub const CALIBRATED: PathConventions = PathConventions {
        negate_k: false,
        k_rule: KRule::FirstMinusVisit,
        bernoulli: BERNOULLI_CONVENTION,
    };

    /// The formulas read literally.
    pub const LITERAL: PathConventions = PathConventions {
        negate_k: true,
        k_rule: KRule::LongestHPrefix,
        bernoulli: BERNOULLI_CONVENTION,
    };

    /// Every combination of the three switches, in a fixed order.
    pub fn all() -> Vec<PathConventions> {
        let mut out = Vec::new();
        for negate_k in [false, true] {
            for k_rule in KRule::ALL {
                for bernoulli in BernoulliConvention::ALL {
                    out.push(PathConventions { negate_k, k_rule, bernoulli });
                }
            }
        }
        out
    }
}

impl fmt::Display for PathConventions {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "K = {}c(k, n), k rule {:?}, {}",
            if self.negate_k { "-" } else { "+" },
            self.k_rule,
            self.bernoulli.name()
        )
    }
}

pub fn k_of_path(graph: &ActionGraph, path: &Path, rule: KRule) -> usize {
    let vs = path.vertices(graph);
    match rule {
        KRule::LongestHPrefix => (0..vs.len()).rev().find(|&j| !graph.is_minus(vs[j])).unwrap_or(0),
        KRule::FirstMinusVisit => (0..vs.len()).find(|&j| graph.is_minus(vs[j])).unwrap_or(path.len()),
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathStats {
    /// Paths from the source, the trivial one included.
    pub paths: u64,
    /// Nonzero `(monomial, basis vector)` terms in `A(M) + B(M)`.
    pub terms: usize,
    /// Longest path, which is the top degree of the monomials before any
    /// cancellation.
    pub max_path_length: usize,
    /// Top degree among the surviving terms.
    pub max_degree: usize,
    /// Top total degree of the terms of the first-order operator built from
    /// `A` and `B`: a `g_-` term carries one extra derivative.
    pub operator_degree: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PathMeasureResult {
    /// `g_-`-valued part `A(M)`.
    pub a_part: GPoly,
    /// `h`-valued part `B(M)`.
    pub b_part: GPoly,
    pub stats: PathStats,
    /// The length bound cut some path (only possible on cyclic graphs).
    pub partial: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IntegralOptions {
    pub conventions: PathConventions,
    /// Required when the graph has a cycle reachable from the source.
    pub max_length: Option<usize>,
    /// Split the enumeration over the source's outgoing edges.
    pub parallel: bool,
}

impl Default for IntegralOptions {
    fn default() -> Self {
        IntegralOptions { conventions: PathConventions::CALIBRATED, max_length: None, parallel: true }
    }
}

// (sorted labels, terminal vertex, k)
type Key = (Vec<u16>, u32, u16);

trait Weight: Clone + Send {
    fn one() -> Self;
    fn times_neg_edge(&self, g: &ActionGraph, e: usize, negate: bool) -> Option<Self>;
    fn add_into(&mut self, other: &Self) -> Option<()>;
    fn to_scalar(&self) -> Scalar;
}

impl Weight for i128 {
    fn one() -> Self {
        1
    }
    fn times_neg_edge(&self, g: &ActionGraph, e: usize, negate: bool) -> Option<Self> {
        let w = -(g.int_weights.as_ref()?[e] as i128);
        let p = self.checked_mul(w)?;
        Some(if negate { -p } else { p })
    }
    fn add_into(&mut self, other: &Self) -> Option<()> {
        *self = self.checked_add(*other)?;
        Some(())
    }
    fn to_scalar(&self) -> Scalar {
        Scalar::from(*self)
    }
}

impl Weight for Scalar {
    fn one() -> Self {
        Scalar::one()
    }
    fn times_neg_edge(&self, g: &ActionGraph, e: usize, negate: bool) -> Option<Self> {
        Some((-(self * &g.edges[e].weight)).signed(negate))
    }
    fn add_into(&mut self, other: &Self) -> Option<()> {
        *self += other;
        Some(())
    }
    fn to_scalar(&self) -> Scalar {
        self.clone()
    }
}

struct Partial<W> {
    sums: HashMap<Key, W>,
    paths: u64,
    max_len: usize,
    hit_limit: bool,
}

struct Frame<W> {
    vertex: usize,
    pos: usize,
    mono: Vec<u16>,
    weight: W,
    len: usize,
    // k under the chosen rule, once determined
    first_minus: Option<usize>,
    last_h: Option<usize>,
}

fn k_value(rule: KRule, len: usize, first_minus: Option<usize>, last_h: Option<usize>) -> usize {
    match rule {
        KRule::FirstMinusVisit => first_minus.unwrap_or(len),
        KRule::LongestHPrefix => last_h.unwrap_or(0),
    }
}

/// Left-multiply the sorted label list by `X^label`, returning the sign
/// (`true` for `-1`) or `None` when an odd label repeats.
fn push_label(graph: &ActionGraph, mono: &[u16], label: u16) -> Option<(bool, Vec<u16>)> {
    let odd = graph.label_parity[label as usize].is_odd();
    let pos = mono.partition_point(|&x| x < label);
    if odd {
        if mono.get(pos) == Some(&label) {
            return None;
        }
        // sign (-1)^{number of odd factors with a larger index}
        let after = mono[pos..].iter().filter(|&&x| graph.label_parity[x as usize].is_odd()).count();
        let mut v = mono.to_vec();
        v.insert(pos, label);
        return Some((after % 2 == 1, v));
    }
    let mut v = mono.to_vec();
    v.insert(pos, label);
    Some((false, v))
}

fn walk<W: Weight>(graph: &ActionGraph, start: Frame<W>, rule: KRule, max_length: usize) -> Option<Partial<W>> {
    let mut part: Partial<W> = Partial { sums: HashMap::new(), paths: 0, max_len: 0, hit_limit: false };
    let mut stack = vec![start];
    loop {
        let Some(top) = stack.last_mut() else { break };
        if top.pos == 0 {
            // first visit: record the path ending here
            part.paths += 1;
            part.max_len = part.max_len.max(top.len);
            let k = k_value(rule, top.len, top.first_minus, top.last_h);
            let key = (top.mono.clone(), top.vertex as u32, k as u16);
            match part.sums.get_mut(&key) {
                Some(w) => w.add_into(&top.weight)?,
                None => {
                    part.sums.insert(key, top.weight.clone());
                }
            }
        }
        let v = top.vertex;
        if top.pos < graph.out[v].len() && top.len < max_length {
            let e = graph.out[v][top.pos];
            top.pos += 1;
            let edge = &graph.edges[e];
            let Some((neg, mono)) = push_label(graph, &top.mono, edge.label as u16) else { continue };
            let weight = top.weight.times_neg_edge(graph, e, neg)?;
            let len = top.len + 1;
            let t = edge.target;
            let is_minus = graph.in_minus[t];
            let first_minus = top.first_minus.or(if is_minus { Some(len) } else { None });
            let last_h = if is_minus { top.last_h } else { Some(len) };
            stack.push(Frame { vertex: t, pos: 0, mono, weight, len, first_minus, last_h });
        } else {
            if top.pos < graph.out[v].len() {
                part.hit_limit = true;
            }
            stack.pop();
        }
    }
    Some(part)
}

fn run<W: Weight>(graph: &ActionGraph, source: usize, opts: &IntegralOptions) -> Option<Partial<W>> {
    let rule = opts.conventions.k_rule;
    let max_length = opts.max_length.unwrap_or(usize::MAX);
    let src_minus = graph.in_minus[source];
    let root = Frame {
        vertex: source,
        pos: 0,
        mono: Vec::new(),
        weight: W::one(),
        len: 0,
        first_minus: src_minus.then_some(0),
        last_h: (!src_minus).then_some(0),
    };
    if !opts.parallel || graph.out[source].len() < 2 || max_length == 0 {
        return walk(graph, root, rule, max_length);
    }
    // the trivial path, then one subtree per outgoing edge
    let mut trivial = Partial { sums: HashMap::new(), paths: 1, max_len: 0, hit_limit: false };
    trivial.sums.insert(
        (Vec::new(), source as u32, k_value(rule, 0, root.first_minus, root.last_h) as u16),
        W::one(),
    );
    let subtrees: Vec<Option<Partial<W>>> = graph.out[source]
        .par_iter()
        .map(|&e| {
            let edge = &graph.edges[e];
            let (neg, mono) = push_label(graph, &[], edge.label as u16)?;
            let weight = W::one().times_neg_edge(graph, e, neg)?;
            let t = edge.target;
            let is_minus = graph.in_minus[t];
            let frame = Frame {
                vertex: t,
                pos: 0,
                mono,
                weight,
                len: 1,
                first_minus: root.first_minus.or(if is_minus { Some(1) } else { None }),
                last_h: if is_minus { root.last_h } else { Some(1) },
            };
            walk(graph, frame, rule, max_length)
        })
        .collect();
    let mut total = trivial;
    for sub in subtrees {
        let sub = sub?;
        total.paths += sub.paths;
        total.max_len = total.max_len.max(sub.max_len);
        total.hit_limit |= sub.hit_limit;
        for (k, w) in sub.sums {
            match total.sums.get_mut(&k) {
                Some(x) => x.add_into(&w)?,
                None => {
                    total.sums.insert(k, w);
                }
            }
        }
    }
    Some(total)
}

fn finish<W: Weight>(graph: &ActionGraph, decomp: &Decomposition, part: Partial<W>, conv: PathConventions) -> PathMeasureResult {
    let mut combined: BTreeMap<(Vec<u16>, u32), Scalar> = BTreeMap::new();
    let mut c_cache: HashMap<(usize, usize), Scalar> = HashMap::new();
    for ((mono, v, k), w) in part.sums {
        let n = mono.len();
        let c = c_cache
            .entry((k as usize, n))
            .or_insert_with(|| c_coeff_with(k as usize, n, conv.bernoulli).expect("k <= n").signed(conv.negate_k))
            .clone();
        if c.is_zero() {
            continue;
        }
        let x = w.to_scalar() * c;
        if x.is_zero() {
            continue;
        }
        let e = combined.entry((mono, v)).or_insert_with(Scalar::zero);
        *e += &x;
    }
    let mut a_part = GPoly::zero(None);
    let mut b_part = GPoly::zero(None);
    let mut terms = 0;
    let mut max_degree = 0;
    let mut operator_degree = 0;
    for ((mono, v), c) in combined {
        if c.is_zero() {
            continue;
        }
        terms += 1;
        max_degree = max_degree.max(mono.len());
        let minus = graph.in_minus[v as usize];
        operator_degree = operator_degree.max(mono.len() + minus as usize);
        let factors: Vec<Indeterminate> = mono.iter().map(|&i| decomp.var(i as usize)).collect();
        let m = Monomial::from_sorted(factors);
        let target = if minus { &mut a_part } else { &mut b_part };
        target.add_term(m, GVector::single(v as usize, c));
    }
    PathMeasureResult {
        a_part,
        b_part,
        stats: PathStats { paths: part.paths, terms, max_path_length: part.max_len, max_degree, operator_degree },
        partial: part.hit_limit,
    }
}

/// `A(M) = Pi_- sum_p K(p) mu(p) T(p)` and `B(M) = Pi_h (same)` over all
/// paths from the basis vertex `source`.
pub fn path_integral(
    graph: &ActionGraph,
    decomp: &Decomposition,
    source: usize,
    opts: &IntegralOptions,
) -> Result<PathMeasureResult, GraphError> {
    if opts.max_length.is_none() {
        if let Some(c) = graph.find_cycle_from(source) {
            return Err(GraphError::Cycle(c));
        }
    }
    if graph.int_weights.is_some() {
        if let Some(part) = run::<i128>(graph, source, opts) {
            return Ok(finish(graph, decomp, part, opts.conventions));
        }
    }
    let part = run::<Scalar>(graph, source, opts).expect("exact accumulation cannot overflow");
    Ok(finish(graph, decomp, part, opts.conventions))
}

/// Elements of degree one, the generators whose operators are reported.
pub fn distinguished_generators(decomp: &Decomposition) -> Vec<usize> {
    let alg = decomp.algebra();
    (0..alg.dim()).filter(|&i| alg.basis()[i].degree == Some(1)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorStats {
    pub generator: String,
    #[serde(flatten)]
    pub stats: PathStats,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatisticsSummary {
    pub algebra: String,
    pub generators: Vec<GeneratorStats>,
    pub max_paths: u64,
    pub max_terms: usize,
    pub max_path_length: usize,
    pub max_operator_degree: usize,
}

/// Path integral statistics for each generator, with maxima.
pub fn collect_statistics(
    decomp: &Decomposition,
    generators: &[usize],
    conventions: PathConventions,
) -> Result<StatisticsSummary, GraphError> {
    let graph = ActionGraph::build(decomp);
    let alg = decomp.algebra();
    let opts = IntegralOptions { conventions, max_length: None, parallel: true };
    let mut out = Vec::new();
    for &g in generators {
        let r = path_integral(&graph, decomp, g, &opts)?;
        out.push(GeneratorStats { generator: alg.label(g).to_string(), stats: r.stats });
    }
    Ok(StatisticsSummary {
        algebra: alg.name().to_string(),
        max_paths: out.iter().map(|s| s.stats.paths).max().unwrap_or(0),
        max_terms: out.iter().map(|s| s.stats.terms).max().unwrap_or(0),
        max_path_length: out.iter().map(|s| s.stats.max_path_length).max().unwrap_or(0),
        max_operator_degree: out.iter().map(|s| s.stats.operator_degree).max().unwrap_or(0),
        generators: out,
    })
}

/// First difference between the path integral and the series engine for a
/// basis element, or `None` when they agree.
pub fn compare_with_series(
    graph: &ActionGraph,
    decomp: &Decomposition,
    source: usize,
    conventions: PathConventions,
    truncation: usize,
) -> Result<Option<String>, GraphError> {
    let opts = IntegralOptions { conventions, max_length: Some(truncation), parallel: false };
    let r = path_integral(graph, decomp, source, &opts)?;
    let s = phi_h_general(decomp, &GVector::basis(source), truncation);
    let (ga, gb) = (r.a_part.with_truncation(Some(truncation)), r.b_part.with_truncation(Some(truncation)));
    if ga != s.phi {
        return Ok(Some(first_difference("A", &ga, &s.phi)));
    }
    if gb != s.h {
        return Ok(Some(first_difference("B", &gb, &s.h)));
    }
    Ok(None)
}

fn first_difference(which: &str, graph_side: &GPoly, series_side: &GPoly) -> String {
    let diff = graph_side.sub(series_side);
    let (m, v) = diff.iter().next().expect("nonzero difference");
    format!(
        "{which}: coefficient of {m} differs: graph {:?}, series {:?}",
        graph_side.coeff(m).cloned().unwrap_or_default(),
        series_side.coeff(m).cloned().unwrap_or_default()
    ) + &format!(" (difference {v:?})")
}

/// All convention combinations under which the path integral matches the
/// series engine for every basis element of every decomposition.
pub fn calibrate(cases: &[(&Decomposition, usize)]) -> Vec<PathConventions> {
    let graphs: Vec<ActionGraph> = cases.iter().map(|(d, _)| ActionGraph::build(d)).collect();
    PathConventions::all()
        .into_iter()
        .filter(|&conv| {
            cases.iter().zip(&graphs).all(|((d, t), g)| {
                (0..d.algebra().dim()).all(|m| matches!(compare_with_series(g, d, m, conv, *t), Ok(None)))
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::{build_gl, build_simply_laced, Family, LieSuperAlgebra};
    use crate::superpoly::{Coefficient, SuperPoly};

    fn sl2() -> (LieSuperAlgebra, Decomposition) {
        let g = build_simply_laced(Family::A, 1).unwrap();
        let d = Decomposition::triangular(&g).unwrap();
        (g, d)
    }

    #[test]
    fn sl2_edges() {
        let (g, d) = sl2();
        let gr = ActionGraph::build(&d);
        let (e, f, h) = (g.index_of("e").unwrap(), g.index_of("f").unwrap(), g.index_of("h").unwrap());
        let from_e: Vec<_> = gr.outgoing(e).map(|x| (x.target, x.weight.clone())).collect();
        assert_eq!(from_e, vec![(h, Scalar::from_int(-1))]);
        let from_h: Vec<_> = gr.outgoing(h).map(|x| (x.target, x.weight.clone())).collect();
        assert_eq!(from_h, vec![(f, Scalar::from_int(2))]);
        assert_eq!(gr.outgoing(f).count(), 0);
    }

    #[test]
    fn sl2_paths() {
        let (g, d) = sl2();
        let gr = ActionGraph::build(&d);
        let (e, f) = (g.index_of("e").unwrap(), g.index_of("f").unwrap());
        let paths: Vec<Path> = enumerate_paths(&gr, e, None).unwrap().collect();
        assert_eq!(paths.iter().map(Path::len).collect::<Vec<_>>(), vec![0, 1, 2]);
        assert_eq!(enumerate_paths(&gr, f, None).unwrap().count(), 1);
        let long = &paths[2];
        assert_eq!(k_of_path(&gr, long, KRule::LongestHPrefix), 1);
        assert_eq!(k_of_path(&gr, long, KRule::FirstMinusVisit), 2);
        let at_f = Path { source: f, edges: vec![] };
        assert_eq!(k_of_path(&gr, &at_f, KRule::LongestHPrefix), 0);
        assert_eq!(k_of_path(&gr, &at_f, KRule::FirstMinusVisit), 0);
        let at_e = Path { source: e, edges: vec![] };
        assert_eq!(k_of_path(&gr, &at_e, KRule::LongestHPrefix), 0);
    }

    #[test]
    fn abelian() {
        let basis = (0..3)
            .map(|i| crate::liealg::BasisElement {
                index: i,
                label: format!("a{i}"),
                parity: Parity::Even,
                degree: Some(if i == 0 { -1 } else { 0 }),
            })
            .collect();
        let g = LieSuperAlgebra::from_parts("ab3", basis, BTreeMap::new());
        let d = Decomposition::triangular(&g).unwrap();
        let gr = ActionGraph::build(&d);
        assert!(gr.edges().is_empty());
        for m in 0..3 {
            let r = path_integral(&gr, &d, m, &IntegralOptions::default()).unwrap();
            let whole = r.a_part.add(&r.b_part);
            assert_eq!(whole, SuperPoly::constant(GVector::basis(m), None));
            assert_eq!(r.a_part.is_zero(), m != 0);
            let lit = IntegralOptions { conventions: PathConventions::LITERAL, ..Default::default() };
            let r = path_integral(&gr, &d, m, &lit).unwrap();
            assert_eq!(r.a_part.add(&r.b_part), SuperPoly::constant(GVector::basis(m).negated(), None));
        }
    }

    #[test]
    fn sl2_integral() {
        let (g, d) = sl2();
        let gr = ActionGraph::build(&d);
        for m in 0..3 {
            assert_eq!(compare_with_series(&gr, &d, m, PathConventions::CALIBRATED, 4).unwrap(), None, "{}", g.label(m));
        }
    }

    #[test]
    fn calibration_is_unique() {
        let a1 = Decomposition::triangular(&build_simply_laced(Family::A, 1).unwrap()).unwrap();
        let a2 = Decomposition::triangular(&build_simply_laced(Family::A, 2).unwrap()).unwrap();
        let found = calibrate(&[(&a1, 3), (&a2, 4)]);
        assert_eq!(found, vec![PathConventions::CALIBRATED]);
    }

    #[test]
    fn gl3_is_acyclic_and_counts_match() {
        let d = Decomposition::triangular(&build_gl(3)).unwrap();
        let gr = ActionGraph::build(&d);
        let counts = gr.path_counts().unwrap();
        for v in 0..9 {
            assert_eq!(enumerate_paths(&gr, v, None).unwrap().count() as u128, counts[v]);
        }
    }

    #[test]
    fn parallel_matches_serial() {
        let d = Decomposition::triangular(&build_simply_laced(Family::D, 4).unwrap()).unwrap();
        let gr = ActionGraph::build(&d);
        for m in 0..d.algebra().dim() {
            let par = path_integral(&gr, &d, m, &IntegralOptions::default()).unwrap();
            let ser = path_integral(&gr, &d, m, &IntegralOptions { parallel: false, ..Default::default() }).unwrap();
            assert_eq!(par, ser);
        }
    }
}
