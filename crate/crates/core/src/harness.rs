//! Trace files, instance generation and verified replay.
//!
//! A trace is plain text: a header `n m W`, then m lines `e u v w`, then
//! updates `d u v` (delete) and `i u v w` (raise the weight of (u, v) to w),
//! interleaved with query lines `q ...`. Blank lines and lines starting with
//! `#` are ignored. A query line registers the query; from then on it is
//! answered after every update. Replay writes one CSV row per answered query.

use std::collections::HashMap;
use std::fmt;
use std::io::Write;
use std::time::Instant;

use clap::Parser;
use num::{BigRational, ToPrimitive};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::approx_sp::{ApproxSp, ApproxSpConfig};
use crate::dense_ssr::{DenseConfig, DenseSsr};
use crate::error::Error;
use crate::es_tree::EsTree;
use crate::graph::{DecrementalGraph, NodeId, INF};
use crate::oracle;
use crate::reductions::{EngineKind, Scc, SingleSourceReach, SingleSourceSp, SsrConfig, SsspConfig};
use crate::sampling::{seeded_rng, SamplingConfig};
use crate::scale::{int, Eps};
use crate::schedule::{
    dense_pairing, schedule_dense, schedule_multipair, schedule_st_sparse, ssr_pair_count, ParamSchedule, Variant,
};
use crate::st_reach::{MultiPairReach, StReachConfig};

pub const CSV_VERSION_LINE: &str = "# decremental-trace csv v1";
pub const CSV_HEADER: &str = "update_idx,op,answer,oracle,work_total,notes";

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Query {
    St,
    Reach(NodeId),
    Scc(NodeId),
    Dist(Option<NodeId>),
    Pair(NodeId, NodeId),
}

impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Query::St => write!(f, "q st"),
            Query::Reach(v) => write!(f, "q reach {v}"),
            Query::Scc(v) => write!(f, "q scc {v}"),
            Query::Dist(None) => write!(f, "q dist"),
            Query::Dist(Some(v)) => write!(f, "q dist {v}"),
            Query::Pair(x, y) => write!(f, "q pair {x} {y}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Op {
    Delete(NodeId, NodeId),
    Increase(NodeId, NodeId, u64),
    Query(Query),
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Op::Delete(u, v) => write!(f, "d {u} {v}"),
            Op::Increase(u, v, w) => write!(f, "i {u} {v} {w}"),
            Op::Query(q) => write!(f, "{q}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    pub n: usize,
    pub max_weight: u64,
    pub edges: Vec<(NodeId, NodeId, u64)>,
    /// Operations with their 1-based line numbers (0 for generated ones).
    pub ops: Vec<(usize, Op)>,
}

impl Trace {
    pub fn parse(text: &str) -> Result<Self, Error> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let err = |line: usize, msg: String| Error::Trace { line, msg };
        let (hl, header) = lines.next().ok_or_else(|| err(0, "empty trace".into()))?;
        let nums = |line: usize, parts: &[&str]| -> Result<Vec<u64>, Error> {
            parts.iter().map(|p| p.parse::<u64>().map_err(|_| err(line, format!("bad number '{p}'")))).collect()
        };
        let h: Vec<&str> = header.split_whitespace().collect();
        if h.len() != 3 {
            return Err(err(hl, format!("header must be 'n m W', got '{header}'")));
        }
        let h = nums(hl, &h)?;
        let (n, m, max_weight) = (h[0] as usize, h[1] as usize, h[2]);
        let node = |line: usize, x: u64| -> Result<NodeId, Error> {
            if (x as usize) < n {
                Ok(x as usize)
            } else {
                Err(err(line, format!("node {x} out of range (n = {n})")))
            }
        };
        let mut edges = Vec::with_capacity(m);
        let mut ops = Vec::new();
        for (ln, l) in lines {
            let parts: Vec<&str> = l.split_whitespace().collect();
            let arity = |want: usize| -> Result<Vec<u64>, Error> {
                if parts.len() != want + 1 {
                    return Err(err(ln, format!("'{}' takes {want} arguments: '{l}'", parts[0])));
                }
                nums(ln, &parts[1..])
            };
            match parts[0] {
                "e" => {
                    if !ops.is_empty() {
                        return Err(err(ln, "edge line after the first update".into()));
                    }
                    let a = arity(3)?;
                    edges.push((node(ln, a[0])?, node(ln, a[1])?, a[2]));
                }
                "d" => {
                    let a = arity(2)?;
                    ops.push((ln, Op::Delete(node(ln, a[0])?, node(ln, a[1])?)));
                }
                "i" => {
                    let a = arity(3)?;
                    ops.push((ln, Op::Increase(node(ln, a[0])?, node(ln, a[1])?, a[2])));
                }
                "q" => {
                    let kind = parts.get(1).copied().unwrap_or("");
                    let rest = nums(ln, &parts[2.min(parts.len())..])?;
                    let q = match (kind, rest.as_slice()) {
                        ("st", []) => Query::St,
                        ("reach", [v]) => Query::Reach(node(ln, *v)?),
                        ("scc", [v]) => Query::Scc(node(ln, *v)?),
                        ("dist", []) => Query::Dist(None),
                        ("dist", [v]) => Query::Dist(Some(node(ln, *v)?)),
                        ("pair", [x, y]) => Query::Pair(node(ln, *x)?, node(ln, *y)?),
                        _ => return Err(err(ln, format!("unknown query '{l}'"))),
                    };
                    ops.push((ln, Op::Query(q)));
                }
                other => return Err(err(ln, format!("unknown line kind '{other}'"))),
            }
        }
        if edges.len() != m {
            return Err(err(hl, format!("header announces {m} edges, found {}", edges.len())));
        }
        Ok(Trace { n, max_weight, edges, ops })
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{} {} {}\n", self.n, self.edges.len(), self.max_weight);
        for &(u, v, w) in &self.edges {
            s.push_str(&format!("e {u} {v} {w}\n"));
        }
        for (_, op) in &self.ops {
            s.push_str(&format!("{op}\n"));
        }
        s
    }

    pub fn graph(&self) -> Result<DecrementalGraph, Error> {
        Ok(DecrementalGraph::new(self.n, &self.edges, self.max_weight)?)
    }

    pub fn update_count(&self) -> usize {
        self.ops.iter().filter(|(_, op)| !matches!(op, Op::Query(_))).count()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Model {
    Uniform,
    LayeredDag,
    CycleHeavy,
    Path,
}

/// Random instance with a full random-order deletion sequence. With W > 1
/// about one update in three is a weight increase (capped at W) of a random
/// live edge.
pub fn generate(n: usize, m: usize, max_weight: u64, model: Model, seed: u64) -> Result<Trace, Error> {
    if n == 0 {
        return Err(Error::Param("n must be positive".into()));
    }
    let cap = match model {
        Model::LayeredDag => n * (n - 1) / 2,
        Model::Path => n - 1,
        _ => n * (n - 1),
    };
    if m > cap {
        return Err(Error::Param(format!("m = {m} is infeasible for n = {n} in this model (max {cap})")));
    }
    let mut rng = seeded_rng(seed);
    let mut set = std::collections::BTreeSet::new();
    let mut pairs = Vec::with_capacity(m);
    let mut add = |u: NodeId, v: NodeId, pairs: &mut Vec<(NodeId, NodeId)>| {
        if u != v && pairs.len() < m && set.insert((u, v)) {
            pairs.push((u, v));
        }
    };
    match model {
        Model::Path => {
            for i in 0..m {
                add(i, i + 1, &mut pairs);
            }
        }
        Model::Uniform => {
            while pairs.len() < m {
                let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
                add(u, v, &mut pairs);
            }
        }
        Model::LayeredDag => {
            let mut perm: Vec<NodeId> = (0..n).collect();
            perm.shuffle(&mut rng);
            while pairs.len() < m {
                let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
                if a < b {
                    add(perm[a], perm[b], &mut pairs);
                }
            }
        }
        Model::CycleHeavy => {
            while pairs.len() < m {
                let len = rng.gen_range(3..=8).min(n);
                if len < 2 {
                    break;
                }
                let mut nodes: Vec<NodeId> = (0..n).collect();
                nodes.shuffle(&mut rng);
                nodes.truncate(len);
                for i in 0..len {
                    add(nodes[i], nodes[(i + 1) % len], &mut pairs);
                }
            }
            while pairs.len() < m {
                let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
                add(u, v, &mut pairs);
            }
        }
    }
    let edges: Vec<(NodeId, NodeId, u64)> =
        pairs.iter().map(|&(u, v)| (u, v, if max_weight > 1 { rng.gen_range(1..=max_weight) } else { 1 })).collect();
    let mut order = pairs.clone();
    order.shuffle(&mut rng);
    let mut weight: HashMap<(NodeId, NodeId), u64> = edges.iter().map(|&(u, v, w)| ((u, v), w)).collect();
    let mut alive: Vec<(NodeId, NodeId)> = pairs.clone();
    let mut ops = Vec::new();
    for (u, v) in order {
        if max_weight > 1 && rng.gen_range(0..3) == 0 {
            let (a, b) = alive[rng.gen_range(0..alive.len())];
            let w = weight[&(a, b)];
            if w < max_weight {
                let nw = rng.gen_range(w + 1..=max_weight);
                weight.insert((a, b), nw);
                ops.push((0, Op::Increase(a, b, nw)));
            }
        }
        alive.retain(|&e| e != (u, v));
        ops.push((0, Op::Delete(u, v)));
    }
    Ok(Trace { n, max_weight: max_weight.max(1), edges, ops })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Algo {
    EsSsr,
    StReach,
    MultiPair,
    Ssr,
    SsspApprox,
    StspApprox,
    Scc,
    DenseSsr,
}

/// Explicit hierarchy parameters from `--params k=..,b=..,c=..`; lists use
/// ':' as separator, e.g. `k=2,b=4:2,c=8:4`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamOverride {
    pub k: usize,
    pub b: Vec<u64>,
    pub c: Vec<u64>,
    pub text: String,
}

impl std::str::FromStr for ParamOverride {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = |m: String| Error::Param(format!("--params '{s}': {m}"));
        let (mut k, mut b, mut c) = (None, Vec::new(), Vec::new());
        for part in s.split(',').filter(|p| !p.trim().is_empty()) {
            let (key, val) = part.split_once('=').ok_or_else(|| bad(format!("expected key=value, got '{part}'")))?;
            let list = || -> Result<Vec<u64>, Error> {
                val.split(':').map(|x| x.trim().parse::<u64>().map_err(|_| bad(format!("bad number '{x}'")))).collect()
            };
            match key.trim() {
                "k" => k = Some(val.trim().parse::<usize>().map_err(|_| bad(format!("bad k '{val}'")))?),
                "b" => b = list()?,
                "c" => c = list()?,
                other => return Err(bad(format!("unknown key '{other}'"))),
            }
        }
        let k = k.unwrap_or(c.len());
        if k == 0 || c.len() != k || (!b.is_empty() && b.len() != k) {
            return Err(bad(format!("k = {k} needs k values for c (and for b if given)")));
        }
        if b.iter().chain(&c).any(|&x| x == 0) {
            return Err(bad("values must be positive".into()));
        }
        Ok(ParamOverride { k, b, c, text: s.to_string() })
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub algo: Algo,
    pub seed: u64,
    pub eps: Eps,
    pub verify: bool,
    /// Verify every K-th update (and the last one).
    pub verify_every: usize,
    pub counters: bool,
    pub params: Option<ParamOverride>,
    pub source: NodeId,
    pub sink: Option<NodeId>,
    pub pairs: Vec<(NodeId, NodeId)>,
    pub terminals: Vec<NodeId>,
    pub k_sinks: Option<f64>,
    pub sampling: SamplingConfig,
}

impl RunConfig {
    pub fn new(algo: Algo, seed: u64) -> Self {
        RunConfig {
            algo,
            seed,
            eps: Eps::from_ratio(1, 2),
            verify: true,
            verify_every: 1,
            counters: false,
            params: None,
            source: 0,
            sink: None,
            pairs: Vec::new(),
            terminals: Vec::new(),
            k_sinks: None,
            sampling: SamplingConfig::default(),
        }
    }

    fn sink(&self, n: usize) -> NodeId {
        self.sink.unwrap_or(n.saturating_sub(1))
    }

    fn terminals(&self, n: usize) -> Vec<NodeId> {
        if self.terminals.is_empty() {
            (0..n.min(8)).collect()
        } else {
            self.terminals.clone()
        }
    }

    fn pairs(&self, n: usize) -> Vec<(NodeId, NodeId)> {
        if self.pairs.is_empty() {
            vec![(self.source, self.sink(n))]
        } else {
            self.pairs.clone()
        }
    }

    /// The hierarchy schedule this run would use.
    pub fn schedule(&self, n: usize, m: usize) -> Result<ParamSchedule, Error> {
        let (n64, m64) = (n as u64, m.max(1) as u64);
        if let Some(p) = &self.params {
            return ParamSchedule::pinned(n64, m64, &p.b, &p.c);
        }
        match self.algo {
            Algo::MultiPair => schedule_multipair(m64, n64, self.pairs(n).len() as f64, Variant::A),
            Algo::Ssr => schedule_multipair(m64, n64, ssr_pair_count(m64, n64, Variant::A), Variant::A),
            Algo::DenseSsr => schedule_dense(m64, n64, dense_pairing(m64, n64, 0)),
            _ => Ok(schedule_st_sparse(m64, n64)),
        }
    }

    /// Text printed by `--explain-params`.
    pub fn explain(&self, n: usize, m: usize) -> Result<String, Error> {
        let mut s = String::new();
        if let Some(p) = &self.params {
            s.push_str(&format!("override: {}\n", p.text));
        }
        s.push_str(&self.schedule(n, m)?.explain());
        Ok(s)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Answer {
    Bool(bool),
    Id(NodeId),
    Dist(Option<BigRational>),
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Answer::Bool(b) => write!(f, "{}", if *b { "yes" } else { "no" }),
            Answer::Id(v) => write!(f, "{v}"),
            Answer::Dist(None) => write!(f, "inf"),
            Answer::Dist(Some(d)) if d.is_integer() => write!(f, "{}", d.to_integer()),
            Answer::Dist(Some(d)) => write!(f, "{d} ~{:.4}", d.to_f64().unwrap_or(f64::NAN)),
        }
    }
}

trait Runner {
    fn graph(&self) -> &DecrementalGraph;
    fn delete(&mut self, u: NodeId, v: NodeId) -> Result<(), Error>;
    fn increase(&mut self, _u: NodeId, _v: NodeId, _w: u64) -> Result<(), Error> {
        Err(Error::Param("this algorithm does not support weight increases".into()))
    }
    fn answer(&self, q: &Query) -> Result<Answer, Error>;
    fn work(&self) -> u64;
    fn counters(&self) -> String;
    /// Upper approximation factor for distance answers.
    fn factor(&self) -> BigRational {
        int(1)
    }
}

fn unsupported(q: &Query) -> Error {
    Error::Param(format!("query '{q}' is not supported by this algorithm"))
}

struct EsRun {
    g: DecrementalGraph,
    tree: EsTree,
}

impl Runner for EsRun {
    fn graph(&self) -> &DecrementalGraph {
        &self.g
    }
    fn delete(&mut self, u: NodeId, v: NodeId) -> Result<(), Error> {
        let up = self.g.delete_edge(u, v)?;
        self.tree.on_update(&self.g, &up);
        Ok(())
    }
    fn increase(&mut self, u: NodeId, v: NodeId, w: u64) -> Result<(), Error> {
        let up = self.g.increase_weight(u, v, w)?;
        self.tree.on_update(&self.g, &up);
        Ok(())
    }
    fn answer(&self, q: &Query) -> Result<Answer, Error> {
        match q {
            Query::Dist(Some(v)) => Ok(Answer::Dist(self.tree.level(*v).map(int))),
            Query::Reach(v) => Ok(Answer::Bool(self.tree.contains(*v))),
            _ => Err(unsupported(q)),
        }
    }
    fn work(&self) -> u64 {
        self.tree.work()
    }
    fn counters(&self) -> String {
        format!("tree_work={}", self.tree.work())
    }
}

struct PairRun {
    inner: MultiPairReach,
}

impl Runner for PairRun {
    fn graph(&self) -> &DecrementalGraph {
        self.inner.graph()
    }
    fn delete(&mut self, u: NodeId, v: NodeId) -> Result<(), Error> {
        self.inner.delete(u, v)
    }
    fn answer(&self, q: &Query) -> Result<Answer, Error> {
        let find = |x: NodeId, y: NodeId| (0..self.inner.pair_count()).find(|&j| self.inner.terminals(j) == (x, y));
        match q {
            Query::St => Ok(Answer::Bool(self.inner.reachable(0))),
            Query::Pair(x, y) => {
                let j = find(*x, *y).ok_or_else(|| Error::Param(format!("pair ({x}, {y}) is not maintained")))?;
                Ok(Answer::Bool(self.inner.reachable(j)))
            }
            _ => Err(unsupported(q)),
        }
    }
    fn work(&self) -> u64 {
        self.inner.work()
    }
    fn counters(&self) -> String {
        let s = self.inner.stats();
        format!("refreshes={} path_unions={} max_overlap={} max_parents={}", s.refreshes, s.path_unions, s.max_child_overlap, s.max_parents)
    }
}

struct SsrRun {
    inner: SingleSourceReach,
}

impl Runner for SsrRun {
    fn graph(&self) -> &DecrementalGraph {
        self.inner.graph()
    }
    fn delete(&mut self, u: NodeId, v: NodeId) -> Result<(), Error> {
        self.inner.delete(u, v).map(|_| ())
    }
    fn answer(&self, q: &Query) -> Result<Answer, Error> {
        match q {
            Query::Reach(v) => Ok(Answer::Bool(self.inner.query(*v))),
            _ => Err(unsupported(q)),
        }
    }
    fn work(&self) -> u64 {
        self.inner.work()
    }
    fn counters(&self) -> String {
        format!("sinks={} hop_bound={}", self.inner.sinks().len(), self.inner.hop_bound())
    }
}

struct StspRun {
    inner: ApproxSp,
}

impl Runner for StspRun {
    fn graph(&self) -> &DecrementalGraph {
        self.inner.graph()
    }
    fn delete(&mut self, u: NodeId, v: NodeId) -> Result<(), Error> {
        self.inner.delete(u, v)
    }
    fn increase(&mut self, u: NodeId, v: NodeId, w: u64) -> Result<(), Error> {
        self.inner.increase(u, v, w)
    }
    fn answer(&self, q: &Query) -> Result<Answer, Error> {
        match q {
            Query::Dist(None) => Ok(Answer::Dist(self.inner.distance().cloned())),
            _ => Err(unsupported(q)),
        }
    }
    fn work(&self) -> u64 {
        self.inner.work()
    }
    fn counters(&self) -> String {
        let s = self.inner.stats();
        format!("refreshes={} range_bumps={} hub_trees={} warnings={}", s.refreshes, s.range_bumps, s.hub_trees_built, self.inner.warnings())
    }
    fn factor(&self) -> BigRational {
        // (1 + eps / (4k + 2))^(2k + 1) <= 1 + eps; report the exact product.
        self.inner.internal_eps().pow(2 * self.inner.schedule().k as i64 + 1)
    }
}

struct SsspRun {
    inner: SingleSourceSp,
    eps: Eps,
}

impl Runner for SsspRun {
    fn graph(&self) -> &DecrementalGraph {
        self.inner.graph()
    }
    fn delete(&mut self, u: NodeId, v: NodeId) -> Result<(), Error> {
        self.inner.delete(u, v)
    }
    fn increase(&mut self, u: NodeId, v: NodeId, w: u64) -> Result<(), Error> {
        self.inner.increase(u, v, w)
    }
    fn answer(&self, q: &Query) -> Result<Answer, Error> {
        match q {
            Query::Dist(Some(v)) => Ok(Answer::Dist(self.inner.estimate(*v))),
            _ => Err(unsupported(q)),
        }
    }
    fn work(&self) -> u64 {
        self.inner.work()
    }
    fn counters(&self) -> String {
        format!("sinks={} hop_bound={}", self.inner.sinks().len(), self.inner.hop_bound())
    }
    fn factor(&self) -> BigRational {
        self.eps.pow(2)
    }
}

struct SccRun {
    inner: Scc,
    labels: Vec<NodeId>,
}

impl Runner for SccRun {
    fn graph(&self) -> &DecrementalGraph {
        self.inner.graph()
    }
    fn delete(&mut self, u: NodeId, v: NodeId) -> Result<(), Error> {
        self.inner.delete(u, v)?;
        self.labels = self.inner.partition();
        Ok(())
    }
    fn answer(&self, q: &Query) -> Result<Answer, Error> {
        match q {
            Query::Scc(v) => Ok(Answer::Id(self.labels[*v])),
            _ => Err(unsupported(q)),
        }
    }
    fn work(&self) -> u64 {
        self.inner.work()
    }
    fn counters(&self) -> String {
        let s = self.inner.stats();
        format!("components={} decompositions={} max_charges={}", self.inner.component_count(), s.decompositions, s.max_charges)
    }
}

struct DenseRun {
    inner: DenseSsr,
}

impl Runner for DenseRun {
    fn graph(&self) -> &DecrementalGraph {
        self.inner.graph()
    }
    fn delete(&mut self, u: NodeId, v: NodeId) -> Result<(), Error> {
        self.inner.delete(u, v)
    }
    fn answer(&self, q: &Query) -> Result<Answer, Error> {
        match q {
            Query::Pair(x, y) => Ok(Answer::Bool(self.inner.query(*x, *y)?)),
            _ => Err(unsupported(q)),
        }
    }
    fn work(&self) -> u64 {
        self.inner.work()
    }
    fn counters(&self) -> String {
        let s = self.inner.stats();
        format!("centers={} q_computed={} cg_edges_removed={}", self.inner.center_count(), s.q_computed, s.center_edges_removed)
    }
}

fn build_runner(trace: &Trace, cfg: &RunConfig) -> Result<Box<dyn Runner>, Error> {
    let g = trace.graph()?;
    let (n, m) = (g.n(), g.m_initial());
    let sched = || cfg.schedule(n, m);
    Ok(match cfg.algo {
        Algo::EsSsr => {
            let depth = (n as u64).saturating_mul(g.weight_cap()).max(1);
            let tree = EsTree::build(&g.view(), cfg.source, depth);
            Box::new(EsRun { g, tree })
        }
        Algo::StReach | Algo::MultiPair => {
            let pcfg = StReachConfig { schedule: sched()?, sampling: cfg.sampling, seed: cfg.seed };
            let pairs = if cfg.algo == Algo::StReach { vec![(cfg.source, cfg.sink(n))] } else { cfg.pairs(n) };
            Box::new(PairRun { inner: MultiPairReach::new(g, &pairs, &pcfg)? })
        }
        Algo::Ssr => {
            let mut scfg = SsrConfig::new(cfg.k_sinks.unwrap_or_else(|| ssr_pair_count(m as u64, n as u64, Variant::A)), cfg.seed);
            scfg.sampling = cfg.sampling;
            scfg.pair_schedule = cfg.params.as_ref().map(|_| sched()).transpose()?;
            Box::new(SsrRun { inner: SingleSourceReach::new(g, cfg.source, &scfg)? })
        }
        Algo::StspApprox => {
            let mut acfg = ApproxSpConfig::new(sched()?, cfg.eps.clone(), cfg.seed);
            acfg.sampling = cfg.sampling;
            Box::new(StspRun { inner: ApproxSp::new(g, cfg.source, cfg.sink(n), &acfg)? })
        }
        Algo::SsspApprox => {
            let scfg = SsspConfig {
                k_sinks: cfg.k_sinks.unwrap_or(1.0),
                eps: cfg.eps.clone(),
                pair_schedule: sched()?,
                sampling: cfg.sampling,
                seed: cfg.seed,
            };
            let eps = cfg.eps.clone();
            Box::new(SsspRun { inner: SingleSourceSp::new(g, cfg.source, &scfg)?, eps })
        }
        Algo::Scc => {
            let inner = Scc::new(g, EngineKind::Es, cfg.seed)?;
            let labels = inner.partition();
            Box::new(SccRun { inner, labels })
        }
        Algo::DenseSsr => {
            let dcfg = DenseConfig { schedule: sched()?, sampling: cfg.sampling, seed: cfg.seed };
            Box::new(DenseRun { inner: DenseSsr::new(g, &cfg.terminals(n), &dcfg)? })
        }
    })
}

fn default_queries(cfg: &RunConfig, n: usize) -> Vec<Query> {
    match cfg.algo {
        Algo::EsSsr | Algo::SsspApprox => (0..n).map(|v| Query::Dist(Some(v))).collect(),
        Algo::StReach => vec![Query::St],
        Algo::MultiPair => cfg.pairs(n).into_iter().map(|(x, y)| Query::Pair(x, y)).collect(),
        Algo::Ssr => (0..n).map(Query::Reach).collect(),
        Algo::StspApprox => vec![Query::Dist(None)],
        Algo::Scc => (0..n).map(Query::Scc).collect(),
        Algo::DenseSsr => {
            let t = cfg.terminals(n);
            t.iter().flat_map(|&x| t.iter().filter(move |&&y| y != x).map(move |&y| Query::Pair(x, y))).collect()
        }
    }
}

/// Oracle answers computed from scratch on the current graph.
struct OracleCache<'a> {
    g: &'a DecrementalGraph,
    bfs: HashMap<NodeId, Vec<u64>>,
    dij: HashMap<NodeId, Vec<u64>>,
    scc: Option<Vec<NodeId>>,
}

impl<'a> OracleCache<'a> {
    fn new(g: &'a DecrementalGraph) -> Self {
        OracleCache { g, bfs: HashMap::new(), dij: HashMap::new(), scc: None }
    }

    fn reach(&mut self, x: NodeId, y: NodeId) -> bool {
        let g = self.g;
        self.bfs.entry(x).or_insert_with(|| oracle::bfs_dist(&g.view(), x))[y] != INF
    }

    fn dist(&mut self, x: NodeId, y: NodeId) -> Option<u64> {
        let g = self.g;
        let d = self.dij.entry(x).or_insert_with(|| oracle::dijkstra_dist(&g.view(), x))[y];
        (d != INF).then_some(d)
    }

    fn answer(&mut self, q: &Query, cfg: &RunConfig) -> Answer {
        let n = self.g.n();
        match q {
            Query::St => Answer::Bool(self.reach(cfg.source, cfg.sink(n))),
            Query::Reach(v) => Answer::Bool(self.reach(cfg.source, *v)),
            Query::Pair(x, y) => Answer::Bool(x == y || self.reach(*x, *y)),
            Query::Dist(v) => Answer::Dist(self.dist(cfg.source, v.unwrap_or(cfg.sink(n))).map(int)),
            Query::Scc(v) => {
                let g = self.g;
                Answer::Id(self.scc.get_or_insert_with(|| oracle::scc_partition(&g.view()))[*v])
            }
        }
    }
}

fn agrees(answer: &Answer, truth: &Answer, factor: &BigRational) -> bool {
    match (answer, truth) {
        (Answer::Dist(Some(a)), Answer::Dist(Some(t))) => a >= t && a <= &(t * factor),
        _ => answer == truth,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CsvRow {
    pub update_idx: usize,
    pub op: String,
    pub answer: String,
    pub oracle: String,
    pub work_total: u64,
    pub notes: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub update_idx: usize,
    pub line: usize,
    pub op: String,
    pub query: String,
    pub answer: String,
    pub oracle: String,
}

#[derive(Clone, Debug)]
pub struct ReplayReport {
    pub rows: Vec<CsvRow>,
    pub mismatch: Option<Mismatch>,
    pub updates: usize,
    pub checks: u64,
    pub elapsed_ms: u128,
}

impl ReplayReport {
    pub fn csv(&self) -> String {
        let mut s = format!("{CSV_VERSION_LINE}\n{CSV_HEADER}\n");
        for r in &self.rows {
            s.push_str(&format!("{},{},{},{},{},{}\n", r.update_idx, r.op, r.answer, r.oracle, r.work_total, r.notes));
        }
        s
    }
}

/// Replays a trace. A verification mismatch stops the replay and is
/// reported in [`ReplayReport::mismatch`]; other failures are errors.
pub fn replay(trace: &Trace, cfg: &RunConfig) -> Result<ReplayReport, Error> {
    let start = Instant::now();
    let mut runner = build_runner(trace, cfg)?;
    let mut queries: Vec<Query> = Vec::new();
    let explicit = trace.ops.iter().any(|(_, op)| matches!(op, Op::Query(_)));
    if !explicit {
        queries = default_queries(cfg, trace.n);
    }
    let mut report = ReplayReport { rows: Vec::new(), mismatch: None, updates: 0, checks: 0, elapsed_ms: 0 };
    let total = trace.update_count();
    let evaluate = |runner: &dyn Runner, qs: &[Query], idx: usize, line: usize, op: &str, report: &mut ReplayReport| -> Result<bool, Error> {
        let check = cfg.verify && (idx.is_multiple_of(cfg.verify_every.max(1)) || idx == total);
        let mut cache = OracleCache::new(runner.graph());
        let factor = runner.factor();
        let work = runner.work();
        let counters = if cfg.counters { format!(" [{}]", runner.counters()) } else { String::new() };
        for q in qs {
            let a = runner.answer(q)?;
            let (oracle_text, bad) = if check {
                let t = cache.answer(q, cfg);
                report.checks += 1;
                let bad = !agrees(&a, &t, &factor);
                (t.to_string(), bad)
            } else {
                ("-".to_string(), false)
            };
            report.rows.push(CsvRow {
                update_idx: idx,
                op: op.to_string(),
                answer: a.to_string(),
                oracle: oracle_text.clone(),
                work_total: work,
                notes: format!("{q}{counters}"),
            });
            if bad {
                report.mismatch = Some(Mismatch {
                    update_idx: idx,
                    line,
                    op: op.to_string(),
                    query: q.to_string(),
                    answer: a.to_string(),
                    oracle: oracle_text,
                });
                return Ok(false);
            }
        }
        Ok(true)
    };
    let mut ok = evaluate(runner.as_ref(), &queries, 0, 0, "init", &mut report)?;
    let mut idx = 0;
    for (line, op) in &trace.ops {
        if !ok {
            break;
        }
        match op {
            Op::Query(q) => {
                if !queries.contains(q) {
                    queries.push(q.clone());
                }
                ok = evaluate(runner.as_ref(), std::slice::from_ref(q), idx, *line, &op.to_string(), &mut report)?;
            }
            Op::Delete(u, v) => {
                runner.delete(*u, *v).map_err(|e| at_line(e, *line))?;
                idx += 1;
                ok = evaluate(runner.as_ref(), &queries, idx, *line, &op.to_string(), &mut report)?;
            }
            Op::Increase(u, v, w) => {
                runner.increase(*u, *v, *w).map_err(|e| at_line(e, *line))?;
                idx += 1;
                ok = evaluate(runner.as_ref(), &queries, idx, *line, &op.to_string(), &mut report)?;
            }
        }
    }
    report.updates = idx;
    report.elapsed_ms = start.elapsed().as_millis();
    Ok(report)
}

fn at_line(e: Error, line: usize) -> Error {
    match e {
        Error::Graph(g) if line > 0 => Error::Trace { line, msg: g.to_string() },
        other => other,
    }
}

/// Command-line front end for the `dgtrace` binary.
#[derive(Debug, Parser)]
#[command(name = "dgtrace", about = "Generate and replay decremental graph traces with oracle verification")]
pub struct Cli {
    /// Algorithm to replay.
    #[arg(long, value_enum)]
    pub algo: Option<Algo>,
    /// Trace file to replay (or to write with --generate).
    #[arg(long)]
    pub trace: Option<std::path::PathBuf>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Accuracy, as a decimal or a fraction such as 1/20.
    #[arg(long, default_value = "0.5")]
    pub eps: String,
    /// Check every answer against the oracles.
    #[arg(long)]
    pub verify: bool,
    /// Check only every K-th update (and the last one).
    #[arg(long, default_value_t = 1)]
    pub verify_every: usize,
    /// Append structure counters to the notes column.
    #[arg(long)]
    pub counters: bool,
    /// Explicit hierarchy, e.g. k=2,b=4:2,c=8:4.
    #[arg(long)]
    pub params: Option<String>,
    /// Print the parameter schedule and exit.
    #[arg(long)]
    pub explain_params: bool,
    /// CSV output path (stdout if absent).
    #[arg(long)]
    pub out: Option<std::path::PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub source: NodeId,
    /// Sink for st-reach and stsp-approx (default n - 1).
    #[arg(long)]
    pub sink: Option<NodeId>,
    /// Pairs for multi-pair, e.g. 0-5,3-7.
    #[arg(long)]
    pub pairs: Option<String>,
    /// Terminals for dense-ssr, e.g. 0,1,2.
    #[arg(long)]
    pub terminals: Option<String>,
    /// Sink count parameter for ssr and sssp-approx.
    #[arg(long)]
    pub k_sinks: Option<f64>,
    /// Sampling constant a.
    #[arg(long, default_value_t = 2.0)]
    pub a: f64,
    /// Generate a trace with this model instead of replaying.
    #[arg(long, value_enum)]
    pub generate: Option<Model>,
    #[arg(long, default_value_t = 16)]
    pub n: usize,
    #[arg(long, default_value_t = 32)]
    pub m: usize,
    #[arg(long, default_value_t = 1)]
    pub max_weight: u64,
}

fn parse_list(s: &str) -> Result<Vec<NodeId>, Error> {
    s.split(',').map(|x| x.trim().parse().map_err(|_| Error::Param(format!("bad node '{x}'")))).collect()
}

fn parse_pairs(s: &str) -> Result<Vec<(NodeId, NodeId)>, Error> {
    s.split(',')
        .map(|p| {
            let (a, b) = p.split_once('-').ok_or_else(|| Error::Param(format!("bad pair '{p}', expected x-y")))?;
            Ok((parse_list(a)?[0], parse_list(b)?[0]))
        })
        .collect()
}

impl Cli {
    pub fn run_config(&self, algo: Algo) -> Result<RunConfig, Error> {
        let mut cfg = RunConfig::new(algo, self.seed);
        cfg.eps = self.eps.parse()?;
        cfg.verify = self.verify;
        cfg.verify_every = self.verify_every;
        cfg.counters = self.counters;
        cfg.params = self.params.as_deref().map(str::parse).transpose()?;
        cfg.source = self.source;
        cfg.sink = self.sink;
        cfg.pairs = self.pairs.as_deref().map(parse_pairs).transpose()?.unwrap_or_default();
        cfg.terminals = self.terminals.as_deref().map(parse_list).transpose()?.unwrap_or_default();
        cfg.k_sinks = self.k_sinks;
        cfg.sampling.a = self.a;
        Ok(cfg)
    }

    fn repro(&self) -> String {
        let algo = self.algo.and_then(|a| clap::ValueEnum::to_possible_value(&a)).map(|v| v.get_name().to_string());
        let mut s = format!("dgtrace --algo {} --seed {} --eps {} --verify", algo.unwrap_or_default(), self.seed, self.eps);
        if let Some(t) = &self.trace {
            s.push_str(&format!(" --trace {}", t.display()));
        }
        if let Some(p) = &self.params {
            s.push_str(&format!(" --params {p}"));
        }
        s
    }
}

fn write_out(path: &Option<std::path::PathBuf>, text: &str) -> Result<(), Error> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Runs the CLI and returns the process exit code.
pub fn run_cli(cli: &Cli) -> Result<i32, Error> {
    if let Some(model) = cli.generate {
        let t = generate(cli.n, cli.m, cli.max_weight, model, cli.seed)?;
        write_out(&cli.out.clone().or_else(|| cli.trace.clone()), &t.to_text())?;
        return Ok(0);
    }
    let algo = cli.algo.ok_or_else(|| Error::Param("--algo is required".into()))?;
    let cfg = cli.run_config(algo)?;
    let trace = match &cli.trace {
        Some(p) => Trace::parse(&std::fs::read_to_string(p)?)?,
        None if cli.explain_params => Trace { n: cli.n, max_weight: 1, edges: Vec::new(), ops: Vec::new() },
        None => return Err(Error::Param("--trace is required".into())),
    };
    if cli.explain_params {
        let m = if cli.trace.is_some() { trace.edges.len() } else { cli.m };
        write_out(&None, &cfg.explain(trace.n, m)?)?;
        return Ok(0);
    }
    let report = replay(&trace, &cfg)?;
    write_out(&cli.out, &report.csv())?;
    eprintln!("replay: {} updates, {} checks, {} ms", report.updates, report.checks, report.elapsed_ms);
    if let Some(mm) = &report.mismatch {
        eprintln!(
            "mismatch after update {} (trace line {}: {}): {} answered {}, oracle {}",
            mm.update_idx, mm.line, mm.op, mm.query, mm.answer, mm.oracle
        );
        eprintln!("reproduce: {}", cli.repro());
        return Ok(1);
    }
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_and_errors() {
        let text = "3 2 1\ne 0 1 1\ne 1 2 1\nq st\nd 0 1\n";
        let t = Trace::parse(text).unwrap();
        assert_eq!(t.ops.len(), 2);
        assert_eq!(Trace::parse(&t.to_text()).unwrap().edges, t.edges);
        assert!(matches!(Trace::parse("3 2 1\ne 0 1 1\ne 1 9 1\n"), Err(Error::Trace { line: 3, .. })));
        assert!(matches!(Trace::parse("3 1 1\ne 0 1 1\nx 1\n"), Err(Error::Trace { line: 3, .. })));
    }

    #[test]
    fn path_model_and_determinism() {
        let t = generate(3, 2, 1, Model::Path, 9).unwrap();
        assert_eq!(t.update_count(), 2);
        assert_eq!(generate(20, 60, 8, Model::Uniform, 4).unwrap().to_text(), generate(20, 60, 8, Model::Uniform, 4).unwrap().to_text());
        assert!(generate(3, 7, 1, Model::Uniform, 1).is_err());
        let w = generate(10, 30, 5, Model::CycleHeavy, 2).unwrap();
        assert!(w.ops.iter().all(|(_, op)| !matches!(op, Op::Increase(_, _, x) if *x > 5)));
    }

    #[test]
    fn st_reach_replay_on_path() {
        let t = Trace::parse("3 2 1\ne 0 1 1\ne 1 2 1\nq st\nd 0 1\n").unwrap();
        let r = replay(&t, &RunConfig::new(Algo::StReach, 1)).unwrap();
        assert!(r.mismatch.is_none());
        assert_eq!(r.rows.last().unwrap().answer, "no");
    }

    #[test]
    fn params_parse() {
        let p: ParamOverride = "k=2,b=4:2,c=8:4".parse().unwrap();
        assert_eq!((p.k, p.b.clone(), p.c.clone()), (2, vec![4, 2], vec![8, 4]));
        assert!("k=2,c=8".parse::<ParamOverride>().is_err());
        let mut cfg = RunConfig::new(Algo::StReach, 1);
        cfg.params = Some(p);
        assert!(cfg.explain(64, 128).unwrap().starts_with("override: k=2,b=4:2,c=8:4\n"));
    }
}
