//! Signed digraph data model: parsing, connectivity, simple-cycle
//! enumeration, primitivity and nonpowerfulness tests.
//!
//! Vertices are 1-based everywhere in the public API, matching the usual
//! v_1..v_n labelling of the extremal families. Loops are permitted, multiple
//! arcs between the same ordered pair are not.

use std::collections::BTreeSet;
use std::fmt;

use num_integer::gcd;
use serde::Serialize;
use thiserror::Error;

use crate::boolmat::BoolMatrix;
use crate::sign::{Sign, SignMatrix};

/// Default ceiling on the number of simple cycles the catalog will enumerate.
pub const DEFAULT_CYCLE_CAP: usize = 1_000_000;

/// Sign carried by a single arc: `+1` or `-1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ArcSign {
    Plus,
    Minus,
}

impl ArcSign {
    pub fn value(self) -> i8 {
        match self {
            ArcSign::Plus => 1,
            ArcSign::Minus => -1,
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn mul(self, other: ArcSign) -> ArcSign {
        if self == other {
            ArcSign::Plus
        } else {
            ArcSign::Minus
        }
    }

    pub fn flipped(self) -> ArcSign {
        match self {
            ArcSign::Plus => ArcSign::Minus,
            ArcSign::Minus => ArcSign::Plus,
        }
    }

    pub fn to_sign(self) -> Sign {
        match self {
            ArcSign::Plus => Sign::Plus,
            ArcSign::Minus => Sign::Minus,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            ArcSign::Plus => '+',
            ArcSign::Minus => '-',
        }
    }
}

impl fmt::Display for ArcSign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Arc {
    pub from: usize,
    pub to: usize,
    pub sign: ArcSign,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DigraphError {
    #[error("vertex count must be at least 1")]
    EmptyOrder,
    #[error("arc {from}->{to} has an endpoint outside 1..={n}")]
    VertexOutOfRange { from: usize, to: usize, n: usize },
    #[error("duplicate arc {from}->{to} (multiple arcs are not permitted)")]
    DuplicateArc { from: usize, to: usize },
    #[error("cycle enumeration exceeded the cap of {cap} simple cycles")]
    CycleCapExceeded { cap: usize },
    #[error("digraph is not primitive: {reason}")]
    NotPrimitive { reason: String },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("missing vertex-count header line")]
    MissingHeader,
    #[error("line {line}: vertex-count line must be a single positive integer")]
    MalformedHeader { line: usize },
    #[error("line {line}: expected \"u v s\" with 1-based integers and s in {{+,-}}")]
    MalformedArc { line: usize },
    #[error("line {line}: sign token must be '+' or '-'")]
    BadSign { line: usize },
    #[error("line {line}: vertex {vertex} out of range 1..={n}")]
    VertexOutOfRange { line: usize, vertex: usize, n: usize },
    #[error("line {line}: duplicate arc {from}->{to}")]
    DuplicateArc { line: usize, from: usize, to: usize },
}

/// A signed digraph on vertices `1..=n`.
#[derive(Clone, PartialEq, Eq)]
pub struct SignedDigraph {
    n: usize,
    arcs: Vec<Arc>,
    out: Vec<Vec<(usize, ArcSign)>>,
    inn: Vec<Vec<(usize, ArcSign)>>,
}

impl SignedDigraph {
    pub fn new(
        n: usize,
        arcs: impl IntoIterator<Item = (usize, usize, ArcSign)>,
    ) -> Result<SignedDigraph, DigraphError> {
        if n == 0 {
            return Err(DigraphError::EmptyOrder);
        }
        let mut list: Vec<Arc> = Vec::new();
        let mut seen = BTreeSet::new();
        for (from, to, sign) in arcs {
            if from == 0 || to == 0 || from > n || to > n {
                return Err(DigraphError::VertexOutOfRange { from, to, n });
            }
            if !seen.insert((from, to)) {
                return Err(DigraphError::DuplicateArc { from, to });
            }
            list.push(Arc { from, to, sign });
        }
        list.sort_by_key(|a| (a.from, a.to));
        let mut out = vec![Vec::new(); n + 1];
        let mut inn = vec![Vec::new(); n + 1];
        for a in &list {
            out[a.from].push((a.to, a.sign));
            inn[a.to].push((a.from, a.sign));
        }
        Ok(SignedDigraph {
            n,
            arcs: list,
            out,
            inn,
        })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn out_neighbors(&self, v: usize) -> &[(usize, ArcSign)] {
        &self.out[v]
    }

    pub fn arc_sign(&self, from: usize, to: usize) -> Option<ArcSign> {
        self.out[from]
            .iter()
            .find(|(w, _)| *w == to)
            .map(|(_, s)| *s)
    }

    /// Same arc set with replacement signs, given in canonical arc order.
    pub fn with_signs(&self, signs: &[ArcSign]) -> SignedDigraph {
        assert_eq!(signs.len(), self.arcs.len());
        let arcs = self
            .arcs
            .iter()
            .zip(signs)
            .map(|(a, &s)| (a.from, a.to, s));
        SignedDigraph::new(self.n, arcs).expect("relabelled signs preserve validity")
    }

    pub fn arc_signs(&self) -> Vec<ArcSign> {
        self.arcs.iter().map(|a| a.sign).collect()
    }

    /// Sign of the simple cycle through `vertices` (closing arc implied);
    /// `None` if some arc is absent.
    pub fn cycle_sign(&self, vertices: &[usize]) -> Option<ArcSign> {
        let mut sign = ArcSign::Plus;
        for i in 0..vertices.len() {
            let from = vertices[i];
            let to = vertices[(i + 1) % vertices.len()];
            sign = sign.mul(self.arc_sign(from, to)?);
        }
        Some(sign)
    }

    /// Parse the edge-list document format: first nonblank line is `n`, each
    /// following nonblank line is `u v s` with `s` in `{+,-}`; lines starting
    /// with `#` are comments.
    pub fn parse(text: &str) -> Result<SignedDigraph, ParseError> {
        let mut n: Option<usize> = None;
        let mut arcs: Vec<(usize, usize, ArcSign)> = Vec::new();
        let mut seen: BTreeSet<(usize, usize)> = BTreeSet::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            if raw.trim().is_empty() || raw.starts_with('#') {
                continue;
            }
            let tokens: Vec<&str> = raw.split_whitespace().collect();
            match n {
                None => {
                    if tokens.len() != 1 {
                        return Err(ParseError::MalformedHeader { line });
                    }
                    let count: usize = tokens[0]
                        .parse()
                        .map_err(|_| ParseError::MalformedHeader { line })?;
                    if count == 0 {
                        return Err(ParseError::MalformedHeader { line });
                    }
                    n = Some(count);
                }
                Some(order) => {
                    if tokens.len() != 3 {
                        return Err(ParseError::MalformedArc { line });
                    }
                    let from: usize = tokens[0]
                        .parse()
                        .map_err(|_| ParseError::MalformedArc { line })?;
                    let to: usize = tokens[1]
                        .parse()
                        .map_err(|_| ParseError::MalformedArc { line })?;
                    let sign = match tokens[2] {
                        "+" => ArcSign::Plus,
                        "-" => ArcSign::Minus,
                        _ => return Err(ParseError::BadSign { line }),
                    };
                    for &v in &[from, to] {
                        if v == 0 || v > order {
                            return Err(ParseError::VertexOutOfRange {
                                line,
                                vertex: v,
                                n: order,
                            });
                        }
                    }
                    if !seen.insert((from, to)) {
                        return Err(ParseError::DuplicateArc { line, from, to });
                    }
                    arcs.push((from, to, sign));
                }
            }
        }
        let n = n.ok_or(ParseError::MissingHeader)?;
        Ok(SignedDigraph::new(n, arcs).expect("line-level validation covers constructor errors"))
    }

    /// Canonical edge-list rendering: header, then arcs sorted by (from, to).
    pub fn to_edge_list(&self) -> String {
        let mut s = format!("{}\n", self.n);
        for a in &self.arcs {
            s.push_str(&format!("{} {} {}\n", a.from, a.to, a.sign));
        }
        s
    }

    pub fn adjacency_bool(&self) -> BoolMatrix {
        let mut m = BoolMatrix::zero(self.n);
        for a in &self.arcs {
            m.set(a.from - 1, a.to - 1);
        }
        m
    }

    pub fn adjacency_sign(&self) -> SignMatrix {
        let mut m = SignMatrix::zero(self.n);
        for a in &self.arcs {
            m.set(a.from - 1, a.to - 1, a.sign.to_sign());
        }
        m
    }

    /// Tarjan strongly connected components over the subgraph induced on
    /// `min_vertex..=n`, optionally ignoring loops. Components come back as
    /// sorted vertex lists.
    fn sccs_from(&self, min_vertex: usize, skip_loops: bool) -> Vec<Vec<usize>> {
        let n = self.n;
        let mut index = vec![usize::MAX; n + 1];
        let mut low = vec![0usize; n + 1];
        let mut on_stack = vec![false; n + 1];
        let mut stack: Vec<usize> = Vec::new();
        let mut next_index = 0usize;
        let mut comps: Vec<Vec<usize>> = Vec::new();

        // iterative Tarjan: (vertex, next out-neighbor position)
        let mut call: Vec<(usize, usize)> = Vec::new();
        for root in min_vertex..=n {
            if index[root] != usize::MAX {
                continue;
            }
            call.push((root, 0));
            while let Some(&(v, pos)) = call.last() {
                if pos == 0 {
                    index[v] = next_index;
                    low[v] = next_index;
                    next_index += 1;
                    stack.push(v);
                    on_stack[v] = true;
                }
                let mut next_child = None;
                let mut p = pos;
                while p < self.out[v].len() {
                    let (w, _) = self.out[v][p];
                    p += 1;
                    if w < min_vertex || (skip_loops && w == v) {
                        continue;
                    }
                    if index[w] == usize::MAX {
                        next_child = Some(w);
                        break;
                    } else if on_stack[w] {
                        low[v] = low[v].min(index[w]);
                    }
                }
                call.last_mut().expect("loop condition").1 = p;
                if let Some(w) = next_child {
                    call.push((w, 0));
                    continue;
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    while let Some(w) = stack.pop() {
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    comps.push(comp);
                }
                call.pop();
                if let Some(&mut (parent, _)) = call.last_mut() {
                    low[parent] = low[parent].min(low[v]);
                }
            }
        }
        comps
    }

    pub fn is_strongly_connected(&self) -> bool {
        self.sccs_from(1, false).len() == 1
    }

    /// Shortest directed path length from `u` to `v`; `Some(0)` when `u == v`,
    /// `None` when unreachable.
    pub fn distance(&self, u: usize, v: usize) -> Option<u64> {
        if u == v {
            return Some(0);
        }
        let mut dist = vec![u64::MAX; self.n + 1];
        dist[u] = 0;
        let mut queue = std::collections::VecDeque::new();
        queue.push_back(u);
        while let Some(x) = queue.pop_front() {
            for &(w, _) in &self.out[x] {
                if dist[w] == u64::MAX {
                    dist[w] = dist[x] + 1;
                    if w == v {
                        return Some(dist[w]);
                    }
                    queue.push_back(w);
                }
            }
        }
        None
    }

    /// Enumerate every simple directed cycle, each once with its minimal
    /// vertex first (Johnson's algorithm, loops handled directly).
    pub fn cycle_catalog(&self, max_cycles: usize) -> Result<CycleCatalog, DigraphError> {
        assert!(max_cycles >= 1);
        let mut cycles: Vec<SimpleCycle> = Vec::new();
        let push = |vertices: Vec<usize>, sign: ArcSign, cycles: &mut Vec<SimpleCycle>| {
            if cycles.len() >= max_cycles {
                return Err(DigraphError::CycleCapExceeded { cap: max_cycles });
            }
            cycles.push(SimpleCycle { vertices, sign });
            Ok(())
        };

        for v in 1..=self.n {
            if let Some(sign) = self.arc_sign(v, v) {
                push(vec![v], sign, &mut cycles)?;
            }
        }

        for start in 1..=self.n {
            let comp = self
                .sccs_from(start, true)
                .into_iter()
                .find(|c| c.contains(&start))
                .unwrap_or_default();
            if comp.len() < 2 {
                continue;
            }
            let mut in_comp = vec![false; self.n + 1];
            for &v in &comp {
                in_comp[v] = true;
            }
            let mut johnson = Johnson {
                graph: self,
                start,
                in_comp,
                blocked: vec![false; self.n + 1],
                block_list: vec![Vec::new(); self.n + 1],
                path: Vec::new(),
                cap: max_cycles,
                cycles: &mut cycles,
            };
            johnson.circuit(start)?;
        }

        cycles.sort_by(|a, b| {
            a.len()
                .cmp(&b.len())
                .then_with(|| a.vertices.cmp(&b.vertices))
        });
        let mut lengths = BTreeSet::new();
        let mut on_lengths = vec![BTreeSet::new(); self.n + 1];
        for c in &cycles {
            lengths.insert(c.len());
            for &v in &c.vertices {
                on_lengths[v].insert(c.len());
            }
        }
        Ok(CycleCatalog {
            cycles,
            lengths,
            on_lengths,
        })
    }

    /// Primitive iff strongly connected and the cycle lengths have gcd 1.
    pub fn is_primitive(&self) -> Result<bool, DigraphError> {
        let cat = self.cycle_catalog(DEFAULT_CYCLE_CAP)?;
        Ok(self.is_primitive_with(&cat))
    }

    pub fn is_primitive_with(&self, cat: &CycleCatalog) -> bool {
        self.is_strongly_connected() && cat.gcd_of_lengths() == 1
    }

    /// For primitive inputs: nonpowerful iff a distinguished cycle pair
    /// exists. Refuses non-primitive inputs.
    pub fn is_nonpowerful(&self) -> Result<bool, DigraphError> {
        let cat = self.cycle_catalog(DEFAULT_CYCLE_CAP)?;
        self.is_nonpowerful_with(&cat)
    }

    pub fn is_nonpowerful_with(&self, cat: &CycleCatalog) -> Result<bool, DigraphError> {
        if !self.is_primitive_with(cat) {
            return Err(DigraphError::NotPrimitive {
                reason: self.non_primitive_reason(cat),
            });
        }
        Ok(cat.find_distinguished_pair().is_some())
    }

    pub fn non_primitive_reason(&self, cat: &CycleCatalog) -> String {
        if !self.is_strongly_connected() {
            "not strongly connected".to_string()
        } else {
            format!("gcd of cycle lengths = {}", cat.gcd_of_lengths())
        }
    }

    fn initial_colors(&self) -> Vec<usize> {
        let keys: Vec<(usize, usize, bool)> = (1..=self.n)
            .map(|v| {
                (
                    self.out[v].len(),
                    self.inn[v].len(),
                    self.arc_sign(v, v).is_some(),
                )
            })
            .collect();
        let mut sorted = keys.clone();
        sorted.sort_unstable();
        sorted.dedup();
        keys.iter()
            .map(|key| sorted.binary_search(key).unwrap())
            .collect()
    }

    fn refine_colors(&self, mut colors: Vec<usize>) -> Vec<usize> {
        loop {
            let old_count = colors.iter().collect::<BTreeSet<_>>().len();
            let mut sigs: Vec<(usize, Vec<usize>, Vec<usize>)> = Vec::with_capacity(self.n);
            for v in 1..=self.n {
                let mut outc: Vec<usize> =
                    self.out[v].iter().map(|&(w, _)| colors[w - 1]).collect();
                outc.sort_unstable();
                let mut inc: Vec<usize> =
                    self.inn[v].iter().map(|&(w, _)| colors[w - 1]).collect();
                inc.sort_unstable();
                sigs.push((colors[v - 1], outc, inc));
            }
            let mut distinct: Vec<&(usize, Vec<usize>, Vec<usize>)> = sigs.iter().collect();
            distinct.sort();
            distinct.dedup();
            let next: Vec<usize> = sigs
                .iter()
                .map(|sig| distinct.binary_search(&sig).unwrap())
                .collect();
            let new_count = distinct.len();
            colors = next;
            if new_count == old_count {
                return colors;
            }
        }
    }

    fn canon_leaf(&self, colors: &[usize]) -> Vec<(usize, usize)> {
        // discrete partition: relabel vertex v to its color rank + 1
        let mut label = vec![0usize; self.n + 1];
        let mut order: Vec<usize> = (1..=self.n).collect();
        order.sort_by_key(|&v| colors[v - 1]);
        for (rank, &v) in order.iter().enumerate() {
            label[v] = rank + 1;
        }
        let mut arcs: Vec<(usize, usize)> = self
            .arcs
            .iter()
            .map(|a| (label[a.from], label[a.to]))
            .collect();
        arcs.sort_unstable();
        arcs
    }

    fn canon_search(&self, colors: Vec<usize>, best: &mut Option<Vec<(usize, usize)>>) {
        // locate the smallest non-singleton color class
        let mut class: Vec<usize> = Vec::new();
        let mut target_color = usize::MAX;
        for c in 0..self.n {
            let members: Vec<usize> = (1..=self.n).filter(|&v| colors[v - 1] == c).collect();
            if members.len() >= 2 {
                target_color = c;
                class = members;
                break;
            }
        }
        if target_color == usize::MAX {
            let candidate = self.canon_leaf(&colors);
            match best {
                None => *best = Some(candidate),
                Some(b) => {
                    if candidate < *b {
                        *best = Some(candidate);
                    }
                }
            }
            return;
        }
        for &v in &class {
            let mut next: Vec<usize> = colors.iter().map(|&c| c * 2 + 1).collect();
            next[v - 1] = colors[v - 1] * 2;
            self.canon_search(self.refine_colors(next), best);
        }
    }

    /// Canonical arc list of the underlying (unsigned) digraph: the
    /// lexicographically smallest relabelled arc set over all vertex orderings
    /// compatible with iterated degree refinement. Two digraphs have equal
    /// canonical forms iff their underlying digraphs are isomorphic.
    pub fn canonical_form(&self) -> Vec<(usize, usize)> {
        let colors = self.refine_colors(self.initial_colors());
        let mut best = None;
        self.canon_search(colors, &mut best);
        best.expect("canonical search yields at least one leaf")
    }

    pub fn is_isomorphic_underlying(&self, other: &SignedDigraph) -> bool {
        if self.n != other.n || self.arcs.len() != other.arcs.len() {
            return false;
        }
        let degrees = |g: &SignedDigraph| {
            let mut d: Vec<(usize, usize)> =
                (1..=g.n).map(|v| (g.out[v].len(), g.inn[v].len())).collect();
            d.sort_unstable();
            d
        };
        if degrees(self) != degrees(other) {
            return false;
        }
        self.canonical_form() == other.canonical_form()
    }
}

impl fmt::Debug for SignedDigraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SignedDigraph(n={}, arcs=[", self.n)?;
        for (i, a) in self.arcs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}{}->{}", a.sign, a.from, a.to)?;
        }
        write!(f, "])")
    }
}

struct Johnson<'a> {
    graph: &'a SignedDigraph,
    start: usize,
    in_comp: Vec<bool>,
    blocked: Vec<bool>,
    block_list: Vec<Vec<usize>>,
    path: Vec<usize>,
    cap: usize,
    cycles: &'a mut Vec<SimpleCycle>,
}

impl Johnson<'_> {
    fn unblock(&mut self, v: usize) {
        let mut todo = vec![v];
        while let Some(x) = todo.pop() {
            self.blocked[x] = false;
            for w in std::mem::take(&mut self.block_list[x]) {
                if self.blocked[w] {
                    todo.push(w);
                }
            }
        }
    }

    fn circuit(&mut self, v: usize) -> Result<bool, DigraphError> {
        let mut found = false;
        self.blocked[v] = true;
        self.path.push(v);
        for idx in 0..self.graph.out[v].len() {
            let (w, _) = self.graph.out[v][idx];
            if w == v || !self.in_comp[w] || w < self.start {
                continue;
            }
            if w == self.start {
                if self.cycles.len() >= self.cap {
                    return Err(DigraphError::CycleCapExceeded { cap: self.cap });
                }
                let vertices = self.path.clone();
                let sign = self
                    .graph
                    .cycle_sign(&vertices)
                    .expect("path arcs exist by construction");
                self.cycles.push(SimpleCycle { vertices, sign });
                found = true;
            } else if !self.blocked[w] && self.circuit(w)? {
                found = true;
            }
        }
        if found {
            self.unblock(v);
        } else {
            for idx in 0..self.graph.out[v].len() {
                let (w, _) = self.graph.out[v][idx];
                if w == v || !self.in_comp[w] || w < self.start {
                    continue;
                }
                if !self.block_list[w].contains(&v) {
                    self.block_list[w].push(v);
                }
            }
        }
        self.path.pop();
        Ok(found)
    }
}

/// A simple directed cycle, stored with its minimal vertex first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SimpleCycle {
    pub vertices: Vec<usize>,
    pub sign: ArcSign,
}

impl SimpleCycle {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn is_odd(&self) -> bool {
        self.len() % 2 == 1
    }

    pub fn is_negative(&self) -> bool {
        self.sign == ArcSign::Minus
    }
}

/// Uniformity of signs across all cycles of one length.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClassSign {
    Uniform(ArcSign),
    Mixed,
}

/// All simple cycles of a digraph together with the length set C(S) and the
/// per-vertex cycle-length memberships.
#[derive(Clone, Debug)]
pub struct CycleCatalog {
    cycles: Vec<SimpleCycle>,
    lengths: BTreeSet<usize>,
    on_lengths: Vec<BTreeSet<usize>>,
}

impl CycleCatalog {
    pub fn cycles(&self) -> &[SimpleCycle] {
        &self.cycles
    }

    /// The cycle length set C(S).
    pub fn lengths(&self) -> &BTreeSet<usize> {
        &self.lengths
    }

    pub fn lengths_vec(&self) -> Vec<usize> {
        self.lengths.iter().copied().collect()
    }

    pub fn gcd_of_lengths(&self) -> usize {
        self.lengths.iter().fold(0usize, |g, &l| gcd(g, l))
    }

    /// Lengths p such that vertex `v` lies on some simple p-cycle.
    pub fn vertex_lengths(&self, v: usize) -> &BTreeSet<usize> {
        &self.on_lengths[v]
    }

    pub fn cycles_of_length(&self, len: usize) -> impl Iterator<Item = &SimpleCycle> {
        self.cycles.iter().filter(move |c| c.len() == len)
    }

    pub fn class_sign(&self, len: usize) -> Option<ClassSign> {
        let mut iter = self.cycles_of_length(len);
        let first = iter.next()?.sign;
        for c in iter {
            if c.sign != first {
                return Some(ClassSign::Mixed);
            }
        }
        Some(ClassSign::Uniform(first))
    }

    /// A pair of cycles certifying nonpowerfulness: either an odd cycle with a
    /// negative even cycle, or two odd cycles of opposite sign. Deterministic:
    /// earliest witnesses in catalog order.
    pub fn find_distinguished_pair(&self) -> Option<(&SimpleCycle, &SimpleCycle)> {
        let mut first_odd = None;
        let mut first_neg_even = None;
        let mut first_pos_odd = None;
        let mut first_neg_odd = None;
        for c in &self.cycles {
            if c.is_odd() {
                first_odd.get_or_insert(c);
                if c.is_negative() {
                    first_neg_odd.get_or_insert(c);
                } else {
                    first_pos_odd.get_or_insert(c);
                }
            } else if c.is_negative() {
                first_neg_even.get_or_insert(c);
            }
        }
        if let (Some(odd), Some(neg_even)) = (first_odd, first_neg_even) {
            return Some((odd, neg_even));
        }
        if let (Some(pos), Some(neg)) = (first_pos_odd, first_neg_odd) {
            return Some((pos, neg));
        }
        None
    }
}
