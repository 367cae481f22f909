//! Exact truncated formal-power-series computation: word enumeration with
//! ambiguity coefficients, serving as ground truth for the matrix method and
//! as the check-all-short-words baseline.
//!
//! Internally the series is computed stratum by stratum: the coefficient
//! table for words of length ℓ is assembled from shorter strata through the
//! productions, by merging sorted streams of packed words. Strata that no
//! later stratum depends on are compared lazily and never stored, which
//! keeps long-bound comparisons (where a single stratum has hundreds of
//! millions of words) inside a modest memory envelope.
//!
//! Unbounded ambiguity shows up as a cycle among equations that can pass a
//! word through unchanged (ε-cycles and nullable compositions); it is
//! detected exactly and reported through the `stabilized` flag rather than
//! looping.

use std::collections::{BTreeMap, BTreeSet, BinaryHeap};
use std::cmp::Reverse;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::eqsystem::{build_system, EqSystemError, EquationSystem};
use crate::grammar::{Grammar, GrammarError, Symbol};

/// Longest representable word: 8 bits per letter in a 128-bit word.
pub const MAX_WORD_LEN: usize = 16;
/// Cost guard for slice materialization as a word → coefficient map.
pub const SLICE_MAX_LEN: usize = 12;
/// Cap on the total number of stored (word, coefficient) entries.
const MAX_MATERIALIZED_ENTRIES: usize = 80_000_000;

/// Exact coefficients φ(P) for every word of length ≤ `max_len`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeriesSlice {
    pub max_len: usize,
    /// Display-form word → coefficient. The empty word is keyed as "".
    pub coefficients: BTreeMap<String, u64>,
    /// True iff the coefficients are the true φ values for all words whose
    /// length is within the bound. False signals possible unbounded
    /// ambiguity; only fully-computed strata are included then.
    pub stabilized: bool,
}

/// Evidence that two grammars generate different series.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessReport {
    /// Display form; the empty word prints as "".
    pub word: String,
    pub coeff_left: u64,
    pub coeff_right: u64,
}

#[derive(Debug, Error, PartialEq)]
pub enum OracleError {
    #[error(transparent)]
    Grammar(#[from] GrammarError),
    #[error(transparent)]
    EqSystem(#[from] EqSystemError),
    #[error("series did not stabilize: the grammar has unbounded ambiguity")]
    Unstabilized,
    #[error("oracle cost guard: {0}")]
    CostGuard(String),
    #[error("unknown terminal {0}")]
    UnknownTerminal(String),
}

/// Default iteration budget for the ε-coefficient fixpoint.
pub fn default_iter_cap(g: &Grammar, max_len: usize) -> usize {
    max_len.max(1) * (1 + g.nonterminals.len()) * 4
}

// ─── Terminal lexicon and packed words ───────────────────────────────

/// Sorted terminal universe shared by one comparison. Packing a word by
/// letter rank, first letter in the most significant byte, makes numeric
/// order on the packed value equal to lexicographic order on equal-length
/// words.
#[derive(Debug, Clone)]
pub(crate) struct Lexicon {
    names: Vec<String>,
}

impl Lexicon {
    pub(crate) fn new(names: impl IntoIterator<Item = String>) -> Result<Lexicon, OracleError> {
        let mut names: Vec<String> = names.into_iter().collect();
        names.sort();
        names.dedup();
        if names.len() > 256 {
            return Err(OracleError::CostGuard(format!(
                "alphabet of {} terminals exceeds the packing limit of 256",
                names.len()
            )));
        }
        Ok(Lexicon { names })
    }

    fn index(&self, name: &str) -> Option<u8> {
        self.names.binary_search_by(|n| n.as_str().cmp(name)).ok().map(|i| i as u8)
    }

    /// Human form of a packed word: letters concatenated when every terminal
    /// name is a single character, joined with "." otherwise.
    fn display(&self, packed: u128, len: usize) -> String {
        let mut letters = Vec::with_capacity(len);
        for pos in 0..len {
            let shift = 8 * (len - 1 - pos);
            let idx = ((packed >> shift) & 0xff) as usize;
            letters.push(self.names[idx].as_str());
        }
        if self.names.iter().all(|n| n.chars().count() == 1) {
            letters.concat()
        } else {
            letters.join(".")
        }
    }
}

// ─── Stratified series computation ───────────────────────────────────

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Factor {
    Terminal(u8),
    Nonterminal(usize),
}

#[derive(Debug, Clone)]
struct Equation {
    monomials: Vec<Vec<Factor>>,
}

type Stratum = Vec<(u128, u64)>;

pub(crate) struct SeriesComputer {
    vars: Vec<String>,
    eqs: Vec<Equation>,
    axiom: usize,
    axiom_shifted: bool,
    max_len: usize,
    eps: Vec<u64>,
    /// counts[var][len] = Σ φ over the stratum, saturating at u64::MAX.
    counts: Vec<Vec<u64>>,
    strata: Vec<Vec<Option<Stratum>>>,
    /// Smallest length whose computation hit an ambiguity cycle, if any.
    unstable_at: Option<usize>,
    stored_entries: usize,
}

impl SeriesComputer {
    pub(crate) fn new(
        sys: &EquationSystem,
        axiom: &str,
        lex: &Lexicon,
        max_len: usize,
        iter_cap: usize,
    ) -> Result<SeriesComputer, OracleError> {
        if max_len > MAX_WORD_LEN {
            return Err(OracleError::CostGuard(format!(
                "max_len {max_len} exceeds the packed-word limit {MAX_WORD_LEN}"
            )));
        }
        let vars = sys.variables.clone();
        let vidx: BTreeMap<&str, usize> =
            vars.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
        let axiom = *vidx
            .get(axiom)
            .ok_or_else(|| OracleError::UnknownTerminal(axiom.to_string()))?;

        let mut eqs: Vec<Equation> = vars.iter().map(|_| Equation { monomials: Vec::new() }).collect();
        for (i, var) in vars.iter().enumerate() {
            for m in &sys.rhs[var].terms {
                let mut factors = Vec::with_capacity(m.factors.len());
                for s in &m.factors {
                    factors.push(match s {
                        Symbol::Terminal(t) => Factor::Terminal(
                            lex.index(t).ok_or_else(|| OracleError::UnknownTerminal(t.clone()))?,
                        ),
                        Symbol::Nonterminal(n) => Factor::Nonterminal(vidx[n.as_str()]),
                    });
                }
                eqs[i].monomials.push(factors);
            }
            if let Some(deps) = sys.linear_part.get(var) {
                for dep in deps {
                    eqs[i].monomials.push(vec![Factor::Nonterminal(vidx[dep.as_str()])]);
                }
            }
        }

        let mut computer = SeriesComputer {
            vars,
            eqs,
            axiom,
            axiom_shifted: sys.shifted.contains(&sys.variables[axiom]),
            max_len,
            eps: Vec::new(),
            counts: Vec::new(),
            strata: Vec::new(),
            unstable_at: None,
            stored_entries: 0,
        };
        computer.run_eps_fixpoint(iter_cap);
        computer.run_counts();
        Ok(computer)
    }

    fn n(&self) -> usize {
        self.vars.len()
    }

    /// ε coefficients by fixpoint iteration; any failure to stabilize within
    /// the cap (or saturation) marks length 0 unstable.
    fn run_eps_fixpoint(&mut self, iter_cap: usize) {
        let n = self.n();
        let mut eps = vec![0u64; n];
        let mut stable = false;
        for _ in 0..iter_cap.max(1) {
            let mut next = vec![0u64; n];
            for (slot, eq) in next.iter_mut().zip(&self.eqs) {
                let mut acc = 0u64;
                for m in &eq.monomials {
                    let mut prod = 1u64;
                    for f in m {
                        prod = match f {
                            Factor::Terminal(_) => 0,
                            Factor::Nonterminal(j) => prod.saturating_mul(eps[*j]),
                        };
                        if prod == 0 {
                            break;
                        }
                    }
                    acc = acc.saturating_add(prod);
                }
                *slot = acc;
            }
            if next == eps {
                stable = true;
                break;
            }
            eps = next;
        }
        if !stable || eps.contains(&u64::MAX) {
            self.unstable_at = Some(0);
        }
        self.eps = eps;
        self.counts = (0..n).map(|x| vec![self.eps[x]]).collect();
        self.strata = (0..n)
            .map(|x| {
                let base = if self.eps[x] > 0 { vec![(0u128, self.eps[x])] } else { Vec::new() };
                vec![Some(base)]
            })
            .collect();
    }

    /// Length assignments over the factors of a monomial summing to `total`,
    /// restricted to lengths whose strata are known nonempty.
    fn viable_compositions(&self, factors: &[Factor], total: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut current = vec![0usize; factors.len()];
        self.compose_rec(factors, 0, total, &mut current, &mut out);
        out
    }

    fn compose_rec(
        &self,
        factors: &[Factor],
        pos: usize,
        remaining: usize,
        current: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if pos == factors.len() {
            if remaining == 0 {
                out.push(current.clone());
            }
            return;
        }
        match factors[pos] {
            Factor::Terminal(_) => {
                if remaining >= 1 {
                    current[pos] = 1;
                    self.compose_rec(factors, pos + 1, remaining - 1, current, out);
                }
            }
            Factor::Nonterminal(j) => {
                let upper = remaining.min(self.counts[j].len() - 1);
                for m in 0..=upper {
                    if self.counts[j][m] == 0 {
                        continue;
                    }
                    current[pos] = m;
                    self.compose_rec(factors, pos + 1, remaining - m, current, out);
                }
            }
        }
    }

    /// Edges x → y meaning stratum (x, ℓ) refers to stratum (y, ℓ): some
    /// monomial of x is all-nonterminal, one factor is y taking the full
    /// length, and every other factor is nullable.
    fn same_length_edges(&self) -> Vec<(usize, usize)> {
        let mut edges = Vec::new();
        for x in 0..self.n() {
            for m in &self.eqs[x].monomials {
                if m.is_empty() || m.iter().any(|f| matches!(f, Factor::Terminal(_))) {
                    continue;
                }
                for (p, f) in m.iter().enumerate() {
                    let Factor::Nonterminal(y) = f else { unreachable!() };
                    let others_nullable = m
                        .iter()
                        .enumerate()
                        .filter(|(q, _)| *q != p)
                        .all(|(_, g)| matches!(g, Factor::Nonterminal(j) if self.eps[*j] > 0));
                    if others_nullable {
                        edges.push((x, *y));
                    }
                }
            }
        }
        edges.sort_unstable();
        edges.dedup();
        edges
    }

    /// Strongly connected components in dependency order (referenced
    /// components first), via iterative Tarjan.
    fn sccs_in_dependency_order(&self, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &(x, y) in edges {
            adj[x].push(y);
        }
        let mut index = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut on_stack = vec![false; n];
        let mut stack: Vec<usize> = Vec::new();
        let mut sccs: Vec<Vec<usize>> = Vec::new();
        let mut counter = 0usize;

        for start in 0..n {
            if index[start] != usize::MAX {
                continue;
            }
            // (node, next child position)
            let mut call: Vec<(usize, usize)> = vec![(start, 0)];
            while let Some(&mut (v, ref mut child)) = call.last_mut() {
                if *child == 0 {
                    index[v] = counter;
                    low[v] = counter;
                    counter += 1;
                    stack.push(v);
                    on_stack[v] = true;
                }
                if *child < adj[v].len() {
                    let w = adj[v][*child];
                    *child += 1;
                    if index[w] == usize::MAX {
                        call.push((w, 0));
                    } else if on_stack[w] {
                        low[v] = low[v].min(index[w]);
                    }
                } else {
                    if low[v] == index[v] {
                        let mut scc = Vec::new();
                        loop {
                            let w = stack.pop().expect("tarjan stack");
                            on_stack[w] = false;
                            scc.push(w);
                            if w == v {
                                break;
                            }
                        }
                        scc.sort_unstable();
                        sccs.push(scc);
                    }
                    call.pop();
                    if let Some(&mut (u, _)) = call.last_mut() {
                        low[u] = low[u].min(low[v]);
                    }
                }
            }
        }
        sccs
    }

    /// Fill the count table for all lengths, detecting ambiguity cycles.
    fn run_counts(&mut self) {
        if self.unstable_at == Some(0) {
            return;
        }
        let edges = self.same_length_edges();
        let edge_set: BTreeSet<(usize, usize)> = edges.iter().copied().collect();
        let sccs = self.sccs_in_dependency_order(&edges);

        for len in 1..=self.max_len {
            for x in 0..self.n() {
                self.counts[x].push(0);
            }
            for scc in &sccs {
                let cyclic =
                    scc.len() > 1 || edge_set.contains(&(scc[0], scc[0]));
                // Members of a cycle start at zero, so in-cycle references
                // contribute nothing here: what remains is the base.
                let mut values = Vec::with_capacity(scc.len());
                for &x in scc {
                    let mut acc = 0u64;
                    for m in &self.eqs[x].monomials.clone() {
                        for comp in self.viable_compositions(m, len) {
                            let mut prod = 1u64;
                            for (f, &l) in m.iter().zip(&comp) {
                                if let Factor::Nonterminal(j) = f {
                                    prod = prod.saturating_mul(self.counts[*j][l]);
                                    if prod == 0 {
                                        break;
                                    }
                                }
                            }
                            acc = acc.saturating_add(prod);
                        }
                    }
                    values.push(acc);
                }
                if cyclic && values.iter().any(|&v| v > 0) {
                    // A word of this length can be re-derived through the
                    // cycle arbitrarily often: φ is unbounded.
                    self.unstable_at = Some(len);
                    return;
                }
                for (&x, v) in scc.iter().zip(values) {
                    self.counts[x][len] = v;
                }
            }
        }
    }

    pub(crate) fn is_stable_through(&self, len: usize) -> bool {
        self.unstable_at.is_none_or(|u| len < u)
    }

    /// Σ φ over the axiom stratum of each length 0..=max_len (the shifted
    /// identity included), valid through the stable range.
    pub(crate) fn axiom_counts(&self) -> Vec<u64> {
        let mut counts: Vec<u64> = self.counts[self.axiom].clone();
        counts.resize(self.max_len + 1, 0);
        if self.axiom_shifted {
            counts[0] = counts[0].saturating_add(1);
        }
        counts
    }

    /// Mark every stratum transitively referenced by the query strata
    /// (axiom, 0..=max_len) for materialization. The query strata themselves
    /// are included only when some other needed stratum refers to them.
    fn need_set(&self) -> BTreeSet<(usize, usize)> {
        let mut need: BTreeSet<(usize, usize)> = BTreeSet::new();
        let mut queue: Vec<(usize, usize)> = Vec::new();
        let queries: Vec<(usize, usize)> = (1..=self.query_limit())
            .map(|len| (self.axiom, len))
            .collect();
        let expand = |x: usize, len: usize, need: &mut BTreeSet<(usize, usize)>, queue: &mut Vec<(usize, usize)>| {
            for m in &self.eqs[x].monomials {
                for comp in self.viable_compositions(m, len) {
                    for (f, &l) in m.iter().zip(&comp) {
                        if let Factor::Nonterminal(j) = f {
                            if l >= 1 && need.insert((*j, l)) {
                                queue.push((*j, l));
                            }
                        }
                    }
                }
            }
        };
        for &(x, len) in &queries {
            expand(x, len, &mut need, &mut queue);
        }
        while let Some((x, len)) = queue.pop() {
            expand(x, len, &mut need, &mut queue);
        }
        need
    }

    fn query_limit(&self) -> usize {
        match self.unstable_at {
            Some(u) => u.saturating_sub(1).min(self.max_len),
            None => self.max_len,
        }
    }

    /// Materialize every needed stratum, lengths ascending.
    pub(crate) fn materialize(&mut self) -> Result<(), OracleError> {
        let need = self.need_set();
        let edges = self.same_length_edges();
        let order: Vec<usize> = self
            .sccs_in_dependency_order(&edges)
            .into_iter()
            .flatten()
            .collect();
        for len in 1..=self.query_limit() {
            for x in 0..self.n() {
                debug_assert_eq!(self.strata[x].len(), len);
                self.strata[x].push(None);
            }
            for &x in &order {
                if !need.contains(&(x, len)) {
                    continue;
                }
                let stratum = self.collect_stratum(x, len)?;
                self.stored_entries += stratum.len();
                if self.stored_entries > MAX_MATERIALIZED_ENTRIES {
                    return Err(OracleError::CostGuard(format!(
                        "materialized series exceeds {MAX_MATERIALIZED_ENTRIES} entries"
                    )));
                }
                self.strata[x][len] = Some(stratum);
            }
        }
        Ok(())
    }

    fn collect_stratum(&self, x: usize, len: usize) -> Result<Stratum, OracleError> {
        let mut merged = self.stratum_stream(x, len)?;
        let mut out = Vec::new();
        while let Some(item) = merged.next_word() {
            out.push(item);
        }
        Ok(out)
    }

    /// A sorted, coefficient-summed stream over stratum (x, len), reading
    /// from materialized inputs.
    fn stratum_stream(&self, x: usize, len: usize) -> Result<MergedStream<'_>, OracleError> {
        debug_assert!(len >= 1);
        let mut streams = Vec::new();
        for m in &self.eqs[x].monomials {
            for comp in self.viable_compositions(m, len) {
                let mut coeff = 1u64;
                let mut parts: Vec<Part<'_>> = Vec::new();
                let mut viable = true;
                for (f, &l) in m.iter().zip(&comp) {
                    match f {
                        Factor::Terminal(t) => parts.push(Part::Letter(*t)),
                        Factor::Nonterminal(j) => {
                            if l == 0 {
                                coeff = coeff.saturating_mul(self.eps[*j]);
                            } else {
                                match self.strata[*j].get(l).and_then(|s| s.as_ref()) {
                                    Some(s) if s.is_empty() => {
                                        viable = false;
                                        break;
                                    }
                                    Some(s) => parts.push(Part::Words { words: s, len: l }),
                                    None => {
                                        // Not materialized: only possible when
                                        // the counts said empty.
                                        debug_assert_eq!(self.counts[*j][l], 0);
                                        viable = false;
                                        break;
                                    }
                                }
                            }
                        }
                    }
                }
                if viable && coeff > 0 {
                    streams.push(CompStream::new(parts, coeff));
                }
            }
        }
        Ok(MergedStream::new(streams))
    }

    /// The axiom's ε coefficient, with the shifted identity added back.
    fn axiom_eps(&self) -> u64 {
        let base = self.eps[self.axiom];
        if self.axiom_shifted {
            base.saturating_add(1)
        } else {
            base
        }
    }

    /// Stream over the axiom stratum at `len`: the materialized table when
    /// one exists, otherwise a fresh merge over the inputs.
    fn axiom_stream(&self, len: usize) -> Result<AxiomStream<'_>, OracleError> {
        if len == 0 {
            let eps = self.axiom_eps();
            let items = if eps > 0 { vec![(0u128, eps)] } else { Vec::new() };
            return Ok(AxiomStream::Owned { items, pos: 0 });
        }
        if let Some(s) = self.strata[self.axiom].get(len).and_then(|s| s.as_ref()) {
            return Ok(AxiomStream::Slice { items: s, pos: 0 });
        }
        Ok(AxiomStream::Merged(self.stratum_stream(self.axiom, len)?))
    }
}

// ─── Sorted word streams ─────────────────────────────────────────────

enum Part<'a> {
    Letter(u8),
    Words { words: &'a [(u128, u64)], len: usize },
}

/// Lexicographic cross-product over the parts of one composition. Because
/// part lengths are fixed, tuple order equals packed-word order, so an
/// odometer over the sorted part lists emits words in increasing order.
struct CompStream<'a> {
    parts: Vec<Part<'a>>,
    shifts: Vec<u32>,
    odometer: Vec<usize>,
    coeff_base: u64,
    done: bool,
}

impl<'a> CompStream<'a> {
    fn new(parts: Vec<Part<'a>>, coeff_base: u64) -> CompStream<'a> {
        let mut suffix = 0usize;
        let mut shifts = vec![0u32; parts.len()];
        for (i, part) in parts.iter().enumerate().rev() {
            shifts[i] = (8 * suffix) as u32;
            suffix += match part {
                Part::Letter(_) => 1,
                Part::Words { len, .. } => *len,
            };
        }
        let done = parts.iter().any(|p| matches!(p, Part::Words { words, .. } if words.is_empty()));
        CompStream { odometer: vec![0; parts.len()], parts, shifts, coeff_base, done }
    }

    fn current(&self) -> Option<(u128, u64)> {
        if self.done {
            return None;
        }
        let mut packed = 0u128;
        let mut coeff = self.coeff_base;
        for (i, part) in self.parts.iter().enumerate() {
            match part {
                Part::Letter(t) => packed |= (*t as u128) << self.shifts[i],
                Part::Words { words, .. } => {
                    let (w, c) = words[self.odometer[i]];
                    packed |= w << self.shifts[i];
                    coeff = coeff.saturating_mul(c);
                }
            }
        }
        Some((packed, coeff))
    }

    fn advance(&mut self) {
        for i in (0..self.parts.len()).rev() {
            if let Part::Words { words, .. } = &self.parts[i] {
                self.odometer[i] += 1;
                if self.odometer[i] < words.len() {
                    return;
                }
                self.odometer[i] = 0;
            }
        }
        self.done = true;
    }
}

/// K-way merge over composition streams, summing coefficients of equal
/// words.
struct MergedStream<'a> {
    streams: Vec<CompStream<'a>>,
    heap: BinaryHeap<Reverse<(u128, usize)>>,
}

impl<'a> MergedStream<'a> {
    fn new(streams: Vec<CompStream<'a>>) -> MergedStream<'a> {
        let mut heap = BinaryHeap::with_capacity(streams.len());
        for (i, s) in streams.iter().enumerate() {
            if let Some((w, _)) = s.current() {
                heap.push(Reverse((w, i)));
            }
        }
        MergedStream { streams, heap }
    }

    fn next_word(&mut self) -> Option<(u128, u64)> {
        let Reverse((word, first)) = self.heap.pop()?;
        let mut coeff = self.streams[first].current().expect("heap entry").1;
        self.streams[first].advance();
        if let Some((w, _)) = self.streams[first].current() {
            self.heap.push(Reverse((w, first)));
        }
        while let Some(&Reverse((w, sid))) = self.heap.peek() {
            if w != word {
                break;
            }
            self.heap.pop();
            coeff = coeff.saturating_add(self.streams[sid].current().expect("heap entry").1);
            self.streams[sid].advance();
            if let Some((w2, _)) = self.streams[sid].current() {
                self.heap.push(Reverse((w2, sid)));
            }
        }
        Some((word, coeff))
    }
}

enum AxiomStream<'a> {
    Owned { items: Vec<(u128, u64)>, pos: usize },
    Slice { items: &'a [(u128, u64)], pos: usize },
    Merged(MergedStream<'a>),
}

impl<'a> AxiomStream<'a> {
    fn next_word(&mut self) -> Option<(u128, u64)> {
        match self {
            AxiomStream::Owned { items, pos } => {
                let item = items.get(*pos).copied();
                *pos += 1;
                item
            }
            AxiomStream::Slice { items, pos } => {
                let item = items.get(*pos).copied();
                *pos += 1;
                item
            }
            AxiomStream::Merged(m) => m.next_word(),
        }
    }
}

// ─── Public operations ───────────────────────────────────────────────

fn raw_system(g: &Grammar) -> Result<EquationSystem, OracleError> {
    Ok(build_system(g)?)
}

fn grammar_lexicon(grammars: &[&Grammar]) -> Result<Lexicon, OracleError> {
    Lexicon::new(grammars.iter().flat_map(|g| g.terminals.iter().cloned()))
}

/// Exact series slice of a grammar: φ(P) for every word with |P| ≤ max_len.
pub fn series_slice(g: &Grammar, max_len: usize, iter_cap: usize) -> Result<SeriesSlice, OracleError> {
    if max_len > SLICE_MAX_LEN {
        return Err(OracleError::CostGuard(format!(
            "slice bound {max_len} exceeds the map guard {SLICE_MAX_LEN}; \
             use the comparison entry points for longer bounds"
        )));
    }
    let sys = raw_system(g)?;
    series_slice_of_system(&sys, &g.axiom, &g.terminals, max_len, iter_cap)
}

/// Series slice computed from an equation system (raw or transformed); the
/// transformed system's shifted variables get their identity added back.
/// `terminals` must cover every terminal the system mentions.
pub fn series_slice_of_system(
    sys: &EquationSystem,
    axiom: &str,
    terminals: &[String],
    max_len: usize,
    iter_cap: usize,
) -> Result<SeriesSlice, OracleError> {
    let lex = Lexicon::new(terminals.iter().cloned())?;
    let mut computer = SeriesComputer::new(sys, axiom, &lex, max_len, iter_cap)?;
    computer.materialize()?;
    let stabilized = computer.is_stable_through(max_len);
    let mut coefficients = BTreeMap::new();
    let limit = computer.query_limit();
    if computer.is_stable_through(0) {
        let eps = computer.axiom_eps();
        if eps > 0 {
            coefficients.insert(String::new(), eps);
        }
        for len in 1..=limit {
            let mut stream = computer.axiom_stream(len)?;
            while let Some((packed, coeff)) = stream.next_word() {
                coefficients.insert(lex.display(packed, len), coeff);
            }
        }
    }
    Ok(SeriesSlice { max_len, coefficients, stabilized })
}

/// Compare two grammars word by word and report the shortest (then
/// lexicographically least) word whose coefficients differ, scanning lengths
/// 0..=max_len. `None` when the truncated series agree.
pub fn min_distinguishing_word(
    g1: &Grammar,
    g2: &Grammar,
    max_len: usize,
) -> Result<Option<WitnessReport>, OracleError> {
    let lex = grammar_lexicon(&[g1, g2])?;
    let sys1 = raw_system(g1)?;
    let sys2 = raw_system(g2)?;
    let cap = default_iter_cap(g1, max_len).max(default_iter_cap(g2, max_len));
    let mut c1 = SeriesComputer::new(&sys1, &g1.axiom, &lex, max_len, cap)?;
    let mut c2 = SeriesComputer::new(&sys2, &g2.axiom, &lex, max_len, cap)?;
    if !c1.is_stable_through(max_len) || !c2.is_stable_through(max_len) {
        return Err(OracleError::Unstabilized);
    }
    c1.materialize()?;
    c2.materialize()?;

    for len in 0..=max_len {
        let mut s1 = c1.axiom_stream(len)?;
        let mut s2 = c2.axiom_stream(len)?;
        let mut a = s1.next_word();
        let mut b = s2.next_word();
        loop {
            match (a, b) {
                (None, None) => break,
                (Some((w, c)), None) => {
                    return Ok(Some(WitnessReport {
                        word: lex.display(w, len),
                        coeff_left: c,
                        coeff_right: 0,
                    }))
                }
                (None, Some((w, c))) => {
                    return Ok(Some(WitnessReport {
                        word: lex.display(w, len),
                        coeff_left: 0,
                        coeff_right: c,
                    }))
                }
                (Some((w1, c1v)), Some((w2, c2v))) => {
                    if w1 < w2 {
                        return Ok(Some(WitnessReport {
                            word: lex.display(w1, len),
                            coeff_left: c1v,
                            coeff_right: 0,
                        }));
                    }
                    if w2 < w1 {
                        return Ok(Some(WitnessReport {
                            word: lex.display(w2, len),
                            coeff_left: 0,
                            coeff_right: c2v,
                        }));
                    }
                    if c1v != c2v {
                        return Ok(Some(WitnessReport {
                            word: lex.display(w1, len),
                            coeff_left: c1v,
                            coeff_right: c2v,
                        }));
                    }
                    a = s1.next_word();
                    b = s2.next_word();
                }
            }
        }
    }
    Ok(None)
}

/// φ(word): the number of derivations of `word`; 0 when the word is not in
/// the language. Letters are terminal names.
pub fn membership(g: &Grammar, letters: &[&str]) -> Result<u64, OracleError> {
    if letters.len() > MAX_WORD_LEN {
        return Err(OracleError::CostGuard(format!(
            "word of length {} exceeds the limit {MAX_WORD_LEN}",
            letters.len()
        )));
    }
    let lex = grammar_lexicon(&[g])?;
    let mut packed = 0u128;
    for &l in letters {
        let idx = lex.index(l).ok_or_else(|| OracleError::UnknownTerminal(l.to_string()))?;
        packed = (packed << 8) | idx as u128;
    }
    let sys = raw_system(g)?;
    let len = letters.len();
    let mut computer =
        SeriesComputer::new(&sys, &g.axiom, &lex, len, default_iter_cap(g, len.max(1)))?;
    if !computer.is_stable_through(len) {
        return Err(OracleError::Unstabilized);
    }
    computer.materialize()?;
    if len == 0 {
        return Ok(computer.axiom_eps());
    }
    let mut stream = computer.axiom_stream(len)?;
    while let Some((w, c)) = stream.next_word() {
        if w == packed {
            return Ok(c);
        }
        if w > packed {
            break;
        }
    }
    Ok(0)
}

/// Per-length totals Σ φ for the axiom stratum (saturating), plus whether
/// the series is stable through the bound. Cheap: no word enumeration.
pub fn axiom_stratum_counts(g: &Grammar, max_len: usize) -> Result<(Vec<u64>, bool), OracleError> {
    let sys = raw_system(g)?;
    let lex = grammar_lexicon(&[g])?;
    let computer =
        SeriesComputer::new(&sys, &g.axiom, &lex, max_len, default_iter_cap(g, max_len))?;
    let stable = computer.is_stable_through(max_len);
    Ok((computer.axiom_counts(), stable))
}

/// Split a word written as one token into terminal names: whitespace-
/// separated when it contains whitespace, "."-separated when it contains
/// dots, one terminal per character otherwise.
pub fn split_word_text(text: &str) -> Vec<String> {
    if text.is_empty() || text == "eps" {
        return Vec::new();
    }
    if text.chars().any(char::is_whitespace) {
        text.split_whitespace().map(str::to_string).collect()
    } else if text.contains('.') {
        text.split('.').map(str::to_string).collect()
    } else {
        text.chars().map(|c| c.to_string()).collect()
    }
}
