//! Compilation of a grammar into its system of polynomial equations over
//! noncommuting symbols, plus the two normalizing transforms: the renaming
//! split `X = F(X) + ΛX` and the ε-shift `Y = X − I`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::grammar::{renaming_cycle_witness, Grammar, GrammarError, Symbol};

/// An ordered product of symbols. The empty product is the identity monomial
/// (the image of ε).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub factors: Vec<Symbol>,
}

impl Monomial {
    pub fn identity() -> Self {
        Monomial { factors: Vec::new() }
    }

    pub fn is_identity(&self) -> bool {
        self.factors.is_empty()
    }

    /// True for a single bare nonterminal (a renaming term).
    pub fn is_bare_nonterminal(&self) -> bool {
        self.factors.len() == 1 && self.factors[0].is_nonterminal()
    }

    pub fn nonterminal_count(&self) -> usize {
        self.factors.iter().filter(|s| s.is_nonterminal()).count()
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return f.write_str("I");
        }
        let parts: Vec<&str> = self.factors.iter().map(|s| s.name()).collect();
        f.write_str(&parts.join(""))
    }
}

/// A formal sum of monomials with multiset semantics: a repeated monomial
/// stands for an integer coefficient equal to its multiplicity. Duplicates
/// are never collapsed; ambiguity counts live in them.
#[derive(Debug, Clone, Eq)]
pub struct Polynomial {
    pub terms: Vec<Monomial>,
}

impl Polynomial {
    pub fn new(terms: Vec<Monomial>) -> Self {
        Polynomial { terms }
    }

    pub fn contains_identity(&self) -> bool {
        self.terms.iter().any(Monomial::is_identity)
    }

    fn sorted_terms(&self) -> Vec<&Monomial> {
        let mut v: Vec<&Monomial> = self.terms.iter().collect();
        v.sort();
        v
    }
}

impl PartialEq for Polynomial {
    /// Multiset equality: term order is presentation, not meaning.
    fn eq(&self, other: &Self) -> bool {
        self.sorted_terms() == other.sorted_terms()
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.terms.iter().map(|m| m.to_string()).collect();
        f.write_str(&parts.join(" + "))
    }
}

/// The compiled equation system. After [`split_linear`] the bare-nonterminal
/// terms live in `linear_part`; after [`epsilon_shift`] no right-hand side
/// contains the identity monomial and the variables listed in `shifted`
/// denote the original value minus the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct EquationSystem {
    /// Variables in declaration order.
    pub variables: Vec<String>,
    pub rhs: BTreeMap<String, Polynomial>,
    /// Λ rows: for each variable, the multiset of variables whose values are
    /// added to it (one entry per renaming production).
    pub linear_part: BTreeMap<String, Vec<String>>,
    pub is_epsilon_shifted: bool,
    /// Variables whose value was shifted by the identity: the solved value
    /// must be reported with the identity added back.
    pub shifted: BTreeSet<String>,
}

#[derive(Debug, Error, PartialEq)]
pub enum EqSystemError {
    #[error(transparent)]
    Grammar(#[from] GrammarError),
    #[error(
        "equation for {variable} keeps a net identity term after the shift; \
         the ε-shift handles only directly-nullable variables"
    )]
    NonCancellingConstant { variable: String },
    #[error("cycle in the linear part through {witness}")]
    LinearCycle { witness: String },
}

/// Build the raw equation system: one equation per nonterminal, one monomial
/// per production alternative, ε contributing the identity monomial.
pub fn build_system(g: &Grammar) -> Result<EquationSystem, EqSystemError> {
    if let Some(witness) = renaming_cycle_witness(g) {
        return Err(GrammarError::RenamingCycle { witness }.into());
    }
    let mut rhs: BTreeMap<String, Polynomial> = g
        .nonterminals
        .iter()
        .map(|nt| (nt.clone(), Polynomial::new(Vec::new())))
        .collect();
    for p in &g.productions {
        rhs.get_mut(&p.lhs)
            .expect("validated grammar")
            .terms
            .push(Monomial { factors: p.rhs.clone() });
    }
    Ok(EquationSystem {
        variables: g.nonterminals.clone(),
        rhs,
        linear_part: BTreeMap::new(),
        is_epsilon_shifted: false,
        shifted: BTreeSet::new(),
    })
}

/// Move every bare-nonterminal monomial into the linear part. Idempotent.
pub fn split_linear(sys: &EquationSystem) -> Result<EquationSystem, EqSystemError> {
    let mut out = sys.clone();
    for var in &out.variables {
        let poly = out.rhs.get_mut(var).expect("variable");
        let mut kept = Vec::new();
        for m in poly.terms.drain(..) {
            if m.is_bare_nonterminal() {
                out.linear_part
                    .entry(var.clone())
                    .or_default()
                    .push(m.factors[0].name().to_string());
            } else {
                kept.push(m);
            }
        }
        poly.terms = kept;
    }
    if let Some(witness) = linear_cycle_witness(&out.linear_part) {
        return Err(EqSystemError::LinearCycle { witness });
    }
    Ok(out)
}

/// Order the variables so every linear dependency points to an earlier
/// position (dependencies first). `None` if the dependency graph is cyclic.
pub(crate) fn linear_topo_order(
    variables: &[String],
    linear_part: &BTreeMap<String, Vec<String>>,
) -> Option<Vec<String>> {
    let mut order = Vec::new();
    let mut state: BTreeMap<&str, u8> = BTreeMap::new(); // 0 unseen, 1 open, 2 done
    fn visit<'a>(
        node: &'a str,
        linear_part: &'a BTreeMap<String, Vec<String>>,
        state: &mut BTreeMap<&'a str, u8>,
        order: &mut Vec<String>,
    ) -> bool {
        match state.get(node) {
            Some(1) => return false,
            Some(2) => return true,
            _ => {}
        }
        state.insert(node, 1);
        if let Some(deps) = linear_part.get(node) {
            for dep in deps {
                if !visit(dep, linear_part, state, order) {
                    return false;
                }
            }
        }
        state.insert(node, 2);
        order.push(node.to_string());
        true
    }
    for var in variables {
        if !visit(var, linear_part, &mut state, &mut order) {
            return None;
        }
    }
    Some(order)
}

fn linear_cycle_witness(linear_part: &BTreeMap<String, Vec<String>>) -> Option<String> {
    let vars: Vec<String> = linear_part.keys().cloned().collect();
    if linear_topo_order(&vars, linear_part).is_none() {
        linear_part.keys().next().cloned()
    } else {
        None
    }
}

/// Remove identity monomials by the change of variables Y = X − I, applied to
/// every variable whose right-hand side directly contains the identity.
/// Substituting X = Y + I expands each product distributively; the lhs
/// identity cancels exactly one identity term in the expansion. Any other
/// surviving identity term means the grammar is nullable through composition,
/// which this transform deliberately does not cover.
pub fn epsilon_shift(sys: &EquationSystem) -> Result<EquationSystem, EqSystemError> {
    let to_shift: BTreeSet<String> = sys
        .variables
        .iter()
        .filter(|v| sys.rhs[*v].contains_identity())
        .cloned()
        .collect();
    let mut out = sys.clone();
    out.is_epsilon_shifted = true;
    if to_shift.is_empty() {
        return Ok(out);
    }

    for var in &out.variables {
        let poly = out.rhs.get_mut(var).expect("variable");
        let mut expanded: Vec<Monomial> = Vec::new();
        for m in &poly.terms {
            expand_monomial(m, &to_shift, &mut expanded);
        }
        // Linear entries over shifted variables contribute an identity each:
        // X = ... + V with V = V' + I.
        let identity_from_linear = out
            .linear_part
            .get(var)
            .map(|deps| deps.iter().filter(|d| to_shift.contains(*d)).count())
            .unwrap_or(0);
        for _ in 0..identity_from_linear {
            expanded.push(Monomial::identity());
        }

        let mut identities =
            expanded.iter().filter(|m| m.is_identity()).count();
        if to_shift.contains(var) {
            // The lhs became Y + I; cancel one identity on the right.
            debug_assert!(identities >= 1, "a shifted variable must expand an identity");
            identities -= 1;
            let idx = expanded.iter().position(Monomial::is_identity).expect("identity");
            expanded.remove(idx);
        }
        if identities > 0 {
            return Err(EqSystemError::NonCancellingConstant { variable: var.clone() });
        }
        poly.terms = expanded;
    }
    out.shifted.extend(to_shift);
    Ok(out)
}

/// Expand a monomial under V -> (V + I) for every shifted V it contains:
/// each occurrence either stays or vanishes, giving 2^k variants.
fn expand_monomial(m: &Monomial, shifted: &BTreeSet<String>, out: &mut Vec<Monomial>) {
    let positions: Vec<usize> = m
        .factors
        .iter()
        .enumerate()
        .filter(|(_, s)| s.is_nonterminal() && shifted.contains(s.name()))
        .map(|(i, _)| i)
        .collect();
    if positions.is_empty() {
        out.push(m.clone());
        return;
    }
    for mask in 0..(1u32 << positions.len()) {
        let drop: BTreeSet<usize> = positions
            .iter()
            .enumerate()
            .filter(|(bit, _)| mask & (1 << bit) != 0)
            .map(|(_, &pos)| pos)
            .collect();
        let factors: Vec<Symbol> = m
            .factors
            .iter()
            .enumerate()
            .filter(|(i, _)| !drop.contains(i))
            .map(|(_, s)| s.clone())
            .collect();
        out.push(Monomial { factors });
    }
}

/// The occurrence count and matrix-norm cap for the transformed system: with
/// every terminal matrix of norm at most delta_max, the iteration map is a
/// contraction (nbar · delta < 1, with a 0.9 safety factor).
pub fn contraction_params(sys: &EquationSystem) -> (usize, f64) {
    let nbar: usize = sys
        .variables
        .iter()
        .flat_map(|v| sys.rhs[v].terms.iter())
        .map(Monomial::nonterminal_count)
        .sum();
    let delta_max = if nbar == 0 { 0.5 } else { 0.9 / nbar as f64 };
    (nbar, delta_max)
}

impl EquationSystem {
    /// One equation per line: right-hand monomials then linear entries, in
    /// declaration order. Shifted variables are rendered with a prime.
    pub fn render(&self) -> String {
        let name = |v: &str| -> String {
            if self.shifted.contains(v) {
                format!("{v}'")
            } else {
                v.to_string()
            }
        };
        let mut out = String::new();
        for var in &self.variables {
            let mut parts: Vec<String> = self.rhs[var]
                .terms
                .iter()
                .map(|m| {
                    if m.is_identity() {
                        "I".to_string()
                    } else {
                        m.factors
                            .iter()
                            .map(|s| match s {
                                Symbol::Nonterminal(n) => name(n),
                                Symbol::Terminal(t) => t.clone(),
                            })
                            .collect::<Vec<_>>()
                            .join("")
                    }
                })
                .collect();
            if let Some(deps) = self.linear_part.get(var) {
                parts.extend(deps.iter().map(|d| name(d)));
            }
            if parts.is_empty() {
                parts.push("0".to_string());
            }
            out.push_str(&format!("{} = {}\n", name(var), parts.join(" + ")));
        }
        out
    }

    /// Build, split, and shift in one step.
    pub fn compile(g: &Grammar) -> Result<EquationSystem, EqSystemError> {
        epsilon_shift(&split_linear(&build_system(g)?)?)
    }
}
