//! The comparison pipeline: scalar class probes, shared random matrix
//! trials over escalating norm caps, and the exact-oracle cross-check,
//! assembled into an auditable verdict.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::distinguish::mix_seed;
use crate::eqsystem::{contraction_params, EqSystemError, EquationSystem};
use crate::grammar::{default_probe_mu, scalar_class_probe, Grammar, GrammarError, PROBE_BLOWUP, PROBE_MAX_ITER};
use crate::linalg::{random_substitution, Substitution};
use crate::oracle::{axiom_stratum_counts, min_distinguishing_word, OracleError, WitnessReport};
use crate::solver::{iterate, SolveError, SolveStatus, DEFAULT_MAX_ITER, DEFAULT_TOL};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareConfig {
    /// Matrix dimensions to try.
    pub dims: Vec<usize>,
    pub trials_per_dim: usize,
    pub seed: u64,
    /// Diffs below this count as agreement.
    pub equal_tol: f64,
    /// Diffs above this count as separation; between the two is a dead band
    /// where the engine declines to decide.
    pub different_tol: f64,
    /// Length bound for the oracle cross-check.
    pub oracle_len: usize,
    /// Replaces the contraction-derived base norm cap.
    pub delta_override: Option<f64>,
    /// Larger norm caps tried when the base trials all agree. Differences
    /// buried many letters deep scale like δ^length and are invisible at the
    /// safe cap; a divergent escalated solve is detected and discarded, and
    /// a convergent one still sums the same series, so separation evidence
    /// at any cap is sound.
    pub escalation_deltas: Vec<f64>,
    /// Cap on Σφ over both grammars' strata the oracle may enumerate; the
    /// cross-check length shrinks to fit.
    pub oracle_budget: u64,
}

impl Default for CompareConfig {
    fn default() -> Self {
        CompareConfig {
            dims: vec![2, 3],
            trials_per_dim: 10,
            seed: 42,
            equal_tol: 1e-10,
            different_tol: 1e-7,
            oracle_len: 8,
            delta_override: None,
            escalation_deltas: vec![0.25, 0.4, 0.55, 0.7],
            oracle_budget: 1_000_000,
        }
    }
}

impl CompareConfig {
    pub fn validate(&self) -> Result<(), EngineError> {
        if self.dims.is_empty() || self.dims.contains(&0) {
            return Err(EngineError::Config("dims must be nonempty positive".into()));
        }
        if self.trials_per_dim == 0 {
            return Err(EngineError::Config("trials_per_dim must be at least 1".into()));
        }
        if !(self.equal_tol > 0.0 && self.different_tol > self.equal_tol) {
            return Err(EngineError::Config("need 0 < equal_tol < different_tol".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Different,
    ProbablyEquivalent,
    Inconclusive,
    ClassMismatch,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub dim: usize,
    pub trial: usize,
    /// Escalation rung: 0 is the contraction-safe base cap.
    pub rung: usize,
    /// Norm cap actually used, after any divergence-driven shrinking.
    pub delta: f64,
    pub sub_seed: u64,
    pub left_status: SolveStatus,
    pub right_status: SolveStatus,
    /// Normalized axiom difference; present when both solves converged.
    pub diff: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub outcome: Outcome,
    pub config: CompareConfig,
    /// Hashes of the two grammars' canonical texts, for replay validation.
    pub grammar_fingerprints: [String; 2],
    /// Contraction-safe shared norm cap.
    pub delta_base: f64,
    pub class_left_converged: bool,
    pub class_right_converged: bool,
    pub trials: Vec<TrialRecord>,
    pub trials_run: usize,
    /// The substitution of the first separating trial.
    pub witness_substitution: Option<Substitution>,
    pub oracle_witness: Option<WitnessReport>,
    /// Length the oracle cross-check actually reached under the budget.
    pub oracle_len_effective: Option<usize>,
    pub note: Option<String>,
}

impl Verdict {
    /// Process exit code: 0 equivalent, 1 different, 2 inconclusive,
    /// 3 class mismatch.
    pub fn exit_code(&self) -> i32 {
        match self.outcome {
            Outcome::ProbablyEquivalent => 0,
            Outcome::Different => 1,
            Outcome::Inconclusive => 2,
            Outcome::ClassMismatch => 3,
        }
    }
}

#[derive(Debug, Error)]
pub enum EngineError {
    #[error(transparent)]
    Grammar(#[from] GrammarError),
    #[error(transparent)]
    EqSystem(#[from] EqSystemError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error("oracle failed during comparison: {0}")]
    Oracle(#[from] OracleError),
    #[error("bad configuration: {0}")]
    Config(String),
    #[error("replay mismatch: {0}")]
    ReplayMismatch(String),
}

pub(crate) fn fingerprint(g: &Grammar) -> String {
    let text = g.to_canonical_text();
    let mut h = 0xcbf2_9ce4_8422_2325u64;
    for b in text.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01B3);
    }
    format!("{h:016x}")
}

fn union_terminals(g1: &Grammar, g2: &Grammar) -> Vec<String> {
    let set: BTreeSet<&String> = g1.terminals.iter().chain(&g2.terminals).collect();
    set.into_iter().cloned().collect()
}

/// How many times a divergent base trial's cap is halved before giving up.
/// The contraction bound can be loose for grammars with many alternatives
/// per nonterminal; shrinking recovers a usable solve from the same draw.
/// Escalated rungs are exploratory and are discarded on divergence instead,
/// since shrinking them would only repeat the base cap.
const DIVERGENCE_RETRIES: usize = 6;

struct TrialPlan {
    dim: usize,
    trial: usize,
    rung: usize,
    delta: f64,
}

fn run_trial(
    plan: &TrialPlan,
    terminals: &[String],
    sys1: &EquationSystem,
    sys2: &EquationSystem,
    seed: u64,
) -> TrialRecord {
    let sub_seed = mix_seed(seed, (plan.rung as u64) << 32 | (plan.dim as u64) << 16 | plan.trial as u64);
    let mut delta = plan.delta;
    let mut record = TrialRecord {
        dim: plan.dim,
        trial: plan.trial,
        rung: plan.rung,
        delta,
        sub_seed,
        left_status: SolveStatus::MaxIterExceeded,
        right_status: SolveStatus::MaxIterExceeded,
        diff: None,
    };
    let retries = if plan.rung == 0 { DIVERGENCE_RETRIES } else { 0 };
    for _ in 0..=retries {
        let sub = random_substitution(terminals, plan.dim, delta, sub_seed);
        let left = iterate(sys1, &sub, DEFAULT_TOL, DEFAULT_MAX_ITER).expect("images cover the union alphabet");
        let right = iterate(sys2, &sub, DEFAULT_TOL, DEFAULT_MAX_ITER).expect("images cover the union alphabet");
        record.delta = delta;
        record.left_status = left.status;
        record.right_status = right.status;
        if left.status == SolveStatus::Converged && right.status == SolveStatus::Converged {
            let s1 = &left.assignment[sys1.variables.first().expect("nonempty system")];
            let s2 = &right.assignment[sys2.variables.first().expect("nonempty system")];
            let scale = 1.0f64.max(s1.frobenius_norm()).max(s2.frobenius_norm());
            record.diff = Some(s1.max_abs_diff(s2) / scale);
            return record;
        }
        delta /= 2.0;
    }
    record
}

fn reconstruct_substitution(record: &TrialRecord, terminals: &[String]) -> Substitution {
    random_substitution(terminals, record.dim, record.delta, record.sub_seed)
}

/// Budget-capped oracle length: the longest prefix whose combined stratum
/// totals fit, never exceeding `oracle_len`.
fn budgeted_oracle_len(
    g1: &Grammar,
    g2: &Grammar,
    oracle_len: usize,
    budget: u64,
) -> Result<usize, EngineError> {
    let bound = oracle_len.min(crate::oracle::MAX_WORD_LEN);
    let (c1, _) = axiom_stratum_counts(g1, bound)?;
    let (c2, _) = axiom_stratum_counts(g2, bound)?;
    let mut total = 0u64;
    let mut effective = 0usize;
    for len in 0..=bound {
        total = total.saturating_add(c1[len]).saturating_add(c2[len]);
        if total > budget {
            break;
        }
        effective = len;
    }
    Ok(effective)
}

/// Compare two grammars. The pipeline: scalar class probes; compilation of
/// both systems; shared substitutions solved on both sides per dimension,
/// trial, and escalation rung; then the exact-oracle cross-check when every
/// trial agreed. Deterministic in the configuration seed.
pub fn compare(g1: &Grammar, g2: &Grammar, cfg: &CompareConfig) -> Result<Verdict, EngineError> {
    cfg.validate()?;
    let fingerprints = [fingerprint(g1), fingerprint(g2)];

    // Scalar class probes.
    let probe1 = scalar_class_probe(g1, default_probe_mu(g1), PROBE_MAX_ITER, PROBE_BLOWUP)?;
    let probe2 = scalar_class_probe(g2, default_probe_mu(g2), PROBE_MAX_ITER, PROBE_BLOWUP)?;
    let (c1, c2) = (probe1.is_converged(), probe2.is_converged());
    let mut verdict = Verdict {
        outcome: Outcome::Inconclusive,
        config: cfg.clone(),
        grammar_fingerprints: fingerprints,
        delta_base: 0.0,
        class_left_converged: c1,
        class_right_converged: c2,
        trials: Vec::new(),
        trials_run: 0,
        witness_substitution: None,
        oracle_witness: None,
        oracle_len_effective: None,
        note: None,
    };
    if c1 != c2 {
        verdict.outcome = Outcome::ClassMismatch;
        verdict.note = Some(
            "the scalar probes disagree: one grammar's ambiguity grows beyond \
             any exponential bound"
                .to_string(),
        );
        return Ok(verdict);
    }
    if !c1 {
        verdict.note = Some(
            "both scalar probes diverged; the matrix method does not apply to \
             grammars with unbounded ambiguity"
                .to_string(),
        );
        return Ok(verdict);
    }

    // Compile and pick the shared norm cap.
    let sys1 = EquationSystem::compile(g1)?;
    let sys2 = EquationSystem::compile(g2)?;
    let (_, d1) = contraction_params(&sys1);
    let (_, d2) = contraction_params(&sys2);
    let delta_base = cfg.delta_override.unwrap_or_else(|| d1.min(d2));
    verdict.delta_base = delta_base;
    let terminals = union_terminals(g1, g2);

    // Trials, rung by rung; a separating trial decides immediately.
    let mut rung_deltas = vec![delta_base];
    rung_deltas.extend(cfg.escalation_deltas.iter().copied().filter(|&d| d > delta_base));
    let mut separated: Option<usize> = None;
    'rungs: for (rung, &delta) in rung_deltas.iter().enumerate() {
        let plans: Vec<TrialPlan> = cfg
            .dims
            .iter()
            .flat_map(|&dim| {
                (0..cfg.trials_per_dim).map(move |trial| TrialPlan { dim, trial, rung, delta })
            })
            .collect();
        let records: Vec<TrialRecord> = plans
            .par_iter()
            .map(|plan| run_trial(plan, &terminals, &sys1, &sys2, cfg.seed))
            .collect();
        let offset = verdict.trials.len();
        verdict.trials.extend(records);
        for i in offset..verdict.trials.len() {
            if verdict.trials[i].diff.is_some_and(|d| d > cfg.different_tol) {
                separated = Some(i);
                break 'rungs;
            }
        }
    }
    verdict.trials_run = verdict.trials.len();

    if let Some(idx) = separated {
        let record = verdict.trials[idx].clone();
        verdict.witness_substitution = Some(reconstruct_substitution(&record, &terminals));
        verdict.outcome = Outcome::Different;
        // Cross-check: a short witness makes the evidence human-readable.
        let effective = budgeted_oracle_len(g1, g2, cfg.oracle_len, cfg.oracle_budget)?;
        verdict.oracle_len_effective = Some(effective);
        verdict.oracle_witness = min_distinguishing_word(g1, g2, effective)?;
        if verdict.oracle_witness.is_none() {
            verdict.note = Some(format!(
                "matrix-only evidence: no witness word within length {effective}"
            ));
        }
        return Ok(verdict);
    }

    let compared: Vec<f64> = verdict.trials.iter().filter_map(|t| t.diff).collect();
    if compared.is_empty() {
        verdict.note = Some("no trial converged on both sides; nothing was compared".to_string());
        return Ok(verdict);
    }
    let dead_band: Vec<f64> = compared
        .iter()
        .copied()
        .filter(|&d| d >= cfg.equal_tol && d <= cfg.different_tol)
        .collect();
    if !dead_band.is_empty() {
        verdict.outcome = Outcome::Inconclusive;
        verdict.note = Some(format!(
            "{} of {} compared trials landed between equal_tol and different_tol",
            dead_band.len(),
            compared.len()
        ));
        return Ok(verdict);
    }

    // Every compared trial agreed; ask the oracle for a short witness.
    let effective = budgeted_oracle_len(g1, g2, cfg.oracle_len, cfg.oracle_budget)?;
    verdict.oracle_len_effective = Some(effective);
    verdict.oracle_witness = min_distinguishing_word(g1, g2, effective)?;
    if let Some(w) = &verdict.oracle_witness {
        verdict.outcome = Outcome::Different;
        verdict.note = Some(format!(
            "matrix trials missed a coefficient mismatch at length {}; \
             witness found by the oracle",
            w.word.len()
        ));
    } else {
        verdict.outcome = Outcome::ProbablyEquivalent;
    }
    Ok(verdict)
}

/// Re-run the recorded trials of a verdict against the given grammars and
/// return the recomputed per-trial diffs. The grammars must be the ones the
/// verdict was produced from.
pub fn replay(verdict: &Verdict, g1: &Grammar, g2: &Grammar) -> Result<Vec<Option<f64>>, EngineError> {
    let prints = [fingerprint(g1), fingerprint(g2)];
    if prints != verdict.grammar_fingerprints {
        return Err(EngineError::ReplayMismatch(format!(
            "grammar fingerprints {prints:?} do not match the verdict's {:?}",
            verdict.grammar_fingerprints
        )));
    }
    let sys1 = EquationSystem::compile(g1)?;
    let sys2 = EquationSystem::compile(g2)?;
    let terminals = union_terminals(g1, g2);
    let mut diffs = Vec::with_capacity(verdict.trials.len());
    for record in &verdict.trials {
        let sub = reconstruct_substitution(record, &terminals);
        let left = iterate(&sys1, &sub, DEFAULT_TOL, DEFAULT_MAX_ITER)?;
        let right = iterate(&sys2, &sub, DEFAULT_TOL, DEFAULT_MAX_ITER)?;
        if left.status == SolveStatus::Converged && right.status == SolveStatus::Converged {
            let s1 = &left.assignment[sys1.variables.first().expect("nonempty")];
            let s2 = &right.assignment[sys2.variables.first().expect("nonempty")];
            let scale = 1.0f64.max(s1.frobenius_norm()).max(s2.frobenius_norm());
            diffs.push(Some(s1.max_abs_diff(s2) / scale));
        } else {
            diffs.push(None);
        }
    }
    Ok(diffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::parse_grammar;

    fn g(text: &str) -> Grammar {
        parse_grammar(text).unwrap()
    }

    fn correct() -> Grammar {
        g("S -> S a A | A ;\nA -> c S d | b ;")
    }

    fn cfg() -> CompareConfig {
        CompareConfig { trials_per_dim: 4, ..CompareConfig::default() }
    }

    #[test]
    fn equivalent_answers_agree() {
        let verdict = compare(&correct(), &g("S -> A a S | A ;\nA -> c S d | b ;"), &cfg()).unwrap();
        assert_eq!(verdict.outcome, Outcome::ProbablyEquivalent);
        for t in &verdict.trials {
            if let Some(d) = t.diff {
                assert!(d < 1e-10, "diff {d}");
            }
        }
    }

    #[test]
    fn wrong_answer_is_separated_with_witness() {
        let verdict = compare(&correct(), &g("S -> S a A | A ;\nA -> c A d | b ;"), &cfg()).unwrap();
        assert_eq!(verdict.outcome, Outcome::Different);
        assert!(verdict.witness_substitution.is_some());
        assert_eq!(verdict.oracle_witness.as_ref().unwrap().word, "cbabd");
    }

    #[test]
    fn ambiguity_is_separated() {
        let verdict = compare(&correct(), &g("S -> S a S | A ;\nA -> c S d | b ;"), &cfg()).unwrap();
        assert_eq!(verdict.outcome, Outcome::Different);
    }

    #[test]
    fn class_mismatch_is_reported() {
        let verdict = compare(&correct(), &g("S -> S A | a ;\nA -> eps ;"), &cfg()).unwrap();
        assert_eq!(verdict.outcome, Outcome::ClassMismatch);
        assert_eq!(verdict.exit_code(), 3);
    }

    #[test]
    fn self_comparison_is_equivalent() {
        for seed in [1u64, 7, 99] {
            let config = CompareConfig { seed, trials_per_dim: 3, ..CompareConfig::default() };
            let verdict = compare(&correct(), &correct(), &config).unwrap();
            assert_eq!(verdict.outcome, Outcome::ProbablyEquivalent);
        }
    }

    #[test]
    fn replay_reproduces_diffs() {
        let left = correct();
        let right = g("S -> S a A | A ;\nA -> c A d | b ;");
        let verdict = compare(&left, &right, &cfg()).unwrap();
        let diffs = replay(&verdict, &left, &right).unwrap();
        let recorded: Vec<Option<f64>> = verdict.trials.iter().map(|t| t.diff).collect();
        assert_eq!(diffs, recorded);
    }

    #[test]
    fn replay_rejects_other_grammars() {
        let left = correct();
        let right = g("S -> S a A | A ;\nA -> c A d | b ;");
        let verdict = compare(&left, &right, &cfg()).unwrap();
        let err = replay(&verdict, &left, &g("S -> a ;")).unwrap_err();
        assert!(matches!(err, EngineError::ReplayMismatch(_)));
    }

    #[test]
    fn verdicts_survive_production_reordering() {
        let reordered = g("S -> A | S a A ;\nA -> b | c S d ;");
        let wrong = g("S -> S a A | A ;\nA -> c A d | b ;");
        let a = compare(&correct(), &wrong, &cfg()).unwrap();
        let b = compare(&reordered, &wrong, &cfg()).unwrap();
        assert_eq!(a.outcome, b.outcome);
    }

    #[test]
    fn dead_band_yields_inconclusive() {
        // Force the band to cover every nonzero diff.
        let config = CompareConfig {
            equal_tol: 1e-300,
            different_tol: 1e300,
            escalation_deltas: vec![],
            trials_per_dim: 2,
            ..CompareConfig::default()
        };
        let verdict =
            compare(&correct(), &g("S -> S a A | A ;\nA -> c A d | b ;"), &config).unwrap();
        assert_eq!(verdict.outcome, Outcome::Inconclusive);
        assert_eq!(verdict.exit_code(), 2);
    }

    #[test]
    fn config_validation() {
        let bad = CompareConfig { dims: vec![], ..CompareConfig::default() };
        assert!(compare(&correct(), &correct(), &bad).is_err());
        let bad = CompareConfig { equal_tol: 1e-3, different_tol: 1e-5, ..CompareConfig::default() };
        assert!(compare(&correct(), &correct(), &bad).is_err());
    }

    #[test]
    fn monotone_in_trials() {
        let wrong = g("S -> S a A | A ;\nA -> c A d | b ;");
        let few = compare(&correct(), &wrong, &CompareConfig { trials_per_dim: 2, ..CompareConfig::default() }).unwrap();
        let many = compare(&correct(), &wrong, &CompareConfig { trials_per_dim: 8, ..CompareConfig::default() }).unwrap();
        assert_eq!(few.outcome, Outcome::Different);
        assert_eq!(many.outcome, Outcome::Different);
    }
}
