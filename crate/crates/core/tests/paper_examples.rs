//! Golden tests for the worked examples: compiled systems, transforms,
//! scalar fixed points, and the exercise-grading verdicts.

mod common;

use common::*;

use cfgcmp::engine::{compare, CompareConfig, Outcome};
use cfgcmp::eqsystem::{build_system, contraction_params, split_linear, EquationSystem};
use cfgcmp::linalg::Substitution;
use cfgcmp::oracle::{default_iter_cap, membership, min_distinguishing_word, series_slice};
use cfgcmp::solver::{iterate, SolveStatus, DEFAULT_MAX_ITER, DEFAULT_TOL};

#[test]
fn compiled_systems_render_as_expected() {
    assert_eq!(build_system(&g(TWO_NT)).unwrap().render(), "S = SaA + a\nA = cSd + b\n");
    assert_eq!(build_system(&g(INTRO)).unwrap().render(), "S = aAb + c\nA = cA + I\n");
    assert_eq!(build_system(&g(CORRECT)).unwrap().render(), "S = SaA + A\nA = cSd + b\n");
    assert_eq!(build_system(&g(VARIANT)).unwrap().render(), "S = AaS + A\nA = cSd + b\n");
    assert_eq!(build_system(&g(WRONG)).unwrap().render(), "S = SaA + A\nA = cAd + b\n");
    assert_eq!(build_system(&g(AMBIGUOUS)).unwrap().render(), "S = SaS + A\nA = cSd + b\n");
}

#[test]
fn renaming_split_footprint() {
    let split = split_linear(&build_system(&g(CORRECT)).unwrap()).unwrap();
    assert_eq!(split.rhs["S"].terms.len(), 1);
    assert_eq!(split.linear_part["S"], vec!["A".to_string()]);
    assert!(!split.linear_part.contains_key("A"));
}

#[test]
fn shift_of_trailing_epsilon_grammar() {
    let sys = EquationSystem::compile(&g(EPS_SHIFT)).unwrap();
    assert_eq!(sys.render(), "S = SaA' + Sa + b\nA' = cSd\n");
}

#[test]
fn contraction_caps() {
    let plain = EquationSystem::compile(&g(TWO_NT)).unwrap();
    assert_eq!(contraction_params(&plain), (3, 0.3));
    let renamed = EquationSystem::compile(&g(CORRECT)).unwrap();
    assert_eq!(contraction_params(&renamed), (3, 0.3));
}

#[test]
fn intro_series_first_words() {
    let grammar = g(INTRO);
    let slice = series_slice(&grammar, 6, default_iter_cap(&grammar, 6)).unwrap();
    let words: Vec<&str> = slice.coefficients.keys().map(String::as_str).collect();
    assert_eq!(words.len(), 6);
    for w in ["c", "ab", "acb", "accb", "acccb", "accccb"] {
        assert_eq!(slice.coefficients[w], 1, "{w}");
    }
    assert_eq!(membership(&grammar, &["a", "c", "c", "b"]).unwrap(), 1);
    assert_eq!(membership(&grammar, &["b", "a"]).unwrap(), 0);
}

#[test]
fn intro_matrix_solution_sums_the_series() {
    // At the scalar substitution t the axiom solution is t + t²/(1−t).
    let sys = EquationSystem::compile(&g(INTRO)).unwrap();
    for t in [0.05, 0.1, 0.2] {
        let sub = Substitution::scalar(["a", "b", "c"], t);
        let solution = iterate(&sys, &sub, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
        assert_eq!(solution.status, SolveStatus::Converged);
        let expected = t + t * t / (1.0 - t);
        assert!(
            (solution.assignment["S"].get(0, 0) - expected).abs() < 1e-12,
            "t = {t}"
        );
    }
}

#[test]
fn exercise_pair_verdicts() {
    let cfg = CompareConfig::default();
    let correct = g(CORRECT);

    let same = compare(&correct, &g(VARIANT), &cfg).unwrap();
    assert_eq!(same.outcome, Outcome::ProbablyEquivalent);

    let wrong = compare(&correct, &g(WRONG), &cfg).unwrap();
    assert_eq!(wrong.outcome, Outcome::Different);
    assert_eq!(wrong.oracle_witness.unwrap().word, "cbabd");

    let ambiguous = compare(&correct, &g(AMBIGUOUS), &cfg).unwrap();
    assert_eq!(ambiguous.outcome, Outcome::Different);
}

#[test]
fn wrong_answer_misses_cbabd() {
    let witness = min_distinguishing_word(&g(CORRECT), &g(WRONG), 5).unwrap().unwrap();
    assert_eq!(witness.word, "cbabd");
    assert_eq!((witness.coeff_left, witness.coeff_right), (1, 0));
    assert_eq!(membership(&g(CORRECT), &["c", "b", "a", "b", "d"]).unwrap(), 1);
    assert_eq!(membership(&g(WRONG), &["c", "b", "a", "b", "d"]).unwrap(), 0);
}

#[test]
fn equivalent_answers_agree_through_length_seven() {
    assert_eq!(min_distinguishing_word(&g(CORRECT), &g(VARIANT), 7).unwrap(), None);
}

#[test]
fn ambiguous_answer_doubles_a_word() {
    let grammar = g(AMBIGUOUS);
    let slice = series_slice(&grammar, 7, default_iter_cap(&grammar, 7)).unwrap();
    assert!(slice.stabilized);
    assert_eq!(slice.coefficients["babab"], 2);
    // Same language as the reference, so the witness is an ambiguity count.
    let witness = min_distinguishing_word(&g(CORRECT), &grammar, 7).unwrap().unwrap();
    assert_eq!(witness.word, "babab");
    assert_eq!((witness.coeff_left, witness.coeff_right), (1, 2));
}

#[test]
fn long_witness_pair_has_no_short_witness() {
    let (left, right) = long_witness_pair();
    assert_eq!(min_distinguishing_word(&left, &right, 8).unwrap(), None);
}

#[test]
fn many_terminals_pair_is_a_documented_miss() {
    let (left, right) = many_terminals_pair(30);
    let cfg = CompareConfig { dims: vec![2], ..CompareConfig::default() };
    let verdict = compare(&left, &right, &cfg).unwrap();
    // A genuine difference exists (the chain orders differ), but every
    // surviving product is below machine precision relative to the rest of
    // the solution.
    assert_eq!(verdict.outcome, Outcome::ProbablyEquivalent);
}
