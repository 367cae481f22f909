//! Shared fixtures for the integration suites.
#![allow(dead_code)]

use cfgcmp::grammar::{parse_grammar, Grammar};

pub fn g(text: &str) -> Grammar {
    parse_grammar(text).expect("fixture grammar parses")
}

/// The introduction grammar: S -> aAb | c ; A -> cA | ε.
pub const INTRO: &str = "S -> a A b | c ;\nA -> c A | eps ;";

/// Plain two-nonterminal grammar without renamings or ε.
pub const TWO_NT: &str = "S -> S a A | a ;\nA -> c S d | b ;";

/// The reference answer of the exercise pair.
pub const CORRECT: &str = "S -> S a A | A ;\nA -> c S d | b ;";

/// A different grammar for the same series.
pub const VARIANT: &str = "S -> A a S | A ;\nA -> c S d | b ;";

/// Wrong answer: its language misses some words.
pub const WRONG: &str = "S -> S a A | A ;\nA -> c A d | b ;";

/// Same language, ambiguous.
pub const AMBIGUOUS: &str = "S -> S a S | A ;\nA -> c S d | b ;";

/// ε on a non-axiom nonterminal; exercises the shift.
pub const EPS_SHIFT: &str = "S -> S a A | b ;\nA -> c S d | eps ;";

/// Pair whose shortest distinguishing words have length 15.
pub fn long_witness_pair() -> (Grammar, Grammar) {
    let left = "S -> eps | I I S | A ;\nI -> a | b | c | d ;\nA -> C C C a a a ;\nC -> a a a a ;";
    let right = "S -> eps | I I S | B ;\nI -> a | b | c | d ;\nB -> C C C b b b ;\nC -> b b b b ;";
    (g(left), g(right))
}

/// Grammars whose only difference is the order of the first two letters in
/// one n-letter chain; at machine precision the solved systems coincide.
pub fn many_terminals_pair(n: usize) -> (Grammar, Grammar) {
    let letters: Vec<String> = (1..=n).map(|i| format!("t{i}")).collect();
    let make = |swap: bool| {
        let mut chain = letters.clone();
        if swap {
            chain.swap(0, 1);
        }
        format!(
            "S -> A S | B S | B ;\nA -> {} ;\nB -> {} ;",
            chain.join(" "),
            letters.join(" | ")
        )
    };
    (g(&make(false)), g(&make(true)))
}

/// Deterministic random grammar in the convergence form: no ε, no renaming,
/// every nonterminal-bearing right-hand side has at least two symbols, every
/// nonterminal derives a terminal word directly.
pub fn random_convergence_form(seed: u64) -> Grammar {
    let mut state = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(1);
    let mut next = move |bound: usize| -> usize {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state >> 33) as usize % bound
    };
    let n_nts = 2 + next(3); // 2..=4
    let n_terms = 2 + next(3);
    let nts: Vec<String> = (0..n_nts).map(|i| format!("N{i}")).collect();
    let terms: Vec<String> = (0..n_terms).map(|i| ((b'a' + i as u8) as char).to_string()).collect();

    let mut rules = Vec::new();
    for (i, nt) in nts.iter().enumerate() {
        let mut alts = Vec::new();
        // One guaranteed terminal word keeps the language nonempty.
        let tw_len = 1 + next(3);
        let tw: Vec<String> = (0..tw_len).map(|_| terms[next(n_terms)].clone()).collect();
        alts.push(tw.join(" "));
        // Up to two mixed words of length 2..=4 with at least one nonterminal.
        for _ in 0..=next(2) {
            let len = 2 + next(3);
            let nt_pos = next(len);
            let word: Vec<String> = (0..len)
                .map(|p| {
                    if p == nt_pos || next(3) == 0 {
                        nts[next(n_nts)].clone()
                    } else {
                        terms[next(n_terms)].clone()
                    }
                })
                .collect();
            let alt = word.join(" ");
            if !alts.contains(&alt) {
                alts.push(alt);
            }
        }
        rules.push(format!("{} -> {} ;", nt, alts.join(" | ")));
        let _ = i;
    }
    g(&rules.join("\n"))
}

/// A deterministic expression-style grammar of `layers` precedence layers:
/// one renaming and one left-recursive binary alternative per layer, plus
/// leaf productions. 40 layers gives 44 nonterminals and 104 productions.
pub fn layered_grammar(layers: usize, leaf_variant: bool) -> Grammar {
    let mut rules = Vec::new();
    let op = |i: usize| format!("op{i}");
    for i in 0..layers {
        let this = format!("E{i}");
        let nextl = if i + 1 == layers { "Leaf".to_string() } else { format!("E{}", i + 1) };
        if i % 3 == 0 {
            rules.push(format!(
                "{this} -> {this} {} {nextl} | {this} alt{i} {nextl} | {nextl} ;",
                op(i)
            ));
        } else {
            rules.push(format!("{this} -> {this} {} {nextl} | {nextl} ;", op(i)));
        }
    }
    // A few extra nonterminals and leaf alternatives.
    rules.push("Leaf -> lparen E0 rparen | Ident | Num | strlit ;".to_string());
    rules.push("Ident -> idhead | idhead idtail ;".to_string());
    rules.push("Num -> digit | digit Frac ;".to_string());
    if leaf_variant {
        rules.push("Frac -> dot digit | dot digit digit ;".to_string());
    } else {
        rules.push("Frac -> dot digit digit | dot digit ;".to_string());
    }
    g(&rules.join("\n"))
}
