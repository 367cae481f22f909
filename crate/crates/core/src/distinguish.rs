//! Exact and numeric distinguishability machinery for finite word sets: the
//! suffix-operator construction that separates any two distinct sets of
//! equal-length words, the associated-polynomial condition sufficient for
//! separation by 2×2 triangular substitutions, and the census sweep that
//! finds the exceptional pairs no 2×2 substitution separates.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{random_substitution, Matrix, Substitution};

/// A multiset of terminal words of one shared length. Letters are single
/// characters; a repeated word stands for a coefficient greater than one.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WordSet {
    pub words: Vec<String>,
}

#[derive(Debug, Error, PartialEq)]
pub enum DistinguishError {
    #[error("words must share one length; found {0} and {1}")]
    LengthMismatch(usize, usize),
    #[error("the word sets are equal as multisets")]
    EqualSets,
    #[error("census parameter out of bounds: {0}")]
    ParameterBounds(String),
}

impl WordSet {
    pub fn new(words: Vec<String>) -> Result<WordSet, DistinguishError> {
        let mut lens = words.iter().map(|w| w.chars().count());
        if let Some(first) = lens.next() {
            for len in lens {
                if len != first {
                    return Err(DistinguishError::LengthMismatch(first, len));
                }
            }
        }
        Ok(WordSet { words })
    }

    /// Parse a comma-separated list of words.
    pub fn parse(text: &str) -> Result<WordSet, DistinguishError> {
        WordSet::new(text.split(',').map(|w| w.trim().to_string()).filter(|w| !w.is_empty()).collect())
    }

    pub fn word_len(&self) -> usize {
        self.words.first().map_or(0, |w| w.chars().count())
    }

    fn sorted_words(&self) -> Vec<&str> {
        let mut v: Vec<&str> = self.words.iter().map(String::as_str).collect();
        v.sort_unstable();
        v
    }

    fn letters(&self) -> BTreeSet<char> {
        self.words.iter().flat_map(|w| w.chars()).collect()
    }
}

fn common_length(u: &WordSet, v: &WordSet) -> Result<usize, DistinguishError> {
    let (lu, lv) = (u.word_len(), v.word_len());
    if !u.words.is_empty() && !v.words.is_empty() && lu != lv {
        return Err(DistinguishError::LengthMismatch(lu, lv));
    }
    Ok(lu.max(lv))
}

/// Sum over the words of the ordered products of their letters' matrices.
pub fn evaluate_word_set(set: &WordSet, sub: &Substitution) -> Matrix {
    let mut acc = Matrix::zero(sub.dim);
    for word in &set.words {
        let mut product: Option<Matrix> = None;
        for letter in word.chars() {
            let image = sub
                .get(&letter.to_string())
                .unwrap_or_else(|| panic!("no matrix for letter {letter:?}"));
            product = Some(match product {
                None => image.clone(),
                Some(p) => p.mul(image),
            });
        }
        if let Some(p) = product {
            acc.add_assign(&p);
        }
    }
    acc
}

// ─── Suffix-operator construction ────────────────────────────────────

/// Build the substitution of shift operators over the suffix set of U ∪ V:
/// dimension |suffixes| + 1, with basis vector 0 as the start. Each letter's
/// operator maps a basis vector onto the vector of the extended suffix when
/// that extension is itself a suffix, and to zero otherwise. Applying any
/// word of the shared length to vector 0 lands on that word's own basis
/// vector, so the two sums differ on column 0 by an exact integer gap.
///
/// Returns the substitution and the distinguishing column index (always 0).
pub fn suffix_substitution(
    u: &WordSet,
    v: &WordSet,
) -> Result<(Substitution, usize), DistinguishError> {
    common_length(u, v)?;
    if u.sorted_words() == v.sorted_words() {
        return Err(DistinguishError::EqualSets);
    }

    let mut suffixes: BTreeSet<String> = BTreeSet::new();
    for word in u.words.iter().chain(&v.words) {
        let chars: Vec<char> = word.chars().collect();
        for start in 0..chars.len() {
            suffixes.insert(chars[start..].iter().collect());
        }
    }
    // Deterministic basis: index 0 is the start vector, suffixes follow in
    // (length, lexicographic) order.
    let mut ordered: Vec<&String> = suffixes.iter().collect();
    ordered.sort_by_key(|s| (s.chars().count(), s.as_str()));
    let index_of: BTreeMap<&str, usize> =
        ordered.iter().enumerate().map(|(i, s)| (s.as_str(), i + 1)).collect();
    let dim = suffixes.len() + 1;

    let mut letters: BTreeSet<char> = u.letters();
    letters.extend(v.letters());

    let mut map = BTreeMap::new();
    let mut norm_bound = 0.0f64;
    for letter in letters {
        let mut m = Matrix::zero(dim);
        // Column 0: the start vector moves to the single-letter suffix.
        let single = letter.to_string();
        if let Some(&target) = index_of.get(single.as_str()) {
            m.set(target, 0, 1.0);
        }
        for (suffix, &col) in &index_of {
            let extended = format!("{letter}{suffix}");
            if let Some(&target) = index_of.get(extended.as_str()) {
                m.set(target, col, 1.0);
            }
        }
        norm_bound = norm_bound.max(m.frobenius_norm());
        map.insert(single, m);
    }

    Ok((Substitution { dim, map, norm_bound, seed: None }, 0))
}

// ─── Condition on associated polynomials ─────────────────────────────

/// Comparison mode for the associated-polynomial collections.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CondPMode {
    /// Compare as sets of monomials.
    Set,
    /// Compare with multiplicities. Matrix sums are governed by summed
    /// monomials, so this is the faithful criterion and the default.
    Multiset,
}

/// One associated monomial: commuting u-variables with exponents, times an
/// optional v-variable. `v_index: None` encodes the pure-u product from the
/// diagonal of the triangular product formula.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct CondPMonomial {
    pub u_exponents: BTreeMap<char, u32>,
    pub v_index: Option<char>,
}

fn assoc_monomials(set: &WordSet) -> Vec<CondPMonomial> {
    let mut out = Vec::new();
    for word in &set.words {
        let chars: Vec<char> = word.chars().collect();
        let mut prefix: BTreeMap<char, u32> = BTreeMap::new();
        for &c in &chars {
            out.push(CondPMonomial { u_exponents: prefix.clone(), v_index: Some(c) });
            *prefix.entry(c).or_insert(0) += 1;
        }
        // The (1,1) entry of the product: all u's, no v.
        out.push(CondPMonomial { u_exponents: prefix, v_index: None });
    }
    out
}

/// True iff the associated-polynomial collections of U and V differ under
/// the chosen comparison. A true result guarantees some 2×2 triangular
/// substitution separates the sets.
pub fn condition_p(u: &WordSet, v: &WordSet, mode: CondPMode) -> Result<bool, DistinguishError> {
    common_length(u, v)?;
    let mut pu = assoc_monomials(u);
    let mut pv = assoc_monomials(v);
    pu.sort();
    pv.sort();
    if mode == CondPMode::Set {
        pu.dedup();
        pv.dedup();
    }
    Ok(pu != pv)
}

// ─── Numeric identity check ──────────────────────────────────────────

/// Relative difference above which two evaluations count as separated.
pub const SEPARATION_TOL: f64 = 1e-7;
/// Relative difference below which two evaluations count as agreeing.
pub const AGREEMENT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum IdentityCheck {
    /// Every trial agreed within rounding. Evidence, not proof.
    AlwaysEqual { trials: usize, max_rel_diff: f64 },
    /// A separating substitution, replayable from its seed.
    DistinguishedBy { substitution: Substitution, trial: usize, rel_diff: f64 },
}

impl IdentityCheck {
    pub fn is_always_equal(&self) -> bool {
        matches!(self, IdentityCheck::AlwaysEqual { .. })
    }
}

fn normalized_diff(a: &Matrix, b: &Matrix) -> f64 {
    a.max_abs_diff(b) / 1.0f64.max(a.frobenius_norm()).max(b.frobenius_norm())
}

/// Evaluate both word-set sums under `trials` random dense substitutions of
/// the given dimension and report the first separating one.
pub fn numeric_identity_check(
    u: &WordSet,
    v: &WordSet,
    dim: usize,
    trials: usize,
    seed: u64,
) -> Result<IdentityCheck, DistinguishError> {
    common_length(u, v)?;
    let mut letters: BTreeSet<char> = u.letters();
    letters.extend(v.letters());
    let names: Vec<String> = letters.into_iter().map(|c| c.to_string()).collect();

    let mut max_rel = 0.0f64;
    for trial in 0..trials {
        let sub = random_substitution(&names, dim, 1.0, mix_seed(seed, trial as u64));
        let mu = evaluate_word_set(u, &sub);
        let mv = evaluate_word_set(v, &sub);
        let rel = normalized_diff(&mu, &mv);
        if rel > SEPARATION_TOL {
            return Ok(IdentityCheck::DistinguishedBy { substitution: sub, trial, rel_diff: rel });
        }
        max_rel = max_rel.max(rel);
    }
    Ok(IdentityCheck::AlwaysEqual { trials, max_rel_diff: max_rel })
}

/// splitmix64, used to derive independent substream seeds.
pub(crate) fn mix_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

// ─── Census sweep ────────────────────────────────────────────────────

#[derive(Debug, Clone, Serialize)]
pub struct CensusConfig {
    /// At most 3 letters.
    pub alphabet: Vec<char>,
    /// Sets of 1..=max_words words (or exactly max_words with `exact_words`).
    pub max_words: usize,
    /// Word lengths 1..=max_len (or exactly max_len with `exact_len`).
    pub max_len: usize,
    pub exact_words: bool,
    pub exact_len: bool,
    /// Trials for the numeric confirmation of each candidate pair.
    pub trials: usize,
    pub seed: u64,
    /// Report one representative per alphabet-permutation orbit.
    pub dedup_letter_permutations: bool,
}

impl CensusConfig {
    pub fn desk_scale(alphabet: &str, max_words: usize, max_len: usize, trials: usize, seed: u64) -> CensusConfig {
        CensusConfig {
            alphabet: alphabet.chars().collect(),
            max_words,
            max_len,
            exact_words: false,
            exact_len: false,
            trials,
            seed,
            dedup_letter_permutations: false,
        }
    }
}

/// A pair no 2×2 substitution separated: the associated-polynomial
/// collections coincide and every numeric trial agreed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CensusPair {
    #[serde(rename = "U")]
    pub left: Vec<String>,
    #[serde(rename = "V")]
    pub right: Vec<String>,
    pub condition_p: bool,
    pub trials: usize,
    pub verdict: String,
    pub max_rel_diff: f64,
}

/// Compact associated-monomial encoding for the census: per-letter u-counts
/// (alphabet ≤ 3, counts ≤ 31) plus the v-letter. One u32 per monomial.
fn compact_signature(words: &[&str], alphabet: &[char]) -> Vec<u32> {
    let pos = |c: char| alphabet.iter().position(|&a| a == c).expect("alphabet letter") as u32;
    let mut sig = Vec::with_capacity(words.len() * (words[0].len() + 1));
    for word in words {
        let mut counts = [0u32; 3];
        for c in word.chars() {
            let p = pos(c) as usize;
            sig.push((counts[0] << 24) | (counts[1] << 16) | (counts[2] << 8) | pos(c));
            counts[p] += 1;
        }
        // Pure-u product, tagged with an out-of-alphabet v-slot.
        sig.push((counts[0] << 24) | (counts[1] << 16) | (counts[2] << 8) | 0xff);
    }
    sig.sort_unstable();
    sig
}

fn enumerate_combinations(n: usize, k: usize, mut emit: impl FnMut(&[usize])) {
    let mut idx: Vec<usize> = (0..k).collect();
    if k == 0 || k > n {
        return;
    }
    loop {
        emit(&idx);
        // Advance the rightmost index that can still move.
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Enumerate unordered pairs of distinct equal-length word sets within the
/// bounds, keep those whose associated-polynomial collections coincide
/// (multiset comparison), and confirm each survivor with the numeric 2×2
/// check. Candidates are found by grouping sets on their collection
/// signature, which is exactly the multiset criterion; pairs in different
/// groups are separable by a triangular substitution and need no trials.
pub fn census_sweep(cfg: &CensusConfig) -> Result<Vec<CensusPair>, DistinguishError> {
    if cfg.alphabet.is_empty() || cfg.alphabet.len() > 3 {
        return Err(DistinguishError::ParameterBounds(format!(
            "alphabet size {} not in 1..=3",
            cfg.alphabet.len()
        )));
    }
    if cfg.max_words == 0 || cfg.max_words > 3 {
        return Err(DistinguishError::ParameterBounds(format!(
            "max_words {} not in 1..=3",
            cfg.max_words
        )));
    }
    if cfg.max_len == 0 || cfg.max_len > 5 {
        return Err(DistinguishError::ParameterBounds(format!(
            "max_len {} not in 1..=5",
            cfg.max_len
        )));
    }

    let lens: Vec<usize> =
        if cfg.exact_len { vec![cfg.max_len] } else { (1..=cfg.max_len).collect() };
    let sizes: Vec<usize> =
        if cfg.exact_words { vec![cfg.max_words] } else { (1..=cfg.max_words).collect() };

    let mut candidates: Vec<(Vec<String>, Vec<String>)> = Vec::new();
    for &len in &lens {
        // All words of this length in lexicographic order.
        let mut words: Vec<String> = vec![String::new()];
        for _ in 0..len {
            words = words
                .iter()
                .flat_map(|w| {
                    let mut alphabet = cfg.alphabet.clone();
                    alphabet.sort_unstable();
                    alphabet.into_iter().map(move |c| format!("{w}{c}"))
                })
                .collect();
        }
        for &size in &sizes {
            // Group sets by signature; only same-signature pairs can evade
            // the triangular substitutions.
            let mut groups: HashMap<Vec<u32>, Vec<Vec<usize>>> = HashMap::new();
            enumerate_combinations(words.len(), size, |idx| {
                let set: Vec<&str> = idx.iter().map(|&i| words[i].as_str()).collect();
                let sig = compact_signature(&set, &cfg.alphabet);
                groups.entry(sig).or_default().push(idx.to_vec());
            });
            let mut group_list: Vec<Vec<Vec<usize>>> =
                groups.into_values().filter(|g| g.len() > 1).collect();
            group_list.sort();
            for group in group_list {
                for i in 0..group.len() {
                    for j in i + 1..group.len() {
                        let left: Vec<String> =
                            group[i].iter().map(|&w| words[w].clone()).collect();
                        let right: Vec<String> =
                            group[j].iter().map(|&w| words[w].clone()).collect();
                        candidates.push((left, right));
                    }
                }
            }
        }
    }

    // Numeric confirmation, parallel over candidates. Each pair's generator
    // seed derives from the pair's own words, so results do not depend on
    // scheduling or chunking.
    let mut survivors: Vec<CensusPair> = candidates
        .par_iter()
        .filter_map(|(left, right)| {
            let u = WordSet::new(left.clone()).expect("uniform by construction");
            let v = WordSet::new(right.clone()).expect("uniform by construction");
            debug_assert_eq!(condition_p(&u, &v, CondPMode::Multiset), Ok(false));
            let pair_seed = mix_seed(cfg.seed, content_hash(left, right));
            match numeric_identity_check(&u, &v, 2, cfg.trials, pair_seed) {
                Ok(IdentityCheck::AlwaysEqual { max_rel_diff, .. }) => Some(CensusPair {
                    left: left.clone(),
                    right: right.clone(),
                    condition_p: false,
                    trials: cfg.trials,
                    verdict: "always_equal".to_string(),
                    max_rel_diff,
                }),
                _ => None,
            }
        })
        .collect();

    survivors.sort_by(|a, b| (&a.left, &a.right).cmp(&(&b.left, &b.right)));
    if cfg.dedup_letter_permutations {
        survivors = dedup_under_permutations(survivors, &cfg.alphabet);
    }
    Ok(survivors)
}

fn content_hash(left: &[String], right: &[String]) -> u64 {
    let mut h = 0xcbf2_9ce4_8422_2325u64;
    for w in left.iter().chain(right.iter()) {
        for b in w.bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x0000_0100_0000_01B3);
        }
        h ^= 0x2c;
        h = h.wrapping_mul(0x0000_0100_0000_01B3);
    }
    h
}

fn dedup_under_permutations(pairs: Vec<CensusPair>, alphabet: &[char]) -> Vec<CensusPair> {
    let perms = permutations(alphabet);
    let canonical_key = |pair: &CensusPair| -> (Vec<String>, Vec<String>) {
        let mut best: Option<(Vec<String>, Vec<String>)> = None;
        for perm in &perms {
            let apply = |words: &[String]| -> Vec<String> {
                let mut mapped: Vec<String> = words
                    .iter()
                    .map(|w| {
                        w.chars()
                            .map(|c| {
                                let i = alphabet.iter().position(|&a| a == c).expect("letter");
                                perm[i]
                            })
                            .collect()
                    })
                    .collect();
                mapped.sort();
                mapped
            };
            let (a, b) = (apply(&pair.left), apply(&pair.right));
            let key = if a <= b { (a, b) } else { (b, a) };
            best = Some(match best {
                None => key,
                Some(prev) => prev.min(key),
            });
        }
        best.expect("at least one permutation")
    };
    let mut seen = BTreeSet::new();
    pairs.into_iter().filter(|p| seen.insert(canonical_key(p))).collect()
}

fn permutations(items: &[char]) -> Vec<Vec<char>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for (i, &head) in items.iter().enumerate() {
        let rest: Vec<char> =
            items.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, &c)| c).collect();
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ws(words: &[&str]) -> WordSet {
        WordSet::new(words.iter().map(|w| w.to_string()).collect()).unwrap()
    }

    #[test]
    fn suffix_construction_on_two_letter_swap() {
        // U = {ab}, V = {ba}: suffixes {a, b, ab, ba}, dimension 5.
        let (sub, col) = suffix_substitution(&ws(&["ab"]), &ws(&["ba"])).unwrap();
        assert_eq!(sub.dim, 5);
        assert_eq!(col, 0);
        let mu = evaluate_word_set(&ws(&["ab"]), &sub);
        let mv = evaluate_word_set(&ws(&["ba"]), &sub);
        // Column 0 lands on different suffix vectors.
        let col_u: Vec<f64> = (0..5).map(|i| mu.get(i, 0)).collect();
        let col_v: Vec<f64> = (0..5).map(|i| mv.get(i, 0)).collect();
        assert_ne!(col_u, col_v);
        assert_eq!(col_u.iter().sum::<f64>(), 1.0);
        assert_eq!(col_v.iter().sum::<f64>(), 1.0);
        let gap = mu.max_abs_diff(&mv);
        assert!(gap >= 1.0, "gap {gap}");
    }

    #[test]
    fn equal_sets_are_rejected() {
        assert_eq!(
            suffix_substitution(&ws(&["ab"]), &ws(&["ab"])).unwrap_err(),
            DistinguishError::EqualSets
        );
    }

    #[test]
    fn length_mismatch_is_rejected() {
        assert!(matches!(
            suffix_substitution(&ws(&["ab"]), &ws(&["abc"])).unwrap_err(),
            DistinguishError::LengthMismatch(2, 3)
        ));
        assert!(WordSet::new(vec!["ab".into(), "abc".into()]).is_err());
    }

    #[test]
    fn suffix_construction_separates_exceptional_pair() {
        let u = ws(&["aabca", "abaac", "bacaa"]);
        let v = ws(&["aabac", "abcaa", "baaca"]);
        let (sub, _) = suffix_substitution(&u, &v).unwrap();
        let gap = evaluate_word_set(&u, &sub).max_abs_diff(&evaluate_word_set(&v, &sub));
        assert!(gap >= 1.0, "gap {gap}");
    }

    #[test]
    fn condition_p_detects_short_example() {
        // u_a² v_b appears for {aab, bab} and not for {aba, bba}.
        let res = condition_p(&ws(&["aab", "bab"]), &ws(&["aba", "bba"]), CondPMode::Multiset);
        assert_eq!(res, Ok(true));
    }

    #[test]
    fn condition_p_on_equal_sets_is_false() {
        let res = condition_p(&ws(&["aab"]), &ws(&["aab"]), CondPMode::Multiset);
        assert_eq!(res, Ok(false));
    }

    #[test]
    fn condition_p_fails_on_invisible_pair() {
        let u = ws(&["aabba", "abaab", "babaa"]);
        let v = ws(&["aabab", "abbaa", "baaba"]);
        assert_eq!(condition_p(&u, &v, CondPMode::Multiset), Ok(false));
        assert_eq!(condition_p(&u, &v, CondPMode::Set), Ok(false));
    }

    #[test]
    fn set_and_multiset_modes_differ_on_repeats() {
        let u = ws(&["ab", "ab"]);
        let v = ws(&["ab"]);
        assert_eq!(condition_p(&u, &v, CondPMode::Multiset), Ok(true));
        assert_eq!(condition_p(&u, &v, CondPMode::Set), Ok(false));
    }

    #[test]
    fn condition_p_is_order_invariant() {
        let a = condition_p(&ws(&["aab", "bab"]), &ws(&["bba", "aba"]), CondPMode::Multiset);
        let b = condition_p(&ws(&["bab", "aab"]), &ws(&["aba", "bba"]), CondPMode::Multiset);
        assert_eq!(a, b);
    }

    #[test]
    fn numeric_check_agrees_on_invisible_pair_at_dim_2() {
        let u = ws(&["aabba", "abaab", "babaa"]);
        let v = ws(&["aabab", "abbaa", "baaba"]);
        match numeric_identity_check(&u, &v, 2, 1000, 7).unwrap() {
            IdentityCheck::AlwaysEqual { max_rel_diff, .. } => {
                assert!(max_rel_diff <= AGREEMENT_TOL, "max_rel_diff {max_rel_diff}");
            }
            other => panic!("expected agreement, got {other:?}"),
        }
    }

    #[test]
    fn numeric_check_separates_invisible_pair_at_dim_3() {
        let u = ws(&["aabba", "abaab", "babaa"]);
        let v = ws(&["aabab", "abbaa", "baaba"]);
        assert!(!numeric_identity_check(&u, &v, 3, 50, 7).unwrap().is_always_equal());
    }

    #[test]
    fn numeric_check_separates_condition_p_pair_quickly() {
        let res = numeric_identity_check(&ws(&["aab", "bab"]), &ws(&["aba", "bba"]), 2, 50, 3).unwrap();
        match res {
            IdentityCheck::DistinguishedBy { trial, .. } => assert!(trial < 5),
            other => panic!("expected separation, got {other:?}"),
        }
    }

    #[test]
    fn census_rejects_out_of_bounds() {
        let cfg = CensusConfig::desk_scale("abcd", 3, 5, 10, 1);
        assert!(matches!(census_sweep(&cfg).unwrap_err(), DistinguishError::ParameterBounds(_)));
        let cfg = CensusConfig::desk_scale("ab", 4, 5, 10, 1);
        assert!(matches!(census_sweep(&cfg).unwrap_err(), DistinguishError::ParameterBounds(_)));
        let cfg = CensusConfig::desk_scale("ab", 2, 6, 10, 1);
        assert!(matches!(census_sweep(&cfg).unwrap_err(), DistinguishError::ParameterBounds(_)));
    }

    #[test]
    fn census_of_singletons_is_empty() {
        let mut cfg = CensusConfig::desk_scale("ab", 1, 4, 50, 9);
        cfg.exact_words = true;
        assert!(census_sweep(&cfg).unwrap().is_empty());
    }

    #[test]
    fn census_of_single_letters_is_empty() {
        let cfg = CensusConfig::desk_scale("abc", 3, 1, 50, 9);
        assert!(census_sweep(&cfg).unwrap().is_empty());
    }

    #[test]
    fn permutation_dedup_keeps_one_orbit_representative() {
        let pair = |left: &[&str], right: &[&str]| CensusPair {
            left: left.iter().map(|w| w.to_string()).collect(),
            right: right.iter().map(|w| w.to_string()).collect(),
            condition_p: false,
            trials: 10,
            verdict: "always_equal".to_string(),
            max_rel_diff: 0.0,
        };
        // The second pair is the first with a and b swapped.
        let pairs = vec![
            pair(&["aab"], &["aba"]),
            pair(&["bba"], &["bab"]),
            pair(&["abc"], &["acb"]),
        ];
        let deduped = dedup_under_permutations(pairs, &['a', 'b', 'c']);
        assert_eq!(deduped.len(), 2);
    }

    #[test]
    fn combination_enumeration_counts() {
        let mut count = 0;
        enumerate_combinations(5, 3, |_| count += 1);
        assert_eq!(count, 10);
        let mut singles = 0;
        enumerate_combinations(4, 1, |_| singles += 1);
        assert_eq!(singles, 4);
    }
}
