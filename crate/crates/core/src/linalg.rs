//! Small dense square matrices, Frobenius norms, and seeded random
//! substitutions with a norm cap. Dimensions are runtime values; the
//! expected range is 1–64.

use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// A dense N×N matrix of finite reals, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Matrix {
    pub dim: usize,
    pub entries: Vec<f64>,
}

impl Matrix {
    pub fn new(dim: usize, entries: Vec<f64>) -> Matrix {
        assert!(dim >= 1, "dimension must be positive");
        assert_eq!(entries.len(), dim * dim, "entry count must be dim^2");
        assert!(entries.iter().all(|x| x.is_finite()), "entries must be finite");
        Matrix { dim, entries }
    }

    pub fn zero(dim: usize) -> Matrix {
        assert!(dim >= 1);
        Matrix { dim, entries: vec![0.0; dim * dim] }
    }

    pub fn identity(dim: usize) -> Matrix {
        let mut m = Matrix::zero(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = 1.0;
        }
        m
    }

    /// A 1×1 matrix, for scalar substitutions.
    pub fn scalar(t: f64) -> Matrix {
        Matrix::new(1, vec![t])
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.entries[i * self.dim + j] = value;
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.dim, other.dim, "dimension mismatch in add");
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b)
            .collect();
        Matrix { dim: self.dim, entries }
    }

    pub fn add_assign(&mut self, other: &Matrix) {
        assert_eq!(self.dim, other.dim, "dimension mismatch in add");
        for (a, b) in self.entries.iter_mut().zip(&other.entries) {
            *a += b;
        }
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.dim, other.dim, "dimension mismatch in mul");
        let n = self.dim;
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for k in 0..n {
                let aik = self.entries[i * n + k];
                if aik == 0.0 {
                    continue;
                }
                let row = &other.entries[k * n..(k + 1) * n];
                let dst = &mut out[i * n..(i + 1) * n];
                for j in 0..n {
                    dst[j] += aik * row[j];
                }
            }
        }
        Matrix { dim: n, entries: out }
    }

    pub fn scale(&self, t: f64) -> Matrix {
        Matrix { dim: self.dim, entries: self.entries.iter().map(|x| x * t).collect() }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Largest absolute entry-wise difference.
    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch in max_abs_diff");
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.dim {
            let row: Vec<String> =
                (0..self.dim).map(|j| format!("{:.6}", self.get(i, j))).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// An assignment of one matrix per terminal, with a shared dimension and a
/// Frobenius-norm cap. Serializable so any verdict can be replayed exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Substitution {
    pub dim: usize,
    pub map: BTreeMap<String, Matrix>,
    pub norm_bound: f64,
    /// The seed the substitution was drawn from, when it was drawn randomly.
    pub seed: Option<u64>,
}

impl Substitution {
    pub fn get(&self, terminal: &str) -> Option<&Matrix> {
        self.map.get(terminal)
    }

    /// A scalar substitution mapping every terminal to the 1×1 matrix [t].
    pub fn scalar<I, S>(terminals: I, t: f64) -> Substitution
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let map: BTreeMap<String, Matrix> =
            terminals.into_iter().map(|s| (s.into(), Matrix::scalar(t))).collect();
        Substitution { dim: 1, map, norm_bound: t.abs(), seed: None }
    }
}

/// Draw one matrix per terminal, deterministically in `seed`. Entries start
/// uniform in [−1, 1] and the matrix is rescaled so its Frobenius norm is
/// delta·r with r uniform in [0.5, 1]: the norm cap holds exactly while the
/// entries stay as large as the cap allows. Terminals are processed in
/// sorted order, so the draw does not depend on input ordering.
pub fn random_substitution<S: AsRef<str>>(
    terminals: &[S],
    dim: usize,
    delta: f64,
    seed: u64,
) -> Substitution {
    assert!(dim >= 1, "dimension must be positive");
    assert!(delta > 0.0, "delta must be positive");
    let mut names: Vec<&str> = terminals.iter().map(|s| s.as_ref()).collect();
    names.sort_unstable();
    names.dedup();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut map = BTreeMap::new();
    for name in names {
        let matrix = loop {
            let entries: Vec<f64> = (0..dim * dim).map(|_| rng.random_range(-1.0..=1.0)).collect();
            let raw = Matrix { dim, entries };
            let norm = raw.frobenius_norm();
            if norm > 0.0 {
                let target = delta * rng.random_range(0.5..=1.0);
                break raw.scale(target / norm);
            }
        };
        map.insert(name.to_string(), matrix);
    }
    Substitution { dim, map, norm_bound: delta, seed: Some(seed) }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_law() {
        let a = Matrix::new(2, vec![1.0, 2.0, 3.0, 4.0]);
        assert_eq!(Matrix::identity(2).mul(&a), a);
        assert_eq!(a.mul(&Matrix::identity(2)), a);
    }

    #[test]
    fn frobenius_of_identity() {
        assert!((Matrix::identity(3).frobenius_norm() - 3.0f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn triangular_product_formula() {
        // [[u1, v1], [0, 1]] · [[u2, v2], [0, 1]] = [[u1 u2, u1 v2 + v1], [0, 1]]
        let m1 = Matrix::new(2, vec![2.0, 5.0, 0.0, 1.0]);
        let m2 = Matrix::new(2, vec![3.0, 7.0, 0.0, 1.0]);
        let prod = m1.mul(&m2);
        assert_eq!(prod, Matrix::new(2, vec![6.0, 19.0, 0.0, 1.0]));
    }

    #[test]
    fn max_abs_diff_examples() {
        let a = Matrix::identity(2);
        assert_eq!(a.max_abs_diff(&a), 0.0);
        let b = Matrix::new(2, vec![1.0, 0.0, 0.0, 2.0]);
        assert_eq!(a.max_abs_diff(&b), 1.0);
    }

    #[test]
    #[should_panic(expected = "dimension mismatch")]
    fn mul_rejects_mismatched_dims() {
        let _ = Matrix::identity(2).mul(&Matrix::identity(3));
    }

    #[test]
    #[should_panic(expected = "finite")]
    fn constructor_rejects_nan() {
        let _ = Matrix::new(1, vec![f64::NAN]);
    }

    #[test]
    fn random_substitution_is_deterministic() {
        let a = random_substitution(&["a", "b"], 3, 0.3, 42);
        let b = random_substitution(&["b", "a"], 3, 0.3, 42);
        assert_eq!(a, b);
        let c = random_substitution(&["a", "b"], 3, 0.3, 43);
        assert_ne!(a, c);
    }

    #[test]
    fn random_substitution_respects_norm_envelope() {
        for seed in 0..50 {
            let sub = random_substitution(&["a", "b", "c"], 2, 0.3, seed);
            for m in sub.map.values() {
                let norm = m.frobenius_norm();
                assert!((0.15 - 1e-12..=0.3 + 1e-12).contains(&norm), "norm {norm} out of envelope");
            }
        }
    }

    #[test]
    fn random_norms_fill_the_envelope() {
        // 1000 samples at delta = 0.3 should cover [0.15, 0.3] without gaps.
        let mut norms: Vec<f64> = (0..1000u64)
            .map(|seed| random_substitution(&["a"], 2, 0.3, seed).map["a"].frobenius_norm())
            .collect();
        norms.sort_by(f64::total_cmp);
        assert!(norms[0] < 0.16);
        assert!(norms[999] > 0.29);
        // No bucket of the 10-way split may be empty.
        let mut buckets = [0usize; 10];
        for n in &norms {
            let b = (((n - 0.15) / 0.15 * 10.0) as usize).min(9);
            buckets[b] += 1;
        }
        assert!(buckets.iter().all(|&c| c > 20), "buckets {buckets:?}");
    }

    #[test]
    fn submultiplicativity_of_frobenius_norm() {
        for rng_seed in 0..10_000u64 {
            let sub = random_substitution(&["a", "b"], 3, 1.0, rng_seed);
            let a = &sub.map["a"];
            let b = &sub.map["b"];
            let lhs = a.mul(b).frobenius_norm();
            let rhs = a.frobenius_norm() * b.frobenius_norm();
            assert!(lhs <= rhs * (1.0 + 1e-12), "{lhs} > {rhs}");
        }
    }

    #[test]
    fn mul_matches_naive_reference() {
        fn naive(a: &Matrix, b: &Matrix) -> Matrix {
            let n = a.dim;
            let mut out = Matrix::zero(n);
            for i in 0..n {
                for j in 0..n {
                    let mut acc = 0.0;
                    for k in 0..n {
                        acc += a.get(i, k) * b.get(k, j);
                    }
                    out.set(i, j, acc);
                }
            }
            out
        }
        for seed in 0..100 {
            let sub = random_substitution(&["a", "b"], 5, 1.0, seed);
            let a = &sub.map["a"];
            let b = &sub.map["b"];
            let fast = a.mul(b);
            let slow = naive(a, b);
            for (x, y) in fast.entries.iter().zip(&slow.entries) {
                let scale = x.abs().max(y.abs()).max(1e-300);
                assert!((x - y).abs() / scale <= 1e-15);
            }
        }
    }

    #[test]
    fn substitution_json_round_trip() {
        let sub = random_substitution(&["a", "b"], 2, 0.25, 7);
        let json = serde_json::to_string(&sub).unwrap();
        let back: Substitution = serde_json::from_str(&json).unwrap();
        assert_eq!(sub, back);
    }
}
