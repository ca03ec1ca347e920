//! Permutations of `{1,…,n}`, reduced words, and the weak prefix order.
//!
//! Conventions, fixed once for the whole crate:
//! - one-line notation `[w(1),…,w(n)]` with 1-based values;
//! - `compose(u, w)` is the function `i ↦ u(w(i))` (apply `w` first), so a
//!   word `(i_1,…,i_k)` evaluates to `s_{i_1}·s_{i_2}·⋯·s_{i_k}`;
//! - the canonical reduced word of `w` is the lexicographically smallest
//!   reduced word, obtained greedily from minimal left descents;
//! - `u ⪰ w` ("weak prefix order") holds when `u` is the evaluation of a
//!   prefix of some reduced word of `w`; the identity is the maximum.

use itertools::Itertools;
use std::collections::BTreeSet;
use std::fmt;

/// A permutation of `{1,…,n}` in one-line notation.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    one_line: Vec<usize>,
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.one_line.iter().join(","))
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            one_line: (1..=n).collect(),
        }
    }

    /// The simple transposition `s_r` swapping `r` and `r+1` (`1 ≤ r < n`).
    pub fn transposition(n: usize, r: usize) -> Self {
        assert!(r >= 1 && r < n, "transposition s_{r} out of range for n={n}");
        let mut p = Permutation::identity(n);
        p.one_line.swap(r - 1, r);
        p
    }

    /// Validating constructor from 1-based one-line notation.
    pub fn from_one_line(one_line: Vec<usize>) -> crate::Result<Self> {
        let n = one_line.len();
        let mut seen = vec![false; n];
        for &v in &one_line {
            if v < 1 || v > n || seen[v - 1] {
                return Err(crate::Error::InvalidElement(format!(
                    "not a permutation of 1..={n}: {one_line:?}"
                )));
            }
            seen[v - 1] = true;
        }
        Ok(Permutation { one_line })
    }

    pub fn n(&self) -> usize {
        self.one_line.len()
    }

    pub fn one_line(&self) -> &[usize] {
        &self.one_line
    }

    /// Image of `i` (1-based).
    pub fn apply(&self, i: usize) -> usize {
        self.one_line[i - 1]
    }

    pub fn is_identity(&self) -> bool {
        self.one_line.iter().enumerate().all(|(i, &v)| v == i + 1)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.n(), other.n(), "composing permutations of different ranks");
        Permutation {
            one_line: other.one_line.iter().map(|&v| self.one_line[v - 1]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0usize; self.n()];
        for (i, &v) in self.one_line.iter().enumerate() {
            inv[v - 1] = i + 1;
        }
        Permutation { one_line: inv }
    }

    /// Coxeter length = number of inversions.
    pub fn length(&self) -> usize {
        let mut count = 0;
        for i in 0..self.n() {
            for j in i + 1..self.n() {
                if self.one_line[i] > self.one_line[j] {
                    count += 1;
                }
            }
        }
        count
    }

    /// The longest element `w₀` (`i ↦ n+1−i`), of length `n(n−1)/2`.
    pub fn longest_element(n: usize) -> Self {
        Permutation {
            one_line: (1..=n).rev().collect(),
        }
    }

    /// `self·s_r` — swaps the entries at positions `r`, `r+1`.
    pub fn right_mul_transposition(&self, r: usize) -> Permutation {
        assert!(r >= 1 && r < self.n());
        let mut p = self.clone();
        p.one_line.swap(r - 1, r);
        p
    }

    /// Whether `ℓ(s_r·self) < ℓ(self)`, i.e. `r` appears after `r+1` in
    /// the one-line notation (equivalently `self⁻¹(r) > self⁻¹(r+1)`).
    pub fn has_left_descent(&self, r: usize) -> bool {
        let pos_r = self.one_line.iter().position(|&v| v == r).unwrap();
        let pos_r1 = self.one_line.iter().position(|&v| v == r + 1).unwrap();
        pos_r > pos_r1
    }

    /// The lexicographically smallest reduced word, as generator indices.
    pub fn canonical_reduced_word(&self) -> Vec<usize> {
        let mut word = Vec::with_capacity(self.length());
        let mut w = self.clone();
        'outer: while !w.is_identity() {
            for r in 1..w.n() {
                if w.has_left_descent(r) {
                    word.push(r);
                    // Strip the letter: w := s_r·w (swap the values r, r+1).
                    let pos_r = w.one_line.iter().position(|&v| v == r).unwrap();
                    let pos_r1 = w.one_line.iter().position(|&v| v == r + 1).unwrap();
                    w.one_line.swap(pos_r, pos_r1);
                    continue 'outer;
                }
            }
            unreachable!("non-identity permutation with no left descent");
        }
        word
    }
}

/// Evaluate a word in the simple transpositions.
pub fn evaluate_word(n: usize, word: &[usize]) -> Permutation {
    let mut w = Permutation::identity(n);
    for &r in word {
        w = w.right_mul_transposition(r);
    }
    w
}

/// Whether `ℓ(w·u) = ℓ(w) + ℓ(u)`.
pub fn is_length_additive(w: &Permutation, u: &Permutation) -> bool {
    w.compose(u).length() == w.length() + u.length()
}

/// Weak prefix order `u ⪰ w`: `u` is the evaluation of a prefix of some
/// reduced word of `w` (so the identity is the unique maximum). This is
/// equivalent to `ℓ(u) + ℓ(u⁻¹w) = ℓ(w)`.
pub fn weak_prefix_geq(u: &Permutation, w: &Permutation) -> bool {
    u.length() + u.inverse().compose(w).length() == w.length()
}

/// All permutations of `{1,…,n}` in lexicographic one-line order.
pub fn all_permutations(n: usize) -> Vec<Permutation> {
    if n == 0 {
        return vec![Permutation::identity(0)];
    }
    (1..=n)
        .permutations(n)
        .map(|one_line| Permutation { one_line })
        .collect()
}

/// The fixed enumeration `w_1, w_2, …` of `Sym_n` used for the matrix-unit
/// family: sorted by length, then lexicographically by the one-line
/// notation of the inverse. `w_1` is the identity, and whenever
/// `w_i⁻¹ ≻ w_j⁻¹` strictly in the weak prefix order, `i < j`.
pub fn wf_enumeration(n: usize) -> Vec<Permutation> {
    let mut perms = all_permutations(n);
    perms.sort_by_key(|w| (w.length(), w.inverse().one_line.clone()));
    perms
}

/// All distinct rearrangements of a tuple, in sorted order.
pub fn distinct_rearrangements(tuple: &[u32]) -> Vec<Vec<u32>> {
    let set: BTreeSet<Vec<u32>> = tuple
        .iter()
        .copied()
        .permutations(tuple.len())
        .collect();
    set.into_iter().collect()
}
