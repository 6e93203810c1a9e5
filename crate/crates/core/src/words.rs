//! Weighted signed alphabets, words, the prefix/suffix criterion for
//! strongly free monomial sets, and automaton-based counting of words that
//! avoid a forbidden set of factors.
//!
//! Counting uses a failure-link (Aho-Corasick style) automaton over the
//! generator alphabet, so the per-weight cost is `O(states * generators)`
//! rather than a factor scan per word.

use std::collections::{HashMap, VecDeque};

use thiserror::Error;

use crate::scalar::{Parity, Scalar};
use crate::series::SignedSeries;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlphabetError {
    #[error("duplicate generator name `{0}`")]
    DuplicateName(String),
    #[error("generator `{0}` must have weight >= 1")]
    ZeroWeight(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("a forbidden word must be nonempty")]
    EmptyWord,
}

/// One generator: a name, a positive weight and a sign degree.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Generator {
    pub name: String,
    pub weight: u32,
    pub parity: Parity,
}

/// An ordered list of generators with unique names.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Alphabet {
    gens: Vec<Generator>,
}

impl Alphabet {
    pub fn new(gens: Vec<Generator>) -> Result<Self, AlphabetError> {
        let mut seen = HashMap::new();
        for g in &gens {
            if g.weight == 0 {
                return Err(AlphabetError::ZeroWeight(g.name.clone()));
            }
            if seen.insert(g.name.clone(), ()).is_some() {
                return Err(AlphabetError::DuplicateName(g.name.clone()));
            }
        }
        Ok(Alphabet { gens })
    }

    /// Convenience constructor: `n` generators named `prefix1..prefixN`,
    /// all of weight one and the given parity.
    pub fn uniform(prefix: &str, n: u32, parity: Parity) -> Self {
        Alphabet {
            gens: (1..=n)
                .map(|i| Generator {
                    name: format!("{prefix}{i}"),
                    weight: 1,
                    parity,
                })
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn gen(&self, i: u32) -> &Generator {
        &self.gens[i as usize]
    }

    pub fn gens(&self) -> &[Generator] {
        &self.gens
    }

    pub fn index_of(&self, name: &str) -> Result<u32, AlphabetError> {
        self.gens
            .iter()
            .position(|g| g.name == name)
            .map(|i| i as u32)
            .ok_or_else(|| AlphabetError::UnknownGenerator(name.to_string()))
    }

    /// The generating series `V(z, y)`.
    pub fn series<T: Scalar>(&self, trunc: u32) -> SignedSeries<T> {
        let mut v = SignedSeries::zero(trunc);
        for g in &self.gens {
            v.add_to(g.weight, g.parity, T::one());
        }
        v
    }
}

/// A word in the free monoid on the alphabet, stored as generator indices.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Word(pub Vec<u32>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weight(&self, alphabet: &Alphabet) -> u32 {
        self.0.iter().map(|&i| alphabet.gen(i).weight).sum()
    }

    pub fn parity(&self, alphabet: &Alphabet) -> Parity {
        self.0
            .iter()
            .fold(Parity::Even, |acc, &i| acc + alphabet.gen(i).parity)
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn is_factor_of(&self, other: &Word) -> bool {
        !self.is_empty()
            && other.0.windows(self.len()).any(|w| w == self.0.as_slice())
    }

    pub fn display(&self, alphabet: &Alphabet) -> String {
        if self.is_empty() {
            return "1".to_string();
        }
        self.0
            .iter()
            .map(|&i| alphabet.gen(i).name.as_str())
            .collect::<Vec<_>>()
            .join("*")
    }
}

/// A finite set of nonempty words, duplicate-free.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MonomialSet {
    words: Vec<Word>,
}

impl MonomialSet {
    pub fn new(mut words: Vec<Word>) -> Result<Self, AlphabetError> {
        if words.iter().any(Word::is_empty) {
            return Err(AlphabetError::EmptyWord);
        }
        words.sort();
        words.dedup();
        Ok(MonomialSet { words })
    }

    pub fn empty() -> Self {
        MonomialSet { words: Vec::new() }
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn series<T: Scalar>(&self, alphabet: &Alphabet, trunc: u32) -> SignedSeries<T> {
        let mut s = SignedSeries::zero(trunc);
        for w in &self.words {
            s.add_to(w.weight(alphabet), w.parity(alphabet), T::one());
        }
        s
    }
}

/// The prefix/suffix criterion for strong freeness of a monomial set: no
/// member may be a factor of another, and no proper nonempty suffix of a
/// member may equal a proper nonempty prefix of a member (self-pairs
/// included).
pub fn is_strongly_free_monomials(omega: &MonomialSet) -> bool {
    let words = omega.words();
    for (i, w) in words.iter().enumerate() {
        for (j, v) in words.iter().enumerate() {
            if i != j && w.is_factor_of(v) {
                return false;
            }
            // proper nonempty suffix of w equal to a proper nonempty prefix of v
            for l in 1..w.len() {
                if l < v.len() && w.0[w.len() - l..] == v.0[..l] {
                    return false;
                }
            }
        }
    }
    true
}

/// Deterministic automaton whose live states recognize words avoiding every
/// member of a forbidden factor set. States are the proper prefixes of the
/// forbidden words; transitions follow trie edges and otherwise failure
/// links.
pub struct FactorAutomaton {
    /// transitions[state][generator] -> state, or DEAD
    transitions: Vec<Vec<u32>>,
}

const DEAD: u32 = u32::MAX;

impl FactorAutomaton {
    pub fn new(alphabet: &Alphabet, omega: &MonomialSet) -> Self {
        let k = alphabet.len();
        // trie over forbidden words
        let mut children: Vec<Vec<Option<u32>>> = vec![vec![None; k]];
        let mut terminal = vec![false];
        for w in omega.words() {
            let mut s = 0usize;
            for &g in &w.0 {
                let next = match children[s][g as usize] {
                    Some(n) => n,
                    None => {
                        children.push(vec![None; k]);
                        terminal.push(false);
                        let n = (children.len() - 1) as u32;
                        children[s][g as usize] = Some(n);
                        n
                    }
                };
                s = next as usize;
            }
            terminal[s] = true;
        }
        // breadth-first failure links; a state whose failure chain hits a
        // terminal is itself dead
        let n_states = children.len();
        let mut fail = vec![0u32; n_states];
        let mut dead = terminal.clone();
        let mut transitions = vec![vec![DEAD; k]; n_states];
        let mut queue = VecDeque::new();
        for g in 0..k {
            if let Some(c) = children[0][g] {
                fail[c as usize] = 0;
                queue.push_back(c);
            }
        }
        while let Some(s) = queue.pop_front() {
            let su = s as usize;
            if dead[fail[su] as usize] {
                dead[su] = true;
            }
            for g in 0..k {
                if let Some(c) = children[su][g] {
                    fail[c as usize] = Self::goto(&children, &fail, fail[su], g);
                    queue.push_back(c);
                }
            }
        }
        // tabulate transitions among live states
        for s in 0..n_states {
            if dead[s] {
                continue;
            }
            for g in 0..k {
                let t = Self::goto(&children, &fail, s as u32, g);
                transitions[s][g] = if dead[t as usize] { DEAD } else { t };
            }
        }
        FactorAutomaton { transitions }
    }

    fn goto(children: &[Vec<Option<u32>>], fail: &[u32], mut s: u32, g: usize) -> u32 {
        loop {
            if let Some(c) = children[s as usize][g] {
                return c;
            }
            if s == 0 {
                return 0;
            }
            s = fail[s as usize];
        }
    }

    pub fn states(&self) -> usize {
        self.transitions.len()
    }

    pub fn step(&self, state: u32, generator: u32) -> Option<u32> {
        let t = self.transitions[state as usize][generator as usize];
        (t != DEAD).then_some(t)
    }
}

/// Weight/parity-graded counts of words avoiding `omega` as a factor,
/// including the empty word at weight zero.
pub fn count_normal_words<T: Scalar>(
    alphabet: &Alphabet,
    omega: &MonomialSet,
    trunc: u32,
) -> SignedSeries<T> {
    let aut = FactorAutomaton::new(alphabet, omega);
    // counts[weight][state] as (even, odd) scalar pair per parity
    let states = aut.states();
    let mut even: Vec<Vec<T>> = vec![vec![T::zero(); states]; trunc as usize + 1];
    let mut odd = even.clone();
    even[0][0] = T::one();
    let mut out = SignedSeries::zero(trunc);
    out.add_to(0, Parity::Even, T::one());
    for q in 0..trunc {
        for s in 0..states {
            if even[q as usize][s].is_zero() && odd[q as usize][s].is_zero() {
                continue;
            }
            for (g_idx, g) in alphabet.gens().iter().enumerate() {
                let nq = q + g.weight;
                if nq > trunc {
                    continue;
                }
                if let Some(t) = aut.step(s as u32, g_idx as u32) {
                    let (e, o) = (
                        even[q as usize][s].clone(),
                        odd[q as usize][s].clone(),
                    );
                    let (de, do_) = match g.parity {
                        Parity::Even => (e, o),
                        Parity::Odd => (o, e),
                    };
                    let te = &mut even[nq as usize][t as usize];
                    *te = te.clone() + de.clone();
                    let to = &mut odd[nq as usize][t as usize];
                    *to = to.clone() + do_.clone();
                    out.add_to(nq, Parity::Even, de);
                    out.add_to(nq, Parity::Odd, do_);
                }
            }
        }
    }
    out
}

/// Outcome of comparing the automaton count against the strongly-free
/// quotient series `1/(1 - V + omega)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SeriesCheckReport<T> {
    pub counted: SignedSeries<T>,
    pub predicted: SignedSeries<T>,
    /// First `(q, eps)` where the two disagree, if any.
    pub first_discrepancy: Option<(u32, Parity)>,
}

impl<T> SeriesCheckReport<T> {
    pub fn equal(&self) -> bool {
        self.first_discrepancy.is_none()
    }
}

/// Compare the graded count of `omega`-avoiding words with the minimal
/// quotient series `1/(1 - V + omega)` up to the bound. Equality holds
/// exactly when `omega` is a strongly free set of monomials.
pub fn strongly_free_series_check<T: Scalar>(
    alphabet: &Alphabet,
    omega: &MonomialSet,
    trunc: u32,
) -> SeriesCheckReport<T> {
    let counted = count_normal_words::<T>(alphabet, omega, trunc);
    let denom = &(&SignedSeries::one(trunc) - &alphabet.series(trunc))
        + &omega.series(alphabet, trunc);
    let predicted = denom
        .invert()
        .expect("1 - V + omega has constant term 1");
    let mut first = None;
    'outer: for q in 0..=trunc {
        for eps in [Parity::Even, Parity::Odd] {
            if counted.get(q, eps) != predicted.get(q, eps) {
                first = Some((q, eps));
                break 'outer;
            }
        }
    }
    SeriesCheckReport {
        counted,
        predicted,
        first_discrepancy: first,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rat;
    use num_traits::{FromPrimitive, One, Zero};

    fn r(n: i64) -> Rat {
        Rat::from_i64(n).unwrap()
    }

    fn two_even() -> Alphabet {
        Alphabet::uniform("x", 2, Parity::Even)
    }

    fn word(letters: &[u32]) -> Word {
        Word(letters.to_vec())
    }

    #[test]
    fn alphabet_validation() {
        assert!(Alphabet::new(vec![
            Generator { name: "a".into(), weight: 1, parity: Parity::Odd },
            Generator { name: "a".into(), weight: 2, parity: Parity::Even },
        ])
        .is_err());
        assert!(Alphabet::new(vec![Generator {
            name: "a".into(),
            weight: 0,
            parity: Parity::Even
        }])
        .is_err());
    }

    #[test]
    fn strongly_free_criterion_examples() {
        // {x1 x2} is strongly free
        let sf = MonomialSet::new(vec![word(&[0, 1])]).unwrap();
        assert!(is_strongly_free_monomials(&sf));
        // {aa} overlaps itself
        let aa = MonomialSet::new(vec![word(&[0, 0])]).unwrap();
        assert!(!is_strongly_free_monomials(&aa));
        // {ab, ba}: suffix b meets prefix b
        let cycle = MonomialSet::new(vec![word(&[0, 1]), word(&[1, 0])]).unwrap();
        assert!(!is_strongly_free_monomials(&cycle));
        // containment: {b, ab}
        let contain = MonomialSet::new(vec![word(&[1]), word(&[0, 1])]).unwrap();
        assert!(!is_strongly_free_monomials(&contain));
        // single letters are strongly free
        let single = MonomialSet::new(vec![word(&[0])]).unwrap();
        assert!(is_strongly_free_monomials(&single));
    }

    #[test]
    fn count_avoiding_x1x2() {
        // words on two even letters avoiding x1x2: 1, 2, 3, 4, ... per weight
        let a = two_even();
        let omega = MonomialSet::new(vec![word(&[0, 1])]).unwrap();
        let c = count_normal_words::<Rat>(&a, &omega, 8);
        for q in 0..=8u32 {
            assert_eq!(c.get(q, Parity::Even), r(q as i64 + 1));
        }
    }

    #[test]
    fn count_avoiding_aa_is_fibonacci_like() {
        // avoiding x1 x1: 1, 2, 3, 5, 8, 13 — not the strongly free count
        let a = two_even();
        let omega = MonomialSet::new(vec![word(&[0, 0])]).unwrap();
        let c = count_normal_words::<Rat>(&a, &omega, 6);
        let fib = [1i64, 2, 3, 5, 8, 13, 21];
        for (q, &f) in fib.iter().enumerate() {
            assert_eq!(c.get(q as u32, Parity::Even), r(f));
        }
    }

    #[test]
    fn count_with_empty_forbidden_set_is_tensor_algebra() {
        // 1/(1-V) for one even and one odd generator
        let a = Alphabet::new(vec![
            Generator { name: "u".into(), weight: 1, parity: Parity::Even },
            Generator { name: "v".into(), weight: 1, parity: Parity::Odd },
        ])
        .unwrap();
        let c = count_normal_words::<Rat>(&a, &MonomialSet::empty(), 7);
        let v = a.series::<Rat>(7);
        let expect = (&SignedSeries::one(7) - &v).invert().unwrap();
        assert_eq!(c, expect);
    }

    #[test]
    fn count_respects_weights_and_parities() {
        // one odd generator of weight 2: words are its powers
        let a = Alphabet::new(vec![Generator {
            name: "s".into(),
            weight: 2,
            parity: Parity::Odd,
        }])
        .unwrap();
        let c = count_normal_words::<Rat>(&a, &MonomialSet::empty(), 9);
        for q in 0..=9u32 {
            let (e, o) = match (q % 2, (q / 2) % 2) {
                (0, 0) => (Rat::one(), Rat::zero()),
                (0, 1) => (Rat::zero(), Rat::one()),
                _ => (Rat::zero(), Rat::zero()),
            };
            assert_eq!(c.get(q, Parity::Even), e, "q={q}");
            assert_eq!(c.get(q, Parity::Odd), o, "q={q}");
        }
    }

    #[test]
    fn series_check_examples() {
        let a = two_even();
        // strongly free: equal up to the bound
        let sf = MonomialSet::new(vec![word(&[0, 1])]).unwrap();
        assert!(strongly_free_series_check::<Rat>(&a, &sf, 10).equal());
        // self-overlap: first discrepancy at weight 3 (5 words vs predicted 4)
        let aa = MonomialSet::new(vec![word(&[0, 0])]).unwrap();
        let rep = strongly_free_series_check::<Rat>(&a, &aa, 10);
        assert_eq!(rep.first_discrepancy, Some((3, Parity::Even)));
        assert_eq!(rep.counted.get(3, Parity::Even), r(5));
        assert_eq!(rep.predicted.get(3, Parity::Even), r(4));
        // empty set: tensor algebra, equal
        assert!(strongly_free_series_check::<Rat>(&a, &MonomialSet::empty(), 10).equal());
    }
}
