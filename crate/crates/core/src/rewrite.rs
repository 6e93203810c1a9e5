//! Finitely presented graded algebras and a degree-truncated rewriting
//! engine.
//!
//! A [`Presentation`] is a weighted signed alphabet, homogeneous relations
//! with exact rational coefficients, a generator precedence (for the
//! degree-lexicographic order) and a weight bound. [`complete`] runs
//! overlap/containment resolution until every critical pair of weight
//! within the bound reduces to zero; normal words of bounded weight then
//! form a basis of the quotient, which is what the homology oracle builds
//! its complexes on.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg;
use crate::scalar::{Parity, Scalar};
use crate::series::SignedSeries;
use crate::words::{Alphabet, AlphabetError, FactorAutomaton, Generator, MonomialSet, Word};
use crate::Rat;


#[derive(Debug, Error)]
pub enum RewriteError {
    #[error(transparent)]
    Alphabet(#[from] AlphabetError),
    #[error("relation {index} is not homogeneous in (weight, parity)")]
    NonHomogeneous { index: usize },
    #[error("relation {index} is zero")]
    ZeroRelation { index: usize },
    #[error("order list must name every generator exactly once")]
    BadOrder,
    #[error("presentation file: {0}")]
    Format(String),
}

/// A linear combination of words with scalar coefficients.
pub type LinComb<T> = Vec<(T, Word)>;

/// Presentation of a graded algebra: alphabet, homogeneous relations,
/// generator precedence, weight bound.
#[derive(Clone, Debug)]
pub struct Presentation<T> {
    pub alphabet: Alphabet,
    pub relations: Vec<LinComb<T>>,
    /// `precedence[g]` is the rank of generator `g`; rank 0 is the largest
    /// generator in the lexicographic comparison.
    pub precedence: Vec<u32>,
    pub trunc: u32,
}

impl<T: Scalar> Presentation<T> {
    /// Presentation with the alphabet's own listing as the order.
    pub fn new(alphabet: Alphabet, relations: Vec<LinComb<T>>, trunc: u32) -> Self {
        let precedence = (0..alphabet.len() as u32).collect();
        Presentation {
            alphabet,
            relations,
            precedence,
            trunc,
        }
    }
}

/// Degree-lexicographic comparison: weight first, then letterwise by
/// precedence rank (rank 0 beats rank 1).
fn deglex(a: &Word, b: &Word, alphabet: &Alphabet, precedence: &[u32]) -> std::cmp::Ordering {
    use std::cmp::Ordering;
    let wa = a.weight(alphabet);
    let wb = b.weight(alphabet);
    match wa.cmp(&wb) {
        Ordering::Equal => {}
        o => return o,
    }
    for (x, y) in a.0.iter().zip(b.0.iter()) {
        // smaller rank = larger word
        match precedence[*y as usize].cmp(&precedence[*x as usize]) {
            Ordering::Equal => {}
            o => return o,
        }
    }
    a.len().cmp(&b.len()).reverse() // equal weight and common prefix: same word
}

/// A rewrite rule `lead -> tail`, leading coefficient normalized to one;
/// every tail word is deglex-smaller than `lead` and of the same weight and
/// parity.
#[derive(Clone, Debug)]
pub struct Rule<T> {
    pub lead: Word,
    pub tail: LinComb<T>,
    pub weight: u32,
}

/// A rule set with all critical pairs of weight `<= complete_up_to`
/// resolved; normal words of bounded weight form a basis of the quotient.
pub struct RewritingSystem<T> {
    pub alphabet: Alphabet,
    pub precedence: Vec<u32>,
    pub rules: Vec<Rule<T>>,
    pub complete_up_to: u32,
}

struct Reducer<'a, T> {
    alphabet: &'a Alphabet,
    precedence: &'a [u32],
    rules: &'a [Rule<T>],
}

impl<'a, T: Scalar> Reducer<'a, T> {
    fn find_reduction(&self, w: &Word) -> Option<(usize, usize)> {
        for (ri, rule) in self.rules.iter().enumerate() {
            let l = rule.lead.len();
            if l > w.len() {
                continue;
            }
            for pos in 0..=w.len() - l {
                if w.0[pos..pos + l] == rule.lead.0[..] {
                    return Some((ri, pos));
                }
            }
        }
        None
    }

    /// Full reduction to normal form. Terminates because every replacement
    /// is strictly deglex-smaller at fixed weight.
    fn reduce(&self, poly: HashMap<Word, T>) -> HashMap<Word, T> {
        let mut acc: HashMap<Word, T> = poly;
        acc.retain(|_, c| !c.is_zero());
        loop {
            let Some((w, (ri, pos))) = acc
                .keys()
                .find_map(|w| self.find_reduction(w).map(|hit| (w.clone(), hit)))
            else {
                return acc;
            };
            let c = acc.remove(&w).expect("key came from acc");
            let rule = &self.rules[ri];
            let llen = rule.lead.len();
            for (tc, tw) in &rule.tail {
                let mut nw = Vec::with_capacity(w.len() - llen + tw.len());
                nw.extend_from_slice(&w.0[..pos]);
                nw.extend_from_slice(&tw.0);
                nw.extend_from_slice(&w.0[pos + llen..]);
                let entry = acc.entry(Word(nw)).or_insert_with(T::zero);
                *entry = entry.clone() + c.clone() * tc.clone();
            }
            acc.retain(|_, c| !c.is_zero());
        }
    }

    fn leading(&self, poly: &HashMap<Word, T>) -> Option<Word> {
        poly.keys()
            .max_by(|a, b| deglex(a, b, self.alphabet, self.precedence))
            .cloned()
    }
}

fn validate_relation<T: Scalar>(
    rel: &LinComb<T>,
    alphabet: &Alphabet,
    index: usize,
) -> Result<Option<(u32, Parity)>, RewriteError> {
    let mut sig = None;
    let mut nonzero = false;
    for (c, w) in rel {
        if c.is_zero() {
            continue;
        }
        nonzero = true;
        let s = (w.weight(alphabet), w.parity(alphabet));
        match sig {
            None => sig = Some(s),
            Some(prev) if prev != s => {
                return Err(RewriteError::NonHomogeneous { index });
            }
            _ => {}
        }
    }
    if !nonzero {
        return Err(RewriteError::ZeroRelation { index });
    }
    Ok(sig)
}

/// Run truncated completion: resolve every overlap and containment
/// ambiguity of weight within the presentation bound.
pub fn complete<T: Scalar>(p: &Presentation<T>) -> Result<RewritingSystem<T>, RewriteError> {
    if p.precedence.len() != p.alphabet.len() {
        return Err(RewriteError::BadOrder);
    }
    {
        let mut seen = vec![false; p.alphabet.len()];
        for &r in &p.precedence {
            let Some(slot) = seen.get_mut(r as usize) else {
                return Err(RewriteError::BadOrder);
            };
            if *slot {
                return Err(RewriteError::BadOrder);
            }
            *slot = true;
        }
    }
    // pending polynomials bucketed by weight
    let mut pending: Vec<Vec<HashMap<Word, T>>> = vec![Vec::new(); p.trunc as usize + 1];
    for (i, rel) in p.relations.iter().enumerate() {
        let sig = validate_relation(rel, &p.alphabet, i)?;
        let (w, _) = sig.expect("validated nonzero");
        if w > p.trunc {
            continue; // beyond the bound: cannot affect anything we compute
        }
        let mut poly = HashMap::new();
        for (c, word) in rel {
            let e = poly.entry(word.clone()).or_insert_with(T::zero);
            *e = e.clone() + c.clone();
        }
        pending[w as usize].push(poly);
    }

    let mut rules: Vec<Rule<T>> = Vec::new();

    for w in 1..=p.trunc as usize {
        while let Some(poly) = pending[w].pop() {
            let reducer = Reducer {
                alphabet: &p.alphabet,
                precedence: &p.precedence,
                rules: &rules,
            };
            let nf = reducer.reduce(poly);
            if nf.is_empty() {
                continue;
            }
            let lead = reducer.leading(&nf).expect("nonempty");
            let lead_coef = nf[&lead].clone();
            let tail: LinComb<T> = nf
                .iter()
                .filter(|(word, _)| **word != lead)
                .map(|(word, c)| (-c.clone() / lead_coef.clone(), word.clone()))
                .collect();
            let new_rule = Rule {
                lead: lead.clone(),
                tail,
                weight: w as u32,
            };
            let new_idx = rules.len();
            rules.push(new_rule);
            // full reduction + weight-ascending processing keep every lead in
            // normal form with respect to the others, so no existing rule can
            // be invalidated by the new one

            for i in 0..rules.len() {
                schedule_pairs(&p.alphabet, &rules, new_idx, i, p.trunc, &mut pending);
                if i != new_idx {
                    schedule_pairs(&p.alphabet, &rules, i, new_idx, p.trunc, &mut pending);
                }
            }
        }
    }

    Ok(RewritingSystem {
        alphabet: p.alphabet.clone(),
        precedence: p.precedence.clone(),
        rules,
        complete_up_to: p.trunc,
    })
}

/// Schedule the S-polynomials of all ambiguities where a suffix of
/// `rules[a].lead` meets a prefix of `rules[b].lead`, or `rules[a].lead`
/// contains `rules[b].lead` as a proper factor. Ambiguities heavier than
/// the bound are irrelevant and skipped.
fn schedule_pairs<T: Scalar>(
    alphabet: &Alphabet,
    rules: &[Rule<T>],
    a: usize,
    b: usize,
    trunc: u32,
    pending: &mut [Vec<HashMap<Word, T>>],
) {
    let (la, lb) = (&rules[a].lead, &rules[b].lead);
    // overlap: la = u s, lb = s v with s proper and nonempty on both sides
    for s_len in 1..la.len().min(lb.len()) {
        if la.0[la.len() - s_len..] != lb.0[..s_len] {
            continue;
        }
        let s_weight: u32 = la.0[la.len() - s_len..]
            .iter()
            .map(|&g| alphabet.gen(g).weight)
            .sum();
        let amb_weight = rules[a].weight + rules[b].weight - s_weight;
        if amb_weight > trunc {
            continue;
        }
        // ambiguity word u s v; its two reductions are tail_a * v and u * tail_b
        let u = &la.0[..la.len() - s_len];
        let v = &lb.0[s_len..];
        let mut poly: HashMap<Word, T> = HashMap::new();
        for (c, t) in &rules[a].tail {
            let mut w = t.0.clone();
            w.extend_from_slice(v);
            let e = poly.entry(Word(w)).or_insert_with(T::zero);
            *e = e.clone() + c.clone();
        }
        for (c, t) in &rules[b].tail {
            let mut w = u.to_vec();
            w.extend_from_slice(&t.0);
            let e = poly.entry(Word(w)).or_insert_with(T::zero);
            *e = e.clone() - c.clone();
        }
        poly.retain(|_, c| !c.is_zero());
        if !poly.is_empty() {
            pending[amb_weight as usize].push(poly);
        }
    }
    // containment: la = u lb v with u or v nonempty; ambiguity word is la
    if a != b && lb.len() < la.len() && rules[a].weight <= trunc {
        for pos in 0..=la.len() - lb.len() {
            if la.0[pos..pos + lb.len()] != lb.0[..] {
                continue;
            }
            let u = &la.0[..pos];
            let v = &la.0[pos + lb.len()..];
            let mut poly: HashMap<Word, T> = HashMap::new();
            for (c, t) in &rules[a].tail {
                let e = poly.entry(t.clone()).or_insert_with(T::zero);
                *e = e.clone() + c.clone();
            }
            for (c, t) in &rules[b].tail {
                let mut w = u.to_vec();
                w.extend_from_slice(&t.0);
                w.extend_from_slice(v);
                let e = poly.entry(Word(w)).or_insert_with(T::zero);
                *e = e.clone() - c.clone();
            }
            poly.retain(|_, c| !c.is_zero());
            if !poly.is_empty() {
                pending[rules[a].weight as usize].push(poly);
            }
        }
    }
}

impl<T: Scalar> RewritingSystem<T> {
    fn reducer(&self) -> Reducer<'_, T> {
        Reducer {
            alphabet: &self.alphabet,
            precedence: &self.precedence,
            rules: &self.rules,
        }
    }

    /// Unique normal form of a linear combination of words.
    pub fn normal_form(&self, element: &LinComb<T>) -> LinComb<T> {
        let mut poly = HashMap::new();
        for (c, w) in element {
            let e = poly.entry(w.clone()).or_insert_with(T::zero);
            *e = e.clone() + c.clone();
        }
        let nf = self.reducer().reduce(poly);
        let mut out: LinComb<T> = nf.into_iter().map(|(w, c)| (c, w)).collect();
        out.sort_by(|(_, x), (_, y)| deglex(y, x, &self.alphabet, &self.precedence));
        out
    }

    /// The rule leads as a monomial set.
    pub fn leads(&self) -> MonomialSet {
        MonomialSet::new(self.rules.iter().map(|r| r.lead.clone()).collect())
            .expect("rule leads are nonempty")
    }

    /// Normal words (words avoiding every lead) of each weight up to the
    /// bound, in a deterministic order, with their parities.
    pub fn normal_words(&self, trunc: u32) -> Vec<Vec<(Word, Parity)>> {
        let aut = FactorAutomaton::new(&self.alphabet, &self.leads());
        let mut out: Vec<Vec<(Word, Parity)>> = vec![Vec::new(); trunc as usize + 1];
        let mut stack: Vec<(u32, u32, Parity, Vec<u32>)> =
            vec![(0, 0, Parity::Even, Vec::new())];
        while let Some((state, weight, parity, word)) = stack.pop() {
            if weight > 0 {
                out[weight as usize].push((Word(word.clone()), parity));
            }
            // descend in reverse generator order so the stack yields
            // lexicographic order on pop
            for g in (0..self.alphabet.len() as u32).rev() {
                let generator = self.alphabet.gen(g);
                let nw = weight + generator.weight;
                if nw > trunc {
                    continue;
                }
                if let Some(next) = aut.step(state, g) {
                    let mut w2 = word.clone();
                    w2.push(g);
                    stack.push((next, nw, parity + generator.parity, w2));
                }
            }
        }
        for bucket in &mut out {
            bucket.sort();
        }
        out
    }

    /// Graded dimension series of the quotient algebra.
    pub fn hilbert_series(&self, trunc: u32) -> SignedSeries<T> {
        crate::words::count_normal_words(&self.alphabet, &self.leads(), trunc)
    }
}

/// Degree-zero cyclic homology, directly from words: per weight, the
/// dimension of the quotient of the normal-word span by graded commutators
/// `uv - (-1)^{|u||v|} vu` of normal words.
pub fn hc0_direct(rs: &RewritingSystem<Rat>, trunc: u32) -> SignedSeries<Rat> {
    use num_traits::{FromPrimitive, Zero};
    let words = rs.normal_words(trunc);
    // index normal words per (weight, parity) block
    let mut index: HashMap<(u32, Parity), HashMap<Word, u32>> = HashMap::new();
    for (q, bucket) in words.iter().enumerate() {
        for (w, p) in bucket {
            let block = index.entry((q as u32, *p)).or_default();
            let next = block.len() as u32;
            block.insert(w.clone(), next);
        }
    }
    let mut out = SignedSeries::zero(trunc);
    for q in 1..=trunc {
        let mut rows: HashMap<Parity, Vec<Vec<(u32, Rat)>>> = HashMap::new();
        for q1 in 1..=q / 2 {
            let q2 = q - q1;
            for (i1, (u, pu)) in words[q1 as usize].iter().enumerate() {
                for (i2, (v, pv)) in words[q2 as usize].iter().enumerate() {
                    if q1 == q2 && i2 < i1 {
                        continue; // the commutator of (v, u) is proportional
                    }
                    if q1 == q2 && i1 == i2 && !pu.is_odd() {
                        continue; // [u, u] = 0 for even u
                    }
                    let sign = Rat::from_i64(pu.koszul_sign(*pv)).unwrap();
                    let commutator = vec![
                        (Rat::from_i64(1).unwrap(), u.concat(v)),
                        (-sign, v.concat(u)),
                    ];
                    let nf = rs.normal_form(&commutator);
                    if nf.is_empty() {
                        continue;
                    }
                    let eps = *pu + *pv;
                    let block = index.get(&(q, eps)).expect("nonzero form lives in a nonempty block");
                    let mut row: Vec<(u32, Rat)> =
                        nf.into_iter().map(|(c, w)| (block[&w], c)).collect();
                    row.sort_by_key(|(c, _)| *c);
                    rows.entry(eps).or_default().push(row);
                }
            }
        }
        for eps in [Parity::Even, Parity::Odd] {
            let dim = index.get(&(q, eps)).map_or(0, |b| b.len());
            let rank = rows.get(&eps).map_or(0, |r| linalg::rank_rat_rows(r));
            out.set(q, eps, Rat::from_i64(dim as i64 - rank as i64).unwrap());
        }
    }
    out
}

// ---------------------------------------------------------------------------
// presentation files

#[derive(Serialize, Deserialize)]
struct GeneratorFile {
    name: String,
    weight: u32,
    parity: u32,
}

#[derive(Serialize, Deserialize)]
struct TermFile {
    coef: String,
    word: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct PresentationFile {
    generators: Vec<GeneratorFile>,
    relations: Vec<Vec<TermFile>>,
    order: Vec<String>,
    trunc: u32,
}

/// Parse the JSON presentation format:
/// `{"generators": [{"name","weight","parity"}...],
///   "relations": [[{"coef": "p/q", "word": ["a","b"]}...]...],
///   "order": ["a","b"...], "trunc": N}`.
pub fn presentation_from_json(text: &str) -> Result<Presentation<Rat>, RewriteError> {
    let file: PresentationFile =
        serde_json::from_str(text).map_err(|e| RewriteError::Format(e.to_string()))?;
    let alphabet = Alphabet::new(
        file.generators
            .iter()
            .map(|g| Generator {
                name: g.name.clone(),
                weight: g.weight,
                parity: Parity::from_u32(g.parity),
            })
            .collect(),
    )?;
    let mut relations = Vec::new();
    for rel in &file.relations {
        let mut terms: LinComb<Rat> = Vec::new();
        for t in rel {
            let coef: Rat = t
                .coef
                .parse()
                .map_err(|_| RewriteError::Format(format!("bad rational `{}`", t.coef)))?;
            let mut letters = Vec::new();
            for name in &t.word {
                letters.push(alphabet.index_of(name)?);
            }
            terms.push((coef, Word(letters)));
        }
        relations.push(terms);
    }
    if file.order.len() != alphabet.len() {
        return Err(RewriteError::BadOrder);
    }
    let mut precedence = vec![u32::MAX; alphabet.len()];
    for (rank, name) in file.order.iter().enumerate() {
        let idx = alphabet.index_of(name)? as usize;
        if precedence[idx] != u32::MAX {
            return Err(RewriteError::BadOrder);
        }
        precedence[idx] = rank as u32;
    }
    Ok(Presentation {
        alphabet,
        relations,
        precedence,
        trunc: file.trunc,
    })
}

/// Graded commutator `[u, v] = uv - (-1)^{|u||v|} vu` of two words.
pub fn graded_commutator<T: Scalar>(alphabet: &Alphabet, u: &Word, v: &Word) -> LinComb<T> {
    let sign = u.parity(alphabet).koszul_sign(v.parity(alphabet));
    vec![
        (T::one(), u.concat(v)),
        (-T::from_i64(sign).unwrap(), v.concat(u)),
    ]
}

/// Canonical JSON for a presentation (used for hashing and round-trips).
pub fn presentation_to_json(p: &Presentation<Rat>) -> serde_json::Value {
    let generators: Vec<_> = p
        .alphabet
        .gens()
        .iter()
        .map(|g| {
            serde_json::json!({
                "name": g.name,
                "weight": g.weight,
                "parity": g.parity.as_u32(),
            })
        })
        .collect();
    let relations: Vec<_> = p
        .relations
        .iter()
        .map(|rel| {
            rel.iter()
                .map(|(c, w)| {
                    serde_json::json!({
                        "coef": c.to_string(),
                        "word": w.0.iter().map(|&i| p.alphabet.gen(i).name.clone()).collect::<Vec<_>>(),
                    })
                })
                .collect::<Vec<_>>()
        })
        .collect();
    let mut order = vec![String::new(); p.alphabet.len()];
    for (g, &rank) in p.precedence.iter().enumerate() {
        order[rank as usize] = p.alphabet.gen(g as u32).name.clone();
    }
    serde_json::json!({
        "generators": generators,
        "relations": relations,
        "order": order,
        "trunc": p.trunc,
    })
}
