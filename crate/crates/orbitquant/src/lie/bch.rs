//! Baker-Campbell-Hausdorff product through Dynkin's series.

use std::collections::BTreeMap;

use super::algebra::LieAlgebraSpec;
use super::scalar::{rint, Rat, Ring};

pub const DEFAULT_BCH_DEPTH: usize = 6;

/// Letter of a bracket word: `false` is `X`, `true` is `Y`.
type Word = Vec<bool>;

/// Coefficients of the right-nested words `[w_1,[w_2,[…,w_N]]]` in `log(e^X e^Y)`.
#[derive(Clone, Debug)]
pub struct DynkinTable {
    depth: usize,
    terms: Vec<(Word, Rat)>,
}

impl DynkinTable {
    pub fn new(depth: usize) -> Self {
        let mut acc: BTreeMap<Word, Rat> = BTreeMap::new();
        let mut fact = vec![rint(1)];
        for k in 1..=depth as i64 {
            let prev = fact.last().unwrap().clone();
            fact.push(prev * rint(k));
        }
        // Sum over k blocks X^{r_i} Y^{s_i} with r_i + s_i >= 1 and total length <= depth.
        fn rec(
            depth: usize,
            k: usize,
            word: &mut Word,
            denom: Rat,
            fact: &[Rat],
            acc: &mut BTreeMap<Word, Rat>,
        ) {
            if k > 0 {
                let sign = if k % 2 == 1 { rint(1) } else { rint(-1) };
                let len = word.len() as i64;
                let c = sign / (rint(k as i64) * rint(len) * denom.clone());
                let e = acc.entry(word.clone()).or_insert_with(|| rint(0));
                *e += c;
            }
            let used = word.len();
            for r in 0..=depth - used {
                for s in 0..=depth - used - r {
                    if r + s == 0 {
                        continue;
                    }
                    let base = word.len();
                    word.extend(std::iter::repeat(false).take(r));
                    word.extend(std::iter::repeat(true).take(s));
                    rec(depth, k + 1, word, denom.clone() * fact[r].clone() * fact[s].clone(), fact, acc);
                    word.truncate(base);
                }
            }
        }
        rec(depth, 0, &mut Vec::new(), rint(1), &fact, &mut acc);
        let terms = acc
            .into_iter()
            .filter(|(w, c)| {
                // Words whose innermost bracket is [X,X] or [Y,Y] vanish.
                !num_traits::Zero::is_zero(c) && (w.len() < 2 || w[w.len() - 1] != w[w.len() - 2])
            })
            .collect();
        DynkinTable { depth, terms }
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Iterates over `(word, coefficient)`, `true` letters standing for `Y`.
    pub fn terms(&self) -> impl Iterator<Item = (&[bool], &Rat)> {
        self.terms.iter().map(|(w, c)| (w.as_slice(), c))
    }

    /// `log(exp X exp Y)` truncated after words of length `max_len`.
    pub fn apply<T: Ring>(&self, spec: &LieAlgebraSpec, x: &[T], y: &[T], max_len: usize) -> Vec<T> {
        let n = spec.dim;
        let mut out = vec![T::zero(); n];
        // Terms are sorted lexicographically; cache right-nested suffix values by word.
        let mut cache: BTreeMap<Vec<bool>, Vec<T>> = BTreeMap::new();
        for (w, c) in &self.terms {
            if w.len() > max_len {
                continue;
            }
            let v = nested(spec, w, x, y, &mut cache);
            for (o, vi) in out.iter_mut().zip(v) {
                if !vi.is_zero() {
                    *o = o.clone() + vi.scale(c);
                }
            }
        }
        out
    }
}

fn nested<T: Ring>(
    spec: &LieAlgebraSpec,
    w: &[bool],
    x: &[T],
    y: &[T],
    cache: &mut BTreeMap<Vec<bool>, Vec<T>>,
) -> Vec<T> {
    if let Some(v) = cache.get(w) {
        return v.clone();
    }
    let letter = if w[0] { y } else { x };
    let v = if w.len() == 1 {
        letter.to_vec()
    } else {
        let inner = nested(spec, &w[1..], x, y, cache);
        spec.bracket(letter, &inner)
    };
    cache.insert(w.to_vec(), v.clone());
    v
}
