//! Words over the two-letter ordered alphabet `g < h`: lexicographic
//! comparison, Lyndon word recognition and enumeration, standard
//! factorization, and the `omega_r = g h^r` family.
//!
//! The algorithms underneath are generic over any ordered alphabet; the
//! public `Word` type fixes the alphabet to `{g, h}` because that is the only
//! one the rest of the library needs.

use std::cmp::Ordering;
use std::fmt;

use crate::{Error, Result};

/// A letter of the alphabet, with `G < H`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    G,
    H,
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Letter::G => "g",
            Letter::H => "h",
        })
    }
}

/// A word in the free monoid on `{g, h}`. The derived `Ord` is exactly the
/// lexicographic order with the proper-prefix-is-smaller convention.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn letter(l: Letter) -> Word {
        Word(vec![l])
    }

    pub fn g() -> Word {
        Word::letter(Letter::G)
    }

    pub fn h() -> Word {
        Word::letter(Letter::H)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Letter count `alpha(y)`.
    pub fn count(&self, l: Letter) -> usize {
        self.0.iter().filter(|&&x| x == l).count()
    }

    /// `(alpha(g), alpha(h))` letter multidegree.
    pub fn multidegree(&self) -> (usize, usize) {
        let g = self.count(Letter::G);
        (g, self.0.len() - g)
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn parse(s: &str) -> Result<Word> {
        s.chars()
            .map(|c| match c {
                'g' => Ok(Letter::G),
                'h' => Ok(Letter::H),
                other => Err(Error::Syntax {
                    line: 1,
                    col: 1,
                    msg: format!("bad letter '{other}' in word"),
                }),
            })
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for l in &self.0 {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

pub fn compare_lex(a: &Word, b: &Word) -> Ordering {
    a.cmp(b)
}

/// Chen–Fox–Lyndon factorization by Duval's algorithm: every word splits
/// uniquely into a nonincreasing product of Lyndon words.
pub fn duval_factorization<T: Ord>(w: &[T]) -> Vec<&[T]> {
    let mut out = Vec::new();
    let n = w.len();
    let mut i = 0;
    while i < n {
        let mut j = i + 1;
        let mut k = i;
        while j < n && w[k] <= w[j] {
            if w[k] < w[j] {
                k = i;
            } else {
                k += 1;
            }
            j += 1;
        }
        while i <= k {
            out.push(&w[i..i + j - k]);
            i += j - k;
        }
    }
    out
}

pub fn is_lyndon_slice<T: Ord>(w: &[T]) -> bool {
    !w.is_empty() && duval_factorization(w).len() == 1
}

/// Lyndon recognition over `{g, h}`.
pub fn is_lyndon(w: &Word) -> Result<bool> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    Ok(is_lyndon_slice(&w.0))
}

/// All Lyndon words of length `<= max_len`, sorted by (length, lex).
/// Uses Duval's successor: repeat to full length, then increment the last
/// non-maximal letter.
pub fn lyndon_enumerate(max_len: usize) -> Vec<Word> {
    let k = 2usize; // alphabet size
    let mut out: Vec<Word> = Vec::new();
    let mut w: Vec<usize> = vec![0];
    loop {
        out.push(Word(
            w.iter()
                .map(|&x| if x == 0 { Letter::G } else { Letter::H })
                .collect(),
        ));
        let cur = w.clone();
        w.clear();
        while w.len() < max_len {
            w.push(cur[w.len() % cur.len()]);
        }
        while let Some(&last) = w.last() {
            if last == k - 1 {
                w.pop();
            } else {
                break;
            }
        }
        match w.last_mut() {
            None => break,
            Some(last) => *last += 1,
        }
    }
    out.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    out
}

/// Standard factorization of a composed Lyndon word: the split whose right
/// Lyndon factor has maximal length.
pub fn standard_factorization(w: &Word) -> Result<(Word, Word)> {
    if !is_lyndon(w)? {
        return Err(Error::NotLyndon(w.to_string()));
    }
    if w.len() < 2 {
        return Err(Error::SingleLetter);
    }
    for i in 1..w.len() {
        if is_lyndon_slice(&w.0[i..]) {
            let left = Word(w.0[..i].to_vec());
            let right = Word(w.0[i..].to_vec());
            debug_assert!(is_lyndon_slice(&left.0));
            return Ok((left, right));
        }
    }
    unreachable!("the last letter is always a Lyndon suffix")
}

/// The word `omega_r = g h^r`.
pub fn omega_word(r: usize) -> Word {
    let mut v = vec![Letter::G];
    v.extend(std::iter::repeat(Letter::H).take(r));
    Word(v)
}

/// If `w = g h^r`, return `r`.
pub fn as_omega(w: &Word) -> Option<usize> {
    if w.0.first() == Some(&Letter::G) && w.0[1..].iter().all(|&l| l == Letter::H) {
        Some(w.len() - 1)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    /// Definitional oracle: w is Lyndon iff w is a letter or w < rot for
    /// every proper split w = beta gamma, rot = gamma beta.
    fn is_lyndon_definitional(word: &Word) -> bool {
        if word.is_empty() {
            return false;
        }
        if word.len() == 1 {
            return true;
        }
        (1..word.len()).all(|i| {
            let mut rot = word.0[i..].to_vec();
            rot.extend_from_slice(&word.0[..i]);
            word.0 < rot
        })
    }

    /// Witt's necklace count of binary Lyndon words of length n.
    fn witt_count(n: u64) -> u64 {
        fn mobius(mut n: u64) -> i64 {
            let mut mu = 1i64;
            let mut d = 2;
            while d * d <= n {
                if n % d == 0 {
                    n /= d;
                    if n % d == 0 {
                        return 0;
                    }
                    mu = -mu;
                }
                d += 1;
            }
            if n > 1 {
                mu = -mu;
            }
            mu
        }
        let mut sum = 0i64;
        for d in 1..=n {
            if n % d == 0 {
                sum += mobius(d) * 2i64.pow((n / d) as u32);
            }
        }
        (sum / n as i64) as u64
    }

    fn all_words(len: usize) -> Vec<Word> {
        (0..2usize.pow(len as u32))
            .map(|mask| {
                Word(
                    (0..len)
                        .map(|i| if mask >> i & 1 == 0 { Letter::G } else { Letter::H })
                        .collect(),
                )
            })
            .collect()
    }

    #[test]
    fn lex_order_examples() {
        assert_eq!(compare_lex(&w("g"), &w("h")), Ordering::Less);
        assert_eq!(compare_lex(&w("gh"), &w("ghh")), Ordering::Less);
        assert_eq!(compare_lex(&w("gh"), &w("hg")), Ordering::Less);
    }

    #[test]
    fn lyndon_examples() {
        assert!(is_lyndon(&w("gh")).unwrap());
        assert!(!is_lyndon(&w("hg")).unwrap());
        assert!(is_lyndon(&w("gghgh")).unwrap());
        assert!(matches!(is_lyndon(&Word::empty()), Err(Error::EmptyWord)));
    }

    #[test]
    fn lyndon_matches_definition_up_to_12() {
        for len in 1..=12 {
            for word in all_words(len) {
                assert_eq!(
                    is_lyndon(&word).unwrap(),
                    is_lyndon_definitional(&word),
                    "{word}"
                );
            }
        }
    }

    #[test]
    fn lyndon_smaller_than_proper_suffixes() {
        // equivalent characterization, cross-oracle
        for len in 2..=10 {
            for word in all_words(len) {
                if is_lyndon(&word).unwrap() {
                    for i in 1..word.len() {
                        assert!(word.0[..] < word.0[i..], "{word} vs suffix {i}");
                    }
                }
            }
        }
    }

    #[test]
    fn enumerate_examples() {
        let l2 = lyndon_enumerate(2);
        assert_eq!(l2, vec![w("g"), w("h"), w("gh")]);
        let l4 = lyndon_enumerate(4);
        assert_eq!(
            l4,
            ["g", "h", "gh", "ggh", "ghh", "gggh", "gghh", "ghhh"]
                .iter()
                .map(|s| w(s))
                .collect::<Vec<_>>()
        );
        let l5 = lyndon_enumerate(5);
        assert_eq!(l5.iter().filter(|x| x.len() == 5).count(), 6);
    }

    #[test]
    fn enumerate_matches_witt_formula() {
        let all = lyndon_enumerate(12);
        for n in 1..=12usize {
            let count = all.iter().filter(|x| x.len() == n).count() as u64;
            assert_eq!(count, witt_count(n as u64), "length {n}");
        }
    }

    #[test]
    fn standard_factorization_examples() {
        assert_eq!(standard_factorization(&w("ggh")).unwrap(), (w("g"), w("gh")));
        assert_eq!(standard_factorization(&w("gghh")).unwrap(), (w("g"), w("ghh")));
        assert_eq!(standard_factorization(&w("gghgh")).unwrap(), (w("ggh"), w("gh")));
        assert!(matches!(standard_factorization(&w("hg")), Err(Error::NotLyndon(_))));
        assert!(matches!(standard_factorization(&w("g")), Err(Error::SingleLetter)));
    }

    #[test]
    fn standard_factorization_right_factor_maximal() {
        // exhaustive scan oracle: both parts Lyndon, right factor of maximal
        // length among all Lyndon-Lyndon splits
        for word in lyndon_enumerate(10) {
            if word.len() < 2 {
                continue;
            }
            let (l, r) = standard_factorization(&word).unwrap();
            assert_eq!(l.concat(&r), word);
            assert!(is_lyndon(&l).unwrap() && is_lyndon(&r).unwrap());
            let best = (1..word.len())
                .filter(|&i| is_lyndon_slice(&word.0[i..]))
                .min()
                .unwrap();
            assert_eq!(r.len(), word.len() - best, "{word}");
        }
    }

    #[test]
    fn standard_factorization_extension_criterion() {
        // st(alpha zeta) = (alpha, zeta) iff alpha in X or alpha_R >= zeta,
        // for Lyndon alpha < zeta with |alpha zeta| small
        let words = lyndon_enumerate(6);
        for a in &words {
            for z in &words {
                if a >= z || a.len() + z.len() > 8 {
                    continue;
                }
                let az = a.concat(z);
                assert!(is_lyndon(&az).unwrap(), "{a}.{z}");
                let st = standard_factorization(&az).unwrap();
                let cond = a.len() == 1 || standard_factorization(a).unwrap().1 >= *z;
                assert_eq!(st == (a.clone(), z.clone()), cond, "{a}.{z}");
            }
        }
    }

    #[test]
    fn omega_words() {
        assert_eq!(omega_word(0), w("g"));
        assert_eq!(omega_word(2), w("ghh"));
        assert_eq!(
            standard_factorization(&omega_word(3)).unwrap(),
            (omega_word(2), w("h"))
        );
        for r in 2..=8 {
            assert!(is_lyndon(&omega_word(r)).unwrap());
            assert_eq!(
                standard_factorization(&omega_word(r)).unwrap(),
                (omega_word(r - 1), w("h"))
            );
        }
        assert_eq!(standard_factorization(&omega_word(1)).unwrap(), (w("g"), w("h")));
        assert_eq!(as_omega(&w("ghh")), Some(2));
        assert_eq!(as_omega(&w("gghh")), None);
    }

    proptest::proptest! {
        #[test]
        fn cfl_factorization_properties(letters in proptest::collection::vec(0u8..3, 1..40)) {
            let factors = duval_factorization(&letters);
            // factors are Lyndon, nonincreasing, and reconstruct the word
            let mut rebuilt = Vec::new();
            for f in &factors {
                assert!(is_lyndon_slice(f));
                rebuilt.extend_from_slice(f);
            }
            assert_eq!(rebuilt, letters);
            for pair in factors.windows(2) {
                assert!(pair[0] >= pair[1]);
            }
        }
    }

    #[test]
    fn generic_alphabet_reuse() {
        // the slice-level routines work over any ordered alphabet
        assert!(is_lyndon_slice(b"aab"));
        assert!(!is_lyndon_slice(b"aba"));
        let f = duval_factorization(b"bananaa");
        let parts: Vec<&[u8]> = vec![b"b", b"an", b"an", b"a", b"a"];
        assert_eq!(f, parts);
    }
}
