//! The free algebra `k<g,h>` with its bialgebra structure: noncommutative
//! polynomials, the Lyndon–Shirshov elements `E_alpha`, PBW coordinates,
//! shuffle type polynomials, coproduct and counit.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num::bigint::BigInt;
use num::{One, Zero};

use crate::scalar::{Field, Scalar};
use crate::word::{
    duval_factorization, is_lyndon, omega_word, standard_factorization, Letter, Word,
};
use crate::{Error, Result};

/// A finitely supported scalar combination of words; an element of `k<g,h>`.
/// Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NcPoly {
    pub field: Field,
    pub terms: BTreeMap<Word, Scalar>,
}

/// An element of the tensor square `k<g,h> (x) k<g,h>` with componentwise
/// multiplication (no braiding).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorNcPoly {
    pub field: Field,
    pub terms: BTreeMap<(Word, Word), Scalar>,
}

/// A PBW monomial `E_{a1}^{n1} ... E_{am}^{nm}` with `a1 > a2 > ... > am`
/// strictly decreasing Lyndon words and positive exponents.
pub type PbwMono = Vec<(Word, u32)>;

/// A finitely supported combination of PBW monomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PbwVector {
    pub field: Field,
    pub terms: BTreeMap<PbwMono, Scalar>,
}

pub fn add_assign_term<K: Ord>(map: &mut BTreeMap<K, Scalar>, key: K, val: Scalar) {
    if val.is_zero() {
        return;
    }
    match map.entry(key) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(val);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            let s = e.get().checked_add(&val).expect("field mismatch in term map");
            if s.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = s;
            }
        }
    }
}

impl NcPoly {
    pub fn zero(field: Field) -> NcPoly {
        NcPoly { field, terms: BTreeMap::new() }
    }

    pub fn one(field: Field) -> NcPoly {
        NcPoly::word(field, Word::empty())
    }

    pub fn word(field: Field, w: Word) -> NcPoly {
        let mut terms = BTreeMap::new();
        terms.insert(w, field.one());
        NcPoly { field, terms }
    }

    pub fn monomial(field: Field, w: Word, c: Scalar) -> NcPoly {
        let mut p = NcPoly::zero(field);
        add_assign_term(&mut p.terms, w, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &NcPoly) -> Result<NcPoly> {
        self.check_field(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            add_assign_term(&mut out.terms, w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &NcPoly) -> Result<NcPoly> {
        self.add(&other.scale(&(self.field.from_i64(-1))))
    }

    pub fn scale(&self, s: &Scalar) -> NcPoly {
        let mut out = NcPoly::zero(self.field);
        for (w, c) in &self.terms {
            add_assign_term(&mut out.terms, w.clone(), c * s);
        }
        out
    }

    fn check_field(&self, other: &NcPoly) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch(self.field, other.field))
        }
    }

    /// Every word of the support has this letter multidegree, when the
    /// element is multihomogeneous.
    pub fn multidegree(&self) -> Option<(usize, usize)> {
        let mut it = self.terms.keys();
        let d = it.next()?.multidegree();
        it.all(|w| w.multidegree() == d).then_some(d)
    }
}

/// Bilinear concatenation product.
pub fn nc_multiply(a: &NcPoly, b: &NcPoly) -> Result<NcPoly> {
    if a.field != b.field {
        return Err(Error::FieldMismatch(a.field, b.field));
    }
    let mut out = NcPoly::zero(a.field);
    for (wa, ca) in &a.terms {
        for (wb, cb) in &b.terms {
            add_assign_term(&mut out.terms, wa.concat(wb), ca * cb);
        }
    }
    Ok(out)
}

/// `[a, b] = ab - ba`.
pub fn bracket(a: &NcPoly, b: &NcPoly) -> Result<NcPoly> {
    nc_multiply(a, b)?.sub(&nc_multiply(b, a)?)
}

// ---------------------------------------------------------------------------
// Lyndon-Shirshov elements

type IntPoly = BTreeMap<Word, BigInt>;

fn int_add_assign(map: &mut IntPoly, key: Word, val: BigInt) {
    if val.is_zero() {
        return;
    }
    match map.entry(key) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(val);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            *e.get_mut() += val;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

fn int_mul(a: &IntPoly, b: &IntPoly) -> IntPoly {
    let mut out = IntPoly::new();
    for (wa, ca) in a {
        for (wb, cb) in b {
            int_add_assign(&mut out, wa.concat(wb), ca * cb);
        }
    }
    out
}

fn int_bracket(a: &IntPoly, b: &IntPoly) -> IntPoly {
    let mut out = int_mul(a, b);
    for (w, c) in int_mul(b, a) {
        int_add_assign(&mut out, w, -c);
    }
    out
}

fn ls_cache() -> &'static Mutex<HashMap<Word, Arc<IntPoly>>> {
    static CACHE: OnceLock<Mutex<HashMap<Word, Arc<IntPoly>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Integer word expansion of `E_alpha`, memoized by word. The recursion is
/// `E(x) = x` on letters and `E(alpha) = [E(beta), E(gamma)]` on the standard
/// factorization.
fn ls_expansion_int(alpha: &Word) -> Result<Arc<IntPoly>> {
    if let Some(hit) = ls_cache().lock().unwrap().get(alpha) {
        return Ok(hit.clone());
    }
    if !is_lyndon(alpha)? {
        return Err(Error::NotLyndon(alpha.to_string()));
    }
    let poly = if alpha.len() == 1 {
        let mut p = IntPoly::new();
        p.insert(alpha.clone(), BigInt::one());
        p
    } else {
        let (l, r) = standard_factorization(alpha)?;
        let le = ls_expansion_int(&l)?;
        let re = ls_expansion_int(&r)?;
        int_bracket(&le, &re)
    };
    // the lex-least word of the support is alpha itself, with coefficient 1
    debug_assert_eq!(poly.first_key_value().map(|(w, _)| w), Some(alpha));
    debug_assert!(poly.first_key_value().is_some_and(|(_, c)| c.is_one()));
    let arc = Arc::new(poly);
    ls_cache().lock().unwrap().insert(alpha.clone(), arc.clone());
    Ok(arc)
}

/// Word expansion of the Lyndon-Shirshov element `E_alpha` over a field.
pub fn ls_element(field: Field, alpha: &Word) -> Result<NcPoly> {
    let ints = ls_expansion_int(alpha)?;
    let mut out = NcPoly::zero(field);
    for (w, c) in ints.iter() {
        add_assign_term(&mut out.terms, w.clone(), field.from_bigint(c));
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Shuffle type polynomials

fn shuffle_cache() -> &'static Mutex<HashMap<(u32, u32), Arc<Vec<Word>>>> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, u32), Arc<Vec<Word>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn shuffle_words(i: u32, j: u32) -> Arc<Vec<Word>> {
    if let Some(hit) = shuffle_cache().lock().unwrap().get(&(i, j)) {
        return hit.clone();
    }
    // recursion SH_{i,j} = h SH_{i-1,j} + g SH_{i,j-1}
    let words = if i == 0 && j == 0 {
        vec![Word::empty()]
    } else {
        let mut words = Vec::new();
        if i > 0 {
            for w in shuffle_words(i - 1, j).iter() {
                words.push(Word::h().concat(w));
            }
        }
        if j > 0 {
            for w in shuffle_words(i, j - 1).iter() {
                words.push(Word::g().concat(w));
            }
        }
        words.sort();
        words
    };
    let arc = Arc::new(words);
    shuffle_cache().lock().unwrap().insert((i, j), arc.clone());
    arc
}

/// `SH_{i,j}(h, g)`: the sum of all words with `i` h's and `j` g's.
pub fn shuffle_poly(field: Field, i: u32, j: u32) -> NcPoly {
    let mut out = NcPoly::zero(field);
    for w in shuffle_words(i, j).iter() {
        add_assign_term(&mut out.terms, w.clone(), field.one());
    }
    out
}

// ---------------------------------------------------------------------------
// Coproduct and counit

impl TensorNcPoly {
    pub fn zero(field: Field) -> TensorNcPoly {
        TensorNcPoly { field, terms: BTreeMap::new() }
    }

    pub fn of(field: Field, l: NcPoly, r: NcPoly) -> TensorNcPoly {
        let mut out = TensorNcPoly::zero(field);
        for (wl, cl) in &l.terms {
            for (wr, cr) in &r.terms {
                add_assign_term(&mut out.terms, (wl.clone(), wr.clone()), cl * cr);
            }
        }
        out
    }

    pub fn add(&self, other: &TensorNcPoly) -> TensorNcPoly {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            add_assign_term(&mut out.terms, k.clone(), c.clone());
        }
        out
    }

    pub fn mul(&self, other: &TensorNcPoly) -> TensorNcPoly {
        let mut out = TensorNcPoly::zero(self.field);
        for ((la, ra), ca) in &self.terms {
            for ((lb, rb), cb) in &other.terms {
                add_assign_term(&mut out.terms, (la.concat(lb), ra.concat(rb)), ca * cb);
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Coproduct of `k<g,h>`: the algebra map with `D(g) = g (x) g` and
/// `D(h) = 1 (x) h + h (x) g`.
pub fn t_coproduct(a: &NcPoly) -> TensorNcPoly {
    let field = a.field;
    let mut out = TensorNcPoly::zero(field);
    for (w, c) in &a.terms {
        let mut acc: BTreeMap<(Word, Word), Scalar> = BTreeMap::new();
        acc.insert((Word::empty(), Word::empty()), c.clone());
        for l in &w.0 {
            let mut next = BTreeMap::new();
            for ((wl, wr), cc) in &acc {
                match l {
                    Letter::G => {
                        add_assign_term(
                            &mut next,
                            (wl.concat(&Word::g()), wr.concat(&Word::g())),
                            cc.clone(),
                        );
                    }
                    Letter::H => {
                        add_assign_term(&mut next, (wl.clone(), wr.concat(&Word::h())), cc.clone());
                        add_assign_term(
                            &mut next,
                            (wl.concat(&Word::h()), wr.concat(&Word::g())),
                            cc.clone(),
                        );
                    }
                }
            }
            acc = next;
        }
        for (k, cc) in acc {
            add_assign_term(&mut out.terms, k, cc);
        }
    }
    out
}

/// Counit: `e(g) = 1`, `e(h) = 0`, extended multiplicatively.
pub fn t_counit(a: &NcPoly) -> Scalar {
    let mut out = a.field.zero();
    for (w, c) in &a.terms {
        if w.count(Letter::H) == 0 {
            out = &out + c;
        }
    }
    out
}

// ---------------------------------------------------------------------------
// PBW coordinates

fn pbw_cache() -> &'static Mutex<HashMap<PbwMono, Arc<IntPoly>>> {
    static CACHE: OnceLock<Mutex<HashMap<PbwMono, Arc<IntPoly>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn pbw_expand_int(mono: &PbwMono) -> Result<Arc<IntPoly>> {
    if let Some(hit) = pbw_cache().lock().unwrap().get(mono) {
        return Ok(hit.clone());
    }
    let mut acc = IntPoly::new();
    acc.insert(Word::empty(), BigInt::one());
    for (alpha, exp) in mono {
        let e = ls_expansion_int(alpha)?;
        for _ in 0..*exp {
            acc = int_mul(&acc, &e);
        }
    }
    let arc = Arc::new(acc);
    pbw_cache().lock().unwrap().insert(mono.clone(), arc.clone());
    Ok(arc)
}

/// Expand a PBW monomial into words over a field.
pub fn pbw_expand(field: Field, mono: &PbwMono) -> Result<NcPoly> {
    let ints = pbw_expand_int(mono)?;
    let mut out = NcPoly::zero(field);
    for (w, c) in ints.iter() {
        add_assign_term(&mut out.terms, w.clone(), field.from_bigint(c));
    }
    Ok(out)
}

/// Expand a whole PBW vector into words.
pub fn pbw_vector_expand(v: &PbwVector) -> Result<NcPoly> {
    let mut out = NcPoly::zero(v.field);
    for (mono, c) in &v.terms {
        out = out.add(&pbw_expand(v.field, mono)?.scale(c))?;
    }
    Ok(out)
}

/// The PBW monomial whose expansion has the given word as its lex-least
/// term: the Chen–Fox–Lyndon factorization grouped into powers.
pub fn cfl_monomial(w: &Word) -> PbwMono {
    let mut mono: PbwMono = Vec::new();
    for f in duval_factorization(&w.0) {
        let fw = Word(f.to_vec());
        match mono.last_mut() {
            Some((prev, e)) if *prev == fw => *e += 1,
            _ => mono.push((fw, 1)),
        }
    }
    mono
}

/// Unique PBW coordinates of an element of `k<g,h>`, by triangular
/// elimination against expanded PBW monomials within each letter
/// multidegree: the expansion of the monomial attached to a word `w` is
/// `w` plus lex-greater words, so repeatedly clearing the least remaining
/// word solves the (unitriangular) graded linear system exactly.
pub fn pbw_coordinates(a: &NcPoly) -> Result<PbwVector> {
    let mut rest = a.clone();
    let mut out = PbwVector { field: a.field, terms: BTreeMap::new() };
    while let Some((w, c)) = rest.terms.iter().next().map(|(w, c)| (w.clone(), c.clone())) {
        let mono = cfl_monomial(&w);
        let expansion = pbw_expand(a.field, &mono)?;
        match expansion.terms.first_key_value() {
            Some((lead, lc)) if *lead == w && lc.is_one() => {}
            _ => {
                return Err(Error::Internal(format!(
                    "PBW expansion of {mono:?} is not unitriangular at {w}"
                )))
            }
        }
        add_assign_term(&mut out.terms, mono, c.clone());
        rest = rest.sub(&expansion.scale(&c))?;
        if rest.terms.contains_key(&w) {
            return Err(Error::Internal("elimination failed to clear leading word".into()));
        }
    }
    Ok(out)
}

/// `SH'_{i,j}`: the PBW form of `SH_{i,j}` with every monomial whose
/// leftmost factor is `E_h` deleted. Needs `j >= 1`.
pub fn sh_prime(field: Field, i: u32, j: u32) -> Result<PbwVector> {
    if j == 0 {
        return Err(Error::IndexOutOfRange(0));
    }
    let mut v = pbw_coordinates(&shuffle_poly(field, i, j))?;
    let hw = Word::h();
    v.terms.retain(|mono, _| mono.first().map(|(w, _)| w) != Some(&hw));
    Ok(v)
}

impl PbwVector {
    pub fn zero(field: Field) -> PbwVector {
        PbwVector { field, terms: BTreeMap::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn single(field: Field, mono: PbwMono, c: Scalar) -> PbwVector {
        let mut v = PbwVector::zero(field);
        add_assign_term(&mut v.terms, mono, c);
        v
    }
}

// ---------------------------------------------------------------------------
// Display

pub(crate) fn fmt_signed_terms<K, F>(
    f: &mut fmt::Formatter<'_>,
    terms: &BTreeMap<K, Scalar>,
    render: F,
) -> fmt::Result
where
    F: Fn(&K) -> String,
{
    if terms.is_empty() {
        return f.write_str("0");
    }
    for (i, (k, c)) in terms.iter().enumerate() {
        let body = render(k);
        let (sign, mag) = match c {
            Scalar::Q(r) if r < &num::rational::BigRational::zero() => {
                ("-", (-c.clone()).plain())
            }
            _ => ("+", c.plain()),
        };
        if i == 0 {
            if sign == "-" {
                f.write_str("-")?;
            }
        } else {
            write!(f, " {sign} ")?;
        }
        if mag == "1" && body != "1" {
            f.write_str(&body)?;
        } else if body == "1" {
            f.write_str(&mag)?;
        } else {
            write!(f, "{mag}*{body}")?;
        }
    }
    Ok(())
}

impl fmt::Display for NcPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_signed_terms(f, &self.terms, |w| w.to_string())
    }
}

impl fmt::Display for TensorNcPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_signed_terms(f, &self.terms, |(l, r)| format!("({l})(x)({r})"))
    }
}

pub fn pbw_mono_string(mono: &PbwMono) -> String {
    if mono.is_empty() {
        return "1".into();
    }
    mono.iter()
        .map(|(w, e)| {
            if *e == 1 {
                format!("E[{w}]")
            } else {
                format!("E[{w}]^{e}")
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

impl fmt::Display for PbwVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_signed_terms(f, &self.terms, pbw_mono_string)
    }
}

// ---------------------------------------------------------------------------

pub fn omega_element(field: Field, r: usize) -> Result<NcPoly> {
    ls_element(field, &omega_word(r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::lyndon_enumerate;
    use rand::{Rng, SeedableRng};

    const Q: Field = Field::Rational;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    fn poly(pairs: &[(&str, i64)]) -> NcPoly {
        let mut p = NcPoly::zero(Q);
        for (s, c) in pairs {
            add_assign_term(&mut p.terms, w(s), Q.from_i64(*c));
        }
        p
    }

    #[test]
    fn multiply_basics() {
        let g = NcPoly::word(Q, w("g"));
        let h = NcPoly::word(Q, w("h"));
        assert_eq!(nc_multiply(&g, &h).unwrap(), poly(&[("gh", 1)]));
        let ghhg = poly(&[("gh", 1), ("hg", -1)]);
        assert_eq!(
            nc_multiply(&ghhg, &h).unwrap(),
            poly(&[("ghh", 1), ("hgh", -1)])
        );
        assert_eq!(nc_multiply(&NcPoly::one(Q), &ghhg).unwrap(), ghhg);
    }

    #[test]
    fn bracket_basics() {
        let g = NcPoly::word(Q, w("g"));
        let h = NcPoly::word(Q, w("h"));
        assert_eq!(bracket(&g, &h).unwrap(), poly(&[("gh", 1), ("hg", -1)]));
        let a = poly(&[("gh", 2), ("g", 1)]);
        assert!(bracket(&a, &a).unwrap().is_zero());
    }

    #[test]
    fn ls_element_examples() {
        assert_eq!(ls_element(Q, &w("gh")).unwrap(), poly(&[("gh", 1), ("hg", -1)]));
        // frozen from the bracket oracle [g,[g,h]]
        let g = NcPoly::word(Q, w("g"));
        let h = NcPoly::word(Q, w("h"));
        let oracle = bracket(&g, &bracket(&g, &h).unwrap()).unwrap();
        let expected = poly(&[("ggh", 1), ("ghg", -2), ("hgg", 1)]);
        assert_eq!(oracle, expected);
        assert_eq!(ls_element(Q, &w("ggh")).unwrap(), expected);
        assert!(matches!(ls_element(Q, &w("hg")), Err(Error::NotLyndon(_))));
    }

    #[test]
    fn ls_omega_recursion() {
        // E_{omega_r} = [E_{omega_{r-1}}, E_h]
        let h = ls_element(Q, &w("h")).unwrap();
        for r in 1..=6 {
            let prev = omega_element(Q, r - 1).unwrap();
            assert_eq!(omega_element(Q, r).unwrap(), bracket(&prev, &h).unwrap());
        }
    }

    #[test]
    fn ls_commutator_worked_examples() {
        let e = |s: &str| ls_element(Q, &w(s)).unwrap();
        assert_eq!(bracket(&e("ggh"), &e("h")).unwrap(), e("gghh"));
        assert_eq!(
            bracket(&e("gggh"), &e("h")).unwrap(),
            e("ggghh").sub(&e("gghgh")).unwrap()
        );
        assert_eq!(
            bracket(&e("gghh"), &e("h")).unwrap(),
            e("ghghh").add(&e("gghhh")).unwrap()
        );
    }

    #[test]
    fn ls_multidegree_and_leading_term() {
        for alpha in lyndon_enumerate(8) {
            let e = ls_element(Q, &alpha).unwrap();
            assert_eq!(e.multidegree(), Some(alpha.multidegree()), "{alpha}");
            let (lead, c) = e.terms.first_key_value().unwrap();
            assert_eq!(lead, &alpha);
            assert!(c.is_one());
        }
    }

    #[test]
    fn commutator_lemma_case_a() {
        // alpha < beta with alpha a letter or alpha_R >= beta:
        // [E_alpha, E_beta] = E_{alpha beta}
        let words = lyndon_enumerate(7);
        let mut seen = 0;
        for a in &words {
            for b in &words {
                if a >= b || a.len() + b.len() > 8 {
                    continue;
                }
                let eligible =
                    a.len() == 1 || standard_factorization(a).unwrap().1 >= *b;
                if !eligible {
                    continue;
                }
                let ab = a.concat(b);
                let lhs = bracket(&ls_element(Q, a).unwrap(), &ls_element(Q, b).unwrap()).unwrap();
                assert_eq!(lhs, ls_element(Q, &ab).unwrap(), "{a},{b}");
                seen += 1;
            }
        }
        assert!(seen > 20);
    }

    #[test]
    fn commutator_lemma_case_b_support() {
        // alpha_R < beta: the bracket is supported on single E_gamma with
        // alpha beta <= gamma < beta, additive multidegree, and the
        // E_{alpha beta} coefficient nonzero
        let words = lyndon_enumerate(7);
        let mut seen = 0;
        for a in &words {
            for b in &words {
                if a >= b || a.len() + b.len() > 8 || a.len() == 1 {
                    continue;
                }
                if standard_factorization(a).unwrap().1 >= *b {
                    continue;
                }
                let ab = a.concat(b);
                let lhs = bracket(&ls_element(Q, a).unwrap(), &ls_element(Q, b).unwrap()).unwrap();
                let coords = pbw_coordinates(&lhs).unwrap();
                let mut saw_ab = false;
                for (mono, c) in &coords.terms {
                    assert_eq!(mono.len(), 1, "{a},{b}: {mono:?}");
                    let (gamma, e) = &mono[0];
                    assert_eq!(*e, 1);
                    assert!(&ab <= gamma && gamma < b, "{a},{b}: {gamma}");
                    let (dg, dh) = gamma.multidegree();
                    let (ag, ah) = a.multidegree();
                    let (bg, bh) = b.multidegree();
                    assert_eq!((dg, dh), (ag + bg, ah + bh));
                    if gamma == &ab {
                        saw_ab = true;
                        assert!(!c.is_zero());
                    }
                }
                assert!(saw_ab, "{a},{b}");
                seen += 1;
            }
        }
        assert!(seen > 5);
    }

    #[test]
    fn shuffle_examples() {
        assert_eq!(shuffle_poly(Q, 1, 1), poly(&[("hg", 1), ("gh", 1)]));
        assert_eq!(
            shuffle_poly(Q, 2, 1),
            poly(&[("hhg", 1), ("hgh", 1), ("ghh", 1)])
        );
        assert_eq!(shuffle_poly(Q, 0, 3), poly(&[("ggg", 1)]));
        assert_eq!(shuffle_poly(Q, 0, 0), NcPoly::one(Q));
    }

    #[test]
    fn shuffle_right_recursion_oracle() {
        // SH_{i,j} = SH_{i-1,j} h + SH_{i,j-1} g, kept as an independent oracle
        let h = NcPoly::word(Q, w("h"));
        let g = NcPoly::word(Q, w("g"));
        for i in 0..=8u32 {
            for j in 0..=8u32 {
                if i + j == 0 || i + j > 8 {
                    continue;
                }
                let mut rhs = NcPoly::zero(Q);
                if i > 0 {
                    rhs = rhs.add(&nc_multiply(&shuffle_poly(Q, i - 1, j), &h).unwrap()).unwrap();
                }
                if j > 0 {
                    rhs = rhs.add(&nc_multiply(&shuffle_poly(Q, i, j - 1), &g).unwrap()).unwrap();
                }
                assert_eq!(shuffle_poly(Q, i, j), rhs, "({i},{j})");
            }
        }
    }

    #[test]
    fn shuffle_binomial_sum() {
        // sum_k SH_{k,n-k} = (g+h)^n
        let gh = poly(&[("g", 1), ("h", 1)]);
        let mut pow = NcPoly::one(Q);
        for n in 1..=6u32 {
            pow = nc_multiply(&pow, &gh).unwrap();
            let mut sum = NcPoly::zero(Q);
            for k in 0..=n {
                sum = sum.add(&shuffle_poly(Q, k, n - k)).unwrap();
            }
            assert_eq!(sum, pow, "n={n}");
        }
    }

    #[test]
    fn coproduct_examples() {
        let h2 = NcPoly::word(Q, w("hh"));
        let d = t_coproduct(&h2);
        let expected = TensorNcPoly::of(Q, NcPoly::one(Q), h2.clone())
            .add(&TensorNcPoly::of(
                Q,
                NcPoly::word(Q, w("h")),
                poly(&[("hg", 1), ("gh", 1)]),
            ))
            .add(&TensorNcPoly::of(Q, h2, NcPoly::word(Q, w("gg"))));
        assert_eq!(d, expected);

        for k in 1..=4 {
            let gk = NcPoly::word(Q, Word(vec![Letter::G; k]));
            assert_eq!(t_coproduct(&gk), TensorNcPoly::of(Q, gk.clone(), gk));
        }
    }

    #[test]
    fn coproduct_of_e_ghh_matches_worked_value() {
        let e = |s: &str| ls_element(Q, &w(s)).unwrap();
        let d = t_coproduct(&e("ghh"));
        let eh_eg = nc_multiply(&e("h"), &e("g")).unwrap();
        let expected = TensorNcPoly::of(Q, e("g"), e("ghh"))
            .add(&TensorNcPoly::of(
                Q,
                e("gh").scale(&Q.from_i64(3)),
                nc_multiply(&e("gh"), &e("g")).unwrap(),
            ))
            .add(&TensorNcPoly::of(
                Q,
                e("gh").sub(&eh_eg).unwrap(),
                e("ggh"),
            ))
            .add(&TensorNcPoly::of(
                Q,
                e("ghh"),
                nc_multiply(&nc_multiply(&e("g"), &e("g")).unwrap(), &e("g")).unwrap(),
            ));
        assert_eq!(d, expected);
    }

    #[test]
    fn radford_formula_small() {
        // D(h^n) = sum_k h^k (x) SH_{n-k,k}(h,g)
        for n in 1..=4usize {
            let hn = NcPoly::word(Q, Word(vec![Letter::H; n]));
            let mut rhs = TensorNcPoly::zero(Q);
            for k in 0..=n {
                rhs = rhs.add(&TensorNcPoly::of(
                    Q,
                    NcPoly::word(Q, Word(vec![Letter::H; k])),
                    shuffle_poly(Q, (n - k) as u32, k as u32),
                ));
            }
            assert_eq!(t_coproduct(&hn), rhs, "n={n}");
        }
    }

    #[test]
    fn coassociativity_and_counit_small_words() {
        for len in 0..=6usize {
            for mask in 0..2usize.pow(len as u32) {
                let word = Word(
                    (0..len)
                        .map(|i| if mask >> i & 1 == 0 { Letter::G } else { Letter::H })
                        .collect(),
                );
                let p = NcPoly::word(Q, word.clone());
                let d = t_coproduct(&p);
                // (D x id) D == (id x D) D, collected as (Word, Word, Word)
                let mut lhs: BTreeMap<(Word, Word, Word), Scalar> = BTreeMap::new();
                let mut rhs = lhs.clone();
                for ((a, b), c) in &d.terms {
                    for ((x, y), cc) in &t_coproduct(&NcPoly::word(Q, a.clone())).terms {
                        add_assign_term(&mut lhs, (x.clone(), y.clone(), b.clone()), c * cc);
                    }
                    for ((x, y), cc) in &t_coproduct(&NcPoly::word(Q, b.clone())).terms {
                        add_assign_term(&mut rhs, (a.clone(), x.clone(), y.clone()), c * cc);
                    }
                }
                assert_eq!(lhs, rhs, "{word}");
                // counit axioms
                let mut left = NcPoly::zero(Q);
                let mut right = NcPoly::zero(Q);
                for ((a, b), c) in &d.terms {
                    let ea = t_counit(&NcPoly::word(Q, a.clone()));
                    add_assign_term(&mut left.terms, b.clone(), &ea * c);
                    let eb = t_counit(&NcPoly::word(Q, b.clone()));
                    add_assign_term(&mut right.terms, a.clone(), &eb * c);
                }
                assert_eq!(left, p);
                assert_eq!(right, p);
            }
        }
    }

    #[test]
    fn coproduct_is_algebra_map_on_random_pairs() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        fn mk(rng: &mut rand_chacha::ChaCha8Rng, len: usize) -> Word {
            Word(
                (0..len)
                    .map(|_| if rng.random::<bool>() { Letter::H } else { Letter::G })
                    .collect(),
            )
        }
        for _ in 0..40 {
            let la = rng.random_range(0..=5);
            let a = NcPoly::word(Q, mk(&mut rng, la));
            let lb = rng.random_range(0..=5);
            let b = NcPoly::word(Q, mk(&mut rng, lb));
            let lhs = t_coproduct(&nc_multiply(&a, &b).unwrap());
            let rhs = t_coproduct(&a).mul(&t_coproduct(&b));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn counit_examples() {
        assert_eq!(t_counit(&NcPoly::word(Q, w("ggg"))), Q.one());
        assert_eq!(t_counit(&poly(&[("gh", 1), ("hg", 1)])), Q.zero());
        for r in 1..=5 {
            assert_eq!(t_counit(&omega_element(Q, r).unwrap()), Q.zero());
        }
    }

    #[test]
    fn pbw_coordinate_examples() {
        let hg = pbw_coordinates(&NcPoly::word(Q, w("hg"))).unwrap();
        assert_eq!(
            hg,
            PbwVector::single(Q, vec![(w("h"), 1), (w("g"), 1)], Q.one())
        );
        let gh = pbw_coordinates(&NcPoly::word(Q, w("gh"))).unwrap();
        let mut expected = PbwVector::single(Q, vec![(w("h"), 1), (w("g"), 1)], Q.one());
        add_assign_term(&mut expected.terms, vec![(w("gh"), 1)], Q.one());
        assert_eq!(gh, expected);
        // idempotent on basis elements
        let eggh = ls_element(Q, &w("ggh")).unwrap();
        assert_eq!(
            pbw_coordinates(&eggh).unwrap(),
            PbwVector::single(Q, vec![(w("ggh"), 1)], Q.one())
        );
    }

    #[test]
    fn pbw_roundtrip_on_random_monomials() {
        let lyndon = lyndon_enumerate(5);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..60 {
            // random strictly decreasing monomial of total degree <= 7
            let mut picks: Vec<Word> = Vec::new();
            for _ in 0..3 {
                picks.push(lyndon[rng.random_range(0..lyndon.len())].clone());
            }
            picks.sort();
            picks.dedup();
            picks.reverse();
            let mut mono: PbwMono = Vec::new();
            let mut deg = 0usize;
            for word in picks {
                let e = rng.random_range(1..=2u32);
                if deg + word.len() * e as usize > 7 {
                    continue;
                }
                deg += word.len() * e as usize;
                mono.push((word, e));
            }
            let expanded = pbw_expand(Q, &mono).unwrap();
            let coords = pbw_coordinates(&expanded).unwrap();
            assert_eq!(coords, PbwVector::single(Q, mono, Q.one()));
        }
    }

    #[test]
    fn pbw_roundtrip_all_words_len_6() {
        for len in 0..=6usize {
            for mask in 0..2usize.pow(len as u32) {
                let word = Word(
                    (0..len)
                        .map(|i| if mask >> i & 1 == 0 { Letter::G } else { Letter::H })
                        .collect(),
                );
                let p = NcPoly::word(Q, word);
                let coords = pbw_coordinates(&p).unwrap();
                assert_eq!(pbw_vector_expand(&coords).unwrap(), p);
            }
        }
    }

    #[test]
    fn sh_prime_examples() {
        for m in 0..=6u32 {
            let v = sh_prime(Q, m, 1).unwrap();
            assert_eq!(
                v,
                PbwVector::single(Q, vec![(omega_word(m as usize), 1)], Q.one()),
                "m={m}"
            );
        }
        for j in 1..=4u32 {
            let v = sh_prime(Q, 0, j).unwrap();
            assert_eq!(v, PbwVector::single(Q, vec![(w("g"), j)], Q.one()));
        }
        // SH'_{1,2} projected to the omega-generated part is 3 E_{gh} E_g
        let mut v = sh_prime(Q, 1, 2).unwrap();
        v.terms.retain(|mono, _| mono.iter().all(|(word, _)| word.count(Letter::G) <= 1));
        assert_eq!(
            v,
            PbwVector::single(Q, vec![(w("gh"), 1), (w("g"), 1)], Q.from_i64(3))
        );
    }

    #[test]
    fn display_forms() {
        let p = poly(&[("gh", 1), ("hg", -1)]);
        assert_eq!(p.to_string(), "gh - hg");
        let mut v = PbwVector::single(Q, vec![(w("h"), 2), (w("gh"), 1), (w("g"), 1)], Q.one());
        add_assign_term(&mut v.terms, vec![], Q.from_i64(-2));
        assert_eq!(pbw_mono_string(v.terms.keys().last().unwrap()), "E[h]^2*E[gh]*E[g]");
        assert_eq!(NcPoly::zero(Q).to_string(), "0");
    }

    #[test]
    fn memo_caches_are_transparent() {
        // results identical whether or not the cache is warm
        let a = ls_element(Q, &w("gghgh")).unwrap();
        ls_cache().lock().unwrap().clear();
        let b = ls_element(Q, &w("gghgh")).unwrap();
        assert_eq!(a, b);
    }
}
