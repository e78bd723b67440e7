//! Confluent rewriting to PBW normal form. Rules are oriented so that every
//! right-hand side is smaller in a degree-lexicographic order with generator
//! precedence `g > E(1) > E(2) > ... > h` (omega factors sort leftmost); a
//! fuel counter guards against orientation bugs.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};

use crate::free::add_assign_term;
use crate::scalar::{binomial_in, Field, Scalar};
use crate::{Error, Result};

use super::{canonicalize, AlgebraSpec, Gen, PbwMonomial, QElement};

/// A formal scalar combination of generator words, before reduction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenPoly {
    pub field: Field,
    pub terms: BTreeMap<Vec<Gen>, Scalar>,
}

impl GenPoly {
    pub fn zero(field: Field) -> GenPoly {
        GenPoly { field, terms: BTreeMap::new() }
    }

    pub fn word(field: Field, w: Vec<Gen>) -> GenPoly {
        let mut p = GenPoly::zero(field);
        p.terms.insert(w, field.one());
        p
    }

    pub fn add_term(&mut self, w: Vec<Gen>, c: Scalar) {
        add_assign_term(&mut self.terms, w, c);
    }
}

/// Redex selection order; all strategies reach the same normal form once the
/// overlap ambiguities resolve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Leftmost,
    Rightmost,
    Seeded(u64),
}

const FUEL: u64 = 50_000_000;

fn run_len(w: &[Gen], pos: usize) -> usize {
    let first = w[pos];
    w[pos..].iter().take_while(|&&g| g == first).count()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Redex {
    /// A killed generator (length 1, rewrites to zero).
    Kill,
    /// A nilpotent power `h^p` or `E(k)^cap` (rewrites to zero).
    PowerZero(usize),
    /// The group relation `g^n` (rewrites to the empty word).
    PowerUnit(usize),
    /// An adjacent generator pair.
    Pair,
}

impl Redex {
    fn len(&self) -> usize {
        match self {
            Redex::Kill => 1,
            Redex::PowerZero(l) | Redex::PowerUnit(l) => *l,
            Redex::Pair => 2,
        }
    }
}

/// The rule firing at `pos`.
fn match_at(spec: &AlgebraSpec, w: &[Gen], pos: usize) -> Option<Redex> {
    let g0 = w[pos];
    if let Gen::E(k) = g0 {
        if spec.e_kill_from().is_some_and(|k0| k >= k0) {
            return Some(Redex::Kill);
        }
        if let Some(cap) = spec.e_power_cap(k) {
            if run_len(w, pos) >= cap as usize {
                return Some(Redex::PowerZero(cap as usize));
            }
        }
    }
    if g0 == Gen::H {
        if let Some(p) = spec.h_nilpotent() {
            if run_len(w, pos) >= p as usize {
                return Some(Redex::PowerZero(p as usize));
            }
        }
    }
    if g0 == Gen::G {
        if let Some(n) = spec.g_order() {
            if run_len(w, pos) >= n as usize {
                return Some(Redex::PowerUnit(n as usize));
            }
        }
    }
    let g1 = *w.get(pos + 1)?;
    let pair = match (g0, g1) {
        (Gen::E(s), Gen::E(t)) => s < t,
        (Gen::E(_), Gen::H) => true,
        (Gen::G, Gen::H) => true,
        (Gen::GInv, Gen::H) => true,
        (Gen::G, Gen::E(_)) => true,
        (Gen::GInv, Gen::E(_)) => true,
        (Gen::G, Gen::GInv) | (Gen::GInv, Gen::G) => true,
        (Gen::E(_), Gen::Om(_)) => true,
        (Gen::G, Gen::Om(_)) => true,
        (Gen::Om(_), Gen::Om(_)) => true,
        _ => false,
    };
    pair.then_some(Redex::Pair)
}

fn splice(w: &[Gen], pos: usize, len: usize, mid: &[Gen]) -> Vec<Gen> {
    let mut out = Vec::with_capacity(w.len() - len + mid.len());
    out.extend_from_slice(&w[..pos]);
    out.extend_from_slice(mid);
    out.extend_from_slice(&w[pos + len..]);
    out
}

fn om_or_g(m: u32) -> Gen {
    if m == 0 {
        Gen::G
    } else {
        Gen::Om(m)
    }
}

fn e_or_g(k: u32) -> Gen {
    if k == 0 {
        Gen::G
    } else {
        Gen::E(k)
    }
}

/// Apply the rule matching at `pos`; the result replaces the word with a
/// scalar combination of words.
pub(crate) fn apply_at(
    spec: &AlgebraSpec,
    w: &[Gen],
    pos: usize,
) -> Option<Vec<(Vec<Gen>, Scalar)>> {
    let field = spec.field;
    let redex = match_at(spec, w, pos)?;
    let len = redex.len();
    let one = field.one();
    let out: Vec<(Vec<Gen>, Scalar)> = match redex {
        Redex::Kill | Redex::PowerZero(_) => Vec::new(),
        Redex::PowerUnit(_) => vec![(splice(w, pos, len, &[]), one)],
        Redex::Pair => match (w[pos], w[pos + 1]) {
            (Gen::E(s), Gen::E(t)) => vec![(splice(w, pos, 2, &[Gen::E(t), Gen::E(s)]), one)],
            (Gen::E(s), Gen::H) => vec![
                (splice(w, pos, 2, &[Gen::H, Gen::E(s)]), one.clone()),
                (splice(w, pos, 2, &[Gen::E(s + 1)]), one),
            ],
            (Gen::G, Gen::H) => vec![
                (splice(w, pos, 2, &[Gen::H, Gen::G]), one.clone()),
                (splice(w, pos, 2, &[Gen::E(1)]), one),
            ],
            (Gen::GInv, Gen::H) => vec![
                (splice(w, pos, 2, &[Gen::H, Gen::GInv]), one.clone()),
                (
                    splice(w, pos, 2, &[Gen::E(1), Gen::GInv, Gen::GInv]),
                    -one,
                ),
            ],
            (Gen::G, Gen::E(s)) => vec![(splice(w, pos, 2, &[Gen::E(s), Gen::G]), one)],
            (Gen::GInv, Gen::E(s)) => vec![(splice(w, pos, 2, &[Gen::E(s), Gen::GInv]), one)],
            (Gen::G, Gen::GInv) | (Gen::GInv, Gen::G) => vec![(splice(w, pos, 2, &[]), one)],
            (Gen::E(m), Gen::Om(n)) => (0..=n)
                .map(|k| {
                    (
                        splice(w, pos, 2, &[om_or_g(n - k), Gen::E(m + k)]),
                        binomial_in(field, n as u64, k as u64),
                    )
                })
                .collect(),
            (Gen::G, Gen::Om(n)) => (0..=n)
                .map(|k| {
                    (
                        splice(w, pos, 2, &[om_or_g(n - k), e_or_g(k)]),
                        binomial_in(field, n as u64, k as u64),
                    )
                })
                .collect(),
            (Gen::Om(m), Gen::Om(n)) => (0..=n)
                .map(|k| {
                    (
                        splice(w, pos, 2, &[Gen::Om(m + n - k), e_or_g(k)]),
                        binomial_in(field, n as u64, k as u64),
                    )
                })
                .collect(),
            _ => unreachable!("match_at returned a non-rule"),
        },
    };
    Some(out)
}

fn pick_redex(spec: &AlgebraSpec, w: &[Gen], strategy: Strategy, rng: &mut Option<rand_chacha::ChaCha8Rng>) -> Option<usize> {
    match strategy {
        Strategy::Leftmost => (0..w.len()).find(|&p| match_at(spec, w, p).is_some()),
        Strategy::Rightmost => (0..w.len()).rev().find(|&p| match_at(spec, w, p).is_some()),
        Strategy::Seeded(_) => {
            let all: Vec<usize> = (0..w.len()).filter(|&p| match_at(spec, w, p).is_some()).collect();
            if all.is_empty() {
                None
            } else {
                let r = rng.as_mut().unwrap();
                Some(all[r.random_range(0..all.len())])
            }
        }
    }
}

fn check_legal(spec: &AlgebraSpec, w: &[Gen]) -> Result<()> {
    for g in w {
        let ok = match g {
            Gen::H => spec.has_h(),
            Gen::G | Gen::E(_) => true,
            Gen::GInv => spec.localized(),
            Gen::Om(0) => true,
            Gen::Om(_) => spec.has_omega(),
        };
        if !ok {
            return Err(Error::IllegalGenerator(g.to_string()));
        }
    }
    Ok(())
}

/// Parse a fully reduced word into its canonical monomial.
fn parse_normal(spec: &AlgebraSpec, w: &[Gen]) -> Result<PbwMonomial> {
    #[derive(PartialEq, PartialOrd)]
    enum Phase {
        Om,
        H,
        E,
        G,
    }
    let mut phase = Phase::Om;
    let mut m = PbwMonomial::one();
    let mut last_e = u32::MAX;
    for g in w {
        match *g {
            Gen::Om(k) if k >= 1 => {
                if phase > Phase::Om || m.om.is_some() {
                    return Err(Error::Internal(format!("unreduced omega in {w:?}")));
                }
                m.om = Some(k);
                phase = Phase::H;
            }
            Gen::Om(_) | Gen::G => {
                if m.e_g < 0 {
                    return Err(Error::Internal(format!("mixed g signs in {w:?}")));
                }
                phase = Phase::G;
                m.e_g += 1;
            }
            Gen::GInv => {
                if m.e_g > 0 {
                    return Err(Error::Internal(format!("mixed g signs in {w:?}")));
                }
                phase = Phase::G;
                m.e_g -= 1;
            }
            Gen::H => {
                if phase > Phase::H {
                    return Err(Error::Internal(format!("unreduced h in {w:?}")));
                }
                phase = Phase::H;
                m.e_h += 1;
            }
            Gen::E(k) => {
                if phase > Phase::E || (phase == Phase::E && k > last_e) {
                    return Err(Error::Internal(format!("unreduced E-block in {w:?}")));
                }
                phase = Phase::E;
                last_e = k;
                *m.e.entry(k).or_insert(0) += 1;
            }
        }
    }
    canonicalize(spec, m).ok_or_else(|| Error::Internal(format!("normal word {w:?} not canonical")))
}

/// Reduce a single word (times a coefficient) to its normal form.
pub fn normal_form_word(
    spec: &AlgebraSpec,
    word: Vec<Gen>,
    coeff: Scalar,
    strategy: Strategy,
) -> Result<QElement> {
    check_legal(spec, &word)?;
    let mut rng = match strategy {
        Strategy::Seeded(s) => Some(rand_chacha::ChaCha8Rng::seed_from_u64(s)),
        _ => None,
    };
    let mut out = QElement::zero(spec.field);
    let mut stack: Vec<(Vec<Gen>, Scalar)> = vec![(word, coeff)];
    let mut fuel = FUEL;
    while let Some((w, c)) = stack.pop() {
        if c.is_zero() {
            continue;
        }
        match pick_redex(spec, &w, strategy, &mut rng) {
            None => {
                let m = parse_normal(spec, &w)?;
                add_assign_term(&mut out.terms, m, c);
            }
            Some(pos) => {
                if fuel == 0 {
                    return Err(Error::NonTerminating);
                }
                fuel -= 1;
                for (w2, c2) in apply_at(spec, &w, pos).unwrap() {
                    if !c2.is_zero() {
                        stack.push((w2, &c * &c2));
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Fully reduce a formal combination of generator words.
pub fn normal_form(spec: &AlgebraSpec, input: &GenPoly) -> Result<QElement> {
    normal_form_with(spec, input, Strategy::Leftmost)
}

pub fn normal_form_with(
    spec: &AlgebraSpec,
    input: &GenPoly,
    strategy: Strategy,
) -> Result<QElement> {
    if input.field != spec.field {
        return Err(Error::FieldMismatch(input.field, spec.field));
    }
    let mut out = QElement::zero(spec.field);
    for (w, c) in &input.terms {
        out = out.add(&normal_form_word(spec, w.clone(), c.clone(), strategy)?)?;
    }
    Ok(out)
}
