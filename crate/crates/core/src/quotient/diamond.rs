//! Diamond Lemma machinery: enumerate the overlap ambiguities of each
//! preset's reduction system, resolve both bracketings, and compare.

use crate::exec::{map_batch, ExecMode};
use crate::report::Report;
use crate::{Error, Result};

use super::rewrite::{apply_at, normal_form_word, Strategy};
use super::{AlgebraSpec, Gen, Preset, QElement};

/// One overlap: a word together with the two positions whose rules compete.
#[derive(Debug, Clone)]
pub struct OverlapCase {
    pub name: String,
    pub word: Vec<Gen>,
    pub pos_a: usize,
    pub pos_b: usize,
}

fn e_or_g(k: u32) -> Gen {
    if k == 0 {
        Gen::G
    } else {
        Gen::E(k)
    }
}

fn om_or_g(m: u32) -> Gen {
    if m == 0 {
        Gen::G
    } else {
        Gen::Om(m)
    }
}

/// The overlap families attached to a preset's rules, with E-indices up to
/// `k_bound` (clamped below any kill bound so the cases stay meaningful).
pub fn overlap_cases(spec: &AlgebraSpec, k_bound: u32) -> Vec<OverlapCase> {
    let mut out = Vec::new();
    let e_hi = spec
        .e_kill_from()
        .map_or(k_bound, |k0| k0.saturating_sub(1).min(k_bound));
    if spec.preset == Preset::BF {
        for r in 0..=k_bound {
            for s in (r + 1)..=k_bound {
                for t in (s + 1)..=k_bound {
                    out.push(OverlapCase {
                        name: format!("bf-1 (E({r})E({s}))E({t})"),
                        word: vec![e_or_g(r), Gen::E(s), Gen::E(t)],
                        pos_a: 0,
                        pos_b: 1,
                    });
                    out.push(OverlapCase {
                        name: format!("bf-2 (E({r})E({s}))w({t})"),
                        word: vec![e_or_g(r), Gen::E(s), Gen::Om(t)],
                        pos_a: 0,
                        pos_b: 1,
                    });
                    out.push(OverlapCase {
                        name: format!("bf-3 (E({r})w({s}))w({t})"),
                        word: vec![e_or_g(r), Gen::Om(s), Gen::Om(t)],
                        pos_a: 0,
                        pos_b: 1,
                    });
                    out.push(OverlapCase {
                        name: format!("bf-4 (w({r})w({s}))w({t})"),
                        word: vec![om_or_g(r), Gen::Om(s), Gen::Om(t)],
                        pos_a: 0,
                        pos_b: 1,
                    });
                }
            }
        }
        return out;
    }

    // (E(r) E(s)) E(t), 0 <= r < s < t
    for r in 0..=e_hi {
        for s in (r + 1)..=e_hi {
            for t in (s + 1)..=e_hi {
                out.push(OverlapCase {
                    name: format!("amb1 (E({r})E({s}))E({t})"),
                    word: vec![e_or_g(r), Gen::E(s), Gen::E(t)],
                    pos_a: 0,
                    pos_b: 1,
                });
            }
            // (E(r) E(s)) h
            if spec.has_h() {
                out.push(OverlapCase {
                    name: format!("amb2 (E({r})E({s}))h"),
                    word: vec![e_or_g(r), Gen::E(s), Gen::H],
                    pos_a: 0,
                    pos_b: 1,
                });
            }
        }
    }
    if let Some(n) = spec.g_order() {
        let n = n as usize;
        for s in 1..=e_hi {
            let mut word = vec![Gen::G; n];
            word.push(Gen::E(s));
            out.push(OverlapCase {
                name: format!("amb3 (g^{n})E({s})"),
                word,
                pos_a: 0,
                pos_b: n - 1,
            });
        }
        let mut word = vec![Gen::G; n];
        word.push(Gen::H);
        out.push(OverlapCase { name: format!("amb4 (g^{n})h"), word, pos_a: 0, pos_b: n - 1 });
    }
    if let Some(p) = spec.h_nilpotent() {
        let p = p as usize;
        for s in 0..=e_hi {
            let mut word = vec![e_or_g(s)];
            word.extend(std::iter::repeat(Gen::H).take(p));
            out.push(OverlapCase {
                name: format!("amb5 (E({s})h)h^{}", p - 1),
                word,
                pos_a: 0,
                pos_b: 1,
            });
        }
        out.push(OverlapCase {
            name: format!("amb6 (h h^{})h", p - 1),
            word: vec![Gen::H; p + 1],
            pos_a: 0,
            pos_b: 1,
        });
    }
    if spec.preset == Preset::TBarNPD {
        let j = spec.d.len() as u32;
        let p2 = spec.p.unwrap() as u32 - 2;
        for k in 1..=j {
            let cap = spec.e_power_cap(k).unwrap() as usize;
            for i in 0..k {
                let mut word = vec![e_or_g(i)];
                word.extend(std::iter::repeat(Gen::E(k)).take(cap));
                out.push(OverlapCase {
                    name: format!("npd1 (E({i})E({k}))E({k})^{}", cap - 1),
                    word,
                    pos_a: 0,
                    pos_b: 1,
                });
            }
            for l in (k + 1)..=p2 {
                let mut word = vec![Gen::E(k); cap];
                word.push(Gen::E(l));
                out.push(OverlapCase {
                    name: format!("npd2 (E({k})^{})E({l})", cap),
                    word,
                    pos_a: 0,
                    pos_b: cap - 1,
                });
            }
            let mut word = vec![Gen::E(k); cap];
            word.push(Gen::H);
            out.push(OverlapCase {
                name: format!("npd3 (E({k})^{cap})h"),
                word,
                pos_a: 0,
                pos_b: cap - 1,
            });
            out.push(OverlapCase {
                name: format!("npd4 (E({k})^{cap})E({k})"),
                word: vec![Gen::E(k); cap + 1],
                pos_a: 0,
                pos_b: 1,
            });
        }
    }
    out
}

/// Resolve one overlap: rewrite the word starting with the rule at each of
/// the two positions, reduce both results fully, and compare.
pub fn resolve_overlap(spec: &AlgebraSpec, case: &OverlapCase) -> Result<(bool, QElement)> {
    let reduce_from = |pos: usize| -> Result<QElement> {
        let steps = apply_at(spec, &case.word, pos).ok_or_else(|| {
            Error::Internal(format!("no rule applies at {pos} in {:?}", case.word))
        })?;
        let mut acc = QElement::zero(spec.field);
        for (w, c) in steps {
            acc = acc.add(&normal_form_word(spec, w, c, Strategy::Leftmost)?)?;
        }
        Ok(acc)
    };
    let a = reduce_from(case.pos_a)?;
    let b = reduce_from(case.pos_b)?;
    let diff = a.sub(&b)?;
    Ok((diff.is_zero(), diff))
}

/// Check every overlap ambiguity of the preset's rewriting system up to the
/// index bound; failures carry the residual as a witness.
pub fn check_overlap_ambiguities(
    spec: &AlgebraSpec,
    k_bound: u32,
    mode: ExecMode,
) -> Result<Report> {
    if !spec.is_word_engine() {
        return Err(Error::SpecMismatch);
    }
    let cases = overlap_cases(spec, k_bound);
    let results = map_batch(mode, &cases, |case| {
        resolve_overlap(spec, case).map(|(ok, diff)| (case.name.clone(), ok, diff))
    });
    let mut report = Report::new("ambiguities")
        .param("preset", spec.preset.name())
        .param("K", k_bound)
        .param("char", spec.field.characteristic());
    if let Some(p) = spec.p {
        report = report.param("p", p);
    }
    if let Some(n) = spec.n {
        report = report.param("n", n);
    }
    for r in results {
        let (name, ok, diff) = r?;
        if ok {
            report.pass(name);
        } else {
            report.fail(name, format!("residual: {diff}"));
        }
    }
    Ok(report)
}
