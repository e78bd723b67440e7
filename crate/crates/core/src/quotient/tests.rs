use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};

use super::*;
use crate::exec::ExecMode;
use crate::free::{ls_element, nc_multiply, shuffle_poly, t_coproduct, NcPoly};
use crate::scalar::binomial_in;
use crate::word::Word;
use crate::Error;

const Q: Field = Field::Rational;

fn tbar() -> AlgebraSpec {
    AlgebraSpec::tbar(0).unwrap()
}

fn tbar_pm() -> AlgebraSpec {
    AlgebraSpec::tbar_pm(0).unwrap()
}

fn tbar_n(p: u64, n: u64) -> AlgebraSpec {
    AlgebraSpec::tbar_n(p, n).unwrap()
}

fn tbar_np(p: u64, n: u64) -> AlgebraSpec {
    AlgebraSpec::tbar_np(p, n).unwrap()
}

fn tbar_npd(p: u64, n: u64, d: &[u32]) -> AlgebraSpec {
    AlgebraSpec::tbar_npd(p, n, d.to_vec()).unwrap()
}

fn bf() -> AlgebraSpec {
    AlgebraSpec::bf(0).unwrap()
}

fn mono(e_h: u32, e: &[(u32, u32)], e_g: i64) -> PbwMonomial {
    PbwMonomial { om: None, e_h, e: e.iter().copied().collect(), e_g }
}

fn q1(spec: &AlgebraSpec, m: PbwMonomial) -> QElement {
    QElement::monomial(spec.field, m, spec.field.one())
}

#[test]
fn validate_spec_examples() {
    assert!(AlgebraSpec::tbar_np(5, 5).is_ok());
    assert!(matches!(
        AlgebraSpec::tbar_np(5, 7),
        Err(Error::PNotDividingN { p: 5, n: 7 })
    ));
    assert!(matches!(
        AlgebraSpec::tbar_npd(5, 5, vec![2, 1]),
        Err(Error::BadDVector(_))
    ));
    assert!(matches!(AlgebraSpec::tbar_np(4, 4), Err(Error::NonPrimeP(4))));
    // char mismatch: field of char 3 but p = 5
    let r = AlgebraSpec::build(Preset::TBarNP, 3, Some(5), Some(5), vec![], false);
    assert!(matches!(r, Err(Error::CharMismatch { chr: 3, p: 5 })));
    // the d-vector length is bounded by p - 2
    assert!(matches!(
        AlgebraSpec::tbar_npd(3, 3, vec![1, 1]),
        Err(Error::BadDVector(_))
    ));
    // commutative variant is fine in characteristic 0
    assert!(AlgebraSpec::tbar_n_commutative(0, 4).is_ok());
}

#[test]
fn normal_form_examples() {
    // gh = hg + E(1) in TBar
    let s = tbar();
    let nf = normal_form(&s, &GenPoly::word(Q, vec![Gen::G, Gen::H])).unwrap();
    let mut want = QElement::zero(Q);
    crate::free::add_assign_term(&mut want.terms, mono(1, &[], 1), Q.one());
    crate::free::add_assign_term(&mut want.terms, mono(0, &[(1, 1)], 0), Q.one());
    assert_eq!(nf, want);

    // h^3 = 0 in TBarNP(3,3)
    let s = tbar_np(3, 3);
    let nf = normal_form(&s, &GenPoly::word(s.field, vec![Gen::H; 3])).unwrap();
    assert!(nf.is_zero());

    // w(1) w(1) = w(2) g + w(1) E(1) in BF
    let s = bf();
    let nf = normal_form(&s, &GenPoly::word(Q, vec![Gen::Om(1), Gen::Om(1)])).unwrap();
    let mut want = QElement::zero(Q);
    crate::free::add_assign_term(
        &mut want.terms,
        PbwMonomial { om: Some(2), e_g: 1, ..Default::default() },
        Q.one(),
    );
    crate::free::add_assign_term(
        &mut want.terms,
        PbwMonomial { om: Some(1), e: BTreeMap::from([(1, 1)]), ..Default::default() },
        Q.one(),
    );
    assert_eq!(nf, want);
}

#[test]
fn q_multiply_examples() {
    let s = tbar();
    // E(1) h = h E(1) + E(2)
    let prod = q_multiply(&s, &q1(&s, mono(0, &[(1, 1)], 0)), &q1(&s, mono(1, &[], 0))).unwrap();
    let mut want = QElement::zero(Q);
    crate::free::add_assign_term(&mut want.terms, mono(1, &[(1, 1)], 0), Q.one());
    crate::free::add_assign_term(&mut want.terms, mono(0, &[(2, 1)], 0), Q.one());
    assert_eq!(prod, want);

    // g^{n-1} g = 1 in TBarN(3,3)
    let s3 = tbar_n(3, 3);
    let prod = q_multiply(&s3, &q1(&s3, mono(0, &[], 2)), &q1(&s3, mono(0, &[], 1))).unwrap();
    assert_eq!(prod, QElement::one(s3.field));

    // E(2) E(1) is already normal
    let prod = q_multiply(&s, &q1(&s, mono(0, &[(2, 1)], 0)), &q1(&s, mono(0, &[(1, 1)], 0))).unwrap();
    assert_eq!(prod, q1(&s, mono(0, &[(1, 1), (2, 1)], 0)));
}

#[test]
fn confluence_under_random_strategies() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(20);
    let specs = [tbar(), tbar_n(3, 3), tbar_np(3, 3), tbar_npd(3, 3, &[1])];
    for spec in &specs {
        for trial in 0..60 {
            let len = rng.random_range(1..=8);
            let word: Vec<Gen> = (0..len)
                .map(|_| match rng.random_range(0..4) {
                    0 => Gen::G,
                    1 => Gen::H,
                    k => Gen::E(k as u32),
                })
                .collect();
            let left =
                normal_form_word(spec, word.clone(), spec.field.one(), Strategy::Leftmost).unwrap();
            let right =
                normal_form_word(spec, word.clone(), spec.field.one(), Strategy::Rightmost)
                    .unwrap();
            let seeded =
                normal_form_word(spec, word.clone(), spec.field.one(), Strategy::Seeded(trial))
                    .unwrap();
            assert_eq!(left, right, "{:?} {word:?}", spec.preset);
            assert_eq!(left, seeded, "{:?} {word:?}", spec.preset);
        }
    }
    // BF words
    let s = bf();
    for trial in 0..40 {
        let len = rng.random_range(1..=5);
        let word: Vec<Gen> = (0..len)
            .map(|_| match rng.random_range(0..5) {
                0 => Gen::G,
                1 | 2 => Gen::E(rng.random_range(1..4)),
                _ => Gen::Om(rng.random_range(1..4)),
            })
            .collect();
        let left = normal_form_word(&s, word.clone(), Q.one(), Strategy::Leftmost).unwrap();
        let right = normal_form_word(&s, word.clone(), Q.one(), Strategy::Rightmost).unwrap();
        let seeded = normal_form_word(&s, word.clone(), Q.one(), Strategy::Seeded(trial)).unwrap();
        assert_eq!(left, right, "{word:?}");
        assert_eq!(left, seeded, "{word:?}");
    }
}

#[test]
fn project_examples() {
    let s = tbar();
    // E_{ggh} dies
    let eggh = ls_element(Q, &Word::parse("ggh").unwrap()).unwrap();
    assert!(project_from_free(&s, &eggh).unwrap().is_zero());
    // omega_n maps to sum binom(n,k) h^{n-k} E(k)
    for n in 0..=6u32 {
        let om = NcPoly::word(Q, crate::word::omega_word(n as usize));
        let pi = project_from_free(&s, &om).unwrap();
        assert_eq!(pi, omega_tilde_expansion(&s, n).unwrap(), "n={n}");
    }
    // g SH_{2,1} = pi(w2 w0 + w1 w1 + w0 w2)
    let g = NcPoly::word(Q, Word::g());
    let lhs = project_from_free(&s, &nc_multiply(&g, &shuffle_poly(Q, 2, 1)).unwrap()).unwrap();
    let mut rhs = QElement::zero(Q);
    for (a, b) in [(2u32, 0u32), (1, 1), (0, 2)] {
        let pa = omega_tilde_expansion(&s, a).unwrap();
        let pb = omega_tilde_expansion(&s, b).unwrap();
        rhs = rhs.add(&q_multiply(&s, &pa, &pb).unwrap()).unwrap();
    }
    assert_eq!(lhs, rhs);
}

#[test]
fn projection_is_algebra_and_coalgebra_map() {
    let s = tbar();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
    for _ in 0..25 {
        let mk = |rng: &mut rand_chacha::ChaCha8Rng| {
            let len = rng.random_range(0..=5);
            Word(
                (0..len)
                    .map(|_| {
                        if rng.random::<bool>() {
                            crate::word::Letter::H
                        } else {
                            crate::word::Letter::G
                        }
                    })
                    .collect(),
            )
        };
        let a = NcPoly::word(Q, mk(&mut rng));
        let b = NcPoly::word(Q, mk(&mut rng));
        // algebra map
        let lhs = project_from_free(&s, &nc_multiply(&a, &b).unwrap()).unwrap();
        let rhs = q_multiply(
            &s,
            &project_from_free(&s, &a).unwrap(),
            &project_from_free(&s, &b).unwrap(),
        )
        .unwrap();
        assert_eq!(lhs, rhs);
        // coalgebra map: (pi x pi) D_T(a) = D q(pi(a))
        let mut pushed = QTensor::zero(Q);
        for ((l, r), c) in &t_coproduct(&a).terms {
            let pl = project_from_free(&s, &NcPoly::word(Q, l.clone())).unwrap();
            let pr = project_from_free(&s, &NcPoly::word(Q, r.clone())).unwrap();
            pushed = pushed.add(&QTensor::of(&pl, &pr).scale_tensor(c));
        }
        let direct = q_coproduct(&s, &project_from_free(&s, &a).unwrap()).unwrap();
        assert_eq!(pushed, direct);
    }
}

#[test]
fn coproduct_examples() {
    let s = tbar();
    // D(E(1)) = g (x) E(1) + E(1) (x) g^2
    let d = q_coproduct(&s, &q1(&s, mono(0, &[(1, 1)], 0))).unwrap();
    let mut want = QTensor::zero(Q);
    crate::free::add_assign_term(&mut want.terms, (mono(0, &[], 1), mono(0, &[(1, 1)], 0)), Q.one());
    crate::free::add_assign_term(&mut want.terms, (mono(0, &[(1, 1)], 0), mono(0, &[], 2)), Q.one());
    assert_eq!(d, want);

    // in TBarN(p, p) before killing: D(E(p-1)) = g (x) E(p-1) + E(p-1) (x) g^p
    for p in [3u64, 5] {
        let sp = tbar_n(p, p);
        let k = p as u32 - 1;
        let d = q_coproduct(&sp, &q1(&sp, mono(0, &[(k, 1)], 0))).unwrap();
        let mut want = QTensor::zero(sp.field);
        crate::free::add_assign_term(
            &mut want.terms,
            (mono(0, &[], 1), mono(0, &[(k, 1)], 0)),
            sp.field.one(),
        );
        crate::free::add_assign_term(
            &mut want.terms,
            (mono(0, &[(k, 1)], 0), mono(0, &[], (p as i64) % p as i64)),
            sp.field.one(),
        );
        assert_eq!(d, want, "p={p}");
    }

    // Radford power formula: D(h^p) = 1 (x) h^p + h (x) E(p-1) + h^p (x) g^p
    for p in [3u64, 5] {
        let sp = tbar_n(p, p);
        let d = q_coproduct(&sp, &q1(&sp, mono(p as u32, &[], 0))).unwrap();
        let mut want = QTensor::zero(sp.field);
        crate::free::add_assign_term(
            &mut want.terms,
            (mono(0, &[], 0), mono(p as u32, &[], 0)),
            sp.field.one(),
        );
        crate::free::add_assign_term(
            &mut want.terms,
            (mono(1, &[], 0), mono(0, &[(p as u32 - 1, 1)], 0)),
            sp.field.one(),
        );
        crate::free::add_assign_term(
            &mut want.terms,
            (mono(p as u32, &[], 0), mono(0, &[], 0)),
            sp.field.one(),
        );
        assert_eq!(d, want, "p={p}");
    }
}

#[test]
fn coproduct_matches_free_pushforward() {
    // D(E(k)) from the partition formula equals the image of the free
    // coproduct of E_{omega_k} for k <= 5
    let s = tbar();
    for k in 0..=5u32 {
        let e = ls_element(Q, &crate::word::omega_word(k as usize)).unwrap();
        let mut pushed = QTensor::zero(Q);
        for ((l, r), c) in &t_coproduct(&e).terms {
            let pl = project_from_free(&s, &NcPoly::word(Q, l.clone())).unwrap();
            let pr = project_from_free(&s, &NcPoly::word(Q, r.clone())).unwrap();
            pushed = pushed.add(&QTensor::of(&pl, &pr).scale_tensor(c));
        }
        let direct = q_coproduct(&s, &QElement::generator(&s, Gen::E(k)).unwrap()).unwrap();
        assert_eq!(pushed, direct, "k={k}");
    }
}

#[test]
fn counit_examples() {
    let s = tbar();
    assert_eq!(q_counit(&s, &q1(&s, mono(0, &[], 3))).unwrap(), Q.one());
    assert_eq!(q_counit(&s, &q1(&s, mono(1, &[(2, 1)], 0))).unwrap(), Q.zero());
    let sbf = bf();
    assert_eq!(
        q_counit(&sbf, &QElement::generator(&sbf, Gen::Om(0)).unwrap()).unwrap(),
        Q.one()
    );
}

#[test]
fn antipode_examples() {
    let s = tbar_n(3, 3);
    let h = q1(&s, mono(1, &[], 0));
    // S(h) = -h g^{n-1}
    let sh = q_antipode(&s, &h).unwrap();
    assert_eq!(sh, q1(&s, mono(1, &[], 2)).scale(&-s.field.one()));
    // S^2(h) = h + E(1) g^{n-1}
    let s2h = q_antipode(&s, &sh).unwrap();
    let want = h.add(&q1(&s, mono(0, &[(1, 1)], 2))).unwrap();
    assert_eq!(s2h, want);
    // S(E(1)) = -E(1) g^{-3}
    let se = q_antipode(&s, &q1(&s, mono(0, &[(1, 1)], 0))).unwrap();
    assert_eq!(se, q1(&s, mono(0, &[(1, 1)], 0)).scale(&-s.field.one()));
    // g^{-3} = 1 when n = 3; check in TBarPm where it stays visible
    let spm = tbar_pm();
    let se = q_antipode(&spm, &q1(&spm, mono(0, &[(1, 1)], 0))).unwrap();
    assert_eq!(se, q1(&spm, mono(0, &[(1, 1)], -3)).scale(&-Q.one()));
    // S(g) = g^{-1} in the localized preset
    let sg = q_antipode(&spm, &q1(&spm, mono(0, &[], 1))).unwrap();
    assert_eq!(sg, q1(&spm, mono(0, &[], -1)));
    // TBar refuses
    assert!(matches!(q_antipode(&tbar(), &QElement::one(Q)), Err(Error::NotHopf)));
    // S^{-1} inverts S
    for v in [h.clone(), q1(&s, mono(0, &[(1, 1)], 1)), q1(&s, mono(2, &[(1, 2)], 2))] {
        let round = q_antipode_inv(&s, &q_antipode(&s, &v).unwrap()).unwrap();
        assert_eq!(round, v);
    }
}

#[test]
fn antipode_power_s2p_is_identity() {
    for (p, n) in [(3u64, 3u64), (3, 6)] {
        let s = tbar_n(p, n);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let basis = enumerate_basis(&s, 4, default_g_range(&s, 0));
        let mut elems: Vec<QElement> = vec![
            q1(&s, mono(0, &[], 1)), // g
            q1(&s, mono(1, &[], 0)), // h
        ];
        for _ in 0..20 {
            elems.push(q1(&s, basis[rng.random_range(0..basis.len())].clone()));
        }
        for v in elems {
            let mut cur = v.clone();
            for _ in 0..2 * p {
                cur = q_antipode(&s, &cur).unwrap();
            }
            assert_eq!(cur, v, "p={p} n={n}");
        }
    }
}

#[test]
fn eq21_inversion() {
    // E(n) = sum_k binom(n,k) (-1)^k h^k pi(omega_{n-k})
    let s = tbar();
    for n in 0..=8u32 {
        let mut rhs = QElement::zero(Q);
        for k in 0..=n {
            let sign = if k % 2 == 0 { Q.one() } else { -Q.one() };
            let c = &binomial_in(Q, n as u64, k as u64) * &sign;
            let hk = q1(&s, mono(k, &[], 0));
            let om = omega_tilde_expansion(&s, n - k).unwrap();
            rhs = rhs.add(&q_multiply(&s, &hk, &om).unwrap().scale(&c)).unwrap();
        }
        assert_eq!(rhs, QElement::generator(&s, Gen::E(n)).unwrap(), "n={n}");
    }
}

#[test]
fn exchange_laws_in_quotient() {
    // the B_F exchange laws hold for the omega-images inside the quotient
    let s = tbar();
    let om = |n: u32| omega_tilde_expansion(&s, n).unwrap();
    let e = |k: u32| QElement::generator(&s, Gen::E(k)).unwrap();
    for m in 0..=5u32 {
        for n in 0..=5u32 {
            // E(m) w(n) = sum binom(n,k) w(n-k) E(m+k)
            let lhs = q_multiply(&s, &e(m), &om(n)).unwrap();
            let mut rhs = QElement::zero(Q);
            for k in 0..=n {
                let c = binomial_in(Q, n as u64, k as u64);
                rhs = rhs
                    .add(&q_multiply(&s, &om(n - k), &e(m + k)).unwrap().scale(&c))
                    .unwrap();
            }
            assert_eq!(lhs, rhs, "exchange E({m}) w({n})");
            // w(m) w(n) = sum binom(n,k) w(m+n-k) E(k)
            let lhs = q_multiply(&s, &om(m), &om(n)).unwrap();
            let mut rhs = QElement::zero(Q);
            for k in 0..=n {
                let c = binomial_in(Q, n as u64, k as u64);
                rhs = rhs
                    .add(&q_multiply(&s, &om(m + n - k), &e(k)).unwrap().scale(&c))
                    .unwrap();
            }
            assert_eq!(lhs, rhs, "exchange w({m}) w({n})");
            // w(m) E(n) = sum binom(n,t) (-1)^t w(m+t) w(n-t)
            let lhs = q_multiply(&s, &om(m), &e(n)).unwrap();
            let mut rhs = QElement::zero(Q);
            for t in 0..=n {
                let sign = if t % 2 == 0 { Q.one() } else { -Q.one() };
                let c = &binomial_in(Q, n as u64, t as u64) * &sign;
                rhs = rhs
                    .add(&q_multiply(&s, &om(m + t), &om(n - t)).unwrap().scale(&c))
                    .unwrap();
            }
            assert_eq!(lhs, rhs, "exchange w({m}) E({n})");
        }
    }
    // omega_{n+1} = omega_n h
    let h = q1(&s, mono(1, &[], 0));
    for n in 0..=6u32 {
        assert_eq!(q_multiply(&s, &om(n), &h).unwrap(), om(n + 1));
    }
}

#[test]
fn bf_relation_31_as_identity() {
    // w(r) E(s) = sum_t binom(s,t) (-1)^t w(r+t) w(s-t) holds in the BF
    // engine even though it is not one of its reduction rules
    let s = bf();
    for r in 1..=4u32 {
        for k in 1..=4u32 {
            let lhs = normal_form(&s, &GenPoly::word(Q, vec![Gen::Om(r), Gen::E(k)])).unwrap();
            let mut rhs = QElement::zero(Q);
            for t in 0..=k {
                let sign = if t % 2 == 0 { Q.one() } else { -Q.one() };
                let c = &binomial_in(Q, k as u64, t as u64) * &sign;
                let w = vec![
                    if r + t == 0 { Gen::G } else { Gen::Om(r + t) },
                    if k - t == 0 { Gen::G } else { Gen::Om(k - t) },
                ];
                rhs = rhs.add(&normal_form_word(&s, w, c, Strategy::Leftmost).unwrap()).unwrap();
            }
            assert_eq!(lhs, rhs, "w({r}) E({k})");
        }
    }
}

#[test]
fn bf_matches_quotient_realization() {
    // the BF engine agrees with computing in the quotient after expanding
    // w(n) via its h,E-expression
    let s = bf();
    let st = tbar();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
    for _ in 0..30 {
        let len = rng.random_range(1..=4);
        let word: Vec<Gen> = (0..len)
            .map(|_| match rng.random_range(0..3) {
                0 => Gen::G,
                1 => Gen::E(rng.random_range(1..4)),
                _ => Gen::Om(rng.random_range(1..4)),
            })
            .collect();
        let in_bf = normal_form_word(&s, word.clone(), Q.one(), Strategy::Leftmost).unwrap();
        // realize in the quotient
        let realize = |q: &QElement| -> QElement {
            let mut out = QElement::zero(Q);
            for (m, c) in &q.terms {
                let mut acc = QElement::one(Q);
                if let Some(omn) = m.om {
                    acc = q_multiply(&st, &acc, &omega_tilde_expansion(&st, omn).unwrap()).unwrap();
                }
                for (k, e) in m.e.iter().rev() {
                    for _ in 0..*e {
                        acc = q_multiply(&st, &acc, &QElement::generator(&st, Gen::E(*k)).unwrap())
                            .unwrap();
                    }
                }
                acc = q_multiply(&st, &acc, &q1(&st, mono(0, &[], m.e_g))).unwrap();
                out = out.add(&acc.scale(c)).unwrap();
            }
            out
        };
        let direct = {
            let mut acc = QElement::one(Q);
            for g in &word {
                let f = match g {
                    Gen::Om(n) => omega_tilde_expansion(&st, *n).unwrap(),
                    other => QElement::generator(&st, *other).unwrap(),
                };
                acc = q_multiply(&st, &acc, &f).unwrap();
            }
            acc
        };
        assert_eq!(realize(&in_bf), direct, "{word:?}");
    }
}

#[test]
fn commutation_and_ore_invariants() {
    let s = tbar();
    let g = q1(&s, mono(0, &[], 1));
    let h = q1(&s, mono(1, &[], 0));
    for k in 1..=8u32 {
        let e = QElement::generator(&s, Gen::E(k)).unwrap();
        let com = q_multiply(&s, &g, &e).unwrap().sub(&q_multiply(&s, &e, &g).unwrap()).unwrap();
        assert!(com.is_zero(), "[g, E({k})] != 0");
        // ad_r h (E(k)) = [E(k), h] = E(k+1), inside the E-subalgebra
        let ad = q_multiply(&s, &e, &h).unwrap().sub(&q_multiply(&s, &h, &e).unwrap()).unwrap();
        assert_eq!(ad, QElement::generator(&s, Gen::E(k + 1)).unwrap());
    }
    // maximal-commutativity witness: [g, h^n r] != 0 in characteristic 0
    for n in 1..=5u32 {
        for r in [mono(0, &[], 0), mono(0, &[(1, 1)], 0), mono(0, &[(2, 1)], 0)] {
            let v = q_multiply(&s, &q1(&s, mono(n, &[], 0)), &q1(&s, r)).unwrap();
            let com = q_multiply(&s, &g, &v).unwrap().sub(&q_multiply(&s, &v, &g).unwrap()).unwrap();
            assert!(!com.is_zero(), "n={n}");
        }
    }
}

#[test]
fn diamond_tbar_passes() {
    let r = check_overlap_ambiguities(&tbar(), 6, ExecMode::default()).unwrap();
    assert!(r.passed(), "{r}");
    assert!(r.entries.iter().any(|e| e.check.starts_with("amb1")));
    assert!(r.entries.iter().any(|e| e.check.starts_with("amb2")));
}

#[test]
fn diamond_char0_obstruction() {
    // g^n = 1 with n E(1) != 0: the (g^{n-1} g) h overlap fails with
    // residual n E(1) g^{n-1}
    let spec = AlgebraSpec::tbar_n_unchecked(0, 3).unwrap();
    let r = check_overlap_ambiguities(&spec, 4, ExecMode::default()).unwrap();
    assert!(!r.passed());
    let bad: Vec<_> = r.entries.iter().filter(|e| !e.pass).collect();
    assert_eq!(bad.len(), 1, "{r}");
    assert!(bad[0].check.starts_with("amb4"), "{r}");
    let witness = bad[0].witness.as_ref().unwrap();
    assert!(witness.contains("3*E(1)*g^2"), "witness: {witness}");
}

#[test]
fn diamond_truncated_presets_pass() {
    for spec in [
        tbar_n(3, 3),
        AlgebraSpec::tbar_n_prime(3, 3).unwrap(),
        tbar_np(3, 3),
        tbar_npd(3, 3, &[1]),
        AlgebraSpec::tbar_n_commutative(0, 4).unwrap(),
        bf(),
    ] {
        let r = check_overlap_ambiguities(&spec, 6, ExecMode::default()).unwrap();
        assert!(r.passed(), "{:?}: {r}", spec.preset);
    }
}

#[test]
fn axioms_small_presets() {
    let r = verify_bialgebra_axioms(&tbar_np(3, 3), 5, 1, ExecMode::default()).unwrap();
    assert!(r.passed(), "{r}");
    let r = verify_bialgebra_axioms(&tbar(), 4, 1, ExecMode::default()).unwrap();
    assert!(r.passed(), "{r}");
    assert!(r.entries.iter().any(|e| e.check.contains("antipode refused")));
    let r = verify_bialgebra_axioms(&bf(), 4, 1, ExecMode::default()).unwrap();
    assert!(r.passed(), "{r}");
    // dedicated Faa di Bruno presets route through their own checker
    for preset in [Preset::BFdB, Preset::HFdB, Preset::BFdBnc] {
        let spec = AlgebraSpec::fdb(preset, 0).unwrap();
        let r = verify_bialgebra_axioms(&spec, 4, 1, ExecMode::default()).unwrap();
        assert!(r.passed(), "{preset:?}: {r}");
    }
}

#[test]
fn radford_quotient_link() {
    // pi(SH_{p-k,k}) = 0 in TBarNP(p, n=p)
    for p in [3u64, 5] {
        let s = tbar_np(p, p);
        let field = s.field;
        for k in 1..=(p - 1) as u32 {
            let sh = shuffle_poly(field, p as u32 - k, k);
            let pi = project_from_free(&s, &sh).unwrap();
            assert!(pi.is_zero(), "p={p} k={k}: {pi}");
        }
    }
}

#[test]
fn localized_normalization() {
    let s = tbar_pm();
    // g^{-1} h = h g^{-1} - E(1) g^{-2}
    let nf = normal_form(&s, &GenPoly::word(Q, vec![Gen::GInv, Gen::H])).unwrap();
    let mut want = QElement::zero(Q);
    crate::free::add_assign_term(&mut want.terms, mono(1, &[], -1), Q.one());
    crate::free::add_assign_term(&mut want.terms, mono(0, &[(1, 1)], -2), -Q.one());
    assert_eq!(nf, want);
    // g g^{-1} = 1
    let nf = normal_form(&s, &GenPoly::word(Q, vec![Gen::G, Gen::GInv])).unwrap();
    assert_eq!(nf, QElement::one(Q));
    // GInv is illegal outside the localized presets
    assert!(matches!(
        normal_form(&tbar(), &GenPoly::word(Q, vec![Gen::GInv])),
        Err(Error::IllegalGenerator(_))
    ));
}

#[test]
fn basis_rank_oracle_small() {
    // rank of normal forms of all words of length <= 6 equals the count of
    // monomials of generator length <= 6
    use crate::analysis::{growth_function, quotient_word_rank};
    for spec in [tbar(), tbar_n(3, 3)] {
        let table = growth_function(&spec, 6).unwrap();
        for n in [4u32, 6] {
            let rank = quotient_word_rank(&spec, n, ExecMode::default()).unwrap();
            assert_eq!(rank as u128, table.get(n).unwrap(), "{:?} n={n}", spec.preset);
        }
    }
}
