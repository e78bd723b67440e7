//! Algebra, coalgebra and antipode operations on quotient elements.

use std::collections::HashMap;

use crate::free::{add_assign_term, pbw_coordinates, NcPoly};
use crate::scalar::{
    binomial_in, multinomial_partition_coefficient, partitions_multiplicity, weak_compositions,
    Scalar,
};
use crate::word::{as_omega, Letter};
use crate::{Error, Result};

use super::rewrite::{normal_form_word, Strategy};
use super::{canonicalize, AlgebraSpec, Gen, PbwMonomial, Preset, QElement, QTensor};

/// The concatenation of two normal monomials is itself normal when no block
/// of `b` has to cross a later block of `a`.
fn concat_is_normal(a: &PbwMonomial, b: &PbwMonomial) -> bool {
    if b.om.is_some() && !a.is_one() {
        return false;
    }
    if b.e_h > 0 && (a.e_g != 0 || !a.e.is_empty()) {
        return false;
    }
    if let Some(b_max) = b.e.keys().max() {
        if a.e_g != 0 {
            return false;
        }
        if let Some(a_min) = a.e.keys().min() {
            if a_min < b_max {
                return false;
            }
        }
    }
    if a.e_g != 0 && b.e_g != 0 && (a.e_g > 0) != (b.e_g > 0) {
        return false;
    }
    true
}

pub(crate) fn q_multiply_monomials(
    spec: &AlgebraSpec,
    a: &PbwMonomial,
    b: &PbwMonomial,
) -> Result<QElement> {
    if concat_is_normal(a, b) {
        let mut m = a.clone();
        m.om = a.om.or(b.om);
        m.e_h += b.e_h;
        for (k, e) in &b.e {
            *m.e.entry(*k).or_insert(0) += e;
        }
        m.e_g += b.e_g;
        return Ok(match canonicalize(spec, m) {
            Some(m) => QElement::monomial(spec.field, m, spec.field.one()),
            None => QElement::zero(spec.field),
        });
    }
    let mut w = a.gen_word();
    w.extend(b.gen_word());
    normal_form_word(spec, w, spec.field.one(), Strategy::Leftmost)
}

/// Product in the quotient: concatenate and reduce to normal form.
pub fn q_multiply(spec: &AlgebraSpec, a: &QElement, b: &QElement) -> Result<QElement> {
    if a.field != spec.field || b.field != spec.field {
        return Err(Error::SpecMismatch);
    }
    let mut out = QElement::zero(spec.field);
    for (ma, ca) in &a.terms {
        for (mb, cb) in &b.terms {
            let prod = q_multiply_monomials(spec, ma, mb)?;
            out = out.add(&prod.scale(&(ca * cb)))?;
        }
    }
    Ok(out)
}

pub fn q_pow(spec: &AlgebraSpec, a: &QElement, e: u32) -> Result<QElement> {
    let mut acc = QElement::one(spec.field);
    for _ in 0..e {
        acc = q_multiply(spec, &acc, a)?;
    }
    Ok(acc)
}

/// Image of `omega_n` in the quotient:
/// `sum_k binom(n,k) h^{n-k} E(k)` with `E(0) = g`.
pub fn omega_tilde_expansion(spec: &AlgebraSpec, n: u32) -> Result<QElement> {
    if !spec.has_h() {
        return Err(Error::IllegalGenerator(format!("w({n})")));
    }
    let mut out = QElement::zero(spec.field);
    for k in 0..=n {
        let mut m = PbwMonomial::h_power(n - k);
        if k == 0 {
            m.e_g = 1;
        } else {
            m.e.insert(k, 1);
        }
        if let Some(m) = canonicalize(spec, m) {
            add_assign_term(&mut out.terms, m, binomial_in(spec.field, n as u64, k as u64));
        }
    }
    Ok(out)
}

/// Projection from the free algebra: take PBW coordinates, kill every factor
/// `E_alpha` with `alpha(g) >= 2`, and read the survivors off as quotient
/// monomials.
pub fn project_from_free(spec: &AlgebraSpec, a: &NcPoly) -> Result<QElement> {
    if !spec.is_word_engine() || spec.preset == Preset::BF {
        return Err(Error::SpecMismatch);
    }
    if a.field != spec.field {
        return Err(Error::FieldMismatch(a.field, spec.field));
    }
    let coords = pbw_coordinates(a)?;
    let mut out = QElement::zero(spec.field);
    'mono: for (mono, c) in &coords.terms {
        let mut m = PbwMonomial::one();
        for (alpha, exp) in mono {
            if alpha.count(Letter::G) >= 2 {
                continue 'mono;
            }
            if alpha.0 == [Letter::H] {
                m.e_h += exp;
            } else {
                match as_omega(alpha) {
                    Some(0) => m.e_g += *exp as i64,
                    Some(k) => {
                        m.e.insert(k as u32, *exp);
                    }
                    None => {
                        return Err(Error::Internal(format!(
                            "unexpected Lyndon factor {alpha} with one g"
                        )))
                    }
                }
            }
        }
        if let Some(m) = canonicalize(spec, m) {
            add_assign_term(&mut out.terms, m, c.clone());
        }
    }
    Ok(out)
}

/// `D(h) = 1 (x) h + h (x) g`.
fn delta_h(spec: &AlgebraSpec) -> QTensor {
    let field = spec.field;
    let mut t = QTensor::zero(field);
    add_assign_term(
        &mut t.terms,
        (PbwMonomial::one(), PbwMonomial::h_power(1)),
        field.one(),
    );
    add_assign_term(
        &mut t.terms,
        (PbwMonomial::h_power(1), PbwMonomial::g_power(1)),
        field.one(),
    );
    t
}

/// `D(E(k))` from the partition formula: the right tensor legs are Bell-type
/// polynomials in `g, E(1), ..., E(k)` whose integer coefficients
/// `(k+1)! / (prod t_i! (i!)^{t_i})` count set partitions; they are computed
/// exactly over Z and then reduced into the field.
fn delta_e(spec: &AlgebraSpec, k: u32) -> Result<QTensor> {
    let field = spec.field;
    let mut t = QTensor::zero(field);
    for part in partitions_multiplicity(k + 1) {
        let blocks: u32 = part.values().sum();
        let r = blocks - 1; // left leg index
        let left = if r == 0 {
            Some(PbwMonomial::g_power(1))
        } else if spec.e_kill_from().is_some_and(|k0| r >= k0) {
            None
        } else {
            Some(PbwMonomial::e_gen(r))
        };
        let Some(left) = left else { continue };
        let mut right = PbwMonomial::one();
        for (size, mult) in &part {
            if *size == 1 {
                right.e_g += *mult as i64;
            } else {
                right.e.insert(size - 1, *mult);
            }
        }
        let Some(right) = canonicalize(spec, right) else { continue };
        let coeff = field.from_bigint(&multinomial_partition_coefficient(k as u64 + 1, &part)?);
        add_assign_term(&mut t.terms, (left, right), coeff);
    }
    Ok(t)
}

/// `D(w(n)) = sum_k w(k) (x) sum_{i_0+...+i_k = n-k} w(i_0)...w(i_k)`.
fn delta_om(spec: &AlgebraSpec, n: u32) -> Result<QTensor> {
    let field = spec.field;
    let mut t = QTensor::zero(field);
    for k in 0..=n {
        let left = QElement::generator(spec, Gen::Om(k))?;
        let mut right = QElement::zero(field);
        for comp in weak_compositions(n - k, k + 1) {
            let w: Vec<Gen> = comp
                .iter()
                .map(|&i| if i == 0 { Gen::G } else { Gen::Om(i) })
                .collect();
            right = right.add(&normal_form_word(spec, w, field.one(), Strategy::Leftmost)?)?;
        }
        t = t.add(&QTensor::of(&left, &right));
    }
    Ok(t)
}

/// Coproduct on a quotient element, computed generator by generator and
/// extended multiplicatively. The co-opposite flag flips the legs at the end.
pub fn q_coproduct(spec: &AlgebraSpec, a: &QElement) -> Result<QTensor> {
    if a.field != spec.field {
        return Err(Error::SpecMismatch);
    }
    let field = spec.field;
    let mut out = QTensor::zero(field);
    for (m, c) in &a.terms {
        let mut acc = QTensor::zero(field);
        add_assign_term(
            &mut acc.terms,
            (PbwMonomial::g_power(m.e_g), PbwMonomial::g_power(m.e_g)),
            field.one(),
        );
        // multiply in normal order: omega, h-block, E-blocks descending, g
        let mut left_factors: Vec<QTensor> = Vec::new();
        if let Some(om) = m.om {
            left_factors.push(delta_om(spec, om)?);
        }
        let dh = delta_h(spec);
        for _ in 0..m.e_h {
            left_factors.push(dh.clone());
        }
        for (k, e) in m.e.iter().rev() {
            let de = delta_e(spec, *k)?;
            for _ in 0..*e {
                left_factors.push(de.clone());
            }
        }
        let mut tens = QTensor::zero(field);
        add_assign_term(
            &mut tens.terms,
            (PbwMonomial::one(), PbwMonomial::one()),
            c.clone(),
        );
        for f in &left_factors {
            tens = tens.mul(spec, f)?;
        }
        tens = tens.mul(spec, &acc)?;
        out = out.add(&tens);
    }
    if spec.cop {
        out = out.swap();
    }
    Ok(out)
}

/// Counit: 1 on pure `g`-powers, 0 on anything carrying `h`, `E`, or omega.
pub fn q_counit(spec: &AlgebraSpec, a: &QElement) -> Result<Scalar> {
    if a.field != spec.field {
        return Err(Error::SpecMismatch);
    }
    let mut out = spec.field.zero();
    for (m, c) in &a.terms {
        if m.is_grouplike() {
            out = &out + c;
        }
    }
    Ok(out)
}

fn g_inverse_monomial(spec: &AlgebraSpec) -> PbwMonomial {
    canonicalize(spec, PbwMonomial::g_power(-1)).expect("g is invertible in Hopf presets")
}

fn s_of_e(
    spec: &AlgebraSpec,
    k: u32,
    sh: &QElement,
    memo: &mut HashMap<u32, QElement>,
) -> Result<QElement> {
    if let Some(hit) = memo.get(&k) {
        return Ok(hit.clone());
    }
    let val = if k == 0 {
        QElement::monomial(spec.field, g_inverse_monomial(spec), spec.field.one())
    } else {
        // E(k) = [E(k-1), h], and the antipode is an anti-homomorphism:
        // S(E(k)) = -[S(E(k-1)), S(h)]
        let prev = s_of_e(spec, k - 1, sh, memo)?;
        let lhs = q_multiply(spec, &prev, sh)?;
        let rhs = q_multiply(spec, sh, &prev)?;
        rhs.sub(&lhs)?
    };
    memo.insert(k, val.clone());
    Ok(val)
}

fn antipode_with(spec: &AlgebraSpec, a: &QElement, sh: &QElement) -> Result<QElement> {
    let field = spec.field;
    let mut memo: HashMap<u32, QElement> = HashMap::new();
    let mut out = QElement::zero(field);
    for (m, c) in &a.terms {
        if m.om.is_some() {
            return Err(Error::NotHopf);
        }
        // anti-homomorphism: reverse the factor order
        let mut acc = QElement::monomial(
            field,
            canonicalize(spec, PbwMonomial::g_power(-m.e_g)).expect("g invertible"),
            field.one(),
        );
        for (k, e) in m.e.iter() {
            let se = s_of_e(spec, *k, sh, &mut memo)?;
            for _ in 0..*e {
                acc = q_multiply(spec, &acc, &se)?;
            }
        }
        for _ in 0..m.e_h {
            acc = q_multiply(spec, &acc, sh)?;
        }
        out = out.add(&acc.scale(c))?;
    }
    Ok(out)
}

/// Antipode `S`: `S(g) = g^{-1}`, `S(h) = -h g^{-1}`, extended as an
/// anti-homomorphism with `S(E(k)) = -[S(E(k-1)), S(h)]` memoized.
pub fn q_antipode(spec: &AlgebraSpec, a: &QElement) -> Result<QElement> {
    if !spec.is_hopf() || !spec.is_word_engine() {
        return Err(Error::NotHopf);
    }
    let sh = QElement::monomial(
        spec.field,
        canonicalize(spec, PbwMonomial { e_h: 1, e_g: -1, ..Default::default() })
            .expect("g invertible"),
        -spec.field.one(),
    );
    antipode_with(spec, a, &sh)
}

/// Inverse antipode `S^{-1}` (the antipode of the co-opposite Hopf algebra):
/// `S^{-1}(h) = -g^{-1} h`, same anti-homomorphism recursion.
pub fn q_antipode_inv(spec: &AlgebraSpec, a: &QElement) -> Result<QElement> {
    if !spec.is_hopf() || !spec.is_word_engine() {
        return Err(Error::NotHopf);
    }
    let mut w = PbwMonomial::g_power(-1).gen_word();
    if let Some(n) = spec.g_order() {
        w = PbwMonomial::g_power(n as i64 - 1).gen_word();
    }
    w.push(Gen::H);
    let sh = normal_form_word(spec, w, -spec.field.one(), Strategy::Leftmost)?;
    antipode_with(spec, a, &sh)
}
