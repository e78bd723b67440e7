//! Presentation-based engines for the quotient of `k<g,h>` by the ideal that
//! makes all the `E`-generators commute, its localization at `g`, the chain
//! of quotient Hopf algebras in characteristic `p`, and the sub-bialgebra
//! generated jointly by the omega-images and the `E`-generators.
//!
//! Elements are kept in PBW normal form: an `h`-block, then `E`-blocks with
//! strictly decreasing index, then a `g`-block (for the omega/E bialgebra: at
//! most one leading omega factor instead of the `h`-block). Products reduce
//! to this shape through the confluent rewriting system in [`rewrite`].

mod axioms;
mod diamond;
mod ops;
mod rewrite;
#[cfg(test)]
mod tests;

pub use axioms::verify_bialgebra_axioms;
pub use diamond::check_overlap_ambiguities;
pub use ops::{
    omega_tilde_expansion, project_from_free, q_antipode, q_antipode_inv, q_coproduct, q_counit,
    q_multiply, q_pow,
};
pub use rewrite::{normal_form, normal_form_word, GenPoly, Strategy};

use std::collections::BTreeMap;
use std::fmt;

use crate::scalar::{is_prime, Field, Scalar};
use crate::{Error, Result};

/// The algebra presets this engine knows how to present.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Preset {
    /// `k<g,h>` modulo commuting `E`-generators; a bialgebra, not Hopf.
    TBar,
    /// Localization of `TBar` at the grouplike `g`; Hopf.
    TBarPm,
    /// `TBarPm` with the top `E`-generator killed (characteristic p); Hopf.
    TBarPmPrime,
    /// `TBar` with `g^n = 1`; Hopf when `char = p | n` (or commutative variant).
    TBarN,
    /// `TBarN` with `E_{omega_{p-1}} = 0`; GK-dimension p-1.
    TBarNPrime,
    /// `TBarNPrime` with `h^p = 0`; GK-dimension p-2.
    TBarNP,
    /// `TBarNP` with `E_{omega_k}^{p^{d_k}} = 0` for `k <= j`; GK-dimension p-2-j.
    TBarNPD,
    /// Sub-bialgebra of `TBar` generated by the omega-images and the `E`s.
    BF,
    /// Commutative Faa di Bruno bialgebra `k[u_1, u_2, ...]`.
    BFdB,
    /// Faa di Bruno Hopf algebra `k[u_1^{+-1}, u_2, ...]`.
    HFdB,
    /// Free noncommutative Faa di Bruno bialgebra `k<a_0, a_1, ...>`.
    BFdBnc,
}

impl Preset {
    pub fn name(&self) -> &'static str {
        match self {
            Preset::TBar => "tbar",
            Preset::TBarPm => "tbar-pm",
            Preset::TBarPmPrime => "tbar-pm-prime",
            Preset::TBarN => "tbar-n",
            Preset::TBarNPrime => "tbar-n-prime",
            Preset::TBarNP => "tbar-np",
            Preset::TBarNPD => "tbar-npd",
            Preset::BF => "bf",
            Preset::BFdB => "bfdb",
            Preset::HFdB => "hfdb",
            Preset::BFdBnc => "bfdbnc",
        }
    }

    pub fn from_name(s: &str) -> Option<Preset> {
        Some(match s {
            "tbar" => Preset::TBar,
            "tbar-pm" => Preset::TBarPm,
            "tbar-pm-prime" => Preset::TBarPmPrime,
            "tbar-n" => Preset::TBarN,
            "tbar-n-prime" => Preset::TBarNPrime,
            "tbar-np" => Preset::TBarNP,
            "tbar-npd" => Preset::TBarNPD,
            "bf" => Preset::BF,
            "bfdb" => Preset::BFdB,
            "hfdb" => Preset::HFdB,
            "bfdbnc" => Preset::BFdBnc,
            _ => return None,
        })
    }
}

/// A validated algebra preset with its parameters.
#[derive(Debug, Clone, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct AlgebraSpec {
    pub preset: Preset,
    pub field: Field,
    pub p: Option<u64>,
    pub n: Option<u64>,
    /// Exponent vector `d_1 <= d_2 <= ... <= d_j` for the nilpotency degrees.
    pub d: Vec<u32>,
    /// The commutative `E_{gh} = 0` variant of `TBarN`.
    pub commutative: bool,
    /// Work with the co-opposite coproduct (flip after computing).
    pub cop: bool,
}

impl serde::Serialize for Field {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u64(self.characteristic())
    }
}

impl<'de> serde::Deserialize<'de> for Field {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Field, D::Error> {
        let chr = u64::deserialize(d)?;
        Field::of_characteristic(chr).map_err(serde::de::Error::custom)
    }
}

impl AlgebraSpec {
    /// Assemble and validate a preset from raw parameters.
    pub fn build(
        preset: Preset,
        characteristic: u64,
        p: Option<u64>,
        n: Option<u64>,
        d: Vec<u32>,
        commutative: bool,
    ) -> Result<AlgebraSpec> {
        validate_spec(AlgebraSpec {
            preset,
            field: Field::of_characteristic(characteristic)?,
            p,
            n,
            d,
            commutative,
            cop: false,
        })
    }

    pub fn tbar(characteristic: u64) -> Result<AlgebraSpec> {
        AlgebraSpec::build(Preset::TBar, characteristic, None, None, vec![], false)
    }

    pub fn tbar_pm(characteristic: u64) -> Result<AlgebraSpec> {
        AlgebraSpec::build(Preset::TBarPm, characteristic, None, None, vec![], false)
    }

    pub fn tbar_pm_prime(p: u64) -> Result<AlgebraSpec> {
        AlgebraSpec::build(Preset::TBarPmPrime, p, Some(p), None, vec![], false)
    }

    pub fn tbar_n(p: u64, n: u64) -> Result<AlgebraSpec> {
        AlgebraSpec::build(Preset::TBarN, p, Some(p), Some(n), vec![], false)
    }

    pub fn tbar_n_commutative(characteristic: u64, n: u64) -> Result<AlgebraSpec> {
        AlgebraSpec::build(Preset::TBarN, characteristic, None, Some(n), vec![], true)
    }

    pub fn tbar_n_prime(p: u64, n: u64) -> Result<AlgebraSpec> {
        AlgebraSpec::build(Preset::TBarNPrime, p, Some(p), Some(n), vec![], false)
    }

    pub fn tbar_np(p: u64, n: u64) -> Result<AlgebraSpec> {
        AlgebraSpec::build(Preset::TBarNP, p, Some(p), Some(n), vec![], false)
    }

    pub fn tbar_npd(p: u64, n: u64, d: Vec<u32>) -> Result<AlgebraSpec> {
        AlgebraSpec::build(Preset::TBarNPD, p, Some(p), Some(n), d, false)
    }

    pub fn bf(characteristic: u64) -> Result<AlgebraSpec> {
        AlgebraSpec::build(Preset::BF, characteristic, None, None, vec![], false)
    }

    pub fn fdb(preset: Preset, characteristic: u64) -> Result<AlgebraSpec> {
        AlgebraSpec::build(preset, characteristic, None, None, vec![], false)
    }

    /// The diagnostic parameterization `g^n = 1` without the divisibility
    /// hypothesis; its Diamond Lemma check is expected to fail with the
    /// residual `n E(1) g^{n-1}`.
    pub fn tbar_n_unchecked(characteristic: u64, n: u64) -> Result<AlgebraSpec> {
        if n < 2 {
            return Err(Error::PNotDividingN { p: 0, n });
        }
        Ok(AlgebraSpec {
            preset: Preset::TBarN,
            field: Field::of_characteristic(characteristic)?,
            p: None,
            n: Some(n),
            d: vec![],
            commutative: false,
            cop: false,
        })
    }

    pub fn with_cop(mut self, cop: bool) -> AlgebraSpec {
        self.cop = cop;
        self
    }

    /// Presets handled by the gen-word rewriting engine.
    pub fn is_word_engine(&self) -> bool {
        !matches!(self.preset, Preset::BFdB | Preset::HFdB | Preset::BFdBnc)
    }

    /// Presets carrying an antipode.
    pub fn is_hopf(&self) -> bool {
        matches!(
            self.preset,
            Preset::TBarPm
                | Preset::TBarPmPrime
                | Preset::TBarN
                | Preset::TBarNPrime
                | Preset::TBarNP
                | Preset::TBarNPD
                | Preset::HFdB
        )
    }

    /// `g` is invertible without being a root of unity.
    pub fn localized(&self) -> bool {
        matches!(self.preset, Preset::TBarPm | Preset::TBarPmPrime)
    }

    /// Order of the grouplike `g`, when finite.
    pub fn g_order(&self) -> Option<u64> {
        match self.preset {
            Preset::TBarN | Preset::TBarNPrime | Preset::TBarNP | Preset::TBarNPD => self.n,
            _ => None,
        }
    }

    /// Kill `E(k)` for all `k >=` this bound.
    pub fn e_kill_from(&self) -> Option<u32> {
        match self.preset {
            Preset::TBarPmPrime | Preset::TBarNPrime | Preset::TBarNP | Preset::TBarNPD => {
                Some(self.p.unwrap() as u32 - 1)
            }
            Preset::TBarN if self.commutative => Some(1),
            _ => None,
        }
    }

    /// `h^p = 0` in force?
    pub fn h_nilpotent(&self) -> Option<u32> {
        match self.preset {
            Preset::TBarNP | Preset::TBarNPD => Some(self.p.unwrap() as u32),
            _ => None,
        }
    }

    /// Nilpotency degree `p^{d_k}` of `E(k)`, when capped.
    pub fn e_power_cap(&self, k: u32) -> Option<u64> {
        if self.preset == Preset::TBarNPD && k >= 1 && (k as usize) <= self.d.len() {
            let p = self.p.unwrap();
            Some(p.pow(self.d[k as usize - 1]))
        } else {
            None
        }
    }

    pub fn has_omega(&self) -> bool {
        self.preset == Preset::BF
    }

    pub fn has_h(&self) -> bool {
        self.is_word_engine() && self.preset != Preset::BF
    }
}

/// Check every invariant of the preset parameters.
pub fn validate_spec(s: AlgebraSpec) -> Result<AlgebraSpec> {
    let chr = s.field.characteristic();
    if let Some(p) = s.p {
        if !is_prime(p) {
            return Err(Error::NonPrimeP(p));
        }
    }
    match s.preset {
        Preset::TBar | Preset::TBarPm | Preset::BF | Preset::BFdB | Preset::HFdB
        | Preset::BFdBnc => {}
        Preset::TBarPmPrime => {
            let p = s.p.ok_or(Error::CharMismatch { chr, p: 0 })?;
            if chr != p {
                return Err(Error::CharMismatch { chr, p });
            }
        }
        Preset::TBarN => {
            let n = s.n.ok_or(Error::PNotDividingN { p: 0, n: 0 })?;
            if n < 2 {
                return Err(Error::PNotDividingN { p: 0, n });
            }
            if !s.commutative {
                // E_gh != 0 forces char = p with p | n
                let p = s.p.ok_or(Error::CharMismatch { chr, p: 0 })?;
                if chr != p {
                    return Err(Error::CharMismatch { chr, p });
                }
                if n % p != 0 {
                    return Err(Error::PNotDividingN { p, n });
                }
            }
        }
        Preset::TBarNPrime | Preset::TBarNP | Preset::TBarNPD => {
            let p = s.p.ok_or(Error::CharMismatch { chr, p: 0 })?;
            let n = s.n.ok_or(Error::PNotDividingN { p, n: 0 })?;
            if chr != p {
                return Err(Error::CharMismatch { chr, p });
            }
            if n % p != 0 || n < 2 {
                return Err(Error::PNotDividingN { p, n });
            }
            if s.preset == Preset::TBarNPD {
                let j = s.d.len() as u64;
                if j == 0 || j > p - 2 {
                    return Err(Error::BadDVector(format!(
                        "length {j} not in 1..={}",
                        p - 2
                    )));
                }
                if s.d.iter().any(|&x| x < 1) {
                    return Err(Error::BadDVector("entries must be >= 1".into()));
                }
                if s.d.windows(2).any(|w| w[0] > w[1]) {
                    return Err(Error::BadDVector(format!("{:?} is not nondecreasing", s.d)));
                }
            }
        }
    }
    if s.commutative && s.preset != Preset::TBarN {
        return Err(Error::BadDVector("commutative flag only applies to tbar-n".into()));
    }
    Ok(s)
}

/// Generators of the word-engine presets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Gen {
    H,
    E(u32),
    G,
    GInv,
    Om(u32),
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gen::H => write!(f, "h"),
            Gen::E(k) => write!(f, "E({k})"),
            Gen::G => write!(f, "g"),
            Gen::GInv => write!(f, "g^-1"),
            Gen::Om(m) => write!(f, "w({m})"),
        }
    }
}

/// A canonical quotient-basis monomial: optional leading omega factor (BF
/// only), `h`-exponent, exponents of `E(k)` for `k >= 1`, and the `g`
/// exponent (negative exponents only in the localized presets).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct PbwMonomial {
    pub om: Option<u32>,
    pub e_h: u32,
    pub e: BTreeMap<u32, u32>,
    pub e_g: i64,
}

impl PbwMonomial {
    pub fn one() -> PbwMonomial {
        PbwMonomial::default()
    }

    pub fn g_power(e_g: i64) -> PbwMonomial {
        PbwMonomial { e_g, ..Default::default() }
    }

    pub fn h_power(e_h: u32) -> PbwMonomial {
        PbwMonomial { e_h, ..Default::default() }
    }

    pub fn e_gen(k: u32) -> PbwMonomial {
        PbwMonomial { e: BTreeMap::from([(k, 1)]), ..Default::default() }
    }

    pub fn om_gen(m: u32) -> PbwMonomial {
        PbwMonomial { om: Some(m), ..Default::default() }
    }

    pub fn is_one(&self) -> bool {
        self.om.is_none() && self.e_h == 0 && self.e.is_empty() && self.e_g == 0
    }

    /// Pure power of the grouplike `g`.
    pub fn is_grouplike(&self) -> bool {
        self.om.is_none() && self.e_h == 0 && self.e.is_empty()
    }

    /// N-degree: `deg h = 1`, `deg E(k) = k`, `deg g = 0`, `deg w(m) = m`.
    pub fn degree(&self) -> u32 {
        self.om.unwrap_or(0)
            + self.e_h
            + self.e.iter().map(|(k, e)| k * e).sum::<u32>()
    }

    /// Generator-word length: `h`, `g`, `g^-1` count 1; `E(k)` counts `k+1`;
    /// `w(m)` counts `m+1`.
    pub fn gen_length(&self) -> u64 {
        self.om.map_or(0, |m| m as u64 + 1)
            + self.e_h as u64
            + self.e.iter().map(|(k, e)| (*k as u64 + 1) * *e as u64).sum::<u64>()
            + self.e_g.unsigned_abs()
    }

    /// The gen word in normal order.
    pub fn gen_word(&self) -> Vec<Gen> {
        let mut w = Vec::new();
        if let Some(m) = self.om {
            w.push(Gen::Om(m));
        }
        w.extend(std::iter::repeat(Gen::H).take(self.e_h as usize));
        for (k, e) in self.e.iter().rev() {
            w.extend(std::iter::repeat(Gen::E(*k)).take(*e as usize));
        }
        if self.e_g >= 0 {
            w.extend(std::iter::repeat(Gen::G).take(self.e_g as usize));
        } else {
            w.extend(std::iter::repeat(Gen::GInv).take((-self.e_g) as usize));
        }
        w
    }
}

/// Monomial canonicalization against the preset relations that only touch a
/// single block: `g`-order folding and nilpotency kills. Returns `None` when
/// the monomial is annihilated.
pub fn canonicalize(spec: &AlgebraSpec, mut m: PbwMonomial) -> Option<PbwMonomial> {
    if let Some(hp) = spec.h_nilpotent() {
        if m.e_h >= hp {
            return None;
        }
    }
    if let Some(k0) = spec.e_kill_from() {
        if m.e.keys().any(|&k| k >= k0) {
            return None;
        }
    }
    for (k, e) in &m.e {
        if let Some(cap) = spec.e_power_cap(*k) {
            if *e as u64 >= cap {
                return None;
            }
        }
    }
    if let Some(n) = spec.g_order() {
        m.e_g = m.e_g.rem_euclid(n as i64);
    } else if !spec.localized() && m.e_g < 0 {
        return None; // no inverse available; callers never build these
    }
    Some(m)
}

/// An element of a word-engine quotient: a finitely supported combination of
/// canonical monomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QElement {
    pub field: Field,
    pub terms: BTreeMap<PbwMonomial, Scalar>,
}

impl QElement {
    pub fn zero(field: Field) -> QElement {
        QElement { field, terms: BTreeMap::new() }
    }

    pub fn one(field: Field) -> QElement {
        QElement::monomial(field, PbwMonomial::one(), field.one())
    }

    pub fn monomial(field: Field, m: PbwMonomial, c: Scalar) -> QElement {
        let mut q = QElement::zero(field);
        crate::free::add_assign_term(&mut q.terms, m, c);
        q
    }

    pub fn generator(spec: &AlgebraSpec, g: Gen) -> Result<QElement> {
        let field = spec.field;
        let m = match g {
            Gen::H if spec.has_h() => PbwMonomial::h_power(1),
            Gen::G => PbwMonomial::g_power(1),
            Gen::GInv if spec.localized() => PbwMonomial::g_power(-1),
            Gen::E(k) if k >= 1 => {
                if spec.e_kill_from().is_some_and(|k0| k >= k0) {
                    return Ok(QElement::zero(field));
                }
                PbwMonomial::e_gen(k)
            }
            Gen::E(0) => PbwMonomial::g_power(1),
            Gen::Om(m) if spec.has_omega() && m >= 1 => PbwMonomial::om_gen(m),
            Gen::Om(0) => PbwMonomial::g_power(1),
            other => return Err(Error::IllegalGenerator(other.to_string())),
        };
        Ok(QElement::monomial(field, m, field.one()))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &QElement) -> Result<QElement> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field, other.field));
        }
        let mut out = self.clone();
        for (m, c) in &other.terms {
            crate::free::add_assign_term(&mut out.terms, m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &QElement) -> Result<QElement> {
        self.add(&other.scale(&self.field.from_i64(-1)))
    }

    pub fn scale(&self, s: &Scalar) -> QElement {
        let mut out = QElement::zero(self.field);
        for (m, c) in &self.terms {
            crate::free::add_assign_term(&mut out.terms, m.clone(), c * s);
        }
        out
    }

    /// Maximal N-degree of the support.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }
}

pub fn pbw_monomial_string(m: &PbwMonomial) -> String {
    if m.is_one() {
        return "1".into();
    }
    let mut parts = Vec::new();
    if let Some(om) = m.om {
        parts.push(format!("w({om})"));
    }
    if m.e_h == 1 {
        parts.push("h".into());
    } else if m.e_h > 1 {
        parts.push(format!("h^{}", m.e_h));
    }
    for (k, e) in m.e.iter().rev() {
        if *e == 1 {
            parts.push(format!("E({k})"));
        } else {
            parts.push(format!("E({k})^{e}"));
        }
    }
    if m.e_g == 1 {
        parts.push("g".into());
    } else if m.e_g != 0 {
        parts.push(format!("g^{}", m.e_g));
    }
    parts.join("*")
}

impl fmt::Display for QElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        crate::free::fmt_signed_terms(f, &self.terms, pbw_monomial_string)
    }
}

/// An element of the tensor square of a word-engine quotient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QTensor {
    pub field: Field,
    pub terms: BTreeMap<(PbwMonomial, PbwMonomial), Scalar>,
}

impl QTensor {
    pub fn zero(field: Field) -> QTensor {
        QTensor { field, terms: BTreeMap::new() }
    }

    pub fn of(l: &QElement, r: &QElement) -> QTensor {
        let mut out = QTensor::zero(l.field);
        for (ml, cl) in &l.terms {
            for (mr, cr) in &r.terms {
                crate::free::add_assign_term(&mut out.terms, (ml.clone(), mr.clone()), cl * cr);
            }
        }
        out
    }

    pub fn add(&self, other: &QTensor) -> QTensor {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            crate::free::add_assign_term(&mut out.terms, k.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &QTensor) -> QTensor {
        let mut out = self.clone();
        let m1 = -self.field.one();
        for (k, c) in &other.terms {
            crate::free::add_assign_term(&mut out.terms, k.clone(), c * &m1);
        }
        out
    }

    pub fn swap(&self) -> QTensor {
        let mut out = QTensor::zero(self.field);
        for ((l, r), c) in &self.terms {
            crate::free::add_assign_term(&mut out.terms, (r.clone(), l.clone()), c.clone());
        }
        out
    }

    pub fn scale_tensor(&self, s: &Scalar) -> QTensor {
        let mut out = QTensor::zero(self.field);
        for (k, c) in &self.terms {
            crate::free::add_assign_term(&mut out.terms, k.clone(), c * s);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Componentwise product, normalizing each leg in the quotient.
    pub fn mul(&self, spec: &AlgebraSpec, other: &QTensor) -> Result<QTensor> {
        let mut out = QTensor::zero(self.field);
        for ((la, ra), ca) in &self.terms {
            for ((lb, rb), cb) in &other.terms {
                let l = ops::q_multiply_monomials(spec, la, lb)?;
                let r = ops::q_multiply_monomials(spec, ra, rb)?;
                let c = ca * cb;
                for (ml, cl) in &l.terms {
                    for (mr, cr) in &r.terms {
                        crate::free::add_assign_term(
                            &mut out.terms,
                            (ml.clone(), mr.clone()),
                            &(&c * cl) * cr,
                        );
                    }
                }
            }
        }
        Ok(out)
    }
}

impl fmt::Display for QTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        crate::free::fmt_signed_terms(f, &self.terms, |(l, r)| {
            format!("({})(x)({})", pbw_monomial_string(l), pbw_monomial_string(r))
        })
    }
}

/// Enumerate all canonical basis monomials of N-degree `<= max_degree`, with
/// the `g`-exponent constrained to `g_range` (pass the full group range for
/// finite-`g` presets).
pub fn enumerate_basis(
    spec: &AlgebraSpec,
    max_degree: u32,
    g_range: std::ops::RangeInclusive<i64>,
) -> Vec<PbwMonomial> {
    let mut out = Vec::new();
    let e_indices: Vec<u32> = if spec.commutative {
        Vec::new()
    } else {
        let hi = spec.e_kill_from().map_or(max_degree, |k0| k0.saturating_sub(1)).min(max_degree);
        (1..=hi).collect()
    };
    let om_choices: Vec<Option<u32>> = if spec.has_omega() {
        std::iter::once(None).chain((1..=max_degree).map(Some)).collect()
    } else {
        vec![None]
    };
    let h_max = if spec.has_h() {
        spec.h_nilpotent().map_or(max_degree, |p| (p - 1).min(max_degree))
    } else {
        0
    };
    fn rec(
        spec: &AlgebraSpec,
        idx: &[u32],
        pos: usize,
        remaining: u32,
        cur: &mut BTreeMap<u32, u32>,
        base: &PbwMonomial,
        g_range: &std::ops::RangeInclusive<i64>,
        out: &mut Vec<PbwMonomial>,
    ) {
        if pos == idx.len() {
            for e_g in g_range.clone() {
                let m = PbwMonomial { om: base.om, e_h: base.e_h, e: cur.clone(), e_g };
                debug_assert!(canonicalize(spec, m.clone()).is_some());
                out.push(m);
            }
            return;
        }
        let k = idx[pos];
        let mut emax = remaining / k;
        if let Some(cap) = spec.e_power_cap(k) {
            emax = emax.min(cap as u32 - 1);
        }
        for e in 0..=emax {
            if e > 0 {
                cur.insert(k, e);
            }
            rec(spec, idx, pos + 1, remaining - k * e, cur, base, g_range, out);
            cur.remove(&k);
        }
    }
    for om in om_choices {
        let om_deg = om.unwrap_or(0);
        if om_deg > max_degree {
            continue;
        }
        for e_h in 0..=h_max.min(max_degree - om_deg) {
            let base = PbwMonomial { om, e_h, ..Default::default() };
            rec(
                spec,
                &e_indices,
                0,
                max_degree - om_deg - e_h,
                &mut BTreeMap::new(),
                &base,
                &g_range,
                &mut out,
            );
        }
    }
    out.sort();
    out
}

/// The natural `g`-exponent range: the full group for finite-`g` presets,
/// otherwise a symmetric or nonnegative window of the given size.
pub fn default_g_range(spec: &AlgebraSpec, cap: i64) -> std::ops::RangeInclusive<i64> {
    if let Some(n) = spec.g_order() {
        0..=(n as i64 - 1)
    } else if spec.localized() {
        -cap..=cap
    } else {
        0..=cap
    }
}
