//! The commutative and noncommutative Faa di Bruno bialgebras, partial Bell
//! polynomials, and the comparison maps tying them to the omega-generated
//! sub-bialgebra of the free bialgebra and to the `E`-generated subalgebra of
//! its quotient.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::free::{add_assign_term, nc_multiply, sh_prime, shuffle_poly, t_coproduct, NcPoly};
use crate::quotient::{q_coproduct, AlgebraSpec, PbwMonomial, Preset};
use crate::report::Report;
use crate::scalar::{
    factorial, multinomial_partition_coefficient, partitions_multiplicity,
    weak_compositions, Field, Scalar,
};
use crate::word::{omega_word, Word};
use crate::{Error, Result};

/// Commutative monomial: variable index `n >= 1` to exponent; only `u_1` may
/// carry a negative exponent (in the Hopf variant).
pub type CMono = BTreeMap<u32, i64>;
/// Word in the noncommutative letters `a_0, a_1, ...`.
pub type FMono = Vec<u32>;

/// Element of `k[u_1, u_2, ...]` (or `k[u_1^{+-1}, u_2, ...]`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CPoly {
    pub field: Field,
    pub terms: BTreeMap<CMono, Scalar>,
}

/// Element of `k<a_0, a_1, ...>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FPoly {
    pub field: Field,
    pub terms: BTreeMap<FMono, Scalar>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CTensor {
    pub field: Field,
    pub terms: BTreeMap<(CMono, CMono), Scalar>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FTensor {
    pub field: Field,
    pub terms: BTreeMap<(FMono, FMono), Scalar>,
}

fn cmono_mul(a: &CMono, b: &CMono) -> CMono {
    let mut out = a.clone();
    for (k, e) in b {
        let v = out.entry(*k).or_insert(0);
        *v += e;
        if *v == 0 {
            out.remove(k);
        }
    }
    out
}

impl CPoly {
    pub fn zero(field: Field) -> CPoly {
        CPoly { field, terms: BTreeMap::new() }
    }

    pub fn one(field: Field) -> CPoly {
        CPoly::monomial(field, CMono::new(), field.one())
    }

    pub fn var(field: Field, n: u32) -> CPoly {
        CPoly::monomial(field, CMono::from([(n, 1)]), field.one())
    }

    pub fn var_pow(field: Field, n: u32, e: i64) -> CPoly {
        let mut m = CMono::new();
        if e != 0 {
            m.insert(n, e);
        }
        CPoly::monomial(field, m, field.one())
    }

    pub fn monomial(field: Field, m: CMono, c: Scalar) -> CPoly {
        let mut p = CPoly::zero(field);
        add_assign_term(&mut p.terms, m, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &CPoly) -> CPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            add_assign_term(&mut out.terms, m.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, s: &Scalar) -> CPoly {
        let mut out = CPoly::zero(self.field);
        for (m, c) in &self.terms {
            add_assign_term(&mut out.terms, m.clone(), c * s);
        }
        out
    }

    pub fn sub(&self, other: &CPoly) -> CPoly {
        self.add(&other.scale(&-self.field.one()))
    }

    pub fn mul(&self, other: &CPoly) -> CPoly {
        let mut out = CPoly::zero(self.field);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                add_assign_term(&mut out.terms, cmono_mul(ma, mb), ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> CPoly {
        let mut acc = CPoly::one(self.field);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }
}

impl FPoly {
    pub fn zero(field: Field) -> FPoly {
        FPoly { field, terms: BTreeMap::new() }
    }

    pub fn one(field: Field) -> FPoly {
        FPoly::monomial(field, Vec::new(), field.one())
    }

    pub fn letter(field: Field, n: u32) -> FPoly {
        FPoly::monomial(field, vec![n], field.one())
    }

    pub fn monomial(field: Field, m: FMono, c: Scalar) -> FPoly {
        let mut p = FPoly::zero(field);
        add_assign_term(&mut p.terms, m, c);
        p
    }

    pub fn add(&self, other: &FPoly) -> FPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            add_assign_term(&mut out.terms, m.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, s: &Scalar) -> FPoly {
        let mut out = FPoly::zero(self.field);
        for (m, c) in &self.terms {
            add_assign_term(&mut out.terms, m.clone(), c * s);
        }
        out
    }

    pub fn mul(&self, other: &FPoly) -> FPoly {
        let mut out = FPoly::zero(self.field);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let mut w = ma.clone();
                w.extend_from_slice(mb);
                add_assign_term(&mut out.terms, w, ca * cb);
            }
        }
        out
    }
}

pub fn cmono_string(m: &CMono) -> String {
    if m.is_empty() {
        return "1".into();
    }
    m.iter()
        .map(|(n, e)| if *e == 1 { format!("u{n}") } else { format!("u{n}^{e}") })
        .collect::<Vec<_>>()
        .join("*")
}

pub fn fmono_string(m: &FMono) -> String {
    if m.is_empty() {
        return "1".into();
    }
    m.iter().map(|n| format!("a{n}")).collect::<Vec<_>>().join("*")
}

impl fmt::Display for CPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        crate::free::fmt_signed_terms(f, &self.terms, cmono_string)
    }
}

impl fmt::Display for FPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        crate::free::fmt_signed_terms(f, &self.terms, fmono_string)
    }
}

/// Partial Bell polynomial `B_{n,k}(u_1, ..., u_n)`: one term per partition
/// of an `n`-set into `k` blocks, grouped by block-size multiset; the integer
/// coefficient is computed exactly and then reduced into the field.
pub fn bell_polynomial(field: Field, n: u32, k: u32) -> Result<CPoly> {
    if k < 1 || k > n {
        return Err(Error::BadIndices(n, k));
    }
    let mut out = CPoly::zero(field);
    for part in partitions_multiplicity(n) {
        let blocks: u32 = part.values().sum();
        if blocks != k {
            continue;
        }
        let coeff = field.from_bigint(&multinomial_partition_coefficient(n as u64, &part)?);
        let mono: CMono = part.iter().map(|(size, mult)| (*size, *mult as i64)).collect();
        add_assign_term(&mut out.terms, mono, coeff);
    }
    Ok(out)
}

impl CTensor {
    pub fn zero(field: Field) -> CTensor {
        CTensor { field, terms: BTreeMap::new() }
    }

    pub fn of(l: &CPoly, r: &CPoly) -> CTensor {
        let mut out = CTensor::zero(l.field);
        for (ml, cl) in &l.terms {
            for (mr, cr) in &r.terms {
                add_assign_term(&mut out.terms, (ml.clone(), mr.clone()), cl * cr);
            }
        }
        out
    }

    pub fn add(&self, other: &CTensor) -> CTensor {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            add_assign_term(&mut out.terms, k.clone(), c.clone());
        }
        out
    }

    pub fn mul(&self, other: &CTensor) -> CTensor {
        let mut out = CTensor::zero(self.field);
        for ((la, ra), ca) in &self.terms {
            for ((lb, rb), cb) in &other.terms {
                add_assign_term(
                    &mut out.terms,
                    (cmono_mul(la, lb), cmono_mul(ra, rb)),
                    ca * cb,
                );
            }
        }
        out
    }
}

impl FTensor {
    pub fn zero(field: Field) -> FTensor {
        FTensor { field, terms: BTreeMap::new() }
    }

    pub fn of(l: &FPoly, r: &FPoly) -> FTensor {
        let mut out = FTensor::zero(l.field);
        for (ml, cl) in &l.terms {
            for (mr, cr) in &r.terms {
                add_assign_term(&mut out.terms, (ml.clone(), mr.clone()), cl * cr);
            }
        }
        out
    }

    pub fn add(&self, other: &FTensor) -> FTensor {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            add_assign_term(&mut out.terms, k.clone(), c.clone());
        }
        out
    }

    pub fn mul(&self, other: &FTensor) -> FTensor {
        let mut out = FTensor::zero(self.field);
        for ((la, ra), ca) in &self.terms {
            for ((lb, rb), cb) in &other.terms {
                let mut l = la.clone();
                l.extend_from_slice(lb);
                let mut r = ra.clone();
                r.extend_from_slice(rb);
                add_assign_term(&mut out.terms, (l, r), ca * cb);
            }
        }
        out
    }
}

/// Coproduct of the commutative Faa di Bruno bialgebra:
/// `D(u_n) = sum_k u_k (x) B_{n,k}` extended multiplicatively;
/// `u_1^{-1}` is grouplike.
pub fn fdb_coproduct(x: &CPoly) -> Result<CTensor> {
    let field = x.field;
    let mut out = CTensor::zero(field);
    for (m, c) in &x.terms {
        let mut acc = CTensor::of(&CPoly::one(field), &CPoly::one(field));
        for (n, e) in m {
            let dn = if *n == 1 {
                // u_1 and u_1^{-1} are grouplike
                CTensor::of(&CPoly::var_pow(field, 1, *e), &CPoly::var_pow(field, 1, *e))
            } else {
                let mut d = CTensor::zero(field);
                for k in 1..=*n {
                    d = d.add(&CTensor::of(
                        &CPoly::var(field, k),
                        &bell_polynomial(field, *n, k)?,
                    ));
                }
                let mut p = CTensor::of(&CPoly::one(field), &CPoly::one(field));
                for _ in 0..*e {
                    p = p.mul(&d);
                }
                p
            };
            acc = acc.mul(&dn);
        }
        for (k, cc) in acc.terms {
            add_assign_term(&mut out.terms, k, &cc * c);
        }
    }
    Ok(out)
}

/// Counit of the commutative side: `e(u_n) = delta_{n,1}`.
pub fn fdb_counit(x: &CPoly) -> Scalar {
    let mut out = x.field.zero();
    for (m, c) in &x.terms {
        if m.keys().all(|n| *n == 1) {
            out = &out + c;
        }
    }
    out
}

/// Coproduct of the noncommutative Faa di Bruno bialgebra:
/// `D(a_n) = sum_{k=0}^n a_k (x) sum_{i_0+...+i_k=n-k} a_{i_0} ... a_{i_k}`.
pub fn ncfdb_coproduct(x: &FPoly) -> FTensor {
    let field = x.field;
    let mut out = FTensor::zero(field);
    for (m, c) in &x.terms {
        let mut acc = FTensor::of(&FPoly::one(field), &FPoly::one(field));
        for n in m {
            let mut d = FTensor::zero(field);
            for k in 0..=*n {
                let mut right = FPoly::zero(field);
                for comp in weak_compositions(n - k, k + 1) {
                    add_assign_term(&mut right.terms, comp, field.one());
                }
                d = d.add(&FTensor::of(&FPoly::letter(field, k), &right));
            }
            acc = acc.mul(&d);
        }
        for (k, cc) in acc.terms {
            add_assign_term(&mut out.terms, k, &cc * c);
        }
    }
    out
}

/// Counit of the noncommutative side: `e(a_n) = delta_{n,0}`.
pub fn ncfdb_counit(x: &FPoly) -> Scalar {
    let mut out = x.field.zero();
    for (m, c) in &x.terms {
        if m.iter().all(|n| *n == 0) {
            out = &out + c;
        }
    }
    out
}

/// Antipode of the Faa di Bruno Hopf algebra, from the convolution identity:
/// `S(u_1) = u_1^{-1}` and
/// `S(u_n) = -u_1^{-n} sum_{k<n} S(u_k) B_{n,k}` for `n >= 2`.
pub fn hfdb_antipode(x: &CPoly) -> Result<CPoly> {
    let field = x.field;
    let mut memo: HashMap<u32, CPoly> = HashMap::new();
    fn s_var(field: Field, n: u32, memo: &mut HashMap<u32, CPoly>) -> Result<CPoly> {
        if let Some(hit) = memo.get(&n) {
            return Ok(hit.clone());
        }
        let val = if n == 1 {
            CPoly::var_pow(field, 1, -1)
        } else {
            let mut sum = CPoly::zero(field);
            for k in 1..n {
                sum = sum.add(&s_var(field, k, memo)?.mul(&bell_polynomial(field, n, k)?));
            }
            sum.scale(&-field.one()).mul(&CPoly::var_pow(field, 1, -(n as i64)))
        };
        memo.insert(n, val.clone());
        Ok(val)
    }
    let mut out = CPoly::zero(field);
    for (m, c) in &x.terms {
        let mut acc = CPoly::one(field);
        for (n, e) in m {
            if *n == 1 {
                acc = acc.mul(&CPoly::var_pow(field, 1, -e));
            } else {
                let s = s_var(field, *n, &mut memo)?;
                for _ in 0..*e {
                    acc = acc.mul(&s);
                }
            }
        }
        out = out.add(&acc.scale(c));
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Comparison checks

/// The omega-product identity behind the isomorphism between the subalgebra
/// generated by the `omega_n` and the free noncommutative Faa di Bruno
/// bialgebra: `g SH_{n-k,k}(h,g) = sum_{i_0+...+i_k=n-k} w_{i_0}...w_{i_k}`,
/// plus the coproduct intertwining through `w_n -> a_n`.
pub fn check_l_iso(field: Field, n_max: u32) -> Result<Report> {
    let mut report = Report::new("l-iso").param("n_max", n_max).param("char", field.characteristic());
    let g = NcPoly::word(field, Word::g());
    for n in 0..=n_max {
        let mut identity_ok = true;
        for k in 0..=n {
            let lhs = nc_multiply(&g, &shuffle_poly(field, n - k, k))?;
            let mut rhs = NcPoly::zero(field);
            for comp in weak_compositions(n - k, k + 1) {
                let mut w = Word::empty();
                for i in comp {
                    w = w.concat(&omega_word(i as usize));
                }
                add_assign_term(&mut rhs.terms, w, field.one());
            }
            if lhs != rhs {
                identity_ok = false;
                report.fail(
                    format!("omega product identity n={n} k={k}"),
                    format!("difference {}", lhs.sub(&rhs)?),
                );
            }
        }
        if identity_ok {
            report.pass(format!("omega product identity n={n}"));
        }
        // coproduct intertwining: map D(a_n) through a_i -> omega_i and
        // compare with the coproduct of the word omega_n
        let d_nc = ncfdb_coproduct(&FPoly::letter(field, n));
        let mut mapped = crate::free::TensorNcPoly::zero(field);
        for ((l, r), c) in &d_nc.terms {
            let to_word = |m: &FMono| {
                let mut w = Word::empty();
                for i in m {
                    w = w.concat(&omega_word(*i as usize));
                }
                w
            };
            add_assign_term(&mut mapped.terms, (to_word(l), to_word(r)), c.clone());
        }
        let direct = t_coproduct(&NcPoly::word(field, omega_word(n as usize)));
        if mapped == direct {
            report.pass(format!("coproduct intertwines on w({n})"));
        } else {
            report.fail(format!("coproduct intertwines on w({n})"), String::new());
        }
    }
    Ok(report)
}

/// The `E`-generated subalgebra of the quotient against the commutative Faa
/// di Bruno bialgebra under `u_{n+1} -> E(n)`: compares the quotient
/// coproduct of `E(n)` with `D(u_{n+1})`.
pub fn check_r_iso(field: Field, n_max: u32) -> Result<Report> {
    let spec = AlgebraSpec::tbar(field.characteristic())?;
    let mut report = Report::new("r-iso").param("n_max", n_max).param("char", field.characteristic());
    for n in 0..=n_max {
        let e = crate::quotient::QElement::generator(&spec, crate::quotient::Gen::E(n))?;
        let d = q_coproduct(&spec, &e)?;
        let mut mapped = CTensor::zero(field);
        let to_c = |m: &PbwMonomial| -> Result<CMono> {
            if m.e_h != 0 || m.om.is_some() {
                return Err(Error::Internal("leg outside the E-subalgebra".into()));
            }
            let mut c = CMono::new();
            if m.e_g != 0 {
                c.insert(1, m.e_g);
            }
            for (k, e) in &m.e {
                c.insert(k + 1, *e as i64);
            }
            Ok(c)
        };
        for ((l, r), c) in &d.terms {
            add_assign_term(&mut mapped.terms, (to_c(l)?, to_c(r)?), c.clone());
        }
        let direct = fdb_coproduct(&CPoly::var(field, n + 1))?;
        if mapped == direct {
            report.pass(format!("coproduct matches on E({n}) ~ u{}", n + 1));
        } else {
            report.fail(format!("coproduct matches on E({n})"), String::new());
        }
    }
    Ok(report)
}

/// `pi(SH'_{k-r,r+1})` is the partial Bell polynomial `B_{k+1,r+1}` once the
/// `E`-generators are renamed to `u`-variables.
pub fn bell_identification_check(field: Field, k_max: u32) -> Result<Report> {
    let mut report = Report::new("bell-identification").param("k_max", k_max);
    for k in 0..=k_max {
        let mut all_ok = true;
        for r in 0..=k {
            let v = sh_prime(field, k - r, r + 1)?;
            let mut mapped = CPoly::zero(field);
            'mono: for (mono, c) in &v.terms {
                let mut cm = CMono::new();
                for (alpha, e) in mono {
                    if alpha.count(crate::word::Letter::G) >= 2 {
                        continue 'mono; // dies under the projection
                    }
                    match crate::word::as_omega(alpha) {
                        Some(i) => {
                            let v = cm.entry(i as u32 + 1).or_insert(0);
                            *v += *e as i64;
                        }
                        None => continue 'mono,
                    }
                }
                add_assign_term(&mut mapped.terms, cm, c.clone());
            }
            let direct = bell_polynomial(field, k + 1, r + 1)?;
            if mapped != direct {
                all_ok = false;
                report.fail(
                    format!("pi(SH'_{{{},{}}}) = B_{{{},{}}}", k - r, r + 1, k + 1, r + 1),
                    format!("got {mapped}, want {direct}"),
                );
            }
        }
        if all_ok {
            report.pass(format!("Bell identification at k={k}"));
        }
    }
    Ok(report)
}

/// In characteristic 0 the abelianization map `a_n -> u_{n+1}/(n+1)!`
/// intertwines the two Faa di Bruno coproducts.
pub fn abelianization_check(field: Field, n_max: u32) -> Result<Report> {
    if field != Field::Rational {
        return Err(Error::CharPositive);
    }
    let mut report = Report::new("abelianization").param("n_max", n_max);
    let f_of = |m: &FMono| -> (CMono, Scalar) {
        let mut cm = CMono::new();
        let mut denom = num::bigint::BigInt::from(1);
        for i in m {
            let v = cm.entry(i + 1).or_insert(0);
            *v += 1;
            denom *= factorial(*i as u64 + 1);
        }
        (
            cm,
            field
                .from_ratio(&num::bigint::BigInt::from(1), &denom)
                .expect("factorial nonzero"),
        )
    };
    for n in 0..=n_max {
        let d_nc = ncfdb_coproduct(&FPoly::letter(field, n));
        let mut mapped = CTensor::zero(field);
        for ((l, r), c) in &d_nc.terms {
            let (lm, lc) = f_of(l);
            let (rm, rc) = f_of(r);
            add_assign_term(&mut mapped.terms, (lm, rm), &(c * &lc) * &rc);
        }
        let scale = field
            .from_ratio(&num::bigint::BigInt::from(1), &factorial(n as u64 + 1))
            .unwrap();
        let direct = fdb_coproduct(&CPoly::var(field, n + 1))?;
        let mut scaled = CTensor::zero(field);
        for (k, c) in &direct.terms {
            add_assign_term(&mut scaled.terms, k.clone(), c * &scale);
        }
        if mapped == scaled {
            report.pass(format!("abelianization intertwines on a{n}"));
        } else {
            report.fail(format!("abelianization intertwines on a{n}"), String::new());
        }
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// Axioms for the three dedicated presets

fn c_monomials(max_degree: u32, u1_range: std::ops::RangeInclusive<i64>) -> Vec<CMono> {
    // deg u_n = n - 1
    let mut out = vec![];
    fn rec(n: u32, remaining: u32, cur: &mut CMono, out: &mut Vec<CMono>) {
        if n == 1 {
            out.push(cur.clone());
            return;
        }
        let emax = remaining / (n - 1);
        for e in 0..=emax {
            if e > 0 {
                cur.insert(n, e as i64);
            }
            rec(n - 1, remaining - e * (n - 1), cur, out);
            cur.remove(&n);
        }
    }
    let mut base = Vec::new();
    rec(max_degree + 1, max_degree, &mut CMono::new(), &mut base);
    for m in base {
        for e1 in u1_range.clone() {
            let mut m2 = m.clone();
            if e1 != 0 {
                m2.insert(1, e1);
            }
            out.push(m2);
        }
    }
    out.sort();
    out
}

fn f_monomials(max_degree: u32, max_a0: u32, max_len: u32) -> Vec<FMono> {
    let mut out = vec![Vec::new()];
    let mut frontier: Vec<FMono> = vec![Vec::new()];
    loop {
        let mut next = Vec::new();
        for w in &frontier {
            let deg: u32 = w.iter().sum();
            let zeros = w.iter().filter(|&&x| x == 0).count() as u32;
            if w.len() as u32 >= max_len {
                continue;
            }
            for letter in 0..=(max_degree - deg) {
                if letter == 0 && zeros >= max_a0 {
                    continue;
                }
                let mut w2 = w.clone();
                w2.push(letter);
                next.push(w2);
            }
        }
        if next.is_empty() {
            break;
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out.sort();
    out.dedup();
    out
}

/// Coassociativity, counit, grading (and antipode for the Hopf variant) on
/// the dedicated Faa di Bruno presets.
pub fn verify_fdb_axioms(spec: &AlgebraSpec, degree_bound: u32, seed: u64) -> Result<Report> {
    let field = spec.field;
    let mut report = Report::new("axioms")
        .param("preset", spec.preset.name())
        .param("degree_bound", degree_bound)
        .param("char", field.characteristic())
        .with_seed(seed);
    match spec.preset {
        Preset::BFdB | Preset::HFdB => {
            let u1_range = if spec.preset == Preset::HFdB { -2..=2 } else { 0..=2 };
            let monos = c_monomials(degree_bound, u1_range);
            report = report.param("monomials", monos.len());
            let mut ok_coassoc = true;
            let mut ok_counit = true;
            let mut ok_grading = true;
            let mut ok_antipode = true;
            for m in &monos {
                let p = CPoly::monomial(field, m.clone(), field.one());
                let d = fdb_coproduct(&p)?;
                // coassociativity
                let mut lhs: BTreeMap<(CMono, CMono, CMono), Scalar> = BTreeMap::new();
                let mut rhs = lhs.clone();
                for ((a, b), c) in &d.terms {
                    for ((x, y), cc) in
                        &fdb_coproduct(&CPoly::monomial(field, a.clone(), field.one()))?.terms
                    {
                        add_assign_term(&mut lhs, (x.clone(), y.clone(), b.clone()), c * cc);
                    }
                    for ((x, y), cc) in
                        &fdb_coproduct(&CPoly::monomial(field, b.clone(), field.one()))?.terms
                    {
                        add_assign_term(&mut rhs, (a.clone(), x.clone(), y.clone()), c * cc);
                    }
                }
                ok_coassoc &= lhs == rhs;
                // counit
                let mut l = CPoly::zero(field);
                let mut r = CPoly::zero(field);
                for ((a, b), c) in &d.terms {
                    let ea = fdb_counit(&CPoly::monomial(field, a.clone(), field.one()));
                    add_assign_term(&mut l.terms, b.clone(), &ea * c);
                    let eb = fdb_counit(&CPoly::monomial(field, b.clone(), field.one()));
                    add_assign_term(&mut r.terms, a.clone(), &eb * c);
                }
                ok_counit &= l == p && r == p;
                // grading: deg u_n = n-1
                let deg = |m: &CMono| -> i64 { m.iter().map(|(n, e)| (*n as i64 - 1) * e).sum() };
                ok_grading &= d.terms.keys().all(|(a, b)| deg(a) + deg(b) == deg(m));
                if spec.preset == Preset::HFdB {
                    let mut conv = CPoly::zero(field);
                    for ((a, b), c) in &d.terms {
                        let sa = hfdb_antipode(&CPoly::monomial(field, a.clone(), field.one()))?;
                        conv = conv.add(&sa.mul(&CPoly::monomial(field, b.clone(), c.clone())));
                    }
                    let target = CPoly::monomial(field, CMono::new(), fdb_counit(&p));
                    ok_antipode &= conv == target;
                }
            }
            report.push(format!("coassociativity on {} monomials", monos.len()), ok_coassoc, None);
            report.push("counit axioms", ok_counit, None);
            report.push("grading preserved", ok_grading, None);
            if spec.preset == Preset::HFdB {
                report.push("antipode axiom", ok_antipode, None);
            }
        }
        Preset::BFdBnc => {
            let monos = f_monomials(degree_bound, 2, 4);
            report = report.param("monomials", monos.len());
            let mut ok_coassoc = true;
            let mut ok_counit = true;
            let mut ok_grading = true;
            for m in &monos {
                let p = FPoly::monomial(field, m.clone(), field.one());
                let d = ncfdb_coproduct(&p);
                let mut lhs: BTreeMap<(FMono, FMono, FMono), Scalar> = BTreeMap::new();
                let mut rhs = lhs.clone();
                for ((a, b), c) in &d.terms {
                    for ((x, y), cc) in
                        &ncfdb_coproduct(&FPoly::monomial(field, a.clone(), field.one())).terms
                    {
                        add_assign_term(&mut lhs, (x.clone(), y.clone(), b.clone()), c * cc);
                    }
                    for ((x, y), cc) in
                        &ncfdb_coproduct(&FPoly::monomial(field, b.clone(), field.one())).terms
                    {
                        add_assign_term(&mut rhs, (a.clone(), x.clone(), y.clone()), c * cc);
                    }
                }
                ok_coassoc &= lhs == rhs;
                let mut l = FPoly::zero(field);
                let mut r = FPoly::zero(field);
                for ((a, b), c) in &d.terms {
                    let ea = ncfdb_counit(&FPoly::monomial(field, a.clone(), field.one()));
                    add_assign_term(&mut l.terms, b.clone(), &ea * c);
                    let eb = ncfdb_counit(&FPoly::monomial(field, b.clone(), field.one()));
                    add_assign_term(&mut r.terms, a.clone(), &eb * c);
                }
                ok_counit &= l == p && r == p;
                let deg = |m: &FMono| -> u32 { m.iter().sum() };
                ok_grading &= d.terms.keys().all(|(a, b)| deg(a) + deg(b) == deg(m));
            }
            report.push(format!("coassociativity on {} monomials", monos.len()), ok_coassoc, None);
            report.push("counit axioms", ok_counit, None);
            report.push("grading preserved", ok_grading, None);
            report.pass("antipode refused (bialgebra only, as expected)");
        }
        _ => return Err(Error::SpecMismatch),
    }
    Ok(report)
}
