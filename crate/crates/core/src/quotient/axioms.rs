//! Batch verification of the bialgebra/Hopf axioms on basis monomials.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};

use crate::exec::{map_batch, ExecMode};
use crate::free::add_assign_term;
use crate::report::Report;
use crate::scalar::Scalar;
use crate::{Error, Result};

use super::{
    default_g_range, enumerate_basis, ops, pbw_monomial_string, AlgebraSpec, PbwMonomial,
    QElement, QTensor,
};

type Triple = BTreeMap<(PbwMonomial, PbwMonomial, PbwMonomial), Scalar>;

fn coassoc_defect(spec: &AlgebraSpec, m: &PbwMonomial) -> Result<Option<String>> {
    let q = QElement::monomial(spec.field, m.clone(), spec.field.one());
    let d = ops::q_coproduct(spec, &q)?;
    let mut lhs: Triple = BTreeMap::new();
    let mut rhs: Triple = BTreeMap::new();
    for ((a, b), c) in &d.terms {
        let da = ops::q_coproduct(spec, &QElement::monomial(spec.field, a.clone(), spec.field.one()))?;
        for ((x, y), cc) in &da.terms {
            add_assign_term(&mut lhs, (x.clone(), y.clone(), b.clone()), c * cc);
        }
        let db = ops::q_coproduct(spec, &QElement::monomial(spec.field, b.clone(), spec.field.one()))?;
        for ((x, y), cc) in &db.terms {
            add_assign_term(&mut rhs, (a.clone(), x.clone(), y.clone()), c * cc);
        }
    }
    if lhs == rhs {
        Ok(None)
    } else {
        Ok(Some(format!("coassociativity fails on {}", pbw_monomial_string(m))))
    }
}

fn counit_defect(spec: &AlgebraSpec, m: &PbwMonomial) -> Result<Option<String>> {
    let q = QElement::monomial(spec.field, m.clone(), spec.field.one());
    let d = ops::q_coproduct(spec, &q)?;
    let mut left = QElement::zero(spec.field);
    let mut right = QElement::zero(spec.field);
    for ((a, b), c) in &d.terms {
        let ea = ops::q_counit(spec, &QElement::monomial(spec.field, a.clone(), spec.field.one()))?;
        add_assign_term(&mut left.terms, b.clone(), &ea * c);
        let eb = ops::q_counit(spec, &QElement::monomial(spec.field, b.clone(), spec.field.one()))?;
        add_assign_term(&mut right.terms, a.clone(), &eb * c);
    }
    if left == q && right == q {
        Ok(None)
    } else {
        Ok(Some(format!("counit axiom fails on {}", pbw_monomial_string(m))))
    }
}

fn grading_defect(spec: &AlgebraSpec, m: &PbwMonomial) -> Result<Option<String>> {
    let q = QElement::monomial(spec.field, m.clone(), spec.field.one());
    let d = ops::q_coproduct(spec, &q)?;
    let n = m.degree();
    for ((a, b), _) in &d.terms {
        if a.degree() + b.degree() != n {
            return Ok(Some(format!(
                "coproduct of {} leaves degree {n}",
                pbw_monomial_string(m)
            )));
        }
    }
    Ok(None)
}

fn antipode_defect(spec: &AlgebraSpec, m: &PbwMonomial) -> Result<Option<String>> {
    let q = QElement::monomial(spec.field, m.clone(), spec.field.one());
    let d = ops::q_coproduct(spec, &q)?;
    let s = |x: &QElement| {
        if spec.cop {
            ops::q_antipode_inv(spec, x)
        } else {
            ops::q_antipode(spec, x)
        }
    };
    let mut left = QElement::zero(spec.field);
    let mut right = QElement::zero(spec.field);
    for ((a, b), c) in &d.terms {
        let sa = s(&QElement::monomial(spec.field, a.clone(), spec.field.one()))?;
        let sb = s(&QElement::monomial(spec.field, b.clone(), spec.field.one()))?;
        let bq = QElement::monomial(spec.field, b.clone(), c.clone());
        let aq = QElement::monomial(spec.field, a.clone(), c.clone());
        left = left.add(&ops::q_multiply(spec, &sa, &bq)?)?;
        right = right.add(&ops::q_multiply(spec, &aq, &sb)?)?;
    }
    let target = QElement::monomial(spec.field, PbwMonomial::one(), ops::q_counit(spec, &q)?);
    if left == target && right == target {
        Ok(None)
    } else {
        Ok(Some(format!(
            "antipode axiom fails on {}: m(S x id)D = {left}",
            pbw_monomial_string(m)
        )))
    }
}

/// Run coassociativity, counit, grading, antipode (Hopf presets only) and
/// random multiplicativity checks over all basis monomials of N-degree up to
/// `degree_bound`.
pub fn verify_bialgebra_axioms(
    spec: &AlgebraSpec,
    degree_bound: u32,
    seed: u64,
    mode: ExecMode,
) -> Result<Report> {
    if !spec.is_word_engine() {
        return crate::fdb::verify_fdb_axioms(spec, degree_bound, seed);
    }
    let basis = enumerate_basis(spec, degree_bound, default_g_range(spec, 2));
    let mut report = Report::new("axioms")
        .param("preset", spec.preset.name())
        .param("degree_bound", degree_bound)
        .param("char", spec.field.characteristic())
        .param("monomials", basis.len())
        .with_seed(seed);
    if let Some(p) = spec.p {
        report = report.param("p", p);
    }
    if let Some(n) = spec.n {
        report = report.param("n", n);
    }

    let per_monomial = map_batch(mode, &basis, |m| -> Result<Vec<String>> {
        let mut defects = Vec::new();
        if let Some(d) = coassoc_defect(spec, m)? {
            defects.push(d);
        }
        if let Some(d) = counit_defect(spec, m)? {
            defects.push(d);
        }
        if let Some(d) = grading_defect(spec, m)? {
            defects.push(d);
        }
        if spec.is_hopf() {
            if let Some(d) = antipode_defect(spec, m)? {
                defects.push(d);
            }
        }
        Ok(defects)
    });
    let mut defects = Vec::new();
    for r in per_monomial {
        defects.extend(r?);
    }
    for label in ["coassociativity", "counit", "grading"] {
        let bad: Vec<&String> = defects.iter().filter(|d| d.starts_with(label)).collect();
        if bad.is_empty() {
            report.pass(format!("{label} on {} monomials", basis.len()));
        } else {
            report.fail(format!("{label}: {} failures", bad.len()), bad[0].clone());
        }
    }
    if spec.is_hopf() {
        let bad: Vec<&String> = defects.iter().filter(|d| d.starts_with("antipode")).collect();
        if bad.is_empty() {
            report.pass(format!("antipode axiom on {} monomials", basis.len()));
        } else {
            report.fail(format!("antipode: {} failures", bad.len()), bad[0].clone());
        }
    } else {
        match ops::q_antipode(spec, &QElement::one(spec.field)) {
            Err(Error::NotHopf) => report.pass("antipode refused (bialgebra only, as expected)"),
            _ => report.fail("antipode", "expected NotHopf refusal"),
        }
    }

    // multiplicativity of the coproduct on random basis pairs
    if !basis.is_empty() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut bad = None;
        for _ in 0..20 {
            let a = &basis[rng.random_range(0..basis.len())];
            let b = &basis[rng.random_range(0..basis.len())];
            let qa = QElement::monomial(spec.field, a.clone(), spec.field.one());
            let qb = QElement::monomial(spec.field, b.clone(), spec.field.one());
            let prod = ops::q_multiply(spec, &qa, &qb)?;
            let lhs = ops::q_coproduct(spec, &prod)?;
            let rhs = cop_mul(spec, &ops::q_coproduct(spec, &qa)?, &ops::q_coproduct(spec, &qb)?)?;
            if lhs != rhs {
                bad = Some(format!(
                    "D not multiplicative on {} * {}",
                    pbw_monomial_string(a),
                    pbw_monomial_string(b)
                ));
                break;
            }
        }
        match bad {
            None => report.pass("coproduct multiplicative on 20 random pairs"),
            Some(w) => report.fail("coproduct multiplicativity", w),
        }
    }
    Ok(report)
}

/// Tensor product compatible with a possibly flipped coproduct: the legs
/// multiply componentwise either way.
fn cop_mul(spec: &AlgebraSpec, a: &QTensor, b: &QTensor) -> Result<QTensor> {
    a.mul(spec, b)
}
