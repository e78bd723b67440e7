//! Dimension, Hilbert and growth computations, GK-dimension estimation, and
//! the filtration/coradical machinery for the localized quotient and the
//! finite-dimensional presets.

mod section5;

pub use section5::{
    c_closed_form, c_coefficients, c_coefficients_check, filtration_check, gr_relations_check,
    skew_primitives, skew_primitives_with, verify_skew_primitive, wedge_first_term_check,
    x_element, z_element, z_prime, z_prime_coproduct_check, DeltaTable, FiltrationFamily,
    FiltrationSpec, ZBasis, ZMono,
};

use num::bigint::BigInt;
use num::{One, Zero};

use crate::exec::{map_batch, ExecMode};
use crate::linalg::{bareiss_rank, least_squares_slope, rank, SparseVec};
use crate::quotient::{
    enumerate_basis, normal_form_word, AlgebraSpec, Gen, PbwMonomial, Preset, Strategy,
};
use crate::report::Report;
use crate::scalar::Field;
use crate::word::Letter;
use crate::{Error, Result};

/// Values of the growth function `d_V(n) = dim V_n` for `V = span{1, g, h}`
/// (plus `g^{-1}` in the localized presets, where the table counts the
/// equivalent PBW-length filtration).
#[derive(Debug, Clone)]
pub struct GrowthTable {
    pub values: Vec<(u32, u128)>,
    pub generating_set: String,
}

impl GrowthTable {
    pub fn get(&self, n: u32) -> Option<u128> {
        self.values.iter().find(|(m, _)| *m == n).map(|(_, v)| *v)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("n,d_V\n");
        for (n, v) in &self.values {
            s.push_str(&format!("{n},{v}\n"));
        }
        s
    }
}

/// Dimension of a preset algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimension {
    Finite(u64),
    Infinite,
}

impl std::fmt::Display for Dimension {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Dimension::Finite(d) => write!(f, "{d}"),
            Dimension::Infinite => write!(f, "INFINITE"),
        }
    }
}

/// Dimensions of the N-graded pieces `0..=max_degree`, by direct basis
/// enumeration. Presets with unbounded `g`-exponent need an explicit cap.
pub fn graded_dimension(
    spec: &AlgebraSpec,
    max_degree: u32,
    g_cap: Option<i64>,
) -> Result<Vec<u64>> {
    let range = match (spec.g_order(), g_cap) {
        (Some(n), _) => 0..=(n as i64 - 1),
        (None, Some(c)) if spec.localized() => -c..=c,
        (None, Some(c)) => 0..=c,
        (None, None) => return Err(Error::InfinitePiece),
    };
    let basis = enumerate_basis(spec, max_degree, range);
    let mut out = vec![0u64; max_degree as usize + 1];
    for m in &basis {
        out[m.degree() as usize] += 1;
    }
    Ok(out)
}

/// Closed-form dimension: `n * p^(1 + sum d_i)` for the fully capped preset,
/// infinite otherwise.
pub fn dimension(spec: &AlgebraSpec) -> Dimension {
    if spec.preset == Preset::TBarNPD {
        let p = spec.p.unwrap();
        if spec.d.len() as u64 == p - 2 {
            let exp: u32 = 1 + spec.d.iter().sum::<u32>();
            return Dimension::Finite(spec.n.unwrap() * p.pow(exp));
        }
    }
    Dimension::Infinite
}

/// Exhaustive cross-check of [`dimension`] by enumerating the whole basis.
pub fn dimension_enumerated(spec: &AlgebraSpec) -> Result<u64> {
    let Dimension::Finite(_) = dimension(spec) else {
        return Err(Error::InfinitePiece);
    };
    let p = spec.p.unwrap() as u32;
    let max_deg: u32 = (p - 1)
        + spec
            .d
            .iter()
            .enumerate()
            .map(|(i, dk)| (i as u32 + 1) * (spec.p.unwrap().pow(*dk) as u32 - 1))
            .sum::<u32>();
    let basis = enumerate_basis(spec, max_deg, 0..=(spec.n.unwrap() as i64 - 1));
    Ok(basis.len() as u64)
}

/// Count basis monomials of generator-word length `<= n` for every
/// `n <= n_max`, by bounded-knapsack convolution over the blocks
/// (`h`-block, one block per `E(k)`, `g`-block).
pub fn growth_function(spec: &AlgebraSpec, n_max: u32) -> Result<GrowthTable> {
    if !spec.is_word_engine() || spec.preset == Preset::BF {
        return Err(Error::SpecMismatch);
    }
    let nn = n_max as usize;
    let mut dp = vec![BigInt::zero(); nn + 1];
    dp[0] = BigInt::one();
    // one block of weight-1 parts for h, with its cap
    let convolve = |dp: &mut Vec<BigInt>, weight: usize, max_count: Option<u64>| {
        let mut next = vec![BigInt::zero(); nn + 1];
        for start in 0..=nn {
            if dp[start].is_zero() {
                continue;
            }
            let mut count = 0u64;
            let mut len = start;
            loop {
                if max_count.is_some_and(|m| count > m) || len > nn {
                    break;
                }
                next[len] += &dp[start];
                count += 1;
                len += weight;
            }
        }
        *dp = next;
    };
    if spec.has_h() {
        let cap = spec.h_nilpotent().map(|p| p as u64 - 1);
        convolve(&mut dp, 1, cap);
    }
    let k_hi = spec.e_kill_from().map_or(n_max.saturating_sub(1), |k0| k0 - 1);
    for k in 1..=k_hi.min(n_max.saturating_sub(1)) {
        if spec.commutative {
            break;
        }
        let cap = spec.e_power_cap(k).map(|c| c - 1);
        convolve(&mut dp, k as usize + 1, cap);
    }
    // g-block: group order, two-sided (localized), or one-sided
    if let Some(n) = spec.g_order() {
        convolve(&mut dp, 1, Some(n - 1));
    } else if spec.localized() {
        let mut next = vec![BigInt::zero(); nn + 1];
        for start in 0..=nn {
            if dp[start].is_zero() {
                continue;
            }
            next[start] += &dp[start];
            for l in 1..=(nn - start) {
                let two = BigInt::from(2) * &dp[start];
                next[start + l] += two;
            }
        }
        dp = next;
    } else {
        convolve(&mut dp, 1, None);
    }
    let mut values = Vec::with_capacity(nn + 1);
    let mut acc = BigInt::zero();
    for (n, v) in dp.iter().enumerate() {
        acc += v;
        let digits = acc.to_u64_digits().1;
        let val = match digits.len() {
            0 => 0u128,
            1 => digits[0] as u128,
            2 => digits[0] as u128 | (digits[1] as u128) << 64,
            _ => return Err(Error::BoundTooLargeForMemory(format!("d_V({n}) overflows"))),
        };
        values.push((n as u32, val));
    }
    let mut gens = String::from("1, g, h");
    if spec.localized() {
        gens.push_str(", g^-1");
    }
    Ok(GrowthTable { values, generating_set: gens })
}

/// Least-squares slope of `log d_V(n)` against `log n` over the window,
/// with the RMS residual. This is the one deliberately floating-point
/// computation in the library: GK-dimension is an asymptotic invariant and
/// is only ever estimated here.
pub fn gk_estimate(table: &GrowthTable, window: (u32, u32)) -> Result<(f64, f64)> {
    let (lo, hi) = window;
    if hi <= lo || lo < 2 {
        return Err(Error::DegenerateWindow(lo, hi));
    }
    let pts: Vec<(f64, f64)> = table
        .values
        .iter()
        .filter(|(n, _)| *n >= lo && *n <= hi)
        .map(|(n, v)| ((*n as f64).ln(), (*v as f64).ln()))
        .collect();
    if pts.len() < 2 {
        return Err(Error::DegenerateWindow(lo, hi));
    }
    least_squares_slope(&pts).ok_or(Error::DegenerateWindow(lo, hi))
}

/// Rank of the normal forms of all words over `{g, h}` of length `<= n`,
/// blocked by the invariants the rewriting preserves (N-degree = h-count,
/// and g-count in the un-truncated quotient over Q).
pub fn quotient_word_rank(spec: &AlgebraSpec, max_len: u32, mode: ExecMode) -> Result<usize> {
    if !spec.has_h() || spec.localized() {
        return Err(Error::SpecMismatch);
    }
    // bucket words by the preserved multidegree
    let mut buckets: std::collections::BTreeMap<(usize, usize), Vec<Vec<Gen>>> =
        std::collections::BTreeMap::new();
    let split_g = spec.preset == Preset::TBar;
    for len in 0..=max_len {
        for mask in 0..(1u64 << len) {
            let word: Vec<Gen> = (0..len)
                .map(|i| if mask >> i & 1 == 0 { Gen::G } else { Gen::H })
                .collect();
            let h = word.iter().filter(|&&g| g == Gen::H).count();
            let g = if split_g { word.len() - h } else { 0 };
            buckets.entry((g, h)).or_default().push(word);
        }
    }
    let blocks: Vec<Vec<Vec<Gen>>> = buckets.into_values().collect();
    let ranks = map_batch(mode, &blocks, |words| -> Result<usize> {
        let rows: Vec<SparseVec<PbwMonomial>> = words
            .iter()
            .map(|w| {
                let nf = normal_form_word(spec, w.clone(), spec.field.one(), Strategy::Leftmost)?;
                Ok(nf.terms.into_iter().collect())
            })
            .collect::<Result<_>>()?;
        if spec.field == Field::Rational {
            // integer rows; fraction-free elimination
            let mut cols: std::collections::BTreeMap<PbwMonomial, usize> = Default::default();
            for r in &rows {
                for k in r.keys() {
                    let next = cols.len();
                    cols.entry(k.clone()).or_insert(next);
                }
            }
            let mat: Vec<Vec<BigInt>> = rows
                .iter()
                .map(|r| {
                    let mut dense = vec![BigInt::zero(); cols.len()];
                    for (k, c) in r {
                        let crate::scalar::Scalar::Q(q) = c else { unreachable!() };
                        debug_assert!(q.denom().is_one());
                        dense[cols[k]] = q.numer().clone();
                    }
                    dense
                })
                .collect();
            Ok(bareiss_rank(mat))
        } else {
            Ok(rank(spec.field, rows))
        }
    });
    let mut total = 0;
    for r in ranks {
        total += r?;
    }
    Ok(total)
}

/// Growth oracle: the DP count of monomials of length `<= n` must equal the
/// rank of the normal forms of all words of length `<= n`.
pub fn growth_rank_oracle(spec: &AlgebraSpec, n_max: u32, mode: ExecMode) -> Result<Report> {
    let table = growth_function(spec, n_max)?;
    let mut report = Report::new("growth-oracle")
        .param("preset", spec.preset.name())
        .param("n_max", n_max);
    for n in 0..=n_max {
        let counted = table.get(n).unwrap();
        let ranked = quotient_word_rank(spec, n, mode)? as u128;
        if counted == ranked {
            report.pass(format!("d_V({n}) = {counted} matches word rank"));
        } else {
            report.fail(
                format!("d_V({n})"),
                format!("monomial count {counted} != word rank {ranked}"),
            );
        }
    }
    Ok(report)
}

/// The letter-multidegree of a quotient monomial in the un-truncated
/// quotient: `E(k)` carries one `g` and `k` h's.
pub fn monomial_multidegree(m: &PbwMonomial) -> (i64, u32) {
    let g = m.e_g + m.e.values().map(|e| *e as i64).sum::<i64>();
    let h = m.e_h + m.e.iter().map(|(k, e)| k * e).sum::<u32>();
    (g, h)
}

/// Project a free-algebra multidegree from a `{g,h}` word.
pub fn word_multidegree(w: &[Letter]) -> (usize, usize) {
    let g = w.iter().filter(|&&l| l == Letter::G).count();
    (g, w.len() - g)
}
