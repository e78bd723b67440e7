//! Exact coefficient arithmetic: arbitrary-precision rationals and prime
//! fields `F_p`, plus the integer combinatorial primitives used by the
//! coproduct formulas (binomials and set-partition multinomials).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

use crate::{Error, Result};

/// Coefficient field: the rationals or a prime field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Rational,
    Prime(u64),
}

impl Field {
    /// Build a field from a characteristic: 0 means the rationals.
    pub fn of_characteristic(chr: u64) -> Result<Field> {
        if chr == 0 {
            Ok(Field::Rational)
        } else if is_prime(chr) {
            Ok(Field::Prime(chr))
        } else {
            Err(Error::NonPrimeP(chr))
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) => *p,
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        self.from_bigint(&BigInt::from(v))
    }

    /// Reduce an exact integer into the field.
    pub fn from_bigint(&self, v: &BigInt) -> Scalar {
        match self {
            Field::Rational => Scalar::Q(BigRational::from(v.clone())),
            Field::Prime(p) => {
                let m = BigInt::from(*p);
                let mut r = v % &m;
                if r.is_negative() {
                    r += &m;
                }
                let digits = r.to_u64_digits().1;
                Scalar::Fp {
                    p: *p,
                    v: digits.first().copied().unwrap_or(0),
                }
            }
        }
    }

    /// Reduce an exact rational a/b; fails when b vanishes mod p.
    pub fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Result<Scalar> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        match self {
            Field::Rational => Ok(Scalar::Q(BigRational::new(num.clone(), den.clone()))),
            Field::Prime(_) => self.from_bigint(num).checked_div(&self.from_bigint(den)),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "F_{p}"),
        }
    }
}

/// An exact field element. Rationals are kept in lowest terms with positive
/// denominator (the `BigRational` invariant); prime-field residues lie in
/// `[0, p)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Q(BigRational),
    Fp { p: u64, v: u64 },
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Q(_) => Field::Rational,
            Scalar::Fp { p, .. } => Field::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_zero(),
            Scalar::Fp { v, .. } => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_one(),
            Scalar::Fp { v, .. } => *v == 1,
        }
    }

    fn same_field(&self, other: &Scalar) -> Result<()> {
        let (a, b) = (self.field(), other.field());
        if a == b {
            Ok(())
        } else {
            Err(Error::FieldMismatch(a, b))
        }
    }

    pub fn checked_add(&self, other: &Scalar) -> Result<Scalar> {
        self.same_field(other)?;
        Ok(match (self, other) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a + b),
            (Scalar::Fp { p, v: a }, Scalar::Fp { v: b, .. }) => Scalar::Fp {
                p: *p,
                v: ((*a as u128 + *b as u128) % *p as u128) as u64,
            },
            _ => unreachable!(),
        })
    }

    pub fn checked_sub(&self, other: &Scalar) -> Result<Scalar> {
        self.checked_add(&other.clone().neg())
    }

    pub fn checked_mul(&self, other: &Scalar) -> Result<Scalar> {
        self.same_field(other)?;
        Ok(match (self, other) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a * b),
            (Scalar::Fp { p, v: a }, Scalar::Fp { v: b, .. }) => Scalar::Fp {
                p: *p,
                v: ((*a as u128 * *b as u128) % *p as u128) as u64,
            },
            _ => unreachable!(),
        })
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Scalar> {
        self.checked_mul(&other.inverse()?)
    }

    /// Multiplicative inverse; `F_p` inversion goes through `v^(p-2)`.
    pub fn inverse(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match self {
            Scalar::Q(r) => Scalar::Q(r.recip()),
            Scalar::Fp { p, v } => Scalar::Fp {
                p: *p,
                v: pow_mod(*v, *p - 2, *p),
            },
        })
    }

    pub fn pow(&self, mut e: u32) -> Scalar {
        let mut acc = self.field().one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Plain form for embedding in expressions and structured output:
    /// `a/b`, `a`, or the bare residue.
    pub fn plain(&self) -> String {
        match self {
            Scalar::Q(r) => {
                if r.denom().is_one() {
                    r.numer().to_string()
                } else {
                    format!("{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Fp { v, .. } => v.to_string(),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(_) => write!(f, "{}", self.plain()),
            Scalar::Fp { p, v } => write!(f, "{v} mod {p}"),
        }
    }
}

macro_rules! panicking_op {
    ($trait:ident, $m:ident, $checked:ident) => {
        impl $trait for &Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                self.$checked(rhs).expect("scalar field mismatch")
            }
        }
    };
}
panicking_op!(Add, add, checked_add);
panicking_op!(Sub, sub, checked_sub);
panicking_op!(Mul, mul, checked_mul);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Q(r) => Scalar::Q(-r),
            Scalar::Fp { p, v } => Scalar::Fp {
                p,
                v: if v == 0 { 0 } else { p - v },
            },
        }
    }
}

/// Exact field arithmetic on two scalars of the same field.
pub fn scalar_arith(a: &Scalar, b: &Scalar, op: ArithOp) -> Result<Scalar> {
    match op {
        ArithOp::Add => a.checked_add(b),
        ArithOp::Sub => a.checked_sub(b),
        ArithOp::Mul => a.checked_mul(b),
        ArithOp::Div => a.checked_div(b),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

fn pow_mod(b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc: u128 = 1;
    let mut base = b as u128 % m as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m as u128;
        }
        base = base * base % m as u128;
        e >>= 1;
    }
    acc as u64
}

/// Deterministic trial division; p stays desk-scale here.
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Exact binomial coefficient; `k > n` yields 0.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Binomial reduced into a field.
pub fn binomial_in(field: Field, n: u64, k: u64) -> Scalar {
    field.from_bigint(&binomial(n, k))
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// The number of set partitions of an `n`-set with `t[i]` blocks of size `i`:
/// `n! / (prod t_i! * prod (i!)^t_i)`. The factorials are taken over the
/// integers and divided exactly; callers reduce into `F_p` afterwards, which
/// is the only evaluation order that is correct in positive characteristic.
pub fn multinomial_partition_coefficient(n: u64, t: &BTreeMap<u32, u32>) -> Result<BigInt> {
    let total: u64 = t.iter().map(|(i, m)| *i as u64 * *m as u64).sum();
    if total != n {
        return Err(Error::InvalidPartition { want: n, got: total });
    }
    let mut den = BigInt::one();
    for (i, m) in t {
        den *= factorial(*m as u64);
        den *= factorial(*i as u64).pow(*m);
    }
    let num = factorial(n);
    debug_assert!((&num % &den).is_zero());
    Ok(num / den)
}

/// All partitions of `n` as multiplicity maps `part size -> count`,
/// in a deterministic order.
pub fn partitions_multiplicity(n: u32) -> Vec<BTreeMap<u32, u32>> {
    fn rec(n: u32, max: u32, cur: &mut BTreeMap<u32, u32>, out: &mut Vec<BTreeMap<u32, u32>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for i in (1..=max.min(n)).rev() {
            *cur.entry(i).or_insert(0) += 1;
            rec(n - i, i, cur, out);
            let e = cur.get_mut(&i).unwrap();
            *e -= 1;
            if *e == 0 {
                cur.remove(&i);
            }
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut BTreeMap::new(), &mut out);
    out
}

/// All weak compositions of `n` into `parts` nonnegative parts, lex order.
pub fn weak_compositions(n: u32, parts: u32) -> Vec<Vec<u32>> {
    fn rec(n: u32, parts: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if parts == 1 {
            cur.push(n);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for i in 0..=n {
            cur.push(i);
            rec(n - i, parts - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if parts == 0 {
        if n == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(n, parts, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::Q(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    fn fp(p: u64, v: i64) -> Scalar {
        Field::Prime(p).from_i64(v)
    }

    /// Independent inverse oracle: extended Euclid.
    fn ext_euclid_inverse(a: u64, p: u64) -> u64 {
        let (mut r0, mut r1) = (p as i128, a as i128);
        let (mut s0, mut s1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        assert_eq!(r0, 1, "not invertible");
        (s0.rem_euclid(p as i128)) as u64
    }

    /// Brute-force count of set partitions of an n-set with the given
    /// block-size multiset, via restricted growth strings.
    fn count_partitions_by_shape(n: u32, t: &BTreeMap<u32, u32>) -> u64 {
        fn rec(rgs: &mut Vec<u32>, n: u32, count: &mut u64, t: &BTreeMap<u32, u32>) {
            if rgs.len() == n as usize {
                let blocks = *rgs.iter().max().unwrap() + 1;
                let mut sizes = BTreeMap::new();
                for b in 0..blocks {
                    let s = rgs.iter().filter(|&&x| x == b).count() as u32;
                    *sizes.entry(s).or_insert(0u32) += 1;
                }
                if &sizes == t {
                    *count += 1;
                }
                return;
            }
            let max = rgs.iter().copied().max().map_or(0, |m| m + 1);
            for b in 0..=max {
                rgs.push(b);
                rec(rgs, n, count, t);
                rgs.pop();
            }
        }
        let mut count = 0;
        rec(&mut vec![0], n, &mut count, t);
        count
    }

    #[test]
    fn rational_add() {
        assert_eq!(
            scalar_arith(&q(1, 2), &q(1, 3), ArithOp::Add).unwrap(),
            q(5, 6)
        );
    }

    #[test]
    fn fp_mul_and_inverse() {
        assert_eq!(scalar_arith(&fp(5, 3), &fp(5, 4), ArithOp::Mul).unwrap(), fp(5, 2));
        // 2^{-1} in F_5, frozen from the extended-Euclid oracle
        assert_eq!(ext_euclid_inverse(2, 5), 3);
        assert_eq!(fp(5, 2).inverse().unwrap(), fp(5, 3));
        for p in [3, 5, 7, 31] {
            for a in 1..p {
                assert_eq!(fp(p, a as i64).inverse().unwrap(), fp(p, ext_euclid_inverse(a, p) as i64));
            }
        }
    }

    #[test]
    fn mismatched_fields_error() {
        assert!(matches!(
            scalar_arith(&q(1, 1), &fp(5, 1), ArithOp::Add),
            Err(Error::FieldMismatch(..))
        ));
        assert!(matches!(
            scalar_arith(&fp(5, 1), &fp(5, 0), ArithOp::Div),
            Err(Error::DivisionByZero)
        ));
    }

    #[test]
    fn binomial_basics() {
        assert_eq!(binomial(4, 2), BigInt::from(6));
        assert_eq!(binomial(3, 5), BigInt::zero());
        // Vandermonde: (5 choose 3) = sum_{i+j=3} (2 choose i)(3 choose j)
        let direct = binomial(5, 3);
        let sum: BigInt = (0..=3).map(|i| binomial(2, i) * binomial(3, 3 - i)).sum();
        assert_eq!(direct, sum);
        assert_eq!(direct, BigInt::from(10));
    }

    #[test]
    fn binomial_pascal_rule() {
        for n in 1..=60u64 {
            for k in 1..=n {
                assert_eq!(binomial(n, k), binomial(n - 1, k - 1) + binomial(n - 1, k));
            }
        }
    }

    #[test]
    fn multinomial_examples() {
        let t = BTreeMap::from([(1, 1), (2, 1)]);
        assert_eq!(multinomial_partition_coefficient(3, &t).unwrap(), BigInt::from(3));
        let t = BTreeMap::from([(2, 2)]);
        assert_eq!(multinomial_partition_coefficient(4, &t).unwrap(), BigInt::from(3));
        for k in 1..=6 {
            let t = BTreeMap::from([(1, k)]);
            assert_eq!(multinomial_partition_coefficient(k as u64, &t).unwrap(), BigInt::one());
        }
        let t = BTreeMap::from([(2, 1)]);
        assert!(matches!(
            multinomial_partition_coefficient(3, &t),
            Err(Error::InvalidPartition { .. })
        ));
    }

    #[test]
    fn multinomial_counts_set_partitions() {
        // every block-size multiset of an n-set, n <= 8
        fn shapes(n: u32) -> Vec<BTreeMap<u32, u32>> {
            fn rec(n: u32, max: u32, cur: &mut BTreeMap<u32, u32>, out: &mut Vec<BTreeMap<u32, u32>>) {
                if n == 0 {
                    out.push(cur.clone());
                    return;
                }
                for i in (1..=max.min(n)).rev() {
                    *cur.entry(i).or_insert(0) += 1;
                    rec(n - i, i, cur, out);
                    let e = cur.get_mut(&i).unwrap();
                    *e -= 1;
                    if *e == 0 {
                        cur.remove(&i);
                    }
                }
            }
            let mut out = Vec::new();
            rec(n, n, &mut BTreeMap::new(), &mut out);
            out
        }
        for n in 1..=8u32 {
            for t in shapes(n) {
                let formula = multinomial_partition_coefficient(n as u64, &t).unwrap();
                let brute = count_partitions_by_shape(n, &t);
                assert_eq!(formula, BigInt::from(brute), "n={n} t={t:?}");
            }
        }
    }

    #[test]
    fn primality_trial_division() {
        assert!(is_prime(2) && is_prime(3) && is_prime(5) && is_prime(31));
        assert!(!is_prime(0) && !is_prime(1) && !is_prime(9) && !is_prime(91));
        assert!(matches!(Field::of_characteristic(6), Err(Error::NonPrimeP(6))));
    }

    proptest! {
        #[test]
        fn field_axioms_rational(an in -50i64..50, ad in 1i64..20, bn in -50i64..50, bd in 1i64..20) {
            let a = q(an, ad);
            let b = q(bn, bd);
            prop_assert_eq!(&(&a + &b) - &b, a.clone());
            if !b.is_zero() {
                prop_assert_eq!((&a * &b).checked_div(&b).unwrap(), a);
            }
        }

        #[test]
        fn field_axioms_prime(av in 0i64..31, bv in 0i64..31) {
            let a = fp(31, av);
            let b = fp(31, bv);
            prop_assert_eq!(&(&a + &b) - &b, a.clone());
            if !b.is_zero() {
                prop_assert_eq!((&a * &b).checked_div(&b).unwrap(), a);
            }
        }
    }
}
