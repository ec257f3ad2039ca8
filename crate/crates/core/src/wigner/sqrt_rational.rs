use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Mul, Neg};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Signed square root of a nonnegative rational, `sign · √radicand`.
///
/// Every Clebsch–Gordan coefficient and 6j symbol with integer arguments has
/// this form, so the type is closed under the operations in this module.
/// Zero is stored with sign 0 and radicand 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SqrtRational {
    sign: i8,
    radicand: BigRational,
}

impl SqrtRational {
    pub fn zero() -> Self {
        Self {
            sign: 0,
            radicand: BigRational::zero(),
        }
    }

    pub fn one() -> Self {
        Self {
            sign: 1,
            radicand: BigRational::one(),
        }
    }

    /// `sign · √radicand`. Panics on a negative radicand.
    pub fn new(sign: i8, radicand: BigRational) -> Self {
        assert!(!radicand.is_negative(), "radicand must be nonnegative");
        if sign == 0 || radicand.is_zero() {
            return Self::zero();
        }
        Self {
            sign: sign.signum(),
            radicand,
        }
    }

    /// Builds `sign(q) · √|q|`, the signed-square encoding.
    pub fn from_signed_square(q: BigRational) -> Self {
        let sign = match q.numer().sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        };
        Self::new(sign, q.abs())
    }

    /// Exact rational `q`, stored as `sign(q) · √(q²)`.
    pub fn from_rational(q: BigRational) -> Self {
        let sq = &q * &q;
        let sign = if q.is_negative() { -1 } else { 1 };
        Self::new(sign, sq)
    }

    pub fn from_ratio(sign: i8, num: i64, den: i64) -> Self {
        Self::new(sign, BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn radicand(&self) -> &BigRational {
        &self.radicand
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    /// The exact square of the value.
    pub fn square(&self) -> BigRational {
        self.radicand.clone()
    }

    /// `sign · radicand`.
    pub fn signed_square(&self) -> BigRational {
        match self.sign {
            0 => BigRational::zero(),
            s if s > 0 => self.radicand.clone(),
            _ => -self.radicand.clone(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.sign == 0 {
            return 0.0;
        }
        let r = ratio_to_f64(&self.radicand);
        f64::from(self.sign) * r.sqrt()
    }

    /// Multiplies by an exact rational.
    pub fn scale(&self, q: &BigRational) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        let sign = if q.is_negative() { -self.sign } else { self.sign };
        Self::new(sign, &self.radicand * q * q)
    }

    /// Splits the value into `coefficient · √d` with `d` a squarefree integer.
    pub fn decompose(&self) -> (BigRational, BigUint) {
        if self.sign == 0 {
            return (BigRational::zero(), BigUint::one());
        }
        let p = self.radicand.numer().magnitude().clone();
        let q = self.radicand.denom().magnitude().clone();
        let (root, free) = split_square(&(&p * &q));
        let coeff = BigRational::new(
            BigInt::from_biguint(Sign::Plus, root),
            BigInt::from_biguint(Sign::Plus, q),
        );
        let coeff = if self.sign < 0 { -coeff } else { coeff };
        (coeff, free)
    }
}

impl Default for SqrtRational {
    fn default() -> Self {
        Self::zero()
    }
}

impl Mul for &SqrtRational {
    type Output = SqrtRational;

    fn mul(self, rhs: &SqrtRational) -> SqrtRational {
        SqrtRational::new(self.sign * rhs.sign, &self.radicand * &rhs.radicand)
    }
}

impl Mul for SqrtRational {
    type Output = SqrtRational;

    fn mul(self, rhs: SqrtRational) -> SqrtRational {
        &self * &rhs
    }
}

impl Neg for SqrtRational {
    type Output = SqrtRational;

    fn neg(self) -> SqrtRational {
        SqrtRational {
            sign: -self.sign,
            radicand: self.radicand,
        }
    }
}

impl fmt::Display for SqrtRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            0 => write!(f, "0"),
            s => write!(
                f,
                "{}sqrt({}/{})",
                if s < 0 { "-" } else { "" },
                self.radicand.numer(),
                self.radicand.denom()
            ),
        }
    }
}

fn ratio_to_f64(q: &BigRational) -> f64 {
    if let Some(v) = q.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    // Fall back to scaling both sides down when either overflows.
    let n = q.numer().to_f64().unwrap_or(f64::INFINITY);
    let d = q.denom().to_f64().unwrap_or(f64::INFINITY);
    n / d
}

/// Writes `n = root² · free` with `free` squarefree over primes below the trial
/// bound; any remaining cofactor is taken as squarefree unless it is a perfect
/// square.
fn split_square(n: &BigUint) -> (BigUint, BigUint) {
    let mut rest = n.clone();
    let mut root = BigUint::one();
    let mut free = BigUint::one();
    if rest.is_zero() {
        return (BigUint::zero(), BigUint::one());
    }
    let mut p: u32 = 2;
    while p < 10_000 {
        let bp = BigUint::from(p);
        if &bp * &bp > rest {
            break;
        }
        let mut count = 0u32;
        while (&rest % &bp).is_zero() {
            rest /= &bp;
            count += 1;
        }
        for _ in 0..count / 2 {
            root *= &bp;
        }
        if count % 2 == 1 {
            free *= &bp;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if !rest.is_one() {
        let s = rest.sqrt();
        if &s * &s == rest {
            root *= s;
        } else {
            free *= rest;
        }
    }
    (root, free)
}

/// `coeff · √root` with `root` squarefree: the decomposed form of a
/// [`SqrtRational`]. Products only need a gcd, not a factorization.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Surd {
    pub coeff: BigRational,
    pub root: BigUint,
}

impl From<&SqrtRational> for Surd {
    fn from(x: &SqrtRational) -> Self {
        let (coeff, root) = x.decompose();
        Self { coeff, root }
    }
}

impl Mul for &Surd {
    type Output = Surd;

    fn mul(self, rhs: &Surd) -> Surd {
        if self.coeff.is_zero() || rhs.coeff.is_zero() {
            return Surd {
                coeff: BigRational::zero(),
                root: BigUint::one(),
            };
        }
        let g = self.root.gcd(&rhs.root);
        let root = (&self.root / &g) * (&rhs.root / &g);
        let coeff = &self.coeff * &rhs.coeff * BigRational::from_integer(BigInt::from(g));
        Surd { coeff, root }
    }
}

/// Exact linear combination `Σ q_d · √d` over distinct squarefree `d`.
///
/// Square roots of distinct squarefree integers are linearly independent over
/// the rationals, so two sums are equal iff their coefficient maps agree.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ExactSum {
    terms: BTreeMap<BigUint, BigRational>,
}

impl ExactSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: &SqrtRational) {
        if x.is_zero() {
            return;
        }
        let (coeff, free) = x.decompose();
        let entry = self.terms.entry(free.clone()).or_insert_with(BigRational::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&free);
        }
    }

    pub fn add_surd(&mut self, x: &Surd) {
        if x.coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(x.root.clone()).or_insert_with(BigRational::zero);
        *entry += &x.coeff;
        if entry.is_zero() {
            self.terms.remove(&x.root);
        }
    }

    pub fn add_rational(&mut self, q: &BigRational) {
        self.add(&SqrtRational::from_rational(q.clone()));
    }

    /// The sum as a rational, if it has no irrational part.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&BigUint::one()).cloned(),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn equals_rational(&self, q: &BigRational) -> bool {
        self.as_rational().as_ref() == Some(q)
    }
}
