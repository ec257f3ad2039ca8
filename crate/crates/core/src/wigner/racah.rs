use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use parking_lot::RwLock;

use super::SqrtRational;

/// Exact factorials `0! ..= limit!` as big integers.
#[derive(Debug, Clone)]
pub struct FactorialTable {
    values: Vec<BigUint>,
}

impl FactorialTable {
    pub fn new(limit: usize) -> Self {
        let mut values = Vec::with_capacity(limit + 1);
        values.push(BigUint::one());
        for i in 1..=limit {
            let next = &values[i - 1] * BigUint::from(i);
            values.push(next);
        }
        Self { values }
    }

    pub fn limit(&self) -> usize {
        self.values.len() - 1
    }

    /// `n!`, computed on the fly past the precomputed range.
    pub fn get(&self, n: i64) -> BigUint {
        debug_assert!(n >= 0);
        let n = n as usize;
        if let Some(v) = self.values.get(n) {
            return v.clone();
        }
        let mut acc = self.values.last().cloned().unwrap_or_else(BigUint::one);
        for i in self.values.len()..=n {
            acc *= BigUint::from(i);
        }
        acc
    }

    fn int(&self, n: i64) -> BigInt {
        BigInt::from(self.get(n))
    }
}

fn triangle(a: i64, b: i64, c: i64) -> bool {
    a >= 0 && b >= 0 && c >= 0 && c >= (a - b).abs() && c <= a + b
}

type CgKey = [i32; 6];
type SixJKey = [u32; 6];
type YKey = [u32; 3];

/// Clebsch–Gordan coefficients, 6j symbols and spherical-harmonic reduced
/// matrix elements for integer angular momenta, evaluated exactly and cached.
pub struct AngularAlgebra {
    max_momentum: u32,
    factorials: FactorialTable,
    cg: RwLock<HashMap<CgKey, SqrtRational>>,
    six_j: RwLock<HashMap<SixJKey, SqrtRational>>,
    reduced_y: RwLock<HashMap<YKey, SqrtRational>>,
    cg_float: RwLock<HashMap<CgKey, f64>>,
    six_j_float: RwLock<HashMap<SixJKey, f64>>,
}

impl std::fmt::Debug for AngularAlgebra {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("AngularAlgebra")
            .field("max_momentum", &self.max_momentum)
            .finish_non_exhaustive()
    }
}

impl Default for AngularAlgebra {
    fn default() -> Self {
        Self::new(super::DEFAULT_MAX_MOMENTUM)
    }
}

impl AngularAlgebra {
    /// Precomputes factorials up to `4 * max_momentum + 2`. Larger arguments
    /// still work; their factorials are built on demand.
    pub fn new(max_momentum: u32) -> Self {
        Self {
            max_momentum,
            factorials: FactorialTable::new(4 * max_momentum as usize + 2),
            cg: RwLock::new(HashMap::new()),
            six_j: RwLock::new(HashMap::new()),
            reduced_y: RwLock::new(HashMap::new()),
            cg_float: RwLock::new(HashMap::new()),
            six_j_float: RwLock::new(HashMap::new()),
        }
    }

    pub fn max_momentum(&self) -> u32 {
        self.max_momentum
    }

    pub fn factorials(&self) -> &FactorialTable {
        &self.factorials
    }

    /// `⟨j1 m1; j2 m2 | j m⟩` in the Condon–Shortley convention.
    pub fn clebsch_gordan(&self, j1: u32, j2: u32, j: u32, m1: i32, m2: i32, m: i32) -> SqrtRational {
        let key = [j1 as i32, j2 as i32, j as i32, m1, m2, m];
        if let Some(v) = self.cg.read().get(&key) {
            return v.clone();
        }
        let value = cg_uncached(&self.factorials, j1, j2, j, m1, m2, m);
        self.cg.write().entry(key).or_insert(value).clone()
    }

    pub fn clebsch_gordan_f64(&self, j1: u32, j2: u32, j: u32, m1: i32, m2: i32, m: i32) -> f64 {
        let key = [j1 as i32, j2 as i32, j as i32, m1, m2, m];
        if let Some(v) = self.cg_float.read().get(&key) {
            return *v;
        }
        let value = self.clebsch_gordan(j1, j2, j, m1, m2, m).to_f64();
        self.cg_float.write().insert(key, value);
        value
    }

    /// `{j1 j2 j3; j4 j5 j6}`.
    pub fn six_j(&self, j1: u32, j2: u32, j3: u32, j4: u32, j5: u32, j6: u32) -> SqrtRational {
        let key = [j1, j2, j3, j4, j5, j6];
        if let Some(v) = self.six_j.read().get(&key) {
            return v.clone();
        }
        let value = six_j_uncached(&self.factorials, key);
        self.six_j.write().entry(key).or_insert(value).clone()
    }

    pub fn six_j_f64(&self, j1: u32, j2: u32, j3: u32, j4: u32, j5: u32, j6: u32) -> f64 {
        let key = [j1, j2, j3, j4, j5, j6];
        if let Some(v) = self.six_j_float.read().get(&key) {
            return *v;
        }
        let value = self.six_j(j1, j2, j3, j4, j5, j6).to_f64();
        self.six_j_float.write().insert(key, value);
        value
    }

    /// Reduced matrix element `(jp‖Y_lam‖j)` on the unit sphere, returned as
    /// its rational-radicand part: the true value is this times `1/√(4π)`.
    pub fn reduced_y(&self, jp: u32, lam: u32, j: u32) -> ReducedY {
        let key = [jp, lam, j];
        if let Some(v) = self.reduced_y.read().get(&key) {
            return ReducedY(v.clone());
        }
        let value = if (jp + lam + j) % 2 == 1 {
            SqrtRational::zero()
        } else {
            let cg = self.clebsch_gordan(j, lam, jp, 0, 0, 0);
            let pref = BigRational::from_integer(BigInt::from((2 * lam + 1) * (2 * j + 1)));
            &cg * &SqrtRational::new(1, pref)
        };
        ReducedY(self.reduced_y.write().entry(key).or_insert(value).clone())
    }

    pub fn reduced_y_f64(&self, jp: u32, lam: u32, j: u32) -> f64 {
        self.reduced_y(jp, lam, j).to_f64()
    }
}

/// `(J′‖Y_λ‖J)` stored as `coefficient / √(4π)` with an exact coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ReducedY(pub SqrtRational);

impl ReducedY {
    pub fn coefficient(&self) -> &SqrtRational {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64() / (4.0 * std::f64::consts::PI).sqrt()
    }
}

pub(crate) fn cg_uncached(
    fact: &FactorialTable,
    j1: u32,
    j2: u32,
    j: u32,
    m1: i32,
    m2: i32,
    m: i32,
) -> SqrtRational {
    let (j1, j2, j) = (i64::from(j1), i64::from(j2), i64::from(j));
    let (m1, m2, m) = (i64::from(m1), i64::from(m2), i64::from(m));
    if m1 + m2 != m || m1.abs() > j1 || m2.abs() > j2 || m.abs() > j || !triangle(j1, j2, j) {
        return SqrtRational::zero();
    }
    let num = BigInt::from(2 * j + 1)
        * fact.int(j1 + j2 - j)
        * fact.int(j1 - j2 + j)
        * fact.int(-j1 + j2 + j)
        * fact.int(j1 + m1)
        * fact.int(j1 - m1)
        * fact.int(j2 + m2)
        * fact.int(j2 - m2)
        * fact.int(j + m)
        * fact.int(j - m);
    let prefactor = BigRational::new(num, fact.int(j1 + j2 + j + 1));

    let k_min = 0.max(j2 - j - m1).max(j1 + m2 - j);
    let k_max = (j1 + j2 - j).min(j1 - m1).min(j2 + m2);
    let mut sum = BigRational::zero();
    for k in k_min..=k_max {
        let den = fact.int(k)
            * fact.int(j1 + j2 - j - k)
            * fact.int(j1 - m1 - k)
            * fact.int(j2 + m2 - k)
            * fact.int(j - j2 + m1 + k)
            * fact.int(j - j1 - m2 + k);
        let term = BigRational::new(BigInt::one(), den);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    signed_root(prefactor, sum)
}

fn delta_squared(fact: &FactorialTable, a: i64, b: i64, c: i64) -> BigRational {
    BigRational::new(
        fact.int(a + b - c) * fact.int(a - b + c) * fact.int(-a + b + c),
        fact.int(a + b + c + 1),
    )
}

pub(crate) fn six_j_uncached(fact: &FactorialTable, key: SixJKey) -> SqrtRational {
    let [j1, j2, j3, j4, j5, j6] = key.map(i64::from);
    let triads = [(j1, j2, j3), (j1, j5, j6), (j4, j2, j6), (j4, j5, j3)];
    if triads.iter().any(|&(a, b, c)| !triangle(a, b, c)) {
        return SqrtRational::zero();
    }
    let mut prefactor = BigRational::one();
    for &(a, b, c) in &triads {
        prefactor *= delta_squared(fact, a, b, c);
    }
    let alphas = triads.map(|(a, b, c)| a + b + c);
    let betas = [j1 + j2 + j4 + j5, j2 + j3 + j5 + j6, j3 + j1 + j6 + j4];
    let t_min = *alphas.iter().max().unwrap();
    let t_max = *betas.iter().min().unwrap();
    let mut sum = BigRational::zero();
    for t in t_min..=t_max {
        let mut den = BigInt::one();
        for a in alphas {
            den *= fact.int(t - a);
        }
        for b in betas {
            den *= fact.int(b - t);
        }
        let term = BigRational::new(fact.int(t + 1), den);
        if t % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    signed_root(prefactor, sum)
}

/// `sign(sum) · √(prefactor · sum²)`.
fn signed_root(prefactor: BigRational, sum: BigRational) -> SqrtRational {
    if sum.is_zero() {
        return SqrtRational::zero();
    }
    let sign = if sum.is_negative() { -1 } else { 1 };
    SqrtRational::new(sign, prefactor * &sum * &sum)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alg() -> AngularAlgebra {
        AngularAlgebra::new(6)
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn factorials_extend_past_table() {
        let t = FactorialTable::new(3);
        assert_eq!(t.get(3), BigUint::from(6u32));
        assert_eq!(t.get(6), BigUint::from(720u32));
    }

    #[test]
    fn cg_trivial_cases() {
        let a = alg();
        for j in 0..5u32 {
            for m in -(j as i32)..=(j as i32) {
                assert_eq!(a.clebsch_gordan(j, 0, j, m, 0, m), SqrtRational::one());
            }
        }
        assert!(a.clebsch_gordan(1, 1, 1, 0, 0, 0).is_zero());
        assert_eq!(a.clebsch_gordan(1, 1, 2, 1, 1, 2), SqrtRational::one());
        assert!(a.clebsch_gordan(1, 1, 2, 1, 0, 0).is_zero());
        assert!(a.clebsch_gordan(1, 1, 3, 1, 0, 1).is_zero());
    }

    #[test]
    fn cg_singlet_matches_ladder_construction() {
        // Lowering |2 2⟩ = |1 1⟩|1 1⟩ twice and orthogonalizing gives
        // |0 0⟩ = (|1,-1⟩ - |0,0⟩ + |-1,1⟩)/√3.
        let a = alg();
        assert_eq!(a.clebsch_gordan(1, 1, 0, 1, -1, 0), SqrtRational::new(1, q(1, 3)));
        assert_eq!(a.clebsch_gordan(1, 1, 0, 0, 0, 0), SqrtRational::new(-1, q(1, 3)));
        assert_eq!(a.clebsch_gordan(1, 1, 1, 1, 0, 1), SqrtRational::new(1, q(1, 2)));
        assert_eq!(a.clebsch_gordan(1, 1, 1, 0, 1, 1), SqrtRational::new(-1, q(1, 2)));
    }

    #[test]
    fn six_j_special_case() {
        let a = alg();
        // {a b c; 0 c b} = (-1)^(a+b+c) / √((2b+1)(2c+1))
        for (x, b, c) in [(1u32, 1u32, 2u32), (2, 3, 1), (0, 2, 2), (3, 2, 4)] {
            let sign = if (x + b + c) % 2 == 0 { 1 } else { -1 };
            let expect = SqrtRational::new(sign, q(1, i64::from((2 * b + 1) * (2 * c + 1))));
            assert_eq!(a.six_j(x, b, c, 0, c, b), expect);
        }
        assert_eq!(a.six_j(1, 1, 2, 0, 2, 1), SqrtRational::new(1, q(1, 15)));
        assert!(a.six_j(1, 1, 3, 1, 1, 1).is_zero());
    }

    #[test]
    fn six_j_all_ones() {
        // {1 1 1; 1 1 1} = 1/6
        assert_eq!(alg().six_j(1, 1, 1, 1, 1, 1), SqrtRational::new(1, q(1, 36)));
    }

    #[test]
    fn reduced_y_examples() {
        let a = alg();
        let y = a.reduced_y(1, 1, 0);
        assert_eq!(y.coefficient(), &SqrtRational::new(1, q(3, 1)));
        assert!((y.to_f64() - (3.0 / (4.0 * std::f64::consts::PI)).sqrt()).abs() < 1e-15);
        assert!(a.reduced_y(1, 1, 1).is_zero());
        // (0‖Y_1‖1) = √(3·3)·CG(1 1 0;000) = 3·(-1/√3) = -√3
        assert_eq!(a.reduced_y(0, 1, 1).coefficient(), &SqrtRational::new(-1, q(3, 1)));
    }

    #[test]
    fn cached_equals_uncached() {
        let a = alg();
        for _ in 0..2 {
            assert_eq!(
                a.clebsch_gordan(3, 2, 4, 1, -1, 0),
                cg_uncached(a.factorials(), 3, 2, 4, 1, -1, 0)
            );
            assert_eq!(a.six_j(2, 2, 2, 1, 3, 2), six_j_uncached(a.factorials(), [2, 2, 2, 1, 3, 2]));
        }
    }
}
