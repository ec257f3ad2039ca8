use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{ScfpKey, ScfpTable};
use crate::error::Result;
use crate::numfmt::sig15;
use crate::wigner::SqrtRational;

/// One published SCFP value.
#[derive(Clone, Debug)]
pub struct Table1Row {
    pub lambda: u32,
    pub n: usize,
    pub parent: u32,
    pub daughter: u32,
    pub value: SqrtRational,
    pub text: &'static str,
}

fn row(lambda: u32, parent: u32, daughter: u32, sign: i8, num: i64, den: i64, text: &'static str) -> Table1Row {
    Table1Row {
        lambda,
        n: 3,
        parent,
        daughter,
        value: SqrtRational::from_ratio(sign, num, den),
        text,
    }
}

/// The published three-boson values, transcribed as printed.
pub fn table1_rows() -> Vec<Table1Row> {
    vec![
        row(1, 0, 1, 1, 5, 3, "sqrt(5/3)"),
        row(1, 2, 1, 1, 4, 9, "2/3"),
        row(2, 0, 2, 1, 7, 15, "sqrt(7/15)"),
        row(2, 2, 2, 1, 2, 21, "sqrt(2/21)"),
        row(2, 2, 3, 1, 5, 7, "sqrt(5/7)"),
        row(2, 2, 4, 1, 11, 21, "sqrt(11/21)"),
        row(2, 4, 2, 1, 12, 35, "2sqrt(3/35)"),
        row(2, 4, 3, -1, 2, 7, "-sqrt(2/7)"),
        row(2, 4, 4, 1, 10, 21, "sqrt(10/21)"),
    ]
}

/// Comparison of one `(λ, n, Λ)` group against the oracle.
#[derive(Clone, Debug)]
pub struct GroupReport {
    pub lambda: u32,
    pub n: usize,
    pub daughter: u32,
    /// `(published row, oracle value)` in ascending parent order.
    pub rows: Vec<(Table1Row, f64)>,
    /// Exact sum of squares of the published values.
    pub published_norm: BigRational,
    pub oracle_norm: f64,
    /// `min_s max_i |oracle_i − s·published_i|` over `s = ±1`.
    pub signed_deviation: f64,
    /// `max_i |oracle_i/oracle_0 − published_i/published_0|`.
    pub ratio_deviation: f64,
}

impl GroupReport {
    pub fn self_normalizing(&self) -> bool {
        self.published_norm.is_one()
    }
}

#[derive(Clone, Debug)]
pub struct Table1Comparison {
    pub groups: Vec<GroupReport>,
}

impl Table1Comparison {
    pub fn group(&self, lambda: u32, daughter: u32) -> Option<&GroupReport> {
        self.groups
            .iter()
            .find(|g| g.lambda == lambda && g.daughter == daughter)
    }
}

/// Lines up the published values with an oracle table. Rows at a `(λ, n)`
/// the table does not cover are skipped.
pub fn compare_table1(table: &ScfpTable) -> Result<Table1Comparison> {
    let rows = table1_rows();
    let mut groups: Vec<GroupReport> = Vec::new();
    for r in rows.into_iter().filter(|r| table.covers(r.lambda, r.n)) {
        let oracle = table.get(&ScfpKey::new(r.lambda, r.n, r.parent, r.daughter))?;
        match groups
            .iter_mut()
            .find(|g| g.lambda == r.lambda && g.n == r.n && g.daughter == r.daughter)
        {
            Some(g) => g.rows.push((r, oracle)),
            None => groups.push(GroupReport {
                lambda: r.lambda,
                n: r.n,
                daughter: r.daughter,
                rows: vec![(r, oracle)],
                published_norm: BigRational::zero(),
                oracle_norm: 0.0,
                signed_deviation: 0.0,
                ratio_deviation: 0.0,
            }),
        }
    }
    for g in &mut groups {
        g.rows.sort_by_key(|(r, _)| r.parent);
        g.published_norm = g
            .rows
            .iter()
            .fold(BigRational::zero(), |acc, (r, _)| acc + r.value.square());
        g.oracle_norm = g.rows.iter().map(|(_, o)| o * o).sum();
        g.signed_deviation = [1.0, -1.0]
            .iter()
            .map(|s| {
                g.rows
                    .iter()
                    .map(|(r, o)| (o - s * r.value.to_f64()).abs())
                    .fold(0.0, f64::max)
            })
            .fold(f64::INFINITY, f64::min);
        let (r0, o0) = (&g.rows[0].0, g.rows[0].1);
        g.ratio_deviation = g
            .rows
            .iter()
            .map(|(r, o)| (o / o0 - r.value.to_f64() / r0.value.to_f64()).abs())
            .fold(0.0, f64::max);
    }
    Ok(Table1Comparison { groups })
}

fn fmt_ratio(q: &BigRational) -> String {
    if q.denom() == &BigInt::one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for Table1Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for g in &self.groups {
            writeln!(f, "group lambda={} n={} Lambda={}", g.lambda, g.n, g.daughter)?;
            writeln!(f, "  parent,oracle,table1,table1_value,ratio")?;
            for (r, o) in &g.rows {
                let t = r.value.to_f64();
                writeln!(
                    f,
                    "  {}^{}({}),{},{},{},{}",
                    r.lambda,
                    r.n - 1,
                    r.parent,
                    sig15(*o),
                    r.text,
                    sig15(t),
                    sig15(o / t)
                )?;
            }
            writeln!(
                f,
                "  sum of squares: table1 = {} (exact), oracle = {}",
                fmt_ratio(&g.published_norm),
                sig15(g.oracle_norm)
            )?;
            if g.self_normalizing() {
                writeln!(f, "  max |oracle - sign*table1| = {}", sig15(g.signed_deviation))?;
            } else {
                writeln!(
                    f,
                    "  normalization discrepancy: table1 squares sum to {} instead of 1",
                    fmt_ratio(&g.published_norm)
                )?;
            }
            writeln!(f, "  max intra-group ratio deviation = {}", sig15(g.ratio_deviation))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::FockSpace;
    use crate::scfp::scfp_oracle;

    #[test]
    fn published_norms_are_exact() {
        let t = scfp_oracle(&FockSpace::new(3), 1, 3).unwrap();
        let mut t2 = scfp_oracle(&FockSpace::new(3), 2, 3).unwrap();
        t2.extend(&t);
        let cmp = compare_table1(&t2).unwrap();
        let norm = |l, d| fmt_ratio(&cmp.group(l, d).unwrap().published_norm);
        assert_eq!(norm(1, 1), "19/9");
        assert_eq!(norm(2, 2), "19/21");
        assert_eq!(norm(2, 3), "1");
        assert_eq!(norm(2, 4), "1");
        let text = cmp.to_string();
        assert!(text.contains("19/9") && text.contains("19/21"));
    }

    #[test]
    fn uncovered_rows_are_skipped() {
        let t = scfp_oracle(&FockSpace::new(3), 2, 3).unwrap();
        let cmp = compare_table1(&t).unwrap();
        assert_eq!(cmp.groups.len(), 3);
        assert!(cmp.group(1, 1).is_none());
        let empty = compare_table1(&scfp_oracle(&FockSpace::new(1), 1, 1).unwrap()).unwrap();
        assert!(empty.groups.is_empty());
    }
}
