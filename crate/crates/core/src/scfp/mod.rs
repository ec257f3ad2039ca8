//! Symmetric coefficients of fractional parentage (SCFPs).
//!
//! `(λ^{n−1}(Λ′) λ ‖ λⁿ Λ)` is the overlap of the coupled `n`-boson state with
//! its parent `Λ′` coupled to one more boson. The oracle reads these overlaps
//! directly off the Fock-space coupled basis.

mod table1;

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::sync::Arc;

use once_cell::sync::Lazy;
use parking_lot::Mutex;

use crate::error::{Error, Result};
use crate::fock::{couple_with_mode, inner, CoeffKey, CoupledBasis, FockSpace};
use crate::numfmt::sig15;
use crate::wigner::{self, triangle};

pub use table1::{compare_table1, table1_rows, GroupReport, Table1Comparison, Table1Row};

/// Identifies one SCFP. `n` is the daughter particle number.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ScfpKey {
    pub lambda: u32,
    pub n: usize,
    pub parent: u32,
    pub parent_mult: usize,
    pub daughter: u32,
    pub daughter_mult: usize,
}

impl ScfpKey {
    pub fn new(lambda: u32, n: usize, parent: u32, daughter: u32) -> Self {
        Self {
            lambda,
            n,
            parent,
            parent_mult: 0,
            daughter,
            daughter_mult: 0,
        }
    }
}

impl std::fmt::Display for ScfpKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "({}^{}({}#{}) {} || {}^{} {}#{})",
            self.lambda,
            self.n.saturating_sub(1),
            self.parent,
            self.parent_mult,
            self.lambda,
            self.lambda,
            self.n,
            self.daughter,
            self.daughter_mult
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    Oracle,
    Recurrence,
    File,
}

/// SCFP values for every `(λ, n)` level that has been computed.
///
/// Entries exist for every triangle-allowed parent/daughter pair, including
/// those whose value is zero.
#[derive(Clone, Debug, PartialEq)]
pub struct ScfpTable {
    entries: BTreeMap<ScfpKey, f64>,
    pub provenance: Provenance,
    /// Largest difference between the overlap at `M = Λ` and at `M = 0`.
    pub m_check_deviation: f64,
}

impl ScfpTable {
    pub fn new(provenance: Provenance) -> Self {
        Self {
            entries: BTreeMap::new(),
            provenance,
            m_check_deviation: 0.0,
        }
    }

    pub fn insert(&mut self, key: ScfpKey, value: f64) {
        self.entries.insert(key, value);
    }

    pub fn entries(&self) -> impl Iterator<Item = (&ScfpKey, &f64)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, key: &ScfpKey) -> Result<f64> {
        self.entries
            .get(key)
            .copied()
            .ok_or_else(|| Error::MissingEntry(key.to_string()))
    }

    /// Like [`ScfpTable::get`] but returns zero for pairs that cannot occur:
    /// triangle-forbidden, or a label absent from a level the table covers.
    pub fn value(&self, key: &ScfpKey) -> Result<f64> {
        if !triangle(key.parent, key.lambda, key.daughter) {
            return Ok(0.0);
        }
        if let Some(v) = self.entries.get(key) {
            return Ok(*v);
        }
        if !self.covers(key.lambda, key.n) {
            return Err(Error::MissingEntry(key.to_string()));
        }
        let daughter_known = self.labels(key.lambda, key.n).contains(&(key.daughter, key.daughter_mult));
        let parent_known = key.n == 1 || self.labels(key.lambda, key.n - 1).contains(&(key.parent, key.parent_mult));
        if daughter_known && parent_known {
            Err(Error::MissingEntry(key.to_string()))
        } else {
            Ok(0.0)
        }
    }

    pub fn covers(&self, lambda: u32, n: usize) -> bool {
        self.entries.keys().any(|k| k.lambda == lambda && k.n == n)
    }

    pub fn max_n(&self, lambda: u32) -> usize {
        self.entries
            .keys()
            .filter(|k| k.lambda == lambda)
            .map(|k| k.n)
            .max()
            .unwrap_or(0)
    }

    /// Coupled labels `(Λ, mult)` present at particle number `n`.
    pub fn labels(&self, lambda: u32, n: usize) -> Vec<(u32, usize)> {
        if n == 0 {
            return vec![(0, 0)];
        }
        let mut out: Vec<(u32, usize)> = self
            .entries
            .keys()
            .filter(|k| k.lambda == lambda && k.n == n)
            .map(|k| (k.daughter, k.daughter_mult))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn set(&mut self, key: &ScfpKey, value: f64) -> Result<()> {
        match self.entries.get_mut(key) {
            Some(v) => {
                *v = value;
                Ok(())
            }
            None => Err(Error::MissingEntry(key.to_string())),
        }
    }

    /// Sorted CSV with a header row.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("lambda,n,parent_L,mult_p,daughter_L,mult_d,value\n");
        for (k, v) in &self.entries {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                k.lambda,
                k.n,
                k.parent,
                k.parent_mult,
                k.daughter,
                k.daughter_mult,
                sig15(*v)
            );
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut table = Self::new(Provenance::File);
        for (lineno, line) in text.lines().enumerate().skip(1) {
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            let bad = || Error::Config(format!("malformed SCFP row {}: {line}", lineno + 1));
            if fields.len() != 7 {
                return Err(bad());
            }
            let int = |i: usize| fields[i].trim().parse::<u32>().map_err(|_| bad());
            let key = ScfpKey {
                lambda: int(0)?,
                n: int(1)? as usize,
                parent: int(2)?,
                parent_mult: int(3)? as usize,
                daughter: int(4)?,
                daughter_mult: int(5)? as usize,
            };
            let value = fields[6].trim().parse::<f64>().map_err(|_| bad())?;
            table.insert(key, value);
        }
        Ok(table)
    }

    /// Merges another table's entries into this one.
    pub fn extend(&mut self, other: &ScfpTable) {
        for (k, v) in &other.entries {
            self.entries.insert(*k, *v);
        }
        self.m_check_deviation = self.m_check_deviation.max(other.m_check_deviation);
    }
}

/// SCFPs for `n = 1..=n_max` read off the Fock-space coupled basis.
///
/// The overlap `⟨v_{λⁿΛM}, {v_{λ^{n−1}Λ′} ⊗̂ e_λ}_{ΛM}⟩` is evaluated at
/// `M = Λ` and re-evaluated at `M = 0` as a consistency check.
pub fn scfp_oracle(space: &FockSpace, lambda: u32, n_max: usize) -> Result<ScfpTable> {
    space.check_dimension(lambda, n_max)?;
    let mut table = ScfpTable::new(Provenance::Oracle);
    for n in 1..=n_max {
        let daughter = CoupledBasis::build(space, lambda, n)?;
        let parent = daughter.parent.as_ref().expect("n >= 1 has a parent");
        for d in &daughter.families {
            for p in &parent.families {
                if !triangle(p.big_lambda, lambda, d.big_lambda) {
                    continue;
                }
                let top = d.big_lambda as i32;
                let cand = couple_with_mode(p, lambda, d.big_lambda, top);
                let value = inner(d.component(top), &cand).re;
                let cand0 = couple_with_mode(p, lambda, d.big_lambda, 0);
                let value0 = inner(d.component(0), &cand0).re;
                table.m_check_deviation = table.m_check_deviation.max((value - value0).abs());
                table.insert(
                    ScfpKey {
                        lambda,
                        n,
                        parent: p.big_lambda,
                        parent_mult: p.mult,
                        daughter: d.big_lambda,
                        daughter_mult: d.mult,
                    },
                    value,
                );
            }
        }
    }
    Ok(table)
}

static SHARED: Lazy<Mutex<HashMap<u32, Arc<ScfpTable>>>> = Lazy::new(|| Mutex::new(HashMap::new()));

/// Process-wide oracle table for `λ` covering at least `n = 1..=n_max`.
pub fn shared_oracle(lambda: u32, n_max: usize) -> Result<Arc<ScfpTable>> {
    if let Some(t) = SHARED.lock().get(&lambda) {
        if t.max_n(lambda) >= n_max {
            return Ok(Arc::clone(t));
        }
    }
    let table = Arc::new(scfp_oracle(&FockSpace::new(n_max), lambda, n_max)?);
    let mut cache = SHARED.lock();
    let entry = cache.entry(lambda).or_insert_with(|| Arc::clone(&table));
    if entry.max_n(lambda) < n_max {
        *entry = Arc::clone(&table);
    }
    Ok(table)
}

/// `|Σ_{Λ1} √(2Λ1+1) {λ λ Λ′; Λ2 Λ Λ1} (λ^{n−2}(Λ2)λ‖λ^{n−1}Λ1)(λ^{n−1}(Λ1)λ‖λⁿΛ)|`
/// for odd `Λ′`; zero for a consistent table. Multiplicity indices of `Λ2`
/// and `Λ` are taken as 0; intermediate `Λ1` multiplets are all summed.
pub fn scfp_recurrence_residual(
    table: &ScfpTable,
    lambda: u32,
    n: usize,
    odd: u32,
    grandparent: u32,
    daughter: u32,
) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidParameter("recurrence needs n >= 2".into()));
    }
    if odd.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!("Λ′={odd} must be odd")));
    }
    for level in [n - 1, n] {
        if !table.covers(lambda, level) {
            return Err(Error::MissingEntry(format!("level lambda={lambda} n={level}")));
        }
    }
    let mut acc = 0.0;
    for (l1, m1) in table.labels(lambda, n - 1) {
        let six = wigner::six_j_f64(lambda, lambda, odd, grandparent, daughter, l1);
        if six == 0.0 {
            continue;
        }
        let first = table.value(&ScfpKey {
            lambda,
            n: n - 1,
            parent: grandparent,
            parent_mult: 0,
            daughter: l1,
            daughter_mult: m1,
        })?;
        let second = table.value(&ScfpKey {
            lambda,
            n,
            parent: l1,
            parent_mult: m1,
            daughter,
            daughter_mult: 0,
        })?;
        acc += f64::from(2 * l1 + 1).sqrt() * six * first * second;
    }
    Ok(acc.abs())
}

/// `Σ_{Λ′} |(λ^{n−1}(Λ′)λ‖λⁿΛ)|²` for daughter multiplicity `mult`.
pub fn scfp_normalization_mult(table: &ScfpTable, lambda: u32, n: usize, daughter: u32, mult: usize) -> Result<f64> {
    let mut found = false;
    let mut acc = 0.0;
    for (k, v) in table.entries() {
        if k.lambda == lambda && k.n == n && k.daughter == daughter && k.daughter_mult == mult {
            found = true;
            acc += v * v;
        }
    }
    if !found {
        return Err(Error::MissingEntry(format!(
            "no parents for lambda={lambda} n={n} Lambda={daughter}#{mult}"
        )));
    }
    Ok(acc)
}

pub fn scfp_normalization(table: &ScfpTable, lambda: u32, n: usize, daughter: u32) -> Result<f64> {
    scfp_normalization_mult(table, lambda, n, daughter, 0)
}

/// Coefficients `c_ρ(λⁿΛM)` rebuilt from the SCFP table alone by the
/// parent-expansion recursion
/// `c_{ρρ1}(λ^{n+1}ΛM) = Σ_{Λ′M′} c_ρ(λⁿΛ′M′) (λ^{n+1}Λ‖λⁿ(Λ′)λ) ⟨Λ′M′; λρ1|ΛM⟩`.
pub fn coefficients_from_table(table: &ScfpTable, lambda: u32, n: usize) -> Result<BTreeMap<CoeffKey, f64>> {
    let mut level: BTreeMap<CoeffKey, f64> = BTreeMap::new();
    level.insert(
        CoeffKey {
            rho: Vec::new(),
            big_lambda: 0,
            m: 0,
            mult: 0,
        },
        1.0,
    );
    for step in 1..=n {
        let labels = table.labels(lambda, step);
        if labels.is_empty() {
            return Err(Error::MissingEntry(format!("level lambda={lambda} n={step}")));
        }
        let mut next = BTreeMap::new();
        for (key, c) in &level {
            for rho1 in -(lambda as i32)..=(lambda as i32) {
                let mut rho = key.rho.clone();
                rho.push(rho1);
                for &(big, mult) in &labels {
                    let m = key.m + rho1;
                    if m.unsigned_abs() > big {
                        continue;
                    }
                    let s = table.value(&ScfpKey {
                        lambda,
                        n: step,
                        parent: key.big_lambda,
                        parent_mult: key.mult,
                        daughter: big,
                        daughter_mult: mult,
                    })?;
                    let cg = wigner::cg(key.big_lambda, lambda, big, key.m, rho1, m);
                    *next
                        .entry(CoeffKey {
                            rho: rho.clone(),
                            big_lambda: big,
                            m,
                            mult,
                        })
                        .or_insert(0.0) += c * s * cg;
                }
            }
        }
        level = next;
    }
    Ok(level)
}
