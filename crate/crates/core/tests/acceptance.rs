#![allow(clippy::type_complexity)]
//! Acceptance suite. Each criterion prints one `PASS`/`FAIL` line followed by
//! indented detail; the process exits non-zero if any criterion fails.

use std::collections::{BTreeMap, HashMap};
use std::panic::{self, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use angulon::fock::rotor::{coupled_state, vacuum_state, DirectOperator, ProductVector};
use angulon::fock::{coeff_table, inner, CoeffKey, CoupledBasis, FockSpace, FockVector, Mode, OccBasisVector};
use angulon::hamiltonian::{assemble_block, enumerate_channels, Truncation};
use angulon::model::{toy_model, KGrid, MeasureConfig, ModelConfig, ToyParams};
use angulon::scfp::{
    coefficients_from_table, compare_table1, scfp_normalization_mult, scfp_recurrence_residual, shared_oracle,
    Provenance, ScfpTable,
};
use angulon::spectrum::pv::{pv_integrate, pv_integrate_with, PvOptions, PvTerm};
use angulon::spectrum::selfenergy::{sigma1_terms, TwoPhononKernel};
use angulon::spectrum::solvers::{block_spectrum, coordinate_deviation, solve_block, solve_n1, solve_n2_l0};
use angulon::spectrum::sweep::sweep_density;
use angulon::wigner::{clebsch_gordan, six_j, triangle, ExactSum, Surd};

struct Outcome {
    pass: bool,
    lines: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Self {
            pass: true,
            lines: Vec::new(),
        }
    }

    /// Records a named check; `ok = false` fails the criterion.
    fn check(&mut self, ok: bool, what: impl Into<String>) {
        let what = what.into();
        self.lines.push(format!("{} {what}", if ok { "ok  " } else { "FAIL" }));
        self.pass &= ok;
    }

    fn note(&mut self, text: impl Into<String>) {
        self.lines.push(format!("     {}", text.into()));
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_toy(r: &mut ChaCha8Rng) -> ToyParams {
    ToyParams {
        a: r.gen_range(0.3..2.0),
        b: r.gen_range(0.1..1.0),
        u: (0..3).map(|_| r.gen_range(0.2..1.5)).collect(),
        sigma: r.gen_range(1.0..3.0),
    }
}

// ---------------------------------------------------------------- criterion 1

#[derive(Default)]
struct SurdCache {
    cg: HashMap<[i32; 6], Surd>,
    six: HashMap<[u32; 6], Surd>,
}

impl SurdCache {
    fn cg(&mut self, j1: u32, j2: u32, j: u32, m1: i32, m2: i32) -> &Surd {
        let key = [j1 as i32, j2 as i32, j as i32, m1, m2, m1 + m2];
        self.cg
            .entry(key)
            .or_insert_with(|| Surd::from(&clebsch_gordan(j1, j2, j, m1, m2, m1 + m2)))
    }

    fn six(&mut self, j: [u32; 6]) -> &Surd {
        self.six
            .entry(j)
            .or_insert_with(|| Surd::from(&six_j(j[0], j[1], j[2], j[3], j[4], j[5])))
    }
}

fn kronecker(same: bool) -> BigRational {
    if same {
        BigRational::one()
    } else {
        BigRational::zero()
    }
}

fn criterion_1() -> Outcome {
    const JMAX: u32 = 6;
    const SIX_MAX: u32 = 4;
    let start = Instant::now();
    let mut out = Outcome::new();
    let mut cache = SurdCache::default();

    // Σ_{m1} ⟨j1 m1; j2 m−m1|j m⟩⟨j1 m1; j2 m−m1|j′ m⟩ = δ_{jj′}
    let (mut ortho, mut ortho_bad) = (0usize, 0usize);
    for j1 in 0..=JMAX {
        for j2 in 0..=JMAX {
            let js: Vec<u32> = (j1.abs_diff(j2)..=(j1 + j2).min(JMAX)).collect();
            for &j in &js {
                for &jp in &js {
                    let top = j.min(jp) as i32;
                    for m in -top..=top {
                        let mut sum = ExactSum::new();
                        for m1 in -(j1 as i32)..=(j1 as i32) {
                            let m2 = m - m1;
                            if m2.unsigned_abs() > j2 {
                                continue;
                            }
                            let a = cache.cg(j1, j2, j, m1, m2).clone();
                            let b = cache.cg(j1, j2, jp, m1, m2);
                            sum.add_surd(&(&a * b));
                        }
                        ortho += 1;
                        if !sum.equals_rational(&kronecker(j == jp)) {
                            ortho_bad += 1;
                        }
                    }
                }
            }
        }
    }
    out.check(
        ortho_bad == 0,
        format!("CG orthogonality, j1, j2, j, j' <= {JMAX}: {ortho} identities, {ortho_bad} violated"),
    );

    // Σ_{j,m} ⟨j1 m1; j2 m2|j m⟩⟨j1 m1′; j2 m2′|j m⟩ = δ_{m1m1′} δ_{m2m2′}
    let (mut comp, mut comp_bad) = (0usize, 0usize);
    for j1 in 0..=JMAX {
        for j2 in 0..=JMAX {
            for m1 in -(j1 as i32)..=(j1 as i32) {
                for m2 in -(j2 as i32)..=(j2 as i32) {
                    for m1p in -(j1 as i32)..=(j1 as i32) {
                        let m2p = m1 + m2 - m1p;
                        if m2p.unsigned_abs() > j2 {
                            continue;
                        }
                        let mut sum = ExactSum::new();
                        for j in j1.abs_diff(j2)..=j1 + j2 {
                            if (m1 + m2).unsigned_abs() > j {
                                continue;
                            }
                            let a = cache.cg(j1, j2, j, m1, m2).clone();
                            let b = cache.cg(j1, j2, j, m1p, m2p);
                            sum.add_surd(&(&a * b));
                        }
                        comp += 1;
                        if !sum.equals_rational(&kronecker(m1 == m1p)) {
                            comp_bad += 1;
                        }
                    }
                }
            }
        }
    }
    out.check(
        comp_bad == 0,
        format!("CG completeness, j1, j2 <= {JMAX} (all j): {comp} identities, {comp_bad} violated"),
    );

    // Σ_x (2x+1)(2y+1) {a b x; c d y}{a b x; c d y′} = δ_{yy′}
    let (mut six_n, mut six_bad) = (0usize, 0usize);
    for a in 0..=SIX_MAX {
        for b in 0..=SIX_MAX {
            for c in 0..=SIX_MAX {
                for d in 0..=SIX_MAX {
                    let ys: Vec<u32> = (b.abs_diff(c)..=b + c).filter(|&y| triangle(a, d, y)).collect();
                    for &y in &ys {
                        for &yp in &ys {
                            let mut sum = ExactSum::new();
                            for x in a.abs_diff(b)..=a + b {
                                if !triangle(c, d, x) {
                                    continue;
                                }
                                let weight = Surd {
                                    coeff: BigRational::from_integer(((2 * x + 1) * (2 * y + 1)).into()),
                                    root: One::one(),
                                };
                                let s1 = cache.six([a, b, x, c, d, y]).clone();
                                let s2 = cache.six([a, b, x, c, d, yp]).clone();
                                sum.add_surd(&(&(&weight * &s1) * &s2));
                            }
                            six_n += 1;
                            if !sum.equals_rational(&kronecker(y == yp)) {
                                six_bad += 1;
                            }
                        }
                    }
                }
            }
        }
    }
    out.check(
        six_bad == 0,
        format!("6j orthogonality, momenta <= {SIX_MAX}: {six_n} identities, {six_bad} violated"),
    );

    let elapsed = start.elapsed();
    out.check(
        elapsed < Duration::from_secs(30),
        format!("runtime {:.2} s < 30 s", elapsed.as_secs_f64()),
    );
    out
}

// ---------------------------------------------------------------- criterion 2

fn oracle_table(lambdas: &[u32], n_max: usize) -> ScfpTable {
    let mut table = ScfpTable::new(Provenance::Oracle);
    for &lambda in lambdas {
        table.extend(&shared_oracle(lambda, n_max).expect("oracle builds"));
    }
    table
}

fn criterion_2() -> Outcome {
    let mut out = Outcome::new();
    let cmp = compare_table1(&oracle_table(&[1, 2], 3)).expect("published keys present in oracle");
    for (lambda, daughter) in [(2, 3), (2, 4)] {
        let g = cmp.group(lambda, daughter).expect("group present");
        out.check(
            g.self_normalizing() && g.signed_deviation < 1e-10,
            format!(
                "self-normalizing group lambda={lambda} n=3 Lambda={daughter}: max |oracle - sign*table| = {:.3e} (tol 1e-10)",
                g.signed_deviation
            ),
        );
    }
    for (lambda, daughter) in [(1, 1), (2, 2)] {
        let g = cmp.group(lambda, daughter).expect("group present");
        out.check(
            g.ratio_deviation < 1e-9,
            format!(
                "intra-group ratios lambda={lambda} n=3 Lambda={daughter}: max deviation = {:.3e} (tol 1e-9)",
                g.ratio_deviation
            ),
        );
    }
    let report = cmp.to_string();
    out.check(
        report.contains("table1 squares sum to 19/9 instead of 1")
            && report.contains("table1 squares sum to 19/21 instead of 1"),
        "normalization discrepancies 19/9 and 19/21 reported verbatim",
    );
    for line in report.lines() {
        out.note(line);
    }
    out
}

// ---------------------------------------------------------------- criterion 3

fn criterion_3() -> Outcome {
    let mut out = Outcome::new();
    let space = FockSpace::new(3);
    let (mut worst_norm, mut worst_rec, mut worst_ortho, mut worst_recursion) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let mut recurrences = 0usize;
    for lambda in 0..=2u32 {
        let table = shared_oracle(lambda, 3).expect("oracle builds");
        for n in 1..=3usize {
            for (big, mult) in table.labels(lambda, n) {
                let s = scfp_normalization_mult(&table, lambda, n, big, mult).expect("normalization");
                worst_norm = worst_norm.max((s - 1.0).abs());
            }
            if n >= 2 {
                for odd in (1..=2 * lambda).step_by(2) {
                    for (grand, _) in table.labels(lambda, n - 2) {
                        for (daughter, _) in table.labels(lambda, n) {
                            let r = scfp_recurrence_residual(&table, lambda, n, odd, grand, daughter)
                                .expect("recurrence");
                            worst_rec = worst_rec.max(r);
                            recurrences += 1;
                        }
                    }
                }
            }

            let basis = CoupledBasis::build(&space, lambda, n).expect("basis");
            let oracle = coeff_table(&basis);
            let mut grouped: BTreeMap<(u32, i32, usize), Vec<(&Vec<i32>, Complex64)>> = BTreeMap::new();
            for (k, v) in &oracle {
                grouped.entry((k.big_lambda, k.m, k.mult)).or_default().push((&k.rho, *v));
            }
            for (ga, va) in &grouped {
                let lookup: HashMap<&Vec<i32>, Complex64> = va.iter().copied().collect();
                for (gb, vb) in &grouped {
                    if ga.1 != gb.1 {
                        continue;
                    }
                    let s: Complex64 = vb
                        .iter()
                        .map(|(rho, b)| lookup.get(rho).map_or(Complex64::zero(), |a| a.conj() * b))
                        .sum();
                    let expect = if ga == gb { 1.0 } else { 0.0 };
                    worst_ortho = worst_ortho.max((s - expect).norm());
                }
            }

            let rebuilt = coefficients_from_table(&table, lambda, n).expect("recursion");
            let keys: std::collections::BTreeSet<&CoeffKey> = oracle.keys().chain(rebuilt.keys()).collect();
            for key in keys {
                let a = oracle.get(key).copied().unwrap_or_default();
                let b = rebuilt.get(key).copied().unwrap_or(0.0);
                worst_recursion = worst_recursion.max((a - b).norm());
            }
        }
    }
    out.check(
        worst_norm < 1e-10,
        format!("SCFP normalization, lambda <= 2, n <= 3: max |sum - 1| = {worst_norm:.3e} (tol 1e-10)"),
    );
    out.check(
        worst_rec < 1e-10,
        format!("odd-Lambda' recurrence, {recurrences} cases: max residual = {worst_rec:.3e} (tol 1e-10)"),
    );
    out.check(
        worst_ortho < 1e-10,
        format!("coefficient orthonormality: max deviation = {worst_ortho:.3e} (tol 1e-10)"),
    );
    out.check(
        worst_recursion < 1e-10,
        format!("parent-expansion recursion vs oracle coefficients: max deviation = {worst_recursion:.3e} (tol 1e-10)"),
    );
    out
}

// ---------------------------------------------------------------- criterion 4

fn random_vector(r: &mut ChaCha8Rng, states: &[OccBasisVector]) -> FockVector {
    let mut v = FockVector::zero();
    for s in states {
        v.add_term(s.clone(), Complex64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0)));
    }
    v
}

fn distance(a: &FockVector, b: &FockVector) -> f64 {
    let mut d = a.clone();
    d.axpy(Complex64::new(-1.0, 0.0), b);
    inner(&d, &d).re.max(0.0).sqrt()
}

fn criterion_4() -> Outcome {
    const N_MAX: usize = 3;
    let mut out = Outcome::new();
    let space = FockSpace::new(N_MAX);
    let modes = Mode::all(2);
    let states = space.basis_states(&modes);
    let below: Vec<OccBasisVector> = states.iter().filter(|s| s.len() < N_MAX).cloned().collect();
    let mut r = rng(4);
    let (mut ccr, mut cc, mut aa, mut adj, mut num, mut count) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..3 {
        // Commutators are checked on vectors with fewer than n_max particles,
        // where no creation is truncated.
        let v = random_vector(&mut r, &below);
        let u = random_vector(&mut r, &states);
        let w = random_vector(&mut r, &states);
        let scale = inner(&v, &v).re.sqrt();
        for &a in &modes {
            for &b in &modes {
                let lhs = space.annihilate(a, &space.create(b, &v));
                let rhs = space.create(b, &space.annihilate(a, &v));
                let mut comm = lhs.clone();
                comm.axpy(Complex64::new(-1.0, 0.0), &rhs);
                let expect = if a == b { v.clone() } else { FockVector::zero() };
                ccr = ccr.max(distance(&comm, &expect) / scale);
                cc = cc.max(distance(&space.create(a, &space.create(b, &v)), &space.create(b, &space.create(a, &v))) / scale);
                aa = aa.max(
                    distance(&space.annihilate(a, &space.annihilate(b, &u)), &space.annihilate(b, &space.annihilate(a, &u)))
                        / inner(&u, &u).re.sqrt(),
                );
            }
            let lhs = inner(&u, &space.create(a, &w));
            let rhs = inner(&space.annihilate(a, &u), &w);
            adj = adj.max((lhs - rhs).norm() / (1.0 + lhs.norm()));
        }
        let mut sum = FockVector::zero();
        for &a in &modes {
            sum.axpy(Complex64::new(1.0, 0.0), &space.create(a, &space.annihilate(a, &u)));
        }
        num = num.max(distance(&sum, &space.number(&u)) / inner(&u, &u).re.sqrt());
        let mut by_count = FockVector::zero();
        for (occ, amp) in u.terms() {
            by_count.add_term(occ.clone(), amp * occ.len() as f64);
        }
        count = count.max(distance(&space.number(&u), &by_count) / inner(&u, &u).re.sqrt());
    }
    out.note(format!("{} modes (lambda <= 2), {} basis vectors with n <= {N_MAX}", modes.len(), states.len()));
    out.check(ccr < 1e-12, format!("[b*_i, b_j] = delta_ij: max deviation {ccr:.3e} (tol 1e-12)"));
    out.check(cc < 1e-12, format!("[b_i, b_j] = 0: max deviation {cc:.3e} (tol 1e-12)"));
    out.check(aa < 1e-12, format!("[b*_i, b*_j] = 0: max deviation {aa:.3e} (tol 1e-12)"));
    out.check(adj < 1e-12, format!("<u, b_i w> = <b*_i u, w>: max deviation {adj:.3e} (tol 1e-12)"));
    out.check(
        num < 1e-12 && count < 1e-12,
        format!("N = sum_i b_i b*_i and N = particle count: max deviation {:.3e} (tol 1e-12)", num.max(count)),
    );
    out
}

// ---------------------------------------------------------------- criterion 5

fn criterion_5() -> Outcome {
    let mut out = Outcome::new();
    let mut r = rng(5);
    let space = FockSpace::new(2);
    let mut bases: HashMap<(u32, usize), Arc<CoupledBasis>> = HashMap::new();
    let (mut worst, mut asym, mut free, mut entries) = (0.0f64, 0.0f64, 0.0f64, 0usize);
    for _ in 0..3 {
        let model = toy_model(random_toy(&mut r));
        let free_model = model.scaled(0.0);
        for _ in 0..5 {
            let k = r.gen_range(0.2..2.5);
            for l in 0..=2u32 {
                for n in 1..=2usize {
                    for lambda_max in 0..=2u32 {
                        let trunc = Truncation::new(n, lambda_max);
                        let block = assemble_block(l, k, &model, &trunc).expect("block");
                        asym = asym.max(block.max_asymmetry());
                        let op = DirectOperator {
                            c: model.c,
                            omega: model.omega(k),
                            couplings: (0..=lambda_max).map(|lam| model.coupling(lam, k)).collect(),
                            space,
                        };
                        let m_l = l as i32;
                        let states: Vec<ProductVector> = block
                            .channels
                            .iter()
                            .map(|ch| {
                                if ch.is_vacuum() {
                                    vacuum_state(l, m_l)
                                } else {
                                    let basis = bases
                                        .entry((ch.lambda, ch.n))
                                        .or_insert_with(|| CoupledBasis::build(&space, ch.lambda, ch.n).expect("basis"));
                                    coupled_state(ch.j, basis.family(ch.big_lambda, ch.mult).expect("family"), l, m_l)
                                }
                            })
                            .collect();
                        for (i, a) in states.iter().enumerate() {
                            for (j, b) in states.iter().enumerate() {
                                let direct = op.matrix_element(a, b);
                                let dev = (direct.re - block.entries[(i, j)]).abs().max(direct.im.abs());
                                worst = worst.max(dev);
                                entries += 1;
                            }
                        }

                        let spectrum = block_spectrum(&assemble_block(l, k, &free_model, &trunc).expect("block"));
                        let mut expect: Vec<f64> = enumerate_channels(l, &trunc)
                            .expect("channels")
                            .iter()
                            .map(|ch| {
                                if ch.is_vacuum() {
                                    model.c * f64::from(l * (l + 1))
                                } else {
                                    model.c * f64::from(ch.j * (ch.j + 1)) + ch.n as f64 * model.omega(k)
                                }
                            })
                            .collect();
                        expect.sort_by(f64::total_cmp);
                        for (a, b) in spectrum.iter().zip(&expect) {
                            free = free.max((a - b).abs());
                        }
                        if spectrum.len() != expect.len() {
                            free = f64::INFINITY;
                        }
                    }
                }
            }
        }
    }
    out.check(
        worst < 1e-10,
        format!("{entries} block entries vs direct Fock-space bra-ket: max deviation {worst:.3e} (tol 1e-10)"),
    );
    out.check(asym < 1e-12, format!("block symmetry: max |H - H^T| = {asym:.3e} (tol 1e-12)"));
    out.check(free < 1e-10, format!("zero-coupling spectra: max deviation {free:.3e} (tol 1e-10)"));
    out
}

// ---------------------------------------------------------------- criterion 6

fn criterion_6() -> Outcome {
    let mut out = Outcome::new();
    let mut r = rng(6);
    let (mut e1, mut c1, mut e2, mut c2) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let mut cells = 0usize;
    for _ in 0..3 {
        let params = random_toy(&mut r);
        for lambda_max in 1..=2u32 {
            let model = toy_model(ToyParams {
                u: params.u[..=lambda_max as usize].to_vec(),
                ..params.clone()
            });
            let kernel = TwoPhononKernel::from_oracle(lambda_max).expect("kernel");
            for _ in 0..2 {
                let k = r.gen_range(0.3..2.5);
                let grid = KGrid::single(k).expect("grid");
                cells += 1;
                for l in 0..=2u32 {
                    let root = solve_n1(l, &model, &grid).expect("n1 root");
                    let block = solve_block(l, k, &model, &Truncation::new(1, lambda_max)).expect("n1 block");
                    e1 = e1.max((root.energy - block[0].energy).abs());
                    c1 = c1.max(coordinate_deviation(&root.coordinates[0].normalized(l), &block[0]));
                }
                let root = solve_n2_l0(&model, &grid, &kernel, true).expect("n2 root");
                let block = solve_block(0, k, &model, &Truncation::new(2, lambda_max)).expect("n2 block");
                e2 = e2.max((root.energy - block[0].energy).abs());
                c2 = c2.max(coordinate_deviation(&root.coordinates[0].normalized(0), &block[0]));
            }
        }
    }
    out.note(format!("{cells} single-cell grids, L <= 2 for N = 1, L = 0 for N = 2, lambda_max in {{1, 2}}"));
    out.check(e1 < 1e-8, format!("N=1 root vs lowest block eigenvalue: max deviation {e1:.3e} (tol 1e-8)"));
    out.check(c1 < 1e-8, format!("N=1 closed-form coordinates vs eigenvector: {c1:.3e} (tol 1e-8)"));
    out.check(e2 < 1e-8, format!("N=2 root vs lowest block eigenvalue: max deviation {e2:.3e} (tol 1e-8)"));
    out.check(c2 < 1e-8, format!("N=2 closed-form coordinates vs eigenvector: {c2:.3e} (tol 1e-8)"));

    let model = toy_model(random_toy(&mut r));
    let kernel = TwoPhononKernel::from_oracle(2).expect("kernel");
    let mut split = 0.0f64;
    let mut points = 0usize;
    while points < 20 {
        let e = r.gen_range(-6.0..4.0);
        let k = r.gen_range(0.05..3.0);
        let (Ok(s12), Ok(s1), Ok(s2)) = (
            kernel.sigma12(e, k, &model),
            kernel.sigma01(e, k, &model),
            kernel.sigma02(e, k, &model),
        ) else {
            continue;
        };
        split = split.max((s12 - s1 - s2).abs() / s12.abs().max(1.0));
        points += 1;
    }
    out.check(
        split < 1e-12,
        format!("Sigma^(1,2) = Sigma^(1) + Sigma^(2) at {points} random (E, k): max deviation {split:.3e} (tol 1e-12)"),
    );
    out
}

// ---------------------------------------------------------------- criterion 7

fn halving_change(terms: &[PvTerm<'_>], grid: &KGrid) -> (f64, usize) {
    let base = PvOptions::default();
    let half = PvOptions {
        delta_fraction: 0.5 * base.delta_fraction,
        ..base
    };
    let a = pv_integrate_with(terms, grid, &base).expect("pv");
    let b = pv_integrate_with(terms, grid, &half).expect("pv");
    ((a.value - b.value).abs(), a.poles.len())
}

fn criterion_7() -> Outcome {
    let mut out = Outcome::new();
    let centre = 1.7;
    let odd = [PvTerm::new(|_| 1.0, move |k| k - centre)];
    let odd_grid = KGrid::uniform(centre - 1.0, centre + 1.0, 20).expect("grid");
    let v = pv_integrate(&odd, &odd_grid).expect("pv").value;
    out.check(v.abs() < 1e-9, format!("pv int_(a-1)^(a+1) dk/(k-a) = 0: |value| = {v:.3e} (tol 1e-9)"));

    let log = [PvTerm::new(|_| 1.0, |k| k - 1.0)];
    let mut worst = 0.0f64;
    for n in [31, 40, 64] {
        let v = pv_integrate(&log, &KGrid::uniform(0.0, 3.0, n).expect("grid")).expect("pv").value;
        worst = worst.max((v - 2f64.ln()).abs());
    }
    let v = pv_integrate(&log, &KGrid::geometric(1e-3, 3.0, 50).expect("grid")).expect("pv").value;
    worst = worst.max((v - (2f64.ln() - (1.0 - 1e-3f64).ln())).abs());
    out.check(worst < 1e-9, format!("pv int_0^3 dk/(k-1) = ln 2: max error {worst:.3e} (tol 1e-9)"));

    let mut stab: Vec<(String, f64, usize)> = Vec::new();
    let (d, p) = halving_change(&odd, &odd_grid);
    stab.push(("odd benchmark".into(), d, p));
    let (d, p) = halving_change(&log, &KGrid::uniform(0.0, 3.0, 40).expect("grid"));
    stab.push(("ln 2 benchmark".into(), d, p));
    let cosine = [PvTerm::new(|k: f64| k.cos(), |k: f64| k * k - 2.0)];
    let (d, p) = halving_change(&cosine, &KGrid::uniform(0.0, 4.0, 50).expect("grid"));
    stab.push(("cos k/(k^2-2)".into(), d, p));

    let cfg = ModelConfig::default();
    let grid = cfg.grid().expect("grid");
    let kernel = TwoPhononKernel::from_oracle(1).expect("kernel");
    for rho in [-6.5, -6.25] {
        let model = cfg.model_at(rho).expect("model");
        let sol = solve_n2_l0(&model, &grid, &kernel, true).expect("helium n2");
        let terms = kernel.sigma12_terms(sol.energy, &model, true);
        let (d, p) = halving_change(&terms, &grid);
        stab.push((format!("helium Sigma^(1,2) at rho={rho}, E={:.6}", sol.energy), d, p));
        let terms = sigma1_terms(1, sol.energy, &model);
        let (d, p) = halving_change(&terms, &grid);
        stab.push((format!("helium Sigma_1^(1) at rho={rho}, E={:.6}", sol.energy), d, p));
    }
    let with_poles = stab.iter().filter(|s| s.2 > 0).count();
    let worst = stab.iter().map(|s| s.1).fold(0.0, f64::max);
    for (name, d, p) in &stab {
        out.note(format!("{name}: {p} poles, |change| = {d:.3e}"));
    }
    out.check(
        worst < 1e-8 && with_poles > 0,
        format!(
            "halving delta_0 on {} integrands ({with_poles} with poles): max change {worst:.3e} (tol 1e-8)",
            stab.len()
        ),
    );
    out
}

// ---------------------------------------------------------------- criterion 8

fn criterion_8() -> Outcome {
    let mut out = Outcome::new();
    let cfg = ModelConfig::default();
    let start = Instant::now();
    let sweep = sweep_density(&cfg).expect("sweep");
    let elapsed = start.elapsed();
    let rows = &sweep.rows;
    out.check(
        rows.len() >= 20,
        format!(
            "{} logarithmic densities, rho in [{}, {}]",
            rows.len(),
            cfg.n0_log10_min,
            cfg.n0_log10_max
        ),
    );
    out.check(
        elapsed < Duration::from_secs(600),
        format!("sweep wall time {:.1} s < 600 s", elapsed.as_secs_f64()),
    );
    let failed: Vec<_> = rows.iter().filter(|r| !r.ok()).collect();
    out.check(failed.is_empty(), format!("{} rows failed", failed.len()));
    let positive = rows.iter().filter(|r| r.energy.is_nan() || r.energy > 0.0).count();
    out.check(positive == 0, format!("E <= 0 on every row ({positive} violations)"));
    let worst_res = rows.iter().map(|r| r.residual).fold(0.0, f64::max);
    out.check(
        rows.iter().all(|r| r.residual < 1e-8),
        format!("fixed-point residual < 1e-8 on every row (max {worst_res:.3e})"),
    );

    let peak = rows
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.energy.abs().total_cmp(&b.1.energy.abs()))
        .map(|(i, _)| i)
        .unwrap_or(0);
    let descending = rows[..=peak].windows(2).all(|w| w[0].energy.abs() <= w[1].energy.abs());
    // Couplings scale as sqrt(n0), so at low density E/n0 settles to a
    // constant and E vanishes linearly with n0.
    let per_density: Vec<f64> = rows[..3.min(rows.len())]
        .iter()
        .map(|r| r.energy / 10f64.powf(r.rho_tilde))
        .collect();
    let drift = (per_density[0] / per_density[1] - 1.0).abs();
    let previous = (per_density[1] / per_density[2] - 1.0).abs();
    out.check(
        descending && drift < previous,
        format!(
            "E -> 0 as density -> 0: |E| falls monotonically from {:.3e} (rho = {}) to {:.3e} (rho = {}); \
             E/n0 at the lowest densities = {:.6e}, {:.6e}, {:.6e}",
            rows[peak].energy.abs(),
            rows[peak].rho_tilde,
            rows[0].energy.abs(),
            rows[0].rho_tilde,
            per_density[0],
            per_density[1],
            per_density[2]
        ),
    );
    let diff = rows
        .iter()
        .map(|r| (r.energy - r.energy_n1).abs())
        .fold(0.0, f64::max);
    out.check(diff > 1e-10, format!("N=2 curve differs from N=1 curve: max |E2 - E1| = {diff:.3e}"));
    if let Some(kc) = sweep.kcut {
        out.note(format!(
            "k_cut check at rho={}: E(kmax) = {}, E(k_cut={}) = {}",
            kc.rho_tilde, kc.energy_full, kc.kcut, kc.energy_cut
        ));
    }
    for line in sweep.to_csv().lines() {
        out.note(line);
    }
    out
}

// ---------------------------------------------------------------- criterion 9

fn criterion_9() -> Outcome {
    let mut out = Outcome::new();
    let cfg = ModelConfig::default();
    let grid = cfg.grid().expect("grid");
    let flat = MeasureConfig::uniform(grid.clone()).expect("measure");
    let decaying = MeasureConfig::from_density(grid, |k| (-k).exp() + 1e-3).expect("measure");
    out.check(flat.weights != decaying.weights, "the two measures differ");
    let kernel = TwoPhononKernel::from_oracle(1).expect("kernel");
    for rho in [-8.0, -6.5] {
        let model = cfg.model_at(rho).expect("model");
        let a = solve_n2_l0(&model, &flat, &kernel, true).expect("n2");
        let b = solve_n2_l0(&model, &decaying, &kernel, true).expect("n2");
        out.check(a == b, format!("solve_n2_l0 at rho={rho}: identical (E = {})", a.energy));
        for l in 0..=1 {
            let a = solve_n1(l, &model, &flat).expect("n1");
            let b = solve_n1(l, &model, &decaying).expect("n1");
            out.check(a == b, format!("solve_n1 L={l} at rho={rho}: identical (E = {})", a.energy));
        }
    }

    let toy = toy_model(ToyParams::default());
    let g = KGrid::uniform(0.0, 4.0, 60).expect("grid");
    let m1 = MeasureConfig::uniform(g.clone()).expect("measure");
    let m2 = MeasureConfig::from_density(g, |k| 1.0 + k * k).expect("measure");
    let a = solve_n1(1, &toy, &m1).expect("n1");
    let b = solve_n1(1, &toy, &m2).expect("n1");
    out.check(a == b, format!("toy solve_n1 L=1: identical (E = {})", a.energy));
    out
}

// ---------------------------------------------------------------- runner

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("exact angular algebra", criterion_1),
        ("published SCFP table reproduction", criterion_2),
        ("SCFP identities", criterion_3),
        ("operator algebra", criterion_4),
        ("matrix-element oracle", criterion_5),
        ("solver cross-validation", criterion_6),
        ("principal value", criterion_7),
        ("helium density sweep", criterion_8),
        ("measure independence", criterion_9),
    ];
    let mut failures = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Outcome {
                pass: false,
                lines: vec![format!("FAIL panicked: {msg}")],
            }
        });
        println!(
            "criterion {}: {} {name} ({:.2} s)",
            i + 1,
            if outcome.pass { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
        for line in &outcome.lines {
            println!("    {line}");
        }
        if !outcome.pass {
            failures.push(i + 1);
        }
    }
    if failures.is_empty() {
        println!("acceptance: all 9 criteria pass");
    } else {
        println!("acceptance: failing criteria {failures:?}");
        std::process::exit(1);
    }
}
