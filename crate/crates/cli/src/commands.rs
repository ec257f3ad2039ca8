use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{anyhow, Context};
use rayon::prelude::*;

use angulon::fock::FockSpace;
use angulon::hamiltonian::{assemble_block, Truncation};
use angulon::model::{AngulonModel, ModelConfig};
use angulon::numfmt::sig15;
use angulon::scfp::{compare_table1, scfp_oracle};
use angulon::spectrum::selfenergy::{sigma1, TwoPhononKernel};
use angulon::spectrum::solvers::{block_spectrum, solve_n1, solve_n2_l0, FixedPointSolution};
use angulon::spectrum::sweep::sweep_density;

use crate::{CliError, GlobalArgs};

type CmdResult = Result<(), CliError>;

fn load_config(g: &GlobalArgs) -> Result<ModelConfig, CliError> {
    let mut cfg = match &g.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
            ModelConfig::parse(&text)?
        }
        None => ModelConfig::default(),
    };
    for item in &g.overrides {
        let (key, value) = item
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("--set expects KEY=VALUE, got '{item}'")))?;
        cfg.set(key.trim(), value.trim())?;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text)
            .with_context(|| format!("writing {}", path.display()))
            .map_err(CliError::from),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn model_for(cfg: &ModelConfig) -> Result<AngulonModel, CliError> {
    Ok(cfg.model_at(cfg.n0_log10)?)
}

fn quoted(label: impl std::fmt::Display) -> String {
    format!("\"{label}\"")
}

pub fn scfp(g: &GlobalArgs, lambda: u32) -> CmdResult {
    let n_max = g.n.unwrap_or(3);
    if n_max == 0 {
        return Err(CliError::Usage("--n must be at least 1".into()));
    }
    let table = scfp_oracle(&FockSpace::new(n_max), lambda, n_max)?;
    emit(g.out.as_deref(), &table.to_csv())?;

    let cmp = compare_table1(&table)?;
    let mut report = format!("published SCFP comparison for lambda={lambda}, n<={n_max}\n");
    if cmp.groups.is_empty() {
        report.push_str("no published rows at these labels\n");
    } else {
        report.push_str(&cmp.to_string());
    }
    let _ = writeln!(report, "M=Lambda vs M=0 overlap check: {}", sig15(table.m_check_deviation));
    match &g.out {
        Some(path) => {
            let mut side = path.clone().into_os_string();
            side.push(".table1.txt");
            let side = PathBuf::from(side);
            fs::write(&side, &report).with_context(|| format!("writing {}", side.display()))?;
            eprint!("{report}");
        }
        None => eprint!("{report}"),
    }
    Ok(())
}

pub fn block(g: &GlobalArgs, ks: &[f64], matrix: bool) -> CmdResult {
    let cfg = load_config(g)?;
    let model = model_for(&cfg)?;
    let l = g.l.unwrap_or(0);
    let n = g.n.unwrap_or(1);
    if n == 0 {
        return Err(CliError::Usage("--n must be at least 1".into()));
    }
    let trunc = Truncation::new(n, g.lmax.unwrap_or(model.lambda_max()));
    if let Some(bad) = ks.iter().find(|k| !(k.is_finite() && **k >= 0.0)) {
        return Err(CliError::Usage(format!("--k values must be finite and non-negative, got {bad}")));
    }

    if matrix {
        let [k] = ks else {
            return Err(CliError::Usage("--matrix needs exactly one --k".into()));
        };
        let b = assemble_block(l, *k, &model, &trunc)?;
        if g.verbose {
            eprint!("{}", b.manifest());
        }
        return emit(g.out.as_deref(), &b.to_csv());
    }

    let points: Vec<f64> = if ks.is_empty() {
        cfg.grid()?.points().to_vec()
    } else {
        ks.to_vec()
    };
    let start = Instant::now();
    let spectra = points
        .par_iter()
        .map(|&k| assemble_block(l, k, &model, &trunc).map(|b| (k, block_spectrum(&b))))
        .collect::<Result<Vec<_>, _>>()?;
    let mut csv = String::from("k,index,eigenvalue\n");
    for (k, ev) in &spectra {
        for (i, e) in ev.iter().enumerate() {
            let _ = writeln!(csv, "{},{i},{}", sig15(*k), sig15(e / model.c));
        }
    }
    if g.verbose {
        eprintln!(
            "{} blocks (L={l}, N={n}, lambda_max={}) in {:.2} s",
            spectra.len(),
            trunc.lambda_max,
            start.elapsed().as_secs_f64()
        );
    }
    emit(g.out.as_deref(), &csv)
}

fn coordinates_csv(sol: &FixedPointSolution) -> String {
    let mut csv = String::from("k,channel,amplitude\n");
    for kc in &sol.coordinates {
        for (label, a) in kc.normalized(sol.l) {
            let _ = writeln!(csv, "{},{},{}", sig15(kc.k), quoted(label), sig15(a));
        }
    }
    csv
}

pub fn solve(g: &GlobalArgs, trace: Option<&Path>, with_epsilon: bool) -> CmdResult {
    let cfg = load_config(g)?;
    let model = model_for(&cfg)?;
    let grid = cfg.grid()?;
    let n = g.n.unwrap_or(2);
    let l = g.l.unwrap_or(0);
    let kernel = TwoPhononKernel::from_oracle(model.lambda_max())?;
    let start = Instant::now();
    let sol = match (n, l) {
        (1, _) => solve_n1(l, &model, &grid)?,
        (2, 0) => solve_n2_l0(&model, &grid, &kernel, with_epsilon)?,
        (2, _) => return Err(CliError::Usage("the N=2 closure is implemented for L=0 only".into())),
        _ => return Err(CliError::Usage(format!("--n must be 1 or 2 for solve, got {n}"))),
    };
    if g.verbose {
        eprintln!("solved in {:.2} s", start.elapsed().as_secs_f64());
    }
    println!("N={n} L={l} rho_tilde={}", sig15(cfg.n0_log10));
    println!("E/c = {}", sig15(sol.energy / model.c));
    println!("residual = {}", sig15(sol.residual));
    println!("poles = {}", sol.poles.len());
    println!("status = {}", if sol.at_bound { "bound" } else { "root" });
    if let Some(path) = &g.out {
        emit(Some(path), &coordinates_csv(&sol))?;
    }
    if let Some(path) = trace {
        let mut csv = String::from("k,E,sigma\n");
        for &k in grid.points() {
            let sigma = match n {
                1 => sigma1(l, sol.energy, k, &model),
                _ if with_epsilon => kernel.sigma12(sol.energy, k, &model),
                _ => kernel.sigma01(sol.energy, k, &model),
            };
            let value = sigma.map_or_else(|_| "nan".to_string(), sig15);
            let _ = writeln!(csv, "{},{},{value}", sig15(k), sig15(sol.energy / model.c));
        }
        emit(Some(path), &csv)?;
    }
    Ok(())
}

pub fn sweep(g: &GlobalArgs) -> CmdResult {
    let cfg = load_config(g)?;
    let start = Instant::now();
    let result = sweep_density(&cfg)?;
    emit(g.out.as_deref(), &result.to_csv())?;
    if g.verbose {
        eprintln!("{} densities in {:.2} s", result.rows.len(), start.elapsed().as_secs_f64());
    }
    match result.kcut {
        Some(kc) => eprintln!(
            "k_cut check at rho_tilde={}: E/c = {} with kmax={}, {} with k_cut={} (change {})",
            sig15(kc.rho_tilde),
            sig15(kc.energy_full),
            sig15(cfg.grid_kmax),
            sig15(kc.energy_cut),
            sig15(kc.kcut),
            sig15((kc.energy_cut - kc.energy_full).abs())
        ),
        None => eprintln!("k_cut check unavailable: middle density row failed or the cut grid is too short"),
    }
    for row in result.rows.iter().filter(|r| !r.ok()) {
        eprintln!(
            "row rho_tilde={} failed: {}",
            sig15(row.rho_tilde),
            row.error.as_deref().unwrap_or_default()
        );
    }
    let fraction = result.success_fraction();
    if fraction < 0.9 {
        return Err(CliError::Numerical(anyhow!(
            "only {:.0}% of density rows succeeded (need 90%)",
            100.0 * fraction
        )));
    }
    Ok(())
}

pub fn model_dump(g: &GlobalArgs) -> CmdResult {
    let cfg = load_config(g)?;
    let model = model_for(&cfg)?;
    let grid = cfg.grid()?;
    let report = model.audit(&grid)?;
    let mut csv = String::from("k,omega,U0,U1\n");
    for &k in grid.points() {
        let _ = writeln!(
            csv,
            "{},{},{},{}",
            sig15(k),
            sig15(model.omega(k)),
            sig15(model.coupling(0, k)),
            sig15(model.coupling(1, k))
        );
    }
    if g.verbose {
        eprintln!(
            "max omega = {}, max coupling norm = {}",
            sig15(report.max_omega),
            sig15(report.max_coupling_norm)
        );
    }
    emit(g.out.as_deref(), &csv)
}
