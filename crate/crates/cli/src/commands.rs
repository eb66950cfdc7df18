use std::fs;
use std::path::Path;
use std::time::Instant;

use lowesa::bench::{bench_table, BenchRow, BenchSpec};
use lowesa::{
    backpropagate_with, chebyshev_tail, dense_simulate, gen_benchmark, monte_carlo_distance, parseval_distance,
    theoretical_bound, theoretical_path_count, BackpropConfig, BenchmarkFamily, Error, LocalPauliNoise,
    NoiseSummary, NoisyCircuit, PathStats, SurrogateSeries,
};

use crate::input::{self, Observable};
use crate::{CliError, Command};

type CmdResult = Result<(), CliError>;

pub fn dispatch(cmd: Command) -> CmdResult {
    match cmd {
        Command::Run { circuit, obs, cutoff, workers, budget, output } => {
            let c = load_circuit(&circuit)?;
            let obs = input::observable(obs.obs.as_deref(), obs.obs_file.as_deref())?;
            run(&c, &obs, cutoff, workers, budget, output.as_deref())
        }
        Command::Eval { series, theta, slots, fix } => {
            let s: SurrogateSeries = input::read(&series)?.parse()?;
            let theta = input::theta(theta.theta.as_deref(), theta.theta_file.as_deref())?;
            let slots = slots.as_deref().map(input::indices).transpose()?;
            let fix = fix.as_deref().map(input::fixed).transpose()?;
            println!("{}", eval(&s, &theta, slots, fix.as_deref())?);
            Ok(())
        }
        Command::Oracle { circuit, obs, theta } => {
            let c = load_circuit(&circuit)?;
            let obs = input::observable(obs.obs.as_deref(), obs.obs_file.as_deref())?;
            let theta = input::theta(theta.theta.as_deref(), theta.theta_file.as_deref())?;
            println!("{}", dense(&c, &obs, &theta)?);
            Ok(())
        }
        Command::Compare { circuit, obs, cutoff, samples, seed, workers, budget } => {
            let c = load_circuit(&circuit)?;
            let obs = input::observable(obs.obs.as_deref(), obs.obs_file.as_deref())?;
            compare(&c, &obs, cutoff, samples, seed, workers, budget)
        }
        Command::Bound { circuit, p, pz, m, eta, cutoff, k } => {
            let (noise, m) = match circuit {
                Some(path) => {
                    let c = load_circuit(&path)?;
                    (NoiseSummary::from_circuit(&c), Some(c.num_rotations()))
                }
                None => match (p, pz) {
                    (Some(p), Some(pz)) => (NoiseSummary::new(p, pz), m),
                    _ => return Err(CliError::input("give --circuit, or both --p and --pz".into())),
                },
            };
            bound(&noise.with_eta(eta), m, cutoff, k)
        }
        Command::Bench { family, qubits, cutoffs, layers, circuits, repetitions, seed, p } => {
            let mut spec = BenchSpec::new(parse_family(&family)?, input::list(&qubits)?, input::list(&cutoffs)?);
            spec.layers = layers;
            spec.circuits = circuits;
            spec.repetitions = repetitions;
            spec.seed = seed;
            spec.noise = LocalPauliNoise::symmetric(p)?;
            println!("{}", BenchRow::HEADER);
            for row in bench_table(&spec)? {
                println!("{}", row.to_tsv());
            }
            Ok(())
        }
        Command::Gen { family, qubits, layers, seed, p, output } => {
            let c = gen_benchmark(parse_family(&family)?, qubits, layers, seed, LocalPauliNoise::symmetric(p)?)?;
            emit(&c.to_text(), output.as_deref())
        }
    }
}

fn parse_family(s: &str) -> Result<BenchmarkFamily, CliError> {
    s.parse().map_err(|e: Error| CliError::input(e.to_string()))
}

fn load_circuit(path: &Path) -> Result<NoisyCircuit, CliError> {
    let c: NoisyCircuit = input::read(path)?.parse()?;
    for w in c.validate()?.warnings {
        eprintln!("warning: {w}");
    }
    Ok(c)
}

fn emit(text: &str, output: Option<&Path>) -> CmdResult {
    match output {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn check_obs(c: &NoisyCircuit, obs: &Observable) -> CmdResult {
    for (_, p) in &obs.terms {
        if p.num_qubits() != c.num_qubits() {
            return Err(Error::DimensionMismatch { expected: c.num_qubits(), got: p.num_qubits() }.into());
        }
    }
    Ok(())
}

/// One engine run per Pauli term, merged with the term weights.
fn backprop_sum(c: &NoisyCircuit, obs: &Observable, cfg: &BackpropConfig) -> Result<(SurrogateSeries, PathStats), CliError> {
    check_obs(c, obs)?;
    let mut total: Option<(SurrogateSeries, PathStats)> = None;
    let budget = cfg.path_budget;
    let mut cfg = *cfg;
    for (w, p) in &obs.terms {
        let (s, st) = backpropagate_with(c, p, &cfg).map_err(|e| match (e, budget) {
            (Error::BudgetExceeded { .. }, Some(budget)) => Error::BudgetExceeded { budget },
            (e, _) => e,
        })?;
        if let Some(b) = cfg.path_budget {
            cfg.path_budget = Some(b - st.explored);
        }
        total = Some(match total {
            None if *w == 1.0 => (s, st),
            None => {
                let mut acc = SurrogateSeries::empty(s.meta().clone())?;
                acc.add_scaled(&s, *w)?;
                (acc, st)
            }
            Some((mut acc, mut sum)) => {
                acc.add_scaled(&s, *w)?;
                sum.explored += st.explored;
                sum.surviving += st.surviving;
                (acc, sum)
            }
        });
    }
    let (mut series, stats) = total.expect("observable has at least one term");
    series.set_observable(obs.describe());
    Ok((series, stats))
}

fn run(c: &NoisyCircuit, obs: &Observable, cutoff: usize, workers: usize, budget: Option<u64>, output: Option<&Path>) -> CmdResult {
    let mut cfg = BackpropConfig::new(cutoff).workers(workers);
    if let Some(b) = budget {
        cfg = cfg.path_budget(b);
    }
    let start = Instant::now();
    let (series, stats) = backprop_sum(c, obs, &cfg)?;
    let wall = start.elapsed().as_secs_f64();
    emit(&series.to_text(), output)?;
    let line = format!(
        "STATS n={} m={} cutoff={cutoff} workers={workers} explored={} surviving={} terms={} theoretical={} wall_s={wall:.6}",
        c.num_qubits(),
        c.num_rotations(),
        stats.explored,
        stats.surviving,
        series.len(),
        stats.theoretical,
    );
    if output.is_some() {
        println!("{line}");
    } else {
        eprintln!("{line}");
    }
    Ok(())
}

fn eval(s: &SurrogateSeries, theta: &[f64], slots: Option<Vec<usize>>, fix: Option<&[(usize, f64)]>) -> Result<f64, CliError> {
    let mut s = match slots {
        Some(map) => s.with_slot_map(map)?,
        None => s.clone(),
    };
    if let Some(fixed) = fix {
        s = s.bind_fixed(fixed)?;
    }
    Ok(s.evaluate(theta)?)
}

fn dense(c: &NoisyCircuit, obs: &Observable, theta: &[f64]) -> Result<f64, CliError> {
    check_obs(c, obs)?;
    obs.terms
        .iter()
        .map(|(w, p)| Ok(w * dense_simulate(c, theta, p)?))
        .sum()
}

fn compare(c: &NoisyCircuit, obs: &Observable, cutoff: usize, samples: usize, seed: u64, workers: usize, budget: u64) -> CmdResult {
    let (g, _) = backprop_sum(c, obs, &BackpropConfig::new(cutoff).workers(workers))?;
    let full = BackpropConfig::new(c.num_rotations()).workers(workers).path_budget(budget);
    let f = match backprop_sum(c, obs, &full) {
        Ok((f, _)) => Some(f),
        Err(e) if e.code == CliError::BUDGET => {
            eprintln!("notice: untruncated series exceeds the path budget; using dense simulation");
            None
        }
        Err(e) => return Err(e),
    };

    let dims = c.num_params();
    let eval_g = |t: &[f64]| g.evaluate(t).expect("dimensions checked");
    let mc = match &f {
        Some(f) => monte_carlo_distance(|t: &[f64]| f.evaluate(t).expect("dimensions checked"), eval_g, dims, samples, seed)?,
        None => {
            dense(c, obs, &vec![0.0; dims])?;
            monte_carlo_distance(|t: &[f64]| dense(c, obs, t).expect("dimensions checked"), eval_g, dims, samples, seed)?
        }
    };
    println!("mc_distance={:.6e} mc_std_error={:.6e} samples={samples} seed={seed}", mc.estimate, mc.std_error);

    let parseval = match (&f, c.is_injective()) {
        (Some(f), true) => {
            let d = parseval_distance(f, &g)?;
            println!("parseval_distance={d:.6e}");
            Some(d)
        }
        (None, _) => {
            println!("parseval_distance=omitted (untruncated series not tractable)");
            None
        }
        (_, false) => {
            println!("parseval_distance=omitted (non-injective parameter map)");
            None
        }
    };

    let bound = match theoretical_bound(cutoff, &NoiseSummary::from_circuit(c)) {
        Ok(b) => {
            let scale = obs.weight_norm();
            println!("bound_tight={:.6e} bound_exponential={:.6e}", scale * b.tight, scale * b.exponential);
            Some(scale * b.tight)
        }
        Err(Error::BoundVacuous) => {
            println!("bound=vacuous (noiseless rotations)");
            None
        }
        Err(e) => return Err(e.into()),
    };

    match (bound, c.is_injective()) {
        (Some(b), true) => {
            if mc.estimate > b + 3.0 * mc.std_error {
                return Err(CliError::comparison(format!(
                    "Monte-Carlo distance {:.6e} exceeds bound {b:.6e} + 3 sigma",
                    mc.estimate
                )));
            }
            if let Some(d) = parseval.filter(|&d| d > b * (1.0 + 1e-12)) {
                return Err(CliError::comparison(format!("Parseval distance {d:.6e} exceeds bound {b:.6e}")));
            }
            println!("check=pass");
        }
        _ => println!("check=skipped (bound requires independent parameters and rotation noise)"),
    }
    Ok(())
}

fn bound(noise: &NoiseSummary, m: Option<usize>, cutoff: usize, k: f64) -> CmdResult {
    let b = theoretical_bound(cutoff, noise)?;
    println!("p={} pz={} eta={} cutoff={cutoff}", noise.p, noise.pz, noise.eta);
    println!("bound_tight={:.6e}", b.tight);
    println!("bound_exponential={:.6e}", b.exponential);
    let (threshold, prob) = chebyshev_tail(k, cutoff, noise)?;
    println!("fixed_angle_threshold={threshold:.6e} k={k} probability<={prob:.6e}");
    println!("max_explored_paths={}", 1u128.checked_shl(cutoff as u32).map_or("saturated".to_string(), |v| v.to_string()));
    if let Some(m) = m {
        println!("theoretical_paths={}", theoretical_path_count(m, cutoff));
    }
    Ok(())
}
