//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion
//! and exits non-zero if any criterion fails.

mod common;

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::thread::available_parallelism;
use std::time::Instant;

use common::{random_circuit, random_observable, random_theta, RandomSpec};
use lowesa::bench::{bench_table, BenchSpec};
use lowesa::oracle::{dense_simulate, exact_series, DEFAULT_PATH_BUDGET};
use lowesa::{
    backpropagate, backpropagate_with, chebyshev_tail, gen_benchmark, monte_carlo_distance, parseval_distance,
    path_stats, theoretical_bound, theoretical_path_count, BackpropConfig, BenchmarkFamily, CircuitBuilder,
    CliffordGate, LocalPauli, LocalPauliNoise, NoiseSummary, NoisyCircuit, PathCount, PauliString, SurrogateSeries,
};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = (bool, String);
type Criterion = (&'static str, fn() -> Outcome);

fn workers() -> usize {
    available_parallelism().map_or(4, |n| n.get())
}

fn exact(c: &NoisyCircuit, obs: &PauliString) -> SurrogateSeries {
    let cfg = BackpropConfig::new(c.num_rotations()).workers(workers()).path_budget(DEFAULT_PATH_BUDGET);
    backpropagate_with(c, obs, &cfg).expect("exact series").0
}

/// The 50 seeded random circuits shared by criteria 1, 5 and 9.
fn random_cases() -> Vec<(NoisyCircuit, PauliString)> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    (0..50)
        .map(|i| {
            let n = 1 + i % 4;
            let m = rng.random_range(1..=10);
            let spec = RandomSpec { n, m, p_max: 0.3, channels: true, share: 0.2 };
            let c = random_circuit(&mut rng, &spec);
            let obs = random_observable(&mut rng, n);
            (c, obs)
        })
        .collect()
}

fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst = 0.0f64;
    for (c, obs) in random_cases() {
        let s = exact_series(&c, &obs, DEFAULT_PATH_BUDGET).expect("exact series");
        for _ in 0..100 {
            let theta = random_theta(&mut rng, c.num_params());
            let err = (s.evaluate(&theta).unwrap() - dense_simulate(&c, &theta, &obs).unwrap()).abs();
            worst = worst.max(err);
        }
    }
    (worst <= 1e-9, format!("max |series - dense| = {worst:.2e} over 50 circuits x 100 points (tol 1e-9)"))
}

fn bound_fig3() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for p in [0.03, 0.1, 0.3] {
        let mut ratios = Vec::new();
        let mut violations = 0;
        let mut instances = 0;
        let mut terms = 0;
        for seed in 0..4 {
            let c = gen_benchmark(BenchmarkFamily::Fig3, 4, 2, seed, LocalPauliNoise::symmetric(p).unwrap()).unwrap();
            let m = c.num_rotations();
            let noise = NoiseSummary::from_circuit(&c);
            for q in 0..4 {
                for local in [LocalPauli::X, LocalPauli::Y, LocalPauli::Z] {
                    let obs = PauliString::single(4, q, local).unwrap();
                    let f = exact(&c, &obs);
                    instances += 1;
                    terms += f.len();
                    for cutoff in 0..=m {
                        let cfg = BackpropConfig::new(cutoff).workers(workers());
                        let g = backpropagate_with(&c, &obs, &cfg).unwrap().0;
                        let delta = parseval_distance(&f, &g).unwrap();
                        let bound = theoretical_bound(cutoff, &noise).unwrap().tight;
                        if delta > bound * (1.0 + 1e-12) {
                            violations += 1;
                        }
                        if delta > 0.0 {
                            ratios.push(delta / bound);
                        }
                    }
                }
            }
        }
        ratios.sort_by(f64::total_cmp);
        let median = if ratios.is_empty() { 0.0 } else { ratios[ratios.len() / 2] };
        let max = ratios.last().copied().unwrap_or(0.0);
        ok &= violations == 0 && median <= 0.5;
        parts.push(format!(
            "p={p}: {instances} circuit/observable pairs, {terms} terms, violations={violations}, median ratio={median:.3e}, max ratio={max:.3e}"
        ));
    }
    (ok, parts.join("; "))
}

fn dephasing_attenuation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0.0f64;
    let mut terms = 0;
    let mut same_support = true;
    while terms < 20 {
        let spec = RandomSpec { n: 3, m: 8, p_max: 0.0, channels: false, share: 0.0 };
        let c0 = random_circuit(&mut rng, &spec);
        let obs = random_observable(&mut rng, 3);
        let c = c0.clone().with_rotation_noise(LocalPauliNoise::dephasing(0.1).unwrap());
        let d0 = backpropagate(&c0, &obs, 8).unwrap();
        let d = backpropagate(&c, &obs, 8).unwrap();
        same_support &= d0.terms().keys().eq(d.terms().keys());
        for (omega, v0) in d0.iter() {
            let v = d.get(omega).unwrap_or(0.0);
            worst = worst.max((v - 0.8f64.powi(omega.weight() as i32) * v0).abs());
        }
        terms += d0.iter().filter(|(w, _)| w.weight() > 0).count();
    }
    (
        same_support && worst <= 1e-12,
        format!("{terms} non-constant terms, max |d - 0.8^|w| d0| = {worst:.2e} (tol 1e-12), same support: {same_support}"),
    )
}

fn correlated_sandwich() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let obs: PauliString = "+Z".parse().unwrap();
    let mut ok = true;
    let mut worst = 0.0f64;
    for d in [2usize, 3, 5] {
        for p in [0.0, 0.1] {
            let mut b = CircuitBuilder::new(1);
            b.gate(CliffordGate::h(0)).unwrap();
            for _ in 0..d {
                b.rz_named(0, "t", LocalPauliNoise::dephasing(p).unwrap()).unwrap();
            }
            b.gate(CliffordGate::h(0)).unwrap();
            let c = b.build().unwrap();
            ok &= backpropagate(&c, &obs, d - 1).unwrap().is_empty();
            let s = backpropagate(&c, &obs, d).unwrap();
            for _ in 0..50 {
                let t = random_theta(&mut rng, 1);
                let v = s.evaluate(&t).unwrap();
                let closed = (1.0 - 2.0 * p).powi(d as i32) * (d as f64 * t[0]).cos();
                worst = worst.max((v - dense_simulate(&c, &t, &obs).unwrap()).abs()).max((v - closed).abs());
            }
        }
    }
    ok &= worst <= 1e-9;
    (ok, format!("cutoff d-1 empty: {ok}; max error at cutoff d = {worst:.2e} (tol 1e-9)"))
}

fn path_law() -> Outcome {
    let mut cases = random_cases();
    for seed in 0..3 {
        let c = gen_benchmark(BenchmarkFamily::Fig3, 3, 1, seed, LocalPauliNoise::symmetric(0.05).unwrap()).unwrap();
        cases.push((c, PauliString::single(3, 1, LocalPauli::Z).unwrap()));
    }
    let mut failures = Vec::new();
    let mut saturation = Vec::new();
    for (i, (c, obs)) in cases.iter().enumerate() {
        let m = c.num_rotations();
        let runs: Vec<_> = (0..=m)
            .map(|l| backpropagate_with(c, obs, &BackpropConfig::new(l)).unwrap())
            .collect();
        for (l, (_, st)) in runs.iter().enumerate() {
            let within_theory = match theoretical_path_count(m, l) {
                PathCount::Exact(t) => (st.explored as u128) <= t,
                PathCount::Saturated => true,
            };
            let doubling = l == 0 || st.explored <= 2 * runs[l - 1].1.explored;
            if st.explored > 1 << l || !within_theory || !doubling {
                failures.push(format!("case {i} cutoff {l}: explored {}", st.explored));
            }
        }
        let full = runs[m].0.terms();
        let star = runs.iter().position(|(s, _)| s.terms() == full).unwrap();
        if runs[star..].iter().any(|(s, _)| s.terms() != full) {
            failures.push(format!("case {i}: series changes after saturation cutoff {star}"));
        }
        saturation.push(star);
    }
    let detail = format!(
        "{} circuits, saturation cutoffs {:?}{}",
        cases.len(),
        histogram(&saturation),
        if failures.is_empty() { String::new() } else { format!("; failures: {}", failures.join(", ")) }
    );
    (failures.is_empty(), detail)
}

fn histogram(values: &[usize]) -> BTreeMap<usize, usize> {
    let mut h = BTreeMap::new();
    for &v in values {
        *h.entry(v).or_insert(0) += 1;
    }
    h
}

fn parseval_vs_monte_carlo() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut agree = 0;
    let mut parts = Vec::new();
    let mut case = 0;
    while case < 10 {
        let spec = RandomSpec { n: 1 + case % 3, m: rng.random_range(2..=6), p_max: 0.3, channels: true, share: 0.0 };
        let c = random_circuit(&mut rng, &spec);
        let obs = random_observable(&mut rng, spec.n);
        let f = exact(&c, &obs);
        let top = f.iter().map(|(w, _)| w.weight()).max().unwrap_or(0);
        if top == 0 {
            continue;
        }
        let cutoff = rng.random_range(0..top);
        let g = backpropagate(&c, &obs, cutoff).unwrap();
        let exact_delta = parseval_distance(&f, &g).unwrap();
        let mc = monte_carlo_distance(
            |t: &[f64]| f.evaluate(t).unwrap(),
            |t: &[f64]| g.evaluate(t).unwrap(),
            c.num_params(),
            10_000,
            case as u64,
        )
        .unwrap();
        let z = (mc.estimate - exact_delta).abs() / mc.std_error;
        if z <= 3.0 {
            agree += 1;
        }
        parts.push(format!("{z:.2}"));
        case += 1;
    }
    (agree >= 9, format!("{agree}/10 within 3 SE; |MC - Parseval| / SE = [{}]", parts.join(", ")))
}

fn fixed_angle_tail() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let spec = RandomSpec { n: 3, m: 12, p_max: 0.0, channels: false, share: 0.0 };
    // draw until the tail beyond the largest cutoff tested depends on the fixed angles
    let (c, obs, f, fixed_slots) = loop {
        let c = random_circuit(&mut rng, &spec).with_rotation_noise(LocalPauliNoise::dephasing(0.1).unwrap());
        let obs = random_observable(&mut rng, 3);
        let fixed_slots = sample(&mut rng, 12, 6).into_vec();
        let f = exact(&c, &obs);
        let slots = c.slot_map();
        let touches_fixed = |w: &lowesa::FrequencyVector| {
            w.entries().iter().any(|&(i, _)| fixed_slots.contains(&slots[i as usize]))
        };
        if f.iter().filter(|(w, _)| w.weight() > 4 && touches_fixed(w)).count() >= 8 {
            break (c, obs, f, fixed_slots);
        }
    };
    let noise = NoiseSummary::from_circuit(&c);
    let mut ok = true;
    let mut parts = vec![format!("{} terms in full series", f.len())];
    for cutoff in [2usize, 4] {
        let g = backpropagate(&c, &obs, cutoff).unwrap();
        let deltas: Vec<f64> = (0..200)
            .map(|_| {
                let fixed: Vec<(usize, f64)> = fixed_slots.iter().map(|&s| (s, random_theta(&mut rng, 1)[0])).collect();
                let ft = f.bind_fixed(&fixed).unwrap();
                let gt = g.bind_fixed(&fixed).unwrap();
                parseval_distance(&ft, &gt).unwrap()
            })
            .collect();
        let max = deltas.iter().cloned().fold(0.0, f64::max);
        let min = deltas.iter().cloned().fold(f64::INFINITY, f64::min);
        for k in [2.0, 3.0] {
            let (threshold, prob) = chebyshev_tail(k, cutoff, &noise).unwrap();
            let frac = deltas.iter().filter(|&&d| d >= threshold).count() as f64 / deltas.len() as f64;
            ok &= frac <= prob + 0.05;
            parts.push(format!("l={cutoff} k={k}: frac={frac:.3} <= {:.3}", prob + 0.05));
        }
        let mean = deltas.iter().sum::<f64>() / deltas.len() as f64;
        parts.push(format!("l={cutoff} delta min/mean/max={min:.3e}/{mean:.3e}/{max:.3e}"));
    }
    (ok, parts.join("; "))
}

fn scaling() -> Outcome {
    let mut spec = BenchSpec::new(BenchmarkFamily::Fig2, vec![4, 9, 16], vec![8]);
    spec.layers = 6;
    spec.circuits = 100;
    spec.repetitions = 7;
    spec.noise = LocalPauliNoise::symmetric(0.01).unwrap();
    let start = Instant::now();
    let rows = bench_table(&spec).unwrap();
    let mut ok = true;
    let mut parts: Vec<String> = rows
        .iter()
        .map(|r| format!("n={} m={} paths={} t={:.3e}s", r.n, r.m, r.paths, r.wall.as_secs_f64()))
        .collect();
    for w in rows.windows(2) {
        let time_ratio = w[1].wall.as_secs_f64() / w[0].wall.as_secs_f64();
        let m_ratio = w[1].m as f64 / w[0].m as f64;
        let rel = time_ratio / m_ratio;
        ok &= (1.0 / 3.0..=3.0).contains(&rel);
        parts.push(format!("time/m ratio {}->{}: {rel:.2}", w[0].n, w[1].n));
    }

    let mut worst_growth = 0.0f64;
    for seed in 0..10 {
        let c = gen_benchmark(BenchmarkFamily::Fig2, 9, 6, seed, spec.noise).unwrap();
        let obs = lowesa::bench::bench_observable(9);
        let mut prev = path_stats(&c, &obs, 0).unwrap().explored;
        for cutoff in 1..=12 {
            let cur = path_stats(&c, &obs, cutoff).unwrap().explored;
            worst_growth = worst_growth.max(cur as f64 / prev as f64);
            prev = cur;
        }
    }
    ok &= worst_growth <= 2.0;
    parts.push(format!("n=9 max paths(l+1)/paths(l) = {worst_growth:.3}"));
    parts.push(format!("elapsed {:.1}s", start.elapsed().as_secs_f64()));
    (ok, parts.join("; "))
}

fn determinism() -> Outcome {
    let mut mismatches = 0;
    for (c, obs) in random_cases() {
        for cutoff in [c.num_rotations() / 2, c.num_rotations()] {
            let text = |w: usize| backpropagate_with(&c, &obs, &BackpropConfig::new(cutoff).workers(w)).unwrap().0.to_text();
            let one = text(1);
            if text(2) != one || text(8) != one {
                mismatches += 1;
            }
        }
    }
    (mismatches == 0, format!("{mismatches} mismatches across 50 circuits x 2 cutoffs x workers {{1, 2, 8}}"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("oracle equivalence", oracle_equivalence),
        ("truncation bound, fig3 family", bound_fig3),
        ("dephasing attenuation", dephasing_attenuation),
        ("correlated angle sandwich", correlated_sandwich),
        ("path-count law", path_law),
        ("Parseval vs Monte-Carlo", parseval_vs_monte_carlo),
        ("fixed-angle tail bound", fixed_angle_tail),
        ("scaling sanity", scaling),
        ("determinism under parallelism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (pass, detail) = run();
        failed += usize::from(!pass);
        println!(
            "criterion {} [{name}]: {} ({:.1}s) {detail}",
            i + 1,
            if pass { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {}/9 criteria passed", 9 - failed);
    if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
