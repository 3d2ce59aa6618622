//! Acceptance criteria. Runs every criterion in order, prints one
//! PASS/FAIL line each and exits non-zero if any fails.

use std::collections::HashSet;
use std::process::Command;
use std::time::{Duration, Instant};

use ame_core::analysis::{
    count_mixed_marginals, is_ame, p_eigenvalues, parity_exclusion, scott_rains_bound,
};
use ame_core::bits::k_subsets;
use ame_core::named::named_graph;
use ame_core::search::{enumerate_graphs, find_ame_graph, lc_orbit, search_best, Prefilter, SearchConfig};
use ame_core::state::mask_to_qubits;
use ame_core::{Graph, PauliOperator};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::Value;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn ame_cli(args: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_ame"))
        .args(args)
        .arg("--json")
        .output()
        .expect("run ame binary");
    let json = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap_or(-1), json)
}

// 1
fn exclusion_theorem() -> Outcome {
    let (code, report) = ame_cli(&["exclude", "--range", "2..32"]);
    ensure(code == 0, format!("exit code {code}"))?;
    let survivors: Vec<u64> = report["not_excluded"]
        .as_array()
        .ok_or("missing not_excluded")?
        .iter()
        .filter_map(Value::as_u64)
        .collect();
    ensure(survivors == [2, 3, 5, 6], format!("not excluded: {survivors:?}"))?;
    let lib: Vec<usize> = (2..=32)
        .filter(|&n| !parity_exclusion(n).unwrap().excluded)
        .collect();
    ensure(lib == [2, 3, 5, 6], format!("library: {lib:?}"))?;
    Ok(format!("not excluded {survivors:?}"))
}

// 2
fn observation2_transcript() -> Outcome {
    let v = parity_exclusion(7).map_err(|e| e.to_string())?;
    ensure(v.excluded, "n = 7 not excluded")?;
    ensure((v.lhs, v.rhs) == (20, 12), format!("lhs {} rhs {}", v.lhs, v.rhs))?;
    // 2·5·λ4·λ5 and 6·λ5 with λ4 = 1, λ5 = 2
    let (l4, l5) = (v.eigenvalues_used[&4], v.eigenvalues_used[&5]);
    ensure(2 * 5 * l4 + 5 * l4 * l5 == 20 && 6 * l5 == 12, "trace terms")?;
    let (_, report) = ame_cli(&["exclude", "--n", "7"]);
    let cli = &report["verdicts"][0];
    ensure(cli["lhs"] == 20 && cli["rhs"] == 12, format!("cli verdict {cli}"))?;
    Ok(format!("lhs {} vs rhs {}", v.lhs, v.rhs))
}

// 3
fn eigenvalue_fixtures() -> Outcome {
    for n in 4..=32usize {
        let h = n / 2;
        let l = p_eigenvalues(n, h + 2).map_err(|e| e.to_string())?;
        let want = if n % 2 == 0 {
            (3, 9 - 3 * h as i128)
        } else {
            (1, 5 - h as i128)
        };
        ensure((l[&(h + 1)], l[&(h + 2)]) == want, format!("n = {n}: {l:?}"))?;
    }
    let l7 = p_eigenvalues(7, 5).map_err(|e| e.to_string())?;
    ensure((l7[&4], l7[&5]) == (1, 2), "n = 7")?;
    let l11: Vec<i128> = p_eigenvalues(11, 9).map_err(|e| e.to_string())?.into_values().collect();
    ensure(l11 == [1, 0, 3, 16], format!("n = 11: {l11:?}"))?;
    Ok("3, 9-3h, 1, 5-h for n = 4..32; n = 11 gives (1, 0, 3, 16)".into())
}

// 4
fn ame_fixtures() -> Outcome {
    for name in ["bell", "triangle", "ring5", "ame6"] {
        let psi = named_graph(name).unwrap().graph_state_vector().unwrap();
        ensure(is_ame(&psi, 1e-9), format!("{name} is not AME"))?;
        let n = psi.n();
        for mask in 1u32..(1 << n) - 1 {
            let sub = mask_to_qubits(mask);
            let small = sub.len().min(n - sub.len());
            let level = 0.5f64.powi(small as i32);
            let spectrum = psi.schmidt_spectrum(&sub).unwrap();
            let flat = spectrum
                .iter()
                .enumerate()
                .all(|(i, &l)| if i < 1 << small { (l - level).abs() < 1e-9 } else { l.abs() < 1e-9 });
            ensure(flat, format!("{name} {sub:?}: {spectrum:?}"))?;
        }
    }
    Ok("bell, triangle, ring5, ame6 AME with flat spectra".into())
}

// 5
fn observation3_saturation() -> Outcome {
    let wheel = named_graph("wheel7").unwrap();
    let psi = wheel.graph_state_vector().unwrap();
    let two = count_mixed_marginals(&psi, 2, 1e-9).map_err(|e| e.to_string())?;
    let three = count_mixed_marginals(&psi, 3, 1e-9).map_err(|e| e.to_string())?;
    ensure(two.count == 21, format!("2-body {}", two.count))?;
    ensure(three.count == 32, format!("3-body {}", three.count))?;
    let stab2 = wheel.stabilizer_marginal_report(2).unwrap();
    let stab3 = wheel.stabilizer_marginal_report(3).unwrap();
    ensure(stab2.count == 21 && stab3.count == 32, "stabilizer counts")?;
    for (&mask, &mixed) in stab2.mixed.iter().chain(&stab3.mixed) {
        let dense = psi.is_maximally_mixed(&mask_to_qubits(mask), 1e-9).unwrap();
        ensure(dense == mixed, format!("disagreement on {mask:b}"))?;
    }
    Ok("21/21 two-body, 32/35 three-body, both criteria".into())
}

// 6
fn observation3_exhaustive() -> Outcome {
    let cfg = SearchConfig::new(7, 3, Prefilter::AllMixedUpTo(2));
    let t = Instant::now();
    let single = search_best(&cfg.with_jobs(1)).map_err(|e| e.to_string())?;
    let t_single = t.elapsed();
    let t = Instant::now();
    let parallel = search_best(&cfg.with_jobs(8)).map_err(|e| e.to_string())?;
    let t_parallel = t.elapsed();
    ensure(single.graphs_scanned == 1 << 21, "did not scan 2^21 graphs")?;
    ensure(single.best_count == Some(32), format!("best {:?}", single.best_count))?;
    ensure(single == parallel, "1-worker and 8-worker reports differ")?;
    ensure(t_single < Duration::from_secs(300), format!("single-threaded {t_single:?}"))?;
    ensure(t_parallel < Duration::from_secs(60), format!("8 workers {t_parallel:?}"))?;
    let witness = Graph::parse(&single.witnesses[0]).unwrap();
    let dense = count_mixed_marginals(&witness.graph_state_vector().unwrap(), 3, 1e-9).unwrap();
    ensure(dense.count == 32, "witness not reproduced by dense oracle")?;
    Ok(format!(
        "best 32 over {} graphs ({} passing); 1 worker {:.1?}, 8 workers {:.1?}",
        single.graphs_scanned, single.graphs_passing, t_single, t_parallel
    ))
}

// 7
fn four_qubit_negative() -> Outcome {
    ensure(find_ame_graph(4).unwrap().is_none(), "found a 4-vertex AME graph")?;
    let r = search_best(&SearchConfig::new(4, 2, Prefilter::None)).unwrap();
    ensure(r.graphs_scanned == 64, "did not scan 64 graphs")?;
    let best = r.best_count.unwrap_or(0);
    ensure(best < 6, format!("best {best}"))?;
    Ok(format!("64 graphs, best {best}/6 mixed 2-body marginals"))
}

// 8
fn appendix_a_identities() -> Outcome {
    let ring = named_graph("ring5").unwrap().graph_state_vector().unwrap();
    for (k, want) in [(2, 0.0), (3, 1.0), (4, 7.0)] {
        for sub in k_subsets(5, k).map(mask_to_qubits) {
            let got = ring.support_sum_check(&sub).unwrap();
            ensure((got - want).abs() <= 1e-8, format!("{sub:?}: {got}"))?;
        }
    }
    ensure(scott_rains_bound(2).unwrap() == (6, 11), "scott_rains_bound(2)")?;
    Ok("support sums 0/1/7, bound (6, 11)".into())
}

fn dense_pauli(p: &PauliOperator) -> DMatrix<Complex64> {
    let c = |re, im| Complex64::new(re, im);
    let mut m = DMatrix::from_element(1, 1, c(1.0, 0.0));
    for j in 0..p.n() {
        let f = match (p.x_mask() >> j & 1, p.z_mask() >> j & 1) {
            (0, 0) => [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
            (1, 0) => [c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
            (1, 1) => [c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)],
            _ => [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)],
        };
        m = DMatrix::from_row_slice(2, 2, &f).kronecker(&m);
    }
    let phase = [c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)][p.phase_exp() as usize];
    m * phase
}

// 9
fn parity_rule_suite() -> Outcome {
    let mut rng = StdRng::seed_from_u64(2017);
    let mut nonvanishing = 0;
    for _ in 0..100_000 {
        let n = rng.gen_range(1..=8);
        let m = (1u32 << n) - 1;
        let mut draw = || {
            let sign = if rng.gen::<bool>() { 2 } else { 0 };
            PauliOperator::new(n, rng.gen::<u32>() & m, rng.gen::<u32>() & m, sign).unwrap()
        };
        let (p, q) = (draw(), draw());
        if let Some(w) = p.anticommutator_weight(&q).unwrap() {
            nonvanishing += 1;
            ensure(w % 2 == (p.weight() + q.weight()) % 2, format!("{p} {q}"))?;
        }
    }
    let mut pairs = 0;
    for n in 1..=3 {
        let all: Vec<PauliOperator> = PauliOperator::all(n).collect();
        for p in &all {
            for q in &all {
                let (dp, dq) = (dense_pauli(p), dense_pauli(q));
                let prod = p.product(q).unwrap();
                let ok = (dense_pauli(&prod) - &dp * &dq).iter().all(|e| e.norm() < 1e-12);
                ensure(ok, format!("product {p} {q}"))?;
                let anti = &dp * &dq + &dq * &dp;
                let expected = if anti.iter().all(|e| e.norm() < 1e-12) {
                    None
                } else {
                    // {P,Q} = 2PQ when it does not vanish
                    ensure((anti - dense_pauli(&prod) * Complex64::new(2.0, 0.0)).iter().all(|e| e.norm() < 1e-12), "anticommutator")?;
                    Some(prod.weight())
                };
                ensure(p.anticommutator_weight(q).unwrap() == expected, format!("{p} {q}"))?;
                pairs += 1;
            }
        }
    }
    Ok(format!("10^5 random pairs ({nonvanishing} non-vanishing), {pairs} dense pairs"))
}

fn random_graph(n: usize, rng: &mut StdRng) -> Graph {
    let slots = n * (n - 1) / 2;
    Graph::from_edge_bitmask(n, rng.gen::<u128>() & ((1u128 << slots) - 1)).unwrap()
}

fn agrees_with_dense(g: &Graph) -> Result<(), String> {
    let psi = g.graph_state_vector().unwrap();
    let analyzer = g.marginal_analyzer();
    for mask in 1u32..1 << g.n() {
        let dense = psi.is_maximally_mixed(&mask_to_qubits(mask), 1e-9).unwrap();
        ensure(dense == analyzer.is_mixed(mask), format!("{g} subset {mask:b}"))?;
    }
    Ok(())
}

// 10
fn oracle_equivalence() -> Outcome {
    let mut exhaustive = 0;
    for n in 1..=5 {
        for g in enumerate_graphs(n).unwrap() {
            agrees_with_dense(&g)?;
            exhaustive += 1;
        }
    }
    let mut rng = StdRng::seed_from_u64(67);
    for n in [6, 7] {
        for _ in 0..1000 {
            agrees_with_dense(&random_graph(n, &mut rng))?;
        }
    }
    Ok(format!("{exhaustive} graphs exhaustively (n ≤ 5), 2000 random (n = 6, 7)"))
}

// 11
fn lc_invariance() -> Outcome {
    let mut rng = StdRng::seed_from_u64(1999);
    for _ in 0..500 {
        let n = rng.gen_range(2..=8);
        let g = random_graph(n, &mut rng);
        let counts = |g: &Graph| {
            let a = g.marginal_analyzer();
            (1..=n).map(|k| a.mixed_count(k)).collect::<Vec<_>>()
        };
        let (base_sectors, base_counts) = (g.sector_lengths(), counts(&g));
        let base_dense = (n <= 6).then(|| g.graph_state_vector().unwrap().sector_lengths());
        for v in 0..n {
            let h = g.local_complement(v).unwrap();
            ensure(h.sector_lengths() == base_sectors, format!("{g} lc {v}: sectors"))?;
            ensure(counts(&h) == base_counts, format!("{g} lc {v}: counts"))?;
            if let Some(d) = &base_dense {
                let hd = h.graph_state_vector().unwrap().sector_lengths();
                ensure(hd.approx_eq(d, 1e-9), format!("{g} lc {v}: dense sectors"))?;
            }
        }
    }
    let orbit = lc_orbit(&named_graph("wheel7").unwrap(), 1 << 16);
    ensure(orbit.complete, "wheel7 orbit exceeded cap")?;
    ensure(orbit.graphs.contains(&named_graph("fano7").unwrap()), "fano7 not in wheel7 orbit")?;
    let distinct: HashSet<_> = orbit.graphs.iter().map(|g| g.edge_count()).collect();
    Ok(format!(
        "500 random graphs; wheel7 orbit of {} graphs ({} edge counts) contains fano7",
        orbit.graphs.len(),
        distinct.len()
    ))
}

type Criterion = (u32, &'static str, Duration, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 11] = [
        (1, "exclusion theorem", Duration::from_secs(1), exclusion_theorem),
        (2, "n = 7 transcript", Duration::from_secs(1), observation2_transcript),
        (3, "eigenvalue fixtures", Duration::from_secs(1), eigenvalue_fixtures),
        (4, "AME fixtures", Duration::from_secs(10), ame_fixtures),
        (5, "32/35 saturation", Duration::from_secs(30), observation3_saturation),
        (6, "exhaustive 7-vertex scan", Duration::from_secs(360), observation3_exhaustive),
        (7, "no 4-qubit AME graph", Duration::from_secs(1), four_qubit_negative),
        (8, "support sums and bound", Duration::from_secs(1), appendix_a_identities),
        (9, "parity rule", Duration::from_secs(10), parity_rule_suite),
        (10, "oracle equivalence", Duration::from_secs(120), oracle_equivalence),
        (11, "LC invariance", Duration::from_secs(120), lc_invariance),
    ];
    let mut failures = 0;
    for (id, name, limit, check) in criteria {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > limit => Err(format!("{detail}; took {elapsed:.2?} > {limit:?}")),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("[PASS] {id:>2} {name}: {detail} ({elapsed:.2?})"),
            Err(why) => {
                failures += 1;
                println!("[FAIL] {id:>2} {name}: {why} ({elapsed:.2?})");
            }
        }
    }
    if failures > 0 {
        eprintln!("{failures} acceptance criteria failed");
        std::process::exit(1);
    }
}
