//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits nonzero if any failed.

mod common;

use std::time::{Duration, Instant};

use rand::Rng;

use polycut::cuts::{build_lifted_linear, build_mixed_cone, build_subset_cone, gradient_linearize, Cut};
use polycut::generators::{gen_cardinality, gen_correlated, gen_fixed_charge};
use polycut::instance::{Instance, Point};
use polycut::oracles::{
    brute_force_instance, brute_force_opt, max_cut_violation, perspective_inner_min, solve_continuous_relaxation,
    solve_opt,
};
use polycut::polymatroid::{compute_pi, greedy_separate_binary_with_tol, Permutation};
use polycut::solver::{root_relaxation, solve, SolverConfig};

use common::{all_permutations, projected_gradient, rel_close, rng, scaled_weights, shuffled};

const A: [f64; 5] = [22.0, 18.0, 21.0, 19.0, 17.0];

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn close_vec(got: &[f64], want: &[f64], tol: f64) -> Result<(), String> {
    ensure(got.len() == want.len() && got.iter().zip(want).all(|(g, w)| (g - w).abs() <= tol), || {
        format!("got {got:.4?}, want {want:.4?}")
    })
}

fn perm(one_based: &[usize]) -> Permutation {
    Permutation::from_one_based(one_based, 5).unwrap()
}

fn linear_worked_case() -> Outcome {
    let x = vec![1.0, 0.3817, 0.6543, 0.3616, 0.8083];
    let p = Point::new(x.clone(), x, 6.8705);
    let start = Instant::now();
    let cut = build_lifted_linear(&A, 0.0, &perm(&[1, 3, 5, 2, 4])).map_err(|e| e.to_string())?;
    let v = Cut::from(cut.clone()).violation(&p);
    let elapsed = start.elapsed();
    close_vec(&cut.pi, &[4.6904, 1.0858, 1.8670, 1.0171, 1.1885], 1e-4)?;
    close_vec(&cut.alpha, &[4.6904, 2.0381, 3.2025, 1.9292, 2.1947], 1e-4)?;
    ensure((v - 0.7844).abs() <= 1e-3, || format!("violation {v}"))?;
    ensure(elapsed < Duration::from_millis(1), || format!("took {elapsed:?}"))?;
    Ok(format!("violation {v:.4} in {elapsed:?}"))
}

fn subset_worked_case() -> Outcome {
    let cut = build_subset_cone(&A, 0.0, &perm(&[1, 5, 2])).map_err(|e| e.to_string())?;
    close_vec(&[cut.pi[0], cut.pi[4], cut.pi[1]], &[4.6904, 1.5546, 1.3048], 1e-4)?;
    close_vec(&[cut.alpha[0], cut.alpha[4], cut.alpha[1]], &[4.6904, 2.7222, 2.3842], 1e-4)?;
    let x = vec![1.0, 0.0, 0.0, 0.0, 0.8];
    let v = Cut::from(cut).violation(&Point::new(x.clone(), x, 5.7341));
    ensure((v - 0.2).abs() <= 1e-3, || format!("violation {v}"))?;
    Ok(format!("violation {v:.4}"))
}

fn mixed_worked_case() -> Outcome {
    let cut = build_mixed_cone(&A, 0.0, &perm(&[1, 2]), &[2, 4]).map_err(|e| e.to_string())?;
    close_vec(&cut.pi[..2], &[1.5816, 1.0858], 1e-4)?;
    close_vec(&cut.alpha[..2], &[2.8402, 2.0381], 1e-4)?;
    let x = [0.8, 0.5, 1.0, 0.0, 1.0];
    let lhs = Cut::from(cut).lower_bound(&x, &x);
    ensure((lhs - 7.9726).abs() <= 1e-3, || format!("lhs {lhs}"))?;
    Ok(format!("lhs {lhs:.4}"))
}

fn random_cuts(r: &mut rand_chacha::ChaCha8Rng, a: &[f64], sigma0: f64) -> Vec<Cut> {
    let n = a.len();
    let order = shuffled(r, n);
    let mut cuts: Vec<Cut> = vec![build_lifted_linear(a, sigma0, &Permutation::new(order, n).unwrap()).unwrap().into()];
    // disjoint S, T drawn by labelling each index
    let labels: Vec<u8> = (0..n).map(|_| r.gen_range(0..3)).collect();
    let order = shuffled(r, n);
    let s: Vec<usize> = order.iter().copied().filter(|&i| labels[i] == 0).collect();
    let t: Vec<usize> = order.iter().copied().filter(|&i| labels[i] == 1).collect();
    let s_perm = Permutation::new(s.clone(), n).unwrap();
    if !s.is_empty() {
        cuts.push(build_subset_cone(a, sigma0, &s_perm).unwrap().into());
    }
    cuts.push(build_mixed_cone(a, sigma0, &s_perm, &t).unwrap().into());
    cuts
}

fn cut_validity() -> Outcome {
    let start = Instant::now();
    let mut r = rng(4);
    let mut worst = f64::NEG_INFINITY;
    let mut count = 0;
    for k in 0..1000 {
        let n = r.gen_range(1..=6);
        let a = scaled_weights(&mut r, n);
        let sigma0 = if k % 2 == 0 { 0.0 } else { r.gen_range(0.0..n as f64) };
        for cut in random_cuts(&mut r, &a, sigma0) {
            let v = max_cut_violation(&cut, &a, sigma0).map_err(|e| e.to_string())?;
            worst = worst.max(v);
            count += 1;
            ensure(v <= 1e-9, || format!("{cut:?} violated by {v}"))?;
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(120), || format!("took {elapsed:?}"))?;
    Ok(format!("{count} cuts, worst violation {worst:.2e}, {elapsed:.1?}"))
}

/// Value of the best support that is a prefix of the `(c + d) / a` order
/// (after forcing nonpositive `c`), each evaluated by the perspective solver.
fn best_prefix_value(c: &[f64], d: &[f64], a: &[f64], sigma0: f64) -> f64 {
    let n = a.len();
    let mut forced: Vec<usize> = (0..n).filter(|&i| c[i] <= 0.0).collect();
    let mut rest: Vec<usize> = (0..n).filter(|&i| c[i] > 0.0).collect();
    rest.sort_by(|&i, &j| ((c[i] + d[i]) / a[i]).total_cmp(&((c[j] + d[j]) / a[j])).then(i.cmp(&j)));
    let mut best = f64::INFINITY;
    for m in 0..=rest.len() {
        let support: Vec<usize> = forced.iter().chain(&rest[..m]).copied().collect();
        let (_, inner) = perspective_inner_min(d, a, sigma0, &support);
        best = best.min(support.iter().map(|&i| c[i]).sum::<f64>() + inner);
    }
    forced.clear();
    best
}

fn random_opt(r: &mut rand_chacha::ChaCha8Rng, n: usize) -> (Vec<f64>, Vec<f64>, Vec<f64>, f64) {
    let a: Vec<f64> = (0..n).map(|_| r.gen_range(0.5..20.0)).collect();
    let c: Vec<f64> = (0..n).map(|_| if r.gen_bool(0.1) { -r.gen_range(0.0..2.0) } else { r.gen_range(0.1..8.0) }).collect();
    let d: Vec<f64> = (0..n).map(|_| r.gen_range(-12.0..2.0)).collect();
    let sigma0 = if r.gen_bool(0.5) { 0.0 } else { r.gen_range(0.0..10.0) };
    (a, c, d, sigma0)
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut r = rng(5);
    for _ in 0..500 {
        let n = r.gen_range(1..=10);
        let (a, c, d, sigma0) = random_opt(&mut r, n);
        let fast = solve_opt(&c, &d, &a, sigma0).map_err(|e| e.to_string())?;
        let brute = brute_force_opt(&c, &d, &a, sigma0).map_err(|e| e.to_string())?;
        ensure(rel_close(fast.value, brute.value, 1e-8), || {
            format!("a {a:?} c {c:?} d {d:?} s0 {sigma0}: {} vs {}", fast.value, brute.value)
        })?;
        let prefix = best_prefix_value(&c, &d, &a, sigma0);
        ensure(rel_close(prefix, brute.value, 1e-8), || format!("no prefix optimum: {prefix} vs {}", brute.value))?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(60), || format!("took {elapsed:?}"))?;
    Ok(format!("500 instances in {elapsed:.1?}"))
}

fn kkt_certificate() -> Outcome {
    let mut r = rng(6);
    let mut worst_kkt = 0.0_f64;
    for k in 0..500 {
        let n = r.gen_range(1..=8);
        let a: Vec<f64> = (0..n).map(|_| r.gen_range(0.5..20.0)).collect();
        let c: Vec<f64> = (0..n).map(|_| -r.gen_range(0.05..6.0)).collect();
        let offset = if k % 2 == 0 { 0.0 } else { r.gen_range(0.0..10.0) };
        let sol = solve_continuous_relaxation(&c, &a, offset).map_err(|e| e.to_string())?;
        for &y in &sol.y {
            ensure((0.0..=1.0).contains(&y), || format!("y {y} outside the box"))?;
        }
        let q = offset + a.iter().zip(&sol.y).map(|(a, y)| a * y * y).sum::<f64>();
        ensure((q - sol.sigma_tilde).abs() <= 1e-8 * q.max(1.0), || format!("sigma {} vs {q}", sol.sigma_tilde))?;
        match sol.multipliers(&c, &a) {
            Some((lambda, mu)) => {
                let root = q.sqrt();
                for i in 0..n {
                    let foc = c[i] + a[i] * sol.y[i] / root - lambda[i] + mu[i];
                    let slack = (lambda[i] * sol.y[i]).abs().max((mu[i] * (1.0 - sol.y[i])).abs());
                    let dual = (-lambda[i]).max(-mu[i]).max(0.0);
                    worst_kkt = worst_kkt.max(foc.abs()).max(slack).max(dual);
                }
            }
            None => {
                // sigma = 0: y = 0 is optimal iff sum c_i^2 / a_i <= 1
                let s: f64 = c.iter().zip(&a).map(|(c, a)| c * c / a).sum();
                ensure(offset == 0.0 && s <= 1.0 + 1e-8, || format!("degenerate point with weight {s}"))?;
            }
        }
        ensure(worst_kkt <= 1e-8, || format!("KKT residual {worst_kkt:.2e} at a {a:?} c {c:?} offset {offset}"))?;
        let pg = projected_gradient(&c, &a, offset, 4000);
        ensure((pg - sol.objective).abs() <= 1e-6 * pg.abs().max(1.0), || {
            format!("objective {} vs projected gradient {pg}", sol.objective)
        })?;
    }
    Ok(format!("worst KKT residual {worst_kkt:.2e}"))
}

fn greedy_exactness() -> Outcome {
    let mut r = rng(7);
    for _ in 0..200 {
        let n = r.gen_range(1..=7);
        let a: Vec<f64> = (0..n).map(|_| r.gen_range(0.5..20.0)).collect();
        let sigma0 = if r.gen_bool(0.5) { 0.0 } else { r.gen_range(0.0..5.0) };
        let x: Vec<f64> = (0..n).map(|_| if r.gen_bool(0.2) { r.gen_range(0..=1) as f64 } else { r.gen() }).collect();
        let z = r.gen_range(0.0..10.0);
        let greedy = greedy_separate_binary_with_tol(&a, sigma0, &x, z, f64::NEG_INFINITY).ok_or("no cut")?;
        let gv = greedy.violation(&x, z);
        let best = all_permutations(n)
            .into_iter()
            .map(|p| compute_pi(&a, sigma0, &Permutation::new(p, n).unwrap()).unwrap().violation(&x, z))
            .fold(f64::NEG_INFINITY, f64::max);
        ensure((gv - best).abs() <= 1e-12 * best.abs().max(1.0), || format!("greedy {gv} vs best {best}"))?;
    }
    Ok("200 points".into())
}

fn fixed_charge_root_gaps() -> Outcome {
    let mut lines = Vec::new();
    for seed in 1..=5 {
        let start = Instant::now();
        let inst = gen_fixed_charge(50, 0.05, seed).map_err(|e| e.to_string())?;
        let on = solve(&inst, &SolverConfig::default()).map_err(|e| e.to_string())?;
        let off = root_relaxation(&inst, &SolverConfig::default().with_cuts(false), Some(on.incumbent))
            .map_err(|e| e.to_string())?;
        let elapsed = start.elapsed();
        ensure(on.rgap <= 0.1, || format!("seed {seed}: rgap with cuts {}", on.rgap))?;
        ensure(on.branch_nodes() == 0, || format!("seed {seed}: {} branch nodes", on.branch_nodes()))?;
        ensure(off.rgap > on.rgap, || format!("seed {seed}: rgap without cuts {} vs {}", off.rgap, on.rgap))?;
        ensure(elapsed < Duration::from_secs(60), || format!("seed {seed}: took {elapsed:?}"))?;
        lines.push(format!("{:.2}->{:.3}", off.rgap, on.rgap));
    }
    Ok(format!("rgap off->on {}", lines.join(" ")))
}

fn cuts_shrink_trees() -> Outcome {
    let cfg = SolverConfig { time_limit_s: 120.0, ..SolverConfig::default() };
    let mut lines = Vec::new();
    for (family, seed) in (1..=5).map(|s| ("card", s)).chain((1..=5).map(|s| ("corr", s))) {
        let inst = if family == "card" {
            gen_cardinality(50, 0.2, 0.05, seed)
        } else {
            gen_correlated(50, 0.2, 1.0, 0.05, seed)
        }
        .map_err(|e| e.to_string())?;
        let on = solve(&inst, &cfg).map_err(|e| e.to_string())?;
        let off = solve(&inst, &cfg.clone().with_cuts(false)).map_err(|e| e.to_string())?;
        ensure(on.branch_nodes() <= off.branch_nodes(), || {
            format!("{family} {seed}: nodes {} with cuts vs {} without", on.branch_nodes(), off.branch_nodes())
        })?;
        ensure(on.solved() && on.egap <= 1e-4 * 100.0 && on.time_s <= 120.0, || {
            format!("{family} {seed}: status {} egap {}% in {:.1}s", on.status, on.egap, on.time_s)
        })?;
        lines.push(format!("{family}{seed} {}/{}", off.branch_nodes(), on.branch_nodes()));
    }
    Ok(format!("nodes off/on: {}", lines.join(", ")))
}

fn end_to_end() -> Outcome {
    let mut worst = 0.0_f64;
    for seed in 0..100u64 {
        let n = 5 + (seed as usize % 11);
        let kappa = if seed % 2 == 0 { 0.2 } else { 0.4 };
        let inst = gen_cardinality(n, kappa, 0.05, 1000 + seed).map_err(|e| e.to_string())?;
        let rep = solve(&inst, &SolverConfig::default()).map_err(|e| e.to_string())?;
        let brute = brute_force_instance(&inst).map_err(|e| e.to_string())?;
        let rel = (rep.incumbent - brute.value).abs() / brute.value.abs().max(1.0);
        worst = worst.max(rel);
        ensure(rel <= 1e-6, || format!("n {n} seed {seed}: {} vs {}", rep.incumbent, brute.value))?;
        check_incumbent(&inst, &rep.x, &rep.y, rep.z)?;
    }
    Ok(format!("100 instances, worst relative gap {worst:.1e}"))
}

fn check_incumbent(inst: &Instance, x: &[f64], y: &[f64], z: f64) -> Result<(), String> {
    ensure(x.iter().all(|&v| v == 0.0 || v == 1.0), || "fractional incumbent".into())?;
    ensure(y.iter().zip(x).all(|(&y, &x)| (0.0..=x).contains(&y)), || "y outside [0, x]".into())?;
    ensure(inst.cone_value(y) <= z + 1e-8, || "cone violated".into())?;
    let k = inst.cardinality.unwrap_or(inst.n) as f64;
    ensure(x.iter().sum::<f64>() <= k, || "cardinality violated".into())
}

fn gradient_dominance() -> Outcome {
    let mut r = rng(11);
    let mut checked = 0;
    while checked < 1000 {
        let n = r.gen_range(1..=8);
        let a = scaled_weights(&mut r, n);
        let sigma0 = if r.gen_bool(0.5) { 0.0 } else { r.gen_range(0.0..5.0) };
        let point = |r: &mut rand_chacha::ChaCha8Rng| {
            let x: Vec<f64> = (0..n).map(|_| r.gen()).collect();
            let y: Vec<f64> = x.iter().map(|&x| x * r.gen::<f64>()).collect();
            Point::new(x, y, 0.0)
        };
        for cut in random_cuts(&mut r, &a, sigma0) {
            let p = point(&mut r);
            let q = point(&mut r);
            let Ok(row) = gradient_linearize(&cut, &p) else { continue };
            let at_p = cut.lower_bound(&p.x, &p.y);
            let row_p = row.value(&p.x, &p.y);
            ensure((row_p - at_p).abs() <= 1e-12 * at_p.abs().max(1.0), || format!("{cut:?}: {row_p} vs {at_p}"))?;
            let at_q = cut.lower_bound(&q.x, &q.y);
            let row_q = row.value(&q.x, &q.y);
            ensure(row_q <= at_q + 1e-12 * at_q.abs().max(1.0), || format!("{cut:?}: {row_q} > {at_q}"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} triples"))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("1 worked lifted linear cut", linear_worked_case),
        ("2 worked subset cone cut", subset_worked_case),
        ("3 worked mixed cone cut", mixed_worked_case),
        ("4 cut validity", cut_validity),
        ("5 oracle equivalence", oracle_equivalence),
        ("6 relaxation KKT certificate", kkt_certificate),
        ("7 greedy separation exactness", greedy_exactness),
        ("8 fixed-charge root gaps", fixed_charge_root_gaps),
        ("9 cardinality and correlated trees", cuts_shrink_trees),
        ("10 end-to-end branch-and-bound", end_to_end),
        ("11 gradient row dominance", gradient_dominance),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (name, check) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        match check() {
            Ok(detail) => println!("PASS  criterion {name}: {detail} [{:.1?}]", start.elapsed()),
            Err(why) => {
                failed += 1;
                println!("FAIL  criterion {name}: {why} [{:.1?}]", start.elapsed());
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
