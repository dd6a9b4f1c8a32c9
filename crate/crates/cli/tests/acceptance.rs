//! Acceptance suite. Runs without the libtest harness so that every
//! criterion prints one line whether it passes or not.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use trigen_core::terms::term_reachability_oracle;
use trigen_core::verify::exhaustive_sweep;
use trigen_core::{
    build, check_embedding, check_join_conditions, check_theta, closure, eval_h1, eval_h2, theta,
    xyz, GadgetSet, GeneratorQuadruple, Letter, Partition, DEFAULT_CAP,
};

// Wall-clock limits.
const GADGET_LIMIT: Duration = Duration::from_secs(1);
const SWEEP2_LIMIT: Duration = Duration::from_secs(5);
const SWEEP3_LIMIT: Duration = Duration::from_secs(600);
const EQU5_LIMIT: Duration = Duration::from_secs(300);

// Frozen from the first verified run of the n = 3 sweep.
const SWEEP3_PASSING: usize = 412;
const SWEEP2_PASSING: usize = 13;

const SIZE_TRIALS: usize = 1_000;
const SYMMETRY_TRIALS: usize = 100;
const ORACLE_TRIALS: usize = 200;
const PERMUTATION_TRIALS: usize = 50;

type Check = fn() -> Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn rng(salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0x5eed_0000 + salt)
}

fn random_partition(n: usize, rng: &mut impl Rng) -> Partition {
    let k = rng.gen_range(1..=n);
    let labels: Vec<usize> = (0..n).map(|_| rng.gen_range(0..k)).collect();
    Partition::from_labels(&labels)
}

fn random_quad(n: usize, rng: &mut impl Rng) -> GeneratorQuadruple {
    GeneratorQuadruple::user(std::array::from_fn(|_| random_partition(n, rng))).unwrap()
}

fn random_hypothesis_quad(n: usize, rng: &mut impl Rng) -> GeneratorQuadruple {
    loop {
        let q = random_quad(n, rng);
        if check_join_conditions(&q) {
            return q;
        }
    }
}

/// Bell numbers from the Bell triangle, independent of the enumerator.
fn bell_triangle(n: usize) -> usize {
    let mut row = vec![1usize];
    for _ in 0..n {
        let mut next = vec![*row.last().unwrap()];
        for &v in &row {
            next.push(next.last().unwrap() + v);
        }
        row = next;
    }
    row[0]
}

/// Hypothesis count by brute force over labelings, sharing no code with the sweep.
fn hypothesis_count_oracle(n: usize) -> (usize, usize) {
    // every partition as a relation matrix, deduplicated
    let mut rels: BTreeSet<Vec<Vec<bool>>> = BTreeSet::new();
    let mut labels = vec![0usize; n];
    loop {
        rels.insert((0..n).map(|i| (0..n).map(|j| labels[i] == labels[j]).collect()).collect());
        let mut k = 0;
        while k < n && labels[k] == n - 1 {
            labels[k] = 0;
            k += 1;
        }
        if k == n {
            break;
        }
        labels[k] += 1;
    }
    let rels: Vec<_> = rels.into_iter().collect();
    let join = |a: &Vec<Vec<bool>>, b: &Vec<Vec<bool>>| {
        let mut m: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| a[i][j] || b[i][j]).collect()).collect();
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    m[i][j] = m[i][j] || (m[i][k] && m[k][j]);
                }
            }
        }
        m
    };
    let below = |a: &Vec<Vec<bool>>, b: &Vec<Vec<bool>>| (0..n).all(|i| (0..n).all(|j| !a[i][j] || b[i][j]));
    let mut holds = 0;
    for g in &rels {
        for d in &rels {
            let gd = join(g, d);
            let ok = rels.iter().filter(|r| below(r, &gd)).count();
            holds += ok * ok;
        }
    }
    (rels.len().pow(4), holds)
}

fn c1_gadgets() -> Result<String, String> {
    let t = Instant::now();
    let set = GadgetSet::builtin().clone().into_unverified();
    let (set, reports) = set.verify().map_err(|e| e.to_string())?;
    let el = t.elapsed();
    let specs: usize = reports.iter().map(|r| r.outcomes.len()).sum();
    let perfect = set.specs().iter().filter(|s| s.perfect).count();
    let failed: usize = reports.iter().map(|r| r.failures()).sum();
    ensure(failed == 0 && set.is_verified(), format!("{failed} of {specs} block lists fail"))?;
    ensure(el < GADGET_LIMIT, format!("took {el:?}"))?;
    Ok(format!("{specs} block lists ({perfect} perfect) pass in {el:.2?}"))
}

fn c2_sweep_two() -> Result<String, String> {
    let t = Instant::now();
    let s = exhaustive_sweep(2, GadgetSet::builtin(), DEFAULT_CAP).map_err(|e| e.to_string())?;
    let el = t.elapsed();
    let (total, holds) = hypothesis_count_oracle(2);
    ensure(s.total == 16 && total == 16, format!("classified {}", s.total))?;
    ensure(s.hypotheses_hold == holds, format!("{} satisfy hypotheses, oracle {holds}", s.hypotheses_hold))?;
    ensure(s.failures.is_empty(), format!("failures: {:?}", s.failures))?;
    ensure(s.passed == SWEEP2_PASSING, format!("{} pass", s.passed))?;
    let top = Partition::top(2);
    let q = GeneratorQuadruple::user([top.clone(), top.clone(), top.clone(), top]).unwrap();
    let c = check_embedding(&q, GadgetSet::builtin(), DEFAULT_CAP).map_err(|e| e.to_string())?;
    ensure(c.passed() && c.b_size == 66 && c.l2.len() == 1, format!("all-top: b={} |L2|={}", c.b_size, c.l2.len()))?;
    ensure(el < SWEEP2_LIMIT, format!("took {el:?}"))?;
    Ok(format!("16 classified, {} pass, all-top b=66 |L2|=1, {el:.2?}", s.passed))
}

fn c3_sweep_three() -> Result<String, String> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let t = Instant::now();
    let s = pool
        .install(|| exhaustive_sweep(3, GadgetSet::builtin(), DEFAULT_CAP))
        .map_err(|e| e.to_string())?;
    let el = t.elapsed();
    let (total, holds) = hypothesis_count_oracle(3);
    ensure(s.total == 625 && total == 625, format!("classified {}", s.total))?;
    ensure(s.hypotheses_hold == holds, format!("{} satisfy hypotheses, oracle {holds}", s.hypotheses_hold))?;
    ensure(s.failures.is_empty(), format!("{} failures, first {:?}", s.failures.len(), s.failures.first()))?;
    ensure(s.passed == SWEEP3_PASSING, format!("{} pass, frozen {SWEEP3_PASSING}", s.passed))?;
    ensure(el < SWEEP3_LIMIT, format!("took {el:?}"))?;
    Ok(format!("625 classified, {} pass (single thread, {el:.2?})", s.passed))
}

fn run_equ(n: usize) -> Result<(usize, usize, Duration), String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let out = dir.path().join("cert.txt");
    let t = Instant::now();
    let status = Command::new(env!("CARGO_BIN_EXE_trigen"))
        .args(["three-gen", "--equ", &n.to_string(), "--out"])
        .arg(&out)
        .status()
        .map_err(|e| e.to_string())?;
    let el = t.elapsed();
    ensure(status.success(), format!("--equ {n} exited with {status}"))?;
    let text = std::fs::read_to_string(&out).map_err(|e| e.to_string())?;
    let field = |key: &str| -> Result<usize, String> {
        text.lines()
            .find_map(|l| l.strip_prefix(key))
            .and_then(|v| v.trim().parse().ok())
            .ok_or_else(|| format!("certificate lacks `{key}`"))
    };
    ensure(text.lines().any(|l| l == "verdict overall pass"), format!("--equ {n} verdict not pass"))?;
    for name in ["theta_separates_base", "theta_below_h2", "theta_joined_anchored"] {
        ensure(
            text.lines().any(|l| l == format!("verdict {name} pass")),
            format!("--equ {n}: {name} not pass"),
        )?;
    }
    Ok((field("l0 ")?, field("l2 ")?, el))
}

fn c4_end_to_end() -> Result<String, String> {
    let mut notes = Vec::new();
    for n in [3, 5] {
        let (l0, l2, el) = run_equ(n)?;
        let b = bell_triangle(n);
        ensure(l0 == b && l2 == b, format!("Equ({n}): |L0|={l0} |L2|={l2}, expected {b}"))?;
        if n == 5 {
            ensure(el < EQU5_LIMIT, format!("Equ(5) took {el:?}"))?;
        }
        notes.push(format!("Equ({n}) |L0|=|L2|={b} in {el:.2?}"));
    }
    Ok(notes.join(", "))
}

fn c5_size_formula() -> Result<String, String> {
    let mut r = rng(5);
    for trial in 0..SIZE_TRIALS {
        let n = r.gen_range(1..=7);
        let q = random_quad(n, &mut r);
        let w = build(&q, GadgetSet::builtin()).map_err(|e| e.to_string())?;
        // pairs in each relation, counted from block sizes
        let e: Vec<usize> = q
            .relations()
            .iter()
            .map(|p| p.blocks().iter().map(|b| b.len() * (b.len() - 1) / 2).sum())
            .collect();
        let want = n + 24 * (e[0] + e[1]) + 8 * (e[2] + e[3]);
        ensure(w.size() == want, format!("trial {trial}: |A1|={} formula {want}", w.size()))?;
    }
    Ok(format!("{SIZE_TRIALS} random inputs"))
}

fn c6_symmetry() -> Result<String, String> {
    let mut r = rng(6);
    for trial in 0..SYMMETRY_TRIALS {
        let n = r.gen_range(2..=5);
        let q = random_quad(n, &mut r);
        let w = build(&q, GadgetSet::builtin()).map_err(|e| e.to_string())?;
        let [x, y, z] = w.graph.relations();
        let [mx, my, mz] = w.graph.mirror().relations();
        let e = |e: trigen_core::Error| e.to_string();
        let h1 = eval_h1(&x, &y, &z).map_err(e)?;
        let m1 = eval_h1(&mx, &my, &mz).map_err(e)?;
        let h2 = eval_h2(&h1).map_err(e)?;
        let m2 = eval_h2(&m1).map_err(e)?;
        for (h, m) in [(&h1, &m1), (&h2, &m2)] {
            for l in Letter::ALL {
                ensure(h.get(l) == m.get(l.mirror()), format!("trial {trial}: h_{l} not swapped"))?;
            }
        }
    }
    Ok(format!("{SYMMETRY_TRIALS} random blow-ups, both stages"))
}

fn c7_theta() -> Result<String, String> {
    let mut checked = 0;
    for n in [2, 3] {
        for q in trigen_core::all_partitions(n).iter().flat_map(|a| {
            let all = trigen_core::all_partitions(n);
            let mut v = Vec::new();
            for b in &all {
                for c in &all {
                    for d in &all {
                        v.push(GeneratorQuadruple::user([a.clone(), b.clone(), c.clone(), d.clone()]).unwrap());
                    }
                }
            }
            v
        }) {
            if !check_join_conditions(&q) {
                continue;
            }
            let e = |e: trigen_core::Error| e.to_string();
            let w = build(&q, GadgetSet::builtin()).map_err(e)?;
            let [x, y, z] = xyz(&w);
            let h2 = eval_h2(&eval_h1(&x, &y, &z).map_err(e)?).map_err(e)?;
            let rep = check_theta(&w, &theta(&w), h2.as_array()).map_err(e)?;
            ensure(rep.passed(), format!("n={n} {}: {:?}", q.to_text().replace('\n', " / "), rep.detail))?;
            checked += 1;
        }
    }
    // the end-to-end instances are covered by their certificate verdicts
    for n in [3, 5] {
        run_equ(n)?;
        checked += 1;
    }
    Ok(format!("{checked} instances"))
}

fn c8_oracle() -> Result<String, String> {
    let mut r = rng(8);
    for trial in 0..ORACLE_TRIALS {
        let n = r.gen_range(1..=6);
        let k = r.gen_range(1..=4);
        let gens: Vec<Partition> = (0..k).map(|_| random_partition(n, &mut r)).collect();
        let got = closure(&gens, DEFAULT_CAP).map_err(|e| e.to_string())?;
        let want = term_reachability_oracle(&gens, usize::MAX);
        let got: BTreeSet<Partition> = got.elements.into_iter().collect();
        ensure(got == want, format!("trial {trial}: closure {} oracle {}", got.len(), want.len()))?;
    }
    Ok(format!("{ORACLE_TRIALS} random generator sets"))
}

fn c9_permutation() -> Result<String, String> {
    let mut r = rng(9);
    for trial in 0..PERMUTATION_TRIALS {
        let n = r.gen_range(2..=4);
        let q = random_hypothesis_quad(n, &mut r);
        let mut perm: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            perm.swap(i, r.gen_range(0..=i));
        }
        let e = |e: trigen_core::Error| e.to_string();
        let a = check_embedding(&q, GadgetSet::builtin(), DEFAULT_CAP).map_err(e)?;
        let b = check_embedding(&q.permute(&perm), GadgetSet::builtin(), DEFAULT_CAP).map_err(e)?;
        ensure(a.passed() && b.passed(), format!("trial {trial}: certificate fails"))?;
        ensure(
            a.l2.len() == b.l2.len(),
            format!("trial {trial}: |L2| {} vs {} after {perm:?}", a.l2.len(), b.l2.len()),
        )?;
    }
    Ok(format!("{PERMUTATION_TRIALS} random instances"))
}

fn main() {
    let criteria: [(&str, Check); 9] = [
        ("1 gadget suite", c1_gadgets),
        ("2 exhaustive |A0|=2", c2_sweep_two),
        ("3 exhaustive |A0|=3", c3_sweep_three),
        ("4 end-to-end Equ(3), Equ(5)", c4_end_to_end),
        ("5 size formula", c5_size_formula),
        ("6 y-z symmetry", c6_symmetry),
        ("7 theta checks", c7_theta),
        ("8 closure vs oracle", c8_oracle),
        ("9 permutation invariance", c9_permutation),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        match outcome {
            Ok(note) => println!("criterion {name}: PASS ({note})"),
            Err(why) => {
                failed += 1;
                println!("criterion {name}: FAIL ({why})");
            }
        }
    }
    println!("acceptance: {} of 9 criteria pass", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
