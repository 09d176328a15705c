//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.

use std::process::{Command, Output};
use std::time::Instant;

use serde_json::Value;
use syzygy_core::ellcurve::{Curve, EmbeddedCurve};
use syzygy_core::exactlin::PrimeField;

fn syzygy(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_syzygy"))
        .args(args)
        .env_remove("SYZYGY_CACHE")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> Result<String, String> {
    let out = syzygy(args);
    let text = String::from_utf8(out.stdout).map_err(|e| e.to_string())?;
    if out.status.success() {
        Ok(text)
    } else {
        Err(format!(
            "`syzygy {}` exited {:?}: {}{}",
            args.join(" "),
            out.status.code(),
            text,
            String::from_utf8_lossy(&out.stderr)
        ))
    }
}

fn json(args: &[&str]) -> Result<Value, String> {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    serde_json::from_str(&stdout(&full)?).map_err(|e| e.to_string())
}

fn all_pass(report: &Value) -> bool {
    report["results"]
        .as_array()
        .is_some_and(|rs| !rs.is_empty() && rs.iter().all(|c| c["pass"] == true))
}

type Outcome = Result<String, String>;

fn tables() -> Outcome {
    let cases: &[(&[&str], &str)] = &[
        (&["diagram", "rnc", "--k", "3"], "- - 1\n2 3 -\n"),
        (
            &["diagram", "secant", "--n", "6", "--d", "2"],
            "- -  - - 1\n- 9 16 9 -\n1 -  - - -\n",
        ),
        (&["diagram", "scroll", "--n", "6", "--d", "2"], "- - - 1\n3 8 6 -\n"),
        (&["diagram", "scroll", "--n", "6", "--d", "3"], "- 1\n- -\n1 -\n"),
        (
            &["diagram", "secant", "--n", "6", "--d", "3"],
            "- - 1\n- - -\n- 2 -\n- - -\n1 - -\n",
        ),
        (
            &["diagram", "secant", "--n", "7", "--d", "2"],
            "-  -  -  -  - 1\n- 14 35 35 14 -\n1  -  -  -  - -\n",
        ),
        (
            &["diagram", "secant", "--n", "7", "--d", "3"],
            "- - - 1\n- - - -\n- 7 7 -\n- - - -\n1 - - -\n",
        ),
        (&["diagram", "rf", "--n", "6", "--d", "2"], "-  - - -\n9 18 9 -\n"),
        (
            &["diagram", "rf", "--n", "7", "--d", "2"],
            " -  -  -  - -\n14 42 42 14 -\n",
        ),
        (
            &["diagram", "bielliptic", "--g", "7"],
            "-  -  -  -  - 1\n-  -  9 16 10 -\n- 10 16  9  - -\n1  -  -  -  - -\n",
        ),
    ];
    let start = Instant::now();
    for (args, want) in cases {
        let got = stdout(args)?;
        if got != *want {
            return Err(format!("`{}` printed {got:?}, want {want:?}", args.join(" ")));
        }
    }
    let t = start.elapsed().as_secs_f64();
    if t >= 1.0 {
        return Err(format!("{} tables took {t:.2}s", cases.len()));
    }
    Ok(format!("{} tables byte-exact in {t:.2}s", cases.len()))
}

fn koszul_oracle() -> Outcome {
    let start = Instant::now();
    let mut checks = 0;
    for prime in ["10007", "10009"] {
        for n in 5..=8usize {
            for d in 2..=n.div_ceil(2) {
                let (ns, ds) = (n.to_string(), d.to_string());
                let args = [
                    "verify", "koszul", "--n", &ns, "--d", &ds, "--prime", prime, "--divisors", "3",
                ];
                let r = json(&args)?;
                if !all_pass(&r) {
                    return Err(format!("p={prime} n={n} d={d}: {}", r["results"]));
                }
                checks += r["results"].as_array().map_or(0, Vec::len);
            }
        }
    }
    let t = start.elapsed().as_secs_f64();
    if t > 300.0 {
        return Err(format!("took {t:.1}s"));
    }
    Ok(format!("{checks} strand checks over 2 primes in {t:.1}s"))
}

fn span_experiment() -> Outcome {
    let start = Instant::now();
    let mut used = Vec::new();
    for (n, d) in [(5, 2), (6, 2), (6, 3), (7, 2), (7, 3)] {
        let (ns, ds) = (n.to_string(), d.to_string());
        let r = json(&["verify", "span", "--n", &ns, "--d", &ds, "--max-bundles", "20"])?;
        if !all_pass(&r) {
            return Err(format!("n={n} d={d}: {}", r["results"]));
        }
        let spans: Vec<&Value> = r["results"]
            .as_array()
            .unwrap()
            .iter()
            .filter(|c| c["name"].as_str().is_some_and(|s| s.starts_with("span")))
            .collect();
        if spans.len() != n - 2 * d + 1 {
            return Err(format!("n={n} d={d}: {} span checks", spans.len()));
        }
        for c in spans {
            let b = c["bundles_used"]
                .as_u64()
                .ok_or_else(|| format!("n={n} d={d}: no bundles_used"))?;
            used.push(b);
        }
    }
    let t = start.elapsed().as_secs_f64();
    if t > 600.0 {
        return Err(format!("took {t:.1}s"));
    }
    Ok(format!("all steps spanned, bundles_used {used:?}, {t:.1}s"))
}

fn identities() -> Outcome {
    let start = Instant::now();
    let r = json(&["verify", "identities", "--max-n", "20"])?;
    if !all_pass(&r) {
        return Err(r["results"].to_string());
    }
    let t = start.elapsed().as_secs_f64();
    if t >= 1.0 {
        return Err(format!("took {t:.2}s"));
    }
    Ok(format!("{} identity families exact in {t:.2}s", r["results"].as_array().unwrap().len()))
}

fn geometry() -> Outcome {
    let start = Instant::now();
    let field = PrimeField::new(10007).map_err(|e| e.to_string())?;
    let curve = Curve::new(field, 2, 3).map_err(|e| e.to_string())?;
    let mut divisors = 0;
    for n in 5..=8usize {
        let ec = EmbeddedCurve::new(curve, n, n as u64).map_err(|e| e.to_string())?;
        let mut rng = ec.rng();
        for d in 1..n {
            for _ in 0..100 {
                let div = ec.random_divisor(d, &mut rng).map_err(|e| e.to_string())?;
                let rank = ec.divisor_span_rank(&div).map_err(|e| e.to_string())?;
                if rank != d {
                    return Err(format!("n={n}: degree-{d} divisor spans rank {rank}"));
                }
                divisors += 1;
            }
        }
    }
    for (n, d) in [("6", "3"), ("7", "3")] {
        let r = json(&["verify", "smoothness", "--n", n, "--d", d])?;
        if !all_pass(&r) {
            return Err(format!("n={n} d={d}: {}", r["results"]));
        }
        let names: Vec<&str> = r["results"]
            .as_array()
            .unwrap()
            .iter()
            .filter_map(|c| c["name"].as_str())
            .collect();
        if !names.iter().any(|s| s.starts_with("jacobian")) || !names.contains(&format!("(I_Sec{d})_{d} = 0").as_str()) {
            return Err(format!("n={n} d={d}: missing checks {names:?}"));
        }
    }
    let t = start.elapsed().as_secs_f64();
    if t > 120.0 {
        return Err(format!("took {t:.1}s"));
    }
    Ok(format!("{divisors} divisors, jacobian and postulation checks in {t:.1}s"))
}

fn determinism() -> Outcome {
    let commands: &[&[&str]] = &[
        &["formula", "betti", "--n", "8", "--d", "3"],
        &["formula", "en", "--n", "8", "--d", "3"],
        &["formula", "degree", "--n", "8", "--d", "3"],
        &["formula", "kpe", "--n", "8", "--d", "3"],
        &["formula", "rf", "--n", "8", "--d", "3"],
        &["formula", "family", "--n", "8", "--d", "3"],
        &["formula", "det", "--k", "5", "--l", "3"],
        &["formula", "intersection", "--n", "8", "--d", "3"],
        &["formula", "bott", "--n", "4"],
        &["diagram", "secant", "--n", "8", "--d", "3"],
        &["diagram", "scroll", "--n", "8", "--d", "3"],
        &["diagram", "cone", "--n", "8", "--d", "3"],
        &["diagram", "rf", "--n", "8", "--d", "3"],
        &["diagram", "bielliptic", "--g", "6"],
        &["diagram", "rnc", "--k", "4"],
        &["verify", "koszul", "--n", "7", "--d", "3", "--seed", "5"],
        &["verify", "span", "--n", "7", "--d", "3", "--seed", "5"],
        &["verify", "smoothness", "--n", "7", "--d", "3", "--seed", "5"],
        &["verify", "identities", "--max-n", "12"],
    ];
    for args in commands {
        let mut full = args.to_vec();
        full.extend(["--format", "json"]);
        let a = syzygy(&full).stdout;
        let b = syzygy(&full).stdout;
        if a.is_empty() || a != b {
            return Err(format!("`{}` not reproducible", args.join(" ")));
        }
    }
    Ok(format!("{} commands byte-identical across reruns", commands.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 6] = [
        ("tables", tables),
        ("koszul oracle", koszul_oracle),
        ("span experiment", span_experiment),
        ("identities", identities),
        ("geometric properties", geometry),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(msg) => println!("PASS criterion {} ({name}): {msg}", k + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {} ({name}): {msg}", k + 1);
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
