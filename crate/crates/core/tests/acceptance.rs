//! One PASS/FAIL line per acceptance criterion. Runs without the libtest harness.

use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

use polarium::cli;
use polarium::derived;
use polarium::embed;
use polarium::hyperbolic::all_hyperbolic_lines;
use polarium::hyperplanes::{self, Classification};
use polarium::props::{self, CheckOptions, Property, PropertyReport, Verdict};
use polarium::space::{build_space, BuildOptions, PolarSpace};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

type Outcome = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn build(s: &str) -> PolarSpace {
    build_space(&s.parse().unwrap(), &BuildOptions::default()).unwrap()
}

fn report(s: &str) -> Result<(PolarSpace, PropertyReport), String> {
    let sp = build(s);
    let r = props::full_report(&sp, CheckOptions::default()).map_err(|e| format!("{s}: {e}"))?;
    Ok((sp, r))
}

fn verdict(r: &PropertyReport, p: Property) -> &'static str {
    r.verdict(p).map_or("missing", Verdict::name)
}

fn expect(r: &PropertyReport, want: &[(Property, &str)]) -> Outcome {
    for &(p, v) in want {
        ensure!(verdict(r, p) == v, "{} {}: expected {v}, got {}", r.space, p, verdict(r, p));
    }
    Ok(())
}

fn replay_all(sp: &PolarSpace, r: &PropertyReport) -> Outcome {
    for (p, res) in &r.properties {
        if res.verdict == Verdict::Fails {
            let w = res.witness.as_ref().ok_or_else(|| format!("{} {p}: failure without witness", r.space))?;
            let json = props::witness_to_json(sp, w);
            let back = props::witness_from_json(sp, &json).map_err(|e| e.to_string())?;
            props::validate_witness(sp, &back).map_err(|e| format!("{} {p}: {e}", r.space))?;
        }
    }
    Ok(())
}

fn within(start: Instant, limit: u64) -> Outcome {
    let t = start.elapsed();
    ensure!(t < Duration::from_secs(limit), "took {t:?}, limit {limit}s");
    Ok(())
}

fn c1_symplectic_suite() -> Outcome {
    use Property::*;
    let start = Instant::now();
    for s in ["W(3,2)", "W(3,3)", "W(5,2)", "Q(4,2)", "Q(6,2)"] {
        let (_, r) = report(s)?;
        expect(&r, &[(A, "holds"), (BTriads, "holds"), (BPrime, "holds"), (C, "holds"), (D, "holds"), (Symplectic, "holds")])?;
    }
    within(start, 60)
}

fn c2_negative_matrix() -> Outcome {
    use Property::*;
    let cases: [(&str, &[(Property, &str)]); 5] = [
        ("Q-(5,2)", &[(BTriads, "holds"), (BPrime, "holds"), (A, "fails"), (C, "fails"), (D, "fails"), (Symplectic, "fails")]),
        ("Q+(3,3)", &[(A, "holds"), (BTriads, "fails"), (BPrime, "fails"), (Symplectic, "fails")]),
        ("Q+(3,4)", &[(A, "holds"), (BTriads, "fails"), (BPrime, "fails"), (Symplectic, "fails")]),
        ("Q(4,3)", &[(A, "fails"), (C, "fails"), (D, "fails"), (Symplectic, "fails")]),
        ("H(3,4)", &[(A, "holds"), (BPrime, "fails"), (Symplectic, "fails")]),
    ];
    for (s, want) in cases {
        let (sp, r) = report(s)?;
        expect(&r, want)?;
        replay_all(&sp, &r)?;
    }
    let h = build("H(3,4)");
    ensure!(embed::minimal_embedding(&h).map_err(|e| e.to_string())?.dim() == 4, "H(3,4) minimal embedding is not 4-dimensional");
    Ok(())
}

fn c3_equivalences() -> Outcome {
    for s in [
        "W(3,2)", "W(3,3)", "W(5,2)", "Q(4,2)", "Q(4,3)", "Q(6,2)", "Q+(3,3)", "Q+(3,4)", "Q-(5,2)", "H(3,4)", "P(W(3,5))", "dual(H(4,4))",
        "grid(4)",
    ] {
        let (_, r) = report(s)?;
        let names: Vec<&str> = r.equivalences.iter().map(|e| e.name.as_str()).collect();
        ensure!(names.contains(&"A=regular_pairs"), "{s}: A=regular_pairs not asserted");
        if build(s).form().is_some() {
            ensure!(names.contains(&"B_triads=B_prime"), "{s}: B equivalence not asserted");
            ensure!(names.contains(&"A&B_triads=C=D=symplectic"), "{s}: classical equivalence not asserted");
        }
    }
    Ok(())
}

fn c4_embedding_identities() -> Outcome {
    for (s, equality) in [("W(3,2)", true), ("Q(4,3)", false)] {
        let sp = build(s);
        let e = embed::natural_embedding(&sp).map_err(|e| e.to_string())?;
        ensure!((e.dim() == 2 * sp.rank()) == equality, "{s}: unexpected embedding dimension {}", e.dim());
        let mut pairs: Vec<(usize, usize)> = (0..sp.num_points())
            .flat_map(|a| (a + 1..sp.num_points()).map(move |b| (a, b)))
            .filter(|&(a, b)| !sp.collinear(a, b))
            .collect();
        pairs.shuffle(&mut ChaCha8Rng::seed_from_u64(0));
        for &(a, b) in pairs.iter().take(50) {
            let id = embed::check_emb_identities(&sp, &e, a, b).map_err(|e| e.to_string())?;
            ensure!(id.span_is_perp, "{s} ({a},{b}): span of trace is not the f-perp of codim 2");
            ensure!(id.double_perp_is_preimage, "{s} ({a},{b}): double perp is not the preimage of the secant");
            ensure!(id.regular_equality == equality, "{s} ({a},{b}): N^⊥∩N′^⊥ equality is {}", id.regular_equality);
        }
    }
    Ok(())
}

fn c5_quotients() -> Outcome {
    let q = build("Q(4,2)");
    let m = embed::minimal_embedding(&q).map_err(|e| e.to_string())?;
    ensure!(m.dim() == 4 && m.is_onto() && m.images().len() == 15, "Q(4,2) minimal embedding: dim {}", m.dim());
    let w = build("W(3,2)");
    let u = embed::universal_embedding_sp_char2(&w).map_err(|e| e.to_string())?;
    let mut imgs = u.images().to_vec();
    imgs.sort();
    let mut qs = q.coords().unwrap().to_vec();
    qs.sort();
    ensure!(imgs == qs, "universal image of W(3,2) is not the point set of Q(4,2)");
    let back = embed::quotient_embedding(&w, &u, &u.form().radical()).map_err(|e| e.to_string())?;
    let nat = embed::natural_embedding(&w).map_err(|e| e.to_string())?;
    ensure!(back.images() == nat.images(), "nucleus quotient differs from the natural embedding");
    Ok(())
}

fn c6_char2_sections() -> Outcome {
    for s in ["W(3,2)", "W(3,4)"] {
        let sp = build(s);
        let u = embed::universal_embedding_sp_char2(&sp).map_err(|e| e.to_string())?;
        let hs = hyperplanes::arising_hyperplanes(&sp, &u).map_err(|e| e.to_string())?;
        for l in all_hyperbolic_lines(&sp) {
            ensure!(hyperplanes::char2_section(&hs, &l).is_some(), "{s}: no 0/2 section for {:?}", l.points);
        }
    }
    let sp = build("W(3,3)");
    let e = embed::natural_embedding(&sp).map_err(|e| e.to_string())?;
    let hs = hyperplanes::arising_hyperplanes(&sp, &e).map_err(|e| e.to_string())?;
    let lines = all_hyperbolic_lines(&sp);
    for h in &hs {
        ensure!(hyperplanes::classify(&sp, h).map_err(|e| e.to_string())? == Classification::Singular, "W(3,3): non-singular arising hyperplane");
        ensure!(lines.iter().all(|l| l.points.iter().any(|&p| h.contains(p as usize))), "W(3,3): hyperplane misses a hyperbolic line");
    }
    Ok(())
}

fn c7_payne() -> Outcome {
    let start = Instant::now();
    let base = build("W(3,5)");
    let p = derived::payne_derive(&base, 0, &BuildOptions::default()).map_err(|e| e.to_string())?;
    ensure!(p.num_points() == 125, "{} points", p.num_points());
    ensure!(p.order() == Some((4, 6)), "order {:?}", p.order());
    p.check_axioms().map_err(|e| e.to_string())?;
    for h in all_hyperbolic_lines(&p).iter().take(50) {
        let t = p.perp(&[h.a as usize, h.b as usize]).map_err(|e| e.to_string())?;
        ensure!(t.count_ones(..) == 7, "trace size {}", t.count_ones(..));
    }
    let w = derived::payne_a_witness(&base, 0, &p).map_err(|e| e.to_string())?;
    props::validate_witness(&p, &props::Witness::A { a: w.a, b: w.b, generator: w.line }).map_err(|e| e.to_string())?;
    let (sp, r) = report("P(W(3,5))")?;
    ensure!(verdict(&r, Property::A) == "fails", "P(W(3,5)) A {}", verdict(&r, Property::A));
    replay_all(&sp, &r)?;
    within(start, 30)
}

fn c8_dual_hermitian() -> Outcome {
    let start = Instant::now();
    let (sp, r) = report("dual(H(4,4))")?;
    ensure!(sp.num_points() == 297 && sp.num_lines() == 165, "{} points, {} lines", sp.num_points(), sp.num_lines());
    ensure!(sp.order() == Some((8, 4)), "order {:?}", sp.order());
    ensure!(all_hyperbolic_lines(&sp).iter().all(|h| h.points.len() == 2), "hyperbolic line of size > 2");
    ensure!(verdict(&r, Property::A) == "fails", "A {}", verdict(&r, Property::A));
    replay_all(&sp, &r)?;
    within(start, 60)
}

fn c9_determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let specs = [
        "W(3,2)", "W(3,3)", "W(5,2)", "Q(4,2)", "Q(4,3)", "Q(6,2)", "Q+(3,3)", "Q+(3,4)", "Q-(5,2)", "H(3,4)", "P(W(3,5))", "dual(H(4,4))",
        "grid(4)",
    ];
    let mut outputs = Vec::new();
    for (i, workers) in ["1", "4"].iter().enumerate() {
        let path = dir.path().join(format!("r{i}.json"));
        let mut args = vec!["polarium", "check", "--workers", workers, "--out", path.to_str().unwrap()];
        args.extend(specs);
        let code = cli::run(args, &mut Vec::new(), &mut Vec::new());
        ensure!(code == 0, "check exited {code}");
        outputs.push(std::fs::read(&path).map_err(|e| e.to_string())?);
    }
    ensure!(outputs[0] == outputs[1], "reports differ between runs");
    let path = dir.path().join("r0.json");
    let doc: Value = serde_json::from_slice(&outputs[0]).map_err(|e| e.to_string())?;
    let mut replayed = 0;
    for rep in doc.as_array().unwrap() {
        let space = rep["space"].as_str().unwrap();
        for (prop, entry) in rep["properties"].as_object().unwrap() {
            if entry["verdict"] == "fails" {
                let id = format!("{space}/{prop}");
                let mut err = Vec::new();
                let code = cli::run(["polarium", "replay", path.to_str().unwrap(), &id], &mut Vec::new(), &mut err);
                ensure!(code == 0, "replay {id}: {}", String::from_utf8_lossy(&err));
                replayed += 1;
            }
        }
    }
    ensure!(replayed > 0, "no witnesses replayed");
    Ok(())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("1 symplectic suite", c1_symplectic_suite),
        ("2 negative matrix", c2_negative_matrix),
        ("3 equivalence assertions", c3_equivalences),
        ("4 embedding identities", c4_embedding_identities),
        ("5 quotient and nucleus", c5_quotients),
        ("6 characteristic-2 sections", c6_char2_sections),
        ("7 Payne derivation", c7_payne),
        ("8 dual H(4,4)", c8_dual_hermitian),
        ("9 determinism and replay", c9_determinism),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (name, f) in criteria {
        if !filter.is_empty() && !filter.iter().any(|x| name.contains(x.as_str())) {
            continue;
        }
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let ms = start.elapsed().as_millis();
        match outcome {
            Ok(()) => println!("PASS criterion {name} ({ms} ms)"),
            Err(e) => {
                failed += 1;
                println!("FAIL criterion {name}: {e}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
