use fixedbitset::FixedBitSet;
use polarium::embed::{self, Embedding};
use polarium::hyperbolic::{self, all_hyperbolic_lines, double_perp, hyperbolic_line};
use polarium::hyperplanes::{self, Classification};
use polarium::linalg::Subspace;
use polarium::props::{self, CheckOptions, Property, Verdict};
use polarium::space::{build_space, BuildOptions, PolarSpace};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CATALOG: [&str; 13] = [
    "W(3,2)", "W(3,3)", "W(5,2)", "Q(4,2)", "Q(4,3)", "Q(6,2)", "Q+(3,3)", "Q+(3,4)", "Q-(5,2)", "H(3,4)", "P(W(3,5))",
    "dual(H(4,4))", "grid(4)",
];

fn build(s: &str) -> PolarSpace {
    build_space(&s.parse().unwrap(), &BuildOptions::default()).unwrap()
}

fn ones(m: &FixedBitSet) -> Vec<usize> {
    m.ones().collect()
}

#[test]
fn catalog_axioms_and_nondegeneracy() {
    for s in CATALOG {
        let sp = build(s);
        sp.check_axioms().unwrap();
        for p in 0..sp.num_points() {
            assert!(sp.perp_row(p).count_ones(..) < sp.num_points(), "{s}: {p}^⊥ is everything");
        }
        assert!(sp.generators().iter().all(|g| g.rank == sp.rank()), "{s}");
        if let Some(form) = sp.form() {
            assert_eq!(form.witt_index().unwrap(), sp.rank(), "{s}");
        }
    }
}

#[test]
fn triple_perp_is_perp() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for s in CATALOG {
        let sp = build(s);
        let n = sp.num_points();
        for _ in 0..200 {
            let k = rng.gen_range(1..=4);
            let xs: Vec<usize> = (0..k).map(|_| rng.gen_range(0..n)).collect();
            let p1 = sp.perp(&xs).unwrap();
            if p1.count_ones(..) == 0 {
                continue;
            }
            let p2 = sp.perp_of_mask(&p1).unwrap();
            let p3 = sp.perp_of_mask(&p2).unwrap();
            assert_eq!(p1, p3, "{s} {xs:?}");
        }
    }
}

#[test]
fn hyperbolic_line_basics() {
    for s in CATALOG {
        let sp = build(s);
        for h in all_hyperbolic_lines(&sp).iter().take(400) {
            let (a, b) = (h.a as usize, h.b as usize);
            assert!(h.contains(a) && h.contains(b));
            for (i, &x) in h.points.iter().enumerate() {
                for &y in &h.points[i + 1..] {
                    assert!(!sp.collinear(x as usize, y as usize));
                }
            }
            let t = sp.perp(&[a, b]).unwrap();
            let dp = sp.perp_of_mask(&t).unwrap();
            assert_eq!(ones(&dp), h.points.iter().map(|&p| p as usize).collect::<Vec<_>>());
            assert_eq!(sp.perp_of_mask(&dp).unwrap(), t, "{s}: triple perp of a pair");
        }
    }
}

#[test]
fn trace_pairs_recover_hyperbolic_line() {
    for s in ["W(3,2)", "W(3,3)"] {
        let sp = build(s);
        for a in 0..sp.num_points() {
            for b in a + 1..sp.num_points() {
                if sp.collinear(a, b) {
                    continue;
                }
                let line = double_perp(&sp, &[a, b]).unwrap();
                let t = ones(&sp.perp(&[a, b]).unwrap());
                for (i, &c) in t.iter().enumerate() {
                    for &d in &t[i + 1..] {
                        assert_eq!(sp.perp(&[c, d]).unwrap(), line, "{s} {a} {b} {c} {d}");
                    }
                }
            }
        }
    }
}

#[test]
fn triples_have_common_neighbours() {
    for s in ["W(3,2)", "W(3,3)"] {
        let sp = build(s);
        let n = sp.num_points();
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    assert!(sp.perp(&[a, b, c]).unwrap().count_ones(..) > 0, "{s} {a} {b} {c}");
                }
            }
        }
    }
}

#[test]
fn triads_centric_in_rank_three() {
    let sp = build("W(5,2)");
    let n = sp.num_points();
    for a in 0..n {
        for b in a + 1..n {
            let ab = sp.perp(&[a, b]).unwrap();
            let hab = (!sp.collinear(a, b)).then(|| double_perp(&sp, &[a, b]).unwrap());
            for c in b + 1..n {
                let mut t = ab.clone();
                t.intersect_with(sp.perp_row(c));
                assert!(sp.has_rank_within(&t, sp.rank() - 1), "triad {a} {b} {c} not centric");
                let opposite = !sp.collinear(a, c) && !sp.collinear(b, c);
                if let Some(h) = &hab {
                    if opposite && !h.contains(c) {
                        let mut radical = sp.perp_of_mask(&t).unwrap();
                        radical.intersect_with(&t);
                        assert_eq!(radical.count_ones(..), 1, "{a} {b} {c}");
                    }
                }
            }
        }
    }
}

// Lines of the linear space (ordinary and hyperbolic) lying inside `mask`.
fn l_lines_within(sp: &PolarSpace, hyper: &[hyperbolic::HyperbolicLine], mask: &FixedBitSet) -> Vec<Vec<u32>> {
    let inside = |l: &[u32]| l.iter().all(|&p| mask.contains(p as usize));
    sp.lines().iter().filter(|l| inside(l)).cloned().chain(hyper.iter().filter(|h| inside(&h.points)).map(|h| h.points.clone())).collect()
}

#[test]
fn point_perps_are_planes() {
    for s in ["W(3,2)", "W(3,3)", "Q(4,2)"] {
        let sp = build(s);
        let hyper = all_hyperbolic_lines(&sp);
        for a in 0..sp.num_points() {
            let lines = l_lines_within(&sp, &hyper, sp.perp_row(a));
            assert!(lines.len() >= 3);
            for (i, x) in lines.iter().enumerate() {
                for y in &lines[i + 1..] {
                    assert!(x.iter().any(|p| y.contains(p)), "{s}: lines in {a}^⊥ miss each other");
                }
            }
        }
    }
}

#[test]
fn induced_hyperbolic_lines_agree() {
    let sp = build("W(5,2)");
    for h in all_hyperbolic_lines(&sp) {
        let trace = ones(&sp.perp(&[h.a as usize, h.b as usize]).unwrap());
        let ind = sp.induced(&trace).unwrap();
        assert_eq!(ind.rank(), 2);
        for x in 0..trace.len() {
            for y in x + 1..trace.len() {
                if ind.collinear(x, y) {
                    continue;
                }
                let local: Vec<usize> = hyperbolic_line(&ind, x, y).unwrap().points.iter().map(|&p| trace[p as usize]).collect();
                assert_eq!(local, ones(&double_perp(&sp, &[trace[x], trace[y]]).unwrap()));
            }
        }
    }
}

#[test]
fn linear_space_projective_iff_symplectic() {
    for s in ["W(3,2)", "W(3,3)", "Q(4,2)", "Q(4,3)", "Q-(5,2)", "H(3,4)", "Q+(3,3)"] {
        let sp = build(s);
        let sym = props::Checker::new(&sp, CheckOptions::default()).is_symplectic().unwrap().verdict == Verdict::Holds;
        let projective = hyperbolic::linear_space(&sp).map(|l| l.is_projective()).unwrap_or(false);
        assert_eq!(projective, sym, "{s}");
    }
}

fn embeddings(sp: &PolarSpace) -> Vec<Embedding> {
    let mut out = vec![embed::natural_embedding(sp).unwrap(), embed::minimal_embedding(sp).unwrap()];
    out.extend(embed::universal_embedding_sp_char2(sp).ok());
    out
}

#[test]
fn singular_hyperplanes_arise_from_every_embedding() {
    for s in ["W(3,2)", "W(3,3)", "Q(4,2)", "Q(4,3)", "Q-(5,2)", "H(3,4)", "Q+(3,3)", "W(5,2)"] {
        let sp = build(s);
        for e in embeddings(&sp) {
            for p in 0..sp.num_points() {
                let h = hyperplanes::singular_hyperplane(&sp, p).unwrap();
                assert!(hyperplanes::inducing_functional(&e, &h).is_some(), "{s} {:?} {p}", e.kind());
            }
        }
    }
}

#[test]
fn arising_all_singular_iff_symplectic() {
    for s in ["W(3,2)", "W(3,3)", "W(5,2)", "Q(4,2)", "Q(4,3)", "Q(6,2)", "Q+(3,3)", "Q+(3,4)", "Q-(5,2)", "H(3,4)"] {
        let sp = build(s);
        let e = embed::minimal_embedding(&sp).unwrap();
        let hs = hyperplanes::arising_hyperplanes(&sp, &e).unwrap();
        for h in &hs {
            assert!(hyperplanes::is_hyperplane(&sp, &h.mask));
        }
        let all_singular = hs.iter().all(|h| hyperplanes::deepest_point(&sp, h).unwrap().is_some());
        let sym = props::Checker::new(&sp, CheckOptions::default()).is_symplectic().unwrap().verdict == Verdict::Holds;
        assert_eq!(all_singular, sym, "{s}");
    }
}

#[test]
fn ovoids_containing_traces() {
    let contains_trace = |s: &str| {
        let sp = build(s);
        let e = embed::minimal_embedding(&sp).unwrap();
        let ovoids: Vec<_> = hyperplanes::arising_hyperplanes(&sp, &e)
            .unwrap()
            .into_iter()
            .filter(|h| hyperplanes::classify(&sp, h).unwrap() == Classification::Ovoid)
            .collect();
        all_hyperbolic_lines(&sp).iter().any(|l| {
            let t = sp.perp(&[l.a as usize, l.b as usize]).unwrap();
            ovoids.iter().any(|o| t.is_subset(&o.mask))
        })
    };
    assert!(!contains_trace("W(3,2)"));
    assert!(!contains_trace("W(3,3)"));
    assert!(contains_trace("Q(4,3)"));
}

#[test]
fn char2_sections_exist() {
    for s in ["W(3,2)", "W(3,4)", "W(5,2)", "W(5,4)"] {
        let sp = build(s);
        let u = embed::universal_embedding_sp_char2(&sp).unwrap();
        let hs = hyperplanes::arising_hyperplanes(&sp, &u).unwrap();
        for l in all_hyperbolic_lines(&sp) {
            let (_, k) = hyperplanes::char2_section(&hs, &l).unwrap_or_else(|| panic!("{s}: no section for {:?}", l.points));
            assert!(k == 0 || k == 2);
        }
    }
}

#[test]
fn onto_embeddings_have_dim_2n() {
    for s in ["W(3,2)", "W(3,3)", "W(5,2)", "Q(4,2)", "Q(4,3)", "Q(6,2)", "Q+(3,3)", "Q-(5,2)", "H(3,4)"] {
        let sp = build(s);
        for e in embeddings(&sp) {
            if e.is_onto() {
                assert_eq!(e.dim(), 2 * sp.rank(), "{s} {:?}", e.kind());
            }
        }
    }
}

#[test]
fn quotient_functoriality_q62() {
    let sp = build("Q(6,2)");
    let nat = embed::natural_embedding(&sp).unwrap();
    let nucleus = sp.form().unwrap().radical();
    assert_eq!(nucleus.rank(), 1);
    // nesting 0 ⊆ N: quotient by 0 is the identity, then by N
    let zero = Subspace::zero(7);
    let step = embed::quotient_embedding(&sp, &nat, &zero).unwrap();
    assert_eq!(step.images(), nat.images());
    let two_step = embed::quotient_embedding(&sp, &step, &nucleus).unwrap();
    let direct = embed::quotient_embedding(&sp, &nat, &nucleus).unwrap();
    assert_eq!(two_step.images(), direct.images());
    assert_eq!(direct.dim(), 6);
    assert!(direct.is_onto());
}

#[test]
fn universal_quotient_recovers_natural() {
    let w = build("W(3,2)");
    let u = embed::universal_embedding_sp_char2(&w).unwrap();
    let q = embed::quotient_embedding(&w, &u, &u.form().radical()).unwrap();
    let nat = embed::natural_embedding(&w).unwrap();
    assert_eq!(q.dim(), 4);
    assert_eq!(q.images(), nat.images());
}

#[test]
fn catalog_equivalences_and_witnesses() {
    for s in CATALOG {
        let sp = build(s);
        let report = props::full_report(&sp, CheckOptions::default()).unwrap();
        for p in Property::ALL {
            let r = &report.properties[&p];
            match &r.verdict {
                Verdict::Fails => props::validate_witness(&sp, r.witness.as_ref().unwrap()).unwrap(),
                Verdict::Holds => assert!(r.witness.is_none()),
                Verdict::Skipped(_) => assert!(sp.form().is_none()),
            }
        }
    }
}
