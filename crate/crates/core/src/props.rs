//! The characterizing properties (A), (B) via centric triads and (B′), (C), (D),
//! regular pairs and the symplectic test, with replayable failure witnesses.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;
use std::time::Instant;

use fixedbitset::FixedBitSet;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::embed::{self, Embedding};
use crate::error::{Error, Result};
use crate::forms::{CanonicalSpaceSpec, ClassicalFamily};
use crate::hyperbolic;
use crate::hyperplanes::{self, Hyperplane};
use crate::linalg::{self, DualVector};
use crate::space::PolarSpace;

pub const DEFAULT_TRIPLE_BOUND: u64 = 100_000_000;
pub const DEFAULT_IDENTITY_SAMPLES: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Property {
    A,
    BTriads,
    BPrime,
    C,
    D,
    RegularPairs,
    Symplectic,
}

impl Property {
    pub const ALL: [Property; 7] = [
        Property::A,
        Property::BTriads,
        Property::BPrime,
        Property::C,
        Property::D,
        Property::RegularPairs,
        Property::Symplectic,
    ];

    pub fn key(self) -> &'static str {
        match self {
            Property::A => "A",
            Property::BTriads => "B_triads",
            Property::BPrime => "B_prime",
            Property::C => "C",
            Property::D => "D",
            Property::RegularPairs => "regular_pairs",
            Property::Symplectic => "symplectic",
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

impl FromStr for Property {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Property::ALL
            .into_iter()
            .find(|p| p.key() == s)
            .ok_or_else(|| Error::Witness(format!("unknown property {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails,
    Skipped(String),
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::Skipped(_) => "skipped",
        }
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Verdict::Holds => Some(true),
            Verdict::Fails => Some(false),
            Verdict::Skipped(_) => None,
        }
    }
}

/// A failing configuration, in point indices of the space it was found in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// `M ∩ {a,b}^⊥` is a hyperplane of the generator `M` but `M ∩ {a,b}^⊥⊥ = ∅`.
    A { a: usize, b: usize, generator: Vec<u32> },
    /// Opposite generators `N, N′` of `{a,b}^⊥` with `N^⊥ ∩ N′^⊥ ≠ {a,b}^⊥⊥`.
    RegularPair { a: usize, b: usize, n1: Vec<u32>, n2: Vec<u32> },
    /// `{a,b,c}^⊥` contains no sub-generator.
    Triad { a: usize, b: usize, c: usize },
    /// An arising hyperplane containing `{a,b}^⊥` without a generator.
    BPrime { a: usize, b: usize, functional: DualVector },
    /// An arising hyperplane containing `{a,b}^⊥` with no deepest point in `{a,b}^⊥⊥`.
    C { a: usize, b: usize, functional: DualVector },
    /// `p^⊥` misses `{a,b}^⊥⊥`.
    D { p: usize, a: usize, b: usize },
    /// The minimal embedding is not onto a `2n`-dimensional projective space.
    Symplectic { dim: usize, image_points: usize, target_points: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyResult {
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    pub checked_count: u64,
    pub millis: Option<u64>,
}

impl PropertyResult {
    fn skipped(reason: &str) -> PropertyResult {
        PropertyResult { verdict: Verdict::Skipped(reason.into()), witness: None, checked_count: 0, millis: None }
    }

    fn from_search(witness: Option<Witness>, checked_count: u64) -> PropertyResult {
        let verdict = if witness.is_some() { Verdict::Fails } else { Verdict::Holds };
        PropertyResult { verdict, witness, checked_count, millis: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Equivalence {
    pub name: String,
    pub holds: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyReport {
    pub space: String,
    pub points: usize,
    pub lines: usize,
    pub rank: usize,
    pub properties: BTreeMap<Property, PropertyResult>,
    pub equivalences: Vec<Equivalence>,
}

impl PropertyReport {
    pub fn verdict(&self, p: Property) -> Option<&Verdict> {
        self.properties.get(&p).map(|r| &r.verdict)
    }

    pub fn violations(&self) -> impl Iterator<Item = &Equivalence> {
        self.equivalences.iter().filter(|e| !e.holds)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckOptions {
    pub triple_bound: u64,
    pub seed: u64,
    pub identity_samples: usize,
    pub timings: bool,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions { triple_bound: DEFAULT_TRIPLE_BOUND, seed: 0, identity_samples: DEFAULT_IDENTITY_SAMPLES, timings: false }
    }
}

/// `{a,b}^⊥` and `{a,b}^⊥⊥` for the smallest pair on each hyperbolic line.
#[derive(Debug, Clone)]
pub struct Trace {
    pub a: usize,
    pub b: usize,
    pub trace: FixedBitSet,
    pub line: FixedBitSet,
}

/// Embedding used for the hyperplane-based checks: the universal one for `W(2n-1, q)`
/// with `q` even, the natural one for other form-backed spaces.
pub fn check_embedding(space: &PolarSpace) -> Option<Embedding> {
    space.form()?;
    let even_w = matches!(space.spec(), Some(CanonicalSpaceSpec::Classical { family: ClassicalFamily::W, q, .. }) if q % 2 == 0);
    if even_w {
        embed::universal_embedding_sp_char2(space).ok()
    } else {
        embed::natural_embedding(space).ok()
    }
}

/// Shared, lazily computed data for the checkers of one space.
pub struct Checker<'a> {
    space: &'a PolarSpace,
    opts: CheckOptions,
    traces: OnceLock<Vec<Trace>>,
    embedding: OnceLock<Option<Embedding>>,
    hyperplanes: OnceLock<Result<Vec<Hyperplane>>>,
}

impl<'a> Checker<'a> {
    pub fn new(space: &'a PolarSpace, opts: CheckOptions) -> Checker<'a> {
        Checker { space, opts, traces: OnceLock::new(), embedding: OnceLock::new(), hyperplanes: OnceLock::new() }
    }

    pub fn traces(&self) -> &[Trace] {
        self.traces.get_or_init(|| {
            let s = self.space;
            hyperbolic::all_hyperbolic_lines(s)
                .into_par_iter()
                .map(|h| {
                    let (a, b) = (h.a as usize, h.b as usize);
                    Trace { a, b, trace: s.perp(&[a, b]).expect("points of the space"), line: h.mask(s) }
                })
                .collect()
        })
    }

    pub fn embedding(&self) -> Option<&Embedding> {
        self.embedding.get_or_init(|| check_embedding(self.space)).as_ref()
    }

    fn hyperplanes(&self) -> Result<&[Hyperplane]> {
        let e = self.embedding().ok_or(Error::CombinatorialSpace)?;
        match self.hyperplanes.get_or_init(|| hyperplanes::arising_hyperplanes(self.space, e)) {
            Ok(h) => Ok(h),
            Err(err) => Err(err.clone()),
        }
    }

    /// Whether `mask` contains a singular subspace of rank `r`.
    fn contains_rank(&self, mask: &FixedBitSet, r: usize) -> bool {
        match r {
            0 => true,
            1 => !mask.is_clear(),
            2 => self.space.lines().iter().any(|l| l.iter().all(|&p| mask.contains(p as usize))),
            _ => self.space.has_rank_within(mask, r),
        }
    }

    pub fn check_a(&self) -> Result<PropertyResult> {
        let s = self.space;
        let n = s.rank();
        let gens: Vec<FixedBitSet> = s.generators().iter().map(|g| s.mask(g.points.iter().map(|&p| p as usize))).collect();
        let traces = self.traces();
        let witness = traces.par_iter().find_map_first(|t| {
            s.generators().iter().zip(&gens).find_map(|(g, m)| {
                let mut meet = m.clone();
                meet.intersect_with(&t.trace);
                if meet.is_clear() || !m.is_disjoint(&t.line) {
                    return None;
                }
                let pts: Vec<usize> = meet.ones().collect();
                let r = s.span_singular(&pts).expect("inside a generator").rank;
                (r + 1 == n).then(|| Witness::A { a: t.a, b: t.b, generator: g.points.clone() })
            })
        });
        Ok(PropertyResult::from_search(witness, (traces.len() * gens.len()) as u64))
    }

    pub fn check_regular_pairs(&self) -> Result<PropertyResult> {
        let traces = self.traces();
        let found: Result<Option<Witness>> = traces
            .par_iter()
            .map(|t| self.regular_pair_failure(t))
            .find_map_first(|r| match r {
                Ok(None) => None,
                other => Some(other),
            })
            .unwrap_or(Ok(None));
        Ok(PropertyResult::from_search(found?, traces.len() as u64))
    }

    fn regular_pair_failure(&self, t: &Trace) -> Result<Option<Witness>> {
        let s = self.space;
        let pts: Vec<usize> = t.trace.ones().collect();
        let ind = s.induced(&pts)?;
        if ind.rank() + 1 != s.rank() {
            return Err(Error::InducedDegenerate(format!(
                "trace of ({}, {}) has rank {}, expected {}",
                t.a,
                t.b,
                ind.rank(),
                s.rank() - 1
            )));
        }
        let lift = |g: &[u32]| g.iter().map(|&p| pts[p as usize] as u32).collect::<Vec<u32>>();
        let gens = ind.generators();
        let mut opposite = 0;
        for (i, x) in gens.iter().enumerate() {
            for y in &gens[i + 1..] {
                if !ind.are_opposite(x, y)? {
                    continue;
                }
                opposite += 1;
                let (n1, n2) = (lift(&x.points), lift(&y.points));
                let all: Vec<usize> = n1.iter().chain(&n2).map(|&p| p as usize).collect();
                if s.perp(&all)? != t.line {
                    return Ok(Some(Witness::RegularPair { a: t.a, b: t.b, n1, n2 }));
                }
            }
        }
        if opposite == 0 {
            return Err(Error::InducedDegenerate(format!("trace of ({}, {}) has no opposite generators", t.a, t.b)));
        }
        Ok(None)
    }

    pub fn check_centric_triads(&self) -> Result<PropertyResult> {
        let s = self.space;
        let n = s.num_points() as u64;
        let triples = n * n.saturating_sub(1) * n.saturating_sub(2) / 6;
        if triples > self.opts.triple_bound {
            return Err(Error::EnumerationBound { requested: triples, bound: self.opts.triple_bound });
        }
        let r = s.rank() - 1;
        let np = s.num_points();
        let witness = (0..np).into_par_iter().find_map_first(|a| {
            for b in a + 1..np {
                let mut ab = s.perp_row(a).clone();
                ab.intersect_with(s.perp_row(b));
                for c in b + 1..np {
                    let mut abc = ab.clone();
                    abc.intersect_with(s.perp_row(c));
                    if !self.contains_rank(&abc, r) {
                        return Some(Witness::Triad { a, b, c });
                    }
                }
            }
            None
        });
        Ok(PropertyResult::from_search(witness, triples))
    }

    /// Traces contained in `h`, in trace order.
    fn containing<'b>(&'b self, h: &'b Hyperplane) -> impl Iterator<Item = &'b Trace> + 'b {
        self.traces().iter().filter(move |t| t.trace.is_subset(&h.mask))
    }

    pub fn check_b_prime(&self) -> Result<PropertyResult> {
        if self.embedding().is_none() {
            return Ok(PropertyResult::skipped("no embedding"));
        }
        let s = self.space;
        let hs = self.hyperplanes()?;
        let n = s.rank();
        let witness = hs.par_iter().find_map_first(|h| {
            let t = self.containing(h).next()?;
            (!self.contains_rank(&h.mask, n))
                .then(|| Witness::BPrime { a: t.a, b: t.b, functional: h.dual_vector().expect("arising").clone() })
        });
        Ok(PropertyResult::from_search(witness, hs.len() as u64))
    }

    pub fn check_c(&self) -> Result<PropertyResult> {
        if self.embedding().is_none() {
            return Ok(PropertyResult::skipped("no embedding"));
        }
        let s = self.space;
        let hs = self.hyperplanes()?;
        let found: Result<Option<Witness>> = hs
            .par_iter()
            .map(|h| -> Result<Option<Witness>> {
                let mut ts = self.containing(h).peekable();
                if ts.peek().is_none() {
                    return Ok(None);
                }
                let deep = hyperplanes::deepest_point(s, h)?;
                Ok(ts
                    .find(|t| deep.is_none_or(|d| !t.line.contains(d)))
                    .map(|t| Witness::C { a: t.a, b: t.b, functional: h.dual_vector().expect("arising").clone() }))
            })
            .find_map_first(|r| match r {
                Ok(None) => None,
                other => Some(other),
            })
            .unwrap_or(Ok(None));
        Ok(PropertyResult::from_search(found?, hs.len() as u64))
    }

    pub fn check_d(&self) -> Result<PropertyResult> {
        let s = self.space;
        let traces = self.traces();
        let witness = (0..s.num_points()).into_par_iter().find_map_first(|p| {
            let row = s.perp_row(p);
            traces.iter().find(|t| row.is_disjoint(&t.line)).map(|t| Witness::D { p, a: t.a, b: t.b })
        });
        Ok(PropertyResult::from_search(witness, (s.num_points() * traces.len()) as u64))
    }

    pub fn is_symplectic(&self) -> Result<PropertyResult> {
        let s = self.space;
        if s.form().is_none() {
            return Ok(PropertyResult::skipped("no embedding"));
        }
        let m = embed::minimal_embedding(s)?;
        let target = linalg::projective_count(m.field().order(), m.dim());
        let ok = m.dim() == 2 * s.rank() && m.images().len() == target;
        let witness = (!ok).then(|| Witness::Symplectic { dim: m.dim(), image_points: m.images().len(), target_points: target });
        Ok(PropertyResult::from_search(witness, m.images().len() as u64))
    }

    pub fn check(&self, p: Property) -> Result<PropertyResult> {
        let start = Instant::now();
        let mut r = match p {
            Property::A => self.check_a(),
            Property::BTriads => self.check_centric_triads(),
            Property::BPrime => self.check_b_prime(),
            Property::C => self.check_c(),
            Property::D => self.check_d(),
            Property::RegularPairs => self.check_regular_pairs(),
            Property::Symplectic => self.is_symplectic(),
        }?;
        if self.opts.timings {
            r.millis = Some(start.elapsed().as_millis() as u64);
        }
        Ok(r)
    }

    /// Double-perp identities on sampled non-collinear pairs of the minimal embedding.
    pub fn embedding_identities(&self) -> Result<Option<Equivalence>> {
        let s = self.space;
        let Ok(e) = embed::minimal_embedding(s) else { return Ok(None) };
        let mut pairs: Vec<(usize, usize)> = (0..s.num_points())
            .flat_map(|a| (a + 1..s.num_points()).filter(move |&b| !s.collinear(a, b)).map(move |b| (a, b)))
            .collect();
        let mut rng = ChaCha8Rng::seed_from_u64(self.opts.seed);
        pairs.shuffle(&mut rng);
        pairs.truncate(self.opts.identity_samples);
        pairs.sort_unstable();
        let mut failed = Vec::new();
        for &(a, b) in &pairs {
            if !embed::check_emb_identities(s, &e, a, b)?.holds() {
                failed.push((a, b));
            }
        }
        let detail = match failed.first() {
            None => format!("{} sampled pairs, dim {} vs 2n = {}", pairs.len(), e.dim(), 2 * s.rank()),
            Some(&(a, b)) => format!("identity fails at ({}, {})", s.label(a), s.label(b)),
        };
        Ok(Some(Equivalence { name: "emb_identities".into(), holds: failed.is_empty(), detail }))
    }
}

fn agree(name: &str, entries: &[(Property, Option<bool>)]) -> Option<Equivalence> {
    let known: Vec<(Property, bool)> = entries.iter().filter_map(|&(p, v)| v.map(|v| (p, v))).collect();
    if known.len() < 2 {
        return None;
    }
    let holds = known.iter().all(|&(_, v)| v == known[0].1);
    let detail = known.iter().map(|(p, v)| format!("{p}={}", if *v { "holds" } else { "fails" })).collect::<Vec<_>>().join(", ");
    Some(Equivalence { name: name.into(), holds, detail })
}

/// Run the requested properties and the equivalence checks without failing on violations.
pub fn run_report(space: &PolarSpace, props: &[Property], opts: CheckOptions) -> Result<PropertyReport> {
    let checker = Checker::new(space, opts);
    let mut properties = BTreeMap::new();
    for &p in props {
        properties.insert(p, checker.check(p)?);
    }
    let v = |p: Property| properties.get(&p).and_then(|r: &PropertyResult| r.verdict.as_bool());
    let mut equivalences = Vec::new();
    equivalences.extend(agree("A=regular_pairs", &[(Property::A, v(Property::A)), (Property::RegularPairs, v(Property::RegularPairs))]));
    equivalences
        .extend(agree("B_triads=B_prime", &[(Property::BTriads, v(Property::BTriads)), (Property::BPrime, v(Property::BPrime))]));
    if space.form().is_some() {
        let ab = match (v(Property::A), v(Property::BTriads)) {
            (Some(a), Some(b)) => Some(a && b),
            _ => None,
        };
        let entries = [
            (Property::A, ab),
            (Property::C, v(Property::C)),
            (Property::D, v(Property::D)),
            (Property::Symplectic, v(Property::Symplectic)),
        ];
        equivalences.extend(agree("A&B_triads=C=D=symplectic", &entries).map(|mut e| {
            e.detail = e.detail.replacen("A=", "A&B_triads=", 1);
            e
        }));
        if opts.identity_samples > 0 {
            equivalences.extend(checker.embedding_identities()?);
        }
    }
    Ok(PropertyReport {
        space: space.name().to_string(),
        points: space.num_points(),
        lines: space.num_lines(),
        rank: space.rank(),
        properties,
        equivalences,
    })
}

/// All properties; a violated equivalence is an error.
pub fn full_report(space: &PolarSpace, opts: CheckOptions) -> Result<PropertyReport> {
    let report = run_report(space, &Property::ALL, opts)?;
    if let Some(e) = report.violations().next() {
        return Err(Error::Equivalence { space: report.space.clone(), name: e.name.clone(), detail: e.detail.clone() });
    }
    Ok(report)
}

fn bad(msg: impl Into<String>) -> Error {
    Error::Witness(msg.into())
}

fn noncollinear(space: &PolarSpace, a: usize, b: usize) -> Result<()> {
    if a >= space.num_points() || b >= space.num_points() || a == b || space.collinear(a, b) {
        return Err(bad("defining points are equal or collinear"));
    }
    Ok(())
}

/// Re-check a witness against the space; `Ok` means the failure is real.
pub fn validate_witness(space: &PolarSpace, w: &Witness) -> Result<()> {
    let n = space.rank();
    let checker = Checker::new(space, CheckOptions::default());
    match w {
        Witness::A { a, b, generator } => {
            noncollinear(space, *a, *b)?;
            if !space.generators().iter().any(|g| &g.points == generator) {
                return Err(bad("not a generator"));
            }
            let trace = space.perp(&[*a, *b])?;
            let line = hyperbolic::double_perp(space, &[*a, *b])?;
            let meet: Vec<usize> = generator.iter().map(|&p| p as usize).filter(|&p| trace.contains(p)).collect();
            if meet.is_empty() || space.span_singular(&meet)?.rank + 1 != n {
                return Err(bad("generator does not meet the trace in a hyperplane"));
            }
            if generator.iter().any(|&p| line.contains(p as usize)) {
                return Err(bad("generator meets the hyperbolic line"));
            }
            Ok(())
        }
        Witness::RegularPair { a, b, n1, n2 } => {
            noncollinear(space, *a, *b)?;
            let trace = space.perp(&[*a, *b])?;
            for g in [n1, n2] {
                let pts: Vec<usize> = g.iter().map(|&p| p as usize).collect();
                if pts.iter().any(|&p| p >= space.num_points() || !trace.contains(p)) {
                    return Err(bad("generator outside the trace"));
                }
                let span = space.span_singular(&pts)?;
                if span.points != *g || span.rank + 1 != n {
                    return Err(bad("not a generator of the trace"));
                }
            }
            let p1 = space.perp(&n1.iter().map(|&p| p as usize).collect::<Vec<_>>())?;
            if n2.iter().any(|&p| p1.contains(p as usize)) {
                return Err(bad("generators are not opposite"));
            }
            let all: Vec<usize> = n1.iter().chain(n2).map(|&p| p as usize).collect();
            if space.perp(&all)? == hyperbolic::double_perp(space, &[*a, *b])? {
                return Err(bad("the pair is regular for these generators"));
            }
            Ok(())
        }
        Witness::Triad { a, b, c } => {
            let pts = [*a, *b, *c];
            if a == b || b == c || a == c {
                return Err(bad("triad points are not distinct"));
            }
            let p = space.perp(&pts)?;
            if checker.contains_rank(&p, n - 1) {
                return Err(bad("the triad is centric"));
            }
            Ok(())
        }
        Witness::BPrime { a, b, functional } | Witness::C { a, b, functional } => {
            noncollinear(space, *a, *b)?;
            let e = checker.embedding().ok_or(Error::CombinatorialSpace)?;
            let h = hyperplanes::arising_hyperplane(space, e, functional.clone())?;
            if !space.perp(&[*a, *b])?.is_subset(&h.mask) {
                return Err(bad("hyperplane does not contain the trace"));
            }
            if matches!(w, Witness::BPrime { .. }) {
                if checker.contains_rank(&h.mask, n) {
                    return Err(bad("hyperplane contains a generator"));
                }
            } else {
                let line = hyperbolic::double_perp(space, &[*a, *b])?;
                if let Some(d) = hyperplanes::deepest_point(space, &h)? {
                    if line.contains(d) {
                        return Err(bad("deepest point lies on the hyperbolic line"));
                    }
                }
            }
            Ok(())
        }
        Witness::D { p, a, b } => {
            noncollinear(space, *a, *b)?;
            if *p >= space.num_points() {
                return Err(Error::ForeignPoint(*p));
            }
            let line = hyperbolic::double_perp(space, &[*a, *b])?;
            if !space.perp_row(*p).is_disjoint(&line) {
                return Err(bad("p^⊥ meets the hyperbolic line"));
            }
            Ok(())
        }
        Witness::Symplectic { dim, image_points, target_points } => {
            let m = embed::minimal_embedding(space)?;
            let target = linalg::projective_count(m.field().order(), m.dim());
            if (m.dim(), m.images().len(), target) != (*dim, *image_points, *target_points) {
                return Err(bad("minimal embedding data differ"));
            }
            if m.dim() == 2 * n && m.images().len() == target {
                return Err(bad("the minimal embedding is symplectic"));
            }
            Ok(())
        }
    }
}

fn labels(space: &PolarSpace, pts: &[u32]) -> Value {
    Value::from(pts.iter().map(|&p| space.label(p as usize).clone()).collect::<Vec<_>>())
}

/// JSON form of a witness, with points written as coordinates or labels.
pub fn witness_to_json(space: &PolarSpace, w: &Witness) -> Value {
    let l = |p: usize| space.label(p).clone();
    let fv = |u: &DualVector| Value::from(u.coords().iter().map(|&c| c as u64).collect::<Vec<_>>());
    match w {
        Witness::A { a, b, generator } => json!({"kind": "A", "a": l(*a), "b": l(*b), "generator": labels(space, generator)}),
        Witness::RegularPair { a, b, n1, n2 } => {
            json!({"kind": "regular_pair", "a": l(*a), "b": l(*b), "n1": labels(space, n1), "n2": labels(space, n2)})
        }
        Witness::Triad { a, b, c } => json!({"kind": "triad", "a": l(*a), "b": l(*b), "c": l(*c)}),
        Witness::BPrime { a, b, functional } => json!({"kind": "B_prime", "a": l(*a), "b": l(*b), "functional": fv(functional)}),
        Witness::C { a, b, functional } => json!({"kind": "C", "a": l(*a), "b": l(*b), "functional": fv(functional)}),
        Witness::D { p, a, b } => json!({"kind": "D", "p": l(*p), "a": l(*a), "b": l(*b)}),
        Witness::Symplectic { dim, image_points, target_points } => {
            json!({"kind": "symplectic", "dim": dim, "image_points": image_points, "target_points": target_points})
        }
    }
}

pub fn witness_from_json(space: &PolarSpace, v: &Value) -> Result<Witness> {
    let field = |k: &str| v.get(k).ok_or_else(|| bad(format!("missing field {k:?}")));
    let point = |k: &str| -> Result<usize> {
        let lv = field(k)?;
        space.point_by_label(lv).ok_or_else(|| bad(format!("{lv} is not a point of {}", space.name())))
    };
    let set = |k: &str| -> Result<Vec<u32>> {
        let arr = field(k)?.as_array().ok_or_else(|| bad(format!("{k:?} is not a list")))?;
        let mut out = arr
            .iter()
            .map(|lv| space.point_by_label(lv).map(|p| p as u32).ok_or_else(|| bad(format!("{lv} is not a point"))))
            .collect::<Result<Vec<_>>>()?;
        out.sort_unstable();
        Ok(out)
    };
    let number = |k: &str| field(k)?.as_u64().map(|x| x as usize).ok_or_else(|| bad(format!("{k:?} is not a number")));
    let functional = || -> Result<DualVector> {
        let arr = field("functional")?.as_array().ok_or_else(|| bad("functional is not a list"))?;
        let coords = arr.iter().map(|c| c.as_u64().map(|c| c as u16).ok_or_else(|| bad("bad coordinate"))).collect::<Result<Vec<_>>>()?;
        let f = check_embedding(space).ok_or(Error::CombinatorialSpace)?;
        if coords.iter().any(|&c| c as usize >= f.field().order()) {
            return Err(bad("coordinate outside the field"));
        }
        Ok(DualVector(linalg::normalize(f.field(), &coords)?))
    };
    let kind = field("kind")?.as_str().ok_or_else(|| bad("kind is not a string"))?;
    Ok(match kind {
        "A" => Witness::A { a: point("a")?, b: point("b")?, generator: set("generator")? },
        "regular_pair" => Witness::RegularPair { a: point("a")?, b: point("b")?, n1: set("n1")?, n2: set("n2")? },
        "triad" => Witness::Triad { a: point("a")?, b: point("b")?, c: point("c")? },
        "B_prime" => Witness::BPrime { a: point("a")?, b: point("b")?, functional: functional()? },
        "C" => Witness::C { a: point("a")?, b: point("b")?, functional: functional()? },
        "D" => Witness::D { p: point("p")?, a: point("a")?, b: point("b")? },
        "symplectic" => Witness::Symplectic {
            dim: number("dim")?,
            image_points: number("image_points")?,
            target_points: number("target_points")?,
        },
        other => return Err(bad(format!("unknown witness kind {other:?}"))),
    })
}
