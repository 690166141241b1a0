//! Polar spaces as point-line incidence structures, either read off a form or
//! given by explicit line lists.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::OnceLock;

use fixedbitset::FixedBitSet;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::forms::{CanonicalSpaceSpec, Form};
use crate::gf::{Elem, Field};
use crate::linalg::{self, ProjPoint, Subspace};

pub const DEFAULT_POINT_BOUND: usize = 2000;
const NO_LINE: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BuildOptions {
    pub max_points: usize,
    pub field_bound: u64,
    pub enumeration_bound: u64,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            max_points: DEFAULT_POINT_BOUND,
            field_bound: crate::gf::DEFAULT_FIELD_BOUND,
            enumeration_bound: linalg::DEFAULT_ENUMERATION_BOUND,
        }
    }
}

#[derive(Clone)]
pub enum Backing {
    Form { form: Form, coords: Vec<ProjPoint>, index: HashMap<ProjPoint, u32> },
    Combinatorial,
}

/// A singular subspace given by its sorted point indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SingularSubspace {
    pub points: Vec<u32>,
    pub rank: usize,
}

impl SingularSubspace {
    pub fn contains(&self, p: u32) -> bool {
        self.points.binary_search(&p).is_ok()
    }

    /// The linear subspace carried by a form-backed singular subspace.
    pub fn linear(&self, space: &PolarSpace) -> Option<Subspace> {
        let (field, coords) = (space.field()?, space.coords()?);
        let vecs = self.points.iter().map(|&p| coords[p as usize].coords().to_vec()).collect::<Vec<_>>();
        linalg::span(field, coords[0].dim(), &vecs).ok()
    }
}

pub struct PolarSpace {
    name: String,
    spec: Option<CanonicalSpaceSpec>,
    backing: Backing,
    labels: Vec<Value>,
    label_index: HashMap<String, u32>,
    lines: Vec<Vec<u32>>,
    lines_through: Vec<Vec<u32>>,
    line_of: Vec<u32>,
    perp: Vec<FixedBitSet>,
    rank: usize,
    grid: bool,
    generators: OnceLock<Vec<SingularSubspace>>,
}

impl fmt::Debug for PolarSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PolarSpace")
            .field("name", &self.name)
            .field("points", &self.num_points())
            .field("lines", &self.lines.len())
            .field("rank", &self.rank)
            .finish()
    }
}

/// Build any catalog space.
pub fn build_space(spec: &CanonicalSpaceSpec, opts: &BuildOptions) -> Result<PolarSpace> {
    spec.validate()?;
    match spec {
        CanonicalSpaceSpec::Classical { family, proj_dim, q } => {
            let field = field_of(*q, opts)?;
            let form = Form::canonical(*family, proj_dim + 1, &field)?;
            PolarSpace::from_form(spec.to_string(), Some(spec.clone()), form, opts)
        }
        CanonicalSpaceSpec::Grid { order } => {
            let s = crate::derived::grid(*order as usize, opts)?;
            Ok(s.with_spec(spec.clone()))
        }
        CanonicalSpaceSpec::Payne { base } => {
            let base = build_space(base, opts)?;
            Ok(crate::derived::payne_derive(&base, 0, opts)?.with_spec(spec.clone()))
        }
        CanonicalSpaceSpec::Dual { base } => {
            let base = build_space(base, opts)?;
            Ok(crate::derived::dualize(&base, opts)?.with_spec(spec.clone()))
        }
    }
}

fn field_of(q: u64, opts: &BuildOptions) -> Result<Field> {
    let (p, k) = crate::gf::prime_power(q).ok_or_else(|| Error::Inadmissible(format!("{q} is not a prime power")))?;
    Field::with_bound(p, k, opts.field_bound)
}

fn label_key(v: &Value) -> String {
    v.to_string()
}

impl PolarSpace {
    /// The polar space of isotropic (singular) points of a nondegenerate form.
    pub fn from_form(
        name: String,
        spec: Option<CanonicalSpaceSpec>,
        form: Form,
        opts: &BuildOptions,
    ) -> Result<PolarSpace> {
        if form.is_degenerate() {
            return Err(Error::Degenerate);
        }
        let field = form.field().clone();
        let d = form.dim();
        let candidates = linalg::all_points(&field, d, opts.enumeration_bound)?;
        let coords: Vec<ProjPoint> = candidates.into_iter().filter(|p| form.is_null(p.coords())).collect();
        let n = coords.len();
        if n > opts.max_points {
            return Err(Error::PointBound { points: n as u64, bound: opts.max_points as u64 });
        }
        let index = linalg::point_index(&coords);
        let mut perp = vec![FixedBitSet::with_capacity(n); n];
        for i in 0..n {
            perp[i].insert(i);
            for j in i + 1..n {
                if form.polar_value(coords[i].coords(), coords[j].coords()) == 0 {
                    perp[i].insert(j);
                    perp[j].insert(i);
                }
            }
        }
        let mut line_of = vec![NO_LINE; n * n];
        let mut lines = Vec::new();
        for i in 0..n {
            for j in perp[i].ones().filter(|&j| j > i) {
                if line_of[i * n + j] != NO_LINE {
                    continue;
                }
                let (x, y) = (coords[i].coords(), coords[j].coords());
                let mut members = vec![i as u32];
                for t in field.elements() {
                    let v = linalg::add_vec(&field, &linalg::scale(&field, x, t), y);
                    let p = linalg::normalize(&field, &v)?;
                    members.push(index[&p]);
                }
                members.sort_unstable();
                let id = lines.len() as u32;
                for &a in &members {
                    for &b in &members {
                        if a != b {
                            line_of[a as usize * n + b as usize] = id;
                        }
                    }
                }
                lines.push(members);
            }
        }
        let rank = form.witt_index()?;
        let labels = coords
            .iter()
            .map(|p| Value::from(p.coords().iter().map(|&c| c as u64).collect::<Vec<_>>()))
            .collect();
        let grid = matches!(
            spec,
            Some(CanonicalSpaceSpec::Classical { family: crate::forms::ClassicalFamily::QPlus, proj_dim: 3, .. })
        );
        let space = PolarSpace::assemble(name, spec, Backing::Form { form, coords, index }, labels, lines, perp, line_of, grid);
        Ok(space.with_rank(rank))
    }

    /// A polar space given by its lines, kept in the given order. Lines must
    /// pairwise share at most one point.
    pub fn from_lines(name: String, labels: Vec<Value>, mut lines: Vec<Vec<u32>>, grid: bool) -> Result<PolarSpace> {
        let n = labels.len();
        for l in lines.iter_mut() {
            l.sort_unstable();
            l.dedup();
            if l.len() < 2 || l.iter().any(|&p| p as usize >= n) {
                return Err(Error::Axiom("line with fewer than two points or a foreign point".into()));
            }
        }
        let mut perp = vec![FixedBitSet::with_capacity(n); n];
        let mut line_of = vec![NO_LINE; n * n];
        for (id, l) in lines.iter().enumerate() {
            for &a in l {
                for &b in l {
                    if a == b {
                        continue;
                    }
                    let slot = &mut line_of[a as usize * n + b as usize];
                    if *slot != NO_LINE {
                        return Err(Error::Axiom(format!("points {a} and {b} lie on two lines")));
                    }
                    *slot = id as u32;
                    perp[a as usize].insert(b as usize);
                }
            }
        }
        for (i, row) in perp.iter_mut().enumerate() {
            row.insert(i);
        }
        let space = PolarSpace::assemble(name, None, Backing::Combinatorial, labels, lines, perp, line_of, grid);
        let rank = space.greedy_rank();
        Ok(space.with_rank(rank))
    }

    #[allow(clippy::too_many_arguments)]
    fn assemble(
        name: String,
        spec: Option<CanonicalSpaceSpec>,
        backing: Backing,
        labels: Vec<Value>,
        lines: Vec<Vec<u32>>,
        perp: Vec<FixedBitSet>,
        line_of: Vec<u32>,
        grid: bool,
    ) -> PolarSpace {
        let n = labels.len();
        let mut lines_through = vec![Vec::new(); n];
        for (id, l) in lines.iter().enumerate() {
            for &p in l {
                lines_through[p as usize].push(id as u32);
            }
        }
        let label_index = labels.iter().enumerate().map(|(i, v)| (label_key(v), i as u32)).collect();
        PolarSpace {
            name,
            spec,
            backing,
            labels,
            label_index,
            lines,
            lines_through,
            line_of,
            perp,
            rank: 0,
            grid,
            generators: OnceLock::new(),
        }
    }

    fn with_rank(mut self, rank: usize) -> PolarSpace {
        self.rank = rank;
        self
    }

    pub(crate) fn with_spec(mut self, spec: CanonicalSpaceSpec) -> PolarSpace {
        self.name = spec.to_string();
        self.spec = Some(spec);
        self
    }

    pub(crate) fn set_grid(mut self, grid: bool) -> PolarSpace {
        self.grid = grid;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn spec(&self) -> Option<&CanonicalSpaceSpec> {
        self.spec.as_ref()
    }

    pub fn num_points(&self) -> usize {
        self.labels.len()
    }

    pub fn num_lines(&self) -> usize {
        self.lines.len()
    }

    pub fn lines(&self) -> &[Vec<u32>] {
        &self.lines
    }

    pub fn lines_through(&self, p: usize) -> &[u32] {
        &self.lines_through[p]
    }

    pub fn line_of(&self, a: usize, b: usize) -> Option<usize> {
        let id = self.line_of[a * self.num_points() + b];
        (id != NO_LINE).then_some(id as usize)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_grid(&self) -> bool {
        self.grid
    }

    pub fn backing(&self) -> &Backing {
        &self.backing
    }

    pub fn form(&self) -> Option<&Form> {
        match &self.backing {
            Backing::Form { form, .. } => Some(form),
            Backing::Combinatorial => None,
        }
    }

    pub fn field(&self) -> Option<&Field> {
        self.form().map(Form::field)
    }

    pub fn coords(&self) -> Option<&[ProjPoint]> {
        match &self.backing {
            Backing::Form { coords, .. } => Some(coords),
            Backing::Combinatorial => None,
        }
    }

    pub fn point_of_coords(&self, v: &[Elem]) -> Option<usize> {
        match &self.backing {
            Backing::Form { index, form, .. } => {
                let p = linalg::normalize(form.field(), v).ok()?;
                index.get(&p).map(|&i| i as usize)
            }
            Backing::Combinatorial => None,
        }
    }

    pub fn labels(&self) -> &[Value] {
        &self.labels
    }

    pub fn label(&self, p: usize) -> &Value {
        &self.labels[p]
    }

    pub fn point_by_label(&self, v: &Value) -> Option<usize> {
        self.label_index.get(&label_key(v)).map(|&i| i as usize)
    }

    /// Collinear and distinct.
    pub fn collinear(&self, a: usize, b: usize) -> bool {
        a != b && self.perp[a].contains(b)
    }

    /// `p^⊥` as a bitset (`p` included).
    pub fn perp_row(&self, p: usize) -> &FixedBitSet {
        &self.perp[p]
    }

    fn check_point(&self, p: usize) -> Result<()> {
        if p >= self.num_points() {
            return Err(Error::ForeignPoint(p));
        }
        Ok(())
    }

    /// `X^⊥` for a nonempty set of points.
    pub fn perp(&self, xs: &[usize]) -> Result<FixedBitSet> {
        let (&first, rest) = xs.split_first().ok_or(Error::EmptySet)?;
        self.check_point(first)?;
        let mut acc = self.perp[first].clone();
        for &x in rest {
            self.check_point(x)?;
            acc.intersect_with(&self.perp[x]);
        }
        Ok(acc)
    }

    /// `X^⊥` for a nonempty bitset of points.
    pub fn perp_of_mask(&self, mask: &FixedBitSet) -> Result<FixedBitSet> {
        let mut ones = mask.ones();
        let first = ones.next().ok_or(Error::EmptySet)?;
        let mut acc = self.perp[first].clone();
        for x in ones {
            acc.intersect_with(&self.perp[x]);
        }
        Ok(acc)
    }

    pub fn mask(&self, xs: impl IntoIterator<Item = usize>) -> FixedBitSet {
        let mut m = FixedBitSet::with_capacity(self.num_points());
        m.extend(xs);
        m
    }

    /// Number of lines per point and points per line, when both are constant.
    pub fn order(&self) -> Option<(usize, usize)> {
        let s = self.lines.first()?.len();
        let t = self.lines_through.first()?.len();
        let uniform = self.lines.iter().all(|l| l.len() == s) && self.lines_through.iter().all(|l| l.len() == t);
        (uniform && s > 0 && t > 0).then(|| (s - 1, t - 1))
    }

    /// One-or-all axiom, non-degeneracy and thickness (relaxed for grids).
    pub fn check_axioms(&self) -> Result<()> {
        let n = self.num_points();
        if self.lines.is_empty() {
            return Err(Error::Axiom("no lines".into()));
        }
        for (id, l) in self.lines.iter().enumerate() {
            if l.len() < 3 && !self.grid {
                return Err(Error::Axiom(format!("line {id} has only {} points", l.len())));
            }
        }
        for p in 0..n {
            if self.perp[p].count_ones(..) == n {
                return Err(Error::Axiom(format!("point {p} is collinear with every point")));
            }
            if self.lines_through[p].len() < 2 && !self.grid {
                return Err(Error::Axiom(format!("point {p} lies on fewer than two lines")));
            }
            for (id, l) in self.lines.iter().enumerate() {
                if l.binary_search(&(p as u32)).is_ok() {
                    continue;
                }
                let hits = l.iter().filter(|&&x| self.perp[p].contains(x as usize)).count();
                if hits != 1 && hits != l.len() {
                    return Err(Error::Axiom(format!("point {p} is collinear with {hits} points of line {id}")));
                }
            }
        }
        Ok(())
    }

    /// `span(S ∪ {p})` for a closed singular set `S` and a point `p ∈ S^⊥`.
    fn extend(&self, s: &[u32], p: u32) -> Vec<u32> {
        let n = self.num_points();
        let mut out = FixedBitSet::with_capacity(n);
        out.insert(p as usize);
        for &x in s {
            out.insert(x as usize);
            if x != p {
                let id = self.line_of[x as usize * n + p as usize];
                out.extend(self.lines[id as usize].iter().map(|&y| y as usize));
            }
        }
        out.ones().map(|i| i as u32).collect()
    }

    /// Line closure of a set of pairwise collinear points.
    pub fn span_singular(&self, xs: &[usize]) -> Result<SingularSubspace> {
        for &x in xs {
            self.check_point(x)?;
        }
        for (i, &a) in xs.iter().enumerate() {
            for &b in &xs[i + 1..] {
                if a != b && !self.perp[a].contains(b) {
                    return Err(Error::NotCollinear(a, b));
                }
            }
        }
        let mut s: Vec<u32> = Vec::new();
        let mut rank = 0;
        for &x in xs {
            if s.binary_search(&(x as u32)).is_err() {
                s = self.extend(&s, x as u32);
                rank += 1;
            }
        }
        Ok(SingularSubspace { points: s, rank })
    }

    fn greedy_rank(&self) -> usize {
        if self.num_points() == 0 {
            return 0;
        }
        let mut s = vec![0u32];
        let mut rank = 1;
        loop {
            let mut p = self.perp[0].clone();
            for &x in &s {
                p.intersect_with(&self.perp[x as usize]);
            }
            let Some(c) = p.ones().find(|c| s.binary_search(&(*c as u32)).is_err()) else {
                return rank;
            };
            s = self.extend(&s, c as u32);
            rank += 1;
        }
    }

    /// Singular subspaces of each rank inside `mask`, level by level, up to `stop`.
    /// Returns the highest level reached and its members.
    fn levels_within(&self, mask: Option<&FixedBitSet>, stop: usize) -> (usize, Vec<Vec<u32>>) {
        let inside = |s: &[u32]| mask.is_none_or(|m| s.iter().all(|&x| m.contains(x as usize)));
        let points: Vec<Vec<u32>> =
            (0..self.num_points()).filter(|&p| mask.is_none_or(|m| m.contains(p))).map(|p| vec![p as u32]).collect();
        if points.is_empty() || stop <= 1 {
            return (usize::from(!points.is_empty()), points);
        }
        let lines: Vec<Vec<u32>> = self.lines.iter().filter(|l| inside(l)).cloned().collect();
        if lines.is_empty() {
            return (1, points);
        }
        let (mut rank, mut level) = (2, lines);
        while rank < stop {
            let mut next: HashSet<Vec<u32>> = HashSet::new();
            for s in &level {
                let mut p = self.perp[s[0] as usize].clone();
                for &x in &s[1..] {
                    p.intersect_with(&self.perp[x as usize]);
                }
                if let Some(m) = mask {
                    p.intersect_with(m);
                }
                for c in p.ones() {
                    if s.binary_search(&(c as u32)).is_ok() {
                        continue;
                    }
                    let t = self.extend(s, c as u32);
                    if inside(&t) {
                        next.insert(t);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            level = next.into_iter().collect();
            rank += 1;
        }
        level.sort();
        (rank, level)
    }

    /// All generators, sorted by point lists.
    pub fn generators(&self) -> &[SingularSubspace] {
        self.generators.get_or_init(|| {
            let (rank, level) = self.levels_within(None, self.rank.max(1));
            level.into_iter().map(|points| SingularSubspace { points, rank }).collect()
        })
    }

    /// Largest rank of a singular subspace inside `mask`, searching no further than `stop`.
    pub fn max_rank_within(&self, mask: &FixedBitSet, stop: usize) -> usize {
        self.levels_within(Some(mask), stop).0
    }

    /// Whether some singular subspace of rank `r` lies inside `mask`.
    pub fn has_rank_within(&self, mask: &FixedBitSet, r: usize) -> bool {
        self.max_rank_within(mask, r) >= r
    }

    /// `X^⊥ ∩ Y = ∅` for singular subspaces of equal rank.
    pub fn are_opposite(&self, x: &SingularSubspace, y: &SingularSubspace) -> Result<bool> {
        if x.rank != y.rank {
            return Err(Error::RankMismatch(x.rank, y.rank));
        }
        let px = self.perp(&x.points.iter().map(|&p| p as usize).collect::<Vec<_>>())?;
        Ok(!y.points.iter().any(|&p| px.contains(p as usize)))
    }

    /// Whether every generator through the sub-generator `sub` lies in `ambient`.
    pub fn ideal_subgenerator(&self, sub: &SingularSubspace, ambient: &[usize]) -> Result<bool> {
        if sub.rank + 1 != self.rank {
            return Err(Error::RankViolation { expected: self.rank - 1, got: sub.rank });
        }
        let amb = self.mask(ambient.iter().copied());
        if sub.points.iter().any(|&p| !amb.contains(p as usize)) {
            return Err(Error::Axiom("sub-generator is not inside the ambient set".into()));
        }
        Ok(self
            .generators()
            .iter()
            .filter(|g| sub.points.iter().all(|&p| g.contains(p)))
            .all(|g| g.points.iter().all(|&p| amb.contains(p as usize))))
    }

    /// The combinatorial space on `points` whose lines are the ambient lines inside it.
    /// Point `i` of the result is `points[i]` (sorted).
    pub fn induced(&self, points: &[usize]) -> Result<PolarSpace> {
        let mut pts = points.to_vec();
        pts.sort_unstable();
        pts.dedup();
        for &p in &pts {
            self.check_point(p)?;
        }
        let local: HashMap<u32, u32> = pts.iter().enumerate().map(|(i, &p)| (p as u32, i as u32)).collect();
        let lines = self
            .lines
            .iter()
            .filter(|l| l.iter().all(|p| local.contains_key(p)))
            .map(|l| l.iter().map(|p| local[p]).collect())
            .collect();
        let labels = pts.iter().map(|&p| self.labels[p].clone()).collect();
        let sub = PolarSpace::from_lines(format!("induced({})", self.name), labels, lines, false)?;
        if sub.rank == 1 && sub.lines.is_empty() {
            sub.generators.get_or_init(|| {
                (0..sub.num_points() as u32).map(|p| SingularSubspace { points: vec![p], rank: 1 }).collect()
            });
        }
        Ok(sub)
    }
}
