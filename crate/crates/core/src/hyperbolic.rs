//! Double perps, hyperbolic lines and the linear space they form together with
//! the ordinary lines.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::space::PolarSpace;

/// `{a,b}^⊥⊥` for a non-collinear pair, keyed by its sorted members.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HyperbolicLine {
    pub points: Vec<u32>,
    pub a: u32,
    pub b: u32,
}

impl HyperbolicLine {
    pub fn contains(&self, p: usize) -> bool {
        self.points.binary_search(&(p as u32)).is_ok()
    }

    pub fn mask(&self, space: &PolarSpace) -> FixedBitSet {
        space.mask(self.points.iter().map(|&p| p as usize))
    }
}

/// `X^⊥⊥`.
pub fn double_perp(space: &PolarSpace, xs: &[usize]) -> Result<FixedBitSet> {
    let p = space.perp(xs)?;
    space.perp_of_mask(&p)
}

fn check_pair(space: &PolarSpace, a: usize, b: usize) -> Result<()> {
    for p in [a, b] {
        if p >= space.num_points() {
            return Err(Error::ForeignPoint(p));
        }
    }
    if a == b || space.collinear(a, b) {
        return Err(Error::Collinear(a, b));
    }
    Ok(())
}

pub fn hyperbolic_line(space: &PolarSpace, a: usize, b: usize) -> Result<HyperbolicLine> {
    check_pair(space, a, b)?;
    let pp = double_perp(space, &[a, b])?;
    Ok(HyperbolicLine { points: pp.ones().map(|p| p as u32).collect(), a: a.min(b) as u32, b: a.max(b) as u32 })
}

/// Every hyperbolic line once, sorted by member lists. The defining pair is the
/// two smallest members.
pub fn all_hyperbolic_lines(space: &PolarSpace) -> Vec<HyperbolicLine> {
    let n = space.num_points();
    let found: Vec<Vec<u32>> = (0..n)
        .into_par_iter()
        .flat_map_iter(|a| {
            let row = space.perp_row(a);
            (a + 1..n).filter(move |&b| !row.contains(b)).filter_map(move |b| {
                let pp = double_perp(space, &[a, b]).expect("valid pair");
                // keep the line only from its two smallest members
                let mut it = pp.ones();
                (it.next() == Some(a) && it.next() == Some(b)).then(|| pp.ones().map(|p| p as u32).collect())
            })
        })
        .collect();
    let mut lines: Vec<HyperbolicLine> =
        found.into_iter().map(|points| HyperbolicLine { a: points[0], b: points[1], points }).collect();
    lines.sort();
    lines
}

/// Points together with ordinary and hyperbolic lines.
#[derive(Debug, Clone)]
pub struct LinearSpaceL {
    pub points: usize,
    pub lines: Vec<Vec<u32>>,
}

pub fn linear_space(space: &PolarSpace) -> Result<LinearSpaceL> {
    let n = space.num_points();
    let mut lines: Vec<Vec<u32>> = space.lines().to_vec();
    lines.extend(all_hyperbolic_lines(space).into_iter().map(|h| h.points));
    let mut joins = vec![0u32; n * n];
    for l in &lines {
        for (i, &a) in l.iter().enumerate() {
            for &b in &l[i + 1..] {
                joins[a as usize * n + b as usize] += 1;
            }
        }
    }
    for a in 0..n {
        for b in a + 1..n {
            let c = joins[a * n + b];
            if c != 1 {
                return Err(Error::JoiningLine(c as usize));
            }
        }
    }
    Ok(LinearSpaceL { points: n, lines })
}

impl LinearSpaceL {
    /// Whether line sizes and counts match those of some `PG(m,k)`, `m ≥ 2`.
    pub fn is_projective(&self) -> bool {
        let Some(first) = self.lines.first() else { return false };
        let size = first.len();
        if size < 3 || self.lines.iter().any(|l| l.len() != size) {
            return false;
        }
        let k = size - 1;
        let mut m = 2;
        loop {
            let pts = crate::linalg::projective_count(k, m + 1);
            if pts > self.points {
                return false;
            }
            if pts == self.points {
                return self.lines.len() == pts * (pts - 1) / (size * (size - 1)) && is_veblen_young(self);
            }
            m += 1;
        }
    }
}

// For lines px and pu and further points y on px, v on pu, the lines xu and yv meet.
fn is_veblen_young(l: &LinearSpaceL) -> bool {
    let n = l.points;
    let mut line_of = HashMap::new();
    let mut through = vec![Vec::new(); n];
    for (id, line) in l.lines.iter().enumerate() {
        for &a in line {
            through[a as usize].push(id);
            for &b in line {
                if a != b {
                    line_of.insert((a, b), id);
                }
            }
        }
    }
    let meets = |x: u32, u: u32, y: u32, v: u32| {
        let (m1, m2) = (&l.lines[line_of[&(x, u)]], &l.lines[line_of[&(y, v)]]);
        m1.iter().any(|z| m2.contains(z))
    };
    for (p, ids) in through.iter().enumerate() {
        let p = p as u32;
        for (i, &l1) in ids.iter().enumerate() {
            for &l2 in &ids[i + 1..] {
                let (a, b) = (&l.lines[l1], &l.lines[l2]);
                for &x in a.iter().filter(|&&x| x != p) {
                    for &y in a.iter().filter(|&&y| y != p && y != x) {
                        for &u in b.iter().filter(|&&u| u != p) {
                            for &v in b.iter().filter(|&&v| v != p && v != u) {
                                if !meets(x, u, y, v) {
                                    return false;
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    true
}
