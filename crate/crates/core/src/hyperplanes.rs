//! Hyperplanes of a polar space: singular ones `p^⊥` and those arising from an embedding.

use std::collections::HashSet;

use fixedbitset::FixedBitSet;
use rayon::prelude::*;

use crate::embed::Embedding;
use crate::error::{Error, Result};
use crate::hyperbolic::HyperbolicLine;
use crate::linalg::{self, DualVector};
use crate::space::PolarSpace;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    Singular(usize),
    Arising(DualVector),
    Explicit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    Singular,
    Ovoid,
    Other,
}

#[derive(Debug, Clone)]
pub struct Hyperplane {
    pub points: Vec<u32>,
    pub mask: FixedBitSet,
    pub provenance: Provenance,
}

impl Hyperplane {
    pub fn explicit(space: &PolarSpace, points: &[usize]) -> Result<Hyperplane> {
        let mask = space.mask(points.iter().copied());
        if !is_hyperplane(space, &mask) {
            return Err(Error::Axiom("point set is not a hyperplane".into()));
        }
        Ok(Hyperplane { points: mask.ones().map(|p| p as u32).collect(), mask, provenance: Provenance::Explicit })
    }

    pub fn contains(&self, p: usize) -> bool {
        self.mask.contains(p)
    }

    pub fn dual_vector(&self) -> Option<&DualVector> {
        match &self.provenance {
            Provenance::Arising(u) => Some(u),
            _ => None,
        }
    }
}

/// A proper subspace meeting every line.
pub fn is_hyperplane(space: &PolarSpace, mask: &FixedBitSet) -> bool {
    let count = mask.count_ones(..);
    if count == space.num_points() || count == 0 {
        return false;
    }
    space.lines().iter().all(|l| {
        let hits = l.iter().filter(|&&p| mask.contains(p as usize)).count();
        hits == 1 || hits == l.len()
    })
}

pub fn singular_hyperplane(space: &PolarSpace, p: usize) -> Result<Hyperplane> {
    let mask = space.perp(&[p])?;
    Ok(Hyperplane { points: mask.ones().map(|x| x as u32).collect(), mask, provenance: Provenance::Singular(p) })
}

/// `ε⁻¹(ker u)` for every functional `u` on the target, in functional order.
pub fn arising_hyperplanes(space: &PolarSpace, e: &Embedding) -> Result<Vec<Hyperplane>> {
    let f = e.field();
    let duals = linalg::dual_hyperplanes(f, e.dim(), linalg::DEFAULT_ENUMERATION_BOUND)?;
    let hs: Vec<Hyperplane> = duals
        .into_par_iter()
        .map(|u| {
            let mask = space.mask((0..space.num_points()).filter(|&p| u.eval(f, e.image(p).coords()) == 0));
            Hyperplane { points: mask.ones().map(|p| p as u32).collect(), mask, provenance: Provenance::Arising(u) }
        })
        .collect();
    let mut seen = HashSet::new();
    for h in &hs {
        if !is_hyperplane(space, &h.mask) {
            return Err(Error::Axiom("an arising section is not a hyperplane".into()));
        }
        if !seen.insert(&h.points) {
            return Err(Error::DuplicateSection);
        }
    }
    Ok(hs)
}

/// The hyperplane `ε⁻¹(ker u)` for one functional.
pub fn arising_hyperplane(space: &PolarSpace, e: &Embedding, u: DualVector) -> Result<Hyperplane> {
    if u.coords().len() != e.dim() {
        return Err(Error::DimensionMismatch { expected: e.dim(), got: u.coords().len() });
    }
    let f = e.field();
    let mask = space.mask((0..space.num_points()).filter(|&p| u.eval(f, e.image(p).coords()) == 0));
    if !is_hyperplane(space, &mask) {
        return Err(Error::Axiom("section is not a hyperplane".into()));
    }
    Ok(Hyperplane { points: mask.ones().map(|p| p as u32).collect(), mask, provenance: Provenance::Arising(u) })
}

/// The unique `p` with `h ⊆ p^⊥`, if any.
pub fn deepest_point(space: &PolarSpace, h: &Hyperplane) -> Result<Option<usize>> {
    let mut found = None;
    for p in 0..space.num_points() {
        if h.mask.is_subset(space.perp_row(p)) {
            if found.is_some() {
                return Err(Error::MultipleDeepestPoints);
            }
            found = Some(p);
        }
    }
    Ok(found)
}

/// Largest rank of a singular subspace inside `h`.
pub fn hyperplane_rank(space: &PolarSpace, h: &Hyperplane) -> usize {
    space.max_rank_within(&h.mask, space.rank())
}

pub fn classify(space: &PolarSpace, h: &Hyperplane) -> Result<Classification> {
    if deepest_point(space, h)?.is_some() {
        return Ok(Classification::Singular);
    }
    if space.rank() == 2 && hyperplane_rank(space, h) == 1 {
        return Ok(Classification::Ovoid);
    }
    Ok(Classification::Other)
}

/// A functional whose section is exactly `h`, if `h` arises from `e`.
pub fn inducing_functional(e: &Embedding, h: &Hyperplane) -> Option<DualVector> {
    let span = e.span_of(h.points.iter().map(|&p| p as usize));
    if span.codim() != 1 {
        return None;
    }
    let u = span.annihilator(e.field()).rows()[0].clone();
    let u = DualVector(linalg::normalize(e.field(), &u).ok()?);
    let pre = e.preimage_of(&span);
    pre.iter().map(|&p| p as u32).eq(h.points.iter().copied()).then_some(u)
}

/// First hyperplane (in functional order) meeting the hyperbolic line in 0 or 2 points.
pub fn char2_section<'a>(hyperplanes: &'a [Hyperplane], line: &HyperbolicLine) -> Option<(&'a Hyperplane, usize)> {
    hyperplanes.iter().find_map(|h| {
        let k = line.points.iter().filter(|&&p| h.contains(p as usize)).count();
        (k == 0 || k == 2).then_some((h, k))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embed::{natural_embedding, universal_embedding_sp_char2};
    use crate::hyperbolic::all_hyperbolic_lines;
    use crate::space::{build_space, BuildOptions};

    fn build(s: &str) -> PolarSpace {
        build_space(&s.parse().unwrap(), &BuildOptions::default()).unwrap()
    }

    #[test]
    fn singular_sizes() {
        let w = build("W(3,2)");
        let h = singular_hyperplane(&w, 3).unwrap();
        assert_eq!(h.points.len(), 7);
        assert!(is_hyperplane(&w, &h.mask));
        assert_eq!(deepest_point(&w, &h).unwrap(), Some(3));
        let e = build("Q-(5,2)");
        assert_eq!(singular_hyperplane(&e, 0).unwrap().points.len(), 11);
        assert_eq!(singular_hyperplane(&e, 99).unwrap_err(), Error::ForeignPoint(99));
    }

    #[test]
    fn arising_w32_all_singular() {
        let w = build("W(3,2)");
        let hs = arising_hyperplanes(&w, &natural_embedding(&w).unwrap()).unwrap();
        assert_eq!(hs.len(), 15);
        for h in &hs {
            assert_eq!(classify(&w, h).unwrap(), Classification::Singular);
        }
    }

    #[test]
    fn arising_q42_split() {
        let q = build("Q(4,2)");
        let e = natural_embedding(&q).unwrap();
        let hs = arising_hyperplanes(&q, &e).unwrap();
        assert_eq!(hs.len(), 31);
        let classes: Vec<_> = hs.iter().map(|h| classify(&q, h).unwrap()).collect();
        assert_eq!(classes.iter().filter(|&&c| c == Classification::Singular).count(), 15);
        assert_eq!(classes.iter().filter(|&&c| c == Classification::Ovoid).count(), 6);
        assert_eq!(classes.iter().filter(|&&c| c == Classification::Other).count(), 10);
        for p in 0..q.num_points() {
            assert!(inducing_functional(&e, &singular_hyperplane(&q, p).unwrap()).is_some());
        }
    }

    #[test]
    fn grid_transversal_is_ovoid() {
        let g = build("Q+(3,3)");
        // a transversal: one point on each line of one ruling, pairwise non-collinear
        let mut pts: Vec<usize> = vec![0];
        for p in 1..g.num_points() {
            if pts.iter().all(|&x| !g.collinear(x, p)) {
                pts.push(p);
            }
        }
        assert_eq!(pts.len(), 4);
        let h = Hyperplane::explicit(&g, &pts).unwrap();
        assert_eq!(classify(&g, &h).unwrap(), Classification::Ovoid);
        assert_eq!(deepest_point(&g, &h).unwrap(), None);
    }

    #[test]
    fn char2_sections_on_w32() {
        let w = build("W(3,2)");
        let u = universal_embedding_sp_char2(&w).unwrap();
        let hs = arising_hyperplanes(&w, &u).unwrap();
        assert_eq!(hs.len(), 31);
        for l in all_hyperbolic_lines(&w) {
            assert!(char2_section(&hs, &l).is_some());
        }
    }
}
