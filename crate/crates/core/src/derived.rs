//! Spaces built without a form: grids, Payne derivation and point-line duals.

use serde_json::Value;

use crate::error::{Error, Result};
use crate::hyperbolic;
use crate::space::{BuildOptions, PolarSpace};

fn check_bound(points: usize, opts: &BuildOptions) -> Result<()> {
    if points > opts.max_points {
        return Err(Error::PointBound { points: points as u64, bound: opts.max_points as u64 });
    }
    Ok(())
}

/// The `(s+1) × (s+1)` grid: rows and columns are the lines.
pub fn grid(s: usize, opts: &BuildOptions) -> Result<PolarSpace> {
    if s < 2 {
        return Err(Error::Inadmissible("grid order must be at least 2".into()));
    }
    let m = s + 1;
    check_bound(m * m, opts)?;
    let labels = (0..m * m).map(|p| Value::from(vec![(p / m) as u64, (p % m) as u64])).collect();
    let mut lines: Vec<Vec<u32>> = (0..m).map(|i| (0..m).map(|j| (i * m + j) as u32).collect()).collect();
    lines.extend((0..m).map(|j| (0..m).map(|i| (i * m + j) as u32).collect()));
    PolarSpace::from_lines(format!("grid({s})"), labels, lines, true)
}

/// `P(W(3,q), x)`: points off `x^⊥`, base lines missing `x` cut down to those
/// points, and hyperbolic lines through `x` with `x` removed.
pub fn payne_derive(base: &PolarSpace, x: usize, opts: &BuildOptions) -> Result<PolarSpace> {
    let q = match base.spec() {
        Some(crate::forms::CanonicalSpaceSpec::Classical { family: crate::forms::ClassicalFamily::W, proj_dim: 3, q }) => *q as usize,
        _ => return Err(Error::Inadmissible(format!("Payne derivation needs W(3,q), got {}", base.name()))),
    };
    if x >= base.num_points() {
        return Err(Error::ForeignPoint(x));
    }
    let xp = base.perp_row(x);
    let keep: Vec<usize> = (0..base.num_points()).filter(|&p| !xp.contains(p)).collect();
    check_bound(keep.len(), opts)?;
    let mut local = vec![u32::MAX; base.num_points()];
    for (i, &p) in keep.iter().enumerate() {
        local[p] = i as u32;
    }
    let restrict = |l: &[u32]| l.iter().filter(|&&p| local[p as usize] != u32::MAX).map(|&p| local[p as usize]).collect::<Vec<u32>>();
    let mut lines: Vec<Vec<u32>> =
        base.lines().iter().filter(|l| !l.contains(&(x as u32))).map(|l| restrict(l)).collect();
    let mut covered = vec![false; base.num_points()];
    for &y in &keep {
        if covered[y] {
            continue;
        }
        let h = hyperbolic::hyperbolic_line(base, x, y)?;
        for &p in &h.points {
            covered[p as usize] = true;
        }
        lines.push(restrict(&h.points));
    }
    let labels = keep.iter().map(|&p| base.label(p).clone()).collect();
    let s = PolarSpace::from_lines(format!("P({})", base.name()), labels, lines, false)?;
    if s.num_points() != q * q * q || s.order() != Some((q - 1, q + 1)) {
        return Err(Error::NotGq(format!("derived space has order {:?}", s.order())));
    }
    Ok(s)
}

/// Points and lines swapped. Point `i` of the dual is line `i` of the base.
pub fn dualize(base: &PolarSpace, opts: &BuildOptions) -> Result<PolarSpace> {
    if base.rank() != 2 || base.order().is_none() {
        return Err(Error::NotGq(format!("{} is not a generalized quadrangle of uniform order", base.name())));
    }
    check_bound(base.num_lines(), opts)?;
    let labels = base
        .lines()
        .iter()
        .map(|l| Value::from(l.iter().map(|&p| base.label(p as usize).clone()).collect::<Vec<_>>()))
        .collect();
    let lines = (0..base.num_points()).map(|p| base.lines_through(p).to_vec()).collect();
    let s = PolarSpace::from_lines(format!("dual({})", base.name()), labels, lines, base.is_grid())?;
    Ok(s.set_grid(base.is_grid()))
}

/// Row and column of every point of a grid, rows being the lines disjoint from
/// (or equal to) the first line.
pub fn grid_coordinates(space: &PolarSpace) -> Option<Vec<(usize, usize)>> {
    let lines = space.lines();
    let first = lines.first()?;
    let (mut rows, mut cols) = (Vec::new(), Vec::new());
    for (id, l) in lines.iter().enumerate() {
        if id == 0 || !l.iter().any(|p| first.contains(p)) {
            rows.push(id);
        } else {
            cols.push(id);
        }
    }
    (0..space.num_points())
        .map(|p| {
            let through = space.lines_through(p);
            let r = rows.iter().position(|id| through.contains(&(*id as u32)))?;
            let c = cols.iter().position(|id| through.contains(&(*id as u32)))?;
            (through.len() == 2).then_some((r, c))
        })
        .collect()
}

/// The failing (A) configuration of `P(W(3,q), x)`: points `a, b` of `h_y` and the line `ℓ_y`,
/// as indices of `derived`, with `h_y` itself.
#[derive(Debug, Clone)]
pub struct PayneWitness {
    pub a: usize,
    pub b: usize,
    pub line: Vec<u32>,
    pub hyperbolic_line: Vec<u32>,
}

pub fn payne_a_witness(base: &PolarSpace, x: usize, derived: &PolarSpace) -> Result<PayneWitness> {
    let to_derived = |p: u32| derived.point_by_label(base.label(p as usize));
    let xp = base.perp_row(x);
    let y = xp.ones().find(|&y| y != x).ok_or_else(|| Error::Witness("x^⊥ is trivial".into()))?;
    let ell = base
        .lines_through(y)
        .iter()
        .map(|&id| &base.lines()[id as usize])
        .find(|l| !l.contains(&(x as u32)))
        .ok_or_else(|| Error::Witness("no line through y avoids x".into()))?;
    let h = (0..base.num_points())
        .find(|&z| z != y && !base.collinear(y, z) && !xp.contains(z))
        .map(|z| hyperbolic::hyperbolic_line(base, y, z))
        .ok_or_else(|| Error::Witness("no hyperbolic line through y leaves x^⊥".into()))??;
    let mut line: Vec<u32> = ell.iter().filter(|&&p| p as usize != y).filter_map(|&p| to_derived(p)).map(|p| p as u32).collect();
    let mut hl: Vec<u32> =
        h.points.iter().filter(|&&p| p as usize != y).filter_map(|&p| to_derived(p)).map(|p| p as u32).collect();
    line.sort_unstable();
    hl.sort_unstable();
    Ok(PayneWitness { a: hl[0] as usize, b: hl[1] as usize, line, hyperbolic_line: hl })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::build_space;

    fn build(s: &str) -> PolarSpace {
        build_space(&s.parse().unwrap(), &BuildOptions::default()).unwrap()
    }

    #[test]
    fn grid_counts() {
        let g = grid(3, &BuildOptions::default()).unwrap();
        assert_eq!((g.num_points(), g.num_lines(), g.rank()), (16, 8, 2));
        assert!((0..16).all(|p| g.lines_through(p).len() == 2));
        g.check_axioms().unwrap();
        assert!(grid(1, &BuildOptions::default()).is_err());
    }

    #[test]
    fn grid_matches_hyperbolic_quadric() {
        let q = build("Q+(3,3)");
        let g = grid(3, &BuildOptions::default()).unwrap();
        let qc = grid_coordinates(&q).unwrap();
        let gc = grid_coordinates(&g).unwrap();
        let find = |rc: (usize, usize)| gc.iter().position(|&x| x == rc).unwrap();
        let map: Vec<usize> = qc.iter().map(|&rc| find(rc)).collect();
        let mut sorted = map.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), 16);
        for a in 0..16 {
            for b in 0..16 {
                assert_eq!(q.collinear(a, b), g.collinear(map[a], map[b]));
            }
        }
    }

    #[test]
    fn payne_w35() {
        let p = build("P(W(3,5))");
        assert_eq!(p.num_points(), 125);
        assert_eq!(p.order(), Some((4, 6)));
        p.check_axioms().unwrap();
        let h = &hyperbolic::all_hyperbolic_lines(&p)[0];
        assert_eq!(p.perp(&[h.a as usize, h.b as usize]).unwrap().count_ones(..), 7);
    }

    #[test]
    fn payne_witness_shape() {
        let base = build("W(3,5)");
        let p = payne_derive(&base, 0, &BuildOptions::default()).unwrap();
        let w = payne_a_witness(&base, 0, &p).unwrap();
        assert_eq!(w.line.len(), 5);
        assert!(p.lines().contains(&w.line));
        let h = hyperbolic::hyperbolic_line(&p, w.a, w.b).unwrap();
        // the double perp of a, b inside the derived space is only {a, b}
        assert!(h.points.iter().all(|x| w.hyperbolic_line.contains(x)));
        assert!(!w.line.iter().any(|x| w.hyperbolic_line.contains(x)));
        let ta = p.perp_row(w.a);
        let tb = p.perp_row(w.b);
        let meet = |t: &fixedbitset::FixedBitSet| w.line.iter().filter(|&&z| t.contains(z as usize)).copied().collect::<Vec<_>>();
        assert_eq!(meet(ta), meet(tb));
        assert_eq!(meet(ta).len(), 1);
        let witness = crate::props::Witness::A { a: w.a, b: w.b, generator: w.line.clone() };
        crate::props::validate_witness(&p, &witness).unwrap();
    }

    #[test]
    fn duals() {
        let w = build("W(3,2)");
        let d = dualize(&w, &BuildOptions::default()).unwrap();
        assert_eq!((d.num_points(), d.num_lines()), (15, 15));
        d.check_axioms().unwrap();
        let dd = dualize(&d, &BuildOptions::default()).unwrap();
        assert_eq!(dd.lines(), w.lines());
        let g = grid(3, &BuildOptions::default()).unwrap();
        let dg = dualize(&g, &BuildOptions::default()).unwrap();
        assert_eq!((dg.num_points(), dg.num_lines()), (8, 16));
        assert!(dualize(&build("W(5,2)"), &BuildOptions::default()).is_err());
    }
}
