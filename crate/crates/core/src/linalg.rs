//! Vectors, subspaces and projective points over a [`Field`].
//!
//! Projective points are canonical when their leftmost nonzero coordinate is 1.
//! Subspaces are stored as reduced row echelon matrices, which makes subspace
//! equality plain matrix equality.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::gf::{Elem, Field};

pub const DEFAULT_ENUMERATION_BOUND: u64 = 1_000_000;

pub type Vector = Vec<Elem>;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint(Vec<Elem>);

impl ProjPoint {
    pub fn coords(&self) -> &[Elem] {
        &self.0
    }

    pub fn into_vec(self) -> Vector {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

/// A linear functional, canonicalized like a projective point.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DualVector(pub ProjPoint);

impl DualVector {
    pub fn coords(&self) -> &[Elem] {
        self.0.coords()
    }

    pub fn eval(&self, field: &Field, v: &[Elem]) -> Elem {
        dot(field, self.coords(), v)
    }
}

pub fn dot(field: &Field, a: &[Elem], b: &[Elem]) -> Elem {
    a.iter().zip(b).fold(0, |acc, (&x, &y)| field.add(acc, field.mul(x, y)))
}

pub fn scale(field: &Field, v: &[Elem], s: Elem) -> Vector {
    v.iter().map(|&x| field.mul(x, s)).collect()
}

pub fn add_vec(field: &Field, a: &[Elem], b: &[Elem]) -> Vector {
    a.iter().zip(b).map(|(&x, &y)| field.add(x, y)).collect()
}

pub fn normalize(field: &Field, v: &[Elem]) -> Result<ProjPoint> {
    let lead = *v.iter().find(|&&c| c != 0).ok_or(Error::ZeroVector)?;
    if lead == 1 {
        return Ok(ProjPoint(v.to_vec()));
    }
    let s = field.inv(lead)?;
    Ok(ProjPoint(scale(field, v, s)))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    ambient: usize,
    rows: Vec<Vector>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Subspace {
        Subspace { ambient, rows: Vec::new() }
    }

    pub fn full(ambient: usize) -> Subspace {
        let rows = (0..ambient)
            .map(|i| (0..ambient).map(|j| (i == j) as Elem).collect())
            .collect();
        Subspace { ambient, rows }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vector] {
        &self.rows
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.iter().position(|&c| c != 0).unwrap()).collect()
    }

    pub fn contains(&self, field: &Field, v: &[Elem]) -> bool {
        let mut r = v.to_vec();
        for (row, piv) in self.rows.iter().zip(self.pivots()) {
            let c = r[piv];
            if c != 0 {
                for (x, &y) in r.iter_mut().zip(row) {
                    *x = field.sub(*x, field.mul(c, y));
                }
            }
        }
        r.iter().all(|&c| c == 0)
    }

    pub fn contains_subspace(&self, field: &Field, other: &Subspace) -> bool {
        other.rows.iter().all(|r| self.contains(field, r))
    }

    /// Basis of `{v : u.v = 0 for every u in self}` under the standard dot product.
    pub fn annihilator(&self, field: &Field) -> Subspace {
        let pivots = self.pivots();
        let free: Vec<usize> = (0..self.ambient).filter(|c| !pivots.contains(c)).collect();
        let basis = free
            .iter()
            .map(|&fc| {
                let mut v = vec![0; self.ambient];
                v[fc] = 1;
                for (row, &piv) in self.rows.iter().zip(&pivots) {
                    v[piv] = field.neg(row[fc]);
                }
                v
            })
            .collect::<Vec<_>>();
        rref(field, self.ambient, basis)
    }

    pub fn join(&self, field: &Field, other: &Subspace) -> Result<Subspace> {
        check_ambient(self, other)?;
        Ok(rref(field, self.ambient, self.rows.iter().chain(&other.rows).cloned().collect()))
    }

    pub fn codim(&self) -> usize {
        self.ambient - self.rank()
    }
}

fn check_ambient(x: &Subspace, y: &Subspace) -> Result<()> {
    if x.ambient != y.ambient {
        return Err(Error::DimensionMismatch { expected: x.ambient, got: y.ambient });
    }
    Ok(())
}

fn rref(field: &Field, ambient: usize, mut rows: Vec<Vector>) -> Subspace {
    let mut rank = 0;
    for col in 0..ambient {
        let Some(pr) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, pr);
        let s = field.inv(rows[rank][col]).expect("pivot is nonzero");
        rows[rank] = scale(field, &rows[rank], s);
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[col] != 0 {
                let c = row[col];
                for (x, &y) in row.iter_mut().zip(&pivot_row) {
                    *x = field.sub(*x, field.mul(c, y));
                }
            }
        }
        rank += 1;
    }
    rows.truncate(rank);
    Subspace { ambient, rows }
}

/// Canonical subspace spanned by `vectors` in an ambient space of dimension `ambient`.
pub fn span(field: &Field, ambient: usize, vectors: &[Vector]) -> Result<Subspace> {
    for v in vectors {
        if v.len() != ambient {
            return Err(Error::DimensionMismatch { expected: ambient, got: v.len() });
        }
    }
    Ok(rref(field, ambient, vectors.to_vec()))
}

pub fn intersect(field: &Field, x: &Subspace, y: &Subspace) -> Result<Subspace> {
    check_ambient(x, y)?;
    let both = x.annihilator(field).join(field, &y.annihilator(field))?;
    Ok(both.annihilator(field))
}

fn check_bound(q: usize, r: usize, bound: u64) -> Result<()> {
    let requested = (q as u64).checked_pow(r as u32).unwrap_or(u64::MAX);
    if requested > bound {
        return Err(Error::EnumerationBound { requested, bound });
    }
    Ok(())
}

/// All coefficient vectors of length `r`, last coordinate varying fastest.
fn coefficient_vectors(q: usize, r: usize) -> impl Iterator<Item = Vec<Elem>> {
    let total = q.pow(r as u32);
    (0..total).map(move |mut n| {
        let mut c = vec![0; r];
        for i in (0..r).rev() {
            c[i] = (n % q) as Elem;
            n /= q;
        }
        c
    })
}

/// The `(q^r - 1)/(q - 1)` points of a subspace of rank `r`, in lexicographic order.
pub fn enumerate_points(field: &Field, sub: &Subspace, bound: u64) -> Result<Vec<ProjPoint>> {
    if sub.rank() == 0 {
        return Err(Error::ZeroVector);
    }
    check_bound(field.order(), sub.rank(), bound)?;
    let mut pts: Vec<ProjPoint> = coefficient_vectors(field.order(), sub.rank())
        .filter(|c| c.iter().find(|&&x| x != 0) == Some(&1))
        .map(|c| {
            let mut v = vec![0; sub.ambient];
            for (&ci, row) in c.iter().zip(&sub.rows) {
                if ci != 0 {
                    v = add_vec(field, &v, &scale(field, row, ci));
                }
            }
            normalize(field, &v).expect("independent rows")
        })
        .collect();
    pts.sort();
    Ok(pts)
}

/// All canonical points of `PG(d-1, q)` in lexicographic order.
pub fn all_points(field: &Field, d: usize, bound: u64) -> Result<Vec<ProjPoint>> {
    check_bound(field.order(), d, bound)?;
    Ok(coefficient_vectors(field.order(), d)
        .filter(|c| c.iter().find(|&&x| x != 0) == Some(&1))
        .map(ProjPoint)
        .collect())
}

/// All canonical linear functionals on `GF(q)^d`, in lexicographic order.
pub fn dual_hyperplanes(field: &Field, d: usize, bound: u64) -> Result<Vec<DualVector>> {
    Ok(all_points(field, d, bound)?.into_iter().map(DualVector).collect())
}

/// Number of points of `PG(r-1, q)`.
pub fn projective_count(q: usize, r: usize) -> usize {
    (0..r).map(|i| q.pow(i as u32)).sum()
}

/// Index of canonical points, used to turn coordinate sets back into point ids.
pub fn point_index(points: &[ProjPoint]) -> HashMap<ProjPoint, u32> {
    points.iter().enumerate().map(|(i, p)| (p.clone(), i as u32)).collect()
}

/// Linear surjection `GF(q)^d -> GF(q)^(d-r)` with kernel the given radical.
///
/// The radical's RREF basis is completed by the standard vectors of its non-pivot
/// columns, in increasing order; the map returns the coordinates along those
/// standard vectors.
#[derive(Debug, Clone)]
pub struct QuotientMap {
    ambient: usize,
    radical: Subspace,
    pivots: Vec<usize>,
    complement: Vec<usize>,
}

impl QuotientMap {
    pub fn new(ambient: usize, radical: &Subspace) -> Result<QuotientMap> {
        if radical.ambient() != ambient {
            return Err(Error::NotASubspace);
        }
        let pivots = radical.pivots();
        let complement = (0..ambient).filter(|c| !pivots.contains(c)).collect();
        Ok(QuotientMap { ambient, radical: radical.clone(), pivots, complement })
    }

    pub fn source_dim(&self) -> usize {
        self.ambient
    }

    pub fn target_dim(&self) -> usize {
        self.complement.len()
    }

    /// Source coordinates that survive the projection; also the lifts of the target basis.
    pub fn complement(&self) -> &[usize] {
        &self.complement
    }

    pub fn radical(&self) -> &Subspace {
        &self.radical
    }

    pub fn apply(&self, field: &Field, v: &[Elem]) -> Vector {
        self.complement
            .iter()
            .map(|&c| {
                self.radical.rows.iter().zip(&self.pivots).fold(v[c], |acc, (row, &piv)| {
                    field.sub(acc, field.mul(v[piv], row[c]))
                })
            })
            .collect()
    }
}

pub fn quotient_map(ambient: usize, radical: &Subspace) -> Result<QuotientMap> {
    QuotientMap::new(ambient, radical)
}
