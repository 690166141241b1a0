//! Full projective embeddings of form-backed spaces and their quotients.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::forms::{ClassicalFamily, Form, FormKind};
use crate::gf::{Elem, Field};
use crate::hyperbolic;
use crate::linalg::{self, ProjPoint, Subspace, Vector};
use crate::space::{PolarSpace, SingularSubspace};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EmbeddingKind {
    Natural,
    Quotient,
    Minimal,
    Universal,
}

/// Point images in `PG(d-1, q)` together with the reflexive form on the target
/// that governs `⊥_f`.
#[derive(Debug, Clone)]
pub struct Embedding {
    kind: EmbeddingKind,
    field: Field,
    dim: usize,
    images: Vec<ProjPoint>,
    lookup: HashMap<ProjPoint, u32>,
    form: Form,
    is_minimal: bool,
    is_universal: Option<bool>,
}

impl Embedding {
    fn new(space: &PolarSpace, kind: EmbeddingKind, form: Form, images: Vec<ProjPoint>) -> Result<Embedding> {
        let field = form.field().clone();
        let dim = form.dim();
        let lookup = linalg::point_index(&images);
        if lookup.len() != images.len() {
            return Err(Error::NotInjective);
        }
        for (id, l) in space.lines().iter().enumerate() {
            let vecs: Vec<Vector> = l.iter().map(|&p| images[p as usize].coords().to_vec()).collect();
            let sub = linalg::span(&field, dim, &vecs)?;
            if sub.rank() != 2 || l.len() != field.order() + 1 {
                return Err(Error::NotFull(format!("line {id} does not map onto a projective line")));
            }
        }
        Ok(Embedding { kind, field, dim, images, lookup, form, is_minimal: false, is_universal: None })
    }

    pub fn kind(&self) -> EmbeddingKind {
        self.kind
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn images(&self) -> &[ProjPoint] {
        &self.images
    }

    pub fn image(&self, p: usize) -> &ProjPoint {
        &self.images[p]
    }

    pub fn preimage(&self, x: &ProjPoint) -> Option<usize> {
        self.lookup.get(x).map(|&i| i as usize)
    }

    pub fn form(&self) -> &Form {
        &self.form
    }

    pub fn is_minimal(&self) -> bool {
        self.is_minimal
    }

    pub fn is_universal(&self) -> Option<bool> {
        self.is_universal
    }

    /// Whether the image is every point of the target projective space.
    pub fn is_onto(&self) -> bool {
        self.images.len() == linalg::projective_count(self.field.order(), self.dim)
    }

    /// `ε⁻¹(X)` as sorted point indices.
    pub fn preimage_of(&self, sub: &Subspace) -> Vec<usize> {
        (0..self.images.len()).filter(|&p| sub.contains(&self.field, self.images[p].coords())).collect()
    }

    pub fn span_of(&self, points: impl IntoIterator<Item = usize>) -> Subspace {
        let vecs: Vec<Vector> = points.into_iter().map(|p| self.images[p].coords().to_vec()).collect();
        linalg::span(&self.field, self.dim, &vecs).expect("images share the target dimension")
    }

    /// `{v : f(u, v) = 0 for all u}` for the target form.
    pub fn perp_f(&self, vectors: &[&[Elem]]) -> Subspace {
        let f = &self.field;
        let g = self.form.polar_gram();
        let hermitian = self.form.kind() == FormKind::Hermitian;
        let rows: Vec<Vector> = vectors
            .iter()
            .map(|u| {
                (0..self.dim)
                    .map(|j| {
                        let r = (0..self.dim).fold(0, |acc, i| f.add(acc, f.mul(u[i], g[i][j])));
                        if hermitian {
                            f.conj(r).expect("hermitian field")
                        } else {
                            r
                        }
                    })
                    .collect()
            })
            .collect();
        linalg::span(f, self.dim, &rows).expect("square Gram").annihilator(f)
    }
}

fn require_form(space: &PolarSpace) -> Result<(&Form, &[ProjPoint])> {
    match (space.form(), space.coords()) {
        (Some(f), Some(c)) => Ok((f, c)),
        _ => Err(Error::CombinatorialSpace),
    }
}

/// The inclusion of the point set in `PG(V)`.
pub fn natural_embedding(space: &PolarSpace) -> Result<Embedding> {
    let (form, coords) = require_form(space)?;
    let mut e = Embedding::new(space, EmbeddingKind::Natural, form.clone(), coords.to_vec())?;
    e.is_minimal = form.radical().rank() == 0;
    Ok(e)
}

/// Composite of `e` with the projection `V → V/X`; `X` must lie in the radical of the target form.
pub fn quotient_embedding(space: &PolarSpace, e: &Embedding, x: &Subspace) -> Result<Embedding> {
    let f = &e.field;
    if x.ambient() != e.dim {
        return Err(Error::DimensionMismatch { expected: e.dim, got: x.ambient() });
    }
    if !e.form.radical().contains_subspace(f, x) {
        return Err(Error::InadmissibleQuotient("subspace is not inside the radical of the form".into()));
    }
    if x.rank() == 0 {
        return Ok(e.clone());
    }
    let map = linalg::quotient_map(e.dim, x)?;
    let images = e
        .images
        .iter()
        .map(|p| linalg::normalize(f, &map.apply(f, p.coords())))
        .collect::<Result<Vec<_>>>()
        .map_err(|_| Error::InadmissibleQuotient("a point maps to zero".into()))?;
    // the lift of target basis vector j is e_{c_j}
    let c = map.complement();
    let g = e.form.polar_gram();
    let gram: Vec<Vec<Elem>> = c.iter().map(|&i| c.iter().map(|&j| g[i][j]).collect()).collect();
    let form = match e.form.kind() {
        FormKind::Hermitian => Form::hermitian(f, gram)?,
        FormKind::Symmetric => Form::symmetric(f, gram)?,
        FormKind::Quadratic if f.characteristic() != 2 => Form::symmetric(f, gram)?,
        _ => Form::alternating(f, gram)?,
    };
    let mut q = Embedding::new(space, EmbeddingKind::Quotient, form, images).map_err(|err| match err {
        Error::NotInjective | Error::NotFull(_) => Error::InadmissibleQuotient(err.to_string()),
        other => other,
    })?;
    q.is_minimal = q.form.radical().rank() == 0;
    Ok(q)
}

/// The natural embedding divided by the radical of the polar form.
pub fn minimal_embedding(space: &PolarSpace) -> Result<Embedding> {
    let nat = natural_embedding(space)?;
    let rad = nat.form.radical();
    let mut e = quotient_embedding(space, &nat, &rad)?;
    if rad.rank() > 0 {
        e.kind = EmbeddingKind::Minimal;
    }
    e.is_minimal = true;
    Ok(e)
}

/// For `W(2n-1, q)`, `q` even: `x ↦ (√(Σ x_{2i} x_{2i+1}), x)` onto the canonical `Q(2n, q)`.
pub fn universal_embedding_sp_char2(space: &PolarSpace) -> Result<Embedding> {
    let (form, coords) = require_form(space)?;
    let f = form.field();
    let is_w = matches!(space.spec(), Some(crate::forms::CanonicalSpaceSpec::Classical { family: ClassicalFamily::W, .. }));
    if !is_w || form.kind() != FormKind::Alternating {
        return Err(Error::NoUniversal("only the W family has a proper universal embedding here".into()));
    }
    if f.characteristic() != 2 {
        return Err(Error::NoUniversal(format!("q = {} is odd", f.order())));
    }
    let d = form.dim();
    let target = Form::canonical(ClassicalFamily::QParabolic, d + 1, f)?;
    let images = coords
        .iter()
        .map(|p| {
            let x = p.coords();
            let g = (0..d / 2).fold(0, |acc, i| f.add(acc, f.mul(x[2 * i], x[2 * i + 1])));
            let s = f.sqrt_char2(g).expect("squares are surjective in characteristic 2");
            let mut v = Vec::with_capacity(d + 1);
            v.push(s);
            v.extend_from_slice(x);
            linalg::normalize(f, &v)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut e = Embedding::new(space, EmbeddingKind::Universal, target, images)?;
    e.is_universal = Some(true);
    Ok(e)
}

/// Outcome of the double-perp identities for one non-collinear pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbIdentities {
    /// `⟨ε({a,b}^⊥)⟩ = {ε(a), ε(b)}^{⊥_f}`, of codimension 2.
    pub span_is_perp: bool,
    /// `{a,b}^⊥⊥ = ε⁻¹⟨ε(a), ε(b)⟩`.
    pub double_perp_is_preimage: bool,
    /// `{a,b}^⊥⊥ = N^⊥ ∩ N′^⊥` for the first opposite generator pair of `{a,b}^⊥`.
    pub regular_equality: bool,
    pub dim_is_2n: bool,
}

impl EmbIdentities {
    pub fn holds(&self) -> bool {
        self.span_is_perp && self.double_perp_is_preimage && self.regular_equality == self.dim_is_2n
    }
}

/// First pair (in generator order) of opposite generators of the induced space on `trace`,
/// in ambient point indices.
pub fn opposite_generator_pair(space: &PolarSpace, trace: &[usize]) -> Result<Option<(Vec<u32>, Vec<u32>)>> {
    let ind = space.induced(trace)?;
    let lift = |g: &SingularSubspace| g.points.iter().map(|&p| trace[p as usize] as u32).collect::<Vec<_>>();
    let gens = ind.generators();
    for (i, x) in gens.iter().enumerate() {
        for y in &gens[i + 1..] {
            if ind.are_opposite(x, y)? {
                return Ok(Some((lift(x), lift(y))));
            }
        }
    }
    Ok(None)
}

pub fn check_emb_identities(space: &PolarSpace, e: &Embedding, a: usize, b: usize) -> Result<EmbIdentities> {
    let h = hyperbolic::hyperbolic_line(space, a, b)?;
    let trace: Vec<usize> = space.perp(&[a, b])?.ones().collect();
    let span = e.span_of(trace.iter().copied());
    let perp = e.perp_f(&[e.image(a).coords(), e.image(b).coords()]);
    let span_is_perp = span == perp && span.codim() == 2;
    let pre = e.preimage_of(&e.span_of([a, b]));
    let double_perp_is_preimage = pre.iter().map(|&p| p as u32).eq(h.points.iter().copied());
    let (n1, n2) = opposite_generator_pair(space, &trace)?
        .ok_or_else(|| Error::InducedDegenerate("no opposite generators in the trace".into()))?;
    let nn: Vec<usize> = n1.iter().chain(&n2).map(|&p| p as usize).collect();
    let regular_equality = space.perp(&nn)?.ones().map(|p| p as u32).eq(h.points.iter().copied());
    Ok(EmbIdentities { span_is_perp, double_perp_is_preimage, regular_equality, dim_is_2n: e.dim == 2 * space.rank() })
}
