//! Reflexive sesquilinear and quadratic forms over finite fields, plus the
//! catalog keys used to name the spaces built from them.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::gf::{Elem, Field};
use crate::linalg::{self, Subspace, Vector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FormKind {
    Alternating,
    /// Symmetric bilinear; only produced as the polarization of a quadratic form in odd characteristic.
    Symmetric,
    Quadratic,
    Hermitian,
}

impl FormKind {
    pub fn name(self) -> &'static str {
        match self {
            FormKind::Alternating => "alternating",
            FormKind::Symmetric => "symmetric",
            FormKind::Quadratic => "quadratic",
            FormKind::Hermitian => "hermitian",
        }
    }
}

/// A form on `GF(q)^d`. For quadratic forms `matrix` holds the upper-triangular
/// coefficients `a_ij` of `sum_{i<=j} a_ij x_i x_j`; otherwise it is the Gram matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Form {
    kind: FormKind,
    field: Field,
    dim: usize,
    matrix: Vec<Vec<Elem>>,
    // Gram matrix of the reflexive form that decides orthogonality
    polar: Vec<Vec<Elem>>,
}

fn square(matrix: &[Vec<Elem>], field: &Field) -> Result<usize> {
    let d = matrix.len();
    if matrix.iter().any(|r| r.len() != d) {
        return Err(Error::InvalidForm("matrix is not square".into()));
    }
    if matrix.iter().flatten().any(|&c| c as usize >= field.order()) {
        return Err(Error::InvalidForm("entry outside the field".into()));
    }
    Ok(d)
}

impl Form {
    pub fn alternating(field: &Field, gram: Vec<Vec<Elem>>) -> Result<Form> {
        let d = square(&gram, field)?;
        for i in 0..d {
            if gram[i][i] != 0 {
                return Err(Error::InvalidForm("alternating Gram matrix needs a zero diagonal".into()));
            }
            for j in 0..d {
                if gram[j][i] != field.neg(gram[i][j]) {
                    return Err(Error::InvalidForm("Gram matrix is not skew-symmetric".into()));
                }
            }
        }
        Ok(Form { kind: FormKind::Alternating, field: field.clone(), dim: d, polar: gram.clone(), matrix: gram })
    }

    pub fn symmetric(field: &Field, gram: Vec<Vec<Elem>>) -> Result<Form> {
        let d = square(&gram, field)?;
        for i in 0..d {
            for j in 0..d {
                if gram[j][i] != gram[i][j] {
                    return Err(Error::InvalidForm("Gram matrix is not symmetric".into()));
                }
            }
        }
        Ok(Form { kind: FormKind::Symmetric, field: field.clone(), dim: d, polar: gram.clone(), matrix: gram })
    }

    pub fn hermitian(field: &Field, gram: Vec<Vec<Elem>>) -> Result<Form> {
        let d = square(&gram, field)?;
        for i in 0..d {
            for j in 0..d {
                if gram[j][i] != field.conj(gram[i][j])? {
                    return Err(Error::InvalidForm("Gram matrix is not hermitian".into()));
                }
            }
        }
        Ok(Form { kind: FormKind::Hermitian, field: field.clone(), dim: d, polar: gram.clone(), matrix: gram })
    }

    pub fn quadratic(field: &Field, coeffs: Vec<Vec<Elem>>) -> Result<Form> {
        let d = square(&coeffs, field)?;
        for i in 0..d {
            for j in 0..i {
                if coeffs[i][j] != 0 {
                    return Err(Error::InvalidForm("coefficient matrix must be upper-triangular".into()));
                }
            }
        }
        let polar = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        if i == j {
                            field.add(coeffs[i][i], coeffs[i][i])
                        } else {
                            field.add(coeffs[i][j], coeffs[j][i])
                        }
                    })
                    .collect()
            })
            .collect();
        Ok(Form { kind: FormKind::Quadratic, field: field.clone(), dim: d, matrix: coeffs, polar })
    }

    pub fn kind(&self) -> FormKind {
        self.kind
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &[Vec<Elem>] {
        &self.matrix
    }

    /// Gram matrix of the reflexive form governing orthogonality.
    pub fn polar_gram(&self) -> &[Vec<Elem>] {
        &self.polar
    }

    fn check_dims(&self, x: &[Elem]) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: x.len() });
        }
        Ok(())
    }

    fn gram_eval(&self, gram: &[Vec<Elem>], x: &[Elem], y: &[Elem]) -> Elem {
        let f = &self.field;
        let hermitian = self.kind == FormKind::Hermitian;
        let mut acc = 0;
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                let g = gram[i][j];
                if g == 0 || yj == 0 {
                    continue;
                }
                let yj = if hermitian { f.conj(yj).expect("hermitian field") } else { yj };
                acc = f.add(acc, f.mul(xi, f.mul(g, yj)));
            }
        }
        acc
    }

    /// `f(x, y)` for alternating, symmetric and hermitian forms. Hermitian forms are
    /// linear in `x` and conjugate-linear in `y`.
    pub fn evaluate_bilinear(&self, x: &[Elem], y: &[Elem]) -> Result<Elem> {
        if self.kind == FormKind::Quadratic {
            return Err(Error::KindMismatch { expected: "sesquilinear", got: "quadratic" });
        }
        self.check_dims(x)?;
        self.check_dims(y)?;
        Ok(self.gram_eval(&self.matrix, x, y))
    }

    pub fn evaluate_quadratic(&self, x: &[Elem]) -> Result<Elem> {
        if self.kind != FormKind::Quadratic {
            return Err(Error::KindMismatch { expected: "quadratic", got: self.kind.name() });
        }
        self.check_dims(x)?;
        Ok(self.quad(x))
    }

    fn quad(&self, x: &[Elem]) -> Elem {
        let f = &self.field;
        let mut acc = 0;
        for i in 0..self.dim {
            if x[i] == 0 {
                continue;
            }
            for j in i..self.dim {
                let a = self.matrix[i][j];
                if a != 0 && x[j] != 0 {
                    acc = f.add(acc, f.mul(a, f.mul(x[i], x[j])));
                }
            }
        }
        acc
    }

    /// Value of the reflexive form (the polarization, for quadratic forms).
    #[inline]
    pub fn polar_value(&self, x: &[Elem], y: &[Elem]) -> Elem {
        self.gram_eval(&self.polar, x, y)
    }

    /// Isotropic (sesquilinear) or singular (quadratic) vector test.
    pub fn is_null(&self, x: &[Elem]) -> bool {
        match self.kind {
            FormKind::Quadratic => self.quad(x) == 0,
            FormKind::Alternating => true,
            _ => self.polar_value(x, x) == 0,
        }
    }

    /// `f_q(x, y) = q(x + y) - q(x) - q(y)`; alternating in characteristic 2.
    pub fn polarization(&self) -> Result<Form> {
        if self.kind != FormKind::Quadratic {
            return Err(Error::KindMismatch { expected: "quadratic", got: self.kind.name() });
        }
        if self.field.characteristic() == 2 {
            Form::alternating(&self.field, self.polar.clone())
        } else {
            Form::symmetric(&self.field, self.polar.clone())
        }
    }

    /// Kernel of the (polar) Gram matrix.
    pub fn radical(&self) -> Subspace {
        let f = &self.field;
        let cols = (0..self.dim)
            .map(|j| (0..self.dim).map(|i| self.polar[i][j]).collect::<Vector>())
            .collect::<Vec<_>>();
        linalg::span(f, self.dim, &cols).expect("square matrix").annihilator(f)
    }

    /// Singular vectors inside `Rad(f_q)`; they form a subspace.
    pub fn quadratic_radical(&self) -> Result<Subspace> {
        if self.kind != FormKind::Quadratic {
            return Err(Error::KindMismatch { expected: "quadratic", got: self.kind.name() });
        }
        let rad = self.radical();
        let f = &self.field;
        let singular = combinations(f, rad.rows())
            .filter(|v| v.iter().any(|&c| c != 0) && self.quad(v) == 0)
            .collect::<Vec<_>>();
        linalg::span(f, self.dim, &singular)
    }

    pub fn is_degenerate(&self) -> bool {
        match self.kind {
            FormKind::Quadratic => self.quadratic_radical().map(|r| r.rank() > 0).unwrap_or(true),
            _ => self.radical().rank() > 0,
        }
    }

    /// Witt index by repeatedly splitting off hyperbolic pairs.
    pub fn witt_index(&self) -> Result<usize> {
        if self.is_degenerate() {
            return Err(Error::Degenerate);
        }
        let f = &self.field;
        let mut basis: Vec<Vector> = (0..self.dim)
            .map(|i| (0..self.dim).map(|j| (i == j) as Elem).collect())
            .collect();
        let mut index = 0;
        loop {
            let Some(v) = combinations(f, &basis).find(|v| v.iter().any(|&c| c != 0) && self.is_null(v))
            else {
                return Ok(index);
            };
            let w = basis
                .iter()
                .find(|b| self.polar_value(b, &v) != 0)
                .cloned()
                .ok_or(Error::Degenerate)?;
            index += 1;
            // coefficient vectors c with sum_i c_i f(b_i, v) = 0 and sum_i c_i f(b_i, w) = 0
            let rows = [&v, &w]
                .iter()
                .map(|t| basis.iter().map(|b| self.polar_value(b, t)).collect::<Vector>())
                .collect::<Vec<_>>();
            let kernel = linalg::span(f, basis.len(), &rows)?.annihilator(f);
            basis = kernel
                .rows()
                .iter()
                .map(|c| {
                    c.iter().zip(&basis).fold(vec![0; self.dim], |acc, (&ci, b)| {
                        linalg::add_vec(f, &acc, &linalg::scale(f, b, ci))
                    })
                })
                .collect();
        }
    }

    /// Canonical form of a classical family on `GF(q)^d`.
    pub fn canonical(family: ClassicalFamily, d: usize, field: &Field) -> Result<Form> {
        let zero = || vec![vec![0 as Elem; d]; d];
        match family {
            ClassicalFamily::W => {
                let mut g = zero();
                for i in (0..d.saturating_sub(1)).step_by(2) {
                    g[i][i + 1] = 1;
                    g[i + 1][i] = field.neg(1);
                }
                Form::alternating(field, g)
            }
            ClassicalFamily::QParabolic => {
                let mut a = zero();
                a[0][0] = 1;
                for i in (1..d.saturating_sub(1)).step_by(2) {
                    a[i][i + 1] = 1;
                }
                Form::quadratic(field, a)
            }
            ClassicalFamily::QPlus => {
                let mut a = zero();
                for i in (0..d.saturating_sub(1)).step_by(2) {
                    a[i][i + 1] = 1;
                }
                Form::quadratic(field, a)
            }
            ClassicalFamily::QMinus => {
                let mut a = zero();
                let c = elliptic_constant(field);
                a[0][0] = 1;
                a[0][1] = 1;
                a[1][1] = c;
                for i in (2..d.saturating_sub(1)).step_by(2) {
                    a[i][i + 1] = 1;
                }
                Form::quadratic(field, a)
            }
            ClassicalFamily::H => {
                let mut g = zero();
                for (i, row) in g.iter_mut().enumerate() {
                    row[i] = 1;
                }
                Form::hermitian(field, g)
            }
        }
    }
}

/// First `c` in index order with `x^2 + x y + c y^2` irreducible.
pub fn elliptic_constant(field: &Field) -> Elem {
    field
        .elements()
        .find(|&c| field.elements().all(|t| field.add(field.add(field.mul(t, t), t), c) != 0))
        .expect("an irreducible binary quadratic exists over every finite field")
}

/// Every vector of the span of `basis`, zero included.
fn combinations<'a>(f: &'a Field, basis: &'a [Vector]) -> impl Iterator<Item = Vector> + 'a {
    let q = f.order();
    let r = basis.len();
    let dim = basis.first().map_or(0, |b| b.len());
    (0..q.pow(r as u32)).map(move |mut n| {
        let mut v = vec![0; dim];
        for b in basis {
            let c = (n % q) as Elem;
            n /= q;
            if c != 0 {
                v = linalg::add_vec(f, &v, &linalg::scale(f, b, c));
            }
        }
        v
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClassicalFamily {
    W,
    QParabolic,
    QPlus,
    QMinus,
    H,
}

impl ClassicalFamily {
    fn tag(self) -> &'static str {
        match self {
            ClassicalFamily::W => "W",
            ClassicalFamily::QParabolic => "Q",
            ClassicalFamily::QPlus => "Q+",
            ClassicalFamily::QMinus => "Q-",
            ClassicalFamily::H => "H",
        }
    }
}

/// Catalog key for a space: a classical family with projective dimension and
/// field order, a grid, or a construction applied to a base space.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CanonicalSpaceSpec {
    Classical { family: ClassicalFamily, proj_dim: usize, q: u64 },
    Grid { order: u64 },
    Payne { base: Box<CanonicalSpaceSpec> },
    Dual { base: Box<CanonicalSpaceSpec> },
}

impl CanonicalSpaceSpec {
    pub fn classical(family: ClassicalFamily, proj_dim: usize, q: u64) -> CanonicalSpaceSpec {
        CanonicalSpaceSpec::Classical { family, proj_dim, q }
    }

    /// Rank implied by the parameters, when it is known without building the space.
    pub fn expected_rank(&self) -> Option<usize> {
        match self {
            CanonicalSpaceSpec::Classical { family, proj_dim, .. } => {
                let d = proj_dim + 1;
                Some(match family {
                    ClassicalFamily::W | ClassicalFamily::QPlus => d / 2,
                    ClassicalFamily::QParabolic => (d - 1) / 2,
                    ClassicalFamily::QMinus => (d / 2).saturating_sub(1),
                    ClassicalFamily::H => d / 2,
                })
            }
            _ => Some(2),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Inadmissible(m));
        match self {
            CanonicalSpaceSpec::Classical { family, proj_dim, q } => {
                let d = proj_dim + 1;
                let (p, k) = crate::gf::prime_power(*q)
                    .ok_or_else(|| Error::Inadmissible(format!("{q} is not a prime power")))?;
                match family {
                    ClassicalFamily::W | ClassicalFamily::QPlus | ClassicalFamily::QMinus if d % 2 == 1 => {
                        return bad(format!("{self} needs an odd projective dimension"));
                    }
                    ClassicalFamily::QParabolic if d % 2 == 0 => {
                        return bad(format!("{self} needs an even projective dimension"));
                    }
                    ClassicalFamily::H if k % 2 == 1 => {
                        return bad(format!("{self} needs a square field order, got {q} = {p}^{k}"));
                    }
                    _ => {}
                }
                if self.expected_rank().unwrap_or(0) < 2 {
                    return bad(format!("{self} has rank below 2"));
                }
                Ok(())
            }
            CanonicalSpaceSpec::Grid { order } => {
                if *order < 2 {
                    return bad("grid order must be at least 2".into());
                }
                Ok(())
            }
            CanonicalSpaceSpec::Payne { base } => match base.as_ref() {
                CanonicalSpaceSpec::Classical { family: ClassicalFamily::W, proj_dim: 3, .. } => base.validate(),
                _ => bad(format!("Payne derivation needs a W(3,q) base, got {base}")),
            },
            CanonicalSpaceSpec::Dual { base } => {
                base.validate()?;
                if base.expected_rank() != Some(2) {
                    return bad(format!("dual needs a rank 2 base, got {base}"));
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for CanonicalSpaceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CanonicalSpaceSpec::Classical { family, proj_dim, q } => write!(f, "{}({},{})", family.tag(), proj_dim, q),
            CanonicalSpaceSpec::Grid { order } => write!(f, "grid({order})"),
            CanonicalSpaceSpec::Payne { base } => write!(f, "P({base})"),
            CanonicalSpaceSpec::Dual { base } => write!(f, "dual({base})"),
        }
    }
}

impl FromStr for CanonicalSpaceSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                '⁺' => '+',
                '⁻' | '−' => '-',
                c => c,
            })
            .collect();
        let err = |reason: &str| Error::Parse { input: s.to_string(), reason: reason.to_string() };
        let open = compact.find('(').ok_or_else(|| err("missing '('"))?;
        if !compact.ends_with(')') {
            return Err(err("missing closing ')'"));
        }
        let head = &compact[..open];
        let inner = &compact[open + 1..compact.len() - 1];
        let number = |t: &str| t.parse::<u64>().map_err(|_| err(&format!("{t:?} is not a number")));
        let spec = match head {
            "P" => CanonicalSpaceSpec::Payne { base: Box::new(inner.parse().map_err(|_| err("bad base space"))?) },
            "dual" => CanonicalSpaceSpec::Dual { base: Box::new(inner.parse().map_err(|_| err("bad base space"))?) },
            "grid" => CanonicalSpaceSpec::Grid { order: number(inner)? },
            _ => {
                let family = match head {
                    "W" => ClassicalFamily::W,
                    "Q" => ClassicalFamily::QParabolic,
                    "Q+" => ClassicalFamily::QPlus,
                    "Q-" => ClassicalFamily::QMinus,
                    "H" => ClassicalFamily::H,
                    _ => return Err(err(&format!("unknown family {head:?}"))),
                };
                let (a, b) = inner.split_once(',').ok_or_else(|| err("expected two parameters"))?;
                CanonicalSpaceSpec::Classical { family, proj_dim: number(a)? as usize, q: number(b)? }
            }
        };
        Ok(spec)
    }
}
