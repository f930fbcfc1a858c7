//! Exact linear algebra over a field: kernels, ranks by minors, extension of
//! functionals from subspaces, finitely presented / copresented modules and
//! their duals, sections of surjections and the Schur-complement identity.

mod matrix;

pub use matrix::{combinations, laplace_det, Matrix, RingElement};

use crate::corering::{Field, Scalar};
use crate::error::{Error, Result};

pub fn kernel_basis(m: &Matrix) -> Vec<Vec<Scalar>> {
    m.kernel_basis()
}

/// Largest `n` such that some `n x n` minor is nonzero. Minors are expanded
/// by cofactors, independently of elimination.
pub fn rank_by_minors(m: &Matrix) -> usize {
    let one = m.field().one();
    let entry = |i: usize, j: usize| m.get(i, j).clone();
    for n in (1..=m.rows().min(m.cols())).rev() {
        for rows in combinations(m.rows(), n) {
            for cols in combinations(m.cols(), n) {
                if !laplace_det(&entry, &rows, &cols, &one).is_zero() {
                    return n;
                }
            }
        }
    }
    0
}

/// Where a functional is defined: the kernel of a matrix or the column span
/// (image) of a matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Domain {
    KernelOf(Matrix),
    ImageOf(Matrix),
}

impl Domain {
    /// Dimension of the ambient space `k^n` containing the subspace.
    pub fn ambient_dim(&self) -> usize {
        match self {
            Domain::KernelOf(m) => m.cols(),
            Domain::ImageOf(m) => m.rows(),
        }
    }

    fn field(&self) -> Field {
        match self {
            Domain::KernelOf(m) | Domain::ImageOf(m) => m.field(),
        }
    }

    /// Canonical generators: the kernel basis, or the columns of the matrix.
    pub fn generators(&self) -> Vec<Vec<Scalar>> {
        match self {
            Domain::KernelOf(m) => m.kernel_basis(),
            Domain::ImageOf(m) => (0..m.cols()).map(|j| m.column(j)).collect(),
        }
    }

    fn contains(&self, v: &[Scalar]) -> bool {
        match self {
            Domain::KernelOf(m) => m.mul_vec(v).map(|w| w.iter().all(Scalar::is_zero)).unwrap_or(false),
            Domain::ImageOf(m) => v.len() == m.rows() && m.solve(v).is_some(),
        }
    }
}

/// A linear form on a subspace, given by its values on a generating set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Functional {
    domain: Domain,
    generators: Vec<Vec<Scalar>>,
    values: Vec<Scalar>,
}

impl Functional {
    /// Values on the domain's canonical generators.
    pub fn new(domain: Domain, values: Vec<Scalar>) -> Result<Self> {
        let generators = domain.generators();
        Functional::with_generators(domain, generators, values)
    }

    pub fn with_generators(domain: Domain, generators: Vec<Vec<Scalar>>, values: Vec<Scalar>) -> Result<Self> {
        if generators.len() != values.len() {
            return Err(Error::Arity {
                expected: generators.len(),
                found: values.len(),
            });
        }
        for g in &generators {
            if g.len() != domain.ambient_dim() || !domain.contains(g) {
                return Err(Error::Invalid("generator outside the functional's domain".into()));
            }
        }
        let f = Functional {
            domain,
            generators,
            values,
        };
        f.check_consistent()?;
        Ok(f)
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn generators(&self) -> &[Vec<Scalar>] {
        &self.generators
    }

    pub fn values(&self) -> &[Scalar] {
        &self.values
    }

    /// Every linear relation `sum c_i g_i = 0` must satisfy `sum c_i L(g_i) = 0`.
    fn check_consistent(&self) -> Result<()> {
        let field = self.domain.field();
        let gm = Matrix::from_columns(field, self.domain.ambient_dim(), &self.generators);
        for rel in gm.kernel_basis() {
            let v = rel
                .iter()
                .zip(&self.values)
                .fold(field.zero(), |acc, (c, l)| &acc + &(c * l));
            if !v.is_zero() {
                return Err(Error::InconsistentFunctional(rel));
            }
        }
        Ok(())
    }
}

/// A linear form `K` on the ambient space restricting to `L` on its domain.
/// Among all extensions the one with zero non-pivot coordinates is returned.
pub fn extend_functional(l: &Functional) -> Result<Vec<Scalar>> {
    l.check_consistent()?;
    let field = l.domain.field();
    let n = l.domain.ambient_dim();
    // rows are generators: G^T K = L
    let gt = Matrix::from_rows(field, n, l.generators.clone())?;
    let k = gt
        .solve(&l.values)
        .ok_or_else(|| Error::Internal("consistent functional without extension".into()))?;
    for (g, v) in l.generators.iter().zip(&l.values) {
        let kv = g.iter().zip(&k).fold(field.zero(), |acc, (a, b)| &acc + &(a * b));
        if &kv != v {
            return Err(Error::Internal("extension does not restrict to the functional".into()));
        }
    }
    Ok(k)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PresentationKind {
    /// `coker(p)` for `p: k^n -> k^m` (an `m x n` matrix).
    Fp,
    /// `ker(P)` for `P: k^n -> k^m` (an `m x n` matrix).
    Fcop,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModulePresentation {
    pub kind: PresentationKind,
    pub matrix: Matrix,
}

/// Canonical data of a presented vector space: kind, ambient dimension,
/// dimension and the reduced echelon basis of the defining subspace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalModule {
    pub kind: PresentationKind,
    pub ambient: usize,
    pub dimension: usize,
    pub echelon: Matrix,
}

impl ModulePresentation {
    pub fn fp(matrix: Matrix) -> Self {
        ModulePresentation {
            kind: PresentationKind::Fp,
            matrix,
        }
    }

    pub fn fcop(matrix: Matrix) -> Self {
        ModulePresentation {
            kind: PresentationKind::Fcop,
            matrix,
        }
    }

    /// Free module `k^n` as a cokernel of the zero map from `k^0`.
    pub fn free(field: Field, n: usize) -> Self {
        ModulePresentation::fp(Matrix::zeros(field, n, 0))
    }

    pub fn field(&self) -> Field {
        self.matrix.field()
    }

    /// Number of generators (FP) or ambient coordinates (FCOP).
    pub fn ambient(&self) -> usize {
        match self.kind {
            PresentationKind::Fp => self.matrix.rows(),
            PresentationKind::Fcop => self.matrix.cols(),
        }
    }

    pub fn dimension(&self) -> usize {
        self.ambient() - self.matrix.rank()
    }

    /// For FCOP, a basis of the kernel. For FP, a basis of a complement of
    /// the relation span, given by the non-pivot standard vectors.
    pub fn basis(&self) -> Vec<Vec<Scalar>> {
        match self.kind {
            PresentationKind::Fcop => self.matrix.kernel_basis(),
            PresentationKind::Fp => {
                let (_, pivots) = self.matrix.transpose().rref();
                let f = self.field();
                (0..self.ambient())
                    .filter(|c| !pivots.contains(c))
                    .map(|c| {
                        let mut v = vec![f.zero(); self.ambient()];
                        v[c] = f.one();
                        v
                    })
                    .collect()
            }
        }
    }

    /// The subspace determining the module, as rows: relation span (FP) or
    /// the row space whose annihilator is the module (FCOP).
    pub fn canonical(&self) -> CanonicalModule {
        let defining = match self.kind {
            PresentationKind::Fp => self.matrix.transpose(),
            PresentationKind::Fcop => self.matrix.clone(),
        };
        let (r, pivots) = defining.rref();
        let rows: Vec<usize> = (0..pivots.len()).collect();
        let cols: Vec<usize> = (0..r.cols()).collect();
        CanonicalModule {
            kind: self.kind,
            ambient: self.ambient(),
            dimension: self.dimension(),
            echelon: r.submatrix(&rows, &cols),
        }
    }
}

/// Dual presentation: `FCOP(P) -> FP(P^T)` and `FP(p) -> FCOP(p^T)`.
pub fn dualize(m: &ModulePresentation) -> ModulePresentation {
    let t = m.matrix.transpose();
    match m.kind {
        PresentationKind::Fcop => ModulePresentation::fp(t),
        PresentationKind::Fp => ModulePresentation::fcop(t),
    }
}

/// `M** = M`, compared through canonical forms.
pub fn double_dual_check(m: &ModulePresentation) -> bool {
    let dd = dualize(&dualize(m));
    let d = dualize(m);
    d.dimension() == m.dimension() && dd.canonical() == m.canonical()
}

/// Given `f` mapping `ker(source)` onto `ker(target)`, returns `s` with
/// `f s = id` on `ker(target)` and `s(ker(target)) ⊆ ker(source)`.
pub fn split_surjection(f: &Matrix, source: &ModulePresentation, target: &ModulePresentation) -> Result<Matrix> {
    if source.kind != PresentationKind::Fcop || target.kind != PresentationKind::Fcop {
        return Err(Error::Invalid("split_surjection expects copresented modules".into()));
    }
    if f.cols() != source.ambient() || f.rows() != target.ambient() {
        return Err(Error::Arity {
            expected: source.ambient(),
            found: f.cols(),
        });
    }
    let field = f.field();
    let src_basis = source.basis();
    let tgt_basis = target.basis();
    let b_src = Matrix::from_columns(field, source.ambient(), &src_basis);
    let image = f.mul(&b_src)?;
    for j in 0..image.cols() {
        let v = target.matrix.mul_vec(&image.column(j))?;
        if v.iter().any(|x| !x.is_zero()) {
            return Err(Error::NotInTarget);
        }
    }
    // preimages of the target basis inside the source subspace
    let mut preimages = Vec::with_capacity(tgt_basis.len());
    for t in &tgt_basis {
        let c = image.solve(t).ok_or_else(|| Error::NotSurjective(t.clone()))?;
        preimages.push(b_src.mul_vec(&c)?);
    }
    // complete the target basis with standard vectors; s vanishes on them
    let b = target.ambient();
    let mut columns = tgt_basis.clone();
    for e in 0..b {
        if columns.len() == b {
            break;
        }
        let mut v = vec![field.zero(); b];
        v[e] = field.one();
        let mut trial = columns.clone();
        trial.push(v.clone());
        if Matrix::from_columns(field, b, &trial).rank() == trial.len() {
            columns.push(v);
        }
    }
    let basis_matrix = Matrix::from_columns(field, b, &columns);
    let inv = basis_matrix
        .inverse()
        .ok_or_else(|| Error::Internal("completed basis is singular".into()))?;
    let mut images = preimages;
    images.resize(b, vec![field.zero(); source.ambient()]);
    let s = Matrix::from_columns(field, source.ambient(), &images).mul(&inv)?;
    let fs = f.mul(&s)?;
    for t in &tgt_basis {
        if &fs.mul_vec(t)? != t {
            return Err(Error::Internal("section does not split".into()));
        }
    }
    Ok(s)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchurReport {
    /// `rank(M) = n` implies `S = R P^-1 Q`.
    pub holds: bool,
    pub rank: usize,
    /// `S - R P^-1 Q`.
    pub residual: Matrix,
}

/// Checks the block identity for `M = [[P, Q], [R, S]]` with `P` the
/// leading `n x n` block.
pub fn schur_check(m: &Matrix, n: usize) -> Result<SchurReport> {
    if n > m.rows() || n > m.cols() {
        return Err(Error::IndexOutOfRange {
            index: n,
            len: m.rows().min(m.cols()),
        });
    }
    let top: Vec<usize> = (0..n).collect();
    let bottom: Vec<usize> = (n..m.rows()).collect();
    let left: Vec<usize> = (0..n).collect();
    let right: Vec<usize> = (n..m.cols()).collect();
    let p = m.submatrix(&top, &left);
    let p_inv = p.inverse().ok_or(Error::SingularBlock)?;
    let q = m.submatrix(&top, &right);
    let r = m.submatrix(&bottom, &left);
    let s = m.submatrix(&bottom, &right);
    let residual = s.sub(&r.mul(&p_inv)?.mul(&q)?);
    let rank = m.rank();
    Ok(SchurReport {
        holds: rank != n || residual.is_zero(),
        rank,
        residual,
    })
}

#[cfg(test)]
mod tests;
