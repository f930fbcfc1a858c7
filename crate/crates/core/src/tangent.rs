//! Tangent and cotangent fibers at rational points, the dual-number
//! enumeration oracle, the pairing into `k[ε1, ε2]/(ε1, ε2)^2` and
//! differentials of polynomial maps.

use crate::corering::{Field, Polynomial, Scalar};
use crate::error::{Error, Result};
use crate::groebner::ideal_member;
use crate::linalg::{Matrix, ModulePresentation};
use crate::scheme::{check_point, jacobian_at, jacobian_of, FpAlgebra, RationalPoint};

/// Default bound on dual-number substitutions in [`tangent_enum_fp`].
pub const ENUMERATION_CAP: u128 = 1_000_000;

/// `T_x(X) = ker J(x)`, in ambient coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TangentFiber {
    pub point: RationalPoint,
    pub basis: Vec<Vec<Scalar>>,
    pub ambient: usize,
}

impl TangentFiber {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// Every vector of the span over a prime field, sorted by residues.
    pub fn span_fp(&self) -> Option<Vec<Vec<Scalar>>> {
        let field = self.point.coords().first().map(Scalar::field).unwrap_or(Field::Rationals);
        let elems = field.elements()?;
        let mut out = Vec::new();
        let mut idx = vec![0usize; self.basis.len()];
        loop {
            let mut v = vec![field.zero(); self.ambient];
            for (c, b) in idx.iter().zip(&self.basis) {
                for (x, y) in v.iter_mut().zip(b) {
                    *x = &*x + &(&elems[*c] * y);
                }
            }
            out.push(v);
            let mut k = 0;
            loop {
                if k == idx.len() {
                    out.sort_by_key(|v| residues(v));
                    out.dedup();
                    return Some(out);
                }
                idx[k] += 1;
                if idx[k] < elems.len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
    }

    pub fn contains(&self, a: &FpAlgebra, v: &[Scalar]) -> Result<bool> {
        let j = jacobian_at(a, &self.point)?;
        Ok(j.mul_vec(v)?.iter().all(Scalar::is_zero))
    }
}

fn residues(v: &[Scalar]) -> Vec<u32> {
    v.iter().map(|s| s.residue().unwrap_or(0)).collect()
}

pub fn tangent_basis(a: &FpAlgebra, x: &RationalPoint) -> Result<TangentFiber> {
    let j = jacobian_at(a, x)?;
    Ok(TangentFiber {
        point: x.clone(),
        basis: j.kernel_basis(),
        ambient: a.nvars(),
    })
}

/// Element `value + Σ linear_i ε_i` of `k[ε_1..ε_r]/(ε_1..ε_r)^2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Jet {
    pub value: Scalar,
    pub linear: Vec<Scalar>,
}

impl Jet {
    pub fn constant(c: Scalar, order: usize) -> Self {
        let z = c.field().zero();
        Jet {
            value: c,
            linear: vec![z; order],
        }
    }

    pub fn add(&self, o: &Jet) -> Jet {
        Jet {
            value: &self.value + &o.value,
            linear: self.linear.iter().zip(&o.linear).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn mul(&self, o: &Jet) -> Jet {
        Jet {
            value: &self.value * &o.value,
            linear: self
                .linear
                .iter()
                .zip(&o.linear)
                .map(|(a, b)| &(&self.value * b) + &(&o.value * a))
                .collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero() && self.linear.iter().all(Scalar::is_zero)
    }
}

/// Evaluates `p` at jets by plain term-by-term substitution.
pub fn eval_jet(p: &Polynomial, point: &[Jet]) -> Jet {
    let order = point.first().map_or(0, |j| j.linear.len());
    let field = p.field();
    let mut acc = Jet::constant(field.zero(), order);
    for (m, c) in p.terms() {
        let mut t = Jet::constant(c.clone(), order);
        for (x, &e) in point.iter().zip(m.exponents()) {
            for _ in 0..e {
                t = t.mul(x);
            }
        }
        acc = acc.add(&t);
    }
    acc
}

/// All `v ∈ F_p^m` with `P_i(x + vε) = 0` in `F_p[ε]/(ε^2)`, by exhaustive
/// substitution. Sorted by residues.
pub fn tangent_enum_fp(a: &FpAlgebra, x: &RationalPoint, cap: u128) -> Result<Vec<Vec<Scalar>>> {
    let elems = a
        .field()
        .elements()
        .ok_or_else(|| Error::Invalid("tangent enumeration needs a prime field".into()))?;
    let m = a.nvars();
    let needed = (elems.len() as u128).saturating_pow(m as u32);
    if needed > cap {
        return Err(Error::EnumerationCap { needed, cap });
    }
    let mut out = Vec::new();
    let mut idx = vec![0usize; m];
    loop {
        let point: Vec<Jet> = x
            .coords()
            .iter()
            .zip(&idx)
            .map(|(c, &i)| Jet {
                value: c.clone(),
                linear: vec![elems[i].clone()],
            })
            .collect();
        if a.relations().iter().all(|p| eval_jet(p, &point).is_zero()) {
            out.push(idx.iter().map(|&i| elems[i].clone()).collect::<Vec<_>>());
        }
        let mut k = m;
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < elems.len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

/// `T_x^*(X) = coker(J(x)^T)`.
pub fn cotangent_at(a: &FpAlgebra, x: &RationalPoint) -> Result<ModulePresentation> {
    Ok(ModulePresentation::fp(jacobian_at(a, x)?.transpose()))
}

/// The map `X_i ↦ x_i + v_i ε1 + w_i ε2` into `k[ε1, ε2]/(ε1, ε2)^2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PsiMap {
    pub images: Vec<Jet>,
}

impl PsiMap {
    fn component(&self, k: usize) -> Vec<Scalar> {
        self.images.iter().map(|j| j.linear[k].clone()).collect()
    }

    /// Restriction along `ε2 = 0`.
    pub fn first(&self) -> Vec<Scalar> {
        self.component(0)
    }

    /// Restriction along `ε1 = 0`.
    pub fn second(&self) -> Vec<Scalar> {
        self.component(1)
    }

    /// Substitution `ε1 = ε2 = ε`: the tangent vector `v + w`.
    pub fn diagonal(&self) -> Vec<Scalar> {
        self.images.iter().map(|j| &j.linear[0] + &j.linear[1]).collect()
    }
}

pub fn psi_pair(a: &FpAlgebra, x: &RationalPoint, v: &[Scalar], w: &[Scalar]) -> Result<PsiMap> {
    let fiber = tangent_basis(a, x)?;
    for u in [v, w] {
        if u.len() != a.nvars() {
            return Err(Error::Arity {
                expected: a.nvars(),
                found: u.len(),
            });
        }
        if !fiber.contains(a, u)? {
            return Err(Error::NotTangent);
        }
    }
    let images: Vec<Jet> = x
        .coords()
        .iter()
        .zip(v.iter().zip(w))
        .map(|(c, (vi, wi))| Jet {
            value: c.clone(),
            linear: vec![vi.clone(), wi.clone()],
        })
        .collect();
    for p in a.relations() {
        if !eval_jet(p, &images).is_zero() {
            return Err(Error::Internal("tangent vectors do not define a map on D(2)".into()));
        }
    }
    Ok(PsiMap { images })
}

/// Composite of a tangent vector with `ε ↦ rε`: the vector `r v`. Checks the
/// result is still a dual-number point.
pub fn reparametrize(a: &FpAlgebra, x: &RationalPoint, v: &[Scalar], r: &Scalar) -> Result<Vec<Scalar>> {
    let scaled: Vec<Scalar> = v.iter().map(|c| c * r).collect();
    let point: Vec<Jet> = x
        .coords()
        .iter()
        .zip(&scaled)
        .map(|(c, s)| Jet {
            value: c.clone(),
            linear: vec![s.clone()],
        })
        .collect();
    if a.relations().iter().any(|p| !eval_jet(p, &point).is_zero()) {
        return Err(Error::NotTangent);
    }
    Ok(scaled)
}

/// A morphism `X -> Y` given by coordinate polynomials on `X`.
#[derive(Clone, Debug)]
pub struct PolyMap {
    pub source: FpAlgebra,
    pub target: FpAlgebra,
    pub coords: Vec<Polynomial>,
}

impl PolyMap {
    /// Checks that every relation of `target` pulls back into the ideal of
    /// `source`.
    pub fn new(source: FpAlgebra, target: FpAlgebra, coords: Vec<Polynomial>) -> Result<Self> {
        if coords.len() != target.nvars() {
            return Err(Error::Arity {
                expected: target.nvars(),
                found: coords.len(),
            });
        }
        if source.field() != target.field() || coords.iter().any(|c| !c.same_ring(&Polynomial::zero(source.ring()))) {
            return Err(Error::AmbientMismatch);
        }
        for (i, q) in target.relations().iter().enumerate() {
            let pulled = q.compose(&coords, source.ring())?;
            if !ideal_member(&pulled, source.ideal(), false)?.0 {
                return Err(Error::MapNotWellDefined(i));
            }
        }
        Ok(PolyMap {
            source,
            target,
            coords,
        })
    }

    pub fn identity(a: &FpAlgebra) -> Self {
        PolyMap {
            source: a.clone(),
            target: a.clone(),
            coords: (0..a.nvars()).map(|i| Polynomial::var(a.ring(), i)).collect(),
        }
    }

    pub fn apply(&self, x: &RationalPoint) -> Result<RationalPoint> {
        let coords = self
            .coords
            .iter()
            .map(|c| c.eval(x.coords()))
            .collect::<Result<Vec<_>>>()?;
        check_point(&self.target, coords)
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &PolyMap) -> Result<PolyMap> {
        let coords = other
            .coords
            .iter()
            .map(|c| c.compose(&self.coords, self.source.ring()))
            .collect::<Result<Vec<_>>>()?;
        PolyMap::new(self.source.clone(), other.target.clone(), coords)
    }
}

/// `df_x : T_x(X) -> T_f(x)(Y)` as a matrix in the two tangent bases.
pub fn differential_at(f: &PolyMap, x: &RationalPoint) -> Result<Matrix> {
    let field = f.source.field();
    let src = tangent_basis(&f.source, x)?;
    let y = f.apply(x)?;
    let tgt = tangent_basis(&f.target, &y)?;
    let jac = jacobian_of(&f.coords, f.source.nvars()).eval(field, x.coords())?;
    let bx = Matrix::from_columns(field, f.source.nvars(), &src.basis);
    let by = Matrix::from_columns(field, f.target.nvars(), &tgt.basis);
    let pushed = jac.mul(&bx)?;
    let mut cols = Vec::with_capacity(pushed.cols());
    for j in 0..pushed.cols() {
        let c = by
            .solve(&pushed.column(j))
            .ok_or_else(|| Error::Internal("differential leaves the target tangent space".into()))?;
        cols.push(c);
    }
    Ok(Matrix::from_columns(field, tgt.dimension(), &cols))
}
