use crate::corering::Polynomial;
use crate::error::{Error, Result};
use crate::groebner;
use crate::linalg::{laplace_det, Matrix};
use crate::scheme::FpAlgebra;

/// Newton correction `y = x - dP_x^{-1} · P(x)` for a square system `a`,
/// where `x` is a point with coordinates in the local algebra `b` (presented
/// with every variable nilpotent) and `P(x)` lies in the square-zero ideal
/// generated by `nil`. The inverse is taken over `b`, so `P(y) = 0` exactly.
pub fn hensel_step(a: &FpAlgebra, b: &FpAlgebra, nil: &[Polynomial], x: &[Polynomial]) -> Result<Vec<Polynomial>> {
    let m = a.nvars();
    let rels = a.relations();
    if rels.len() != m {
        return Err(Error::NotSquare {
            relations: rels.len(),
            vars: m,
        });
    }
    if x.len() != m {
        return Err(Error::Arity {
            expected: m,
            found: x.len(),
        });
    }
    let bz = Polynomial::zero(b.ring());
    if a.field() != b.field() || x.iter().chain(nil).any(|p| !p.same_ring(&bz)) {
        return Err(Error::AmbientMismatch);
    }
    for (i, u) in nil.iter().enumerate() {
        for v in &nil[i..] {
            if !b.contains(&(u * v))? {
                return Err(Error::InvalidExtension("nilpotent ideal does not square to zero".into()));
            }
        }
    }
    for i in 0..b.nvars() {
        if !groebner::is_nilpotent_mod_with(&Polynomial::var(b.ring(), i), b.ideal(), &b.caps())? {
            return Err(Error::InvalidExtension(format!("variable {} is not nilpotent", b.ring().vars()[i])));
        }
    }
    let nideal = b.ideal().with(nil.iter().cloned())?;
    let x: Vec<Polynomial> = x.iter().map(|p| b.reduce(p)).collect::<Result<_>>()?;
    let value = |pts: &[Polynomial]| -> Result<Vec<Polynomial>> {
        rels.iter()
            .map(|p| b.reduce(&p.compose(pts, b.ring())?))
            .collect()
    };
    let px = value(&x)?;
    for r in &px {
        if !groebner::ideal_member_with(r, &nideal, false, &b.caps())?.0 {
            return Err(Error::NotInNilpotentIdeal);
        }
    }

    let residue: Vec<_> = x.iter().map(Polynomial::constant_term).collect();
    let mut jr = Matrix::zeros(a.field(), m, m);
    let mut jx = vec![vec![bz.clone(); m]; m];
    for (i, p) in rels.iter().enumerate() {
        for j in 0..m {
            let d = p.partial_derivative(j)?;
            jr.set(i, j, d.eval(&residue)?);
            jx[i][j] = b.reduce(&d.compose(&x, b.ring())?)?;
        }
    }
    if jr.det()?.is_zero() {
        return Err(Error::SingularJacobian);
    }
    let all: Vec<usize> = (0..m).collect();
    let one = Polynomial::one(b.ring());
    let det = b.reduce(&laplace_det(&|i, j| jx[i][j].clone(), &all, &all, &one))?;
    let (inv, _) = groebner::unit_witness(&det, b.ideal(), &b.caps())?.ok_or(Error::SingularJacobian)?;

    // y_j = x_j - inv · Σ_i adj[j][i] · P_i(x), adj[j][i] = (-1)^{i+j} M_{ij}
    let mut y = Vec::with_capacity(m);
    for j in 0..m {
        let mut corr = bz.clone();
        for (i, pi) in px.iter().enumerate() {
            if pi.is_zero() {
                continue;
            }
            let rows: Vec<usize> = all.iter().copied().filter(|&r| r != i).collect();
            let cols: Vec<usize> = all.iter().copied().filter(|&c| c != j).collect();
            let mij = laplace_det(&|r, c| jx[r][c].clone(), &rows, &cols, &one);
            let t = &mij * pi;
            corr = if (i + j) % 2 == 0 { &corr + &t } else { &corr - &t };
        }
        y.push(b.reduce(&(&x[j] - &(&inv * &corr)))?);
    }

    if value(&y)?.iter().any(|r| !r.is_zero()) {
        return Err(Error::Internal("Hensel correction did not solve the system".into()));
    }
    for (u, v) in y.iter().zip(&x) {
        if !groebner::ideal_member_with(&(u - v), &nideal, false, &b.caps())?.0 {
            return Err(Error::Internal("Hensel correction left the residue class".into()));
        }
    }
    Ok(y)
}
