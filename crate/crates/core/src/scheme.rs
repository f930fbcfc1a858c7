//! Finitely presented algebras `k[X_1..X_m]/(P_1..P_l)` and the objects built
//! from them: rational points, Jacobians, square-zero extensions `k ⊕ M`,
//! first-order neighborhoods and the Kähler differential module.

use std::sync::Arc;

use crate::corering::{parse_poly, parse_scalar, Field, MonomialOrder, Polynomial, Ring, Scalar};
use crate::error::{Error, Result};
use crate::groebner::{self, Caps, GroebnerBasis, IdealSpec};
use crate::linalg::{Matrix, ModulePresentation, PresentationKind};

/// A presented algebra together with the reduced Gröbner basis of its
/// relation ideal (graded reverse lexicographic order).
#[derive(Clone, Debug)]
pub struct FpAlgebra {
    ring: Arc<Ring>,
    relations: IdealSpec,
    gb: GroebnerBasis,
    caps: Caps,
}

impl FpAlgebra {
    pub fn new(ring: &Arc<Ring>, relations: Vec<Polynomial>) -> Result<Self> {
        FpAlgebra::with_caps(ring, relations, Caps::default())
    }

    pub fn with_caps(ring: &Arc<Ring>, relations: Vec<Polynomial>, caps: Caps) -> Result<Self> {
        let relations = IdealSpec::new(ring, relations)?;
        let gb = groebner::groebner_basis_with(&relations, &MonomialOrder::grevlex(ring.nvars()), &caps)?;
        Ok(FpAlgebra {
            ring: ring.clone(),
            relations,
            gb,
            caps,
        })
    }

    /// Affine space `k^m` with the given variable names.
    pub fn affine_space<S: Into<String>>(field: Field, vars: impl IntoIterator<Item = S>) -> Result<Self> {
        FpAlgebra::new(&Ring::new(field, vars), Vec::new())
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn field(&self) -> Field {
        self.ring.field()
    }

    pub fn nvars(&self) -> usize {
        self.ring.nvars()
    }

    pub fn relations(&self) -> &[Polynomial] {
        self.relations.generators()
    }

    pub fn ideal(&self) -> &IdealSpec {
        &self.relations
    }

    pub fn groebner(&self) -> &GroebnerBasis {
        &self.gb
    }

    pub fn caps(&self) -> Caps {
        self.caps
    }

    /// True when `1` lies in the relation ideal.
    pub fn is_empty(&self) -> bool {
        self.gb.is_unit_ideal()
    }

    /// Dimension of the algebra as a vector space, when finite.
    pub fn vector_space_dimension(&self) -> Option<usize> {
        self.gb.quotient_dimension()
    }

    pub fn reduce(&self, f: &Polynomial) -> Result<Polynomial> {
        groebner::normal_form(f, &self.gb)
    }

    pub fn contains(&self, f: &Polynomial) -> Result<bool> {
        Ok(self.reduce(f)?.is_zero())
    }

    pub fn parse(&self, text: &str) -> Result<Polynomial> {
        parse_poly(text, &self.ring)
    }

    /// Same algebra with relations `P(X + x)`, moving `x` to the origin.
    pub fn translate(&self, x: &RationalPoint) -> Result<FpAlgebra> {
        let shifted = self.shift_images(x, true);
        let rels = self
            .relations()
            .iter()
            .map(|p| p.compose(&shifted, &self.ring))
            .collect::<Result<Vec<_>>>()?;
        FpAlgebra::with_caps(&self.ring, rels, self.caps)
    }

    fn shift_images(&self, x: &RationalPoint, forward: bool) -> Vec<Polynomial> {
        (0..self.nvars())
            .map(|i| {
                let c = Polynomial::constant(&self.ring, x.coords[i].clone());
                let v = Polynomial::var(&self.ring, i);
                if forward {
                    &v + &c
                } else {
                    &v - &c
                }
            })
            .collect()
    }
}

/// Textual scheme description: field, variable names and relation strings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchemeDescription {
    pub field: Field,
    pub vars: Vec<String>,
    pub relations: Vec<String>,
}

fn valid_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Parses and validates a scheme description, computing its Gröbner basis.
pub fn validate_scheme(desc: &SchemeDescription, caps: Caps) -> Result<FpAlgebra> {
    for (i, v) in desc.vars.iter().enumerate() {
        if !valid_identifier(v) {
            return Err(Error::Invalid(format!("invalid variable name `{v}`")));
        }
        if desc.vars[..i].contains(v) {
            return Err(Error::Invalid(format!("duplicate variable `{v}`")));
        }
    }
    let ring = Ring::new(desc.field, desc.vars.iter().cloned());
    let rels = desc
        .relations
        .iter()
        .map(|r| parse_poly(r, &ring))
        .collect::<Result<Vec<_>>>()?;
    FpAlgebra::with_caps(&ring, rels, caps)
}

/// A `k`-point of `Spec A`: every relation vanishes at `coords`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalPoint {
    coords: Vec<Scalar>,
}

impl RationalPoint {
    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }
}

pub fn check_point(a: &FpAlgebra, coords: Vec<Scalar>) -> Result<RationalPoint> {
    if coords.len() != a.nvars() {
        return Err(Error::Arity {
            expected: a.nvars(),
            found: coords.len(),
        });
    }
    if coords.iter().any(|c| c.field() != a.field()) {
        return Err(Error::AmbientMismatch);
    }
    for (index, p) in a.relations().iter().enumerate() {
        let value = p.eval(&coords)?;
        if !value.is_zero() {
            return Err(Error::NotOnScheme { index, value });
        }
    }
    Ok(RationalPoint { coords })
}

/// Parses comma-separated coordinates and checks them against `a`.
pub fn parse_point(a: &FpAlgebra, csv: &str) -> Result<RationalPoint> {
    let coords = if csv.trim().is_empty() {
        Vec::new()
    } else {
        csv.split(',')
            .map(|s| parse_scalar(s, a.field()))
            .collect::<Result<Vec<_>>>()?
    };
    check_point(a, coords)
}

/// Every rational point of a scheme over a prime field, in lexicographic
/// residue order. Fails over `Q` or past `cap` candidates.
pub fn rational_points(a: &FpAlgebra, cap: u128) -> Result<Vec<RationalPoint>> {
    let elems = a
        .field()
        .elements()
        .ok_or_else(|| Error::Invalid("rational point enumeration needs a prime field".into()))?;
    let needed = (elems.len() as u128).saturating_pow(a.nvars() as u32);
    if needed > cap {
        return Err(Error::EnumerationCap { needed, cap });
    }
    let mut out = Vec::new();
    let mut idx = vec![0usize; a.nvars()];
    loop {
        let coords: Vec<Scalar> = idx.iter().map(|&i| elems[i].clone()).collect();
        if let Ok(p) = check_point(a, coords) {
            out.push(p);
        }
        let mut v = a.nvars();
        loop {
            if v == 0 {
                return Ok(out);
            }
            v -= 1;
            idx[v] += 1;
            if idx[v] < elems.len() {
                break;
            }
            idx[v] = 0;
        }
    }
}

/// Matrix of polynomials, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<Polynomial>>,
}

impl PolyMatrix {
    pub fn get(&self, i: usize, j: usize) -> &Polynomial {
        &self.entries[i][j]
    }

    pub fn eval(&self, field: Field, point: &[Scalar]) -> Result<Matrix> {
        let rows = self
            .entries
            .iter()
            .map(|r| r.iter().map(|p| p.eval(point)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Matrix::from_rows(field, self.cols, rows)
    }
}

/// `(∂P_i/∂X_j)`, one row per relation.
pub fn jacobian(a: &FpAlgebra) -> PolyMatrix {
    jacobian_of(a.relations(), a.nvars())
}

pub fn jacobian_of(polys: &[Polynomial], nvars: usize) -> PolyMatrix {
    let entries = polys
        .iter()
        .map(|p| {
            (0..nvars)
                .map(|j| p.partial_derivative(j).expect("index in range"))
                .collect()
        })
        .collect();
    PolyMatrix {
        rows: polys.len(),
        cols: nvars,
        entries,
    }
}

pub fn jacobian_at(a: &FpAlgebra, x: &RationalPoint) -> Result<Matrix> {
    jacobian(a).eval(a.field(), x.coords())
}

/// `k ⊕ M` presented on variables `e_1..e_g`: the linear relations of `M`
/// and every product `e_i e_j` with `i <= j`. Its spectrum is `D(M)`.
#[derive(Clone, Debug)]
pub struct SquareZeroAlgebra {
    pub module: ModulePresentation,
    pub algebra: FpAlgebra,
}

pub fn square_zero_algebra(m: &ModulePresentation) -> Result<SquareZeroAlgebra> {
    if m.kind != PresentationKind::Fp {
        return Err(Error::Invalid("square-zero extension needs a finitely presented module".into()));
    }
    let field = m.field();
    let g = m.matrix.rows();
    let names: Vec<String> = (1..=g).map(|i| format!("e{i}")).collect();
    let ring = Ring::new(field, names);
    let vars: Vec<Polynomial> = (0..g).map(|i| Polynomial::var(&ring, i)).collect();
    let mut rels = Vec::new();
    for c in 0..m.matrix.cols() {
        let mut lin = Polynomial::zero(&ring);
        for (i, v) in vars.iter().enumerate() {
            lin = &lin + &v.scale(m.matrix.get(i, c));
        }
        rels.push(lin);
    }
    for i in 0..g {
        for j in i..g {
            rels.push(&vars[i] * &vars[j]);
        }
    }
    Ok(SquareZeroAlgebra {
        module: m.clone(),
        algebra: FpAlgebra::new(&ring, rels)?,
    })
}

/// `A / m_x^2`: the relations of `A` plus every `(X_i - x_i)(X_j - x_j)`.
pub fn first_order_nbhd(a: &FpAlgebra, x: &RationalPoint) -> Result<FpAlgebra> {
    let shifted = a.shift_images(x, false);
    let mut rels = a.relations().to_vec();
    for i in 0..a.nvars() {
        for j in i..a.nvars() {
            rels.push(&shifted[i] * &shifted[j]);
        }
    }
    FpAlgebra::with_caps(a.ring(), rels, a.caps())
}

/// True when every product `(X_i - x_i)(X_j - x_j)` vanishes in `a`.
pub fn maximal_ideal_squares_to_zero(a: &FpAlgebra, x: &RationalPoint) -> Result<bool> {
    let shifted = a.shift_images(x, false);
    for i in 0..a.nvars() {
        for j in i..a.nvars() {
            if !a.contains(&(&shifted[i] * &shifted[j]))? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `Ω_{A/k}`: generators `dX_j`, one relation `dP_i = Σ_j ∂P_i/∂X_j dX_j`
/// per defining polynomial.
#[derive(Clone, Debug)]
pub struct KaehlerPresentation {
    pub generators: Vec<String>,
    pub relations: PolyMatrix,
    field: Field,
}

impl KaehlerPresentation {
    /// The fiber `Ω ⊗ k(x) = coker(J(x)^T)`, the cotangent space at `x`.
    pub fn at(&self, x: &RationalPoint) -> Result<ModulePresentation> {
        let j = self.relations.eval(self.field, x.coords())?;
        Ok(ModulePresentation::fp(j.transpose()))
    }
}

pub fn kaehler_presentation(a: &FpAlgebra) -> KaehlerPresentation {
    KaehlerPresentation {
        generators: a.ring().vars().iter().map(|v| format!("d{v}")).collect(),
        relations: jacobian(a),
        field: a.field(),
    }
}
