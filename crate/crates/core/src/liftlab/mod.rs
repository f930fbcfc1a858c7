//! Brute-force lifting oracle: homomorphisms from a presented algebra into
//! small finite test algebras over `F_p`, lift counts through nilpotent
//! quotients `B -> B/N`, and comparison with the minor-ideal verdicts.


use std::fmt;

use crate::classify::{is_etale, is_unramified, smooth_dimensions};
use crate::corering::{Field, Monomial, Polynomial, Scalar};
use crate::error::{Error, Result};
use crate::groebner;
use crate::linalg::Matrix;
use crate::scheme::FpAlgebra;

/// Default bound on `p^(m · dim B)` candidate tuples.
pub const HOM_CAP: u128 = 10_000_000;

const MAX_TEST_DIMENSION: usize = 64;

/// Coordinates of an element of a [`FiniteAlgebra`] in its monomial basis.
pub type Element = Vec<u32>;

/// A homomorphism `A -> B`, as the images of the variables of `A`.
pub type Hom = Vec<Element>;

/// A finite-dimensional algebra over `F_p`, with the standard monomials of
/// its Gröbner basis as vector space basis and precomputed multiplication.
#[derive(Clone, Debug)]
pub struct FiniteAlgebra {
    algebra: FpAlgebra,
    p: u32,
    basis: Vec<Monomial>,
    table: Vec<Vec<Element>>,
    one: Element,
}

impl FiniteAlgebra {
    pub fn new(algebra: FpAlgebra) -> Result<Self> {
        let Field::Prime(p) = algebra.field() else {
            return Err(Error::InvalidExtension("test algebras live over a prime field".into()));
        };
        let basis = algebra
            .groebner()
            .standard_monomials()
            .ok_or_else(|| Error::InvalidExtension("test algebra is not finite-dimensional".into()))?;
        if basis.len() > MAX_TEST_DIMENSION {
            return Err(Error::InvalidExtension(format!("dimension {} exceeds {MAX_TEST_DIMENSION}", basis.len())));
        }
        let mut fa = FiniteAlgebra {
            algebra,
            p,
            basis,
            table: Vec::new(),
            one: Vec::new(),
        };
        fa.one = fa.coords(&Polynomial::one(fa.algebra.ring()))?;
        let mut table = Vec::with_capacity(fa.basis.len());
        for a in &fa.basis {
            let mut row = Vec::with_capacity(fa.basis.len());
            for b in &fa.basis {
                let prod = Polynomial::term(fa.algebra.ring(), a.mul(b), Field::Prime(p).one());
                row.push(fa.coords(&prod)?);
            }
            table.push(row);
        }
        fa.table = table;
        Ok(fa)
    }

    pub fn algebra(&self) -> &FpAlgebra {
        &self.algebra
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn basis(&self) -> &[Monomial] {
        &self.basis
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn zero(&self) -> Element {
        vec![0; self.basis.len()]
    }

    pub fn one(&self) -> Element {
        self.one.clone()
    }

    /// Coordinates of the normal form of `f`.
    pub fn coords(&self, f: &Polynomial) -> Result<Element> {
        let r = self.algebra.reduce(f)?;
        Ok(self
            .basis
            .iter()
            .map(|m| r.coefficient(m).residue().expect("prime field"))
            .collect())
    }

    pub fn to_poly(&self, v: &[u32]) -> Polynomial {
        let field = Field::Prime(self.p);
        Polynomial::from_terms(
            self.algebra.ring(),
            self.basis
                .iter()
                .zip(v)
                .filter(|(_, &c)| c != 0)
                .map(|(m, &c)| (m.clone(), field.from_i64(c as i64))),
        )
    }

    pub fn add(&self, a: &[u32], b: &[u32]) -> Element {
        a.iter().zip(b).map(|(x, y)| (x + y) % self.p).collect()
    }

    pub fn scale(&self, c: u32, a: &[u32]) -> Element {
        a.iter().map(|x| ((c as u64 * *x as u64) % self.p as u64) as u32).collect()
    }

    pub fn mul(&self, a: &[u32], b: &[u32]) -> Element {
        let p = self.p as u64;
        let mut acc = vec![0u64; self.basis.len()];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                if y == 0 {
                    continue;
                }
                let c = x as u64 * y as u64 % p;
                for (k, &t) in self.table[i][j].iter().enumerate() {
                    acc[k] = (acc[k] + c * t as u64) % p;
                }
            }
        }
        acc.into_iter().map(|v| v as u32).collect()
    }

    /// `f(point)` for a polynomial over the same prime field.
    pub fn eval(&self, f: &Polynomial, point: &[Element]) -> Element {
        let mut acc = self.zero();
        for (m, c) in f.terms() {
            let mut t = self.scale(c.residue().expect("prime field"), &self.one);
            for (x, &e) in point.iter().zip(m.exponents()) {
                for _ in 0..e {
                    t = self.mul(&t, x);
                }
            }
            acc = self.add(&acc, &t);
        }
        acc
    }

    fn is_zero(v: &[u32]) -> bool {
        v.iter().all(|&c| c == 0)
    }

    /// Every element, in lexicographic coordinate order.
    pub fn elements(&self) -> Vec<Element> {
        let d = self.dimension();
        let mut out = Vec::new();
        let mut cur = vec![0u32; d];
        loop {
            out.push(cur.clone());
            if !advance(&mut cur, self.p) {
                return out;
            }
        }
    }
}

/// Odometer step over `F_p^n`, last coordinate fastest; false on wrap.
fn advance(cur: &mut [u32], p: u32) -> bool {
    for c in cur.iter_mut().rev() {
        *c += 1;
        if *c < p {
            return true;
        }
        *c = 0;
    }
    false
}

/// A finite algebra `B` with a nilpotent ideal `N`, the quotient `B/N` and
/// the linear data relating them.
#[derive(Clone, Debug)]
pub struct TestExtension {
    pub name: String,
    b: FiniteAlgebra,
    nil: Vec<Polynomial>,
    quotient: FiniteAlgebra,
    /// Quotient coordinates of each basis element of `B`.
    reduction: Vec<Element>,
    /// A basis of `N` as a subspace of `B`.
    nil_basis: Vec<Element>,
    square_zero: bool,
}

impl TestExtension {
    pub fn new(name: impl Into<String>, b: FpAlgebra, nil: Vec<Polynomial>) -> Result<Self> {
        let bz = Polynomial::zero(b.ring());
        if nil.iter().any(|g| !g.same_ring(&bz)) {
            return Err(Error::AmbientMismatch);
        }
        for g in &nil {
            if !groebner::is_nilpotent_mod_with(g, b.ideal(), &b.caps())? {
                return Err(Error::InvalidExtension(format!("{g} is not nilpotent")));
            }
        }
        let quotient_alg = FpAlgebra::with_caps(
            b.ring(),
            b.relations().iter().chain(&nil).cloned().collect(),
            b.caps(),
        )?;
        let b = FiniteAlgebra::new(b)?;
        let quotient = FiniteAlgebra::new(quotient_alg)?;
        let reduction = b
            .basis
            .iter()
            .map(|m| quotient.coords(&Polynomial::term(b.algebra.ring(), m.clone(), Field::Prime(b.p).one())))
            .collect::<Result<Vec<_>>>()?;
        let field = Field::Prime(b.p);
        let cols: Vec<Vec<Scalar>> = reduction
            .iter()
            .map(|v| v.iter().map(|&c| field.from_i64(c as i64)).collect())
            .collect();
        let nil_basis = Matrix::from_columns(field, quotient.dimension(), &cols)
            .kernel_basis()
            .into_iter()
            .map(|v| v.iter().map(|s| s.residue().expect("prime field")).collect())
            .collect();
        let mut square_zero = true;
        for (i, u) in nil.iter().enumerate() {
            for v in &nil[i..] {
                square_zero &= b.algebra.contains(&(u * v))?;
            }
        }
        Ok(TestExtension {
            name: name.into(),
            b,
            nil,
            quotient,
            reduction,
            nil_basis,
            square_zero,
        })
    }

    /// Parses `B = F_p[vars]/(relations)` with `N = (nilpotent)`.
    pub fn parse(name: &str, field: Field, vars: &[&str], relations: &[&str], nilpotent: &[&str]) -> Result<Self> {
        let desc = crate::scheme::SchemeDescription {
            field,
            vars: vars.iter().map(|s| s.to_string()).collect(),
            relations: relations.iter().map(|s| s.to_string()).collect(),
        };
        let b = crate::scheme::validate_scheme(&desc, groebner::Caps::default())?;
        let nil = nilpotent.iter().map(|s| b.parse(s)).collect::<Result<Vec<_>>>()?;
        TestExtension::new(name, b, nil)
    }

    pub fn algebra(&self) -> &FiniteAlgebra {
        &self.b
    }

    pub fn quotient(&self) -> &FiniteAlgebra {
        &self.quotient
    }

    pub fn nilpotent_generators(&self) -> &[Polynomial] {
        &self.nil
    }

    pub fn is_square_zero(&self) -> bool {
        self.square_zero
    }

    /// `dim_{F_p} N`.
    pub fn nil_dimension(&self) -> usize {
        self.nil_basis.len()
    }

    /// Image of an element of `B` in `B/N`.
    pub fn reduce(&self, v: &[u32]) -> Element {
        let mut acc = self.quotient.zero();
        for (c, r) in v.iter().zip(&self.reduction) {
            if *c != 0 {
                acc = self.quotient.add(&acc, &self.quotient.scale(*c, r));
            }
        }
        acc
    }

    /// A preimage in `B` of an element of `B/N`.
    pub fn section(&self, v: &[u32]) -> Result<Element> {
        self.b.coords(&self.quotient.to_poly(v).rehome(self.b.algebra.ring()))
    }
}

/// The suite `F_p[ε]/(ε²)` with `N = (ε)`, `F_p[t]/(t³)` with `N = (t²)` and
/// with `N = (t)`, and `F_p[ε1, ε2]/(ε1, ε2)²` with `N = (ε1, ε2)`.
pub fn default_suite(p: u32) -> Result<Vec<TestExtension>> {
    let field = Field::prime(p as u64)?;
    Ok(vec![
        TestExtension::parse(&format!("F{p}[e]/(e^2), N = (e)"), field, &["e"], &["e^2"], &["e"])?,
        TestExtension::parse(&format!("F{p}[t]/(t^3), N = (t^2)"), field, &["t"], &["t^3"], &["t^2"])?,
        TestExtension::parse(&format!("F{p}[t]/(t^3), N = (t)"), field, &["t"], &["t^3"], &["t"])?,
        TestExtension::parse(
            &format!("F{p}[e1,e2]/(e1,e2)^2, N = (e1,e2)"),
            field,
            &["e1", "e2"],
            &["e1^2", "e1*e2", "e2^2"],
            &["e1", "e2"],
        )?,
    ])
}

fn check_field(a: &FpAlgebra, b: &FiniteAlgebra) -> Result<()> {
    if a.field() != Field::Prime(b.p) {
        return Err(Error::AmbientMismatch);
    }
    Ok(())
}

fn check_cap(p: u32, m: usize, d: usize, cap: u128) -> Result<()> {
    let needed = (p as u128).saturating_pow((m * d) as u32);
    if needed > cap {
        return Err(Error::EnumerationCap { needed, cap });
    }
    Ok(())
}

/// Every tuple in `B^m` killing the relations of `a`, in lexicographic order.
pub fn enumerate_homs(a: &FpAlgebra, b: &FiniteAlgebra, cap: u128) -> Result<Vec<Hom>> {
    check_field(a, b)?;
    let m = a.nvars();
    let d = b.dimension();
    check_cap(b.p, m, d, cap)?;
    let mut out = Vec::new();
    let mut flat = vec![0u32; m * d];
    loop {
        let point: Hom = flat.chunks(d.max(1)).map(|c| c.to_vec()).take(m).collect();
        let point = if d == 0 { vec![Vec::new(); m] } else { point };
        if a.relations().iter().all(|r| FiniteAlgebra::is_zero(&b.eval(r, &point))) {
            out.push(point);
        }
        if !advance(&mut flat, b.p) {
            return Ok(out);
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusEntry {
    pub downstairs: Hom,
    pub lifts: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftCensus {
    pub extension: String,
    pub entries: Vec<CensusEntry>,
}

impl LiftCensus {
    pub fn min(&self) -> Option<usize> {
        self.entries.iter().map(|e| e.lifts).min()
    }

    pub fn max(&self) -> Option<usize> {
        self.entries.iter().map(|e| e.lifts).max()
    }
}

/// All lifts through `B -> B/N` of the homomorphism `t : A -> B/N`.
pub fn lifts_of(a: &FpAlgebra, ext: &TestExtension, t: &[Element]) -> Result<Vec<Hom>> {
    let base: Hom = t.iter().map(|v| ext.section(v)).collect::<Result<_>>()?;
    let m = a.nvars();
    let k = ext.nil_basis.len();
    let b = &ext.b;
    let mut out = Vec::new();
    let mut digits = vec![0u32; m * k];
    loop {
        let point: Hom = (0..m)
            .map(|i| {
                (0..k).fold(base[i].clone(), |acc, j| {
                    b.add(&acc, &b.scale(digits[i * k + j], &ext.nil_basis[j]))
                })
            })
            .collect();
        if a.relations().iter().all(|r| FiniteAlgebra::is_zero(&b.eval(r, &point))) {
            out.push(point);
        }
        if !advance(&mut digits, b.p) {
            out.sort();
            return Ok(out);
        }
    }
}

/// For each homomorphism `A -> B/N`, the number of homomorphisms `A -> B`
/// reducing to it.
pub fn lifting_census(a: &FpAlgebra, ext: &TestExtension, cap: u128) -> Result<LiftCensus> {
    check_field(a, &ext.b)?;
    check_cap(ext.b.p, a.nvars(), ext.b.dimension(), cap)?;
    let downstairs = enumerate_homs(a, &ext.quotient, cap)?;
    let mut entries = Vec::with_capacity(downstairs.len());
    for t in downstairs {
        let lifts = lifts_of(a, ext, &t)?.len();
        entries.push(CensusEntry { downstairs: t, lifts });
    }
    Ok(LiftCensus {
        extension: ext.name.clone(),
        entries,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LiftProperty {
    Etale,
    Unramified,
    Smooth,
}

impl LiftProperty {
    /// The census statistic a true verdict forces.
    pub fn holds_for(self, census: &LiftCensus) -> bool {
        census.entries.iter().all(|e| match self {
            LiftProperty::Etale => e.lifts == 1,
            LiftProperty::Unramified => e.lifts <= 1,
            LiftProperty::Smooth => e.lifts >= 1,
        })
    }
}

impl fmt::Display for LiftProperty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LiftProperty::Etale => "etale",
            LiftProperty::Unramified => "unramified",
            LiftProperty::Smooth => "smooth",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Outcome {
    Match,
    /// False verdict, yet no rational lift problem in the suite fails.
    Inconclusive,
    Mismatch,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Match => "MATCH",
            Outcome::Inconclusive => "SUITE-INCONCLUSIVE",
            Outcome::Mismatch => "MISMATCH",
        })
    }
}

fn outcome(verdict: bool, statistic: bool) -> Outcome {
    match (verdict, statistic) {
        (true, false) => Outcome::Mismatch,
        (false, true) => Outcome::Inconclusive,
        _ => Outcome::Match,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyComparison {
    pub property: LiftProperty,
    pub verdict: bool,
    /// Outcome against each extension alone, in suite order.
    pub per_extension: Vec<Outcome>,
    /// Outcome against the pooled counts of the whole suite.
    pub overall: Outcome,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComparisonReport {
    pub censuses: Vec<LiftCensus>,
    pub comparisons: Vec<PropertyComparison>,
}

impl ComparisonReport {
    pub fn comparison(&self, property: LiftProperty) -> &PropertyComparison {
        self.comparisons
            .iter()
            .find(|c| c.property == property)
            .expect("every property is compared")
    }

    pub fn has_mismatch(&self) -> bool {
        self.comparisons.iter().any(|c| c.overall == Outcome::Mismatch)
    }
}

/// Censuses over `suite` set against the étale, unramified and smooth (of
/// some dimension) verdicts.
pub fn oracle_compare(a: &FpAlgebra, suite: &[TestExtension], cap: u128) -> Result<ComparisonReport> {
    let censuses = suite
        .iter()
        .map(|ext| lifting_census(a, ext, cap))
        .collect::<Result<Vec<_>>>()?;
    let verdicts = [
        (LiftProperty::Etale, is_etale(a)?.value),
        (LiftProperty::Unramified, is_unramified(a)?.value),
        (LiftProperty::Smooth, !smooth_dimensions(a)?.0.is_empty()),
    ];
    let comparisons = verdicts
        .into_iter()
        .map(|(property, verdict)| {
            let per_extension: Vec<Outcome> = censuses
                .iter()
                .map(|c| outcome(verdict, property.holds_for(c)))
                .collect();
            let pooled = censuses.iter().all(|c| property.holds_for(c));
            PropertyComparison {
                property,
                verdict,
                per_extension,
                overall: outcome(verdict, pooled),
            }
        })
        .collect();
    Ok(ComparisonReport { censuses, comparisons })
}
