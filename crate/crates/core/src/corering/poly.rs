use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use super::field::{Field, Scalar};
use super::monomial::{Monomial, MonomialOrder};
use crate::error::{Error, Result};

/// A polynomial ring `k[x_1, ..., x_n]`: variable names plus base field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ring {
    vars: Vec<String>,
    field: Field,
}

impl Ring {
    pub fn new<S: Into<String>>(field: Field, vars: impl IntoIterator<Item = S>) -> Arc<Ring> {
        Arc::new(Ring {
            vars: vars.into_iter().map(Into::into).collect(),
            field,
        })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// A name not used by any variable, derived from `stem`.
    pub fn fresh_name(&self, stem: &str) -> String {
        if self.var_index(stem).is_none() {
            return stem.to_string();
        }
        (0..)
            .map(|i| format!("{stem}{i}"))
            .find(|n| self.var_index(n).is_none())
            .expect("unbounded search")
    }

    /// This ring with extra variables appended after the existing ones.
    pub fn extended<S: Into<String>>(&self, extra: impl IntoIterator<Item = S>) -> Arc<Ring> {
        let mut vars = self.vars.clone();
        vars.extend(extra.into_iter().map(Into::into));
        Arc::new(Ring {
            vars,
            field: self.field,
        })
    }
}

/// Sparse polynomial with exact coefficients. Zero coefficients are never
/// stored; the zero polynomial has no terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    ring: Arc<Ring>,
    terms: BTreeMap<Monomial, Scalar>,
}

impl Polynomial {
    pub fn zero(ring: &Arc<Ring>) -> Self {
        Polynomial {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ring: &Arc<Ring>, c: Scalar) -> Self {
        Self::term(ring, Monomial::one(ring.nvars()), c)
    }

    pub fn one(ring: &Arc<Ring>) -> Self {
        Self::constant(ring, ring.field().one())
    }

    pub fn from_i64(ring: &Arc<Ring>, c: i64) -> Self {
        Self::constant(ring, ring.field().from_i64(c))
    }

    pub fn var(ring: &Arc<Ring>, i: usize) -> Self {
        Self::term(ring, Monomial::var(ring.nvars(), i), ring.field().one())
    }

    pub fn term(ring: &Arc<Ring>, m: Monomial, c: Scalar) -> Self {
        assert_eq!(m.nvars(), ring.nvars(), "monomial arity");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn from_terms(ring: &Arc<Ring>, terms: impl IntoIterator<Item = (Monomial, Scalar)>) -> Self {
        let mut p = Polynomial::zero(ring);
        for (m, c) in terms {
            p.add_term(m, &c);
        }
        p
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn field(&self) -> Field {
        self.ring.field()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn constant_term(&self) -> Scalar {
        self.terms
            .get(&Monomial::one(self.ring.nvars()))
            .cloned()
            .unwrap_or_else(|| self.field().zero())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(|| self.field().zero())
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let s = &*existing + c;
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = s;
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    fn check_ring(&self, other: &Polynomial) {
        assert!(
            Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring,
            "polynomials from different rings"
        );
    }

    pub fn same_ring(&self, other: &Polynomial) -> bool {
        Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring
    }

    pub fn scale(&self, c: &Scalar) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_term(&self, m: &Monomial, c: &Scalar) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(t, a)| (t.mul(m), a * c)).collect(),
        }
    }

    pub fn pow(&self, mut e: u64) -> Polynomial {
        let mut base = self.clone();
        let mut acc = Polynomial::one(&self.ring);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Leading monomial and coefficient with respect to `order`.
    pub fn leading_term(&self, order: &MonomialOrder) -> Option<(&Monomial, &Scalar)> {
        self.terms
            .iter()
            .max_by(|a, b| order.cmp(a.0, b.0))
    }

    /// Terms in descending `order`.
    pub fn sorted_terms(&self, order: &MonomialOrder) -> Vec<(Monomial, Scalar)> {
        let mut v: Vec<_> = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        v.sort_by(|a, b| order.cmp(&b.0, &a.0));
        v
    }

    /// Scales so the leading coefficient is 1.
    pub fn monic(&self, order: &MonomialOrder) -> Polynomial {
        match self.leading_term(order) {
            None => self.clone(),
            Some((_, c)) => self.scale(&c.inv().expect("nonzero leading coefficient")),
        }
    }

    /// Direct substitution of `point` for the variables.
    pub fn eval(&self, point: &[Scalar]) -> Result<Scalar> {
        if point.len() != self.ring.nvars() {
            return Err(Error::Arity {
                expected: self.ring.nvars(),
                found: point.len(),
            });
        }
        let mut acc = self.field().zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m.exponents()) {
                if e > 0 {
                    t = &t * &x.pow(e as u64);
                }
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }

    /// Formal partial derivative in variable `j`.
    pub fn partial_derivative(&self, j: usize) -> Result<Polynomial> {
        let n = self.ring.nvars();
        if j >= n {
            return Err(Error::IndexOutOfRange { index: j, len: n });
        }
        let f = self.field();
        let mut out = Polynomial::zero(&self.ring);
        for (m, c) in &self.terms {
            let e = m.exponents()[j];
            if e == 0 {
                continue;
            }
            let mut ex = m.exponents().to_vec();
            ex[j] -= 1;
            out.add_term(Monomial::new(ex), &(c * &f.from_i64(e as i64)));
        }
        Ok(out)
    }

    /// Substitutes `images[i]` for variable `i`; the images share a target ring.
    pub fn compose(&self, images: &[Polynomial], target: &Arc<Ring>) -> Result<Polynomial> {
        if images.len() != self.ring.nvars() {
            return Err(Error::Arity {
                expected: self.ring.nvars(),
                found: images.len(),
            });
        }
        let mut acc = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(target, c.clone());
            for (img, &e) in images.iter().zip(m.exponents()) {
                if e > 0 {
                    t = &t * &img.pow(e as u64);
                }
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }

    /// Re-homes this polynomial in a ring whose first variables coincide with
    /// this ring's variables.
    pub fn embed(&self, target: &Arc<Ring>) -> Polynomial {
        let extra = target.nvars() - self.ring.nvars();
        debug_assert_eq!(&target.vars()[..self.ring.nvars()], self.ring.vars());
        Polynomial {
            ring: target.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.extend(extra), c.clone()))
                .collect(),
        }
    }

    /// Moves a polynomial to a ring with the same variable count, keeping
    /// exponent positions.
    pub fn rehome(&self, target: &Arc<Ring>) -> Polynomial {
        assert_eq!(target.nvars(), self.ring.nvars());
        Polynomial {
            ring: target.clone(),
            terms: self.terms.clone(),
        }
    }
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &'a Polynomial) -> Polynomial {
        self.check_ring(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c);
        }
        out
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &'a Polynomial) -> Polynomial {
        self.check_ring(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), &-c);
        }
        out
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &'a Polynomial) -> Polynomial {
        self.check_ring(rhs);
        let mut out = Polynomial::zero(&self.ring);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), &(c1 * c2));
            }
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $f(self, rhs: Polynomial) -> Polynomial {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

fn write_monomial(f: &mut fmt::Formatter<'_>, ring: &Ring, m: &Monomial) -> fmt::Result {
    let mut first = true;
    for (v, &e) in ring.vars().iter().zip(m.exponents()) {
        if e == 0 {
            continue;
        }
        if !first {
            write!(f, "*")?;
        }
        first = false;
        if e == 1 {
            write!(f, "{v}")?;
        } else {
            write!(f, "{v}^{e}")?;
        }
    }
    Ok(())
}

/// Prints terms in descending graded reverse lexicographic order, in the
/// same grammar `parse_poly` accepts.
impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let order = MonomialOrder::grevlex(self.ring.nvars());
        for (i, (m, c)) in self.sorted_terms(&order).into_iter().enumerate() {
            let negative = c.is_negative();
            let abs = if negative { -&c } else { c.clone() };
            match (i, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else {
                if !abs.is_one() {
                    write!(f, "{abs}*")?;
                }
                write_monomial(f, &self.ring, &m)?;
            }
        }
        Ok(())
    }
}

/// Compares polynomials by their leading terms under `order`, then by the
/// remaining terms. Used for deterministic sorting of bases.
pub fn cmp_polys(order: &MonomialOrder, a: &Polynomial, b: &Polynomial) -> Ordering {
    let ta = a.sorted_terms(order);
    let tb = b.sorted_terms(order);
    for (x, y) in ta.iter().zip(&tb) {
        match order.cmp(&x.0, &y.0) {
            Ordering::Equal => {}
            o => return o,
        }
    }
    ta.len().cmp(&tb.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qxy() -> Arc<Ring> {
        Ring::new(Field::Rationals, ["x", "y"])
    }

    #[test]
    fn arithmetic_and_display() {
        let r = qxy();
        let x = Polynomial::var(&r, 0);
        let y = Polynomial::var(&r, 1);
        let one = Polynomial::one(&r);
        let p = &(&x * &x) - &one;
        assert_eq!(p.to_string(), "x^2 - 1");
        let q = &(&x + &y) * &(&x - &y);
        assert_eq!(q.to_string(), "x^2 - y^2");
        assert!((&p - &p).is_zero());
        assert_eq!(Polynomial::zero(&r).to_string(), "0");
        assert_eq!((-&x).to_string(), "-x");
    }

    #[test]
    fn eval_examples() {
        let r = qxy();
        let x = Polynomial::var(&r, 0);
        let y = Polynomial::var(&r, 1);
        let q = Field::Rationals;
        let xy = &x * &y;
        assert!(xy.eval(&[q.zero(), q.zero()]).unwrap().is_zero());
        let circle = &(&(&x * &x) + &(&y * &y)) - &Polynomial::one(&r);
        let p = [
            q.fraction(&3.into(), &5.into()).unwrap(),
            q.fraction(&4.into(), &5.into()).unwrap(),
        ];
        assert!(circle.eval(&p).unwrap().is_zero());
        assert!(matches!(xy.eval(&[q.zero()]), Err(Error::Arity { .. })));
    }

    #[test]
    fn derivative_examples() {
        let r = qxy();
        let x = Polynomial::var(&r, 0);
        let y = Polynomial::var(&r, 1);
        assert_eq!((&x * &y).partial_derivative(0).unwrap(), y);
        let p = &(&x * &x) - &Polynomial::one(&r);
        assert_eq!(p.partial_derivative(0).unwrap(), x.scale(&Field::Rationals.from_i64(2)));
        assert!(Polynomial::from_i64(&r, 7).partial_derivative(1).unwrap().is_zero());
        assert!(matches!(
            x.partial_derivative(2),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn compose_substitutes() {
        let r = qxy();
        let x = Polynomial::var(&r, 0);
        let y = Polynomial::var(&r, 1);
        let xy = &x * &y;
        let t = Ring::new(Field::Rationals, ["t"]);
        let tv = Polynomial::var(&t, 0);
        let img = xy.compose(&[tv.clone(), &tv * &tv], &t).unwrap();
        assert_eq!(img, tv.pow(3));
    }
}
