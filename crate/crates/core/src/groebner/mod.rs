//! Gröbner bases, normal forms and the ideal tests built on them: membership
//! with cofactor certificates, units modulo an ideal, and nilpotency via the
//! Rabinowitsch trick.

mod buchberger;

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::corering::{Monomial, MonomialOrder, Polynomial, Ring};
use crate::error::{Error, Result};
use buchberger::{Element, Engine};

/// Resource guard for basis computations. Exceeding either bound is a
/// [`Error::Capacity`], never a truncated answer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Caps {
    pub max_basis: usize,
    pub max_degree: u32,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_basis: 500,
            max_degree: 40,
        }
    }
}

/// A finite generating set of an ideal. Zero generators are dropped.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IdealSpec {
    ring: Arc<Ring>,
    generators: Vec<Polynomial>,
}

impl IdealSpec {
    pub fn new(ring: &Arc<Ring>, generators: impl IntoIterator<Item = Polynomial>) -> Result<Self> {
        let mut gens = Vec::new();
        for g in generators {
            if !g.same_ring(&Polynomial::zero(ring)) {
                return Err(Error::AmbientMismatch);
            }
            if !g.is_zero() {
                gens.push(g.rehome(ring));
            }
        }
        Ok(IdealSpec {
            ring: ring.clone(),
            generators: gens,
        })
    }

    pub fn zero(ring: &Arc<Ring>) -> Self {
        IdealSpec {
            ring: ring.clone(),
            generators: Vec::new(),
        }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    /// The ideal with `extra` generators appended.
    pub fn with(&self, extra: impl IntoIterator<Item = Polynomial>) -> Result<Self> {
        IdealSpec::new(&self.ring, self.generators.iter().cloned().chain(extra))
    }

    /// The same generators in a ring extended by `names`.
    pub fn extended(&self, names: &[String]) -> (Arc<Ring>, IdealSpec) {
        let ring = self.ring.extended(names.iter().cloned());
        let generators = self.generators.iter().map(|g| g.embed(&ring)).collect();
        (ring.clone(), IdealSpec { ring, generators })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerBasis {
    ring: Arc<Ring>,
    order: MonomialOrder,
    basis: Vec<Polynomial>,
    reduced: bool,
}

impl GroebnerBasis {
    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn basis(&self) -> &[Polynomial] {
        &self.basis
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    /// True when the ideal contains 1.
    pub fn is_unit_ideal(&self) -> bool {
        self.basis.len() == 1 && self.basis[0].is_constant()
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.basis
            .iter()
            .map(|g| g.leading_term(&self.order).expect("nonzero").0.clone())
            .collect()
    }

    fn engine(&self) -> Engine<'_> {
        Engine {
            ring: &self.ring,
            order: &self.order,
            ngens: 0,
            track: false,
        }
    }

    fn elements(&self) -> Vec<Element> {
        let e = self.engine();
        self.basis.iter().map(|g| e.element(g, None)).collect()
    }

    /// Buchberger's criterion: every S-polynomial of the basis reduces to 0.
    pub fn satisfies_buchberger_criterion(&self) -> bool {
        let ngens = self.basis.len();
        for i in 0..ngens {
            for j in i + 1..ngens {
                let (f, g) = (&self.basis[i], &self.basis[j]);
                let (fm, fc) = f.leading_term(&self.order).expect("nonzero");
                let (gm, gc) = g.leading_term(&self.order).expect("nonzero");
                let l = fm.lcm(gm);
                let s = &f.mul_term(&fm.quotient_of(&l).unwrap(), &fc.inv().unwrap())
                    - &g.mul_term(&gm.quotient_of(&l).unwrap(), &gc.inv().unwrap());
                match normal_form(&s, self) {
                    Ok(r) if r.is_zero() => {}
                    _ => return false,
                }
            }
        }
        true
    }

    /// Standard monomials (not divisible by any leading monomial) when the
    /// quotient ring is finite-dimensional, in ascending order; `None` otherwise.
    pub fn standard_monomials(&self) -> Option<Vec<Monomial>> {
        let n = self.ring.nvars();
        let leads = self.leading_monomials();
        if leads.iter().any(Monomial::is_one) {
            return Some(Vec::new());
        }
        let mut bounds = vec![0u32; n];
        for (v, b) in bounds.iter_mut().enumerate() {
            *b = leads
                .iter()
                .filter(|m| {
                    let e = m.exponents();
                    e[v] > 0 && e.iter().enumerate().all(|(w, &x)| w == v || x == 0)
                })
                .map(|m| m.exponents()[v])
                .min()?;
        }
        let mut out = Vec::new();
        let mut cur = vec![0u32; n];
        loop {
            let m = Monomial::new(cur.clone());
            if !leads.iter().any(|l| l.divides(&m)) {
                out.push(m);
            }
            let mut v = 0;
            loop {
                if v == n {
                    out.sort_by(|a, b| self.order.cmp(a, b));
                    return Some(out);
                }
                cur[v] += 1;
                if cur[v] < bounds[v] {
                    break;
                }
                cur[v] = 0;
                v += 1;
            }
        }
    }

    /// Vector-space dimension of the quotient ring, if finite.
    pub fn quotient_dimension(&self) -> Option<usize> {
        self.standard_monomials().map(|s| s.len())
    }
}

/// Cofactors `q_i` with `f = sum q_i g_i` over the original generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MembershipCertificate {
    pub cofactors: Vec<Polynomial>,
}

impl MembershipCertificate {
    /// Re-expands the combination and compares with `f`.
    pub fn verify(&self, f: &Polynomial, ideal: &IdealSpec) -> bool {
        if self.cofactors.len() != ideal.generators.len() {
            return false;
        }
        let mut acc = Polynomial::zero(&ideal.ring);
        for (q, g) in self.cofactors.iter().zip(&ideal.generators) {
            acc = &acc + &(q * g);
        }
        acc == f.rehome(&ideal.ring)
    }
}

type CacheKey = (IdealSpec, MonomialOrder, Caps);

fn cache() -> &'static Mutex<HashMap<CacheKey, GroebnerBasis>> {
    static CACHE: OnceLock<Mutex<HashMap<CacheKey, GroebnerBasis>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Reduced Gröbner basis, memoized per process.
pub fn groebner_basis(ideal: &IdealSpec, order: &MonomialOrder) -> Result<GroebnerBasis> {
    groebner_basis_with(ideal, order, &Caps::default())
}

pub fn groebner_basis_with(ideal: &IdealSpec, order: &MonomialOrder, caps: &Caps) -> Result<GroebnerBasis> {
    if order.nvars() != ideal.ring.nvars() {
        return Err(Error::AmbientMismatch);
    }
    let key = (ideal.clone(), order.clone(), *caps);
    if let Some(gb) = cache().lock().expect("cache lock").get(&key) {
        return Ok(gb.clone());
    }
    let engine = Engine {
        ring: &ideal.ring,
        order,
        ngens: ideal.generators.len(),
        track: false,
    };
    let basis = engine
        .run(&ideal.generators, caps)?
        .iter()
        .map(|e| e.to_poly(&ideal.ring))
        .collect();
    let gb = GroebnerBasis {
        ring: ideal.ring.clone(),
        order: order.clone(),
        basis,
        reduced: true,
    };
    cache()
        .lock()
        .expect("cache lock")
        .entry(key)
        .or_insert_with(|| gb.clone());
    Ok(gb)
}

fn default_order(ring: &Ring) -> MonomialOrder {
    MonomialOrder::grevlex(ring.nvars())
}

/// Remainder of multivariate division by the basis.
pub fn normal_form(f: &Polynomial, gb: &GroebnerBasis) -> Result<Polynomial> {
    if !f.same_ring(&Polynomial::zero(&gb.ring)) {
        return Err(Error::AmbientMismatch);
    }
    let engine = gb.engine();
    let elems = gb.elements();
    let refs: Vec<&Element> = elems.iter().collect();
    let (r, _) = engine.reduce(&engine.element(f, None), &refs, false);
    Ok(r.to_poly(&gb.ring))
}

/// Decides `f ∈ I`. With `certify`, a true answer carries cofactors over the
/// original generators, re-expanded and checked before returning.
pub fn ideal_member(f: &Polynomial, ideal: &IdealSpec, certify: bool) -> Result<(bool, Option<MembershipCertificate>)> {
    ideal_member_with(f, ideal, certify, &Caps::default())
}

pub fn ideal_member_with(f: &Polynomial, ideal: &IdealSpec, certify: bool, caps: &Caps) -> Result<(bool, Option<MembershipCertificate>)> {
    if !f.same_ring(&Polynomial::zero(&ideal.ring)) {
        return Err(Error::AmbientMismatch);
    }
    let order = default_order(&ideal.ring);
    if !certify {
        let gb = groebner_basis_with(ideal, &order, caps)?;
        return Ok((normal_form(f, &gb)?.is_zero(), None));
    }
    let engine = Engine {
        ring: &ideal.ring,
        order: &order,
        ngens: ideal.generators.len(),
        track: true,
    };
    let basis = engine.run(&ideal.generators, caps)?;
    let refs: Vec<&Element> = basis.iter().collect();
    let (rem, quots) = engine.reduce(&engine.element(f, None), &refs, true);
    if !rem.terms.is_empty() {
        return Ok((false, None));
    }
    let mut cofactors = vec![Polynomial::zero(&ideal.ring); ideal.generators.len()];
    for (q, b) in quots.iter().zip(&basis) {
        if q.is_zero() {
            continue;
        }
        let rep = b.rep.as_ref().expect("tracked");
        for (c, r) in cofactors.iter_mut().zip(rep) {
            *c = &*c + &(q * r);
        }
    }
    let cert = MembershipCertificate { cofactors };
    if !cert.verify(f, ideal) {
        return Err(Error::Internal("membership certificate failed to re-expand".into()));
    }
    Ok((true, Some(cert)))
}

/// True iff `1 ∈ I + (f)`.
pub fn is_unit_mod(f: &Polynomial, ideal: &IdealSpec) -> Result<bool> {
    is_unit_mod_with(f, ideal, &Caps::default())
}

pub fn is_unit_mod_with(f: &Polynomial, ideal: &IdealSpec, caps: &Caps) -> Result<bool> {
    let sum = ideal.with([f.clone()])?;
    let gb = groebner_basis_with(&sum, &default_order(&ideal.ring), caps)?;
    Ok(gb.is_unit_ideal())
}

/// An inverse of `f` modulo `I`, with the cofactors of `1 = g f + sum a_i P_i`.
pub fn unit_witness(f: &Polynomial, ideal: &IdealSpec, caps: &Caps) -> Result<Option<(Polynomial, MembershipCertificate)>> {
    let sum = ideal.with([f.clone()])?;
    let one = Polynomial::one(&ideal.ring);
    match ideal_member_with(&one, &sum, true, caps)? {
        (true, Some(cert)) => {
            // `sum` drops zero generators, so locate f's slot by position
            let inverse = if f.is_zero() {
                Polynomial::zero(&ideal.ring)
            } else {
                cert.cofactors.last().cloned().expect("f is the last generator")
            };
            Ok(Some((inverse, cert)))
        }
        _ => Ok(None),
    }
}

/// True iff `f ∈ √I`, decided by `1 ∈ (I, 1 - T f)` with a fresh variable `T`.
pub fn is_nilpotent_mod(f: &Polynomial, ideal: &IdealSpec) -> Result<bool> {
    is_nilpotent_mod_with(f, ideal, &Caps::default())
}

pub fn is_nilpotent_mod_with(f: &Polynomial, ideal: &IdealSpec, caps: &Caps) -> Result<bool> {
    if !f.same_ring(&Polynomial::zero(&ideal.ring)) {
        return Err(Error::AmbientMismatch);
    }
    let t = ideal.ring.fresh_name("T");
    let (ring, ext) = ideal.extended(&[t]);
    let tv = Polynomial::var(&ring, ring.nvars() - 1);
    let rabinowitsch = &Polynomial::one(&ring) - &(&tv * &f.embed(&ring));
    let gb = groebner_basis_with(&ext.with([rabinowitsch])?, &default_order(&ring), caps)?;
    Ok(gb.is_unit_ideal())
}

#[cfg(test)]
mod tests;
