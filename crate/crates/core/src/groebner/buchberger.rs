//! Buchberger's algorithm with the Gebauer–Möller pair criteria and optional
//! tracking of representations in terms of the input generators.

use std::cmp::Ordering;
use std::sync::Arc;

use crate::corering::{Monomial, MonomialOrder, Polynomial, Ring, Scalar};
use crate::error::{Error, Result};

use super::Caps;

/// Terms sorted ascending under the active order, so the leading term is last.
#[derive(Clone, Debug)]
pub(crate) struct Element {
    pub terms: Vec<(Monomial, Scalar)>,
    /// Representation in the input generators, when tracking.
    pub rep: Option<Vec<Polynomial>>,
}

impl Element {
    fn lead(&self) -> Option<&(Monomial, Scalar)> {
        self.terms.last()
    }

    pub fn to_poly(&self, ring: &Arc<Ring>) -> Polynomial {
        Polynomial::from_terms(ring, self.terms.iter().cloned())
    }
}

pub(crate) struct Engine<'a> {
    pub ring: &'a Arc<Ring>,
    pub order: &'a MonomialOrder,
    pub ngens: usize,
    pub track: bool,
}

impl Engine<'_> {
    pub fn element(&self, p: &Polynomial, rep: Option<Vec<Polynomial>>) -> Element {
        let mut terms = p.sorted_terms(self.order);
        terms.reverse();
        Element { terms, rep }
    }

    fn unit_rep(&self, i: usize) -> Option<Vec<Polynomial>> {
        self.track.then(|| {
            (0..self.ngens)
                .map(|k| {
                    if k == i {
                        Polynomial::one(self.ring)
                    } else {
                        Polynomial::zero(self.ring)
                    }
                })
                .collect()
        })
    }

    /// `a - c * m * b` on ascending term lists.
    fn sub_scaled(&self, a: &[(Monomial, Scalar)], c: &Scalar, m: &Monomial, b: &[(Monomial, Scalar)]) -> Vec<(Monomial, Scalar)> {
        let mut out = Vec::with_capacity(a.len() + b.len());
        let mut i = 0;
        let mut j = 0;
        let shifted: Vec<(Monomial, Scalar)> = b.iter().map(|(t, k)| (t.mul(m), -&(k * c))).collect();
        while i < a.len() && j < shifted.len() {
            match self.order.cmp(&a[i].0, &shifted[j].0) {
                Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(shifted[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let s = &a[i].1 + &shifted[j].1;
                    if !s.is_zero() {
                        out.push((a[i].0.clone(), s));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend(shifted.into_iter().skip(j));
        out
    }

    fn rep_sub_scaled(&self, a: &mut [Polynomial], c: &Scalar, m: &Monomial, b: &[Polynomial]) {
        for (x, y) in a.iter_mut().zip(b) {
            if !y.is_zero() {
                *x = &*x - &y.mul_term(m, c);
            }
        }
    }

    /// Full reduction of `f` by `basis`. When tracking, `f.rep` is updated so
    /// the result still equals the combination of input generators. The
    /// quotient of each basis element is returned alongside when asked.
    pub fn reduce(&self, f: &Element, basis: &[&Element], quotients: bool) -> (Element, Vec<Polynomial>) {
        let mut p = f.terms.clone();
        let mut rem: Vec<(Monomial, Scalar)> = Vec::new();
        let mut rep = f.rep.clone();
        let mut quots: Vec<Polynomial> = if quotients {
            vec![Polynomial::zero(self.ring); basis.len()]
        } else {
            Vec::new()
        };
        while let Some((lm, lc)) = p.last().cloned() {
            let divisor = basis.iter().enumerate().find_map(|(k, g)| {
                let (gm, gc) = g.lead()?;
                gm.quotient_of(&lm).map(|q| (k, q, gc))
            });
            match divisor {
                Some((k, q, gc)) => {
                    let c = &lc * &gc.inv().expect("nonzero lead");
                    p = self.sub_scaled(&p, &c, &q, &basis[k].terms);
                    if let (Some(r), Some(gr)) = (rep.as_mut(), basis[k].rep.as_ref()) {
                        self.rep_sub_scaled(r, &c, &q, gr);
                    }
                    if quotients {
                        quots[k] = &quots[k] + &Polynomial::term(self.ring, q, c);
                    }
                }
                None => {
                    rem.push(p.pop().expect("nonempty"));
                }
            }
        }
        rem.reverse();
        (Element { terms: rem, rep }, quots)
    }

    fn s_poly(&self, f: &Element, g: &Element) -> Element {
        let (fm, fc) = f.lead().expect("nonzero");
        let (gm, gc) = g.lead().expect("nonzero");
        let l = fm.lcm(gm);
        let qf = fm.quotient_of(&l).expect("lcm");
        let qg = gm.quotient_of(&l).expect("lcm");
        // S = (1/fc) qf f - (1/gc) qg g
        let finv = fc.inv().expect("nonzero");
        let ginv = gc.inv().expect("nonzero");
        let left: Vec<_> = f.terms.iter().map(|(t, c)| (t.mul(&qf), c * &finv)).collect();
        let terms = self.sub_scaled(&left, &ginv, &qg, &g.terms);
        let rep = match (&f.rep, &g.rep) {
            (Some(a), Some(b)) => {
                let mut r: Vec<Polynomial> = a.iter().map(|p| p.mul_term(&qf, &finv)).collect();
                self.rep_sub_scaled(&mut r, &ginv, &qg, b);
                Some(r)
            }
            _ => None,
        };
        Element { terms, rep }
    }

    fn make_monic(&self, e: &mut Element) {
        let Some((_, c)) = e.lead() else { return };
        if c.is_one() {
            return;
        }
        let inv = c.inv().expect("nonzero");
        for t in e.terms.iter_mut() {
            t.1 = &t.1 * &inv;
        }
        if let Some(r) = e.rep.as_mut() {
            for p in r.iter_mut() {
                *p = p.scale(&inv);
            }
        }
    }

    /// Computes the reduced Gröbner basis of `gens`, sorted by ascending
    /// leading monomial.
    pub fn run(&self, gens: &[Polynomial], caps: &Caps) -> Result<Vec<Element>> {
        let mut basis: Vec<Element> = Vec::new();
        let mut pairs: Vec<(usize, usize)> = Vec::new();

        for (i, g) in gens.iter().enumerate() {
            if g.is_zero() {
                continue;
            }
            let mut e = self.element(g, self.unit_rep(i));
            self.make_monic(&mut e);
            self.check_degree(&e, caps)?;
            self.add_with_update(&mut basis, &mut pairs, e, caps)?;
        }

        while !pairs.is_empty() {
            // normal selection strategy: smallest lcm, ties by index
            let (pos, _) = pairs
                .iter()
                .enumerate()
                .min_by(|(_, a), (_, b)| {
                    let la = self.pair_lcm(&basis, **a);
                    let lb = self.pair_lcm(&basis, **b);
                    self.order.cmp(&la, &lb).then(a.cmp(b))
                })
                .expect("nonempty");
            let (i, j) = pairs.remove(pos);
            let lcm = self.pair_lcm(&basis, (i, j));
            if lcm.degree() > caps.max_degree {
                return Err(Error::Capacity(format!(
                    "S-polynomial degree {} exceeds the cap {}",
                    lcm.degree(),
                    caps.max_degree
                )));
            }
            let s = self.s_poly(&basis[i], &basis[j]);
            let refs: Vec<&Element> = basis.iter().collect();
            let (mut h, _) = self.reduce(&s, &refs, false);
            if h.terms.is_empty() {
                continue;
            }
            self.make_monic(&mut h);
            self.check_degree(&h, caps)?;
            self.add_with_update(&mut basis, &mut pairs, h, caps)?;
        }

        Ok(self.reduce_basis(basis))
    }

    fn check_degree(&self, e: &Element, caps: &Caps) -> Result<()> {
        let d = e.terms.iter().map(|(m, _)| m.degree()).max().unwrap_or(0);
        if d > caps.max_degree {
            return Err(Error::Capacity(format!(
                "basis element of degree {d} exceeds the cap {}",
                caps.max_degree
            )));
        }
        Ok(())
    }

    fn pair_lcm(&self, basis: &[Element], (i, j): (usize, usize)) -> Monomial {
        basis[i].lead().expect("nonzero").0.lcm(&basis[j].lead().expect("nonzero").0)
    }

    /// Appends `h` and updates the pair list with the Gebauer–Möller criteria.
    fn add_with_update(&self, basis: &mut Vec<Element>, pairs: &mut Vec<(usize, usize)>, h: Element, caps: &Caps) -> Result<()> {
        if basis.len() >= caps.max_basis {
            return Err(Error::Capacity(format!(
                "basis size exceeds the cap {}",
                caps.max_basis
            )));
        }
        let t = basis.len();
        let ht = h.lead().expect("nonzero").0.clone();
        basis.push(h);

        // criterion B on existing pairs
        pairs.retain(|&(i, j)| {
            let l = self.pair_lcm(basis, (i, j));
            if !ht.divides(&l) {
                return true;
            }
            let lit = self.pair_lcm(basis, (i, t));
            let ljt = self.pair_lcm(basis, (j, t));
            lit == l || ljt == l
        });

        // new pairs with their lcms
        let mut new: Vec<(usize, Monomial, bool)> = (0..t)
            .map(|i| {
                let hi = &basis[i].lead().expect("nonzero").0;
                (i, hi.lcm(&ht), hi.is_coprime(&ht))
            })
            .collect();

        // criterion M: drop pairs whose lcm is properly divisible by another's
        let snapshot = new.clone();
        new.retain(|(_, l, _)| {
            !snapshot
                .iter()
                .any(|(_, l2, _)| l2 != l && l2.divides(l))
        });

        // criterion F: among equal lcms keep one; drop the whole class if any
        // member has coprime leads (product criterion)
        let mut kept: Vec<(usize, Monomial, bool)> = Vec::new();
        for (i, l, coprime) in new {
            if let Some(k) = kept.iter_mut().find(|k| k.1 == l) {
                k.2 |= coprime;
            } else {
                kept.push((i, l, coprime));
            }
        }
        pairs.extend(kept.into_iter().filter(|k| !k.2).map(|(i, _, _)| (i, t)));
        Ok(())
    }

    /// Minimal, monic, inter-reduced basis sorted by ascending leading monomial.
    fn reduce_basis(&self, basis: Vec<Element>) -> Vec<Element> {
        let mut minimal: Vec<Element> = Vec::new();
        for (k, g) in basis.iter().enumerate() {
            let gm = &g.lead().expect("nonzero").0;
            let redundant = basis.iter().enumerate().any(|(k2, g2)| {
                let m2 = &g2.lead().expect("nonzero").0;
                k2 != k && m2.divides(gm) && (m2 != gm || k2 < k)
            });
            if !redundant {
                minimal.push(g.clone());
            }
        }
        minimal.sort_by(|a, b| self.order.cmp(&a.lead().unwrap().0, &b.lead().unwrap().0));
        let mut out = Vec::with_capacity(minimal.len());
        for k in 0..minimal.len() {
            let others: Vec<&Element> = minimal
                .iter()
                .enumerate()
                .filter(|(k2, _)| *k2 != k)
                .map(|(_, e)| e)
                .collect();
            let (mut r, _) = self.reduce(&minimal[k], &others, false);
            self.make_monic(&mut r);
            out.push(r);
        }
        out
    }
}
