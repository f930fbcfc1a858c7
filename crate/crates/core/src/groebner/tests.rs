use super::*;
use crate::corering::{parse_poly, Field, OrderKind, Scalar};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn ring(field: Field, vars: &[&str]) -> Arc<Ring> {
    Ring::new(field, vars.iter().copied())
}

fn ideal(r: &Arc<Ring>, gens: &[&str]) -> IdealSpec {
    IdealSpec::new(r, gens.iter().map(|g| parse_poly(g, r).unwrap())).unwrap()
}

fn p(r: &Arc<Ring>, s: &str) -> Polynomial {
    parse_poly(s, r).unwrap()
}

fn gb(i: &IdealSpec) -> GroebnerBasis {
    groebner_basis(i, &MonomialOrder::grevlex(i.ring().nvars())).unwrap()
}

#[test]
fn basis_examples() {
    let r = ring(Field::Rationals, &["x", "y"]);
    assert_eq!(gb(&ideal(&r, &["x*y"])).basis(), &[p(&r, "x*y")]);
    let q = ring(Field::Rationals, &["x"]);
    assert_eq!(gb(&ideal(&q, &["x^2 - 1", "2*x"])).basis(), &[p(&q, "1")]);
    assert!(gb(&IdealSpec::zero(&r)).basis().is_empty());
    assert!(gb(&ideal(&r, &["0"])).basis().is_empty());
}

#[test]
fn normal_form_examples() {
    let r = ring(Field::Rationals, &["x", "y"]);
    let g = gb(&ideal(&r, &["x*y"]));
    assert!(normal_form(&p(&r, "x^2*y"), &g).unwrap().is_zero());
    let q = ring(Field::Rationals, &["x"]);
    let g = gb(&ideal(&q, &["x^2 - 1"]));
    assert_eq!(normal_form(&p(&q, "x^2"), &g).unwrap(), p(&q, "1"));
    let g = gb(&IdealSpec::zero(&q));
    assert_eq!(normal_form(&p(&q, "x"), &g).unwrap(), p(&q, "x"));
    let other = ring(Field::Rationals, &["z"]);
    assert!(matches!(normal_form(&p(&other, "z"), &g), Err(Error::AmbientMismatch)));
}

#[test]
fn membership_examples() {
    let r = ring(Field::Rationals, &["x", "y"]);
    let i = ideal(&r, &["x*y"]);
    let (yes, cert) = ideal_member(&p(&r, "x^2*y"), &i, true).unwrap();
    assert!(yes);
    assert_eq!(cert.unwrap().cofactors, vec![p(&r, "x")]);
    assert!(!ideal_member(&p(&r, "1"), &i, true).unwrap().0);

    let q = ring(Field::Rationals, &["x"]);
    let i = ideal(&q, &["x^2 - 1", "2*x"]);
    let (yes, cert) = ideal_member(&p(&q, "1"), &i, true).unwrap();
    assert!(yes);
    let cert = cert.unwrap();
    assert!(cert.verify(&p(&q, "1"), &i));
    assert_eq!(cert.cofactors, vec![p(&q, "-1"), p(&q, "1/2*x")]);
}

#[test]
fn unit_examples() {
    let q = ring(Field::Rationals, &["x"]);
    assert!(is_unit_mod(&p(&q, "2*x"), &ideal(&q, &["x^2 - 1"])).unwrap());
    assert!(!is_unit_mod(&p(&q, "2*x"), &ideal(&q, &["x^2"])).unwrap());
    assert!(is_unit_mod(&p(&q, "1"), &ideal(&q, &["x^3 + x"])).unwrap());
    let (inv, cert) = unit_witness(&p(&q, "2*x"), &ideal(&q, &["x^2 - 1"]), &Caps::default())
        .unwrap()
        .unwrap();
    assert_eq!(inv, p(&q, "1/2*x"));
    let sum = ideal(&q, &["x^2 - 1", "2*x"]);
    assert!(cert.verify(&p(&q, "1"), &sum));
}

#[test]
fn nilpotent_examples() {
    let q = ring(Field::Rationals, &["x"]);
    assert!(is_nilpotent_mod(&p(&q, "x"), &ideal(&q, &["x^2"])).unwrap());
    let r = ring(Field::Rationals, &["x", "y"]);
    assert!(!is_nilpotent_mod(&p(&r, "x"), &ideal(&r, &["x*y"])).unwrap());
    assert!(is_nilpotent_mod(&p(&r, "0"), &IdealSpec::zero(&r)).unwrap());
    assert!(is_nilpotent_mod(&p(&r, "x + y"), &ideal(&r, &["x^3", "y^2"])).unwrap());
}

#[test]
fn capacity_guard_is_an_error() {
    let r = ring(Field::Rationals, &["x", "y", "z"]);
    let i = ideal(&r, &["x^5 - y*z", "y^5 - x*z", "z^5 - x*y"]);
    let caps = Caps {
        max_basis: 2,
        max_degree: 40,
    };
    let res = groebner_basis_with(&i, &MonomialOrder::grevlex(3), &caps);
    assert!(matches!(res, Err(Error::Capacity(_))));
    let caps = Caps {
        max_basis: 500,
        max_degree: 3,
    };
    let res = groebner_basis_with(&i, &MonomialOrder::grevlex(3), &caps);
    assert!(matches!(res, Err(Error::Capacity(_))));
}

#[test]
fn lex_and_grevlex_agree_on_membership() {
    let r = ring(Field::Rationals, &["x", "y"]);
    let i = ideal(&r, &["x^2 + y^2 - 1", "x - y"]);
    let lex = groebner_basis(&i, &MonomialOrder::lex(2)).unwrap();
    assert_eq!(lex.basis(), &[p(&r, "y^2 - 1/2"), p(&r, "x - y")]);
    let g = gb(&i);
    assert!(lex.satisfies_buchberger_criterion());
    assert!(g.satisfies_buchberger_criterion());
    for f in ["x^2 - 1/2", "x*y - 1/2", "x + 1"] {
        let f = p(&r, f);
        assert_eq!(
            normal_form(&f, &lex).unwrap().is_zero(),
            normal_form(&f, &g).unwrap().is_zero()
        );
    }
    let rev = MonomialOrder::with_priority(OrderKind::Lex, vec![1, 0]);
    assert!(groebner_basis(&i, &rev).unwrap().satisfies_buchberger_criterion());
}

#[test]
fn quotient_dimension() {
    let r = ring(Field::Rationals, &["x", "y"]);
    assert_eq!(gb(&ideal(&r, &["x^2", "x*y", "y^2"])).quotient_dimension(), Some(3));
    assert_eq!(gb(&ideal(&r, &["x*y"])).quotient_dimension(), None);
    assert_eq!(gb(&ideal(&r, &["1"])).quotient_dimension(), Some(0));
    assert_eq!(
        gb(&ideal(&r, &["x^2 + y^2 - 1", "x - y"])).quotient_dimension(),
        Some(2)
    );
}

// ---- oracle: degree-bounded cofactor search by exact linear algebra ----

fn monomials_up_to(nvars: usize, d: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; nvars];
    loop {
        if cur.iter().sum::<u32>() <= d {
            out.push(Monomial::new(cur.clone()));
        }
        let mut v = 0;
        loop {
            if v == nvars {
                return out;
            }
            cur[v] += 1;
            if cur[v] <= d {
                break;
            }
            cur[v] = 0;
            v += 1;
        }
    }
}

/// Solvability of `A c = b` over the field by plain Gauss–Jordan.
fn solvable(mut rows: Vec<Vec<Scalar>>) -> bool {
    let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
    let mut rank_row = 0;
    for col in 0..ncols.saturating_sub(1) {
        let Some(piv) = (rank_row..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(rank_row, piv);
        let inv = rows[rank_row][col].inv().unwrap();
        for x in rows[rank_row].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows.len() {
            if i != rank_row && !rows[i][col].is_zero() {
                let f = rows[i][col].clone();
                let pivot_row = rows[rank_row].clone();
                for (x, y) in rows[i].iter_mut().zip(&pivot_row) {
                    *x = &*x - &(&f * y);
                }
            }
        }
        rank_row += 1;
    }
    rows[rank_row..].iter().all(|r| r.last().unwrap().is_zero())
}

fn oracle_member(f: &Polynomial, gens: &[Polynomial], d: u32) -> bool {
    let ring = f.ring().clone();
    let field = ring.field();
    let n = ring.nvars();
    // unknowns: coefficient of monomial m in q_i for deg(m) + deg(g_i) <= d
    let mut unknowns: Vec<(usize, Monomial)> = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        let dg = g.total_degree().unwrap_or(0);
        if dg > d {
            continue;
        }
        for m in monomials_up_to(n, d - dg) {
            unknowns.push((i, m));
        }
    }
    let targets = monomials_up_to(n, d.max(f.total_degree().unwrap_or(0)));
    let rows: Vec<Vec<Scalar>> = targets
        .iter()
        .map(|t| {
            let mut row: Vec<Scalar> = unknowns
                .iter()
                .map(|(i, m)| match m.quotient_of(t) {
                    Some(rest) => gens[*i].coefficient(&rest),
                    None => field.zero(),
                })
                .collect();
            row.push(f.coefficient(t));
            row
        })
        .collect();
    solvable(rows)
}

fn random_poly(rng: &mut ChaCha8Rng, r: &Arc<Ring>, max_deg: u32) -> Polynomial {
    let field = r.field();
    let mons = monomials_up_to(r.nvars(), max_deg);
    Polynomial::from_terms(
        r,
        mons.into_iter().filter_map(|m| {
            if rng.gen_bool(0.5) {
                Some((m, field.from_i64(rng.gen_range(-3..=3))))
            } else {
                None
            }
        }),
    )
}

#[test]
fn membership_agrees_with_degree_bounded_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    const D: u32 = 4;
    let mut compared = 0;
    for trial in 0..120 {
        let field = if trial % 2 == 0 { Field::Rationals } else { Field::Prime(5) };
        let r = ring(field, &["x", "y"]);
        let ngen = rng.gen_range(1..=2);
        let gens: Vec<Polynomial> = (0..ngen).map(|_| random_poly(&mut rng, &r, 2)).collect();
        let i = IdealSpec::new(&r, gens.clone()).unwrap();
        let gens = i.generators().to_vec();
        // half the targets are combinations of the generators
        let f = if rng.gen_bool(0.5) {
            gens.iter().fold(Polynomial::zero(&r), |acc, g| {
                &acc + &(&random_poly(&mut rng, &r, 1) * g)
            })
        } else {
            random_poly(&mut rng, &r, 2)
        };
        let (member, cert) = ideal_member(&f, &i, true).unwrap();
        let oracle = oracle_member(&f, &gens, D);
        if oracle {
            assert!(member, "oracle found cofactors for {f} in {gens:?}");
        }
        if !member {
            assert!(!oracle);
            compared += 1;
            continue;
        }
        let cert = cert.unwrap();
        assert!(cert.verify(&f, &i));
        let cert_degree = cert
            .cofactors
            .iter()
            .zip(&gens)
            .filter(|(q, _)| !q.is_zero())
            .map(|(q, g)| q.total_degree().unwrap() + g.total_degree().unwrap())
            .max()
            .unwrap_or(0);
        if cert_degree <= D {
            assert!(oracle, "certificate of degree {cert_degree} missed by oracle");
            compared += 1;
        }
    }
    assert!(compared >= 100, "only {compared} decisive comparisons");
}

#[test]
fn unit_implies_member_with_reexpanding_witness() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..60 {
        let r = ring(Field::Prime(5), &["x", "y"]);
        let gens: Vec<Polynomial> = (0..2).map(|_| random_poly(&mut rng, &r, 2)).collect();
        let i = IdealSpec::new(&r, gens).unwrap();
        let f = random_poly(&mut rng, &r, 2);
        if is_unit_mod(&f, &i).unwrap() {
            let sum = i.with([f.clone()]).unwrap();
            let one = Polynomial::one(&r);
            let (yes, cert) = ideal_member(&one, &sum, true).unwrap();
            assert!(yes);
            assert!(cert.unwrap().verify(&one, &sum));
        }
    }
}

#[test]
fn random_bases_satisfy_buchberger_and_are_deterministic() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..40 {
        let r = ring(Field::Rationals, &["x", "y", "z"]);
        let gens: Vec<Polynomial> = (0..3).map(|_| random_poly(&mut rng, &r, 2)).collect();
        let i = IdealSpec::new(&r, gens.clone()).unwrap();
        let order = MonomialOrder::grevlex(3);
        let g1 = groebner_basis_with(&i, &order, &Caps::default()).unwrap();
        assert!(g1.satisfies_buchberger_criterion());
        assert!(g1.is_reduced());
        for g in &gens {
            assert!(normal_form(g, &g1).unwrap().is_zero());
        }
        // recompute bypassing the cache
        let engine = Engine {
            ring: &r,
            order: &order,
            ngens: gens.len(),
            track: true,
        };
        let fresh: Vec<Polynomial> = engine
            .run(i.generators(), &Caps::default())
            .unwrap()
            .iter()
            .map(|e| e.to_poly(&r))
            .collect();
        assert_eq!(fresh, g1.basis());
    }
}
