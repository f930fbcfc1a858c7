use super::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const Q: Field = Field::Rationals;

fn v(field: Field, xs: &[i64]) -> Vec<Scalar> {
    xs.iter().map(|&x| field.from_i64(x)).collect()
}

#[test]
fn kernel_examples() {
    let m = Matrix::from_i64(Q, &[&[0, 0]]);
    assert_eq!(kernel_basis(&m), vec![v(Q, &[1, 0]), v(Q, &[0, 1])]);
    // Jacobian (y x) of the node at (0, 1)
    let m = Matrix::from_i64(Q, &[&[1, 0]]);
    assert_eq!(kernel_basis(&m), vec![v(Q, &[0, 1])]);
    assert!(kernel_basis(&Matrix::identity(Q, 3)).is_empty());
}

#[test]
fn rank_examples() {
    assert_eq!(rank_by_minors(&Matrix::identity(Q, 3)), 3);
    assert_eq!(rank_by_minors(&Matrix::from_i64(Q, &[&[1, 2], &[2, 4]])), 1);
    assert_eq!(rank_by_minors(&Matrix::zeros(Q, 3, 2)), 0);
    assert_eq!(rank_by_minors(&Matrix::zeros(Q, 0, 2)), 0);
}

#[test]
fn extension_examples() {
    // kernel of (1 -1) is spanned by (1, 1)
    let l = Functional::new(
        Domain::KernelOf(Matrix::from_i64(Q, &[&[1, -1]])),
        v(Q, &[5]),
    )
    .unwrap();
    assert_eq!(l.generators(), &[v(Q, &[1, 1])]);
    assert_eq!(extend_functional(&l).unwrap(), v(Q, &[5, 0]));

    let l = Functional::new(Domain::ImageOf(Matrix::zeros(Q, 2, 0)), vec![]).unwrap();
    assert_eq!(extend_functional(&l).unwrap(), v(Q, &[0, 0]));

    let l = Functional::new(Domain::ImageOf(Matrix::from_i64(Q, &[&[1], &[2]])), v(Q, &[3])).unwrap();
    assert_eq!(extend_functional(&l).unwrap(), v(Q, &[3, 0]));
}

#[test]
fn inconsistent_functional_is_rejected_with_relation() {
    // columns (1,2) and (2,4): relation 2 g1 - g2 = 0, values 1 and 1 violate it
    let domain = Domain::ImageOf(Matrix::from_i64(Q, &[&[1, 2], &[2, 4]]));
    match Functional::new(domain, v(Q, &[1, 1])) {
        Err(Error::InconsistentFunctional(rel)) => {
            assert_eq!(rel, v(Q, &[-2, 1]));
        }
        other => panic!("expected rejection, got {other:?}"),
    }
}

#[test]
fn dualize_examples() {
    let m = ModulePresentation::fcop(Matrix::from_i64(Q, &[&[1, 0]]));
    let d = dualize(&m);
    assert_eq!(d.kind, PresentationKind::Fp);
    assert_eq!(d.matrix, Matrix::from_i64(Q, &[&[1], &[0]]));
    assert_eq!((m.dimension(), d.dimension()), (1, 1));

    let m = ModulePresentation::fcop(Matrix::zeros(Q, 1, 2));
    assert_eq!(dualize(&m).dimension(), 2);

    let m = ModulePresentation::fp(Matrix::identity(Q, 2));
    assert_eq!(m.dimension(), 0);
    assert_eq!(dualize(&m).kind, PresentationKind::Fcop);
    assert_eq!(dualize(&m).dimension(), 0);
}

#[test]
fn double_dual_examples() {
    assert!(double_dual_check(&ModulePresentation::fcop(Matrix::from_i64(Q, &[&[1, 0]]))));
    assert!(double_dual_check(&ModulePresentation::fcop(Matrix::zeros(Q, 1, 2))));
    assert!(double_dual_check(&ModulePresentation::fp(Matrix::from_i64(Q, &[&[1, 2], &[2, 4]]))));
    assert!(double_dual_check(&ModulePresentation::free(Q, 3)));
}

#[test]
fn split_examples() {
    let whole = |n| ModulePresentation::fcop(Matrix::zeros(Q, 0, n));
    let f = Matrix::from_i64(Q, &[&[1, 0]]);
    let s = split_surjection(&f, &whole(2), &whole(1)).unwrap();
    assert_eq!(s, Matrix::from_i64(Q, &[&[1], &[0]]));

    let id = Matrix::identity(Q, 2);
    assert_eq!(split_surjection(&id, &whole(2), &whole(2)).unwrap(), id);

    let zero = Matrix::zeros(Q, 1, 2);
    match split_surjection(&zero, &whole(2), &whole(1)) {
        Err(Error::NotSurjective(w)) => assert_eq!(w, v(Q, &[1])),
        other => panic!("expected error, got {other:?}"),
    }
}

#[test]
fn split_respects_subspaces() {
    // source ker(1 1 0) ⊂ k^3, target ker(1 -1) ⊂ k^2, f(a,b,c) = (c, c)
    let src = ModulePresentation::fcop(Matrix::from_i64(Q, &[&[1, 1, 0]]));
    let tgt = ModulePresentation::fcop(Matrix::from_i64(Q, &[&[1, -1]]));
    let f = Matrix::from_i64(Q, &[&[0, 0, 1], &[0, 0, 1]]);
    let s = split_surjection(&f, &src, &tgt).unwrap();
    let t = v(Q, &[1, 1]);
    let st = s.mul_vec(&t).unwrap();
    assert!(src.matrix.mul_vec(&st).unwrap().iter().all(Scalar::is_zero));
    assert_eq!(f.mul_vec(&st).unwrap(), t);
    // (a, -a, c) maps to (a, -a), outside ker(1 -1)
    let bad = Matrix::from_i64(Q, &[&[1, 0, 0], &[0, 1, 0]]);
    assert!(matches!(split_surjection(&bad, &src, &tgt), Err(Error::NotInTarget)));
}

#[test]
fn schur_examples() {
    let r = schur_check(&Matrix::from_i64(Q, &[&[1, 2], &[3, 6]]), 1).unwrap();
    assert!(r.holds);
    assert!(r.residual.is_zero());
    let r = schur_check(&Matrix::identity(Q, 2), 2).unwrap();
    assert!(r.holds);
    assert_eq!((r.residual.rows(), r.residual.cols()), (0, 0));
    let r = schur_check(&Matrix::identity(Q, 2), 1).unwrap();
    assert!(r.holds);
    assert_eq!(r.rank, 2);
    assert_eq!(r.residual, Matrix::from_i64(Q, &[&[1]]));
    assert!(matches!(
        schur_check(&Matrix::from_i64(Q, &[&[0, 1], &[1, 0]]), 1),
        Err(Error::SingularBlock)
    ));
}

#[test]
fn det_and_inverse_agree() {
    let m = Matrix::from_i64(Q, &[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
    let one = Q.one();
    let rows = [0, 1, 2];
    let entry = |i: usize, j: usize| m.get(i, j).clone();
    assert_eq!(m.det().unwrap(), laplace_det(&entry, &rows, &rows, &one));
    assert_eq!(m.det().unwrap(), Q.from_i64(18));
    let inv = m.inverse().unwrap();
    assert_eq!(m.mul(&inv).unwrap(), Matrix::identity(Q, 3));
}

fn random_matrix(rng: &mut ChaCha8Rng, field: Field, rows: usize, cols: usize) -> Matrix {
    let data = (0..rows)
        .map(|_| (0..cols).map(|_| field.from_i64(rng.gen_range(-2..=2))).collect())
        .collect();
    Matrix::from_rows(field, cols, data).unwrap()
}

/// Random matrix of rank at most `r`, as a product of thin factors.
fn low_rank(rng: &mut ChaCha8Rng, field: Field, rows: usize, cols: usize, r: usize) -> Matrix {
    let a = random_matrix(rng, field, rows, r);
    let b = random_matrix(rng, field, r, cols);
    a.mul(&b).unwrap()
}

#[test]
fn minors_rank_matches_elimination_rank() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for k in 0..100 {
        let field = if k % 2 == 0 { Q } else { Field::Prime(5) };
        let (r, c) = (rng.gen_range(1..=5), rng.gen_range(1..=5));
        let m = if k % 3 == 0 {
            let rk = rng.gen_range(0..=r.min(c));
            low_rank(&mut rng, field, r, c, rk)
        } else {
            random_matrix(&mut rng, field, r, c)
        };
        assert_eq!(rank_by_minors(&m), m.rank(), "{m}");
        assert_eq!(m.rref().1.len(), m.rank());
    }
}

#[test]
fn designed_kernel_dimension_gives_rank() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..40 {
        let cols = rng.gen_range(2..=5);
        let k = rng.gen_range(0..=cols);
        // kernel spanned by the last k standard vectors, then mixed by an
        // invertible change of coordinates
        let base = {
            let mut m = Matrix::zeros(Q, cols - k, cols);
            for i in 0..cols - k {
                m.set(i, i, Q.one());
            }
            m
        };
        let change = loop {
            let c = random_matrix(&mut rng, Q, cols, cols);
            if c.inverse().is_some() {
                break c;
            }
        };
        let m = base.mul(&change).unwrap();
        assert_eq!(m.kernel_basis().len(), k);
        assert_eq!(m.rank(), cols - k);
        for v in m.kernel_basis() {
            assert!(m.mul_vec(&v).unwrap().iter().all(Scalar::is_zero));
        }
    }
}

#[test]
fn extensions_restrict_to_the_functional() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for k in 0..60 {
        let field = if k % 2 == 0 { Q } else { Field::Prime(5) };
        let (r, c) = (rng.gen_range(1..=3), rng.gen_range(1..=4));
        let m = random_matrix(&mut rng, field, r, c);
        let domain = if k % 3 == 0 { Domain::KernelOf(m) } else { Domain::ImageOf(m) };
        let gens = domain.generators();
        let n = domain.ambient_dim();
        // values from a hidden global form keep them consistent
        let hidden: Vec<Scalar> = (0..n).map(|_| field.from_i64(rng.gen_range(-3..=3))).collect();
        let values = gens
            .iter()
            .map(|g| g.iter().zip(&hidden).fold(field.zero(), |a, (x, y)| &a + &(x * y)))
            .collect();
        let l = Functional::new(domain, values).unwrap();
        let kf = extend_functional(&l).unwrap();
        for (g, val) in l.generators().iter().zip(l.values()) {
            let got = g.iter().zip(&kf).fold(field.zero(), |a, (x, y)| &a + &(x * y));
            assert_eq!(&got, val);
        }
    }
}

#[test]
fn double_dual_on_random_presentations() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for k in 0..50 {
        let field = if k % 2 == 0 { Q } else { Field::Prime(5) };
        let (r, c) = (rng.gen_range(0..=4), rng.gen_range(0..=4));
        let m = random_matrix(&mut rng, field, r, c);
        let pres = if k % 4 < 2 {
            ModulePresentation::fp(m)
        } else {
            ModulePresentation::fcop(m)
        };
        assert!(double_dual_check(&pres));
        assert_eq!(dualize(&pres).dimension(), pres.dimension());
    }
}

#[test]
fn random_sections_split() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut built = 0;
    while built < 30 {
        let (a, b) = (rng.gen_range(1..=4), rng.gen_range(1..=3));
        let f = random_matrix(&mut rng, Field::Prime(5), b, a);
        let src = ModulePresentation::fcop(Matrix::zeros(Field::Prime(5), 0, a));
        let tgt = ModulePresentation::fcop(Matrix::zeros(Field::Prime(5), 0, b));
        match split_surjection(&f, &src, &tgt) {
            Ok(s) => {
                assert_eq!(f.mul(&s).unwrap(), Matrix::identity(Field::Prime(5), b));
                built += 1;
            }
            Err(Error::NotSurjective(w)) => {
                assert!(f.rank() < b);
                assert!(f.solve(&w).is_none());
            }
            Err(e) => panic!("{e}"),
        }
    }
}

#[test]
fn schur_on_rank_deficient_samples() {
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    let mut checked = 0;
    while checked < 40 {
        let n = rng.gen_range(1..=3);
        let (r, c) = (rng.gen_range(n..=5), rng.gen_range(n..=5));
        let m = low_rank(&mut rng, Q, r, c, n);
        match schur_check(&m, n) {
            Ok(rep) => {
                assert_eq!(rep.rank, n);
                assert!(rep.holds);
                assert!(rep.residual.is_zero());
                checked += 1;
            }
            Err(Error::SingularBlock) => continue,
            Err(e) => panic!("{e}"),
        }
    }
}
