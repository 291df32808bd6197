use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use torfill::chains::*;
use torfill::exactlinalg::{det_exact, Matrix};
use torfill::{BigInt as B, Chain, Simplex, TorusMap};

fn v(c: &[i64]) -> Vec<BigInt> {
    c.iter().map(|&x| BigInt::from(x)).collect()
}

fn simplex(vs: &[&[i64]]) -> Simplex {
    StraightSimplex::canonicalize(&vs.iter().map(|p| v(p)).collect::<Vec<_>>()).unwrap()
}

fn chain(terms: &[(i64, &[&[i64]])]) -> Chain {
    let first = terms[0].1;
    let mut c = TorusChain::zero(first[0].len(), first.len() - 1);
    for (k, vs) in terms {
        c.add_term(simplex(vs), BigInt::from(*k));
    }
    c
}

fn random_chain<R: Rng>(rng: &mut R, n: usize, k: usize, terms: usize, bound: i64) -> Chain {
    let mut c = TorusChain::zero(n, k);
    for _ in 0..terms {
        let verts: Vec<Vec<BigInt>> = (0..=k)
            .map(|_| (0..n).map(|_| BigInt::from(rng.gen_range(-bound..=bound))).collect())
            .collect();
        c.add_term(StraightSimplex::canonicalize(&verts).unwrap(), BigInt::from(rng.gen_range(-3..=3)));
    }
    c
}

fn random_vec<R: Rng>(rng: &mut R, n: usize, bound: i64) -> Vec<BigInt> {
    (0..n).map(|_| BigInt::from(rng.gen_range(-bound..=bound))).collect()
}

fn random_map<R: Rng>(rng: &mut R, m: usize, n: usize, bound: i64) -> TorusMap {
    let rows = (0..m).map(|_| random_vec(rng, n, bound)).collect();
    LinearTorusMap::new(Matrix::from_rows(rows).unwrap(), random_vec(rng, m, 50)).unwrap()
}

/// Coordinate projection T^n -> T^S.
fn projection(n: usize, rows: &[usize]) -> TorusMap {
    let m = rows
        .iter()
        .map(|&r| (0..n).map(|c| BigInt::from((c == r) as i64)).collect())
        .collect();
    LinearTorusMap::linear(Matrix::from_rows(m).unwrap())
}

fn factorial(k: usize) -> u64 {
    (1..=k as u64).product()
}

#[test]
fn canonicalize_examples() {
    let s = simplex(&[&[3, 1], &[4, 1]]);
    assert_eq!(s.vertices().map(|p| p.to_vec()).collect::<Vec<_>>(), vec![v(&[0, 0]), v(&[1, 0])]);
    assert_eq!(s, simplex(&[&[0, 0], &[1, 0]]));
    let d = simplex(&[&[5], &[5]]);
    assert!(d.is_degenerate());
    assert_eq!(d.vertices().map(|p| p.to_vec()).collect::<Vec<_>>(), vec![v(&[0]), v(&[0])]);
    assert!(StraightSimplex::canonicalize(&[v(&[1, 2]), v(&[1])]).is_err());
}

#[test]
fn boundary_examples() {
    assert!(chain(&[(1, &[&[0], &[1]])]).boundary().is_zero());
    let b = chain(&[(1, &[&[0, 0], &[1, 0], &[1, 1]])]).boundary();
    let want = chain(&[
        (1, &[&[0, 0], &[0, 1]]),
        (-1, &[&[0, 0], &[1, 1]]),
        (1, &[&[0, 0], &[1, 0]]),
    ]);
    assert_eq!(b, want);
    assert!(parallelogram_cycle(&[v(&[1, 0]), v(&[0, 1])]).unwrap().boundary().is_zero());
}

#[test]
fn l1_examples() {
    assert_eq!(Chain::zero(2, 1).l1_norm(), B::zero());
    let c = chain(&[(3, &[&[0, 0], &[1, 0]]), (-2, &[&[0, 0], &[0, 1]])]);
    assert_eq!(c.l1_norm(), BigInt::from(5));
    assert_eq!(parallelogram_cycle(&[v(&[1, 0]), v(&[0, 1])]).unwrap().l1_norm(), BigInt::from(2));
}

#[test]
fn pushforward_examples() {
    let q = parallelogram_cycle(&[v(&[1, 0]), v(&[0, 1])]).unwrap();
    assert_eq!(q.pushforward(&LinearTorusMap::identity(2)).unwrap(), q);
    assert_eq!(q.pushforward(&LinearTorusMap::translation(v(&[7, -3]))).unwrap(), q);
    let a = LinearTorusMap::linear(Matrix::from_i64(&[&[2, 1], &[1, 1]]));
    assert_eq!(q.pushforward(&a).unwrap(), parallelogram_cycle(&[v(&[2, 1]), v(&[1, 1])]).unwrap());
    assert!(q.pushforward(&LinearTorusMap::identity(3)).is_err());
}

#[test]
fn prism_examples() {
    let seg = chain(&[(1, &[&[0, 0], &[1, 0]])]);
    let p = seg.prism(&v(&[0, 1])).unwrap();
    assert_eq!(p, chain(&[(1, &[&[0, 0], &[1, 0], &[1, 1]]), (-1, &[&[0, 0], &[0, 1], &[1, 1]])]));
    assert!(Chain::zero(2, 1).prism(&v(&[1, 2])).unwrap().is_zero());
    let p0 = seg.prism(&v(&[0, 0])).unwrap();
    assert_eq!(p0, chain(&[(1, &[&[0, 0], &[1, 0], &[1, 0]]), (-1, &[&[0, 0], &[0, 0], &[1, 0]])]));
}

#[test]
fn parallelogram_examples() {
    assert_eq!(parallelogram_cycle(&[v(&[1, 0])]).unwrap(), chain(&[(1, &[&[0, 0], &[1, 0]])]));
    let (a, b) = (v(&[2, 1]), v(&[-1, 3]));
    let q = parallelogram_cycle(&[a.clone(), b.clone()]).unwrap();
    let ab: Vec<BigInt> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
    let mut want = Chain::zero(2, 2);
    want.add_term(StraightSimplex::canonicalize(&[v(&[0, 0]), a.clone(), ab.clone()]).unwrap(), BigInt::from(1));
    want.add_term(StraightSimplex::canonicalize(&[v(&[0, 0]), b, ab]).unwrap(), BigInt::from(-1));
    assert_eq!(q, want);
    let q3 = parallelogram_cycle(&[v(&[1, 0, 0]), v(&[0, 1, 0]), v(&[0, 0, 1])]).unwrap();
    assert_eq!(q3.l1_norm(), BigInt::from(6));
}

#[test]
fn rectangle_examples() {
    assert_eq!(rectangle_cycle(&v(&[1, 1])).unwrap(), parallelogram_cycle(&[v(&[1, 0]), v(&[0, 1])]).unwrap());
    assert_eq!(degree(&rectangle_cycle(&v(&[0, 1])).unwrap(), 1).unwrap(), B::zero());
    assert_eq!(degree(&rectangle_cycle(&v(&[2, 3])).unwrap(), 1).unwrap(), BigInt::from(6));
    assert_eq!(degree(&rectangle_cycle(&v(&[2, 1])).unwrap(), 2).unwrap(), BigInt::from(2));
}

#[test]
fn degree_examples() {
    let q = parallelogram_cycle(&[v(&[1, 0]), v(&[0, 1])]).unwrap();
    let x = [Ratio::new(BigInt::from(1), BigInt::from(3)), Ratio::new(BigInt::from(1), BigInt::from(7))];
    assert_eq!(degree_at_point(&q, &x).unwrap(), BigInt::from(1));
    let on_edge = [Ratio::new(BigInt::from(1), BigInt::from(2)), Ratio::new(BigInt::from(1), BigInt::from(2))];
    assert_eq!(degree_at_point(&q, &on_edge), Err(ChainError::NonGenericPoint));
    let q = parallelogram_cycle(&[v(&[2, 1]), v(&[1, 1])]).unwrap();
    assert_eq!(degree(&q, 5).unwrap(), BigInt::from(1));
    assert!(matches!(
        degree(&parallelogram_cycle(&[v(&[1, 0])]).unwrap(), 0),
        Err(ChainError::NotTopDegree { .. })
    ));
}

#[test]
fn class_examples() {
    assert_eq!(parallelogram_class(&[v(&[1, 0]), v(&[0, 1])]).unwrap().minors, v(&[1]));
    assert_eq!(parallelogram_class(&[v(&[2, 1]), v(&[1, 1])]).unwrap().minors, v(&[1]));
    assert_eq!(parallelogram_class(&[v(&[1, 0])]).unwrap().minors, v(&[1, 0]));
}

#[test]
fn degree_equals_det_200() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for t in 0..200 {
        let n = 1 + t % 3;
        let gens: Vec<Vec<BigInt>> = (0..n).map(|_| random_vec(&mut rng, n, 10)).collect();
        let q = parallelogram_cycle(&gens).unwrap();
        let d = det_exact(&Matrix::from_columns(&gens).unwrap()).unwrap();
        assert_eq!(degree(&q, t as u64).unwrap(), d, "{gens:?}");
    }
}

#[test]
fn degree_is_sample_independent() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..20 {
        let gens: Vec<Vec<BigInt>> = (0..3).map(|_| random_vec(&mut rng, 3, 4)).collect();
        let q = parallelogram_cycle(&gens).unwrap();
        let mut values = Vec::new();
        let mut prng = ChaCha8Rng::seed_from_u64(1);
        while values.len() < 5 {
            let x = random_generic_point::<BigInt, _>(&mut prng, 3, 10);
            if let Ok(d) = degree_at_point(&q, &x) {
                values.push(d);
            }
        }
        assert!(values.windows(2).all(|w| w[0] == w[1]));
    }
}

#[test]
fn class_matches_projection_degrees() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..60 {
        let n = rng.gen_range(2..=3);
        let k = rng.gen_range(1..n);
        let gens: Vec<Vec<BigInt>> = (0..k).map(|_| random_vec(&mut rng, n, 6)).collect();
        let q = parallelogram_cycle(&gens).unwrap();
        let class = parallelogram_class(&gens).unwrap();
        for (subset, minor) in coordinate_subsets(n, k).iter().zip(&class.minors) {
            let p = q.pushforward(&projection(n, subset)).unwrap();
            assert_eq!(&degree(&p, 3).unwrap(), minor, "{gens:?} {subset:?}");
        }
    }
}

#[test]
fn serialization_round_trip() {
    let q = parallelogram_cycle(&[v(&[2, 1]), v(&[-1, 1000000000000])]).unwrap();
    let recs = q.to_records();
    assert_eq!(Chain::from_records(2, 2, &recs).unwrap(), q);
    let bad = vec![ChainRecord { coeff: "x".into(), vertices: vec![vec!["0".into()]] }];
    assert!(Chain::from_records(1, 0, &bad).is_err());
}

#[test]
fn composition_and_translation() {
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    for _ in 0..50 {
        let c = random_chain(&mut rng, 3, 2, 4, 5);
        let f = random_map(&mut rng, 2, 3, 4);
        let g = random_map(&mut rng, 3, 2, 4);
        let gf = g.compose(&f).unwrap();
        assert_eq!(c.pushforward(&gf).unwrap(), c.pushforward(&f).unwrap().pushforward(&g).unwrap());
        let f2 = LinearTorusMap::new(f.matrix().clone(), random_vec(&mut rng, 2, 99)).unwrap();
        assert_eq!(c.pushforward(&f).unwrap(), c.pushforward(&f2).unwrap());
    }
}

#[test]
fn generic_over_i64() {
    let gens: Vec<Vec<i64>> = vec![vec![2, 1], vec![1, 1]];
    let q = parallelogram_cycle(&gens).unwrap();
    assert!(q.boundary().is_zero());
    assert_eq!(degree(&q, 0).unwrap(), 1);
}

proptest! {
    #[test]
    fn boundary_squared_vanishes(seed in any::<u64>(), n in 1usize..=3, k in 1usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_chain(&mut rng, n, k, 5, 4);
        prop_assert!(c.boundary().boundary().is_zero());
    }

    #[test]
    fn prism_commutes_with_boundary(seed in any::<u64>(), n in 1usize..=3, k in 0usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_chain(&mut rng, n, k, 5, 1_000_000);
        let w = random_vec(&mut rng, n, 1_000_000);
        let p = c.prism(&w).unwrap();
        if k == 0 {
            prop_assert!(p.boundary().is_zero());
        } else {
            prop_assert_eq!(p.boundary(), c.boundary().prism(&w).unwrap());
        }
        prop_assert!(p.l1_norm() <= c.l1_norm() * BigInt::from(k + 1));
    }

    #[test]
    fn pushforward_properties(seed in any::<u64>(), k in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_chain(&mut rng, 3, k, 5, 6);
        let f = random_map(&mut rng, 2, 3, 3);
        let fc = c.pushforward(&f).unwrap();
        prop_assert_eq!(fc.boundary(), c.boundary().pushforward(&f).unwrap());
        prop_assert!(fc.l1_norm() <= c.l1_norm());
    }

    #[test]
    fn parallelograms_are_small_cycles(seed in any::<u64>(), n in 1usize..=3, k in 1usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gens: Vec<Vec<BigInt>> = (0..k).map(|_| random_vec(&mut rng, n, 1_000_000)).collect();
        let q = parallelogram_cycle(&gens).unwrap();
        prop_assert!(q.boundary().is_zero());
        prop_assert!(q.l1_norm().to_u64().unwrap() <= factorial(k));
    }
}
