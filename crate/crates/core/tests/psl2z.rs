use num_bigint::BigInt;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use torfill::exactlinalg::{mat_pow, Matrix};
use torfill::psl2z::*;
use torfill::sampling::random_sl2_word;
use torfill::scalar::log2_abs;

fn neg(m: &Matrix<BigInt>) -> Matrix<BigInt> {
    m.scale(&BigInt::from(-1))
}

#[test]
fn generator_orders() {
    let s = Letter::S.matrix();
    let u = Letter::U.matrix();
    assert_eq!(s.mul(&s).unwrap(), neg(&Matrix::identity(2)));
    assert_eq!(mat_pow(&u, 3).unwrap(), Matrix::identity(2));
    assert_eq!(u.mul(&u).unwrap(), Letter::U2.matrix());
}

#[test]
fn small_decompositions() {
    let s = decompose(&Letter::S.matrix()).unwrap().word;
    assert_eq!(s.to_string(), "S");
    assert_eq!(s.sign(), 1);
    assert!(decompose(&Matrix::identity(2)).unwrap().word.is_empty());
    let a1 = decompose(&family_matrix(1)).unwrap().word;
    assert_eq!(a1.letters(), family_word(1, 1).letters());
    assert_eq!(a1.to_string(), "-U2·S·U·S");
}

#[test]
fn reconstruct_examples() {
    let s: Psl2Word = "S".parse().unwrap();
    assert_eq!(s.reconstruct(), Matrix::from_i64(&[&[0, -1], &[1, 0]]));
    let u3: Psl2Word = "U·U·U".parse().unwrap();
    assert!(u3.is_empty());
    assert_eq!(u3.reconstruct(), Matrix::identity(2));
    // the raw product S·S is -I; free reduction drops it in PSL
    assert_eq!(s.letters().len(), 1);
    assert_eq!(s.concat(&s).reconstruct(), Matrix::identity(2));
}

#[test]
fn not_unimodular() {
    assert_eq!(decompose(&Matrix::from_i64(&[&[2, 0], &[0, 1]])), Err(Psl2Error::NotUnimodular));
    assert_eq!(decompose(&Matrix::from_i64(&[&[0, 1], &[1, 0]])), Err(Psl2Error::NotUnimodular));
}

#[test]
fn family_word_matches_matrix() {
    for i in 1..=10 {
        for j in 1..=10 {
            let w = family_word(i, j);
            let want = mat_pow(&family_matrix(i), j as u64).unwrap();
            let got = w.reconstruct();
            assert!(got == want || got == neg(&want));
            assert_eq!(w.cyclically_reduced_length(), (j * (2 * i + 2)) as usize);
            let d = decompose(&want).unwrap().word;
            assert_eq!(d.cyclically_reduced_length(), (j * (2 * i + 2)) as usize);
        }
    }
}

#[test]
fn delta_brackets() {
    let b = delta_bounds(&family_word(1, 1));
    assert_eq!(b.lower_kappa_coeff, 4);
    assert_eq!(b.family_upper, Some(8));
    let b = delta_bounds(&Psl2Word::empty());
    assert_eq!(b.lower_kappa_coeff, 0);
    assert_eq!(b.family_upper, None);
    let w = decompose(&mat_pow(&family_matrix(3), 4).unwrap()).unwrap().word;
    assert_eq!(delta_bounds(&w).family_upper, Some(4 * 4 + 6));
}

#[test]
fn cyclic_reduction_merges_ends() {
    let w: Psl2Word = "U·S·U".parse().unwrap();
    assert_eq!(w.cyclically_reduced().to_string(), "U2·S");
    let w: Psl2Word = "S·U·S".parse().unwrap();
    assert_eq!(w.cyclically_reduced_length(), 1);
    let w: Psl2Word = "U·S·U2".parse().unwrap();
    assert_eq!(w.cyclically_reduced_length(), 1);
}

#[test]
fn text_round_trip() {
    for s in ["1", "-1", "S", "-U2·S·U·S", "U·S·U2·S"] {
        let w: Psl2Word = s.parse().unwrap();
        assert_eq!(w.to_string(), s);
    }
    assert!("S·V".parse::<Psl2Word>().is_err());
}

#[test]
fn decompose_random_samples() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..500 {
        let a = random_sl2_word(&mut rng, 40, 1e6);
        let d = decompose(&a).unwrap();
        assert_eq!(d.word.reconstruct(), a);
        // Euclid on the first column: O(bit size) division steps
        let bits = log2_abs(&a.max_abs()).max(0.0);
        assert!((d.steps as f64) <= 1.5 * bits + 3.0, "{a}: {} steps", d.steps);
    }
}

proptest! {
    #[test]
    fn square_length_at_most_double(letters in proptest::collection::vec(0u8..3, 0..30)) {
        let w = Psl2Word::new(
            letters.into_iter().map(|l| [Letter::S, Letter::U, Letter::U2][l as usize]),
            1,
        );
        let l = w.cyclically_reduced_length();
        let l2 = w.concat(&w).cyclically_reduced_length();
        prop_assert!(l2 <= 2 * l);
        let c = w.cyclically_reduced();
        // single letters are torsion; longer cyclically reduced words have infinite order
        prop_assume!(c.len() >= 2);
        prop_assert_eq!(c.concat(&c).cyclically_reduced_length(), 2 * c.len());
    }

    #[test]
    fn decompose_inverts_reconstruct(letters in proptest::collection::vec(0u8..3, 0..40), neg in any::<bool>()) {
        let w = Psl2Word::new(
            letters.into_iter().map(|l| [Letter::S, Letter::U, Letter::U2][l as usize]),
            if neg { -1 } else { 1 },
        );
        let a = w.reconstruct();
        let d = decompose(&a).unwrap().word;
        prop_assert_eq!(d.reconstruct(), a);
        // normal forms are unique in the free product
        prop_assert_eq!(d.letters(), w.letters());
    }
}
