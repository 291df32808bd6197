//! Words in PSL(2,Z) = Z/2 * Z/3 over the generators S and U.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exactlinalg::{det_exact, Matrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Psl2Error {
    #[error("matrix must be 2x2 with determinant 1")]
    NotUnimodular,
    #[error("cannot parse word: {0}")]
    Parse(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Letter {
    S,
    U,
    U2,
}

impl Letter {
    fn u_power(self) -> Option<u8> {
        match self {
            Letter::S => None,
            Letter::U => Some(1),
            Letter::U2 => Some(2),
        }
    }

    fn from_u_power(p: u8) -> Option<Letter> {
        match p % 3 {
            0 => None,
            1 => Some(Letter::U),
            _ => Some(Letter::U2),
        }
    }

    fn same_factor(self, other: Letter) -> bool {
        self.u_power().is_some() == other.u_power().is_some()
    }

    /// Product of two letters from the same factor, `None` for the identity.
    fn merge(self, other: Letter) -> Option<Letter> {
        match (self.u_power(), other.u_power()) {
            (None, None) => None,
            (Some(a), Some(b)) => Letter::from_u_power(a + b),
            _ => unreachable!("letters from different factors"),
        }
    }

    pub fn matrix(self) -> Matrix<BigInt> {
        match self {
            Letter::S => Matrix::from_i64(&[&[0, -1], &[1, 0]]),
            Letter::U => Matrix::from_i64(&[&[0, -1], &[1, -1]]),
            Letter::U2 => Matrix::from_i64(&[&[-1, 1], &[-1, 0]]),
        }
    }

    fn as_str(self) -> &'static str {
        match self {
            Letter::S => "S",
            Letter::U => "U",
            Letter::U2 => "U2",
        }
    }
}

/// Alternating word with a sign choosing the lift to SL(2,Z).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Psl2Word {
    letters: Vec<Letter>,
    sign: i8,
}

impl Psl2Word {
    /// Freely reduces `letters` into alternating form.
    pub fn new(letters: impl IntoIterator<Item = Letter>, sign: i8) -> Self {
        let mut stack: Vec<Letter> = Vec::new();
        for l in letters {
            match stack.last() {
                Some(&top) if top.same_factor(l) => {
                    stack.pop();
                    if let Some(m) = top.merge(l) {
                        stack.push(m);
                    }
                }
                _ => stack.push(l),
            }
        }
        Self {
            letters: stack,
            sign: if sign < 0 { -1 } else { 1 },
        }
    }

    pub fn empty() -> Self {
        Self::new([], 1)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Signed product: sign times the product of the letter matrices.
    pub fn reconstruct(&self) -> Matrix<BigInt> {
        let mut m = Matrix::identity(2);
        for l in &self.letters {
            m = m.mul(&l.matrix()).expect("2x2");
        }
        if self.sign < 0 {
            m = m.scale(&BigInt::from(-1));
        }
        m
    }

    pub fn concat(&self, other: &Self) -> Self {
        Self::new(
            self.letters.iter().chain(&other.letters).copied(),
            self.sign * other.sign,
        )
    }

    pub fn pow(&self, j: u32) -> Self {
        (0..j).fold(Self::empty(), |acc, _| acc.concat(self))
    }

    /// Conjugates until the first and last letters come from different factors.
    pub fn cyclically_reduced(&self) -> Self {
        let mut w: Vec<Letter> = self.letters.clone();
        while w.len() >= 2 && w[0].same_factor(w[w.len() - 1]) {
            let last = w.pop().expect("len >= 2");
            let first = w.remove(0);
            let mut rest = Vec::with_capacity(w.len() + 1);
            rest.extend(last.merge(first));
            rest.extend(w);
            w = Self::new(rest, 1).letters;
        }
        Self {
            letters: w,
            sign: self.sign,
        }
    }

    pub fn cyclically_reduced_length(&self) -> usize {
        self.cyclically_reduced().len()
    }

    /// Rotations of the cyclically reduced word.
    fn is_rotation_of(&self, other: &[Letter]) -> bool {
        let w = &self.letters;
        if w.len() != other.len() {
            return false;
        }
        if w.is_empty() {
            return true;
        }
        (0..w.len()).any(|r| w[r..].iter().chain(&w[..r]).eq(other.iter()))
    }

    /// If the word is conjugate to the family word of (i, j), returns (i, j).
    pub fn family_parameters(&self) -> Option<(u32, u32)> {
        let c = self.cyclically_reduced();
        let j = c.letters.iter().filter(|&&l| l == Letter::U).count() as u32;
        let u2 = c.letters.iter().filter(|&&l| l == Letter::U2).count() as u32;
        if j == 0 || !u2.is_multiple_of(j) || u2 == 0 {
            return None;
        }
        let i = u2 / j;
        let f = family_word(i, j);
        c.is_rotation_of(&f.letters).then_some((i, j))
    }
}

impl fmt::Display for Psl2Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sign < 0 {
            write!(f, "-")?;
        }
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<&str> = self.letters.iter().map(|l| l.as_str()).collect();
        write!(f, "{}", parts.join("·"))
    }
}

impl FromStr for Psl2Word {
    type Err = Psl2Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (sign, body) = match s.strip_prefix('-') {
            Some(rest) => (-1, rest.trim()),
            None => (1, s),
        };
        if body.is_empty() || body == "1" {
            return Ok(Self::new([], sign));
        }
        let letters = body
            .split(['·', '.', '*'])
            .map(|t| match t.trim() {
                "S" => Ok(Letter::S),
                "U" => Ok(Letter::U),
                "U2" => Ok(Letter::U2),
                other => Err(Psl2Error::Parse(format!("unknown letter {other:?}"))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::new(letters, sign))
    }
}

fn check_sl2(a: &Matrix<BigInt>) -> Result<(), Psl2Error> {
    if a.rows() != 2 || a.cols() != 2 || det_exact(a).map_err(|_| Psl2Error::NotUnimodular)? != BigInt::one() {
        return Err(Psl2Error::NotUnimodular);
    }
    Ok(())
}

/// Letters of T^q, with T = U2·S and T^-1 = S·U in PSL(2,Z).
fn t_power_letters(q: &BigInt, out: &mut Vec<Letter>) {
    let count: usize = q.abs().try_into().expect("exponent fits in memory");
    for _ in 0..count {
        if q.is_positive() {
            out.extend([Letter::U2, Letter::S]);
        } else {
            out.extend([Letter::S, Letter::U]);
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub word: Psl2Word,
    /// Euclidean division steps taken.
    pub steps: usize,
}

/// Writes A as a word in S and U, by continued-fraction descent on the first column.
pub fn decompose(a: &Matrix<BigInt>) -> Result<Decomposition, Psl2Error> {
    check_sl2(a)?;
    // A = T^q1 S^-1 T^q2 S^-1 ... T^qr (+-1)
    let mut m = a.clone();
    let mut letters = Vec::new();
    let mut steps = 0;
    while !m.get(1, 0).is_zero() {
        let q = m.get(0, 0).div_floor(m.get(1, 0));
        t_power_letters(&q, &mut letters);
        letters.push(Letter::S);
        // m <- S T^-q m
        let t_inv = Matrix::from_rows(vec![
            vec![BigInt::one(), -q.clone()],
            vec![BigInt::zero(), BigInt::one()],
        ])
        .expect("2x2");
        m = Letter::S.matrix().mul(&t_inv.mul(&m).expect("2x2")).expect("2x2");
        steps += 1;
    }
    // m = +-T^b
    let b = m.get(0, 1).clone() * m.get(0, 0).clone();
    t_power_letters(&b, &mut letters);
    let word = Psl2Word::new(letters, 1);
    let sign = if &word.reconstruct() == a { 1 } else { -1 };
    let word = Psl2Word { sign, ..word };
    debug_assert_eq!(&word.reconstruct(), a);
    Ok(Decomposition { word, steps })
}

/// A_i = [[i+1, i], [1, 1]].
pub fn family_matrix(i: u32) -> Matrix<BigInt> {
    let i = i as i64;
    Matrix::from_i64(&[&[i + 1, i], &[1, 1]])
}

/// (U2·S)^i · U·S repeated j times; its signed product is (-1)^j A_i^j.
pub fn family_word(i: u32, j: u32) -> Psl2Word {
    let mut one = Vec::new();
    for _ in 0..i {
        one.extend([Letter::U2, Letter::S]);
    }
    one.extend([Letter::U, Letter::S]);
    Psl2Word::new(one, -1).pow(j)
}

/// Triangulation-complexity bracket: lower = kappa * `lower_kappa_coeff`, kappa unknown.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DeltaBounds {
    pub lower_kappa_coeff: usize,
    /// j(i+1) + 6 when the word is conjugate to a family word.
    pub family_upper: Option<u64>,
}

pub fn delta_bounds(w: &Psl2Word) -> DeltaBounds {
    DeltaBounds {
        lower_kappa_coeff: w.cyclically_reduced_length(),
        family_upper: w
            .family_parameters()
            .map(|(i, j)| j as u64 * (i as u64 + 1) + 6),
    }
}
