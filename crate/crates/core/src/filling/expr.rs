//! Formal sums of parallelogram cycles and the fills that kill them.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::FillingCertificate;
use crate::chains::{parallelogram_class, parallelogram_cycle, ChainError, HomologyClassVector, LinearTorusMap};
use crate::Chain;

/// coeff * Q(gens)
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleTerm {
    pub coeff: BigInt,
    pub gens: Vec<Vec<BigInt>>,
}

/// Signed sum of parallelogram cycles of one degree in T^n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleExpr {
    pub dim: usize,
    pub degree: usize,
    pub terms: Vec<CycleTerm>,
}

pub(crate) fn ivec(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

impl CycleExpr {
    pub fn zero(dim: usize, degree: usize) -> Self {
        Self {
            dim,
            degree,
            terms: Vec::new(),
        }
    }

    pub fn single(coeff: i64, gens: Vec<Vec<BigInt>>) -> Self {
        let mut e = Self::zero(gens[0].len(), gens.len());
        e.push_term(BigInt::from(coeff), gens);
        e
    }

    /// Builds an expression from small-integer generators.
    pub fn from_i64(dim: usize, terms: &[(i64, &[&[i64]])]) -> Self {
        let degree = terms.first().map_or(0, |t| t.1.len());
        let mut e = Self::zero(dim, degree);
        for (c, gens) in terms {
            e.push_term(BigInt::from(*c), gens.iter().map(|g| ivec(g)).collect());
        }
        e
    }

    pub fn push_term(&mut self, coeff: BigInt, gens: Vec<Vec<BigInt>>) {
        debug_assert!(gens.len() == self.degree && gens.iter().all(|g| g.len() == self.dim));
        if !coeff.is_zero() {
            self.terms.push(CycleTerm { coeff, gens });
        }
    }

    pub fn plus(mut self, other: &CycleExpr) -> Self {
        for t in &other.terms {
            self.push_term(t.coeff.clone(), t.gens.clone());
        }
        self
    }

    pub fn neg(&self) -> Self {
        let mut e = self.clone();
        for t in &mut e.terms {
            t.coeff = -t.coeff.clone();
        }
        e
    }

    pub fn scaled(&self, f: &BigInt) -> Self {
        let mut e = Self::zero(self.dim, self.degree);
        for t in &self.terms {
            e.push_term(&t.coeff * f, t.gens.clone());
        }
        e
    }

    pub fn to_chain(&self) -> Result<Chain, ChainError> {
        let mut c = Chain::zero(self.dim, self.degree);
        for t in &self.terms {
            c.try_add_scaled(&parallelogram_cycle(&t.gens)?, &t.coeff)?;
        }
        Ok(c)
    }

    /// Sum of coeff * class(Q(gens)).
    pub fn class(&self) -> Result<HomologyClassVector<BigInt>, ChainError> {
        let mut acc = HomologyClassVector::zero(self.dim, self.degree);
        for t in &self.terms {
            acc.add_scaled(&parallelogram_class(&t.gens)?, &t.coeff);
        }
        Ok(acc)
    }

    /// Image under the linear map sending e_i to `images[i]`.
    pub fn push(&self, images: &[Vec<BigInt>], target_dim: usize) -> Self {
        let mut e = Self::zero(target_dim, self.degree);
        for t in &self.terms {
            e.push_term(t.coeff.clone(), t.gens.iter().map(|g| apply(images, target_dim, g)).collect());
        }
        e
    }

    /// Appends `v` as a last generator of every term.
    pub fn lift(&self, v: &[BigInt]) -> Self {
        let mut e = Self::zero(self.dim, self.degree + 1);
        for t in &self.terms {
            let mut g = t.gens.clone();
            g.push(v.to_vec());
            e.push_term(t.coeff.clone(), g);
        }
        e
    }

    /// Reorders generators: term gens `t` become `o` with `o[perm[i]] = t[i]`.
    pub fn unpermute(&self, perm: &[usize]) -> Self {
        let mut e = Self::zero(self.dim, self.degree);
        for t in &self.terms {
            let mut o = vec![Vec::new(); perm.len()];
            for (i, g) in t.gens.iter().enumerate() {
                o[perm[i]] = g.clone();
            }
            e.push_term(t.coeff.clone(), o);
        }
        e
    }
}

pub(crate) fn apply(images: &[Vec<BigInt>], target_dim: usize, g: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); target_dim];
    for (gi, img) in g.iter().zip(images) {
        if gi.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(img) {
            *o += gi * x;
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum MoveKind {
    Rearrange,
    Negate,
    Split,
    ZeroGen,
    Dehn,
    DoubleHalve,
    PrismLift,
    Slide,
    S1Base,
}

impl MoveKind {
    pub fn as_str(self) -> &'static str {
        match self {
            MoveKind::Rearrange => "REARRANGE",
            MoveKind::Negate => "NEGATE",
            MoveKind::Split => "SPLIT",
            MoveKind::ZeroGen => "ZERO_GEN",
            MoveKind::Dehn => "DEHN",
            MoveKind::DoubleHalve => "DOUBLE_HALVE",
            MoveKind::PrismLift => "PRISM_LIFT",
            MoveKind::Slide => "SLIDE",
            MoveKind::S1Base => "S1_BASE",
        }
    }
}

/// One move at full scale: a witness whose boundary is `target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MovePiece {
    pub kind: MoveKind,
    pub params: Vec<BigInt>,
    /// Number of prism lifts applied after the base pushforward.
    pub lifts: usize,
    pub target: CycleExpr,
    pub witness: Chain,
}

impl MovePiece {
    pub fn cost(&self) -> BigInt {
        self.witness.l1_norm()
    }

    pub fn push(&self, images: &[Vec<BigInt>], target_dim: usize) -> Self {
        let f = LinearTorusMap::from_images(target_dim, images).expect("image dimensions");
        Self {
            kind: self.kind,
            params: self.params.clone(),
            lifts: self.lifts,
            target: self.target.push(images, target_dim),
            witness: self.witness.pushforward(&f).expect("source dimension"),
        }
    }

    pub fn lift(&self, v: &[BigInt]) -> Self {
        Self {
            kind: self.kind,
            params: self.params.clone(),
            lifts: self.lifts + 1,
            target: self.target.lift(v),
            witness: self.witness.prism(v).expect("dimension"),
        }
    }

    pub fn scaled(&self, f: &BigInt) -> Self {
        Self {
            kind: self.kind,
            params: self.params.clone(),
            lifts: self.lifts,
            target: self.target.scaled(f),
            witness: self.witness.scaled(f),
        }
    }

    pub fn neg(&self) -> Self {
        self.scaled(&-BigInt::one())
    }

    pub fn record(&self) -> MoveRecord {
        MoveRecord {
            kind: self.kind,
            params: self.params.clone(),
            lifts: self.lifts,
            cost: self.cost(),
            class_delta: self.target.class().expect("consistent generators"),
        }
    }
}

/// Trace entry for one move.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoveRecord {
    pub kind: MoveKind,
    pub params: Vec<BigInt>,
    pub lifts: usize,
    pub cost: BigInt,
    /// Class of the cycle the move fills: created minus consumed parallelogram classes.
    pub class_delta: HomologyClassVector<BigInt>,
}

/// A list of moves; the sum of their witnesses fills the sum of their targets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fill {
    pub dim: usize,
    /// Degree of the filled cycles.
    pub degree: usize,
    pub pieces: Vec<MovePiece>,
}

impl Fill {
    pub fn empty(dim: usize, degree: usize) -> Self {
        Self {
            dim,
            degree,
            pieces: Vec::new(),
        }
    }

    pub fn single(p: MovePiece) -> Self {
        Self {
            dim: p.target.dim,
            degree: p.target.degree,
            pieces: vec![p],
        }
    }

    pub fn add_piece(&mut self, p: MovePiece) {
        debug_assert_eq!((p.target.dim, p.target.degree), (self.dim, self.degree));
        self.pieces.push(p);
    }

    pub fn extend(&mut self, other: Fill) {
        debug_assert_eq!((other.dim, other.degree), (self.dim, self.degree));
        self.pieces.extend(other.pieces);
    }

    pub fn neg(&self) -> Self {
        self.map_pieces(self.dim, self.degree, |p| p.neg())
    }

    pub fn scaled(&self, f: &BigInt) -> Self {
        self.map_pieces(self.dim, self.degree, |p| p.scaled(f))
    }

    pub fn push(&self, images: &[Vec<BigInt>], target_dim: usize) -> Self {
        self.map_pieces(target_dim, self.degree, |p| p.push(images, target_dim))
    }

    pub fn lift(&self, v: &[BigInt]) -> Self {
        self.map_pieces(self.dim, self.degree + 1, |p| p.lift(v))
    }

    /// Lifts by each vector in turn.
    pub fn lift_all(&self, vs: &[Vec<BigInt>]) -> Self {
        vs.iter().fold(self.clone(), |f, v| f.lift(v))
    }

    /// Reorders the target generators as in [`CycleExpr::unpermute`]; the witnesses pick up the
    /// permutation sign.
    pub fn unpermute(&self, perm: &[usize]) -> Self {
        let sign = BigInt::from(crate::chains::perm_sign(perm));
        self.map_pieces(self.dim, self.degree, |p| MovePiece {
            kind: p.kind,
            params: p.params.clone(),
            lifts: p.lifts,
            target: p.target.unpermute(perm),
            witness: p.witness.scaled(&sign),
        })
    }

    fn map_pieces(&self, dim: usize, degree: usize, f: impl Fn(&MovePiece) -> MovePiece) -> Self {
        Self {
            dim,
            degree,
            pieces: self.pieces.iter().map(f).collect(),
        }
    }

    pub fn target_expr(&self) -> CycleExpr {
        self.pieces
            .iter()
            .fold(CycleExpr::zero(self.dim, self.degree), |e, p| e.plus(&p.target))
    }

    pub fn witness(&self) -> Chain {
        let mut w = Chain::zero(self.dim, self.degree + 1);
        for p in &self.pieces {
            w.add_scaled(&p.witness, &BigInt::one());
        }
        w
    }

    pub fn move_cost_sum(&self) -> BigInt {
        self.pieces.iter().map(MovePiece::cost).sum()
    }

    pub fn records(&self) -> Vec<MoveRecord> {
        self.pieces.iter().map(MovePiece::record).collect()
    }

    /// Assembles the certificate; the target chain is computed from the move targets.
    pub fn certificate(&self) -> Result<FillingCertificate, ChainError> {
        Ok(FillingCertificate::new(self.target_expr().to_chain()?, self.witness()))
    }
}
