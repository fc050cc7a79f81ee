//! Characteristic covectors in dual coordinates `ξ_i = <K, [v_i]>`, the
//! basic box, `2PD(v)` moves, squares and gradings.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::graded_module::Grading;
use crate::linalg;
use crate::plumbing_graph::{IntersectionForm, PlumbingGraph};

pub const DEFAULT_BOX_CAP: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CharVector(pub Vec<i64>);

impl CharVector {
    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }
}

impl From<Vec<i64>> for CharVector {
    fn from(v: Vec<i64>) -> Self {
        Self(v)
    }
}

impl fmt::Display for CharVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(i64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Graph, form and the cached exact inverse used by every lattice query.
#[derive(Debug, Clone)]
pub struct LatticeContext {
    graph: PlumbingGraph,
    form: IntersectionForm,
    weights: Vec<i64>,
    inverse: Option<Vec<Vec<BigRational>>>,
    negative_definite: bool,
    pub box_cap: usize,
}

fn to_grading(x: &BigRational) -> Result<Grading> {
    let n = x.numer().to_i64().ok_or(Error::Overflow)?;
    let d = x.denom().to_i64().ok_or(Error::Overflow)?;
    Ok(Grading::new(n, d))
}

impl LatticeContext {
    pub fn new(graph: PlumbingGraph) -> Self {
        let form = graph.intersection_form();
        let inverse = if form.det.is_zero() { None } else { linalg::inverse(&form.matrix) };
        let negative_definite = form.is_negative_definite();
        Self { weights: graph.weights(), graph, form, inverse, negative_definite, box_cap: DEFAULT_BOX_CAP }
    }

    pub fn graph(&self) -> &PlumbingGraph {
        &self.graph
    }

    pub fn form(&self) -> &IntersectionForm {
        &self.form
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub(crate) fn check_len(&self, xi: &[i64]) -> Result<()> {
        if xi.len() != self.len() {
            return Err(Error::LengthMismatch { expected: self.len(), got: xi.len() });
        }
        Ok(())
    }

    pub fn is_characteristic(&self, xi: &[i64]) -> Result<bool> {
        self.check_len(xi)?;
        Ok(xi.iter().zip(&self.weights).all(|(x, m)| (x - m).rem_euclid(2) == 0))
    }

    /// Number of vectors in the basic box, `Π |m(v_i)|`.
    pub fn box_size(&self) -> u128 {
        self.weights.iter().map(|m| m.unsigned_abs() as u128).product()
    }

    /// All characteristic `ξ` with `m_i + 2 <= ξ_i <= -m_i`, lexicographic.
    pub fn basic_box(&self) -> Result<Vec<CharVector>> {
        if !self.negative_definite {
            return Err(Error::NotNegativeDefinite);
        }
        let size = self.box_size();
        if size > self.box_cap as u128 {
            return Err(Error::BoxTooLarge { size, cap: self.box_cap });
        }
        let lows: Vec<i64> = self.weights.iter().map(|m| m + 2).collect();
        let mut out = Vec::with_capacity(size as usize);
        let mut current = lows.clone();
        loop {
            out.push(CharVector(current.clone()));
            // odometer, last coordinate fastest
            let mut i = self.len();
            loop {
                if i == 0 {
                    return Ok(out);
                }
                i -= 1;
                if current[i] + 2 <= -self.weights[i] {
                    current[i] += 2;
                    break;
                }
                current[i] = lows[i];
            }
        }
    }

    /// In-place `ξ += sign * 2 Q e_i`.
    pub(crate) fn apply_move(&self, xi: &mut [i64], i: usize, sign: i64) {
        xi[i] += sign * 2 * self.weights[i];
        for j in self.graph.neighbors(i) {
            xi[j] += sign * 2;
        }
    }

    pub fn add_2pd(&self, xi: &[i64], i: usize) -> Result<CharVector> {
        self.check_len(xi)?;
        if i >= self.len() {
            return Err(Error::BadIndex(i));
        }
        let mut out = xi.to_vec();
        self.apply_move(&mut out, i, 1);
        Ok(CharVector(out))
    }

    pub fn subtract_2pd(&self, xi: &[i64], i: usize) -> Result<CharVector> {
        self.check_len(xi)?;
        if i >= self.len() {
            return Err(Error::BadIndex(i));
        }
        let mut out = xi.to_vec();
        self.apply_move(&mut out, i, -1);
        Ok(CharVector(out))
    }

    /// The unique `x` with `Q x = ξ`.
    pub fn dual_to_primal(&self, xi: &[i64]) -> Result<Vec<BigRational>> {
        self.check_len(xi)?;
        let inv = self.inverse.as_ref().ok_or(Error::Singular)?;
        Ok(inv
            .iter()
            .map(|row| row.iter().zip(xi).map(|(a, &b)| a * BigRational::from_integer(BigInt::from(b))).sum())
            .collect())
    }

    /// `K·K = ξᵀ Q⁻¹ ξ`.
    pub fn square(&self, xi: &[i64]) -> Result<Grading> {
        let x = self.dual_to_primal(xi)?;
        let s: BigRational = x.iter().zip(xi).map(|(a, &b)| a * BigRational::from_integer(BigInt::from(b))).sum();
        to_grading(&s)
    }

    /// `(K·K + |G|) / 4`.
    pub fn level_zero_offset(&self, xi: &[i64]) -> Result<Grading> {
        Ok((self.square(xi)? + Grading::from_integer(self.len() as i64)) / 4)
    }

    /// Grading of the generator detected by `U^m ⊗ K`: `2m - (K·K + |G|)/4`.
    pub fn hf_grading(&self, xi: &[i64], level: u32) -> Result<Grading> {
        Ok(Grading::from_integer(2 * i64::from(level)) - self.level_zero_offset(xi)?)
    }
}
