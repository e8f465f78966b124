//! Exact test of the monomial independence condition on a channel matrix.
//!
//! For receiver `i` and degree cutoff `d` the condition asks that the values
//! `f_1(h), ..., f_phi(d)(h), h_ii f_1(h), ..., h_ii f_phi(d)(h)` be linearly
//! independent over Q, where `f_1, f_2, ...` are the monomials in the
//! `K(K-1)` off-diagonal gains `h` (graded-lex order, constant first) and
//! `phi(d) = C(K(K-1)+d, d)`. A failure is reported with an integer relation
//! that can be checked by substitution.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{enumerate_monomials_capped, monomial_count, AlgebraElement, Monomial};
use crate::channel::ChannelMatrix;
use crate::error::{Error, Result};
use crate::linalg::linear_dependence;

/// Upper bound on `2 phi(d)`, the number of candidate values per receiver.
pub const MAX_CANDIDATES: usize = 20_000;

/// Integers `a_j, b_j`, not all zero, with
/// `sum_j a_j f_j(h) + sum_j b_j h_ii f_j(h) = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    /// 0-based receiver index.
    pub receiver: usize,
    pub degree: u32,
    #[serde(with = "crate::serde_util::bigint_vec")]
    pub a: Vec<BigInt>,
    #[serde(with = "crate::serde_util::bigint_vec")]
    pub b: Vec<BigInt>,
}

impl Certificate {
    /// `sum a_j f_j(h) + sum b_j h_ii f_j(h)`, computed exactly.
    pub fn residual(&self, h: &ChannelMatrix) -> Result<AlgebraElement> {
        let values = monomial_values(h, self.degree, self.receiver)?;
        let coefficients = self.a.iter().chain(&self.b);
        if values.len() != self.a.len() + self.b.len() {
            return Err(Error::InvalidArgument("certificate length does not match phi(d)".into()));
        }
        let mut acc = AlgebraElement::zero(h.nvars());
        for (c, v) in coefficients.zip(&values) {
            if !c.is_zero() {
                acc.add_assign_unchecked(&v.scale(&crate::algebra::Rational::from_integer(c.clone())));
            }
        }
        Ok(acc)
    }

    /// True iff the certificate is nontrivial and substitutes to exact zero.
    pub fn verify(&self, h: &ChannelMatrix) -> bool {
        let nontrivial = self.a.iter().chain(&self.b).any(|c| !c.is_zero());
        nontrivial && self.residual(h).map(|r| r.is_zero()).unwrap_or(false)
    }
}

/// Outcome of the test for a single receiver.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    /// All `2 phi(d)` values are independent; `rank = 2 phi(d)`.
    Independent { up_to_degree: u32, rank: usize },
    Dependent { rank: usize, certificate: Certificate },
}

impl Verdict {
    pub fn is_independent(&self) -> bool {
        matches!(self, Verdict::Independent { .. })
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            Verdict::Dependent { certificate, .. } => Some(certificate),
            Verdict::Independent { .. } => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub degree: u32,
    pub phi: usize,
    /// One verdict per receiver, in receiver order.
    pub receivers: Vec<Verdict>,
}

impl ConditionReport {
    pub fn all_independent(&self) -> bool {
        self.receivers.iter().all(Verdict::is_independent)
    }

    pub fn first_failure(&self) -> Option<&Certificate> {
        self.receivers.iter().find_map(Verdict::certificate)
    }
}

/// `phi(d)` for a `K`-user channel, as a machine integer if it fits under `cap`.
pub fn phi(k: usize, degree: u32, cap: usize) -> Result<usize> {
    let count: BigUint = monomial_count(k * (k - 1), degree);
    match count.to_usize() {
        Some(c) if c <= cap => Ok(c),
        _ => Err(Error::cap("monomial list", count, cap, "lower the degree")),
    }
}

/// `f_1(h), ..., f_phi(d)(h)`: the monomials in the off-diagonal gains,
/// evaluated exactly.
pub fn offdiagonal_monomials(h: &ChannelMatrix, degree: u32, cap: usize) -> Result<Vec<AlgebraElement>> {
    let vars = h.off_diagonal();
    let monomials = enumerate_monomials_capped(vars.len(), degree, cap)?;
    let mut cache: HashMap<Monomial, AlgebraElement> = HashMap::with_capacity(monomials.len());
    let mut out = Vec::with_capacity(monomials.len());
    for m in monomials {
        let value = match m.support().next() {
            None => AlgebraElement::one(h.nvars()),
            Some(v) => {
                let mut lower = m.exponents().to_vec();
                lower[v] -= 1;
                let prev = &cache[&Monomial::from_exponents(lower)];
                prev * &vars.0[v]
            }
        };
        cache.insert(m, value.clone());
        out.push(value);
    }
    Ok(out)
}

/// `[f_1(h), ..., f_phi(d)(h), h_ii f_1(h), ..., h_ii f_phi(d)(h)]` for the
/// 0-based receiver `i`.
pub fn monomial_values(h: &ChannelMatrix, degree: u32, receiver: usize) -> Result<Vec<AlgebraElement>> {
    check_receiver(h, receiver)?;
    phi(h.k(), degree, MAX_CANDIDATES / 2)?;
    let f = offdiagonal_monomials(h, degree, MAX_CANDIDATES / 2)?;
    let hii = h.entry(receiver, receiver);
    let scaled: Vec<_> = f.iter().map(|v| hii * v).collect();
    Ok(f.into_iter().chain(scaled).collect())
}

/// Decides the condition for one receiver up to `degree`.
pub fn check_condition_star(h: &ChannelMatrix, degree: u32, receiver: usize) -> Result<Verdict> {
    let values = monomial_values(h, degree, receiver)?;
    let phi = values.len() / 2;
    let dep = linear_dependence(&values);
    Ok(match dep.relation {
        None => Verdict::Independent {
            up_to_degree: degree,
            rank: dep.rank,
        },
        Some(mut relation) => {
            let b = relation.split_off(phi);
            Verdict::Dependent {
                rank: dep.rank,
                certificate: Certificate {
                    receiver,
                    degree,
                    a: relation,
                    b,
                },
            }
        }
    })
}

/// Runs [`check_condition_star`] for every receiver.
pub fn check_all(h: &ChannelMatrix, degree: u32) -> Result<ConditionReport> {
    let phi = phi(h.k(), degree, MAX_CANDIDATES / 2)?;
    let receivers = (0..h.k())
        .into_par_iter()
        .map(|i| check_condition_star(h, degree, i))
        .collect::<Result<Vec<_>>>()?;
    Ok(ConditionReport {
        degree,
        phi,
        receivers,
    })
}

fn check_receiver(h: &ChannelMatrix, receiver: usize) -> Result<()> {
    if receiver < h.k() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "receiver index {receiver} out of range for K = {}",
            h.k()
        )))
    }
}
