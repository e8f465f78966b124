//! Fraction-free (Bareiss) elimination over the integers.
//!
//! Used to decide Q-linear (in)dependence of finite lists of polynomials and
//! to extract integer dependence relations.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::algebra::{AlgebraElement, Monomial, Rational};

/// Row echelon form produced by [`echelon`].
#[derive(Clone, Debug)]
pub struct Echelon {
    pub rows: Vec<Vec<BigInt>>,
    /// Column index of the pivot of each nonzero row, increasing.
    pub pivots: Vec<usize>,
    pub ncols: usize,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn free_columns(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.ncols).filter(move |c| self.pivots.binary_search(c).is_err())
    }

    /// The kernel vector with a one in `free`, zeros in every other free
    /// column, scaled to coprime integers with a positive entry at `free`.
    pub fn kernel_vector(&self, free: usize) -> Vec<BigInt> {
        debug_assert!(self.pivots.binary_search(&free).is_err());
        let mut x = vec![Rational::zero(); self.ncols];
        x[free] = Rational::one();
        for (t, &p) in self.pivots.iter().enumerate().rev() {
            let row = &self.rows[t];
            let mut acc = Rational::zero();
            for j in p + 1..self.ncols {
                if !row[j].is_zero() && !x[j].is_zero() {
                    acc += Rational::from_integer(row[j].clone()) * &x[j];
                }
            }
            x[p] = -acc / Rational::from_integer(row[p].clone());
        }
        clear_denominators(&x)
    }
}

/// Coprime integer vector proportional to `x` (sign preserved).
pub fn clear_denominators(x: &[Rational]) -> Vec<BigInt> {
    let lcm = x
        .iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let ints: Vec<BigInt> = x.iter().map(|v| v.numer() * (&lcm / v.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    if g.is_zero() || g.is_one() {
        ints
    } else {
        ints.into_iter().map(|v| v / &g).collect()
    }
}

/// Fraction-free row echelon form of an integer matrix. Every intermediate
/// entry is a minor of the input, so all divisions are exact.
pub fn echelon(mut a: Vec<Vec<BigInt>>, ncols: usize) -> Echelon {
    let m = a.len();
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m {
            break;
        }
        let Some(p) = (r..m).find(|&p| !a[p][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let (top, rest) = a.split_at_mut(r + 1);
        let pivot_row = &top[r];
        let pivot = &pivot_row[c];
        for row in rest.iter_mut() {
            let factor = std::mem::take(&mut row[c]);
            for j in c + 1..ncols {
                let v = pivot * &row[j] - &factor * &pivot_row[j];
                row[j] = if prev.is_one() { v } else { v / &prev };
            }
        }
        prev = pivot.clone();
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    Echelon { rows: a, pivots, ncols }
}

/// Result of testing a list of polynomials for Q-linear independence.
#[derive(Clone, Debug)]
pub struct Dependence {
    pub rank: usize,
    /// First relation `sum_r c_r v_r = 0` in the given order, if any.
    pub relation: Option<Vec<BigInt>>,
}

/// Rank of `vectors` over Q and, when they are dependent, the integer relation
/// expressing the first vector that lies in the span of its predecessors.
pub fn linear_dependence(vectors: &[AlgebraElement]) -> Dependence {
    let (ech, scales) = column_echelon(vectors);
    let rank = ech.rank();
    let relation = ech.free_columns().next().map(|free| {
        let x = ech.kernel_vector(free);
        // Undo the per-vector denominator clearing.
        let unscaled: Vec<Rational> = x
            .into_iter()
            .zip(&scales)
            .map(|(v, s)| Rational::from_integer(v * s))
            .collect();
        clear_denominators(&unscaled)
    });
    Dependence { rank, relation }
}

/// Echelon form of the matrix whose columns are the coefficient vectors of
/// `vectors` (each scaled to integer coefficients), plus the scale factors.
fn column_echelon(vectors: &[AlgebraElement]) -> (Echelon, Vec<BigInt>) {
    let monomials: BTreeSet<&Monomial> = vectors.iter().flat_map(|v| v.monomials()).collect();
    let index: std::collections::HashMap<&Monomial, usize> =
        monomials.iter().enumerate().map(|(i, m)| (*m, i)).collect();
    let n = vectors.len();
    let mut a = vec![vec![BigInt::zero(); n]; monomials.len()];
    let mut scales = Vec::with_capacity(n);
    for (col, v) in vectors.iter().enumerate() {
        let lcm = v.terms().values().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        for (m, c) in v.terms() {
            a[index[m]][col] = c.numer() * (&lcm / c.denom());
        }
        scales.push(lcm);
    }
    (echelon(a, n), scales)
}

/// Solves `target = sum_r x_r basis_r` for the unique rational coefficients,
/// provided `basis` is linearly independent. Returns `None` if `target` lies
/// outside the span.
pub fn coordinates(basis: &[AlgebraElement], target: &AlgebraElement) -> Option<Vec<Rational>> {
    let mut all = basis.to_vec();
    all.push(target.clone());
    let (ech, scales) = column_echelon(&all);
    let n = basis.len();
    if ech.rank() != n || ech.pivots.last() == Some(&n) {
        return None;
    }
    // Column n is free: kernel vector x with x_n = 1 gives target = -sum x_r v_r.
    let x = ech.kernel_vector(n);
    let xn = Rational::from_integer(x[n].clone() * &scales[n]);
    Some(
        (0..n)
            .map(|r| -Rational::from_integer(x[r].clone() * &scales[r]) / &xn)
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect()
    }

    #[test]
    fn bareiss_rank() {
        let a = ints(&[&[2, 4, 6], &[1, 2, 3], &[0, 1, 1]]);
        let e = echelon(a, 3);
        assert_eq!(e.rank(), 2);
        assert_eq!(e.pivots, vec![0, 1]);
        let k = e.kernel_vector(2);
        // 2x + 4y + 6z = 0, y + z = 0 -> (-1, -1, 1)
        assert_eq!(k, vec![BigInt::from(-1), BigInt::from(-1), BigInt::from(1)]);

        let full = echelon(ints(&[&[3, 1], &[1, 2]]), 2);
        assert_eq!(full.rank(), 2);
        assert_eq!(full.free_columns().count(), 0);
    }

    #[test]
    fn skipped_column_elimination_stays_exact() {
        let a = ints(&[&[0, 2, 1, 5], &[0, 4, 3, 7], &[0, 6, 4, 12], &[1, 1, 1, 1]]);
        let e = echelon(a, 4);
        assert_eq!(e.rank(), 3);
    }

    #[test]
    fn polynomial_dependence() {
        let g = AlgebraElement::generator(1, 0);
        let one = AlgebraElement::one(1);
        let v = vec![one.clone(), g.clone(), g.scale_integer(2)];
        let dep = linear_dependence(&v);
        assert_eq!(dep.rank, 2);
        let rel = dep.relation.unwrap();
        assert_eq!(rel, vec![BigInt::from(0), BigInt::from(-2), BigInt::from(1)]);

        let half = Rational::new(1.into(), 2.into());
        let v = vec![g.scale(&half), g.scale(&Rational::new(1.into(), 3.into()))];
        let rel = linear_dependence(&v).relation.unwrap();
        // 2*(g/2) - 3*(g/3) = 0
        assert_eq!(rel, vec![BigInt::from(-2), BigInt::from(3)]);

        let indep = linear_dependence(&[one.clone(), g.clone()]);
        assert_eq!(indep.rank, 2);
        assert!(indep.relation.is_none());
    }

    #[test]
    fn coordinates_in_independent_basis() {
        let g = AlgebraElement::generator(2, 0);
        let s = AlgebraElement::generator(2, 1);
        let basis = vec![g.clone(), &g + &s];
        let target = &g.scale_integer(3) + &s.scale(&Rational::new(1.into(), 2.into()));
        let x = coordinates(&basis, &target).unwrap();
        assert_eq!(x, vec![Rational::new(5.into(), 2.into()), Rational::new(1.into(), 2.into())]);
        assert!(coordinates(std::slice::from_ref(&g), &s).is_none());
    }
}
