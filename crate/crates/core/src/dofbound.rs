//! Lower bounds on the degrees of freedom from self-similar inputs.
//!
//! Every transmitter draws its letter uniformly from
//! `W_N = { sum_l a_l f_l(h) : a_l in 1..=N }`, where `f_l` runs over the
//! monomials of degree at most `d` in the off-diagonal gains. With contraction
//! `r_N = |W_N|^-2` the dimension of each received signal is
//! `min{H / log2(1/r_N), 1}`, where `H` is the entropy of the corresponding
//! weighted sum of letters. Those entropies are computed exactly.

use std::collections::HashSet;
use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraElement, Rational, DEFAULT_ENUMERATION_CAP};
use crate::channel::ChannelMatrix;
use crate::condition::{check_all, offdiagonal_monomials, phi};
use crate::error::{Error, Result};
use crate::linalg::{coordinates, linear_dependence};
use crate::sumset::{independent_sum, sum_is_injective, FactoredLaw, SumsetDistribution, Variable};

/// Input alphabet together with its contraction ratio.
#[derive(Clone, Debug)]
pub struct InputConstruction {
    /// `None` for alphabets that are not built from monomials.
    pub degree: Option<u32>,
    /// Monomial values `f_1(h), ..., f_phi(h)`.
    pub basis: Vec<AlgebraElement>,
    /// Coefficients range over `coefficient_min..=coefficient_max`.
    pub coefficient_min: i64,
    pub coefficient_max: i64,
    pub cardinality: BigUint,
    /// Every element has exactly one coefficient vector.
    pub unique_representation: bool,
    pub r_n: Rational,
    elements: Option<Vec<AlgebraElement>>,
}

impl InputConstruction {
    /// Number of coefficient values `N`.
    pub fn range(&self) -> u64 {
        (self.coefficient_max - self.coefficient_min + 1) as u64
    }

    pub fn phi(&self) -> usize {
        self.basis.len()
    }

    pub fn nvars(&self) -> usize {
        self.basis[0].nvars()
    }

    /// The elements of the alphabet in ascending order, when they were
    /// enumerated.
    pub fn elements(&self) -> Option<&[AlgebraElement]> {
        self.elements.as_deref()
    }

    /// `log2 |W|`.
    pub fn log2_cardinality(&self) -> f64 {
        if self.unique_representation {
            self.phi() as f64 * (self.range() as f64).log2()
        } else {
            log2_biguint(&self.cardinality)
        }
    }

    /// Independent summands whose sum is `gain * W` for `W` uniform on the
    /// alphabet.
    fn scaled_letter(&self, gain: &AlgebraElement) -> Result<Vec<Variable>> {
        let nvars = self.nvars();
        if self.unique_representation {
            // Coefficients are independent uniforms.
            self.basis
                .iter()
                .map(|f| {
                    let g = gain.try_mul(f)?;
                    SumsetDistribution::uniform(
                        nvars,
                        (self.coefficient_min..=self.coefficient_max).map(|a| g.scale_integer(a)),
                    )
                })
                .collect()
        } else {
            let elements = self.elements.as_ref().ok_or_else(|| {
                Error::InvalidArgument("alphabet without unique representation was not enumerated".into())
            })?;
            let values = elements.iter().map(|w| gain.try_mul(w)).collect::<Result<Vec<_>>>()?;
            Ok(vec![SumsetDistribution::uniform(nvars, values)?])
        }
    }
}

/// Builds `W_N` for degree `d`.
///
/// When the monomial values are independent over Q the coefficient map is
/// injective and the alphabet is only enumerated if it has at most `cap`
/// elements. Otherwise it is enumerated with deduplication, which fails once
/// `N^phi` exceeds `cap`.
pub fn build_w_n(h: &ChannelMatrix, degree: u32, range: u64, cap: usize) -> Result<InputConstruction> {
    if range == 0 {
        return Err(Error::InvalidArgument("the coefficient range N must be at least 1".into()));
    }
    let n_phi = phi(h.k(), degree, cap)?;
    let basis = offdiagonal_monomials(h, degree, cap)?;
    let independent = linear_dependence(&basis).relation.is_none();
    let tuples = BigUint::from(range).pow(n_phi as u32);
    let max = i64::try_from(range).map_err(|_| Error::Overflow("coefficient range"))?;
    let fits = tuples <= BigUint::from(cap);
    if !independent && !fits {
        return Err(Error::cap(
            "coefficient tuples N^phi(d)",
            tuples,
            cap,
            "lower N or d, or raise the enumeration cap",
        ));
    }
    let elements = if fits {
        Some(enumerate_alphabet(&basis, 1, max, cap)?)
    } else {
        None
    };
    let cardinality = match &elements {
        Some(e) => BigUint::from(e.len()),
        None => tuples.clone(),
    };
    let unique_representation = cardinality == tuples;
    debug_assert!(!independent || unique_representation);
    let r_n = Rational::new(BigInt::one(), BigInt::from(cardinality.pow(2)));
    Ok(InputConstruction {
        degree: Some(degree),
        basis,
        coefficient_min: 1,
        coefficient_max: max,
        cardinality,
        unique_representation,
        r_n,
        elements,
    })
}

/// All values `sum_l a_l basis_l`, `a_l in lo..=hi`, sorted and deduplicated.
fn enumerate_alphabet(basis: &[AlgebraElement], lo: i64, hi: i64, cap: usize) -> Result<Vec<AlgebraElement>> {
    let nvars = basis[0].nvars();
    let mut acc: Vec<AlgebraElement> = vec![AlgebraElement::zero(nvars)];
    for f in basis {
        let mut next = HashSet::with_capacity(acc.len() * (hi - lo + 1) as usize);
        for a in lo..=hi {
            let step = f.scale_integer(a);
            for x in &acc {
                let mut s = x.clone();
                s.add_assign_unchecked(&step);
                next.insert(s);
            }
        }
        if next.len() > cap {
            return Err(Error::cap("alphabet", next.len(), cap, "lower N or d"));
        }
        acc = next.into_iter().collect();
    }
    acc.sort();
    Ok(acc)
}

fn summands(h: &ChannelMatrix, receiver: usize, include_diagonal: bool, w: &InputConstruction) -> Result<Vec<Variable>> {
    check_receiver(h, receiver)?;
    let mut vars = Vec::new();
    for j in 0..h.k() {
        if j != receiver || include_diagonal {
            vars.extend(w.scaled_letter(h.entry(receiver, j))?);
        }
    }
    Ok(vars)
}

/// Law of `sum_j h_ij W_j` at receiver `i` (0-based) for independent uniform
/// letters, kept in factored form.
pub fn signal_law(
    h: &ChannelMatrix,
    receiver: usize,
    include_diagonal: bool,
    w: &InputConstruction,
    cap: usize,
) -> Result<FactoredLaw> {
    independent_sum(h.nvars(), &summands(h, receiver, include_diagonal, w)?, cap)
}

/// The same law with its support expanded.
pub fn sumset_distribution(
    h: &ChannelMatrix,
    receiver: usize,
    include_diagonal: bool,
    w: &InputConstruction,
    cap: usize,
) -> Result<SumsetDistribution> {
    signal_law(h, receiver, include_diagonal, w, cap)?.materialize(cap)
}

/// Whether the desired signal `h_ii W_i` and the interference can be
/// recovered from their sum.
pub fn separability_check(h: &ChannelMatrix, receiver: usize, w: &InputConstruction, cap: usize) -> Result<bool> {
    check_receiver(h, receiver)?;
    let desired = w.scaled_letter(h.entry(receiver, receiver))?;
    let interference = summands(h, receiver, false, w)?;
    sum_is_injective(&desired, &interference, cap)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReceiverTerms {
    /// 0-based.
    pub receiver: usize,
    pub h_full: f64,
    pub h_diag: f64,
    pub h_interf: f64,
    pub term_full: f64,
    pub term_interf: f64,
    pub separable: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DofReport {
    #[serde(rename = "K")]
    pub k: usize,
    pub degree: Option<u32>,
    pub range: u64,
    pub phi: usize,
    #[serde(with = "crate::serde_util::biguint")]
    pub cardinality: BigUint,
    pub unique_representation: bool,
    #[serde(with = "crate::serde_util::rational")]
    pub r_n: Rational,
    /// `log2(1 / r_N)`.
    pub log2_inv_r: f64,
    pub receivers: Vec<ReceiverTerms>,
    pub total: f64,
    /// `phi(d+1) log2((K-1)N) / (2 phi(d) log2 N)`; absent for `N = 1`.
    pub ratio_bound: Option<f64>,
    /// Closed-form bound of the integer off-diagonal family.
    pub closed_form: Option<f64>,
    pub condition_waived: bool,
}

#[derive(Clone, Copy, Debug)]
pub struct BoundOptions {
    /// Skip the independence check at degree `d + 1`.
    pub waive_condition: bool,
    /// Cap on enumerated alphabets and on sumset supports.
    pub cap: usize,
}

impl Default for BoundOptions {
    fn default() -> Self {
        BoundOptions {
            waive_condition: false,
            cap: DEFAULT_ENUMERATION_CAP,
        }
    }
}

fn dimension_term(entropy: f64, log2_inv_r: f64) -> f64 {
    if log2_inv_r == 0.0 {
        0.0
    } else {
        (entropy / log2_inv_r).min(1.0)
    }
}

fn receiver_terms(
    h: &ChannelMatrix,
    receiver: usize,
    w: &InputConstruction,
    log2_inv_r: f64,
    cap: usize,
) -> Result<ReceiverTerms> {
    let full = signal_law(h, receiver, true, w, cap)?.entropy_bits();
    let interf = signal_law(h, receiver, false, w, cap)?.entropy_bits();
    let desired = w.scaled_letter(h.entry(receiver, receiver))?;
    let diag = independent_sum(h.nvars(), &desired, cap)?.entropy_bits();
    Ok(ReceiverTerms {
        receiver,
        h_full: full,
        h_diag: diag,
        h_interf: interf,
        term_full: dimension_term(full, log2_inv_r),
        term_interf: dimension_term(interf, log2_inv_r),
        separable: separability_check(h, receiver, w, cap)?,
    })
}

fn assemble(
    h: &ChannelMatrix,
    w: &InputConstruction,
    r: Rational,
    log2_inv_r: f64,
    cap: usize,
) -> Result<(Vec<ReceiverTerms>, f64, Rational)> {
    let receivers = (0..h.k())
        .into_par_iter()
        .map(|i| receiver_terms(h, i, w, log2_inv_r, cap))
        .collect::<Result<Vec<_>>>()?;
    let total = crate::info::stable_sum(receivers.iter().map(|t| t.term_full - t.term_interf));
    Ok((receivers, total.clamp(0.0, h.k() as f64), r))
}

/// `phi(d+1) log2((K-1)N) / (2 phi(d) log2 N)`.
pub fn ratio_bound(k: usize, degree: u32, range: u64) -> Option<f64> {
    if range < 2 {
        return None;
    }
    let pk = |d: u32| crate::algebra::monomial_count(k * (k - 1), d).to_f64().unwrap_or(f64::INFINITY);
    let n = range as f64;
    Some(pk(degree + 1) * (((k - 1) as f64) * n).log2() / (2.0 * pk(degree) * n.log2()))
}

/// `phi(d+1) / phi(d) = (K(K-1) + d + 1) / (d + 1)`.
pub fn ratio_limit(k: usize, degree: u32) -> f64 {
    (k * (k - 1)) as f64 / (degree as f64 + 1.0) + 1.0
}

/// Evaluates the lower bound for alphabet degree `d` and coefficient range
/// `N`. Unless waived, the channel must pass the independence check at degree
/// `d + 1`; a failure is returned with its certificate.
pub fn dof_lower_bound(h: &ChannelMatrix, degree: u32, range: u64, options: &BoundOptions) -> Result<DofReport> {
    if !options.waive_condition {
        let report = check_all(h, degree + 1)?;
        if let Some(cert) = report.first_failure() {
            return Err(Error::ConditionViolated {
                receiver: cert.receiver,
                degree: degree + 1,
                certificate: Box::new(cert.clone()),
            });
        }
    }
    let w = build_w_n(h, degree, range, options.cap)?;
    let log2_inv_r = 2.0 * w.log2_cardinality();
    let (receivers, total, r_n) = assemble(h, &w, w.r_n.clone(), log2_inv_r, options.cap)?;
    Ok(DofReport {
        k: h.k(),
        degree: Some(degree),
        range,
        phi: w.phi(),
        cardinality: w.cardinality.clone(),
        unique_representation: w.unique_representation,
        r_n,
        log2_inv_r,
        receivers,
        total,
        ratio_bound: ratio_bound(h.k(), degree, range),
        closed_form: None,
        condition_waived: options.waive_condition,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Containment {
    pub contained: bool,
    /// Size of `{ sum_l a_l f_l : 0 <= a_l <= (K-1)N }` over the degree `d+1`
    /// monomials, when those are independent.
    #[serde(with = "crate::serde_util::biguint")]
    pub container_cardinality: BigUint,
    pub coefficient_max: u64,
    pub interference_entropy: f64,
    /// `phi(d+1) log2((K-1)N)`.
    pub entropy_bound: f64,
}

/// Checks that every interference value at receiver `i` is a combination of
/// the degree `d+1` monomials with coefficients in `0..=(K-1)N`.
///
/// Monomials that never occur in an interference term get coefficient zero,
/// so the range starts at zero.
pub fn containment_check(h: &ChannelMatrix, receiver: usize, degree: u32, range: u64, cap: usize) -> Result<Containment> {
    check_receiver(h, receiver)?;
    if !h.fully_connected() {
        return Err(Error::NotFullyConnected);
    }
    let w = build_w_n(h, degree, range, cap)?;
    let law = signal_law(h, receiver, false, &w, cap)?;
    let container = offdiagonal_monomials(h, degree + 1, cap)?;
    let top = (h.k() as u64 - 1) * range;
    let n_phi = container.len();
    let entropy_bound = n_phi as f64 * (top as f64).log2();
    let interference_entropy = law.entropy_bits();
    let independent = linear_dependence(&container).relation.is_none();
    let lo = Rational::zero();
    let hi = Rational::from_integer(BigInt::from(top));

    if independent {
        // Coordinates add across blocks, so the range of each coordinate over
        // the whole support is the sum of the per-block ranges.
        let mut low = vec![Rational::zero(); n_phi];
        let mut high = vec![Rational::zero(); n_phi];
        let mut integral = true;
        for block in &law.blocks {
            let mut bl: Option<Vec<Rational>> = None;
            let mut bh: Option<Vec<Rational>> = None;
            for point in block.points.keys() {
                let Some(c) = coordinates(&container, &block.decode(h.nvars(), point)) else {
                    return Ok(Containment {
                        contained: false,
                        container_cardinality: BigUint::from(top + 1).pow(n_phi as u32),
                        coefficient_max: top,
                        interference_entropy,
                        entropy_bound,
                    });
                };
                integral &= c.iter().all(|x| x.is_integer());
                bl = Some(match bl {
                    None => c.clone(),
                    Some(v) => v.into_iter().zip(&c).map(|(a, b)| a.min(b.clone())).collect(),
                });
                bh = Some(match bh {
                    None => c,
                    Some(v) => v.into_iter().zip(c).map(|(a, b)| a.max(b)).collect(),
                });
            }
            for t in 0..n_phi {
                low[t] += &bl.as_ref().unwrap()[t];
                high[t] += &bh.as_ref().unwrap()[t];
            }
        }
        if integral {
            return Ok(Containment {
                contained: low.iter().all(|x| *x >= lo) && high.iter().all(|x| *x <= hi),
                container_cardinality: BigUint::from(top + 1).pow(n_phi as u32),
                coefficient_max: top,
                interference_entropy,
                entropy_bound,
            });
        }
    }

    // Explicit membership test against the enumerated container.
    let size = BigUint::from(top + 1).pow(n_phi as u32);
    if size > BigUint::from(cap) {
        return Err(Error::cap("container", size, cap, "lower N or d"));
    }
    let members: HashSet<AlgebraElement> = enumerate_alphabet(&container, 0, top as i64, cap)?.into_iter().collect();
    let support = law.materialize(cap)?;
    let contained = support.support().all(|x| members.contains(x));
    Ok(Containment {
        contained,
        container_cardinality: BigUint::from(members.len()),
        coefficient_max: top,
        interference_entropy,
        entropy_bound,
    })
}

/// Bound for a channel with irrational diagonal gains and nonzero integer
/// off-diagonal gains, using letters uniform on `{0, ..., N-1}` and
/// contraction `(2 h_max K N)^-2`. Diagonal values of `offdiag` are ignored.
pub fn rational_example(offdiag: &[Vec<i64>], range: u64, cap: usize) -> Result<DofReport> {
    let k = offdiag.len();
    if k < 2 || offdiag.iter().any(|row| row.len() != k) {
        return Err(Error::InvalidChannel("off-diagonal gains must form a K x K matrix with K >= 2".into()));
    }
    if range == 0 {
        return Err(Error::InvalidArgument("the coefficient range N must be at least 1".into()));
    }
    let mut hmax = 0u64;
    for (i, row) in offdiag.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            if i != j {
                if v == 0 {
                    return Err(Error::InvalidChannel(format!("off-diagonal gain ({i}, {j}) is zero")));
                }
                hmax = hmax.max(v.unsigned_abs());
            }
        }
    }
    let h = ChannelMatrix::integer_offdiagonal(offdiag)?;
    let top = i64::try_from(range).map_err(|_| Error::Overflow("coefficient range"))? - 1;
    let w = InputConstruction {
        degree: None,
        basis: vec![AlgebraElement::one(h.nvars())],
        coefficient_min: 0,
        coefficient_max: top,
        cardinality: BigUint::from(range),
        unique_representation: true,
        r_n: Rational::one(),
        elements: None,
    };
    let scale = BigUint::from(2u32) * hmax * k * range;
    let r = Rational::new(BigInt::one(), BigInt::from(scale.pow(2)));
    let log2_inv_r = 2.0 * log2_biguint(&scale);
    let (receivers, total, r_n) = assemble(&h, &w, r, log2_inv_r, cap)?;
    Ok(DofReport {
        k,
        degree: None,
        range,
        phi: 1,
        cardinality: BigUint::from(range),
        unique_representation: true,
        r_n,
        log2_inv_r,
        receivers,
        total,
        ratio_bound: None,
        closed_form: Some(rational_closed_form(k, hmax, range)),
        condition_waived: true,
    })
}

/// `K log2 N / (2 log2(2 h_max K N))`.
pub fn rational_closed_form(k: usize, hmax: u64, range: u64) -> f64 {
    let n = range as f64;
    k as f64 * n.log2() / (2.0 * (2.0 * hmax as f64 * k as f64 * n).log2())
}

/// `rational_example` with every off-diagonal gain equal to `hmax`.
pub fn rational_example_uniform(k: usize, hmax: i64, range: u64, cap: usize) -> Result<DofReport> {
    rational_example(&vec![vec![hmax; k]; k], range, cap)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SumsetCardinalities {
    /// `|S + S|`.
    pub common: usize,
    /// `|S + s S|` for a gain `s` unrelated to the generators of `S`.
    pub different: usize,
}

/// Sizes of the sumsets of the seven-point hexagonal set
/// `S = {0, ±g1, ±g2, ±(g1 + g2)}` with itself and with a copy scaled by a
/// fresh generator.
pub fn fig1_demo() -> SumsetCardinalities {
    let g1 = AlgebraElement::generator(3, 0);
    let g2 = AlgebraElement::generator(3, 1);
    let s = AlgebraElement::generator(3, 2);
    let g12 = &g1 + &g2;
    let mut set = vec![AlgebraElement::zero(3)];
    for v in [g1, g2, g12] {
        set.push(-&v);
        set.push(v);
    }
    let scaled: Vec<AlgebraElement> = set.iter().map(|x| &s * x).collect();
    let count = |a: &[AlgebraElement], b: &[AlgebraElement]| {
        a.iter()
            .flat_map(|x| b.iter().map(move |y| x + y))
            .collect::<HashSet<_>>()
            .len()
    };
    SumsetCardinalities {
        common: count(&set, &set),
        different: count(&set, &scaled),
    }
}

/// One cell of a convergence sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepCell {
    #[serde(rename = "K")]
    pub k: usize,
    pub degree: u32,
    pub range: u64,
    pub total: f64,
    pub ratio_bound: Option<f64>,
    #[serde(with = "crate::serde_util::biguint")]
    pub cardinality: BigUint,
    pub runtime_ms: u128,
}

/// Runs [`dof_lower_bound`] on every `(d, N)` pair, in row-major order.
pub fn sweep(h: &ChannelMatrix, degrees: &[u32], ranges: &[u64], options: &BoundOptions) -> Result<Vec<SweepCell>> {
    let cells: Vec<(u32, u64)> = degrees
        .iter()
        .flat_map(|&d| ranges.iter().map(move |&n| (d, n)))
        .collect();
    cells
        .into_par_iter()
        .map(|(d, n)| {
            let start = Instant::now();
            let report = dof_lower_bound(h, d, n, options)?;
            Ok(SweepCell {
                k: h.k(),
                degree: d,
                range: n,
                total: report.total,
                ratio_bound: report.ratio_bound,
                cardinality: report.cardinality,
                runtime_ms: start.elapsed().as_millis(),
            })
        })
        .collect()
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

fn log2_biguint(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        n.to_f64().unwrap().log2()
    } else {
        let shift = bits - 64;
        (n >> shift).to_f64().unwrap().log2() + shift as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::load_channel;
    use std::collections::HashMap;

    const CAP: usize = 1_000_000;

    fn rat(p: i64, q: i64) -> Rational {
        Rational::new(p.into(), q.into())
    }

    fn ones(k: usize) -> ChannelMatrix {
        ChannelMatrix::rational(&vec![vec![Rational::one(); k]; k]).unwrap()
    }

    /// Law of `sum_j h_ij W_j` by enumerating every tuple of letters.
    fn brute_force(h: &ChannelMatrix, i: usize, diag: bool, w: &[AlgebraElement]) -> HashMap<AlgebraElement, Rational> {
        let users: Vec<usize> = (0..h.k()).filter(|&j| diag || j != i).collect();
        let mut counts: HashMap<AlgebraElement, u64> = HashMap::new();
        let total = (w.len() as u64).pow(users.len() as u32);
        for mut idx in 0..total {
            let mut s = AlgebraElement::zero(h.nvars());
            for &j in &users {
                s = &s + &(h.entry(i, j) * &w[(idx % w.len() as u64) as usize]);
                idx /= w.len() as u64;
            }
            *counts.entry(s).or_default() += 1;
        }
        counts.into_iter().map(|(v, c)| (v, rat(c as i64, total as i64))).collect()
    }

    #[test]
    fn alphabet_at_degree_zero() {
        let h = ChannelMatrix::generic(3).unwrap();
        let w = build_w_n(&h, 0, 4, CAP).unwrap();
        let expected: Vec<_> = (1..=4).map(|a| AlgebraElement::integer(h.nvars(), a)).collect();
        assert_eq!(w.elements().unwrap(), expected.as_slice());
        assert_eq!(w.r_n, rat(1, 16));
        assert!(w.unique_representation);
    }

    #[test]
    fn generic_alphabet_is_unique() {
        let h = ChannelMatrix::generic(3).unwrap();
        let w = build_w_n(&h, 1, 2, CAP).unwrap();
        assert_eq!(w.cardinality, BigUint::from(128u32));
        assert!(w.unique_representation);
        assert_eq!(w.r_n, rat(1, 128 * 128));
    }

    #[test]
    fn shared_gain_alphabet() {
        // f = (1, g, 2g): a2 + 2 a3 takes 4 distinct values for N = 2 but
        // only 7 of 9 combinations for N = 3.
        let h = load_channel(r#"{"K": 2, "generators": ["a", "b", "g"], "entries": [["a", "g"], ["2*g", "b"]]}"#).unwrap();
        let w2 = build_w_n(&h, 1, 2, CAP).unwrap();
        assert_eq!(w2.cardinality, BigUint::from(8u32));
        assert!(w2.unique_representation);
        let w3 = build_w_n(&h, 1, 3, CAP).unwrap();
        assert_eq!(w3.cardinality, BigUint::from(21u32));
        assert!(!w3.unique_representation);
    }

    #[test]
    fn dependent_alphabet_over_cap_is_an_error() {
        let h = ones(3);
        assert!(matches!(build_w_n(&h, 2, 4, 1000), Err(Error::CapExceeded { .. })));
        assert!(build_w_n(&h, 0, 0, CAP).is_err());
    }

    #[test]
    fn sumset_examples() {
        let h = ChannelMatrix::generic(2).unwrap();
        let w = build_w_n(&h, 0, 5, CAP).unwrap();
        let d = sumset_distribution(&h, 0, false, &w, CAP).unwrap();
        assert_eq!(d.support_size(), 5);
        assert!((d.entropy_bits() - 5f64.log2()).abs() < 1e-12);

        let h3 = ChannelMatrix::generic(3).unwrap();
        let w = build_w_n(&h3, 0, 2, CAP).unwrap();
        let d = sumset_distribution(&h3, 0, false, &w, CAP).unwrap();
        assert_eq!(d.support_size(), 4);
        assert_eq!(d.entropy_bits(), 2.0);

        let h1 = ones(3);
        let w = build_w_n(&h1, 0, 2, CAP).unwrap();
        let d = sumset_distribution(&h1, 0, false, &w, CAP).unwrap();
        let probs = d.probabilities();
        let want: Vec<_> = [(2, rat(1, 4)), (3, rat(1, 2)), (4, rat(1, 4))]
            .into_iter()
            .map(|(v, p)| (AlgebraElement::integer(0, v), p))
            .collect();
        assert_eq!(probs, want);
        assert!((d.entropy_bits() - 1.5).abs() < 1e-12);
    }

    #[test]
    fn matches_tuple_enumeration() {
        let channels = [
            ChannelMatrix::generic(3).unwrap(),
            ones(3),
            load_channel(r#"{"K": 2, "generators": ["a", "b", "g"], "entries": [["a", "g"], ["2*g", "b"]]}"#).unwrap(),
            ChannelMatrix::integer_offdiagonal(&[vec![0, 2, -1], vec![1, 0, 3], vec![-2, 1, 0]]).unwrap(),
        ];
        for h in &channels {
            for (d, n) in [(0, 3), (1, 2)] {
                let w = build_w_n(h, d, n, CAP).unwrap();
                let letters = w.elements().unwrap();
                if (letters.len() as u64).pow(h.k() as u32) > 200_000 {
                    continue;
                }
                for i in 0..h.k() {
                    for diag in [false, true] {
                        let fast = sumset_distribution(h, i, diag, &w, CAP).unwrap();
                        let slow = brute_force(h, i, diag, letters);
                        assert_eq!(fast.support_size(), slow.len());
                        for (v, p) in &slow {
                            assert_eq!(&fast.probability(v), p);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn separability_examples() {
        let h = ChannelMatrix::generic(3).unwrap();
        let w = build_w_n(&h, 1, 2, CAP).unwrap();
        for i in 0..3 {
            assert!(separability_check(&h, i, &w, CAP).unwrap());
        }
        let r = ChannelMatrix::rational(&[vec![rat(1, 2), rat(3, 1)], vec![rat(2, 1), rat(5, 3)]]).unwrap();
        // a/2 + 3b collides once a takes seven values
        let w = build_w_n(&r, 0, 7, CAP).unwrap();
        assert!(!separability_check(&r, 0, &w, CAP).unwrap());
        let mixed = ChannelMatrix::integer_offdiagonal(&[vec![0, 1, 2], vec![1, 0, 1], vec![3, 1, 0]]).unwrap();
        let w = build_w_n(&mixed, 0, 5, CAP).unwrap();
        assert!((0..3).all(|i| separability_check(&mixed, i, &w, CAP).unwrap()));
    }

    #[test]
    fn separable_entropies_add() {
        let h = ChannelMatrix::generic(3).unwrap();
        let report = dof_lower_bound(&h, 1, 2, &BoundOptions::default()).unwrap();
        for t in &report.receivers {
            assert!(t.separable);
            assert!((t.h_full - t.h_diag - t.h_interf).abs() < 1e-12);
            assert_eq!(t.h_diag / report.log2_inv_r, 0.5);
        }
        let expected = report.receivers.iter().map(|t| t.term_full - t.term_interf).sum::<f64>();
        assert!((report.total - expected).abs() < 1e-12);
        let rb = report.ratio_bound.unwrap();
        assert_eq!(rb, 4.0);
        assert!(report.total <= 1.5 && report.total > 3.0 * (1.0 - rb));
    }

    #[test]
    fn degenerate_range_gives_zero() {
        let h = ChannelMatrix::generic(3).unwrap();
        let report = dof_lower_bound(&h, 0, 1, &BoundOptions::default()).unwrap();
        assert_eq!(report.total, 0.0);
        assert!(report.receivers.iter().all(|t| t.h_full == 0.0 && t.h_interf == 0.0));
        assert_eq!(report.ratio_bound, None);
    }

    #[test]
    fn bound_refuses_failing_channels() {
        let h = ones(3);
        match dof_lower_bound(&h, 1, 2, &BoundOptions::default()) {
            Err(Error::ConditionViolated { certificate, .. }) => assert!(certificate.verify(&h)),
            other => panic!("expected a violation, got {other:?}"),
        }
        let waived = BoundOptions {
            waive_condition: true,
            ..BoundOptions::default()
        };
        let report = dof_lower_bound(&h, 1, 2, &waived).unwrap();
        assert!(report.condition_waived);
        assert!(!report.unique_representation);
        assert!((0.0..=3.0).contains(&report.total));
    }

    #[test]
    fn ratio_limits() {
        assert_eq!(ratio_limit(3, 1), 4.0);
        assert!((ratio_limit(3, 100) - 107.0 / 101.0).abs() < 1e-15);
        for d in 0..50 {
            assert!(ratio_limit(3, d + 1) < ratio_limit(3, d));
            let exact = crate::algebra::monomial_count(6, d + 1).to_f64().unwrap()
                / crate::algebra::monomial_count(6, d).to_f64().unwrap();
            assert!((ratio_limit(3, d) - exact).abs() < 1e-12);
        }
    }

    #[test]
    fn containment_examples() {
        let h = ChannelMatrix::generic(3).unwrap();
        let c = containment_check(&h, 0, 0, 2, CAP).unwrap();
        assert!(c.contained);
        assert_eq!(c.interference_entropy, 2.0);
        assert!((c.entropy_bound - 14.0).abs() < 1e-12);
        let h2 = ChannelMatrix::generic(2).unwrap();
        for i in 0..2 {
            assert!(containment_check(&h2, i, 1, 2, CAP).unwrap().contained);
        }
        let sparse = load_channel(r#"{"K": 2, "generators": ["a", "b"], "entries": [["a", "0"], ["1", "b"]]}"#).unwrap();
        assert!(matches!(containment_check(&sparse, 0, 0, 2, CAP), Err(Error::NotFullyConnected)));
    }

    #[test]
    fn containment_by_enumeration() {
        // Dependent monomials force the explicit membership path.
        let h = ones(3);
        let c = containment_check(&h, 1, 0, 2, CAP).unwrap();
        assert!(c.contained);
        assert!(c.interference_entropy <= c.entropy_bound);
    }

    #[test]
    fn rational_family() {
        let report = rational_example_uniform(3, 1, 64, CAP).unwrap();
        let want = 3.0 * 6.0 / (2.0 * (2.0f64 * 3.0 * 64.0).log2());
        assert!((report.closed_form.unwrap() - want).abs() < 1e-12);
        assert_eq!(report.r_n, rat(1, 384 * 384));
        for t in &report.receivers {
            assert!(t.separable);
            assert!((t.h_diag - 6.0).abs() < 1e-12);
            assert!((t.h_full - t.h_diag - t.h_interf).abs() < 1e-12);
        }
        let h = ChannelMatrix::integer_offdiagonal(&vec![vec![1; 3]; 3]).unwrap();
        let w = InputConstruction {
            degree: None,
            basis: vec![AlgebraElement::one(h.nvars())],
            coefficient_min: 0,
            coefficient_max: 63,
            cardinality: BigUint::from(64u32),
            unique_representation: true,
            r_n: Rational::one(),
            elements: None,
        };
        let interf = sumset_distribution(&h, 0, false, &w, CAP).unwrap();
        let bound = Rational::from_integer(BigInt::from(2 * 64));
        assert!(interf.support().all(|v| v.as_constant().is_some_and(|c| num_traits::Signed::abs(&c) <= bound)));
        assert!(rational_example(&[vec![0, 0], vec![1, 0]], 4, CAP).is_err());
    }

    #[test]
    fn hexagon_sumsets() {
        let c = fig1_demo();
        assert_eq!((c.common, c.different), (19, 49));
    }

    #[test]
    fn sweep_is_row_major() {
        let h = ChannelMatrix::generic(3).unwrap();
        let cells = sweep(&h, &[0, 1], &[2, 3], &BoundOptions::default()).unwrap();
        let order: Vec<_> = cells.iter().map(|c| (c.degree, c.range)).collect();
        assert_eq!(order, vec![(0, 2), (0, 3), (1, 2), (1, 3)]);
    }
}
