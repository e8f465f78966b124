//! Exact laws of sums of independent finite random variables with values in
//! the polynomial algebra.
//!
//! A sum `sum_v X_v` is first split into blocks: two variables share a block
//! when their values involve a common monomial. Different blocks live in
//! coordinate subspaces spanned by disjoint sets of monomials, so the sum is
//! in bijection with the tuple of block sums and its entropy is the sum of the
//! block entropies. Inside a block the values are encoded as integer
//! coordinate vectors and convolved exactly.

use std::collections::{BTreeSet, HashMap};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use crate::algebra::{AlgebraElement, Monomial, Rational};
use crate::error::{Error, Result};
use crate::info::entropy_from_counts;

/// Exact finite law: `P(x) = weight(x) / total`.
#[derive(Clone, Debug, PartialEq)]
pub struct SumsetDistribution {
    nvars: usize,
    weights: HashMap<AlgebraElement, u128>,
    total: u128,
}

impl SumsetDistribution {
    pub fn point(value: AlgebraElement) -> Self {
        let nvars = value.nvars();
        SumsetDistribution {
            nvars,
            weights: HashMap::from([(value, 1)]),
            total: 1,
        }
    }

    /// Law given by positive integer weights; repeated values are merged.
    pub fn from_weights(nvars: usize, pairs: impl IntoIterator<Item = (AlgebraElement, u128)>) -> Result<Self> {
        let mut weights: HashMap<AlgebraElement, u128> = HashMap::new();
        let mut total = 0u128;
        for (v, w) in pairs {
            if v.nvars() != nvars {
                return Err(Error::GeneratorMismatch {
                    left: nvars,
                    right: v.nvars(),
                });
            }
            if w == 0 {
                continue;
            }
            total = total.checked_add(w).ok_or(Error::Overflow("adding weights"))?;
            *weights.entry(v).or_default() += w;
        }
        if total == 0 {
            return Err(Error::InvalidArgument("a distribution needs positive total weight".into()));
        }
        Ok(SumsetDistribution { nvars, weights, total })
    }

    /// Uniform law over a list of values (with multiplicity).
    pub fn uniform(nvars: usize, values: impl IntoIterator<Item = AlgebraElement>) -> Result<Self> {
        Self::from_weights(nvars, values.into_iter().map(|v| (v, 1)))
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn support_size(&self) -> usize {
        self.weights.len()
    }

    pub fn total(&self) -> u128 {
        self.total
    }

    pub fn weight(&self, value: &AlgebraElement) -> u128 {
        self.weights.get(value).copied().unwrap_or(0)
    }

    pub fn probability(&self, value: &AlgebraElement) -> Rational {
        Rational::new(BigInt::from(self.weight(value)), BigInt::from(self.total))
    }

    /// `(value, probability)` pairs in ascending value order.
    pub fn probabilities(&self) -> Vec<(AlgebraElement, Rational)> {
        let mut out: Vec<_> = self
            .weights
            .iter()
            .map(|(v, &w)| (v.clone(), Rational::new(BigInt::from(w), BigInt::from(self.total))))
            .collect();
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }

    pub fn support(&self) -> impl Iterator<Item = &AlgebraElement> {
        self.weights.keys()
    }

    pub fn weights(&self) -> impl Iterator<Item = (&AlgebraElement, u128)> {
        self.weights.iter().map(|(v, &w)| (v, w))
    }

    pub fn entropy_bits(&self) -> f64 {
        entropy_from_counts(self.weights.values().copied())
    }

    /// Law of `g X`.
    pub fn scaled(&self, gain: &AlgebraElement) -> Result<Self> {
        let mut pairs = Vec::with_capacity(self.weights.len());
        for (v, &w) in &self.weights {
            pairs.push((gain.try_mul(v)?, w));
        }
        Self::from_weights(self.nvars, pairs)
    }

    /// Law of `X + Y` for independent `X ~ self`, `Y ~ other`.
    pub fn convolve(&self, other: &Self, cap: usize) -> Result<Self> {
        if self.nvars != other.nvars {
            return Err(Error::GeneratorMismatch {
                left: self.nvars,
                right: other.nvars,
            });
        }
        let total = self
            .total
            .checked_mul(other.total)
            .ok_or(Error::Overflow("multiplying weights"))?;
        let mut weights: HashMap<AlgebraElement, u128> = HashMap::new();
        for (a, &wa) in &self.weights {
            for (b, &wb) in &other.weights {
                let mut s = a.clone();
                s.add_assign_unchecked(b);
                *weights.entry(s).or_default() += wa * wb;
                if weights.len() > cap {
                    return Err(Error::cap(
                        "sumset support",
                        format!("more than {cap}"),
                        cap,
                        "use a smaller range or degree",
                    ));
                }
            }
        }
        Ok(SumsetDistribution {
            nvars: self.nvars,
            weights,
            total,
        })
    }
}

/// One independent summand, given by its finite law.
pub type Variable = SumsetDistribution;

/// Law of a block of variables in integer coordinates: a point `c` stands
/// for `sum_t c_t / denominator * basis_t`.
#[derive(Clone, Debug)]
pub struct BlockLaw {
    pub basis: Vec<Monomial>,
    pub denominator: BigInt,
    pub points: HashMap<Vec<i64>, u128>,
    pub total: u128,
}

impl BlockLaw {
    pub fn entropy_bits(&self) -> f64 {
        entropy_from_counts(self.points.values().copied())
    }

    pub fn support_size(&self) -> usize {
        self.points.len()
    }

    pub fn decode(&self, nvars: usize, point: &[i64]) -> AlgebraElement {
        AlgebraElement::from_terms(
            nvars,
            self.basis.iter().zip(point).map(|(m, &c)| {
                (
                    m.clone(),
                    Rational::new(BigInt::from(c), self.denominator.clone()),
                )
            }),
        )
        .expect("basis monomials share the generator count")
    }

    pub fn to_distribution(&self, nvars: usize) -> Result<SumsetDistribution> {
        SumsetDistribution::from_weights(nvars, self.points.iter().map(|(p, &w)| (self.decode(nvars, p), w)))
    }
}

/// Law of a sum of independent variables, kept as a product of blocks.
#[derive(Clone, Debug)]
pub struct FactoredLaw {
    nvars: usize,
    pub blocks: Vec<BlockLaw>,
}

impl FactoredLaw {
    pub fn entropy_bits(&self) -> f64 {
        // Sorted for a schedule-independent result.
        let mut hs: Vec<f64> = self.blocks.iter().map(BlockLaw::entropy_bits).collect();
        hs.sort_by(f64::total_cmp);
        crate::info::stable_sum(hs)
    }

    pub fn support_size(&self) -> BigUint {
        self.blocks
            .iter()
            .map(|b| BigUint::from(b.support_size()))
            .product()
    }

    /// Expands the product of blocks into a single distribution.
    pub fn materialize(&self, cap: usize) -> Result<SumsetDistribution> {
        let size = self.support_size();
        if size > BigUint::from(cap) {
            return Err(Error::cap("sumset support", size, cap, "use a smaller range or degree"));
        }
        let mut acc = SumsetDistribution::point(AlgebraElement::zero(self.nvars));
        for b in &self.blocks {
            acc = acc.convolve(&b.to_distribution(self.nvars)?, cap)?;
        }
        Ok(acc)
    }
}

/// Groups variables whose values share a monomial (connected components).
pub fn blocks(vars: &[&Variable]) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..vars.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut owner: HashMap<&Monomial, usize> = HashMap::new();
    for (i, v) in vars.iter().enumerate() {
        for value in v.support() {
            for m in value.monomials() {
                match owner.get(m) {
                    Some(&j) => {
                        let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                        if a != b {
                            parent[a.max(b)] = a.min(b);
                        }
                    }
                    None => {
                        owner.insert(m, i);
                    }
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot: HashMap<usize, usize> = HashMap::new();
    for i in 0..vars.len() {
        let root = find(&mut parent, i);
        let g = *slot.entry(root).or_insert_with(|| {
            groups.push(Vec::new());
            groups.len() - 1
        });
        groups[g].push(i);
    }
    groups
}

/// Integer coordinates of every value of every variable over a shared basis.
struct Encoding {
    basis: Vec<Monomial>,
    denominator: BigInt,
    laws: Vec<Vec<(Vec<i64>, u128)>>,
}

fn encode(vars: &[&Variable]) -> Result<Encoding> {
    let basis: BTreeSet<&Monomial> = vars
        .iter()
        .flat_map(|v| v.support())
        .flat_map(|e| e.monomials())
        .collect();
    let basis: Vec<Monomial> = basis.into_iter().cloned().collect();
    let index: HashMap<&Monomial, usize> = basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let denominator = vars
        .iter()
        .flat_map(|v| v.support())
        .flat_map(|e| e.terms().values())
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let mut headroom = 0i128;
    let mut laws = Vec::with_capacity(vars.len());
    for v in vars {
        let mut largest = 0i128;
        let mut law = Vec::with_capacity(v.support_size());
        for (value, w) in v.weights() {
            let mut point = vec![0i64; basis.len()];
            for (m, c) in value.terms() {
                let scaled = c.numer() * (&denominator / c.denom());
                let x = scaled.to_i64().ok_or(Error::Overflow("encoding coordinates"))?;
                largest = largest.max((x as i128).abs());
                point[index[m]] = x;
            }
            law.push((point, w));
        }
        law.sort_unstable();
        headroom += largest;
        laws.push(law);
    }
    if headroom > (i64::MAX / 2) as i128 {
        return Err(Error::Overflow("summing coordinates"));
    }
    Ok(Encoding {
        basis,
        denominator,
        laws,
    })
}

fn convolve_points(
    acc: &HashMap<Vec<i64>, u128>,
    law: &[(Vec<i64>, u128)],
    cap: usize,
) -> Result<HashMap<Vec<i64>, u128>> {
    let mut out: HashMap<Vec<i64>, u128> = HashMap::with_capacity(acc.len().max(law.len()));
    for (a, &wa) in acc {
        for (b, wb) in law {
            let s: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
            let w = wa.checked_mul(*wb).ok_or(Error::Overflow("multiplying weights"))?;
            let slot = out.entry(s).or_default();
            *slot = slot.checked_add(w).ok_or(Error::Overflow("adding weights"))?;
        }
        if out.len() > cap {
            return Err(Error::cap(
                "block support",
                format!("more than {cap}"),
                cap,
                "use a smaller range or degree",
            ));
        }
    }
    Ok(out)
}

/// Dense convolution for one-dimensional integer laws.
fn convolve_line(
    acc: &HashMap<Vec<i64>, u128>,
    law: &[(Vec<i64>, u128)],
) -> Option<Result<HashMap<Vec<i64>, u128>>> {
    const DENSE_LIMIT: i64 = 1 << 26;
    let lo_a = acc.keys().map(|p| p[0]).min()?;
    let hi_a = acc.keys().map(|p| p[0]).max()?;
    let lo_b = law.iter().map(|p| p.0[0]).min()?;
    let hi_b = law.iter().map(|p| p.0[0]).max()?;
    if hi_a - lo_a >= DENSE_LIMIT || hi_b - lo_b >= DENSE_LIMIT {
        return None;
    }
    let mut a = vec![0u128; (hi_a - lo_a + 1) as usize];
    for (p, &w) in acc {
        a[(p[0] - lo_a) as usize] = w;
    }
    let mut out = vec![0u128; (hi_a - lo_a + hi_b - lo_b + 1) as usize];
    for (p, wb) in law {
        let shift = (p[0] - lo_b) as usize;
        for (i, &wa) in a.iter().enumerate() {
            if wa == 0 {
                continue;
            }
            let w = match wa.checked_mul(*wb) {
                Some(w) => w,
                None => return Some(Err(Error::Overflow("multiplying weights"))),
            };
            match out[i + shift].checked_add(w) {
                Some(s) => out[i + shift] = s,
                None => return Some(Err(Error::Overflow("adding weights"))),
            }
        }
    }
    Some(Ok(out
        .into_iter()
        .enumerate()
        .filter(|(_, w)| *w > 0)
        .map(|(i, w)| (vec![lo_a + lo_b + i as i64], w))
        .collect()))
}

fn block_law(vars: &[&Variable], cap: usize) -> Result<BlockLaw> {
    let enc = encode(vars)?;
    let dim = enc.basis.len();
    let mut points: HashMap<Vec<i64>, u128> = HashMap::from([(vec![0i64; dim], 1u128)]);
    let mut total = 1u128;
    for (law, var) in enc.laws.iter().zip(vars) {
        total = total
            .checked_mul(var.total())
            .ok_or(Error::Overflow("multiplying weights"))?;
        points = match (dim == 1).then(|| convolve_line(&points, law)).flatten() {
            Some(r) => r?,
            None => convolve_points(&points, law, cap)?,
        };
        if points.len() > cap {
            return Err(Error::cap(
                "block support",
                points.len(),
                cap,
                "use a smaller range or degree",
            ));
        }
    }
    Ok(BlockLaw {
        basis: enc.basis,
        denominator: enc.denominator,
        points,
        total,
    })
}

/// Exact law of the sum of independent `vars`, factored into blocks.
pub fn independent_sum(nvars: usize, vars: &[Variable], cap: usize) -> Result<FactoredLaw> {
    if let Some(v) = vars.iter().find(|v| v.nvars() != nvars) {
        return Err(Error::GeneratorMismatch {
            left: nvars,
            right: v.nvars(),
        });
    }
    let refs: Vec<&Variable> = vars.iter().collect();
    let blocks = blocks(&refs)
        .into_iter()
        .map(|group| {
            let members: Vec<&Variable> = group.iter().map(|&i| refs[i]).collect();
            block_law(&members, cap)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FactoredLaw { nvars, blocks })
}

/// Whether `(u, v) -> u + v` is injective on `supp(sum first) x supp(sum second)`
/// for independent families `first` and `second`.
///
/// Blocks touching only one family cannot create collisions; in mixed blocks
/// the two partial supports are combined and collisions counted exactly.
pub fn sum_is_injective(first: &[Variable], second: &[Variable], cap: usize) -> Result<bool> {
    let all: Vec<&Variable> = first.iter().chain(second).collect();
    let split = first.len();
    for group in blocks(&all) {
        let (left, right): (Vec<usize>, Vec<usize>) = group.iter().partition(|&&i| i < split);
        if left.is_empty() || right.is_empty() {
            continue;
        }
        let members: Vec<&Variable> = group.iter().map(|&i| all[i]).collect();
        let enc = encode(&members)?;
        let dim = enc.basis.len();
        let support = |idx: &[usize]| -> Result<Vec<Vec<i64>>> {
            let mut acc: HashMap<Vec<i64>, u128> = HashMap::from([(vec![0i64; dim], 1u128)]);
            for &i in idx {
                let pos = group.iter().position(|&g| g == i).unwrap();
                acc = convolve_points(&acc, &enc.laws[pos], cap)?;
            }
            Ok(acc.into_keys().collect())
        };
        let u = support(&left)?;
        let v = support(&right)?;
        let pairs = (u.len() as u128) * (v.len() as u128);
        if pairs > cap as u128 {
            return Err(Error::cap(
                "separability check pairs",
                pairs,
                cap,
                "use a smaller range or degree",
            ));
        }
        let mut sums = std::collections::HashSet::with_capacity(pairs as usize);
        for a in &u {
            for b in &v {
                if !sums.insert(a.iter().zip(b).map(|(x, y)| x + y).collect::<Vec<i64>>()) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}
