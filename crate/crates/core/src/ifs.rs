//! Self-similar distributions generated by the maps `x -> r x + w_i`.
//!
//! An [`IfsSpec`] fixes the common contraction ratio `r`, the translation
//! atoms `w_1, ..., w_n` and their probabilities. The associated self-similar
//! law is that of `X = sum_{k>=0} r^k W_k` with `W_k` i.i.d. over the atoms.

use std::collections::HashMap;

use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{parse_rational, AlgebraElement, Rational, Valuation};
use crate::error::{Error, Result};
use crate::info::entropy_bits;

/// Samples drawn per RNG stream. Part of the determinism contract: changing
/// it changes the sample values for a given seed.
pub const SAMPLE_CHUNK: usize = 1 << 14;

/// Default cap on `n^(2k)` for [`exact_overlap_search`].
pub const DEFAULT_OVERLAP_CAP: u128 = 10_000_000;

/// Exact parameters, available when the ratio and all atoms are rational.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactIfs {
    pub ratio: Rational,
    pub atoms: Vec<Rational>,
    pub probs: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IfsSpec {
    ratio: f64,
    atoms: Vec<f64>,
    probs: Vec<f64>,
    exact: Option<ExactIfs>,
}

/// A number in a spec document: an exact string (`"1/3"`, `"-2"`, `"0.25"`)
/// or a JSON number (exact if it is an integer).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Text(String),
    Number(serde_json::Number),
}

impl Scalar {
    fn exact(&self) -> Option<Rational> {
        match self {
            Scalar::Text(s) => parse_rational(s),
            Scalar::Number(n) => n.as_i64().map(|v| Rational::from_integer(v.into())),
        }
    }

    fn float(&self) -> Option<f64> {
        match self {
            Scalar::Text(s) => parse_rational(s)
                .and_then(|q| q.to_f64())
                .or_else(|| s.trim().parse().ok()),
            Scalar::Number(n) => n.as_f64(),
        }
    }
}

/// JSON form of an [`IfsSpec`]: `{"r": "1/3", "atoms": [0, 2], "probs": ["1/2", "1/2"]}`.
/// `probs` defaults to uniform.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IfsDocument {
    pub r: Scalar,
    pub atoms: Vec<Scalar>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probs: Option<Vec<Scalar>>,
}

impl IfsSpec {
    pub fn new(ratio: f64, atoms: Vec<f64>, probs: Vec<f64>) -> Result<Self> {
        let spec = IfsSpec {
            ratio,
            atoms,
            probs,
            exact: None,
        };
        spec.validate(None)?;
        Ok(spec)
    }

    pub fn uniform(ratio: f64, atoms: Vec<f64>) -> Result<Self> {
        let n = atoms.len().max(1);
        Self::new(ratio, atoms, vec![1.0 / n as f64; n])
    }

    /// A spec with rational ratio and atoms; `probs` defaults to uniform.
    pub fn exact(ratio: Rational, atoms: Vec<Rational>, probs: Option<Vec<Rational>>) -> Result<Self> {
        let n = atoms.len();
        let probs = probs.unwrap_or_else(|| vec![Rational::new(1.into(), n.max(1).into()); n]);
        if !pairwise_distinct(&atoms) {
            return Err(Error::InvalidSpec("atoms must be pairwise distinct".into()));
        }
        let spec = IfsSpec {
            ratio: ratio.to_f64().unwrap_or(f64::NAN),
            atoms: atoms.iter().map(|a| a.to_f64().unwrap_or(f64::NAN)).collect(),
            probs: probs.iter().map(|p| p.to_f64().unwrap_or(f64::NAN)).collect(),
            exact: None,
        };
        spec.validate(Some(&probs))?;
        let spec = IfsSpec {
            exact: Some(ExactIfs { ratio, atoms, probs }),
            ..spec
        };
        Ok(spec)
    }

    /// Uniform spec over alphabet letters given as algebra elements. The spec
    /// is exact when every letter is a rational constant, otherwise the
    /// letters are evaluated under `valuation`.
    pub fn from_elements(ratio: Rational, letters: &[AlgebraElement], valuation: &Valuation) -> Result<Self> {
        let constants: Option<Vec<Rational>> = letters.iter().map(AlgebraElement::as_constant).collect();
        match constants {
            Some(atoms) => Self::exact(ratio, atoms, None),
            None => {
                let atoms = letters
                    .iter()
                    .map(|l| l.evaluate(valuation))
                    .collect::<Result<Vec<_>>>()?;
                Self::uniform(ratio.to_f64().unwrap_or(f64::NAN), atoms)
            }
        }
    }

    /// `r = 1/3`, atoms `{0, 2}`, uniform: the middle-thirds Cantor measure on `[0, 3]`.
    pub fn cantor() -> Self {
        Self::exact(
            Rational::new(1.into(), 3.into()),
            vec![Rational::zero(), Rational::from_integer(2.into())],
            None,
        )
        .expect("valid spec")
    }

    pub fn from_document(doc: &IfsDocument) -> Result<Self> {
        let bad = |what: &str| Error::InvalidSpec(format!("{what} is not a number"));
        let exact_ratio = doc.r.exact();
        let exact_atoms: Option<Vec<Rational>> = doc.atoms.iter().map(Scalar::exact).collect();
        let exact_probs: Option<Option<Vec<Rational>>> = match &doc.probs {
            None => Some(None),
            Some(ps) => ps.iter().map(Scalar::exact).collect::<Option<Vec<_>>>().map(Some),
        };
        if let (Some(r), Some(atoms), Some(probs)) = (exact_ratio, exact_atoms, exact_probs) {
            return Self::exact(r, atoms, probs);
        }
        let r = doc.r.float().ok_or_else(|| bad("r"))?;
        let atoms = doc
            .atoms
            .iter()
            .map(|a| a.float().ok_or_else(|| bad("atom")))
            .collect::<Result<Vec<_>>>()?;
        match &doc.probs {
            None => Self::uniform(r, atoms),
            Some(ps) => {
                let probs = ps
                    .iter()
                    .map(|p| p.float().ok_or_else(|| bad("probability")))
                    .collect::<Result<Vec<_>>>()?;
                Self::new(r, atoms, probs)
            }
        }
    }

    pub fn to_document(&self) -> IfsDocument {
        match &self.exact {
            Some(ex) => IfsDocument {
                r: Scalar::Text(ex.ratio.to_string()),
                atoms: ex.atoms.iter().map(|a| Scalar::Text(a.to_string())).collect(),
                probs: Some(ex.probs.iter().map(|p| Scalar::Text(p.to_string())).collect()),
            },
            None => IfsDocument {
                r: float_scalar(self.ratio),
                atoms: self.atoms.iter().map(|&a| float_scalar(a)).collect(),
                probs: Some(self.probs.iter().map(|&p| float_scalar(p)).collect()),
            },
        }
    }

    /// Parses inline JSON (starting with `{`) or reads the named file.
    pub fn load(spec_or_path: &str) -> Result<Self> {
        let text = if spec_or_path.trim_start().starts_with('{') {
            spec_or_path.to_string()
        } else {
            std::fs::read_to_string(spec_or_path)?
        };
        let doc: IfsDocument = serde_json::from_str(&text)?;
        Self::from_document(&doc)
    }

    fn validate(&self, exact_probs: Option<&[Rational]>) -> Result<()> {
        if !(self.ratio > 0.0 && self.ratio < 1.0) {
            return Err(Error::InvalidSpec(format!("contraction ratio {} not in (0, 1)", self.ratio)));
        }
        if self.atoms.is_empty() {
            return Err(Error::InvalidSpec("no atoms".into()));
        }
        if self.probs.len() != self.atoms.len() {
            return Err(Error::InvalidSpec(format!(
                "{} probabilities for {} atoms",
                self.probs.len(),
                self.atoms.len()
            )));
        }
        // exact atoms are checked by the caller
        let distinct = exact_probs.is_some()
            || (self.atoms.iter().all(|a| a.is_finite()) && pairwise_distinct(&self.atoms));
        if !distinct {
            return Err(Error::InvalidSpec("atoms must be pairwise distinct".into()));
        }
        match exact_probs {
            Some(ps) => {
                if ps.iter().any(Signed::is_negative) {
                    return Err(Error::InvalidSpec("negative probability".into()));
                }
                if ps.iter().fold(Rational::zero(), |acc, p| acc + p) != Rational::one() {
                    return Err(Error::InvalidSpec("probabilities do not sum to 1".into()));
                }
            }
            None => {
                if self.probs.iter().any(|&p| p.is_nan() || p < 0.0) {
                    return Err(Error::InvalidSpec("negative probability".into()));
                }
                if (self.probs.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
                    return Err(Error::InvalidSpec("probabilities do not sum to 1".into()));
                }
            }
        }
        Ok(())
    }

    pub fn ratio(&self) -> f64 {
        self.ratio
    }

    pub fn atoms(&self) -> &[f64] {
        &self.atoms
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn exact_params(&self) -> Option<&ExactIfs> {
        self.exact.as_ref()
    }

    /// Entropy of a single letter, in bits.
    pub fn letter_entropy(&self) -> f64 {
        entropy_bits(&self.probs)
    }

    /// Smallest interval containing the attractor.
    pub fn attractor_hull(&self) -> (f64, f64) {
        let lo = self.atoms.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = self.atoms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        (lo / (1.0 - self.ratio), hi / (1.0 - self.ratio))
    }

    /// Same atoms and probabilities with a different ratio (inexact).
    pub fn with_ratio(&self, ratio: f64) -> Result<Self> {
        IfsSpec::new(ratio, self.atoms.clone(), self.probs.clone())
    }
}

fn float_scalar(v: f64) -> Scalar {
    serde_json::Number::from_f64(v)
        .map(Scalar::Number)
        .unwrap_or_else(|| Scalar::Text(v.to_string()))
}

fn pairwise_distinct<T: PartialEq>(xs: &[T]) -> bool {
    xs.iter().enumerate().all(|(i, a)| xs[i + 1..].iter().all(|b| a != b))
}

/// `min{ H(p) / log2(1/r), 1 }`.
pub fn hochman_dimension(spec: &IfsSpec) -> f64 {
    let h = spec.letter_entropy();
    if h == 0.0 {
        return 0.0;
    }
    (h / -spec.ratio.log2()).min(1.0)
}

/// The separation bound `m(W) / (m(W) + M(W))` and whether `r` meets it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Separation {
    pub min_distance: f64,
    pub max_distance: f64,
    pub bound: f64,
    pub satisfied: bool,
}

pub fn separation_check(spec: &IfsSpec) -> Result<Separation> {
    if spec.atoms.len() < 2 {
        return Err(Error::InvalidSpec("separation needs at least two atoms".into()));
    }
    if let Some(ex) = &spec.exact {
        let (m, big_m) = min_max_distance(&ex.atoms, |a, b| (a - b).abs());
        let bound = &m / (&m + &big_m);
        return Ok(Separation {
            min_distance: m.to_f64().unwrap_or(f64::NAN),
            max_distance: big_m.to_f64().unwrap_or(f64::NAN),
            bound: bound.to_f64().unwrap_or(f64::NAN),
            satisfied: ex.ratio <= bound,
        });
    }
    let (m, big_m) = min_max_distance(&spec.atoms, |a, b| (a - b).abs());
    let bound = m / (m + big_m);
    Ok(Separation {
        min_distance: m,
        max_distance: big_m,
        bound,
        satisfied: spec.ratio <= bound,
    })
}

fn min_max_distance<T: Clone + PartialOrd>(xs: &[T], dist: impl Fn(&T, &T) -> T) -> (T, T) {
    let mut min: Option<T> = None;
    let mut max: Option<T> = None;
    for (i, a) in xs.iter().enumerate() {
        for b in &xs[i + 1..] {
            let d = dist(a, b);
            if min.as_ref().is_none_or(|m| d < *m) {
                min = Some(d.clone());
            }
            if max.as_ref().is_none_or(|m| d > *m) {
                max = Some(d);
            }
        }
    }
    (min.unwrap(), max.unwrap())
}

/// Two distinct words of equal length whose composed maps nearly coincide.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Overlap {
    /// Atom indices (0-based) of the lexicographically smaller word.
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    /// `|sum_t r^(t-1) (w_left[t] - w_right[t])|`.
    pub delta: f64,
}

/// Searches all pairs of distinct equal-length words of length at most
/// `max_depth` for `|Delta| <= tolerance`. With `tolerance == 0` and an exact
/// spec the comparison is exact.
pub fn exact_overlap_search(spec: &IfsSpec, max_depth: u32, tolerance: f64) -> Result<Vec<Overlap>> {
    exact_overlap_search_capped(spec, max_depth, tolerance, DEFAULT_OVERLAP_CAP)
}

pub fn exact_overlap_search_capped(spec: &IfsSpec, max_depth: u32, tolerance: f64, cap: u128) -> Result<Vec<Overlap>> {
    if max_depth == 0 {
        return Err(Error::InvalidArgument("overlap search needs max_depth >= 1".into()));
    }
    if tolerance.is_nan() || tolerance < 0.0 {
        return Err(Error::InvalidArgument("tolerance must be non-negative".into()));
    }
    let n = spec.atoms.len() as u128;
    let pairs = n.checked_pow(2 * max_depth).filter(|&p| p <= cap);
    if pairs.is_none() {
        return Err(Error::cap(
            "word-pair search space n^(2k)",
            format!("{}^{}", n, 2 * max_depth),
            cap.min(usize::MAX as u128) as usize,
            "reduce max_depth",
        ));
    }

    let mut out = Vec::new();
    match (&spec.exact, tolerance == 0.0) {
        (Some(ex), true) => {
            let mut values = vec![Rational::zero()];
            for len in 1..=max_depth {
                values = extend_words(&values, &ex.atoms, |w, r_tail| w + &ex.ratio * r_tail);
                let mut groups: HashMap<&Rational, Vec<usize>> = HashMap::new();
                for (idx, v) in values.iter().enumerate() {
                    groups.entry(v).or_default().push(idx);
                }
                for members in groups.values().filter(|g| g.len() > 1) {
                    for (a, &i) in members.iter().enumerate() {
                        for &j in &members[a + 1..] {
                            out.push(overlap(i, j, len, spec.atoms.len(), 0.0));
                        }
                    }
                }
            }
        }
        _ => {
            let mut values = vec![0.0f64];
            for len in 1..=max_depth {
                values = extend_words(&values, &spec.atoms, |w, tail| w + spec.ratio * tail);
                let mut order: Vec<usize> = (0..values.len()).collect();
                order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
                for (pos, &i) in order.iter().enumerate() {
                    for &j in &order[pos + 1..] {
                        let delta = (values[j] - values[i]).abs();
                        if delta > tolerance {
                            break;
                        }
                        out.push(overlap(i.min(j), i.max(j), len, spec.atoms.len(), delta));
                    }
                }
            }
        }
    }
    out.sort_by(|a, b| (a.left.len(), &a.left, &a.right).cmp(&(b.left.len(), &b.left, &b.right)));
    Ok(out)
}

/// Values of all words of length `len + 1` in lexicographic order, from the
/// values of all words of length `len`: `value(a s) = w_a + r value(s)`.
fn extend_words<T>(tails: &[T], atoms: &[T], combine: impl Fn(&T, &T) -> T) -> Vec<T> {
    atoms
        .iter()
        .flat_map(|w| tails.iter().map(move |t| (w, t)))
        .map(|(w, t)| combine(w, t))
        .collect()
}

fn overlap(i: usize, j: usize, len: u32, n: usize, delta: f64) -> Overlap {
    Overlap {
        left: decode_word(i, len, n),
        right: decode_word(j, len, n),
        delta,
    }
}

fn decode_word(mut index: usize, len: u32, n: usize) -> Vec<usize> {
    let mut word = vec![0; len as usize];
    for slot in word.iter_mut().rev() {
        *slot = index % n;
        index /= n;
    }
    word
}

/// `count` independent draws of `sum_{k<depth} r^k W_k`, reproducible from `seed`.
pub fn sample(spec: &IfsSpec, depth: u32, count: usize, seed: u64) -> Result<Vec<f64>> {
    if depth == 0 || count == 0 {
        return Err(Error::InvalidArgument("sampling needs depth >= 1 and count >= 1".into()));
    }
    Ok(sample_stream(spec, spec.ratio, depth, count, seed, 0))
}

/// Chunk `c` of the output uses ChaCha8 seeded with `seed` on stream
/// `stream_base + c`, so the result does not depend on the thread count.
fn sample_stream(spec: &IfsSpec, ratio: f64, depth: u32, count: usize, seed: u64, stream_base: u64) -> Vec<f64> {
    let letters = WeightedIndex::new(&spec.probs).expect("validated probabilities");
    let chunks = count.div_ceil(SAMPLE_CHUNK);
    let parts: Vec<Vec<f64>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(stream_base + c as u64);
            let len = SAMPLE_CHUNK.min(count - c * SAMPLE_CHUNK);
            let mut digits = vec![0usize; depth as usize];
            (0..len)
                .map(|_| {
                    for d in digits.iter_mut() {
                        *d = letters.sample(&mut rng);
                    }
                    digits.iter().rev().fold(0.0, |x, &d| ratio * x + spec.atoms[d])
                })
                .collect()
        })
        .collect();
    parts.concat()
}

/// Two-sample Kolmogorov-Smirnov statistic `sup_x |F_a(x) - F_b(x)|`.
pub fn ks_statistic(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.par_sort_unstable_by(f64::total_cmp);
    b.par_sort_unstable_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut best) = (0, 0, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        best = best.max((i as f64 / na - j as f64 / nb).abs());
    }
    best
}

/// KS distance between samples of `X` (depth `depth`) and of `r X' + W`
/// (`X'` of depth `depth - 1`, `W` an independent letter). Small values are
/// evidence that the sampled law satisfies the self-similarity equation.
pub fn fixed_point_discrepancy(spec: &IfsSpec, depth: u32, count: usize, seed: u64) -> Result<f64> {
    fixed_point_discrepancy_with_ratio(spec, spec.ratio, depth, count, seed)
}

/// [`fixed_point_discrepancy`] with a different ratio in the `r X' + W` side.
pub fn fixed_point_discrepancy_with_ratio(
    spec: &IfsSpec,
    second_ratio: f64,
    depth: u32,
    count: usize,
    seed: u64,
) -> Result<f64> {
    if depth < 2 || count == 0 {
        return Err(Error::InvalidArgument("fixed-point check needs depth >= 2 and count >= 1".into()));
    }
    let x = sample_stream(spec, spec.ratio, depth, count, seed, 0);
    let inner = sample_stream(spec, spec.ratio, depth - 1, count, seed, 1 << 40);
    let letters = sample_stream(spec, spec.ratio, 1, count, seed, 2 << 40);
    let y: Vec<f64> = inner
        .iter()
        .zip(&letters)
        .map(|(x, w)| second_ratio * x + w)
        .collect();
    Ok(ks_statistic(&x, &y))
}
