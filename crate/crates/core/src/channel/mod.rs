//! Channel matrices of constant single-antenna K-user interference channels.
//!
//! Entry `h_ij` is the gain from transmitter `j` to receiver `i`. Entries are
//! exact [`AlgebraElement`]s over a declared list of generators; an optional
//! numeric valuation ties generators to concrete reals for sampling.
//!
//! Receivers and transmitters are indexed from 0 in the library API.

mod expr;

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraElement, Valuation};
use crate::error::{Error, Result};

pub use expr::{is_identifier, parse_element};

/// On-disk form of a channel matrix.
///
/// ```json
/// {
///   "K": 2,
///   "generators": ["a", "b", "g"],
///   "valuation": { "g": "1.4142135623730951" },
///   "entries": [["a", "g"], ["2*g", "b^2 + 1/3"]]
/// }
/// ```
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelDocument {
    #[serde(rename = "K")]
    pub k: usize,
    pub generators: Vec<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub valuation: BTreeMap<String, String>,
    pub entries: Vec<Vec<String>>,
}

/// A K x K matrix of exact channel gains.
#[derive(Clone, Debug, PartialEq)]
pub struct ChannelMatrix {
    k: usize,
    generators: Vec<String>,
    entries: Vec<AlgebraElement>,
    valuation: Valuation,
}

/// The `K(K-1)` off-diagonal gains in row-major order.
#[derive(Clone, Debug, PartialEq)]
pub struct OffDiagonalVector(pub Vec<AlgebraElement>);

impl OffDiagonalVector {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[AlgebraElement] {
        &self.0
    }
}

impl ChannelMatrix {
    pub fn new(generators: Vec<String>, rows: Vec<Vec<AlgebraElement>>, valuation: Option<Valuation>) -> Result<Self> {
        let k = rows.len();
        if k < 2 {
            return Err(Error::InvalidChannel(format!("need at least 2 users, got {k}")));
        }
        if let Some(bad) = rows.iter().position(|r| r.len() != k) {
            return Err(Error::InvalidChannel(format!(
                "matrix is not square: row {} has {} entries, expected {k}",
                bad + 1,
                rows[bad].len()
            )));
        }
        let mut seen = std::collections::HashSet::new();
        for g in &generators {
            if !is_identifier(g) {
                return Err(Error::InvalidChannel(format!("`{g}` is not a valid generator name")));
            }
            if !seen.insert(g.as_str()) {
                return Err(Error::InvalidChannel(format!("generator `{g}` declared twice")));
            }
        }
        let entries: Vec<_> = rows.into_iter().flatten().collect();
        if let Some(e) = entries.iter().find(|e| e.nvars() != generators.len()) {
            return Err(Error::GeneratorMismatch {
                left: generators.len(),
                right: e.nvars(),
            });
        }
        let valuation = match valuation {
            Some(v) if v.names() == generators.as_slice() => v,
            Some(_) => return Err(Error::InvalidChannel("valuation names differ from generators".into())),
            None => Valuation::new(generators.clone()),
        };
        Ok(ChannelMatrix {
            k,
            generators,
            entries,
            valuation,
        })
    }

    /// The fully symbolic matrix whose `K^2` entries are distinct generators
    /// `h11, h12, ...`, valued at square roots of the first primes.
    pub fn generic(k: usize) -> Result<Self> {
        let names: Vec<String> = (0..k)
            .flat_map(|i| (0..k).map(move |j| entry_name(k, i, j)))
            .collect();
        let nvars = names.len();
        let rows = (0..k)
            .map(|i| (0..k).map(|j| AlgebraElement::generator(nvars, i * k + j)).collect())
            .collect();
        let mut valuation = Valuation::new(names.clone());
        for (g, p) in primes(nvars).into_iter().enumerate() {
            valuation.set(g, (p as f64).sqrt());
        }
        ChannelMatrix::new(names, rows, Some(valuation))
    }

    /// A matrix with the given integer off-diagonal gains and a distinct
    /// generator `hii` on each diagonal entry (valued at `sqrt(prime)`, an
    /// irrational number). Diagonal values of `offdiag` are ignored.
    pub fn integer_offdiagonal(offdiag: &[Vec<i64>]) -> Result<Self> {
        let k = offdiag.len();
        let names: Vec<String> = (0..k).map(|i| entry_name(k, i, i)).collect();
        let rows = offdiag
            .iter()
            .enumerate()
            .map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .map(|(j, &h)| {
                        if i == j {
                            AlgebraElement::generator(k, i)
                        } else {
                            AlgebraElement::integer(k, h)
                        }
                    })
                    .collect()
            })
            .collect();
        let mut valuation = Valuation::new(names.clone());
        for (g, p) in primes(k).into_iter().enumerate() {
            valuation.set(g, (p as f64).sqrt());
        }
        ChannelMatrix::new(names, rows, Some(valuation))
    }

    /// A matrix of rational constants (no generators).
    pub fn rational(rows: &[Vec<crate::algebra::Rational>]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|v| AlgebraElement::constant(0, v.clone())).collect())
            .collect();
        ChannelMatrix::new(Vec::new(), rows, None)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn nvars(&self) -> usize {
        self.generators.len()
    }

    pub fn valuation(&self) -> &Valuation {
        &self.valuation
    }

    pub fn with_valuation(mut self, valuation: Valuation) -> Result<Self> {
        if valuation.names() != self.generators.as_slice() {
            return Err(Error::InvalidChannel("valuation names differ from generators".into()));
        }
        self.valuation = valuation;
        Ok(self)
    }

    /// Gain from transmitter `j` to receiver `i`.
    pub fn entry(&self, i: usize, j: usize) -> &AlgebraElement {
        &self.entries[i * self.k + j]
    }

    pub fn row(&self, i: usize) -> &[AlgebraElement] {
        &self.entries[i * self.k..(i + 1) * self.k]
    }

    /// True iff no entry is the zero polynomial.
    pub fn fully_connected(&self) -> bool {
        self.entries.iter().all(|e| !e.is_zero())
    }

    pub fn off_diagonal(&self) -> OffDiagonalVector {
        OffDiagonalVector(
            (0..self.k)
                .flat_map(|i| (0..self.k).filter(move |&j| j != i).map(move |j| (i, j)))
                .map(|(i, j)| self.entry(i, j).clone())
                .collect(),
        )
    }

    pub fn from_document(doc: &ChannelDocument) -> Result<Self> {
        if doc.k < 2 {
            return Err(Error::InvalidChannel(format!("K must be at least 2, got {}", doc.k)));
        }
        if doc.entries.len() != doc.k {
            return Err(Error::InvalidChannel(format!(
                "K = {} but the matrix has {} rows",
                doc.k,
                doc.entries.len()
            )));
        }
        let mut valuation = Valuation::new(doc.generators.clone());
        for (name, text) in &doc.valuation {
            let index = doc
                .generators
                .iter()
                .position(|g| g == name)
                .ok_or_else(|| Error::InvalidChannel(format!("valuation for undeclared generator `{name}`")))?;
            let value: f64 = text
                .trim()
                .parse()
                .map_err(|_| Error::InvalidChannel(format!("valuation of `{name}` is not a decimal: `{text}`")))?;
            valuation.set(index, value);
        }
        let rows = doc
            .entries
            .iter()
            .enumerate()
            .map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .map(|(j, text)| {
                        parse_element(text, &doc.generators).map_err(|e| {
                            Error::InvalidChannel(format!("entry ({}, {}) `{text}`: {e}", i + 1, j + 1))
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        ChannelMatrix::new(doc.generators.clone(), rows, Some(valuation))
    }

    pub fn to_document(&self) -> ChannelDocument {
        ChannelDocument {
            k: self.k,
            generators: self.generators.clone(),
            valuation: self
                .generators
                .iter()
                .zip(self.valuation.values())
                .filter_map(|(g, v)| v.map(|v| (g.clone(), format!("{v:?}"))))
                .collect(),
            entries: (0..self.k)
                .map(|i| {
                    self.row(i)
                        .iter()
                        .map(|e| e.display(&self.generators).to_string())
                        .collect()
                })
                .collect(),
        }
    }
}

/// Parses a channel file (JSON, see [`ChannelDocument`]).
pub fn load_channel(text: &str) -> Result<ChannelMatrix> {
    let doc: ChannelDocument = serde_json::from_str(text)?;
    ChannelMatrix::from_document(&doc)
}

pub fn load_channel_file(path: impl AsRef<Path>) -> Result<ChannelMatrix> {
    load_channel(&std::fs::read_to_string(path)?)
}

/// Serialises a channel to the same JSON format [`load_channel`] reads.
pub fn store_channel(h: &ChannelMatrix) -> String {
    serde_json::to_string_pretty(&h.to_document()).expect("channel documents always serialise")
}

fn entry_name(k: usize, i: usize, j: usize) -> String {
    if k < 10 {
        format!("h{}{}", i + 1, j + 1)
    } else {
        format!("h{}_{}", i + 1, j + 1)
    }
}

fn primes(count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut n = 2u64;
    while out.len() < count {
        if out.iter().take_while(|&&p| p * p <= n).all(|&p| !n.is_multiple_of(p)) {
            out.push(n);
        }
        n += 1;
    }
    out
}
