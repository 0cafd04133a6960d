//! Deterministic strategies of the P3 scenario and the behaviour-space
//! coordinates built from them.
//!
//! A behaviour coordinate is the probability of the fixed outcome `0` for a
//! single or composite event under the named settings. Deterministic
//! strategies are written as bit vectors in those coordinates: bit `1` means
//! the wing always reports the fixed outcome for that setting.
//!
//! Full vectors have 26 entries: 6 singles `(a0,a1,b0,b1,c0,c1)`, 12 pairs
//! `(a0b0,a0b1,a1b0,a1b1,a0c0,a0c1,a1c0,a1c1,b0c0,b0c1,b1c0,b1c1)` and 8
//! triples `(a0b0c0,...,a1b1c1)`. Reduced vectors drop the middle party:
//! `(a0,a1,c0,c1,a0c0,a0c1,a1c0,a1c1)`.

mod export;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub use export::{vertices_csv, vertices_json, VertexTableJson};

/// Default tolerance for comparing exactly constructed behaviour points.
pub const EXACT_TOL: f64 = 1e-12;

/// Number of deterministic strategies, `4^3`.
pub const STRATEGY_COUNT: usize = 64;
/// Number of vertices after marginalizing the middle party.
pub const REDUCED_COUNT: usize = 16;

/// Party count, settings per party and outcomes per setting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ScenarioShape {
    pub n: usize,
    pub m: usize,
    pub d: usize,
}

impl ScenarioShape {
    /// Three parties, binary settings and outcomes.
    pub const FULL: ScenarioShape = ScenarioShape { n: 3, m: 2, d: 2 };
    /// Two parties (middle one marginalized), binary settings and outcomes.
    pub const REDUCED: ScenarioShape = ScenarioShape { n: 2, m: 2, d: 2 };

    pub fn new(n: usize, m: usize, d: usize) -> Result<Self> {
        if n == 0 || m == 0 || d == 0 {
            return Err(Error::InvalidShape(format!(
                "(n,m,d) = ({n},{m},{d}); all must be at least 1"
            )));
        }
        Ok(ScenarioShape { n, m, d })
    }

    pub fn validate(&self) -> Result<()> {
        ScenarioShape::new(self.n, self.m, self.d).map(|_| ())
    }

    /// Number of setting tuples, `m^n`.
    pub fn setting_tuples(&self) -> usize {
        self.m.pow(self.n as u32)
    }

    /// Number of outcome tuples, `d^n`.
    pub fn outcome_tuples(&self) -> usize {
        self.d.pow(self.n as u32)
    }
}

impl fmt::Display for ScenarioShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.n, self.m, self.d)
    }
}

/// Dimension of the no-signalling behaviour space, `[(d-1)m + 1]^n - 1`.
pub fn scenario_dimension(shape: ScenarioShape) -> Result<u64> {
    shape.validate()?;
    let base = (shape.d as u64 - 1)
        .checked_mul(shape.m as u64)
        .and_then(|x| x.checked_add(1))
        .ok_or_else(|| Error::OutOfRange(format!("dimension of {shape} overflows")))?;
    let n = u32::try_from(shape.n)
        .map_err(|_| Error::OutOfRange(format!("party count {} too large", shape.n)))?;
    base.checked_pow(n)
        .map(|p| p - 1)
        .ok_or_else(|| Error::OutOfRange(format!("dimension of {shape} overflows")))
}

/// Which of the two vertex layouts a point or graph uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Representation {
    #[serde(rename = "full-26")]
    Full26,
    #[serde(rename = "reduced-8")]
    Reduced8,
}

impl Representation {
    pub fn dim(self) -> usize {
        match self {
            Representation::Full26 => 26,
            Representation::Reduced8 => 8,
        }
    }

    pub fn shape(self) -> ScenarioShape {
        match self {
            Representation::Full26 => ScenarioShape::FULL,
            Representation::Reduced8 => ScenarioShape::REDUCED,
        }
    }

    pub fn vertex_count(self) -> usize {
        match self {
            Representation::Full26 => STRATEGY_COUNT,
            Representation::Reduced8 => REDUCED_COUNT,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Representation::Full26 => "full-26",
            Representation::Reduced8 => "reduced-8",
        }
    }

    /// Column names in coordinate order.
    pub fn labels(self) -> Vec<String> {
        match self {
            Representation::Full26 => event_labels(&["a", "b", "c"]),
            Representation::Reduced8 => event_labels(&["a", "c"]),
        }
    }

    /// All vertices of this representation in table order, as bit rows.
    pub fn vertex_rows(self) -> Vec<Vec<u8>> {
        match self {
            Representation::Full26 => enumerate_strategies()
                .into_iter()
                .map(|s| vertex_from_strategy(s).bits().to_vec())
                .collect(),
            Representation::Reduced8 => enumerate_reduced()
                .into_iter()
                .map(|v| v.bits().to_vec())
                .collect(),
        }
    }
}

impl fmt::Display for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Representation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" | "full-26" | "full26" => Ok(Representation::Full26),
            "reduced" | "reduced-8" | "reduced8" => Ok(Representation::Reduced8),
            other => Err(Error::Parse(format!("unknown representation '{other}'"))),
        }
    }
}

/// Event index sets for parties `0..n` with binary settings: all nonempty
/// party subsets by size, then lexicographically, each expanded over its
/// setting tuples in lexicographic order.
pub(crate) fn event_layout(n: usize) -> Vec<Vec<(usize, usize)>> {
    let mut events = Vec::new();
    for size in 1..=n {
        for subset in subsets_of_size(n, size) {
            for settings in 0..(1usize << size) {
                events.push(
                    subset
                        .iter()
                        .enumerate()
                        .map(|(pos, &party)| (party, (settings >> (size - 1 - pos)) & 1))
                        .collect(),
                );
            }
        }
    }
    events
}

fn subsets_of_size(n: usize, size: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for p in start..n {
            cur.push(p);
            rec(p + 1, n, size, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, size, &mut Vec::new(), &mut out);
    out
}

fn event_labels(names: &[&str]) -> Vec<String> {
    event_layout(names.len())
        .into_iter()
        .map(|ev| ev.iter().map(|&(p, s)| format!("{}{}", names[p], s)).collect())
        .collect()
}

/// Deterministic response of one wing: the fixed-outcome indicator for each
/// of its two settings. Index `2*out0 + out1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WingStrategy(u8);

impl WingStrategy {
    pub const ALL: [WingStrategy; 4] =
        [WingStrategy(0), WingStrategy(1), WingStrategy(2), WingStrategy(3)];

    pub fn from_index(index: u8) -> Option<Self> {
        (index < 4).then_some(WingStrategy(index))
    }

    pub fn from_outputs(out0: u8, out1: u8) -> Option<Self> {
        (out0 <= 1 && out1 <= 1).then_some(WingStrategy(2 * out0 + out1))
    }

    pub fn index(self) -> u8 {
        self.0
    }

    /// Bit for setting 0.
    pub fn out0(self) -> u8 {
        self.0 >> 1
    }

    /// Bit for setting 1.
    pub fn out1(self) -> u8 {
        self.0 & 1
    }

    pub fn out(self, setting: usize) -> u8 {
        if setting == 0 {
            self.out0()
        } else {
            self.out1()
        }
    }
}

/// One response function per wing: `alpha` for the first party (setting S),
/// `beta` for the middle party (T), `gamma` for the third (U).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DeterministicStrategy {
    pub alpha: WingStrategy,
    pub beta: WingStrategy,
    pub gamma: WingStrategy,
}

impl DeterministicStrategy {
    pub fn new(alpha: WingStrategy, beta: WingStrategy, gamma: WingStrategy) -> Self {
        DeterministicStrategy { alpha, beta, gamma }
    }

    /// Shorthand for `(alpha_i, beta_j, gamma_k)`.
    pub fn from_classes(i: u8, j: u8, k: u8) -> Option<Self> {
        Some(DeterministicStrategy {
            alpha: WingStrategy::from_index(i)?,
            beta: WingStrategy::from_index(j)?,
            gamma: WingStrategy::from_index(k)?,
        })
    }

    /// Row in the vertex table: the singles block read as a binary number.
    pub fn index(self) -> usize {
        16 * self.alpha.index() as usize + 4 * self.beta.index() as usize + self.gamma.index() as usize
    }

    pub fn from_index(index: usize) -> Option<Self> {
        if index >= STRATEGY_COUNT {
            return None;
        }
        DeterministicStrategy::from_classes((index >> 4) as u8, ((index >> 2) & 3) as u8, (index & 3) as u8)
    }

    pub fn wings(self) -> [WingStrategy; 3] {
        [self.alpha, self.beta, self.gamma]
    }

    pub fn singles(self) -> [u8; 6] {
        [
            self.alpha.out0(),
            self.alpha.out1(),
            self.beta.out0(),
            self.beta.out1(),
            self.gamma.out0(),
            self.gamma.out1(),
        ]
    }
}

/// A 26-entry vertex of the full polytope.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct VertexFull {
    bits: [u8; 26],
}

impl VertexFull {
    /// Checks that every entry is a bit and that composites are products of singles.
    pub fn from_bits(bits: [u8; 26]) -> Result<Self> {
        let rebuilt = Self::from_singles(&bits[..6].try_into().expect("slice of 6"))?;
        if rebuilt.bits != bits {
            return Err(Error::OutOfRange(
                "composite entries are not products of singles".into(),
            ));
        }
        Ok(rebuilt)
    }

    fn from_singles(singles: &[u8; 6]) -> Result<Self> {
        if singles.iter().any(|&b| b > 1) {
            return Err(Error::OutOfRange("vertex entries must be 0 or 1".into()));
        }
        let mut bits = [0u8; 26];
        for (slot, event) in bits.iter_mut().zip(event_layout(3)) {
            *slot = event.iter().map(|&(p, s)| singles[2 * p + s]).product();
        }
        Ok(VertexFull { bits })
    }

    pub fn bits(&self) -> &[u8; 26] {
        &self.bits
    }

    pub fn singles(&self) -> &[u8] {
        &self.bits[..6]
    }

    pub fn pairs(&self) -> &[u8] {
        &self.bits[6..18]
    }

    pub fn tris(&self) -> &[u8] {
        &self.bits[18..]
    }

    pub fn hamming_weight(&self) -> usize {
        self.bits.iter().map(|&b| b as usize).sum()
    }

    pub fn to_point(&self) -> BehaviourPoint {
        BehaviourPoint::from_bits(&self.bits, Representation::Full26)
    }
}

impl AsRef<[u8]> for VertexFull {
    fn as_ref(&self) -> &[u8] {
        &self.bits
    }
}

/// An 8-entry vertex of the reduced polytope.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexReduced {
    bits: [u8; 8],
}

impl VertexReduced {
    /// Builds the vertex for singles `(a0, a1, c0, c1)`.
    pub fn from_singles(a0: u8, a1: u8, c0: u8, c1: u8) -> Result<Self> {
        if [a0, a1, c0, c1].iter().any(|&b| b > 1) {
            return Err(Error::OutOfRange("vertex entries must be 0 or 1".into()));
        }
        Ok(VertexReduced {
            bits: [a0, a1, c0, c1, a0 * c0, a0 * c1, a1 * c0, a1 * c1],
        })
    }

    pub fn from_bits(bits: [u8; 8]) -> Result<Self> {
        let v = Self::from_singles(bits[0], bits[1], bits[2], bits[3])?;
        if v.bits != bits {
            return Err(Error::OutOfRange(
                "composite entries are not products of singles".into(),
            ));
        }
        Ok(v)
    }

    pub fn bits(&self) -> &[u8; 8] {
        &self.bits
    }

    pub fn singles(&self) -> &[u8] {
        &self.bits[..4]
    }

    pub fn composites(&self) -> &[u8] {
        &self.bits[4..]
    }

    /// Row in the reduced table, `4*alpha + gamma`.
    pub fn index(&self) -> usize {
        let b = &self.bits;
        8 * b[0] as usize + 4 * b[1] as usize + 2 * b[2] as usize + b[3] as usize
    }

    pub fn to_point(&self) -> BehaviourPoint {
        BehaviourPoint::from_bits(&self.bits, Representation::Reduced8)
    }
}

impl AsRef<[u8]> for VertexReduced {
    fn as_ref(&self) -> &[u8] {
        &self.bits
    }
}

/// A real point in behaviour space, in the coordinate order of its representation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BehaviourPoint {
    pub representation: Representation,
    pub shape: ScenarioShape,
    pub coords: Vec<f64>,
}

impl BehaviourPoint {
    /// Validates length and that every entry is a probability.
    pub fn new(representation: Representation, coords: Vec<f64>) -> Result<Self> {
        let point = BehaviourPoint {
            representation,
            shape: representation.shape(),
            coords,
        };
        point.validate()?;
        Ok(point)
    }

    pub fn reduced(coords: [f64; 8]) -> Result<Self> {
        Self::new(Representation::Reduced8, coords.to_vec())
    }

    pub fn validate(&self) -> Result<()> {
        if self.shape != self.representation.shape() {
            return Err(Error::InvalidShape(format!(
                "{} points have shape {}, found {}",
                self.representation,
                self.representation.shape(),
                self.shape
            )));
        }
        if self.coords.len() != self.representation.dim() {
            return Err(Error::DimensionMismatch(format!(
                "{} point needs {} coordinates, found {}",
                self.representation,
                self.representation.dim(),
                self.coords.len()
            )));
        }
        if let Some((k, x)) = self
            .coords
            .iter()
            .enumerate()
            .find(|(_, x)| !(0.0..=1.0).contains(*x))
        {
            return Err(Error::OutOfRange(format!("coordinate {k} = {x} is not in [0,1]")));
        }
        Ok(())
    }

    fn from_bits(bits: &[u8], representation: Representation) -> Self {
        BehaviourPoint {
            representation,
            shape: representation.shape(),
            coords: bits.iter().map(|&b| b as f64).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn ensure_same_kind(&self, other: &BehaviourPoint) -> Result<()> {
        if self.representation != other.representation || self.shape != other.shape {
            return Err(Error::RepresentationMismatch {
                expected: self.representation.to_string(),
                found: other.representation.to_string(),
            });
        }
        Ok(())
    }

    pub fn ensure_representation(&self, representation: Representation) -> Result<()> {
        if self.representation != representation {
            return Err(Error::RepresentationMismatch {
                expected: representation.to_string(),
                found: self.representation.to_string(),
            });
        }
        Ok(())
    }

    /// `self - other`, component-wise.
    pub fn difference(&self, other: &BehaviourPoint) -> Result<Vec<f64>> {
        self.ensure_same_kind(other)?;
        Ok(self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect())
    }

    pub fn distance(&self, other: &BehaviourPoint) -> Result<f64> {
        Ok(self.difference(other)?.iter().map(|x| x * x).sum::<f64>().sqrt())
    }

    pub fn approx_eq(&self, other: &BehaviourPoint, tol: f64) -> bool {
        self.representation == other.representation
            && self.coords.len() == other.coords.len()
            && self.coords.iter().zip(&other.coords).all(|(a, b)| (a - b).abs() <= tol)
    }
}

/// All 64 strategies, ordered by the binary value of `(a0,a1,b0,b1,c0,c1)`.
pub fn enumerate_strategies() -> Vec<DeterministicStrategy> {
    (0..STRATEGY_COUNT)
        .map(|i| DeterministicStrategy::from_index(i).expect("index below 64"))
        .collect()
}

pub fn vertex_from_strategy(s: DeterministicStrategy) -> VertexFull {
    VertexFull::from_singles(&s.singles()).expect("strategy bits are binary")
}

/// Drops every entry that involves the middle party.
pub fn marginalize(v: &VertexFull) -> VertexReduced {
    let s = v.singles();
    VertexReduced::from_singles(s[0], s[1], s[4], s[5]).expect("vertex bits are binary")
}

/// The 16 reduced vertices, ordered by the binary value of `(a0,a1,c0,c1)`.
pub fn enumerate_reduced() -> Vec<VertexReduced> {
    (0..REDUCED_COUNT as u8)
        .map(|i| {
            VertexReduced::from_singles((i >> 3) & 1, (i >> 2) & 1, (i >> 1) & 1, i & 1)
                .expect("bits are binary")
        })
        .collect()
}

/// Counts vertices by number of 1-entries.
pub fn hamming_histogram<V: AsRef<[u8]>>(vertices: &[V]) -> Result<BTreeMap<usize, usize>> {
    if vertices.is_empty() {
        return Err(Error::NoVertices);
    }
    let mut hist = BTreeMap::new();
    for v in vertices {
        let weight = v.as_ref().iter().filter(|&&b| b != 0).count();
        *hist.entry(weight).or_insert(0) += 1;
    }
    Ok(hist)
}
