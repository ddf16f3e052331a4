//! Symbolic orbits: substitution fixed points, Sturmian rotation codings and
//! periodic words, plus the factor statistics computed on them.
//!
//! Symbols are plain indices into an [`Alphabet`]. Anything numeric attached
//! to a symbol lives in [`crate::operator::SamplingFunctions`].

mod stats;
mod substitution;

use std::fmt;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

pub use stats::{
    boshernitzan_sequence, cylinder_frequencies, detect_period, words_of_length, BoshernitzanPoint, CylinderStats,
    MIN_SAMPLING_RATIO,
};
pub use substitution::{build_substitution_orbit, legal_two_words};

/// Index of a letter in an [`Alphabet`].
pub type Symbol = usize;

/// A finite word over alphabet indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(pub Vec<Symbol>);

impl Word {
    pub fn new(symbols: Vec<Symbol>) -> Self {
        Word(symbols)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Symbol] {
        &self.0
    }
}

impl From<&[Symbol]> for Word {
    fn from(s: &[Symbol]) -> Self {
        Word(s.to_vec())
    }
}

/// Ordered set of distinct letter labels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct Alphabet {
    labels: Vec<String>,
}

impl Alphabet {
    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(invalid("alphabet must have at least one letter"));
        }
        for (i, l) in labels.iter().enumerate() {
            if l.is_empty() {
                return Err(invalid("alphabet labels must be nonempty"));
            }
            if labels[..i].contains(l) {
                return Err(invalid(format!("duplicate alphabet label {l:?}")));
            }
        }
        Ok(Alphabet { labels })
    }

    /// The two-letter alphabet `{0, 1}` used by rotation codings.
    pub fn binary() -> Self {
        Alphabet {
            labels: vec!["0".into(), "1".into()],
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, s: Symbol) -> &str {
        &self.labels[s]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<Symbol> {
        self.labels.iter().position(|l| l == label)
    }

    /// Parses a word. Single-character alphabets accept a bare string
    /// (`"abaab"`); otherwise labels are whitespace separated.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let single = self.labels.iter().all(|l| l.chars().count() == 1);
        let tokens: Vec<String> = if single && !text.contains(char::is_whitespace) {
            text.chars().map(String::from).collect()
        } else {
            text.split_whitespace().map(String::from).collect()
        };
        tokens
            .iter()
            .map(|t| self.index_of(t).ok_or_else(|| invalid(format!("unknown letter {t:?}"))))
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }

    /// Renders a word with the inverse convention of [`Alphabet::parse_word`].
    pub fn render(&self, word: &[Symbol]) -> String {
        let single = self.labels.iter().all(|l| l.chars().count() == 1);
        let parts: Vec<&str> = word.iter().map(|&s| self.label(s)).collect();
        if single {
            parts.concat()
        } else {
            parts.join(" ")
        }
    }

    fn check(&self, word: &Word) -> Result<()> {
        match word.0.iter().find(|&&s| s >= self.len()) {
            Some(s) => Err(invalid(format!("symbol {s} outside alphabet of size {}", self.len()))),
            None => Ok(()),
        }
    }
}

impl TryFrom<Vec<String>> for Alphabet {
    type Error = Error;
    fn try_from(v: Vec<String>) -> Result<Self> {
        Alphabet::new(v)
    }
}

impl From<Alphabet> for Vec<String> {
    fn from(a: Alphabet) -> Self {
        a.labels
    }
}

/// Generator of a two-sided point of a subshift.
#[derive(Clone, Debug, PartialEq)]
pub enum SubshiftSpec {
    /// Fixed point of a substitution grown from the legal pair `seed`.
    Substitution {
        alphabet: Alphabet,
        rules: Vec<Word>,
        seed: (Symbol, Symbol),
    },
    /// `ω(n) = 1` iff `frac(n·alpha + theta) ∈ [1 − alpha, 1)`.
    Sturmian { alpha: f64, theta: f64 },
    /// `ω(n) = word[n mod |word|]`.
    Periodic { alphabet: Alphabet, word: Word },
}

impl SubshiftSpec {
    /// The Fibonacci substitution `a → ab, b → a` seeded at `b.a`.
    pub fn fibonacci() -> Self {
        SubshiftSpec::Substitution {
            alphabet: Alphabet::new(["a", "b"]).expect("static alphabet"),
            rules: vec![Word(vec![0, 1]), Word(vec![0])],
            seed: (1, 0),
        }
    }

    pub fn periodic(alphabet: Alphabet, word: Word) -> Self {
        SubshiftSpec::Periodic { alphabet, word }
    }

    pub fn alphabet(&self) -> Alphabet {
        match self {
            SubshiftSpec::Substitution { alphabet, .. } | SubshiftSpec::Periodic { alphabet, .. } => alphabet.clone(),
            SubshiftSpec::Sturmian { .. } => Alphabet::binary(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            SubshiftSpec::Substitution { alphabet, rules, seed } => substitution::validate(alphabet, rules, *seed),
            SubshiftSpec::Sturmian { alpha, theta } => {
                if !(*alpha > 0.0 && *alpha < 1.0) {
                    return Err(invalid(format!("alpha = {alpha} must lie in (0, 1)")));
                }
                if !(*theta >= 0.0 && *theta < 1.0) {
                    return Err(invalid(format!("theta = {theta} must lie in [0, 1)")));
                }
                Ok(())
            }
            SubshiftSpec::Periodic { alphabet, word } => {
                if word.is_empty() {
                    return Err(invalid("periodic word must be nonempty"));
                }
                alphabet.check(word)
            }
        }
    }

    /// Builds the window `ω(−radius..=radius)`.
    pub fn orbit(&self, radius: usize) -> Result<OrbitWindow> {
        match self {
            SubshiftSpec::Substitution { alphabet, rules, seed } => {
                build_substitution_orbit(alphabet, rules, *seed, radius)
            }
            SubshiftSpec::Sturmian { alpha, theta } => build_sturmian_orbit(*alpha, *theta, radius),
            SubshiftSpec::Periodic { alphabet, word } => build_periodic_orbit(alphabet.clone(), word.clone(), radius),
        }
    }
}

/// A finite two-sided sample `ω(−N..=N)` of a subshift point, together with
/// the generator that can extend it.
#[derive(Clone, Debug, PartialEq)]
pub struct OrbitWindow {
    radius: usize,
    symbols: Vec<Symbol>,
    spec: SubshiftSpec,
}

impl OrbitWindow {
    pub(crate) fn from_parts(spec: SubshiftSpec, radius: usize, symbols: Vec<Symbol>) -> Self {
        debug_assert_eq!(symbols.len(), 2 * radius + 1);
        OrbitWindow { radius, symbols, spec }
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    /// Index of the first stored symbol, `−N`.
    pub fn center_offset(&self) -> i64 {
        -(self.radius as i64)
    }

    pub fn lo(&self) -> i64 {
        -(self.radius as i64)
    }

    pub fn hi(&self) -> i64 {
        self.radius as i64
    }

    pub fn spec(&self) -> &SubshiftSpec {
        &self.spec
    }

    pub fn alphabet(&self) -> Alphabet {
        self.spec.alphabet()
    }

    /// All stored symbols, `ω(−N)` first.
    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn get(&self, n: i64) -> Option<Symbol> {
        let i = n + self.radius as i64;
        if i < 0 {
            return None;
        }
        self.symbols.get(i as usize).copied()
    }

    /// The symbols `ω(lo..=hi)`, if covered.
    pub fn slice(&self, lo: i64, hi: i64) -> Option<&[Symbol]> {
        if lo < self.lo() || hi > self.hi() || lo > hi + 1 {
            return None;
        }
        let start = (lo + self.radius as i64) as usize;
        let end = (hi + self.radius as i64 + 1) as usize;
        Some(&self.symbols[start..end])
    }

    /// Regenerates the window at a larger radius. A smaller radius restricts.
    pub fn extend(&self, radius: usize) -> Result<OrbitWindow> {
        if radius <= self.radius {
            return Ok(self.restrict(radius));
        }
        self.spec.orbit(radius)
    }

    pub fn restrict(&self, radius: usize) -> OrbitWindow {
        let radius = radius.min(self.radius);
        let cut = self.radius - radius;
        OrbitWindow {
            radius,
            symbols: self.symbols[cut..self.symbols.len() - cut].to_vec(),
            spec: self.spec.clone(),
        }
    }

    /// A window that covers at least `[lo, hi]`, extending only if needed.
    pub fn covering(&self, lo: i64, hi: i64) -> Result<std::borrow::Cow<'_, OrbitWindow>> {
        let need = lo.unsigned_abs().max(hi.unsigned_abs()) as usize;
        if need <= self.radius {
            Ok(std::borrow::Cow::Borrowed(self))
        } else {
            Ok(std::borrow::Cow::Owned(self.extend(need)?))
        }
    }

    /// Writes `ω(−N), …, ω(N)`, one label per line.
    pub fn write_text<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        let alphabet = self.alphabet();
        for &s in &self.symbols {
            writeln!(out, "{}", alphabet.label(s))?;
        }
        Ok(())
    }
}

impl fmt::Display for OrbitWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let alphabet = self.alphabet();
        let right = alphabet.render(&self.symbols[self.radius..]);
        let left = alphabet.render(&self.symbols[..self.radius]);
        write!(f, "{left}.{right}")
    }
}

/// Rotation coding `ω(n) = 1` iff `frac(n·alpha + theta) ∈ [1 − alpha, 1)`.
pub fn build_sturmian_orbit(alpha: f64, theta: f64, radius: usize) -> Result<OrbitWindow> {
    let spec = SubshiftSpec::Sturmian { alpha, theta };
    spec.validate()?;
    let r = radius as i64;
    let symbols = (-r..=r).map(|n| sturmian_letter(alpha, theta, n)).collect();
    Ok(OrbitWindow::from_parts(spec, radius, symbols))
}

pub(crate) fn sturmian_letter(alpha: f64, theta: f64, n: i64) -> Symbol {
    let x = (n as f64).mul_add(alpha, theta).rem_euclid(1.0);
    usize::from(x >= 1.0 - alpha && x < 1.0)
}

pub fn build_periodic_orbit(alphabet: Alphabet, word: Word, radius: usize) -> Result<OrbitWindow> {
    let spec = SubshiftSpec::Periodic { alphabet, word };
    spec.validate()?;
    let SubshiftSpec::Periodic { word, .. } = &spec else {
        unreachable!()
    };
    let p = word.len() as i64;
    let r = radius as i64;
    let symbols = (-r..=r).map(|n| word.0[n.rem_euclid(p) as usize]).collect();
    Ok(OrbitWindow::from_parts(spec, radius, symbols))
}
