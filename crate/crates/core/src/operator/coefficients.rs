use std::collections::BTreeMap;
use std::io::Write;

use crate::error::{invalid, Error, Result};
use crate::subshift::{OrbitWindow, Word};
use crate::Scalar;

/// Locally constant maps `p`, `q` read off the `(2N+1)`-window around a site.
///
/// The bound `K ≥ 1` is the smallest constant with `1/K ≤ |p| ≤ K` and
/// `|q| ≤ K` over the tables.
#[derive(Clone, Debug, PartialEq)]
pub struct SamplingFunctions<T> {
    window_radius: usize,
    p_table: BTreeMap<Word, T>,
    q_table: BTreeMap<Word, T>,
    bound: T,
}

impl<T: Scalar> SamplingFunctions<T> {
    pub fn new(window_radius: usize, p_table: BTreeMap<Word, T>, q_table: BTreeMap<Word, T>) -> Result<Self> {
        let width = 2 * window_radius + 1;
        if p_table.is_empty() {
            return Err(invalid("p table is empty"));
        }
        for (w, v) in p_table.iter().chain(q_table.iter()) {
            if w.len() != width {
                return Err(invalid(format!(
                    "table key {:?} has length {}, expected {width}",
                    w.0,
                    w.len()
                )));
            }
            if !v.is_finite() {
                return Err(invalid(format!("non-finite table value for {:?}", w.0)));
            }
        }
        if let Some((w, _)) = p_table.iter().find(|(_, v)| v.is_zero()) {
            return Err(invalid(format!("p vanishes on window {:?}", w.0)));
        }
        let bound = p_table
            .values()
            .flat_map(|&p| [p.abs(), p.abs().recip()])
            .chain(q_table.values().map(|q| q.abs()))
            .fold(T::one(), T::max);
        Ok(SamplingFunctions {
            window_radius,
            p_table,
            q_table,
            bound,
        })
    }

    /// Single-letter tables (`N = 0`): `p(ω) = p[ω(0)]`, `q(ω) = q[ω(0)]`.
    pub fn from_letters(p: &[T], q: &[T]) -> Result<Self> {
        if p.len() != q.len() {
            return Err(invalid("p and q must list one value per letter"));
        }
        let key = |s: usize| Word(vec![s]);
        Self::new(
            0,
            p.iter().enumerate().map(|(s, &v)| (key(s), v)).collect(),
            q.iter().enumerate().map(|(s, &v)| (key(s), v)).collect(),
        )
    }

    /// `p ≡ p0`, `q ≡ q0` on every letter of an alphabet of the given size.
    pub fn constant(alphabet_size: usize, p0: T, q0: T) -> Result<Self> {
        Self::from_letters(&vec![p0; alphabet_size], &vec![q0; alphabet_size])
    }

    pub fn window_radius(&self) -> usize {
        self.window_radius
    }

    pub fn bound(&self) -> T {
        self.bound
    }

    pub fn p(&self, window: &[usize]) -> Option<T> {
        self.p_table.get(&Word::from(window)).copied()
    }

    pub fn q(&self, window: &[usize]) -> Option<T> {
        self.q_table.get(&Word::from(window)).copied()
    }

    pub fn p_table(&self) -> &BTreeMap<Word, T> {
        &self.p_table
    }

    pub fn q_table(&self) -> &BTreeMap<Word, T> {
        &self.q_table
    }

    /// Fails on the first window word of `ω` over `[lo, hi]` missing from
    /// either table.
    pub fn check_coverage(&self, orbit: &OrbitWindow, lo: i64, hi: i64) -> Result<()> {
        let n = self.window_radius as i64;
        let orbit = orbit.covering(lo - n, hi + n)?;
        let symbols = orbit.slice(lo - n, hi + n).expect("covering window");
        for w in symbols.windows(2 * self.window_radius + 1) {
            if self.p(w).is_none() || self.q(w).is_none() {
                return Err(Error::UnknownWord(Word::from(w)));
            }
        }
        Ok(())
    }
}

/// Jacobi coefficients `a(n) = p(Tⁿω)`, `b(n) = q(Tⁿω)` over `[lo, hi]`.
///
/// `a(n)` couples sites `n − 1` and `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientWindow<T> {
    lo: i64,
    a: Vec<T>,
    b: Vec<T>,
}

impl<T: Scalar> CoefficientWindow<T> {
    pub fn new(lo: i64, a: Vec<T>, b: Vec<T>) -> Result<Self> {
        if a.is_empty() || a.len() != b.len() {
            return Err(invalid("a and b must be nonempty and of equal length"));
        }
        if let Some(i) = a.iter().position(|x| x.is_zero() || !x.is_finite()) {
            return Err(invalid(format!("a({}) must be finite and nonzero", lo + i as i64)));
        }
        if b.iter().any(|x| !x.is_finite()) {
            return Err(invalid("b must be finite"));
        }
        Ok(CoefficientWindow { lo, a, b })
    }

    pub fn from_fn(lo: i64, hi: i64, mut f: impl FnMut(i64) -> (T, T)) -> Result<Self> {
        if hi < lo {
            return Err(invalid("empty coefficient range"));
        }
        let (a, b) = (lo..=hi).map(&mut f).unzip();
        Self::new(lo, a, b)
    }

    pub fn constant(a: T, b: T, lo: i64, hi: i64) -> Result<Self> {
        Self::from_fn(lo, hi, |_| (a, b))
    }

    /// `a(n) = a_period[n mod |a_period|]`, likewise for `b`.
    pub fn periodic(a_period: &[T], b_period: &[T], lo: i64, hi: i64) -> Result<Self> {
        if a_period.is_empty() || b_period.is_empty() {
            return Err(invalid("periods must be nonempty"));
        }
        let (pa, pb) = (a_period.len() as i64, b_period.len() as i64);
        Self::from_fn(lo, hi, |n| {
            (a_period[n.rem_euclid(pa) as usize], b_period[n.rem_euclid(pb) as usize])
        })
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.a.len() as i64 - 1
    }

    pub fn covers(&self, lo: i64, hi: i64) -> bool {
        lo >= self.lo && hi <= self.hi()
    }

    pub fn require(&self, lo: i64, hi: i64) -> Result<()> {
        if self.covers(lo, hi) {
            Ok(())
        } else {
            Err(Error::OutOfRange {
                lo: self.lo,
                hi: self.hi(),
                need_lo: lo,
                need_hi: hi,
            })
        }
    }

    /// Off-diagonal coefficient at site `n`. Panics outside the window.
    #[inline]
    pub fn a(&self, n: i64) -> T {
        self.a[self.index(n)]
    }

    /// Diagonal coefficient at site `n`. Panics outside the window.
    #[inline]
    pub fn b(&self, n: i64) -> T {
        self.b[self.index(n)]
    }

    #[inline]
    fn index(&self, n: i64) -> usize {
        let i = n - self.lo;
        assert!(
            i >= 0 && (i as usize) < self.a.len(),
            "site {n} outside coefficient window [{}, {}]",
            self.lo,
            self.hi()
        );
        i as usize
    }

    pub fn a_values(&self) -> &[T] {
        &self.a
    }

    pub fn b_values(&self) -> &[T] {
        &self.b
    }

    /// Smallest `K ≥ 1` with `1/K ≤ |a| ≤ K` and `|b| ≤ K` on the window.
    pub fn bound(&self) -> T {
        self.a
            .iter()
            .flat_map(|&x| [x.abs(), x.abs().recip()])
            .chain(self.b.iter().map(|x| x.abs()))
            .fold(T::one(), T::max)
    }

    /// Converts to another scalar type.
    pub fn cast<U: Scalar>(&self) -> CoefficientWindow<U> {
        let conv = |x: &T| U::lit(x.to_f64_lossy());
        CoefficientWindow {
            lo: self.lo,
            a: self.a.iter().map(conv).collect(),
            b: self.b.iter().map(conv).collect(),
        }
    }

    /// Section dump, CSV `n,a,b`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "n,a,b")?;
        for (i, (a, b)) in self.a.iter().zip(&self.b).enumerate() {
            writeln!(
                out,
                "{},{},{}",
                self.lo + i as i64,
                crate::fmt_f64(a.to_f64_lossy()),
                crate::fmt_f64(b.to_f64_lossy())
            )?;
        }
        Ok(())
    }
}

/// Reads `a(n) = p[ω(n−N..=n+N)]`, `b(n) = q[ω(n−N..=n+N)]` for `n ∈ [lo, hi]`.
///
/// The orbit is extended through its generator when it does not cover
/// `[lo − N, hi + N]`.
pub fn assemble_coefficients<T: Scalar>(
    orbit: &OrbitWindow,
    sampling: &SamplingFunctions<T>,
    lo: i64,
    hi: i64,
) -> Result<CoefficientWindow<T>> {
    if hi < lo {
        return Err(invalid("empty coefficient range"));
    }
    let radius = sampling.window_radius();
    let n = radius as i64;
    let orbit = orbit.covering(lo - n, hi + n)?;
    let symbols = orbit.slice(lo - n, hi + n).expect("covering window");
    let mut a = Vec::with_capacity(symbols.len());
    let mut b = Vec::with_capacity(symbols.len());
    for w in symbols.windows(2 * radius + 1) {
        let missing = || Error::UnknownWord(Word::from(w));
        a.push(sampling.p(w).ok_or_else(missing)?);
        b.push(sampling.q(w).ok_or_else(missing)?);
    }
    CoefficientWindow::new(lo, a, b)
}
