use serde::{Deserialize, Serialize};

/// Intersections narrower than this are rounding slivers between grid-aligned
/// endpoints, not spectral content, and are dropped.
pub const SLIVER_WIDTH: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    GammaZeroSet,
    FiniteSection,
    Intersection,
}

/// A finite union of closed intervals, kept sorted and pairwise disjoint.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumEstimate {
    method: Method,
    intervals: Vec<[f64; 2]>,
}

impl SpectrumEstimate {
    /// Sorts and merges overlapping or touching intervals.
    pub fn new(method: Method, intervals: impl IntoIterator<Item = [f64; 2]>) -> Self {
        let mut raw: Vec<[f64; 2]> = intervals
            .into_iter()
            .filter(|iv| iv[0] <= iv[1] && iv[0].is_finite() && iv[1].is_finite())
            .collect();
        raw.sort_by(|x, y| x[0].total_cmp(&y[0]).then(x[1].total_cmp(&y[1])));
        let mut merged: Vec<[f64; 2]> = Vec::with_capacity(raw.len());
        for iv in raw {
            match merged.last_mut() {
                Some(last) if iv[0] <= last[1] => last[1] = last[1].max(iv[1]),
                _ => merged.push(iv),
            }
        }
        SpectrumEstimate {
            method,
            intervals: merged,
        }
    }

    pub fn empty(method: Method) -> Self {
        SpectrumEstimate {
            method,
            intervals: Vec::new(),
        }
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn intervals(&self) -> &[[f64; 2]] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    /// Lebesgue measure.
    pub fn measure(&self) -> f64 {
        self.intervals.iter().map(|iv| iv[1] - iv[0]).sum()
    }

    pub fn contains(&self, e: f64) -> bool {
        let i = self.intervals.partition_point(|iv| iv[1] < e);
        self.intervals.get(i).is_some_and(|iv| iv[0] <= e)
    }

    /// Distance from `e` to the set; infinite when the set is empty.
    pub fn distance(&self, e: f64) -> f64 {
        let i = self.intervals.partition_point(|iv| iv[1] < e);
        let right = self.intervals.get(i).map_or(f64::INFINITY, |iv| (iv[0] - e).max(0.0));
        let left = i.checked_sub(1).map_or(f64::INFINITY, |j| e - self.intervals[j][1]);
        right.min(left)
    }

    /// Intersection, without the slivers described at [`SLIVER_WIDTH`].
    pub fn intersect(&self, other: &Self) -> Self {
        let (a, b) = (&self.intervals, &other.intervals);
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < a.len() && j < b.len() {
            let lo = a[i][0].max(b[j][0]);
            let hi = a[i][1].min(b[j][1]);
            if hi - lo > SLIVER_WIDTH {
                out.push([lo, hi]);
            }
            if a[i][1] < b[j][1] {
                i += 1;
            } else {
                j += 1;
            }
        }
        SpectrumEstimate {
            method: Method::Intersection,
            intervals: out,
        }
    }

    pub fn union(&self, other: &Self) -> Self {
        Self::new(self.method, self.intervals.iter().chain(&other.intervals).copied())
    }

    /// Lebesgue measure of the symmetric difference.
    pub fn symmetric_difference_measure(&self, other: &Self) -> f64 {
        let shared = self.intersect(other).measure();
        (self.measure() + other.measure() - 2.0 * shared).max(0.0)
    }

    /// Hausdorff distance between the two closed sets; infinite when exactly
    /// one of them is empty.
    pub fn hausdorff(&self, other: &Self) -> f64 {
        match (self.is_empty(), other.is_empty()) {
            (true, true) => 0.0,
            (true, false) | (false, true) => f64::INFINITY,
            _ => self.directed_hausdorff(other).max(other.directed_hausdorff(self)),
        }
    }

    /// `sup_{x ∈ self} dist(x, other)`. The distance to a union of intervals
    /// is piecewise linear, so its maximum over an interval sits at an
    /// endpoint or at the midpoint of a gap of `other`.
    fn directed_hausdorff(&self, other: &Self) -> f64 {
        let mut worst: f64 = 0.0;
        for iv in &self.intervals {
            worst = worst.max(other.distance(iv[0])).max(other.distance(iv[1]));
        }
        for gap in other.intervals.windows(2) {
            let mid = 0.5 * (gap[0][1] + gap[1][0]);
            if self.contains(mid) {
                worst = worst.max(other.distance(mid));
            }
        }
        worst
    }

    /// The widest interval, if any.
    pub fn widest(&self) -> Option<[f64; 2]> {
        self.intervals
            .iter()
            .copied()
            .reduce(|best, iv| if iv[1] - iv[0] > best[1] - best[0] { iv } else { best })
    }

    pub fn with_method(mut self, method: Method) -> Self {
        self.method = method;
        self
    }

    /// JSON object `{method, intervals, measure}`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "method": self.method,
            "intervals": self.intervals,
            "measure": self.measure(),
        })
    }
}
