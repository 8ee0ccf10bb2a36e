use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Monotone function `g` with `|Q(ρ) − Q(σ)| ≤ g(d(ρ, σ))`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ContinuityFn {
    /// `g(s) = c·s`.
    Linear {
        c: f64,
        #[serde(default = "unbounded", skip_serializing_if = "is_unbounded")]
        domain_max: f64,
    },
    /// Piecewise-linear through `points`, which start at `(0, 0)` and are
    /// strictly increasing in both coordinates.
    Table { points: Vec<(f64, f64)> },
    /// `g(s) = slope·s + coeff·[(1+s)log₂(1+s) − s log₂ s]`, the shape of
    /// the tight entropy continuity bounds.
    Entropic {
        slope: f64,
        coeff: f64,
        #[serde(default = "unit")]
        domain_max: f64,
    },
    /// `g(s) = inner(factor·s)`; converts between distances that bound one
    /// another linearly.
    Scaled { factor: f64, inner: Box<ContinuityFn> },
    /// `g(s) = inner(√(factor·s))`, e.g. Pinsker's `T ≤ √(S ln2 / 2)`.
    Root { factor: f64, inner: Box<ContinuityFn> },
}

fn unbounded() -> f64 {
    f64::INFINITY
}

fn is_unbounded(x: &f64) -> bool {
    x.is_infinite()
}

fn unit() -> f64 {
    1.0
}

fn entropic_shape(s: f64) -> f64 {
    if s <= 0.0 {
        return 0.0;
    }
    (1.0 + s) * (1.0 + s).log2() - s * s.log2()
}

impl ContinuityFn {
    pub fn linear(c: f64) -> Self {
        ContinuityFn::Linear { c, domain_max: f64::INFINITY }
    }

    /// Linear `g` for a distance bounded by 1, such as trace distance.
    pub fn linear_unit(c: f64) -> Self {
        ContinuityFn::Linear { c, domain_max: 1.0 }
    }

    pub fn identity() -> Self {
        Self::linear(1.0)
    }

    pub fn entropic(slope: f64, coeff: f64) -> Self {
        ContinuityFn::Entropic { slope, coeff, domain_max: 1.0 }
    }

    pub fn table(points: Vec<(f64, f64)>) -> Result<Self> {
        let g = ContinuityFn::Table { points };
        g.validate()?;
        Ok(g)
    }

    pub fn scaled(factor: f64, inner: ContinuityFn) -> Self {
        ContinuityFn::Scaled { factor, inner: Box::new(inner) }
    }

    pub fn root(factor: f64, inner: ContinuityFn) -> Self {
        ContinuityFn::Root { factor, inner: Box::new(inner) }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidArgument(format!("continuity function: {m}")));
        match self {
            ContinuityFn::Linear { c, domain_max } => {
                if !(c.is_finite() && *c > 0.0) || !(*domain_max > 0.0) {
                    return bad("linear constant and domain must be positive");
                }
            }
            ContinuityFn::Table { points } => {
                if points.len() < 2 || points[0] != (0.0, 0.0) {
                    return bad("table needs at least two points starting at (0, 0)");
                }
                if points
                    .windows(2)
                    .any(|w| !(w[1].0 > w[0].0 && w[1].1 > w[0].1) || !w[1].0.is_finite() || !w[1].1.is_finite())
                {
                    return bad("table must be strictly increasing in both coordinates");
                }
            }
            ContinuityFn::Entropic { slope, coeff, domain_max } => {
                if !(*slope >= 0.0 && *coeff >= 0.0 && slope + coeff > 0.0) || !(*domain_max > 0.0) {
                    return bad("entropic coefficients must be nonnegative and not both zero");
                }
            }
            ContinuityFn::Scaled { factor, inner } | ContinuityFn::Root { factor, inner } => {
                if !(factor.is_finite() && *factor > 0.0) {
                    return bad("scale factor must be positive");
                }
                inner.validate()?;
            }
        }
        Ok(())
    }

    pub fn domain_max(&self) -> f64 {
        match self {
            ContinuityFn::Linear { domain_max, .. } | ContinuityFn::Entropic { domain_max, .. } => *domain_max,
            ContinuityFn::Table { points } => points.last().map_or(0.0, |p| p.0),
            ContinuityFn::Scaled { factor, inner } => inner.domain_max() / factor,
            ContinuityFn::Root { factor, inner } => inner.domain_max().powi(2) / factor,
        }
    }

    /// Largest attainable value, `g(domain_max)`.
    pub fn range_max(&self) -> f64 {
        self.eval_unchecked(self.domain_max())
    }

    fn eval_unchecked(&self, s: f64) -> f64 {
        match self {
            ContinuityFn::Linear { c, .. } => c * s,
            ContinuityFn::Table { points } => {
                for w in points.windows(2) {
                    let ((x0, y0), (x1, y1)) = (w[0], w[1]);
                    if s <= x1 {
                        return y0 + (y1 - y0) * (s - x0) / (x1 - x0);
                    }
                }
                points.last().map_or(0.0, |p| p.1)
            }
            ContinuityFn::Entropic { slope, coeff, .. } => slope * s + coeff * entropic_shape(s),
            ContinuityFn::Scaled { factor, inner } => inner.eval_unchecked(factor * s),
            ContinuityFn::Root { factor, inner } => inner.eval_unchecked((factor * s).sqrt()),
        }
    }

    /// `g(s)` for `s ∈ [0, domain_max]`.
    pub fn eval(&self, s: f64) -> Result<f64> {
        let max = self.domain_max();
        if s.is_nan() || s < 0.0 || s > max * (1.0 + 1e-12) + 1e-15 {
            return Err(Error::OutOfDomain { value: s, max });
        }
        Ok(self.eval_unchecked(s.min(max)))
    }

    /// `g⁻¹(v)`. Negative `v` maps to 0; values above `g(domain_max)` are
    /// out of range.
    pub fn inv(&self, v: f64) -> Result<f64> {
        if v.is_nan() {
            return Err(Error::OutOfDomain { value: v, max: self.range_max() });
        }
        if v <= 0.0 {
            return Ok(0.0);
        }
        let top = self.range_max();
        if v > top * (1.0 + 1e-12) {
            return Err(Error::OutOfDomain { value: v, max: top });
        }
        Ok(self.inv_unchecked(v.min(top)))
    }

    /// Like [`inv`](Self::inv) but saturates at `domain_max`.
    pub fn inv_clamped(&self, v: f64) -> f64 {
        if v.is_nan() || v <= 0.0 {
            return 0.0;
        }
        let top = self.range_max();
        if v >= top {
            return self.domain_max();
        }
        self.inv_unchecked(v)
    }

    fn inv_unchecked(&self, v: f64) -> f64 {
        match self {
            ContinuityFn::Linear { c, .. } => v / c,
            ContinuityFn::Table { points } => {
                for w in points.windows(2) {
                    let ((x0, y0), (x1, y1)) = (w[0], w[1]);
                    if v <= y1 {
                        return x0 + (x1 - x0) * (v - y0) / (y1 - y0);
                    }
                }
                self.domain_max()
            }
            ContinuityFn::Entropic { .. } => {
                let (mut lo, mut hi) = (0.0, self.domain_max());
                if hi.is_infinite() {
                    hi = 1.0;
                    while self.eval_unchecked(hi) < v {
                        hi *= 2.0;
                    }
                }
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if self.eval_unchecked(mid) < v {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                    if hi - lo <= 1e-16 * hi.max(1e-300) {
                        break;
                    }
                }
                0.5 * (lo + hi)
            }
            ContinuityFn::Scaled { factor, inner } => inner.inv_unchecked(v) / factor,
            ContinuityFn::Root { factor, inner } => inner.inv_unchecked(v).powi(2) / factor,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            ContinuityFn::Linear { c, .. } => format!("linear(c={c:.6})"),
            ContinuityFn::Table { points } => format!("table({} points)", points.len()),
            ContinuityFn::Entropic { slope, coeff, .. } => {
                format!("entropic(slope={slope:.6}, coeff={coeff:.6})")
            }
            ContinuityFn::Scaled { factor, inner } => format!("scaled({factor:.6}, {})", inner.describe()),
            ContinuityFn::Root { factor, inner } => format!("root({factor:.6}, {})", inner.describe()),
        }
    }
}
