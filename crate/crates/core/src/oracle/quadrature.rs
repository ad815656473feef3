//! Globally adaptive Gauss–Kronrod quadrature (10-point Gauss embedded in a
//! 21-point Kronrod rule) with variable maps for unbounded ranges.
//!
//! The engine keeps every panel in a max-heap keyed on its error estimate and
//! bisects the worst panel until the summed estimate meets the tolerance. The
//! per-panel estimate is the raw `|K21 - G10|` difference, which is pessimistic
//! for smooth integrands and never optimistic.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::OracleConfig;
use crate::error::{Error, Result};

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077208136072942,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];

// Gauss weights for the odd-indexed Kronrod nodes XGK[1], XGK[3], ...
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];

/// Integral value with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub subdivisions: usize,
}

/// How a panel coordinate `t` maps onto the integration variable `x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Map {
    /// `x = t`
    Identity,
    /// `x = origin + scale * t / (1 - t)` for `t ∈ [0, 1)`
    RightTail { origin: f64, scale: f64 },
    /// `x = origin - scale * t / (1 - t)` for `t ∈ [0, 1)`
    LeftTail { origin: f64, scale: f64 },
    /// `x = center * exp(±t / (1 - t))` for `t ∈ [0, 1)`; `upward` picks the sign.
    Exponential { center: f64, upward: bool },
}

impl Map {
    /// Returns `(x, dx/dt)`.
    fn apply(self, t: f64) -> (f64, f64) {
        match self {
            Map::Identity => (t, 1.0),
            Map::RightTail { origin, scale } => {
                let s = 1.0 - t;
                (origin + scale * t / s, scale / (s * s))
            }
            Map::LeftTail { origin, scale } => {
                let s = 1.0 - t;
                (origin - scale * t / s, scale / (s * s))
            }
            Map::Exponential { center, upward } => {
                let s = 1.0 - t;
                let y = if upward { t / s } else { -t / s };
                let x = center * y.exp();
                (x, x / (s * s))
            }
        }
    }
}

/// One initial panel `[a, b]` in mapped coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub map: Map,
    pub a: f64,
    pub b: f64,
}

impl Segment {
    pub fn interval(a: f64, b: f64) -> Self {
        Segment {
            map: Map::Identity,
            a,
            b,
        }
    }

    pub fn mapped(map: Map) -> Self {
        Segment { map, a: 0.0, b: 1.0 }
    }
}

struct Panel {
    seg: usize,
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn eval_mapped<F: Fn(f64) -> f64>(f: &F, map: Map, t: f64) -> f64 {
    let (x, jac) = map.apply(t);
    // an underflowed jacobian means the node sits at the origin of an
    // exponential map, where the mapped integrand has already decayed
    if !x.is_finite() || jac == 0.0 {
        return 0.0;
    }
    let v = f(x);
    if v == 0.0 {
        0.0
    } else {
        v * jac
    }
}

/// Applies the 21-point rule on `[a, b]`, returning `(K21, |K21 - G10|)`.
fn gauss_kronrod<F: Fn(f64) -> f64>(f: &F, map: Map, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = eval_mapped(f, map, center);
    let mut kronrod = WGK[10] * fc;
    let mut gauss = 0.0;
    for (j, (&x, &w)) in XGK.iter().zip(WGK.iter()).take(10).enumerate() {
        let dx = half * x;
        let pair = eval_mapped(f, map, center - dx) + eval_mapped(f, map, center + dx);
        kronrod += w * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// Integrates `f` over the union of `segments`.
pub fn integrate<F>(f: F, segments: &[Segment], cfg: &OracleConfig) -> Result<Estimate>
where
    F: Fn(f64) -> f64,
{
    let mut heap = BinaryHeap::with_capacity(segments.len() + 2 * cfg.max_subdivisions);
    let mut total = 0.0;
    let mut total_err = 0.0;
    for (seg, s) in segments.iter().enumerate() {
        let (value, error) = gauss_kronrod(&f, s.map, s.a, s.b);
        total += value;
        total_err += error;
        heap.push(Panel {
            seg,
            a: s.a,
            b: s.b,
            value,
            error,
        });
    }
    let mut subdivisions = 0;
    let tolerance = |total: f64| cfg.abs_tol.max(cfg.rel_tol * total.abs());
    loop {
        if !total.is_finite() || !total_err.is_finite() {
            return Err(Error::NonConvergence {
                estimate: total_err,
                subdivisions,
            });
        }
        if total_err <= tolerance(total) {
            break;
        }
        if subdivisions >= cfg.max_subdivisions {
            return Err(Error::NonConvergence {
                estimate: total_err,
                subdivisions,
            });
        }
        let worst = heap.pop().expect("at least one panel");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // the panel cannot be split further in floating point
            return Err(Error::NonConvergence {
                estimate: total_err,
                subdivisions,
            });
        }
        let map = segments[worst.seg].map;
        let (v1, e1) = gauss_kronrod(&f, map, worst.a, mid);
        let (v2, e2) = gauss_kronrod(&f, map, mid, worst.b);
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.error;
        heap.push(Panel {
            seg: worst.seg,
            a: worst.a,
            b: mid,
            value: v1,
            error: e1,
        });
        heap.push(Panel {
            seg: worst.seg,
            a: mid,
            b: worst.b,
            value: v2,
            error: e2,
        });
        subdivisions += 1;
    }
    // resum to shed the drift of the running totals
    let (value, error) = compensated_sums(heap.iter().map(|p| (p.value, p.error)));
    Ok(Estimate {
        value,
        error,
        subdivisions,
    })
}

fn compensated_sums(items: impl Iterator<Item = (f64, f64)>) -> (f64, f64) {
    let mut sum = 0.0_f64;
    let mut comp = 0.0_f64;
    let mut err = 0.0;
    for (v, e) in items {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
        err += e;
    }
    (sum + comp, err)
}

/// `∫_a^b f`, no variable change.
pub fn integrate_interval<F>(f: F, a: f64, b: f64, cfg: &OracleConfig) -> Result<Estimate>
where
    F: Fn(f64) -> f64,
{
    integrate(f, &[Segment::interval(a, b)], cfg)
}

/// `∫_0^∞ f` through `x = center * e^y`, which turns a power singularity
/// `x^s` (`s > -1`) at the origin into an exponentially decaying tail in `y`.
pub fn integrate_positive<F>(f: F, center: f64, cfg: &OracleConfig) -> Result<Estimate>
where
    F: Fn(f64) -> f64,
{
    let segments = [
        Segment::mapped(Map::Exponential {
            center,
            upward: false,
        }),
        Segment::mapped(Map::Exponential {
            center,
            upward: true,
        }),
    ];
    integrate(f, &segments, cfg)
}

/// `∫_ℝ f`, split at `breakpoints` (kinks, modes) with algebraic tail maps
/// of width `scale` beyond the outermost points.
pub fn integrate_real_line<F>(
    f: F,
    breakpoints: &[f64],
    scale: f64,
    cfg: &OracleConfig,
) -> Result<Estimate>
where
    F: Fn(f64) -> f64,
{
    let mut points: Vec<f64> = breakpoints.to_vec();
    points.sort_by(f64::total_cmp);
    points.dedup();
    let first = *points.first().unwrap_or(&0.0);
    let last = *points.last().unwrap_or(&0.0);
    let mut segments = vec![Segment::mapped(Map::LeftTail {
        origin: first,
        scale,
    })];
    segments.extend(points.windows(2).map(|w| Segment::interval(w[0], w[1])));
    segments.push(Segment::mapped(Map::RightTail {
        origin: last,
        scale,
    }));
    integrate(f, &segments, cfg)
}
