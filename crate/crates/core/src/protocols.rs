//! Control protocols (piecewise-constant u) and the closed-form algebra for
//! the bang-singular-bang family: the residual amplitude, the
//! reach-the-target relation t2(t1), and the optimal switching times.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::dynamics::Overlap;
use crate::error::{Error, Result};

/// One piecewise-constant leg: hold control `u` for `duration`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub duration: f64,
    pub u: f64,
}

/// A labeled sequence of constant-control segments. Construction validates
/// every duration (positive, finite) and every control (|u| <= 1).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawProtocol")]
pub struct Protocol {
    label: String,
    segments: Vec<Segment>,
}

#[derive(Deserialize)]
struct RawProtocol {
    label: String,
    segments: Vec<Segment>,
}

impl TryFrom<RawProtocol> for Protocol {
    type Error = Error;

    fn try_from(raw: RawProtocol) -> Result<Self> {
        Protocol::new(raw.label, raw.segments)
    }
}

impl Protocol {
    pub fn new(label: impl Into<String>, segments: Vec<Segment>) -> Result<Self> {
        for seg in &segments {
            if !seg.duration.is_finite() || seg.duration <= 0.0 {
                return Err(Error::Duration(seg.duration));
            }
            if !seg.u.is_finite() || seg.u.abs() > 1.0 {
                return Err(Error::ControlBound(seg.u));
            }
        }
        Ok(Protocol {
            label: label.into(),
            segments,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn total_time(&self) -> f64 {
        self.segments.iter().map(|s| s.duration).sum()
    }

    /// Control value at time t. Segment intervals are closed on the left;
    /// times at or beyond the end of the protocol take the last segment.
    pub fn u_at(&self, t: f64) -> f64 {
        let mut start = 0.0;
        for seg in &self.segments {
            start += seg.duration;
            if t < start {
                return seg.u;
            }
        }
        self.segments.last().map_or(0.0, |s| s.u)
    }

    /// Start times of segments after the first: the switching instants.
    pub fn switch_times(&self) -> Vec<f64> {
        let mut t = 0.0;
        let mut out = Vec::new();
        for seg in &self.segments[..self.segments.len().saturating_sub(1)] {
            t += seg.duration;
            out.push(t);
        }
        out
    }

    /// Singular protocol: drift only (u = 0) for pi/x, which steers the
    /// initial state exactly onto the marked state.
    pub fn singular(x: Overlap) -> Self {
        Protocol {
            label: "singular".into(),
            segments: vec![Segment {
                duration: PI / x.value(),
                u: 0.0,
            }],
        }
    }

    /// The textbook search iteration as a control protocol:
    /// round(pi/(4x)) repetitions of (pi, u=+1) then (pi, u=-1).
    pub fn grover(x: Overlap) -> Self {
        let n = (PI / (4.0 * x.value())).round() as usize;
        Self::grover_cycles(x, n.max(1))
    }

    /// Grover protocol with an explicit cycle count.
    pub fn grover_cycles(_x: Overlap, cycles: usize) -> Self {
        let mut segments = Vec::with_capacity(2 * cycles);
        for _ in 0..cycles {
            segments.push(Segment { duration: PI, u: 1.0 });
            segments.push(Segment { duration: PI, u: -1.0 });
        }
        Protocol {
            label: "grover".into(),
            segments,
        }
    }

    /// Bang-singular-bang: (t1, +1), (t2, 0), (t1, -1). Zero-length legs are
    /// omitted, so (0, t2) degenerates to the singular structure.
    pub fn bang_singular_bang(t1: f64, t2: f64) -> Result<Self> {
        for &t in &[t1, t2] {
            if !t.is_finite() || t < 0.0 {
                return Err(Error::NegativeDuration(t));
            }
        }
        let mut segments = Vec::with_capacity(3);
        if t1 > 0.0 {
            segments.push(Segment { duration: t1, u: 1.0 });
        }
        if t2 > 0.0 {
            segments.push(Segment { duration: t2, u: 0.0 });
        }
        if t1 > 0.0 {
            segments.push(Segment { duration: t1, u: -1.0 });
        }
        Ok(Protocol {
            label: "bang-singular-bang".into(),
            segments,
        })
    }

    /// Bang-only comparison family: an opening bang (t1, +1), then 2n inner
    /// bangs of equal length (tf - 2 t1)/(2n) starting with u = -1, then a
    /// closing bang (t1, -1). Total time tf, 2n + 1 switchings.
    pub fn multiple_bang(t1: f64, n: usize, tf: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::TooFew {
                what: "inner bang pairs",
                min: 1,
                got: 0,
            });
        }
        if !t1.is_finite() || !tf.is_finite() || t1 <= 0.0 {
            return Err(Error::Duration(t1));
        }
        if 2.0 * t1 >= tf {
            return Err(Error::BangOverrun { two_t1: 2.0 * t1, tf });
        }
        let inner = (tf - 2.0 * t1) / (2.0 * n as f64);
        let mut segments = Vec::with_capacity(2 * n + 2);
        segments.push(Segment { duration: t1, u: 1.0 });
        for k in 0..2 * n {
            segments.push(Segment {
                duration: inner,
                u: if k % 2 == 0 { -1.0 } else { 1.0 },
            });
        }
        segments.push(Segment { duration: t1, u: -1.0 });
        Ok(Protocol {
            label: "multiple-bang".into(),
            segments,
        })
    }
}

/// Residual amplitude on the unmarked component after a bang-singular-bang
/// protocol (global phase dropped):
///
///   psi1 = sqrt(1-x^2) [cos(x t2/2)(1 - 4x^2 sin^2(t1/2))
///                       - 2x sin(x t2/2) sin(t1)].
///
/// Success probability of the protocol is 1 - psi1^2.
pub fn psi1_magnitude(t1: f64, t2: f64, x: Overlap) -> f64 {
    let (x, s) = (x.value(), x.ortho());
    let half = (t1 / 2.0).sin();
    s * ((x * t2 / 2.0).cos() * (1.0 - 4.0 * x * x * half * half)
        - 2.0 * x * (x * t2 / 2.0).sin() * t1.sin())
}

/// Singular-leg duration that zeroes the residual amplitude for a given
/// opening bang t1:
///
///   tan(x t2 / 2) = (1 - 2x^2 + 2x^2 cos t1) / (2x sin t1),
///
/// with the branch x t2 / 2 in (0, pi): a negative principal arctangent is
/// shifted up by pi. Singular where sin t1 vanishes.
pub fn t2_of_t1(t1: f64, x: Overlap) -> Result<f64> {
    let xv = x.value();
    let s1 = t1.sin();
    if s1.abs() < 1e-12 {
        return Err(Error::TangentSingular(t1));
    }
    let num = 1.0 - 2.0 * xv * xv + 2.0 * xv * xv * t1.cos();
    let mut a = (num / (2.0 * xv * s1)).atan();
    if a < 0.0 {
        a += PI;
    }
    Ok(2.0 * a / xv)
}

/// The optimal switching times of the time-optimal protocol.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptimalTimes {
    pub t1: f64,
    pub t2: f64,
    pub tf: f64,
}

/// Closed-form optimal times. The opening-bang length solves
///
///   4x^2(x^2-1) cos^2(t1) - 2(2x^2-1)^2 cos(t1) + (2x^2-1)^2 = 0,
///
/// taking the root cos(t1*) = (2x^2 - 1) / (2(x^2 - 1)); t2* then follows
/// from `t2_of_t1` and tf* = 2 t1* + t2*. The chosen root leaves [-1, 1]
/// for x > sqrt(3)/2, where the structure stops being optimal.
pub fn optimal_times(x: Overlap) -> Result<OptimalTimes> {
    let xv = x.value();
    let cos_t1 = (2.0 * xv * xv - 1.0) / (2.0 * (xv * xv - 1.0));
    if cos_t1.abs() > 1.0 {
        return Err(Error::OptimumUndefined(xv));
    }
    let t1 = cos_t1.acos();
    let t2 = t2_of_t1(t1, x)?;
    Ok(OptimalTimes {
        t1,
        t2,
        tf: 2.0 * t1 + t2,
    })
}

/// Small-x expansion of the optimal times:
///
///   t1 = pi/3 + x^2/sqrt(3),  t2 = pi/x - 2 sqrt(3),
///
/// and tf = 2 t1 + t2 = pi/x + 2 pi/3 - 2 sqrt(3) + O(x^2). The total
/// advantage over the singular protocol approaches
/// 2 sqrt(3) - 2 pi/3 ~ 0.436 pi.
pub fn asymptotic_times(x: Overlap) -> OptimalTimes {
    let xv = x.value();
    let t1 = PI / 3.0 + xv * xv / 3f64.sqrt();
    let t2 = PI / xv - 2.0 * 3f64.sqrt();
    OptimalTimes {
        t1,
        t2,
        tf: 2.0 * t1 + t2,
    }
}
