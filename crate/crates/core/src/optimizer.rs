//! Numerical optimization drivers: one-parameter searches over protocol
//! families (coarse grid plus golden-section refinement) and projected
//! gradient ascent on gridded controls, plus the qubit-count sweep table.

use std::f64::consts::PI;

use serde::Serialize;

use crate::dynamics::{control_hamiltonian, initial_state, propagate_const, Overlap};
use crate::error::{Error, Result};
use crate::pmp::adjoint_gradient;
use crate::protocols::{optimal_times, Protocol};

/// Coarse-scan resolution of the one-parameter searches.
const GRID_POINTS: usize = 400;

/// Interval width at which golden-section refinement stops.
const GOLDEN_TOL: f64 = 1e-8;

/// Projected-gradient norm at which the ascent stops.
const PG_TOL: f64 = 1e-6;

/// Sufficient-increase constant of the backtracking line search.
const ARMIJO: f64 = 1e-4;

/// Largest trial step the line search may grow to.
const STEP_CAP: f64 = 1e4;

/// Result of a one-parameter protocol-family search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScalarOptResult {
    pub best_param: f64,
    pub best_fidelity: f64,
    /// Objective evaluations spent (coarse scan plus refinement).
    pub evaluations: usize,
}

/// Result of projected gradient ascent on a piecewise-constant control grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GradOptResult {
    pub u_grid: Vec<f64>,
    /// Fidelity after each accepted step, front-loaded with the fidelity of
    /// the initial (all-zero) control. Non-decreasing.
    pub fidelity_history: Vec<f64>,
    /// Number of accepted gradient steps.
    pub iterations: usize,
}

/// One row of the qubit-count sweep: total times of the optimal,
/// constant-drift, and bang-bang search protocols at x = 2^(-n/2).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub n: u32,
    pub x: f64,
    pub tf_optimal: f64,
    pub tf_singular: f64,
    pub tf_grover: f64,
    /// tf_singular - tf_optimal; approaches (2 sqrt(3) - 2 pi / 3) at
    /// large n.
    pub diff: f64,
}

/// Terminal fidelity of a protocol run from the standard initial state.
pub fn protocol_fidelity(x: Overlap, protocol: &Protocol) -> f64 {
    let mut psi = initial_state(x);
    for seg in protocol.segments() {
        let h = control_hamiltonian(x, seg.u).expect("segment controls are validated");
        psi = propagate_const(&psi, &h, seg.duration);
    }
    psi.fidelity()
}

/// Golden-section maximization on [a, b]; ties shrink toward the left end,
/// so plateaus resolve to the smallest parameter.
fn golden_max(f: &mut dyn FnMut(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while b - a > GOLDEN_TOL {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Coarse scan of [lo, hi] followed by golden-section refinement inside the
/// bracket around the best grid point. First-best wins on grid ties.
fn maximize_on(lo: f64, hi: f64, mut f: impl FnMut(f64) -> f64) -> ScalarOptResult {
    let mut evals = 0usize;
    let mut obj = |t: f64| {
        evals += 1;
        f(t)
    };
    let mut ts = Vec::with_capacity(GRID_POINTS);
    let mut best_i = 0usize;
    let mut best_v = f64::NEG_INFINITY;
    for i in 0..GRID_POINTS {
        let t = lo + (hi - lo) * i as f64 / (GRID_POINTS - 1) as f64;
        let v = obj(t);
        if v > best_v {
            best_v = v;
            best_i = i;
        }
        ts.push(t);
    }
    let a = ts[best_i.saturating_sub(1)];
    let b = ts[(best_i + 1).min(GRID_POINTS - 1)];
    let t_star = golden_max(&mut obj, a, b);
    let v_star = obj(t_star);
    drop(obj);
    let (best_param, best_fidelity) = if v_star >= best_v {
        (t_star, v_star)
    } else {
        (ts[best_i], best_v)
    };
    ScalarOptResult {
        best_param,
        best_fidelity,
        evaluations: evals,
    }
}

/// Best opening-bang duration of the bang-singular-bang family at fixed
/// total time: maximizes fidelity over t1 in [0, tf/2] with the singular
/// leg absorbing the remainder.
pub fn optimize_t1_bsb(x: Overlap, tf: f64) -> Result<ScalarOptResult> {
    if !tf.is_finite() || tf <= 0.0 {
        return Err(Error::Duration(tf));
    }
    Ok(maximize_on(0.0, tf / 2.0, |t1| {
        let t2 = (tf - 2.0 * t1).max(0.0);
        let p = Protocol::bang_singular_bang(t1, t2).expect("durations are non-negative");
        protocol_fidelity(x, &p)
    }))
}

/// Best opening-bang duration of the 2n-inner-bang family at fixed total
/// time, over t1 strictly inside (0, tf/2).
pub fn optimize_t1_multibang(x: Overlap, tf: f64, n: usize) -> Result<ScalarOptResult> {
    if n == 0 {
        return Err(Error::TooFew {
            what: "inner bang pairs",
            min: 1,
            got: 0,
        });
    }
    if !tf.is_finite() || tf <= 0.0 {
        return Err(Error::Duration(tf));
    }
    let hi = tf / 2.0;
    let margin = hi / (GRID_POINTS + 1) as f64;
    Ok(maximize_on(margin, hi - margin, |t1| {
        let p = Protocol::multiple_bang(t1, n, tf).expect("t1 is strictly inside (0, tf/2)");
        protocol_fidelity(x, &p)
    }))
}

/// Projected gradient ascent on the terminal fidelity of a piecewise-
/// constant control with `cells` equal cells on [0, tf], started from
/// u = 0. Backtracking (Armijo) line search with shrink 0.5 and an initial
/// step of 1.0 that doubles after every accepted step; controls are clipped
/// to [-1, 1]. Stops at `max_iter` accepted steps, a projected-gradient
/// norm below 1e-6, or a fully stalled line search.
pub fn gradient_descent(x: Overlap, tf: f64, cells: usize, max_iter: usize) -> Result<GradOptResult> {
    if cells < 10 {
        return Err(Error::TooFew {
            what: "control cells",
            min: 10,
            got: cells,
        });
    }
    if !tf.is_finite() || tf <= 0.0 {
        return Err(Error::Duration(tf));
    }
    let dt = tf / cells as f64;
    let fid = |u: &[f64]| {
        let mut psi = initial_state(x);
        for &uu in u {
            let h = control_hamiltonian(x, uu).expect("iterates are clipped to [-1, 1]");
            psi = propagate_const(&psi, &h, dt);
        }
        psi.fidelity()
    };
    let mut u = vec![0.0; cells];
    let mut history = vec![fid(&u)];
    let mut step = 1.0;
    for _ in 0..max_iter {
        // adjoint_gradient differentiates the cost -fidelity/2.
        let ascent: Vec<f64> = adjoint_gradient(x, &u, dt)?
            .iter()
            .map(|g| -2.0 * g)
            .collect();
        let pg_sq: f64 = u
            .iter()
            .zip(&ascent)
            .map(|(&uu, &g)| {
                let blocked = (uu >= 1.0 && g > 0.0) || (uu <= -1.0 && g < 0.0);
                if blocked {
                    0.0
                } else {
                    g * g
                }
            })
            .sum();
        if pg_sq.sqrt() < PG_TOL {
            break;
        }
        let mut accepted = false;
        while step > 1e-14 {
            let cand: Vec<f64> = u
                .iter()
                .zip(&ascent)
                .map(|(&uu, &g)| (uu + step * g).clamp(-1.0, 1.0))
                .collect();
            let gain_bound: f64 = cand
                .iter()
                .zip(&u)
                .zip(&ascent)
                .map(|((&c, &old), &g)| g * (c - old))
                .sum();
            let f_new = fid(&cand);
            if f_new >= history.last().expect("non-empty") + ARMIJO * gain_bound {
                u = cand;
                history.push(f_new);
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
        step = (step * 2.0).min(STEP_CAP);
    }
    Ok(GradOptResult {
        iterations: history.len() - 1,
        u_grid: u,
        fidelity_history: history,
    })
}

/// Total-time comparison across qubit counts n_min..=n_max (x = 2^(-n/2)):
/// closed-form optimum, constant drift (pi/x), and the bang-bang search
/// protocol (2 pi per cycle, round(pi/(4x)) cycles).
pub fn sweep_times(n_min: u32, n_max: u32) -> Result<Vec<SweepRow>> {
    if n_min < 1 || n_min > n_max || n_max > 60 {
        return Err(Error::SweepRange {
            lo: n_min,
            hi: n_max,
        });
    }
    let mut rows = Vec::with_capacity((n_max - n_min + 1) as usize);
    for n in n_min..=n_max {
        let x = Overlap::from_qubits(n)?;
        let xv = x.value();
        let t = optimal_times(x)?;
        let tf_singular = PI / xv;
        let tf_grover = 2.0 * PI * (PI / (4.0 * xv)).round();
        rows.push(SweepRow {
            n,
            x: xv,
            tf_optimal: t.tf,
            tf_singular,
            tf_grover,
            diff: tf_singular - t.tf,
        });
    }
    Ok(rows)
}
