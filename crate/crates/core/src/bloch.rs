//! Bloch-sphere reduction of the dynamics: (theta, phi) coordinates, the
//! tangent fields induced by the problem Hamiltonians, the singular arc,
//! and local arc classification.
//!
//! A state [cos(theta/2), sin(theta/2) e^{i phi}] (global phase dropped)
//! maps the marked state to the north pole theta = 0. The traceless part
//! n.sigma of a Hamiltonian induces the tangent field
//! nx V_x + ny V_y + nz V_z with
//!
//!   V_z = (0, 2),
//!   V_x = (-2 sin phi, -2 cos phi cot theta),
//!   V_y = (2 cos phi, -2 sin phi cot theta),
//!
//! in (d theta, d phi) components; the identity part acts only on the
//! global phase and has no image.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::dynamics::{Overlap, QubitState, Trajectory};
use crate::error::{Error, Result};

/// Operations that involve cot(theta) reject points closer than this to a
/// pole, where the chart degenerates.
pub const POLE_BAND: f64 = 1e-3;

/// Tolerance below which |sin phi| makes the (alpha, beta) frame singular.
const PHI_EPS: f64 = 1e-12;

/// Central-difference step for Lie derivatives along a flow.
const LIE_STEP: f64 = 1e-6;

/// Maximum |alpha| accepted as "on the singular arc".
const ARC_EPS: f64 = 1e-8;

/// Point on the Bloch sphere; theta in [0, pi], phi in [0, 2 pi).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlochPoint {
    pub theta: f64,
    pub phi: f64,
}

/// Tangent vector in (d theta, d phi) components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangentVector {
    pub d_theta: f64,
    pub d_phi: f64,
}

/// One Bloch-projected trajectory sample; phi is unwrapped, so it may leave
/// [0, 2 pi).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlochSample {
    pub t: f64,
    pub theta: f64,
    pub phi: f64,
}

/// Project a state to Bloch coordinates, dropping the global phase. Poles
/// map to phi = 0.
pub fn state_to_bloch(state: &QubitState) -> BlochPoint {
    let m0 = state.c0.norm();
    let m1 = state.c1.norm();
    let theta = 2.0 * m0.min(1.0).acos();
    let mut phi = if m0 < 1e-15 || m1 < 1e-15 {
        0.0
    } else {
        (state.c1.arg() - state.c0.arg()).rem_euclid(2.0 * PI)
    };
    if phi >= 2.0 * PI {
        phi = 0.0;
    }
    BlochPoint { theta, phi }
}

/// Representative state [cos(theta/2), sin(theta/2) e^{i phi}].
pub fn bloch_to_state(p: &BlochPoint) -> QubitState {
    QubitState::new(
        Complex64::new((p.theta / 2.0).cos(), 0.0),
        Complex64::from_polar((p.theta / 2.0).sin(), p.phi),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PauliAxis {
    X,
    Y,
    Z,
}

fn check_band(theta: f64) -> Result<f64> {
    if !(POLE_BAND..=PI - POLE_BAND).contains(&theta) {
        return Err(Error::PoleBand(theta));
    }
    Ok(theta.cos() / theta.sin())
}

/// Tangent field of one Pauli generator. The x and y fields involve
/// cot(theta) and reject points inside the polar guard band; the z field is
/// global.
pub fn pauli_field(axis: PauliAxis, p: &BlochPoint) -> Result<TangentVector> {
    match axis {
        PauliAxis::Z => Ok(TangentVector {
            d_theta: 0.0,
            d_phi: 2.0,
        }),
        PauliAxis::X => {
            let cot = check_band(p.theta)?;
            Ok(TangentVector {
                d_theta: -2.0 * p.phi.sin(),
                d_phi: -2.0 * p.phi.cos() * cot,
            })
        }
        PauliAxis::Y => {
            let cot = check_band(p.theta)?;
            Ok(TangentVector {
                d_theta: 2.0 * p.phi.cos(),
                d_phi: -2.0 * p.phi.sin() * cot,
            })
        }
    }
}

/// The control-relevant fields at a point: X (from the superposition
/// projector), Y (from the marked projector), and the drift/control pair
/// f = (X + Y)/2, g = (Y - X)/2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProblemFields {
    pub x_field: TangentVector,
    pub y_field: TangentVector,
    pub f: TangentVector,
    pub g: TangentVector,
}

pub fn problem_fields(x: Overlap, p: &BlochPoint) -> Result<ProblemFields> {
    let cot = check_band(p.theta)?;
    let (xv, s) = (x.value(), x.ortho());
    // Hs traceless part: x s sigma_x + (x^2 - 1/2) sigma_z.
    let x_field = TangentVector {
        d_theta: -2.0 * xv * s * p.phi.sin(),
        d_phi: (2.0 * xv * xv - 1.0) - 2.0 * xv * s * p.phi.cos() * cot,
    };
    // Hw traceless part: sigma_z / 2.
    let y_field = TangentVector {
        d_theta: 0.0,
        d_phi: 1.0,
    };
    let f = TangentVector {
        d_theta: (x_field.d_theta + y_field.d_theta) / 2.0,
        d_phi: (x_field.d_phi + y_field.d_phi) / 2.0,
    };
    let g = TangentVector {
        d_theta: (y_field.d_theta - x_field.d_theta) / 2.0,
        d_phi: (y_field.d_phi - x_field.d_phi) / 2.0,
    };
    Ok(ProblemFields { x_field, y_field, f, g })
}

/// Right-hand side of the reduced dynamics, f + u g.
pub fn reduced_rhs(x: Overlap, p: &BlochPoint, u: f64) -> Result<TangentVector> {
    if !u.is_finite() || u.abs() > 1.0 {
        return Err(Error::ControlBound(u));
    }
    let fields = problem_fields(x, p)?;
    Ok(TangentVector {
        d_theta: fields.f.d_theta + u * fields.g.d_theta,
        d_phi: fields.f.d_phi + u * fields.g.d_phi,
    })
}

/// Coefficients of the commutator [f, g] = alpha f + beta g:
///
///   alpha = -sqrt(1-x^2) (x cot(theta) + sqrt(1-x^2) cos phi) / sin phi,
///   beta  = (-x sqrt(1-x^2) cot(theta) + x^2 cos phi) / sin phi.
///
/// The frame degenerates where sin phi = 0 and at the poles.
pub fn alpha_beta(x: Overlap, p: &BlochPoint) -> Result<(f64, f64)> {
    let cot = check_band(p.theta)?;
    let sphi = p.phi.sin();
    if sphi.abs() < PHI_EPS {
        return Err(Error::PhiPole(p.phi));
    }
    let cphi = p.phi.cos();
    let (xv, s) = (x.value(), x.ortho());
    let alpha = -s * (xv * cot + s * cphi) / sphi;
    let beta = (-xv * s * cot + xv * xv * cphi) / sphi;
    Ok((alpha, beta))
}

/// The singular arc alpha = 0 solved for theta:
/// cot(theta) = -sqrt(1-x^2) cos(phi) / x, with theta in (0, pi).
pub fn singular_arc_theta(x: Overlap, phi: f64) -> f64 {
    let cot = -x.ortho() * phi.cos() / x.value();
    PI / 2.0 - cot.atan()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ArcKind {
    /// L_X alpha < 0 < L_Y alpha: trajectories cross the arc transversally
    /// in the time-advantageous direction.
    Fast,
    /// L_Y alpha < 0 < L_X alpha.
    Slow,
    /// The Lie derivatives share a sign; the arc is not singular there.
    NotSingular,
}

/// Local classification of a singular-arc point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ArcClassification {
    pub kind: ArcKind,
    pub l_x_alpha: f64,
    pub l_y_alpha: f64,
    /// (L_X alpha + L_Y alpha) / (L_X alpha - L_Y alpha); the control that
    /// holds the trajectory on the arc.
    pub singular_u: f64,
}

fn lie_derivative_alpha(x: Overlap, p: &BlochPoint, v: &TangentVector) -> Result<f64> {
    let plus = alpha_beta(
        x,
        &BlochPoint {
            theta: p.theta + LIE_STEP * v.d_theta,
            phi: p.phi + LIE_STEP * v.d_phi,
        },
    )?
    .0;
    let minus = alpha_beta(
        x,
        &BlochPoint {
            theta: p.theta - LIE_STEP * v.d_theta,
            phi: p.phi - LIE_STEP * v.d_phi,
        },
    )?
    .0;
    Ok((plus - minus) / (2.0 * LIE_STEP))
}

/// Classify a point of the singular arc by the numeric Lie derivatives of
/// alpha along the X and Y flows. Errors if the point is not on the arc.
pub fn classify_arc(x: Overlap, p: &BlochPoint) -> Result<ArcClassification> {
    let (alpha, _) = alpha_beta(x, p)?;
    if alpha.abs() > ARC_EPS {
        return Err(Error::NotOnArc { alpha });
    }
    let fields = problem_fields(x, p)?;
    let l_x = lie_derivative_alpha(x, p, &fields.x_field)?;
    let l_y = lie_derivative_alpha(x, p, &fields.y_field)?;
    let kind = if l_x < 0.0 && l_y > 0.0 {
        ArcKind::Fast
    } else if l_x > 0.0 && l_y < 0.0 {
        ArcKind::Slow
    } else {
        ArcKind::NotSingular
    };
    Ok(ArcClassification {
        kind,
        l_x_alpha: l_x,
        l_y_alpha: l_y,
        singular_u: (l_x + l_y) / (l_x - l_y),
    })
}

/// Per-cycle polar progress of the bang-bang search iteration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GroverThetaAnalysis {
    /// Colatitude of the uniform superposition, 2 atan(sqrt(1-x^2)/x).
    pub theta_initial: f64,
    /// Largest decrease of theta one (Y pi, X pi) cycle can achieve,
    /// 4 x sqrt(1-x^2).
    pub delta_theta_max: f64,
    /// theta_initial / delta_theta_max, approximately pi/(4x) for small x.
    pub n_estimate: f64,
}

pub fn grover_theta_analysis(x: Overlap) -> GroverThetaAnalysis {
    let theta_initial = 2.0 * (x.ortho() / x.value()).atan();
    let delta_theta_max = 4.0 * x.value() * x.ortho();
    GroverThetaAnalysis {
        theta_initial,
        delta_theta_max,
        n_estimate: theta_initial / delta_theta_max,
    }
}

/// Project a trajectory to Bloch coordinates, unwrapping phi so consecutive
/// samples differ by less than pi.
pub fn project_trajectory(traj: &Trajectory) -> Vec<BlochSample> {
    let mut out: Vec<BlochSample> = Vec::with_capacity(traj.len());
    let mut offset = 0.0;
    let mut prev_raw = f64::NAN;
    for (t, s) in traj.times.iter().zip(&traj.states) {
        let p = state_to_bloch(s);
        if prev_raw.is_finite() {
            let mut d = p.phi - prev_raw;
            while d > PI {
                d -= 2.0 * PI;
                offset -= 2.0 * PI;
            }
            while d < -PI {
                d += 2.0 * PI;
                offset += 2.0 * PI;
            }
        }
        prev_raw = p.phi;
        out.push(BlochSample {
            t: *t,
            theta: p.theta,
            phi: p.phi + offset,
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{
        control_hamiltonian, evolve, initial_state, propagate_const, PauliHamiltonian,
    };
    use crate::protocols::Protocol;

    fn x(v: f64) -> Overlap {
        Overlap::new(v).unwrap()
    }

    fn wrap_to_pi(d: f64) -> f64 {
        let mut d = d;
        while d > PI {
            d -= 2.0 * PI;
        }
        while d < -PI {
            d += 2.0 * PI;
        }
        d
    }

    /// Central difference of the projected flow of H at s.
    fn flow_derivative(h: &PauliHamiltonian, s: &QubitState) -> (f64, f64) {
        let e = 1e-6;
        let plus = state_to_bloch(&propagate_const(s, h, e));
        let minus = state_to_bloch(&propagate_const(s, h, -e));
        (
            (plus.theta - minus.theta) / (2.0 * e),
            wrap_to_pi(plus.phi - minus.phi) / (2.0 * e),
        )
    }

    #[test]
    fn coordinate_round_trip() {
        for i in 0..40 {
            let theta = 0.1 + (PI - 0.2) * i as f64 / 39.0;
            let phi = (7.3 * i as f64).rem_euclid(2.0 * PI);
            let p = BlochPoint { theta, phi };
            let s = bloch_to_state(&p);
            assert!((s.norm_sq() - 1.0).abs() < 1e-14);
            let q = state_to_bloch(&s);
            assert!((q.theta - theta).abs() < 1e-12);
            assert!(wrap_to_pi(q.phi - phi).abs() < 1e-12);
        }
    }

    #[test]
    fn round_trip_is_phase_invariant() {
        let s = QubitState::new(
            Complex64::from_polar(0.6, 1.1),
            Complex64::from_polar(0.8, -0.4),
        );
        let back = bloch_to_state(&state_to_bloch(&s));
        // Same ray: overlap has unit magnitude.
        assert!((s.inner(&back).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn special_points() {
        let north = state_to_bloch(&QubitState::new(1.0.into(), 0.0.into()));
        assert_eq!(north.theta, 0.0);
        assert_eq!(north.phi, 0.0);
        let south = state_to_bloch(&QubitState::new(0.0.into(), 1.0.into()));
        assert!((south.theta - PI).abs() < 1e-15);
        assert_eq!(south.phi, 0.0);
        let eq = state_to_bloch(&QubitState::new(
            Complex64::new(0.5f64.sqrt(), 0.0),
            Complex64::new(0.0, 0.5f64.sqrt()),
        ));
        assert!((eq.theta - PI / 2.0).abs() < 1e-12);
        assert!((eq.phi - PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn initial_state_projects_onto_the_reference_point() {
        for &v in &[0.1, 0.25, 0.5] {
            let o = x(v);
            let p = state_to_bloch(&initial_state(o));
            assert!((p.theta - grover_theta_analysis(o).theta_initial).abs() < 1e-13);
            assert_eq!(p.phi, 0.0);
        }
    }

    #[test]
    fn pauli_fields_at_reference_points() {
        let p = BlochPoint {
            theta: PI / 2.0,
            phi: PI / 2.0,
        };
        let vz = pauli_field(PauliAxis::Z, &p).unwrap();
        assert_eq!((vz.d_theta, vz.d_phi), (0.0, 2.0));
        let vx = pauli_field(PauliAxis::X, &p).unwrap();
        assert!((vx.d_theta - (-2.0)).abs() < 1e-12);
        assert!(vx.d_phi.abs() < 1e-12);
        let vy = pauli_field(PauliAxis::Y, &p).unwrap();
        assert!(vy.d_theta.abs() < 1e-12);
        assert!(vy.d_phi.abs() < 1e-12);
    }

    #[test]
    fn pole_band_is_enforced() {
        let near_pole = BlochPoint {
            theta: 5e-4,
            phi: 1.0,
        };
        assert!(pauli_field(PauliAxis::X, &near_pole).is_err());
        assert!(pauli_field(PauliAxis::Y, &near_pole).is_err());
        assert!(pauli_field(PauliAxis::Z, &near_pole).is_ok());
        assert!(problem_fields(x(0.5), &near_pole).is_err());
        assert!(alpha_beta(x(0.5), &near_pole).is_err());
        let high = BlochPoint {
            theta: PI - 5e-4,
            phi: 1.0,
        };
        assert!(pauli_field(PauliAxis::X, &high).is_err());
    }

    #[test]
    fn pauli_fields_match_projected_flows() {
        // The tangent fields must be the actual pushforward of the unitary
        // flow: compare against central differences of propagate + project.
        for i in 0..25 {
            let theta = 0.3 + 2.5 * (i as f64 / 24.0);
            let phi = (2.4 * i as f64).rem_euclid(2.0 * PI);
            let p = BlochPoint { theta, phi };
            let s = bloch_to_state(&p);
            let (nx, ny, nz) = (
                (i as f64 * 0.31).sin(),
                (i as f64 * 0.17).cos(),
                (i as f64 * 0.53).sin() * 0.8,
            );
            let h = PauliHamiltonian::new(0.4, nx, ny, nz);
            let vx = pauli_field(PauliAxis::X, &p).unwrap();
            let vy = pauli_field(PauliAxis::Y, &p).unwrap();
            let vz = pauli_field(PauliAxis::Z, &p).unwrap();
            let predicted = (
                nx * vx.d_theta + ny * vy.d_theta + nz * vz.d_theta,
                nx * vx.d_phi + ny * vy.d_phi + nz * vz.d_phi,
            );
            let (dt, dp) = flow_derivative(&h, &s);
            assert!((dt - predicted.0).abs() < 1e-5, "point {i}: d_theta");
            assert!((dp - predicted.1).abs() < 1e-5, "point {i}: d_phi");
        }
    }

    #[test]
    fn identity_part_has_no_image() {
        let p = BlochPoint {
            theta: 1.1,
            phi: 0.7,
        };
        let s = bloch_to_state(&p);
        let h = PauliHamiltonian::new(0.9, 0.0, 0.0, 0.0);
        let (dt, dp) = flow_derivative(&h, &s);
        assert!(dt.abs() < 1e-9);
        assert!(dp.abs() < 1e-9);
    }

    #[test]
    fn x_field_vanishes_at_the_initial_point() {
        for &v in &[0.1, 0.25, 0.5, 0.7] {
            let o = x(v);
            let p = state_to_bloch(&initial_state(o));
            let fields = problem_fields(o, &p).unwrap();
            assert!(fields.x_field.d_theta.abs() < 1e-12);
            assert!(fields.x_field.d_phi.abs() < 1e-12);
            // And Y is the unit phi-advance everywhere.
            assert_eq!(fields.y_field.d_theta, 0.0);
            assert_eq!(fields.y_field.d_phi, 1.0);
        }
    }

    #[test]
    fn reduced_rhs_matches_full_dynamics() {
        for i in 0..20 {
            let o = x(0.1 + 0.04 * i as f64);
            let p = BlochPoint {
                theta: 0.4 + 0.1 * i as f64,
                phi: (1.9 * i as f64).rem_euclid(2.0 * PI),
            };
            let u = -1.0 + 2.0 * (i as f64 / 19.0);
            let v = reduced_rhs(o, &p, u).unwrap();
            let h = control_hamiltonian(o, u).unwrap();
            let (dt, dp) = flow_derivative(&h, &bloch_to_state(&p));
            assert!((v.d_theta - dt).abs() < 1e-5);
            assert!((v.d_phi - dp).abs() < 1e-5);
        }
        let p = BlochPoint {
            theta: PI / 2.0,
            phi: PI / 2.0,
        };
        // At the equator with phi = pi/2, u = -1 descends at the maximal
        // polar rate 2 x sqrt(1-x^2).
        let v = reduced_rhs(x(0.5), &p, -1.0).unwrap();
        assert!((v.d_theta - (-3f64.sqrt() / 2.0)).abs() < 1e-14);
        assert!(reduced_rhs(x(0.5), &p, 1.5).is_err());
    }

    #[test]
    fn commutator_expands_in_the_frame() {
        // Finite-difference Lie bracket [f, g] against alpha f + beta g.
        let step = 1e-5;
        for i in 0..15 {
            let o = x(0.15 + 0.05 * i as f64);
            let p = BlochPoint {
                theta: 0.5 + 0.12 * i as f64,
                phi: 0.3 + 0.35 * i as f64,
            };
            let fields = |q: &BlochPoint| problem_fields(o, q).unwrap();
            let shift = |a: &TangentVector, sign: f64| BlochPoint {
                theta: p.theta + sign * step * a.d_theta,
                phi: p.phi + sign * step * a.d_phi,
            };
            let at = fields(&p);
            // [f, g] = d/ds g(p + s f) - d/ds f(p + s g) at s = 0.
            let g_along_f = (fields(&shift(&at.f, 1.0)), fields(&shift(&at.f, -1.0)));
            let f_along_g = (fields(&shift(&at.g, 1.0)), fields(&shift(&at.g, -1.0)));
            let bracket = TangentVector {
                d_theta: (g_along_f.0.g.d_theta - g_along_f.1.g.d_theta
                    - (f_along_g.0.f.d_theta - f_along_g.1.f.d_theta))
                    / (2.0 * step),
                d_phi: (g_along_f.0.g.d_phi - g_along_f.1.g.d_phi
                    - (f_along_g.0.f.d_phi - f_along_g.1.f.d_phi))
                    / (2.0 * step),
            };
            let (alpha, beta) = alpha_beta(o, &p).unwrap();
            let expected = TangentVector {
                d_theta: alpha * at.f.d_theta + beta * at.g.d_theta,
                d_phi: alpha * at.f.d_phi + beta * at.g.d_phi,
            };
            assert!(
                (bracket.d_theta - expected.d_theta).abs() < 1e-5
                    && (bracket.d_phi - expected.d_phi).abs() < 1e-5,
                "point {i}: bracket ({}, {}) vs frame ({}, {})",
                bracket.d_theta,
                bracket.d_phi,
                expected.d_theta,
                expected.d_phi
            );
        }
    }

    #[test]
    fn alpha_changes_sign_across_the_equator_meridian() {
        let o = x(0.5);
        let mid = BlochPoint {
            theta: PI / 2.0,
            phi: PI / 2.0,
        };
        assert!(alpha_beta(o, &mid).unwrap().0.abs() < 1e-14);
        let plus = BlochPoint {
            theta: PI / 2.0,
            phi: PI / 2.0 + 0.05,
        };
        let minus = BlochPoint {
            theta: PI / 2.0,
            phi: PI / 2.0 - 0.05,
        };
        assert!(alpha_beta(o, &plus).unwrap().0 > 0.0);
        assert!(alpha_beta(o, &minus).unwrap().0 < 0.0);
        let on_axis = BlochPoint {
            theta: 1.0,
            phi: 0.0,
        };
        assert!(alpha_beta(o, &on_axis).is_err());
    }

    #[test]
    fn singular_arc_points_are_roots_of_alpha() {
        for &v in &[0.1, 0.25, 0.5] {
            let o = x(v);
            assert!((singular_arc_theta(o, PI / 2.0) - PI / 2.0).abs() < 1e-15);
            for i in 0..20 {
                let phi = 0.2 + (PI - 0.4) * i as f64 / 19.0;
                let theta = singular_arc_theta(o, phi);
                assert!(theta > 0.0 && theta < PI);
                let (alpha, _) = alpha_beta(o, &BlochPoint { theta, phi }).unwrap();
                assert!(alpha.abs() < 1e-13);
            }
        }
    }

    #[test]
    fn arc_classification_is_fast_with_zero_singular_control() {
        for &v in &[0.1, 0.25, 0.5] {
            let o = x(v);
            let expected = 1.0 - v * v;
            for i in 0..20 {
                let phi = 0.2 + (PI - 0.4) * i as f64 / 19.0;
                let p = BlochPoint {
                    theta: singular_arc_theta(o, phi),
                    phi,
                };
                let c = classify_arc(o, &p).unwrap();
                assert_eq!(c.kind, ArcKind::Fast);
                assert!((c.l_y_alpha - expected).abs() < 1e-5);
                assert!((c.l_x_alpha + expected).abs() < 1e-5);
                assert!(c.singular_u.abs() < 1e-8);
            }
        }
    }

    #[test]
    fn off_arc_points_are_rejected() {
        let o = x(0.5);
        let p = BlochPoint {
            theta: 1.2,
            phi: 0.9,
        };
        match classify_arc(o, &p) {
            Err(Error::NotOnArc { .. }) => {}
            other => panic!("expected NotOnArc, got {other:?}"),
        }
    }

    #[test]
    fn theta_budget_per_cycle() {
        let o = Overlap::from_qubits(5).unwrap();
        let a = grover_theta_analysis(o);
        assert!((a.delta_theta_max - 0.6959705453537527).abs() < 1e-12);
        assert!((a.n_estimate - 4.0).abs() < 0.2);
        // Small-x estimate approaches pi/(4x).
        let tiny = Overlap::from_qubits(20).unwrap();
        let b = grover_theta_analysis(tiny);
        assert!((b.n_estimate / (PI / (4.0 * tiny.value())) - 1.0).abs() < 1e-2);
    }

    #[test]
    fn projection_unwraps_phi() {
        // Under u = +1 the reduced dynamics is pure phi-advance at unit
        // rate; after 4 pi the unwrapped phase must not fold back.
        let o = x(0.5);
        let p = Protocol::new(
            "y-only",
            vec![crate::protocols::Segment {
                duration: 4.0 * PI,
                u: 1.0,
            }],
        )
        .unwrap();
        let traj = evolve(o, &initial_state(o), &p, 400).unwrap();
        let samples = project_trajectory(&traj);
        let last = samples.last().unwrap();
        assert!((last.phi - 4.0 * PI).abs() < 1e-10);
        assert!((last.theta - samples[0].theta).abs() < 1e-12);
        for w in samples.windows(2) {
            assert!((w[1].phi - w[0].phi - traj.times[1]).abs() < 1e-9);
        }
    }
}
