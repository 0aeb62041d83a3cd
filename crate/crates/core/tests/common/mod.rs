//! Shared oracles for the integration tests: a classical RK4 integrator for
//! the Schrodinger equation (independent of the exact propagator under
//! test) and a seeded random-protocol generator.

use grover_control::{control_hamiltonian, Complex64, Overlap, PauliHamiltonian, Protocol, QubitState, Segment};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

fn axpy(a: f64, v: &QubitState, w: &QubitState) -> QubitState {
    QubitState::new(w.c0 + a * v.c0, w.c1 + a * v.c1)
}

/// d/dt |psi> = -i H |psi>.
fn schrodinger_rhs(h: &PauliHamiltonian, s: &QubitState) -> QubitState {
    let hs = h.apply(s);
    QubitState::new(
        Complex64::new(hs.c0.im, -hs.c0.re),
        Complex64::new(hs.c1.im, -hs.c1.re),
    )
}

/// Integrate one constant-Hamiltonian span with classical RK4.
pub fn rk4_span(h: &PauliHamiltonian, start: &QubitState, duration: f64, max_step: f64) -> QubitState {
    let steps = (duration / max_step).ceil().max(1.0) as usize;
    let dt = duration / steps as f64;
    let mut y = *start;
    for _ in 0..steps {
        let k1 = schrodinger_rhs(h, &y);
        let k2 = schrodinger_rhs(h, &axpy(dt / 2.0, &k1, &y));
        let k3 = schrodinger_rhs(h, &axpy(dt / 2.0, &k2, &y));
        let k4 = schrodinger_rhs(h, &axpy(dt, &k3, &y));
        y = QubitState::new(
            y.c0 + dt / 6.0 * (k1.c0 + 2.0 * k2.c0 + 2.0 * k3.c0 + k4.c0),
            y.c1 + dt / 6.0 * (k1.c1 + 2.0 * k2.c1 + 2.0 * k3.c1 + k4.c1),
        );
    }
    y
}

/// Integrate a full protocol with RK4 at the given step bound.
pub fn rk4_protocol(x: Overlap, protocol: &Protocol, start: &QubitState, max_step: f64) -> QubitState {
    let mut psi = *start;
    for seg in protocol.segments() {
        let h = control_hamiltonian(x, seg.u).expect("validated control");
        psi = rk4_span(&h, &psi, seg.duration, max_step);
    }
    psi
}

/// Random protocol with 1..=max_segments segments, durations in (0, 2],
/// controls in [-1, 1].
pub fn random_protocol(rng: &mut ChaCha8Rng, max_segments: usize) -> Protocol {
    let count = rng.gen_range(1..=max_segments);
    let segments: Vec<Segment> = (0..count)
        .map(|_| Segment {
            duration: rng.gen_range(1e-3..=2.0),
            u: rng.gen_range(-1.0..=1.0),
        })
        .collect();
    Protocol::new("random", segments).expect("durations and controls in range")
}

pub fn max_component_diff(a: &QubitState, b: &QubitState) -> f64 {
    (a.c0 - b.c0)
        .norm()
        .max((a.c1 - b.c1).norm())
}
