//! Two-level dynamics of the search problem: Hamiltonians in the Pauli
//! basis, exact constant-segment propagation, and sampled trajectories.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::protocols::Protocol;

/// Below this Bloch frequency the propagator switches to the small-angle
/// limit sin(w dt)/w -> dt to avoid 0/0.
const OMEGA_EPS: f64 = 1e-14;

/// Overlap x = <s|w> between the uniform superposition and the marked
/// state; x = 2^(-n/2) for an n-qubit search space. Restricted to (0, 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Overlap(f64);

impl Overlap {
    pub fn new(x: f64) -> Result<Self> {
        if x.is_finite() && 0.0 < x && x < 1.0 {
            Ok(Overlap(x))
        } else {
            Err(Error::OverlapRange(x))
        }
    }

    /// Overlap for n qubits, x = 2^(-n/2).
    pub fn from_qubits(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::QubitCount);
        }
        Ok(Overlap((-(n as f64) / 2.0).exp2()))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// sqrt(1 - x^2), the amplitude orthogonal to the marked state.
    pub fn ortho(self) -> f64 {
        (1.0 - self.0 * self.0).sqrt()
    }
}

/// Two-component complex state in the {|w>, |w_perp>} basis spanning the
/// search subspace. The marked state is the first basis vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitState {
    pub c0: Complex64,
    pub c1: Complex64,
}

impl QubitState {
    pub fn new(c0: Complex64, c1: Complex64) -> Self {
        QubitState { c0, c1 }
    }

    pub fn norm_sq(&self) -> f64 {
        self.c0.norm_sqr() + self.c1.norm_sqr()
    }

    /// Success probability |<w|psi>|^2.
    pub fn fidelity(&self) -> f64 {
        self.c0.norm_sqr()
    }

    /// Inner product <self|other>, conjugate-linear in `self`.
    pub fn inner(&self, other: &QubitState) -> Complex64 {
        self.c0.conj() * other.c0 + self.c1.conj() * other.c1
    }
}

/// Hermitian 2x2 Hamiltonian e0*I + nx*sigma_x + ny*sigma_y + nz*sigma_z.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PauliHamiltonian {
    pub e0: f64,
    pub nx: f64,
    pub ny: f64,
    pub nz: f64,
}

impl PauliHamiltonian {
    pub fn new(e0: f64, nx: f64, ny: f64, nz: f64) -> Self {
        PauliHamiltonian { e0, nx, ny, nz }
    }

    /// Precession frequency |n| of the traceless part.
    pub fn omega(&self) -> f64 {
        (self.nx * self.nx + self.ny * self.ny + self.nz * self.nz).sqrt()
    }

    /// Matrix-vector product H|s> (result is generally not normalized).
    pub fn apply(&self, s: &QubitState) -> QubitState {
        let off = Complex64::new(self.nx, -self.ny);
        QubitState {
            c0: (self.e0 + self.nz) * s.c0 + off * s.c1,
            c1: off.conj() * s.c0 + (self.e0 - self.nz) * s.c1,
        }
    }

    /// Matrix element <bra|H|ket>.
    pub fn sandwich(&self, bra: &QubitState, ket: &QubitState) -> Complex64 {
        bra.inner(&self.apply(ket))
    }
}

/// The four problem Hamiltonians: a marked-state projector piece `hw`,
/// a superposition projector piece `hs`, and their half-sum/half-difference
/// `h0` (drift) and `hd` (control direction).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroverHamiltonians {
    pub hw: PauliHamiltonian,
    pub hs: PauliHamiltonian,
    pub h0: PauliHamiltonian,
    pub hd: PauliHamiltonian,
}

/// Hamiltonians of the search problem restricted to the two-dimensional
/// invariant subspace, as functions of the overlap x.
pub fn grover_hamiltonians(x: Overlap) -> GroverHamiltonians {
    let (x, s) = (x.value(), x.ortho());
    GroverHamiltonians {
        hw: PauliHamiltonian::new(0.5, 0.0, 0.0, 0.5),
        hs: PauliHamiltonian::new(0.5, x * s, 0.0, x * x - 0.5),
        h0: PauliHamiltonian::new(0.5, x * s / 2.0, 0.0, x * x / 2.0),
        hd: PauliHamiltonian::new(0.0, -x * s / 2.0, 0.0, (1.0 - x * x) / 2.0),
    }
}

/// H(u) = h0 + u * hd with the admissible bound |u| <= 1. u = +1 recovers
/// `hw`, u = -1 recovers `hs`, u = 0 is the drift.
pub fn control_hamiltonian(x: Overlap, u: f64) -> Result<PauliHamiltonian> {
    if !u.is_finite() || u.abs() > 1.0 {
        return Err(Error::ControlBound(u));
    }
    let h = grover_hamiltonians(x);
    Ok(PauliHamiltonian::new(
        h.h0.e0 + u * h.hd.e0,
        h.h0.nx + u * h.hd.nx,
        h.h0.ny + u * h.hd.ny,
        h.h0.nz + u * h.hd.nz,
    ))
}

/// Uniform superposition expressed in the search subspace: [x, sqrt(1-x^2)].
pub fn initial_state(x: Overlap) -> QubitState {
    QubitState::new(
        Complex64::new(x.value(), 0.0),
        Complex64::new(x.ortho(), 0.0),
    )
}

/// Exact propagation by exp(-i H dt):
///
///   exp(-i e0 dt) * [cos(w dt) I - i sin(w dt) (n.sigma)/w],  w = |n|.
///
/// Negative dt propagates backward. The global phase from e0 is kept.
pub fn propagate_const(state: &QubitState, h: &PauliHamiltonian, dt: f64) -> QubitState {
    let w = h.omega();
    let (c, f) = if w < OMEGA_EPS {
        (1.0, dt)
    } else {
        ((w * dt).cos(), (w * dt).sin() / w)
    };
    let phase = Complex64::from_polar(1.0, -h.e0 * dt);
    // -i f (n.sigma) entries: diag -+ i f nz, off-diag -f ny -+ i f nx.
    let a00 = Complex64::new(c, -f * h.nz);
    let a01 = Complex64::new(-f * h.ny, -f * h.nx);
    let a10 = Complex64::new(f * h.ny, -f * h.nx);
    let a11 = Complex64::new(c, f * h.nz);
    QubitState {
        c0: phase * (a00 * state.c0 + a01 * state.c1),
        c1: phase * (a10 * state.c0 + a11 * state.c1),
    }
}

/// Time-stamped states sampled along a protocol. Times are strictly
/// increasing and start at 0.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<QubitState>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn final_state(&self) -> &QubitState {
        self.states.last().expect("trajectory has at least one sample")
    }
}

/// Evolve `initial` through every segment of `protocol`, sampling each
/// segment at `samples_per_segment` interior/endpoint times. Both endpoints
/// of every segment appear in the output (shared boundaries once), and each
/// sample is one exact propagation from the segment start, so the final
/// state equals the plain sequential composition bit for bit.
pub fn evolve(
    x: Overlap,
    initial: &QubitState,
    protocol: &Protocol,
    samples_per_segment: usize,
) -> Result<Trajectory> {
    if samples_per_segment == 0 {
        return Err(Error::TooFew {
            what: "samples per segment",
            min: 1,
            got: 0,
        });
    }
    let segments = protocol.segments();
    let mut times = Vec::with_capacity(1 + segments.len() * samples_per_segment);
    let mut states = Vec::with_capacity(times.capacity());
    times.push(0.0);
    states.push(*initial);
    let mut t0 = 0.0;
    let mut psi = *initial;
    for seg in segments {
        let h = control_hamiltonian(x, seg.u)?;
        for j in 1..=samples_per_segment {
            let frac = j as f64 / samples_per_segment as f64;
            times.push(t0 + seg.duration * frac);
            states.push(propagate_const(&psi, &h, seg.duration * frac));
        }
        psi = *states.last().expect("just pushed");
        t0 += seg.duration;
    }
    Ok(Trajectory { times, states })
}
