//! CSV emission with a fixed 17-significant-digit float format, so output
//! files are byte-stable across runs and round-trip exactly through f64
//! parsing.

use std::f64::consts::PI;
use std::io::{self, Write};

use crate::bloch::BlochSample;
use crate::dynamics::Trajectory;
use crate::optimizer::SweepRow;
use crate::pmp::SwitchingRecord;

fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

/// `t,re0,im0,re1,im1,fidelity` — one row per trajectory sample.
pub fn write_trajectory(mut w: impl Write, traj: &Trajectory) -> io::Result<()> {
    writeln!(w, "t,re0,im0,re1,im1,fidelity")?;
    for (t, s) in traj.times.iter().zip(&traj.states) {
        writeln!(
            w,
            "{},{},{},{},{},{}",
            fmt(*t),
            fmt(s.c0.re),
            fmt(s.c0.im),
            fmt(s.c1.re),
            fmt(s.c1.im),
            fmt(s.fidelity())
        )?;
    }
    Ok(())
}

/// `t,theta,phi` — Bloch-projected trajectory samples (phi unwrapped).
pub fn write_bloch(mut w: impl Write, samples: &[BlochSample]) -> io::Result<()> {
    writeln!(w, "t,theta,phi")?;
    for s in samples {
        writeln!(w, "{},{},{}", fmt(s.t), fmt(s.theta), fmt(s.phi))?;
    }
    Ok(())
}

/// `phi,theta` — singular-arc samples.
pub fn write_arc(mut w: impl Write, points: &[(f64, f64)]) -> io::Result<()> {
    writeln!(w, "phi,theta")?;
    for (phi, theta) in points {
        writeln!(w, "{},{}", fmt(*phi), fmt(*theta))?;
    }
    Ok(())
}

/// `t,u,phi,hc` — sampled switching-function records from a verification.
pub fn write_records(mut w: impl Write, records: &[SwitchingRecord]) -> io::Result<()> {
    writeln!(w, "t,u,phi,hc")?;
    for r in records {
        writeln!(w, "{},{},{},{}", fmt(r.t), fmt(r.u), fmt(r.phi), fmt(r.hc))?;
    }
    Ok(())
}

/// `n,x,tf_optimal,tf_singular,tf_grover,diff` — sweep table. With
/// `pi_units` the four time columns are scaled to multiples of pi.
pub fn write_sweep(mut w: impl Write, rows: &[SweepRow], pi_units: bool) -> io::Result<()> {
    writeln!(w, "n,x,tf_optimal,tf_singular,tf_grover,diff")?;
    let scale = if pi_units { 1.0 / PI } else { 1.0 };
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{}",
            r.n,
            fmt(r.x),
            fmt(r.tf_optimal * scale),
            fmt(r.tf_singular * scale),
            fmt(r.tf_grover * scale),
            fmt(r.diff * scale)
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{evolve, initial_state, Overlap};
    use crate::optimizer::sweep_times;
    use crate::protocols::Protocol;

    #[test]
    fn trajectory_rows_round_trip_exactly() {
        let x = Overlap::new(0.5).unwrap();
        let p = Protocol::singular(x);
        let traj = evolve(x, &initial_state(x), &p, 4).unwrap();
        let mut buf = Vec::new();
        write_trajectory(&mut buf, &traj).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("t,re0,im0,re1,im1,fidelity"));
        let rows: Vec<&str> = lines.collect();
        assert_eq!(rows.len(), traj.len());
        let last: Vec<f64> = rows
            .last()
            .unwrap()
            .split(',')
            .map(|v| v.parse().unwrap())
            .collect();
        assert_eq!(last[0], traj.times[traj.len() - 1]);
        assert_eq!(last[1], traj.final_state().c0.re);
        assert_eq!(last[5], traj.final_state().fidelity());
    }

    #[test]
    fn sweep_table_header_and_pi_scaling() {
        let rows = sweep_times(2, 4).unwrap();
        let mut plain = Vec::new();
        write_sweep(&mut plain, &rows, false).unwrap();
        let mut pied = Vec::new();
        write_sweep(&mut pied, &rows, true).unwrap();
        let plain = String::from_utf8(plain).unwrap();
        let pied = String::from_utf8(pied).unwrap();
        assert!(plain.starts_with("n,x,tf_optimal,tf_singular,tf_grover,diff\n"));
        let row = |text: &str, i: usize, col: usize| -> f64 {
            text.lines()
                .nth(i + 1)
                .unwrap()
                .split(',')
                .nth(col)
                .unwrap()
                .parse()
                .unwrap()
        };
        assert_eq!(row(&plain, 0, 0), 2.0);
        assert_eq!(row(&plain, 0, 1), row(&pied, 0, 1));
        for col in 2..6 {
            let ratio = row(&plain, 1, col) / row(&pied, 1, col);
            assert!((ratio - PI).abs() < 1e-12);
        }
    }

    #[test]
    fn record_and_arc_headers() {
        let mut buf = Vec::new();
        write_records(&mut buf, &[]).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "t,u,phi,hc\n");
        let mut buf = Vec::new();
        write_arc(&mut buf, &[(0.5, 1.0)]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("phi,theta\n"));
        assert_eq!(text.lines().count(), 2);
    }

    #[test]
    fn floats_are_emitted_at_full_precision() {
        let v = 0.1 + 0.2;
        let s = fmt(v);
        assert_eq!(s.parse::<f64>().unwrap(), v);
        assert_eq!(fmt(1.0), "1.0000000000000000e0");
    }
}
