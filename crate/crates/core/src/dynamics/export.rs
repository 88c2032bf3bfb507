use std::io;

use super::integrate::Trajectory;
use crate::scalar::Real;

/// Column order of trajectory CSV files.
pub const TRAJECTORY_HEADER: [&str; 14] = [
    "t",
    "rho_00_re",
    "rho_00_im",
    "rho_01_re",
    "rho_01_im",
    "rho_10_re",
    "rho_10_im",
    "rho_11_re",
    "rho_11_im",
    "sx",
    "sy",
    "sz",
    "trace",
    "purity",
];

/// Writes one row per sample. Values use the shortest round-trip decimal
/// representation, so identical trajectories give identical bytes.
pub fn write_trajectory_csv<T: Real, W: io::Write>(traj: &Trajectory<T>, out: W) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(TRAJECTORY_HEADER)?;
    for (t, rho) in traj.samples() {
        let m = rho.matrix();
        let [sx, sy, sz] = rho.bloch();
        let mut row = Vec::with_capacity(TRAJECTORY_HEADER.len());
        row.push(t.to_f64_lossy());
        for z in m.entries() {
            row.push(z.re.to_f64_lossy());
            row.push(z.im.to_f64_lossy());
        }
        row.extend([sx, sy, sz, m.trace().re, rho.purity()].map(|v| v.to_f64_lossy()));
        w.write_record(row.iter().map(|v| v.to_string()))?;
    }
    w.flush()
}
