//! CSV writers for profiles and phase grids.

use std::io::{self, Write};

use crate::kmc::Measurement;
use crate::phase::{PhaseGrid, RateGrid};
use crate::riemann::ProfilePoint;

pub fn write_riemann_profile<W: Write>(mut w: W, profile: &[ProfilePoint]) -> io::Result<()> {
    writeln!(w, "xi,z_alpha,z_beta,rho_circ,rho_bullet")?;
    for p in profile {
        writeln!(
            w,
            "{},{},{},{},{}",
            p.xi, p.z.z_alpha, p.z.z_beta, p.rho.rho_circ, p.rho.rho_bullet
        )?;
    }
    Ok(())
}

/// Sites are numbered from 1.
pub fn write_site_profile<W: Write>(mut w: W, m: &Measurement) -> io::Result<()> {
    writeln!(w, "site,rho_circ,rho_bullet")?;
    for (i, (c, b)) in m.profile_circ.iter().zip(&m.profile_bullet).enumerate() {
        writeln!(w, "{},{},{}", i + 1, c, b)?;
    }
    Ok(())
}

/// Cells outside the domain are skipped.
pub fn write_phase_grid<W: Write>(mut w: W, grid: &PhaseGrid) -> io::Result<()> {
    writeln!(w, "z_alpha,z_beta,phase")?;
    let n = grid.resolution;
    for j in 0..n {
        for i in 0..n {
            if let Some(phase) = grid.get(i, j) {
                writeln!(w, "{},{},{}", grid.z_alpha[i], grid.z_beta[j], phase.label())?;
            }
        }
    }
    Ok(())
}

/// Cells without any solver output carry `NaN` values and phase `none`.
pub fn write_rate_grid<W: Write>(mut w: W, grid: &RateGrid) -> io::Result<()> {
    writeln!(w, "rate_x,rate_y,phase,rho_b_circ,rho_b_bullet,j_circ,j_bullet,converged")?;
    for cell in &grid.cells {
        match &cell.state {
            Some(s) => writeln!(
                w,
                "{},{},{},{},{},{},{},{}",
                cell.rate_x,
                cell.rate_y,
                s.phase.label(),
                s.rho_bulk.rho_circ,
                s.rho_bulk.rho_bullet,
                s.currents.j_circ,
                s.currents.j_bullet,
                cell.converged
            )?,
            None => writeln!(w, "{},{},none,NaN,NaN,NaN,NaN,false", cell.rate_x, cell.rate_y)?,
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hydro::ModelParams;
    use crate::phase::phase_diagram_z;

    #[test]
    fn phase_grid_csv_has_header_and_domain_rows() {
        let grid = phase_diagram_z(&ModelParams::new(0.8, 0.9).unwrap(), 3, 1e-6).unwrap();
        let mut buf = Vec::new();
        write_phase_grid(&mut buf, &grid).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("z_alpha,z_beta,phase"));
        let rows = lines.count();
        assert_eq!(rows, grid.cells.iter().flatten().count());
    }
}
