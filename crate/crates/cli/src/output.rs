//! Tomogram writers: CSV, raw little-endian raster, 8-bit PGM preview.

use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::Path;

use tomoscope_core::tomography::{Provenance, QuadratureGrid, TomogramGrid};

use crate::config::OutputFormat;
use crate::error::CliError;

pub const RASTER_MAGIC: &[u8; 4] = b"OTGM";
pub const RASTER_VERSION: u32 = 1;
pub const RASTER_HEADER_LEN: usize = 32;

/// Row `theta,θ_0,..`, row `x,X_0,..`, then one row of ω per θ. Values use
/// the shortest representation that parses back to the same double.
pub fn write_csv<W: Write>(tg: &TomogramGrid, mut w: W) -> io::Result<()> {
    let g = tg.grid();
    write!(w, "theta")?;
    for t in g.thetas() {
        write!(w, ",{t}")?;
    }
    writeln!(w)?;
    write!(w, "x")?;
    for x in g.xs() {
        write!(w, ",{x}")?;
    }
    writeln!(w)?;
    for row in tg.rows() {
        let mut first = true;
        for v in row {
            if !first {
                write!(w, ",")?;
            }
            write!(w, "{v}")?;
            first = false;
        }
        writeln!(w)?;
    }
    Ok(())
}

/// 32-byte header ("OTGM", version, T, M as u32 LE, X_max as f64 LE, 8 zero
/// bytes) followed by T·M f64 LE values, θ-major.
pub fn write_raster<W: Write>(tg: &TomogramGrid, mut w: W) -> io::Result<()> {
    let g = tg.grid();
    let mut header = [0u8; RASTER_HEADER_LEN];
    header[0..4].copy_from_slice(RASTER_MAGIC);
    header[4..8].copy_from_slice(&RASTER_VERSION.to_le_bytes());
    header[8..12].copy_from_slice(&(g.n_theta() as u32).to_le_bytes());
    header[12..16].copy_from_slice(&(g.n_x() as u32).to_le_bytes());
    header[16..24].copy_from_slice(&g.x_max().to_le_bytes());
    w.write_all(&header)?;
    for v in tg.values() {
        w.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

fn invalid(msg: impl Into<String>) -> io::Error {
    io::Error::new(io::ErrorKind::InvalidData, msg.into())
}

pub fn read_raster<R: Read>(mut r: R) -> io::Result<TomogramGrid> {
    let mut header = [0u8; RASTER_HEADER_LEN];
    r.read_exact(&mut header)?;
    if &header[0..4] != RASTER_MAGIC {
        return Err(invalid("not an OTGM raster"));
    }
    let u32_at = |i: usize| u32::from_le_bytes(header[i..i + 4].try_into().unwrap());
    let version = u32_at(4);
    if version != RASTER_VERSION {
        return Err(invalid(format!("unsupported raster version {version}")));
    }
    let n_theta = u32_at(8) as usize;
    let n_x = u32_at(12) as usize;
    let x_max = f64::from_le_bytes(header[16..24].try_into().unwrap());
    let grid = QuadratureGrid::new(n_theta, n_x, x_max).map_err(|e| invalid(e.to_string()))?;
    let mut bytes = Vec::with_capacity(n_theta * n_x * 8);
    r.read_to_end(&mut bytes)?;
    if bytes.len() != n_theta * n_x * 8 {
        return Err(invalid(format!(
            "expected {} data bytes, found {}",
            n_theta * n_x * 8,
            bytes.len()
        )));
    }
    let values = bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    TomogramGrid::from_values(grid, values, Provenance::new("raster")).map_err(|e| invalid(e.to_string()))
}

/// Binary PGM, θ along the width, X along the height with X_max on top;
/// [0, max ω] mapped linearly onto [0, 255].
pub fn write_pgm<W: Write>(tg: &TomogramGrid, mut w: W) -> io::Result<()> {
    let g = tg.grid();
    let peak = tg.max_value();
    let scale = if peak > 0.0 { 255.0 / peak } else { 0.0 };
    write!(w, "P5\n{} {}\n255\n", g.n_theta(), g.n_x())?;
    let mut line = vec![0u8; g.n_theta()];
    for j in (0..g.n_x()).rev() {
        for (i, px) in line.iter_mut().enumerate() {
            *px = (tg.get(i, j).max(0.0) * scale).round().min(255.0) as u8;
        }
        w.write_all(&line)?;
    }
    Ok(())
}

/// Writes `tg` to `path` in the requested format.
pub fn write_output(tg: &TomogramGrid, format: OutputFormat, path: &Path) -> Result<(), CliError> {
    let wrap = |source| CliError::Output {
        path: path.display().to_string(),
        source,
    };
    let file = File::create(path).map_err(wrap)?;
    let mut w = BufWriter::new(file);
    match format {
        OutputFormat::Csv => write_csv(tg, &mut w),
        OutputFormat::Raster => write_raster(tg, &mut w),
        OutputFormat::Pgm => write_pgm(tg, &mut w),
    }
    .and_then(|_| w.flush())
    .map_err(wrap)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> TomogramGrid {
        let g = QuadratureGrid::new(4, 3, 2.5).unwrap();
        let values = (0..12).map(|k| k as f64 / 7.0).collect();
        TomogramGrid::from_values(g, values, Provenance::default()).unwrap()
    }

    #[test]
    fn raster_round_trip_is_exact() {
        let tg = sample();
        let mut buf = Vec::new();
        write_raster(&tg, &mut buf).unwrap();
        assert_eq!(buf.len(), 32 + 12 * 8);
        assert_eq!(&buf[0..4], b"OTGM");
        assert!(buf[24..32].iter().all(|&b| b == 0));
        let back = read_raster(buf.as_slice()).unwrap();
        assert_eq!(back.grid(), tg.grid());
        assert_eq!(back.values(), tg.values());
    }

    #[test]
    fn raster_rejects_truncated_data() {
        let mut buf = Vec::new();
        write_raster(&sample(), &mut buf).unwrap();
        buf.pop();
        assert!(read_raster(buf.as_slice()).is_err());
        buf[0] = b'X';
        assert!(read_raster(buf.as_slice()).is_err());
    }

    #[test]
    fn csv_values_round_trip() {
        let tg = sample();
        let mut buf = Vec::new();
        write_csv(&tg, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2 + 4);
        assert!(lines[0].starts_with("theta,0,"));
        assert_eq!(lines[1], "x,-2.5,0,2.5");
        let parsed: Vec<f64> = lines[2..]
            .iter()
            .flat_map(|l| l.split(',').map(|v| v.parse::<f64>().unwrap()))
            .collect();
        assert_eq!(parsed, tg.values());
    }

    #[test]
    fn pgm_layout() {
        let tg = sample();
        let mut buf = Vec::new();
        write_pgm(&tg, &mut buf).unwrap();
        let header = b"P5\n4 3\n255\n";
        assert_eq!(&buf[..header.len()], header);
        let pixels = &buf[header.len()..];
        assert_eq!(pixels.len(), 12);
        // Top row is X_max (j = 2); the brightest sample is (θ_3, X_max).
        assert_eq!(pixels[3], 255);
        assert_eq!(pixels[8], 0);
    }
}
