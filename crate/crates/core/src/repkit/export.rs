//! Flat binary and CSV export of complex matrices.
//!
//! Binary layout, all little-endian: the 4 bytes `QLVM`, a u32 version (1),
//! u64 rows, u64 cols, then rows*cols pairs of f64 (re, im) in row-major
//! order.

use super::decompose::Dense;
use super::op::C;
use std::io::{self, Read, Write};

pub const MAGIC: &[u8; 4] = b"QLVM";
pub const VERSION: u32 = 1;

pub fn write_binary<W: Write>(mut w: W, m: &Dense) -> io::Result<()> {
    w.write_all(MAGIC)?;
    w.write_all(&VERSION.to_le_bytes())?;
    w.write_all(&(m.nrows() as u64).to_le_bytes())?;
    w.write_all(&(m.ncols() as u64).to_le_bytes())?;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            w.write_all(&m[(i, j)].re.to_le_bytes())?;
            w.write_all(&m[(i, j)].im.to_le_bytes())?;
        }
    }
    Ok(())
}

pub fn read_binary<R: Read>(mut r: R) -> io::Result<Dense> {
    let bad = |s: &str| io::Error::new(io::ErrorKind::InvalidData, s.to_string());
    let mut b4 = [0u8; 4];
    let mut b8 = [0u8; 8];
    r.read_exact(&mut b4)?;
    if &b4 != MAGIC {
        return Err(bad("bad magic"));
    }
    r.read_exact(&mut b4)?;
    if u32::from_le_bytes(b4) != VERSION {
        return Err(bad("unsupported version"));
    }
    r.read_exact(&mut b8)?;
    let rows = u64::from_le_bytes(b8) as usize;
    r.read_exact(&mut b8)?;
    let cols = u64::from_le_bytes(b8) as usize;
    let mut m = Dense::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            r.read_exact(&mut b8)?;
            let re = f64::from_le_bytes(b8);
            r.read_exact(&mut b8)?;
            m[(i, j)] = C::new(re, f64::from_le_bytes(b8));
        }
    }
    Ok(m)
}

/// One line per row, entries `re+imi` separated by commas.
pub fn write_csv<W: Write>(mut w: W, m: &Dense) -> io::Result<()> {
    for i in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols()).map(|j| format!("{:e}{:+e}i", m[(i, j)].re, m[(i, j)].im)).collect();
        writeln!(w, "{}", row.join(","))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binary_roundtrip() {
        let m = Dense::from_fn(2, 3, |i, j| C::new(i as f64 + 0.5, -(j as f64)));
        let mut buf = Vec::new();
        write_binary(&mut buf, &m).unwrap();
        assert_eq!(buf.len(), 24 + 6 * 16);
        assert_eq!(&buf[..4], b"QLVM");
        assert_eq!(read_binary(&buf[..]).unwrap(), m);
        let mut csv = Vec::new();
        write_csv(&mut csv, &m).unwrap();
        assert_eq!(String::from_utf8(csv).unwrap().lines().count(), 2);
    }
}
