//! Binary dump of a Cartesian spinor grid: the magic `ZMSPINOR`, a `u32`
//! little-endian header length, a JSON header, then `n³ × 2` complex values
//! as little-endian `f64` pairs (point-major, spin fastest).

use std::io::{Read, Write};
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spinor_calculus::{GridSpec, SpinorGrid, SpinorLayout};

const MAGIC: &[u8; 8] = b"ZMSPINOR";

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct DumpHeader {
    pub dims: [usize; 4],
    pub dtype: String,
    pub layout: String,
    pub grid: GridSpec,
}

fn io_err(path: &Path, source: std::io::Error) -> Error {
    Error::Io { path: path.to_path_buf(), source }
}

pub fn write_spinor_grid(path: &Path, grid: &SpinorGrid) -> Result<()> {
    let SpinorLayout::Cartesian(spec) = grid.layout else {
        return Err(Error::InvalidArgument("only Cartesian grids can be dumped".into()));
    };
    let n = spec.n();
    let header = DumpHeader {
        dims: [n, n, n, 2],
        dtype: "complex128-le".into(),
        layout: "index ((i*n + j)*n + k)*2 + spin; x = -L + (i + 1/2) h".into(),
        grid: spec,
    };
    let json = serde_json::to_vec(&header)?;
    let mut bytes = Vec::with_capacity(12 + json.len() + 32 * grid.values.len());
    bytes.extend_from_slice(MAGIC);
    bytes.extend_from_slice(&(json.len() as u32).to_le_bytes());
    bytes.extend_from_slice(&json);
    for s in &grid.values {
        for c in s {
            bytes.extend_from_slice(&c.re.to_le_bytes());
            bytes.extend_from_slice(&c.im.to_le_bytes());
        }
    }
    let mut f = std::fs::File::create(path).map_err(|e| io_err(path, e))?;
    f.write_all(&bytes).map_err(|e| io_err(path, e))
}

pub fn read_spinor_grid(path: &Path) -> Result<(DumpHeader, SpinorGrid)> {
    let mut bytes = Vec::new();
    std::fs::File::open(path).and_then(|mut f| f.read_to_end(&mut bytes)).map_err(|e| io_err(path, e))?;
    let bad = || Error::InvalidArgument(format!("{} is not a spinor grid dump", path.display()));
    if bytes.len() < 12 || &bytes[..8] != MAGIC {
        return Err(bad());
    }
    let hlen = u32::from_le_bytes(bytes[8..12].try_into().unwrap()) as usize;
    let body = 12 + hlen;
    let header: DumpHeader = serde_json::from_slice(bytes.get(12..body).ok_or_else(bad)?)?;
    let spec = GridSpec::new(header.grid.h, header.grid.half_width)?;
    if header.dims != [spec.n(), spec.n(), spec.n(), 2] || bytes.len() != body + 32 * spec.len() {
        return Err(bad());
    }
    let f = |o: usize| f64::from_le_bytes(bytes[o..o + 8].try_into().unwrap());
    let values = (0..spec.len())
        .map(|p| {
            let o = body + 32 * p;
            [Complex64::new(f(o), f(o + 8)), Complex64::new(f(o + 16), f(o + 24))]
        })
        .collect();
    Ok((header, SpinorGrid { layout: SpinorLayout::Cartesian(spec), values }))
}
