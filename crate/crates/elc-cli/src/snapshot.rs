//! ELC1 snapshot format: one JSON header line, then raw little-endian f64
//! arrays in row-major point order with components interleaved, field by
//! field (velocity first, then director).

use anyhow::{bail, Context, Result};
use elc_core::solver::State;
use elc_core::spectral::{ScalarField, TorusGrid, VectorField};
use serde::{Deserialize, Serialize};
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

#[derive(Debug, Serialize, Deserialize)]
struct Header {
    magic: String,
    dim: usize,
    n: usize,
    t: f64,
    /// (name, component count) per stored field.
    fields: Vec<(String, usize)>,
}

pub fn write_snapshot(path: &Path, state: &State) -> Result<()> {
    let grid = state.grid();
    let header = Header {
        magic: "ELC1".into(),
        dim: grid.dim(),
        n: grid.n(),
        t: state.t,
        fields: vec![("v".into(), grid.dim()), ("d".into(), grid.dim())],
    };
    let file = std::fs::File::create(path)
        .with_context(|| format!("creating snapshot {}", path.display()))?;
    let mut out = BufWriter::new(file);
    serde_json::to_writer(&mut out, &header)?;
    out.write_all(b"\n")?;
    for field in [&state.v, &state.d] {
        for idx in 0..grid.len() {
            for comp in 0..grid.dim() {
                out.write_all(&field.comp(comp).data()[idx].to_le_bytes())?;
            }
        }
    }
    out.flush()?;
    Ok(())
}

pub fn read_snapshot(path: &Path) -> Result<State> {
    let file = std::fs::File::open(path)
        .with_context(|| format!("opening snapshot {}", path.display()))?;
    let mut input = BufReader::new(file);
    let mut header_line = Vec::new();
    loop {
        let mut byte = [0u8; 1];
        input.read_exact(&mut byte).context("snapshot header truncated")?;
        if byte[0] == b'\n' {
            break;
        }
        header_line.push(byte[0]);
        if header_line.len() > 1 << 16 {
            bail!("snapshot header line too long");
        }
    }
    let header: Header = serde_json::from_slice(&header_line).context("snapshot header")?;
    if header.magic != "ELC1" {
        bail!("bad snapshot magic {:?}", header.magic);
    }
    let grid = TorusGrid::new(header.dim, header.n)
        .map_err(|e| anyhow::anyhow!("snapshot grid: {e}"))?;
    let expected: Vec<(String, usize)> =
        vec![("v".into(), grid.dim()), ("d".into(), grid.dim())];
    if header.fields != expected {
        bail!("unexpected snapshot fields {:?}", header.fields);
    }
    let mut read_field = || -> Result<VectorField> {
        let mut comps: Vec<Vec<f64>> = (0..grid.dim()).map(|_| vec![0.0; grid.len()]).collect();
        let mut buf = [0u8; 8];
        for idx in 0..grid.len() {
            for comp in comps.iter_mut() {
                input.read_exact(&mut buf).context("snapshot body truncated")?;
                comp[idx] = f64::from_le_bytes(buf);
            }
        }
        let fields: Vec<ScalarField> = comps
            .into_iter()
            .map(|data| ScalarField::from_data(grid, data).expect("sized above"))
            .collect();
        Ok(VectorField::from_components(fields).expect("dim components"))
    };
    let v = read_field()?;
    let d = read_field()?;
    Ok(State { v, d, t: header.t })
}

#[cfg(test)]
mod tests {
    use super::*;
    use elc_core::solver::{initial_state, InitSpec};

    #[test]
    fn round_trip() {
        let grid = TorusGrid::new(2, 16).unwrap();
        let state = initial_state(
            grid,
            &InitSpec::RandomSmooth { seed: 5, band: 3, v_amplitude: 0.4, d_amplitude: 0.3 },
        )
        .unwrap();
        let dir = std::env::temp_dir().join("elc_snapshot_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("state.elc");
        write_snapshot(&path, &state).unwrap();
        let back = read_snapshot(&path).unwrap();
        assert_eq!(back.t, state.t);
        for i in 0..2 {
            for (a, b) in back.v.comp(i).data().iter().zip(state.v.comp(i).data()) {
                assert_eq!(a.to_bits(), b.to_bits());
            }
            for (a, b) in back.d.comp(i).data().iter().zip(state.d.comp(i).data()) {
                assert_eq!(a.to_bits(), b.to_bits());
            }
        }
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn rejects_bad_magic() {
        let dir = std::env::temp_dir().join("elc_snapshot_bad");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("bad.elc");
        std::fs::write(&path, b"{\"magic\":\"NOPE\",\"dim\":2,\"n\":8,\"t\":0.0,\"fields\":[]}\n").unwrap();
        assert!(read_snapshot(&path).is_err());
        std::fs::remove_dir_all(&dir).ok();
    }
}
