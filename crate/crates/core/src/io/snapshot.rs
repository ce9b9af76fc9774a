use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::field::{ScalarField, VectorField};
use crate::functionals::{HNormalization, PhysParams};
use crate::grid::Grid;
use crate::state::FluidState;

pub const MAGIC: &[u8; 8] = b"NSKSNAP1";
pub const VERSION: u32 = 1;

/// Named fields on one grid with the run parameters.
///
/// Layout, little-endian: magic, version `u32`, `d` and `N` as `u32`, then
/// `L, t, ε, ν, κ, γ` as `f64`, field count `u32`, each name as `u32` length
/// plus ASCII bytes, then each field's `N^d` values as `f64`, x fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub grid: Grid,
    pub t: f64,
    pub eps: f64,
    pub nu: f64,
    pub kappa: f64,
    pub gamma: f64,
    pub fields: Vec<(String, ScalarField)>,
}

impl Snapshot {
    pub fn from_state(state: &FluidState) -> Self {
        let p = &state.params;
        let mut fields = vec![("rho".to_string(), state.rho.clone())];
        for (a, c) in state.u.comps().iter().enumerate() {
            fields.push((format!("u{a}"), c.clone()));
        }
        Snapshot {
            grid: *state.grid(),
            t: state.t,
            eps: p.eps,
            nu: p.nu,
            kappa: p.kappa,
            gamma: p.gamma,
            fields,
        }
    }

    pub fn field(&self, name: &str) -> Option<&ScalarField> {
        self.fields.iter().find(|(n, _)| n == name).map(|(_, f)| f)
    }

    /// Rebuilds a fluid state from fields `rho`, `u0`, `u1`(, `u2`).
    pub fn to_state(&self, normalization: HNormalization) -> Result<FluidState> {
        let rho = self
            .field("rho")
            .ok_or_else(|| Error::Format("snapshot has no `rho` field".into()))?
            .clone();
        let comps = (0..self.grid.dim())
            .map(|a| {
                self.field(&format!("u{a}"))
                    .cloned()
                    .ok_or_else(|| Error::Format(format!("snapshot has no `u{a}` field")))
            })
            .collect::<Result<Vec<_>>>()?;
        let params = PhysParams::new(self.eps, self.nu, self.kappa, self.gamma)?.with_normalization(normalization);
        FluidState::new(rho, VectorField::new(comps)?, params, self.t)
    }

    pub fn encode(&self) -> Result<Vec<u8>> {
        let mut b = Vec::with_capacity(64 + self.fields.len() * self.grid.len() * 8);
        b.extend_from_slice(MAGIC);
        b.extend_from_slice(&VERSION.to_le_bytes());
        b.extend_from_slice(&(self.grid.dim() as u32).to_le_bytes());
        b.extend_from_slice(&(self.grid.n() as u32).to_le_bytes());
        for v in [self.grid.length(), self.t, self.eps, self.nu, self.kappa, self.gamma] {
            b.extend_from_slice(&v.to_le_bytes());
        }
        b.extend_from_slice(&(self.fields.len() as u32).to_le_bytes());
        for (name, f) in &self.fields {
            if !name.is_ascii() {
                return Err(Error::Format(format!("field name `{name}` is not ASCII")));
            }
            f.check_grid(&self.grid)?;
            b.extend_from_slice(&(name.len() as u32).to_le_bytes());
            b.extend_from_slice(name.as_bytes());
        }
        for (_, f) in &self.fields {
            for v in f.values() {
                b.extend_from_slice(&v.to_le_bytes());
            }
        }
        Ok(b)
    }

    /// Decodes a snapshot; `expected` rejects files from another grid.
    pub fn decode(bytes: &[u8], expected: Option<&Grid>) -> Result<Self> {
        let mut r = Cursor { b: bytes, pos: 0 };
        let magic = r.take(8)?;
        if magic != MAGIC {
            return Err(Error::Format(format!("bad magic {:?}, expected {:?}", magic, MAGIC)));
        }
        let version = r.u32()?;
        if version != VERSION {
            return Err(Error::Format(format!("unsupported version {version}, expected {VERSION}")));
        }
        let d = r.u32()? as usize;
        let n = r.u32()? as usize;
        let length = r.f64()?;
        let grid = Grid::new(d, n, length).map_err(|e| Error::Format(format!("invalid grid in header: {e}")))?;
        if let Some(g) = expected {
            if g.dim() != d || g.n() != n || g.length() != length {
                return Err(Error::Format(format!(
                    "grid mismatch: expected d = {}, N = {}, L = {}; file has d = {d}, N = {n}, L = {length}",
                    g.dim(),
                    g.n(),
                    g.length()
                )));
            }
        }
        let t = r.f64()?;
        let eps = r.f64()?;
        let nu = r.f64()?;
        let kappa = r.f64()?;
        let gamma = r.f64()?;
        let count = r.u32()? as usize;
        let mut names = Vec::with_capacity(count.min(64));
        for _ in 0..count {
            let len = r.u32()? as usize;
            let raw = r.take(len)?;
            if !raw.is_ascii() {
                return Err(Error::Format("field name is not ASCII".into()));
            }
            names.push(String::from_utf8_lossy(raw).into_owned());
        }
        let mut fields = Vec::with_capacity(count);
        for name in names {
            let raw = r.take(grid.len() * 8)?;
            let vals = raw
                .chunks_exact(8)
                .map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk")))
                .collect();
            fields.push((name, ScalarField::new(grid, vals)?));
        }
        if r.pos != bytes.len() {
            return Err(Error::Format(format!("{} trailing bytes", bytes.len() - r.pos)));
        }
        Ok(Snapshot { grid, t, eps, nu, kappa, gamma, fields })
    }
}

struct Cursor<'a> {
    b: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.b.len() - self.pos < n {
            return Err(Error::Format(format!(
                "truncated: needed {n} bytes at offset {}, {} left",
                self.pos,
                self.b.len() - self.pos
            )));
        }
        let s = &self.b[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().expect("4 bytes")))
    }

    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().expect("8 bytes")))
    }
}

pub fn write_snapshot(path: &Path, snap: &Snapshot) -> Result<()> {
    let bytes = snap.encode()?;
    let mut f = std::fs::File::create(path)?;
    f.write_all(&bytes)?;
    Ok(())
}

pub fn read_snapshot(path: &Path, expected: Option<&Grid>) -> Result<Snapshot> {
    let mut bytes = Vec::new();
    std::fs::File::open(path)?.read_to_end(&mut bytes)?;
    Snapshot::decode(&bytes, expected)
}
