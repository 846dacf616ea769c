//! N×N i.i.d. matrix realizations with provenance, plus the binary file
//! format that round-trips them losslessly.
//!
//! Entries are generated in row-major order from a ChaCha stream seeded with
//! the sample seed; that order is part of the file-format contract, so the
//! same `(dist, n, seed)` always reproduces bit-identical entries, in either
//! storage mode.

use std::fs;
use std::path::Path as FsPath;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dist::{EntryDistribution, Sampler};
use crate::error::{Error, Result};

const MAGIC: &[u8; 8] = b"SPECRADM";
const FORMAT_VERSION: u32 = 1;

/// Dense complex matrix, row-major. The common currency of the spectral and
/// cycle-weight operations.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> CMatrix {
        CMatrix {
            n,
            data: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    pub fn identity(n: usize) -> CMatrix {
        let mut m = CMatrix::zeros(n);
        for i in 0..n {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    /// Builds from row-major data; `data.len()` must equal `n*n`.
    pub fn from_data(n: usize, data: Vec<Complex64>) -> CMatrix {
        assert_eq!(data.len(), n * n, "row-major data must have n^2 entries");
        CMatrix { n, data }
    }

    /// Convenience for tests and small fixtures: rows of real entries.
    pub fn from_real_rows(rows: &[&[f64]]) -> CMatrix {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for r in rows {
            assert_eq!(r.len(), n, "matrix must be square");
            data.extend(r.iter().map(|&x| Complex64::new(x, 0.0)));
        }
        CMatrix { n, data }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.n + j] = v;
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Squared Frobenius norm.
    pub fn frobenius_sqr(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn scale_in_place(&mut self, c: Complex64) {
        for z in &mut self.data {
            *z *= c;
        }
    }

    /// y = A x
    pub fn matvec(&self, x: &[Complex64], y: &mut [Complex64]) {
        let n = self.n;
        for i in 0..n {
            let row = &self.data[i * n..(i + 1) * n];
            let mut acc = Complex64::new(0.0, 0.0);
            for (a, b) in row.iter().zip(x.iter()) {
                acc += a * b;
            }
            y[i] = acc;
        }
    }

    /// y = A* x (conjugate transpose)
    pub fn adjoint_matvec(&self, x: &[Complex64], y: &mut [Complex64]) {
        let n = self.n;
        for v in y.iter_mut() {
            *v = Complex64::new(0.0, 0.0);
        }
        for i in 0..n {
            let row = &self.data[i * n..(i + 1) * n];
            let xi = x[i];
            for (j, a) in row.iter().enumerate() {
                y[j] += a.conj() * xi;
            }
        }
    }
}

/// Storage mode of a [`MatrixSample`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Storage {
    Dense,
    Sparse,
}

/// Sparse entry: 0-based indices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Triplet {
    pub row: u32,
    pub col: u32,
    pub value: Complex64,
}

#[derive(Debug, Clone, PartialEq)]
enum SampleData {
    Dense(CMatrix),
    /// Sorted row-major, no duplicate (row, col).
    Sparse(Vec<Triplet>),
}

/// An N×N realization with provenance: the generating descriptor and seed
/// travel with the entries.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixSample {
    n: usize,
    dist: EntryDistribution,
    seed: u64,
    data: SampleData,
}

/// Draws an N×N matrix. Entries are generated row-major; sparse storage keeps
/// only nonzeros and is permitted only for laws with an atom at zero.
pub fn sample_matrix(
    dist: &EntryDistribution,
    n: usize,
    seed: u64,
    storage: Storage,
) -> Result<MatrixSample> {
    assert!(n >= 1, "matrix dimension must be >= 1");
    let sampler = Sampler::new(dist)?;
    if storage == Storage::Sparse && !dist.has_atom_at_zero() {
        return Err(Error::Unsupported(
            "sparse storage requires a law with an atom at zero".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data = match storage {
        Storage::Dense => {
            let mut data = Vec::with_capacity(n * n);
            for _ in 0..n * n {
                data.push(sampler.draw(&mut rng));
            }
            SampleData::Dense(CMatrix { n, data })
        }
        Storage::Sparse => {
            let mut trips = Vec::new();
            for i in 0..n {
                for j in 0..n {
                    let v = sampler.draw(&mut rng);
                    if v != Complex64::new(0.0, 0.0) {
                        trips.push(Triplet {
                            row: i as u32,
                            col: j as u32,
                            value: v,
                        });
                    }
                }
            }
            SampleData::Sparse(trips)
        }
    };
    Ok(MatrixSample {
        n,
        dist: dist.clone(),
        seed,
        data,
    })
}

impl MatrixSample {
    /// Wraps an existing dense matrix with provenance fields. Used by tests
    /// and file loading; sampled matrices come from [`sample_matrix`].
    pub fn from_dense(matrix: CMatrix, dist: EntryDistribution, seed: u64) -> MatrixSample {
        MatrixSample {
            n: matrix.n(),
            dist,
            seed,
            data: SampleData::Dense(matrix),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dist(&self) -> &EntryDistribution {
        &self.dist
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn storage(&self) -> Storage {
        match &self.data {
            SampleData::Dense(_) => Storage::Dense,
            SampleData::Sparse(_) => Storage::Sparse,
        }
    }

    pub fn nnz(&self) -> usize {
        match &self.data {
            SampleData::Dense(m) => m
                .data()
                .iter()
                .filter(|z| **z != Complex64::new(0.0, 0.0))
                .count(),
            SampleData::Sparse(t) => t.len(),
        }
    }

    /// Entry at 0-based (i, j).
    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        assert!(i < self.n && j < self.n, "index out of range");
        match &self.data {
            SampleData::Dense(m) => m.get(i, j),
            SampleData::Sparse(t) => {
                let key = (i as u32, j as u32);
                match t.binary_search_by(|p| (p.row, p.col).cmp(&key)) {
                    Ok(pos) => t[pos].value,
                    Err(_) => Complex64::new(0.0, 0.0),
                }
            }
        }
    }

    pub fn max_abs(&self) -> f64 {
        match &self.data {
            SampleData::Dense(m) => m.max_abs(),
            SampleData::Sparse(t) => t.iter().map(|p| p.value.norm()).fold(0.0, f64::max),
        }
    }

    /// Dense view (copies when the sample is sparse).
    pub fn to_dense(&self) -> CMatrix {
        match &self.data {
            SampleData::Dense(m) => m.clone(),
            SampleData::Sparse(t) => {
                let mut m = CMatrix::zeros(self.n);
                for p in t {
                    m.set(p.row as usize, p.col as usize, p.value);
                }
                m
            }
        }
    }

    pub fn triplets(&self) -> Option<&[Triplet]> {
        match &self.data {
            SampleData::Sparse(t) => Some(t),
            SampleData::Dense(_) => None,
        }
    }

    /// The event that every entry modulus is at most n².
    pub fn event_b_holds(&self) -> bool {
        let cap = (self.n as f64) * (self.n as f64);
        self.max_abs() <= cap
    }

    /// Serializes to the binary matrix format:
    /// magic, version u32, n u64, storage u8, seed u64, descriptor length u32,
    /// descriptor JSON, then little-endian doubles `(re, im)` per entry
    /// (dense, row-major) or `(row u32, col u32, re, im)` per triplet.
    pub fn save(&self, path: &FsPath) -> Result<()> {
        let mut buf: Vec<u8> = Vec::new();
        buf.extend_from_slice(MAGIC);
        buf.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
        buf.extend_from_slice(&(self.n as u64).to_le_bytes());
        buf.push(match self.storage() {
            Storage::Dense => 0,
            Storage::Sparse => 1,
        });
        buf.extend_from_slice(&self.seed.to_le_bytes());
        let desc = self.dist.to_json();
        buf.extend_from_slice(&(desc.len() as u32).to_le_bytes());
        buf.extend_from_slice(desc.as_bytes());
        match &self.data {
            SampleData::Dense(m) => {
                for z in m.data() {
                    buf.extend_from_slice(&z.re.to_le_bytes());
                    buf.extend_from_slice(&z.im.to_le_bytes());
                }
            }
            SampleData::Sparse(t) => {
                for p in t {
                    buf.extend_from_slice(&p.row.to_le_bytes());
                    buf.extend_from_slice(&p.col.to_le_bytes());
                    buf.extend_from_slice(&p.value.re.to_le_bytes());
                    buf.extend_from_slice(&p.value.im.to_le_bytes());
                }
            }
        }
        fs::write(path, buf)?;
        Ok(())
    }

    pub fn load(path: &FsPath) -> Result<MatrixSample> {
        let bytes = fs::read(path)?;
        let mut rd = Reader {
            bytes: &bytes,
            pos: 0,
        };
        let magic = rd.take(8, "magic")?;
        if magic != MAGIC {
            return Err(Error::Parse {
                offset: 0,
                what: "bad magic, not a matrix file".into(),
            });
        }
        let version = rd.u32("version")?;
        if version != FORMAT_VERSION {
            return Err(Error::Parse {
                offset: 8,
                what: format!("unsupported format version {version}"),
            });
        }
        let n = rd.u64("dimension")? as usize;
        if n == 0 {
            return Err(Error::Parse {
                offset: 12,
                what: "dimension must be >= 1".into(),
            });
        }
        let storage_off = rd.pos;
        let storage = match rd.u8("storage flag")? {
            0 => Storage::Dense,
            1 => Storage::Sparse,
            other => {
                return Err(Error::Parse {
                    offset: storage_off as u64,
                    what: format!("unknown storage flag {other}"),
                })
            }
        };
        let seed = rd.u64("seed")?;
        let desc_len = rd.u32("descriptor length")? as usize;
        let desc_off = rd.pos;
        let desc_bytes = rd.take(desc_len, "descriptor")?;
        let desc_str = std::str::from_utf8(desc_bytes).map_err(|e| Error::Parse {
            offset: (desc_off + e.valid_up_to()) as u64,
            what: "descriptor is not valid UTF-8".into(),
        })?;
        let dist = EntryDistribution::from_json(desc_str).map_err(|e| Error::Parse {
            offset: desc_off as u64,
            what: format!("bad descriptor: {e}"),
        })?;

        let data = match storage {
            Storage::Dense => {
                let mut m = Vec::with_capacity(n * n);
                for _ in 0..n * n {
                    let re = rd.f64("entry re")?;
                    let im = rd.f64("entry im")?;
                    m.push(Complex64::new(re, im));
                }
                SampleData::Dense(CMatrix { n, data: m })
            }
            Storage::Sparse => {
                let mut trips = Vec::new();
                let mut prev: Option<(u32, u32)> = None;
                while rd.pos < bytes.len() {
                    let at = rd.pos;
                    let row = rd.u32("triplet row")?;
                    let col = rd.u32("triplet col")?;
                    let re = rd.f64("triplet re")?;
                    let im = rd.f64("triplet im")?;
                    if row as usize >= n || col as usize >= n {
                        return Err(Error::Parse {
                            offset: at as u64,
                            what: format!("triplet index ({row}, {col}) out of range for n = {n}"),
                        });
                    }
                    if let Some(p) = prev {
                        if (row, col) <= p {
                            return Err(Error::Parse {
                                offset: at as u64,
                                what: "triplets must be strictly increasing row-major".into(),
                            });
                        }
                    }
                    prev = Some((row, col));
                    trips.push(Triplet {
                        row,
                        col,
                        value: Complex64::new(re, im),
                    });
                }
                SampleData::Sparse(trips)
            }
        };
        if rd.pos != bytes.len() {
            return Err(Error::Parse {
                offset: rd.pos as u64,
                what: "trailing bytes after matrix payload".into(),
            });
        }
        Ok(MatrixSample {
            n,
            dist,
            seed,
            data,
        })
    }
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, len: usize, what: &str) -> Result<&'a [u8]> {
        if self.pos + len > self.bytes.len() {
            return Err(Error::Parse {
                offset: self.bytes.len() as u64,
                what: format!("truncated file while reading {what}"),
            });
        }
        let s = &self.bytes[self.pos..self.pos + len];
        self.pos += len;
        Ok(s)
    }

    fn u8(&mut self, what: &str) -> Result<u8> {
        Ok(self.take(1, what)?[0])
    }

    fn u32(&mut self, what: &str) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4, what)?.try_into().unwrap()))
    }

    fn u64(&mut self, what: &str) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8, what)?.try_into().unwrap()))
    }

    fn f64(&mut self, what: &str) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8, what)?.try_into().unwrap()))
    }
}
