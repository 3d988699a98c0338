//! On-disk formats.
//!
//! * kernel JSON: `{"n", "convention", "sign", "matrices"?}` where
//!   `matrices[q][p]` is a matrix of `[re, im]` pairs;
//! * state JSON: `{"n", "rho"}`;
//! * Wigner CSV: header `q,p,w`, rows in lexicographic `(q,p)` order;
//! * enumeration output: one JSON object per member plus a summary object.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::algebra::{CMatrix, LatticeDim};
use crate::continuum::ContinuumGrid;
use crate::error::{Error, Result};
use crate::kernel::{build_kernel_unchecked, format_bits, Convention, FanoKernel, SignFn};
use crate::transform::{DensityMatrix, WignerGrid};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelFile {
    pub n: LatticeDim,
    #[serde(default)]
    pub convention: Convention,
    pub sign: Vec<Vec<i8>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrices: Option<Vec<Vec<CMatrix>>>,
}

/// A kernel read from disk.
#[derive(Clone, Debug)]
pub struct LoadedKernel {
    pub kernel: FanoKernel,
    /// Largest difference between the stored matrices and the ones rebuilt
    /// from the sign array; `None` when the file carries no matrices.
    pub matrices_dev: Option<f64>,
}

impl KernelFile {
    pub fn from_kernel(kernel: &FanoKernel, with_matrices: bool) -> Self {
        let d = kernel.dim().get();
        Self {
            n: kernel.dim(),
            convention: kernel.convention(),
            sign: kernel.sign().to_rows(),
            matrices: with_matrices.then(|| {
                kernel
                    .matrices()
                    .chunks(d)
                    .map(<[CMatrix]>::to_vec)
                    .collect()
            }),
        }
    }

    pub fn sign_fn(&self) -> Result<SignFn> {
        SignFn::from_rows_unchecked(self.n, self.sign.clone()).map_err(|e| match e {
            Error::Shape(msg) => Error::Format(msg),
            other => other,
        })
    }

    /// Stored matrices win over the sign array so that a hand-edited file is
    /// verified as written.
    pub fn load(self) -> Result<LoadedKernel> {
        let sign = self.sign_fn()?;
        let rebuilt = build_kernel_unchecked(&sign);
        let Some(rows) = self.matrices else {
            return Ok(LoadedKernel {
                kernel: rebuilt,
                matrices_dev: None,
            });
        };
        let d = self.n.get();
        if rows.len() != d || rows.iter().any(|r| r.len() != d) {
            return Err(Error::Format(format!("matrices must be a {d}x{d} array of matrices")));
        }
        let kernel = FanoKernel::from_matrices(sign, rows.into_iter().flatten().collect())
            .map_err(|e| Error::Format(e.to_string()))?;
        let dev = kernel.max_abs_diff(&rebuilt)?;
        Ok(LoadedKernel {
            kernel,
            matrices_dev: Some(dev),
        })
    }

    pub fn read(r: impl Read) -> Result<Self> {
        Ok(serde_json::from_reader(r)?)
    }

    pub fn write(&self, w: impl Write) -> Result<()> {
        serde_json::to_writer_pretty(w, self)?;
        Ok(())
    }
}

/// Sign arrays for `build --sign file:...`: either a kernel-style object
/// with a `sign` field or a bare 2-D array.
pub fn read_sign(r: impl Read, n: LatticeDim) -> Result<SignFn> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum SignInput {
        Object { n: Option<LatticeDim>, sign: Vec<Vec<i8>> },
        Bare(Vec<Vec<i8>>),
    }
    let rows = match serde_json::from_reader(r)? {
        SignInput::Object { n: Some(m), .. } if m != n => {
            return Err(Error::Format(format!("sign file is for N={m}, expected {n}")))
        }
        SignInput::Object { sign, .. } | SignInput::Bare(sign) => sign,
    };
    SignFn::from_rows_unchecked(n, rows).map_err(|e| match e {
        Error::Shape(msg) => Error::Format(msg),
        other => other,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateFile {
    pub n: LatticeDim,
    pub rho: CMatrix,
}

impl StateFile {
    pub fn from_state(rho: &DensityMatrix) -> Self {
        Self {
            n: rho.dim(),
            rho: rho.matrix().clone(),
        }
    }

    pub fn read(r: impl Read) -> Result<Self> {
        let file: Self = serde_json::from_reader(r)?;
        if file.rho.dim() != file.n.get() {
            return Err(Error::Format(format!(
                "rho is {0}x{0} but n = {1}",
                file.rho.dim(),
                file.n
            )));
        }
        Ok(file)
    }

    pub fn write(&self, w: impl Write) -> Result<()> {
        serde_json::to_writer_pretty(w, self)?;
        Ok(())
    }

    pub fn into_state(self) -> Result<DensityMatrix> {
        DensityMatrix::new(self.rho)
    }
}

pub fn write_wigner_csv(w: impl Write, grid: &WignerGrid) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["q", "p", "w"])?;
    for (q, p, v) in grid.entries() {
        out.write_record([q.to_string(), p.to_string(), v.to_string()])?;
    }
    out.flush()?;
    Ok(())
}

/// Reads a `q,p,w` grid; every lattice point must appear exactly once.
pub fn read_wigner_csv(r: impl Read) -> Result<WignerGrid> {
    #[derive(Deserialize)]
    struct Row {
        q: usize,
        p: usize,
        w: f64,
    }
    let mut rdr = csv::Reader::from_reader(r);
    let headers = rdr.headers()?.clone();
    if headers.iter().collect::<Vec<_>>() != ["q", "p", "w"] {
        return Err(Error::Format(format!("expected header q,p,w, got {headers:?}")));
    }
    let rows = rdr
        .deserialize::<Row>()
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let d = (rows.len() as f64).sqrt().round() as usize;
    if d * d != rows.len() {
        return Err(Error::Format(format!("{} rows is not a square grid", rows.len())));
    }
    let n = LatticeDim::new(d).map_err(|e| Error::Format(e.to_string()))?;
    let mut values = vec![None; d * d];
    for row in rows {
        if row.q >= d || row.p >= d {
            return Err(Error::Format(format!("point ({},{}) outside {d}x{d} grid", row.q, row.p)));
        }
        if values[row.q * d + row.p].replace(row.w).is_some() {
            return Err(Error::Format(format!("duplicate point ({},{})", row.q, row.p)));
        }
    }
    let values = values.into_iter().map(|v| v.expect("all points filled")).collect();
    WignerGrid::new(n, values)
}

pub fn write_continuum_csv(w: impl Write, grid: &ContinuumGrid) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["q", "p", "w"])?;
    for (q, p, v) in grid.entries() {
        out.write_record([q.to_string(), p.to_string(), v.to_string()])?;
    }
    out.flush()?;
    Ok(())
}

/// One member of an enumeration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnumerationLine {
    pub n: LatticeDim,
    pub bits: String,
    pub sign: Vec<Vec<i8>>,
}

impl EnumerationLine {
    pub fn new(sign: &SignFn) -> Self {
        Self {
            n: sign.dim(),
            bits: format_bits(&sign.free_bits()),
            sign: sign.to_rows(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnumerationSummary {
    pub n: LatticeDim,
    pub count: u64,
    pub certified: bool,
    /// Members matrix-verified by seeded sampling, when not fully certified.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sampled: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample_pass: Option<bool>,
}
