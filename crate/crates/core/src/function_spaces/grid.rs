use std::f64::consts::PI;
use std::io::{Read, Write};

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Space {
    Physical,
    Frequency,
}

/// Tensor grid on `[-X, X)^d` with `N` points per axis, `x_k = -X + k h`,
/// paired with the frequency grid `ξ_m = (m - N/2) π / X`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub dim: usize,
    pub half_width: f64,
    pub n: usize,
}

impl GridSpec {
    pub fn new(dim: usize, half_width: f64, n: usize) -> Result<Self> {
        if dim == 0 || dim > 3 {
            return Err(Error::Config(format!("grid dimension must be 1..=3, got {dim}")));
        }
        if n < 2 || !n.is_multiple_of(2) {
            return Err(Error::Config(format!("points per axis must be even and ≥ 2, got {n}")));
        }
        if !(half_width > 0.0 && half_width.is_finite()) {
            return Err(Error::Config(format!("half width must be positive, got {half_width}")));
        }
        Ok(GridSpec { dim, half_width, n })
    }

    /// `X = 12` with `N = 512` in one dimension and `N = 128` in two or more.
    pub fn default_for(dim: usize) -> Result<Self> {
        Self::new(dim, 12.0, if dim == 1 { 512 } else { 128 })
    }

    pub fn h(&self) -> f64 {
        2.0 * self.half_width / self.n as f64
    }

    pub fn dxi(&self) -> f64 {
        PI / self.half_width
    }

    pub fn len(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn coord(&self, space: Space, k: usize) -> f64 {
        match space {
            Space::Physical => -self.half_width + k as f64 * self.h(),
            Space::Frequency => (k as f64 - (self.n / 2) as f64) * self.dxi(),
        }
    }

    /// Row-major multi-index of a flat position (last axis fastest).
    pub fn unflatten(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.dim];
        for a in (0..self.dim).rev() {
            idx[a] = flat % self.n;
            flat /= self.n;
        }
        idx
    }

    pub fn point(&self, space: Space, flat: usize) -> Vec<f64> {
        self.unflatten(flat).into_iter().map(|k| self.coord(space, k)).collect()
    }

    pub fn points(&self, space: Space) -> impl Iterator<Item = Vec<f64>> + '_ {
        (0..self.len()).map(move |i| self.point(space, i))
    }

    /// True when every coordinate lies in the inner `fraction` of the box.
    pub fn is_interior(&self, flat: usize, fraction: f64) -> bool {
        self.point(Space::Physical, flat).iter().all(|x| x.abs() <= fraction * self.half_width)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    spec: GridSpec,
    space: Space,
    values: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct Header {
    dim: usize,
    half_width: f64,
    n: usize,
    space: Space,
}

impl GridFunction {
    pub fn new(spec: GridSpec, space: Space, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != spec.len() {
            return Err(Error::Dimension { expected: spec.len(), found: values.len() });
        }
        Ok(GridFunction { spec, space, values })
    }

    pub fn from_fn(spec: GridSpec, space: Space, f: impl Fn(&[f64]) -> Complex64) -> Self {
        let values = spec.points(space).map(|p| f(&p)).collect();
        GridFunction { spec, space, values }
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn scale(&self, c: Complex64) -> Self {
        GridFunction { values: self.values.iter().map(|v| v * c).collect(), ..self.clone() }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.spec != other.spec || self.space != other.space {
            return Err(Error::Tag("grid functions live on different grids".into()));
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect();
        Ok(GridFunction { values, ..self.clone() })
    }

    /// Pointwise product with `g` sampled on the same grid.
    pub fn mul_fn(&self, g: impl Fn(&[f64]) -> Complex64) -> Self {
        let values =
            self.values.iter().enumerate().map(|(i, v)| v * g(&self.spec.point(self.space, i))).collect();
        GridFunction { values, ..self.clone() }
    }

    /// `û(ξ) = ∫ u(x) e^{-i⟨x,ξ⟩} dx` by FFT with the phase and `h^d` corrections.
    pub fn fourier(&self) -> Result<Self> {
        if self.space != Space::Physical {
            return Err(Error::Tag("forward transform needs physical-space input".into()));
        }
        let mut v = self.values.clone();
        transform(&self.spec, &mut v, false);
        Ok(GridFunction { spec: self.spec, space: Space::Frequency, values: v })
    }

    /// `u(x) = (2π)^{-d} ∫ û(ξ) e^{i⟨x,ξ⟩} dξ`, the exact inverse of [`Self::fourier`].
    pub fn inverse_fourier(&self) -> Result<Self> {
        if self.space != Space::Frequency {
            return Err(Error::Tag("inverse transform needs frequency-space input".into()));
        }
        let mut v = self.values.clone();
        transform(&self.spec, &mut v, true);
        Ok(GridFunction { spec: self.spec, space: Space::Physical, values: v })
    }

    /// Riemann-sum `L²` norm squared, `h^d Σ|u|²` or `Δξ^d Σ|û|²`.
    pub fn norm_sq(&self) -> f64 {
        let cell = match self.space {
            Space::Physical => self.spec.h(),
            Space::Frequency => self.spec.dxi(),
        };
        cell.powi(self.spec.dim as i32) * self.values.iter().map(|v| v.norm_sqr()).sum::<f64>()
    }

    /// Relative Parseval defect `|‖û‖² − (2π)^d ‖u‖²| / ((2π)^d ‖u‖²)` for physical input.
    pub fn parseval_defect(&self) -> Result<f64> {
        let lhs = self.fourier()?.norm_sq();
        let rhs = (2.0 * PI).powi(self.spec.dim as i32) * self.norm_sq();
        Ok((lhs - rhs).abs() / rhs.max(f64::MIN_POSITIVE))
    }

    /// Largest relative difference to `other` over points with `|x_i| ≤ fraction·X`.
    pub fn interior_rel_error(&self, other: &Self, fraction: f64) -> f64 {
        let scale = self.values.iter().map(|v| v.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
        (0..self.values.len())
            .filter(|&i| self.space == Space::Frequency || self.spec.is_interior(i, fraction))
            .map(|i| (self.values[i] - other.values[i]).norm() / scale)
            .fold(0.0, f64::max)
    }

    /// JSON header line followed by little-endian `(re, im)` pairs.
    pub fn write_binary<W: Write>(&self, mut out: W) -> Result<()> {
        let header = Header { dim: self.spec.dim, half_width: self.spec.half_width, n: self.spec.n, space: self.space };
        serde_json::to_writer(&mut out, &header)?;
        out.write_all(b"\n")?;
        for v in &self.values {
            out.write_all(&v.re.to_le_bytes())?;
            out.write_all(&v.im.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_binary<R: Read>(mut input: R) -> Result<Self> {
        let mut bytes = Vec::new();
        input.read_to_end(&mut bytes)?;
        let nl = bytes.iter().position(|b| *b == b'\n').ok_or_else(|| Error::Config("missing header line".into()))?;
        let header: Header = serde_json::from_slice(&bytes[..nl])?;
        let spec = GridSpec::new(header.dim, header.half_width, header.n)?;
        let body = &bytes[nl + 1..];
        if body.len() != 16 * spec.len() {
            return Err(Error::Dimension { expected: 16 * spec.len(), found: body.len() });
        }
        let values = body
            .chunks_exact(16)
            .map(|c| {
                let re = f64::from_le_bytes(c[..8].try_into().unwrap());
                let im = f64::from_le_bytes(c[8..].try_into().unwrap());
                Complex64::new(re, im)
            })
            .collect();
        GridFunction::new(spec, header.space, values)
    }
}

/// Axis-by-axis transform. Forward: `û_m = h e^{iXξ_m} DFT[(-1)^k u_k]_m`;
/// inverse undoes it exactly.
pub(crate) fn transform(spec: &GridSpec, v: &mut [Complex64], inverse: bool) {
    let n = spec.n;
    let x = spec.half_width;
    let mut planner = FftPlanner::new();
    let fft = if inverse { planner.plan_fft_inverse(n) } else { planner.plan_fft_forward(n) };
    let phase: Vec<Complex64> = (0..n)
        .map(|m| {
            let xi = spec.coord(Space::Frequency, m);
            Complex64::from_polar(1.0, if inverse { -x * xi } else { x * xi })
        })
        .collect();
    let sign = |k: usize| if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    let scale = if inverse { 1.0 / (spec.h() * n as f64) } else { spec.h() };
    let mut line = vec![Complex64::new(0.0, 0.0); n];
    for axis in 0..spec.dim {
        let stride = n.pow((spec.dim - 1 - axis) as u32);
        let outer = v.len() / (n * stride);
        for o in 0..outer {
            for s in 0..stride {
                let base = o * n * stride + s;
                for k in 0..n {
                    let u = v[base + k * stride];
                    line[k] = if inverse { u * phase[k] } else { u * sign(k) };
                }
                fft.process(&mut line);
                for k in 0..n {
                    let u = line[k] * scale;
                    v[base + k * stride] = if inverse { u * sign(k) } else { u * phase[k] };
                }
            }
        }
    }
}
