//! Hyperspectral cube data model and bit-exact container I/O.
//!
//! A cube is an `S x H x W` stack of spectral bands (band-major, row-major
//! within each band) with reflectance values in `[0, 1]` and optional
//! per-band wavelengths. On disk a cube is a directory holding `header.json`
//! and `data.f32` (raw little-endian IEEE-754 binary32, exactly
//! `bands * height * width` values in memory order).
//!
//! In memory the payload is kept as `f64` so downstream numerics (losses,
//! mixing, gradients) are not limited by single precision; the on-disk
//! payload stays `f32`, and loading widens losslessly.

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use ndarray::{Array3, ArrayView2, ArrayView3};
use serde::{Deserialize, Serialize};

use crate::error::{HsiError, Result};

/// Upscaling ratio between the high- and low-resolution grids.
///
/// Always >= 1; `as_integer` reports whether the ratio is an exact integer,
/// which selects the anti-aliasing path in the resampler.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaleFactor(f64);

impl ScaleFactor {
    pub fn new(value: f64) -> Result<Self> {
        if !value.is_finite() {
            return Err(HsiError::InvalidScale {
                value,
                reason: "must be finite".into(),
            });
        }
        if value < 1.0 {
            return Err(HsiError::InvalidScale {
                value,
                reason: "must be >= 1".into(),
            });
        }
        Ok(ScaleFactor(value))
    }

    pub fn value(&self) -> f64 {
        self.0
    }

    /// `Some(r)` when the factor is exactly the integer `r`.
    pub fn as_integer(&self) -> Option<u32> {
        if self.0.fract() == 0.0 && self.0 <= u32::MAX as f64 {
            Some(self.0 as u32)
        } else {
            None
        }
    }
}

/// What to do with values outside `[0, 1]` when constructing or loading.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RangePolicy {
    /// Fail with the flat index of the first offender (the default).
    Reject,
    /// Clamp into `[0, 1]`. Non-finite values are still rejected.
    Clamp,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CubeHeader {
    height: usize,
    width: usize,
    bands: usize,
    dtype: String,
    layout: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    wavelengths_nm: Option<Vec<f64>>,
}

/// An `S x H x W` hyperspectral cube with values in `[0, 1]`.
///
/// Band indices are zero-based throughout (a 1-based band `s` in common
/// notation maps to index `s - 1` here).
#[derive(Debug, Clone, PartialEq)]
pub struct HsiCube {
    data: Array3<f64>,
    wavelengths_nm: Option<Vec<f64>>,
}

impl HsiCube {
    /// Validating constructor: rejects non-finite or out-of-range values.
    pub fn new(data: Array3<f64>, wavelengths_nm: Option<Vec<f64>>) -> Result<Self> {
        Self::with_policy(data, wavelengths_nm, RangePolicy::Reject)
    }

    /// Constructor with an explicit out-of-range policy.
    pub fn with_policy(
        mut data: Array3<f64>,
        wavelengths_nm: Option<Vec<f64>>,
        policy: RangePolicy,
    ) -> Result<Self> {
        let (bands, h, w) = data.dim();
        if bands == 0 || h == 0 || w == 0 {
            return Err(HsiError::Config(format!(
                "cube dimensions must be positive, got {bands}x{h}x{w}"
            )));
        }
        for (i, v) in data.iter_mut().enumerate() {
            if !v.is_finite() {
                return Err(HsiError::NonFinite { index: i });
            }
            if *v < 0.0 || *v > 1.0 {
                match policy {
                    RangePolicy::Reject => {
                        return Err(HsiError::OutOfRange { index: i, value: *v })
                    }
                    RangePolicy::Clamp => *v = v.clamp(0.0, 1.0),
                }
            }
        }
        Self::check_wavelengths(&wavelengths_nm, bands)?;
        Ok(HsiCube {
            data,
            wavelengths_nm,
        })
    }

    /// Wraps computed data without the range check (values must be finite).
    ///
    /// Resampling and model predictions can legitimately overshoot `[0, 1]`
    /// by a small margin; such cubes are clamped only when materialized
    /// (see [`HsiCube::clamped`]). Containers written from an out-of-range
    /// cube will fail to load without an explicit clamp policy.
    pub fn from_computed(data: Array3<f64>, wavelengths_nm: Option<Vec<f64>>) -> Result<Self> {
        let (bands, _, _) = data.dim();
        if let Some((i, _)) = data.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(HsiError::NonFinite { index: i });
        }
        Self::check_wavelengths(&wavelengths_nm, bands)?;
        Ok(HsiCube {
            data,
            wavelengths_nm,
        })
    }

    fn check_wavelengths(wavelengths_nm: &Option<Vec<f64>>, bands: usize) -> Result<()> {
        if let Some(wl) = wavelengths_nm {
            if wl.len() != bands {
                return Err(HsiError::Config(format!(
                    "wavelengths_nm has {} entries for {} bands",
                    wl.len(),
                    bands
                )));
            }
            if !wl.iter().all(|v| v.is_finite()) {
                return Err(HsiError::Config("wavelengths_nm must be finite".into()));
            }
            if wl.windows(2).any(|p| p[0] >= p[1]) {
                return Err(HsiError::Config(
                    "wavelengths_nm must strictly increase".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn bands(&self) -> usize {
        self.data.dim().0
    }

    pub fn height(&self) -> usize {
        self.data.dim().1
    }

    pub fn width(&self) -> usize {
        self.data.dim().2
    }

    pub fn data(&self) -> ArrayView3<'_, f64> {
        self.data.view()
    }

    pub fn into_data(self) -> Array3<f64> {
        self.data
    }

    pub fn wavelengths_nm(&self) -> Option<&[f64]> {
        self.wavelengths_nm.as_deref()
    }

    /// View of band `s` as an `H x W` image.
    pub fn band(&self, s: usize) -> Result<ArrayView2<'_, f64>> {
        if s >= self.bands() {
            return Err(HsiError::BandIndex {
                index: s,
                bands: self.bands(),
            });
        }
        Ok(self.data.index_axis(ndarray::Axis(0), s))
    }

    /// Reassembles a cube from bands in order. Inverse of per-band extraction.
    pub fn from_bands(bands: &[ArrayView2<'_, f64>], wavelengths_nm: Option<Vec<f64>>) -> Result<Self> {
        if bands.is_empty() {
            return Err(HsiError::Config("no bands given".into()));
        }
        let (h, w) = bands[0].dim();
        let mut data = Array3::zeros((bands.len(), h, w));
        for (s, b) in bands.iter().enumerate() {
            if b.dim() != (h, w) {
                return Err(HsiError::ShapeMismatch {
                    expected: format!("{h}x{w}"),
                    actual: format!("{}x{}", b.dim().0, b.dim().1),
                });
            }
            data.index_axis_mut(ndarray::Axis(0), s).assign(b);
        }
        Self::from_computed(data, wavelengths_nm)
    }

    /// Copy with all values clamped into `[0, 1]`.
    pub fn clamped(&self) -> HsiCube {
        HsiCube {
            data: self.data.mapv(|v| v.clamp(0.0, 1.0)),
            wavelengths_nm: self.wavelengths_nm.clone(),
        }
    }

    /// Writes `header.json` + `data.f32` into `path` (created if missing).
    ///
    /// The payload is `f32`; values that are not exactly representable in
    /// single precision are rounded once here, so `save` then `load` is the
    /// identity precisely for f32-representable data (which includes
    /// everything produced by [`load`](HsiCube::load) and the synthetic
    /// generator).
    pub fn save(&self, path: &Path) -> Result<()> {
        fs::create_dir_all(path).map_err(|e| HsiError::io(path, e))?;
        let header = CubeHeader {
            height: self.height(),
            width: self.width(),
            bands: self.bands(),
            dtype: "f32le".into(),
            layout: "band-major".into(),
            wavelengths_nm: self.wavelengths_nm.clone(),
        };
        let header_path = path.join("header.json");
        let json = serde_json::to_string_pretty(&header)
            .map_err(|e| HsiError::Container {
                path: header_path.clone(),
                reason: e.to_string(),
            })?;
        fs::write(&header_path, json).map_err(|e| HsiError::io(&header_path, e))?;

        let data_path = path.join("data.f32");
        let mut bytes = Vec::with_capacity(self.data.len() * 4);
        for &v in self.data.iter() {
            bytes.extend_from_slice(&(v as f32).to_le_bytes());
        }
        let mut f = fs::File::create(&data_path).map_err(|e| HsiError::io(&data_path, e))?;
        f.write_all(&bytes).map_err(|e| HsiError::io(&data_path, e))?;
        Ok(())
    }

    /// Loads a container, rejecting out-of-range values (see [`RangePolicy`]).
    pub fn load(path: &Path) -> Result<Self> {
        Self::load_with(path, RangePolicy::Reject)
    }

    pub fn load_with(path: &Path, policy: RangePolicy) -> Result<Self> {
        let header_path = path.join("header.json");
        let header_text =
            fs::read_to_string(&header_path).map_err(|e| HsiError::io(&header_path, e))?;
        let header: CubeHeader =
            serde_json::from_str(&header_text).map_err(|e| HsiError::Container {
                path: header_path.clone(),
                reason: e.to_string(),
            })?;
        if header.dtype != "f32le" {
            return Err(HsiError::Container {
                path: header_path.clone(),
                reason: format!("unsupported dtype {:?}", header.dtype),
            });
        }
        if header.layout != "band-major" {
            return Err(HsiError::Container {
                path: header_path.clone(),
                reason: format!("unsupported layout {:?}", header.layout),
            });
        }
        if header.height == 0 || header.width == 0 || header.bands == 0 {
            return Err(HsiError::Container {
                path: header_path,
                reason: "dimensions must be positive".into(),
            });
        }

        let expected = header.bands * header.height * header.width;
        let data_path = path.join("data.f32");
        let mut f = fs::File::open(&data_path).map_err(|e| HsiError::io(&data_path, e))?;
        let mut bytes = Vec::new();
        f.read_to_end(&mut bytes)
            .map_err(|e| HsiError::io(&data_path, e))?;
        if bytes.len() != expected * 4 {
            return Err(HsiError::Container {
                path: data_path,
                reason: format!(
                    "payload holds {} values but header declares {}",
                    bytes.len() / 4,
                    expected
                ),
            });
        }
        let mut values = Vec::with_capacity(expected);
        for chunk in bytes.chunks_exact(4) {
            let v = f32::from_le_bytes([chunk[0], chunk[1], chunk[2], chunk[3]]);
            values.push(v as f64);
        }
        let data = Array3::from_shape_vec((header.bands, header.height, header.width), values)
            .expect("length checked above");
        Self::with_policy(data, header.wavelengths_nm, policy)
    }
}
