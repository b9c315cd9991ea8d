//! Chaos-game rasters of `X_B` and `X_L`, written as binary PPM and optionally PNG.

use std::io::Write;
use std::path::Path;

use ifs_spectra_core::lattice::{invariant_box, rat_to_f64, rat_to_string, Rational};
use ifs_spectra_core::measure::{AffineSystem, MeasureSampler};
use ifs_spectra_core::HadamardTriple;
use serde::Serialize;

use crate::config::{parse_window, Attractor, ImageOptions};
use crate::error::{CliError, CliResult};

/// Hit counts of a point cloud on a pixel grid, row 0 at the top.
#[derive(Clone, Debug)]
pub struct ImageCanvas {
    pub width: usize,
    pub height: usize,
    pub window: Vec<(Rational, Rational)>,
    pub hits: Vec<u32>,
    bounds: Vec<(f64, f64)>,
}

impl ImageCanvas {
    /// `window` has one axis for a 1-D system (drawn as a horizontal strip) or two.
    pub fn new(width: usize, height: usize, window: Vec<(Rational, Rational)>) -> Self {
        let bounds = window.iter().map(|(lo, hi)| (rat_to_f64(lo), rat_to_f64(hi))).collect();
        Self {
            width,
            height,
            window,
            hits: vec![0; width * height],
            bounds,
        }
    }

    fn bin(v: f64, (lo, hi): (f64, f64), n: usize) -> Option<usize> {
        let t = (v - lo) / (hi - lo);
        if !(0.0..=1.0).contains(&t) {
            return None;
        }
        Some(((t * n as f64) as usize).min(n - 1))
    }

    /// Counts one point; points outside the window are dropped.
    pub fn plot(&mut self, x: &[f64]) {
        let Some(col) = Self::bin(x[0], self.bounds[0], self.width) else { return };
        if self.bounds.len() == 1 {
            for row in 0..self.height {
                self.hits[row * self.width + col] += 1;
            }
            return;
        }
        let Some(r) = Self::bin(x[1], self.bounds[1], self.height) else { return };
        let row = self.height - 1 - r;
        self.hits[row * self.width + col] += 1;
    }

    /// Log-scaled 8-bit gray levels: 0 for empty pixels, 1..=255 otherwise.
    pub fn gray(&self) -> Vec<u8> {
        let max = self.hits.iter().copied().max().unwrap_or(0);
        if max == 0 {
            return vec![0; self.hits.len()];
        }
        let scale = (1.0 + max as f64).ln();
        self.hits
            .iter()
            .map(|&h| if h == 0 { 0 } else { 1 + (254.0 * (1.0 + h as f64).ln() / scale).round() as u8 })
            .collect()
    }

    pub fn nonzero_fraction(&self) -> f64 {
        self.hits.iter().filter(|&&h| h > 0).count() as f64 / self.hits.len() as f64
    }

    /// P6 bytes: header, then RGB triples row by row from the top.
    pub fn ppm(&self) -> Vec<u8> {
        let mut out = format!("P6\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.reserve(3 * self.hits.len());
        for g in self.gray() {
            out.extend_from_slice(&[g, g, g]);
        }
        out
    }

    pub fn write_ppm(&self, path: &Path) -> CliResult<()> {
        let mut f = std::fs::File::create(path).map_err(|e| CliError::io(path, e))?;
        f.write_all(&self.ppm()).map_err(|e| CliError::io(path, e))
    }

    pub fn write_png(&self, path: &Path) -> CliResult<()> {
        let img = image::GrayImage::from_raw(self.width as u32, self.height as u32, self.gray()).expect("raster size matches");
        img.save_with_format(path, image::ImageFormat::Png).map_err(|e| match e {
            image::ImageError::IoError(io) => CliError::io(path, io),
            other => CliError::io(path, std::io::Error::other(other.to_string())),
        })
    }
}

/// The exact invariant box of the maps, widened where it is flat.
pub fn auto_window(a: &ifs_spectra_core::lattice::RationalMatrix, digits: &[Vec<i64>]) -> CliResult<Vec<(Rational, Rational)>> {
    let b = invariant_box(a, digits)?.bounds;
    Ok(b.lo
        .into_iter()
        .zip(b.hi)
        .map(|(lo, hi)| {
            if lo == hi {
                let one = Rational::from_integer(1.into());
                (&lo - &one, &hi + &one)
            } else {
                (lo, hi)
            }
        })
        .collect())
}

#[derive(Clone, Debug, Serialize)]
pub struct RenderSummary {
    pub attractor: Attractor,
    pub width: usize,
    pub height: usize,
    pub points: usize,
    pub window: Vec<[String; 2]>,
    pub nonzero_fraction: f64,
    pub files: Vec<String>,
}

/// Chaos game for one attractor, rasterized into a canvas.
pub fn render(t: &HadamardTriple, which: Attractor, opts: &ImageOptions, seed: u64) -> CliResult<ImageCanvas> {
    if t.dim() > 2 {
        return Err(CliError::Input(format!("rendering supports dimension 1 or 2, got {}", t.dim())));
    }
    let (system, configured, a, digits) = match which {
        Attractor::Xb => (AffineSystem::measure(t), &opts.window_b, t.r_inv(), t.b()),
        Attractor::Xl => (AffineSystem::dual(t), &opts.window_l, t.s_inv(), t.l()),
    };
    let window = match configured {
        Some(w) => parse_window(w, t.dim())?,
        None => auto_window(a, digits)?,
    };
    let mut canvas = ImageCanvas::new(opts.width, opts.height, window);
    MeasureSampler::new(system, seed).chaos_game_each(opts.points, |p| canvas.plot(p));
    Ok(canvas)
}

pub fn summary(which: Attractor, canvas: &ImageCanvas, points: usize, files: Vec<String>) -> RenderSummary {
    RenderSummary {
        attractor: which,
        width: canvas.width,
        height: canvas.height,
        points,
        window: canvas.window.iter().map(|(lo, hi)| [rat_to_string(lo), rat_to_string(hi)]).collect(),
        nonzero_fraction: canvas.nonzero_fraction(),
        files,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ifs_spectra_core::lattice::rat;

    #[test]
    fn pixel_layout() {
        let mut c = ImageCanvas::new(4, 2, vec![(rat(0, 1), rat(1, 1)), (rat(0, 1), rat(1, 1))]);
        c.plot(&[0.0, 0.0]);
        c.plot(&[1.0, 1.0]);
        c.plot(&[2.0, 0.5]);
        // bottom-left and top-right
        assert_eq!(c.hits[4], 1);
        assert_eq!(c.hits[3], 1);
        assert_eq!(c.hits.iter().sum::<u32>(), 2);
        let ppm = c.ppm();
        assert!(ppm.starts_with(b"P6\n4 2\n255\n"));
        assert_eq!(ppm.len(), 11 + 3 * 8);
    }

    #[test]
    fn strip_fills_columns() {
        let mut c = ImageCanvas::new(3, 5, vec![(rat(0, 1), rat(1, 1))]);
        c.plot(&[0.5]);
        assert_eq!(c.hits.iter().filter(|&&h| h == 1).count(), 5);
        assert!((c.nonzero_fraction() - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn gray_levels() {
        let mut c = ImageCanvas::new(2, 1, vec![(rat(0, 1), rat(1, 1)), (rat(0, 1), rat(1, 1))]);
        c.plot(&[0.1, 0.5]);
        assert_eq!(c.gray(), vec![255, 0]);
    }
}
