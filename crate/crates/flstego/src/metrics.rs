//! Cover/stego fidelity measures: mean squared error and peak
//! signal-to-noise ratio for 8-bit images (peak fixed at 255).

use crate::error::{Error, Result};
use crate::image::GrayImage;

/// Peak sample value of the 8-bit covers this library works with.
pub const PEAK: f64 = 255.0;

/// MSE and PSNR of a cover/stego pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QualityReport {
    pub mse: f64,
    /// Positive infinity when the images are identical (mse = 0).
    pub psnr_db: f64,
    pub width: usize,
    pub height: usize,
}

/// Mean squared error between two images of equal size.
///
/// Squared differences are accumulated exactly in integers; the single
/// division happens at the end.
pub fn mse(a: &GrayImage, b: &GrayImage) -> Result<f64> {
    if a.side() != b.side() {
        return Err(Error::SideMismatch {
            expected: a.side(),
            actual: b.side(),
        });
    }
    let sum: u64 = a
        .data()
        .iter()
        .zip(b.data())
        .map(|(&p, &q)| {
            let diff = i64::from(p) - i64::from(q);
            (diff * diff) as u64
        })
        .sum();
    Ok(sum as f64 / (a.side() * a.side()) as f64)
}

/// Peak signal-to-noise ratio in decibels; infinity for identical images.
pub fn psnr(a: &GrayImage, b: &GrayImage) -> Result<f64> {
    Ok(psnr_from_mse(mse(a, b)?))
}

/// PSNR corresponding to a known MSE: 10 * log10(255^2 / mse).
pub fn psnr_from_mse(mse: f64) -> f64 {
    if mse == 0.0 {
        f64::INFINITY
    } else {
        10.0 * (PEAK * PEAK / mse).log10()
    }
}

/// Both measures at once.
pub fn compare(a: &GrayImage, b: &GrayImage) -> Result<QualityReport> {
    let mse = mse(a, b)?;
    Ok(QualityReport {
        mse,
        psnr_db: psnr_from_mse(mse),
        width: a.side(),
        height: a.side(),
    })
}
