//! Bit-plane decomposition of 8-bit grayscale images.
//!
//! Plane k collects bit k-1 of every pixel, so plane 1 is the least
//! significant plane and plane 8 the most significant. Slicing and
//! reconstruction are exact inverses of each other.

use crate::error::{Error, Result};
use crate::image::{BinaryImage, GrayImage};

/// Number of planes in a stack; 8-bit pixels, 8 planes.
pub const PLANE_COUNT: usize = 8;

/// The 8 binary planes of a grayscale image, least significant first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitPlaneStack {
    planes: [BinaryImage; PLANE_COUNT],
}

/// Decomposes an image into its 8 bit planes.
pub fn slice(img: &GrayImage) -> BitPlaneStack {
    let planes = std::array::from_fn(|bit| {
        let bits = img
            .data()
            .iter()
            .map(|&pixel| (pixel >> bit) & 1 == 1)
            .collect();
        BinaryImage::from_raw(img.side(), bits)
    });
    BitPlaneStack { planes }
}

impl BitPlaneStack {
    /// Assembles a stack from 8 planes of equal side, least significant
    /// first.
    pub fn from_planes(planes: [BinaryImage; PLANE_COUNT]) -> Result<Self> {
        let side = planes[0].side();
        for plane in &planes[1..] {
            if plane.side() != side {
                return Err(Error::SideMismatch {
                    expected: side,
                    actual: plane.side(),
                });
            }
        }
        Ok(BitPlaneStack { planes })
    }

    pub fn side(&self) -> usize {
        self.planes[0].side()
    }

    /// Plane k, with k in 1..=8 counted from the least significant bit.
    pub fn plane(&self, k: u8) -> Result<&BinaryImage> {
        Ok(&self.planes[plane_slot(k)?])
    }

    /// Swaps in a new plane k, leaving the other seven untouched.
    pub fn replace_plane(&mut self, k: u8, plane: BinaryImage) -> Result<()> {
        let slot = plane_slot(k)?;
        if plane.side() != self.side() {
            return Err(Error::SideMismatch {
                expected: self.side(),
                actual: plane.side(),
            });
        }
        self.planes[slot] = plane;
        Ok(())
    }

    /// All planes, least significant first.
    pub fn planes(&self) -> &[BinaryImage; PLANE_COUNT] {
        &self.planes
    }

    /// Reassembles the grayscale image: each pixel is the weighted sum
    /// of its plane bits, plane k contributing 2^(k-1).
    pub fn reconstruct(&self) -> GrayImage {
        let side = self.side();
        let mut pixels = vec![0u8; side * side];
        for (bit, plane) in self.planes.iter().enumerate() {
            for (pixel, &set) in pixels.iter_mut().zip(plane.data()) {
                *pixel |= (set as u8) << bit;
            }
        }
        GrayImage::from_raw(side, pixels)
    }
}

fn plane_slot(k: u8) -> Result<usize> {
    if !(1..=PLANE_COUNT as u8).contains(&k) {
        return Err(Error::PlaneIndex { plane: k });
    }
    Ok(usize::from(k) - 1)
}
