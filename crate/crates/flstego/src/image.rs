//! Square raster types shared by the whole pipeline.
//!
//! Coordinates follow the (x, y) = (row, column) convention, zero-indexed,
//! with pixels stored row-major. The torus transforms require side =
//! modulus, so every image in the pipeline is square with side at least 2.

use crate::error::{Error, Result};

/// A square raster of copyable samples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Image<T> {
    side: usize,
    data: Vec<T>,
}

/// 8-bit grayscale raster, the cover/stego carrier.
pub type GrayImage = Image<u8>;

/// 1-bit raster, a secret message or a single bit plane.
pub type BinaryImage = Image<bool>;

impl<T: Copy> Image<T> {
    /// Builds a side x side image with every sample set to `value`.
    pub fn filled(side: usize, value: T) -> Result<Self> {
        check_side(side)?;
        Ok(Image {
            side,
            data: vec![value; side * side],
        })
    }

    /// Wraps a row-major buffer of exactly side * side samples.
    pub fn from_vec(side: usize, data: Vec<T>) -> Result<Self> {
        check_side(side)?;
        if data.len() != side * side {
            return Err(Error::BufferSize {
                expected: side * side,
                actual: data.len(),
            });
        }
        Ok(Image { side, data })
    }

    /// Internal constructor for buffers whose shape is already known good.
    pub(crate) fn from_raw(side: usize, data: Vec<T>) -> Self {
        debug_assert!(side >= 2 && data.len() == side * side);
        Image { side, data }
    }

    /// Sample at (row, column). Panics when out of bounds.
    pub fn get(&self, x: usize, y: usize) -> T {
        assert!(x < self.side && y < self.side, "pixel index out of bounds");
        self.data[x * self.side + y]
    }

    /// Overwrites the sample at (row, column). Panics when out of bounds.
    pub fn set(&mut self, x: usize, y: usize, value: T) {
        assert!(x < self.side && y < self.side, "pixel index out of bounds");
        self.data[x * self.side + y] = value;
    }

}

impl<T> Image<T> {
    pub fn side(&self) -> usize {
        self.side
    }

    /// Row-major view of all samples.
    pub fn data(&self) -> &[T] {
        &self.data
    }

    /// Iterator over rows, top to bottom.
    pub fn rows(&self) -> impl Iterator<Item = &[T]> {
        self.data.chunks_exact(self.side)
    }
}

impl Image<bool> {
    /// Number of set bits; a scramble-invariant of binary images.
    pub fn count_ones(&self) -> usize {
        self.data.iter().filter(|&&bit| bit).count()
    }
}

fn check_side(side: usize) -> Result<()> {
    if side < 2 {
        return Err(Error::SideTooSmall { side });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn filled_and_access() {
        let mut img = GrayImage::filled(3, 7).unwrap();
        assert_eq!(img.side(), 3);
        assert_eq!(img.get(2, 1), 7);
        img.set(2, 1, 200);
        assert_eq!(img.get(2, 1), 200);
        assert_eq!(img.data().len(), 9);
    }

    #[test]
    fn from_vec_is_row_major() {
        let img = GrayImage::from_vec(2, vec![1, 2, 3, 4]).unwrap();
        assert_eq!(img.get(0, 0), 1);
        assert_eq!(img.get(0, 1), 2);
        assert_eq!(img.get(1, 0), 3);
        assert_eq!(img.get(1, 1), 4);
        let rows: Vec<&[u8]> = img.rows().collect();
        assert_eq!(rows, vec![&[1, 2][..], &[3, 4][..]]);
    }

    #[test]
    fn rejects_tiny_sides() {
        assert!(matches!(
            GrayImage::filled(1, 0),
            Err(Error::SideTooSmall { side: 1 })
        ));
        assert!(matches!(
            BinaryImage::from_vec(0, vec![]),
            Err(Error::SideTooSmall { side: 0 })
        ));
    }

    #[test]
    fn rejects_wrong_buffer_length() {
        assert!(matches!(
            GrayImage::from_vec(2, vec![0; 5]),
            Err(Error::BufferSize {
                expected: 4,
                actual: 5
            })
        ));
    }

    #[test]
    fn count_ones_counts_set_bits() {
        let img = BinaryImage::from_vec(2, vec![true, false, true, true]).unwrap();
        assert_eq!(img.count_ones(), 3);
    }
}
