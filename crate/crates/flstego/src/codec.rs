//! Bit-exact netpbm I/O for covers and secrets.
//!
//! Supported formats: PGM P2/P5 with maxval 255 for grayscale images,
//! PBM P1/P4 for binary images. PBM follows the usual convention that a
//! file bit of 1 means black; that bit maps directly onto a set plane
//! bit. P4 rows are padded to whole bytes, most significant bit first.
//!
//! Decoding is split in two layers. The raster layer ([`GrayRaster`],
//! [`BitRaster`]) handles arbitrary width x height files; the image
//! layer ([`read_gray`], [`read_bin`]) additionally enforces the square
//! shape the scrambling torus needs. Writers encode in memory and then
//! replace the target file atomically (write to a temporary file in the
//! same directory, rename on success), so a failed run never leaves a
//! half-written artifact behind.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::image::{BinaryImage, GrayImage, Image};

/// On-disk flavor for grayscale images.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PgmFormat {
    /// P2, whitespace-separated decimal samples.
    Ascii,
    /// P5, one raw byte per sample. The default write format.
    Binary,
}

/// On-disk flavor for binary images.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PbmFormat {
    /// P1, `0`/`1` characters.
    Ascii,
    /// P4, eight packed pixels per byte. The default write format.
    Binary,
}

/// What kind of raster a file holds, judged by its magic number.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RasterKind {
    /// P2 or P5.
    Gray,
    /// P1 or P4.
    Bitmap,
}

/// Grayscale raster of arbitrary dimensions, the raw decode result.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayRaster {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<u8>,
}

/// Binary raster of arbitrary dimensions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitRaster {
    pub width: usize,
    pub height: usize,
    pub bits: Vec<bool>,
}

impl GrayRaster {
    /// Converts into a pipeline image, enforcing squareness and the
    /// minimum side.
    pub fn into_image(self) -> Result<GrayImage> {
        square_image(self.width, self.height, self.pixels)
    }

    pub fn from_image(img: &GrayImage) -> Self {
        GrayRaster {
            width: img.side(),
            height: img.side(),
            pixels: img.data().to_vec(),
        }
    }
}

impl BitRaster {
    pub fn into_image(self) -> Result<BinaryImage> {
        square_image(self.width, self.height, self.bits)
    }

    pub fn from_image(img: &BinaryImage) -> Self {
        BitRaster {
            width: img.side(),
            height: img.side(),
            bits: img.data().to_vec(),
        }
    }
}

fn square_image<T: Copy>(width: usize, height: usize, data: Vec<T>) -> Result<Image<T>> {
    if width != height {
        return Err(Error::NonSquare { width, height });
    }
    Image::from_vec(width, data)
}

/// Identifies the raster kind from the magic number.
pub fn sniff_kind(bytes: &[u8]) -> Result<RasterKind> {
    match bytes.get(..2) {
        Some(b"P1") | Some(b"P4") => Ok(RasterKind::Bitmap),
        Some(b"P2") | Some(b"P5") => Ok(RasterKind::Gray),
        _ => Err(Error::Parse(
            "not a supported netpbm file (expected P1, P2, P4 or P5)".into(),
        )),
    }
}

// ---------------------------------------------------------------------
// Decoding

struct Scanner<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Scanner<'a> {
    fn new(bytes: &'a [u8]) -> Self {
        Scanner { bytes, pos: 0 }
    }

    /// Skips whitespace and `#` comment lines. Valid wherever a header
    /// token or ASCII sample may start.
    fn skip_separators(&mut self) {
        while let Some(&byte) = self.bytes.get(self.pos) {
            if byte == b'#' {
                while let Some(&b) = self.bytes.get(self.pos) {
                    self.pos += 1;
                    if b == b'\n' {
                        break;
                    }
                }
            } else if byte.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn next_token(&mut self) -> Option<&'a [u8]> {
        self.skip_separators();
        let start = self.pos;
        while self
            .bytes
            .get(self.pos)
            .is_some_and(|b| !b.is_ascii_whitespace() && *b != b'#')
        {
            self.pos += 1;
        }
        (self.pos > start).then(|| &self.bytes[start..self.pos])
    }

    fn next_number(&mut self, what: &str) -> Result<usize> {
        let token = self
            .next_token()
            .ok_or_else(|| Error::Parse(format!("missing {what} in header")))?;
        let text = std::str::from_utf8(token)
            .map_err(|_| Error::Parse(format!("{what} is not valid ASCII")))?;
        text.parse()
            .map_err(|_| Error::Parse(format!("invalid {what} `{text}`")))
    }

    /// Consumes the single whitespace byte that separates the header from
    /// binary payload. No comment skipping here: a payload may well start
    /// with a `#` byte.
    fn expect_single_whitespace(&mut self) -> Result<()> {
        match self.bytes.get(self.pos) {
            Some(b) if b.is_ascii_whitespace() => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(Error::Parse(
                "expected a single whitespace byte before binary payload".into(),
            )),
        }
    }

    fn rest(&self) -> &'a [u8] {
        &self.bytes[self.pos..]
    }

    /// Next `0`/`1` digit for P1 data; whitespace between bits is
    /// optional in that format.
    fn next_bit(&mut self) -> Option<Result<bool>> {
        self.skip_separators();
        let byte = *self.bytes.get(self.pos)?;
        self.pos += 1;
        Some(match byte {
            b'0' => Ok(false),
            b'1' => Ok(true),
            other => Err(Error::Parse(format!(
                "invalid bit character `{}` in P1 data",
                other as char
            ))),
        })
    }
}

fn read_dimensions(scanner: &mut Scanner) -> Result<(usize, usize)> {
    let width = scanner.next_number("width")?;
    let height = scanner.next_number("height")?;
    if width == 0 || height == 0 {
        return Err(Error::Parse(format!(
            "degenerate raster dimensions {width}x{height}"
        )));
    }
    Ok((width, height))
}

/// Decodes a P2 or P5 file into a grayscale raster of any shape.
pub fn decode_gray(bytes: &[u8]) -> Result<GrayRaster> {
    let mut scanner = Scanner::new(bytes);
    let magic = scanner
        .next_token()
        .ok_or_else(|| Error::Parse("empty file".into()))?;
    let binary = match magic {
        b"P5" => true,
        b"P2" => false,
        b"P1" | b"P4" => {
            return Err(Error::Parse(
                "found a PBM bitmap where a PGM grayscale file was expected".into(),
            ))
        }
        other => {
            return Err(Error::Parse(format!(
                "unrecognized magic `{}`",
                String::from_utf8_lossy(other)
            )))
        }
    };
    let (width, height) = read_dimensions(&mut scanner)?;
    let maxval = scanner.next_number("maxval")?;
    if maxval != 255 {
        return Err(Error::UnsupportedMaxval {
            maxval: maxval as u32,
        });
    }
    let expected = width * height;
    let pixels = if binary {
        scanner.expect_single_whitespace()?;
        let payload = scanner.rest();
        if payload.len() < expected {
            return Err(Error::Truncated {
                expected,
                actual: payload.len(),
            });
        }
        payload[..expected].to_vec()
    } else {
        let mut pixels = Vec::with_capacity(expected);
        while pixels.len() < expected {
            let Some(token) = scanner.next_token() else {
                return Err(Error::Truncated {
                    expected,
                    actual: pixels.len(),
                });
            };
            let text = std::str::from_utf8(token)
                .map_err(|_| Error::Parse("sample is not valid ASCII".into()))?;
            let value: u32 = text
                .parse()
                .map_err(|_| Error::Parse(format!("invalid sample `{text}`")))?;
            if value > 255 {
                return Err(Error::Parse(format!("sample {value} exceeds maxval 255")));
            }
            pixels.push(value as u8);
        }
        pixels
    };
    Ok(GrayRaster {
        width,
        height,
        pixels,
    })
}

/// Decodes a P1 or P4 file into a binary raster of any shape.
pub fn decode_bits(bytes: &[u8]) -> Result<BitRaster> {
    let mut scanner = Scanner::new(bytes);
    let magic = scanner
        .next_token()
        .ok_or_else(|| Error::Parse("empty file".into()))?;
    let binary = match magic {
        b"P4" => true,
        b"P1" => false,
        b"P2" | b"P5" => {
            return Err(Error::Parse(
                "found a PGM grayscale file where a PBM bitmap was expected".into(),
            ))
        }
        other => {
            return Err(Error::Parse(format!(
                "unrecognized magic `{}`",
                String::from_utf8_lossy(other)
            )))
        }
    };
    let (width, height) = read_dimensions(&mut scanner)?;
    let expected = width * height;
    let mut bits = Vec::with_capacity(expected);
    if binary {
        scanner.expect_single_whitespace()?;
        let payload = scanner.rest();
        let row_bytes = width.div_ceil(8);
        if payload.len() < row_bytes * height {
            return Err(Error::Truncated {
                expected: row_bytes * height,
                actual: payload.len(),
            });
        }
        for row in payload[..row_bytes * height].chunks_exact(row_bytes) {
            for x in 0..width {
                bits.push(row[x / 8] >> (7 - x % 8) & 1 == 1);
            }
        }
    } else {
        while bits.len() < expected {
            match scanner.next_bit() {
                Some(bit) => bits.push(bit?),
                None => {
                    return Err(Error::Truncated {
                        expected,
                        actual: bits.len(),
                    })
                }
            }
        }
    }
    Ok(BitRaster {
        width,
        height,
        bits,
    })
}

// ---------------------------------------------------------------------
// Encoding

/// Longest line emitted in ASCII formats, per netpbm convention.
const MAX_ASCII_LINE: usize = 70;

fn push_ascii_rows<'a, I>(out: &mut Vec<u8>, rows: I)
where
    I: Iterator<Item = Vec<&'a str>>,
{
    for row in rows {
        let mut line_len = 0;
        for token in row {
            if line_len > 0 {
                if line_len + 1 + token.len() > MAX_ASCII_LINE {
                    out.push(b'\n');
                    line_len = 0;
                } else {
                    out.push(b' ');
                    line_len += 1;
                }
            }
            out.extend_from_slice(token.as_bytes());
            line_len += token.len();
        }
        out.push(b'\n');
    }
}

/// Encodes a grayscale raster as P2 or P5 bytes.
pub fn encode_gray(raster: &GrayRaster, format: PgmFormat) -> Vec<u8> {
    match format {
        PgmFormat::Binary => {
            let mut out = format!("P5\n{} {}\n255\n", raster.width, raster.height).into_bytes();
            out.extend_from_slice(&raster.pixels);
            out
        }
        PgmFormat::Ascii => {
            let mut out = format!("P2\n{} {}\n255\n", raster.width, raster.height).into_bytes();
            let samples: Vec<String> = raster.pixels.iter().map(u8::to_string).collect();
            push_ascii_rows(
                &mut out,
                samples
                    .chunks(raster.width)
                    .map(|row| row.iter().map(String::as_str).collect()),
            );
            out
        }
    }
}

/// Encodes a binary raster as P1 or P4 bytes.
pub fn encode_bits(raster: &BitRaster, format: PbmFormat) -> Vec<u8> {
    match format {
        PbmFormat::Binary => {
            let mut out = format!("P4\n{} {}\n", raster.width, raster.height).into_bytes();
            let row_bytes = raster.width.div_ceil(8);
            for row in raster.bits.chunks_exact(raster.width) {
                let mut packed = vec![0u8; row_bytes];
                for (x, &bit) in row.iter().enumerate() {
                    if bit {
                        packed[x / 8] |= 1 << (7 - x % 8);
                    }
                }
                out.extend_from_slice(&packed);
            }
            out
        }
        PbmFormat::Ascii => {
            let mut out = format!("P1\n{} {}\n", raster.width, raster.height).into_bytes();
            push_ascii_rows(
                &mut out,
                raster
                    .bits
                    .chunks_exact(raster.width)
                    .map(|row| row.iter().map(|&bit| if bit { "1" } else { "0" }).collect()),
            );
            out
        }
    }
}

// ---------------------------------------------------------------------
// File layer

fn read_bytes(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn atomic_write(path: &Path, bytes: &[u8]) -> Result<()> {
    let io_err = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let dir = match path.parent() {
        Some(parent) if !parent.as_os_str().is_empty() => parent,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err)?;
    tmp.write_all(bytes).map_err(io_err)?;
    tmp.persist(path).map_err(|e| io_err(e.error))?;
    Ok(())
}

/// Loads a square grayscale image from a P2 or P5 file.
pub fn read_gray(path: impl AsRef<Path>) -> Result<GrayImage> {
    decode_gray(&read_bytes(path.as_ref())?)?.into_image()
}

/// Writes a grayscale image, atomically replacing `path`.
pub fn write_gray(img: &GrayImage, path: impl AsRef<Path>, format: PgmFormat) -> Result<()> {
    atomic_write(
        path.as_ref(),
        &encode_gray(&GrayRaster::from_image(img), format),
    )
}

/// Loads a square binary image from a P1 or P4 file.
pub fn read_bin(path: impl AsRef<Path>) -> Result<BinaryImage> {
    decode_bits(&read_bytes(path.as_ref())?)?.into_image()
}

/// Writes a binary image, atomically replacing `path`.
pub fn write_bin(img: &BinaryImage, path: impl AsRef<Path>, format: PbmFormat) -> Result<()> {
    atomic_write(
        path.as_ref(),
        &encode_bits(&BitRaster::from_image(img), format),
    )
}
