//! # flstego
//!
//! Bit-plane image steganography with Fibonacci-Lucas torus scrambling.
//!
//! Binary secret images are scrambled by iterating a keyed 2x2 torus
//! transform, then substituted into the low-order bit planes of an 8-bit
//! grayscale cover. Because every transform in the family is periodic,
//! the sender and receiver split one full period between them: the
//! sender iterates `P - K_r` times, the receiver the remaining `K_r`,
//! and the secret reappears bit-exactly. MSE/PSNR reporting quantifies
//! how little the cover changes.
//!
//! ```
//! use flstego::{stego, BinaryImage, GrayImage, KeyBundle, MapId};
//!
//! let cover = GrayImage::from_vec(16, (0..256).map(|v| v as u8).collect())?;
//! let secret = BinaryImage::from_vec(16, (0..256).map(|v| v % 3 == 0).collect())?;
//!
//! let keys = KeyBundle::new(MapId::Fl(6), 16, vec![5])?;
//! let result = stego::hide(&cover, &[secret.clone()], &keys)?;
//! assert_eq!(stego::reveal(&result.stego, &keys)?, vec![secret]);
//! # Ok::<(), flstego::Error>(())
//! ```
//!
//! The longer story, with the math behind the maps, lives in the guide
//! under `book/`.

pub mod bitplane;
pub mod codec;
mod error;
mod image;
pub mod metrics;
pub mod stego;
pub mod transform;

pub use error::{Error, Result};
pub use image::{BinaryImage, GrayImage, Image};
pub use metrics::QualityReport;
pub use stego::{KeyBundle, StegoResult};
pub use transform::{FlMap, MapId, Period};
