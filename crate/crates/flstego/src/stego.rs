//! The hide/reveal pipeline: scramble secrets with a keyed torus
//! transform, embed them into the low bit planes of a cover, and invert
//! both steps on the receiving side.
//!
//! The shared secret per plane is the receiver key K_r, the number of
//! forward iterations the receiver applies. The sender scrambles each
//! secret P - K_r times, where P is the map's period, so the two
//! iteration counts together complete a full period and the secret
//! reappears. Keys are restricted to 1..=P-1: K_r = P would embed the
//! secret unscrambled.
//!
//! Extraction carries no payload header or checksum. Revealing with the
//! wrong key, or from an image that never held a secret, yields
//! well-formed noise rather than an error.

use crate::bitplane;
use crate::error::{Error, Result};
use crate::image::{BinaryImage, GrayImage};
use crate::metrics;
use crate::transform::{FlMap, MapId, Period};

/// The key material a receiver holds: which map, which torus size, and
/// one receiver key per occupied bit plane.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeyBundle {
    map: FlMap,
    period: Period,
    receiver_keys: Vec<u64>,
}

impl KeyBundle {
    /// Builds the map and validates every key against its period.
    pub fn new(id: MapId, modulus: u32, receiver_keys: Vec<u64>) -> Result<Self> {
        Self::from_map(FlMap::build(id, modulus)?, receiver_keys)
    }

    /// As [`KeyBundle::new`], for a map the caller already constructed.
    pub fn from_map(map: FlMap, receiver_keys: Vec<u64>) -> Result<Self> {
        if receiver_keys.is_empty() || receiver_keys.len() > bitplane::PLANE_COUNT {
            return Err(Error::PlaneCount {
                count: receiver_keys.len(),
            });
        }
        let period = map.period()?;
        if period.value() == 1 {
            return Err(Error::DegeneratePeriod);
        }
        for &key in &receiver_keys {
            check_key(key, period)?;
        }
        Ok(KeyBundle {
            map,
            period,
            receiver_keys,
        })
    }

    pub fn map(&self) -> &FlMap {
        &self.map
    }

    pub fn period(&self) -> Period {
        self.period
    }

    /// One key per occupied plane, in embedding order (plane 1 first).
    pub fn receiver_keys(&self) -> &[u64] {
        &self.receiver_keys
    }

    /// The sender-side iteration counts, P - K_r per plane.
    pub fn sender_iterations(&self) -> Vec<u64> {
        self.receiver_keys
            .iter()
            .map(|&key| self.period.value() - key)
            .collect()
    }
}

fn check_key(key: u64, period: Period) -> Result<()> {
    if key == 0 || key >= period.value() {
        return Err(Error::KeyOutOfRange {
            key,
            period: period.value(),
        });
    }
    Ok(())
}

/// Scrambles a secret for embedding by iterating the map P - K_r times.
pub fn encrypt_secret(secret: &BinaryImage, map: &FlMap, receiver_key: u64) -> Result<BinaryImage> {
    let period = map.period()?;
    check_key(receiver_key, period)?;
    map.scramble(secret, period.value() - receiver_key)
}

/// Recovers a secret by iterating the map the remaining K_r times.
///
/// Decryption runs forward, not backward: the sender's and receiver's
/// counts add up to one full period.
pub fn decrypt_secret(
    scrambled: &BinaryImage,
    map: &FlMap,
    receiver_key: u64,
) -> Result<BinaryImage> {
    check_key(receiver_key, map.period()?)?;
    map.scramble(scrambled, receiver_key)
}

/// Replaces the k lowest bit planes of the cover with the given planes,
/// plane 1 (the LSB) first. Pixels change only in their k low bits.
pub fn embed(cover: &GrayImage, planes: &[BinaryImage]) -> Result<GrayImage> {
    check_plane_count(planes.len())?;
    let mut stack = bitplane::slice(cover);
    for (slot, plane) in planes.iter().enumerate() {
        stack.replace_plane(slot as u8 + 1, plane.clone())?;
    }
    Ok(stack.reconstruct())
}

/// Reads back the k lowest bit planes of a stego image, LSB first.
pub fn extract(stego: &GrayImage, planes: usize) -> Result<Vec<BinaryImage>> {
    check_plane_count(planes)?;
    let stack = bitplane::slice(stego);
    Ok((1..=planes as u8)
        .map(|k| stack.plane(k).expect("plane index checked above").clone())
        .collect())
}

fn check_plane_count(count: usize) -> Result<()> {
    if count == 0 || count > bitplane::PLANE_COUNT {
        return Err(Error::PlaneCount { count });
    }
    Ok(())
}

/// Output of [`hide`]: the stego image plus its fidelity against the
/// cover. `psnr_db` is positive infinity exactly when `mse` is zero.
#[derive(Debug, Clone, PartialEq)]
pub struct StegoResult {
    pub stego: GrayImage,
    pub planes_used: usize,
    pub mse: f64,
    pub psnr_db: f64,
}

/// Full sender pipeline: encrypt secret j with key j, embed it into bit
/// plane j, and report the distortion of the result.
pub fn hide(cover: &GrayImage, secrets: &[BinaryImage], keys: &KeyBundle) -> Result<StegoResult> {
    if cover.side() != keys.map().modulus() as usize {
        return Err(Error::SideMismatch {
            expected: keys.map().modulus() as usize,
            actual: cover.side(),
        });
    }
    if secrets.len() != keys.receiver_keys().len() {
        return Err(Error::KeyCountMismatch {
            keys: keys.receiver_keys().len(),
            secrets: secrets.len(),
        });
    }
    let scrambled = secrets
        .iter()
        .zip(keys.receiver_keys())
        .map(|(secret, &key)| encrypt_secret(secret, keys.map(), key))
        .collect::<Result<Vec<_>>>()?;
    let stego = embed(cover, &scrambled)?;
    let mse = metrics::mse(cover, &stego)?;
    Ok(StegoResult {
        stego,
        planes_used: secrets.len(),
        mse,
        psnr_db: metrics::psnr_from_mse(mse),
    })
}

/// Full receiver pipeline: extract one plane per key and decrypt each.
pub fn reveal(stego: &GrayImage, keys: &KeyBundle) -> Result<Vec<BinaryImage>> {
    if stego.side() != keys.map().modulus() as usize {
        return Err(Error::SideMismatch {
            expected: keys.map().modulus() as usize,
            actual: stego.side(),
        });
    }
    let planes = extract(stego, keys.receiver_keys().len())?;
    planes
        .iter()
        .zip(keys.receiver_keys())
        .map(|(plane, &key)| decrypt_secret(plane, keys.map(), key))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn checkerboard(side: usize) -> BinaryImage {
        let bits = (0..side * side).map(|i| (i / side + i % side).is_multiple_of(2));
        BinaryImage::from_vec(side, bits.collect()).unwrap()
    }

    fn patterned_secret(side: usize, salt: usize) -> BinaryImage {
        let bits = (0..side * side).map(|i| (i * 37 + salt * 13 + 7) % 5 < 2);
        BinaryImage::from_vec(side, bits.collect()).unwrap()
    }

    fn patterned_cover(side: usize) -> GrayImage {
        let pixels = (0..side * side).map(|i| ((i * 31 + 11) % 256) as u8);
        GrayImage::from_vec(side, pixels.collect()).unwrap()
    }

    fn map(side: u32) -> FlMap {
        FlMap::build(MapId::Fl(1), side).unwrap()
    }

    #[test]
    fn highest_key_scrambles_exactly_once() {
        let m = map(8);
        let period = m.period().unwrap().value();
        let secret = checkerboard(8);
        assert_eq!(
            encrypt_secret(&secret, &m, period - 1).unwrap(),
            m.scramble(&secret, 1).unwrap()
        );
    }

    #[test]
    fn decrypt_inverts_encrypt() {
        let m = map(16);
        let secret = patterned_secret(16, 4);
        for key in [1, 2, 5] {
            let scrambled = encrypt_secret(&secret, &m, key).unwrap();
            assert_eq!(decrypt_secret(&scrambled, &m, key).unwrap(), secret);
        }
    }

    #[test]
    fn receiver_keys_complement_the_published_iteration_counts() {
        // Sixth map mod 256 has period 256, so scrambling 125, 93 and
        // 222 times corresponds to receiver keys 131, 163 and 34.
        let m = FlMap::build(MapId::Fl(6), 256).unwrap();
        let secret = checkerboard(256);
        for (count, key) in [(125u64, 131u64), (93, 163), (222, 34)] {
            assert_eq!(
                encrypt_secret(&secret, &m, key).unwrap(),
                m.scramble(&secret, count).unwrap()
            );
        }
        let bundle = KeyBundle::new(MapId::Fl(6), 256, vec![131, 163, 34]).unwrap();
        assert_eq!(bundle.sender_iterations(), vec![125, 93, 222]);
    }

    #[test]
    fn every_wrong_key_fails_on_a_nonuniform_secret() {
        let m = map(16);
        let period = m.period().unwrap().value();
        let secret = patterned_secret(16, 9);
        let key = 3;
        let scrambled = encrypt_secret(&secret, &m, key).unwrap();
        for wrong in 1..period {
            if wrong == key {
                continue;
            }
            assert_ne!(
                decrypt_secret(&scrambled, &m, wrong).unwrap(),
                secret,
                "key {wrong} must not recover"
            );
        }
    }

    #[test]
    fn constant_images_are_fixed_by_any_key() {
        let m = map(8);
        let zeros = BinaryImage::filled(8, false).unwrap();
        assert_eq!(decrypt_secret(&zeros, &m, 2).unwrap(), zeros);
    }

    #[test]
    fn key_range_is_enforced() {
        let m = map(8);
        let period = m.period().unwrap().value();
        let secret = checkerboard(8);
        assert!(matches!(
            encrypt_secret(&secret, &m, 0),
            Err(Error::KeyOutOfRange { key: 0, .. })
        ));
        assert!(matches!(
            encrypt_secret(&secret, &m, period),
            Err(Error::KeyOutOfRange { .. })
        ));
        assert!(encrypt_secret(&secret, &m, period - 1).is_ok());
    }

    #[test]
    fn encryption_preserves_popcount() {
        let m = map(16);
        let secret = patterned_secret(16, 2);
        let scrambled = encrypt_secret(&secret, &m, 7).unwrap();
        assert_eq!(scrambled.count_ones(), secret.count_ones());
    }

    #[test]
    fn embedding_an_images_own_plane_changes_nothing() {
        let cover = patterned_cover(8);
        let own_lsb = bitplane::slice(&cover).plane(1).unwrap().clone();
        assert_eq!(embed(&cover, &[own_lsb]).unwrap(), cover);
    }

    #[test]
    fn zero_planes_into_white_cover_gives_248() {
        let cover = GrayImage::filled(4, 255).unwrap();
        let zeros = vec![BinaryImage::filled(4, false).unwrap(); 3];
        assert_eq!(
            embed(&cover, &zeros).unwrap(),
            GrayImage::filled(4, 248).unwrap()
        );
    }

    #[test]
    fn three_plane_embedding_moves_pixels_by_at_most_seven() {
        // Exhaustive: every pixel value against every 3-bit payload.
        for value in 0..=255u8 {
            for payload in 0..8u8 {
                let cover = GrayImage::filled(2, value).unwrap();
                let planes: Vec<BinaryImage> = (0..3)
                    .map(|bit| BinaryImage::filled(2, (payload >> bit) & 1 == 1).unwrap())
                    .collect();
                let stego = embed(&cover, &planes).unwrap();
                let diff = (i16::from(stego.get(0, 0)) - i16::from(value)).abs();
                assert!(diff <= 7, "value {value}, payload {payload}: diff {diff}");
            }
        }
    }

    #[test]
    fn extract_reads_back_what_embed_wrote() {
        let cover = patterned_cover(16);
        let planes: Vec<BinaryImage> = (0..4).map(|j| patterned_secret(16, j)).collect();
        let stego = embed(&cover, &planes).unwrap();
        assert_eq!(extract(&stego, 4).unwrap(), planes);
    }

    #[test]
    fn extract_of_all_zero_image_reads_zero_planes() {
        let planes = extract(&GrayImage::filled(4, 0).unwrap(), 3).unwrap();
        assert_eq!(planes.len(), 3);
        for plane in planes {
            assert_eq!(plane.count_ones(), 0);
        }
    }

    #[test]
    fn extract_of_uniform_five_reads_101() {
        // 5 = 101 in binary.
        let planes = extract(&GrayImage::filled(2, 5).unwrap(), 3).unwrap();
        assert_eq!(planes[0].count_ones(), 4);
        assert_eq!(planes[1].count_ones(), 0);
        assert_eq!(planes[2].count_ones(), 4);
    }

    #[test]
    fn plane_counts_are_bounded() {
        let cover = patterned_cover(8);
        assert!(matches!(
            embed(&cover, &[]),
            Err(Error::PlaneCount { count: 0 })
        ));
        assert!(matches!(
            extract(&cover, 9),
            Err(Error::PlaneCount { count: 9 })
        ));
    }

    #[test]
    fn bundle_validates_keys_and_counts() {
        assert!(KeyBundle::new(MapId::Fl(1), 8, vec![1, 2, 3]).is_ok());
        assert!(matches!(
            KeyBundle::new(MapId::Fl(1), 8, vec![]),
            Err(Error::PlaneCount { count: 0 })
        ));
        assert!(matches!(
            KeyBundle::new(MapId::Fl(1), 8, vec![1; 9]),
            Err(Error::PlaneCount { count: 9 })
        ));
        assert!(matches!(
            KeyBundle::new(MapId::Fl(1), 8, vec![0]),
            Err(Error::KeyOutOfRange { key: 0, .. })
        ));
        let period = map(8).period().unwrap().value();
        assert!(matches!(
            KeyBundle::new(MapId::Fl(1), 8, vec![period]),
            Err(Error::KeyOutOfRange { .. })
        ));
    }

    #[test]
    fn period_one_maps_are_rejected() {
        let identity = FlMap::identity_for_tests(8);
        assert!(matches!(
            KeyBundle::from_map(identity, vec![1]),
            Err(Error::DegeneratePeriod)
        ));
    }

    #[test]
    fn hide_reveal_round_trip() {
        let cover = patterned_cover(16);
        let secrets: Vec<BinaryImage> = (0..3).map(|j| patterned_secret(16, j)).collect();
        let keys = KeyBundle::new(MapId::Fl(1), 16, vec![3, 7, 11]).unwrap();
        let result = hide(&cover, &secrets, &keys).unwrap();
        assert_eq!(result.planes_used, 3);
        assert_eq!(reveal(&result.stego, &keys).unwrap(), secrets);
    }

    #[test]
    fn hide_changes_only_the_low_bits() {
        let cover = patterned_cover(16);
        let secrets: Vec<BinaryImage> = (0..2).map(|j| patterned_secret(16, j)).collect();
        let keys = KeyBundle::new(MapId::Fl(1), 16, vec![5, 6]).unwrap();
        let stego = hide(&cover, &secrets, &keys).unwrap().stego;
        for (&a, &b) in cover.data().iter().zip(stego.data()) {
            assert_eq!(a & !0b11, b & !0b11);
        }
    }

    #[test]
    fn hide_validates_shapes_and_counts() {
        let keys = KeyBundle::new(MapId::Fl(1), 16, vec![3, 7]).unwrap();
        let wrong_cover = patterned_cover(8);
        let secrets: Vec<BinaryImage> = (0..2).map(|j| patterned_secret(16, j)).collect();
        assert!(matches!(
            hide(&wrong_cover, &secrets, &keys),
            Err(Error::SideMismatch { .. })
        ));
        let cover = patterned_cover(16);
        assert!(matches!(
            hide(&cover, &secrets[..1], &keys),
            Err(Error::KeyCountMismatch {
                keys: 2,
                secrets: 1
            })
        ));
        let small_secret = patterned_secret(8, 0);
        assert!(matches!(
            hide(&cover, &[secrets[0].clone(), small_secret], &keys),
            Err(Error::SideMismatch { .. })
        ));
    }

    #[test]
    fn permuted_keys_do_not_recover_distinct_secrets() {
        let cover = patterned_cover(16);
        let secrets: Vec<BinaryImage> = (0..2).map(|j| patterned_secret(16, j)).collect();
        let keys = KeyBundle::new(MapId::Fl(1), 16, vec![3, 7]).unwrap();
        let stego = hide(&cover, &secrets, &keys).unwrap().stego;
        let swapped = KeyBundle::new(MapId::Fl(1), 16, vec![7, 3]).unwrap();
        let revealed = reveal(&stego, &swapped).unwrap();
        assert_ne!(revealed[0], secrets[0]);
        assert_ne!(revealed[1], secrets[1]);
    }

    #[test]
    fn reveal_of_untouched_cover_is_well_defined() {
        let cover = patterned_cover(16);
        let keys = KeyBundle::new(MapId::Fl(1), 16, vec![4]).unwrap();
        let revealed = reveal(&cover, &keys).unwrap();
        let own_lsb = bitplane::slice(&cover).plane(1).unwrap().clone();
        assert_eq!(
            revealed[0],
            decrypt_secret(&own_lsb, keys.map(), 4).unwrap()
        );
    }

    #[test]
    fn hide_is_deterministic() {
        let cover = patterned_cover(16);
        let secrets = vec![patterned_secret(16, 1)];
        let keys = KeyBundle::new(MapId::Fl(6), 16, vec![2]).unwrap();
        let first = hide(&cover, &secrets, &keys).unwrap();
        let second = hide(&cover, &secrets, &keys).unwrap();
        assert_eq!(first, second);
    }
}
