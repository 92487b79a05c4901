//! Bit-exact reading and writing of the submission wire format.
//!
//! Class predictions and ground-truth sidecars are 8-bit grayscale PNGs;
//! confidence maps are 16-bit grayscale with big-endian samples per the PNG
//! standard. Readers accept interlaced input but never convert: palette or
//! multi-channel files are rejected, and sample values are never rescaled
//! between bit depths. Writers always emit canonical non-interlaced files.

use std::fs;
use std::io::{self, BufWriter, Cursor};
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::core::{ClassMap, ConfidenceMap, GroundTruthFrame};

const PNG_SIGNATURE: [u8; 8] = [0x89, b'P', b'N', b'G', 0x0D, 0x0A, 0x1A, 0x0A];

#[derive(Debug, Error)]
pub enum PngError {
    #[error("{path}: not a PNG file")]
    NotPng { path: PathBuf },
    #[error("{path}: bit depth {found}, expected {expected}")]
    WrongBitDepth {
        path: PathBuf,
        expected: u8,
        found: u8,
    },
    #[error("{path}: color type {found:?}, expected single-channel grayscale")]
    WrongChannelCount { path: PathBuf, found: String },
    #[error("{path}: corrupt PNG: {detail}")]
    CorruptFile { path: PathBuf, detail: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("cannot encode {path}: {detail}")]
    EncodingFailure { path: PathBuf, detail: String },
}

impl PngError {
    /// Stable machine-readable error name, used in validation reports.
    pub fn rule(&self) -> &'static str {
        match self {
            PngError::NotPng { .. } => "NotPng",
            PngError::WrongBitDepth { .. } => "WrongBitDepth",
            PngError::WrongChannelCount { .. } => "WrongChannelCount",
            PngError::CorruptFile { .. } => "CorruptFile",
            PngError::Io { .. } => "IoFailure",
            PngError::EncodingFailure { .. } => "EncodingFailure",
        }
    }
}

/// Decoded file geometry, before any sample data is touched.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ImageHeader {
    pub width: u32,
    pub height: u32,
    pub bit_depth: u8,
    pub channels: u8,
}

struct Decoded {
    header: ImageHeader,
    data: Vec<u8>,
}

fn decode_grayscale(path: &Path, expected_depth: u8) -> Result<Decoded, PngError> {
    let bytes = fs::read(path).map_err(|source| PngError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    if bytes.len() < PNG_SIGNATURE.len() || bytes[..8] != PNG_SIGNATURE {
        return Err(PngError::NotPng {
            path: path.to_path_buf(),
        });
    }

    let corrupt = |detail: String| PngError::CorruptFile {
        path: path.to_path_buf(),
        detail,
    };
    let decoder = png::Decoder::new(Cursor::new(&bytes));
    let mut reader = decoder.read_info().map_err(|e| corrupt(e.to_string()))?;

    let info = reader.info();
    let header = ImageHeader {
        width: info.width,
        height: info.height,
        bit_depth: info.bit_depth as u8,
        channels: info.color_type.samples() as u8,
    };
    if info.color_type != png::ColorType::Grayscale {
        return Err(PngError::WrongChannelCount {
            path: path.to_path_buf(),
            found: format!("{:?}", info.color_type),
        });
    }
    if header.bit_depth != expected_depth {
        return Err(PngError::WrongBitDepth {
            path: path.to_path_buf(),
            expected: expected_depth,
            found: header.bit_depth,
        });
    }

    let mut data = vec![0u8; reader.output_buffer_size()];
    let frame = reader
        .next_frame(&mut data)
        .map_err(|e| corrupt(e.to_string()))?;
    data.truncate(frame.buffer_size());
    Ok(Decoded { header, data })
}

/// Reads only the header of a PNG file.
pub fn read_header(path: &Path) -> Result<ImageHeader, PngError> {
    let bytes = fs::read(path).map_err(|source| PngError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    if bytes.len() < PNG_SIGNATURE.len() || bytes[..8] != PNG_SIGNATURE {
        return Err(PngError::NotPng {
            path: path.to_path_buf(),
        });
    }
    let decoder = png::Decoder::new(Cursor::new(&bytes));
    let reader = decoder.read_info().map_err(|e| PngError::CorruptFile {
        path: path.to_path_buf(),
        detail: e.to_string(),
    })?;
    let info = reader.info();
    Ok(ImageHeader {
        width: info.width,
        height: info.height,
        bit_depth: info.bit_depth as u8,
        channels: info.color_type.samples() as u8,
    })
}

/// Decodes an 8-bit grayscale class-prediction file. Label range is not
/// checked here; `validate_pair` owns that rule.
pub fn read_class_png(path: &Path) -> Result<ClassMap, PngError> {
    let decoded = decode_grayscale(path, 8)?;
    ClassMap::new(decoded.header.width, decoded.header.height, decoded.data).map_err(|e| {
        PngError::CorruptFile {
            path: path.to_path_buf(),
            detail: e.to_string(),
        }
    })
}

/// Decodes a 16-bit grayscale confidence file, assembling each sample from
/// its big-endian byte pair.
pub fn read_conf_png(path: &Path) -> Result<ConfidenceMap, PngError> {
    let decoded = decode_grayscale(path, 16)?;
    let values: Vec<u16> = decoded
        .data
        .chunks_exact(2)
        .map(|pair| u16::from_be_bytes([pair[0], pair[1]]))
        .collect();
    ConfidenceMap::new(decoded.header.width, decoded.header.height, values).map_err(|e| {
        PngError::CorruptFile {
            path: path.to_path_buf(),
            detail: e.to_string(),
        }
    })
}

/// Decodes an 8-bit grayscale ground-truth sidecar.
pub fn read_gt_png(path: &Path) -> Result<GroundTruthFrame, PngError> {
    let decoded = decode_grayscale(path, 8)?;
    GroundTruthFrame::new(decoded.header.width, decoded.header.height, decoded.data).map_err(
        |e| PngError::CorruptFile {
            path: path.to_path_buf(),
            detail: e.to_string(),
        },
    )
}

fn encode_grayscale(
    path: &Path,
    width: u32,
    height: u32,
    depth: png::BitDepth,
    data: &[u8],
) -> Result<(), PngError> {
    let file = fs::File::create(path).map_err(|source| PngError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut encoder = png::Encoder::new(BufWriter::new(file), width, height);
    encoder.set_color(png::ColorType::Grayscale);
    encoder.set_depth(depth);
    let mut writer = encoder
        .write_header()
        .map_err(|e| PngError::EncodingFailure {
            path: path.to_path_buf(),
            detail: e.to_string(),
        })?;
    writer
        .write_image_data(data)
        .map_err(|e| PngError::EncodingFailure {
            path: path.to_path_buf(),
            detail: e.to_string(),
        })
}

/// Writes an 8-bit grayscale class-prediction file.
pub fn write_class_png(map: &ClassMap, path: &Path) -> Result<(), PngError> {
    encode_grayscale(
        path,
        map.width(),
        map.height(),
        png::BitDepth::Eight,
        map.labels(),
    )
}

/// Writes a 16-bit grayscale confidence file with big-endian samples.
pub fn write_conf_png(map: &ConfidenceMap, path: &Path) -> Result<(), PngError> {
    let mut data = Vec::with_capacity(map.values().len() * 2);
    for value in map.values() {
        data.extend_from_slice(&value.to_be_bytes());
    }
    encode_grayscale(path, map.width(), map.height(), png::BitDepth::Sixteen, &data)
}

/// Writes an 8-bit grayscale ground-truth sidecar.
pub fn write_gt_png(frame: &GroundTruthFrame, path: &Path) -> Result<(), PngError> {
    encode_grayscale(
        path,
        frame.width(),
        frame.height(),
        png::BitDepth::Eight,
        frame.labels(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    fn tmp() -> tempfile::TempDir {
        tempfile::tempdir().unwrap()
    }

    #[test]
    fn class_zeros_decode_to_class_zero() {
        let dir = tmp();
        let path = dir.path().join("zeros.png");
        let map = ClassMap::new(4, 4, vec![0; 16]).unwrap();
        write_class_png(&map, &path).unwrap();
        let back = read_class_png(&path).unwrap();
        assert_eq!(back, map);
        assert!(back.labels().iter().all(|&l| l == 0));
    }

    #[test]
    fn emitted_header_fields_are_canonical() {
        let dir = tmp();
        let path = dir.path().join("conf.png");
        let map = ConfidenceMap::new(3, 2, vec![65535; 6]).unwrap();
        write_conf_png(&map, &path).unwrap();

        // Inspect raw bytes: IHDR starts at offset 8; bit depth and color
        // type are at offsets 24 and 25, interlace method at 28.
        let bytes = fs::read(&path).unwrap();
        assert_eq!(&bytes[..8], &PNG_SIGNATURE);
        assert_eq!(bytes[24], 16, "bit depth");
        assert_eq!(bytes[25], 0, "grayscale color type");
        assert_eq!(bytes[28], 0, "non-interlaced");

        let header = read_header(&path).unwrap();
        assert_eq!(
            header,
            ImageHeader {
                width: 3,
                height: 2,
                bit_depth: 16,
                channels: 1
            }
        );
    }

    #[test]
    fn sixteen_bit_file_rejected_as_class_map() {
        let dir = tmp();
        let path = dir.path().join("conf.png");
        let map = ConfidenceMap::new(2, 2, vec![1, 2, 3, 4]).unwrap();
        write_conf_png(&map, &path).unwrap();
        match read_class_png(&path) {
            Err(PngError::WrongBitDepth {
                expected: 8,
                found: 16,
                ..
            }) => {}
            other => panic!("expected WrongBitDepth(16), got {other:?}"),
        }
    }

    #[test]
    fn eight_bit_file_rejected_as_confidence_map() {
        let dir = tmp();
        let path = dir.path().join("class.png");
        let map = ClassMap::new(2, 2, vec![0, 1, 2, 3]).unwrap();
        write_class_png(&map, &path).unwrap();
        match read_conf_png(&path) {
            Err(PngError::WrongBitDepth {
                expected: 16,
                found: 8,
                ..
            }) => {}
            other => panic!("expected WrongBitDepth(8), got {other:?}"),
        }
    }

    #[test]
    fn truncated_file_is_corrupt() {
        let dir = tmp();
        let path = dir.path().join("trunc.png");
        let map = ClassMap::new(8, 8, (0..64).map(|i| (i % 19) as u8).collect()).unwrap();
        write_class_png(&map, &path).unwrap();
        let bytes = fs::read(&path).unwrap();
        fs::write(&path, &bytes[..bytes.len() / 2]).unwrap();
        assert!(matches!(
            read_class_png(&path),
            Err(PngError::CorruptFile { .. })
        ));
    }

    #[test]
    fn non_png_is_not_png() {
        let dir = tmp();
        let path = dir.path().join("text.png");
        fs::write(&path, b"definitely not a png").unwrap();
        assert!(matches!(read_class_png(&path), Err(PngError::NotPng { .. })));
        let missing = dir.path().join("missing.png");
        assert!(matches!(read_class_png(&missing), Err(PngError::Io { .. })));
    }

    #[test]
    fn rgb_file_rejected_not_converted() {
        let dir = tmp();
        let path = dir.path().join("rgb.png");
        let file = fs::File::create(&path).unwrap();
        let mut encoder = png::Encoder::new(BufWriter::new(file), 2, 2);
        encoder.set_color(png::ColorType::Rgb);
        encoder.set_depth(png::BitDepth::Eight);
        let mut writer = encoder.write_header().unwrap();
        writer.write_image_data(&[0u8; 12]).unwrap();
        drop(writer);
        assert!(matches!(
            read_class_png(&path),
            Err(PngError::WrongChannelCount { .. })
        ));
    }

    // The encoder never produces interlaced output, so hand-assemble an
    // Adam7 grayscale file to stand in for a third-party encoder.
    #[test]
    fn interlaced_input_is_accepted() {
        fn crc32(data: &[u8]) -> u32 {
            let mut crc = 0xFFFF_FFFFu32;
            for &b in data {
                crc ^= b as u32;
                for _ in 0..8 {
                    crc = if crc & 1 != 0 {
                        (crc >> 1) ^ 0xEDB8_8320
                    } else {
                        crc >> 1
                    };
                }
            }
            !crc
        }
        fn adler32(data: &[u8]) -> u32 {
            let (mut a, mut b) = (1u32, 0u32);
            for &byte in data {
                a = (a + byte as u32) % 65521;
                b = (b + a) % 65521;
            }
            (b << 16) | a
        }
        fn chunk(out: &mut Vec<u8>, name: &[u8; 4], data: &[u8]) {
            out.extend_from_slice(&(data.len() as u32).to_be_bytes());
            let mut body = name.to_vec();
            body.extend_from_slice(data);
            out.extend_from_slice(&body);
            out.extend_from_slice(&crc32(&body).to_be_bytes());
        }

        // 8x8 image, pixel value = row * 8 + col, emitted in the seven
        // Adam7 passes with filter byte 0 per scanline.
        const PASSES: [(usize, usize, usize, usize); 7] = [
            (0, 0, 8, 8),
            (4, 0, 8, 8),
            (0, 4, 4, 8),
            (2, 0, 4, 4),
            (0, 2, 2, 4),
            (1, 0, 2, 2),
            (0, 1, 1, 2),
        ];
        let mut raw = Vec::new();
        for (x0, y0, dx, dy) in PASSES {
            let mut y = y0;
            while y < 8 {
                raw.push(0u8);
                let mut x = x0;
                while x < 8 {
                    raw.push((y * 8 + x) as u8);
                    x += dx;
                }
                y += dy;
            }
        }
        // zlib stream with a single stored deflate block.
        let mut idat = vec![0x78, 0x01, 0x01];
        idat.extend_from_slice(&(raw.len() as u16).to_le_bytes());
        idat.extend_from_slice(&(!(raw.len() as u16)).to_le_bytes());
        idat.extend_from_slice(&raw);
        idat.extend_from_slice(&adler32(&raw).to_be_bytes());

        let mut bytes = PNG_SIGNATURE.to_vec();
        let mut ihdr = Vec::new();
        ihdr.extend_from_slice(&8u32.to_be_bytes());
        ihdr.extend_from_slice(&8u32.to_be_bytes());
        ihdr.extend_from_slice(&[8, 0, 0, 0, 1]); // depth 8, gray, Adam7
        chunk(&mut bytes, b"IHDR", &ihdr);
        chunk(&mut bytes, b"IDAT", &idat);
        chunk(&mut bytes, b"IEND", &[]);

        let dir = tmp();
        let path = dir.path().join("adam7.png");
        fs::write(&path, &bytes).unwrap();
        let map = read_class_png(&path).unwrap();
        let expected: Vec<u8> = (0..64u8).collect();
        assert_eq!(map.labels(), expected.as_slice());
    }

    #[test]
    fn full_frame_round_trip_is_bit_exact() {
        let dir = tmp();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x1357);
        let (w, h) = (2048u32, 1024u32);
        let n = (w * h) as usize;

        let gt = GroundTruthFrame::new(w, h, (0..n).map(|_| rng.gen()).collect()).unwrap();
        let gt_path = dir.path().join("gt.png");
        write_gt_png(&gt, &gt_path).unwrap();
        assert_eq!(read_gt_png(&gt_path).unwrap(), gt);

        let conf = ConfidenceMap::new(w, h, (0..n).map(|_| rng.gen()).collect()).unwrap();
        let conf_path = dir.path().join("conf.png");
        write_conf_png(&conf, &conf_path).unwrap();
        assert_eq!(read_conf_png(&conf_path).unwrap(), conf);
    }

    #[test]
    fn single_pixel_gt_round_trip() {
        let dir = tmp();
        let path = dir.path().join("one.png");
        let gt = GroundTruthFrame::new(1, 1, vec![254]).unwrap();
        write_gt_png(&gt, &path).unwrap();
        assert_eq!(read_gt_png(&path).unwrap().labels(), &[254]);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn round_trip_identity(
            w in 1u32..40,
            h in 1u32..40,
            seed in any::<u64>(),
        ) {
            let dir = tmp();
            let n = (w * h) as usize;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);

            let class = ClassMap::new(w, h, (0..n).map(|_| rng.gen()).collect()).unwrap();
            let p = dir.path().join("c.png");
            write_class_png(&class, &p).unwrap();
            prop_assert_eq!(read_class_png(&p).unwrap(), class);

            let conf = ConfidenceMap::new(w, h, (0..n).map(|_| rng.gen()).collect()).unwrap();
            let p = dir.path().join("q.png");
            write_conf_png(&conf, &p).unwrap();
            prop_assert_eq!(read_conf_png(&p).unwrap(), conf);
        }
    }
}
