//! Minimal NIfTI-1 reader/writer (348-byte header, single-file `.nii`,
//! optional gzip container).
//!
//! Supported datatypes: uint8, int16, int32, float32, float64. Values are
//! decoded to f64 with `value = stored * scl_slope + scl_inter` (slope 0 is
//! treated as 1 per the format convention). Both endiannesses are read; files
//! are always written little-endian with an sform affine.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use flate2::read::GzDecoder;
use flate2::write::GzEncoder;
use flate2::Compression;

use crate::error::{Error, Result};
use crate::volume::{diagonal_affine, Compartment, SegmentationMask, Volume};

const HEADER_SIZE: usize = 348;
const MAGIC_NP1: &[u8; 4] = b"n+1\0";

/// NIfTI-1 datatype codes this crate reads and writes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Datatype {
    Uint8,
    Int16,
    Int32,
    Float32,
    Float64,
}

impl Datatype {
    fn code(self) -> i16 {
        match self {
            Datatype::Uint8 => 2,
            Datatype::Int16 => 4,
            Datatype::Int32 => 8,
            Datatype::Float32 => 16,
            Datatype::Float64 => 64,
        }
    }

    fn from_code(code: i16) -> Result<Self> {
        match code {
            2 => Ok(Datatype::Uint8),
            4 => Ok(Datatype::Int16),
            8 => Ok(Datatype::Int32),
            16 => Ok(Datatype::Float32),
            64 => Ok(Datatype::Float64),
            other => Err(Error::NiftiDatatype(other)),
        }
    }

    fn bytes(self) -> usize {
        match self {
            Datatype::Uint8 => 1,
            Datatype::Int16 => 2,
            Datatype::Int32 | Datatype::Float32 => 4,
            Datatype::Float64 => 8,
        }
    }
}

struct RawHeader {
    dims: [usize; 3],
    pixdim: [f32; 8],
    datatype: Datatype,
    vox_offset: usize,
    scl_slope: f32,
    scl_inter: f32,
    qform_code: i16,
    sform_code: i16,
    quatern: [f32; 3],
    qoffset: [f32; 3],
    srow: [[f32; 4]; 3],
    swapped: bool,
}

fn read_all(path: &Path) -> Result<Vec<u8>> {
    let file = File::open(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    let mut reader = BufReader::new(file);
    let mut head = [0u8; 2];
    let n = reader
        .read(&mut head)
        .map_err(|e| Error::io(path.display().to_string(), e))?;
    let mut bytes = Vec::new();
    if n == 2 && head == [0x1f, 0x8b] {
        let file = File::open(path).map_err(|e| Error::io(path.display().to_string(), e))?;
        GzDecoder::new(BufReader::new(file))
            .read_to_end(&mut bytes)
            .map_err(|e| Error::io(path.display().to_string(), e))?;
    } else {
        bytes.extend_from_slice(&head[..n]);
        reader
            .read_to_end(&mut bytes)
            .map_err(|e| Error::io(path.display().to_string(), e))?;
    }
    Ok(bytes)
}

fn i16_at(b: &[u8], off: usize, swap: bool) -> i16 {
    let raw = [b[off], b[off + 1]];
    if swap {
        i16::from_be_bytes(raw)
    } else {
        i16::from_le_bytes(raw)
    }
}

fn f32_at(b: &[u8], off: usize, swap: bool) -> f32 {
    let raw = [b[off], b[off + 1], b[off + 2], b[off + 3]];
    if swap {
        f32::from_be_bytes(raw)
    } else {
        f32::from_le_bytes(raw)
    }
}

fn parse_header(bytes: &[u8], path: &str) -> Result<RawHeader> {
    if bytes.len() < HEADER_SIZE {
        return Err(Error::NiftiMagic(format!(
            "{path}: file shorter than the 348-byte header"
        )));
    }
    let sizeof_le = i32::from_le_bytes([bytes[0], bytes[1], bytes[2], bytes[3]]);
    let sizeof_be = i32::from_be_bytes([bytes[0], bytes[1], bytes[2], bytes[3]]);
    let swapped = match (sizeof_le, sizeof_be) {
        (348, _) => false,
        (_, 348) => true,
        _ => {
            return Err(Error::NiftiMagic(format!(
                "{path}: sizeof_hdr is {sizeof_le}, expected 348"
            )))
        }
    };
    if &bytes[344..348] != MAGIC_NP1 {
        return Err(Error::NiftiMagic(format!(
            "{path}: magic {:?} is not \"n+1\"",
            &bytes[344..348]
        )));
    }
    let ndim = i16_at(bytes, 40, swapped);
    if ndim != 3 {
        return Err(Error::NiftiDimCount(ndim));
    }
    let mut dims = [0usize; 3];
    for (a, d) in dims.iter_mut().enumerate() {
        let v = i16_at(bytes, 42 + 2 * a, swapped);
        if v <= 0 {
            return Err(Error::Geometry(format!("{path}: dim[{}] = {v}", a + 1)));
        }
        *d = v as usize;
    }
    let mut pixdim = [0f32; 8];
    for (a, p) in pixdim.iter_mut().enumerate() {
        *p = f32_at(bytes, 76 + 4 * a, swapped);
    }
    let datatype = Datatype::from_code(i16_at(bytes, 70, swapped))?;
    let vox_offset = f32_at(bytes, 108, swapped) as usize;
    let scl_slope = f32_at(bytes, 112, swapped);
    let scl_inter = f32_at(bytes, 116, swapped);
    let qform_code = i16_at(bytes, 252, swapped);
    let sform_code = i16_at(bytes, 254, swapped);
    let quatern = [
        f32_at(bytes, 256, swapped),
        f32_at(bytes, 260, swapped),
        f32_at(bytes, 264, swapped),
    ];
    let qoffset = [
        f32_at(bytes, 268, swapped),
        f32_at(bytes, 272, swapped),
        f32_at(bytes, 276, swapped),
    ];
    let mut srow = [[0f32; 4]; 3];
    for (r, row) in srow.iter_mut().enumerate() {
        for (c, v) in row.iter_mut().enumerate() {
            *v = f32_at(bytes, 280 + 16 * r + 4 * c, swapped);
        }
    }
    Ok(RawHeader {
        dims,
        pixdim,
        datatype,
        vox_offset,
        scl_slope,
        scl_inter,
        qform_code,
        sform_code,
        quatern,
        qoffset,
        srow,
        swapped,
    })
}

fn affine_from_header(h: &RawHeader) -> [[f64; 4]; 4] {
    if h.sform_code > 0 {
        let mut m = [[0.0; 4]; 4];
        for r in 0..3 {
            for c in 0..4 {
                m[r][c] = h.srow[r][c] as f64;
            }
        }
        m[3] = [0.0, 0.0, 0.0, 1.0];
        return m;
    }
    if h.qform_code > 0 {
        let b = h.quatern[0] as f64;
        let c = h.quatern[1] as f64;
        let d = h.quatern[2] as f64;
        let a = (1.0 - b * b - c * c - d * d).max(0.0).sqrt();
        let qfac = if (h.pixdim[0] as f64) < 0.0 { -1.0 } else { 1.0 };
        let sx = h.pixdim[1] as f64;
        let sy = h.pixdim[2] as f64;
        let sz = h.pixdim[3] as f64 * qfac;
        let r = [
            [
                a * a + b * b - c * c - d * d,
                2.0 * (b * c - a * d),
                2.0 * (b * d + a * c),
            ],
            [
                2.0 * (b * c + a * d),
                a * a + c * c - b * b - d * d,
                2.0 * (c * d - a * b),
            ],
            [
                2.0 * (b * d - a * c),
                2.0 * (c * d + a * b),
                a * a + d * d - b * b - c * c,
            ],
        ];
        let mut m = [[0.0; 4]; 4];
        for row in 0..3 {
            m[row][0] = r[row][0] * sx;
            m[row][1] = r[row][1] * sy;
            m[row][2] = r[row][2] * sz;
            m[row][3] = h.qoffset[row] as f64;
        }
        m[3] = [0.0, 0.0, 0.0, 1.0];
        return m;
    }
    diagonal_affine([
        h.pixdim[1].abs() as f64,
        h.pixdim[2].abs() as f64,
        h.pixdim[3].abs() as f64,
    ])
}

fn decode_payload(h: &RawHeader, bytes: &[u8], path: &str) -> Result<Vec<f64>> {
    let n = h.dims[0] * h.dims[1] * h.dims[2];
    let width = h.datatype.bytes();
    let offset = h.vox_offset.max(HEADER_SIZE);
    let expected = n * width;
    let payload = bytes
        .get(offset..offset + expected)
        .ok_or(Error::NiftiTruncated {
            expected,
            actual: bytes.len().saturating_sub(offset),
        })?;
    let slope = if h.scl_slope == 0.0 { 1.0 } else { h.scl_slope as f64 };
    let inter = h.scl_inter as f64;
    let swap = h.swapped;
    let mut out = Vec::with_capacity(n);
    match h.datatype {
        Datatype::Uint8 => out.extend(payload.iter().map(|&v| v as f64 * slope + inter)),
        Datatype::Int16 => {
            for chunk in payload.chunks_exact(2) {
                let raw = [chunk[0], chunk[1]];
                let v = if swap {
                    i16::from_be_bytes(raw)
                } else {
                    i16::from_le_bytes(raw)
                };
                out.push(v as f64 * slope + inter);
            }
        }
        Datatype::Int32 => {
            for chunk in payload.chunks_exact(4) {
                let raw = [chunk[0], chunk[1], chunk[2], chunk[3]];
                let v = if swap {
                    i32::from_be_bytes(raw)
                } else {
                    i32::from_le_bytes(raw)
                };
                out.push(v as f64 * slope + inter);
            }
        }
        Datatype::Float32 => {
            for chunk in payload.chunks_exact(4) {
                let raw = [chunk[0], chunk[1], chunk[2], chunk[3]];
                let v = if swap {
                    f32::from_be_bytes(raw)
                } else {
                    f32::from_le_bytes(raw)
                };
                out.push(v as f64 * slope + inter);
            }
        }
        Datatype::Float64 => {
            for chunk in payload.chunks_exact(8) {
                let mut raw = [0u8; 8];
                raw.copy_from_slice(chunk);
                let v = if swap {
                    f64::from_be_bytes(raw)
                } else {
                    f64::from_le_bytes(raw)
                };
                out.push(v * slope + inter);
            }
        }
    }
    let _ = path;
    Ok(out)
}

/// Read a 3-D NIfTI-1 volume, decoding values to f64 with slope/intercept
/// scaling applied.
pub fn read_volume(path: impl AsRef<Path>) -> Result<Volume> {
    let path = path.as_ref();
    let bytes = read_all(path)?;
    let loc = path.display().to_string();
    let h = parse_header(&bytes, &loc)?;
    let data = decode_payload(&h, &bytes, &loc)?;
    let spacing = [
        h.pixdim[1].abs() as f64,
        h.pixdim[2].abs() as f64,
        h.pixdim[3].abs() as f64,
    ];
    let affine = affine_from_header(&h);
    Volume::new(h.dims, spacing, affine, data)
}

/// Read an integer-labeled NIfTI-1 file as a segmentation mask and attach
/// compartment semantics. Every nonzero label in the file must be present in
/// `semantics`.
pub fn read_mask(
    path: impl AsRef<Path>,
    semantics: &BTreeMap<u16, Compartment>,
) -> Result<SegmentationMask> {
    let v = read_volume(path)?;
    let mut labels = Vec::with_capacity(v.len());
    for &x in v.data() {
        if !x.is_finite() || x < 0.0 || x.fract() != 0.0 || x > u16::MAX as f64 {
            return Err(Error::NonIntegerLabel(x));
        }
        labels.push(x as u16);
    }
    SegmentationMask::new(v.dims(), v.spacing(), *v.affine(), labels, semantics.clone())
}

/// Write a volume as a single-file NIfTI-1 (`.nii`, gzip when the path ends
/// in `.gz`). Data is stored unscaled (slope 1, intercept 0).
pub fn write_volume(v: &Volume, dtype: Datatype, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut header = vec![0u8; HEADER_SIZE + 4]; // +4: empty extension flag
    header[0..4].copy_from_slice(&348i32.to_le_bytes());
    // dim
    let dims = v.dims();
    header[40..42].copy_from_slice(&3i16.to_le_bytes());
    for a in 0..3 {
        header[42 + 2 * a..44 + 2 * a].copy_from_slice(&(dims[a] as i16).to_le_bytes());
    }
    for a in 3..7 {
        header[42 + 2 * a..44 + 2 * a].copy_from_slice(&1i16.to_le_bytes());
    }
    header[70..72].copy_from_slice(&dtype.code().to_le_bytes());
    header[72..74].copy_from_slice(&((dtype.bytes() * 8) as i16).to_le_bytes());
    // pixdim
    let spacing = v.spacing();
    header[76..80].copy_from_slice(&1f32.to_le_bytes());
    for a in 0..3 {
        header[80 + 4 * a..84 + 4 * a].copy_from_slice(&(spacing[a] as f32).to_le_bytes());
    }
    header[108..112].copy_from_slice(&352f32.to_le_bytes()); // vox_offset
    header[112..116].copy_from_slice(&1f32.to_le_bytes()); // scl_slope
    header[116..120].copy_from_slice(&0f32.to_le_bytes()); // scl_inter
    header[254..256].copy_from_slice(&1i16.to_le_bytes()); // sform_code
    let aff = v.affine();
    for r in 0..3 {
        for c in 0..4 {
            header[280 + 16 * r + 4 * c..284 + 16 * r + 4 * c]
                .copy_from_slice(&(aff[r][c] as f32).to_le_bytes());
        }
    }
    header[344..348].copy_from_slice(MAGIC_NP1);

    let mut payload = Vec::with_capacity(v.len() * dtype.bytes());
    for &x in v.data() {
        match dtype {
            Datatype::Uint8 => payload.push(x as u8),
            Datatype::Int16 => payload.extend_from_slice(&(x as i16).to_le_bytes()),
            Datatype::Int32 => payload.extend_from_slice(&(x as i32).to_le_bytes()),
            Datatype::Float32 => payload.extend_from_slice(&(x as f32).to_le_bytes()),
            Datatype::Float64 => payload.extend_from_slice(&x.to_le_bytes()),
        }
    }

    let file = File::create(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    let gz = path.extension().is_some_and(|e| e == "gz");
    if gz {
        let mut w = GzEncoder::new(BufWriter::new(file), Compression::fast());
        w.write_all(&header)
            .and_then(|_| w.write_all(&payload))
            .and_then(|_| w.finish().map(|_| ()))
            .map_err(|e| Error::io(path.display().to_string(), e))?;
    } else {
        let mut w = BufWriter::new(file);
        w.write_all(&header)
            .and_then(|_| w.write_all(&payload))
            .map_err(|e| Error::io(path.display().to_string(), e))?;
    }
    Ok(())
}

/// Write a segmentation mask with its numeric labels (uint8 when they fit).
pub fn write_mask(mask: &SegmentationMask, path: impl AsRef<Path>) -> Result<()> {
    let data: Vec<f64> = mask.labels().iter().map(|&l| l as f64).collect();
    let v = Volume::new(mask.dims(), mask.spacing(), *mask.affine(), data)?;
    let dtype = if mask.labels().iter().all(|&l| l <= u8::MAX as u16) {
        Datatype::Uint8
    } else {
        Datatype::Int32
    };
    write_volume(&v, dtype, path)
}

/// BraTS default numeric label codes: 1 = NCR/NET, 2 = ED, 4 = ET.
pub fn brats_label_semantics() -> BTreeMap<u16, Compartment> {
    let mut m = BTreeMap::new();
    m.insert(1, Compartment::NcrNet);
    m.insert(2, Compartment::Edema);
    m.insert(4, Compartment::EnhancingTumor);
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use tempfile::tempdir;

    fn sample_volume() -> Volume {
        let data: Vec<f64> = (0..60).map(|i| i as f64 * 0.5 - 3.0).collect();
        Volume::from_parts([3, 4, 5], [1.0, 1.5, 2.0], data).unwrap()
    }

    #[test]
    fn roundtrip_all_datatypes() {
        let dir = tempdir().unwrap();
        for (dtype, exact) in [
            (Datatype::Uint8, false),
            (Datatype::Int16, false),
            (Datatype::Int32, false),
            (Datatype::Float32, true),
            (Datatype::Float64, true),
        ] {
            let v = if exact {
                sample_volume()
            } else {
                // integer payloads truncate; use integral values
                let data: Vec<f64> = (0..60).map(|i| (i % 100) as f64).collect();
                Volume::from_parts([3, 4, 5], [1.0, 1.5, 2.0], data).unwrap()
            };
            let path = dir.path().join(format!("t_{:?}.nii", dtype));
            write_volume(&v, dtype, &path).unwrap();
            let back = read_volume(&path).unwrap();
            assert_eq!(back.dims(), v.dims());
            assert_eq!(back.spacing(), v.spacing());
            for (a, b) in back.data().iter().zip(v.data()) {
                assert!((a - b).abs() < 1e-6, "{dtype:?}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn gzip_roundtrip_identical() {
        let dir = tempdir().unwrap();
        let v = sample_volume();
        let plain = dir.path().join("t.nii");
        let packed = dir.path().join("t.nii.gz");
        write_volume(&v, Datatype::Float64, &plain).unwrap();
        write_volume(&v, Datatype::Float64, &packed).unwrap();
        let a = read_volume(&plain).unwrap();
        let b = read_volume(&packed).unwrap();
        assert_eq!(a.data(), b.data());
        assert_eq!(a.data(), v.data());
    }

    #[test]
    fn slope_intercept_scaling() {
        // 4x4x4 int16 with slope 2, intercept -1: stored 3 decodes to 5.0
        let dir = tempdir().unwrap();
        let path = dir.path().join("scaled.nii");
        let v = Volume::from_parts([4, 4, 4], [1.0; 3], vec![3.0; 64]).unwrap();
        write_volume(&v, Datatype::Int16, &path).unwrap();
        let mut bytes = std::fs::read(&path).unwrap();
        bytes[112..116].copy_from_slice(&2f32.to_le_bytes());
        bytes[116..120].copy_from_slice(&(-1f32).to_le_bytes());
        std::fs::write(&path, &bytes).unwrap();
        let back = read_volume(&path).unwrap();
        assert!(back.data().iter().all(|&x| x == 5.0));
    }

    #[test]
    fn identity_scaling_bit_exact() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("id.nii");
        let v = sample_volume();
        write_volume(&v, Datatype::Float64, &path).unwrap();
        let back = read_volume(&path).unwrap();
        for (a, b) in back.data().iter().zip(v.data()) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn reads_are_deterministic() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("d.nii.gz");
        write_volume(&sample_volume(), Datatype::Float32, &path).unwrap();
        let a = read_volume(&path).unwrap();
        let b = read_volume(&path).unwrap();
        let bits = |v: &Volume| v.data().iter().map(|x| x.to_bits()).collect::<Vec<_>>();
        assert_eq!(bits(&a), bits(&b));
    }

    #[test]
    fn malformed_magic_rejected() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("bad.nii");
        write_volume(&sample_volume(), Datatype::Float32, &path).unwrap();
        let mut bytes = std::fs::read(&path).unwrap();
        bytes[344..348].copy_from_slice(b"xxx\0");
        std::fs::write(&path, &bytes).unwrap();
        assert!(matches!(read_volume(&path), Err(Error::NiftiMagic(_))));
    }

    #[test]
    fn unsupported_datatype_rejected() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("dt.nii");
        write_volume(&sample_volume(), Datatype::Float32, &path).unwrap();
        let mut bytes = std::fs::read(&path).unwrap();
        bytes[70..72].copy_from_slice(&32i16.to_le_bytes()); // complex64
        std::fs::write(&path, &bytes).unwrap();
        assert!(matches!(read_volume(&path), Err(Error::NiftiDatatype(32))));
    }

    #[test]
    fn wrong_dim_count_rejected() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("dims.nii");
        write_volume(&sample_volume(), Datatype::Float32, &path).unwrap();
        let mut bytes = std::fs::read(&path).unwrap();
        bytes[40..42].copy_from_slice(&4i16.to_le_bytes());
        std::fs::write(&path, &bytes).unwrap();
        assert!(matches!(read_volume(&path), Err(Error::NiftiDimCount(4))));
    }

    #[test]
    fn truncated_payload_rejected() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("trunc.nii");
        write_volume(&sample_volume(), Datatype::Float64, &path).unwrap();
        let bytes = std::fs::read(&path).unwrap();
        std::fs::write(&path, &bytes[..bytes.len() - 16]).unwrap();
        assert!(matches!(
            read_volume(&path),
            Err(Error::NiftiTruncated { .. })
        ));
    }

    #[test]
    fn mask_semantics_checked() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("seg.nii");
        let mut data = vec![0.0; 27];
        data[13] = 4.0;
        data[14] = 2.0;
        data[12] = 1.0;
        let v = Volume::from_parts([3, 3, 3], [1.0; 3], data).unwrap();
        write_volume(&v, Datatype::Uint8, &path).unwrap();
        let mask = read_mask(&path, &brats_label_semantics()).unwrap();
        assert_eq!(mask.compartment(Compartment::EnhancingTumor).count(), 1);
        assert_eq!(mask.compartment(Compartment::Edema).count(), 1);
        assert_eq!(mask.compartment(Compartment::NcrNet).count(), 1);

        // unknown label 7
        let mut data = vec![0.0; 27];
        data[0] = 7.0;
        let v = Volume::from_parts([3, 3, 3], [1.0; 3], data).unwrap();
        write_volume(&v, Datatype::Uint8, &path).unwrap();
        assert!(matches!(
            read_mask(&path, &brats_label_semantics()),
            Err(Error::UnknownLabel(7))
        ));
    }

    #[test]
    fn all_zero_mask_is_valid() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("zero.nii");
        let v = Volume::from_parts([3, 3, 3], [1.0; 3], vec![0.0; 27]).unwrap();
        write_volume(&v, Datatype::Uint8, &path).unwrap();
        let mask = read_mask(&path, &brats_label_semantics()).unwrap();
        assert!(mask.whole_tumor().is_empty());
    }

    #[test]
    fn non_integer_mask_rejected() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("frac.nii");
        let v = Volume::from_parts([2, 2, 2], [1.0; 3], vec![0.5; 8]).unwrap();
        write_volume(&v, Datatype::Float32, &path).unwrap();
        assert!(matches!(
            read_mask(&path, &brats_label_semantics()),
            Err(Error::NonIntegerLabel(_))
        ));
    }

    #[test]
    fn big_endian_files_read_back() {
        // hand-build a tiny big-endian file
        let mut header = vec![0u8; 352];
        header[0..4].copy_from_slice(&348i32.to_be_bytes());
        header[40..42].copy_from_slice(&3i16.to_be_bytes());
        for a in 0..3 {
            header[42 + 2 * a..44 + 2 * a].copy_from_slice(&2i16.to_be_bytes());
        }
        header[70..72].copy_from_slice(&16i16.to_be_bytes());
        header[72..74].copy_from_slice(&32i16.to_be_bytes());
        for a in 0..4 {
            header[76 + 4 * a..80 + 4 * a].copy_from_slice(&1f32.to_be_bytes());
        }
        header[108..112].copy_from_slice(&352f32.to_be_bytes());
        header[344..348].copy_from_slice(MAGIC_NP1);
        for i in 0..8 {
            header.extend_from_slice(&(i as f32).to_be_bytes());
        }
        let dir = tempdir().unwrap();
        let path = dir.path().join("be.nii");
        std::fs::write(&path, &header).unwrap();
        let v = read_volume(&path).unwrap();
        assert_eq!(v.dims(), [2, 2, 2]);
        assert_eq!(v.data()[5], 5.0);
    }
}
