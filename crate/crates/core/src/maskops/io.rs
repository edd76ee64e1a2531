use std::path::Path;

use image::{GrayImage, ImageFormat};

use super::{BinaryMask, MaskError, TriMask};

fn png_bytes(width: usize, height: usize, data: &[u8]) -> Result<Vec<u8>, MaskError> {
    let img = GrayImage::from_raw(width as u32, height as u32, data.to_vec())
        .ok_or_else(|| MaskError::Png("raster size mismatch".into()))?;
    let mut out = std::io::Cursor::new(Vec::new());
    img.write_to(&mut out, ImageFormat::Png)
        .map_err(|e| MaskError::Png(e.to_string()))?;
    Ok(out.into_inner())
}

fn to_png(path: &Path, width: usize, height: usize, data: &[u8]) -> Result<(), MaskError> {
    std::fs::write(path, png_bytes(width, height, data)?)?;
    Ok(())
}

fn from_png(path: &Path) -> Result<(usize, usize, Vec<u8>), MaskError> {
    let img = image::open(path).map_err(|e| MaskError::Png(e.to_string()))?;
    let gray = img.into_luma8();
    let (w, h) = gray.dimensions();
    Ok((w as usize, h as usize, gray.into_raw()))
}

/// PNG encoding of a binary mask, as written by [`write_binary_png`].
pub fn encode_binary_png(mask: &BinaryMask) -> Result<Vec<u8>, MaskError> {
    png_bytes(mask.width(), mask.height(), mask.as_slice())
}

/// 8-bit single-channel PNG with values {0, 1}.
pub fn write_binary_png(path: impl AsRef<Path>, mask: &BinaryMask) -> Result<(), MaskError> {
    to_png(path.as_ref(), mask.width(), mask.height(), mask.as_slice())
}

pub fn read_binary_png(path: impl AsRef<Path>) -> Result<BinaryMask, MaskError> {
    let (w, h, data) = from_png(path.as_ref())?;
    BinaryMask::from_vec(w, h, data)
}

/// 8-bit single-channel PNG with values {0, 1, 255}.
pub fn write_tri_png(path: impl AsRef<Path>, mask: &TriMask) -> Result<(), MaskError> {
    to_png(path.as_ref(), mask.width(), mask.height(), mask.as_slice())
}

pub fn read_tri_png(path: impl AsRef<Path>) -> Result<TriMask, MaskError> {
    let (w, h, data) = from_png(path.as_ref())?;
    TriMask::from_vec(w, h, data)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn png_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let m = BinaryMask::from_ascii("#..#\n.##.\n....");
        let p = dir.path().join("m.png");
        write_binary_png(&p, &m).unwrap();
        assert_eq!(read_binary_png(&p).unwrap(), m);

        let t = TriMask::from_vec(3, 1, vec![0, 1, 255]).unwrap();
        let q = dir.path().join("t.png");
        write_tri_png(&q, &t).unwrap();
        assert_eq!(read_tri_png(&q).unwrap(), t);
        assert!(read_binary_png(&q).is_err());
    }
}
