//! Binary PGM (P5, 8-bit) image IO. Pixel values are rescaled to [0, 1] on
//! load and clamped back to [0, 255] on save.

use std::fs;
use std::io::Write;
use std::path::Path;

use fpc_core::Image;

use crate::AppError;

pub fn save_pgm(path: &Path, image: &Image) -> Result<(), AppError> {
    let mut out = Vec::with_capacity(image.pixels().len() + 32);
    write!(out, "P5\n{} {}\n255\n", image.width(), image.height())?;
    for &p in image.pixels() {
        let v = (p.clamp(0.0, 1.0) * 255.0).round() as u8;
        out.push(v);
    }
    fs::write(path, out)?;
    Ok(())
}

pub fn load_pgm(path: &Path) -> Result<Image, AppError> {
    let bytes = fs::read(path)?;
    let mut pos = 0usize;

    fn skip_separators(bytes: &[u8], mut pos: usize) -> usize {
        loop {
            while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
                pos += 1;
            }
            if pos < bytes.len() && bytes[pos] == b'#' {
                while pos < bytes.len() && bytes[pos] != b'\n' {
                    pos += 1;
                }
            } else {
                return pos;
            }
        }
    }

    fn read_token(bytes: &[u8], pos: &mut usize) -> Result<String, AppError> {
        *pos = skip_separators(bytes, *pos);
        let start = *pos;
        while *pos < bytes.len() && !bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
        if start == *pos {
            return Err(AppError::Parse("pgm: unexpected end of header".into()));
        }
        Ok(String::from_utf8_lossy(&bytes[start..*pos]).into_owned())
    }

    let magic = read_token(&bytes, &mut pos)?;
    if magic != "P5" {
        return Err(AppError::Parse(format!(
            "pgm: expected P5 magic, found {magic:?}"
        )));
    }
    let width: usize = read_token(&bytes, &mut pos)?
        .parse()
        .map_err(|e| AppError::Parse(format!("pgm: bad width: {e}")))?;
    let height: usize = read_token(&bytes, &mut pos)?
        .parse()
        .map_err(|e| AppError::Parse(format!("pgm: bad height: {e}")))?;
    let maxval: usize = read_token(&bytes, &mut pos)?
        .parse()
        .map_err(|e| AppError::Parse(format!("pgm: bad maxval: {e}")))?;
    if maxval == 0 || maxval > 255 {
        return Err(AppError::Parse(format!(
            "pgm: only 8-bit images supported (maxval {maxval})"
        )));
    }
    // exactly one whitespace byte separates the header from raster data
    pos += 1;
    let expected = width * height;
    if bytes.len() < pos + expected {
        return Err(AppError::Parse(format!(
            "pgm: raster truncated: expected {expected} bytes, found {}",
            bytes.len().saturating_sub(pos)
        )));
    }
    let pixels: Vec<f64> = bytes[pos..pos + expected]
        .iter()
        .map(|&b| b as f64 / maxval as f64)
        .collect();
    Image::from_pixels(pixels, height, width).map_err(AppError::Core)
}
