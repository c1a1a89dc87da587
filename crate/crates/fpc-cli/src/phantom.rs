//! Synthetic ground-truth phantoms and the blur+noise degradation pipeline.

use fpc_core::{conv2d_periodic, ConvKernel, DetRng, Error, Image};

/// Deterministic piecewise-constant phantom: seeded rectangles and discs on
/// a constant background, values in [0, 1]. Piecewise-constant regions make
/// the image sparse under an orthogonal wavelet transform by construction.
pub fn make_phantom(size: usize, seed: u64) -> Result<Image, Error> {
    if size < 16 {
        return Err(Error::InvalidParameter {
            context: "make_phantom",
            message: format!("size must be at least 16, got {size}"),
        });
    }
    let mut rng = DetRng::new(seed);
    let mut img = Image::zeros(size, size);
    for p in img.pixels_mut() {
        *p = 0.1;
    }

    let s = size as f64;
    for _ in 0..6 {
        let h = rng.next_range(s / 10.0, s / 3.0) as usize;
        let w = rng.next_range(s / 10.0, s / 3.0) as usize;
        let top = rng.next_below(size - h);
        let left = rng.next_below(size - w);
        let value = rng.next_range(0.15, 0.95);
        for r in top..top + h {
            for c in left..left + w {
                img.set(r, c, value);
            }
        }
    }
    for _ in 0..4 {
        let radius = rng.next_range(s / 12.0, s / 5.0);
        let cy = rng.next_range(radius, s - radius);
        let cx = rng.next_range(radius, s - radius);
        let value = rng.next_range(0.15, 0.95);
        let r2 = radius * radius;
        let lo_r = (cy - radius).floor().max(0.0) as usize;
        let hi_r = ((cy + radius).ceil() as usize).min(size - 1);
        let lo_c = (cx - radius).floor().max(0.0) as usize;
        let hi_c = ((cx + radius).ceil() as usize).min(size - 1);
        for r in lo_r..=hi_r {
            for c in lo_c..=hi_c {
                let dy = r as f64 - cy;
                let dx = c as f64 - cx;
                if dy * dy + dx * dx <= r2 {
                    img.set(r, c, value);
                }
            }
        }
    }
    Ok(img)
}

/// x0 = blur(x) + noise_sigma · N(0, 1), seeded per pixel.
pub fn degrade(
    truth: &Image,
    kernel: &ConvKernel,
    noise_sigma: f64,
    noise_seed: u64,
) -> Result<Image, Error> {
    if noise_sigma < 0.0 {
        return Err(Error::InvalidParameter {
            context: "degrade",
            message: format!("noise sigma must be non-negative, got {noise_sigma}"),
        });
    }
    let mut degraded = conv2d_periodic(truth, kernel)?;
    if noise_sigma > 0.0 {
        let mut rng = DetRng::new(noise_seed);
        for p in degraded.pixels_mut() {
            *p += noise_sigma * rng.next_gaussian();
        }
    }
    Ok(degraded)
}
