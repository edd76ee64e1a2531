use super::{random_foreground, GestureAnnotation, GestureError, GestureParams, GestureType};
use crate::maskops::BinaryMask;
use crate::rng::rng_from_seed;
use crate::Point;

/// Click on a uniformly drawn foreground pixel of `target`.
pub fn gen_click(target: &BinaryMask, seed: u64) -> Result<GestureAnnotation, GestureError> {
    let mut rng = rng_from_seed(seed);
    let pixel = random_foreground(target, &mut rng).ok_or(GestureError::EmptyTarget)?;
    Ok(click_at(pixel, target.width(), target.height(), seed))
}

/// Click at a fixed pixel.
pub fn click_at(pixel: (usize, usize), width: usize, height: usize, seed: u64) -> GestureAnnotation {
    GestureAnnotation::build(
        GestureType::Click,
        vec![Point::from_pixel(pixel.0, pixel.1)],
        width,
        height,
        seed,
        GestureParams::Click {},
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_target_is_error() {
        assert!(matches!(gen_click(&BinaryMask::new(4, 4), 0), Err(GestureError::EmptyTarget)));
    }

    #[test]
    fn single_pixel_target_always_hit() {
        let mut m = BinaryMask::new(30, 30);
        m.set(12, 17, true);
        for seed in 0..50 {
            let g = gen_click(&m, seed).unwrap();
            assert_eq!(g.points, vec![Point::new(12.0, 17.0)]);
        }
    }

    #[test]
    fn interior_click_stroke_is_81_pixels() {
        let mut m = BinaryMask::new(30, 30);
        m.set(15, 15, true);
        assert_eq!(gen_click(&m, 1).unwrap().stroke.area(), 81);
        // Clipped at the corner.
        assert!(click_at((0, 0), 30, 30, 0).stroke.area() < 81);
    }

    #[test]
    fn two_pixel_target_is_balanced() {
        let mut m = BinaryMask::new(10, 10);
        m.set(2, 2, true);
        m.set(7, 7, true);
        let n = 10_000u64;
        let first = (0..n)
            .filter(|&s| gen_click(&m, s).unwrap().points[0] == Point::new(2.0, 2.0))
            .count() as f64;
        // Chi-square with one degree of freedom; 10.83 is the 0.1% critical value.
        let expected = n as f64 / 2.0;
        let chi2 = 2.0 * (first - expected).powi(2) / expected;
        assert!(chi2 < 10.83, "chi2 = {chi2}");
    }
}
