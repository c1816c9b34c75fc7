//! Separable box blur over single-channel planes, replicate edges.

/// Mean over a (2r+1)^2 window, computed as two sliding-sum passes.
/// `plane` is row-major, `width * height` values.
pub fn box_blur(plane: &[f64], width: usize, height: usize, radius: usize) -> Vec<f64> {
    assert_eq!(plane.len(), width * height);
    if radius == 0 || plane.is_empty() {
        return plane.to_vec();
    }
    let mut tmp = vec![0.0; plane.len()];
    let window = (2 * radius + 1) as f64;

    // Horizontal pass.
    for y in 0..height {
        let row = &plane[y * width..(y + 1) * width];
        let at = |x: isize| -> f64 { row[x.clamp(0, width as isize - 1) as usize] };
        let mut sum = 0.0;
        for dx in -(radius as isize)..=(radius as isize) {
            sum += at(dx);
        }
        for x in 0..width {
            tmp[y * width + x] = sum / window;
            sum += at(x as isize + radius as isize + 1) - at(x as isize - radius as isize);
        }
    }

    // Vertical pass, streamed row-major with running per-column sums.
    let mut out = vec![0.0; plane.len()];
    let mut sums = vec![0.0; width];
    let row = |y: isize| -> &[f64] {
        let yy = y.clamp(0, height as isize - 1) as usize;
        &tmp[yy * width..(yy + 1) * width]
    };
    for dy in -(radius as isize)..=(radius as isize) {
        for (s, &v) in sums.iter_mut().zip(row(dy)) {
            *s += v;
        }
    }
    for y in 0..height {
        for (o, &s) in out[y * width..(y + 1) * width].iter_mut().zip(&sums) {
            *o = s / window;
        }
        let add = row(y as isize + radius as isize + 1);
        let sub = row(y as isize - radius as isize);
        for ((s, &a), &b) in sums.iter_mut().zip(add).zip(sub) {
            *s += a - b;
        }
    }
    out
}

/// Reusable buffers for [`box_blur_rgb_map_into`]; reusing them across the
/// blur-based sub-operations of one apply avoids repeated large allocations.
#[derive(Default)]
pub struct BlurScratch {
    tmp: Vec<f64>,
    /// Blur result after a call to [`box_blur_rgb_map_into`].
    pub dst: Vec<f64>,
}

/// Box blur over an interleaved RGB buffer (`width * height * 3` values),
/// reading the source through `map` (identity for a plain blur; e.g. a
/// bright-pass threshold for bloom, which avoids materializing the mapped
/// buffer). Equivalent to blurring each mapped channel plane separately; the
/// per-channel summation order is identical to `box_blur`, so results are
/// bit-identical to the per-plane formulation. Output lands in `scratch.dst`.
pub fn box_blur_rgb_map_into<F: Fn(f64) -> f64>(
    data: &[f64],
    width: usize,
    height: usize,
    radius: usize,
    map: F,
    scratch: &mut BlurScratch,
) {
    assert_eq!(data.len(), width * height * 3);
    scratch.dst.resize(data.len(), 0.0);
    if radius == 0 || data.is_empty() {
        for (d, &s) in scratch.dst.iter_mut().zip(data) {
            *d = map(s);
        }
        return;
    }
    let stride = width * 3;
    scratch.tmp.resize(data.len(), 0.0);
    let tmp = &mut scratch.tmp;
    let window = (2 * radius + 1) as f64;

    // Horizontal pass: three running sums per row.
    for y in 0..height {
        let row = &data[y * stride..(y + 1) * stride];
        let at = |x: isize, ch: usize| -> f64 {
            map(row[x.clamp(0, width as isize - 1) as usize * 3 + ch])
        };
        let mut sum = [0.0f64; 3];
        for dx in -(radius as isize)..=(radius as isize) {
            for (ch, s) in sum.iter_mut().enumerate() {
                *s += at(dx, ch);
            }
        }
        for x in 0..width {
            for ch in 0..3 {
                tmp[y * stride + x * 3 + ch] = sum[ch] / window;
                sum[ch] += at(x as isize + radius as isize + 1, ch)
                    - at(x as isize - radius as isize, ch);
            }
        }
    }

    // Vertical pass: running sums across one full row of channels.
    let out = &mut scratch.dst;
    let mut sums = vec![0.0; stride];
    let row = |y: isize| -> &[f64] {
        let yy = y.clamp(0, height as isize - 1) as usize;
        &tmp[yy * stride..(yy + 1) * stride]
    };
    for dy in -(radius as isize)..=(radius as isize) {
        for (s, &v) in sums.iter_mut().zip(row(dy)) {
            *s += v;
        }
    }
    for y in 0..height {
        for (o, &s) in out[y * stride..(y + 1) * stride].iter_mut().zip(&sums) {
            *o = s / window;
        }
        let add = row(y as isize + radius as isize + 1);
        let sub = row(y as isize - radius as isize);
        for ((s, &a), &b) in sums.iter_mut().zip(add).zip(sub) {
            *s += a - b;
        }
    }
}

/// Convenience allocating form of [`box_blur_rgb_map_into`] with the
/// identity mapping.
pub fn box_blur_rgb(data: &[f64], width: usize, height: usize, radius: usize) -> Vec<f64> {
    let mut scratch = BlurScratch::default();
    box_blur_rgb_map_into(data, width, height, radius, |v| v, &mut scratch);
    scratch.dst
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Naive reference: direct window mean with clamped coordinates.
    fn reference(plane: &[f64], width: usize, height: usize, radius: usize) -> Vec<f64> {
        let r = radius as isize;
        let mut out = vec![0.0; plane.len()];
        for y in 0..height as isize {
            for x in 0..width as isize {
                let mut sum = 0.0;
                for dy in -r..=r {
                    for dx in -r..=r {
                        let yy = (y + dy).clamp(0, height as isize - 1) as usize;
                        let xx = (x + dx).clamp(0, width as isize - 1) as usize;
                        sum += plane[yy * width + xx];
                    }
                }
                out[(y * width as isize + x) as usize] = sum / ((2 * r + 1) * (2 * r + 1)) as f64;
            }
        }
        out
    }

    #[test]
    fn matches_naive_reference() {
        let width = 9;
        let height = 7;
        let plane: Vec<f64> = (0..width * height)
            .map(|i| ((i * 37 + 11) % 101) as f64 / 100.0)
            .collect();
        for radius in [1, 2, 4] {
            let fast = box_blur(&plane, width, height, radius);
            let slow = reference(&plane, width, height, radius);
            for (a, b) in fast.iter().zip(&slow) {
                assert!((a - b).abs() < 1e-9, "radius {radius}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn rgb_blur_is_bit_identical_to_per_plane_blur() {
        let width = 11;
        let height = 6;
        let data: Vec<f64> = (0..width * height * 3)
            .map(|i| ((i * 53 + 7) % 97) as f64 / 96.0)
            .collect();
        for radius in [1, 2, 4] {
            let rgb = box_blur_rgb(&data, width, height, radius);
            for ch in 0..3 {
                let plane: Vec<f64> = data.iter().skip(ch).step_by(3).copied().collect();
                let blurred = box_blur(&plane, width, height, radius);
                for (i, &v) in blurred.iter().enumerate() {
                    assert_eq!(rgb[i * 3 + ch], v, "radius {radius} ch {ch} px {i}");
                }
            }
        }
    }

    #[test]
    fn constant_plane_is_fixed_point() {
        let plane = vec![0.42; 25];
        let out = box_blur(&plane, 5, 5, 2);
        for v in out {
            assert!((v - 0.42).abs() < 1e-12);
        }
    }
}
