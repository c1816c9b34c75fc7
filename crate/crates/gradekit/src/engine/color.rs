//! Scalar color helpers shared by the grading sub-operations.

/// Rec. 709 luma weights.
pub fn luma(r: f64, g: f64, b: f64) -> f64 {
    0.2126 * r + 0.7152 * g + 0.0722 * b
}

pub fn clamp01(v: f64) -> f64 {
    v.clamp(0.0, 1.0)
}

/// Hermite smoothstep between `e0` and `e1`.
pub fn smoothstep(e0: f64, e1: f64, x: f64) -> f64 {
    let t = ((x - e0) / (e1 - e0)).clamp(0.0, 1.0);
    t * t * (3.0 - 2.0 * t)
}

/// RGB in [0,1] to (hue degrees [0,360), saturation [0,1], lightness [0,1]).
/// Grayscale pixels report hue 0 and saturation 0.
pub fn rgb_to_hsl(r: f64, g: f64, b: f64) -> (f64, f64, f64) {
    let max = r.max(g).max(b);
    let min = r.min(g).min(b);
    let l = (max + min) / 2.0;
    if max == min {
        return (0.0, 0.0, l);
    }
    let d = max - min;
    let s = if l > 0.5 {
        d / (2.0 - max - min)
    } else {
        d / (max + min)
    };
    let h = if max == r {
        ((g - b) / d).rem_euclid(6.0)
    } else if max == g {
        (b - r) / d + 2.0
    } else {
        (r - g) / d + 4.0
    } * 60.0;
    (h, s, l)
}

fn hue_to_rgb(p: f64, q: f64, t: f64) -> f64 {
    let t = t.rem_euclid(1.0);
    if t < 1.0 / 6.0 {
        p + (q - p) * 6.0 * t
    } else if t < 0.5 {
        q
    } else if t < 2.0 / 3.0 {
        p + (q - p) * (2.0 / 3.0 - t) * 6.0
    } else {
        p
    }
}

/// Hue rotation fused into one conversion round trip. `deg6` is the rotation
/// in sixths of the color wheel (degrees / 60), expected in (0, 6).
/// Achromatic pixels return `None` (no hue to rotate). Matches
/// `hsl_to_rgb(rgb_to_hsl(..) + deg)` with the modular folds done by
/// comparison instead of fmod, which keeps the inner loop branch-cheap.
pub fn rotate_hue6(r: f64, g: f64, b: f64, deg6: f64) -> Option<(f64, f64, f64)> {
    let max = r.max(g).max(b);
    let min = r.min(g).min(b);
    if max == min {
        return None;
    }
    let d = max - min;
    let l = (max + min) / 2.0;
    let s = if l > 0.5 {
        d / (2.0 - max - min)
    } else {
        d / (max + min)
    };
    let mut h6 = if max == r {
        let v = (g - b) / d;
        if v < 0.0 {
            v + 6.0
        } else {
            v
        }
    } else if max == g {
        (b - r) / d + 2.0
    } else {
        (r - g) / d + 4.0
    };
    h6 += deg6;
    if h6 >= 6.0 {
        h6 -= 6.0;
    }
    let q = if l < 0.5 { l * (1.0 + s) } else { l + s - l * s };
    let p = 2.0 * l - q;
    let hn = h6 / 6.0;
    let chan = |mut t: f64| -> f64 {
        if t < 0.0 {
            t += 1.0;
        } else if t >= 1.0 {
            t -= 1.0;
        }
        if t < 1.0 / 6.0 {
            p + (q - p) * 6.0 * t
        } else if t < 0.5 {
            q
        } else if t < 2.0 / 3.0 {
            p + (q - p) * (2.0 / 3.0 - t) * 6.0
        } else {
            p
        }
    };
    Some((chan(hn + 1.0 / 3.0), chan(hn), chan(hn - 1.0 / 3.0)))
}

pub fn hsl_to_rgb(h: f64, s: f64, l: f64) -> (f64, f64, f64) {
    if s == 0.0 {
        return (l, l, l);
    }
    let q = if l < 0.5 { l * (1.0 + s) } else { l + s - l * s };
    let p = 2.0 * l - q;
    let hn = h / 360.0;
    (
        hue_to_rgb(p, q, hn + 1.0 / 3.0),
        hue_to_rgb(p, q, hn),
        hue_to_rgb(p, q, hn - 1.0 / 3.0),
    )
}
