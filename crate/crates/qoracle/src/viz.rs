//! Pixel-graph rendering of dictionary states (phase → hue, magnitude →
//! brightness, one pixel per (key, value) amplitude) and histogram
//! output. Images are written as binary PPM (P6), the simplest
//! byte-exact format for golden tests.

use std::f64::consts::TAU;
use std::fmt::Write as _;

use crate::qdict::{DictionaryLayout, EncodedState};
use crate::sim::Histogram;

/// Amplitudes below this magnitude render black regardless of
/// normalization.
const BLACK_THRESHOLD: f64 = 1e-12;

/// An RGB image, row 0 at the top.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PixelGraph {
    width: usize,
    height: usize,
    pixels: Vec<[u8; 3]>,
}

impl PixelGraph {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixel(&self, row: usize, col: usize) -> [u8; 3] {
        self.pixels[row * self.width + col]
    }

    /// Binary PPM bytes: `P6\n<w> <h>\n255\n` then RGB triples row-major.
    /// `scale` replicates every pixel into a scale×scale block (1 for
    /// golden files, something like 16 for viewing).
    pub fn to_ppm(&self, scale: usize) -> Vec<u8> {
        assert!(scale >= 1, "scale must be positive");
        let (w, h) = (self.width * scale, self.height * scale);
        let mut out = format!("P6\n{w} {h}\n255\n").into_bytes();
        out.reserve(w * h * 3);
        for row in 0..self.height {
            for _ in 0..scale {
                for col in 0..self.width {
                    for _ in 0..scale {
                        out.extend_from_slice(&self.pixel(row, col));
                    }
                }
            }
        }
        out
    }
}

/// Standard six-sector HSV→RGB with hue in degrees; hue 0 is red.
fn hsv_to_rgb(hue_deg: f64, saturation: f64, value: f64) -> [u8; 3] {
    let sector = (hue_deg / 60.0).floor();
    let fraction = hue_deg / 60.0 - sector;
    let p = value * (1.0 - saturation);
    let q = value * (1.0 - saturation * fraction);
    let t = value * (1.0 - saturation * (1.0 - fraction));
    let (r, g, b) = match sector as i64 % 6 {
        0 => (value, t, p),
        1 => (q, value, p),
        2 => (p, value, t),
        3 => (p, q, value),
        4 => (t, p, value),
        _ => (value, p, q),
    };
    let channel = |x: f64| (x.clamp(0.0, 1.0) * 255.0).round() as u8;
    [channel(r), channel(g), channel(b)]
}

/// Render a dictionary state: columns are keys, rows are values, hue is
/// the amplitude's phase, brightness its magnitude normalized to the
/// brightest pixel of this image. `signed_rows` orders rows by signed
/// two's-complement value ascending top to bottom; otherwise rows run
/// 0..2^m−1.
pub fn render_state(encoded: &EncodedState, signed_rows: bool) -> PixelGraph {
    let layout = encoded.layout;
    let width = 1usize << layout.key_qubits;
    let height = 1usize << layout.value_qubits;
    let max_mag = encoded
        .state
        .amplitudes()
        .iter()
        .map(|a| a.norm())
        .fold(0.0, f64::max);

    let mut pixels = vec![[0u8; 3]; width * height];
    for row in 0..height {
        let raw = if signed_rows {
            (row as i64 - (height / 2) as i64).rem_euclid(height as i64) as usize
        } else {
            row
        };
        for col in 0..width {
            let amp = encoded.amplitude(col, raw);
            let mag = amp.norm();
            if mag < BLACK_THRESHOLD || max_mag < BLACK_THRESHOLD {
                continue;
            }
            let hue = amp.arg().rem_euclid(TAU) * 360.0 / TAU;
            pixels[row * width + col] = hsv_to_rgb(hue, 1.0, mag / max_mag);
        }
    }
    PixelGraph {
        width,
        height,
        pixels,
    }
}

/// Render measured counts over (key, value) pairs in greyscale: the
/// empirical amplitude magnitude √(count/shots), normalized to the
/// brightest cell. Phases are unknown in sampled data, hence no hue.
pub fn render_counts(histogram: &Histogram, layout: &DictionaryLayout, shots: u64) -> PixelGraph {
    let width = 1usize << layout.key_qubits;
    let height = 1usize << layout.value_qubits;
    let mut magnitudes = vec![0.0f64; width * height];
    if shots > 0 {
        for (basis, &count) in histogram {
            let row = layout.raw_value_of(basis.0);
            let col = layout.key_of(basis.0);
            magnitudes[row * width + col] = (count as f64 / shots as f64).sqrt();
        }
    }
    let max_mag = magnitudes.iter().copied().fold(0.0, f64::max);
    let pixels = magnitudes
        .into_iter()
        .map(|mag| {
            if max_mag <= 0.0 {
                [0, 0, 0]
            } else {
                let grey = ((mag / max_mag).clamp(0.0, 1.0) * 255.0).round() as u8;
                [grey, grey, grey]
            }
        })
        .collect();
    PixelGraph {
        width,
        height,
        pixels,
    }
}

/// Histogram CSV: a `bitstring,count` header then one row per observed
/// outcome, sorted by bitstring.
pub fn render_histogram(histogram: &Histogram, num_qubits: usize) -> String {
    let mut out = String::from("bitstring,count\n");
    for (basis, count) in histogram {
        writeln!(out, "{},{}", basis.bitstring(num_qubits), count).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qdict::{encode, DictionaryLayout, PolynomialSpec};
    use crate::sim::BasisIndex;
    use num_complex::Complex64;

    fn identity_dictionary() -> EncodedState {
        // f(k) = k over 3 key bits: 4·x0 + 2·x1 + x2.
        let poly = PolynomialSpec::parse("4*x0 + 2*x1 + x2").unwrap();
        let layout = DictionaryLayout::new(3, 3, false).unwrap();
        encode(&poly, &layout).unwrap()
    }

    #[test]
    fn identity_function_lights_the_diagonal() {
        let graph = render_state(&identity_dictionary(), false);
        assert_eq!((graph.width(), graph.height()), (8, 8));
        for row in 0..8 {
            for col in 0..8 {
                let pixel = graph.pixel(row, col);
                if row == col {
                    // Phase ~0: full-brightness red.
                    assert_eq!(pixel, [255, 0, 0], "({row}, {col})");
                } else {
                    assert_eq!(pixel, [0, 0, 0], "({row}, {col})");
                }
            }
        }
    }

    #[test]
    fn zero_sum_subset_state_has_two_pixels_in_the_zero_row() {
        let poly = PolynomialSpec::parse("2*x0 + x1 - 5*x2 + 2*x3").unwrap();
        let layout = DictionaryLayout::auto(&poly).unwrap();
        let graph = render_state(&encode(&poly, &layout).unwrap(), false);
        let lit = |row: usize| {
            (0..16)
                .filter(|&c| graph.pixel(row, c) != [0, 0, 0])
                .count()
        };
        assert_eq!(lit(0), 2);
        let total: usize = (0..16).map(lit).sum();
        assert_eq!(total, 16);
    }

    #[test]
    fn constant_zero_polynomial_fills_one_row() {
        let poly = PolynomialSpec::constant(2, 0);
        let layout = DictionaryLayout::new(2, 1, false).unwrap();
        let graph = render_state(&encode(&poly, &layout).unwrap(), false);
        for col in 0..4 {
            assert_eq!(graph.pixel(0, col), [255, 0, 0]);
            assert_eq!(graph.pixel(1, col), [0, 0, 0]);
        }
    }

    #[test]
    fn signed_rows_put_negative_values_on_top() {
        // x0 − x1 over 2+2 qubits attains −1, 0, 1. Signed order makes
        // rows read −2, −1, 0, 1 from the top.
        let poly = PolynomialSpec::parse("x0 - x1").unwrap();
        let layout = DictionaryLayout::new(2, 2, true).unwrap();
        let encoded = encode(&poly, &layout).unwrap();
        let graph = render_state(&encoded, true);
        let lit_cols = |row: usize| -> Vec<usize> {
            (0..4)
                .filter(|&c| graph.pixel(row, c) != [0, 0, 0])
                .collect()
        };
        assert_eq!(lit_cols(0), Vec::<usize>::new()); // value −2 unattained
        assert_eq!(lit_cols(1), vec![0b01]); // −1
        assert_eq!(lit_cols(2), vec![0b00, 0b11]); // 0
        assert_eq!(lit_cols(3), vec![0b10]); // 1
    }

    #[test]
    fn relative_hues_survive_a_global_phase() {
        let encoded = {
            let poly = PolynomialSpec::parse("x0 - x1").unwrap();
            let layout = DictionaryLayout::new(2, 2, true).unwrap();
            encode(&poly, &layout).unwrap()
        };
        let rotated = {
            let phase = Complex64::from_polar(1.0, 1.234);
            let amps = encoded
                .state
                .amplitudes()
                .iter()
                .map(|a| a * phase)
                .collect();
            EncodedState {
                state: crate::sim::StateVector::from_amplitudes(amps).unwrap(),
                layout: encoded.layout,
            }
        };
        let hue_of = |px: [u8; 3]| -> f64 {
            // Recover an approximate hue angle from the RGB bytes.
            let (r, g, b) = (px[0] as f64, px[1] as f64, px[2] as f64);
            let max = r.max(g).max(b);
            let min = r.min(g).min(b);
            let d = max - min;
            if d == 0.0 {
                return 0.0;
            }
            let h = if max == r {
                ((g - b) / d).rem_euclid(6.0)
            } else if max == g {
                (b - r) / d + 2.0
            } else {
                (r - g) / d + 4.0
            };
            h * 60.0
        };
        let a = render_state(&encoded, false);
        let b = render_state(&rotated, false);
        let lit: Vec<(usize, usize)> = (0..4)
            .flat_map(|r| (0..4).map(move |c| (r, c)))
            .filter(|&(r, c)| a.pixel(r, c) != [0, 0, 0])
            .collect();
        let reference = lit[0];
        for &(r, c) in &lit[1..] {
            let before = (hue_of(a.pixel(r, c)) - hue_of(a.pixel(reference.0, reference.1)))
                .rem_euclid(360.0);
            let after = (hue_of(b.pixel(r, c)) - hue_of(b.pixel(reference.0, reference.1)))
                .rem_euclid(360.0);
            let diff = (before - after).abs();
            let diff = diff.min(360.0 - diff);
            assert!(diff <= 1.0, "hue delta changed by {diff}° at ({r}, {c})");
        }
    }

    #[test]
    fn equal_magnitudes_render_equal_brightness() {
        let graph = render_state(&identity_dictionary(), false);
        let values: Vec<u8> = (0..8).map(|i| graph.pixel(i, i)[0]).collect();
        assert!(values.iter().all(|&v| v == values[0]));
    }

    #[test]
    fn renders_are_byte_deterministic() {
        let encoded = identity_dictionary();
        assert_eq!(
            render_state(&encoded, false).to_ppm(1),
            render_state(&encoded, false).to_ppm(1)
        );
    }

    #[test]
    fn sampled_counts_reproduce_the_exact_brightness_in_grey() {
        let encoded = identity_dictionary();
        let shots = 4_000_000;
        let hist = encoded.state.sample(shots, 13);
        let grey = render_counts(&hist, &encoded.layout, shots);
        let exact = render_state(&encoded, false);
        for row in 0..8 {
            for col in 0..8 {
                let expected = exact.pixel(row, col)[0]; // red channel = brightness
                let got = grey.pixel(row, col)[0];
                assert!(
                    (expected as i32 - got as i32).abs() <= 1,
                    "({row}, {col}): {expected} vs {got}"
                );
                assert_eq!(grey.pixel(row, col)[1], got);
                assert_eq!(grey.pixel(row, col)[2], got);
            }
        }
    }

    #[test]
    fn grey_brightness_is_monotone_in_the_count() {
        let layout = DictionaryLayout::new(1, 1, false).unwrap();
        let mut hist = Histogram::new();
        hist.insert(BasisIndex(0b00), 1);
        hist.insert(BasisIndex(0b01), 4);
        hist.insert(BasisIndex(0b10), 9);
        let graph = render_counts(&hist, &layout, 14);
        // Empirical magnitudes scale as √count: 1/3, 2/3, 3/3 of max.
        assert_eq!(graph.pixel(0, 0), [85, 85, 85]);
        assert_eq!(graph.pixel(1, 0), [170, 170, 170]);
        assert_eq!(graph.pixel(0, 1), [255, 255, 255]);
        assert_eq!(graph.pixel(1, 1), [0, 0, 0]);
    }

    #[test]
    fn empty_histogram_renders_black() {
        let layout = DictionaryLayout::new(2, 2, false).unwrap();
        let graph = render_counts(&Histogram::new(), &layout, 0);
        assert!((0..4).all(|r| (0..4).all(|c| graph.pixel(r, c) == [0, 0, 0])));
    }

    #[test]
    fn single_outcome_renders_one_white_pixel() {
        let layout = DictionaryLayout::new(2, 2, false).unwrap();
        let mut hist = Histogram::new();
        hist.insert(BasisIndex(0b0110), 32); // key 01, value 10
        let graph = render_counts(&hist, &layout, 32);
        for row in 0..4 {
            for col in 0..4 {
                let expected = if (row, col) == (0b10, 0b01) {
                    [255, 255, 255]
                } else {
                    [0, 0, 0]
                };
                assert_eq!(graph.pixel(row, col), expected);
            }
        }
    }

    #[test]
    fn histogram_csv_is_sorted_with_header() {
        let mut hist = Histogram::new();
        hist.insert(BasisIndex(3), 512);
        hist.insert(BasisIndex(0), 512);
        let csv = render_histogram(&hist, 2);
        assert_eq!(csv, "bitstring,count\n00,512\n11,512\n");
        assert_eq!(render_histogram(&Histogram::new(), 2), "bitstring,count\n");
    }

    #[test]
    fn ppm_bytes_have_the_documented_layout() {
        let encoded = {
            let poly = PolynomialSpec::constant(1, 0);
            let layout = DictionaryLayout::new(1, 1, false).unwrap();
            encode(&poly, &layout).unwrap()
        };
        let ppm = render_state(&encoded, false).to_ppm(1);
        assert!(ppm.starts_with(b"P6\n2 2\n255\n"));
        assert_eq!(ppm.len(), b"P6\n2 2\n255\n".len() + 2 * 2 * 3);

        let scaled = render_state(&encoded, false).to_ppm(3);
        assert!(scaled.starts_with(b"P6\n6 6\n255\n"));
    }
}
