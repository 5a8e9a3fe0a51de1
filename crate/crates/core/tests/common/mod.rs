#![allow(dead_code)]

use std::f64::consts::{FRAC_PI_2, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ris_quant::{Placement, RadioConfig, RisPanel, Scenario};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random link on an `rows x cols` panel with `bits` of resolution. Distances
/// range from a fraction of the aperture to tens of wavelengths so both
/// near- and far-field phase patterns show up.
pub fn random_scenario(r: &mut ChaCha8Rng, rows: usize, cols: usize, bits: u32) -> Scenario {
    let wavelength = r.random_range(0.02..0.3);
    let dx = wavelength * r.random_range(0.2..0.8);
    let dy = wavelength * r.random_range(0.2..0.8);
    let panel = RisPanel::with_uniform_levels(
        rows,
        cols,
        dx,
        dy,
        bits,
        r.random_range(0.0..TAU),
        r.random_range(0.3..=1.0),
    )
    .unwrap();
    let placement = Placement::new(
        wavelength * r.random_range(1.0..40.0),
        r.random_range(0.0..FRAC_PI_2 * 0.9),
        r.random_range(0.0..TAU),
        wavelength * r.random_range(1.0..40.0),
        r.random_range(0.0..FRAC_PI_2 * 0.9),
        r.random_range(0.0..TAU),
    )
    .unwrap();
    let radio = RadioConfig::new(
        wavelength,
        r.random_range(-10.0..30.0),
        r.random_range(3.1..15.0),
        r.random_range(3.1..15.0),
        1.0,
    )
    .unwrap();
    Scenario::new(panel, placement, radio).unwrap()
}

/// Random scenario with a panel drawn from `shapes` and bits from `bits`.
pub fn random_from(r: &mut ChaCha8Rng, shapes: &[(usize, usize)], bits: &[u32]) -> Scenario {
    let (m, n) = shapes[r.random_range(0..shapes.len())];
    let q = bits[r.random_range(0..bits.len())];
    random_scenario(r, m, n, q)
}

pub fn rel_diff(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}
