//! Isotropic Poisson lines and independent edge deletion.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};

use crate::geometry::Point2;
use crate::graph::GeometricGraph;
use crate::planarize::planarize;
use crate::window::Window;

use super::GeneratorError;

/// Stream used for deletion draws so they never share state with line placement.
const DELETION_STREAM: u64 = 1;

/// Lines hitting the disc of radius `window.radius + margin`, clipped to it and planarized.
///
/// Lines are `(p, φ)` with φ uniform on `[0, π)` and signed offsets `p` a Poisson process on
/// `[−R, R]` of intensity `length_intensity`, which makes the mean line length per unit area
/// equal to `length_intensity`.
pub fn poisson_lines(length_intensity: f64, window: &Window, margin: f64, seed: u64) -> Result<GeometricGraph, GeneratorError> {
    if !(length_intensity >= 0.0 && length_intensity.is_finite()) {
        return Err(GeneratorError::Config(format!("line intensity must be non-negative, got {length_intensity}")));
    }
    if !(margin >= 0.0 && margin.is_finite()) {
        return Err(GeneratorError::Config(format!("margin must be non-negative, got {margin}")));
    }
    if length_intensity == 0.0 {
        return Ok(GeometricGraph::empty());
    }
    let big_r = window.radius + margin;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mean = 2.0 * big_r * length_intensity;
    let count = Poisson::new(mean).map_err(|e| GeneratorError::Config(e.to_string()))?.sample(&mut rng) as usize;
    let c = window.center;
    let mut segs = Vec::with_capacity(count);
    for _ in 0..count {
        let p = big_r * (2.0 * rng.random::<f64>() - 1.0);
        let phi = PI * rng.random::<f64>();
        let (s, co) = phi.sin_cos();
        let half = (big_r * big_r - p * p).sqrt();
        let foot = Point2::new(c.x + p * co, c.y + p * s);
        let dir = Point2::new(-s, co);
        segs.push([foot - dir * half, foot + dir * half]);
    }
    Ok(planarize(&segs)?)
}

/// Keeps each link independently with probability `1 − q`; all nodes stay.
pub fn delete_edge_interiors(g: &GeometricGraph, q: f64, seed: u64) -> Result<GeometricGraph, GeneratorError> {
    if !(0.0..=1.0).contains(&q) {
        return Err(GeneratorError::Config(format!("deletion probability must be in [0, 1], got {q}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(DELETION_STREAM);
    let keep: Vec<bool> = (0..g.link_count()).map(|_| rng.random::<f64>() >= q).collect();
    Ok(g.retain_links(|l| keep[l]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::classify_vertex;

    #[test]
    fn zero_intensity_is_empty() {
        let g = poisson_lines(0.0, &Window::centered(10.0).unwrap(), 5.0, 1).unwrap();
        assert_eq!(g.node_count(), 0);
    }

    #[test]
    fn crossings_are_four_valent() {
        let w = Window::centered(6.0).unwrap();
        let g = poisson_lines(1.0, &w, 2.0, 11).unwrap();
        let mut interior = 0;
        for v in 0..g.node_count() {
            if g.nodes()[v].norm() < 7.9 {
                let c = classify_vertex(&g, v);
                assert_eq!((c.valency, c.pi_angle_count), (4, 0));
                interior += 1;
            }
        }
        assert!(interior > 10);
    }

    #[test]
    fn deletion_extremes_and_binomial() {
        let w = Window::centered(20.0).unwrap();
        let g = poisson_lines(1.0, &w, 2.0, 5).unwrap();
        assert_eq!(delete_edge_interiors(&g, 0.0, 9).unwrap(), g);
        let none = delete_edge_interiors(&g, 1.0, 9).unwrap();
        assert_eq!((none.link_count(), none.node_count()), (0, g.node_count()));
        assert!(delete_edge_interiors(&g, 1.5, 9).is_err());

        // Oracle: Binomial(n, 1/2) surviving count, within 4σ.
        let n = g.link_count() as f64;
        assert!(n > 300.0, "{n}");
        let kept = delete_edge_interiors(&g, 0.5, 3).unwrap().link_count() as f64;
        assert!((kept - n / 2.0).abs() < 4.0 * (n * 0.25).sqrt(), "kept {kept} of {n}");
    }

    #[test]
    fn deterministic_by_seed() {
        let w = Window::centered(5.0).unwrap();
        let a = poisson_lines(1.0, &w, 1.0, 42).unwrap();
        let b = poisson_lines(1.0, &w, 1.0, 42).unwrap();
        assert_eq!(a.to_json(), b.to_json());
        assert_ne!(a.to_json(), poisson_lines(1.0, &w, 1.0, 43).unwrap().to_json());
    }
}
