use delaunator::{triangulate, Point};

/// Neighbour pairs `(a, b)` of the Delaunay triangulation of points on the
/// flat unit torus, both orders present, sorted. Built by triangulating the
/// 3×3 block of periodic images and folding every edge back onto the
/// original points. Empty if the triangulation degenerates.
///
/// Lattice positions are highly cocircular, so every point gets a tiny
/// fixed offset shared by all of its images; all nine copies then resolve
/// degeneracies the same way.
pub(super) fn torus_delaunay_pairs(points: &[[f64; 2]]) -> Vec<(usize, usize)> {
    let n = points.len();
    let jittered: Vec<[f64; 2]> = points
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let (a, b) = offset(i as u64);
            [p[0] + a, p[1] + b]
        })
        .collect();
    let mut images = Vec::with_capacity(9 * n);
    for dy in [-1.0, 0.0, 1.0] {
        for dx in [-1.0, 0.0, 1.0] {
            images.extend(jittered.iter().map(|p| Point { x: p[0] + dx, y: p[1] + dy }));
        }
    }
    let centre = 4 * n..5 * n;
    let tri = triangulate(&images);
    let mut pairs = Vec::new();
    for t in tri.triangles.chunks_exact(3) {
        for (p, q) in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
            if !centre.contains(&p) && !centre.contains(&q) {
                continue;
            }
            let (a, b) = (p % n, q % n);
            if a != b {
                pairs.push((a, b));
                pairs.push((b, a));
            }
        }
    }
    pairs.sort_unstable();
    pairs.dedup();
    pairs
}

fn offset(i: u64) -> (f64, f64) {
    let mut z = i.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ 0xD1B5_4A32_D192_ED03;
    z = (z ^ (z >> 29)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z ^= z >> 32;
    let unit = |bits: u64| (bits & 0xFFFF_FFFF) as f64 / 4_294_967_296.0 - 0.5;
    (1e-7 * unit(z), 1e-7 * unit(z.rotate_left(32)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_grid_links_nearest_neighbours() {
        // 4×4 grid, jittered so the triangulation is unique.
        let pts: Vec<[f64; 2]> = (0..16)
            .map(|k| [(k % 4) as f64 / 4.0 + 1e-3 * (k as f64).sin(), (k / 4) as f64 / 4.0 + 1e-3 * (k as f64).cos()])
            .collect();
        let pairs = torus_delaunay_pairs(&pts);
        // Flat torus triangulation: E = 3V.
        assert_eq!(pairs.len() / 2, 48);
        for k in 0..16 {
            let right = (k / 4) * 4 + (k % 4 + 1) % 4;
            let up = (k + 4) % 16;
            assert!(pairs.binary_search(&(k, right)).is_ok());
            assert!(pairs.binary_search(&(k, up)).is_ok());
        }
    }
}
