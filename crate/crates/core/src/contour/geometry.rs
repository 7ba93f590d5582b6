//! Planar polygon helpers. Rings are stored open: the closing edge from the
//! last vertex back to the first is implied.

pub type Point = [f64; 2];

fn cross(o: Point, a: Point, b: Point) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

fn on_segment(p: Point, q: Point, r: Point) -> bool {
    r[0] >= p[0].min(q[0]) && r[0] <= p[0].max(q[0]) && r[1] >= p[1].min(q[1]) && r[1] <= p[1].max(q[1])
}

/// True when closed segments `ab` and `cd` share at least one point.
pub fn segments_intersect(a: Point, b: Point, c: Point, d: Point) -> bool {
    let d1 = cross(c, d, a);
    let d2 = cross(c, d, b);
    let d3 = cross(a, b, c);
    let d4 = cross(a, b, d);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    (d1 == 0.0 && on_segment(c, d, a))
        || (d2 == 0.0 && on_segment(c, d, b))
        || (d3 == 0.0 && on_segment(a, b, c))
        || (d4 == 0.0 && on_segment(a, b, d))
}

/// Segment-intersection scan over all pairs of non-adjacent edges.
pub fn is_simple(ring: &[Point]) -> bool {
    let n = ring.len();
    if n < 3 {
        return false;
    }
    let edge = |i: usize| (ring[i], ring[(i + 1) % n]);
    let boxes: Vec<[f64; 4]> = (0..n)
        .map(|i| {
            let (a, b) = edge(i);
            [a[0].min(b[0]), a[0].max(b[0]), a[1].min(b[1]), a[1].max(b[1])]
        })
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| boxes[i][0].total_cmp(&boxes[j][0]));
    for (k, &i) in order.iter().enumerate() {
        for &j in &order[k + 1..] {
            if boxes[j][0] > boxes[i][1] {
                break;
            }
            let adjacent = j == (i + 1) % n || i == (j + 1) % n;
            if adjacent || boxes[j][2] > boxes[i][3] || boxes[i][2] > boxes[j][3] {
                continue;
            }
            let (a, b) = edge(i);
            let (c, d) = edge(j);
            if segments_intersect(a, b, c, d) {
                return false;
            }
        }
    }
    true
}

/// Shoelace area, positive for counter-clockwise rings.
pub fn signed_area(ring: &[Point]) -> f64 {
    let n = ring.len();
    (0..n)
        .map(|i| {
            let (a, b) = (ring[i], ring[(i + 1) % n]);
            a[0] * b[1] - b[0] * a[1]
        })
        .sum::<f64>()
        * 0.5
}

/// Convex (all turns of one sign, collinear runs allowed) and simple.
pub fn is_convex(ring: &[Point]) -> bool {
    let n = ring.len();
    if n < 3 {
        return false;
    }
    let scale = ring.iter().fold(0.0f64, |m, p| m.max(p[0].abs()).max(p[1].abs())).max(1.0);
    let tol = 1e-12 * scale * scale;
    let (mut pos, mut neg) = (false, false);
    for i in 0..n {
        let c = cross(ring[i], ring[(i + 1) % n], ring[(i + 2) % n]);
        pos |= c > tol;
        neg |= c < -tol;
    }
    !(pos && neg) && is_simple(ring)
}

/// Even-odd point-in-ring test.
pub fn point_in_ring(ring: &[Point], p: Point) -> bool {
    let n = ring.len();
    let mut inside = false;
    let mut j = n - 1;
    for i in 0..n {
        let (a, b) = (ring[i], ring[j]);
        if (a[1] > p[1]) != (b[1] > p[1]) {
            let x = a[0] + (p[1] - a[1]) / (b[1] - a[1]) * (b[0] - a[0]);
            if p[0] < x {
                inside = !inside;
            }
        }
        j = i;
    }
    inside
}

/// Keeps the part of a convex polygon with `n · p <= c`.
pub fn clip_halfplane(poly: &[Point], n: Point, c: f64) -> Vec<Point> {
    let side = |p: Point| n[0] * p[0] + n[1] * p[1] - c;
    let mut out = Vec::with_capacity(poly.len() + 1);
    let len = poly.len();
    for i in 0..len {
        let (p, q) = (poly[i], poly[(i + 1) % len]);
        let (sp, sq) = (side(p), side(q));
        if sp <= 0.0 {
            out.push(p);
        }
        if (sp < 0.0 && sq > 0.0) || (sp > 0.0 && sq < 0.0) {
            let t = sp / (sp - sq);
            out.push([p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])]);
        }
    }
    out
}

/// Drops consecutive vertices closer than `tol` (including across the seam).
pub fn dedup_ring(ring: &mut Vec<Point>, tol: f64) {
    ring.dedup_by(|a, b| (a[0] - b[0]).hypot(a[1] - b[1]) <= tol);
    while ring.len() > 1 {
        let (f, l) = (ring[0], ring[ring.len() - 1]);
        if (f[0] - l[0]).hypot(f[1] - l[1]) <= tol {
            ring.pop();
        } else {
            break;
        }
    }
}

/// Distance from `p` to the segment `ab`.
pub fn point_segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
    let len2 = dx * dx + dy * dy;
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / len2).clamp(0.0, 1.0)
    };
    (p[0] - a[0] - t * dx).hypot(p[1] - a[1] - t * dy)
}

/// Distance from `p` to the closed polyline through `ring`.
pub fn distance_to_ring(ring: &[Point], p: Point) -> f64 {
    let n = ring.len();
    (0..n).map(|i| point_segment_distance(p, ring[i], ring[(i + 1) % n])).fold(f64::INFINITY, f64::min)
}

/// Symmetric Hausdorff distance between two closed polylines, measured
/// from the vertices of each to the edges of the other.
pub fn hausdorff(a: &[Point], b: &[Point]) -> f64 {
    let one = |x: &[Point], y: &[Point]| {
        x.iter().map(|p| distance_to_ring(y, *p)).fold(0.0f64, f64::max)
    };
    one(a, b).max(one(b, a))
}

/// Edge index over a set of rings for fast even-odd membership queries.
///
/// Edges are bucketed by the horizontal bands they span, so one query only
/// visits the edges crossing its band.
#[derive(Debug, Clone)]
pub struct RingIndex {
    y0: f64,
    band: f64,
    bands: Vec<Vec<[Point; 2]>>,
}

impl RingIndex {
    pub fn new<'a>(rings: impl IntoIterator<Item = &'a [Point]>) -> Self {
        let mut edges: Vec<[Point; 2]> = Vec::new();
        for ring in rings {
            let n = ring.len();
            for i in 0..n {
                let (a, b) = (ring[i], ring[(i + 1) % n]);
                if a[1] != b[1] {
                    edges.push([a, b]);
                }
            }
        }
        let (lo, hi) = edges.iter().flatten().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), p| {
            (l.min(p[1]), h.max(p[1]))
        });
        if edges.is_empty() {
            return Self { y0: 0.0, band: 1.0, bands: Vec::new() };
        }
        let count = (edges.len() / 4).clamp(1, 4096);
        let band = ((hi - lo) / count as f64).max(f64::MIN_POSITIVE);
        let mut bands = vec![Vec::new(); count];
        for e in edges {
            let (ya, yb) = (e[0][1].min(e[1][1]), e[0][1].max(e[1][1]));
            let first = (((ya - lo) / band) as usize).min(count - 1);
            let last = (((yb - lo) / band) as usize).min(count - 1);
            for slot in &mut bands[first..=last] {
                slot.push(e);
            }
        }
        Self { y0: lo, band, bands }
    }

    /// Even-odd membership over all indexed rings.
    pub fn contains(&self, p: Point) -> bool {
        if self.bands.is_empty() {
            return false;
        }
        let k = (p[1] - self.y0) / self.band;
        if !(0.0..=self.bands.len() as f64).contains(&k) {
            return false;
        }
        let k = (k as usize).min(self.bands.len() - 1);
        let mut inside = false;
        for [a, b] in &self.bands[k] {
            if (a[1] > p[1]) != (b[1] > p[1]) {
                let x = a[0] + (p[1] - a[1]) / (b[1] - a[1]) * (b[0] - a[0]);
                if p[0] < x {
                    inside = !inside;
                }
            }
        }
        inside
    }
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;

    fn square() -> Vec<Point> {
        vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]
    }

    #[test]
    fn simple_and_convex() {
        assert!(is_simple(&square()) && is_convex(&square()));
        let bowtie = vec![[0.0, 0.0], [1.0, 1.0], [1.0, 0.0], [0.0, 1.0]];
        assert!(!is_simple(&bowtie) && !is_convex(&bowtie));
        let dart = vec![[0.0, 0.0], [2.0, 0.0], [1.0, 0.5], [1.0, 2.0]];
        assert!(is_simple(&dart) && !is_convex(&dart));
        assert!((signed_area(&square()) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn membership() {
        let sq = square();
        assert!(point_in_ring(&sq, [0.5, 0.5]));
        assert!(!point_in_ring(&sq, [1.5, 0.5]));
        let hole: Vec<Point> = vec![[0.25, 0.25], [0.75, 0.25], [0.75, 0.75], [0.25, 0.75]];
        let idx = RingIndex::new([sq.as_slice(), hole.as_slice()]);
        assert!(idx.contains([0.1, 0.5]));
        assert!(!idx.contains([0.5, 0.5]));
        assert!(!idx.contains([2.0, 0.5]));
        assert!(!idx.contains([0.5, -3.0]));
    }

    #[test]
    fn clipping() {
        let half = clip_halfplane(&square(), [1.0, 0.0], 0.5);
        assert!((signed_area(&half) - 0.5).abs() < 1e-15);
        assert!(clip_halfplane(&square(), [1.0, 0.0], -1.0).is_empty());
        let diag = clip_halfplane(&square(), [1.0, 1.0], 1.0);
        assert!((signed_area(&diag) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn distances() {
        assert!((point_segment_distance([0.5, 1.0], [0.0, 0.0], [1.0, 0.0]) - 1.0).abs() < 1e-15);
        let big: Vec<Point> = square().iter().map(|p| [p[0] * 2.0 - 0.5, p[1] * 2.0 - 0.5]).collect();
        assert!((hausdorff(&square(), &big) - 0.5f64.sqrt()).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn index_matches_direct_test(x in -1.5f64..1.5, y in -1.5f64..1.5, n in 3usize..40) {
            let ring: Vec<Point> = (0..n)
                .map(|i| {
                    let t = std::f64::consts::TAU * i as f64 / n as f64;
                    let r = 1.0 + 0.3 * (3.0 * t).sin();
                    [r * t.cos(), r * t.sin()]
                })
                .collect();
            let idx = RingIndex::new([ring.as_slice()]);
            prop_assert_eq!(idx.contains([x, y]), point_in_ring(&ring, [x, y]));
        }
    }
}
