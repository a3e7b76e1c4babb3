//! Fixed workloads for the criterion benches.

use backbend_core::{BackbendSpec, ClusterQuery, Region, Vertex, Window};

/// Origin cluster on a half-space window `[-w, w]^{d-1} × [0, 2w]`.
pub fn origin_query(d: usize, half_width: i64, spec: &str) -> ClusterQuery {
    let window = Window::centered(d, half_width, 2 * half_width).expect("valid window");
    let spec: BackbendSpec = spec.parse().expect("valid spec");
    ClusterQuery::new(Region::HalfSpace, window, spec, vec![Vertex::origin(d).expect("valid dim")])
        .expect("valid query")
}

/// Face-to-face crossing query on a thin slab.
pub fn slab_query(half_width: i64, thickness: i64) -> ClusterQuery {
    let window = Window::new(&[-half_width, -half_width, 0], &[half_width, half_width, thickness]).expect("valid window");
    let sources = window.vertices().into_iter().filter(|v| v.coords()[0] <= -half_width + 1).collect();
    ClusterQuery::new(Region::Slab { t: thickness }, window, BackbendSpec::unoriented(), sources).expect("valid query")
}
