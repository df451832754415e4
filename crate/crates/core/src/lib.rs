//! Geometry of convex domains in the real projective plane: projective
//! primitives and flag invariants, bounded convex domains with chord
//! queries, the Hilbert metric with its Busemann measure, and the
//! coordinate dictionary for quadrilaterals inscribed in
//! quadrilaterals together with their degenerations.

pub mod convex;
pub mod error;
pub mod fock_goncharov;
pub mod hilbert;
pub mod projective;

/// Default absolute tolerance for incidence and degeneracy checks on
/// unit-normalized homogeneous data.
pub const DEFAULT_TOL: f64 = 1e-10;

pub use convex::{
    affine_image, inscribe_check, Chord, ConvexDomain, ConvexPolygonDomain, EllipseDomain, Vec2,
};
pub use error::{GeomError, Result, Stratum};
pub use fock_goncharov::{
    build_configuration, central_q, classify_degeneration, d_from_wz, m_from_y, q_graph,
    reflect_params, slope_b_from_t, wz_from_d, y_invariant, AreaBehavior, Classification,
    DegenerationCase, LimitSymbol, PredictedLimit, QuadConfiguration, QuadParams, RatioLimit,
    TwistBulge,
};
pub use hilbert::{
    busemann_density, comparison_integral_triangle, dilog, finsler_norm, hilbert_distance,
    region_area, sector_bound, AreaResult, QuadratureConfig,
};
pub use projective::{
    cross_ratio_collinear, cross_ratio_concurrent, join, map_four_points, meet,
    normalize_quadrilateral, triple_ratio, Flag, ProjectiveLine, ProjectiveMap, ProjectivePoint,
};
