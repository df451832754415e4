use thiserror::Error;

/// Boundary strata of the parameter space of inscribed quadrilateral
/// configurations. A configuration degenerates onto one of these when
/// its defining points or lines collide.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Stratum {
    /// The inner quadrilateral collapses onto the vertex shared with
    /// the outer triangle at the origin corner.
    VertexA,
    /// Collapse onto the opposite outer vertex.
    VertexC,
    /// Collapse onto the corner point where the two outer edges meet.
    CornerAc,
    /// The inner edge lands on the outer edge through the origin corner.
    EdgeA,
    /// The inner edge lands on the other outer edge.
    EdgeC,
    /// Collapse onto the segment joining the two shared vertices.
    SegmentAc,
}

impl std::fmt::Display for Stratum {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Stratum::VertexA => "vertex A",
            Stratum::VertexC => "vertex C",
            Stratum::CornerAc => "corner a.c",
            Stratum::EdgeA => "edge a",
            Stratum::EdgeC => "edge c",
            Stratum::SegmentAc => "segment AC",
        };
        f.write_str(name)
    }
}

/// Errors produced by geometric constructions and numerical routines.
#[derive(Debug, Error)]
pub enum GeomError {
    /// Input is degenerate at the exact level: zero vectors, repeated
    /// points, collinear triples where a frame is required, and so on.
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    /// A precondition on the arguments fails (wrong range, points not
    /// collinear where required, non-convex polygon, ...).
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Parameters describe a configuration on (or across) a boundary
    /// stratum, where the construction is no longer an embedded
    /// quadrilateral.
    #[error("configuration on boundary stratum {stratum}: {detail}")]
    Boundary { stratum: Stratum, detail: String },

    /// Invalid run configuration (tolerances, node counts, ...).
    #[error("invalid configuration: {0}")]
    Configuration(String),

    /// An adaptive quadrature failed to reach its tolerance within the
    /// permitted depth/evaluation budget on a quantity that must
    /// converge.
    #[error("quadrature did not converge: {0}")]
    NonConverged(String),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, GeomError>;
