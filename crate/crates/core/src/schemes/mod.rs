//! Desk-scale scheme models and their points.

mod model;
mod mpoly;

pub use model::{
    affine_line, affine_plane, default_affine_curves, default_affine_plane, default_proj_plane,
    default_projective_curves, disjoint_union, line, parse_place, parse_scheme, proj_line, proj_plane, punctured_line,
    scheme_from_json, spec, ClosedPoint, Curve, CurveDecl, FiberPoint, PointId, PointRef, SchemeKind, SchemeModel,
};
pub use mpoly::MPoly;
