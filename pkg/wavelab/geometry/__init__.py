from wavelab.geometry.export import write_point_cloud, write_wireframe
from wavelab.geometry.foliation import foliation_check, leaf_parameters
from wavelab.geometry.parametrization import (
    region_map,
    region_map_array,
    region_map_determinant,
    region_map_inverse,
    region_map_inverse_array,
    region_map_jacobian,
)
from wavelab.geometry.report import geometry_report, oracle_gap
from wavelab.geometry.surfaces import (
    Curvatures,
    FundamentalForms,
    SurfacePatch,
    curvatures,
    finite_difference_forms,
    fundamental_forms,
    leaf,
    log_relation_residual,
    phi_second_form,
    phi_surface,
    plane_patch,
    printed_phi_second_form,
    sigma_surface,
    sphere_octant,
)

__all__ = [
    "Curvatures",
    "FundamentalForms",
    "SurfacePatch",
    "curvatures",
    "finite_difference_forms",
    "foliation_check",
    "fundamental_forms",
    "geometry_report",
    "leaf",
    "leaf_parameters",
    "log_relation_residual",
    "oracle_gap",
    "phi_second_form",
    "phi_surface",
    "plane_patch",
    "printed_phi_second_form",
    "region_map",
    "region_map_array",
    "region_map_determinant",
    "region_map_inverse",
    "region_map_inverse_array",
    "region_map_jacobian",
    "sigma_surface",
    "sphere_octant",
    "write_point_cloud",
    "write_wireframe",
]
