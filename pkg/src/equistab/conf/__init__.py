"""Configuration spaces of G-manifolds: fixed-point components, their
product decomposition, homology assembly and stabilization."""
from .assembly import (CSGAssembler, InducedMap, RangeReport, geometric_module, homology_of_CSG,
                       homology_of_CSG_all, stability_range_check, stabilization_map, synthetic_table)
from .decomposition import (CSDecomposition, Stabilization, components_of_fixed_config, cs_decomposition,
                            is_realizable, stabilize_component)
from .descriptor import (HomologyTable, ManifoldDescriptor, StratumFlags, from_representation,
                         parse_descriptor, rho_model)
from .kunneth import kunneth, tensor, tor
from .oracle import Census, census_closed_form, discrete_config_oracle
from .h0 import H0Presentation, bredon_h0_presentation, h0_level_modules

__all__ = [
    "CSGAssembler", "InducedMap", "RangeReport", "geometric_module", "homology_of_CSG", "homology_of_CSG_all",
    "stability_range_check", "stabilization_map", "synthetic_table",
    "CSDecomposition", "Stabilization", "components_of_fixed_config", "cs_decomposition", "is_realizable",
    "stabilize_component",
    "HomologyTable", "ManifoldDescriptor", "StratumFlags", "from_representation", "parse_descriptor", "rho_model",
    "kunneth", "tensor", "tor",
    "Census", "census_closed_form", "discrete_config_oracle",
    "H0Presentation", "bredon_h0_presentation", "h0_level_modules",
]
