"""Exact invariant theory of Killing tensors on the Minkowski plane and of binary forms."""

__version__ = "0.1.0"

from .ratpoly import Poly, VarTable, parse, render  # noqa: E402
from .killing_space import (ParamScheme, SymTensor, VectorFieldM, dtt_dimension,  # noqa: E402
                            general_element, killing_basis, killing_check, sym_product_basis)
from .forms import BinaryForm, general_form  # noqa: E402
from .derivations import (Derivation, cayley_generators, commutator,  # noqa: E402
                          extended_generators, isometry_generators, lie_derivative, mst_project)
from .closed_form import closed_form_generators  # noqa: E402
from .invariant_solver import (InvariantReport, covariant_kernel, functional_independence,  # noqa: E402
                               fundamental_search, kernel_at_degree, orbit_dimension)
from .group_action import (IsometryElem, UnimodularElem, isometry_apply,  # noqa: E402
                           param_transform, random_group_element, sl2_apply, verify_invariance)
