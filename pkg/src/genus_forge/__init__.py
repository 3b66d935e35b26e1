"""Exact characteristic-class, genus and elliptic-genus computations."""
from .cohomology import BundleContext, ChernForm, CohClass
from .elliptic import ell, ell_bundle, ell_theta, modular_coefficients
from .errors import GenusForgeError
from .genus import chi_y, chi_y_taylor_minus1, pluri_chi, signature_pluri
from .manifolds import ManifoldData, catalog, load_manifold, parse_spec, serialize_spec, symbolic_manifold
from .qforms import eisenstein, modular_membership, theta
from .series import Poly, QYSeries

__version__ = "0.1.0"
