"""Sign detection for Hecke eigenvalues of level-one cusp forms.

Exact modular-forms arithmetic (integer q-expansions, Miller basis, Hecke
operators, certified eigenvalues), the Chebyshev peak minorant and its
Sato-Tate expansion, harmonic Petersson weights, and the detector that
localizes all small-prime eigenvalue angles near zero.
"""

from .minorant import (MinorantError, MinorantPolynomial, certification_report,
                       l2_lower_bounds, minorant_coeffs, minorant_eval,
                       verify_peak_decay)
from .sato_tate import (ChebyshevExpansion, SatoTateMeasure, cheb_X,
                        expansion_dump, g_eval)
from .qseries import IntegralityError, QSeries, delta_form, eisenstein, eta_product_delta
from .modforms import (DegenerateEigenvalues, Eigenform, ModformError,
                       SignRecord, SignStatistics, dim_cusp_forms, eigenforms,
                       get_power_cache, hecke_matrix, miller_basis,
                       sign_statistics, theta_angle)
from .petersson import (HarmonicWeights, PeterssonError,
                        harmonic_weight_from_norm, lemma22_decay_scan,
                        petersson_norm_quadrature, weights_by_linear_solve)
from .detector import (DetectorError, DetectorParams, detector_G,
                       expansion_identity_check, in_set_A, manual_params,
                       params_from_weight, sign_propagation_check,
                       weighted_average_report)

__version__ = "0.1.0"

__all__ = [
    "MinorantError", "MinorantPolynomial", "certification_report",
    "l2_lower_bounds", "minorant_coeffs", "minorant_eval", "verify_peak_decay",
    "ChebyshevExpansion", "SatoTateMeasure", "cheb_X", "expansion_dump",
    "g_eval",
    "IntegralityError", "QSeries", "delta_form", "eisenstein",
    "eta_product_delta",
    "DegenerateEigenvalues", "Eigenform", "ModformError", "SignRecord",
    "SignStatistics", "dim_cusp_forms", "eigenforms", "get_power_cache",
    "hecke_matrix", "miller_basis", "sign_statistics", "theta_angle",
    "HarmonicWeights", "PeterssonError", "harmonic_weight_from_norm",
    "lemma22_decay_scan", "petersson_norm_quadrature",
    "weights_by_linear_solve",
    "DetectorError", "DetectorParams", "detector_G",
    "expansion_identity_check", "in_set_A", "manual_params",
    "params_from_weight", "sign_propagation_check", "weighted_average_report",
]
