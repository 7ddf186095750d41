"""Entropic uncertainty bounds for multiple measurements on multipartite qubit states."""

from .bounds import (
    CertificationSummary,
    EurReport,
    GeurReport,
    KeyRateReport,
    berta_bound,
    certify,
    geur_report,
    key_rate_report,
    q_mu,
    theorem1_report,
)
from .measure import MeasurementAssignment, ProjectiveMeasurement, pauli
from .qla import SystemLayout
from .states import DensityMatrix, bell_phi_plus, ghz, ghz4_theta, werner3

__version__ = "0.1.0"
