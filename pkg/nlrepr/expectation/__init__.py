from .axioms import AxiomCheck, AxiomReport, Status, axiom_suite
from .drivers import DriverForm, DriverSpec
from .operator import (
    Certificate,
    NonlinearExpectation,
    OperatorSpec,
    Variant,
    condexp,
    one_step,
    validate_operator,
)

__all__ = [
    "AxiomCheck",
    "AxiomReport",
    "Certificate",
    "DriverForm",
    "DriverSpec",
    "NonlinearExpectation",
    "OperatorSpec",
    "Status",
    "Variant",
    "axiom_suite",
    "condexp",
    "one_step",
    "validate_operator",
]
