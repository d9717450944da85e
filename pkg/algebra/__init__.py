"""기하대수 커널 모듈"""

from algebra.multivector import (
    Bivector,
    Multivector,
    Quaternion,
    Vector3,
    batch_gp,
    commutator,
    cross,
    dot,
    dual,
    gp,
    grade,
    inner,
    inverse,
    mu,
    norm,
    reverse,
    wedge,
)
from algebra.rotors import bivector_identity, rotor_compose, rotor_exp, transport

__all__ = [
    "Bivector",
    "Multivector",
    "Quaternion",
    "Vector3",
    "batch_gp",
    "bivector_identity",
    "commutator",
    "cross",
    "dot",
    "dual",
    "gp",
    "grade",
    "inner",
    "inverse",
    "mu",
    "norm",
    "reverse",
    "rotor_compose",
    "rotor_exp",
    "transport",
    "wedge",
]
