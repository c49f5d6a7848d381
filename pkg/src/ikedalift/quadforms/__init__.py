"""Binary quadratic forms and half-integral symmetric matrices."""

from .matrices import (
    HalfIntMatrix,
    classes_up_to,
    content,
    discriminant_data,
    enumerate_classes,
    isometric,
)
from .binary import (
    BinaryQF,
    binary_class_set,
    gamma0_classes,
    gamma0_equivalence,
    genus_character,
    lemma36_map,
    sl2_classes,
    sl2_equivalence,
)
