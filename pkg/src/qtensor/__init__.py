"""Quadratic tensors over products of elementary abelian groups and
free-fermion modes: coefficient-level storage, contraction, and reduction,
with a brute-force dense oracle and constructors for stabilizer codes,
Clifford/Gaussian unitaries, and matchgate tensors."""

from .groups import (
    ElementaryGroup,
    GroupProduct,
    R,
    T,
    Z,
    Z1,
    Zk,
    parse_group,
    parse_product,
)
from .scalar import Scalar, mod1, scalar_eq, scalar_eq_mod1
from .coeff import Hom2Coeff, HomCoeff, QuadCoeff
from .functions import LinearFnData, QuadraticFnData, hom_data
from .engine import (
    QTensorData,
    gauss_sum,
    reduce_full,
    reduce_invertible,
    reduce_real,
    reduce_zero,
    self_contract,
    tensor_product,
)
from .dense import DenseTensor, dense_compare, dense_contract, grid_materialize, materialize
from .fermion import FermionTensorData, fermion_contract, fermion_entry, pfaffian
from .higher import OrderFnData, OrderTensorData, hierarchy_level_diagonal, is_order_i
from .stab import CliffordData, PauliLabel, StabTableau

__all__ = [
    "ElementaryGroup",
    "GroupProduct",
    "Zk",
    "Z",
    "T",
    "R",
    "Z1",
    "parse_group",
    "parse_product",
    "Scalar",
    "mod1",
    "scalar_eq",
    "scalar_eq_mod1",
    "HomCoeff",
    "Hom2Coeff",
    "QuadCoeff",
    "LinearFnData",
    "QuadraticFnData",
    "hom_data",
    "QTensorData",
    "tensor_product",
    "self_contract",
    "reduce_full",
    "reduce_invertible",
    "reduce_real",
    "reduce_zero",
    "gauss_sum",
    "DenseTensor",
    "materialize",
    "dense_contract",
    "dense_compare",
    "grid_materialize",
    "FermionTensorData",
    "fermion_entry",
    "fermion_contract",
    "pfaffian",
    "OrderFnData",
    "OrderTensorData",
    "is_order_i",
    "hierarchy_level_diagonal",
    "PauliLabel",
    "StabTableau",
    "CliffordData",
]
