"""Exact weight-multiplicity equidistribution over Galois coinvariant classes.

The pieces, bottom up:

* :mod:`.abelian`: integer matrices, Smith normal form, finitely generated
  abelian groups and their characters;
* :mod:`.rootdatum`: Cartan types, root data, positive roots, Weyl groups;
* :mod:`.galois`: Galois actions, coinvariants, ``pi_1`` and the group ``H``;
* :mod:`.charring`: sparse characters, the product formula for
  ``V_{4 m rho}`` and Freudenthal's recursion;
* :mod:`.equidist`: coset fractions ``S_{h,m}``, the averaging operator and
  parity.
"""

from .abelian import (
    AbHom,
    DualCharacter,
    FinGenAbGroup,
    IntMatrix,
    character_group,
    cokernel,
    hom_kernel,
    smith_normal_form,
)
from .charring import CharElement, char_mu_m, char_mul, coset_sums, dualize, freudenthal
from .equidist import (
    EquidistReport,
    StabilityOperator,
    build_stability_operator,
    char_sum,
    run_equidist,
    s_values,
    stable_average_simulation,
    transfer_parity,
)
from .errors import (
    GroupTooLarge,
    InvariantViolation,
    NotElliptic,
    ValidationError,
    WeylEquidistError,
)
from .galois import GaloisAction, coinvariants, compute_H, is_elliptic, pi1, pi1_coinvariants
from .rootdatum import (
    CartanType,
    RootDatum,
    build_root_datum,
    mu_m,
    positive_coroots,
    positive_roots,
    two_rho,
    weyl_dim,
    weyl_group_elements,
)
from .scenario import Scenario, load_scenario

__version__ = "0.1.0"
