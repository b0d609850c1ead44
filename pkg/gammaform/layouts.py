# layouts.py

from __future__ import annotations

from functools import lru_cache

from .models import FieldLayout, PhysicsId, make_layout

# E-block order per physics; the gradient index always comes first.
_BLOCKS = {
    PhysicsId.GRAD2_ELECTROSTATICS: (3, [
        ("grad_V", (3,)),
        ("hess_V", (3, 3)),
    ], 1),
    PhysicsId.GRAD2_ELASTICITY: (3, [
        ("grad_u", (3, 3)),
        ("hess_u", (3, 3, 3)),
    ], 3),
    PhysicsId.KIRCHHOFF_LOVE: (2, [
        ("neg_hess_v", (2, 2)),
        ("dv_dt", (1,)),
    ], 1),
    PhysicsId.MINDLIN: (2, [
        ("grad_psi_dot", (2, 2)),
        ("shear_rate", (2,)),
        ("psi_dot", (2,)),
        ("w_ddot", (1,)),
    ], 3),
    PhysicsId.COSSERAT: (3, [
        ("grad_u", (3, 3)),
        ("grad_v", (3, 3)),
        ("dv_dt", (3,)),
        ("grad_theta", (3, 3)),
        ("dtheta_dt", (3,)),
        ("theta", (3,)),
    ], 6),
    PhysicsId.FLEXOELECTRIC: (3, [
        ("neg_grad_V", (3,)),
        ("neg_hess_V", (3, 3)),
        ("grad_u", (3, 3)),
        ("hess_u", (3, 3, 3)),
    ], 4),
    PhysicsId.FLEXOMAGNETOELECTRIC: (3, [
        ("neg_grad_V", (3,)),
        ("neg_hess_V", (3, 3)),
        ("neg_grad_psi", (3,)),
        ("neg_hess_psi", (3, 3)),
        ("grad_u", (3, 3)),
        ("hess_u", (3, 3, 3)),
    ], 5),
    PhysicsId.SEEPAGE: (3, [
        ("dgrad_P_dt", (3,)),
        ("grad_P", (3,)),
        ("dP_dt", (1,)),
        ("P", (1,)),
    ], 1),
    PhysicsId.MHD_PERTURBED: (3, [
        ("grad_b", (3, 3)),
        ("db_dt", (3,)),
        ("b", (3,)),
        ("grad_div_v", (3,)),
        ("grad_v", (3, 3)),
        ("dv_dt", (3,)),
        ("v", (3,)),
    ], 6),
}

# (first-gradient block, second-gradient block) pairs whose total flux is
# first - div(second); used for the static multipole physics.
FLUX_PAIRS = {
    PhysicsId.GRAD2_ELECTROSTATICS: [("grad_V", "hess_V")],
    PhysicsId.GRAD2_ELASTICITY: [("grad_u", "hess_u")],
    PhysicsId.FLEXOELECTRIC: [("neg_grad_V", "neg_hess_V"), ("grad_u", "hess_u")],
    PhysicsId.FLEXOMAGNETOELECTRIC: [
        ("neg_grad_V", "neg_hess_V"),
        ("neg_grad_psi", "neg_hess_psi"),
        ("grad_u", "hess_u"),
    ],
}


@lru_cache(maxsize=None)
def layout_of(physics) -> FieldLayout:
    """Field layout (block names, shapes, N and p) of one physics."""
    physics = PhysicsId.parse(physics)
    dim, blocks, potentials = _BLOCKS[physics]
    return make_layout(physics, dim, blocks, potentials)


def all_physics() -> list:
    return list(PhysicsId)
