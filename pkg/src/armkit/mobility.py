"""Grübler/Kutzbach mobility count."""

from dataclasses import dataclass

from .arm_model import joint_freedoms
from .errors import InvalidParameterError

PLANAR = 3
SPATIAL = 6

# the reference arm's stated parameters; the formula gives 24 where ~6 is claimed
REFERENCE_TOPOLOGY_ARGS = dict(lam=6, n_links=5, joint_freedoms=(6, 6, 6, 6, 6))
REFERENCE_CLAIMED_DOF = 6


@dataclass(frozen=True)
class MechanismTopology:
    lam: int
    n_links: int
    joint_freedoms: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "joint_freedoms", tuple(int(f) for f in self.joint_freedoms))
        if self.lam not in (PLANAR, SPATIAL):
            raise InvalidParameterError("lambda", f"must be 3 or 6, got {self.lam}")
        if self.n_links < 2:
            raise InvalidParameterError("links", f"need at least 2 links, got {self.n_links}")
        for i, f in enumerate(self.joint_freedoms):
            if not 1 <= f <= self.lam:
                raise InvalidParameterError(
                    f"freedoms[{i}]", f"must lie in [1, {self.lam}], got {f}")

    @property
    def k(self):
        return len(self.joint_freedoms)


def grubler_dof(topology):
    """lam*(n-1) - sum(lam - f_i). Over-constrained mechanisms come back negative."""
    lam = topology.lam
    return lam * (topology.n_links - 1) - sum(lam - f for f in topology.joint_freedoms)


def topology_from_arm(arm, lam=SPATIAL):
    """Serial chain: ground plus one link per joint."""
    return MechanismTopology(
        lam=lam,
        n_links=len(arm.joints) + 1,
        joint_freedoms=tuple(joint_freedoms(j.kind) for j in arm.joints),
    )


def reference_topology():
    return MechanismTopology(**REFERENCE_TOPOLOGY_ARGS)
