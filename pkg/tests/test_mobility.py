import pytest
from hypothesis import given
from hypothesis import strategies as st

from armkit.arm_model import sample_arm
from armkit.errors import InvalidParameterError
from armkit.mobility import (MechanismTopology, grubler_dof, reference_topology,
                             topology_from_arm)


@pytest.mark.parametrize("lam, n, freedoms, expected", [
    (3, 4, [1, 1, 1, 1], 1),  # four-bar linkage
    (6, 7, [1] * 6, 6),  # serial 6R arm
    (6, 5, [6] * 5, 24),  # reference arm's stated parameters
    (3, 2, [], 3),  # one free body in the plane
    (3, 4, [1] * 6, -3),  # over-constrained; returned as-is
])
def test_grubler_values(lam, n, freedoms, expected):
    assert grubler_dof(MechanismTopology(lam, n, freedoms)) == expected


def test_reference_topology():
    topo = reference_topology()
    assert (topo.lam, topo.n_links, topo.k) == (6, 5, 5)
    assert grubler_dof(topo) == 24


def test_from_sample_arm():
    topo = topology_from_arm(sample_arm())
    assert topo.n_links == 7
    assert topo.joint_freedoms == (3, 2, 1, 3, 1, 1)
    # 36 - (3 + 4 + 5 + 3 + 5 + 5)
    assert grubler_dof(topo) == 11


@pytest.mark.parametrize("args", [(4, 3, [1]), (6, 1, [1]), (3, 3, [4]), (6, 3, [0])])
def test_invalid_topologies(args):
    with pytest.raises(InvalidParameterError):
        MechanismTopology(*args)


topologies = st.sampled_from([3, 6]).flatmap(lambda lam: st.builds(
    MechanismTopology,
    st.just(lam),
    st.integers(2, 40),
    st.lists(st.integers(1, lam), max_size=30),
))


@given(topologies)
def test_equivalent_form(topo):
    alt = topo.lam * (topo.n_links - 1 - topo.k) + sum(topo.joint_freedoms)
    assert grubler_dof(topo) == alt


@given(topologies)
def test_fully_free_joint_adds_nothing(topo):
    extended = MechanismTopology(topo.lam, topo.n_links, topo.joint_freedoms + (topo.lam,))
    assert grubler_dof(extended) == grubler_dof(topo)


@given(st.integers(1, 30), st.sampled_from([3, 6]))
def test_serial_chain_of_single_freedom_joints(k, lam):
    assert grubler_dof(MechanismTopology(lam, k + 1, [1] * k)) == k
