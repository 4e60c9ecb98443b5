import itertools
import random

import numpy as np
import pytest

from gammabench import fixtures
from gammabench.gamma import GammaModel
from gammabench.gauge import (
    AlternatingMap,
    GaugeTheory,
    GaussSpec,
    InvalidGaussSpecError,
    chessboard_2chain,
    classify,
    equivalent,
    gauge_invariant_generators,
    gauge_to_gamma_iso,
    local_gauss_from_2chain,
    tail_space_dimensions,
    valid_tail_maps,
)
from gammabench.opalg import product, sector_project, SparseState
from gammabench.torus import TorusSpec
from gammabench.z2core import BitVec, ChainComplex, LatticeError, OEdge, eulerian_circuit


def test_standard_gauss_properties(bigon):
    gt = GaugeTheory(bigon)
    ops = [gt.gauss_standard(BitVec.from_indices(2, [v])) for v in range(2)]
    for g_op in ops:
        assert (g_op * g_op).scalar() == 1 and g_op.is_hermitian()
    assert ops[0].commutes_with(ops[1]) == 0
    assert product(ops, gt.n) == gt.grading()  # no odd-fermion physical states


def test_deformed_global_product(multi3):
    gt = GaugeTheory(multi3)
    for alpha in (0, 1):
        spec = GaussSpec.deformed(multi3, 0, alpha)
        got = product(gt.gauss_ops(spec), gt.n)
        want = (gt.grading() * gt.u_op(gt.cc.zeta)).times_i(2 * alpha)
        assert got == want


def test_gauss_spec_validity():
    g = fixtures.bigon()
    with pytest.raises(InvalidGaussSpecError):
        # tail whose boundary hits its own vertex
        GaussSpec(g, (BitVec.from_indices(2, [0]), BitVec(2, 0)), BitVec(2, 0))


def test_deformed_requires_closed_tail(k4):
    with pytest.raises(InvalidGaussSpecError):
        GaussSpec.deformed(k4, 0, 0)  # odd degrees: the all-edges chain is not closed


def test_holonomy_identity(corpus):
    for name in ("bigon", "c4", "multi3", "octahedron"):
        g = corpus[name]
        gt = GaugeTheory(g)
        circ = eulerian_circuit(g)
        assert gt.holonomy(circ) == gt.u_op(g.walk_class(circ))
        for c in gt.cc.circuits:
            assert gt.holonomy(c) == gt.u_op(g.walk_class(c))


def test_charge_identity_on_physical_subspace(bigon, c4):
    # parity equals the electric star once the standard Gauss projectors act
    for g in (bigon, c4):
        gt = GaugeTheory(g)
        terms = [
            (gt.gauss_standard(BitVec.from_indices(g.nv, [v])), 1) for v in range(g.nv)
        ]
        proj = np.eye(2 ** gt.n, dtype=complex)
        for t, s in terms:
            proj = proj @ (np.eye(2 ** gt.n) + s * t.to_matrix()) / 2
        for v in range(g.nv):
            lhs = gt.parity(v).to_matrix() @ proj
            rhs = gt.w_op(g.coboundary_of_vertex(v)).to_matrix() @ proj
            assert np.allclose(lhs, rhs, atol=1e-12)


def test_relations_and_iso(bigon, c4):
    for g in (bigon, c4):
        gt = GaugeTheory(g)
        m = GammaModel(g)
        checks, summary = gauge_to_gamma_iso(gt, m)
        failures = [c.relation_id for c in checks if not c.ok]
        assert not failures, failures
        assert summary["physical_dim"] == summary["model_dim"]
        assert summary["generator_span"] == summary["centralizer_dim"]


def test_electric_chain_expansion(c4):
    gt = GaugeTheory(c4)
    gens = gauge_invariant_generators(gt)
    # any even chain expands in consecutive-edge pairs
    omega = BitVec.from_indices(4, [0, 2])
    word = gens.electric_chain(omega)
    assert word == gt.w_op(omega)
    with pytest.raises(ValueError):
        gens.electric_chain(BitVec.from_indices(4, [0]))  # odd chain


def test_classification_exhaustive_bigon(bigon):
    gt = GaugeTheory(bigon)
    specs = [
        GaussSpec(bigon, tails, BitVec(2, mu))
        for tails in valid_tail_maps(bigon)
        for mu in range(4)
    ]
    assert len(specs) == 16

    def brute(s1, s2):
        for th_bits in range(4):
            for s01 in range(2):
                smap = AlternatingMap.from_upper(2, {(0, 1): s01})
                theta = BitVec(2, th_bits)
                if all(
                    gt.apply_canonical(gt.gauss_op(s1, v), theta, smap)
                    == gt.gauss_op(s2, v)
                    for v in range(2)
                ):
                    return True
        return False

    for s1, s2 in itertools.product(specs, specs):
        same_class = classify(gt, s1).key() == classify(gt, s2).key()
        brute_eq = brute(s1, s2)
        witness_eq, _ = equivalent(gt, s1, s2)
        assert same_class == brute_eq == witness_eq
    assert len({classify(gt, s).key() for s in specs}) == 4


def test_classify_invariant_under_random_rewrites(c4):
    gt = GaugeTheory(c4)
    rng = random.Random(17)
    spec = GaussSpec.deformed(c4, 1, 1)
    base = classify(gt, spec).key()
    for _ in range(20):
        entries = {}
        for a in range(4):
            for b in range(a + 1, 4):
                entries[(a, b)] = rng.randrange(2)
        smap = AlternatingMap.from_upper(4, entries)
        theta = BitVec(4, rng.randrange(16))
        imgs = [gt.apply_canonical(gt.gauss_op(spec, v), theta, smap) for v in range(4)]
        # read the transformed spec back off the images
        tails = []
        for v, img in enumerate(imgs):
            link_z = img.z >> gt.nv
            tails.append(BitVec(gt.ne, link_z))
        new_alpha_word = product(imgs, gt.n)
        tau = spec.total_tail()
        resid = new_alpha_word * (gt.grading() * gt.u_op(tau)).inverse()
        assert (tau.bits, resid.sign_exponent()) == base


def test_equivalence_witness_shape(multi3):
    gt = GaugeTheory(multi3)
    s1 = GaussSpec.deformed(multi3, 0, 1)
    s2 = GaussSpec.deformed(multi3, 2, 1)
    same, wit = equivalent(gt, s1, s2)
    assert same and wit is not None
    theta, smap = wit
    for v in range(3):
        assert gt.apply_canonical(gt.gauss_op(s1, v), theta, smap) == gt.gauss_op(s2, v)


def test_inequivalent_alpha(multi3):
    gt = GaugeTheory(multi3)
    s1 = GaussSpec.deformed(multi3, 0, 0)
    s2 = GaussSpec.deformed(multi3, 0, 1)
    same, wit = equivalent(gt, s1, s2)
    assert not same and wit is None


def test_tail_space_dimensions(bigon, c4, multi3):
    for g in (bigon, c4, multi3):
        dims = tail_space_dimensions(g)
        assert dims["dim_valid"] == dims["formula_valid"]
        assert dims["dim_image"] == dims["formula_image"]
        assert dims["dim_quotient"] == dims["dim_cycles"]


def test_tail_space_formula_torus():
    g = fixtures.torus(3, 3)
    dims = tail_space_dimensions(g)
    assert dims["dim_quotient"] == 10
    assert dims["formula_valid"] - dims["formula_image"] == 10


def test_local_gauss_single_face(c4):
    xi = BitVec.from_indices(1, [0])
    spec = local_gauss_from_2chain(c4, xi)
    nonzero = [v for v in range(4) if not spec.t_map[v].is_zero()]
    assert len(nonzero) == 1
    assert spec.total_tail() == c4.walk_class(c4.face_circuit(0))


def test_chessboard_4x4_and_4x6():
    for sizes in [(4, 4), (4, 6)]:
        spec = TorusSpec(sizes)
        g = spec.build()
        xi = chessboard_2chain(g, spec)
        cc = ChainComplex(g)
        assert cc.boundary2.mul_vec(xi) == cc.zeta
        choice = {f: f % spec.nv for f in xi.indices()}  # base corner of each face
        gs = local_gauss_from_2chain(g, xi, choice)
        gt = GaugeTheory(g)
        cls = classify(gt, gs)
        assert cls.tau == cc.zeta
        # locality: every tail touches only the one face at its vertex
        for v in range(g.nv):
            tail = gs.t_map[v]
            assert tail.weight() in (0, 4)


def test_chessboard_closed_form_even_vertices():
    spec = TorusSpec((4, 4))
    g = spec.build()
    xi = chessboard_2chain(g, spec)
    choice = {f: f % spec.nv for f in xi.indices()}
    gs = local_gauss_from_2chain(g, xi, choice)
    for v in range(g.nv):
        if spec.vertex_parity(v) == 0:
            face = spec.face_index((0, 1), v)  # plaquette with base corner v
            assert gs.t_map[v] == g.walk_class(g.face_circuit(face))
        else:
            assert gs.t_map[v].is_zero()


def test_chessboard_rejects_odd():
    spec = TorusSpec((3, 3))
    g = spec.build()
    with pytest.raises(LatticeError):
        chessboard_2chain(g, spec)
    spec34 = TorusSpec((3, 4))
    with pytest.raises(LatticeError):
        chessboard_2chain(spec34.build(), spec34)
