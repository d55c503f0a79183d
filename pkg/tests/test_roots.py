"""Family constructors, sampling, verification, classification."""

import math

import numpy as np
import pytest

from cliffroot.algebra import (
    Multivector,
    Signature,
    exp,
    geometric_product,
    get_structure,
    grade_involution,
    signatures_with_dimension,
)
from cliffroot.mvio import parse_mv
from cliffroot.roots import (
    CASES,
    CaseSignatureError,
    DegenerateParamError,
    ExistenceRegionError,
    NotARootError,
    RejectionCapError,
    RootCase,
    assemble_groups,
    catalog_pairs,
    classify,
    construct,
    root_record,
    sample,
    split_groups,
    verify,
)


class TestVerify:
    def test_named_roots_residual_exactly_zero(self):
        named = [
            (Signature(0, 1), "e1"),
            (Signature(0, 1), "-e1"),
            (Signature(2, 0), "e12"),
            (Signature(2, 0), "-e12"),
            (Signature(0, 2), "e12"),
            (Signature(0, 2), "-e12"),
            (Signature(3, 0), "e123"),
            (Signature(3, 0), "-e123"),
            (Signature(1, 2), "e123"),
            (Signature(1, 2), "-e123"),
        ]
        for sig, text in named:
            report = verify(parse_mv(text, sig))
            assert report.is_root
            assert report.residual_norm == 0.0

    def test_pseudoscalar_squares_to_plus_one_elsewhere(self):
        for sig in (Signature(2, 1), Signature(0, 3)):
            report = verify(parse_mv("e123", sig))
            assert not report.is_root
            assert report.residual_norm == 2.0
            assert report.per_grade[0] == 2.0
            assert all(g == 0.0 for g in report.per_grade[1:])

    def test_vector_that_squares_to_plus_one(self):
        report = verify(parse_mv("e1", Signature(1, 0)))
        assert not report.is_root
        assert report.per_grade[0] == 2.0

    def test_scalar_half(self):
        report = verify(parse_mv("0.5", Signature(0, 1)))
        assert not report.is_root

    def test_bad_tol(self):
        with pytest.raises(ValueError):
            verify(parse_mv("e1", Signature(0, 1)), tol=0.0)


class TestGroups:
    def test_split_assemble_round_trip(self, rng):
        for sig in (Signature(0, 1), Signature(1, 1), Signature(2, 1), Signature(1, 3)):
            a = Multivector(sig, rng.uniform(-3, 3, sig.dim))
            groups = split_groups(a)
            assert assemble_groups(sig, **groups) == a

    def test_cyclic_orientation(self):
        sig = Signature(3, 0)
        a = assemble_groups(sig, c=[0.0, 5.0, 0.0])
        assert a.coeffs[0b101] == -5.0  # c2 rides on e31 = -e13
        assert split_groups(a)["c"][1] == 5.0

    def test_e4_split_masks(self):
        sig = Signature(1, 3)
        a = assemble_groups(sig, alpha_p=2.0, b_p=[1, 0, 0], c_p=[0, 3, 0], beta_p=4.0)
        assert a.coeffs[0b1000] == 2.0
        assert a.coeffs[0b1001] == 1.0
        assert a.coeffs[0b1101] == -3.0  # c2' on e314 = -e134
        assert a.coeffs[0b1111] == 4.0


class TestConstruct:
    def test_n1(self):
        sig = Signature(0, 1)
        assert construct(RootCase.N1_NEG, sig, {"sigma": 1.0}) == parse_mv("e1", sig)
        assert construct(RootCase.N1_NEG, sig, {"sigma": -1.0}) == parse_mv("-e1", sig)
        with pytest.raises(CaseSignatureError):
            construct(RootCase.N1_NEG, Signature(1, 0), {"sigma": 1.0})

    def test_n2_pure_bivector(self):
        sig = Signature(2, 0)
        a = construct(RootCase.N2_A0, sig, {"b1": 0.0, "b2": 0.0, "sigma": 1.0})
        assert a == parse_mv("e12", sig)

    def test_n2_with_vector_part(self):
        sig = Signature(2, 0)
        a = construct(RootCase.N2_A0, sig, {"b1": 1.0, "b2": 0.0, "sigma": 1.0})
        assert a.allclose(parse_mv("e1", sig) + parse_mv("e12", sig) * math.sqrt(2.0), 1e-12)
        assert verify(a).is_root

    def test_n2_existence_region(self):
        with pytest.raises(ExistenceRegionError):
            construct(RootCase.N2_A0, Signature(0, 2), {"b1": 2.0, "b2": 0.0, "sigma": 1.0})

    def test_n3_pseudoscalar_gate(self):
        for sig in signatures_with_dimension(3):
            admissible = sig in (Signature(3, 0), Signature(1, 2))
            assert CASES[RootCase.N3_PSEUDO].applies(sig) == admissible
            if admissible:
                a = construct(RootCase.N3_PSEUDO, sig, {"sigma": -1.0})
                assert a == parse_mv("-e123", sig)
            else:
                with pytest.raises(CaseSignatureError):
                    construct(RootCase.N3_PSEUDO, sig, {"sigma": 1.0})

    def test_n3_quadric_radius(self):
        # |c| = sqrt(1 + b^2) in Cl(3,0)
        sig = Signature(3, 0)
        b = np.array([0.6, -0.2, 0.3])
        a = construct(RootCase.N3_A0B0, sig, {"b": b, "c": [1.0, 2.0, 0.5], "sigma": 1.0})
        groups = split_groups(a)
        assert verify(a, 1e-12).is_root
        c_norm = np.linalg.norm(groups["c"])
        assert c_norm == pytest.approx(math.sqrt(1.0 + np.dot(b, b)), abs=1e-12)
        assert np.dot(groups["b"], groups["c"]) == pytest.approx(0.0, abs=1e-12)

    def test_n3_degenerate_seed(self):
        sig = Signature(3, 0)
        with pytest.raises(DegenerateParamError):
            construct(RootCase.N3_A0B0, sig,
                      {"b": [1.0, 0, 0], "c": [2.0, 0, 0], "sigma": 1.0})

    def test_n4_dependent_groups_follow_constraints(self):
        sig = Signature(1, 3)
        params = {"alpha_p": 0.7, "beta": 0.3, "beta_p": -0.2,
                  "b": np.array([0.4, 0.1, -0.5]), "b_p": np.array([0.2, -0.3, 0.6])}
        a = construct(RootCase.N4_A0_APN0, sig, params)
        assert verify(a, 1e-12).is_root
        g = split_groups(a)
        # c = (1/alpha') b' ^ b survives the final rescale as a relation
        lam = g["alpha_p"] / params["alpha_p"]
        assert np.allclose(g["b"], lam * params["b"], atol=1e-12)
        assert np.allclose(g["c"], np.cross(g["b_p"], g["b"]) / g["alpha_p"], atol=1e-12)

    def test_n4_nonzero_requirements(self):
        sig = Signature(2, 2)
        with pytest.raises(DegenerateParamError):
            construct(RootCase.N4_A0_APN0, sig,
                      {"alpha_p": 0.0, "beta": 0.1, "beta_p": 0.1,
                       "b": [1, 0, 0], "b_p": [0, 1, 0]})
        with pytest.raises(DegenerateParamError):
            construct(RootCase.N4_Z_BPN0_BN0_BE0, sig,
                      {"b": [0.0, 0.0, 0.0], "gamma": 1.0,
                       "c": [1, 0, 0], "c_p": [0, 1, 0]})

    def test_n4_infeasible_case_in_cl04(self):
        sig = Signature(0, 4)
        assert not CASES[RootCase.N4_Z_BP0_BN0].applies(sig)
        with pytest.raises(CaseSignatureError):
            construct(RootCase.N4_Z_BP0_BN0, sig,
                      {"beta": 1.0, "beta_p": 0.0, "c_p": [0, 0, 0]})

    def test_param_validation(self):
        with pytest.raises(ValueError, match="missing"):
            construct(RootCase.N2_A0, Signature(2, 0), {"b1": 0.0})
        with pytest.raises(ValueError, match="unknown"):
            construct(RootCase.N1_NEG, Signature(0, 1), {"sigma": 1.0, "junk": 2})
        with pytest.raises(ValueError, match=r"\+1 or -1"):
            construct(RootCase.N1_NEG, Signature(0, 1), {"sigma": 0.5})


class TestCatalog:
    def test_pair_count(self):
        pairs = catalog_pairs()
        assert len(pairs) == 49
        by_n = {}
        for case, sig in pairs:
            by_n[sig.n] = by_n.get(sig.n, 0) + 1
        # 1 + 3 + (4 + 2) + (8*5 - 1)
        assert by_n == {1: 1, 2: 3, 3: 6, 4: 39}

    def test_sampling_sweep(self, rng):
        for case, sig in catalog_pairs():
            for k in range(25):
                a = sample(case, sig, rng_seed=rng)
                report = verify(a, 1e-9)
                assert report.is_root, (case, sig, report.residual_norm)

    def test_sampling_determinism(self):
        for case, sig in [(RootCase.N3_A0B0, Signature(0, 3)),
                          (RootCase.N4_A0_APN0, Signature(2, 2))]:
            a = sample(case, sig, rng_seed=42)
            b = sample(case, sig, rng_seed=42)
            assert a == b

    def test_n1_sampling_hits_both_signs(self):
        sig = Signature(0, 1)
        seen = {sample(RootCase.N1_NEG, sig, rng_seed=s).coeffs[1] for s in range(20)}
        assert seen == {1.0, -1.0}

    def test_rejection_cap_on_thin_region(self):
        # Cl(0,2) at scale 10: acceptance is about (pi/4)/100
        with pytest.raises(RejectionCapError):
            sample(RootCase.N2_A0, Signature(0, 2), rng_seed=0, scale=1e6)

    def test_sample_rejects_bad_scale(self):
        with pytest.raises(ValueError):
            sample(RootCase.N1_NEG, Signature(0, 1), rng_seed=0, scale=0.0)


class TestClassify:
    def test_named_examples(self):
        case, params = classify(parse_mv("e123", Signature(3, 0)))
        assert case is RootCase.N3_PSEUDO and params["sigma"] == 1.0
        case, params = classify(parse_mv("e12", Signature(2, 0)))
        assert case is RootCase.N2_A0
        assert params["b1"] == 0.0 and params["b2"] == 0.0 and params["sigma"] == 1.0
        case, params = classify(parse_mv("-e1", Signature(0, 1)))
        assert case is RootCase.N1_NEG and params["sigma"] == -1.0

    def test_not_a_root(self):
        with pytest.raises(NotARootError):
            classify(parse_mv("e1", Signature(1, 0)))

    def test_round_trip_reconstruction(self, rng):
        # classify returns parameters construct() accepts, landing on the
        # same element
        for case, sig in catalog_pairs():
            for k in range(10):
                a = sample(case, sig, rng_seed=rng)
                got_case, params = classify(a)
                assert got_case is case
                rebuilt = construct(got_case, sig, params)
                assert a.allclose(rebuilt, 1e-8), (case, sig)

    def test_boundary_prefers_more_specific_case(self):
        # a pure bivector root of the b' = gamma b family with gamma -> 0
        # pattern: here b' = 0 exactly, so the b' = 0 branch owns it
        sig = Signature(4, 0)
        a = construct(RootCase.N4_Z_BP0_B0, sig,
                      {"b": [0.0, 0, 0], "c": [1.0, 0, 0], "c_p": [0.0, 0, 0]})
        case, _ = classify(a)
        assert case is RootCase.N4_Z_BP0_B0

    def test_unsupported_dimension(self):
        sig = Signature(5, 0)
        a = Multivector.blade(sig, 0b11000)  # e45, squares to -1? e4 e5 both +1
        if verify(a).is_root:
            with pytest.raises(Exception):
                classify(a)


class TestSymmetries:
    def test_grade_involution_and_sign(self, rng):
        for case, sig in catalog_pairs():
            a = sample(case, sig, rng_seed=rng)
            assert verify(grade_involution(a), 1e-9).is_root
            assert verify(-a, 1e-9).is_root

    def test_rotor_conjugation(self, rng):
        for case, sig in catalog_pairs():
            a = sample(case, sig, rng_seed=rng)
            st = get_structure(sig)
            bcoef = np.where(st.grades == 2, rng.uniform(-1, 1, sig.dim), 0.0)
            biv = Multivector(sig, bcoef)
            biv = biv * (0.75 / max(biv.norm(), 1e-12))
            phi = float(rng.uniform(-math.pi, math.pi))
            rot = exp(biv * phi)
            rot_inv = exp(biv * (-phi))
            conj = geometric_product(geometric_product(rot_inv, a), rot)
            assert verify(conj, 1e-8).is_root

    def test_reverse_of_root_is_root_times_minus_one_grade_pattern(self, rng):
        # not required in general; but A root => A^-1 = -A is a root
        for case, sig in catalog_pairs()[:10]:
            a = sample(case, sig, rng_seed=rng)
            inv = -a
            assert geometric_product(a, inv).allclose(
                Multivector.scalar(sig, 1.0), 1e-9)


class TestRootRecord:
    def test_record_fields(self):
        a = parse_mv("e123", Signature(3, 0))
        record = root_record(a)
        assert list(record.keys()) == ["signature", "coeffs", "residual", "case", "params"]
        assert record["signature"] == [3, 0]
        assert record["case"] == "N3_PSEUDO"
        assert record["params"] == {"sigma": 1.0}
        assert record["residual"] == 0.0

    def test_non_root_record(self):
        record = root_record(parse_mv("e1", Signature(1, 0)))
        assert record["case"] is None
        assert record["params"] is None
        assert record["residual"] == 2.0
