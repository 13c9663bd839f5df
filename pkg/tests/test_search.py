import random

import pytest

from sdskit import equivalence, sds, search, zmod

from conftest import brute_difference_counts


class TestFeasibility:
    def test_239_q7(self):
        plans = search.feasibility(239, (119, 112, 106), 7)
        assert [(p.orbit_count, p.include_zero) for p in plans] == [
            (17, False),
            (16, False),
            (15, True),
        ]

    def test_107_infeasible(self):
        with pytest.raises(search.InfeasibleError) as exc:
            search.feasibility(107, (49, 48, 46), 53)
        assert len(exc.value.reasons) == 3

    def test_331_q11(self):
        plans = search.feasibility(331, (165, 155, 155, 155), 11)
        assert [(p.orbit_count, p.include_zero) for p in plans] == [
            (15, False),
            (14, True),
            (14, True),
            (14, True),
        ]

    def test_q_must_divide_v_minus_1(self):
        with pytest.raises(ValueError):
            search.feasibility(107, (49, 48, 46), 3)


class TestExpand:
    def test_v7_single_orbit(self):
        osys = zmod.orbit_system(7, 2)
        sel = search.OrbitSelection(osys, ((1,),))
        f = search.expand(sel)
        assert f.member_lists() == ((1, 2, 4),)

    def test_arbitrary_representative(self):
        osys = zmod.orbit_system(7, 2)
        # 4 names the same orbit as 1
        sel = search.OrbitSelection(osys, ((4,),))
        assert search.expand(sel).member_lists() == ((1, 2, 4),)

    def test_duplicate_orbit_rejected(self):
        osys = zmod.orbit_system(7, 2)
        sel = search.OrbitSelection(osys, ((1, 2),))
        with pytest.raises(ValueError):
            search.expand(sel)

    def test_catalog_family_sizes_and_lambda(self, entries):
        from sdskit import catalog

        e = catalog.entry_by_id(entries, "gs956-family1")
        assert e.family.sizes == (119, 112, 106)
        assert sds.verify_sds(e.family, 158).ok


class TestDifferenceTable:
    def test_v7_brute(self):
        osys = zmod.orbit_system(7, 2)
        tab = search.difference_table(osys)
        for i, oi in enumerate(osys.orbits):
            for j, oj in enumerate(osys.orbits):
                expected = [0] * 7
                for a in oi:
                    for b in oj:
                        if a != b:
                            expected[(a - b) % 7] += 1
                assert tab.counts[i][j] == expected

    def test_row_sum_invariant(self):
        osys = zmod.orbit_system(19, zmod.element_of_order(19, 3))
        tab = search.difference_table(osys)
        for i, oi in enumerate(osys.orbits):
            for j, oj in enumerate(osys.orbits):
                want = len(oi) * len(oj) - (len(oi) if i == j else 0)
                assert sum(tab.counts[i][j]) == want

    def test_total_is_all_ordered_pairs(self):
        osys = zmod.orbit_system(239, zmod.element_of_order(239, 7))
        tab = search.difference_table(osys)
        total = sum(sum(vec) for row in tab.counts for vec in row)
        assert total == 239 * 239 - 239

    def test_negation_symmetry(self):
        osys = zmod.orbit_system(19, zmod.element_of_order(19, 3))
        tab = search.difference_table(osys)
        n = len(osys.orbits)
        for i in range(n):
            for j in range(n):
                for c in range(1, 19):
                    assert tab.counts[i][j][c] == tab.counts[j][i][19 - c]


class TestSearchSds:
    def test_19_9_7_6(self):
        p = sds.ParameterSet(19, (9, 7, 6), 8)
        sels = search.search_sds(p, 3, budget=200_000, seed=1)
        assert sels
        for sel in sels:
            assert sds.verify_sds(search.expand(sel), 8).ok

    def test_infeasible_reported(self):
        p = sds.ParameterSet(107, (49, 48, 46), 63)
        with pytest.raises(search.InfeasibleError):
            search.search_sds(p, 53)

    def test_seed_reproducible(self):
        p = sds.ParameterSet(19, (9, 7, 6), 8)
        a = search.search_sds(p, 3, budget=50_000, seed=9)
        b = search.search_sds(p, 3, budget=50_000, seed=9)
        assert a == b

    def test_results_deduplicated_by_canonical_form(self):
        p = sds.ParameterSet(19, (7, 7, 7), 7)
        sels = search.search_sds(p, 3, budget=2_000_000, seed=2, want=50)
        forms = [
            equivalence.canonical_form(search.expand(s)).blocks for s in sels
        ]
        assert len(forms) == len(set(forms))

    def test_local_search_path(self, monkeypatch):
        monkeypatch.setattr(search, "EXHAUSTIVE_ORBIT_LIMIT", 0)
        p = sds.ParameterSet(31, (15, 15, 10), 17)
        sels = search.search_sds(p, 3, budget=500_000, seed=7)
        assert sels
        for sel in sels:
            assert sds.verify_sds(search.expand(sel), 17).ok

    def test_workers_merge_deterministically(self, monkeypatch):
        monkeypatch.setattr(search, "EXHAUSTIVE_ORBIT_LIMIT", 0)
        p = sds.ParameterSet(19, (9, 7, 6), 8)
        a = search.search_sds(p, 3, budget=100_000, seed=5, workers=3)
        b = search.search_sds(p, 3, budget=100_000, seed=5, workers=3)
        assert a == b and a


class TestIncrementalBookkeeping:
    def test_engine_counts_match_full_recount(self):
        rng = random.Random(11)
        osys = zmod.orbit_system(31, zmod.element_of_order(31, 3))
        engine = search._Engine(osys, 17, search.difference_table(osys))
        for _ in range(25):
            blocks = []
            for _ in range(3):
                size = rng.randint(0, 5)
                blocks.append(
                    ([0] if rng.random() < 0.5 else []) + rng.sample(engine.free, size)
                )
            counts = engine.family_counts(blocks)
            sets = [
                set().union(*(osys.orbits[i] for i in b)) if b else set()
                for b in blocks
            ]
            brute = brute_difference_counts(31, sets)
            assert counts[1:] == brute[1:]


class TestSearchSkewGs:
    def test_structural_filter_v7(self):
        osys = zmod.orbit_system(7, 2)
        pairs = search.negation_pairs(osys)
        assert len(pairs) == 1
        reps = {osys.orbits[i][0] for i in pairs[0]} | {
            osys.orbits[j][0] for j in pairs[0]
        }
        assert reps == {1, 3}

    def test_v19_skew_search(self):
        sels = search.search_skew_gs(19, (9, 9, 7, 6), 3, budget=500_000, seed=1)
        assert sels
        for sel in sels:
            fam = search.expand(sel)
            assert sds.verify_sds(fam, 31 - 19).ok
            assert sds.is_skew(fam.blocks[0])

    def test_wrong_k0_rejected(self):
        with pytest.raises(ValueError):
            search.search_skew_gs(19, (8, 9, 7, 7), 3)

    def test_skew_output_feeds_hadamard(self):
        from sdskit import hadamard

        sels = search.search_skew_gs(19, (9, 9, 7, 6), 3, budget=500_000, seed=1)
        fam = search.expand(sels[0])
        m = hadamard.build_skew_hadamard(19, *fam.blocks)
        assert hadamard.is_skew_hadamard(m)
        assert m.n == 76
