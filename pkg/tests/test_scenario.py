"""Counterfactual vote reassignment: proportionality, caps, conservation."""

import numpy as np
import pytest

from mvaudit.data import DistrictRecord, ElectionDataset, partition, serialize_dataset
from mvaudit.scenario import CapacityError, build_reversal_scenario
from tests.conftest import make_random_dataset


def red(i, mail_total, mail_c1, ballot_c1=500):
    return DistrictRecord(
        district_id=f"s{i:03d}",
        name=f"S{i}",
        ballot_total=2000,
        ballot_c1=ballot_c1,
        mail_total=mail_total,
        mail_c1=mail_c1,
        status="red",
    )


def two_red_dataset():
    districts = (red(1, 100, 20), red(2, 300, 60))
    return ElectionDataset(districts), districts


class TestAllocation:
    def test_exact_proportionality(self):
        ds, reds = two_red_dataset()
        result = build_reversal_scenario(ds, reds, 4)
        assert result.votes_moved == {"s001": 1, "s002": 3}

    def test_zero_votes_is_identity(self, dataset):
        _, reds = partition(dataset)
        result = build_reversal_scenario(dataset, reds, 0)
        assert result.modified == dataset
        assert serialize_dataset(result.modified) == serialize_dataset(dataset)
        assert result.resulting_margin == -dataset.margin_official

    def test_fixture_default_scenario_flips_by_one(self, dataset):
        _, reds = partition(dataset)
        result = build_reversal_scenario(dataset, reds, 15432)
        assert result.total_moved == 15432
        assert result.resulting_margin == 1
        modified = result.modified
        # recompute the national margin from scratch, candidate-1-positive
        margin = sum(d.c1_votes for d in modified) - sum(d.c2_votes for d in modified)
        assert margin == 1

    def test_caps_respected_with_redistribution(self):
        # first district can only give 5; the rest must absorb the surplus
        districts = (red(1, 100, 95), red(2, 300, 60), red(3, 300, 60))
        ds = ElectionDataset(districts)
        result = build_reversal_scenario(ds, districts, 200)
        assert result.votes_moved["s001"] == 5
        assert sum(result.votes_moved.values()) == 200
        for d in result.modified:
            assert 0 <= d.mail_c1 <= d.mail_total

    def test_capacity_error_names_shortfall(self):
        ds, reds = two_red_dataset()
        with pytest.raises(CapacityError, match="short by 80"):
            build_reversal_scenario(ds, reds, 400)

    def test_deterministic_tie_break_by_id(self):
        # equal bases and one leftover vote: ascending district_id wins
        districts = (red(2, 100, 20), red(1, 100, 20))
        ds = ElectionDataset(districts)
        result = build_reversal_scenario(ds, districts, 1)
        assert result.votes_moved == {"s001": 1, "s002": 0}

    def test_repeatable(self, dataset):
        _, reds = partition(dataset)
        a = build_reversal_scenario(dataset, reds, 15432)
        b = build_reversal_scenario(dataset, reds, 15432)
        assert a.votes_moved == b.votes_moved
        assert a.modified == b.modified

    def test_alternate_base(self):
        districts = (red(1, 100, 90), red(2, 300, 150))
        ds = ElectionDataset(districts)
        by_total = build_reversal_scenario(ds, districts, 8, base="mail_total")
        by_capacity = build_reversal_scenario(ds, districts, 8, base="mail_c2")
        assert by_total.votes_moved == {"s001": 2, "s002": 6}
        # capacities are 10 and 150: quotas 0.5/7.5, remainder tie -> lower id
        assert by_capacity.votes_moved == {"s001": 1, "s002": 7}

    def test_unknown_base_rejected(self):
        ds, reds = two_red_dataset()
        with pytest.raises(Exception, match="allocation base"):
            build_reversal_scenario(ds, reds, 1, base="ballot_total")


class TestInvariants:
    def test_randomized_conservation_and_margin(self):
        rng = np.random.default_rng(20160522)
        for _ in range(1000):
            ds = make_random_dataset(
                rng,
                n_green=int(rng.integers(1, 8)),
                n_red=int(rng.integers(1, 6)),
                n_dubious=int(rng.integers(0, 3)),
            )
            _, reds = partition(ds, include_dubious_as_red=bool(rng.integers(0, 2)))
            capacity = sum(d.mail_c2 for d in reds)
            votes = int(rng.integers(0, capacity + 1))
            result = build_reversal_scenario(ds, reds, votes)
            modified = result.modified
            # conservation per district and nationally
            for before, after in zip(ds, modified):
                assert after.ballot_total == before.ballot_total
                assert after.mail_total == before.mail_total
                assert after.ballot_c1 == before.ballot_c1
            assert sum(d.total_votes for d in modified) == sum(d.total_votes for d in ds)
            # untouched districts are bit-identical
            red_ids = {d.district_id for d in reds}
            for before, after in zip(ds, modified):
                if before.district_id not in red_ids:
                    assert after == before
            # margin arithmetic is exact
            assert result.resulting_margin == -ds.margin_official + 2 * votes
            margin = sum(d.c1_votes for d in modified) - sum(d.c2_votes for d in modified)
            assert margin == result.resulting_margin
            assert sum(result.votes_moved.values()) == result.total_moved == votes
