import numpy as np
import pytest
from hypothesis import given, strategies as st

from addbasis import sequences as sq


def test_from_elements_basic():
    s = sq.from_elements([2, 3, 5, 7], 10)
    assert s.count_upto(10) == 4
    assert s.count_upto(4) == 2
    assert 5 in s and 6 not in s


def test_from_elements_empty_and_duplicates():
    assert sq.from_elements([], 10).count_upto(10) == 0
    assert sq.from_elements([5, 5, 5], 10).count_upto(10) == 1


def test_from_elements_rejects_out_of_range():
    with pytest.raises(ValueError):
        sq.from_elements([11], 10)
    with pytest.raises(ValueError):
        sq.from_elements([-1], 10)


def test_generate_primes():
    p = sq.generate("primes", 10)
    assert list(p.elements()) == [2, 3, 5, 7]


def test_generate_squares_include_zero():
    q = sq.generate("kth_powers(2)", 10)
    assert list(q.elements()) == [0, 1, 4, 9]


def test_generate_unknown_kind():
    with pytest.raises(ValueError):
        sq.generate("fibonacci", 100)


def test_count_upto_naturals():
    assert sq.generate("naturals", 20).count_upto(10) == 11


def test_count_upto_squares_large():
    q = sq.generate("kth_powers(2)", 10**6)
    assert q.count_upto(10**6) == 1001  # floor(sqrt(1e6)) + 1, zero included


def test_count_upto_range_error():
    s = sq.generate("primes", 100)
    with pytest.raises(ValueError):
        s.count_upto(101)
    with pytest.raises(ValueError):
        s.count_upto(-1)


@given(st.lists(st.integers(0, 300), max_size=60), st.integers(0, 20))
def test_count_matches_brute_recount(elements, seed):
    s = sq.from_elements(elements, 300)
    rng = np.random.default_rng(seed)
    members = set(int(e) for e in elements)
    for x in rng.integers(0, 301, size=20):
        assert s.count_upto(int(x)) == sum(1 for e in members if e <= x)


@pytest.mark.parametrize(
    "kind", ["naturals", "primes", "evens", "kth_powers(3)", "stoehr_counterexample"]
)
def test_generated_counts_match_brute_recount(kind):
    s = sq.generate(kind, 5000)
    rng = np.random.default_rng(13)
    members = s.elements()
    for x in rng.integers(0, 5001, size=100):
        assert s.count_upto(int(x)) == int(np.count_nonzero(members <= x))


def test_sequence_is_immutable():
    s = sq.generate("primes", 50)
    with pytest.raises(ValueError):
        s.members[2] = False


def test_min_pairwise_gcd():
    assert sq.min_pairwise_gcd(sq.generate("evens", 60), 60) == 2
    assert sq.min_pairwise_gcd(sq.generate("primes", 60), 60) == 1
    # pairwise minimum exceeds the gcd of the whole set here
    assert sq.min_pairwise_gcd(sq.from_elements([6, 10, 15], 20), 20) == 2
    with pytest.raises(ValueError):
        sq.min_pairwise_gcd(sq.from_elements([4], 10), 10)


class TestCounterexample:
    spec = sq.CounterexampleSpec(depth=8)

    def test_hand_values(self):
        assert sq.counterexample_count(self.spec, 63) == 4
        assert sq.counterexample_count(self.spec, 4096) == 33

    def test_block_layout(self):
        s = sq.generate("stoehr_counterexample", 4500)
        for x in range(64, 81):
            assert x in s
        assert 81 not in s
        for x in range(4096, 4353):
            assert x in s
        assert 4353 not in s

    def test_closed_form_matches_brute_enumeration(self):
        s = sq.generate("stoehr_counterexample", 10**5)
        closed = np.array(
            [sq.counterexample_count(self.spec, x) for x in range(0, 10**5 + 1, 101)]
        )
        brute = s.prefix[::101]
        assert np.array_equal(closed, brute)

    def test_ratio_strictly_increasing(self):
        ratios = []
        for k in range(1, 5):
            a = self.spec.anchor(k)
            ratios.append(
                sq.counterexample_count(self.spec, 2 * a)
                / sq.counterexample_count(self.spec, a)
            )
        assert all(r1 < r2 for r1, r2 in zip(ratios, ratios[1:]))
        assert ratios[2] > 50

    def test_huge_argument_no_enumeration(self):
        # 2^60 is far beyond any bitmap horizon; closed form answers exactly
        spec = sq.CounterexampleSpec(depth=6)
        val = sq.counterexample_count(spec, 2**60)
        cubes = sq.integer_kth_root(2**60, 3) + 1
        # anchors are 2^(3*2^k): blocks 1..4 fit below 2^60, a_5 = 2^96 does not
        blocks = sum(spec.block_length(k) for k in range(1, 5))
        assert val == cubes + blocks


@given(st.integers(0, 2**63), st.integers(2, 5))
def test_integer_kth_root(x, k):
    r = sq.integer_kth_root(x, k)
    assert r**k <= x < (r + 1) ** k


def test_file_round_trip(tmp_path):
    s = sq.generate("primes", 500)
    path = tmp_path / "primes.dat"
    sq.save_sequence(s, path)
    loaded = sq.load_sequence(path)
    assert loaded.horizon == 500
    assert loaded.label == "primes"
    assert np.array_equal(loaded.members, s.members)


def test_file_rejects_nonincreasing(tmp_path):
    path = tmp_path / "bad.dat"
    path.write_text("# horizon=10 label=x\n5\n3\n")
    with pytest.raises(ValueError):
        sq.load_sequence(path)
