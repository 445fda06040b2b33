"""Bernoulli tables mod p, irregular indices, and the checkpointed scan."""

from fractions import Fraction
from math import comb

import pytest

from eiscomp.bernoulli import (
    ScanRecord,
    _pure_table,
    bernoulli_mod,
    bernoulli_table_mod,
    irregular_indices,
    pair_scan,
)
from eiscomp.errors import CheckpointError
from eiscomp.scan import (
    load_checkpoint,
    primes_in,
    records_to_csv,
    records_to_json,
    scan_range,
    total_pair_hits,
)


# --- exact-rational oracle ----------------------------------------------------

_ORACLE = [Fraction(1)]


def bernoulli_exact(n):
    while len(_ORACLE) <= n:
        m = len(_ORACLE)
        s = sum(Fraction(comb(m + 1, j)) * _ORACLE[j] for j in range(m))
        _ORACLE.append(-s / (m + 1))
    return _ORACLE[n]


def bernoulli_oracle_mod(p, k):
    b = bernoulli_exact(k)
    return b.numerator * pow(b.denominator, -1, p) % p


# --- tables ----------------------------------------------------------------------

def test_b0_is_one_everywhere():
    for p in (5, 7, 37, 101):
        assert bernoulli_mod(p, 0).residue == 1


def test_b2_is_one_sixth():
    assert bernoulli_mod(5, 2).residue == 1  # 1/6 = 1 mod 5
    assert bernoulli_mod(7, 2).residue == pow(6, -1, 7)


def test_b32_vanishes_mod_37():
    assert bernoulli_oracle_mod(37, 32) == 0
    assert bernoulli_mod(37, 32).residue == 0


def test_table_matches_exact_oracle_small_primes():
    for p in (5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47):
        table = bernoulli_table_mod(p)
        for k in range(0, p - 2):
            if k % 2 == 1 and k != 1:
                assert table[k] == 0
            else:
                assert table[k] == bernoulli_oracle_mod(p, k), (p, k)


def test_numpy_and_pure_tables_agree():
    for p in (53, 101, 257):
        assert list(bernoulli_table_mod(p)) == _pure_table(p)


def test_recurrence_internal_consistency():
    # sum_j C(m+1, j) B_j = 0 mod p for every m in range
    for p in (37, 101):
        table = bernoulli_table_mod(p)
        for m in range(1, p - 2):
            total = sum(comb(m + 1, j) % p * table[j] for j in range(m + 1)) % p
            assert total == 0, (p, m)


def test_out_of_range_rejected():
    with pytest.raises(ValueError):
        bernoulli_mod(37, 35)  # p-2
    with pytest.raises(ValueError):
        bernoulli_mod(37, -1)


# --- irregular indices --------------------------------------------------------------

def test_known_irregular_indices():
    assert irregular_indices(31) == []
    assert irregular_indices(37) == [32]
    assert irregular_indices(59) == [44]
    assert irregular_indices(67) == [58]
    assert irregular_indices(101) == [68]
    assert irregular_indices(103) == [24]
    assert irregular_indices(131) == [22]
    assert irregular_indices(157) == [62, 110]


def test_irregular_matches_oracle():
    for p in (37, 59, 157):
        want = [k for k in range(4, p - 2, 2) if bernoulli_oracle_mod(p, k) == 0]
        assert irregular_indices(p) == want


# --- pair scan -------------------------------------------------------------------------

def test_pair_scan_small_primes_empty():
    for p in (5, 7, 11):
        rec = pair_scan(p)
        assert rec.pair_hits == ()
        assert rec.irregular_indices == ()


def test_pair_scan_37():
    rec = pair_scan(37)
    assert rec.irregular_indices == (32,)
    assert rec.pair_hits == ()
    assert rec.half_index_ok is None  # 37 = 1 mod 4


def test_half_index_defined_and_true_for_3_mod_4():
    for p in (7, 11, 19, 23, 43):
        rec = pair_scan(p)
        assert rec.half_index_ok is True


def test_synthetic_pair_detection():
    # the detector itself, on a doctored table: force B_k = B_k' = 0
    p = 37
    irr = {4, 34}  # 4 + 34 = 38 = p + 1
    hits = []
    for k in sorted(irr):
        kp = p + 1 - k
        if kp in irr and k <= kp:
            hits.append((k, kp))
    assert hits == [(4, 34)]


def test_record_roundtrip():
    rec = pair_scan(157)
    assert ScanRecord.from_dict(rec.to_dict()) == rec


# --- scan_range ---------------------------------------------------------------------------

def test_primes_in():
    assert primes_in(5, 30) == [5, 7, 11, 13, 17, 19, 23, 29]
    assert primes_in(10, 9) == []


def test_empty_range():
    assert scan_range(100, 50) == []


def test_scan_shard_independence():
    base = scan_range(5, 300, shards=1)
    csv1 = records_to_csv(base)
    for shards in (2, 3, 8):
        again = records_to_csv(scan_range(5, 300, shards=shards))
        assert again == csv1


def test_scan_finds_the_first_irregular_primes():
    recs = scan_range(5, 160)
    flagged = {r.p: list(r.irregular_indices) for r in recs if r.irregular_indices}
    assert flagged == {37: [32], 59: [44], 67: [58], 101: [68], 103: [24], 131: [22], 149: [130], 157: [62, 110]}
    assert total_pair_hits(recs) == 0


def test_checkpoint_resume_matches_fresh(tmp_path):
    ck = tmp_path / "scan.ck"
    first = scan_range(5, 120, checkpoint=str(ck))
    assert ck.exists()
    # resuming over a larger range recomputes only the new primes
    resumed = scan_range(5, 200, checkpoint=str(ck))
    fresh = scan_range(5, 200)
    assert records_to_csv(resumed) == records_to_csv(fresh)
    # a second resume over the same range touches nothing and agrees too
    again = scan_range(5, 200, checkpoint=str(ck))
    assert records_to_csv(again) == records_to_csv(fresh)
    assert records_to_csv(first) == records_to_csv(scan_range(5, 120))


def test_checkpoint_corruption_detected(tmp_path):
    ck = tmp_path / "scan.ck"
    scan_range(5, 60, checkpoint=str(ck))
    lines = ck.read_text().splitlines()
    broken = lines[0]
    payload = broken.split(" ", 1)[1].replace('"pair_hits":[]', '"pair_hits":[[4,8]]')
    assert payload != broken.split(" ", 1)[1]
    lines[0] = broken.split(" ", 1)[0] + " " + payload
    ck.write_text("\n".join(lines) + "\n")
    with pytest.raises(CheckpointError):
        load_checkpoint(str(ck))


def test_csv_and_json_shapes():
    recs = scan_range(5, 60)
    csv = records_to_csv(recs)
    assert csv.startswith("p,irregular_indices,pair_hits,half_index_ok\n")
    assert csv.count("\n") == len(recs) + 1
    import json

    parsed = json.loads(records_to_json(recs))
    assert [r["p"] for r in parsed] == [r.p for r in recs]
