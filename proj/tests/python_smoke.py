"""Smoke tests for the autocsf Python bindings."""

import math

import pytest

import autocsf


def dataset(n=20000, alpha=0.9, dist="uniform", seed=3):
    keys, values = autocsf.gen_synthetic(n, alpha, dist, seed=seed)
    assert len(keys) == n and len(values) == n
    return keys, values


def test_build_auto_round_trip():
    keys, values = dataset()
    index, report = autocsf.build_auto(keys, values, seed=5)

    assert index.num_keys == len(keys)
    assert index.is_filtered == report["use_filter"]
    assert report["alpha"] == pytest.approx(0.9, abs=1e-9)
    assert 0 < report["n_over_N"] < 0.01
    assert report["delta"] == autocsf.delta_for(3)
    assert len(report["rows"]) == 216
    for i, key in enumerate(keys):
        assert index.query(key) == values[i]


def test_plain_and_bcsf_builds():
    keys, values = dataset(n=5000, alpha=0.6, dist="zipf", seed=9)
    plain = autocsf.build_plain(keys, values, seed=2)
    bcsf_index, decision = autocsf.build_bcsf(keys, values, seed=2)

    assert plain.bits_per_key > 0
    assert {"alpha", "h0", "eps_star", "use_filter"} <= set(decision)
    for i in (0, 17, 4999):
        assert plain.query(keys[i]) == values[i]
        assert bcsf_index.query(keys[i]) == values[i]


def test_serialization_round_trip(tmp_path):
    keys, values = dataset(n=4000, alpha=0.95, seed=11)
    index, _ = autocsf.build_auto(keys, values, seed=4)

    blob = index.serialize()
    clone = autocsf.AutoIndex.deserialize(blob)
    assert clone.serialize() == blob
    assert clone.size_bits == index.size_bits
    assert all(clone.query(k) == index.query(k) for k in keys[:200])

    path = tmp_path / "smoke.csf"
    index.save(str(path))
    loaded = autocsf.AutoIndex.load(str(path))
    assert loaded.serialize() == blob


def test_bound_formulas():
    specs = autocsf.enumerate_all_specs()
    assert len(specs) == 216
    xor4 = next(
        s for s in specs if s.family == "xor" and s.fingerprint_bits == 4
    )
    assert xor4.eps == pytest.approx(2**-4)
    assert xor4.bpk == pytest.approx(1.23 * 4)

    lb = autocsf.lower_bound(0.9, autocsf.delta_for(3), xor4, 0.00101)
    ub = autocsf.upper_bound(0.9, autocsf.delta_for(3), xor4, 0.00101)
    assert lb == pytest.approx(0.42583375, abs=1e-8)
    assert ub == pytest.approx(1.656382, abs=1e-6)
    assert lb < ub


def test_decide_report():
    _, values = dataset(n=20000, alpha=0.95, seed=13)
    report = autocsf.decide(values)
    assert report["use_filter"] is True
    assert report["lb_star"] > 0
    assert report["best_spec"]["family"] in ("bloom", "xor", "binaryfuse")

    flat = [i % 50 for i in range(5000)]
    assert autocsf.decide(flat)["use_filter"] is False


def test_measured_savings_sign():
    keys, values = dataset(n=10000, alpha=0.95, seed=17)
    specs = autocsf.enumerate_all_specs()
    fuse4 = next(
        s
        for s in specs
        if s.family == "binaryfuse" and s.fingerprint_bits == 4
    )
    savings = autocsf.measured_savings(keys, values, fuse4, seed=6)
    assert savings > 0


def test_kmer_helpers(tmp_path):
    assert autocsf.pack_kmer("ACGT") == b"\x1b"
    assert autocsf.pack_kmer("AAAA") == b"\x00"

    table = tmp_path / "toy.tsv"
    table.write_text("ACGTAC\t5\nTTTTTT\t5\nGATTAC\t9\n")
    keys, values = autocsf.load_kmer_table(str(table), 6)
    assert sorted(values) == [5, 5, 9]
    assert autocsf.pack_kmer("GATTAC") in keys


def test_error_mapping(tmp_path):
    with pytest.raises(ValueError):
        autocsf.gen_synthetic(100, 0.5, "gaussian")
    with pytest.raises(ValueError):
        autocsf.pack_kmer("ACGX")
    with pytest.raises(ValueError):
        autocsf.load_kmer_table(str(tmp_path / "missing.tsv"), 4)
    with pytest.raises(ValueError):
        autocsf.build_plain([b"a"], [1, 2])
