"""Smoke tests for the qss_sim extension module."""

import math

import pytest

qss = pytest.importorskip("qss_sim")


def test_state_preparation_and_exact_distribution():
    plus = qss.prep_product(["X"], [0])
    assert plus.num_qubits == 1
    amps = plus.amplitudes
    assert amps[0].real == pytest.approx(1 / math.sqrt(2))
    assert amps[1].real == pytest.approx(1 / math.sqrt(2))

    ghz = qss.prep_ghz(3)
    dist = qss.outcome_distribution(ghz, [("X", 0), ("X", 1), ("X", 2)])
    assert sum(dist.values()) == pytest.approx(1.0)
    for outcome, p in dist.items():
        if outcome[0] * outcome[1] * outcome[2] != 1:
            assert p == pytest.approx(0.0)


def test_measurement_collapse_round_trip():
    zero = qss.prep_product(["Z"], [0])
    eig, bit, collapsed = qss.measure_qubit(zero, 0, "X", 0.3)
    assert eig in (-1, 1)
    assert bit == (1 - eig) // 2
    again, _, _ = qss.measure_qubit(collapsed, 0, "X", 0.9)
    assert again == eig  # eigenstates stay put

    name, _ = qss.measure_bell(qss.prep_ghz(2), 0, 1, 0.1)
    assert name in ("PhiPlus", "PhiMinus")


def test_encoding_round_trip():
    table = qss.parity_table(3)
    assert table.cell(0, 1) == ["001", "010", "100", "111"]
    for basis in (0, 1):
        for secret in (0, 1):
            pattern = qss.encode(table, basis, secret, 0.42)
            assert qss.decode(table, basis, pattern) == secret
    assert qss.decode(table, 0, "222") is None
    assert qss.validate_table(table) == []

    loaded = qss.table_from_json(table.to_json())
    assert loaded.num_shares == 3


def test_ideal_product_run():
    cfg = qss.ProtocolConfig(protocol="product", rounds=2000, seed=42)
    t = qss.run_product(cfg, qss.parity_table(2))
    assert not t.aborted
    assert qss.efficiency(t) == 1.0
    assert len(t.alice_key) == 1500
    recombined = "".join(
        str(int(a) ^ int(b))
        for a, b in zip(t.shareholder_keys[0], t.shareholder_keys[1])
    )
    assert recombined == t.alice_key

    ledger = qss.resources(t, "ideal")
    assert ledger["per_bit_qubits"]["num"] == 2
    assert ledger["per_bit_cbits"]["num"] == 1
    assert ledger["per_bit_ebits"]["num"] == 0


def test_ghz_cheat_is_silent_with_fixed_ordering():
    cfg = qss.ProtocolConfig(protocol="ghz", rounds=3000, seed=7, ordering="fixed")
    t = qss.run_ghz(cfg, qss.ghz_cheat())
    assert not t.aborted
    report = t.attack_report
    assert report["leak_rate"] == 1.0
    assert qss.qber_summary(t)["aggregate"] == 0.0

    random_cfg = qss.ProtocolConfig(
        protocol="ghz", rounds=3000, seed=7, ordering="random"
    )
    assert qss.run_ghz(random_cfg, qss.ghz_cheat()).aborted


def test_leakage_reports():
    table = qss.parity_table(2)
    known = qss.leakage(table, "basis_known")
    blind = qss.leakage(table, "basis_unknown")
    assert known["mutual_information_bits"] == pytest.approx(1.0, abs=1e-9)
    assert blind["mutual_information_bits"] == pytest.approx(0.5, abs=1e-9)
    assert blind["per_outcome_posterior"]["PhiPlus"] == pytest.approx(0.0)
    assert blind["per_outcome_posterior"]["PsiMinus"] == pytest.approx(1.0)


def test_transcript_export_is_deterministic():
    cfg = qss.ProtocolConfig(protocol="two_bb84", rounds=300, seed=5)
    a = qss.run_two_bb84(cfg).to_json()
    b = qss.run_two_bb84(cfg).to_json()
    assert a == b
    csv = qss.run_two_bb84(cfg).to_csv()
    assert csv.startswith("index,basis,kept,is_check,check_error\n")


def test_engine_rejects_incompatible_attacks():
    cfg = qss.ProtocolConfig(protocol="product", rounds=10, transmission="sequential")
    with pytest.raises(ValueError):
        qss.run_product(cfg, qss.parity_table(2), qss.bell_joint())
