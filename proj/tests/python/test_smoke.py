"""Smoke tests for the compiled module: one touch per entry point."""

import macc


def test_version():
    assert macc.__version__ == "0.1.0"


def test_window_wraps():
    assert macc.window(3, 3, 2) == [3, 1]
    assert macc.window(1, 4, 3) == [1, 2, 3]
    assert macc.mod1(0, 3) == 3


def test_omega():
    assert macc.omega(5, 2) == (2, [1, 2])
    assert macc.omega(4, 3) == (3, [1, 2, 3])
    assert macc.omega(4, 1) == (1, [1])
    assert macc.omega(3, 3) is None


def test_share_roundtrip():
    secret = "1011001"
    shares = macc.share_split(secret, 3, seed=9)
    assert len(shares) == 3
    assert macc.share_reconstruct(shares, 3) == secret
    assert shares[0] != secret  # any single share is a blind pad


def test_virtual_demand_flips_one_bit():
    assert macc.virtual_demand(2, "000") == "010"
    assert macc.virtual_demand(2, "010") == "000"


def test_simulate_running_example():
    report = macc.simulate(k=3, l=2, n=3, b=96, privatize=True, seed=7, demands="1,2,3")
    assert report["memory_files_per_node"] == ["5/3", "5/3", "5/3"]
    assert report["payload_files"] == "1/3"
    assert report["packets"] == ["{(1,{3}),(2,{1}),(3,{2})}"]
    assert report["decode_pass"] is True
    assert report["omega"] == 2


def test_verify_privacy_small():
    report = macc.verify("privacy", k=2, l=1, n=2, privatize=True)
    assert report["pass"] is True
    assert all(o["mi_exact"] == "0" for o in report["observers"])

    bare = macc.verify("privacy", k=2, l=1, n=2, privatize=False)
    assert bare["pass"] is False


def test_tradeoff_points():
    points = macc.tradeoff_points(20, 3, 40, which="private")
    t2 = [p for p in points if p["scheme"] == "private" and p["t"] == "t=2"]
    assert len(t2) == 1
    assert (t2[0]["M_num"], t2[0]["M_den"]) == (27, 5)
    assert (t2[0]["R_num"], t2[0]["R_den"]) == (14, 3)


def test_demo_contains_the_walkthrough():
    text = macc.demo()
    assert "{(1,{3}),(2,{1}),(3,{2})}" in text
    assert "masked key" in text
    assert text == macc.demo()
