"""Smoke test for the Python bindings.

Build and install first:  maturin develop -m crates/py/Cargo.toml
"""

import math

import lowesa


def sandwich(p):
    return lowesa.NoisyCircuit(
        "QUBITS 1\n"
        "CLIFF H 0\n"
        f"RZ 0 theta 0 0 {p}\n"
        "CLIFF H 0\n"
    )


def main():
    z = lowesa.PauliString("+Z")
    assert z.weight == 1 and str(z) == "+Z"

    c = sandwich(0.1)
    s = lowesa.backpropagate(c, z, 1)
    assert s.terms() == [("0:+1", s.terms()[0][1])]
    for t in (0.0, 0.4, 2.5):
        want = 0.8 * math.cos(t)
        assert abs(s.evaluate([t]) - want) < 1e-12
        assert abs(lowesa.dense_simulate(c, [t], z) - want) < 1e-12
    assert len(lowesa.backpropagate(c, lowesa.PauliString("+X"), 0)) == 0

    bench = lowesa.NoisyCircuit.benchmark("fig3", 3, 1, seed=2, p=0.05)
    obs = lowesa.PauliString("+IZI")
    full = lowesa.exact_series(bench, obs)
    trunc = lowesa.backpropagate(bench, obs, 2, workers=4)
    tight, _ = lowesa.theoretical_bound(2, 0.05, 0.05)
    assert lowesa.parseval_distance(full, trunc) <= tight
    assert lowesa.SurrogateSeries(trunc.to_text()).to_text() == trunc.to_text()
    theta = [0.1 * k for k in range(bench.num_params)]
    assert abs(full.evaluate(theta) - lowesa.dense_simulate(bench, theta, obs)) < 1e-12

    try:
        lowesa.theoretical_bound(3, 0.0, 0.0)
    except ValueError as e:
        assert "vacuous" in str(e)
    else:
        raise AssertionError("noiseless bound accepted")

    print("python smoke test: ok")


if __name__ == "__main__":
    main()
