"""Smoke test for the srr extension module.

Build and install first:

    pip install maturin
    maturin build --release -m crates/py/Cargo.toml -o target/wheels
    pip install --force-reinstall target/wheels/srr-*.whl
    python python/smoke_test.py
"""

from fractions import Fraction

import srr

F = Fraction

g1 = srr.GeneratorMatrix([[1, 0, 1, 1], [0, 1, 0, 0]], 2)
assert (g1.k, g1.n, g1.q) == (2, 4, 2)
assert g1.profile()["s"] == [3, 1]
assert g1.min_distance() == 1

box = g1.recovery_system().region()
assert sorted(box.vertices) == [(0, 0), (0, 1), (3, 0), (3, 1)]
assert box.volume() == 3
assert g1.volume() == 3

g2 = srr.GeneratorMatrix.parse(
    """# systematic 3 x 6 over F_3
    3 3 6
    1 0 0 1 0 1
    0 1 0 1 2 2
    0 0 1 1 1 1
    """
)
sys2 = g2.recovery_system()
assert sys2.sets()[0] == [[1], [5, 6], [2, 3, 4], [2, 3, 6], [2, 4, 5], [3, 4, 5], [3, 4, 6]]
cert = sys2.member([F(3, 2), F(3, 2), F(1, 2)])
assert cert is not None and cert["rates"] == (F(3, 2), F(3, 2), F(1, 2))
assert all(load <= 1 for load in cert["loads"])
assert sys2.member([4, 0, 0]) is None

mds = srr.GeneratorMatrix([[1, 0, 1, 1], [0, 1, 1, 2]], 3)
rs = mds.recovery_system()
pentagon = rs.region()
assert sorted(pentagon.vertices) == [(0, 0), (0, F(5, 2)), (1, 2), (2, 1), (F(5, 2), 0)]
assert pentagon.contains(["4/3", "2/3"])
got = rs.member(["4/3", "2/3"], integerize=True)
assert got["s"] == 3
assert all(int(d) <= 3 for d in got["integer"]["delta"])
params = rs.params([2])
assert params["max_sum"] == 3 and params["r_max_sums"][2] == F(25, 4)
assert mds.volume() == 4 == mds.volume("triangulate")

dual = mds.bound("dual")
lhs, rhs, ok = dual.evaluate([1, 2])
assert (lhs, rhs, ok) == (4, 4, True)
assert g1.hyperplane_bound([2]).evaluate([0, 1])[1] == 1

parity = srr.GeneratorMatrix([[1, 0, 0, 1], [0, 1, 0, 1], [0, 0, 1, 1]], 2)
clip = parity.recovery_system().clip_bound([1, 1, 1])
assert clip.evaluate([1, 1, 1])[1] == F(10, 3)

assert srr.closed_form_volume("mds3", n=6) == F(65, 9)
assert srr.knapsack([1, 2], 2) == F(3, 4)
value, point = srr.dantzig([1, 1, 1], [1, 1, 3], 4)
assert value == F(8, 3) and point == (1, 1, F(2, 3))

try:
    srr.GeneratorMatrix([[1, 1], [2, 2]], 3)
except ValueError as e:
    assert "rank" in str(e).lower() or "invalid" in str(e).lower()
else:
    raise AssertionError("rank-deficient matrix accepted")

try:
    srr.rs_matrix(2, 5, 5, 2)
except ValueError:
    pass
else:
    raise AssertionError("field too small not reported")

assert issubclass(srr.GuardError, Exception)
print("srr smoke test: ok")
