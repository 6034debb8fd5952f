"""Smoke test for the Python bindings: solve the three-edge example and
check the curve against known values."""

import json
from fractions import Fraction

import pwlwardrop


def main():
    instance = pwlwardrop.example("ex_simple_undirected")
    curve = json.loads(pwlwardrop.solve(instance))
    assert curve["breakpoints"] == ["0", "2", "11/3", "5"], curve["breakpoints"]

    x, pi = pwlwardrop.sample(json.dumps(curve), "7/2")
    assert [Fraction(v) for v in x] == [Fraction(8, 5), Fraction(8, 5), Fraction(19, 10)]
    assert Fraction(pi[-1]) == Fraction(19, 5)

    gap, potential = pwlwardrop.verify(instance, x)
    assert gap == "0" and potential == pi, (gap, potential)
    gap, _ = pwlwardrop.verify(instance, ["2", "2", "0"])
    assert Fraction(gap) > 0

    braess = json.loads(pwlwardrop.braess(2, "1/1000000"))
    assert len(braess["vertices"]) == 6 and len(braess["edges"]) == 9

    try:
        pwlwardrop.example("nope")
    except ValueError:
        pass
    else:
        raise AssertionError("unknown example accepted")
    print("python smoke test passed")


if __name__ == "__main__":
    main()
