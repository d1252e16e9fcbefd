"""Smoke test for the cyclord_py extension."""

import json

import cyclord_py as cy


def main():
    c = cy.CircOrder([2, 0, 1])
    assert c.labels() == [0, 1, 2]
    assert c.holds(0, 1, 2) and c.holds(2, 0, 1) and not c.holds(0, 2, 1)
    assert c.cut(1) == [1, 2, 0]
    assert c.interval(0, 2) == [1]
    assert len(c) == 3 and c == cy.circularize([0, 1, 2])

    v = cy.verify_axioms([0, 1, 2], [(0, 1, 2), (1, 2, 0), (2, 0, 1)])
    assert v["valid"] and v["canonical"] == [0, 1, 2]
    bad = cy.verify_axioms([0, 1, 2], [(0, 1, 2), (0, 2, 1)])
    assert not bad["valid"]

    c6 = cy.CircOrder(list(range(6)))
    ok, _ = cy.cop_check(c6, c, {i: i // 2 for i in range(6)})
    assert ok
    ok, witness = cy.cop_check(c6, c, {i: i % 3 for i in range(6)})
    assert not ok and witness

    prod = cy.lex_product(c, ["a", "b"])
    assert prod.labels()[:2] == ["(0,a)", "(0,b)"] and len(prod) == 6
    lifted = cy.lift(cy.CircOrder(["x", "y"]), {"x": ["a0"], "y": ["b0", "b1"]})
    assert lifted.labels() == ["a0", "b0", "b1"]

    z6 = [[(i + j) % 6 for j in range(6)] for i in range(6)]
    d = cy.lcord_decide(list(range(6)), z6)
    assert d["cyclic"] and len(d["certificate"]) == 6
    klein = [[i ^ j for j in range(4)] for i in range(4)]
    assert not cy.lcord_decide(list(range(4)), klein)["cyclic"]

    cover = cy.cycle_cover(c6, [0, 3])
    assert len(cover["blocks"]) == 4 and len(cover["quotient"]) == 4
    dot = cy.tower_dot(c6, [[0], [0, 3]])
    assert dot.count("subgraph cluster_") == 2

    assert cy.qi_sign(0, 1) == 1
    assert cy.qi_sign(-1, 2) == 1  # 2α - 1 > 0
    assert cy.qi_sign(-2, 3) == -1

    s1, s2 = cy.Sturmian.sigma(1), cy.Sturmian.sigma(2)
    assert s1.compose(s1) == s2
    p = cy.Sturmian.p(0, 1, True)
    assert p.is_ideal() and not s1.is_ideal()
    assert s1.compose(p).is_ideal()
    assert isinstance(cy.sturmian_triple(s1, s2, cy.Sturmian.sigma(3)), bool)

    doc = json.dumps({"kind": "corder", "cycle": [0, 1, 2, 3]})
    ok, report = cy.verify_json(doc)
    assert ok and json.loads(report)["ok"]

    ok, report = cy.selftest("qisign", 7)
    assert ok and json.loads(report)["seed"] == 7

    try:
        cy.CircOrder([0, 0])
    except ValueError:
        pass
    else:
        raise AssertionError("duplicate labels accepted")

    print("smoke test ok")


if __name__ == "__main__":
    main()
