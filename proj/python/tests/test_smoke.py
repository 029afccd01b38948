import json
import math

import pytest

import genmakespan as gm


def test_distribution_basics():
    d = gm.DiscreteDistribution([(0.0, 0.5), (2.0, 0.5)])
    assert d.mean == pytest.approx(1.0)
    assert d.max_value == 2.0
    assert d.support_size == 2
    assert gm.effective_size(d, 1) == pytest.approx(d.mean)

    b = gm.DiscreteDistribution.bernoulli(0.3)
    got = gm.effective_size(b, 4)
    assert got == pytest.approx(math.log(1 + 0.3 * 3) / math.log(4), abs=1e-12)

    trunc, exceptional = gm.split_at_one(gm.DiscreteDistribution([(0.5, 0.5), (3.0, 0.5)]))
    assert exceptional == pytest.approx(1.5)
    assert trunc.max_value <= 1.0

    with pytest.raises(gm.ValidationError):
        gm.DiscreteDistribution([(0.0, 0.4), (1.0, 0.4)])


def test_generators_and_roundtrip(tmp_path):
    inst = gm.gen_line_gap(2)
    assert inst.kind == gm.FamilyKind.line
    assert inst.n_tasks == 7
    assert inst.target == 7

    text = inst.to_json()
    again = gm.Instance.from_json(text)
    assert again.to_json() == text

    path = tmp_path / "inst.json"
    inst.save(str(path))
    loaded = gm.Instance.load(str(path))
    assert loaded.to_json() == text
    assert json.loads(text)["format"] == "genmakespan-instance"

    rnd = gm.gen_random(gm.FamilyKind.tree, 9, "bernoulli", 4, seed=3)
    assert rnd.n_tasks == 9
    assert rnd.target == 4


def test_solve_and_evaluate():
    inst = gm.gen_random(gm.FamilyKind.line, 8, "bernoulli", 4, seed=11)
    opt = gm.SolveOptions(samples=2000, final_samples=5000, seed=5)
    sol = gm.solve(inst, opt)
    assert len(sol.chosen) >= 4
    assert sol.report.selection_ok
    assert sol.estimate.mean > 0.0

    exact = gm.evaluate_exact(inst, sol.chosen)
    assert sol.estimate.mean == pytest.approx(exact, abs=5 * sol.estimate.std_error + 1e-9)

    mc = gm.evaluate_mc(inst, sol.chosen, samples=20000, seed=3, threads=2)
    assert mc.mean == pytest.approx(exact, abs=5 * mc.std_error + 1e-9)

    best = gm.brute_force_opt(inst, 4)
    assert 0.0 < best.value <= exact + 1e-12
    assert len(best.selection) == 4


def test_determinism_and_result_json():
    inst = gm.gen_random(gm.FamilyKind.tree, 8, "bernoulli", 4, seed=7)
    opt = gm.SolveOptions(samples=1500, final_samples=3000, threads=2, seed=9)
    a = gm.result_json(inst, gm.solve(inst, opt), opt)
    b = gm.result_json(inst, gm.solve(inst, opt), opt)
    assert a == b
    parsed = json.loads(a)
    assert parsed["format"] == "genmakespan-result"
    assert parsed["config"]["seed"] == 9


def test_infeasible_surfaces_as_exception():
    doc = {
        "format": "genmakespan-instance",
        "version": 1,
        "name": "three-constants",
        "family": {"kind": "explicit", "tasks": 3, "resource_tasks": [[0], [1], [2]]},
        "target": 2,
        "tasks": [[[1.0, 1.0]], [[1.0, 1.0]], [[1.0, 1.0]]],
    }
    inst = gm.Instance.from_json(json.dumps(doc))
    tight = gm.SolveOptions(b=1e-9, samples=500, final_samples=500)
    with pytest.raises(gm.InfeasibleError):
        gm.solve(inst, tight)
