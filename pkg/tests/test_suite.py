import pytest

from bilattice_morita.harness.generators import GeneratorConfig
from bilattice_morita.harness.suite import GROUPS, MUTATION_TARGET, run_suite

SMALL = GeneratorConfig(seed=3, max_size=4, count=8)


def test_all_groups_pass_small():
    rep = run_suite(SMALL)
    assert [g.name for g in rep.groups] == list(GROUPS)
    assert rep.ok and rep.exit_code == 0, rep.render()


def test_deterministic_for_seed():
    a = run_suite(SMALL, ["essential", "onto-homs"]).to_dict(timing=False)
    b = run_suite(SMALL, ["essential", "onto-homs"]).to_dict(timing=False)
    assert a == b


def test_selection_order_and_empty():
    rep = run_suite(SMALL, ["oracles", "erdos"])
    assert [g.name for g in rep.groups] == ["erdos", "oracles"]
    empty = run_suite(SMALL, [])
    assert empty.groups == [] and empty.exit_code == 0


def test_unknown_group():
    with pytest.raises(ValueError):
        run_suite(SMALL, ["nope"])


def test_mutation_stats():
    rep = run_suite(GeneratorConfig(seed=0, max_size=5, count=20), ["lemmas"], mutate=True)
    stats = rep.group("lemmas").stats["mutation"]
    assert stats["total"] == 20
    assert stats["detected"] + len(stats["undetected"]) == stats["total"]
    assert stats["undetected_equivalent"] == len(stats["undetected"])
    assert stats["detected_by_witness_definition"] == stats["total"]
    assert stats["meets_target"] == (stats["rate"] >= MUTATION_TARGET)
    # The exit code reflects law failures, not the mutation rate.
    assert rep.exit_code == 0


def test_render_mentions_groups():
    text = run_suite(SMALL, ["erdos"]).render()
    assert "erdos" in text
