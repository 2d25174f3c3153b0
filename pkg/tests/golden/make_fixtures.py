"""Regenerate the committed CLI fixtures.

Run from the repository root:

    python3 tests/golden/make_fixtures.py

Inputs are dumped with the same JSON renderer the CLI uses, expected outputs
by running the CLI itself.  Commit the results; test_cli.py compares bytes.
"""

import json
import os
from fractions import Fraction

from simact import serialize as ser
from simact.action import LatticeAction, identity_action
from simact.cli import main
from simact.measure import Adaptation
from simact.sampling import diagonal_table, markov_table, trial_rng
from simact.sim import Partition
from simact.transform import rotation, swap_halves

HERE = os.path.dirname(os.path.abspath(__file__))

F = Fraction


def write_json(name: str, obj) -> str:
    path = os.path.join(HERE, name)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(json.dumps(obj, indent=2, sort_keys=True) + "\n")
    return path


def main_fixtures():
    id4 = write_json("id4_action.json", ser.dump_action(identity_action(1, 4)))
    swap = write_json("swap_action.json", ser.dump_action(LatticeAction(1, (swap_halves(),))))
    rot3 = write_json("rot3_action.json", ser.dump_action(LatticeAction(1, (rotation(3, 1),))))
    shift = write_json(
        "quarter_shift.json",
        ser.dump_adaptation(Adaptation(((F(0), F(0)), (F(1, 2), F(1, 4))))),
    )
    diag = write_json(
        "diag_halves_table.json",
        ser.dump_table(diagonal_table(Partition((F(0), F(1, 2))), [F(1, 2), F(1, 2)], 2)),
    )
    markov = write_json(
        "markov_table.json",
        ser.dump_table(markov_table(trial_rng(42, 0), p=2, w=2, max_resolution=2000)),
    )

    out = lambda name: os.path.join(HERE, name)
    runs = [
        ["dist", id4, swap, "--terms", "4", "--depth", "3", "--out", out("expected_dist.csv")],
        ["embed", shift, rot3, "--w", "2", "--cuts", "0,1/2", "--out", out("expected_embed.json")],
        ["realize", markov, "--out", out("expected_realize.json")],
        ["smooth", diag, "--delta", "1/4", "--steps", "3", "--out", out("expected_smooth.csv")],
        ["graph-test", diag, "--epsilon", "1/8", "--out", out("expected_graph_test.csv")],
    ]
    for argv in runs:
        code = main(argv)
        assert code == 0, f"fixture run failed ({code}): {argv}"


if __name__ == "__main__":
    main_fixtures()
