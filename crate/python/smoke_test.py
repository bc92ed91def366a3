"""Quick end-to-end check of the randturn_py extension module.

Build and install first:  pip install -e crates/python --no-build-isolation
"""

from fractions import Fraction

import randturn_py as rt


def main():
    # Optimal play and the random-subset probability agree exactly.
    fam = rt.SetFamily(4, [[0, 1], [2, 3]])
    for p in ["1/10", "1/3", "1/2", "9/10"]:
        assert fam.game_value(p) == fam.random_subset_probability(p)
    q = Fraction(1, 3) ** 2
    assert fam.game_value("1/3") == 1 - (1 - q) ** 2
    assert abs(fam.game_value("0.5", arithmetic="float") - 7 / 16) < 1e-12
    assert fam.wins([0, 1, 3]) and not fam.wins([0, 2])
    for f in rt.SetFamily.random_monotone(6, 5, seed=1):
        assert f.game_value("2/5") == f.random_subset_probability("2/5")

    # Checkers on small graphs.
    cycle = rt.Graph(6, [(i, (i + 1) % 6) for i in range(6)])
    assert cycle.is_hamiltonian() and len(cycle.hamilton_cycle()) == 6
    ok, sep = rt.Graph(4, [(0, 1), (1, 2), (2, 3)]).k_connectivity(2)
    assert not ok and len(sep) == 1
    assert len(rt.Graph(5, [(0, 1), (2, 3)]).components()) == 3
    passes, witness, _ = rt.Graph.from_edge_list("0 1\n1 2\n").expander(1, 2)
    assert not passes and witness
    assert rt.Graph(4, [(0, 1), (1, 2), (2, 3)]).boosters()[0] >= 1

    # Games.
    res = rt.play_graph_game("ham", 20, 1.0, seed=3, d=2, beta=0.2)
    assert res.winner == "maker" and res.maker_graph.is_hamiltonian()
    star = rt.play_graph_game("isolate", 40, 0.05, maker="random", breaker="star", seed=1, d=1)
    assert star.winner in ("maker", "breaker") and star.turns == len(star.moves)
    box = rt.play_box([5] * 200, 0.2, seed=7)
    assert box.winner in ("maker", "breaker")

    # Harness.
    assert rt.derive_trial_seed(0, 0) == rt.derive_trial_seed(0, 0)
    assert rt.derive_trial_seed(0, 0) != rt.derive_trial_seed(0, 1)
    lo, hi = rt.wilson_interval(5, 10)
    assert lo < 0.5 < hi
    freq, lo, hi = rt.gnp_probability(30, 0.5, "mindeg1", 50, seed=2)
    assert lo <= freq <= hi
    csv = rt.run_experiment(
        '{"game": "isolate", "n_values": [12], "p_values": [0.5], "trials": 8, "base_seed": 4}'
    )
    lines = csv.strip().splitlines()
    assert lines[0] == rt.CSV_HEADER and len(lines) == 2

    print("smoke test passed")


if __name__ == "__main__":
    main()
