"""
Tests for the α, λ′ and training-size protocols.
"""
from src.eval.protocols import alpha_sweep, generator_seeds, lambda_sweep, train_size_sweep


def test_generator_seeds_are_distinct():
    """Test seeds for several generators."""
    seeds = generator_seeds(0, 4)
    assert len(set(seeds)) == 4
    assert seeds == generator_seeds(0, 4)


def test_alpha_sweep(two_gaussians, tiny_pgan_config, make_experiment):
    """Test one report per α."""
    exp = make_experiment(fractions=[0.0, 0.2], n_runs=1)

    reports = alpha_sweep(two_gaussians, tiny_pgan_config, exp, [0.0, 1.0])

    assert sorted(reports) == [0.0, 1.0]
    assert all(len(r) == 2 for r in reports.values())


def test_lambda_sweep(two_gaussians, tiny_pgan_config, make_experiment):
    """Test one report per λ′."""
    exp = make_experiment(fractions=[0.2], n_runs=1, n_generators=2)

    reports = lambda_sweep(two_gaussians, tiny_pgan_config, exp, [0.5, 2.0])

    assert sorted(reports) == [0.5, 2.0]
    assert all(len(r) == 2 for r in reports.values())


def test_train_size_sweep(two_gaussians, tiny_model, make_experiment):
    """Test each size gets a clean and a poisoned fraction."""
    exp = make_experiment(n_runs=1)

    reports = train_size_sweep(two_gaussians, [tiny_model], exp, [5, 10], 0.2)

    assert sorted(reports) == [5, 10]
    assert reports[5].fractions == [0.0, 0.2]
    assert set(reports[10].to_frame()["n_train"]) == {20}
