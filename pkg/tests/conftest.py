import pytest

from sysnli.sampler import config_for_condition, generate_condition
from sysnli.semantics import build_table


@pytest.fixture(scope="session")
def default_table():
    return build_table()


@pytest.fixture(scope="session")
def mini_bundle(default_table):
    config = config_for_condition("mini", seed=7)
    return generate_condition(config, table=default_table)


@pytest.fixture(scope="session")
def gold_predictions_map(mini_bundle):
    return {item.item_id: item.gold for item in mini_bundle.all_items()}
