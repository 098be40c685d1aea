import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

DATA_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), "data")


@pytest.fixture(scope="session")
def results_csv():
    return os.path.join(DATA_DIR, "results.csv")


@pytest.fixture(scope="session")
def fit_json():
    return os.path.join(DATA_DIR, "fit.json")
