import subprocess
import sys

import pytest

from nlibaselines.data import bundle_splits


@pytest.fixture(scope="session")
def bundle_dir(tmp_path_factory):
    """A mini bundle produced by the generator CLI (the file interface)."""
    out = tmp_path_factory.mktemp("data") / "mini"
    subprocess.run(
        [sys.executable, "-m", "sysnli.cli", "generate",
         "--condition", "mini", "--seed", "7", "--out", str(out)],
        check=True, capture_output=True,
    )
    return out


@pytest.fixture(scope="session")
def mini_splits(bundle_dir):
    return bundle_splits(bundle_dir)
