import pathlib
import sys

import pytest

try:
    import isolab  # noqa: F401
except ImportError:  # running from a checkout without installation
    sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from isolab import catalog


@pytest.fixture(scope="session")
def fam_great():
    return catalog("great-sphere", n=3)


@pytest.fixture(scope="session")
def fam_clifford():
    return catalog("clifford", k=1, n=2)


@pytest.fixture(scope="session")
def fam_clifford_asym():
    return catalog("clifford", k=1, n=3)


@pytest.fixture(scope="session")
def fam_cartan():
    return catalog("cartan-cubic")


@pytest.fixture(scope="session")
def fam_nomizu():
    return catalog("nomizu-quartic", n=2)


@pytest.fixture(scope="session")
def all_families(fam_great, fam_clifford, fam_cartan, fam_nomizu):
    return [fam_great, fam_clifford, fam_cartan, fam_nomizu]


@pytest.fixture(scope="session")
def perturbed_clifford():
    """Negative control: one coefficient off by 1e-3, built unverified."""
    base = catalog("clifford", k=1, n=2)
    terms = base.polynomial.terms()
    coeff, exps = terms[0]
    terms[0] = (coeff + 1e-3, exps)
    return catalog("user-polynomial", terms=terms, ambient_dim=4, g=2,
                   m1=1, m2=1, label="perturbed-clifford", verify=False)
