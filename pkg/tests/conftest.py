import textwrap

import pytest

from warpgate.catalog import Catalog
from warpgate.engine import DiscoveryEngine
from warpgate.sampling import SampleSpec


def write(path, body):
    path.write_text(textwrap.dedent(body).lstrip(), encoding="utf-8")


@pytest.fixture
def corpus_dir(tmp_path):
    """Three small tables; users.email and contacts.mail are joinable."""
    root = tmp_path / "corpus"
    root.mkdir()
    write(
        root / "users.csv",
        """
        user_id,email,city
        u1,ada@example.com,london
        u2,lin@example.com,paris
        u3,bob@example.com,oslo
        u4,kim@example.com,rome
        """,
    )
    write(
        root / "contacts.csv",
        """
        mail,phone
        ada@example.com,111
        lin@example.com,222
        sam@example.com,333
        """,
    )
    write(
        root / "inventory.csv",
        """
        sku,qty
        WIDGET-9931,5
        GADGET-1248,9
        SPROCKET-77,2
        """,
    )
    return root


@pytest.fixture
def catalog(corpus_dir):
    cat = Catalog()
    report = cat.register_corpus(corpus_dir)
    assert not report.rejected
    return cat


@pytest.fixture
def engine(catalog, corpus_dir):
    return DiscoveryEngine.build(
        catalog,
        sample_spec=SampleSpec(strategy="full", size=0),
        corpus_root=str(corpus_dir),
    )
