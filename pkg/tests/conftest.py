import pytest

from comodule_splitter.generators import shipped_corpus


def pytest_addoption(parser):
    parser.addoption(
        "--seed",
        type=int,
        default=20260815,
        help="base seed for randomized property tests",
    )


@pytest.fixture(scope="session")
def base_seed(request) -> int:
    return request.config.getoption("--seed")


@pytest.fixture(scope="session")
def corpus():
    return shipped_corpus()


@pytest.fixture(scope="session")
def corpus_dir(tmp_path_factory, corpus) -> str:
    from comodule_splitter.definitions import write_bundle

    d = tmp_path_factory.mktemp("corpus")
    for bundle in corpus:
        write_bundle(bundle, str(d))
    return str(d)
