import pytest

import gitfix


@pytest.fixture(scope="session")
def wombat_repo(tmp_path_factory):
    return gitfix.build_wombat(tmp_path_factory.mktemp("wombat"))


@pytest.fixture(scope="session")
def service_repo(tmp_path_factory):
    return gitfix.build_service(tmp_path_factory.mktemp("service"))


@pytest.fixture(scope="session")
def telemetry_repo(tmp_path_factory):
    return gitfix.build_telemetry(tmp_path_factory.mktemp("telemetry"))


@pytest.fixture(scope="session")
def worker_repos(tmp_path_factory):
    renamed = gitfix.build_worker_renamed(tmp_path_factory.mktemp("worker_renamed"))
    control = gitfix.build_worker_control(tmp_path_factory.mktemp("worker_control"))
    return renamed, control


@pytest.fixture(scope="session")
def copyshop_repo(tmp_path_factory):
    return gitfix.build_copyshop(tmp_path_factory.mktemp("copyshop"))
