import pytest
from fastapi.testclient import TestClient

from cnlasp.service import create_app

from conftest import CORPUS_SENTENCES, RAY_SENTENCES


@pytest.fixture(scope="module")
def client(workbench):
    app = create_app(workbench)
    with TestClient(app) as client:
        yield client


def new_session(client):
    response = client.post("/sessions")
    assert response.status_code == 200
    return response.json()["session_id"]


def test_session_creation_distinct(client):
    ids = {new_session(client) for _ in range(5)}
    assert len(ids) == 5


def test_unknown_session_404(client):
    assert client.get("/sessions/nope/model").status_code == 404


def test_fresh_session_empty_model(client):
    sid = new_session(client)
    body = client.get(f"/sessions/{sid}/model").json()
    assert body == {"status": "satisfiable", "model": [], "violated": []}


def test_lookahead_endpoint(client):
    sid = new_session(client)
    response = client.post(f"/sessions/{sid}/lookahead", json={"prefix": "Every student"})
    assert response.status_code == 200
    body = response.json()
    assert body["depth_used"] == 2
    surfaces = {s for sug in body["suggestions"] for s in sug["surfaces"]}
    assert "who" in surfaces


def test_lookahead_unknown_token(client):
    sid = new_session(client)
    response = client.post(f"/sessions/{sid}/lookahead", json={"prefix": "Every banana"})
    assert response.status_code == 422
    assert response.json()["detail"]["error"] == "unknown_token"


def test_lookahead_dead_end(client):
    sid = new_session(client)
    response = client.post(f"/sessions/{sid}/lookahead", json={"prefix": "student Every"})
    assert response.status_code == 422
    assert response.json()["detail"]["error"] == "no_continuation"


def test_commit_first_sentence_reference_rule(client):
    sid = new_session(client)
    response = client.post(f"/sessions/{sid}/sentences", json={"text": CORPUS_SENTENCES[0]})
    assert response.status_code == 200
    body = response.json()
    assert body["trees"] == 1
    assert len(body["rules"]) == 1
    rule = body["rules"][0]
    assert rule["id"] == 1
    assert rule["head"] == "lit(func(successful), arg(sk(1)))"
    assert sorted(rule["pbl"]) == [
        "lit(func(student), arg(sk(1)))",
        "lit(func(work), arg(sk(1)))",
    ]
    assert rule["nbl"] == ["lit(func(absent), arg(sk(1)))"]
    kb = client.get(f"/sessions/{sid}/kb").json()["kb"]
    assert len(kb.strip().splitlines()) == 5


def test_full_corpus_then_ray(client):
    sid = new_session(client)
    for sentence in CORPUS_SENTENCES:
        response = client.post(f"/sessions/{sid}/sentences", json={"text": sentence})
        assert response.status_code == 200, response.json()
    model = client.get(f"/sessions/{sid}/model").json()
    assert model["status"] == "satisfiable"
    assert len(model["model"]) == 9
    for sentence in RAY_SENTENCES:
        response = client.post(f"/sessions/{sid}/sentences", json={"text": sentence})
        assert response.status_code == 200
    final = client.get(f"/sessions/{sid}/model").json()
    assert final["status"] == "unsatisfiable"
    assert final["violated"] == [9]


def test_error_atomicity(client):
    sid = new_session(client)
    client.post(f"/sessions/{sid}/sentences", json={"text": CORPUS_SENTENCES[2]})
    before = client.get(f"/sessions/{sid}/kb").json()["kb"]
    bad = client.post(f"/sessions/{sid}/sentences", json={"text": "student Every ."})
    assert bad.status_code == 422
    after = client.get(f"/sessions/{sid}/kb").json()["kb"]
    assert before == after


def test_replay_determinism(client):
    first = new_session(client)
    for sentence in CORPUS_SENTENCES:
        assert client.post(f"/sessions/{first}/sentences", json={"text": sentence}).status_code == 200
    second = new_session(client)
    for sentence in CORPUS_SENTENCES:
        assert client.post(f"/sessions/{second}/sentences", json={"text": sentence}).status_code == 200
    kb_first = client.get(f"/sessions/{first}/kb").json()["kb"]
    kb_second = client.get(f"/sessions/{second}/kb").json()["kb"]
    assert kb_first == kb_second


def test_retract_last(client):
    sid = new_session(client)
    for sentence in CORPUS_SENTENCES + RAY_SENTENCES:
        client.post(f"/sessions/{sid}/sentences", json={"text": sentence})
    assert client.get(f"/sessions/{sid}/model").json()["status"] == "unsatisfiable"
    model = client.delete(f"/sessions/{sid}/sentences/last").json()
    assert model["status"] == "satisfiable"


def test_retract_on_empty(client):
    sid = new_session(client)
    response = client.delete(f"/sessions/{sid}/sentences/last")
    assert response.status_code == 422


def test_hundred_concurrent_session_creations(client):
    from concurrent.futures import ThreadPoolExecutor

    def create(_):
        return client.post("/sessions").json()["session_id"]

    with ThreadPoolExecutor(max_workers=16) as pool:
        ids = list(pool.map(create, range(100)))
    assert len(set(ids)) == 100


def test_lexicon_hot_reload(tmp_path_factory):
    from importlib import resources

    from cnlasp.workbench import Workbench

    tmp = tmp_path_factory.mktemp("lex")
    path = tmp / "lexicon.lp"
    base = resources.files("cnlasp").joinpath("assets/lexicon.lp").read_text()
    path.write_text(base)
    bench = Workbench(lexicon_path=str(path))
    assert bench.lexicon.lookup("noun", "teacher") == []
    path.write_text(base + 'lexicon(noun, "teacher", teacher, sg, n).\n')
    import os

    os.utime(path, ns=(1, 1))  # force a visible mtime change
    assert bench.maybe_reload_lexicon()
    assert len(bench.lexicon.lookup("noun", "teacher")) == 1
    assert not bench.maybe_reload_lexicon()
