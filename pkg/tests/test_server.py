"""HTTP session service: session lifecycle, error codes, persistence."""

import pytest
from fastapi.testclient import TestClient

from minilog.kernel import check_derivation
from minilog.server import create_app
from minilog.textio import parse_derivation, parse_script

from helpers import load

CHAIN_COMMANDS = [
    "intro.", "apply H3.", "assert (q \\/ r) as H5.", "apply H1.", "trivial.",
    "destruct H5.", "apply H2.", "trivial.", "trivial.",
]


@pytest.fixture()
def client():
    return TestClient(create_app())


def make_session(client, theorem=None):
    r = client.post("/sessions", json={"theorem": theorem or load("chain.thm")})
    assert r.status_code == 200
    return r.json()["id"], r.json()["state"]


class TestSessions:
    def test_create_shows_goal(self, client):
        _, state = make_session(client)
        assert state["goals"] == ["H1: p -> q \\/ r, H2: q -> r, H3: r -> s |- p -> s"]
        assert state["terminal"] is False
        assert state["goal_details"][0]["conclusion"]["kind"] == "imp"

    def test_intro_extends_context(self, client):
        sid, _ = make_session(client)
        r = client.post(f"/sessions/{sid}/tactic", json={"text": "intro."})
        assert r.status_code == 200
        assert r.json()["goals"] == [
            "H1: p -> q \\/ r, H2: q -> r, H3: r -> s, H4: p |- s"
        ]

    def test_bad_tactic_is_422_with_code(self, client):
        sid, _ = make_session(client)
        client.post(f"/sessions/{sid}/tactic", json={"text": "intro."})
        r = client.post(f"/sessions/{sid}/tactic", json={"text": "split."})
        assert r.status_code == 422
        body = r.json()
        assert body["code"] == "TacticMismatch"
        assert body["step"] == 2
        # state unchanged
        assert client.get(f"/sessions/{sid}").json()["goals"][0].endswith("|- s")

    def test_unknown_session_404(self, client):
        assert client.get("/sessions/zzz").status_code == 404
        assert client.post("/sessions/zzz/tactic", json={"text": "intro."}).status_code == 404

    def test_unparsable_theorem_422(self, client):
        r = client.post("/sessions", json={"theorem": "theorem oops : p ->"})
        assert r.status_code == 422

    def test_undo_roundtrip(self, client):
        sid, initial = make_session(client)
        client.post(f"/sessions/{sid}/tactic", json={"text": "intro."})
        r = client.post(f"/sessions/{sid}/undo")
        assert r.status_code == 200
        assert r.json()["goals"] == initial["goals"]
        assert r.json()["script"] == ""

    def test_undo_on_fresh_session_422(self, client):
        sid, _ = make_session(client)
        r = client.post(f"/sessions/{sid}/undo")
        assert r.status_code == 422
        assert r.json()["code"] == "EmptyHistory"

    def test_full_run_export_and_recheck(self, client):
        sid, _ = make_session(client)
        for cmd in CHAIN_COMMANDS:
            r = client.post(f"/sessions/{sid}/tactic", json={"text": cmd})
            assert r.status_code == 200, (cmd, r.json())
        state = client.get(f"/sessions/{sid}").json()
        assert state["terminal"] is True
        assert state["goals"] == []

        script_text = client.get(f"/sessions/{sid}/script").text
        assert parse_script(script_text).tactics == parse_script("".join(
            c + "\n" for c in CHAIN_COMMANDS
        )).tactics

        r = client.get(f"/sessions/{sid}/derivation")
        assert r.status_code == 200
        d = parse_derivation(r.text).to_derivation()
        assert check_derivation(d).ok

    def test_derivation_on_open_session_409(self, client):
        sid, _ = make_session(client)
        r = client.get(f"/sessions/{sid}/derivation")
        assert r.status_code == 409

    def test_session_script_replays_to_state(self, client):
        # the stored script must always reproduce the stored state
        sid, _ = make_session(client)
        for cmd in CHAIN_COMMANDS[:4]:
            client.post(f"/sessions/{sid}/tactic", json={"text": cmd})
        client.post(f"/sessions/{sid}/undo")
        state = client.get(f"/sessions/{sid}").json()
        script = parse_script(client.get(f"/sessions/{sid}/script").text)

        from minilog.tactics import replay
        from minilog.textio import parse_theorem, render_sequent

        thm = parse_theorem(load("chain.thm"))
        result = replay(thm.initial_sequent(), script)
        assert result.error is None
        assert [render_sequent(g) for g in result.final.goals] == state["goals"]


class TestPersistence:
    def test_sessions_survive_restart(self, tmp_path):
        store_dir = str(tmp_path / "sessions")
        app1 = create_app(persist_dir=store_dir)
        c1 = TestClient(app1)
        sid, _ = make_session(c1)
        for cmd in CHAIN_COMMANDS[:3]:
            c1.post(f"/sessions/{sid}/tactic", json={"text": cmd})
        c1.post(f"/sessions/{sid}/undo")
        before = c1.get(f"/sessions/{sid}").json()

        app2 = create_app(persist_dir=store_dir)
        c2 = TestClient(app2)
        after = c2.get(f"/sessions/{sid}").json()
        assert after == before

    def test_ephemeral_by_default(self):
        c1 = TestClient(create_app())
        sid, _ = make_session(c1)
        c2 = TestClient(create_app())
        assert c2.get(f"/sessions/{sid}").status_code == 404
