def test_health(client):
    response = client.get("/health")
    assert response.status_code == 200
    assert response.json() == {"status": "ok"}
    assert response.headers["X-Content-Type-Options"] == "nosniff"
    assert response.headers["X-Frame-Options"] == "DENY"
    assert response.headers["Cache-Control"] == "no-store"


def test_ready(client):
    response = client.get("/health/ready")
    assert response.status_code == 200
    assert response.json()["status"] == "ready"


def test_check(client):
    response = client.get("/fg/check", params={"k": "9", "n": 5})
    assert response.status_code == 200
    data = response.json()
    assert set(data) == {"k", "n", "member", "evidence"}
    assert data["member"] is True


def test_check_rejects_bad_input(client):
    assert client.get("/fg/check", params={"k": "abc", "n": 2}).status_code == 400
    assert client.get("/fg/check", params={"k": "1/3", "n": 2}).status_code == 400
    assert client.get("/fg/check", params={"k": "1", "n": 1000}).status_code == 400
    assert client.get("/fg/check", params={"k": "1", "n": 0}).status_code == 400


def test_phi(client):
    data = client.get("/fg/phi", params={"k": "2", "n": 2}).json()
    assert data["phi"] == ["2", "1/6"]
    assert data["integral"] is False


def test_table(client):
    rows = client.get("/fg/table", params={"pmax": 3, "nmax": 6}).json()
    assert {"p": 3, "n": 6, "e": 3, "f": 4, "status": "PROVEN_ODD_RANGE"} in rows


def test_residues(client):
    assert client.get("/fg/residues", params={"n": 2, "modulus": 24}).json()["residues"] == [0, 1, 9, 16]
    assert client.get("/fg/residues", params={"n": 2, "modulus": 12}).status_code == 400
    oversized = client.get("/fg/residues", params={"n": 3, "modulus": 360 * 100_000})
    assert oversized.status_code == 413


def test_missing_query_parameter_is_a_bad_request(client):
    assert client.get("/fg/phi", params={"k": "2"}).status_code == 400
