from fastapi.testclient import TestClient

from magiclab.main import app

client = TestClient(app)

PRIMITIVE_4 = {"k": 4, "V": ["1111"], "M": [], "Gamma": "0"}


def test_root():
    response = client.get("/")
    assert response.status_code == 200
    data = response.json()
    assert "name" in data
    assert "version" in data


def test_health():
    response = client.get("/api/v1/health")
    assert response.status_code == 200
    data = response.json()
    assert data["status"] == "healthy"
    assert "MAGICLAB_MAX_DIM" in data["caps"]


def test_entropy():
    response = client.post("/api/v1/entropy", json={"state": "t:n=1", "alphas": [2, 3]})
    assert response.status_code == 200
    data = response.json()
    assert abs(data["results"]["2"]["purity"] - 0.75) < 1e-12
    assert abs(data["results"]["3"]["purity"] - 0.625) < 1e-12


def test_entropy_errors():
    """Bad descriptors map to 400, oversized states to 413"""
    response = client.post("/api/v1/entropy", json={"state": "bogus:n=1"})
    assert response.status_code == 400
    response = client.post("/api/v1/entropy", json={"state": "t:n=1", "alphas": [1]})
    assert response.status_code == 400
    response = client.post("/api/v1/entropy", json={"state": "haar:n=40,seed=1"})
    assert response.status_code == 413


def test_genpurity():
    response = client.post("/api/v1/genpurity", json={"state": "t:n=1", "monomial": PRIMITIVE_4})
    assert response.status_code == 200
    data = response.json()
    assert abs(data["value"] - 0.75) < 1e-12
    assert data["is_unitary"] is False

    bad = dict(PRIMITIVE_4, V=["1101"])
    response = client.post("/api/v1/genpurity", json={"state": "t:n=1", "monomial": bad})
    assert response.status_code == 400


def test_monomial_actions():
    response = client.post("/api/v1/monomial/inspect", json={"monomial": PRIMITIVE_4, "n": 1})
    assert response.status_code == 200
    data = response.json()
    assert data["lambda"] == [[0]]
    assert data["trace_norm"] == 8

    response = client.post("/api/v1/monomial/transpose-search", json={"monomial": PRIMITIVE_4})
    assert response.status_code == 200
    assert response.json()["unitary"] is True

    response = client.post("/api/v1/monomial/normal-form", json={"monomial": PRIMITIVE_4})
    assert response.status_code == 200
    assert response.json()["projective_order"] == 1

    response = client.post("/api/v1/monomial/explode", json={"monomial": PRIMITIVE_4})
    assert response.status_code == 422


def test_commutant_summary():
    response = client.get("/api/v1/commutant/4")
    assert response.status_code == 200
    assert response.json()["count"] == 30
    assert client.get("/api/v1/commutant/0").status_code == 400
    assert client.get("/api/v1/commutant/9").status_code == 413


def test_property_test():
    response = client.post("/api/v1/test", json={"state": "t:n=1", "task": "stab", "k": 6})
    assert response.status_code == 200
    data = response.json()
    assert abs(data["p6"] - 19 / 32) < 1e-12
    assert data["summary"]["method"] == "formula"


def test_verify_sync_and_status():
    response = client.post("/api/v1/verify", json={"suite": "fast", "only": ["counting"]})
    assert response.status_code == 200
    data = response.json()
    assert data["status"] == "completed"
    assert data["report"]["passed"] is True

    status = client.get(f"/api/v1/verify/status/{data['job_id']}")
    assert status.status_code == 200
    assert status.json()["report"]["criteria"][0]["name"] == "counting"


def test_verify_async():
    response = client.post("/api/v1/verify", json={"only": ["1"], "async_processing": True})
    assert response.status_code == 200
    job_id = response.json()["job_id"]
    assert response.json()["status"] == "pending"

    # background tasks have run once the test client returns
    status = client.get(f"/api/v1/verify/status/{job_id}").json()
    assert status["status"] == "completed"
    assert status["report"]["passed"] is True


def test_verify_errors():
    response = client.post("/api/v1/verify", json={"only": ["nonsense"]})
    assert response.status_code == 400
    assert client.get("/api/v1/verify/status/missing").status_code == 404


if __name__ == "__main__":
    print("Testing API endpoints...")
    test_root()
    print("[OK] Root endpoint working")
    test_health()
    print("[OK] Health endpoint working")
    test_entropy()
    print("[OK] Entropy endpoint working")
    test_monomial_actions()
    print("[OK] Monomial endpoints working")
    test_verify_sync_and_status()
    print("[OK] Verification endpoint working")
    print("\nAll tests passed!")
