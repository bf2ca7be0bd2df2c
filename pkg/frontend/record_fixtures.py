"""Record API fixtures for the frontend tests.

Runs the real engine on the seeded planted-expert scenario and saves the
exact response bodies the UI consumes. Re-run after any wire-format
change:  python3 frontend/record_fixtures.py
"""

import pathlib

from fastapi.testclient import TestClient

from socialspace import Engine, EngineConfig, load_community
from socialspace.api import create_app
from socialspace.scenario import ScenarioSpec, category_ids, generate_document

OUT = pathlib.Path(__file__).parent / "fixtures"
OUT.mkdir(exist_ok=True)

SEED = 5
QUERY_ID = "fixture-q"
CATEGORY = "c00"


def save(name: str, response) -> None:
    assert response.status_code == 200, (name, response.status_code, response.text)
    (OUT / name).write_bytes(response.content)
    print(f"recorded {name} ({len(response.content)} bytes)")


def main() -> None:
    planted = {cid: (7 * k + 3) % 43 for k, cid in enumerate(category_ids(19))}
    doc = generate_document(ScenarioSpec(seed=SEED, planted_experts=planted))
    engine = Engine(EngineConfig(), load_community(doc))
    client = TestClient(create_app(engine))

    save("members.json", client.get("/members"))
    save("categories.json", client.get("/categories"))
    save("graph.json", client.get("/graph"))
    save("member0.json", client.get("/members/0"))
    save("config.json", client.get("/config"))

    save("recommendation.json", client.post("/recommendations", json={
        "query_id": QUERY_ID,
        "user": 0,
        "category": CATEGORY,
        "urgency": "whenever",
        "user_languages": ["en"],
        "beta_override": 0.0,
    }))
    save("trace.json", client.get(f"/queries/{QUERY_ID}"))

    # grid spanning the whole scene so cells beyond the 2 m social
    # distance of every recommended member are present
    expert = planted[CATEGORY]
    position = engine.snapshot().members[expert].position()
    save("field.json", client.post("/field", json={
        "query_id": QUERY_ID,
        "hip": list(position),
        "grid": {"min": [0, 0, 0], "max": [20, 15, 0], "shape": [40, 30, 1]},
    }))


if __name__ == "__main__":
    main()
