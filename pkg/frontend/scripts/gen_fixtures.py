"""Regenerate the replay fixtures by driving scripted sessions through the
stepping service.  Each fixture records, step by step, the full /enabled
response the client saw, the move index it picked, and the /fire response —
so the client test suite can replay the exact session offline and the
recorded state sequence stays tied to the engine.

Run from the repository root:  python3 frontend/scripts/gen_fixtures.py
"""

import json
import pathlib

from fastapi.testclient import TestClient

from rpnets.server import create_app

ROOT = pathlib.Path(__file__).resolve().parents[2]
NETS = ROOT / "src" / "rpnets" / "nets"
OUT = ROOT / "frontend" / "fixtures"


def record_session(net_name, picks):
    client = TestClient(create_app())
    with open(NETS / net_name) as fh:
        net_doc = json.load(fh)
    created = client.post("/session", json={"net": net_doc}).json()
    sid = created["session"]
    steps = []
    for direction, index in picks:
        enabled = client.get(
            f"/session/{sid}/enabled", params={"direction": direction}
        ).json()
        fired = client.post(
            f"/session/{sid}/fire",
            json={
                "version": enabled["version"],
                "direction": direction,
                "moveIndex": index,
            },
        )
        fired.raise_for_status()
        steps.append({
            "direction": direction,
            "enabled": enabled,
            "pick": index,
            "fire": fired.json(),
        })
    final_enabled = client.get(
        f"/session/{sid}/enabled", params={"direction": "both"}
    ).json()
    lts = client.get(f"/session/{sid}/lts", params={"maxStates": 64}).json()
    return {
        "net": net_doc,
        "created": created,
        "steps": steps,
        "finalEnabled": final_enabled,
        "lts": lts,
    }


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    fixtures = {
        "catalysis.replay.json": record_session(
            "catalysis.rpn.json",
            [("forward", 0), ("forward", 0), ("reverse", 0)],
        ),
        "deadlock.replay.json": record_session(
            "deadlock.rpn.json",
            [("forward", 0)],
        ),
    }
    for name, doc in fixtures.items():
        path = OUT / name
        with open(path, "w") as fh:
            json.dump(doc, fh, indent=1)
            fh.write("\n")
        print("wrote", path)


if __name__ == "__main__":
    main()
