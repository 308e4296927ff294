"""Walk a full questionnaire against a running service and print the report.

Start the service first (``diagnet serve``), then:
    python scripts/demo_session.py --base http://127.0.0.1:8000 --patient demo

By default the answers confirm the positive hypertension indicators and skip
everything else.
"""

import argparse
import json
import urllib.request

HYPERTENSION_ANSWERS = {2: 2, 3: 3, 5: 1, 6: 4, 9: 1, 21: 1, 41: 3}


def call(base, method, path, body=None):
    data = None if body is None else json.dumps(body).encode()
    req = urllib.request.Request(base + path, data=data, method=method,
                                 headers={"Content-Type": "application/json"})
    with urllib.request.urlopen(req, timeout=10) as resp:
        return json.loads(resp.read())


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--base", default="http://127.0.0.1:8000")
    parser.add_argument("--patient", default="demo")
    args = parser.parse_args()

    session = call(args.base, "POST", "/sessions",
                   {"patient_label": args.patient})["session"]
    sid = session["session_id"]
    print(f"session {sid} (kb version {session['kb_version']})")

    while True:
        q = call(args.base, "GET", f"/sessions/{sid}/question")
        if q["done"]:
            break
        s = q["symptom_index"]
        if s in HYPERTENSION_ANSWERS:
            choice = HYPERTENSION_ANSWERS[s]
            print(f"  {s:2d} {q['symptom']}: {q['indicators'][choice - 1]}")
            call(args.base, "POST", f"/sessions/{sid}/answer",
                 {"indicator_index": choice})
        else:
            call(args.base, "POST", f"/sessions/{sid}/answer", {"skip": True})

    report = call(args.base, "POST", f"/sessions/{sid}/finalize")["report"]
    print()
    print(report["summary"])


if __name__ == "__main__":
    main()
