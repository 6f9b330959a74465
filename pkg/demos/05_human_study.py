"""Host a rating study over HTTP and analyze scripted judgments.

Builds a pairwise caption study and an audio-text matching study, serves
them from the eval service, walks two scripted raters through every item,
and prints the resulting analysis.
"""

import tempfile
from pathlib import Path

import requests

from musetune.service import EvalService, StudyStore
from musetune.study import build_matching_study, build_pairwise_study

captions = {
    "mine": {f"clip{i}": f"a waltz in 3/4 with accordion, take {i}" for i in range(6)},
    "other": {f"clip{i}": f"music is playing, take {i}" for i in range(6)},
}
pairwise = build_pairwise_study(captions, "mine", n_pairs=6, seed=0)

matching_outputs = {
    ("mine", "What mood does this piece convey?", f"clip{i}"): f"a {m} mood, clearly"
    for i, m in enumerate(["joyful", "somber", "tense", "dreamy", "playful"])
}
matching = build_matching_study(matching_outputs, seed=0)

work = Path(tempfile.mkdtemp(prefix="musetune-study-"))
store = StudyStore(work / "judgments.jsonl")
service = EvalService(store, port=0).start()
try:
    def upload(items):
        resp = requests.post(f"{service.url}/api/studies",
                             json={"items": [i.to_json_dict() for i in items]})
        return resp.json()["study_id"]

    def rate_all(study_id, rater, value_fn):
        while True:
            nxt = requests.get(f"{service.url}/api/studies/{study_id}/items/next",
                               params={"rater": rater}).json()
            if nxt["done"]:
                return
            item = nxt["item"]
            requests.post(f"{service.url}/api/judgments", json={
                "study_id": study_id, "item_id": item["item_id"],
                "rater_id": rater, "value": value_fn(item),
            })

    pw_id = upload(pairwise)
    mt_id = upload(matching)

    # rater A loves the second option; rater B mildly prefers the first
    rate_all(pw_id, "raterA", lambda item: 6)
    rate_all(pw_id, "raterB", lambda item: 3)
    # both raters always pick option 0 in the matching study
    rate_all(mt_id, "raterA", lambda item: 0)
    rate_all(mt_id, "raterB", lambda item: 0)

    pw_report = requests.get(f"{service.url}/api/studies/{pw_id}/results").json()
    mt_report = requests.get(f"{service.url}/api/studies/{mt_id}/results").json()
finally:
    service.stop()

print("pairwise win rates (rule:", pw_report["rules"]["pairwise"] + "):")
for model, stats in pw_report["pairwise"]["win_rates"].items():
    print(f"  {model:6s} wins={stats['wins']} losses={stats['losses']} "
          f"rate={stats['rate']:.2f}")
print(f"\nmatching accuracy: {mt_report['matching']['overall_accuracy']:.2f} "
      f"(chance {mt_report['matching']['chance_level']:.2f})")
print(f"judgment log: {work}/judgments.jsonl")
