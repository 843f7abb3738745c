#!/usr/bin/env python3
# Copyright 2026 The repro-bench Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Writes the files under tests/fixtures using only the Python stdlib.

The encoders here are written independently of the C++ code, so the C++
tests that read these files double as cross-implementation checks of the
record, journal and frame formats.

Usage: make_fixtures.py OUT_DIR
"""

import hashlib
import json
import struct
import sys
import zlib
from pathlib import Path


def canonical(obj):
    return json.dumps(obj, sort_keys=True, separators=(",", ":"),
                      ensure_ascii=False)


def journal_line(payload):
    crc = zlib.crc32(payload.encode()) & 0xFFFFFFFF
    return f"{payload}|{crc:08x}\n"


def frame(payload):
    body = payload.encode()
    return struct.pack(">I", len(body)) + body


def chain(seed, indices):
    d = hashlib.sha256(struct.pack(">Q", seed)).digest()
    for i in indices:
        d = hashlib.sha256(d + struct.pack(">Q", i)).digest()
    return d.hex()


def spec(bug, evaluation, model="vgg16", planned=5, state="12345"):
    return {
        "artifact": f"{bug}-{evaluation}.whl",
        "bug_identifier": bug,
        "challenge": "cifar10",
        "epochs": 30,
        "evaluation_type": evaluation,
        "model": model,
        "planned_runs": planned,
        "software": "torch-1.7",
        "state": state,
    }


def golden_frames():
    manifest_digest = hashlib.sha256(b"manifest").hexdigest()
    messages = [
        ("HELLO", {"protocol_version": 1, "type": "HELLO"}),
        ("HELLO_ACK", {"protocol_version": 1, "type": "HELLO_ACK"}),
        ("REGISTER", {"experiment": spec("pr31433", "buggy", planned=50,
                                          state="0"),
                      "type": "REGISTER"}),
        ("REGISTERED", {"client_rng_seed": "16884643448135953451",
                        "root_seed": "4001835990586513246",
                        "split_seed": "2324561524934550759",
                        "type": "REGISTERED"}),
        ("REQUEST_SPLIT", {"echoed_seed": "4001835990586513246",
                           "experiment_key": "pr31433/buggy",
                           "run_index": 3, "type": "REQUEST_SPLIT"}),
        ("SPLIT", {"manifest_digest": manifest_digest, "run_index": 3,
                   "test_checksum": chain(7, [0, 2]),
                   "test_indices": [0, 2],
                   "train_checksum": chain(7, [3, 1]),
                   "train_indices": [3, 1], "type": "SPLIT"}),
        ("SUBMIT_METRICS", {"accuracy": "0.7", "experiment_key":
                            "pr31433/buggy", "f1": "0.69697",
                            "precision": "0.7", "recall": "0.7083333333333333",
                            "run_index": 3, "type": "SUBMIT_METRICS"}),
        ("METRICS_ACK", {"run_index": 3, "type": "METRICS_ACK"}),
        ("ERROR", {"code": "SEED_MISMATCH",
                   "detail": "echoed seed does not match", "type": "ERROR"}),
    ]
    lines = []
    for name, payload in messages:
        lines.append(f"{name} {frame(canonical(payload)).hex()}\n")
    return "".join(lines)


def metrics_journal():
    """Experiments covering each compare/summary outcome."""
    lines = []

    def experiment(s):
        lines.append(journal_line(canonical({"kind": "experiment",
                                              "spec": s})))

    def run(key, index, value):
        v = repr(value)
        lines.append(journal_line(canonical({
            "accuracy": v, "experiment_key": key, "f1": v, "kind": "run",
            "precision": v, "recall": v, "run_index": index})))

    # Full pair, clearly separated.
    experiment(spec("pr100", "buggy"))
    experiment(spec("pr100", "corrected"))
    for i in range(5):
        run("pr100/buggy", i, 0.70 + i / 1000)
        run("pr100/corrected", i, 0.80 + i / 1000)
    # Corrected side short of its plan.
    experiment(spec("pr200", "buggy"))
    experiment(spec("pr200", "corrected"))
    for i in range(5):
        run("pr200/buggy", i, 0.60 + i / 1000)
    for i in range(3):
        run("pr200/corrected", i, 0.60 + i / 1000)
    # Buggy side never ran.
    experiment(spec("pr300", "buggy"))
    experiment(spec("pr300", "corrected"))
    run("pr300/corrected", 0, 0.5)
    # Different models: not a valid pair.
    experiment(spec("pr400", "buggy", model="vgg16"))
    experiment(spec("pr400", "corrected", model="alexnet"))
    run("pr400/buggy", 0, 0.5)
    run("pr400/corrected", 0, 0.5)
    return "".join(lines)


# Published p-values (accuracy, precision, recall, f1) for the 18 measured
# bugs; the dagger marks runs that did not complete all planned runs.
STUDY_PVALUES = [
    ("study-pr31167", False, "0.62929", "0.42190", "0.58365", "0.88217"),
    ("study-pr31433", True, "0.03320", "0.00243", "0.03508", "0.01057"),
    ("study-pr31552", False, "0.92581", "0.58365", "0.97525", "0.73292"),
    ("study-pr31584", False, "0.58356", "0.56486", "0.62208", "0.57893"),
    ("study-pr32044", False, "0.84956", "0.39074", "0.78009", "0.48842"),
    ("study-pr32062", False, "0.46259", "0.87673", "0.45033", "0.77481"),
    ("study-pr32350", False, "0.48821", "0.55096", "0.53270", "0.65657"),
    ("study-pr32541", False, "0.63418", "0.63185", "0.61237", "0.39074"),
    ("study-pr32829", False, "0.50135", "0.21085", "0.50589", "0.39455"),
    ("study-pr32831", False, "0.66144", "0.94230", "0.65657", "0.95327"),
    ("study-pr32978", False, "0.31404", "0.29949", "0.35740", "0.44620"),
    ("study-pr33017", False, "0.14363", "0.21849", "0.12005", "0.10014"),
    ("study-pr35022", False, "0.28821", "0.51031", "0.29629", "0.32932"),
    ("study-pr36820", False, "0.20198", "0.53270", "0.20097", "0.57422"),
    ("study-pr36832", True, "0.30004", "0.37223", "0.26631", "0.26958"),
    ("study-pr37214", False, "0.67396", "0.72257", "0.69181", "0.69181"),
    ("study-pr38945", False, "0.40400", "0.97525", "0.36465", "0.58365"),
    ("study-pr39903", False, "0.97249", "0.74854", "0.98625", "0.93681"),
]


def study_pvalues():
    out = []
    for bug, dagger, acc, prec, rec, f1 in STUDY_PVALUES:
        out.append(canonical({"bug_id": bug, "dagger": dagger,
                              "p_accuracy": acc, "p_f1": f1,
                              "p_precision": prec, "p_recall": rec}) + "\n")
    return "".join(out)


def sample_corpus():
    def bug(n, codes=(), tags=(), stage="collected"):
        return {"bug_id": f"pr{n}", "buggy_revision": f"{n:07x}a",
                "corrected_revision": f"{n:07x}b", "favour_tags": list(tags),
                "pr_number": n, "rejection_codes": list(codes),
                "stage": stage}

    records = [
        bug(30001, ["COMPILE_ERROR"]),
        bug(30002),
        bug(30003, ["USER_CODE", "CPU_ONLY"]),
        bug(30004, [], ["GRADIENTS"], "filtered"),
        bug(30005, ["COMPILE_ERROR", "RUNTIME_CRASH"]),
        bug(30006, ["NO_AFFECTED_APP"]),
        bug(30007, [], [], "built"),
        bug(30008, [], ["MATH_FUNCTIONS", "GRADIENTS"], "evaluated"),
        bug(30009, ["RUNTIME_CRASH"]),
        bug(30010, ["CPU_ONLY"]),
    ]
    return "".join(canonical(r) + "\n" for r in records)


def corpus_funnel():
    stages = [
        ("collected", 737, "bug fixes listed in framework release notes"),
        ("filtered", 439, "after the rejection criteria"),
        ("built", 115, "buggy and corrected revisions both built"),
        ("scheduled", 49, "experiments started"),
        ("measured", 18, "experiments with comparable results"),
    ]
    return "".join(canonical({"count": c, "note": note, "stage": s}) + "\n"
                   for s, c, note in stages)


def main():
    out = Path(sys.argv[1])
    out.mkdir(parents=True, exist_ok=True)
    (out / "golden_frames.txt").write_text(golden_frames())
    (out / "metrics_small.journal").write_text(metrics_journal())
    (out / "study_pvalues.records").write_text(study_pvalues())
    (out / "sample_corpus.records").write_text(sample_corpus())
    (out / "corpus_funnel.records").write_text(corpus_funnel())


if __name__ == "__main__":
    main()
