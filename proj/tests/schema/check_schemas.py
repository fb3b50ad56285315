#!/usr/bin/env python3
"""Wire conformance: the shared schemas against what the C++ side produces.

usage: check_schemas.py SCHEMA_DIR FIXTURE_DIR HALCOR_BINARY

Starts `halcor mock-backend` on a free port, sends schema-valid requests to
the three routes and validates every reply (success and error bodies). Then
runs `halcor correct` on the fixture samples and validates the traces.
"""

import json
import pathlib
import socket
import subprocess
import sys
import time

import jsonschema
import referencing
import requests


def load_schemas(schema_dir):
    schemas = {p.name: json.loads(p.read_text()) for p in schema_dir.glob("*.schema.json")}
    for s in schemas.values():
        jsonschema.Draft202012Validator.check_schema(s)
    registry = referencing.Registry().with_resources(
        (name, referencing.Resource.from_contents(s)) for name, s in schemas.items())
    return {name: jsonschema.Draft202012Validator(s, registry=registry) for name, s in schemas.items()}


def free_port():
    with socket.socket() as s:
        s.bind(("127.0.0.1", 0))
        return s.getsockname()[1]


def wait_for(port, proc):
    for _ in range(100):
        if proc.poll() is not None:
            raise RuntimeError("mock backend exited early")
        try:
            with socket.create_connection(("127.0.0.1", port), timeout=0.1):
                return
        except OSError:
            time.sleep(0.05)
    raise RuntimeError("mock backend did not start")


def main():
    schema_dir, fixtures, binary = pathlib.Path(sys.argv[1]), pathlib.Path(sys.argv[2]), sys.argv[3]
    v = load_schemas(schema_dir)
    failures = []

    def check(name, instance, what):
        errors = sorted(v[name].iter_errors(instance), key=str)
        if errors:
            failures.append(f"{what}: {errors[0].message}")

    detect_fixture = json.loads((fixtures / "mock" / "detect.json").read_text())
    vqa_fixture = json.loads((fixtures / "mock" / "vqa.json").read_text())

    port = free_port()
    proc = subprocess.Popen([binary, "--mock", str(fixtures / "mock"), "mock-backend", "--port", str(port)],
                            stderr=subprocess.DEVNULL)
    try:
        wait_for(port, proc)
        base = f"http://127.0.0.1:{port}"

        for image, dets in detect_fixture.items():
            phrases = sorted({d["phrase"] for d in dets}) or ["person"]
            body = {"image_ref": image, "phrases": phrases, "box_threshold": 0.35, "text_threshold": 0.25}
            check("detect_request.schema.json", body, f"detect request {image}")
            r = requests.post(base + "/v1/detect", json=body, timeout=5)
            if r.status_code != 200:
                failures.append(f"detect {image}: status {r.status_code}")
                continue
            reply = r.json()
            check("detect_response.schema.json", reply, f"detect response {image}")
            for d in reply["detections"]:
                x1, y1, x2, y2 = d["box"]
                if not (x1 < x2 and y1 < y2):
                    failures.append(f"detect {image}: degenerate box {d['box']}")

        for image, answers in vqa_fixture.items():
            for question in answers:
                body = {"image_ref": image, "question": question}
                check("vqa_request.schema.json", body, f"vqa request {image}")
                r = requests.post(base + "/v1/vqa", json=body, timeout=5)
                if r.status_code != 200:
                    failures.append(f"vqa {image} '{question}': status {r.status_code}")
                    continue
                check("vqa_response.schema.json", r.json(), f"vqa response {image}")

        chat = {"system": "You are a language assistant that helps to extract information from given sentences.",
                "prompt": "Sentence:\nThree cats are sleeping on a bed.\n\nOutput:", "temperature": 0,
                "max_tokens": 64}
        check("chat_request.schema.json", chat, "chat request")
        r = requests.post(base + "/v1/chat", json=chat, timeout=5)
        if r.status_code != 200:
            failures.append(f"chat: status {r.status_code}")
        else:
            check("chat_response.schema.json", r.json(), "chat response")

        # Error paths: 422 for a request the schema rejects, 404 for an unknown image.
        bad = {"image_ref": "images/img01.jpg", "phrases": [], "box_threshold": 0.35, "text_threshold": 0.25}
        if v["detect_request.schema.json"].is_valid(bad):
            failures.append("schema accepts an empty phrase list")
        r = requests.post(base + "/v1/detect", json=bad, timeout=5)
        if r.status_code != 422:
            failures.append(f"empty phrases: expected 422, got {r.status_code}")
        check("error.schema.json", r.json(), "422 body")
        r = requests.post(base + "/v1/vqa", json={"image_ref": "images/none.jpg", "question": "Is it red?"},
                          timeout=5)
        if r.status_code != 404:
            failures.append(f"unknown image: expected 404, got {r.status_code}")
        check("error.schema.json", r.json(), "404 body")
        r = requests.post(base + "/v1/chat", data="not json", timeout=5)
        if r.status_code != 422:
            failures.append(f"invalid JSON: expected 422, got {r.status_code}")
        check("error.schema.json", r.json(), "invalid JSON body")
    finally:
        proc.terminate()
        proc.wait(timeout=5)

    for line in (fixtures / "samples.jsonl").read_text().splitlines():
        check("sample.schema.json", json.loads(line), "sample input")
    for path in (fixtures / "eval").glob("*.jsonl"):
        for line in path.read_text().splitlines():
            check("eval_record.schema.json", json.loads(line), f"record in {path.name}")

    out = subprocess.run([binary, "--mock", str(fixtures / "mock"), "correct", str(fixtures / "samples.jsonl")],
                         capture_output=True, text=True, check=True).stdout
    for i, line in enumerate(out.splitlines()):
        check("trace.schema.json", json.loads(line), f"trace {i}")

    for f in failures:
        print("FAIL", f)
    print(f"{len(failures)} schema failures")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
