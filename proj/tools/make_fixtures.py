#!/usr/bin/env python3
"""Writes the mock backend folder and sample inputs under fixtures/.

Every chat completion is keyed by the stage's system message and a slice of
the prompt that only that sample produces, so the fixture answers the prompts
the pipeline renders without hashing them here. Run from the repository root.
"""

import json
import pathlib

ROOT = pathlib.Path(__file__).resolve().parent.parent
MOCK = ROOT / "fixtures" / "mock"

SYS_EXTRACT = "extract information from given sentences"
SYS_QUESTIONS = "ask questions about a sentence"
SYS_CLAIM = "rewrite a question and its answer"
SYS_CORRECT = "refine a passage"

# image -> phrase -> [(box, score)]. Scores under 0.35 are dropped by the
# gateway; boxes overlapping by IoU > 0.9 collapse to the better one.
DETECTIONS = {
    "images/img01.jpg": {
        "dog": [([0.120, 0.380, 0.460, 0.910], 0.81)],
        "couch": [([0.050, 0.300, 0.950, 0.990], 0.77)],
        "window": [([0.600, 0.050, 0.900, 0.350], 0.21)],
    },
    "images/img02.jpg": {
        "cat": [([0.100, 0.400, 0.420, 0.780], 0.88), ([0.500, 0.420, 0.860, 0.800], 0.74)],
        "bed": [([0.020, 0.250, 0.980, 0.990], 0.69)],
    },
    "images/img03.jpg": {
        "man": [([0.350, 0.100, 0.650, 0.900], 0.92)],
        "bicycle": [([0.300, 0.500, 0.720, 0.950], 0.85)],
        "street": [([0.000, 0.600, 1.000, 1.000], 0.52)],
    },
    "images/img04.jpg": {
        "pizza": [([0.200, 0.300, 0.550, 0.600], 0.90)],
        "table": [([0.000, 0.250, 1.000, 1.000], 0.71)],
        "glass": [([0.700, 0.100, 0.820, 0.450], 0.64)],
    },
    "images/img05.jpg": {
        "car": [([0.100, 0.350, 0.700, 0.850], 0.89)],
        "fire hydrant": [([0.780, 0.550, 0.880, 0.900], 0.58)],
    },
    "images/img06.jpg": {},
    "images/img07.jpg": {
        "woman": [([0.250, 0.050, 0.700, 0.980], 0.93)],
        "dress": [([0.300, 0.350, 0.680, 0.980], 0.66)],
        "child": [([0.420, 0.250, 0.620, 0.600], 0.79)],
    },
    "images/img08.jpg": {
        "bird": [
            ([0.100, 0.100, 0.250, 0.220], 0.83),
            ([0.101, 0.100, 0.250, 0.221], 0.61),  # duplicate of the first
            ([0.550, 0.150, 0.700, 0.260], 0.77),
            ([0.850, 0.050, 0.900, 0.090], 0.18),
        ],
        "ocean": [([0.000, 0.450, 1.000, 1.000], 0.74)],
    },
    "images/img09.jpg": {
        "clock": [([0.400, 0.100, 0.600, 0.300], 0.87)],
        "wall": [([0.000, 0.000, 1.000, 0.700], 0.56)],
        "shelf": [([0.550, 0.600, 0.950, 0.700], 0.62)],
    },
    "images/img10.jpg": {
        "boy": [([0.150, 0.100, 0.450, 0.950], 0.91)],
        "ball": [([0.500, 0.700, 0.620, 0.850], 0.80)],
    },
}

# Every sample: response, optional question, extraction line, question lines,
# VQA answers, LLM claims for shapes the rules do not cover, corrected text.
SAMPLES = [
    dict(
        image="images/img01.jpg",
        response="A brown dog is sitting on a red couch next to a window.",
        entities="dog. couch. window",
        questions=["What color is the dog?&dog", "What color is the couch?&couch", "Where is the dog?&dog"],
        vqa={"What color is the dog?": "brown", "What color is the couch?": "blue", "Where is the dog?": "on the couch"},
        corrected="A brown dog([0.120,0.380,0.460,0.910]) is sitting on a blue couch([0.050,0.300,0.950,0.990]).",
    ),
    dict(
        image="images/img02.jpg",
        response="Three cats are sleeping on a bed.",
        entities="cat. bed",
        questions=["What are the cats doing?&cat", "What color is the bed?&bed"],
        vqa={"What are the cats doing?": "sleeping", "What color is the bed?": "white"},
        corrected="Two cats([0.100,0.400,0.420,0.780];[0.500,0.420,0.860,0.800]) are sleeping on a white "
        "bed([0.020,0.250,0.980,0.990]).",
    ),
    dict(
        image="images/img03.jpg",
        response="A man is riding a bicycle down the street while holding an umbrella.",
        entities="man. bicycle. street. umbrella",
        questions=["What is the man doing?&man", "What color is the bicycle?&bicycle"],
        vqa={"What is the man doing?": "riding a bicycle", "What color is the bicycle?": "black"},
        corrected="A man([0.350,0.100,0.650,0.900]) is riding a black bicycle([0.300,0.500,0.720,0.950]) down "
        "the street([0.000,0.600,1.000,1.000]).",
    ),
    dict(
        image="images/img04.jpg",
        response="There are two pizzas on the table and a glass of wine.",
        entities="pizza. table. glass",
        questions=["Is the pizza on the table?&pizza. table", "What color is the table?&table"],
        vqa={"Is the pizza on the table?": "yes", "What color is the table?": "brown"},
        corrected="There is one pizza([0.200,0.300,0.550,0.600]) on the brown table([0.000,0.250,1.000,1.000]) "
        "and a glass([0.700,0.100,0.820,0.450]) of wine.",
    ),
    dict(
        image="images/img05.jpg",
        response="A red car is parked next to a fire hydrant.",
        entities="car. fire hydrant",
        questions=["What color is the car?&car", "Where is the car?&car"],
        vqa={"What color is the car?": "silver", "Where is the car?": "next to the fire hydrant"},
        corrected="A silver car([0.100,0.350,0.700,0.850]) is parked next to a fire "
        "hydrant([0.780,0.550,0.880,0.900]).",
    ),
    dict(
        image="images/img06.jpg",
        response="It looks like a peaceful and relaxing day.",
        entities="None",
        questions=None,  # no entities, no question call
        vqa={},
        corrected=None,  # empty knowledge base, no correction call
    ),
    dict(
        image="images/img07.jpg",
        response="A woman in a yellow dress is holding a small child.",
        entities="woman. dress. child",
        questions=["What color is the dress?&dress", "What is the woman holding?&woman"],
        vqa={"What color is the dress?": "yellow", "What is the woman holding?": "a child"},
        corrected="A woman([0.250,0.050,0.700,0.980]) in a yellow dress([0.300,0.350,0.680,0.980]) is holding "
        "a small child([0.420,0.250,0.620,0.600]).",
    ),
    dict(
        image="images/img08.jpg",
        response="Three birds are flying over the ocean.",
        entities="bird. ocean",
        questions=["What are the birds doing?&bird", "What color is the ocean?&ocean"],
        vqa={"What are the birds doing?": "flying", "What color is the ocean?": "blue"},
        corrected="Two birds([0.100,0.100,0.250,0.220];[0.550,0.150,0.700,0.260]) are flying over the blue "
        "ocean([0.000,0.450,1.000,1.000]).",
    ),
    dict(
        image="images/img09.jpg",
        response="A clock on the wall shows three o'clock, and there is a plant on the shelf.",
        entities="clock. wall. plant. shelf",
        questions=["What time does the clock show?&clock", "What color is the wall?&wall"],
        vqa={"What time does the clock show?": "ten past two", "What color is the wall?": "green"},
        claims={("What time does the clock show?", "ten past two"): "The clock shows ten past two."},
        corrected="A clock([0.400,0.100,0.600,0.300]) on the green wall([0.000,0.000,1.000,0.700]) shows ten "
        "past two, and the shelf([0.550,0.600,0.950,0.700]) is empty.",
    ),
    dict(
        image="images/img10.jpg",
        question="Describe the image in detail.",
        response="A boy is playing with a blue ball in the park.",
        entities="boy. ball. park",
        questions=["What color is the ball?&ball", "Is the boy kicking the ball?&boy. ball"],
        vqa={"What color is the ball?": "green", "Is the boy kicking the ball?": "no"},
        corrected="A boy([0.150,0.100,0.450,0.950]) is playing with a green ball([0.500,0.700,0.620,0.850]) "
        "in the park.",
    ),
]

# Yes/no benchmark records run with --with-correction. Two per image so the
# MME scorer accepts them.
YESNO = [
    dict(image="images/img01.jpg", question="Is there a dog in the image?", gold="yes", answer="Yes",
         entities="dog", corrected="Yes, there is a dog([0.120,0.380,0.460,0.910]) in the image."),
    dict(image="images/img01.jpg", question="Is there a window in the image?", gold="no", answer="Yes.",
         entities="window", corrected="No, there is no window in the image."),
    dict(image="images/img02.jpg", question="Is there a cat in the image?", gold="yes",
         answer="No, I don't think so.", entities="cat",
         corrected="Yes, there are two cats([0.100,0.400,0.420,0.780];[0.500,0.420,0.860,0.800]) in the image."),
    dict(image="images/img02.jpg", question="Is there a bed in the image?", gold="yes", answer="yes!",
         entities="bed", corrected="Yes, there is a bed([0.020,0.250,0.980,0.990]) in the image."),
]


def declarative(question, answer):
    """Mirror of the adapter's rule for "Is there a X ...?" questions."""
    word = "yes" if answer.lower().lstrip().startswith("yes") else "no"
    rest = question[len("Is there "):].rstrip("?")
    if word == "no":
        rest = "no" + rest[rest.index(" "):]
    return ("Yes, " if word == "yes" else "No, ") + "there is " + rest + "."


def iou(a, b):
    ix = max(0.0, min(a[2], b[2]) - max(a[0], b[0]))
    iy = max(0.0, min(a[3], b[3]) - max(a[1], b[1]))
    inter = ix * iy
    union = (a[2] - a[0]) * (a[3] - a[1]) + (b[2] - b[0]) * (b[3] - b[1]) - inter
    return inter / union if union > 0 else 0.0


def surviving_boxes(image):
    out = []
    for phrase, dets in DETECTIONS[image].items():
        kept = []
        for box, score in sorted(dets, key=lambda d: -d[1]):
            if score < 0.35:
                continue
            if any(iou(box, k) > 0.9 for k in kept):
                continue
            kept.append(box)
        out.extend(kept)
    return {"[" + ",".join(f"{v:.3f}" for v in b) + "]" for b in out}


def check_citations(image, text):
    import re
    cited = set(re.findall(r"\[[0-9.,]+\]", text))
    missing = cited - surviving_boxes(image)
    assert not missing, f"{image}: cites boxes outside the knowledge base: {missing}"


def main():
    rules = []
    vqa = {}
    for s in SAMPLES:
        rules.append(dict(system_contains=[SYS_EXTRACT],
                          prompt_contains=[f"Sentence:\n{s['response']}\n\nOutput:"],
                          completion=s["entities"]))
        if s["questions"] is not None:
            rules.append(dict(system_contains=[SYS_QUESTIONS],
                              prompt_contains=[f"Sentence:\n{s['response']}\n\nEntities:"],
                              completion="\n".join(s["questions"])))
        for (q, a), claim in s.get("claims", {}).items():
            rules.append(dict(system_contains=[SYS_CLAIM],
                              prompt_contains=[f"Question:\n{q}\n\nAnswer:\n{a}\n\nClaim:"],
                              completion=claim))
        if s["corrected"] is not None:
            check_citations(s["image"], s["corrected"])
            rules.append(dict(system_contains=[SYS_CORRECT],
                              prompt_contains=[f"Passage:\n{s['response']}\n\nRefined passage:"],
                              completion=s["corrected"]))
        vqa.setdefault(s["image"], {}).update(s["vqa"])

    for r in YESNO:
        claim = declarative(r["question"], r["answer"])
        check_citations(r["image"], r["corrected"])
        rules.append(dict(system_contains=[SYS_EXTRACT],
                          prompt_contains=[f"Sentence:\n{claim}\n\nOutput:"],
                          completion=r["entities"]))
        rules.append(dict(system_contains=[SYS_QUESTIONS],
                          prompt_contains=[f"Sentence:\n{claim}\n\nEntities:"],
                          completion="None"))
        rules.append(dict(system_contains=[SYS_CORRECT],
                          prompt_contains=[f"Passage:\n{claim}\n\nRefined passage:"],
                          completion=r["corrected"]))

    detect = {
        image: [dict(phrase=p, box=box, score=score) for p, dets in phrases.items() for box, score in dets]
        for image, phrases in DETECTIONS.items()
    }

    MOCK.mkdir(parents=True, exist_ok=True)
    (MOCK / "chat.json").write_text(json.dumps({"by_hash": {}, "rules": rules}, indent=2) + "\n")
    (MOCK / "detect.json").write_text(json.dumps(detect, indent=2) + "\n")
    (MOCK / "vqa.json").write_text(json.dumps(vqa, indent=2, ensure_ascii=False) + "\n")

    with open(ROOT / "fixtures" / "samples.jsonl", "w") as f:
        for s in SAMPLES:
            line = {"image_ref": s["image"], "response": s["response"]}
            if "question" in s:
                line["question"] = s["question"]
            f.write(json.dumps(line) + "\n")

    eval_dir = ROOT / "fixtures" / "eval"
    eval_dir.mkdir(parents=True, exist_ok=True)
    with open(eval_dir / "yesno_records.jsonl", "w") as f:
        for r in YESNO:
            f.write(json.dumps({"image_ref": r["image"], "question": r["question"], "gold": r["gold"],
                                "answer": r["answer"], "subset": "existence"}) + "\n")


OBJECTS = ["dog", "cat", "car", "bus", "chair", "cup", "bottle", "bench", "kite", "horse", "clock", "laptop"]


def write_jsonl(path, rows):
    with open(path, "w") as f:
        for r in rows:
            f.write(json.dumps(r) + "\n")


def eval_fixtures():
    eval_dir = ROOT / "fixtures" / "eval"

    # 300 questions over 50 images with TP=52, FP=38, FN=98, TN=112.
    outcomes = ["tp"] * 52 + ["fp"] * 38 + ["fn"] * 98 + ["tn"] * 112
    rows = []
    for i, o in enumerate(outcomes):
        gold = "yes" if o in ("tp", "fn") else "no"
        said = "Yes, it is there." if o in ("tp", "fp") else "No, there is not."
        obj = OBJECTS[i % len(OBJECTS)]
        rows.append({"image_ref": f"pope/{i % 50:03d}.jpg", "question": f"Is there a {obj} in the image?",
                     "gold": gold, "answer": said, "subset": "random"})
    write_jsonl(eval_dir / "pope_confusion_300.jsonl", rows)

    # 10 problems: 7 kept correct, 1 fixed, 1 still wrong, 1 broken.
    kinds = ["kept"] * 7 + ["fixed", "still_wrong", "broken"]
    rows = []
    for i, k in enumerate(kinds):
        gold = "yes" if i % 2 == 0 else "no"
        other = "no" if gold == "yes" else "yes"
        raw = gold if k in ("kept", "broken") else other
        corrected = gold if k in ("kept", "fixed") else other
        rows.append({"image_ref": f"mme/b{i:02d}.jpg", "question": f"Is there a {OBJECTS[i]} in the image?",
                     "gold": gold, "answer": raw.capitalize(), "corrected": corrected.capitalize()})
    write_jsonl(eval_dir / "breakdown_10.jsonl", rows)

    # 30 images, 2 questions each: 18 fully right, 9 half right, 3 wrong.
    rows = []
    for img in range(30):
        right = 2 if img < 18 else (1 if img < 27 else 0)
        for q in range(2):
            gold = "yes" if q == 0 else "no"
            other = "no" if gold == "yes" else "yes"
            rows.append({"image_ref": f"mme/{img:02d}.jpg",
                         "question": f"Is there a {OBJECTS[(img + q) % len(OBJECTS)]} in the image?",
                         "gold": gold, "answer": gold if q < right else other, "subset": "existence"})
    write_jsonl(eval_dir / "mme_135.jsonl", rows)
    write_jsonl(eval_dir / "mme_all_correct.jsonl",
                [dict(r, answer=r["gold"]) for r in rows])

    judge_dir = ROOT / "fixtures" / "judge"
    judge_dir.mkdir(parents=True, exist_ok=True)
    accuracy = ("Accuracy:\nScores of the two answers: 7.1 7.8\n"
                "Reason: Assistant 2 removes the missing umbrella and fixes the count of cats.\n")
    detail = ("Detailedness:\nScores of the two answers: 7.1 8.6\n"
              "Reason: Assistant 2 adds colors and boxes for each object.\n")
    (judge_dir / "well_formed.txt").write_text(accuracy + "\n" + detail)
    (judge_dir / "sections_swapped.txt").write_text(detail + "\n" + accuracy)
    (judge_dir / "out_of_range.txt").write_text(accuracy.replace("7.1 7.8", "11 3") + "\n" + detail)
    (judge_dir / "missing_section.txt").write_text(accuracy)

    pope_dir = ROOT / "fixtures" / "pope"
    pope_dir.mkdir(parents=True, exist_ok=True)
    annotations = {
        "coco/0001.jpg": ["person", "dog", "frisbee", "bench"],
        "coco/0002.jpg": ["person", "car", "traffic light"],
        "coco/0003.jpg": ["cat", "couch", "remote"],
        "coco/0004.jpg": ["person", "surfboard"],
        "coco/0005.jpg": ["dining table", "cup", "pizza", "person"],
        "coco/0006.jpg": ["dog", "couch", "person"],
    }
    (pope_dir / "annotations.json").write_text(json.dumps(annotations, indent=2) + "\n")
    frequency = {}
    cooccurrence = {}
    for objects in annotations.values():
        for a in set(objects):
            frequency[a] = frequency.get(a, 0) + 1
            for b in set(objects):
                if a != b:
                    cooccurrence.setdefault(a, {})[b] = cooccurrence.get(a, {}).get(b, 0) + 1
    (pope_dir / "statistics.json").write_text(
        json.dumps({"frequency": frequency, "cooccurrence": cooccurrence}, indent=2, sort_keys=True) + "\n")


if __name__ == "__main__":
    main()
    eval_fixtures()
