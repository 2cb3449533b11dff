#!/usr/bin/env python3
# Copyright 2026 The ragear Authors.
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
"""Writes the bundled synthetic corpus under data/golden.

Five courses of four lessons each. Transcripts are assembled from fixed
sentence templates and per-lesson vocabularies, and word timings follow a
closed-form rule, so the output never depends on a random generator.

Usage: make_golden_corpus.py OUT_DIR
"""

import json
import pathlib
import sys

COURSES = [
    {
        "course_id": "CHEM210",
        "title": "Organic Chemistry",
        "description": "Structure and reactivity of carbon compounds, from "
                       "functional groups to reaction mechanisms.",
        "instructor": "Giulia Romano",
        "credits": 9,
        "discipline": "CHIM/06",
        "prerequisite_ids": [],
        "lessons": [
            ("Functional groups", ["functional groups", "alcohols", "carbonyl compounds",
                                   "amines", "polarity", "hydrogen bonding"]),
            ("Stereochemistry", ["chirality", "enantiomers", "stereocenters",
                                 "optical activity", "racemic mixtures", "diastereomers"]),
            ("Substitution reactions", ["nucleophilic substitution", "leaving groups",
                                        "carbocations", "reaction mechanisms",
                                        "solvent effects", "reaction rates"]),
            ("Aromatic compounds", ["benzene", "aromaticity", "resonance structures",
                                    "electrophilic substitution", "ring currents",
                                    "conjugated systems"]),
        ],
    },
    {
        "course_id": "ECON101",
        "title": "Principles of Microeconomics",
        "description": "How households and firms make decisions and how "
                       "markets allocate scarce resources.",
        "instructor": "Luca Bianchi",
        "credits": 6,
        "discipline": "SECS-P/01",
        "prerequisite_ids": [],
        "lessons": [
            ("Supply and demand", ["supply curves", "demand curves", "market equilibrium",
                                   "price elasticity", "consumer surplus", "shortages"]),
            ("Consumer choice", ["utility functions", "budget constraints",
                                 "indifference curves", "marginal utility",
                                 "income effects", "substitution effects"]),
            ("Market structures", ["perfect competition", "monopoly pricing",
                                   "oligopoly", "barriers to entry", "market power",
                                   "price discrimination"]),
            ("Game theory", ["strategic behavior", "nash equilibrium",
                             "prisoner dilemma", "dominant strategies",
                             "repeated games", "cooperation"]),
        ],
    },
    {
        "course_id": "HIST150",
        "title": "Medieval European History",
        "description": "Society, religion and politics in Europe from the fall "
                       "of Rome to the Renaissance.",
        "instructor": "Chiara Esposito",
        "credits": 6,
        "discipline": "M-STO/01",
        "prerequisite_ids": [],
        "lessons": [
            ("The fall of Rome", ["late antiquity", "barbarian kingdoms",
                                  "roman administration", "germanic migrations",
                                  "urban decline", "imperial collapse"]),
            ("Feudal society", ["feudalism", "vassals", "manorial estates", "serfs",
                                "knights", "land tenure"]),
            ("The medieval church", ["monasteries", "papal authority", "crusades",
                                     "pilgrimage", "religious orders", "heresy"]),
            ("Towns and trade", ["merchant guilds", "trade routes", "market towns",
                                 "urban charters", "banking families", "the black death"]),
        ],
    },
    {
        "course_id": "INF220",
        "title": "Database Systems",
        "description": "Relational modelling, SQL, indexing and transaction "
                       "processing in database management systems.",
        "instructor": "Marco Ferrari",
        "credits": 9,
        "discipline": "INF/01",
        "prerequisite_ids": [],
        "lessons": [
            ("The relational model", ["relational algebra", "primary keys",
                                      "foreign keys", "normal forms", "schemas",
                                      "functional dependencies"]),
            ("SQL queries", ["select statements", "joins", "aggregation",
                             "subqueries", "query results", "views"]),
            ("Indexing", ["b-trees", "hash indexes", "query optimization",
                          "access paths", "disk pages", "index selectivity"]),
            ("Transactions", ["transactions", "isolation levels", "locking",
                              "recovery logs", "consistency", "concurrency control"]),
        ],
    },
    {
        "course_id": "INF310",
        "title": "Machine Learning",
        "description": "Supervised and unsupervised learning, from linear "
                       "models to neural networks.",
        "instructor": "Sara Conti",
        "credits": 9,
        "discipline": "INF/01",
        "prerequisite_ids": ["INF220"],
        "lessons": [
            ("Linear models", ["linear regression", "least squares", "feature vectors",
                               "regularization", "training data", "overfitting"]),
            ("Gradient descent", ["gradient descent", "learning rate", "loss functions",
                                  "convergence", "stochastic updates", "optimization"]),
            ("Neural networks", ["neural networks", "activation functions",
                                 "backpropagation", "hidden layers", "weights",
                                 "deep learning"]),
            ("Text classification", ["text classification", "word embeddings",
                                     "bag of words", "sentiment analysis",
                                     "language models", "tokenization"]),
        ],
    },
]

TEMPLATES = [
    "Today we look at {a} and how it relates to {b}.",
    "The key idea behind {a} is simple, e.g. think of {b} as a special case.",
    "Many students find {a} confusing at first.",
    "Let us work through an example of {a} step by step.",
    "Notice how {b} changes when we vary {a}.",
    "In the exam you will be asked to explain {a} in your own words!",
    "Why does {a} matter in practice?",
    "Remember that {b} depends on {a} in section 3.2 of the notes.",
    "We will come back to {a} next week, together with {b}.",
    "A common mistake is to confuse {a} with {b}.",
    "The textbook by Dr. Smith gives a clear account of {a}.",
    "To summarise, {a} and {b} are closely connected.",
]

QUERIES = [
    ("q01", "I want to learn about neural networks and gradient descent", None),
    ("q02", "database indexing and query optimization", None),
    ("q03", "chemical reactions of carbon compounds and reaction mechanisms", None),
    ("q04", "supply and demand and market equilibrium", None),
    ("q05", "feudal society and medieval knights", None),
    ("q06", "how do transactions guarantee consistency under concurrency", None),
    ("q07", "machine learning for text classification and language models", None),
    ("q08", "chirality and enantiomers", None),
    ("q09", "strategic behavior and nash equilibrium in game theory", None),
    ("q10", "learning from data", {"discipline": "INF/01"}),
]

# Intended graded relevance for the demo qrels; unlisted pairs are 0.
QRELS = {
    "q01": {"INF310": 5, "INF220": 1},
    "q02": {"INF220": 5, "INF310": 1},
    "q03": {"CHEM210": 5},
    "q04": {"ECON101": 5},
    "q05": {"HIST150": 5},
    "q06": {"INF220": 5},
    "q07": {"INF310": 5, "INF220": 1},
    "q08": {"CHEM210": 5},
    "q09": {"ECON101": 5},
    "q10": {"INF310": 4, "INF220": 2},
}


def lesson_sentences(course_index, lesson_index, terms):
    sentences = []
    n = len(terms)
    for step in range(24):
        template = TEMPLATES[(step + lesson_index * 5 + course_index * 3) % len(TEMPLATES)]
        a = terms[step % n]
        b = terms[(step * 5 + 1) % n]
        if a == b:
            b = terms[(step + 1) % n]
        sentences.append(template.format(a=a, b=b))
    return sentences


def timed_words(sentences):
    words = []
    t = 0.0
    for sentence in sentences:
        tokens = sentence.split()
        for i, tok in enumerate(tokens):
            start = round(t, 2)
            end = round(t + 0.18 + 0.04 * len(tok), 2)
            words.append({"text": tok, "start_s": start, "end_s": end})
            t = end + (0.45 if i == len(tokens) - 1 else 0.06)
    return words


def main():
    if len(sys.argv) != 2:
        sys.exit(__doc__)
    out = pathlib.Path(sys.argv[1])
    transcripts = out / "transcripts"
    transcripts.mkdir(parents=True, exist_ok=True)

    courses, lessons = [], []
    for ci, course in enumerate(COURSES):
        lesson_ids = []
        for li, (title, terms) in enumerate(course["lessons"]):
            lesson_id = f"{course['course_id']}-L{li + 1:02d}"
            lesson_ids.append(lesson_id)
            words = timed_words(lesson_sentences(ci, li, terms))
            lessons.append({
                "lesson_id": lesson_id,
                "course_id": course["course_id"],
                "index": li,
                "title": title,
                "duration_s": words[-1]["end_s"],
            })
            doc = {"lesson_id": lesson_id, "course_id": course["course_id"],
                   "words": words}
            (transcripts / f"{lesson_id}.json").write_text(
                json.dumps(doc, indent=1) + "\n")
        entry = {k: v for k, v in course.items() if k != "lessons"}
        entry["lesson_ids"] = lesson_ids
        courses.append(entry)

    catalogue = {
        "courses": courses,
        "lessons": lessons,
        "study_plans": [
            {"plan_id": "CS-BSC", "name": "Computer Science BSc",
             "course_ids": ["ECON101", "INF220", "INF310"]},
            {"plan_id": "HUM-BA", "name": "Humanities BA",
             "course_ids": ["ECON101", "HIST150"]},
            {"plan_id": "SCI-BSC", "name": "Natural Sciences BSc",
             "course_ids": ["CHEM210", "INF220", "INF310"]},
        ],
        "students": [
            {"student_id": "s001", "plan_id": "CS-BSC", "completed_course_ids": []},
            {"student_id": "s002", "plan_id": "CS-BSC",
             "completed_course_ids": ["INF220"]},
        ],
    }
    (out / "catalogue.json").write_text(json.dumps(catalogue, indent=2) + "\n")

    with open(out / "queries.jsonl", "w") as f:
        for qid, text, constraints in QUERIES:
            row = {"query_id": qid, "text": text}
            if constraints:
                row["constraints"] = constraints
            f.write(json.dumps(row) + "\n")

    with open(out / "qrels.txt", "w") as f:
        for qid, _, _ in QUERIES:
            for course in sorted(c["course_id"] for c in COURSES):
                f.write(f"{qid} {course} {QRELS[qid].get(course, 0)}\n")


if __name__ == "__main__":
    main()
