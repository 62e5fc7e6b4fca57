"""HTTP-verb prediction from operation descriptions.

A multinomial Naive Bayes classifier over stemmed, stop-word-filtered
description text.  Labels are the five HTTP verbs plus INVALID for junk
descriptions.  The preprocessing pipeline (lowercasing, punctuation and
digit stripping, stop-word removal, Porter stemming) is versioned so that
a persisted model built with a different pipeline is rejected at load time.
"""

from __future__ import annotations

import csv
import io
import json
import math
import random
import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .errors import InsufficientClasses, ModelMismatch, TooFewSamples

LABELS = ["GET", "POST", "PUT", "PATCH", "DELETE", "INVALID"]
_LABEL_ORDER = {label: i for i, label in enumerate(LABELS)}

PREPROCESSING_VERSION = "porter-stop-1"
MODEL_FORMAT_VERSION = 1

_VOWELS = "aeiou"


def _is_consonant(word, i):
    ch = word[i]
    if ch in _VOWELS:
        return False
    if ch == "y":
        return i == 0 or not _is_consonant(word, i - 1)
    return True


def _measure(stem):
    # number of VC sequences in [C](VC)^m[V]
    m = 0
    prev_vowel = False
    for i in range(len(stem)):
        vowel = not _is_consonant(stem, i)
        if prev_vowel and not vowel:
            m += 1
        prev_vowel = vowel
    return m


def _contains_vowel(stem):
    return any(not _is_consonant(stem, i) for i in range(len(stem)))


def _ends_double_consonant(word):
    return len(word) >= 2 and word[-1] == word[-2] and _is_consonant(word, len(word) - 1)


def _ends_cvc(word):
    if len(word) < 3:
        return False
    if not (_is_consonant(word, -3 + len(word))
            and not _is_consonant(word, len(word) - 2)
            and _is_consonant(word, len(word) - 1)):
        return False
    return word[-1] not in "wxy"


def porter_stem(word):
    """Classic Porter suffix-stripping, frozen as preprocessing v1."""
    w = word.lower()
    if len(w) <= 2:
        return w

    # step 1a
    if w.endswith("sses"):
        w = w[:-2]
    elif w.endswith("ies"):
        w = w[:-2]
    elif not w.endswith("ss") and w.endswith("s"):
        w = w[:-1]

    # step 1b
    if w.endswith("eed"):
        if _measure(w[:-3]) > 0:
            w = w[:-1]
    else:
        flag = False
        if w.endswith("ed") and _contains_vowel(w[:-2]):
            w = w[:-2]
            flag = True
        elif w.endswith("ing") and _contains_vowel(w[:-3]):
            w = w[:-3]
            flag = True
        if flag:
            if w.endswith(("at", "bl", "iz")):
                w += "e"
            elif _ends_double_consonant(w) and not w.endswith(("l", "s", "z")):
                w = w[:-1]
            elif _measure(w) == 1 and _ends_cvc(w):
                w += "e"

    # step 1c
    if w.endswith("y") and _contains_vowel(w[:-1]):
        w = w[:-1] + "i"

    # step 2
    for suffix, repl in (
        ("ational", "ate"), ("tional", "tion"), ("enci", "ence"), ("anci", "ance"),
        ("izer", "ize"), ("abli", "able"), ("alli", "al"), ("entli", "ent"),
        ("eli", "e"), ("ousli", "ous"), ("ization", "ize"), ("ation", "ate"),
        ("ator", "ate"), ("alism", "al"), ("iveness", "ive"), ("fulness", "ful"),
        ("ousness", "ous"), ("aliti", "al"), ("iviti", "ive"), ("biliti", "ble"),
    ):
        if w.endswith(suffix):
            stem = w[: -len(suffix)]
            if _measure(stem) > 0:
                w = stem + repl
            break

    # step 3
    for suffix, repl in (
        ("icate", "ic"), ("ative", ""), ("alize", "al"), ("iciti", "ic"),
        ("ical", "ic"), ("ful", ""), ("ness", ""),
    ):
        if w.endswith(suffix):
            stem = w[: -len(suffix)]
            if _measure(stem) > 0:
                w = stem + repl
            break

    # step 4
    for suffix in (
        "al", "ance", "ence", "er", "ic", "able", "ible", "ant", "ement",
        "ment", "ent", "ion", "ou", "ism", "ate", "iti", "ous", "ive", "ize",
    ):
        if w.endswith(suffix):
            stem = w[: -len(suffix)]
            if _measure(stem) > 1:
                if suffix == "ion" and not stem.endswith(("s", "t")):
                    break
                w = stem
            break

    # step 5a
    if w.endswith("e"):
        stem = w[:-1]
        m = _measure(stem)
        if m > 1 or (m == 1 and not _ends_cvc(stem)):
            w = stem

    # step 5b
    if _measure(w) > 1 and _ends_double_consonant(w) and w.endswith("l"):
        w = w[:-1]

    return w


@lru_cache(maxsize=1)
def _stop_words():
    text = resources.files("api_ruler.data").joinpath("stopwords.txt").read_text(encoding="utf-8")
    return frozenset(
        line.strip() for line in text.splitlines()
        if line.strip() and not line.startswith("#")
    )


_TOKEN_RE = re.compile(r"[a-z]+")


def preprocess(text):
    """Lowercase, strip punctuation/digits, drop stop words, stem."""
    stops = _stop_words()
    return [porter_stem(tok) for tok in _TOKEN_RE.findall(text.lower()) if tok not in stops]


@dataclass(frozen=True)
class LabeledSample:
    text: str
    label: str


@dataclass(frozen=True)
class ClassifierModel:
    vocabulary: dict           # token -> column index
    class_log_prior: dict      # label -> log P(label)
    token_log_likelihood: dict  # label -> list of log P(token | label) per index
    smoothing_alpha: float
    preprocessing_version: str = PREPROCESSING_VERSION

    @property
    def labels(self):
        return sorted(self.class_log_prior, key=lambda l: _LABEL_ORDER.get(l, len(LABELS)))


@dataclass(frozen=True)
class Prediction:
    label: str
    posterior: dict  # label -> probability in [0, 1]


def train(samples, alpha=1.0):
    """Fit a multinomial NB model with additive (Laplace) smoothing.

    Priors are class frequencies; token likelihoods are
    (count + alpha) / (class total + alpha * |V|).
    """
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    labels = sorted({s.label for s in samples})
    if len(labels) < 2:
        raise InsufficientClasses(f"need >= 2 distinct labels, got {len(labels)}")

    token_counts = {label: {} for label in labels}
    doc_counts = {label: 0 for label in labels}
    vocab = set()
    for sample in samples:
        doc_counts[sample.label] += 1
        counts = token_counts[sample.label]
        for token in preprocess(sample.text):
            vocab.add(token)
            counts[token] = counts.get(token, 0) + 1

    vocabulary = {token: i for i, token in enumerate(sorted(vocab))}
    size = len(vocabulary)
    total_docs = len(samples)
    class_log_prior = {
        label: math.log(doc_counts[label] / total_docs) for label in labels
    }
    token_log_likelihood = {}
    for label in labels:
        counts = token_counts[label]
        total = sum(counts.values())
        denom = total + alpha * size
        token_log_likelihood[label] = [
            math.log((counts.get(token, 0) + alpha) / denom)
            for token in vocabulary
        ]
    return ClassifierModel(
        vocabulary=vocabulary,
        class_log_prior=class_log_prior,
        token_log_likelihood=token_log_likelihood,
        smoothing_alpha=alpha,
    )


def predict(model, text):
    """Posterior over labels for a text; OOV tokens are ignored.

    With zero in-vocabulary tokens the posterior equals the priors.  Ties
    break by the fixed GET < POST < PUT < PATCH < DELETE < INVALID order.
    """
    counts = {}
    for token in preprocess(text):
        idx = model.vocabulary.get(token)
        if idx is not None:
            counts[idx] = counts.get(idx, 0) + 1

    scores = {}
    for label in model.labels:
        likelihoods = model.token_log_likelihood[label]
        score = model.class_log_prior[label]
        for idx, count in counts.items():
            score += count * likelihoods[idx]
        scores[label] = score

    top = max(scores.values())
    norm = top + math.log(sum(math.exp(s - top) for s in scores.values()))
    posterior = {label: math.exp(s - norm) for label, s in scores.items()}
    best = min(posterior, key=lambda l: (-posterior[l], _LABEL_ORDER.get(l, len(LABELS))))
    return Prediction(label=best, posterior=posterior)


def cross_validate(samples, k, seed=0):
    """Mean accuracy over k seeded folds, plus the per-fold accuracies."""
    if k < 2:
        raise TooFewSamples("k must be >= 2")
    if len(samples) < k:
        raise TooFewSamples(f"{len(samples)} samples cannot fill {k} folds")
    order = list(samples)
    random.Random(seed).shuffle(order)
    folds = [order[i::k] for i in range(k)]  # sizes within +-1 of each other

    per_fold = []
    for i, fold in enumerate(folds):
        training = [s for j, f in enumerate(folds) if j != i for s in f]
        model = train(training)
        correct = sum(1 for s in fold if predict(model, s.text).label == s.label)
        per_fold.append(correct / len(fold))
    return sum(per_fold) / len(per_fold), per_fold


def save_model(model, path):
    payload = {
        "version": MODEL_FORMAT_VERSION,
        "preprocessing_version": model.preprocessing_version,
        "alpha": model.smoothing_alpha,
        "labels": model.labels,
        "vocabulary": model.vocabulary,
        "priors": {label: model.class_log_prior[label] for label in model.labels},
        "likelihoods": {label: model.token_log_likelihood[label] for label in model.labels},
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh)


def load_model(path):
    with open(path, encoding="utf-8") as fh:
        payload = json.load(fh)
    if payload.get("preprocessing_version") != PREPROCESSING_VERSION:
        raise ModelMismatch(
            f"model built with preprocessing {payload.get('preprocessing_version')!r}, "
            f"this build uses {PREPROCESSING_VERSION!r}"
        )
    return ClassifierModel(
        vocabulary={k: int(v) for k, v in payload["vocabulary"].items()},
        class_log_prior={k: float(v) for k, v in payload["priors"].items()},
        token_log_likelihood={k: list(map(float, v)) for k, v in payload["likelihoods"].items()},
        smoothing_alpha=float(payload["alpha"]),
        preprocessing_version=payload["preprocessing_version"],
    )


def load_corpus(source):
    """Read a "label,text" CSV (path, file object, or text) into samples."""
    if hasattr(source, "read"):
        fh = source
        close = False
    elif isinstance(source, str) and "\n" in source:
        fh = io.StringIO(source)
        close = False
    else:
        fh = open(source, encoding="utf-8", newline="")
        close = True
    try:
        reader = csv.DictReader(fh)
        samples = []
        for row in reader:
            label = (row.get("label") or "").strip().upper()
            text = (row.get("text") or "").strip()
            if label not in LABELS:
                raise ValueError(f"unknown label {label!r} in training corpus")
            samples.append(LabeledSample(text=text, label=label))
        return samples
    finally:
        if close:
            fh.close()


@lru_cache(maxsize=1)
def starter_model():
    """Model trained on the shipped starter corpus; used when no model file
    is configured.  Accuracy is corpus-dependent by nature.

    The starter corpus is small, so heavy smoothing would drown the verb
    signal; alpha 0.2 keeps confident verbs above the default tunneling
    threshold while leaving junk text near the priors.
    """
    with resources.files("api_ruler.data").joinpath("tunnel_corpus.csv").open(encoding="utf-8") as fh:
        samples = load_corpus(fh)
    return train(samples, alpha=0.2)
