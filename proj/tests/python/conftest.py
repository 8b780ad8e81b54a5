import random

import pytest

FILLERS = ["the", "a", "of", "and", "with", "in", "on", "was", "for", "to", "by", "from"]
LABELS = ["animal", "vehicle"]


def pseudoword(rng):
    onsets = ["b", "d", "f", "g", "k", "l", "m", "n", "p", "r", "t", "v", "z", "br", "kr", "tr"]
    return "".join(rng.choice(onsets) + rng.choice("aeiou") for _ in range(rng.randint(2, 3))) + "n"


class TwoTopicCorpus:
    """Two planted topics sharing one ambiguous word."""

    def __init__(self, seed=7, words_per_topic=20, sentences=600):
        rng = random.Random(seed)
        used = set(FILLERS) | set(LABELS)
        self.topics = []
        for _ in LABELS:
            words = []
            while len(words) < words_per_topic:
                w = pseudoword(rng)
                if w not in used:
                    used.add(w)
                    words.append(w)
            self.topics.append(words)
        while True:
            self.ambiguous = pseudoword(rng)
            if self.ambiguous not in used:
                break
        self.rng = rng
        lines = []
        for n in range(sentences):
            t = n % 2
            words = rng.sample(self.topics[t], 6)
            if rng.random() < 0.5:
                words.append(self.ambiguous)
            lines.append(self.sentence(words))
        for t, label in enumerate(LABELS):
            for _ in range(2):
                lines.extend(f"The {w} is a {label} ." for w in self.topics[t])
        rng.shuffle(lines)
        self.lines = lines

    def sentence(self, words):
        words = list(words)
        self.rng.shuffle(words)
        parts = []
        for w in words:
            if self.rng.random() < 0.5:
                parts.append(self.rng.choice(FILLERS))
            parts.append(w)
        return " ".join(parts) + " ."

    def topic_of(self, words):
        votes = [sum(w in set(topic) for w in words) for topic in self.topics]
        best = max(range(2), key=votes.__getitem__)
        return best if 2 * votes[best] > len(words) else -1


@pytest.fixture(scope="session")
def two_topic():
    return TwoTopicCorpus()


@pytest.fixture(scope="session")
def built_model(two_topic, tmp_path_factory):
    import egowsd

    root = tmp_path_factory.mktemp("model")
    corpus = root / "corpus.txt"
    corpus.write_text("\n".join(two_topic.lines) + "\n", encoding="utf-8")
    model = egowsd.build(corpus, root / "m", {"seed": 42}, jobs=2)
    return model, root / "m"
