"""Acceptance suite: one test per criterion, summarized as PASS/FAIL lines at the end of the run."""

import json
import math
import random
import string
import subprocess
import sys
import time

import pytest

from inertia_eval.align import AlignConfig, analyze_complexity, complexity, prior_row, train, align_corpus, write_pharaoh
from inertia_eval.bleu import BleuConfig, corpus_bleu, harmonic_mean
from inertia_eval.corpus import mix_plt
from inertia_eval.flips import nfi_categorical, nfr_categorical, nfr_scalar
from inertia_eval.inertia import consistency, robustness, robustness_bleu, stability
from inertia_eval.noise import NoiseConfig, line_edits, misspell_corpus
from inertia_eval.text import levenshtein
from oracles import bleu_oracle, entropy_from_dump, levenshtein_oracle

WORDS = ["the", "cat", "sat", "on", "mat", "a", "dog", "ran", "home", "quickly", "It's", "U.S.", "3.14",
         "co-op", "2-3", "(maybe)", "\"quoted\"", "end.", "yes,", "what?", "&amp;", "x<y", "naïve", "Zürich"]
OTHER = ["alpha", "beta", "gamma", "delta", "epsilon", "zeta", "eta", "theta"]


def random_line(rng, vocab, low=0, high=14):
    return " ".join(rng.choice(vocab) for _ in range(rng.randint(low, high)))


def perturb(rng, line, vocab):
    tokens = line.split()
    for k in range(len(tokens)):
        if rng.random() < 0.3:
            tokens[k] = rng.choice(vocab)
    if tokens and rng.random() < 0.3:
        del tokens[rng.randrange(len(tokens))]
    return " ".join(tokens)


def bleu_fixtures():
    rng = random.Random(2024)
    corpora = []
    for k in range(25):
        size = 1 + (k * 49) // 24
        refs = [random_line(rng, WORDS) for _ in range(size)]
        if k % 5 == 4:
            hyps = [random_line(rng, OTHER, 1) for _ in range(size)]
        else:
            hyps = [perturb(rng, r, WORDS) for r in refs]
        for j in range(0, size, 7):
            hyps[j] = "" if k % 2 else hyps[j]
            refs[(j + 3) % size] = ""
        corpora.append((hyps, refs))
    return corpora


def fixture_lines(rng, size):
    # at least one segment of four or more tokens so a perfect match can reach 100
    lines = [random_line(rng, WORDS, 1) for _ in range(size)]
    lines[0] = random_line(rng, WORDS, 4, 12)
    return lines


@pytest.mark.criterion("AC1 BLEU oracle equivalence")
def test_ac1_bleu_oracle_equivalence():
    corpora = bleu_fixtures()
    assert len(corpora) == 25 and min(len(c[0]) for c in corpora) == 1 and max(len(c[0]) for c in corpora) == 50
    assert any("" in h or "" in r for h, r in corpora)
    worst = 0.0
    elapsed = 0.0
    for tokenizer in ("13a", "whitespace"):
        config = BleuConfig(tokenizer=tokenizer)
        for hyps, refs in corpora:
            start = time.perf_counter()
            got = corpus_bleu(hyps, refs, config).score
            elapsed += time.perf_counter() - start
            worst = max(worst, abs(got - bleu_oracle(hyps, refs, tokenizer)))
    assert worst <= 1e-4
    assert elapsed < 1.0


@pytest.mark.criterion("AC2 identity suite")
def test_ac2_identity_suite():
    rng = random.Random(7)
    start = time.perf_counter()
    for _ in range(10):
        lines = fixture_lines(rng, rng.randint(1, 30))
        assert consistency(lines, lines) == 100.0
        result = stability(lines, lines)
        assert result.stability == 100.0
        assert result.exact_match_rate == 1.0
        scores = [rng.uniform(-1, 1) for _ in range(rng.randint(1, 50))]
        assert robustness(scores, scores) == 0.0
        labels = [rng.randint(0, 1) for _ in range(rng.randint(1, 50))]
        assert nfr_categorical(labels, labels) == 0.0
        ratings = [[rng.randint(5, 30) / 5 for _ in range(3)] for _ in range(rng.randint(1, 20))]
        assert nfr_scalar(ratings, ratings) == 0.0
    assert time.perf_counter() - start < 1.0


@pytest.mark.criterion("AC3 symmetry suite")
def test_ac3_symmetry_suite():
    rng = random.Random(11)
    for _ in range(1000):
        size = rng.randint(1, 6)
        a = fixture_lines(rng, size)
        b = [perturb(rng, line, WORDS) for line in a]
        refs = [perturb(rng, line, WORDS) for line in a]
        assert consistency(a, b) == consistency(b, a)
        assert stability(a, b) == stability(b, a)
        assert robustness_bleu(a, b, refs) == -robustness_bleu(b, a, refs)
        x, y = rng.uniform(0, 100), rng.uniform(0, 100)
        assert harmonic_mean(x, y) == harmonic_mean(y, x)


def word_corpus(seed, lines=500, per_line=20):
    rng = random.Random(seed)
    return [
        " ".join("".join(rng.choice(string.ascii_lowercase) for _ in range(rng.randint(1, 9))) for _ in range(per_line))
        for _ in range(lines)
    ]


@pytest.mark.criterion("AC4 noise contract")
def test_ac4_noise_contract():
    corpus = word_corpus(5)
    config = NoiseConfig(p=0.1, seed=42)
    start = time.perf_counter()
    serial = misspell_corpus(corpus, config, threads=1)
    parallel = misspell_corpus(corpus, config, threads=8)
    edits = [e for k, line in enumerate(corpus) for e in line_edits(line, k, config)]
    elapsed = time.perf_counter() - start

    assert len(edits) == 10_000
    assert "\n".join(serial).encode() == "\n".join(parallel).encode()
    assert [len(x.split()) for x in serial] == [len(x.split()) for x in corpus]
    assert [new for _, _, new in edits] == [w for line in serial for w in line.split()]

    modified = sum(orig != new for orig, _, new in edits)
    assert 0.08 <= modified / len(edits) <= 0.12
    substitutions = sum(strategy == "substitute" for _, strategy, _ in edits)
    collisions = 0
    for orig, strategy, new in edits:
        if strategy is None:
            continue
        distance = levenshtein(orig, new)
        assert distance == levenshtein_oracle(orig, new)
        if distance == 0:
            assert strategy == "substitute"
            collisions += 1
        else:
            assert distance == 1
    assert collisions <= substitutions / 26
    assert elapsed < 2.0


def dictionary_bitext(pairs, seed):
    rng = random.Random(seed)
    src_vocab = [f"w{k}" for k in range(60)]
    lexicon = dict(zip(src_vocab, rng.sample([f"v{k}" for k in range(60)], 60)))
    source, target, gold = [], [], []
    for _ in range(pairs):
        words = [rng.choice(src_vocab) for _ in range(rng.randint(4, 10))]
        source.append(" ".join(words))
        target.append(" ".join(lexicon[w] for w in words))
        gold.append(tuple(range(len(words))))
    return source, target, gold


@pytest.mark.criterion("AC5 alignment recovery")
def test_ac5_alignment_recovery():
    start = time.perf_counter()
    source, target, gold = dictionary_bitext(200, 3)
    model = train(source, target, AlignConfig(iterations=5))
    pairs = align_corpus(model, source, target)
    hits = sum(p == g for pair, links in zip(pairs, gold) for p, g in zip(pair.links, links))
    total = sum(len(links) for links in gold)
    assert hits / total >= 0.95

    ll = model.log_likelihoods
    assert len(ll) == 5
    assert all(b >= a - 1e-9 for a, b in zip(ll, ll[1:]))

    worst = 0.0
    for m in range(1, 51):
        for n in range(1, 51):
            for i in range(1, m + 1):
                worst = max(worst, abs(math.fsum(prior_row(i, m, n, 4.0, 0.08)) - 1.0))
    assert worst <= 1e-9
    assert time.perf_counter() - start < 5.0


@pytest.mark.criterion("AC6 complexity oracle")
def test_ac6_complexity_oracle(tmp_path):
    source, single, _ = dictionary_bitext(200, 4)
    assert abs(complexity(source, single) - 0.0) <= 1e-12

    rng = random.Random(4)
    multi = [" ".join(w + rng.choice("ab") for w in line.split()) for line in single]
    result = analyze_complexity(source, multi)
    dump = tmp_path / "alignments.txt"
    write_pharaoh(result.alignments, dump)
    oracle = entropy_from_dump(source, multi, dump.read_text(encoding="utf-8"))
    assert abs(result.value - oracle) <= 1e-9
    assert result.value > complexity(source, single)
    # two equiprobable modes per source type push every type towards ln 2
    assert result.value > 0.5 * math.log(2)


@pytest.mark.criterion("AC7 flips fixtures")
def test_ac7_flips_fixtures():
    old, new = [1, 1, 0, 0], [0, 1, 0, 1]
    assert nfr_categorical(old, new) == 0.25
    assert nfi_categorical(old, new) == 0.5

    ratings_old = [[4.0, 4.0, 4.0], [3.0, 3.0, 3.0], [5.0, 5.0, 5.0], [2.0, 2.2, 2.4]]
    # segment 1: all lower; 2: one annotator equal; 3: one higher; 4: all lower
    ratings_new = [[3.8, 3.0, 1.0], [2.0, 3.0, 2.8], [4.0, 4.0, 5.2], [1.8, 2.0, 2.2]]
    assert nfr_scalar(ratings_old, ratings_new) == 2 / 4
    assert nfr_scalar(ratings_new, ratings_old) == 0.0

    from inertia_eval import DataError

    with pytest.raises(DataError, match="NFI undefined: new model is perfect"):
        nfi_categorical(old, [1, 1, 1, 1])


def cli(*argv):
    proc = subprocess.run([sys.executable, "-m", "inertia_eval", *map(str, argv)], capture_output=True)
    assert proc.returncode == 0, proc.stderr.decode()
    return proc.stdout


@pytest.mark.criterion("AC8 end-to-end pipeline")
def test_ac8_end_to_end(tmp_path):
    clean = tmp_path / "clean.txt"
    clean.write_text("".join(line + "\n" for line in word_corpus(8, lines=100, per_line=12)), encoding="utf-8")
    noisy = tmp_path / "noisy.txt"
    cli("noise", "--input", clean, "--output", noisy, "--seed", 7)
    assert len(noisy.read_text(encoding="utf-8").splitlines()) == 100

    first = cli("consistency", "--noisy", noisy, "--clean", clean, "--threads", 1, "--json")
    second = cli("consistency", "--noisy", noisy, "--clean", clean, "--threads", 8, "--json")
    assert first == second
    assert 0.0 < json.loads(first)["rows"][0]["value"] < 100.0

    lines = clean.read_text(encoding="utf-8").splitlines()
    noisy_lines = noisy.read_text(encoding="utf-8").splitlines()
    src, tgt = mix_plt(lines, lines, noisy_lines, noisy_lines, ratio=1.0, seed=7)
    assert len(src) == len(tgt) == 2 * len(lines)
