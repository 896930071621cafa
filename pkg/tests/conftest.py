"""Shared fixtures: deterministic synthetic corpora with hand-counted
statistics, written once per session, plus a terminal summary that prints
one line per acceptance criterion."""

import random

import pytest

# ---------------------------------------------------------------------------
# synthetic parallel corpus
#
# The token-frequency profiles below are solved by hand so the resulting
# files have exactly the pinned train/dev statistics:
#   train tar: S=13102  N=73022  V=19044  V1=12894
#   train spa:          N=93410  V=16220  V1=10021
#   dev   tar: S=587    N=3183   V=1713   V1=1402   OOV=573
#   dev   spa:          N=4133   V=1771   V1=1365   OOV=434
# ---------------------------------------------------------------------------


def _spread(extra: int, n_types: int) -> list[int]:
    """Counts >= 2 for n_types types consuming 2*n_types + extra tokens."""
    base = extra // n_types
    rem = extra % n_types
    return [2 + base + (1 if i < rem else 0) for i in range(n_types)]


def _token_stream(prefix, n_hapax, repeated_counts, rng, extra_types=None):
    words = []
    types = []
    for i in range(n_hapax):
        types.append("%sh%05d" % (prefix, i))
        words.append(types[-1])
    for i, c in enumerate(repeated_counts):
        t = "%sr%05d" % (prefix, i)
        types.append(t)
        words.extend([t] * c)
    if extra_types is not None:
        extra_types.extend(types)
    rng.shuffle(words)
    return words


def _chop(words, n_sentences, rng):
    n = len(words)
    base = n // n_sentences
    rem = n - base * n_sentences
    sizes = [base + 1] * rem + [base] * (n_sentences - rem)
    rng.shuffle(sizes)
    lines = []
    pos = 0
    for s in sizes:
        lines.append(" ".join(words[pos : pos + s]))
        pos += s
    assert pos == n
    return lines


def _dev_stream(novel_prefix, n_novel, seen_types, n_total_types, n_hapax, extra, rng):
    """Type inventory: n_novel fresh types plus types reused from training;
    the first (n_total_types - n_hapax) types get counts >= 2."""
    types = ["%s%05d" % (novel_prefix, i) for i in range(n_novel)]
    types.extend(seen_types[: n_total_types - n_novel])
    assert len(types) == n_total_types
    n_repeated = n_total_types - n_hapax
    counts = _spread(extra, n_repeated) + [1] * n_hapax
    words = []
    for t, c in zip(types, counts):
        words.extend([t] * c)
    rng.shuffle(words)
    return words


def build_parallel_fixture(root):
    rng = random.Random(20260809)
    tar_train_types: list[str] = []
    spa_train_types: list[str] = []

    # train tar: 12894 hapax + 6150 repeated covering 60128 tokens
    tar_train = _token_stream(
        "t", 12894, _spread(60128 - 2 * 6150, 6150), rng, tar_train_types
    )
    assert len(tar_train) == 73022
    # train spa: 10021 hapax + 6199 repeated covering 83389 tokens
    spa_train = _token_stream(
        "s", 10021, _spread(83389 - 2 * 6199, 6199), rng, spa_train_types
    )
    assert len(spa_train) == 93410

    tar_seen = [t for t in tar_train_types if "r" in t[1:]]
    spa_seen = [t for t in spa_train_types if "r" in t[1:]]
    # dev tar: 1713 types (573 novel), 1402 hapax, 1781 tokens on 311 repeated
    tar_dev = _dev_stream("tn", 573, tar_seen, 1713, 1402, 1781 - 2 * 311, rng)
    assert len(tar_dev) == 3183
    # dev spa: 1771 types (434 novel), 1365 hapax, 2768 tokens on 406 repeated
    spa_dev = _dev_stream("sn", 434, spa_seen, 1771, 1365, 2768 - 2 * 406, rng)
    assert len(spa_dev) == 4133

    paths = {}
    for name, words, n_sent in (
        ("train.tar", tar_train, 13102),
        ("train.spa", spa_train, 13102),
        ("dev.tar", tar_dev, 587),
        ("dev.spa", spa_dev, 587),
    ):
        lines = _chop(words, n_sent, rng)
        path = root / name
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        paths[name] = path
    return paths


# ---------------------------------------------------------------------------
# synthetic segmentation datasets
#
# Entry-size and morph-frequency profiles solved so that:
#   shp-like train: Words=604 SegWords=437 Morphs=1215 UniMorphs=476 Max=5
#   tar-like train: Words=504 SegWords=323 Morphs=1028 UniMorphs=474 Max=5
#   tar-like test:  Words=274 SegWords=178 Morphs=563  UniMorphs=287
#                   with exactly 163 morph types unseen in tar-like train
# ---------------------------------------------------------------------------


def _morph_tokens(types, total, rng):
    counts = [1] * len(types)
    extra = total - len(types)
    i = 0
    while extra > 0:
        counts[i % len(types)] += 1
        extra -= 1
        i += 1
    tokens = []
    for t, c in zip(types, counts):
        tokens.extend([t] * c)
    rng.shuffle(tokens)
    return tokens


def _entry_sizes(singles, twos, threes, rng):
    sizes = [5, 4] + [3] * threes + [2] * twos + [1] * singles
    rng.shuffle(sizes)
    return sizes


def _write_segmentation(path, sizes, tokens):
    assert sum(sizes) == len(tokens)
    lines = []
    pos = 0
    for s in sizes:
        morphs = tokens[pos : pos + s]
        pos += s
        lines.append("%s\t%s" % ("".join(morphs), " ".join(morphs)))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def build_segmentation_fixture(root):
    rng = random.Random(11917)
    paths = {}

    shp_types = ["pa%03d" % i for i in range(476)]
    shp_path = root / "shp.train.tsv"
    _write_segmentation(
        shp_path, _entry_sizes(167, 266, 169, rng), _morph_tokens(shp_types, 1215, rng)
    )
    paths["shp.train"] = shp_path

    rar_train_types = ["ka%03d" % i for i in range(474)]
    rar_train_path = root / "tar.train.tsv"
    _write_segmentation(
        rar_train_path,
        _entry_sizes(181, 125, 196, rng),
        _morph_tokens(rar_train_types, 1028, rng),
    )
    paths["tar.train"] = rar_train_path

    rar_test_types = ["nu%03d" % i for i in range(163)] + rar_train_types[:124]
    rar_test_path = root / "tar.test.tsv"
    _write_segmentation(
        rar_test_path,
        _entry_sizes(96, 70, 106, rng),
        _morph_tokens(rar_test_types, 563, rng),
    )
    paths["tar.test"] = rar_test_path
    return paths


@pytest.fixture(scope="session")
def parallel_fixture(tmp_path_factory):
    root = tmp_path_factory.mktemp("parallel")
    return build_parallel_fixture(root)


@pytest.fixture(scope="session")
def segmentation_fixture(tmp_path_factory):
    root = tmp_path_factory.mktemp("segsets")
    return build_segmentation_fixture(root)


# ---------------------------------------------------------------------------
# acceptance summary
# ---------------------------------------------------------------------------

_ACCEPTANCE_RESULTS: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::" in report.nodeid:
        if report.when == "call" or (report.when == "setup" and report.skipped):
            name = report.nodeid.split("::")[-1]
            outcome = "PASS" if report.passed else ("SKIP" if report.skipped else "FAIL")
            _ACCEPTANCE_RESULTS[name] = outcome


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE_RESULTS:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for name in sorted(_ACCEPTANCE_RESULTS):
        terminalreporter.write_line("%s  %s" % (_ACCEPTANCE_RESULTS[name], name))
