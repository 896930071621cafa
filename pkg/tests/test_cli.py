import pytest

from polyseg.cli import desegment_line, main, render_segmented
from polyseg.errors import FormatError


def run(*argv):
    return main(list(argv))


def _write(path, text):
    path.write_text(text, encoding="utf-8")
    return str(path)


@pytest.fixture
def corpus_file(tmp_path):
    return _write(tmp_path / "corpus.txt", "kawi suta kawi\nwisu kawi\nsuta wisu kawi\n")


class TestSegmentRoundTrip:
    @pytest.mark.parametrize("method,extra", [
        ("bpe", ("--vocab-size", "30")),
        ("morfessor", ()),
        ("lmvr", ()),
        ("flatcat", ()),
    ])
    def test_segment_then_desegment_identity(self, tmp_path, corpus_file, method, extra):
        model = str(tmp_path / ("m." + method))
        assert run("train", "--method", method, "--input", corpus_file,
                   "--model", model, *extra) == 0
        segged = str(tmp_path / "segged.txt")
        assert run("segment", "--model", model, "--input", corpus_file,
                   "--output", segged) == 0
        restored = str(tmp_path / "restored.txt")
        assert run("desegment", "--model", model, "--input", segged,
                   "--output", restored) == 0
        original = open(corpus_file, "rb").read()
        assert open(restored, "rb").read() == original

    def test_crf_round_trip(self, tmp_path, corpus_file):
        seg_data = _write(
            tmp_path / "train.tsv", "kawi\tka wi\nsuta\tsu ta\nwisu\twi su\n"
        )
        model = str(tmp_path / "m.crf")
        assert run("train", "--method", "crf", "--input", seg_data,
                   "--model", model, "--delta", "2", "--max-iters", "60") == 0
        segged = str(tmp_path / "segged.txt")
        assert run("segment", "--model", model, "--input", corpus_file,
                   "--output", segged) == 0
        restored = str(tmp_path / "restored.txt")
        assert run("desegment", "--style", "cont", "--input", segged,
                   "--output", restored) == 0
        assert open(restored, "rb").read() == open(corpus_file, "rb").read()

    def test_train_is_deterministic(self, tmp_path, corpus_file):
        m1, m2 = str(tmp_path / "m1"), str(tmp_path / "m2")
        for m in (m1, m2):
            assert run("train", "--method", "morfessor", "--input", corpus_file,
                       "--model", m, "--seed", "7") == 0
        assert open(m1, "rb").read() == open(m2, "rb").read()


class TestDesegmentHelpers:
    def test_eow_rendering(self):
        line = render_segmented([["ka", "wi</w>"], ["su</w>"]], "eow", "</w>")
        assert line == "ka wi</w> su</w>"
        assert desegment_line(line, "eow", "</w>") == "kawi su"

    def test_cont_rendering(self):
        line = render_segmented([["ka", "wi"], ["su"]], "cont", "@@")
        assert line == "ka@@ wi su"
        assert desegment_line(line, "cont", "@@") == "kawi su"

    def test_stray_marker_reports_position(self):
        with pytest.raises(FormatError) as exc:
            desegment_line("ka</w>wi su</w>", "eow", "</w>", lineno=3)
        assert "line 3" in str(exc.value)

    def test_dangling_word_rejected(self):
        with pytest.raises(FormatError):
            desegment_line("ka wi</w> su", "eow", "</w>")
        with pytest.raises(FormatError):
            desegment_line("ka@@", "cont", "@@")


class TestStats:
    def test_stats_table(self, tmp_path, capsys):
        src = _write(tmp_path / "s.txt", "a b a\nb c\n")
        tgt = _write(tmp_path / "t.txt", "x y\nz z\n")
        out = tmp_path / "stats.tsv"
        assert run("stats", "--source", src, "--target", tgt, "--out", str(out)) == 0
        lines = out.read_text(encoding="utf-8").splitlines()
        assert lines[0].split("\t") == [
            "side", "S", "N", "V", "V1", "V/N", "V1/N", "OOV", "pctOOV"
        ]
        # source tokens: a b a b c -> N=5, V=3, hapax only c
        assert lines[1].split("\t")[1:5] == ["2", "5", "3", "1"]

    def test_csv_format(self, tmp_path):
        src = _write(tmp_path / "s.txt", "a b a\n")
        tgt = _write(tmp_path / "t.txt", "x y\n")
        out = tmp_path / "stats.csv"
        assert run("stats", "--source", src, "--target", tgt,
                   "--format", "csv", "--out", str(out)) == 0
        assert out.read_text(encoding="utf-8").splitlines()[0] == (
            "side,S,N,V,V1,V/N,V1/N,OOV,pctOOV"
        )

    def test_misaligned_corpora_exit_3(self, tmp_path):
        src = _write(tmp_path / "s.txt", "a\nb\n")
        tgt = _write(tmp_path / "t.txt", "x\n")
        assert run("stats", "--source", src, "--target", tgt) == 2 + 1

    def test_seg_stats(self, tmp_path):
        data = _write(tmp_path / "d.tsv", "kawi\tka wi\nsu\tsu\n")
        out = tmp_path / "seg.tsv"
        assert run("seg-stats", "--data", data, "--out", str(out)) == 0
        lines = out.read_text(encoding="utf-8").splitlines()
        assert lines[1].split("\t")[:4] == ["2", "1", "3", "3"]


class TestEval:
    def test_eval_mt_identity(self, tmp_path):
        hyp = _write(tmp_path / "h.txt", "ka wi su ta\n")
        out = tmp_path / "r.tsv"
        assert run("eval-mt", "--hyp", hyp, "--ref", hyp, "--metric", "bleu",
                   "--out", str(out)) == 0
        row = out.read_text(encoding="utf-8").splitlines()[1].split("\t")
        assert row[1] == "100.0000"
        assert row[2] == "BLEU+case.mixed+numrefs.1+smooth.exp+tok.13a"

    def test_eval_seg_reports_metric_name_in_header(self, tmp_path):
        pred = _write(tmp_path / "p.tsv", "kawi\tka wi\n")
        gold = _write(tmp_path / "g.tsv", "kawi\tkaw i\n")
        out = tmp_path / "r.tsv"
        for metric, name in (("boundary", "boundary-f1"), ("emma", "emma-f1")):
            assert run("eval-seg", "--pred", pred, "--gold", gold,
                       "--metric", metric, "--out", str(out)) == 0
            lines = out.read_text(encoding="utf-8").splitlines()
            assert lines[0].startswith("metric\t")
            assert lines[1].startswith(name)

    def test_crf_canonical_training_exits_3(self, tmp_path):
        data = _write(tmp_path / "c.tsv", "kawi\tkaw i2\n")
        model = str(tmp_path / "m.crf")
        assert run("train", "--method", "crf", "--input", data, "--model", model,
                   "--mode", "canonical") == 3

    def test_signif_identical_systems(self, tmp_path, capsys):
        sys_a = _write(tmp_path / "a.txt", "ka wi su ta\nmi pe ka wi\n")
        refs = _write(tmp_path / "r.txt", "ka wi su ta\nmi pe ka ka\n")
        out = tmp_path / "sig.tsv"
        assert run("signif", "--sys-a", sys_a, "--sys-b", sys_a, "--ref", refs,
                   "--metric", "chrf", "--out", str(out)) == 0
        row = out.read_text(encoding="utf-8").splitlines()[1].split("\t")
        assert row[4] == "1.0"
        assert row[7] == "not-significant"
        assert capsys.readouterr().out.strip().startswith("p=1.0")


class TestAnalyze:
    def test_unk_csv(self, tmp_path):
        vocab = _write(tmp_path / "v.txt", "ka\nwi\n")
        segged = _write(tmp_path / "s.txt", "ka wi\nka xx\n")
        out = tmp_path / "unk.csv"
        assert run("analyze", "unk", "--vocab", vocab, "--input", segged,
                   "--system", "demo", "--out", str(out)) == 0
        lines = out.read_text(encoding="utf-8").splitlines()
        assert lines[0] == "system,total,unk,rate"
        assert lines[1].startswith("demo,4,1,")

    def test_richness_csv(self, tmp_path, corpus_file):
        model = str(tmp_path / "m.morf")
        assert run("train", "--method", "morfessor", "--input", corpus_file,
                   "--model", model) == 0
        scores = _write(tmp_path / "scores.txt", "10.0\n20.0\n30.0\n")
        out = tmp_path / "rich.csv"
        bins_out = tmp_path / "bins.csv"
        assert run("analyze", "richness", "--probe-model", model,
                   "--input", corpus_file, "--scores", scores,
                   "--out", str(out), "--bins-out", str(bins_out)) == 0
        assert out.read_text(encoding="utf-8").splitlines()[0] == "idx,richness,score"
        assert bins_out.read_text(encoding="utf-8").splitlines()[0] == (
            "bin_lo,bin_hi,count,mean_score"
        )


class TestExitCodes:
    def test_missing_file_is_3(self, tmp_path):
        assert run("stats", "--source", str(tmp_path / "nope"),
                   "--target", str(tmp_path / "nope2")) == 3

    def test_usage_error_is_2(self):
        with pytest.raises(SystemExit) as exc:
            run("train", "--method", "unknown-method", "--input", "x", "--model", "y")
        assert exc.value.code == 2

    def test_infeasible_cap_is_2(self, tmp_path, corpus_file):
        assert run("train", "--method", "lmvr", "--input", corpus_file,
                   "--model", str(tmp_path / "m"), "--cap", "1") == 2

    def test_stray_marker_is_3(self, tmp_path):
        bad = _write(tmp_path / "bad.txt", "ka</w>wi\n")
        assert run("desegment", "--style", "eow", "--input", bad) == 3

    def test_corrupt_score_file_is_3(self, tmp_path, corpus_file):
        model = str(tmp_path / "m.morf")
        assert run("train", "--method", "morfessor", "--input", corpus_file,
                   "--model", model) == 0
        scores = _write(tmp_path / "scores.txt", "10.0\nnot-a-number\n1.0\n")
        assert run("analyze", "richness", "--probe-model", model,
                   "--input", corpus_file, "--scores", scores) == 3
