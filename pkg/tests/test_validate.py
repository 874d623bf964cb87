import json

import numpy as np

from blindpsim import validate
from blindpsim.plotting import plot_iteration_histogram, plot_pattern
from blindpsim.validate import CampaignConfig, validate_corpus


class TestValidateCorpus:
    def test_seed_zero_small(self):
        report = validate_corpus(CampaignConfig(seed=0, cap=4, trials=10, orbit_cap=4, wspm_trials=5))
        assert report["passed"]
        assert report["summary"]["oracle"]["checked"] > 80
        assert report["max_iterations"] >= 1

    def test_reproducible(self):
        cfg = CampaignConfig(seed=3, cap=3, trials=5, orbit_cap=3, wspm_trials=2)
        a = validate_corpus(cfg, campaigns=["permuted", "witness"])
        b = validate_corpus(cfg, campaigns=["permuted", "witness"])
        strip = lambda r: {k: {**v, "seconds": 0} for k, v in r["summary"].items()}  # noqa: E731
        assert strip(a) == strip(b)

    def test_mismatch_is_written(self, tmp_path, monkeypatch):
        # an oracle that always disagrees turns every check into a counterexample
        monkeypatch.setattr(validate, "brute_psim", lambda A, B: (False, None))
        cfg = CampaignConfig(seed=0, cap=2, trials=1)
        report = validate_corpus(cfg, tmp_path, campaigns=["oracle"])
        assert not report["passed"]
        files = sorted(tmp_path.glob("counterexample_*.json"))
        assert files
        payload = json.loads(files[0].read_text())
        assert payload["campaign"] == "oracle" and "A" in payload

    def test_missing_bliss_dir_is_noted(self, tmp_path):
        cfg = CampaignConfig(cap=1, trials=1, wspm_trials=1, bliss_dir=str(tmp_path))
        report = validate_corpus(cfg, campaigns=["permuted"])
        assert report["summary"]["bliss"]["notes"] == ["had-sw-32 files not found"]


class TestPlotting:
    def test_pattern_png(self, tmp_path):
        path = plot_pattern(np.arange(16).reshape(4, 4), tmp_path / "p.png")
        assert path.read_bytes()[:4] == b"\x89PNG"

    def test_empty_histogram(self, tmp_path):
        path = plot_iteration_histogram([], tmp_path / "h.png")
        assert path.exists()
