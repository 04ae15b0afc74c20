import json

import pytest

from aspectcast.cli import main


def write_small_corpus(tmp_path, quarters=8):
    """A tiny but valid corpus: 2 reviews per quarter plus a revenue series."""
    texts = [
        "Great cost savings and lower cost, really happy with the price.",
        "Security concerns remain, the data protection felt weak and risky.",
    ]
    lines = []
    year, qi = 2016, 1
    for i in range(quarters):
        for j, text in enumerate(texts):
            lines.append(json.dumps({"id": f"r{i}-{j}", "quarter": f"{year}Q{qi}", "text": text}))
        qi += 1
        if qi == 5:
            year, qi = year + 1, 1
    reviews = tmp_path / "reviews.jsonl"
    reviews.write_text("\n".join(lines) + "\n")

    revenue = tmp_path / "revenue.csv"
    rows = ["quarter,revenue"]
    year, qi, value = 2016, 1, 100.0
    for i in range(quarters):
        rows.append(f"{year}Q{qi},{value}")
        value *= 1.0 + 0.02 * ((-1) ** i)
        qi += 1
        if qi == 5:
            year, qi = year + 1, 1
    revenue.write_text("\n".join(rows) + "\n")

    config = tmp_path / "config.json"
    config.write_text(json.dumps({
        "reviews": "reviews.jsonl",
        "revenue": "revenue.csv",
        "models": [{"kind": "arima", "label": "ARIMA", "orders": [1, 0, 0]}],
    }))
    return config


class TestStages:
    def test_ingest(self, tmp_path):
        config = write_small_corpus(tmp_path)
        out = tmp_path / "out"
        assert main(["ingest", "--config", str(config), "--out", str(out)]) == 0
        assert (out / "reviews.jsonl").exists()
        assert (out / "revenue.csv").read_text().splitlines()[0] == "quarter,revenue"

    def test_sentiment(self, tmp_path):
        config = write_small_corpus(tmp_path)
        out = tmp_path / "out"
        assert main(["sentiment", "--config", str(config), "--out", str(out)]) == 0
        lines = (out / "sentiment.csv").read_text().splitlines()
        assert lines[0] == "id,quarter,pos,neu,neg,compound"
        assert len(lines) == 17  # header + 16 reviews

    def test_features(self, tmp_path):
        config = write_small_corpus(tmp_path)
        out = tmp_path / "out"
        assert main(["features", "--config", str(config), "--out", str(out)]) == 0
        lines = (out / "features.csv").read_text().splitlines()
        header = lines[0].split(",")
        assert header[0] == "quarter"
        assert header[-1] == "target_growth"
        assert "lagged_growth" in header
        # 8 quarters -> 7 growth values -> 6 rows once the lag drops the first
        assert len(lines) == 7

    def test_fit_predict_evaluate(self, tmp_path):
        config = write_small_corpus(tmp_path)
        out = tmp_path / "out"
        main(["features", "--config", str(config), "--out", str(out)])
        features = out / "features.csv"
        assert main([
            "fit", "--features", str(features), "--kind", "svr",
            "--params", '{"gamma": 1.0, "nu": 0.5, "C": 1.0}', "--out", str(out),
        ]) == 0
        model = out / "model_svr.json"
        assert model.exists()
        assert main([
            "predict", "--model", str(model), "--features", str(features), "--out", str(out),
        ]) == 0
        predictions = out / "predictions.csv"
        assert predictions.read_text().splitlines()[0] == "quarter,predicted"
        assert main([
            "evaluate", "--features", str(features), "--predictions", str(predictions),
            "--label", "SVM", "--out", str(out),
        ]) == 0
        report = (out / "report.csv").read_text().splitlines()
        assert report[0] == "model,mse,rmse,theils_u"
        assert report[1].startswith("SVM,")

    def test_pipeline_small(self, tmp_path):
        config = write_small_corpus(tmp_path)
        out = tmp_path / "out"
        assert main(["pipeline", "--config", str(config), "--out", str(out)]) == 0
        report = (out / "report.csv").read_text().splitlines()
        assert report[0] == "model,mse,rmse,theils_u"
        assert report[1].startswith("ARIMA,")
        assert (out / "report.json").exists()
        assert (out / "plot_data.csv").exists()


class TestErrors:
    def test_missing_reviews_file(self, tmp_path, capsys):
        config = tmp_path / "config.json"
        config.write_text(json.dumps({"reviews": "nope.jsonl"}))
        assert main(["ingest", "--config", str(config), "--out", str(tmp_path / "out")]) == 1
        assert "error [ingest]" in capsys.readouterr().err

    def test_malformed_config(self, tmp_path, capsys):
        config = tmp_path / "config.json"
        config.write_text("{not json")
        assert main(["pipeline", "--config", str(config)]) == 1
        assert "error [config]" in capsys.readouterr().err

    def test_malformed_reviews(self, tmp_path, capsys):
        bad = tmp_path / "reviews.jsonl"
        bad.write_text('{"id": "a", "quarter": "2016Q9", "text": "hi"}\n')
        config = tmp_path / "config.json"
        config.write_text(json.dumps({"reviews": "reviews.jsonl"}))
        assert main(["ingest", "--config", str(config), "--out", str(tmp_path / "out")]) == 1
        err = capsys.readouterr().err
        assert "error [ingest]" in err and "line 1" in err

    def test_unknown_command_exits(self):
        with pytest.raises(SystemExit):
            main(["frobnicate"])
