from rmd.config import Settings


def test_settings_read_prefixed_environment(monkeypatch):
    monkeypatch.setenv("RMD_WORKERS", "3")
    monkeypatch.setenv("RMD_METRICS_BACKEND", "statsd")
    loaded = Settings(_env_file=None)
    assert loaded.workers == 3
    assert loaded.metrics_backend == "statsd"


def test_settings_only_carry_toolkit_fields():
    assert set(Settings.model_fields) == {
        "log_level",
        "output_dir",
        "workers",
        "metrics_backend",
        "metrics_namespace",
        "metrics_disable",
        "metrics_sample_rate",
        "metrics_statsd_host",
        "metrics_statsd_port",
    }
