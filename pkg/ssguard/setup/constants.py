from pathlib import Path

SSG_CONFIG_DIR = Path.home() / ".ssguard"
USER_CONFIG_PATH = SSG_CONFIG_DIR / "config.yml"
SSG_DIR = Path(__file__).parent.parent
DEFAULT_CONFIG_PATH = SSG_DIR / "assets" / "default_config.yml"
FIXTURE_CATALOG_PATH = SSG_DIR / "assets" / "fixture_catalog.yml"
THREADS_ENV_VAR = "SSGUARD_THREADS"
