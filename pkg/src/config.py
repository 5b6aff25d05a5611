from pydantic import BaseModel, Field
import os
from pathlib import Path
from dotenv import load_dotenv

_ROOT = Path(__file__).resolve().parents[1]
_ENV_PATH = _ROOT / ".env"
if _ENV_PATH.exists():
    load_dotenv(dotenv_path=_ENV_PATH, override=False)
else:
    load_dotenv()

# 2^61 - 1 is prime; screens evaluate there.
DEFAULT_SCREEN_PRIME = (1 << 61) - 1


class Settings(BaseModel):
    scenario_dir: Path = Field(default=_ROOT / "scenarios", validation_alias="CREMONA_SCENARIO_DIR")
    seed: int = Field(default=0, validation_alias="CREMONA_SEED")
    screen_prime: int = Field(default=DEFAULT_SCREEN_PRIME, validation_alias="CREMONA_SCREEN_PRIME")
    screen_points: int = Field(default=20, validation_alias="CREMONA_SCREEN_POINTS")
    # Residue polynomials longer than this are truncated in reports
    residue_terms: int = Field(default=40, validation_alias="CREMONA_RESIDUE_TERMS")
    log_level: str = Field(default="WARNING", validation_alias="LOG_LEVEL")

    @classmethod
    def load(cls) -> "Settings":
        def _int_env(env_name: str, default: int) -> int:
            raw = os.getenv(env_name, "").strip()
            if not raw:
                return default
            try:
                return int(raw)
            except ValueError:
                return default

        raw = {
            "CREMONA_SCENARIO_DIR": os.getenv("CREMONA_SCENARIO_DIR") or str(_ROOT / "scenarios"),
            "CREMONA_SEED": _int_env("CREMONA_SEED", 0),
            "CREMONA_SCREEN_PRIME": _int_env("CREMONA_SCREEN_PRIME", DEFAULT_SCREEN_PRIME),
            "CREMONA_SCREEN_POINTS": _int_env("CREMONA_SCREEN_POINTS", 20),
            "CREMONA_RESIDUE_TERMS": _int_env("CREMONA_RESIDUE_TERMS", 40),
            "LOG_LEVEL": os.getenv("LOG_LEVEL", "WARNING").upper(),
        }
        return cls.model_validate(raw)


settings = Settings.load()
