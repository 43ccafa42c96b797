from pathlib import Path

import pytest

from kconfex.kconfig import parse_model

CORPUS_DIR = Path(__file__).resolve().parent.parent / "corpus"

NOPROMPT_CHOICE_SOURCE = """\
choice
\tprompt "choice prompt"

config A
\tboolean "A prompt"

config B
\tboolean "B prompt"
\tdefault n

config NOPROMPT
\tboolean
\tdefault y

endchoice
"""


@pytest.fixture
def noprompt_choice_model():
    return parse_model(NOPROMPT_CHOICE_SOURCE, "golden_choice")


@pytest.fixture(scope="session")
def corpus_dir():
    assert CORPUS_DIR.is_dir()
    return CORPUS_DIR


def corpus_models():
    out = []
    for path in sorted(CORPUS_DIR.glob("*.kconfig")):
        out.append((path.name, parse_model(path.read_text(encoding="utf-8"), path.name)))
    return out
