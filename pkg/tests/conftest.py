import pathlib

import pytest

CORPUS = pathlib.Path(__file__).parent / "corpus"

SENTENCES_DEFAULT = (CORPUS / "sentences_default.lppf").read_text(encoding="utf-8")
SENTENCES_LABELED = (CORPUS / "sentences_labeled.lppf").read_text(encoding="utf-8")
SENTENCES_EXPLAIN = (CORPUS / "sentences_explain.lppf").read_text(encoding="utf-8")

ANSWER_BLOCK_GOLDEN = (
    "Answer:1\n"
    "punish(gabriel).\n"
    "sentence(gabriel)=prison.\n"
    "sentence(clare)=innocent.\n"
)

EXPLAIN_DEFAULT_GOLDEN = (
    "*sentence(gabriel) = prison\n"
    " |-- punish(gabriel)\n"
    " |    |-- alcohol(gabriel) = 60\n"
    " |    |-- drive(gabriel)\n"
    "\n"
    "*sentence(gabriel) = prison\n"
    " |-- punish(gabriel)\n"
    " |    |-- resist(gabriel)\n"
)

EXPLAIN_LABELED_GOLDEN = (
    "*gabriel has been sentenced to prison\n"
    " |-- gabriel has driven drunk\n"
    "\n"
    "*gabriel has been sentenced to prison\n"
    " |-- gabriel has resisted to authority\n"
)

CASE_686_GOLDEN = (
    "*Risk level of 686 is low because SOFT score is 0\n"
    " |-- Activated rules:\n"
    " |    |-- cold_ischemia_0_6h\t[-3]\n"
    " |    |-- donor_age2_gt_60\t[3]\n"
)

CASE_763_GOLDEN = (
    "*Risk level of 763 is high_moderate because SOFT score is 22\n"
    " |-- Activated rules:\n"
    " |    |-- donor_cerebral_vascular_accident\t[2]\n"
    " |    |-- psoft\t[20]\n"
    " |    |    |-- intensive_care_unit_pretransplant\t[6]\n"
    " |    |    |-- life_support_pretransplant\t[9]\n"
    " |    |    |-- portal_vein_thrombosis\t[5]\n"
)


@pytest.fixture
def corpus_files():
    return sorted(CORPUS.glob("*.lppf"))


@pytest.fixture
def gabriel_result():
    from lppf import run

    return run(SENTENCES_DEFAULT, origin="sentences_default.lppf")
