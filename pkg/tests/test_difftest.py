
import pytest

from kconfex.difftest import (
    CorpusOptions,
    check_model,
    embed,
    enumerate_configs,
    generate_model_text,
    ground_truth,
    run_corpus,
    truth_table_formula,
)
from kconfex.encode import translate
from kconfex.errors import TooManyOptions
from kconfex.kconfig import parse_model, validate_model
from kconfex.prop import ConstraintSet, equivalent
from kconfex.tri import Tri

from conftest import corpus_models


def _model(text):
    return parse_model(text, "t")


class TestEnumerate:
    def test_noprompt_choice_count_and_rows(self, noprompt_choice_model):
        configs = enumerate_configs(noprompt_choice_model)
        assert len(configs) == 8
        assert configs[0] == {"A": Tri.N, "B": Tri.N, "NOPROMPT": Tri.N}
        assert configs[-1] == {"A": Tri.Y, "B": Tri.Y, "NOPROMPT": Tri.Y}
        assert len({tuple(sorted((k, v.value) for k, v in c.items())) for c in configs}) == 8

    def test_single_tristate(self):
        assert len(enumerate_configs(_model('config T\n\ttristate "t"\n'))) == 3

    def test_mixed_domain_product(self):
        model = _model(
            'config A\n\tbool "a"\nconfig B\n\tbool "b"\nconfig T\n\ttristate "t"\n'
            'config N\n\tint "n"\n\tdefault 0\n\tdefault 5\n\tdefault 100\n'
        )
        assert len(enumerate_configs(model)) == 2 * 2 * 3 * 3

    def test_bound(self):
        text = "".join(f'config O{i}\n\tbool "o"\n' for i in range(11))
        with pytest.raises(TooManyOptions):
            enumerate_configs(_model(text))

    def test_skipped_empty_domain(self):
        model = _model('config N\n\tint "n"\nconfig A\n\tbool "a"\n')
        configs = enumerate_configs(model)
        assert len(configs) == 2
        assert all("N" not in c for c in configs)


class TestGroundTruth:
    def test_noprompt_choice_column(self, noprompt_choice_model):
        table = ground_truth(noprompt_choice_model)
        valid = {
            frozenset(k for k, v in row.cfg.items() if v is Tri.Y)
            for row in table.rows
            if row.valid
        }
        assert valid == {frozenset({"A", "NOPROMPT"}), frozenset({"B", "NOPROMPT"})}
        assert sum(row.valid for row in table.rows) == 2

    def test_empty_model(self):
        table = ground_truth(_model(""))
        assert len(table.rows) == 1
        assert table.rows[0].valid

    def test_select_table(self):
        model = _model('config O\n\tbool "o"\n\tselect P\nconfig P\n\tbool "p"\n')
        table = ground_truth(model)
        assert sum(row.valid for row in table.rows) == 3


class TestCheckModel:
    def test_noprompt_choice_passes(self, noprompt_choice_model):
        report = check_model(noprompt_choice_model)
        assert report.passed
        assert report.mismatches == []

    def test_empty_model_passes(self):
        report = check_model(_model(""))
        assert report.passed
        assert report.config_count == 1

    def test_mutated_translation_detected(self, noprompt_choice_model):
        full = translate(noprompt_choice_model)
        doctored = ConstraintSet(
            constraints=[c for c in full if "at-most-one" not in c.provenance],
            variable_order=full.variable_order,
        )
        report = check_model(noprompt_choice_model, constraints=doctored)
        assert not report.passed
        admitting = {"A": Tri.Y, "B": Tri.Y, "NOPROMPT": Tri.Y}
        assert any(
            m.cfg == admitting and m.classification == "FAILURE"
            for m in report.failures
        )

    def test_known_limitation_classification(self):
        model = _model(
            'config D\n\tbool "d"\n'
            'config P\n\tbool "p"\n\tdepends on D\n'
            'config O\n\tbool "o"\n\tselect P\n'
        )
        report = check_model(model)
        assert report.passed
        assert not report.clean
        assert all(m.classification == "KNOWN-LIMITATION" for m in report.mismatches)
        assert all(m.oracle_verdict and not m.formula_verdict for m in report.mismatches)

    def test_mismatch_names_failed_constraints(self, noprompt_choice_model):
        full = translate(noprompt_choice_model)
        doctored = ConstraintSet(
            constraints=[c for c in full if "at-least-one" not in c.provenance],
            variable_order=full.variable_order,
        )
        report = check_model(noprompt_choice_model, constraints=doctored)
        assert not report.passed
        for m in report.failures:
            assert m.oracle_verdict != m.formula_verdict


class TestTruthTableFormula:
    def test_golden_disjunction(self, noprompt_choice_model):
        table = ground_truth(noprompt_choice_model)
        formula = truth_table_formula(table)
        conj = translate(noprompt_choice_model).conjunction()
        assert equivalent(formula, conj)

    def test_all_invalid_is_false(self):
        from kconfex.prop import FALSE

        model = _model('config N\n\tint\nconfig G\n\tbool "g"\n\tdepends on N=5\n')
        table = ground_truth(model)
        # the invisible valued option can never hold its enumerated value
        assert all(not row.valid for row in table.rows)
        assert truth_table_formula(table) is FALSE

    def test_cross_strategy_consistency(self):
        for name, model in corpus_models():
            report = check_model(model)
            table = ground_truth(model)
            same = equivalent(truth_table_formula(table), translate(model).conjunction())
            assert same == report.clean, name


class TestEmbed:
    def test_tristate_pair_image(self):
        model = _model('config T\n\ttristate "t"\n')
        assert embed(model, {"T": Tri.M}) == {"T": False, "T_MODULE": True}
        assert embed(model, {"T": Tri.Y}) == {"T": True, "T_MODULE": False}

    def test_value_one_hot(self):
        model = _model('config N\n\tint "n"\n\tdefault 0\n\tdefault 5\n')
        image = embed(model, {"N": "5"})
        assert image == {"N_EQ_0": False, "N_EQ_5": True}


class TestRunCorpus:
    def test_repo_corpus_passes(self, corpus_dir):
        report = run_corpus(corpus_dir)
        assert report.passed
        assert len(report.reports) >= 40

    def test_empty_directory(self, tmp_path):
        report = run_corpus(tmp_path)
        assert report.passed
        assert report.reports == []

    def test_sabotaged_file_fails_and_is_named(self, tmp_path):
        (tmp_path / "good.kconfig").write_text('config A\n\tbool "a"\n')
        # a file whose parse fails is recorded, not fatal
        (tmp_path / "broken.kconfig").write_text("mainmenu oops\n")
        report = run_corpus(tmp_path)
        assert not report.passed
        by_name = {r.name: r for r in report.reports}
        assert by_name["good.kconfig"].passed
        assert by_name["broken.kconfig"].error

    def test_parallel_equals_sequential(self, corpus_dir):
        seq = run_corpus(corpus_dir, CorpusOptions(jobs=1))
        par = run_corpus(corpus_dir, CorpusOptions(jobs=4))

        def strip(report):
            return [
                (r.name, r.option_count, r.config_count, r.error, len(r.mismatches))
                for r in report.reports
            ]

        assert strip(seq) == strip(par)

    def test_render_contains_per_file_records(self, corpus_dir):
        report = run_corpus(corpus_dir)
        text = report.render_text()
        assert "file=choice_noprompt_member.kconfig" in text
        assert text.strip().endswith("status=PASS")


class TestGeneratedModels:
    def test_generator_is_deterministic(self):
        assert generate_model_text(5) == generate_model_text(5)
        assert generate_model_text(5) != generate_model_text(6)

    def test_generated_models_parse_validate_and_agree(self):
        for seed in range(25):
            text = generate_model_text(seed)
            model = parse_model(text, f"gen{seed}")
            errors = [d for d in validate_model(model) if d.severity == "error"]
            assert not errors, (seed, errors)
            report = check_model(model)
            assert report.passed, (seed, [m.describe() for m in report.failures])

    def test_run_corpus_includes_generated(self, tmp_path):
        report = run_corpus(tmp_path, CorpusOptions(generated=5, seed=11))
        assert len(report.reports) == 5
        assert report.passed
        assert all("generated[seed=" in r.name for r in report.reports)
