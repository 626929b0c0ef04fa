import csv
import json
import math
import shutil
import tempfile
from io import StringIO
from pathlib import Path

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, TestCase, override_settings

from pauli.polynomial import PauliPolynomial
from pauli.textio import read_polynomial, write_polynomial

from .exceptions import ManifestError
from .forms import BhSweepForm, BohrForm, LearnForm, validate_manifest
from .history import RunHistoryRepository
from .manifest import canonical_text, parse_manifest
from .models import ExperimentRun
from .writers import format_value, render_csv, render_json


class ManifestTests(SimpleTestCase):
    def test_grammar(self):
        entries = parse_manifest('# sweep\nn = 1,2\n\nd=1   # degree\nseed = 7\n')
        self.assertEqual(entries, {'n': '1,2', 'd': '1', 'seed': '7'})

    def test_malformed_lines(self):
        for text in ('n 1\n', 'n = 1\nn = 2\n', '2n = 1\n'):
            with self.assertRaises(ManifestError, msg=text):
                parse_manifest(text)

    def test_canonical_text_is_sorted(self):
        self.assertEqual(canonical_text({'seed': 1, 'n': [1, 2]}), 'n = [1, 2]\nseed = 1\n')


class ManifestFormTests(SimpleTestCase):
    def test_defaults_and_typing(self):
        params = validate_manifest(BhSweepForm, {'n': '2,3', 'homogeneous': 'true'})
        self.assertEqual(params['n'], [2, 3])
        self.assertEqual(params['d'], [1, 2])
        self.assertTrue(params['homogeneous'])
        self.assertEqual(params['seed'], 0)

    def test_unknown_keys_are_errors(self):
        with self.assertRaises(ManifestError):
            validate_manifest(BhSweepForm, {'n': '1', 'nn': '2'})

    def test_invalid_values(self):
        with self.assertRaises(ManifestError):
            validate_manifest(LearnForm, {'n': '2', 'd': '3'})
        with self.assertRaises(ManifestError):
            validate_manifest(BhSweepForm, {'n': '1,x'})
        with self.assertRaises(ManifestError):
            validate_manifest(BohrForm, {'class': 'odd'})

    def test_class_key(self):
        params = validate_manifest(BohrForm, {'class': 'eq_d', 'd': '2'})
        self.assertEqual(params['class'], 'eq_d')
        self.assertEqual(validate_manifest(BohrForm, {})['class'], 'all')

    def test_boolean_false(self):
        self.assertFalse(validate_manifest(LearnForm, {'hermitian': 'false'})['hermitian'])
        self.assertTrue(validate_manifest(LearnForm, {})['hermitian'])


class WriterTests(SimpleTestCase):
    def test_float_formatting(self):
        self.assertEqual(format_value(0.1), '0.10000000000000001')
        self.assertEqual(format_value(math.inf), 'inf')
        self.assertEqual(format_value(True), 'true')
        self.assertEqual(format_value(None), '')

    def test_csv_and_json(self):
        self.assertEqual(render_csv(('a', 'b'), [(1, 0.5)]), 'a,b\n1,0.5\n')
        self.assertEqual(render_csv(('a',), []), 'a\n')
        self.assertEqual(json.loads(render_json({'b': math.inf, 'a': 1})), {'a': 1, 'b': 'inf'})


class CommandTestCase(TestCase):
    def setUp(self):
        self.workdir = Path(tempfile.mkdtemp())
        self.addCleanup(shutil.rmtree, self.workdir, ignore_errors=True)

    def manifest(self, name, text):
        path = self.workdir / name
        path.write_text(text, encoding='utf-8')
        return str(path)

    def run_command(self, command, manifest_text, out_name, **options):
        out = self.workdir / out_name
        call_command(command, manifest=self.manifest(f'{out_name}.manifest', manifest_text), out=str(out), **options)
        return out

    def read_rows(self, path):
        with open(path, newline='') as handle:
            return list(csv.DictReader(handle))

    def read_summary(self, path):
        return json.loads(Path(path).with_suffix('.json').read_text())


class BhSweepCommandTests(CommandTestCase):
    def test_single_cell_rows_stay_below_bound(self):
        out = self.run_command('bh_sweep', 'n = 1\nd = 1\nseeds = 100\n', 'bh.csv')
        rows = self.read_rows(out)
        self.assertEqual(len(rows), 100)
        summary = self.read_summary(out)
        cell = summary['cells']['quantum:n=1:d=1']
        self.assertLessEqual(cell['max_ratio'], cell['bound'])
        self.assertTrue(summary['passed'])

    def test_empty_grid_gives_header_only(self):
        out = self.run_command('bh_sweep', 'n =\nd = 1\n', 'empty.csv')
        self.assertEqual(out.read_text(), 'kind,n,d,seed,lhs,norm,norm_mode,ratio\n')

    def test_same_seed_gives_identical_files(self):
        text = 'n = 1,2\nd = 1,2\nseeds = 10\nkind = both\n'
        first = self.run_command('bh_sweep', text, 'one.csv', seed=5)
        second = self.run_command('bh_sweep', text, 'two.csv', seed=5)
        self.assertEqual(first.read_bytes(), second.read_bytes())

    def test_workers_do_not_change_output(self):
        text = 'n = 2\nd = 2\nseeds = 12\n'
        first = self.run_command('bh_sweep', text, 'serial.csv')
        with override_settings(QCUBE_WORKERS=4):
            second = self.run_command('bh_sweep', text, 'pooled.csv')
        self.assertEqual(first.read_bytes(), second.read_bytes())

    def test_unknown_key_fails(self):
        with self.assertRaises(CommandError):
            self.run_command('bh_sweep', 'n = 1\nsed = 3\n', 'typo.csv')


class LearnCommandTests(CommandTestCase):
    def test_zero_trials(self):
        out = self.run_command('learn', 'n = 2\nd = 1\ntrials = 0\n', 'none.csv')
        self.assertEqual(self.read_rows(out), [])
        summary = self.read_summary(out)
        self.assertEqual(summary['trials'], 0)
        self.assertIsNone(summary['success_rate'])

    def test_desk_scale_run(self):
        text = 'n = 4\nd = 1\neps = 0.1\ndelta = 0.05\ntrials = 30\nn_override = 20000\nb_override = 0.02\nmin_success_rate = 0.8\n'
        out = self.run_command('learn', text, 'learn.csv', seed=3)
        rows = self.read_rows(out)
        self.assertEqual(len(rows), 30)
        self.assertEqual(rows[0]['N'], '20000')
        self.assertGreaterEqual(self.read_summary(out)['success_rate'], 0.9)
        again = self.run_command('learn', text, 'learn-again.csv', seed=3)
        self.assertEqual(out.read_bytes(), again.read_bytes())

    def test_budget_flag_prints_without_sampling(self):
        stdout = StringIO()
        manifest = self.manifest('budget.manifest', 'n = 4\nd = 1\neps = 0.1\ndelta = 0.1\nbh_bound = 1\n')
        call_command('learn', manifest=manifest, paper_n=True, stdout=stdout)
        budget = json.loads(stdout.getvalue())
        self.assertAlmostEqual(budget['b'], 1 / 900)
        self.assertEqual(ExperimentRun.objects.count(), 0)

    def test_observable_file(self):
        path = self.workdir / 'z.txt'
        write_polynomial(PauliPolynomial.from_labels({'Z': 1.0}), path)
        text = f'n = 1\nd = 1\ntrials = 3\nn_override = 20000\nb_override = 0.02\nobservable = {path}\n'
        out = self.run_command('learn', text, 'z.csv')
        self.assertTrue(all(row['survivors'] == '1' for row in self.read_rows(out)))

    def test_two_threshold_runs_use_their_own_bounds(self):
        path = self.workdir / 'z.txt'
        write_polynomial(PauliPolynomial.from_labels({'Z': 1.0}), path)
        text = (
            f'n = 1\nd = 1\ntrials = 3\nn_override = 20000\nb_override = 0.02\na_override = 0.5\n'
            f'min_success_rate = 0\nobservable = {path}\n'
        )
        out = self.run_command('learn', text, 'two.csv')
        rows = self.read_rows(out)
        self.assertTrue(all(row['good_event'] == 'true' and row['survivors'] == '0' for row in rows))
        self.assertTrue(all(float(row['err_l2sq']) == 1.0 for row in rows))
        summary = self.read_summary(out)
        self.assertEqual(summary['bound_violations'], [])
        self.assertEqual(summary['survivor_bound_holds'], 3)
        self.assertTrue(summary['passed'])

    def test_summary_counts_survivor_limit(self):
        text = 'n = 2\nd = 1\ntrials = 4\nn_override = 5000\nb_override = 0.02\nmin_success_rate = 0\n'
        summary = self.read_summary(self.run_command('learn', text, 'limit.csv'))
        self.assertEqual(summary['survivor_bound_holds'], 4)


class LiftVerifyCommandTests(CommandTestCase):
    def test_exhaustive_two_qubits_pass(self):
        out = self.run_command('lift_verify', 'n = 2\nd = 2\ninstances = 20\n', 'lift.csv')
        rows = self.read_rows(out)
        self.assertEqual(len(rows), 20)
        self.assertTrue(all(row['passed'] == 'true' and row['points'] == '64' for row in rows))
        self.assertTrue(self.read_summary(out)['dense_checked'])

    def test_zero_polynomial_passes(self):
        path = self.workdir / 'zero.txt'
        write_polynomial(PauliPolynomial.zero(2), path)
        self.assertEqual(read_polynomial(path).n, 2)
        out = self.run_command('lift_verify', f'observable = {path}\n', 'zero.csv')
        self.assertEqual(self.read_rows(out)[0]['passed'], 'true')

    def test_corruption_is_caught(self):
        with self.assertRaises(CommandError):
            self.run_command('lift_verify', 'n = 1\nd = 1\ninstances = 2\ncorrupt = true\n', 'bad.csv')
        summary = json.loads((self.workdir / 'bad.json').read_text())
        self.assertEqual(len(summary['failures']), 2)
        self.assertIn('|', summary['failures'][0]['eps'])
        run = ExperimentRun.objects.get()
        self.assertFalse(run.passed)

    def test_sampled_points(self):
        out = self.run_command('lift_verify', 'n = 3\nd = 2\ninstances = 3\npoints = 500\n', 'sampled.csv')
        self.assertTrue(all(row['points'] == '500' for row in self.read_rows(out)))


class BohrCommandTests(CommandTestCase):
    def test_one_bit_class_minimum(self):
        out = self.run_command('bohr', 'n = 1\nensemble = 20\n', 'bohr.csv')
        row = self.read_rows(out)[0]
        self.assertAlmostEqual(float(row['empirical_min_radius']), 1.0, places=12)
        self.assertEqual(float(row['reference_value']), 1.0)

    def test_constant_observable_gives_degenerate_row(self):
        path = self.workdir / 'identity.txt'
        write_polynomial(PauliPolynomial.from_labels({'I': 2.0}), path)
        out = self.run_command('bohr', f'mode = check\nobservable = {path}\n', 'constant.csv')
        row = self.read_rows(out)[0]
        self.assertEqual(row['quantum_radius'], 'inf')
        self.assertEqual(row['passed'], 'skipped')

    def test_radius_checks_and_determinism(self):
        text = 'mode = check\nn = 1,2\ninstances = 40\n'
        first = self.run_command('bohr', text, 'check.csv', seed=2)
        second = self.run_command('bohr', text, 'check-again.csv', seed=2)
        self.assertEqual(first.read_bytes(), second.read_bytes())
        self.assertEqual(self.read_summary(first)['violations'], [])


class GenAndRunsCommandTests(CommandTestCase):
    def test_gen_is_deterministic_and_parses(self):
        first = self.workdir / 'a.txt'
        second = self.workdir / 'b.txt'
        call_command('gen', manifest=self.manifest('gen.manifest', 'n = 2\nd = 1\n'), seed=9, out=str(first))
        call_command('gen', manifest=self.manifest('gen.manifest', 'n = 2\nd = 1\n'), seed=9, out=str(second))
        self.assertEqual(first.read_bytes(), second.read_bytes())
        self.assertEqual(len(read_polynomial(first)), 7)

    def test_runs_lists_history(self):
        self.run_command('bh_sweep', 'n = 1\nd = 1\nseeds = 2\n', 'h.csv')
        recent = RunHistoryRepository().get_recent_runs(command='bh_sweep')
        self.assertEqual(len(recent), 1)
        self.assertTrue(recent[0]['passed'])
        self.assertEqual(recent[0]['rows'], 2)
        stdout = StringIO()
        call_command('runs', stdout=stdout)
        self.assertIn('bh_sweep', stdout.getvalue())

    @override_settings(QCUBE_RECORD_RUNS=False)
    def test_recording_can_be_disabled(self):
        self.run_command('bh_sweep', 'n = 1\nd = 1\nseeds = 1\n', 'off.csv')
        self.assertEqual(ExperimentRun.objects.count(), 0)
