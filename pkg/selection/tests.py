import json
import tempfile
from io import StringIO
from pathlib import Path

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase

from design.exceptions import ConfigError
from design.synthetic import obesity_like, one_factor_exact, pure_noise, write_dataset
from selection.forms import RunConfigForm


class RunConfigFormTests(SimpleTestCase):

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)
        self.data, self.schema = write_dataset(*one_factor_exact(size=3, per_level=5), self.tmp.name)

    def test_defaults(self):
        config = RunConfigForm({'data': str(self.data), 'schema': str(self.schema)}).run_config()
        self.assertEqual(config.prior, 'hierarchical')
        self.assertEqual(config.hyper, 'robust')
        self.assertEqual(config.format, 'json')
        self.assertEqual(config.top_n, 10)
        self.assertIsNone(config.out)

    def test_missing_schema(self):
        form = RunConfigForm({'data': str(self.data), 'schema': str(Path(self.tmp.name) / 'none.ini')})
        with self.assertRaises(ConfigError):
            form.run_config()

    def test_bad_choices(self):
        form = RunConfigForm({'data': str(self.data), 'schema': str(self.schema), 'prior': 'uniform', 'jobs': 0})
        with self.assertRaises(ConfigError) as caught:
            form.run_config()
        self.assertIn('prior', str(caught.exception))
        self.assertIn('jobs', str(caught.exception))


class SelectCommandTests(SimpleTestCase):

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.tmp = tempfile.TemporaryDirectory()
        cls.data, cls.schema = write_dataset(*obesity_like(), cls.tmp.name, name='obesity')
        cls.noise_data, cls.noise_schema = write_dataset(*pure_noise(n=200, k=1, size=3), cls.tmp.name, name='noise')

    @classmethod
    def tearDownClass(cls):
        cls.tmp.cleanup()
        super().tearDownClass()

    def select(self, **options):
        stdout, stderr = StringIO(), StringIO()
        call_command('select', stdout=stdout, stderr=stderr, **options)
        return stdout.getvalue()

    def test_obesity_shaped_report(self):
        document = json.loads(self.select(data=str(self.data), schema=str(self.schema)))
        self.assertEqual(len(document['factor_inclusion']), 2)
        self.assertEqual(len(document['variable_inclusion']), 2)
        self.assertEqual(sum(len(levels) for levels in document['level_inclusion'].values()), 9)
        self.assertEqual(document['design']['models'], 2048)

    def test_report_files_are_byte_identical(self):
        paths = [Path(self.tmp.name) / 'first.json', Path(self.tmp.name) / 'second.json']
        for path in paths:
            self.select(data=str(self.data), schema=str(self.schema), out=str(path), jobs=2)
        self.assertEqual(paths[0].read_bytes(), paths[1].read_bytes())

    def test_text_format_with_extras(self):
        text = self.select(data=str(self.data), schema=str(self.schema), format='text', top_n=3,
                           baseline_demo='sleep', prior_audit=True)
        self.assertIn('Baseline sensitivity', text)
        self.assertIn('Prior audit', text)
        self.assertIn('total_mass: pass', text)

    def test_hierarchical_prior_keeps_more_mass_on_the_null(self):
        null = {}
        for prior in ('constant', 'hierarchical'):
            document = json.loads(self.select(data=str(self.noise_data), schema=str(self.noise_schema), prior=prior))
            null[prior] = document['null_model']['posterior']
        self.assertGreater(null['hierarchical'], null['constant'])

    def test_missing_schema_file(self):
        stderr = StringIO()
        with self.assertRaises(CommandError) as caught:
            call_command('select', data=str(self.data), schema=str(Path(self.tmp.name) / 'absent.ini'),
                         stdout=StringIO(), stderr=stderr)
        self.assertEqual(caught.exception.returncode, 2)
        self.assertTrue(stderr.getvalue().startswith('error=config '))

    def test_unknown_baseline_factor(self):
        with self.assertRaises(CommandError) as caught:
            self.select(data=str(self.data), schema=str(self.schema), baseline_demo='height')
        self.assertEqual(caught.exception.returncode, 2)

    def test_schema_error_exit_code(self):
        bad = Path(self.tmp.name) / 'bad.ini'
        bad.write_text('[response]\ncolumn = y\n[factors]\nsports = 1, 2\n', encoding='utf-8')
        with self.assertRaises(CommandError) as caught:
            self.select(data=str(self.data), schema=str(bad))
        self.assertEqual(caught.exception.returncode, 3)


class ValidateCommandTests(SimpleTestCase):

    def test_single_suite(self):
        stdout = StringIO()
        call_command('validate', suites=['testability'], seed=3, stdout=stdout, stderr=StringIO())
        output = stdout.getvalue()
        self.assertIn('testability', output)
        self.assertNotIn('bcal', output)
        self.assertIn('pass', output)


class PriorAuditCommandTests(SimpleTestCase):

    def test_obesity_dimensions(self):
        stdout = StringIO()
        call_command('prior_audit', variables=2, levels=[6, 3], format='json', stdout=stdout, stderr=StringIO())
        document = json.loads(stdout.getvalue())
        self.assertTrue(document['passed'])
        self.assertEqual(document['models'], 2048)
        self.assertAlmostEqual(document['null_prior_by_scheme']['scott_berger_flat'], 1 / 12, delta=1e-12)

    def test_capacity_exit_code(self):
        with self.assertRaises(CommandError) as caught:
            call_command('prior_audit', variables=30, stdout=StringIO(), stderr=StringIO())
        self.assertEqual(caught.exception.returncode, 4)
