import tempfile
from pathlib import Path

import numpy as np
from django.test import SimpleTestCase
from hypothesis import given, settings, strategies as st
from hypothesis.extra.django import SimpleTestCase as HypothesisTestCase

from design.exceptions import (
    ConfigError, EmptyCellError, InsufficientDataError, SchemaError, UsageError,
)
from design.ingest import assemble, ingest
from design.linalg import model_design, rank_and_sse
from design.models import INTERCEPT, ModelGamma, PredictorSchema
from design.schema import dumps_schema, parse_schema, read_schema
from design.synthetic import (
    frame_from_arrays, obesity_like, one_factor_exact, random_factor_design, write_dataset,
)

SCHEMA_TEXT = """
[response]
column = bmi

[sure]
columns = age, height

[variables]
columns = x1

[factors]
sports = none, weekly, daily
sleep = short, long
"""


def appendix_example():
    """Intercept and one 2-level factor, two observations per level."""
    frame, schema = frame_from_arrays(np.array([1.0, 1.4, 2.2, 2.9]), factors={'A': (np.array([0, 0, 1, 1]), 2)})
    return assemble(frame, schema)


class SchemaDocumentTests(SimpleTestCase):

    def test_parse_keeps_declared_order(self):
        schema = parse_schema(SCHEMA_TEXT)
        self.assertEqual(schema.response_column, 'bmi')
        self.assertEqual(schema.sure_columns, ('age', 'height'))
        self.assertEqual(schema.factor_names, ('sports', 'sleep'))
        self.assertEqual(schema.levels, (3, 2))
        self.assertEqual((schema.k0, schema.k, schema.p, schema.L), (3, 1, 2, 5))
        self.assertEqual(schema.column_labels(),
                         ('x1', 'sports=none', 'sports=weekly', 'sports=daily', 'sleep=short', 'sleep=long'))

    def test_document_round_trip(self):
        schema = parse_schema(SCHEMA_TEXT)
        self.assertEqual(parse_schema(dumps_schema(schema)), schema)

    def test_optional_sections(self):
        schema = parse_schema('[response]\ncolumn = y\n[factors]\nA = 1, 2\n')
        self.assertEqual(schema.k0, 1)
        self.assertEqual(schema.k, 0)

    def test_single_level_factor_is_rejected(self):
        with self.assertRaises(SchemaError):
            parse_schema('[response]\ncolumn = y\n[factors]\nA = only\n')

    def test_missing_response_is_rejected(self):
        with self.assertRaises(SchemaError):
            parse_schema('[factors]\nA = 1, 2\n')

    def test_duplicate_column_names_are_rejected(self):
        with self.assertRaises(SchemaError):
            PredictorSchema('y', sure_columns=('x',), variable_columns=('x',))
        with self.assertRaises(SchemaError):
            PredictorSchema('y', sure_columns=(INTERCEPT,))

    def test_missing_schema_file_is_a_config_error(self):
        with self.assertRaises(ConfigError) as caught:
            read_schema('/nonexistent/schema.ini')
        self.assertEqual(caught.exception.exit_code, 2)


class IngestTests(SimpleTestCase):

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)

    def test_obesity_shaped_dataset(self):
        frame, schema = obesity_like()
        data_path, schema_path = write_dataset(frame, schema, self.tmp.name)
        schema, assembly = ingest(data_path, schema_path)
        self.assertEqual((assembly.n, assembly.k0, assembly.k, assembly.p, assembly.L), (1002, 4, 2, 2, 9))
        self.assertEqual(assembly.levels, (6, 3))
        self.assertTrue(np.all(assembly.X0[:, 0] == 1.0))
        for block in (assembly.Z[:, s] for s in assembly.factor_slices()):
            self.assertTrue(np.all(block.sum(axis=1) == 1))
        self.assertEqual(sum(assembly.cell_counts[0]), 1002)

    def test_tab_delimited_file(self):
        frame, schema = one_factor_exact(size=3, per_level=4)
        data_path, schema_path = write_dataset(frame, schema, self.tmp.name, delimiter='\t')
        _, assembly = ingest(data_path, schema_path, delimiter='tab')
        self.assertEqual(assembly.cell_counts, ((4, 4, 4),))

    def test_appendix_example(self):
        assembly = appendix_example()
        self.assertEqual(assembly.n, 4)
        np.testing.assert_array_equal(assembly.Z, [[1, 0], [1, 0], [0, 1], [0, 1]])

    def test_missing_data_file_is_a_config_error(self):
        schema = parse_schema(SCHEMA_TEXT)
        with self.assertRaises(ConfigError):
            ingest(Path(self.tmp.name) / 'absent.csv', schema)

    def test_missing_column(self):
        frame, schema = one_factor_exact(size=3, per_level=4)
        with self.assertRaises(SchemaError):
            assemble(frame.drop(columns=['A']), schema)

    def test_unseen_level_label(self):
        frame, schema = one_factor_exact(size=3, per_level=4)
        frame.loc[0, 'A'] = '9'
        with self.assertRaises(SchemaError):
            assemble(frame, schema)

    def test_declared_level_without_observations(self):
        frame, _ = one_factor_exact(size=3, per_level=4)
        schema = PredictorSchema('y', factor_columns=(('A', ('1', '2', '3', '4')),))
        with self.assertRaises(EmptyCellError) as caught:
            assemble(frame, schema)
        self.assertEqual(caught.exception.code, 'empty-cell')

    def test_non_numeric_and_missing_cells(self):
        frame, schema = one_factor_exact(size=3, per_level=4)
        bad = frame.copy()
        bad.loc[2, 'y'] = 'abc'
        with self.assertRaises(SchemaError):
            assemble(bad, schema)
        bad = frame.copy()
        bad.loc[2, 'y'] = 'NA'
        with self.assertRaises(SchemaError):
            assemble(bad, schema)

    def test_too_few_observations(self):
        y = np.array([1.0, 2.0, 3.0])
        variables = {'x1': np.array([0.1, 0.5, 0.2]), 'x2': np.array([1.0, 0.0, 2.0]),
                     'x3': np.array([3.0, 1.0, 0.0])}
        frame, schema = frame_from_arrays(y, variables=variables)
        with self.assertRaises(InsufficientDataError):
            assemble(frame, schema)


class ModelDesignTests(SimpleTestCase):

    def test_null_model_is_the_sure_block(self):
        assembly = appendix_example()
        np.testing.assert_array_equal(model_design(assembly, assembly.null_model()), assembly.X0)

    def test_full_model_is_rank_deficient(self):
        assembly = appendix_example()
        design = model_design(assembly, assembly.full_model())
        self.assertEqual(design.shape, (4, 3))
        rank, _ = rank_and_sse(assembly, assembly.full_model())
        self.assertEqual(rank, 2)

    def test_single_level_selection(self):
        assembly = appendix_example()
        gamma = ModelGamma.from_bits((0, 1), 0, (2,))
        np.testing.assert_array_equal(model_design(assembly, gamma), [[1, 0], [1, 0], [1, 1], [1, 1]])

    def test_dimension_mismatch(self):
        assembly = appendix_example()
        with self.assertRaises(UsageError):
            model_design(assembly, ModelGamma.null(1, (2,)))

    def test_null_fit(self):
        frame, schema = one_factor_exact(size=4, per_level=10)
        assembly = assemble(frame, schema)
        rank, sse = rank_and_sse(assembly, assembly.null_model())
        self.assertEqual(rank, 1)
        self.assertAlmostEqual(sse, float(np.sum((assembly.y - assembly.y.mean()) ** 2)), places=8)

    def test_exact_within_cell_sum_of_squares(self):
        frame, schema = one_factor_exact(size=6, per_level=80)
        assembly = assemble(frame, schema)
        rank, sse = rank_and_sse(assembly, assembly.full_model())
        self.assertEqual(rank, 6)
        self.assertAlmostEqual(sse, 480 - 6, places=8)

    def test_corner_coding_drops_one_column(self):
        frame, schema = one_factor_exact(size=4, per_level=5)
        coded = assemble(frame, schema).with_baseline('A', '2')
        self.assertEqual(coded.L, 3)
        self.assertEqual(coded.schema.factor_columns, (('A', ('1', '3', '4')),))
        self.assertEqual(coded.baselines, (('A', '2'),))


class ModelGammaTests(HypothesisTestCase):

    @given(st.integers(min_value=0, max_value=(1 << 7) - 1))
    def test_index_orders_models_lexicographically(self, index):
        gamma = ModelGamma.from_index(index, 2, (3, 2))
        self.assertEqual(gamma.index, index)
        self.assertEqual(gamma.size, bin(index).count('1'))

    def test_active_levels_and_labels(self):
        schema = parse_schema(SCHEMA_TEXT)
        gamma = ModelGamma.from_bits((1, 0, 1, 1, 0, 0), 1, (3, 2))
        self.assertEqual(gamma.active_levels(), (2, 0))
        self.assertEqual(gamma.factor_count, 1)
        self.assertEqual(gamma.describe(schema), 'x1 + sports=weekly + sports=daily')
        self.assertEqual(ModelGamma.null(1, (3, 2)).describe(schema), '(null)')

    def test_bits_must_be_binary(self):
        with self.assertRaises(UsageError):
            ModelGamma((2,), (0, 1), (2,))

    @settings(max_examples=25, deadline=None, derandomize=True)
    @given(st.integers(min_value=0, max_value=10 ** 6), st.integers(min_value=2, max_value=5),
           st.booleans(), st.data())
    def test_rank_and_sse_properties(self, seed, size, covariate, data):
        assembly = random_factor_design(np.random.default_rng(seed), size, covariate=covariate)
        _, sse0 = rank_and_sse(assembly, assembly.null_model())
        gamma = ModelGamma.from_index(data.draw(st.integers(0, (1 << size) - 1)), 0, (size,))
        rank, sse = rank_and_sse(assembly, gamma)
        self.assertGreaterEqual(sse, 0.0)
        self.assertLessEqual(sse, sse0 * (1 + 1e-12))
        self.assertLessEqual(rank, assembly.k0 + min(gamma.size, size - 1))
        # any ℓ - 1 levels span the same space as all ℓ
        full_rank, full_sse = rank_and_sse(assembly, assembly.full_model())
        missing = data.draw(st.integers(0, size - 1))
        dropped = ModelGamma.from_bits([0 if j == missing else 1 for j in range(size)], 0, (size,))
        rank_dropped, sse_dropped = rank_and_sse(assembly, dropped)
        self.assertEqual(rank_dropped, full_rank)
        self.assertAlmostEqual(sse_dropped / full_sse, 1.0, delta=1e-10)
