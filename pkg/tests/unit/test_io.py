"""
Unit tests for the CSV and JSON artifacts in utils.io.
"""

import json
import os

import numpy as np
import pandas as pd
import pytest

from chain_core.split import run_split_chain
from chain_core.tours import extract_tours
from models.chain import ChainSpec, SplitChainTrace, TourSequence
from models.probit import RegenProbRecord
from utils.errors import ParseError
from utils.io import (
    dumps_json,
    read_design_csv,
    read_trace_csv,
    read_tours_csv,
    tours_meta_path,
    write_json,
    write_matrix_csv,
    write_records_csv,
    write_tours_csv,
    write_trace_csv,
)


class TestTraceCsv:
    """Test suite for trace files."""

    def test_columns(self, hand_trace, tmp_path):
        path = write_trace_csv(hand_trace, tmp_path / 'trace.csv')

        df = pd.read_csv(path)

        assert list(df.columns) == ['t', 'delta', 'x_1']
        assert df['t'].tolist() == list(range(1, 13))
        assert df['delta'].sum() == 3

    def test_provenance_is_rebuilt(self, hand_trace, tmp_path):
        path = write_trace_csv(hand_trace, tmp_path / 'trace.csv')

        trace = read_trace_csv(path, lag=1, seed=4)

        np.testing.assert_array_equal(trace.from_q, hand_trace.from_q)
        np.testing.assert_array_equal(trace.states, hand_trace.states)
        assert trace.seed == 4

    def test_split_chain_reads_back_exactly(self, ar1_spec, tmp_path):
        original = run_split_chain(ar1_spec, 500, seed=1)
        path = write_trace_csv(original, tmp_path / 'trace.csv')

        trace = read_trace_csv(path)

        np.testing.assert_array_equal(trace.states, original.states)
        np.testing.assert_array_equal(trace.bells, original.bells)

    def test_non_binary_delta(self, tmp_path):
        path = tmp_path / 'trace.csv'
        path.write_text('t,delta,x_1\n1,0,0.5\n2,2,0.1\n')

        with pytest.raises(ParseError) as excinfo:
            read_trace_csv(path)

        assert excinfo.value.line == 3

    def test_missing_state_column(self, tmp_path):
        path = tmp_path / 'trace.csv'
        path.write_text('t,delta\n1,0\n')

        with pytest.raises(ParseError) as excinfo:
            read_trace_csv(path)

        assert excinfo.value.line == 1


class TestToursCsv:
    """Test suite for tour files."""

    def test_write_and_read(self, tmp_path):
        tours = TourSequence(z=[[1.5, -2.0], [0.1, 0.2]], tau=[3, 1])

        path = write_tours_csv(tours, tmp_path / 'tours.csv')
        back = read_tours_csv(path)

        assert path.read_text().splitlines()[0] == 'k,tau,z_1,z_2'
        np.testing.assert_array_equal(back.z, tours.z)
        np.testing.assert_array_equal(back.tau, tours.tau)

    def test_full_precision(self, tmp_path):
        tours = TourSequence(z=[0.1 + 0.2], tau=[1])

        back = read_tours_csv(write_tours_csv(tours, tmp_path / 'tours.csv'))

        assert back.z[0, 0] == 0.1 + 0.2

    def test_bookkeeping_survives_reload(self, tmp_path):
        # Arrange
        trace = run_split_chain(ChainSpec(kind='two-state', a=0.2, b=0.3), 503, seed=6)
        tours = extract_tours(trace)

        # Act
        path = write_tours_csv(tours, tmp_path / 'tours.csv')
        back = read_tours_csv(path)

        # Assert
        assert tours_meta_path(path) == tmp_path / 'tours.meta.json'
        assert back.residual_len == tours.residual_len
        assert back.leading_len == tours.leading_len
        assert back.total_length + back.leading_len + back.residual_len == 503

    def test_bookkeeping_from_explicit_lengths(self, tmp_path):
        tours = TourSequence(z=[1.0, 2.0], tau=[2, 3], residual_len=4, leading_len=1)

        back = read_tours_csv(write_tours_csv(tours, tmp_path / 'tours.csv'))

        assert (back.residual_len, back.leading_len) == (4, 1)

    def test_missing_sidecar_means_no_bookkeeping(self, tmp_path):
        path = tmp_path / 'tours.csv'
        path.write_text('k,tau,z_1\n1,2,0.5\n')

        back = read_tours_csv(path)

        assert (back.residual_len, back.leading_len) == (0, 0)

    @pytest.mark.parametrize('sidecar', ['{"residual_len": -1}', '{not json', '[1, 2]'])
    def test_bad_sidecar(self, tmp_path, sidecar):
        path = tmp_path / 'tours.csv'
        path.write_text('k,tau,z_1\n1,2,0.5\n')
        (tmp_path / 'tours.meta.json').write_text(sidecar)

        with pytest.raises(ParseError) as excinfo:
            read_tours_csv(path)

        assert excinfo.value.path.endswith('tours.meta.json')

    def test_corrupted_file_names_line(self, fixtures_dir):
        path = os.path.join(fixtures_dir, 'corrupted_tours.csv')

        with pytest.raises(ParseError) as excinfo:
            read_tours_csv(path)

        assert excinfo.value.line == 4
        assert 'line 4' in str(excinfo.value)

    @pytest.mark.parametrize('tau', ['0', '1.5'])
    def test_bad_tour_length(self, tmp_path, tau):
        path = tmp_path / 'tours.csv'
        path.write_text(f'k,tau,z_1\n1,2,0.5\n2,{tau},0.1\n')

        with pytest.raises(ParseError) as excinfo:
            read_tours_csv(path)

        assert excinfo.value.line == 3

    def test_empty_file(self, tmp_path):
        path = tmp_path / 'tours.csv'
        path.write_text('')

        with pytest.raises(ParseError):
            read_tours_csv(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            read_tours_csv(tmp_path / 'absent.csv')


class TestOtherArtifacts:
    """Test suite for records, designs, matrices and JSON."""

    def test_records(self, tmp_path):
        records = [RegenProbRecord(step=1, eta=0.5, uniform=0.25, bell=1),
                   RegenProbRecord(step=3, eta=0.0, uniform=0.75, bell=0)]

        df = pd.read_csv(write_records_csv(records, tmp_path / 'records.csv'))

        assert list(df.columns) == ['i', 'eta', 'bell']
        assert df['i'].tolist() == [1, 3]
        assert df['bell'].tolist() == [1, 0]

    def test_design(self, tmp_path):
        path = tmp_path / 'design.csv'
        path.write_text('x_1,x_2,y\n1,0.5,1\n1,-0.5,0\n1,2.0,1\n')

        X, y = read_design_csv(path)

        assert X.shape == (3, 2)
        assert y.tolist() == [1, 0, 1]

    def test_design_with_bad_response(self, tmp_path):
        path = tmp_path / 'design.csv'
        path.write_text('x_1,y\n1,1\n1,0.5\n')

        with pytest.raises(ParseError) as excinfo:
            read_design_csv(path)

        assert excinfo.value.line == 3

    def test_matrix(self, tmp_path):
        path = write_matrix_csv(np.array([[1.0, 0.5], [0.5, 2.0]]), tmp_path / 'm.csv')

        assert path.read_text().splitlines() == ['1,0.5', '0.5,2']

    def test_json_converts_numpy(self, tmp_path):
        payload = {'matrix': np.eye(2), 'count': np.int64(3), 'rate': np.float64(0.25)}

        path = write_json(payload, tmp_path / 'out.json')

        assert json.loads(path.read_text()) == {'matrix': [[1.0, 0.0], [0.0, 1.0]],
                                                'count': 3, 'rate': 0.25}
        assert path.read_text().endswith('\n')

    def test_json_rejects_unknown_objects(self):
        with pytest.raises(TypeError):
            dumps_json({'x': object()})


def test_trace_model_rejects_bell_without_q_draw():
    with pytest.raises(ValueError):
        SplitChainTrace(states=np.zeros(3), bells=[1, 0, 0], from_q=[True, False, False], lag=1, seed=0)
