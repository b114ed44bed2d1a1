"""
Unit tests for the config package: file loading, layered merging,
completeness validation and the experiment manager.
"""

import json
import os

import pytest

from config.loader import auto_load_configuration, load_env_defaults, load_from_file
from config.manager import ExperimentManager, package_versions
from config.validator import get_validation_error_message, validate_config_complete
from models.experiment import DiagnoseConfig, EstimateConfig, SimulateConfig
from utils.errors import ConfigError, ParseError


@pytest.fixture
def no_env(mocker, tmp_path):
    """Path of a .env file that does not exist, with the environment restored afterwards."""
    mocker.patch.dict(os.environ)
    os.environ.pop('REGENMC_OUTPUT_DIR', None)
    return str(tmp_path / 'absent.env')


class TestLoadFromFile:
    """Test suite for load_from_file."""

    def test_yaml_with_dashed_keys(self, fixtures_dir):
        data = load_from_file(os.path.join(fixtures_dir, 'simulate_config.yaml'))

        assert data['seed'] == 7
        assert data['h_scale'] == 1.0
        assert 'h-scale' not in data

    def test_json(self, tmp_path):
        path = tmp_path / 'run.json'
        path.write_text(json.dumps({'seed': 3, 'clt-n': 1000}))

        assert load_from_file(str(path)) == {'seed': 3, 'clt_n': 1000}

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError, match='not found'):
            load_from_file(str(tmp_path / 'nope.yaml'))

    def test_empty_file(self, tmp_path):
        path = tmp_path / 'empty.yaml'
        path.write_text('')

        with pytest.raises(ConfigError, match='empty'):
            load_from_file(str(path))

    def test_unsupported_suffix(self, tmp_path):
        path = tmp_path / 'run.toml'
        path.write_text('seed = 1\n')

        with pytest.raises(ConfigError, match='Unsupported'):
            load_from_file(str(path))

    def test_not_a_mapping(self, tmp_path):
        path = tmp_path / 'list.yaml'
        path.write_text('- 1\n- 2\n')

        with pytest.raises(ConfigError, match='mapping'):
            load_from_file(str(path))

    def test_json_syntax_error_names_line(self, tmp_path):
        path = tmp_path / 'bad.json'
        path.write_text('{"seed": 1,\n}\n')

        with pytest.raises(ParseError) as excinfo:
            load_from_file(str(path))

        assert excinfo.value.line == 2
        assert excinfo.value.path == str(path)

    def test_yaml_syntax_error(self, tmp_path):
        path = tmp_path / 'bad.yaml'
        path.write_text('seed: [1, 2\n')

        with pytest.raises(ParseError):
            load_from_file(str(path))


class TestAutoLoadConfiguration:
    """Test suite for layered merging."""

    def test_flags_override_file(self, fixtures_dir, no_env):
        # Arrange
        path = os.path.join(fixtures_dir, 'simulate_config.yaml')

        # Act
        data = auto_load_configuration(path, {'n': 100, 'seed': None}, env_file=no_env)

        # Assert
        assert data['n'] == 100
        assert data['seed'] == 7

    def test_env_is_lowest_layer(self, no_env, tmp_path):
        env_file = tmp_path / '.env'
        env_file.write_text('REGENMC_OUTPUT_DIR=from-env\n')

        assert load_env_defaults(str(env_file)) == {'output_dir': 'from-env'}
        data = auto_load_configuration(None, {'output_dir': 'from-flag'}, env_file=str(env_file))
        assert data['output_dir'] == 'from-flag'

    def test_no_sources(self, no_env):
        assert auto_load_configuration(None, None, env_file=no_env) == {}


class TestValidateConfigComplete:
    """Test suite for validate_config_complete."""

    @pytest.mark.parametrize('command', ['simulate', 'probit-regen', 'diagnose'])
    def test_seed_is_required(self, command):
        assert validate_config_complete(command, {'n': 10}) == (False, ['seed'])

    @pytest.mark.parametrize('seed', [None, '', '   '])
    def test_blank_seed_is_missing(self, seed):
        is_valid, missing = validate_config_complete('simulate', {'seed': seed})

        assert is_valid is False
        assert missing == ['seed']

    def test_seed_zero_is_present(self):
        assert validate_config_complete('simulate', {'seed': 0}) == (True, None)

    def test_estimate_needs_an_input(self):
        is_valid, missing = validate_config_complete('estimate', {'seed': 1})

        assert is_valid is False
        assert missing == ['tours or trace']
        assert validate_config_complete('estimate', {'seed': 1, 'trace': 't.csv'}) == (True, None)

    def test_unknown_command(self):
        with pytest.raises(ValueError):
            validate_config_complete('publish', {})

    def test_error_message(self):
        message = get_validation_error_message('estimate', ['seed', 'tours or trace'])

        assert 'Missing required fields: seed, tours or trace' in message
        assert '--seed' in message
        assert '--tours or --trace' in message


class TestExperimentManager:
    """Test suite for ExperimentManager."""

    def test_load_from_file_and_flags(self, fixtures_dir, tmp_path, no_env):
        manager = ExperimentManager('simulate')

        config = manager.load(os.path.join(fixtures_dir, 'simulate_config.yaml'),
                              {'output_dir': str(tmp_path), 'n': 200}, env_file=no_env)

        assert isinstance(config, SimulateConfig)
        assert (config.seed, config.n, config.a) == (7, 200, 0.2)

    def test_missing_seed(self, fixtures_dir, no_env):
        manager = ExperimentManager('simulate')

        with pytest.raises(ConfigError, match='seed'):
            manager.load(os.path.join(fixtures_dir, 'missing_seed.yaml'), env_file=no_env)

    @pytest.mark.parametrize('flags', [
        {'seed': 1, 'a': 1.5},
        {'seed': 1, 'fixture': 'three-state'},
        {'seed': -1},
        {'seed': 1, 'unknown_option': 3},
    ])
    def test_invalid_values_become_config_errors(self, flags, no_env):
        with pytest.raises(ConfigError):
            ExperimentManager('simulate').load(None, flags, env_file=no_env)

    def test_estimate_delta_requires_p(self, no_env):
        with pytest.raises(ConfigError):
            ExperimentManager('estimate').load(None, {'seed': 1, 'tours': 't.csv', 'delta': 2.0},
                                               env_file=no_env)

        config = ExperimentManager('estimate').load(
            None, {'seed': 1, 'tours': 't.csv', 'delta': 2.0, 'geometric': True}, env_file=no_env)
        assert isinstance(config, EstimateConfig)

    def test_unknown_command(self):
        with pytest.raises(ConfigError, match='Unknown command'):
            ExperimentManager('publish')

    def test_config_before_load(self):
        with pytest.raises(RuntimeError):
            ExperimentManager('diagnose').config

    def test_manifest(self, tmp_path):
        # Arrange
        config = DiagnoseConfig(seed=5, output_dir=str(tmp_path / 'run'))
        manager = ExperimentManager.from_config('diagnose', config)

        # Act
        path = manager.write_manifest()

        # Assert
        manifest = json.loads(path.read_text())
        assert set(manifest) == {'command', 'config', 'seed', 'versions', 'created_at'}
        assert manifest['seed'] == 5
        assert manifest['config']['replications'] == 500
        assert path.parent == tmp_path / 'run'

    def test_package_versions(self):
        versions = package_versions()

        assert 'python' in versions
        assert versions['numpy'] != 'unknown'


class TestFixtureConfig:
    """Test suite for fixture validation in the experiment models."""

    @pytest.mark.parametrize('fields', [
        {'fixture': 'ar1', 'lag': 2},
        {'fixture': 'two-state', 'a': 0.0, 'b': 0.0},
    ])
    def test_unbuildable_fixture_rejected(self, fields):
        with pytest.raises(ValueError):
            SimulateConfig(seed=1, n=100, **fields)

    def test_chain_spec_errors_become_config_errors(self):
        # Arrange
        config = SimulateConfig.model_construct(
            seed=1, n=100, fixture='two-state', a=0.0, b=0.0, lag=1, h_scale=1.0)

        # Act / Assert
        with pytest.raises(ConfigError, match='two-state'):
            config.to_chain_spec()

    def test_valid_fixture_builds_spec(self):
        spec = SimulateConfig(seed=1, fixture='ar1', rho=0.3).to_chain_spec()

        assert spec.kind == 'ar1'
        assert spec.rho == 0.3
