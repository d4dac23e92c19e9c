# tests/test_cli.py
"""Tests for the itfkit command line and its exit codes"""

import pytest
import json
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from conftest import BUS_SOURCE, model_path
from cli import EXIT_FINDINGS, EXIT_OK, EXIT_USAGE, cli
from config import Config

from unittest.mock import patch

REJECTED_SOURCE = """
platform Rejected {
  initiator C0;
  initiator C1;
  transporter BUS;
  target DDR { service load; capacity 1000000 Bps; }
  link C0 -> BUS;
  link C1 -> BUS;
  link BUS -> DDR;
  application a { transaction bad: BUS -> DDR uses load rate 1000/s size 64 B; }
  application b { transaction ok: C1 -> BUS -> DDR uses load rate 1/s size 1 B; }
  application c { transaction ok: C0 -> BUS -> DDR uses load rate 1/s size 1 B; }
}
"""

SHARED_UNIT_SOURCE = """
platform P {
  initiator C0;
  initiator DMA { accelerator Mover semi_active; }
  transporter BUS;
  target M { service load, store; }
  link C0 -> BUS;
  link DMA -> BUS;
  link BUS -> M;
  application a { transaction copy: DMA -> BUS -> M uses store rate 10/s size 64 B; }
  application b { transaction copy: DMA -> BUS -> M uses load rate 10/s size 64 B; }
}
"""


@pytest.fixture
def bus_file(tmp_path):
    path = tmp_path / 'bus.pml'
    path.write_text(BUS_SOURCE, encoding='utf-8')
    return str(path)


@pytest.fixture
def rejected_file(tmp_path):
    path = tmp_path / 'rejected.pml'
    path.write_text(REJECTED_SOURCE, encoding='utf-8')
    return str(path)


class TestValidateCommand:
    """Test the validate command"""

    def test_valid_model(self, runner):
        """Test exit 0 and the model summary"""
        result = runner.invoke(cli, ['validate', model_path('keystone')])
        assert result.exit_code == EXIT_OK
        assert 'Keystone: 6 initiators' in result.output

    def test_parse_failure(self, runner, tmp_path):
        """Test exit 1 with a located diagnostic"""
        path = tmp_path / 'bad.pml'
        path.write_text('platform P {\n  initiator C0;\n  link C0 -> X;\n}\n', encoding='utf-8')
        result = runner.invoke(cli, ['validate', str(path)])
        assert result.exit_code == EXIT_USAGE
        assert 'E_UNKNOWN_COMPONENT' in result.output

    def test_unitary_violation(self, runner, tmp_path):
        """Test exit 2 for a model-level error"""
        path = tmp_path / 'shared.pml'
        path.write_text(SHARED_UNIT_SOURCE, encoding='utf-8')
        result = runner.invoke(cli, ['validate', str(path)])
        assert result.exit_code == EXIT_FINDINGS
        assert 'E_UNITARY_VIOLATION' in result.output

    def test_missing_file(self, runner, tmp_path):
        """Test that a usage error exits with 1"""
        result = runner.invoke(cli, ['validate', str(tmp_path / 'missing.pml')])
        assert result.exit_code == EXIT_USAGE


class TestAnalysisCommands:
    """Test paths, interfere, capacity and export-dot"""

    def test_paths(self, runner):
        """Test the printed routes"""
        result = runner.invoke(cli, ['paths', model_path('keystone'), '--from', 'DSP0', '--to', 'DDR'])
        assert result.exit_code == EXIT_OK
        assert 'DSP0 -> TeraNet -> MSMC -> DDR' in result.output

    def test_paths_wrong_role(self, runner):
        """Test exit 1 for an invalid query"""
        result = runner.invoke(cli, ['paths', model_path('keystone'), '--from', 'MSMC', '--to', 'DDR'])
        assert result.exit_code == EXIT_USAGE

    def test_interfere(self, runner, bus_file, tmp_path):
        """Test the scenario listing and its JSON output"""
        out = tmp_path / 'scenarios.json'
        result = runner.invoke(cli, ['interfere', bus_file, '--n', '2', '--json', str(out)])
        assert result.exit_code == EXIT_OK
        assert 'itf' in result.output
        data = json.loads(out.read_text(encoding='utf-8'))
        assert sorted(data['channels']) == ['BUS', 'DDR']

    def test_interfere_bad_n(self, runner, bus_file):
        """Test exit 1 for a scenario size below 2"""
        result = runner.invoke(cli, ['interfere', bus_file, '--n', '1'])
        assert result.exit_code == EXIT_USAGE

    def test_interfere_rejected_transaction(self, runner, rejected_file):
        """Test exit 2 and the diagnostic when a transaction fails the path checks"""
        result = runner.invoke(cli, ['interfere', rejected_file])
        assert result.exit_code == EXIT_FINDINGS
        assert 'E_ROLE' in result.output
        assert 'c.ok | b.ok' in result.output
        assert '1 scenario(s)' in result.output

    def test_interfere_scenario_limit(self, runner, bus_file):
        """Test exit 1 when the scenario count exceeds the limit"""
        with patch('services.interference_service.Config.MAX_SCENARIOS', 0):
            result = runner.invoke(cli, ['interfere', bus_file])
        assert result.exit_code == EXIT_USAGE

    def test_capacity_rejected_transaction(self, runner, rejected_file):
        """Test exit 2 without counting the rejected transaction"""
        result = runner.invoke(cli, ['capacity', rejected_file])
        assert result.exit_code == EXIT_FINDINGS
        assert 'E_ROLE' in result.output
        assert '64000' not in result.output

    def test_capacity_over(self, runner, bus_file):
        """Test exit 2 when a component is over capacity"""
        result = runner.invoke(cli, ['capacity', bus_file])
        assert result.exit_code == EXIT_FINDINGS
        assert 'over' in result.output

    def test_capacity_ok(self, runner):
        """Test exit 0 on a model within capacity"""
        result = runner.invoke(cli, ['capacity', model_path('keystone')])
        assert result.exit_code == EXIT_OK

    def test_export_dot(self, runner):
        """Test the DOT digraph on stdout"""
        result = runner.invoke(cli, ['export-dot', model_path('zynq')])
        assert result.exit_code == EXIT_OK
        assert result.output.startswith('digraph Zynq')


class TestTemplateCommand:
    """Test fragment generation"""

    def test_passive(self, runner):
        """Test a passive fragment"""
        result = runner.invoke(cli, ['template', '--case', 'passive', '--name', 'NVDLA', '--attach', 'AXI'])
        assert result.exit_code == EXIT_OK
        assert result.output.startswith('// itfkit fragment: NVDLA (passive, unitary)')
        assert 'link AXI -> NVDLA;' in result.output

    def test_active_parallel(self, runner):
        """Test the symmetry line of a symmetric parallel fragment"""
        result = runner.invoke(cli, [
            'template', '--case', 'active', '--parallel', '2', '--symmetric',
            '--name', 'Acc', '--attach', 'BUS', '--targets', 'DDR'
        ])
        assert result.exit_code == EXIT_OK
        assert 'symmetry Acc { Acc_0, Acc_1 }' in result.output

    def test_bad_spec(self, runner):
        """Test exit 1 for an invalid template"""
        result = runner.invoke(cli, [
            'template', '--case', 'tightly', '--parallel', '2', '--name', 'FPU', '--controller', 'Core0'
        ])
        assert result.exit_code == EXIT_USAGE

    def test_unknown_case(self, runner):
        """Test exit 1 for a case outside the choices"""
        result = runner.invoke(cli, ['template', '--case', 'loose', '--name', 'X'])
        assert result.exit_code == EXIT_USAGE


class TestReportCommand:
    """Test report output"""

    def test_json_file(self, runner, tmp_path):
        """Test that the report file is written"""
        out = tmp_path / 'keystone.json'
        result = runner.invoke(cli, ['report', model_path('keystone'), '--json', str(out)])
        assert result.exit_code == EXIT_OK
        data = json.loads(out.read_text(encoding='utf-8'))
        assert data['schema'] == Config.REPORT_SCHEMA
        assert data['platform']['name'] == 'Keystone'

    def test_stdout(self, runner):
        """Test the report on stdout"""
        result = runner.invoke(cli, ['report', model_path('nvdla_passive')])
        assert result.exit_code == EXIT_OK
        assert json.loads(result.output)['platform']['name'] == 'NVDLAPassive'

    def test_errors_exit_code(self, runner, bus_file):
        """Test exit 2 for a report with error findings"""
        result = runner.invoke(cli, ['report', bus_file])
        assert result.exit_code == EXIT_FINDINGS
