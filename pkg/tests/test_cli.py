import csv
import subprocess
import sys

import pytest

from pairaudit.analyzer import CSV_COLUMNS
from pairaudit.cli import main
from pairaudit.workloads import read_trace


@pytest.fixture
def sorted_trace(tmp_path):
    path = tmp_path / 'asc.txt'
    assert main(['generate', 'sorted', '4096', 'asc', '-o', str(path)]) == 0
    return path


def test_generate_kinds(tmp_path):
    for kind, params in [('sorted', ['8', 'desc']), ('random', ['10', '20', '1']),
                         ('dijkstra', ['10', '20', '1'])]:
        out = tmp_path / f'{kind}.txt'
        assert main(['generate', kind, *params, '-o', str(out)]) == 0
        assert read_trace(out)


def test_generate_bad_params(tmp_path, capsys):
    assert main(['generate', 'random', '10', '-o', str(tmp_path / 'x')]) == 2
    assert 'random takes' in capsys.readouterr().err


def test_validate_ascending_sort(sorted_trace, capsys):
    assert main(['validate', str(sorted_trace)]) == 0
    out = capsys.readouterr().out
    assert 'PASS pairing lemmas' in out and 'FAIL' not in out


def test_run_writes_csv(sorted_trace, tmp_path):
    out = tmp_path / 'ledger.csv'
    assert main(['run', str(sorted_trace), '--csv', str(out)]) == 0
    rows = list(csv.reader(out.open()))
    assert rows[0] == CSV_COLUMNS and len(rows) == 8192 + 1


def test_run_not_a_decrease(tmp_path, capsys):
    path = tmp_path / 'bad.txt'
    path.write_text('insert 1\ninsert 2\ninsert 3\ninsert 4\ninsert 5\ninsert 10\n'
                    'decreasekey 5 99\n')
    assert main(['run', str(path)]) == 2
    assert 'NotADecrease' in capsys.readouterr().err


def test_malformed_trace(tmp_path, capsys):
    path = tmp_path / 'bad.txt'
    path.write_text('insert 1\nfrobnicate\n')
    for cmd in ('run', 'validate', 'range', 'bench'):
        assert main([cmd, str(path)]) == 2
        assert 'line 2' in capsys.readouterr().err


def test_validate_rejects_invalid_sequence(tmp_path):
    path = tmp_path / 'bad.txt'
    path.write_text('deletemin\n')
    assert main(['validate', str(path)]) == 2


def test_missing_file():
    assert main(['run', '/nonexistent/trace.txt']) == 2


def test_unknown_flag_exits_2(sorted_trace):
    with pytest.raises(SystemExit) as e:
        main(['run', str(sorted_trace), '--bogus'])
    assert e.value.code == 2


def test_violation_exits_1(tmp_path, capsys):
    path = tmp_path / 'r.txt'
    main(['generate', 'random', '200', '800', '0', '-o', str(path)])
    assert main(['validate', str(path), '--c-dm', '-1000']) == 1
    assert 'delete-min amortized' in capsys.readouterr().err


def test_range_reports_classic_contrast(tmp_path, capsys):
    path = tmp_path / 'desc.txt'
    main(['generate', 'sorted', '1024', 'desc', '-o', str(path)])
    assert main(['range', str(path)]) == 0
    out = capsys.readouterr().out
    stats = dict(line.strip().split(' = ') for line in out.splitlines() if ' = ' in line)
    assert float(stats['max_total_per_n']) <= 1700
    assert float(stats['max_classic']) >= 512 * 9


def test_bench(sorted_trace, capsys):
    assert main(['bench', str(sorted_trace), '--repeat', '2']) == 0
    assert '2 runs' in capsys.readouterr().out


def test_bench_parallel(sorted_trace, capsys):
    assert main(['bench', str(sorted_trace), '--repeat', '2', '--jobs', '2']) == 0


def test_module_entry_point(sorted_trace):
    proc = subprocess.run([sys.executable, '-m', 'pairaudit', 'bench', str(sorted_trace),
                           '--repeat', '1'], capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr


def test_range_on_random_trace_with_decreases(tmp_path):
    path = tmp_path / 'r.txt'
    main(['generate', 'random', '300', '3000', '2', '-o', str(path)])
    assert main(['range', str(path), '--every', '100']) == 0
