"""Unit tests for the command-line interface."""

import contextlib
import io
import os
import tempfile
import unittest

from bootlin import cli
from bootlin.prng import RngStream
from bootlin.prng import standard_normal
from bootlin.representations import CoverageTable


def _run(*argv):
    """Run the interface and return its exit code and standard output."""
    stdout, stderr = io.StringIO(), io.StringIO()

    with contextlib.redirect_stdout(stdout), contextlib.redirect_stderr(stderr):
        code = cli.main(list(argv))

    return code, stdout.getvalue()


class TestCommandLine(unittest.TestCase):
    """Subcommands and exit codes."""

    def setUp(self):
        self.directory = tempfile.TemporaryDirectory()
        self.addCleanup(self.directory.cleanup)

    def _write(self, name, text):
        path = os.path.join(self.directory.name, name)
        with open(path, 'w') as f:
            f.write(text)

        return path

    def _normal_data(self, n=40):
        x = standard_normal(RngStream(0), n)
        return self._write('normal.txt', '\n'.join(f'{value:.17g}' for value in x) + '\n')

    def test_estimate(self):
        path = self._write('single.txt', '0\n')
        code, output = _run('estimate', '--data', path, '--bandwidth', 'fixed:1')

        self.assertEqual(code, cli.EXIT_OK)
        self.assertIn('psi_hat    = 0.5157898', output)
        self.assertIn('n          = 1', output)

    def test_empty(self):
        path = self._write('empty.txt', '')
        code, _ = _run('estimate', '--data', path)

        self.assertEqual(code, cli.EXIT_INVALID)

    def test_missing(self):
        code, _ = _run('estimate', '--data', os.path.join(self.directory.name, 'missing.txt'))
        self.assertEqual(code, cli.EXIT_INVALID)

    def test_degenerate(self):
        path = self._write('treated.csv', 'y,a,z\n1.0,1,0.1\n2.0,1,0.3\n0.5,1,-0.2\n')
        code, _ = _run('estimate', '--data', path, '--param', 'gcomp', '--construction', 'ee')

        self.assertEqual(code, cli.EXIT_DEGENERATE)

    def test_gcomp(self):
        rows = ['y,a,z'] + [
            f'{0.1 * i:.3f},{i % 2},{0.05 * i - 0.7:.3f}' for i in range(30)
        ]
        path = self._write('causal.csv', '\n'.join(rows) + '\n')
        code, output = _run('estimate', '--data', path, '--param', 'gcomp', '--construction', 'ee')

        self.assertEqual(code, cli.EXIT_OK)
        self.assertIn('nuisance   = linear/logistic', output)

    def test_wald(self):
        # Wald intervals ignore the number of replicates.
        path = self._normal_data()
        results = [
            _run('interval', '--data', path, '--method', 'wald', '-B', B)
            for B in ['0', '1', '999']
        ]

        for code, output in results:
            self.assertEqual(code, cli.EXIT_OK)
            self.assertEqual(output, results[0][1])

        code, _ = _run('interval', '--data', path, '--method', 'perc', '-B', '0')
        self.assertEqual(code, cli.EXIT_INVALID)

    def test_interval(self):
        path = self._normal_data()
        args = ['interval', '--data', path, '--bandwidth', 'silverman', '-B', '50', '--seed', '3']

        code, first = _run(*args)
        _, second = _run(*args, '--threads', '1')

        self.assertEqual(code, cli.EXIT_OK)
        self.assertEqual(first, second)
        self.assertIn('B          = 50 (0 invalid)', first)

    def test_smooth(self):
        path = self._normal_data()
        code, output = _run(
            'interval', '--data', path, '--bandwidth', 'fixed:0.4', '--scheme', 'smooth',
            '--method', 'efron', '-B', '20', '--threads', '1'
        )

        self.assertEqual(code, cli.EXIT_OK)
        self.assertIn('scheme     = smooth', output)

        code, _ = _run(
            'interval', '--data', path, '--kernel', 'gauss4', '--scheme', 'smooth', '-B', '20'
        )
        self.assertEqual(code, cli.EXIT_INVALID)

    def test_simulate(self):
        output = os.path.join(self.directory.name, 'coverage.csv')
        code, printed = _run(
            'simulate', '--set', 'n_grid=30', '--set', 'mc_reps=2', '--set', 'B=10',
            '--set', 'nuisances=fixed:0.4', '--set', 'methods=wald,perc',
            '--threads', '1', '--output', output
        )

        self.assertEqual(code, cli.EXIT_OK)
        self.assertEqual(printed.strip(), output)
        self.assertEqual(len(CoverageTable.read_csv(output)), 2)

    def test_simulate_invalid(self):
        code, _ = _run('simulate', '--set', 'mc_reps=0')
        self.assertEqual(code, cli.EXIT_INVALID)

    def test_diag_list(self):
        code, output = _run('diag', '--list')

        self.assertEqual(code, cli.EXIT_OK)
        self.assertGreaterEqual(len(output.strip().splitlines()), 6)

    def test_diag(self):
        code, output = _run('diag', '--check', 'plugin_bias_identity')

        self.assertEqual(code, cli.EXIT_OK)
        self.assertIn('plugin_bias_identity', output)
        self.assertIn('PASS', output)

    def test_diag_failure(self):
        code, output = _run(
            'diag', '--check', 'plugin_bias_identity', '--tolerance-scale', '-1'
        )

        self.assertEqual(code, cli.EXIT_CHECK_FAILED)
        self.assertIn('FAIL', output)

    def test_diag_unknown(self):
        code, _ = _run('diag', '--check', 'nonexistent')
        self.assertEqual(code, cli.EXIT_INVALID)
