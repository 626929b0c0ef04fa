from __future__ import annotations

import logging
from pathlib import Path
from typing import Any, Callable

from django.core.management.base import BaseCommand, CommandError

from experiments.forms import ManifestForm, validate_manifest
from experiments.history import RunHistoryRepository
from experiments.manifest import canonical_text, read_manifest
from experiments.services import ExperimentResult
from experiments.writers import render_csv, render_json, summary_path, write_text
from pauli.exceptions import QCubeError


logger = logging.getLogger(__name__)


class ExperimentCommand(BaseCommand):
    """Shared flow: manifest -> validated parameters -> driver -> CSV/JSON -> run history."""

    form_class: type[ManifestForm]
    driver: Callable[[dict[str, Any], int], ExperimentResult]

    def add_arguments(self, parser) -> None:
        parser.add_argument('--manifest', help='key = value manifest file')
        parser.add_argument('--seed', type=int, help='overrides the manifest seed')
        parser.add_argument('--out', help='CSV output path (stdout when omitted)')
        parser.add_argument('--summary', help='JSON summary path (default: the CSV path with .json)')

    def load_parameters(self, options: dict[str, Any]) -> tuple[dict[str, Any], int]:
        entries = read_manifest(options['manifest']) if options.get('manifest') else {}
        if options.get('seed') is not None:
            entries['seed'] = str(options['seed'])
        params = validate_manifest(self.form_class, entries)
        return params, params['seed']

    def handle(self, *args: Any, **options: Any) -> None:
        try:
            params, seed = self.load_parameters(options)
            result = self.driver(params, seed)
        except QCubeError as exc:
            raise CommandError(str(exc)) from exc

        csv_text = render_csv(result.header, result.rows)
        out = options.get('out')
        if out:
            write_text(out, csv_text)
        else:
            self.stdout.write(csv_text, ending='')
        summary = options.get('summary') or (summary_path(out) if out else None)
        if summary:
            write_text(summary, render_json(result.summary))

        RunHistoryRepository().record_run(
            command=self.command_name(),
            seed=seed,
            manifest_text=canonical_text(params),
            output_path=str(Path(out).resolve()) if out else '',
            passed=result.passed,
            rows=len(result.rows),
        )
        if not result.passed:
            raise CommandError(f'{self.command_name()}: run assertions failed; see the summary')
        logger.info('%s finished: %d rows', self.command_name(), len(result.rows))

    def command_name(self) -> str:
        return self.__class__.__module__.rsplit('.', 1)[-1]
