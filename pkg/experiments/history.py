from __future__ import annotations

import logging
from typing import List

from django.db import DatabaseError
from django.utils import timezone

from pauli.conf import get_setting
from pauli.utils import digest

from .models import ExperimentRun


logger = logging.getLogger(__name__)


class RunHistoryRepository:
    """Repository for experiment runs stored in the relational database."""

    def record_run(
        self,
        command: str,
        seed: int,
        manifest_text: str,
        output_path: str | None,
        passed: bool,
        rows: int,
    ) -> ExperimentRun | None:
        if not get_setting('QCUBE_RECORD_RUNS'):
            return None
        try:
            return ExperimentRun.objects.create(
                command=command,
                seed=seed,
                manifest_digest=digest(manifest_text),
                output_path=output_path or '',
                passed=passed,
                rows=rows,
                created_at=timezone.now(),
            )
        except DatabaseError as exc:
            logger.warning('Run history unavailable, %s run not recorded: %s', command, exc)
            return None

    def get_recent_runs(self, command: str | None = None, limit: int = 10) -> List[dict]:
        qs = ExperimentRun.objects.all()
        if command:
            qs = qs.filter(command=command)
        return [
            {
                'command': run.command,
                'seed': run.seed,
                'manifest_digest': run.manifest_digest,
                'output_path': run.output_path,
                'passed': run.passed,
                'rows': run.rows,
                'created_at': run.created_at,
            }
            for run in qs[:limit]
        ]
