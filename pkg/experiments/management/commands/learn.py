import json

from django.core.management.base import CommandError

from experiments.forms import LearnForm
from experiments.management.base import ExperimentCommand
from experiments.services import theoretical_budget, run_learn
from pauli.exceptions import QCubeError


class Command(ExperimentCommand):
    help = 'Seeded learning trials against exact oracles; CSV per trial plus a JSON summary.'
    form_class = LearnForm
    driver = staticmethod(run_learn)

    def add_arguments(self, parser) -> None:
        super().add_arguments(parser)
        parser.add_argument(
            '--paper-n',
            action='store_true',
            help='print the theoretical threshold and sample counts and exit without sampling',
        )

    def handle(self, *args, **options):
        if not options.get('paper_n'):
            return super().handle(*args, **options)
        try:
            params, _ = self.load_parameters(options)
            budget = theoretical_budget(params)
        except QCubeError as exc:
            raise CommandError(str(exc)) from exc
        self.stdout.write(json.dumps(budget, sort_keys=True, indent=2))
