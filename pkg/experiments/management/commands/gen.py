from django.core.management.base import CommandError

from experiments.forms import GenForm
from experiments.management.base import ExperimentCommand
from experiments.services import generate_observable
from experiments.writers import write_text
from pauli.exceptions import QCubeError


class Command(ExperimentCommand):
    help = 'Emit a random Pauli polynomial in the observable text format.'
    form_class = GenForm

    def handle(self, *args, **options):
        try:
            params, seed = self.load_parameters(options)
            text = generate_observable(params, seed)
        except QCubeError as exc:
            raise CommandError(str(exc)) from exc
        if options.get('out'):
            write_text(options['out'], text)
        else:
            self.stdout.write(text, ending='')
