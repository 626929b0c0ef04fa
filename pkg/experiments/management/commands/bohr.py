from experiments.forms import BohrForm
from experiments.management.base import ExperimentCommand
from experiments.services import run_bohr


class Command(ExperimentCommand):
    help = 'Boolean radius class searches, or the lifted radius inequality on random observables.'
    form_class = BohrForm
    driver = staticmethod(run_bohr)
