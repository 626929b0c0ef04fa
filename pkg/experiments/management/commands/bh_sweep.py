from experiments.forms import BhSweepForm
from experiments.management.base import ExperimentCommand
from experiments.services import run_bh_sweep


class Command(ExperimentCommand):
    help = 'BH ratios of random instances over an (n, d) grid; fails if a ratio exceeds its bound.'
    form_class = BhSweepForm
    driver = staticmethod(run_bh_sweep)
