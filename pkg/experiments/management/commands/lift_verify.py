from experiments.forms import LiftVerifyForm
from experiments.management.base import ExperimentCommand
from experiments.services import run_lift_verify


class Command(ExperimentCommand):
    help = 'Check tr[A rho(eps)] = f_A(eps) over exhaustive or sampled sign vectors.'
    form_class = LiftVerifyForm
    driver = staticmethod(run_lift_verify)
