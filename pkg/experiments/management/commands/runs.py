from django.core.management.base import BaseCommand

from experiments.history import RunHistoryRepository


class Command(BaseCommand):
    help = 'List recent experiment runs.'

    def add_arguments(self, parser) -> None:
        parser.add_argument('--command', dest='run_command', help='only runs of this command')
        parser.add_argument('--limit', type=int, default=10)

    def handle(self, *args, **options):
        runs = RunHistoryRepository().get_recent_runs(command=options.get('run_command'), limit=options['limit'])
        for run in runs:
            status = 'pass' if run['passed'] else 'FAIL'
            self.stdout.write(
                f"{run['created_at']:%Y-%m-%d %H:%M:%S}  {run['command']:<12} seed={run['seed']:<6} "
                f"{status}  rows={run['rows']}  {run['output_path']}"
            )
