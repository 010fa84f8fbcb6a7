from selection.management.base import SelectionCommand
from selection.pipeline import run_validate
from validation.suites import SUITES


class Command(SelectionCommand):
    help = 'Run the numerical validation suites; exits 5 if any check fails.'

    def add_arguments(self, parser):
        parser.add_argument('--suite', action='append', choices=list(SUITES), dest='suites',
                            help='run only this suite (repeatable)')
        parser.add_argument('--seed', type=int, help='seed for the generated instances')

    def run(self, **options):
        return run_validate(options.get('suites'), options.get('seed'))
