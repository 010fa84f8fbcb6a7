from selection.forms import DELIMITER_CHOICES, FORMAT_CHOICES, HYPER_CHOICES, PRIOR_CHOICES, RunConfigForm
from selection.management.base import SelectionCommand
from selection.pipeline import run_select


def _choices(pairs):
    return [value for value, _ in pairs]


class Command(SelectionCommand):
    help = 'Enumerate every model of a dataset and report posterior model and inclusion probabilities.'

    def add_arguments(self, parser):
        parser.add_argument('--data', required=True, help='delimited data file with a header row')
        parser.add_argument('--schema', required=True, help='schema document naming the role of each column')
        parser.add_argument('--prior', choices=_choices(PRIOR_CHOICES), default='hierarchical')
        parser.add_argument('--hyper', choices=_choices(HYPER_CHOICES), default='robust')
        parser.add_argument('--out', help='write the report here instead of stdout')
        parser.add_argument('--format', choices=_choices(FORMAT_CHOICES), default='json')
        parser.add_argument('--top-n', type=int, dest='top_n')
        parser.add_argument('--baseline-demo', dest='baseline_demo', metavar='FACTOR',
                            help='also report P(A|y) under every corner coding of FACTOR')
        parser.add_argument('--prior-audit', action='store_true', dest='prior_audit',
                            help='append an exhaustive audit of the model prior')
        parser.add_argument('--delimiter', choices=_choices(DELIMITER_CHOICES), default='comma')
        parser.add_argument('--jobs', type=int, help='worker threads for the enumeration (-1: all cores)')

    def run(self, **options):
        form = RunConfigForm({
            field: options.get(field)
            for field in ('data', 'schema', 'prior', 'hyper', 'out', 'format', 'top_n', 'baseline_demo',
                          'prior_audit', 'delimiter', 'jobs')
        })
        config = form.run_config()
        rendered = run_select(config)
        if config.out:
            return None
        return rendered
