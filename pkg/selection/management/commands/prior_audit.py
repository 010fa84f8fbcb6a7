import json

from design.exceptions import UsageError, ValidationFailure
from design.schema import read_schema
from modelspace.models import CLI_NAMES, ModelPriorScheme
from modelspace.priors import null_prior_table, prior_mass_audit
from posterior.tables import audit_table
from selection.management.base import SelectionCommand


class Command(SelectionCommand):
    help = 'Enumerate a model space and check the mass and marginals of a model prior.'

    def add_arguments(self, parser):
        parser.add_argument('--prior', choices=list(CLI_NAMES), default='hierarchical')
        parser.add_argument('--variables', type=int, default=0, help='number of candidate variables k')
        parser.add_argument('--levels', type=int, nargs='*', default=[], help='level count of each factor')
        parser.add_argument('--schema', help='take k and the level counts from a schema document')
        parser.add_argument('--format', choices=['json', 'text'], default='text')

    def run(self, **options):
        if options.get('schema'):
            schema = read_schema(options['schema'])
            k, levels = schema.k, schema.levels
        else:
            k, levels = options['variables'], tuple(options['levels'] or ())
        if k < 0 or any(size < 2 for size in levels):
            raise UsageError('need k >= 0 and at least 2 levels per factor')
        audit = prior_mass_audit(ModelPriorScheme(options['prior'], k, levels))
        null_priors = null_prior_table(k, levels)
        if options['format'] == 'json':
            document = dict(audit.as_dict(), null_prior_by_scheme=null_priors)
            rendered = json.dumps(document, indent=2) + '\n'
        else:
            lines = [audit_table(audit), 'P(M_0) by scheme:']
            lines += [f'  {kind}: {value:.6g}' for kind, value in null_priors.items()]
            rendered = '\n'.join(lines) + '\n'
        if not audit.passed:
            failed = ', '.join(name for name, ok in audit.checks.items() if not ok)
            raise ValidationFailure(f'prior audit failed: {failed}', summary=rendered)
        return rendered
