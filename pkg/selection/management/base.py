from django.core.management.base import BaseCommand, CommandError

from design.exceptions import SelectionError
from selection.pipeline import configure_verbosity


class SelectionCommand(BaseCommand):
    """Runs :meth:`run` and turns a SelectionError into one machine line plus an exit code."""

    def handle(self, *args, **options):
        configure_verbosity(options['verbosity'])
        try:
            output = self.run(**options)
        except SelectionError as exc:
            summary = exc.context.get('summary')
            if summary:
                self.stdout.write(summary, ending='')
            self.stderr.write(exc.machine_line())
            raise CommandError(str(exc), returncode=exc.exit_code) from exc
        if output:
            self.stdout.write(output, ending='')

    def run(self, **options):
        raise NotImplementedError
